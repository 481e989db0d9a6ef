//! Dynkin diagram foldings: quotients of simply-laced diagrams by groups of
//! label-preserving node permutations.
//!
//! A folding carries the quotient diagram Xi, the node-orbit map, and a
//! rational basis of the fixed subspace. Folded coordinates of a root orbit
//! are computed in one of two integral realizations: `Projection`
//! (coordinates sum over each node orbit; pair orbits become short roots)
//! or `OrbitSum` (roots of an orbit are summed first; pair orbits become
//! long roots). Construction searches both realizations and all node
//! assignments until the folded positive roots coincide exactly with the
//! generated positive roots of the classified quotient type and the induced
//! inner product is proportional to its standard one, so every folding that
//! comes back has been verified root-by-root.

use crate::artin::{words_equal, ArtinWord};
use crate::diagram::{DynkinDiagram, TypeTag};
use crate::linalg::{proportionality, rat, rat_str, Rat};
use crate::roots::{Root, RootSystem};
use crate::weyl::WeylElement;
use num::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoldError {
    #[error("folding requires a simply-laced diagram, got {0}")]
    NotSimplyLaced(String),
    #[error("bad permutation: {0}")]
    BadPermutation(String),
    #[error("permutation {0} does not preserve edge labels")]
    NotLabelPreserving(String),
    #[error("automorphism list is not closed under composition")]
    NotClosed,
    #[error("folding requires a non-trivial automorphism subgroup")]
    TrivialSubgroup,
    #[error("excluded case: {0}")]
    ExcludedCase(String),
    #[error("cycle notation unreadable: {0}")]
    BadCycles(String),
    #[error("folding descriptor unreadable: {0}")]
    BadDescriptor(String),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
}

/// A label-preserving permutation of diagram nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        DiagramAutomorphism {
            perm: (0..rank).collect(),
        }
    }

    pub fn new(perm: Vec<usize>) -> Result<Self, FoldError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(FoldError::BadPermutation(format!("{perm:?}")));
            }
            seen[p] = true;
        }
        Ok(DiagramAutomorphism { perm })
    }

    /// Parses 1-based cycle notation: "(1 3)", "(1 3)(2 4)", "(1 3 4)".
    /// "id" and "()" denote the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Self, FoldError> {
        let t = text.trim();
        let bad = |msg: &str| FoldError::BadCycles(format!("{text:?}: {msg}"));
        if t.is_empty() || t == "id" || t == "()" {
            return Ok(Self::identity(rank));
        }
        let mut perm: Vec<usize> = (0..rank).collect();
        let mut moved = vec![false; rank];
        let mut rest = t;
        while !rest.is_empty() {
            let Some(inner_start) = rest.strip_prefix('(') else {
                return Err(bad("expected '('"));
            };
            let Some(close) = inner_start.find(')') else {
                return Err(bad("unbalanced parenthesis"));
            };
            let cycle: Vec<usize> = inner_start[..close]
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("not a number")))
                .collect::<Result<_, _>>()?;
            for &v in &cycle {
                if v == 0 || v > rank {
                    return Err(bad("node out of range"));
                }
                if moved[v - 1] {
                    return Err(bad("node repeated"));
                }
                moved[v - 1] = true;
            }
            for (k, &v) in cycle.iter().enumerate() {
                perm[v - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
            rest = inner_start[close + 1..].trim_start();
        }
        Ok(DiagramAutomorphism { perm })
    }

    /// Formats as 1-based disjoint cycles, "id" for the identity.
    pub fn cycles(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.perm.len()];
        for i in 0..self.perm.len() {
            if seen[i] || self.perm[i] == i {
                seen[i] = true;
                continue;
            }
            let mut cycle = vec![i];
            seen[i] = true;
            let mut j = self.perm[i];
            while j != i {
                seen[j] = true;
                cycle.push(j);
                j = self.perm[j];
            }
            out.push('(');
            out.push_str(
                &cycle
                    .iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("id");
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn apply_node(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// self after other: (self.compose(other))(i) = self(other(i)).
    pub fn compose(&self, other: &DiagramAutomorphism) -> DiagramAutomorphism {
        assert_eq!(self.rank(), other.rank());
        DiagramAutomorphism {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Pushes root coordinates forward along the node permutation.
    pub fn apply_root(&self, r: &Root) -> Root {
        let mut coords = vec![0i64; self.perm.len()];
        for (j, &c) in r.coords().iter().enumerate() {
            coords[self.perm[j]] = c;
        }
        Root::new(coords).expect("permuting coordinates preserves the sign")
    }

    pub fn is_label_preserving(&self, d: &DynkinDiagram) -> bool {
        if self.rank() != d.rank() {
            return false;
        }
        (0..d.rank()).all(|i| {
            (0..d.rank()).all(|j| d.label(self.perm[i], self.perm[j]) == d.label(i, j))
        })
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for slot in 0..m {
            let mut p = rest.clone();
            p.insert(slot, m - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// All label-preserving node permutations of the diagram, identity first.
pub fn automorphism_group(d: &DynkinDiagram) -> Vec<DiagramAutomorphism> {
    permutations(d.rank())
        .into_iter()
        .map(|perm| DiagramAutomorphism { perm })
        .filter(|a| a.is_label_preserving(d))
        .collect()
}

/// Validates the generators against the diagram and closes them under
/// composition (sorted, identity first).
pub fn closure(
    d: &DynkinDiagram,
    gens: &[DiagramAutomorphism],
) -> Result<Vec<DiagramAutomorphism>, FoldError> {
    for g in gens {
        if g.rank() != d.rank() {
            return Err(FoldError::BadPermutation(format!(
                "rank {} permutation on a rank {} diagram",
                g.rank(),
                d.rank()
            )));
        }
        if !g.is_label_preserving(d) {
            return Err(FoldError::NotLabelPreserving(g.cycles()));
        }
    }
    let mut group: BTreeSet<DiagramAutomorphism> = BTreeSet::new();
    group.insert(DiagramAutomorphism::identity(d.rank()));
    group.extend(gens.iter().cloned());
    loop {
        let mut fresh = Vec::new();
        for a in &group {
            for b in &group {
                let c = a.compose(b);
                if !group.contains(&c) {
                    fresh.push(c);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        group.extend(fresh);
    }
    Ok(group.into_iter().collect())
}

/// Which of the two integral realizations produced the folded coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    /// Coordinates of one orbit representative, summed over each node orbit.
    Projection,
    /// The roots of an orbit are summed; coordinates read off node-orbit-wise.
    OrbitSum,
}

impl Realization {
    pub fn as_str(self) -> &'static str {
        match self {
            Realization::Projection => "projection",
            Realization::OrbitSum => "orbit-sum",
        }
    }
}

/// A quotient of a simply-laced diagram by a group of automorphisms,
/// together with the verified root-orbit bijection.
#[derive(Debug, Clone)]
pub struct Folding {
    delta_system: RootSystem,
    auto_group: Vec<DiagramAutomorphism>,
    xi_system: RootSystem,
    /// Delta-node orbits, indexed by xi node.
    node_orbits: Vec<Vec<usize>>,
    /// Realization basis of the fixed subspace, indexed by xi node.
    invariant_basis: Vec<Vec<Rat>>,
    realization: Realization,
    /// Delta positive-root orbits, aligned with xi positive-root order.
    aligned_orbits: Vec<Vec<Root>>,
}

/// Folds a simply-laced diagram along a closed, non-trivial subgroup of
/// label-preserving permutations.
pub fn fold(delta: &DynkinDiagram, subgroup: &[DiagramAutomorphism]) -> Result<Folding, FoldError> {
    if !delta.is_simply_laced() {
        return Err(FoldError::NotSimplyLaced(delta.tag().to_string()));
    }
    let mut group: Vec<DiagramAutomorphism> = Vec::new();
    for a in subgroup {
        if a.rank() != delta.rank() {
            return Err(FoldError::BadPermutation(format!(
                "rank {} permutation on a rank {} diagram",
                a.rank(),
                delta.rank()
            )));
        }
        if !a.is_label_preserving(delta) {
            return Err(FoldError::NotLabelPreserving(a.cycles()));
        }
        if !group.contains(a) {
            group.push(a.clone());
        }
    }
    group.sort();
    for a in &group {
        for b in &group {
            if !group.contains(&a.compose(b)) {
                return Err(FoldError::NotClosed);
            }
        }
    }
    if group.len() < 2 {
        return Err(FoldError::TrivialSubgroup);
    }
    if let TypeTag::A(n) = delta.tag() {
        if n % 2 == 0 {
            return Err(FoldError::ExcludedCase(format!(
                "A{n} with the order-2 group folds onto a marked diagram, which is not a quotient type"
            )));
        }
    }
    Folding::build(delta.clone(), group)
}

impl Folding {
    /// The identity folding: Xi = Delta, singleton orbits.
    pub fn trivial(delta: DynkinDiagram) -> Result<Self, FoldError> {
        if !delta.is_simply_laced() {
            return Err(FoldError::NotSimplyLaced(delta.tag().to_string()));
        }
        let n = delta.rank();
        let delta_system = RootSystem::new(delta);
        let xi_system = delta_system.clone();
        let aligned_orbits = xi_system
            .positive_roots()
            .iter()
            .map(|r| vec![r.clone()])
            .collect();
        Ok(Folding {
            auto_group: vec![DiagramAutomorphism::identity(n)],
            node_orbits: (0..n).map(|i| vec![i]).collect(),
            invariant_basis: (0..n)
                .map(|i| (0..n).map(|j| rat((i == j) as i64, 1)).collect())
                .collect(),
            realization: Realization::Projection,
            delta_system,
            xi_system,
            aligned_orbits,
        })
    }

    fn build(delta: DynkinDiagram, group: Vec<DiagramAutomorphism>) -> Result<Self, FoldError> {
        let n = delta.rank();
        let orbits = node_orbit_partition(n, &group);
        for orbit in &orbits {
            for (a, &i) in orbit.iter().enumerate() {
                for &j in &orbit[a + 1..] {
                    if delta.label(i, j) != 2 {
                        return Err(FoldError::ExcludedCase(format!(
                            "orbit joins adjacent nodes {} and {}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        let xi_tag = classify(&delta, &orbits);
        let xi = DynkinDiagram::new(xi_tag)?;
        let m = xi.rank();
        assert_eq!(m, orbits.len(), "orbit count must equal the quotient rank");
        let delta_system = RootSystem::new(delta);
        let xi_system = RootSystem::new(xi);
        let rho: Vec<WeylElement> = orbits
            .iter()
            .map(|o| WeylElement::from_word(&delta_system, o))
            .collect();
        let root_orbits = root_orbit_partition(&delta_system, &group);
        let xi_index: BTreeMap<Vec<i64>, usize> = xi_system
            .positive_roots()
            .iter()
            .enumerate()
            .map(|(k, r)| (r.coords().to_vec(), k))
            .collect();

        for realization in [Realization::Projection, Realization::OrbitSum] {
            'sigma: for sigma in permutations(m) {
                for k in 0..m {
                    for l in k + 1..m {
                        let prod = rho[sigma[k]].mul(&rho[sigma[l]]);
                        if prod.order() != xi_system.diagram().label(k, l) as usize {
                            continue 'sigma;
                        }
                    }
                }
                let basis: Vec<Vec<Rat>> = (0..m)
                    .map(|k| basis_vector(realization, &orbits[sigma[k]], n))
                    .collect();
                let induced = crate::linalg::QMat::from_rows(
                    (0..m)
                        .map(|k| {
                            (0..m)
                                .map(|l| delta_system.pair(&basis[k], &basis[l]))
                                .collect()
                        })
                        .collect(),
                );
                let Some(scale) = proportionality(xi_system.gram(), &induced) else {
                    continue 'sigma;
                };
                if scale <= Rat::zero() {
                    continue 'sigma;
                }
                let mut assignment: BTreeMap<usize, usize> = BTreeMap::new();
                for (oi, orbit) in root_orbits.iter().enumerate() {
                    let coords = folded_coords(realization, &orbits, &sigma, orbit);
                    let Some(&k) = xi_index.get(&coords) else {
                        continue 'sigma;
                    };
                    if assignment.insert(k, oi).is_some() {
                        continue 'sigma;
                    }
                }
                if assignment.len() != xi_system.positive_roots().len() {
                    continue 'sigma;
                }
                let aligned_orbits: Vec<Vec<Root>> = (0..assignment.len())
                    .map(|k| root_orbits[assignment[&k]].clone())
                    .collect();
                return Ok(Folding {
                    delta_system,
                    auto_group: group,
                    xi_system,
                    node_orbits: sigma.iter().map(|&s| orbits[s].clone()).collect(),
                    invariant_basis: basis,
                    realization,
                    aligned_orbits,
                });
            }
        }
        Err(FoldError::ExcludedCase(
            "no realization matches the quotient root system".to_string(),
        ))
    }

    /// Parses a folding descriptor: "trivial:A2", "A3/(1 3)", or
    /// "D4/(1 3);(1 3 4)" (';' separates generators).
    pub fn parse_desc(desc: &str) -> Result<Self, FoldError> {
        let t = desc.trim();
        if let Some(ty) = t.strip_prefix("trivial:") {
            return Folding::trivial(DynkinDiagram::parse_str(ty)?);
        }
        let Some((ty, cycles)) = t.split_once('/') else {
            return Err(FoldError::BadDescriptor(format!(
                "{t:?}: expected trivial:TYPE or TYPE/CYCLES"
            )));
        };
        let delta = DynkinDiagram::parse_str(ty)?;
        let gens = cycles
            .split(';')
            .map(|c| DiagramAutomorphism::parse(c, delta.rank()))
            .collect::<Result<Vec<_>, _>>()?;
        fold(&delta, &closure(&delta, &gens)?)
    }

    /// Canonical descriptor string; `parse_desc` on the result rebuilds an
    /// equivalent folding.
    pub fn descriptor(&self) -> String {
        if self.is_trivial() {
            return format!("trivial:{}", self.delta().tag());
        }
        let gens: Vec<String> = self
            .auto_group
            .iter()
            .filter(|a| !a.is_identity())
            .map(|a| a.cycles())
            .collect();
        format!("{}/{}", self.delta().tag(), gens.join(";"))
    }

    pub fn delta_system(&self) -> &RootSystem {
        &self.delta_system
    }

    pub fn xi_system(&self) -> &RootSystem {
        &self.xi_system
    }

    pub fn delta(&self) -> &DynkinDiagram {
        self.delta_system.diagram()
    }

    pub fn xi(&self) -> &DynkinDiagram {
        self.xi_system.diagram()
    }

    pub fn auto_group(&self) -> &[DiagramAutomorphism] {
        &self.auto_group
    }

    pub fn is_trivial(&self) -> bool {
        self.auto_group.len() == 1
    }

    pub fn group_order(&self) -> usize {
        self.auto_group.len()
    }

    /// Order of the group when it is cyclic and non-trivial.
    pub fn cyclic_order(&self) -> Option<usize> {
        let k = self.auto_group.len();
        if k < 2 {
            return None;
        }
        self.cyclic_generator().map(|_| k)
    }

    pub fn cyclic_generator(&self) -> Option<&DiagramAutomorphism> {
        let k = self.auto_group.len();
        self.auto_group.iter().find(|a| a.order() == k)
    }

    pub fn node_orbits(&self) -> &[Vec<usize>] {
        &self.node_orbits
    }

    /// The xi node whose orbit contains the delta node.
    pub fn xi_node_of(&self, delta_node: usize) -> usize {
        self.node_orbits
            .iter()
            .position(|o| o.contains(&delta_node))
            .expect("orbits partition the nodes")
    }

    pub fn invariant_basis(&self) -> &[Vec<Rat>] {
        &self.invariant_basis
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// The Weyl-group element rho_k: the product of the commuting simple
    /// reflections over the orbit of xi node k, as a matrix on the delta
    /// coordinates.
    pub fn folded_reflection(&self, xi_node: usize) -> WeylElement {
        WeylElement::from_word(&self.delta_system, &self.node_orbits[xi_node])
    }

    /// The Artin word R_{k_1} ... R_{k_r} over the orbit of xi node k, in
    /// ascending node order (the letters commute pairwise).
    pub fn folded_generator(&self, xi_node: usize) -> ArtinWord {
        ArtinWord::from_indices(self.delta_system.rank(), &self.node_orbits[xi_node])
    }

    /// Positive roots of xi paired with the delta positive-root orbits they
    /// fold from, in xi root order.
    pub fn xi_positive_roots(&self) -> Vec<(Root, Vec<Root>)> {
        self.xi_system
            .positive_roots()
            .iter()
            .cloned()
            .zip(self.aligned_orbits.iter().cloned())
            .collect()
    }

    /// The delta orbit folding onto the idx-th positive root of xi.
    pub fn delta_orbit(&self, idx: usize) -> &[Root] {
        &self.aligned_orbits[idx]
    }

    /// Delta positive roots literally fixed by every group element (a
    /// strictly smaller set than the folded system whenever orbits are
    /// non-trivial: only the long-class roots survive the literal reading).
    pub fn invariant_positive_roots(&self) -> Vec<Root> {
        self.delta_system
            .positive_roots()
            .iter()
            .filter(|r| self.auto_group.iter().all(|a| a.apply_root(r) == **r))
            .cloned()
            .collect()
    }

    /// Checks every xi braid relation on the folded generators inside the
    /// Artin group of delta, via normal forms.
    pub fn verify_folded_braid(&self) -> FoldedBraidReport {
        let m = self.xi_system.rank();
        let mut pairs = Vec::new();
        for k in 0..m {
            for l in k + 1..m {
                let label = self.xi().label(k, l);
                let gk = self.folded_generator(k);
                let gl = self.folded_generator(l);
                let mut lhs = ArtinWord::from_indices(self.delta_system.rank(), &[]);
                let mut rhs = ArtinWord::from_indices(self.delta_system.rank(), &[]);
                for t in 0..label {
                    lhs = lhs.concat(if t % 2 == 0 { &gk } else { &gl });
                    rhs = rhs.concat(if t % 2 == 0 { &gl } else { &gk });
                }
                let ok = words_equal(&self.delta_system, &lhs, &rhs)
                    .expect("words share the delta diagram");
                pairs.push(FoldedBraidCheck {
                    node_a: k,
                    node_b: l,
                    label,
                    ok,
                });
            }
        }
        FoldedBraidReport { pairs }
    }

    pub fn json(&self) -> Value {
        json!({
            "delta": self.delta().tag().to_string(),
            "xi": self.xi().tag().to_string(),
            "generators": self
                .auto_group
                .iter()
                .filter(|a| !a.is_identity())
                .map(|a| json!(a.cycles()))
                .collect::<Vec<Value>>(),
            "orbits": self
                .node_orbits
                .iter()
                .map(|o| json!(o.iter().map(|&i| i + 1).collect::<Vec<usize>>()))
                .collect::<Vec<Value>>(),
            "realization": self.realization.as_str(),
            "invariant_basis": self
                .invariant_basis
                .iter()
                .map(|v| json!(v.iter().map(rat_str).collect::<Vec<String>>()))
                .collect::<Vec<Value>>(),
        })
    }

    /// Reconstructs a folding from its `json()` descriptor. The stated xi
    /// type must agree with the recomputed one.
    pub fn from_json(v: &Value) -> Result<Self, FoldError> {
        let obj = v
            .as_object()
            .ok_or_else(|| FoldError::BadDescriptor("not an object".to_string()))?;
        let delta_str = obj
            .get("delta")
            .and_then(Value::as_str)
            .ok_or_else(|| FoldError::BadDescriptor("missing delta".to_string()))?;
        let delta = DynkinDiagram::parse_str(delta_str)?;
        let gens: Vec<DiagramAutomorphism> = obj
            .get("generators")
            .and_then(Value::as_array)
            .map(|a| {
                a.iter()
                    .map(|g| {
                        g.as_str()
                            .ok_or_else(|| {
                                FoldError::BadDescriptor("generator not a string".to_string())
                            })
                            .and_then(|s| DiagramAutomorphism::parse(s, delta.rank()))
                    })
                    .collect::<Result<_, _>>()
            })
            .transpose()?
            .unwrap_or_default();
        let folding = if gens.iter().all(|g| g.is_identity()) {
            Folding::trivial(delta)?
        } else {
            fold(&delta, &closure(&delta, &gens)?)?
        };
        if let Some(stated) = obj.get("xi").and_then(Value::as_str) {
            let stated_tag = TypeTag::parse_str(stated)?;
            if stated_tag != folding.xi().tag() {
                return Err(FoldError::BadDescriptor(format!(
                    "stated quotient {} but folding yields {}",
                    stated_tag,
                    folding.xi().tag()
                )));
            }
        }
        Ok(folding)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedBraidCheck {
    pub node_a: usize,
    pub node_b: usize,
    pub label: u8,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedBraidReport {
    pub pairs: Vec<FoldedBraidCheck>,
}

impl FoldedBraidReport {
    pub fn all_ok(&self) -> bool {
        self.pairs.iter().all(|p| p.ok)
    }

    pub fn json(&self) -> Value {
        json!({
            "ok": self.all_ok(),
            "pairs": self
                .pairs
                .iter()
                .map(|p| json!({
                    "nodes": [p.node_a + 1, p.node_b + 1],
                    "label": p.label,
                    "ok": p.ok,
                }))
                .collect::<Vec<Value>>(),
        })
    }
}

fn node_orbit_partition(n: usize, group: &[DiagramAutomorphism]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        for a in group {
            orbit.insert(a.apply_node(start));
        }
        for &i in &orbit {
            seen[i] = true;
        }
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

fn root_orbit_partition(sys: &RootSystem, group: &[DiagramAutomorphism]) -> Vec<Vec<Root>> {
    let mut seen: BTreeSet<Root> = BTreeSet::new();
    let mut orbits = Vec::new();
    for r in sys.positive_roots() {
        if seen.contains(r) {
            continue;
        }
        let orbit: BTreeSet<Root> = group.iter().map(|a| a.apply_root(r)).collect();
        debug_assert!(orbit.iter().all(|v| sys.positive_index(v).is_some()));
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

fn classify(delta: &DynkinDiagram, orbits: &[Vec<usize>]) -> TypeTag {
    match delta.tag() {
        TypeTag::A1xA1 => TypeTag::A(1),
        TypeTag::A(_) => TypeTag::C(orbits.len()),
        TypeTag::E(6) => TypeTag::F4,
        TypeTag::D(4) => {
            let outer: Vec<usize> = (0..4).filter(|&i| delta.neighbors(i).len() == 1).collect();
            let transitive = orbits
                .iter()
                .any(|o| outer.iter().all(|v| o.contains(v)));
            if transitive {
                TypeTag::G2
            } else {
                TypeTag::C(3)
            }
        }
        TypeTag::D(n) => TypeTag::B(n - 1),
        other => unreachable!("{other} admits no non-trivial folding"),
    }
}

fn basis_vector(realization: Realization, orbit: &[usize], n: usize) -> Vec<Rat> {
    let weight = match realization {
        Realization::Projection => rat(1, orbit.len() as i64),
        Realization::OrbitSum => rat(1, 1),
    };
    let mut v = vec![Rat::zero(); n];
    for &j in orbit {
        v[j] = weight;
    }
    v
}

fn folded_coords(
    realization: Realization,
    orbits: &[Vec<usize>],
    sigma: &[usize],
    root_orbit: &[Root],
) -> Vec<i64> {
    match realization {
        Realization::Projection => {
            let rep = &root_orbit[0];
            sigma
                .iter()
                .map(|&s| orbits[s].iter().map(|&j| rep.coords()[j]).sum())
                .collect()
        }
        Realization::OrbitSum => {
            let n = root_orbit[0].coords().len();
            let mut total = vec![0i64; n];
            for r in root_orbit {
                for (j, &c) in r.coords().iter().enumerate() {
                    total[j] += c;
                }
            }
            sigma
                .iter()
                .map(|&s| {
                    let v = total[orbits[s][0]];
                    debug_assert!(orbits[s].iter().all(|&j| total[j] == v));
                    v
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMat;

    fn diagram(s: &str) -> DynkinDiagram {
        DynkinDiagram::parse_str(s).unwrap()
    }

    fn fold_by(delta: &str, cycles: &[&str]) -> Folding {
        let d = diagram(delta);
        let gens: Vec<DiagramAutomorphism> = cycles
            .iter()
            .map(|c| DiagramAutomorphism::parse(c, d.rank()).unwrap())
            .collect();
        fold(&d, &closure(&d, &gens).unwrap()).unwrap()
    }

    #[test]
    fn cycle_notation_round_trips() {
        for (text, rank) in [("(1 3)", 3), ("(1 3)(2 4)", 4), ("(1 3 4)", 4), ("id", 5)] {
            let a = DiagramAutomorphism::parse(text, rank).unwrap();
            assert_eq!(a.cycles(), text);
            let back = DiagramAutomorphism::parse(&a.cycles(), rank).unwrap();
            assert_eq!(a, back);
        }
        assert!(DiagramAutomorphism::parse("(1 9)", 3).is_err());
        assert!(DiagramAutomorphism::parse("(1 2)(2 3)", 3).is_err());
        assert!(DiagramAutomorphism::parse("(1 2", 3).is_err());
        assert!(DiagramAutomorphism::parse("(0 1)", 3).is_err());
    }

    #[test]
    fn automorphism_group_sizes() {
        for (ty, size) in [
            ("A1", 1),
            ("A3", 2),
            ("A4", 2),
            ("D4", 6),
            ("D5", 2),
            ("E6", 2),
            ("E7", 1),
            ("A1xA1", 2),
            ("B3", 1),
            ("G2", 2),
        ] {
            let g = automorphism_group(&diagram(ty));
            assert_eq!(g.len(), size, "{ty}");
            assert!(g[0].is_identity());
        }
    }

    #[test]
    fn fold_rejects_bad_subgroups() {
        let a3 = diagram("A3");
        let swap = DiagramAutomorphism::parse("(1 3)", 3).unwrap();
        let id = DiagramAutomorphism::identity(3);
        assert!(matches!(
            fold(&a3, &[swap.clone()]),
            Err(FoldError::NotClosed)
        ));
        assert!(matches!(
            fold(&a3, &[id.clone()]),
            Err(FoldError::TrivialSubgroup)
        ));
        let not_auto = DiagramAutomorphism::parse("(1 2)", 3).unwrap();
        assert!(matches!(
            fold(&a3, &[id, not_auto]),
            Err(FoldError::NotLabelPreserving(_))
        ));
        let b3 = diagram("B3");
        assert!(matches!(
            fold(&b3, &automorphism_group(&b3)),
            Err(FoldError::NotSimplyLaced(_))
        ));
    }

    #[test]
    fn even_a_chain_is_excluded() {
        for n in [2usize, 4, 6] {
            let d = DynkinDiagram::parse("A", n).unwrap();
            let g = automorphism_group(&d);
            assert_eq!(g.len(), 2, "A{n}");
            assert!(matches!(fold(&d, &g), Err(FoldError::ExcludedCase(_))));
        }
    }

    #[test]
    fn classification_table() {
        let cases: [(&str, &[&str], TypeTag, Realization); 10] = [
            ("A3", &["(1 3)"], TypeTag::C(2), Realization::Projection),
            ("A5", &["(1 5)(2 4)"], TypeTag::C(3), Realization::Projection),
            (
                "A7",
                &["(1 7)(2 6)(3 5)"],
                TypeTag::C(4),
                Realization::Projection,
            ),
            ("D4", &["(3 4)"], TypeTag::C(3), Realization::OrbitSum),
            ("D5", &["(4 5)"], TypeTag::B(4), Realization::Projection),
            ("D6", &["(5 6)"], TypeTag::B(5), Realization::Projection),
            (
                "E6",
                &["(1 5)(2 4)"],
                TypeTag::F4,
                Realization::Projection,
            ),
            ("D4", &["(1 3 4)"], TypeTag::G2, Realization::Projection),
            (
                "D4",
                &["(1 3)", "(1 3 4)"],
                TypeTag::G2,
                Realization::Projection,
            ),
            ("A1xA1", &["(1 2)"], TypeTag::A(1), Realization::Projection),
        ];
        for (delta, gens, xi, realization) in cases {
            let f = fold_by(delta, gens);
            assert_eq!(f.xi().tag(), xi, "{delta}/{gens:?}");
            assert_eq!(f.realization(), realization, "{delta}/{gens:?}");
        }
    }

    #[test]
    fn a3_fold_matches_the_known_orbit_data() {
        let f = fold_by("A3", &["(1 3)"]);
        assert_eq!(f.node_orbits(), &[vec![0, 2], vec![1]]);
        let pairs = f.xi_positive_roots();
        let sizes: Vec<usize> = pairs.iter().map(|(_, orbit)| orbit.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 1]);
        let total: usize = sizes.iter().sum();
        assert_eq!(total, f.delta_system().positive_roots().len());
        // Literal invariant roots: only the two long-class ones.
        let fixed = f.invariant_positive_roots();
        assert_eq!(
            fixed,
            vec![
                Root::new(vec![0, 1, 0]).unwrap(),
                Root::new(vec![1, 1, 1]).unwrap()
            ]
        );
        assert_eq!(fixed.len(), 2);
        assert_eq!(pairs.len(), 4);
    }

    #[test]
    fn d4_triple_fold_orbit_sizes() {
        let f = fold_by("D4", &["(1 3 4)"]);
        assert_eq!(f.node_orbits(), &[vec![0, 2, 3], vec![1]]);
        let sizes: Vec<usize> = f
            .xi_positive_roots()
            .iter()
            .map(|(_, orbit)| orbit.len())
            .collect();
        assert_eq!(sizes, vec![1, 3, 3, 3, 1, 1]);
        assert_eq!(sizes.iter().sum::<usize>(), 12);
    }

    #[test]
    fn orbit_counts_match_xi_for_every_table_row() {
        for (delta, gens) in [
            ("A3", &["(1 3)"][..]),
            ("A5", &["(1 5)(2 4)"]),
            ("A7", &["(1 7)(2 6)(3 5)"]),
            ("D4", &["(3 4)"]),
            ("D5", &["(4 5)"]),
            ("D6", &["(5 6)"]),
            ("E6", &["(1 5)(2 4)"]),
            ("D4", &["(1 3 4)"]),
        ] {
            let f = fold_by(delta, gens);
            let pairs = f.xi_positive_roots();
            assert_eq!(pairs.len(), f.xi_system().positive_roots().len());
            let total: usize = pairs.iter().map(|(_, o)| o.len()).sum();
            assert_eq!(total, f.delta_system().positive_roots().len(), "{delta}");
        }
    }

    #[test]
    fn folded_reflections_satisfy_xi_coxeter_relations() {
        for (delta, gens) in [("A5", &["(1 5)(2 4)"][..]), ("D4", &["(1 3 4)"])] {
            let f = fold_by(delta, gens);
            let m = f.xi_system().rank();
            for k in 0..m {
                assert_eq!(f.folded_reflection(k).mul(&f.folded_reflection(k)).order(), 1);
                for l in k + 1..m {
                    let prod = f.folded_reflection(k).mul(&f.folded_reflection(l));
                    assert_eq!(prod.order(), f.xi().label(k, l) as usize, "{delta} {k}{l}");
                }
            }
        }
    }

    #[test]
    fn folded_reflections_fix_the_invariant_subspace() {
        let f = fold_by("E6", &["(1 5)(2 4)"]);
        let m = f.xi_system().rank();
        let basis = f.invariant_basis();
        for k in 0..m {
            let rho = f.folded_reflection(k);
            let mut rows: Vec<Vec<Rat>> = basis.to_vec();
            for b in basis {
                rows.push(rho.mat().apply_rat(b));
            }
            let dim = basis[0].len();
            let mut padded = QMat::zero(rows.len().max(dim));
            for (i, row) in rows.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    padded.set(i, j, v);
                }
            }
            assert_eq!(padded.rank(), m);
        }
    }

    #[test]
    fn induced_gram_is_positive_multiple_of_xi_gram() {
        for (delta, gens) in [
            ("A3", &["(1 3)"][..]),
            ("D4", &["(3 4)"]),
            ("E6", &["(1 5)(2 4)"]),
        ] {
            let f = fold_by(delta, gens);
            let m = f.xi_system().rank();
            let induced = QMat::from_rows(
                (0..m)
                    .map(|k| {
                        (0..m)
                            .map(|l| {
                                f.delta_system()
                                    .pair(&f.invariant_basis()[k], &f.invariant_basis()[l])
                            })
                            .collect()
                    })
                    .collect(),
            );
            let c = proportionality(f.xi_system().gram(), &induced).unwrap();
            assert!(c > Rat::zero(), "{delta}");
        }
    }

    #[test]
    fn folded_generators_list_orbits_ascending() {
        let f = fold_by("A3", &["(1 3)"]);
        assert_eq!(f.folded_generator(0).signed(), vec![1, 3]);
        assert_eq!(f.folded_generator(1).signed(), vec![2]);
        let g = fold_by("D4", &["(1 3 4)"]);
        assert_eq!(g.folded_generator(0).signed(), vec![1, 3, 4]);
    }

    #[test]
    fn folded_braid_relations_hold() {
        for (delta, gens) in [
            ("A3", &["(1 3)"][..]),
            ("D4", &["(3 4)"]),
            ("D4", &["(1 3 4)"]),
        ] {
            let f = fold_by(delta, gens);
            let report = f.verify_folded_braid();
            assert!(report.all_ok(), "{delta}: {report:?}");
            assert_eq!(
                report.pairs.len(),
                f.xi_system().rank() * (f.xi_system().rank() - 1) / 2
            );
        }
        // Trivial folding reduces to the diagram's own relations.
        let t = Folding::trivial(diagram("A2")).unwrap();
        assert!(t.verify_folded_braid().all_ok());
    }

    #[test]
    fn combinatorial_label_rule_agrees_with_matrix_orders() {
        // m = 2 without cross edges; m = 3 for equal-size orbits matched one
        // neighbor to one neighbor; 4 or 6 otherwise (6 exactly for the
        // transitive fold of the order-4 fork).
        for (delta, gens) in [
            ("A5", &["(1 5)(2 4)"][..]),
            ("D4", &["(3 4)"]),
            ("D4", &["(1 3 4)"]),
            ("D5", &["(4 5)"]),
            ("E6", &["(1 5)(2 4)"]),
        ] {
            let f = fold_by(delta, gens);
            let d = f.delta();
            let m = f.xi_system().rank();
            for k in 0..m {
                for l in 0..m {
                    if k == l {
                        continue;
                    }
                    let (a, b) = (&f.node_orbits()[k], &f.node_orbits()[l]);
                    let cross: Vec<usize> = a
                        .iter()
                        .map(|&i| b.iter().filter(|&&j| d.label(i, j) == 3).count())
                        .collect();
                    let expected = if cross.iter().all(|&c| c == 0) {
                        2
                    } else if a.len() == b.len() && cross.iter().all(|&c| c == 1) {
                        3
                    } else if delta == "D4" && f.xi().tag() == TypeTag::G2 {
                        6
                    } else {
                        4
                    };
                    assert_eq!(f.xi().label(k, l), expected, "{delta} {k}{l}");
                }
            }
        }
    }

    #[test]
    fn cyclic_orders() {
        assert_eq!(fold_by("A3", &["(1 3)"]).cyclic_order(), Some(2));
        assert_eq!(fold_by("D4", &["(1 3 4)"]).cyclic_order(), Some(3));
        assert_eq!(fold_by("D4", &["(1 3)", "(1 3 4)"]).cyclic_order(), None);
        assert_eq!(
            Folding::trivial(diagram("A2")).unwrap().cyclic_order(),
            None
        );
    }

    #[test]
    fn descriptor_strings_and_json_round_trip() {
        let f = Folding::parse_desc("D4/(1 3 4)").unwrap();
        assert_eq!(f.xi().tag(), TypeTag::G2);
        let back = Folding::from_json(&f.json()).unwrap();
        assert_eq!(back.xi().tag(), f.xi().tag());
        assert_eq!(back.node_orbits(), f.node_orbits());
        assert_eq!(back.realization(), f.realization());

        let t = Folding::parse_desc("trivial:A1xA1").unwrap();
        assert!(t.is_trivial());
        assert_eq!(t.xi().tag(), TypeTag::A1xA1);
        let tb = Folding::from_json(&t.json()).unwrap();
        assert!(tb.is_trivial());

        assert!(Folding::parse_desc("A4/(1 4)(2 3)").is_err());
        assert!(Folding::parse_desc("nonsense").is_err());
        let s3 = Folding::parse_desc("D4/(1 3);(1 3 4)").unwrap();
        assert_eq!(s3.group_order(), 6);
        assert_eq!(s3.xi().tag(), TypeTag::G2);
    }

    #[test]
    fn trivial_folding_is_the_identity_quotient() {
        let t = Folding::trivial(diagram("A2")).unwrap();
        assert_eq!(t.xi().tag(), t.delta().tag());
        assert_eq!(t.group_order(), 1);
        for (xi_root, orbit) in t.xi_positive_roots() {
            assert_eq!(orbit, vec![xi_root]);
        }
        assert!(Folding::trivial(diagram("B2")).is_err());
    }
}
