//! Polynomial deformation families over a base curve, their exceptional
//! curves, contractions, flops, and the braid relation as a flop-trace
//! identity.
//!
//! A section assigns to each simple root lambda_j of the unfolded diagram a
//! rational Laurent polynomial c_j, interpreted as the pairing value
//! <lambda_j, s(.)>. For a positive root mu of the folded system the curve
//! polynomial m_mu is the representative pairing; its zeros index the
//! exceptional curves of the fiber over that base point, with zero
//! multiplicity 1 corresponding to a (-1,-1)-curve and multiplicity >= 2 to
//! a (0,-2)-curve, and an identically-zero pairing meaning a whole divisor
//! direction is contracted.
//!
//! Folded families live over a cyclic degree-k cover of the punctured line
//! (coordinate u, with the deck action u -> zeta_k u matching the diagram
//! automorphism). Sections in this model are the A-invariant ones:
//! coefficients constant on node orbits and, for k > 1, supported on
//! exponents divisible by k. Over the rationals this is exactly the
//! subfamily whose curve polynomials descend to the base coordinate
//! x = u^k with per-curve-faithful multiplicities (for k = 3 the rational
//! coefficient-wise equivariance condition already forces this collapse;
//! for k = 2 the sign-twisted sections are excluded because their curve
//! data lives on the cover, not the base). Each base zero of a descended
//! locus carries orbit-size-many pairwise-disjoint curves in the same
//! folded class; orbit members are orthogonal in every valid folding, which
//! is exactly what the folding module's excluded-case rule guarantees.

use crate::folding::{FoldError, Folding};
use crate::linalg::Rat;
use crate::poly::{brat, parse_brat, rat_to_brat, RatPoly};
use crate::roots::{Root, Sign};
use crate::seed::{child_seed, rng_from};
use crate::weyl::WeylElement;
use num::Zero;
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

const GENERIC_ATTEMPTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("unknown base shape {0:?}")]
    UnknownShape(String),
    #[error("cover degree {0} needs the punctured-line base")]
    CoverNeedsPuncturedLine(usize),
    #[error("cover degree {k} needs a folding by a cyclic group of order {k}")]
    CoverNeedsCyclicFolding { k: usize },
    #[error("expected one coefficient per unfolded node ({expected}), got {got}")]
    WrongCoefficientCount { expected: usize, got: usize },
    #[error("coefficient {node} exceeds the degree window of the base")]
    DegreeOutOfWindow { node: usize },
    #[error("coefficient {node} breaks equivariance: {reason}")]
    NotEquivariant { node: usize, reason: String },
    #[error("twist degree too small to admit disjoint simple zeros")]
    DegreeTooSmall,
    #[error("word does not project to a reflection")]
    NotAReflection,
    #[error("section is not sufficiently general")]
    NotSufficientlyGeneral,
    #[error("braid trace needs two distinct nodes")]
    SameNode,
    #[error("no sufficiently general section found in {0} attempts")]
    GenericSearchFailed(usize),
    #[error("malformed section data: {0}")]
    BadJson(String),
    #[error(transparent)]
    Fold(#[from] FoldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseShape {
    AffineLine,
    PuncturedLine,
}

impl BaseShape {
    pub fn as_str(self) -> &'static str {
        match self {
            BaseShape::AffineLine => "affine-line",
            BaseShape::PuncturedLine => "punctured-line",
        }
    }

    pub fn parse(s: &str) -> Result<Self, FamilyError> {
        match s {
            "affine-line" => Ok(BaseShape::AffineLine),
            "punctured-line" => Ok(BaseShape::PuncturedLine),
            other => Err(FamilyError::UnknownShape(other.to_string())),
        }
    }
}

/// The base curve of the family: coefficient polynomials live in the cover
/// coordinate u, with x = u^cover_degree the base coordinate. twist_degree
/// bounds exponents: [0, d] on the affine line, [-d, d] on the punctured
/// line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseModel {
    pub shape: BaseShape,
    pub cover_degree: usize,
    pub twist_degree: i64,
}

impl BaseModel {
    pub fn affine_line(twist_degree: i64) -> Self {
        BaseModel {
            shape: BaseShape::AffineLine,
            cover_degree: 1,
            twist_degree,
        }
    }

    pub fn punctured_line(cover_degree: usize, twist_degree: i64) -> Self {
        BaseModel {
            shape: BaseShape::PuncturedLine,
            cover_degree,
            twist_degree,
        }
    }

    /// The base every folding supports: trivial and non-cyclic foldings get
    /// the affine line, cyclic order-k foldings the degree-k cover of the
    /// punctured line; the twist leaves room for two simple zeros.
    pub fn default_for(folding: &Folding) -> Self {
        match folding.cyclic_order() {
            Some(k) if !folding.is_trivial() => {
                BaseModel::punctured_line(k, 2 * k as i64)
            }
            _ => BaseModel::affine_line(2),
        }
    }

    pub fn validate_for(&self, folding: &Folding) -> Result<(), FamilyError> {
        if self.cover_degree == 0 || self.twist_degree < 0 {
            return Err(FamilyError::BadJson(
                "cover_degree >= 1 and twist_degree >= 0 required".to_string(),
            ));
        }
        if self.cover_degree > 1 {
            if self.shape != BaseShape::PuncturedLine {
                return Err(FamilyError::CoverNeedsPuncturedLine(self.cover_degree));
            }
            if folding.cyclic_order() != Some(self.cover_degree) {
                return Err(FamilyError::CoverNeedsCyclicFolding {
                    k: self.cover_degree,
                });
            }
        }
        Ok(())
    }

    fn in_window(&self, p: &RatPoly) -> bool {
        let (Some(lo), Some(hi)) = (p.ord(), p.degree()) else {
            return true; // zero polynomial
        };
        match self.shape {
            BaseShape::AffineLine => lo >= 0 && hi <= self.twist_degree,
            BaseShape::PuncturedLine => lo >= -self.twist_degree && hi <= self.twist_degree,
        }
    }

    pub fn json(&self) -> Value {
        json!({
            "shape": self.shape.as_str(),
            "cover_degree": self.cover_degree,
            "twist_degree": self.twist_degree,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FamilyError> {
        let bad = |m: &str| FamilyError::BadJson(m.to_string());
        let shape = BaseShape::parse(
            v["shape"].as_str().ok_or_else(|| bad("base.shape missing"))?,
        )?;
        let cover_degree = v["cover_degree"]
            .as_u64()
            .ok_or_else(|| bad("base.cover_degree missing"))? as usize;
        let twist_degree = v["twist_degree"]
            .as_i64()
            .ok_or_else(|| bad("base.twist_degree missing"))?;
        Ok(BaseModel {
            shape,
            cover_degree,
            twist_degree,
        })
    }
}

/// A section of the twisted Cartan bundle: one coefficient polynomial per
/// unfolded node, validated against the base window and the folding's
/// invariance conditions.
#[derive(Debug, Clone)]
pub struct Section {
    base: BaseModel,
    folding: Folding,
    coeffs: Vec<RatPoly>,
}

impl PartialEq for Section {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.folding.descriptor() == other.folding.descriptor()
            && self.coeffs == other.coeffs
    }
}

impl Section {
    pub fn new(
        base: BaseModel,
        folding: Folding,
        coeffs: Vec<RatPoly>,
    ) -> Result<Self, FamilyError> {
        base.validate_for(&folding)?;
        let n = folding.delta().rank();
        if coeffs.len() != n {
            return Err(FamilyError::WrongCoefficientCount {
                expected: n,
                got: coeffs.len(),
            });
        }
        for (j, c) in coeffs.iter().enumerate() {
            if !base.in_window(c) {
                return Err(FamilyError::DegreeOutOfWindow { node: j });
            }
        }
        if !folding.is_trivial() {
            for orbit in folding.node_orbits() {
                for &j in &orbit[1..] {
                    if coeffs[j] != coeffs[orbit[0]] {
                        return Err(FamilyError::NotEquivariant {
                            node: j,
                            reason: format!(
                                "must match node {} across the orbit",
                                orbit[0] + 1
                            ),
                        });
                    }
                }
            }
        }
        if base.cover_degree > 1 {
            let k = base.cover_degree as i64;
            for (j, c) in coeffs.iter().enumerate() {
                if c.terms().iter().any(|(e, _)| e.rem_euclid(k) != 0) {
                    return Err(FamilyError::NotEquivariant {
                        node: j,
                        reason: format!("exponents must be divisible by {k}"),
                    });
                }
            }
        }
        Ok(Section {
            base,
            folding,
            coeffs,
        })
    }

    pub fn zero(base: BaseModel, folding: Folding) -> Result<Self, FamilyError> {
        let n = folding.delta().rank();
        Section::new(base, folding, vec![RatPoly::zero(); n])
    }

    pub fn base(&self) -> &BaseModel {
        &self.base
    }

    pub fn folding(&self) -> &Folding {
        &self.folding
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &RatPoly {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatPoly::is_zero)
    }

    pub fn json(&self) -> Value {
        json!({
            "base": self.base.json(),
            "folding": self.folding.descriptor(),
            "coeffs": self.coeffs.iter().map(RatPoly::json).collect::<Vec<Value>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FamilyError> {
        let bad = |m: &str| FamilyError::BadJson(m.to_string());
        let base = BaseModel::from_json(&v["base"])?;
        let folding = Folding::parse_desc(
            v["folding"].as_str().ok_or_else(|| bad("folding missing"))?,
        )?;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("coeffs missing"))?
            .iter()
            .map(|c| RatPoly::from_json(c).ok_or_else(|| bad("bad coefficient polynomial")))
            .collect::<Result<Vec<_>, _>>()?;
        Section::new(base, folding, coeffs)
    }
}

/// The curve polynomial of the xi-positive root with the given index, in
/// the cover coordinate: the pairing of the orbit representative with the
/// section (all representatives agree on invariant sections).
pub fn m_of(s: &Section, xi_index: usize) -> RatPoly {
    let orbits = s.folding().xi_positive_roots();
    let rep = &orbits[xi_index].1[0];
    pairing_poly(rep, s.coeffs())
}

fn pairing_poly(rep: &Root, coeffs: &[RatPoly]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (j, &n) in rep.coords().iter().enumerate() {
        if n != 0 {
            acc = acc.add(&coeffs[j].scale(&brat(n, 1)));
        }
    }
    acc
}

/// The zero locus of m_mu in the base coordinate x = u^k: descended when
/// k > 1, and with unit monomial factors stripped on the punctured line
/// (x = 0 is not a base point there).
pub fn base_locus(s: &Section, xi_index: usize) -> RatPoly {
    let m = m_of(s, xi_index);
    if m.is_zero() {
        return m;
    }
    let k = s.base().cover_degree;
    let descended = if k > 1 {
        m.descend(k as i64)
            .expect("invariant sections descend by construction")
    } else {
        m
    };
    match s.base().shape {
        BaseShape::AffineLine => descended,
        BaseShape::PuncturedLine => {
            let ord = descended.ord().expect("nonzero");
            descended.shift(-ord)
        }
    }
}

/// Normal-bundle tag of an exceptional curve (or of a contracted divisor
/// direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleTag {
    MinusOneMinusOne,
    ZeroMinusTwo,
    Divisor,
}

impl BundleTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BundleTag::MinusOneMinusOne => "(-1,-1)",
            BundleTag::ZeroMinusTwo => "(0,-2)",
            BundleTag::Divisor => "divisor",
        }
    }
}

/// One squarefree factor of a curve locus with its multiplicity and tag.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusFactor {
    pub poly: RatPoly,
    pub multiplicity: u32,
    pub tag: BundleTag,
}

/// All curves indexed by one xi-positive root: either a contracted divisor
/// (identically zero pairing) or the factored base locus.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEntry {
    pub root: Root,
    pub orbit_size: usize,
    pub divisor: bool,
    pub factors: Vec<LocusFactor>,
}

impl CurveEntry {
    /// Zeros counted with multiplicity (curves per orbit representative).
    pub fn curve_count(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| f.poly.degree().unwrap_or(0) * f.multiplicity as i64)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveConfiguration {
    pub entries: Vec<CurveEntry>,
    pub general_flag: bool,
}

impl CurveConfiguration {
    pub fn curve_count(&self) -> i64 {
        self.entries.iter().map(CurveEntry::curve_count).sum()
    }

    pub fn entry_for(&self, root: &Root) -> Option<&CurveEntry> {
        self.entries.iter().find(|e| &e.root == root)
    }

    pub fn json(&self) -> Value {
        json!({
            "general": self.general_flag,
            "entries": self.entries.iter().map(|e| json!({
                "root": e.root.coords(),
                "height": e.root.height(),
                "orbit_size": e.orbit_size,
                "divisor": e.divisor,
                "factors": e.factors.iter().map(|f| json!({
                    "poly": f.poly.primitive().display_with("x"),
                    "window": f.poly.primitive().json(),
                    "multiplicity": f.multiplicity,
                    "tag": f.tag.as_str(),
                })).collect::<Vec<Value>>(),
            })).collect::<Vec<Value>>(),
        })
    }
}

/// Factors every non-invertible curve polynomial: one entry per xi-positive
/// root whose locus is zero or has base zeros, sorted by root height.
pub fn curve_configuration(s: &Section) -> CurveConfiguration {
    let orbits = s.folding().xi_positive_roots();
    let mut entries = Vec::new();
    for (idx, (root, orbit)) in orbits.iter().enumerate() {
        let locus = base_locus(s, idx);
        if locus.is_zero() {
            entries.push(CurveEntry {
                root: root.clone(),
                orbit_size: orbit.len(),
                divisor: true,
                factors: vec![LocusFactor {
                    poly: RatPoly::zero(),
                    multiplicity: 1,
                    tag: BundleTag::Divisor,
                }],
            });
            continue;
        }
        if locus.degree() == Some(0) {
            continue; // invertible: no curves
        }
        let (_, parts) = locus.squarefree_decomposition();
        let mut factors: Vec<LocusFactor> = parts
            .into_iter()
            .map(|(poly, multiplicity)| LocusFactor {
                poly: poly.primitive(),
                multiplicity,
                tag: if multiplicity == 1 {
                    BundleTag::MinusOneMinusOne
                } else {
                    BundleTag::ZeroMinusTwo
                },
            })
            .collect();
        factors.sort_by_key(|f| (f.poly.degree(), f.poly.display_with("x")));
        entries.push(CurveEntry {
            root: root.clone(),
            orbit_size: orbit.len(),
            divisor: false,
            factors,
        });
    }
    entries.sort_by_key(|e| (e.root.height(), e.root.clone()));
    CurveConfiguration {
        general_flag: is_sufficiently_general(s),
        entries,
    }
}

/// True iff every curve polynomial is nonzero and squarefree and the loci
/// of distinct roots are pairwise coprime.
pub fn is_sufficiently_general(s: &Section) -> bool {
    let count = s.folding().xi_positive_roots().len();
    let loci: Vec<RatPoly> = (0..count).map(|i| base_locus(s, i)).collect();
    for locus in &loci {
        if locus.is_zero() || !locus.is_squarefree() {
            return false;
        }
    }
    for a in 0..count {
        for b in a + 1..count {
            if loci[a].gcd(&loci[b]).degree() != Some(0) {
                return false;
            }
        }
    }
    true
}

fn orbit_constant_extension(folding: &Folding, h: &[Rat]) -> Vec<Rat> {
    (0..folding.delta().rank())
        .map(|j| h[folding.xi_node_of(j)])
        .collect()
}

fn pair_scalar(rep: &Root, h_ext: &[Rat]) -> Rat {
    rep.coords()
        .iter()
        .zip(h_ext)
        .map(|(&n, v)| *v * Rat::from_integer(n))
        .sum()
}

/// The genericity determinant condition on a pair of constant sections
/// h, h' (given in folded coordinates): for all pairs of distinct positive
/// roots mu != mu', det [[<mu,h>, <mu,h'>], [<mu',h>, <mu',h'>]] != 0.
pub fn condition_six(folding: &Folding, h: &[Rat], h_prime: &[Rat]) -> bool {
    let h_ext = orbit_constant_extension(folding, h);
    let hp_ext = orbit_constant_extension(folding, h_prime);
    let orbits = folding.xi_positive_roots();
    let scalars: Vec<(Rat, Rat)> = orbits
        .iter()
        .map(|(_, orbit)| {
            (
                pair_scalar(&orbit[0], &h_ext),
                pair_scalar(&orbit[0], &hp_ext),
            )
        })
        .collect();
    for (a, sa) in scalars.iter().enumerate() {
        if sa.0 == Rat::zero() && sa.1 == Rat::zero() {
            return false;
        }
        for sb in &scalars[a + 1..] {
            if sa.0 * sb.1 - sa.1 * sb.0 == Rat::zero() {
                return false;
            }
        }
    }
    true
}

fn random_window_poly<R: Rng>(
    rng: &mut R,
    base: &BaseModel,
) -> RatPoly {
    let k = base.cover_degree as i64;
    let exponents: Vec<i64> = match base.shape {
        BaseShape::AffineLine => (0..=base.twist_degree).collect(),
        BaseShape::PuncturedLine => {
            let q = base.twist_degree / k;
            (-q..=q).map(|e| e * k).collect()
        }
    };
    let mut acc = RatPoly::zero();
    for e in exponents {
        let c: i64 = rng.gen_range(-9..=9);
        if c != 0 {
            acc = acc.add(&RatPoly::monomial(brat(c, 1), e));
        }
    }
    acc
}

fn strip_unit(base: &BaseModel, p: &RatPoly) -> RatPoly {
    match (base.shape, p.ord()) {
        (BaseShape::PuncturedLine, Some(ord)) => p.shift(-ord),
        _ => p.clone(),
    }
}

/// Seeded search for a sufficiently general section of the product form
/// h (x) t + h' (x) t': reports the section and how many reseeded attempts
/// were needed. Deterministic in the seed.
pub fn generic_section(
    folding: &Folding,
    base: &BaseModel,
    seed: u64,
) -> Result<(Section, usize), FamilyError> {
    base.validate_for(folding)?;
    let deep_enough = match base.shape {
        BaseShape::AffineLine => base.twist_degree >= 1,
        BaseShape::PuncturedLine => base.twist_degree >= base.cover_degree as i64,
    };
    if !deep_enough {
        return Err(FamilyError::DegreeTooSmall);
    }
    let xi_rank = folding.xi().rank();
    for attempt in 0..GENERIC_ATTEMPTS {
        let mut rng = rng_from(child_seed(seed, attempt as u64));
        let t = random_window_poly(&mut rng, base);
        let t_prime = random_window_poly(&mut rng, base);
        let h: Vec<Rat> = (0..xi_rank)
            .map(|_| Rat::from_integer(rng.gen_range(-9..=9)))
            .collect();
        let h_prime: Vec<Rat> = (0..xi_rank)
            .map(|_| Rat::from_integer(rng.gen_range(-9..=9)))
            .collect();
        if t.is_zero() || t_prime.is_zero() {
            continue;
        }
        let (ts, tps) = (strip_unit(base, &t), strip_unit(base, &t_prime));
        if ts.degree() == Some(0)
            || tps.degree() == Some(0)
            || !ts.is_squarefree()
            || !tps.is_squarefree()
            || ts.gcd(&tps).degree() != Some(0)
        {
            continue;
        }
        if !condition_six(folding, &h, &h_prime) {
            continue;
        }
        let h_ext = orbit_constant_extension(folding, &h);
        let hp_ext = orbit_constant_extension(folding, &h_prime);
        let coeffs: Vec<RatPoly> = (0..folding.delta().rank())
            .map(|j| {
                t.scale(&rat_to_brat(h_ext[j]))
                    .add(&t_prime.scale(&rat_to_brat(hp_ext[j])))
            })
            .collect();
        let Ok(section) = Section::new(*base, folding.clone(), coeffs) else {
            continue;
        };
        if !is_sufficiently_general(&section) {
            continue;
        }
        let units = (0..folding.xi_positive_roots().len())
            .any(|i| base_locus(&section, i).degree() == Some(0));
        if units {
            continue;
        }
        return Ok((section, attempt));
    }
    Err(FamilyError::GenericSearchFailed(GENERIC_ATTEMPTS))
}

/// Applies a word in the folded simple reflections to the section
/// (coefficientwise contragredient action through each folded reflection's
/// integer matrix). Exact, and a group action: acting by a concatenation
/// equals acting in sequence.
pub fn weyl_act(word: &[usize], s: &Section) -> Section {
    let mut coeffs = s.coeffs().to_vec();
    let n = coeffs.len();
    for &i in word.iter().rev() {
        let refl = s.folding().folded_reflection(i);
        let mat = refl.mat();
        coeffs = (0..n)
            .map(|j| {
                let mut acc = RatPoly::zero();
                for (l, c) in coeffs.iter().enumerate() {
                    let w = mat.at(l, j);
                    if w != 0 {
                        acc = acc.add(&c.scale(&brat(w, 1)));
                    }
                }
                acc
            })
            .collect();
    }
    Section::new(*s.base(), s.folding().clone(), coeffs)
        .expect("the folded Weyl action preserves validity")
}

/// A flop: the reflection's word, the curve entries it flops (roots sent
/// negative, divisor directions excluded), and the transformed section.
#[derive(Debug, Clone)]
pub struct FlopRecord {
    pub word: Vec<usize>,
    pub reflection: WeylElement,
    pub flopped: Vec<CurveEntry>,
    pub target: Section,
}

impl FlopRecord {
    pub fn json(&self) -> Value {
        json!({
            "word": self.word.iter().map(|i| i + 1).collect::<Vec<usize>>(),
            "flopped": self.flopped.iter().map(|e| json!({
                "root": e.root.coords(),
                "factors": e.factors.iter().map(|f| json!({
                    "poly": f.poly.primitive().display_with("x"),
                    "multiplicity": f.multiplicity,
                })).collect::<Vec<Value>>(),
            })).collect::<Vec<Value>>(),
            "target": self.target.json(),
        })
    }
}

/// Flops the reflection given as a word in folded simple generators:
/// flopped entries are the configuration entries whose root the reflection
/// sends negative (divisor entries stay put), and the section moves by the
/// Weyl action.
pub fn flop(word: &[usize], s: &Section) -> Result<FlopRecord, FamilyError> {
    let xi_sys = s.folding().xi_system();
    let w = WeylElement::from_word(xi_sys, word);
    if !w.is_reflection() {
        return Err(FamilyError::NotAReflection);
    }
    let config = curve_configuration(s);
    let flopped: Vec<CurveEntry> = config
        .entries
        .iter()
        .filter(|e| !e.divisor && w.apply_root(&e.root).sign() == Sign::Negative)
        .cloned()
        .collect();
    Ok(FlopRecord {
        word: word.to_vec(),
        reflection: w,
        flopped,
        target: weyl_act(word, s),
    })
}

/// Per-node contraction verdict: a whole divisor direction or finitely
/// many curve loci.
#[derive(Debug, Clone, PartialEq)]
pub enum ContractionKind {
    Divisor,
    Curves(Vec<(RatPoly, u32)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub per_node: Vec<(usize, ContractionKind)>,
}

impl ContractionReport {
    pub fn json(&self) -> Value {
        json!(self
            .per_node
            .iter()
            .map(|(i, kind)| match kind {
                ContractionKind::Divisor => json!({
                    "node": i + 1,
                    "divisor_contracted": true,
                }),
                ContractionKind::Curves(loci) => json!({
                    "node": i + 1,
                    "divisor_contracted": false,
                    "loci": loci.iter().map(|(p, m)| json!({
                        "poly": p.primitive().display_with("x"),
                        "multiplicity": m,
                    })).collect::<Vec<Value>>(),
                }),
            })
            .collect::<Vec<Value>>())
    }
}

/// For each requested folded node: reports whether the node's divisor is
/// contracted entirely (identically zero pairing) or lists the finitely
/// many contracted-curve loci.
pub fn contraction_profile(s: &Section, nodes: &[usize]) -> ContractionReport {
    let xi_sys = s.folding().xi_system();
    let per_node = nodes
        .iter()
        .map(|&i| {
            let idx = xi_sys
                .positive_index(&xi_sys.simple_root(i))
                .expect("simple roots are positive");
            let locus = base_locus(s, idx);
            if locus.is_zero() {
                (i, ContractionKind::Divisor)
            } else {
                let (_, parts) = locus.squarefree_decomposition();
                (
                    i,
                    ContractionKind::Curves(
                        parts.into_iter().map(|(p, m)| (p.primitive(), m)).collect(),
                    ),
                )
            }
        })
        .collect();
    ContractionReport { per_node }
}

/// One ordering's trace through the braid chain: the flopped root pulled
/// back to source labels, with its source locus.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub node: usize,
    pub source_root: Root,
    pub locus: RatPoly,
}

/// Verdict of running both braid orderings of simple flops from the same
/// sufficiently general section.
#[derive(Debug, Clone)]
pub struct BraidFlopReport {
    pub node_i: usize,
    pub node_j: usize,
    pub braid_label: usize,
    pub endpoints_equal: bool,
    pub flop_multiset_ok: bool,
    pub loci_match_source: bool,
    pub composites_equal: bool,
    pub traces: [Vec<TraceStep>; 2],
}

impl BraidFlopReport {
    pub fn all_ok(&self) -> bool {
        self.endpoints_equal
            && self.flop_multiset_ok
            && self.loci_match_source
            && self.composites_equal
    }

    pub fn json(&self) -> Value {
        let trace_json = |t: &[TraceStep]| -> Value {
            json!(t
                .iter()
                .map(|step| json!({
                    "node": step.node + 1,
                    "source_root": step.source_root.coords(),
                    "locus": step.locus.primitive().display_with("x"),
                }))
                .collect::<Vec<Value>>())
        };
        json!({
            "i": self.node_i + 1,
            "j": self.node_j + 1,
            "braid_label": self.braid_label,
            "endpoints_equal": self.endpoints_equal,
            "flop_multiset_ok": self.flop_multiset_ok,
            "loci_match_source": self.loci_match_source,
            "composites_equal": self.composites_equal,
            "ok": self.all_ok(),
            "traces": [trace_json(&self.traces[0]), trace_json(&self.traces[1])],
        })
    }
}

/// Runs the two alternating chains of simple flops (i,j,i,... versus
/// j,i,j,..., each of length m_ij) from the same section and checks that
/// they tell one coherent story: equal endpoint sections, equal composite
/// Weyl elements, and — pulling each step's flopped root back along the
/// chain — every positive root of the rank-2 subsystem flopped exactly
/// once, with loci matching the source configuration.
pub fn braid_flop_trace(
    i: usize,
    j: usize,
    s: &Section,
) -> Result<BraidFlopReport, FamilyError> {
    if i == j {
        return Err(FamilyError::SameNode);
    }
    let xi_sys = s.folding().xi_system();
    let m = xi_sys.diagram().label(i, j) as usize;
    if !is_sufficiently_general(s) {
        return Err(FamilyError::NotSufficientlyGeneral);
    }
    let rank2 = xi_sys.rank2_positive_roots(i, j);
    for root in &rank2 {
        let idx = xi_sys.positive_index(root).expect("rank-2 roots are positive");
        if base_locus(s, idx).degree() == Some(0) {
            // A curveless root could never be flopped; genericity for the
            // trace includes having curves to flop.
            return Err(FamilyError::NotSufficientlyGeneral);
        }
    }
    let source_config = curve_configuration(s);

    let mut endpoints: Vec<Section> = Vec::new();
    let mut composites: Vec<WeylElement> = Vec::new();
    let mut traces: Vec<Vec<TraceStep>> = Vec::new();
    let mut multiset_ok = true;
    let mut loci_ok = true;
    for &(first, second) in &[(i, j), (j, i)] {
        let chain: Vec<usize> = (0..m)
            .map(|t| if t % 2 == 0 { first } else { second })
            .collect();
        let mut current = s.clone();
        let mut acc = WeylElement::identity(xi_sys.rank());
        let mut trace = Vec::new();
        for &c in &chain {
            let record = flop(&[c], &current)?;
            let mu_c = xi_sys.simple_root(c);
            let source_root = acc.apply_root(&mu_c);
            if source_root.sign() != Sign::Positive {
                multiset_ok = false;
            }
            // A simple reflection sends exactly its own simple root
            // negative, so the step flops exactly that entry.
            let step_locus = match record
                .flopped
                .iter()
                .find(|e| e.root == mu_c)
                .filter(|_| record.flopped.len() == 1)
            {
                Some(entry) => {
                    let locus = locus_product(entry);
                    match source_config.entry_for(&source_root) {
                        Some(src) if locus_product(src) == locus => locus,
                        _ => {
                            loci_ok = false;
                            locus
                        }
                    }
                }
                None => {
                    multiset_ok = false;
                    RatPoly::zero()
                }
            };
            trace.push(TraceStep {
                node: c,
                source_root,
                locus: step_locus,
            });
            acc = acc.mul(&WeylElement::simple(xi_sys, c));
            current = record.target;
        }
        let mut seen: Vec<Root> = trace.iter().map(|t| t.source_root.clone()).collect();
        seen.sort();
        let mut expected = rank2.clone();
        expected.sort();
        if seen != expected {
            multiset_ok = false;
        }
        endpoints.push(current);
        composites.push(acc);
        traces.push(trace);
    }
    let [first_trace, second_trace] = <[Vec<TraceStep>; 2]>::try_from(traces)
        .expect("two orderings");
    Ok(BraidFlopReport {
        node_i: i,
        node_j: j,
        braid_label: m,
        endpoints_equal: endpoints[0] == endpoints[1],
        flop_multiset_ok: multiset_ok,
        loci_match_source: loci_ok,
        composites_equal: composites[0] == composites[1],
        traces: [first_trace, second_trace],
    })
}

fn locus_product(entry: &CurveEntry) -> RatPoly {
    let mut acc = RatPoly::one();
    for f in &entry.factors {
        acc = acc.mul(&f.poly.pow(f.multiplicity));
    }
    acc.primitive()
}

/// Parses a rational-vector argument like "1,0,-2/3" into folded
/// coordinates (used by CLI-facing constructors).
pub fn parse_rat_vector(text: &str, rank: usize) -> Result<Vec<Rat>, FamilyError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != rank {
        return Err(FamilyError::BadJson(format!(
            "expected {rank} comma-separated rationals, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            let b = parse_brat(p).ok_or_else(|| {
                FamilyError::BadJson(format!("bad rational {p:?}"))
            })?;
            let (num, den) = (b.numer(), b.denom());
            let to_i64 = |x: &num::BigInt| -> Result<i64, FamilyError> {
                i64::try_from(x.clone())
                    .map_err(|_| FamilyError::BadJson(format!("rational {p:?} too large")))
            };
            Ok(Rat::new(to_i64(num)?, to_i64(den)?))
        })
        .collect()
}
