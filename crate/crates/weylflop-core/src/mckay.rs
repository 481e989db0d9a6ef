//! Finite subgroups of SL(2,C), their character tables, and McKay diagrams.
//!
//! Groups are built as explicit 2x2 complex matrix closures of standard
//! generators (floating point; dedup tolerance 1e-8). Characters come from
//! the class-algebra structure constants: the class-sum matrices are
//! simultaneously diagonalized by the character vectors, and a random
//! Hermitian combination of their length-normalized forms separates them.
//! The Hermitian eigenproblem is realified to a 2h x 2h real symmetric one,
//! so each character shows up as an eigenvalue cluster of size exactly two;
//! degenerate clusters trigger a reseeded retry. The final adjacency
//! multiplicities are integers recovered by rounding with a wide margin,
//! which is what makes the floating-point route safe.

use crate::diagram::{DynkinDiagram, TypeTag};
use crate::seed::{child_seed, rng_from};
use nalgebra::{DMatrix, SymmetricEigen};
use num::complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

const DEDUP_TOL: f64 = 1e-8;
const INTEGER_TOL: f64 = 1e-4;
const ORTHO_TOL: f64 = 1e-6;
const MAX_EIGEN_RETRIES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McKayError {
    #[error("unknown group kind {0}")]
    UnknownKind(String),
    #[error("parameter {n} out of range for {kind}")]
    BadParameter { kind: String, n: usize },
    #[error("matrix closure exceeded twice the expected order {0}")]
    ClosureOverflow(usize),
    #[error("class-sum eigenspaces stayed degenerate after {MAX_EIGEN_RETRIES} retries")]
    DegenerateEigenspace,
    #[error("tensor multiplicity {0} is not within {INTEGER_TOL} of an integer")]
    NonIntegralMultiplicity(f64),
    #[error("graph does not match any affine ADE shape")]
    UnrecognizedGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic,
    BinaryDihedral,
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupKind {
    pub fn parse(s: &str) -> Result<Self, McKayError> {
        match s.to_ascii_lowercase().as_str() {
            "cyclic" => Ok(GroupKind::Cyclic),
            "binary-dihedral" => Ok(GroupKind::BinaryDihedral),
            "binary-tetrahedral" => Ok(GroupKind::BinaryTetrahedral),
            "binary-octahedral" => Ok(GroupKind::BinaryOctahedral),
            "binary-icosahedral" => Ok(GroupKind::BinaryIcosahedral),
            other => Err(McKayError::UnknownKind(other.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::Cyclic => "cyclic",
            GroupKind::BinaryDihedral => "binary-dihedral",
            GroupKind::BinaryTetrahedral => "binary-tetrahedral",
            GroupKind::BinaryOctahedral => "binary-octahedral",
            GroupKind::BinaryIcosahedral => "binary-icosahedral",
        }
    }

    pub fn needs_parameter(self) -> bool {
        matches!(self, GroupKind::Cyclic | GroupKind::BinaryDihedral)
    }

    fn expected_order(self, n: usize) -> usize {
        match self {
            GroupKind::Cyclic => n,
            GroupKind::BinaryDihedral => 4 * n,
            GroupKind::BinaryTetrahedral => 24,
            GroupKind::BinaryOctahedral => 48,
            GroupKind::BinaryIcosahedral => 120,
        }
    }
}

/// A 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2(pub [Complex64; 4]);

impl M2 {
    pub fn identity() -> Self {
        M2([
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
    }

    /// The SU(2) image of the quaternion a + bi + cj + dk.
    fn from_quaternion(a: f64, b: f64, c: f64, d: f64) -> Self {
        M2([
            Complex64::new(a, b),
            Complex64::new(c, d),
            Complex64::new(-c, d),
            Complex64::new(a, -b),
        ])
    }

    pub fn mul(&self, rhs: &M2) -> M2 {
        let a = &self.0;
        let b = &rhs.0;
        M2([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    fn dist(&self, rhs: &M2) -> f64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// A finite matrix subgroup of SL(2,C) with its index multiplication table.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    kind: GroupKind,
    parameter: Option<usize>,
    elements: Vec<M2>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

/// Builds the standard matrix realization of the given kind; `n` is the
/// parameter for cyclic (order n, n >= 1) and binary dihedral (order 4n,
/// n >= 2) and ignored otherwise.
pub fn build_group(kind: GroupKind, n: usize) -> Result<MatrixGroup, McKayError> {
    let bad = || McKayError::BadParameter {
        kind: kind.as_str().to_string(),
        n,
    };
    let tau = std::f64::consts::TAU;
    let mut gens: Vec<M2> = Vec::new();
    match kind {
        GroupKind::Cyclic => {
            if n < 1 {
                return Err(bad());
            }
            let z = Complex64::from_polar(1.0, tau / n as f64);
            gens.push(M2([
                z,
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                z.conj(),
            ]));
        }
        GroupKind::BinaryDihedral => {
            if n < 2 {
                return Err(bad());
            }
            let z = Complex64::from_polar(1.0, tau / (2 * n) as f64);
            gens.push(M2([
                z,
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                z.conj(),
            ]));
            gens.push(M2::from_quaternion(0.0, 0.0, 1.0, 0.0));
        }
        GroupKind::BinaryTetrahedral => {
            gens.push(M2::from_quaternion(0.0, 1.0, 0.0, 0.0));
            gens.push(M2::from_quaternion(0.0, 0.0, 1.0, 0.0));
            gens.push(M2::from_quaternion(-0.5, 0.5, 0.5, 0.5));
        }
        GroupKind::BinaryOctahedral => {
            let r = 0.5f64.sqrt();
            gens.push(M2::from_quaternion(0.0, 1.0, 0.0, 0.0));
            gens.push(M2::from_quaternion(0.0, 0.0, 1.0, 0.0));
            gens.push(M2::from_quaternion(-0.5, 0.5, 0.5, 0.5));
            gens.push(M2::from_quaternion(r, r, 0.0, 0.0));
        }
        GroupKind::BinaryIcosahedral => {
            let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
            gens.push(M2::from_quaternion(0.0, 1.0, 0.0, 0.0));
            gens.push(M2::from_quaternion(0.0, 0.0, 1.0, 0.0));
            gens.push(M2::from_quaternion(phi / 2.0, 1.0 / (2.0 * phi), 0.5, 0.0));
        }
    }

    let expected = kind.expected_order(n);
    let mut elements = vec![M2::identity()];
    let mut frontier: Vec<usize> = vec![0];
    let find = |elements: &[M2], m: &M2| elements.iter().position(|e| e.dist(m) < DEDUP_TOL);
    while let Some(i) = frontier.pop() {
        for g in &gens {
            let prod = elements[i].mul(g);
            if find(&elements, &prod).is_none() {
                elements.push(prod);
                frontier.push(elements.len() - 1);
                if elements.len() > 2 * expected {
                    return Err(McKayError::ClosureOverflow(expected));
                }
            }
        }
    }
    debug_assert_eq!(elements.len(), expected);
    debug_assert!(elements.iter().all(|e| (e.det() - 1.0).norm() < 1e-9));

    let order = elements.len();
    let mut table = vec![vec![0usize; order]; order];
    for i in 0..order {
        for j in 0..order {
            let prod = elements[i].mul(&elements[j]);
            table[i][j] = find(&elements, &prod).expect("closure is total");
        }
    }
    let inverse: Vec<usize> = (0..order)
        .map(|i| (0..order).find(|&j| table[i][j] == 0).expect("group inverse"))
        .collect();
    Ok(MatrixGroup {
        kind,
        parameter: kind.needs_parameter().then_some(n),
        elements,
        table,
        inverse,
    })
}

impl MatrixGroup {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn parameter(&self) -> Option<usize> {
        self.parameter
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &M2 {
        &self.elements[i]
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Conjugacy classes as sorted element-index lists, identity class first
    /// (classes ordered by smallest member).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..order {
            if class_of[start] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..order)
                .map(|g| self.table[self.table[g][start]][self.inverse[g]])
                .collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                class_of[x] = classes.len();
            }
            classes.push(class);
        }
        classes
    }
}

/// Conjugacy classes with the full complex character table (rows = irreps,
/// columns = classes).
#[derive(Debug, Clone)]
pub struct CharacterData {
    pub classes: Vec<Vec<usize>>,
    /// Representative element index per class (smallest member).
    pub reps: Vec<usize>,
    pub table: Vec<Vec<Complex64>>,
    pub dims: Vec<usize>,
    /// Row index of the trivial character.
    pub trivial: usize,
}

impl CharacterData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Inner product (1/|G|) sum_g chi_a(g) conj(chi_b(g)).
    pub fn row_inner(&self, group_order: usize, a: usize, b: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, class) in self.classes.iter().enumerate() {
            acc += self.table[a][k] * self.table[b][k].conj() * class.len() as f64;
        }
        acc / group_order as f64
    }
}

/// Computes the character table by simultaneous diagonalization of the
/// class-sum matrices.
pub fn character_table(group: &MatrixGroup) -> Result<CharacterData, McKayError> {
    let classes = group.conjugacy_classes();
    let h = classes.len();
    let order = group.order();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let mut class_of = vec![0usize; order];
    for (k, class) in classes.iter().enumerate() {
        for &x in class {
            class_of[x] = k;
        }
    }
    // inv_class[i] = class of the inverses of class i.
    let inv_class: Vec<usize> = reps
        .iter()
        .map(|&r| class_of[group.inverse_index(r)])
        .collect();

    // Structure constants: a_mats[i][k][j] counts pairs (a, b) in
    // C_i x C_k with a*b equal to the representative of C_j.
    let mut a_mats = vec![vec![vec![0i64; h]; h]; h];
    for i in 0..h {
        for k in 0..h {
            for &a in &classes[i] {
                for &b in &classes[k] {
                    let c = group.mul_index(a, b);
                    let j = class_of[c];
                    if c == reps[j] {
                        a_mats[i][k][j] += 1;
                    }
                }
            }
        }
    }
    // Length normalization turns transposition into class inversion, which
    // is what makes the paired random combination below Hermitian.
    let sqrt_sizes: Vec<f64> = classes.iter().map(|c| (c.len() as f64).sqrt()).collect();
    let normalized: Vec<DMatrix<f64>> = (0..h)
        .map(|i| {
            DMatrix::from_fn(h, h, |k, j| {
                a_mats[i][k][j] as f64 * sqrt_sizes[j] / sqrt_sizes[k]
            })
        })
        .collect();

    for attempt in 0..MAX_EIGEN_RETRIES {
        let mut rng = rng_from(child_seed(0x6d63_6b61_795f_6569, attempt as u64));
        let mut x = DMatrix::<f64>::zeros(h, h);
        let mut y = DMatrix::<f64>::zeros(h, h);
        for i in 0..h {
            let ip = inv_class[i];
            if ip < i {
                continue;
            }
            if ip == i {
                let t: f64 = rng.gen_range(-1.0..1.0);
                x += &normalized[i] * t;
            } else {
                let t: f64 = rng.gen_range(-1.0..1.0);
                let s: f64 = rng.gen_range(-1.0..1.0);
                x += (&normalized[i] + &normalized[ip]) * t;
                y += (&normalized[i] - &normalized[ip]) * s;
            }
        }
        debug_assert!((&x - x.transpose()).norm() < 1e-9);
        debug_assert!((&y + y.transpose()).norm() < 1e-9);

        // Realify the Hermitian matrix X + iY.
        let mut big = DMatrix::<f64>::zeros(2 * h, 2 * h);
        big.view_mut((0, 0), (h, h)).copy_from(&x);
        big.view_mut((h, h), (h, h)).copy_from(&x);
        big.view_mut((0, h), (h, h)).copy_from(&(-&y));
        big.view_mut((h, 0), (h, h)).copy_from(&y);
        let eig = SymmetricEigen::new(big);

        let mut idx: Vec<usize> = (0..2 * h).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-7 * scale;

        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        let mut ok = true;
        let mut at = 0;
        while at < 2 * h {
            let mut end = at + 1;
            while end < 2 * h
                && eig.eigenvalues[idx[end]] - eig.eigenvalues[idx[end - 1]] < tol
            {
                end += 1;
            }
            if end - at != 2 {
                ok = false;
                break;
            }
            let col = eig.eigenvectors.column(idx[at]);
            let u: Vec<Complex64> = (0..h)
                .map(|k| Complex64::new(col[k], col[h + k]))
                .collect();
            // u_k is proportional to sqrt|C_k| chi(g_k)/chi(1); the identity
            // class fixes the scalar.
            let w: Vec<Complex64> = u.iter().zip(&sqrt_sizes).map(|(v, s)| v / s).collect();
            if w[0].norm() < 1e-9 {
                ok = false;
                break;
            }
            let w: Vec<Complex64> = w.iter().map(|v| v / w[0]).collect();
            let norm_sq: f64 = w
                .iter()
                .zip(&classes)
                .map(|(v, c)| v.norm_sqr() * c.len() as f64)
                .sum();
            let dim = (order as f64 / norm_sq).sqrt();
            if (dim - dim.round()).abs() > 1e-6 * (1.0 + dim) || dim.round() < 1.0 {
                ok = false;
                break;
            }
            rows.push(w.iter().map(|v| v * dim.round()).collect());
            at = end;
        }
        if !ok || rows.len() != h {
            continue;
        }
        rows.sort_by_key(|row| {
            let dim = row[0].re.round() as i64;
            let not_trivial = !row.iter().all(|v| (v - 1.0).norm() < 1e-6);
            let values: Vec<(i64, i64)> = row
                .iter()
                .map(|v| ((v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64))
                .collect();
            (dim, not_trivial, values)
        });
        let dims: Vec<usize> = rows.iter().map(|r| r[0].re.round() as usize).collect();
        if dims.iter().map(|d| d * d).sum::<usize>() != order {
            continue;
        }
        let mut orthonormal = true;
        let data = CharacterData {
            classes: classes.clone(),
            reps: reps.clone(),
            table: rows,
            dims: dims.clone(),
            trivial: 0,
        };
        for a in 0..h {
            for b in 0..h {
                let ip = data.row_inner(order, a, b);
                let expect = if a == b { 1.0 } else { 0.0 };
                if (ip - expect).norm() > ORTHO_TOL {
                    orthonormal = false;
                }
            }
        }
        if !orthonormal {
            continue;
        }
        let trivial = data
            .table
            .iter()
            .position(|row| row.iter().all(|v| (v - 1.0).norm() < 1e-6));
        let Some(trivial) = trivial else { continue };
        return Ok(CharacterData { trivial, ..data });
    }
    Err(McKayError::DegenerateEigenspace)
}

/// The McKay quiver: nodes are irreps, a_ij the multiplicity of irrep j in
/// (defining 2-dim rep) tensor irrep i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McKayGraph {
    pub adjacency: Vec<Vec<i64>>,
    pub dims: Vec<usize>,
    pub affine_node: usize,
}

impl McKayGraph {
    pub fn node_count(&self) -> usize {
        self.dims.len()
    }

    /// Loops appear only for the trivial group, where the defining rep is
    /// twice the (only) irrep.
    pub fn has_loop(&self) -> bool {
        (0..self.dims.len()).any(|i| self.adjacency[i][i] > 0)
    }
}

/// Builds the McKay graph from the defining 2-dimensional character.
pub fn mckay_graph(group: &MatrixGroup, chars: &CharacterData) -> Result<McKayGraph, McKayError> {
    let h = chars.class_count();
    let order = group.order();
    let defining: Vec<Complex64> = chars
        .reps
        .iter()
        .map(|&r| group.element(r).trace())
        .collect();
    let mut adjacency = vec![vec![0i64; h]; h];
    for i in 0..h {
        for j in 0..h {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..h {
                acc += defining[k]
                    * chars.table[j][k]
                    * chars.table[i][k].conj()
                    * chars.classes[k].len() as f64;
            }
            let v = acc / order as f64;
            if v.im.abs() > INTEGER_TOL || (v.re - v.re.round()).abs() > INTEGER_TOL {
                return Err(McKayError::NonIntegralMultiplicity(v.re));
            }
            adjacency[i][j] = v.re.round() as i64;
        }
    }
    for i in 0..h {
        for j in 0..h {
            assert_eq!(adjacency[i][j], adjacency[j][i], "tensor rule is symmetric");
        }
    }
    Ok(McKayGraph {
        adjacency,
        dims: chars.dims.clone(),
        affine_node: chars.trivial,
    })
}

/// Result of matching a McKay graph against the affine ADE shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineClassification {
    /// "A~n", "D~n", or "E~n".
    pub affine_label: String,
    /// The finite diagram left after deleting the affine node; None only
    /// for the trivial group (A~0, nothing remains).
    pub finite: Option<DynkinDiagram>,
    /// Graph node -> finite diagram node (None at the affine node).
    pub correspondence: Vec<Option<usize>>,
}

/// Classifies the graph as an affine ADE diagram and deletes the affine
/// node to recover the finite type.
pub fn classify_affine(graph: &McKayGraph) -> Result<AffineClassification, McKayError> {
    let n = graph.node_count();
    let adj = &graph.adjacency;
    let deg = |i: usize| -> i64 { (0..n).filter(|&j| j != i).map(|j| adj[i][j]).sum() };

    if n == 1 {
        if adj[0][0] == 2 {
            return Ok(AffineClassification {
                affine_label: "A~0".to_string(),
                finite: None,
                correspondence: vec![None],
            });
        }
        return Err(McKayError::UnrecognizedGraph);
    }
    if graph.has_loop() {
        return Err(McKayError::UnrecognizedGraph);
    }
    if n == 2 {
        if adj[0][1] == 2 {
            let finite = DynkinDiagram::new(TypeTag::A(1)).expect("A1 is valid");
            let mut correspondence = vec![None; 2];
            correspondence[1 - graph.affine_node] = Some(0);
            return Ok(AffineClassification {
                affine_label: "A~1".to_string(),
                finite: Some(finite),
                correspondence,
            });
        }
        return Err(McKayError::UnrecognizedGraph);
    }
    if (0..n).any(|i| (0..n).any(|j| i != j && adj[i][j] > 1)) {
        return Err(McKayError::UnrecognizedGraph);
    }

    // Simple-edged from here: a cycle is affine A, trees are affine D/E.
    let all_degree_two = (0..n).all(|i| deg(i) == 2);
    let (label, finite_tag) = if all_degree_two {
        (format!("A~{}", n - 1), TypeTag::A(n - 1))
    } else {
        let branch: Vec<usize> = (0..n).filter(|&i| deg(i) >= 3).collect();
        match n {
            5 if branch.len() == 1 && deg(branch[0]) == 4 => ("D~4".to_string(), TypeTag::D(4)),
            _ if branch.len() == 2 && branch.iter().all(|&b| deg(b) == 3) => {
                (format!("D~{}", n - 1), TypeTag::D(n - 1))
            }
            7 if branch.len() == 1 => ("E~6".to_string(), TypeTag::E(6)),
            8 if branch.len() == 1 => ("E~7".to_string(), TypeTag::E(7)),
            9 if branch.len() == 1 => ("E~8".to_string(), TypeTag::E(8)),
            _ => return Err(McKayError::UnrecognizedGraph),
        }
    };
    let finite = DynkinDiagram::new(finite_tag).map_err(|_| McKayError::UnrecognizedGraph)?;

    // Match the graph minus the affine node against the finite diagram by
    // brute-force isomorphism search.
    let rest: Vec<usize> = (0..n).filter(|&i| i != graph.affine_node).collect();
    let m = rest.len();
    assert_eq!(m, finite.rank());
    let perm_match = permutations_of(m).into_iter().find(|p| {
        (0..m).all(|a| {
            (0..m).all(|b| {
                let have = adj[rest[a]][rest[b]] != 0;
                let want = a != b && finite.label(p[a], p[b]) == 3;
                have == want
            })
        })
    });
    let Some(p) = perm_match else {
        return Err(McKayError::UnrecognizedGraph);
    };
    let mut correspondence = vec![None; n];
    for (a, &g) in rest.iter().enumerate() {
        correspondence[g] = Some(p[a]);
    }
    Ok(AffineClassification {
        affine_label: label,
        finite: Some(finite),
        correspondence,
    })
}

fn permutations_of(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations_of(m - 1) {
        for slot in 0..m {
            let mut p = rest.clone();
            p.insert(slot, m - 1);
            out.push(p);
        }
    }
    out
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Full JSON report: group, classes, characters, adjacency, classification.
pub fn mckay_json(
    group: &MatrixGroup,
    chars: &CharacterData,
    graph: &McKayGraph,
    class: &AffineClassification,
) -> Value {
    json!({
        "group": {
            "kind": group.kind().as_str(),
            "parameter": group.parameter(),
            "order": group.order(),
        },
        "class_sizes": chars.classes.iter().map(|c| c.len()).collect::<Vec<usize>>(),
        "character_table": chars
            .table
            .iter()
            .map(|row| {
                json!(row
                    .iter()
                    .map(|v| json!([round12(v.re), round12(v.im)]))
                    .collect::<Vec<Value>>())
            })
            .collect::<Vec<Value>>(),
        "dimensions": chars.dims,
        "adjacency": graph.adjacency,
        "affine_node": graph.affine_node,
        "classification": {
            "affine": class.affine_label,
            "finite": class.finite.as_ref().map(|d| d.tag().to_string()),
            "correspondence": class
                .correspondence
                .iter()
                .map(|c| match c {
                    Some(i) => json!(i + 1),
                    None => Value::Null,
                })
                .collect::<Vec<Value>>(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pipeline(kind: GroupKind, n: usize) -> (MatrixGroup, CharacterData, McKayGraph) {
        let g = build_group(kind, n).unwrap();
        let c = character_table(&g).unwrap();
        let m = mckay_graph(&g, &c).unwrap();
        (g, c, m)
    }

    #[test]
    fn group_orders() {
        for (kind, n, expect) in [
            (GroupKind::Cyclic, 1, 1),
            (GroupKind::Cyclic, 2, 2),
            (GroupKind::Cyclic, 7, 7),
            (GroupKind::BinaryDihedral, 2, 8),
            (GroupKind::BinaryDihedral, 3, 12),
            (GroupKind::BinaryTetrahedral, 0, 24),
            (GroupKind::BinaryOctahedral, 0, 48),
            (GroupKind::BinaryIcosahedral, 0, 120),
        ] {
            let g = build_group(kind, n).unwrap();
            assert_eq!(g.order(), expect, "{kind:?} {n}");
            assert!((g.element(0).det() - 1.0).norm() < 1e-9);
        }
        assert!(build_group(GroupKind::Cyclic, 0).is_err());
        assert!(build_group(GroupKind::BinaryDihedral, 1).is_err());
    }

    #[test]
    fn quaternion_group_structure() {
        let g = build_group(GroupKind::BinaryDihedral, 2).unwrap();
        assert_eq!(g.order(), 8);
        // Exactly one element of order 2 (the central -1).
        let order_two = (0..8)
            .filter(|&i| i != 0 && g.mul_index(i, i) == 0)
            .count();
        assert_eq!(order_two, 1);
        for i in 0..8 {
            assert_eq!(g.mul_index(i, g.inverse_index(i)), 0);
        }
    }

    #[test]
    fn cyclic_three_characters_are_cube_roots() {
        let (g, c, _) = pipeline(GroupKind::Cyclic, 3);
        assert_eq!(c.class_count(), 3);
        assert_eq!(c.dims, vec![1, 1, 1]);
        assert_eq!(g.order(), 3);
        // On a generator class the three characters take the three cube
        // roots of unity, one each.
        let gen_class = 1;
        let mut angles: Vec<i64> = c
            .table
            .iter()
            .map(|row| {
                let v = row[gen_class];
                ((v.arg() / std::f64::consts::TAU * 3.0).round() as i64).rem_euclid(3)
            })
            .collect();
        angles.sort_unstable();
        assert_eq!(angles, vec![0, 1, 2]);
    }

    #[test]
    fn binary_tetrahedral_dimensions() {
        let (g, c, _) = pipeline(GroupKind::BinaryTetrahedral, 0);
        assert_eq!(c.class_count(), 7);
        assert_eq!(c.dims, vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(c.dims.iter().map(|d| d * d).sum::<usize>(), g.order());
        assert_eq!(c.trivial, 0);
        assert!(c.table[c.trivial].iter().all(|v| (v - 1.0).norm() < 1e-6));
    }

    #[test]
    fn row_orthogonality_across_kinds() {
        for (kind, n) in [
            (GroupKind::Cyclic, 5),
            (GroupKind::BinaryDihedral, 3),
            (GroupKind::BinaryOctahedral, 0),
        ] {
            let (g, c, _) = pipeline(kind, n);
            for a in 0..c.class_count() {
                for b in 0..c.class_count() {
                    let ip = c.row_inner(g.order(), a, b);
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - expect).norm() < 1e-6, "{kind:?} {a} {b}: {ip}");
                }
            }
        }
    }

    #[test]
    fn trivial_group_gives_a_loop() {
        let (_, _, m) = pipeline(GroupKind::Cyclic, 1);
        assert_eq!(m.adjacency, vec![vec![2]]);
        assert!(m.has_loop());
        let class = classify_affine(&m).unwrap();
        assert_eq!(class.affine_label, "A~0");
        assert!(class.finite.is_none());
    }

    #[test]
    fn center_gives_the_doubled_bond() {
        let (_, _, m) = pipeline(GroupKind::Cyclic, 2);
        assert_eq!(m.adjacency[0][1], 2);
        assert_eq!(m.adjacency[0][0], 0);
        assert!(!m.has_loop());
        let class = classify_affine(&m).unwrap();
        assert_eq!(class.affine_label, "A~1");
        assert_eq!(class.finite.unwrap().tag(), TypeTag::A(1));
    }

    #[test]
    fn cyclic_three_is_a_triangle() {
        let (_, _, m) = pipeline(GroupKind::Cyclic, 3);
        for i in 0..3 {
            assert_eq!(m.adjacency[i][i], 0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(m.adjacency[i][j], 1);
                }
            }
        }
        assert_eq!(classify_affine(&m).unwrap().affine_label, "A~2");
    }

    #[test]
    fn classification_matches_kind() {
        let cases: Vec<(GroupKind, usize, &str, TypeTag)> = vec![
            (GroupKind::Cyclic, 3, "A~2", TypeTag::A(2)),
            (GroupKind::Cyclic, 6, "A~5", TypeTag::A(5)),
            (GroupKind::Cyclic, 8, "A~7", TypeTag::A(7)),
            (GroupKind::BinaryDihedral, 2, "D~4", TypeTag::D(4)),
            (GroupKind::BinaryDihedral, 3, "D~5", TypeTag::D(5)),
            (GroupKind::BinaryDihedral, 6, "D~8", TypeTag::D(8)),
            (GroupKind::BinaryTetrahedral, 0, "E~6", TypeTag::E(6)),
            (GroupKind::BinaryOctahedral, 0, "E~7", TypeTag::E(7)),
            (GroupKind::BinaryIcosahedral, 0, "E~8", TypeTag::E(8)),
        ];
        for (kind, n, affine, finite) in cases {
            let (_, _, m) = pipeline(kind, n);
            let class = classify_affine(&m).unwrap();
            assert_eq!(class.affine_label, affine, "{kind:?} {n}");
            let fin = class.finite.unwrap();
            assert_eq!(fin.tag(), finite, "{kind:?} {n}");
            // The correspondence is a genuine graph isomorphism away from
            // the affine node.
            let nodes = m.node_count();
            for a in 0..nodes {
                for b in 0..nodes {
                    if a == b || a == m.affine_node || b == m.affine_node {
                        continue;
                    }
                    let (fa, fb) = (
                        class.correspondence[a].unwrap(),
                        class.correspondence[b].unwrap(),
                    );
                    assert_eq!(
                        m.adjacency[a][b] != 0,
                        fin.label(fa, fb) == 3,
                        "{kind:?} {a} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn dimensions_are_affine_marks() {
        for (kind, n) in [
            (GroupKind::Cyclic, 4),
            (GroupKind::BinaryDihedral, 2),
            (GroupKind::BinaryDihedral, 4),
            (GroupKind::BinaryTetrahedral, 0),
            (GroupKind::BinaryOctahedral, 0),
            (GroupKind::BinaryIcosahedral, 0),
        ] {
            let (_, _, m) = pipeline(kind, n);
            for i in 0..m.node_count() {
                let lhs = 2 * m.dims[i] as i64;
                let rhs: i64 = (0..m.node_count())
                    .map(|j| m.adjacency[i][j] * m.dims[j] as i64)
                    .sum();
                assert_eq!(lhs, rhs, "{kind:?} node {i}");
            }
        }
    }

    #[test]
    fn kind_strings_round_trip() {
        for kind in [
            GroupKind::Cyclic,
            GroupKind::BinaryDihedral,
            GroupKind::BinaryTetrahedral,
            GroupKind::BinaryOctahedral,
            GroupKind::BinaryIcosahedral,
        ] {
            assert_eq!(GroupKind::parse(kind.as_str()).unwrap(), kind);
        }
        assert!(GroupKind::parse("dodecahedral").is_err());
    }

    #[test]
    fn json_report_is_complete() {
        let (g, c, m) = pipeline(GroupKind::BinaryDihedral, 2);
        let class = classify_affine(&m).unwrap();
        let v = mckay_json(&g, &c, &m, &class);
        assert_eq!(v["group"]["order"], 8);
        assert_eq!(v["classification"]["affine"], "D~4");
        assert_eq!(v["classification"]["finite"], "D4");
        assert_eq!(v["character_table"].as_array().unwrap().len(), 5);
    }
}
