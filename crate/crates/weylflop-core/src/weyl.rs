//! Weyl-group elements as exact integer matrices on the simple-root basis,
//! together with the descent tests that drive the Garside normal form.
//! Columns of the matrix are images of simple roots, hence are roots; a
//! column's sign is the sign of its first nonzero entry, which makes
//! descent tests O(rank) with no length computations.

use crate::linalg::{IMat, QMat};
use crate::roots::{Root, RootSystem, Sign};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    mat: IMat,
    inv: IMat,
}

fn col_sign(m: &IMat, j: usize) -> Sign {
    for i in 0..m.n {
        let v = m.at(i, j);
        if v > 0 {
            return Sign::Positive;
        }
        if v < 0 {
            return Sign::Negative;
        }
    }
    panic!("zero column in a Weyl matrix");
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            mat: IMat::identity(rank),
            inv: IMat::identity(rank),
        }
    }

    pub fn simple(sys: &RootSystem, i: usize) -> Self {
        let m = sys.simple_reflection_matrix(i);
        WeylElement {
            inv: m.clone(),
            mat: m,
        }
    }

    pub fn from_word(sys: &RootSystem, word: &[usize]) -> Self {
        word.iter()
            .fold(WeylElement::identity(sys.rank()), |acc, &i| {
                acc.mul(&WeylElement::simple(sys, i))
            })
    }

    pub fn rank(&self) -> usize {
        self.mat.n
    }

    pub fn mat(&self) -> &IMat {
        &self.mat
    }

    /// Group product: (a.mul(b))(v) = a(b(v)).
    pub fn mul(&self, rhs: &WeylElement) -> WeylElement {
        WeylElement {
            mat: self.mat.mul(&rhs.mat),
            inv: rhs.inv.mul(&self.inv),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            mat: self.inv.clone(),
            inv: self.mat.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.mat.apply(v)
    }

    pub fn apply_root(&self, r: &Root) -> Root {
        Root::new(self.mat.apply(r.coords())).expect("Weyl image of a root is a root")
    }

    /// Right descent at i: l(w r_i) < l(w), equivalently w(l_i) < 0.
    pub fn right_descent(&self, i: usize) -> bool {
        col_sign(&self.mat, i) == Sign::Negative
    }

    /// Left descent at i: l(r_i w) < l(w), equivalently w^{-1}(l_i) < 0.
    pub fn left_descent(&self, i: usize) -> bool {
        col_sign(&self.inv, i) == Sign::Negative
    }

    /// Reduced length = number of positive roots sent negative.
    pub fn length(&self, sys: &RootSystem) -> usize {
        self.roots_sent_negative(sys).len()
    }

    /// Positive roots mapped to negative roots (the inversion set).
    pub fn roots_sent_negative(&self, sys: &RootSystem) -> Vec<Root> {
        sys.positive_roots()
            .iter()
            .filter(|r| self.apply_root(r).sign() == Sign::Negative)
            .cloned()
            .collect()
    }

    /// Lexicographically smallest reduced word, via smallest left descents.
    pub fn canonical_word(&self, sys: &RootSystem) -> Vec<usize> {
        let mut w = self.clone();
        let mut out = Vec::new();
        while !w.is_identity() {
            let i = (0..w.rank())
                .find(|&i| w.left_descent(i))
                .expect("non-identity element has a left descent");
            out.push(i);
            w = WeylElement::simple(sys, i).mul(&w);
        }
        out
    }

    /// Multiplicative order, with a defensive cap.
    pub fn order(&self) -> usize {
        let mut w = self.clone();
        for k in 1..=10_000 {
            if w.is_identity() {
                return k;
            }
            w = w.mul(self);
        }
        panic!("element order exceeds cap");
    }

    /// True when the element is a reflection: an involution whose fixed
    /// space has codimension one.
    pub fn is_reflection(&self) -> bool {
        if self.is_identity() || !self.mul(self).is_identity() {
            return false;
        }
        let q = self.mat.to_qmat().sub(&QMat::identity(self.rank()));
        q.rank() == 1
    }

    /// The positive root whose reflection this is, when `is_reflection`.
    pub fn reflection_root(&self, sys: &RootSystem) -> Option<Root> {
        if !self.is_reflection() {
            return None;
        }
        // A reflection negates exactly one positive root: the one spanning
        // the (-1)-eigenspace.
        sys.positive_roots()
            .iter()
            .find(|r| self.apply_root(r) == r.negated())
            .cloned()
    }

    pub fn json(&self, sys: &RootSystem) -> Value {
        let n = self.rank();
        let rows: Vec<Value> = (0..n)
            .map(|i| json!((0..n).map(|j| self.mat.at(i, j).to_string()).collect::<Vec<_>>()))
            .collect();
        json!({
            "word": self.canonical_word(sys).iter().map(|&i| i + 1).collect::<Vec<usize>>(),
            "matrix": rows,
        })
    }
}

/// The longest element w_0, by greedy length ascent.
pub fn longest_element(sys: &RootSystem) -> WeylElement {
    let mut w = WeylElement::identity(sys.rank());
    loop {
        match (0..sys.rank()).find(|&i| !w.right_descent(i)) {
            Some(i) => w = w.mul(&WeylElement::simple(sys, i)),
            None => return w,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub i: usize,
    pub j: usize,
    pub expected_order: usize,
    pub observed_order: usize,
}

#[derive(Debug, Clone)]
pub struct CoxeterReport {
    pub involutions_ok: bool,
    pub gram_preserved: bool,
    pub relations: Vec<RelationCheck>,
}

impl CoxeterReport {
    pub fn ok(&self) -> bool {
        self.involutions_ok
            && self.gram_preserved
            && self
                .relations
                .iter()
                .all(|r| r.expected_order == r.observed_order)
    }

    pub fn json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "involutions_ok": self.involutions_ok,
            "gram_preserved": self.gram_preserved,
            "relations": self.relations.iter().map(|r| json!({
                "i": r.i + 1,
                "j": r.j + 1,
                "expected_order": r.expected_order,
                "observed_order": r.observed_order,
            })).collect::<Vec<Value>>(),
        })
    }
}

/// Checks r_i^2 = 1, the exact order of every product r_i r_j, and that all
/// simple reflections preserve the Gram form. Orders are found by iterating
/// matrix powers, so "no smaller power is the identity" is verified too.
pub fn verify_coxeter(sys: &RootSystem) -> CoxeterReport {
    let n = sys.rank();
    let gram = sys.gram();
    let mut involutions_ok = true;
    let mut gram_preserved = true;
    for i in 0..n {
        let s = WeylElement::simple(sys, i);
        involutions_ok &= s.mul(&s).is_identity() && !s.is_identity();
        let m = s.mat().to_qmat();
        gram_preserved &= m.transpose().mul(gram).mul(&m) == *gram;
    }
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let prod = WeylElement::simple(sys, i).mul(&WeylElement::simple(sys, j));
            relations.push(RelationCheck {
                i,
                j,
                expected_order: sys.diagram().label(i, j) as usize,
                observed_order: prod.order(),
            });
        }
    }
    CoxeterReport {
        involutions_ok,
        gram_preserved,
        relations,
    }
}
