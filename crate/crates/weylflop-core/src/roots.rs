//! Root systems over the simple-root basis: integer coordinates, exact
//! rational Gram pairings, closure-generated positive roots. Roots are
//! sorted by height then lexicographically, so enumeration order is stable
//! across runs and platforms.

use crate::diagram::{DynkinDiagram, TypeTag};
use crate::linalg::{rat, IMat, QMat, Rat};
use num::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("vector {0:?} has mixed coordinate signs; not a root")]
    MixedSigns(Vec<i64>),
    #[error("surface lattices require a simply-laced diagram, got {0}")]
    NotSimplyLaced(TypeTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// A root in simple-root coordinates. Coordinates of a root are either all
/// nonnegative or all nonpositive; constructors enforce this.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    coords: Vec<i64>,
}

impl Root {
    pub fn new(coords: Vec<i64>) -> Result<Self, RootError> {
        if coords.iter().all(|&c| c == 0) {
            return Err(RootError::MixedSigns(coords));
        }
        let pos = coords.iter().any(|&c| c > 0);
        let neg = coords.iter().any(|&c| c < 0);
        if pos && neg {
            return Err(RootError::MixedSigns(coords));
        }
        Ok(Root { coords })
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        Root { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn sign(&self) -> Sign {
        if self.coords.iter().any(|&c| c > 0) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn negated(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    /// Sum of simple-root coordinates; positive roots have height >= 1.
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.coords.iter().map(|&c| rat(c, 1)).collect()
    }
}

/// A finite root system generated from a diagram's Gram form.
#[derive(Debug, Clone)]
pub struct RootSystem {
    diagram: DynkinDiagram,
    gram: QMat,
    /// Cartan integers c[i][j] = 2 <l_i, l_j> / <l_i, l_i>.
    cartan: Vec<Vec<i64>>,
    positive: Vec<Root>,
    index: BTreeMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn new(diagram: DynkinDiagram) -> Self {
        let n = diagram.rank();
        let gram = diagram.gram();
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = rat(2, 1) * gram.at(i, j) / gram.at(i, i);
                        assert!(c.is_integer(), "non-integral Cartan entry");
                        c.to_integer()
                    })
                    .collect()
            })
            .collect();

        // Closure of the simple roots under all simple reflections.
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: Vec<Vec<i64>> = (0..n)
            .map(|i| Root::simple(n, i).coords().to_vec())
            .collect();
        for v in &queue {
            seen.insert(v.clone());
        }
        while let Some(v) = queue.pop() {
            for i in 0..n {
                let mut w = v.clone();
                let s: i64 = (0..n).map(|j| cartan[i][j] * v[j]).sum();
                w[i] -= s;
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        let mut positive: Vec<Root> = seen
            .into_iter()
            .filter(|v| v.iter().all(|&c| c >= 0))
            .map(|v| Root::new(v).expect("closure produced a non-root"))
            .collect();
        positive.sort_by_key(|r| (r.height(), r.coords().to_vec()));
        let index = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.coords().to_vec(), k))
            .collect();
        RootSystem {
            diagram,
            gram,
            cartan,
            positive,
            index,
        }
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(self.rank(), i)
    }

    /// Index of a positive root (the positive representative is looked up
    /// for negative roots).
    pub fn positive_index(&self, r: &Root) -> Option<usize> {
        let key = match r.sign() {
            Sign::Positive => r.coords().to_vec(),
            Sign::Negative => r.negated().coords().to_vec(),
        };
        self.index.get(&key).copied()
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        Root::new(coords.to_vec())
            .ok()
            .and_then(|r| self.positive_index(&r))
            .is_some()
    }

    /// Exact pairing <x, y> through the Gram form.
    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let n = self.rank();
        let mut acc = Rat::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                acc += x[i] * self.gram.at(i, j) * y[j];
            }
        }
        acc
    }

    pub fn pair_root(&self, x: &Root, y: &[Rat]) -> Rat {
        self.pair(&x.to_rat(), y)
    }

    /// Reflection of an arbitrary rational vector in the hyperplane of a
    /// root: v - 2 <v, r> / <r, r> * r.
    pub fn reflect(&self, root: &Root, v: &[Rat]) -> Vec<Rat> {
        let r = root.to_rat();
        let f = rat(2, 1) * self.pair(&v.to_vec(), &r) / self.pair(&r, &r);
        v.iter().zip(r.iter()).map(|(&vi, &ri)| vi - f * ri).collect()
    }

    /// Matrix of the simple reflection r_i on the simple-root basis
    /// (integer Cartan entries).
    pub fn simple_reflection_matrix(&self, i: usize) -> IMat {
        let n = self.rank();
        let mut m = IMat::identity(n);
        for j in 0..n {
            let v = if i == j { 1 - self.cartan[i][j] } else { -self.cartan[i][j] };
            m.set(i, j, v);
        }
        m
    }

    /// Positive roots lying in the integer span of the simple roots i, j.
    /// For a pair of simple roots this is the rank-2 parabolic subsystem,
    /// of size m_ij.
    pub fn rank2_positive_roots(&self, i: usize, j: usize) -> Vec<Root> {
        assert_ne!(i, j);
        self.positive
            .iter()
            .filter(|r| {
                r.coords()
                    .iter()
                    .enumerate()
                    .all(|(k, &c)| c == 0 || k == i || k == j)
            })
            .cloned()
            .collect()
    }

    pub fn roots_json(&self) -> Value {
        json!({
            "diagram": self.diagram.json(),
            "count": self.positive.len(),
            "positive_roots": self
                .positive
                .iter()
                .map(|r| json!(r.coords()))
                .collect::<Vec<Value>>(),
        })
    }
}

/// The intersection lattice of a configuration of (-2)-classes indexed by
/// diagram nodes: pairing is minus the Gram form, so [E_j].[E_j] = -2 and
/// [E_i].[E_j] = 1 exactly on diagram edges. Simply-laced only.
#[derive(Debug, Clone)]
pub struct SurfaceLattice {
    pairing: Vec<Vec<i64>>,
}

impl SurfaceLattice {
    pub fn new(diagram: &DynkinDiagram) -> Result<Self, RootError> {
        if !diagram.is_simply_laced() {
            return Err(RootError::NotSimplyLaced(diagram.tag()));
        }
        let g = diagram.gram();
        let n = diagram.rank();
        let pairing = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = -g.at(i, j);
                        assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(SurfaceLattice { pairing })
    }

    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.pairing[i][j]
    }

    /// Pairing of [E_j] against a rational class vector.
    pub fn pair_class(&self, j: usize, v: &[Rat]) -> Rat {
        v.iter()
            .enumerate()
            .map(|(k, &vk)| rat(self.pairing[j][k], 1) * vk)
            .sum()
    }

    /// The lattice reflection w ↦ w + ([E_j].w) [E_j]; with the negative
    /// definite pairing this is the simple reflection in the j-th root.
    pub fn reflect_class(&self, j: usize, v: &[Rat]) -> Vec<Rat> {
        let f = self.pair_class(j, v);
        v.iter()
            .enumerate()
            .map(|(k, &vk)| if k == j { vk + f } else { vk })
            .collect()
    }
}
