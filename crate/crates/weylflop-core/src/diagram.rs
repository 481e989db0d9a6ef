//! Finite-type Dynkin diagrams with Coxeter labels m_ij in {2,3,4,6} and
//! their standard symmetrized Gram forms. Short roots are normalized to
//! squared length 2 in every type, which keeps all Gram matrices integral
//! and gives simply-laced roots squared length 2.
//!
//! Nodes are indexed 0-based in this API; JSON payloads and permutation
//! cycle notation use 1-based node ids.

use crate::linalg::{rat, QMat, Rat};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("unknown diagram type {0:?}")]
    UnknownType(String),
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: String, rank: usize },
}

/// Classification tag. `A1xA1` is the explicit rank-2 reducible product;
/// it is the only reducible diagram admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeTag {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    A1xA1,
}

impl TypeTag {
    pub fn parse(family: &str, rank: usize) -> Result<Self, DiagramError> {
        let tag = match family.to_ascii_uppercase().as_str() {
            "A" => TypeTag::A(rank),
            "B" => TypeTag::B(rank),
            "C" => TypeTag::C(rank),
            "D" => TypeTag::D(rank),
            "E" => TypeTag::E(rank),
            "F" => TypeTag::F4,
            "G" => TypeTag::G2,
            "A1XA1" => TypeTag::A1xA1,
            other => return Err(DiagramError::UnknownType(other.to_string())),
        };
        if tag.rank() != rank {
            return Err(DiagramError::InvalidRank {
                family: family.to_string(),
                rank,
            });
        }
        tag.validate()?;
        Ok(tag)
    }

    /// Parses a compact type string such as "A3", "F4", or "A1xA1".
    pub fn parse_str(text: &str) -> Result<Self, DiagramError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("A1XA1") {
            return TypeTag::parse("A1XA1", 2);
        }
        let family: String = t.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
        let digits = &t[family.len()..];
        let rank: usize = digits
            .parse()
            .map_err(|_| DiagramError::UnknownType(t.to_string()))?;
        TypeTag::parse(&family, rank)
    }

    fn validate(self) -> Result<Self, DiagramError> {
        let ok = match self {
            TypeTag::A(n) => n >= 1,
            TypeTag::B(n) | TypeTag::C(n) => n >= 2,
            TypeTag::D(n) => n >= 4,
            TypeTag::E(n) => (6..=8).contains(&n),
            TypeTag::F4 | TypeTag::G2 | TypeTag::A1xA1 => true,
        };
        if ok {
            Ok(self)
        } else {
            let (family, rank) = (self.family().to_string(), self.rank());
            Err(DiagramError::InvalidRank { family, rank })
        }
    }

    pub fn rank(self) -> usize {
        match self {
            TypeTag::A(n) | TypeTag::B(n) | TypeTag::C(n) | TypeTag::D(n) | TypeTag::E(n) => n,
            TypeTag::F4 => 4,
            TypeTag::G2 | TypeTag::A1xA1 => 2,
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            TypeTag::A(_) => "A",
            TypeTag::B(_) => "B",
            TypeTag::C(_) => "C",
            TypeTag::D(_) => "D",
            TypeTag::E(_) => "E",
            TypeTag::F4 => "F",
            TypeTag::G2 => "G",
            TypeTag::A1xA1 => "A1xA1",
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(
            self,
            TypeTag::A(_) | TypeTag::D(_) | TypeTag::E(_) | TypeTag::A1xA1
        )
    }

    /// Equality as Coxeter diagrams: B_n and C_n carry identical labels and
    /// differ only in root lengths, so they are identified here.
    pub fn coxeter_eq(self, other: TypeTag) -> bool {
        let key = |t: TypeTag| match t {
            TypeTag::C(n) => TypeTag::B(n),
            t => t,
        };
        key(self) == key(other)
    }
}

impl std::fmt::Display for TypeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypeTag::A1xA1 => write!(f, "A1xA1"),
            t => write!(f, "{}{}", t.family(), t.rank()),
        }
    }
}

/// A finite-type Dynkin diagram: ordered nodes plus Coxeter labels.
///
/// Node ordering convention: chain nodes come first in chain order and
/// branch nodes last. For D_n the fork is (n-3)--(n-2) and (n-3)--(n-1)
/// in 0-based indices (chain 0..n-2, node n-1 attached to n-3); for E_n
/// the chain is 0..n-2 with node n-1 attached to node n-4. For B_n, C_n,
/// F_4 and G_2 the higher-label bond sits at the high-index end of the
/// chain per the Gram matrices below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinDiagram {
    tag: TypeTag,
    /// Edges (i, j, m) with i < j and m in {3,4,6}; absent pairs have m = 2.
    edges: Vec<(usize, usize, u8)>,
}

impl DynkinDiagram {
    pub fn new(tag: TypeTag) -> Result<Self, DiagramError> {
        tag.validate()?;
        let n = tag.rank();
        let chain = |m_last: u8| -> Vec<(usize, usize, u8)> {
            (0..n - 1)
                .map(|i| (i, i + 1, if i + 2 == n { m_last } else { 3 }))
                .collect()
        };
        let edges = match tag {
            TypeTag::A(1) => Vec::new(),
            TypeTag::A(_) => chain(3),
            TypeTag::B(_) | TypeTag::C(_) => chain(4),
            TypeTag::D(_) => {
                let mut e: Vec<(usize, usize, u8)> =
                    (0..n - 2).map(|i| (i, i + 1, 3)).collect();
                e.push((n - 3, n - 1, 3));
                e
            }
            TypeTag::E(_) => {
                let mut e: Vec<(usize, usize, u8)> =
                    (0..n - 2).map(|i| (i, i + 1, 3)).collect();
                e.push((n - 4, n - 1, 3));
                e
            }
            TypeTag::F4 => vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
            TypeTag::G2 => vec![(0, 1, 6)],
            TypeTag::A1xA1 => Vec::new(),
        };
        Ok(DynkinDiagram { tag, edges })
    }

    pub fn parse(family: &str, rank: usize) -> Result<Self, DiagramError> {
        DynkinDiagram::new(TypeTag::parse(family, rank)?)
    }

    /// Parses a compact type string such as "A3", "F4", or "A1xA1".
    pub fn parse_str(text: &str) -> Result<Self, DiagramError> {
        DynkinDiagram::new(TypeTag::parse_str(text)?)
    }

    pub fn tag(&self) -> TypeTag {
        self.tag
    }

    pub fn rank(&self) -> usize {
        self.tag.rank()
    }

    /// Coxeter label m_ij (m_ii = 1 by convention).
    pub fn label(&self, i: usize, j: usize) -> u8 {
        if i == j {
            return 1;
        }
        let (a, b) = (i.min(j), i.max(j));
        self.edges
            .iter()
            .find(|&&(x, y, _)| (x, y) == (a, b))
            .map(|&(_, _, m)| m)
            .unwrap_or(2)
    }

    pub fn edges(&self) -> &[(usize, usize, u8)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b, _)| match () {
                _ if a == i => Some(b),
                _ if b == i => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_simply_laced(&self) -> bool {
        self.tag.is_simply_laced()
    }

    /// Standard symmetrized Gram form; short roots have squared length 2.
    pub fn gram(&self) -> QMat {
        let n = self.rank();
        let mut g = QMat::zero(n);
        let diag: Vec<i64> = match self.tag {
            TypeTag::B(_) => (0..n).map(|i| if i + 1 == n { 2 } else { 4 }).collect(),
            TypeTag::C(_) => (0..n).map(|i| if i + 1 == n { 4 } else { 2 }).collect(),
            TypeTag::F4 => vec![4, 4, 2, 2],
            TypeTag::G2 => vec![2, 6],
            _ => vec![2; n],
        };
        for (i, &d) in diag.iter().enumerate() {
            g.set(i, i, rat(d, 1));
        }
        for &(i, j, m) in &self.edges {
            let v: Rat = match m {
                // m = 3 joins roots of equal length d; <i,j> = -d/2.
                3 => {
                    debug_assert_eq!(diag[i], diag[j]);
                    rat(-diag[i], 2)
                }
                4 => rat(-2, 1),
                6 => rat(-3, 1),
                _ => unreachable!("unexpected bond (m = {m})"),
            };
            g.set(i, j, v);
            g.set(j, i, v);
        }
        g
    }

    pub fn json(&self) -> Value {
        let labels: Vec<Value> = self
            .edges
            .iter()
            .map(|&(i, j, m)| json!([i + 1, j + 1, m]))
            .collect();
        json!({
            "type": self.tag.family(),
            "rank": self.rank(),
            "nodes": (1..=self.rank()).collect::<Vec<usize>>(),
            "labels": labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_labels_a2_g2() {
        let a2 = DynkinDiagram::parse("A", 2).unwrap();
        assert_eq!(a2.label(0, 1), 3);
        let g2 = DynkinDiagram::parse("G", 2).unwrap();
        assert_eq!(g2.label(0, 1), 6);
        assert_eq!(g2.label(1, 0), 6);
        assert_eq!(g2.label(0, 0), 1);
    }

    #[test]
    fn rejects_invalid_ranks() {
        assert!(DynkinDiagram::parse("E", 9).is_err());
        assert!(DynkinDiagram::parse("D", 3).is_err());
        assert!(DynkinDiagram::parse("B", 1).is_err());
        assert!(DynkinDiagram::parse("Q", 2).is_err());
        assert!(DynkinDiagram::parse("A", 0).is_err());
    }

    #[test]
    fn a1_has_no_edges() {
        let a1 = DynkinDiagram::parse("A", 1).unwrap();
        assert!(a1.edges().is_empty());
        assert_eq!(a1.rank(), 1);
    }

    #[test]
    fn product_diagram_is_orthogonal() {
        let p = DynkinDiagram::parse("A1xA1", 2).unwrap();
        assert_eq!(p.label(0, 1), 2);
        assert_eq!(p.gram().at(0, 1), rat(0, 1));
    }

    #[test]
    fn gram_matches_cartan_integers() {
        // 2 g_ij / g_ii must be the Cartan integers of each type.
        for (fam, rank, expect) in [
            ("B", 3usize, vec![(1usize, 2usize, -1i64, -2i64)]),
            ("C", 3, vec![(1, 2, -2, -1)]),
            ("G", 2, vec![(0, 1, -3, -1)]),
            ("F", 4, vec![(1, 2, -1, -2)]),
        ] {
            let d = DynkinDiagram::parse(fam, rank).unwrap();
            let g = d.gram();
            for (i, j, cij, cji) in expect {
                assert_eq!(rat(2, 1) * g.at(i, j) / g.at(i, i), rat(cij, 1), "{fam} c_ij");
                assert_eq!(rat(2, 1) * g.at(i, j) / g.at(j, j), rat(cji, 1), "{fam} c_ji");
            }
        }
    }

    #[test]
    fn d4_fork_structure() {
        let d4 = DynkinDiagram::parse("D", 4).unwrap();
        assert_eq!(d4.neighbors(1), vec![0, 2, 3]);
        assert_eq!(d4.label(2, 3), 2);
    }

    #[test]
    fn e_series_branch_node() {
        let e6 = DynkinDiagram::parse("E", 6).unwrap();
        assert_eq!(e6.neighbors(2), vec![1, 3, 5]);
        let e8 = DynkinDiagram::parse("E", 8).unwrap();
        assert_eq!(e8.neighbors(4), vec![3, 5, 7]);
    }

    #[test]
    fn coxeter_eq_identifies_b_c() {
        assert!(TypeTag::B(3).coxeter_eq(TypeTag::C(3)));
        assert!(!TypeTag::B(3).coxeter_eq(TypeTag::B(4)));
        assert!(TypeTag::G2.coxeter_eq(TypeTag::G2));
    }
}
