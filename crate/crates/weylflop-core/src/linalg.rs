//! Small exact dense matrices: integer matrices for Weyl-group elements and
//! rational matrices for Gram forms and basis changes. Dimensions never
//! exceed the maximum diagram rank, so everything is plain `Vec` row-major.

use num::rational::Ratio;
use num::{One, Signed, Zero};

/// Exact rational scalar. Magnitudes stay tiny (Gram entries, basis
/// coefficients), so a machine-word ratio suffices.
pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

/// Dense square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    pub n: usize,
    pub a: Vec<i64>,
}

impl IMat {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        IMat { n, a }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        IMat {
            n,
            a: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v = self.at(i, k);
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += v * rhs.at(k, j);
                }
            }
        }
        IMat { n, a: out }
    }

    /// Matrix-vector product (vectors are coordinate columns).
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| Rat::from_integer(self.at(i, j)) * v[j])
                    .sum()
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IMat::identity(self.n)
    }

    pub fn to_qmat(&self) -> QMat {
        QMat {
            n: self.n,
            a: self.a.iter().map(|&x| Rat::from_integer(x)).collect(),
        }
    }
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            writeln!(f, "{:?}", &self.a[i * self.n..(i + 1) * self.n])?;
        }
        Ok(())
    }
}

/// Dense square rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    pub n: usize,
    pub a: Vec<Rat>,
}

impl QMat {
    pub fn zero(n: usize) -> Self {
        QMat {
            n,
            a: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        QMat {
            n,
            a: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Rat {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = QMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.at(i, k);
                if v.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let cur = out.at(i, j);
                    out.set(i, j, cur + v * rhs.at(k, j));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn scale(&self, s: Rat) -> QMat {
        QMat {
            n: self.n,
            a: self.a.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn sub(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.n, rhs.n);
        QMat {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(rhs.a.iter())
                .map(|(&x, &y)| x - y)
                .collect(),
        }
    }

    /// Rank by fraction-free-enough Gaussian elimination (exact).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let n = m.n;
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let Some(piv) = (row..n).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..n {
                    let (x, y) = (m.at(row, j), m.at(piv, j));
                    m.set(row, j, y);
                    m.set(piv, j, x);
                }
            }
            let p = m.at(row, col);
            for r in row + 1..n {
                let f = m.at(r, col) / p;
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = m.at(r, j) - f * m.at(row, j);
                    m.set(r, j, v);
                }
            }
            rank += 1;
            row += 1;
            if row == n {
                break;
            }
        }
        rank
    }
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            writeln!(f, "{:?}", &self.a[i * self.n..(i + 1) * self.n])?;
        }
        Ok(())
    }
}

/// Solves `A x = b` exactly. Returns `None` when `A` is singular.
pub fn solve(a: &QMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.n;
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..n).map(|j| a.at(i, j)).collect();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for j in col..=n {
            m[col][j] = m[col][j] / p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col];
            for j in col..=n {
                let v = m[r][j] - f * m[col][j];
                m[r][j] = v;
            }
        }
    }
    Some((0..n).map(|i| m[i][n]).collect())
}

/// Least-common scalar `c` with `lhs = c * rhs`, if the matrices are
/// proportional; `None` otherwise. Zero matrices are not proportional.
pub fn proportionality(lhs: &QMat, rhs: &QMat) -> Option<Rat> {
    assert_eq!(lhs.n, rhs.n);
    let mut c: Option<Rat> = None;
    for (x, y) in lhs.a.iter().zip(rhs.a.iter()) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let f = *x / *y;
                match c {
                    None => c = Some(f),
                    Some(g) if g == f => {}
                    _ => return None,
                }
            }
            _ => return None,
        }
    }
    c.filter(|f| f.is_positive())
}

/// Formats a rational as `p` or `p/q` (reduced, `q > 0`).
pub fn rat_str(r: &Rat) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
