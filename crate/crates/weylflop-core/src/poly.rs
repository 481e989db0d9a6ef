//! Exact Laurent polynomials over the rationals.
//!
//! A `RatPoly` stores a dense coefficient window starting at an arbitrary
//! (possibly negative) exponent, so the same type serves honest polynomials
//! on the affine line and Laurent polynomials on the punctured line. All
//! arithmetic is exact; coefficients are arbitrary-precision rationals
//! because Euclidean gcd chains blow up fixed-width numerators fast.
//!
//! Invariant: the window is trimmed (first and last stored coefficients are
//! nonzero) and the zero polynomial is the empty window at start 0.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::{json, Value};
use std::fmt;

pub fn brat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q` in lowest terms.
pub fn brat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (reduced or not). Returns None on malformed input
/// or zero denominator.
pub fn parse_brat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn rat_to_brat(r: crate::linalg::Rat) -> BigRational {
    brat(*r.numer(), *r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    start: i64,
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly {
            start: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, exponent: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            RatPoly {
                start: exponent,
                coeffs: vec![c],
            }
        }
    }

    /// Builds from a dense window; trims leading/trailing zeros.
    pub fn from_window(start: i64, coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { start, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.start += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with nonzero coefficient (None for zero).
    pub fn ord(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Highest exponent with nonzero coefficient (None for zero).
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, exponent: i64) -> BigRational {
        let idx = exponent - self.start;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            BigRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Exponent/coefficient pairs of nonzero terms, ascending.
    pub fn terms(&self) -> Vec<(i64, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.start + k as i64, c.clone()))
            .collect()
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.start >= 0
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.start == 0 && self.coeffs.len() == 1)
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let start = self.start.min(rhs.start);
        let end = (self.start + self.coeffs.len() as i64).max(rhs.start + rhs.coeffs.len() as i64);
        let mut coeffs = vec![BigRational::zero(); (end - start) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.start - start) as usize + k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.start - start) as usize + k] += c;
        }
        Self::from_window(start, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_window(self.start + rhs.start, coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            start: self.start,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by x^e.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            RatPoly {
                start: self.start + e,
                coeffs: self.coeffs.clone(),
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let coeffs: Vec<BigRational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigRational::from(BigInt::from(self.start + k as i64)))
            .collect();
        Self::from_window(self.start - 1, coeffs)
    }

    /// Evaluates at a point. None when the point is 0 and negative
    /// exponents are present.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if x.is_zero() && self.start < 0 {
            return None;
        }
        // Horner on the window, then scale by x^start.
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if x.is_zero() {
            return Some(if self.start == 0 {
                self.coeffs[0].clone()
            } else {
                BigRational::zero()
            });
        }
        let mut power = BigRational::one();
        let mut base = if self.start < 0 {
            BigRational::one() / x
        } else {
            x.clone()
        };
        let mut e = self.start.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                power *= &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Some(acc * power)
    }

    /// Scales to leading coefficient 1 (identity on zero).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.leading_coeff();
        self.scale(&(BigRational::one() / lead))
    }

    /// Exact division: Some(q) with self = q * d, None when d does not
    /// divide self (or d is zero).
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r) = div_rem_windows(&self.coeffs, &d.coeffs);
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_window(self.start - d.start, q))
    }

    /// Monic gcd. The x-power of the result is min(ord(self), ord(rhs)), so
    /// on honest polynomials this is the polynomial-ring gcd; in the Laurent
    /// ring the x-power is a unit and only the window matters.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        let xp = self.start.min(rhs.start);
        let mut a = self.coeffs.clone();
        let mut b = rhs.coeffs.clone();
        while !b.is_empty() {
            let (_, r) = div_rem_windows(&a, &b);
            a = b;
            b = trim_vec(r);
        }
        Self::from_window(xp, a).monic()
    }

    /// True when the polynomial has no repeated zeros, counting x itself
    /// (call on the ord-0 shift to ignore the x-power as a Laurent unit).
    pub fn is_squarefree(&self) -> bool {
        assert!(self.is_polynomial(), "squarefree test needs exponents >= 0");
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// Yun squarefree decomposition: returns (leading unit, parts) with
    /// self = unit * x^v0 * prod part_i^mult_i, the x-power folded into the
    /// parts as (x, v0) when present. Parts are monic, squarefree, pairwise
    /// coprime, with distinct multiplicities sorted ascending.
    pub fn squarefree_decomposition(&self) -> (BigRational, Vec<(RatPoly, u32)>) {
        assert!(self.is_polynomial(), "decomposition needs exponents >= 0");
        assert!(!self.is_zero());
        let unit = self.leading_coeff();
        let mut parts: Vec<(RatPoly, u32)> = Vec::new();
        if self.start > 0 {
            parts.push((RatPoly::monomial(BigRational::one(), 1), self.start as u32));
        }
        let p = self.shift(-self.start).monic();
        if !p.is_constant() {
            // Yun: g = gcd(p, p'); w tracks the squarefree product left to
            // strip, y the matching derivative cofactor.
            let g = p.gcd(&p.derivative());
            let mut w = p.div_exact(&g).expect("gcd divides");
            let mut y = p.derivative().div_exact(&g).expect("gcd divides");
            let mut mult: u32 = 1;
            while !w.is_constant() {
                let z = y.sub(&w.derivative());
                let a = w.gcd(&z);
                if !a.is_constant() {
                    parts.push((a.clone(), mult));
                }
                w = w.div_exact(&a).expect("gcd divides");
                y = z.div_exact(&a).expect("gcd divides");
                mult += 1;
            }
        }
        parts.sort_by_key(|(_, m)| *m);
        (unit, parts)
    }

    /// Substitutes x = y^(1/k): Some only when every exponent is divisible
    /// by k, with exponents divided by k.
    pub fn descend(&self, k: i64) -> Option<Self> {
        assert!(k >= 1);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut terms = Vec::new();
        for (e, c) in self.terms() {
            if e.rem_euclid(k) != 0 {
                return None;
            }
            terms.push((e.div_euclid(k), c));
        }
        let start = terms[0].0;
        let end = terms.last().unwrap().0;
        let mut coeffs = vec![BigRational::zero(); (end - start + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - start) as usize] = c;
        }
        Some(Self::from_window(start, coeffs))
    }

    /// Scales coefficients to coprime integers with positive leading term.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num::integer::lcm(den, c.denom().clone());
        }
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from(den.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for v in &scaled {
            g = num::integer::gcd(g, v.clone());
        }
        if scaled.last().unwrap().is_negative() {
            g = -g;
        }
        RatPoly {
            start: self.start,
            coeffs: scaled
                .iter()
                .map(|v| BigRational::from(v / &g))
                .collect(),
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_part = brat_str(&mag);
            let var_part = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if var_part.is_empty() {
                out.push_str(&coeff_part);
            } else if mag.is_one() {
                out.push_str(&var_part);
            } else {
                out.push_str(&format!("{coeff_part}*{var_part}"));
            }
        }
        out
    }

    /// The coefficient window as lossy f64 values (plotting only): returns
    /// (lowest exponent, ascending coefficients).
    pub fn window_f64(&self) -> (i64, Vec<f64>) {
        use num::ToPrimitive;
        (
            self.ord().unwrap_or(0),
            self.coeffs
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn json(&self) -> Value {
        json!({
            "ord": self.ord().unwrap_or(0),
            "coeffs": self.coeffs.iter().map(|c| json!(brat_str(c))).collect::<Vec<Value>>(),
        })
    }

    /// Parses the `json()` shape: {"ord": int, "coeffs": ["p/q" | int, ...]}.
    pub fn from_json(v: &Value) -> Option<Self> {
        let obj = v.as_object()?;
        let start = obj.get("ord")?.as_i64()?;
        let coeffs = obj
            .get("coeffs")?
            .as_array()?
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_brat(s),
                Value::Number(n) => Some(BigRational::from(BigInt::from(n.as_i64()?))),
                _ => None,
            })
            .collect::<Option<Vec<BigRational>>>()?;
        Some(Self::from_window(start, coeffs))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

fn trim_vec(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Long division of dense coefficient windows (numerator degree offset is
/// the caller's business). Divisor must be nonempty with nonzero lead.
fn div_rem_windows(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!den.is_empty() && !den.last().unwrap().is_zero());
    if num.len() < den.len() {
        return (Vec::new(), num.to_vec());
    }
    let mut rem = num.to_vec();
    let mut quo = vec![BigRational::zero(); num.len() - den.len() + 1];
    let lead = den.last().unwrap();
    for k in (0..quo.len()).rev() {
        let c = &rem[k + den.len() - 1] / lead;
        if c.is_zero() {
            continue;
        }
        quo[k] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let prod = &c * d;
            rem[k + j] -= prod;
        }
    }
    rem.truncate(den.len() - 1);
    (quo, trim_vec(rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(pairs: &[(i64, i64)]) -> RatPoly {
        pairs
            .iter()
            .fold(RatPoly::zero(), |acc, &(e, c)| {
                acc.add(&RatPoly::monomial(brat(c, 1), e))
            })
    }

    #[test]
    fn ring_identities() {
        let a = p(&[(0, 1), (1, 1)]);
        let b = p(&[(0, -1), (1, 1)]);
        assert_eq!(a.mul(&b), p(&[(0, -1), (2, 1)]));
        assert_eq!(a.sub(&a), RatPoly::zero());
        assert_eq!(a.mul(&RatPoly::one()), a);
        assert_eq!(a.add(&b).degree(), Some(1));
        assert_eq!(p(&[(1, 1)]).sub(&p(&[(1, 1), (0, 2)])), p(&[(0, -2)]));
    }

    #[test]
    fn laurent_window_trims() {
        let q = RatPoly::from_window(-2, vec![brat(0, 1), brat(3, 1), brat(0, 1)]);
        assert_eq!(q.ord(), Some(-1));
        assert_eq!(q.degree(), Some(-1));
        assert_eq!(q.coeff(-1), brat(3, 1));
    }

    #[test]
    fn derivative_rules() {
        let q = p(&[(3, 1), (1, -2)]);
        assert_eq!(q.derivative(), p(&[(2, 3), (0, -2)]));
        let l = p(&[(-1, 1)]);
        assert_eq!(l.derivative(), p(&[(-2, -1)]));
        assert_eq!(p(&[(0, 5)]).derivative(), RatPoly::zero());
    }

    #[test]
    fn eval_handles_laurent_and_zero() {
        let q = p(&[(-2, 1), (1, 3)]);
        assert_eq!(q.eval(&brat(2, 1)), Some(brat(25, 4)));
        assert_eq!(q.eval(&brat(0, 1)), None);
        assert_eq!(p(&[(2, 7)]).eval(&brat(0, 1)), Some(brat(0, 1)));
        assert_eq!(p(&[(0, 7)]).eval(&brat(0, 1)), Some(brat(7, 1)));
    }

    #[test]
    fn gcd_with_x_power() {
        // gcd(x^2(x+1), x^3) = x^2
        let a = p(&[(2, 1)]).mul(&p(&[(0, 1), (1, 1)]));
        let b = p(&[(3, 1)]);
        assert_eq!(a.gcd(&b), p(&[(2, 1)]));
        // gcd((x-1)^2 (x+2), (x-1)(x+3)) = x - 1
        let c = p(&[(0, -1), (1, 1)])
            .pow(2)
            .mul(&p(&[(0, 2), (1, 1)]));
        let d = p(&[(0, -1), (1, 1)]).mul(&p(&[(0, 3), (1, 1)]));
        assert_eq!(c.gcd(&d), p(&[(0, -1), (1, 1)]));
    }

    #[test]
    fn div_exact_detects_non_divisors() {
        let a = p(&[(0, -1), (2, 1)]);
        let b = p(&[(0, 1), (1, 1)]);
        assert_eq!(a.div_exact(&b), Some(p(&[(0, -1), (1, 1)])));
        assert_eq!(a.div_exact(&p(&[(0, 2), (1, 1)])), None);
        let laurent = p(&[(-3, 2)]);
        assert_eq!(laurent.div_exact(&p(&[(-1, 1)])), Some(p(&[(-2, 2)])));
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let f1 = p(&[(0, -1), (1, 1)]); // x - 1
        let f2 = p(&[(0, 2), (1, 1)]); // x + 2
        let f3 = p(&[(0, -5), (1, 1)]); // x - 5
        let q = f1.pow(3).mul(&f2.pow(2)).mul(&f3).scale(&brat(6, 1));
        let (unit, parts) = q.squarefree_decomposition();
        assert_eq!(unit, brat(6, 1));
        assert_eq!(
            parts,
            vec![(f3.clone(), 1), (f2.clone(), 2), (f1.clone(), 3)]
        );
        let rebuilt = parts
            .iter()
            .fold(RatPoly::constant(unit), |acc, (part, m)| {
                acc.mul(&part.pow(*m))
            });
        assert_eq!(rebuilt, q);
    }

    #[test]
    fn yun_folds_in_the_x_power() {
        let q = p(&[(2, 1)]).mul(&p(&[(0, -1), (1, 1)]));
        let (unit, parts) = q.squarefree_decomposition();
        assert_eq!(unit, brat(1, 1));
        assert_eq!(parts, vec![(p(&[(0, -1), (1, 1)]), 1), (p(&[(1, 1)]), 2)]);
        assert!(p(&[(1, 1), (2, 1)]).is_squarefree());
        assert!(!q.is_squarefree());
    }

    #[test]
    fn descend_requires_divisible_exponents() {
        let q = p(&[(0, 1), (3, -2), (6, 1)]);
        assert_eq!(q.descend(3), Some(p(&[(0, 1), (1, -2), (2, 1)])));
        assert_eq!(q.descend(1), Some(q.clone()));
        assert_eq!(p(&[(1, 1)]).descend(2), None);
        let laurent = p(&[(-4, 1), (2, 1)]);
        assert_eq!(laurent.descend(2), Some(p(&[(-2, 1), (1, 1)])));
    }

    #[test]
    fn primitive_scales_to_coprime_integers() {
        let q = p(&[(0, 2), (1, 4)]).scale(&brat(1, 6));
        assert_eq!(q.primitive(), p(&[(0, 1), (1, 2)]));
        let r = p(&[(0, 1), (1, -2)]);
        assert_eq!(r.primitive(), p(&[(0, -1), (1, 2)]));
    }

    #[test]
    fn display_and_json_round_trip() {
        let q = p(&[(-1, 1), (0, -3), (2, 1)]).scale(&brat(1, 2));
        assert_eq!(q.display_with("u"), "1/2*u^2 - 3/2 + 1/2*u^-1");
        assert_eq!(RatPoly::from_json(&q.json()), Some(q));
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(p(&[(1, -1)]).to_string(), "-t");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gcd_divides_both_and_cofactors_are_coprime(
            a in proptest::collection::vec(-5i64..=5, 1..6),
            b in proptest::collection::vec(-5i64..=5, 1..6),
        ) {
            let pa = RatPoly::from_window(0, a.into_iter().map(|c| brat(c, 1)).collect());
            let pb = RatPoly::from_window(0, b.into_iter().map(|c| brat(c, 1)).collect());
            prop_assume!(!pa.is_zero() && !pb.is_zero());
            let g = pa.gcd(&pb);
            let qa = pa.div_exact(&g).unwrap();
            let qb = pb.div_exact(&g).unwrap();
            prop_assert!(qa.gcd(&qb).is_constant());
        }

        #[test]
        fn yun_reconstructs_random_products(
            roots in proptest::collection::btree_set(-4i64..=4, 1..4),
            mults in proptest::collection::vec(1u32..=3, 3),
        ) {
            let mut q = RatPoly::one();
            for (r, m) in roots.iter().zip(mults.iter()) {
                q = q.mul(&p(&[(0, -r), (1, 1)]).pow(*m));
            }
            let (unit, parts) = q.squarefree_decomposition();
            let mut rebuilt = RatPoly::constant(unit);
            for (part, m) in &parts {
                prop_assert!(part.is_squarefree());
                rebuilt = rebuilt.mul(&part.pow(*m));
            }
            prop_assert_eq!(rebuilt, q);
            // Parts are pairwise coprime.
            for i in 0..parts.len() {
                for j in 0..i {
                    prop_assert!(parts[i].0.gcd(&parts[j].0).is_constant());
                }
            }
        }
    }
}
