//! Artin groups of finite type with a decidable word problem.
//!
//! Elements are written as signed words in the standard generators R_i and
//! normalized to the left-greedy Garside form Delta^inf * x_1 ... x_l over
//! the lattice of simple elements (copies of the finite Weyl group). Each
//! inverse letter shifts the infimum down by one and contributes the
//! complement lift(w_0 r_i); adjacent factors are then slid left until
//! every pair is left-weighted: every left descent of the right factor is a
//! right descent of the left factor. Leading w_0 factors merge into the
//! infimum and trailing identities are dropped, which makes the form unique
//! and equality decidable.

use crate::linalg::Rat;
use crate::roots::RootSystem;
use crate::weyl::{longest_element, WeylElement};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArtinError {
    #[error("word letter {letter} out of range for rank {rank}")]
    BadLetter { letter: i64, rank: usize },
    #[error("words over different diagrams cannot be compared")]
    DiagramMismatch,
}

/// A word in the Artin generators: letter k > 0 means R_k, k < 0 means
/// R_{|k|}^{-1} (1-based in the signed surface syntax, 0-based internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinWord {
    rank: usize,
    /// (generator index, inverse?)
    letters: Vec<(usize, bool)>,
}

impl ArtinWord {
    pub fn new(rank: usize, signed: &[i64]) -> Result<Self, ArtinError> {
        let mut letters = Vec::with_capacity(signed.len());
        for &s in signed {
            let idx = s.unsigned_abs() as usize;
            if s == 0 || idx > rank {
                return Err(ArtinError::BadLetter { letter: s, rank });
            }
            letters.push((idx - 1, s < 0));
        }
        Ok(ArtinWord { rank, letters })
    }

    /// Positive word from 0-based generator indices.
    pub fn from_indices(rank: usize, indices: &[usize]) -> Self {
        assert!(indices.iter().all(|&i| i < rank));
        ArtinWord {
            rank,
            letters: indices.iter().map(|&i| (i, false)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.letters
    }

    pub fn signed(&self) -> Vec<i64> {
        self.letters
            .iter()
            .map(|&(i, inv)| {
                let v = (i + 1) as i64;
                if inv {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn concat(&self, rhs: &ArtinWord) -> ArtinWord {
        assert_eq!(self.rank, rhs.rank);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        ArtinWord {
            rank: self.rank,
            letters,
        }
    }

    pub fn inverse(&self) -> ArtinWord {
        ArtinWord {
            rank: self.rank,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(i, inv)| (i, !inv))
                .collect(),
        }
    }

    pub fn json(&self) -> Value {
        json!(self.signed())
    }
}

/// Left-greedy Garside normal form: Delta^inf * factors, with no factor
/// trivial or equal to Delta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub inf: i64,
    pub factors: Vec<WeylElement>,
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Canonical length (number of non-Delta factors).
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn sup(&self) -> i64 {
        self.inf + self.factors.len() as i64
    }

    /// Expands the normal form back into a word (for round-trip checks and
    /// display): |inf| copies of the w_0 word (inverted for negative inf)
    /// followed by the factors' canonical words.
    pub fn to_word(&self, sys: &RootSystem) -> ArtinWord {
        let w0 = longest_element(sys).canonical_word(sys);
        let mut letters: Vec<(usize, bool)> = Vec::new();
        if self.inf >= 0 {
            for _ in 0..self.inf {
                letters.extend(w0.iter().map(|&i| (i, false)));
            }
        } else {
            for _ in 0..(-self.inf) {
                letters.extend(w0.iter().rev().map(|&i| (i, true)));
            }
        }
        for f in &self.factors {
            letters.extend(f.canonical_word(sys).iter().map(|&i| (i, false)));
        }
        ArtinWord {
            rank: sys.rank(),
            letters,
        }
    }

    pub fn json(&self, sys: &RootSystem) -> Value {
        json!({
            "inf": self.inf,
            "canonical_length": self.canonical_length(),
            "factors": self
                .factors
                .iter()
                .map(|f| json!(f
                    .canonical_word(sys)
                    .iter()
                    .map(|&i| i + 1)
                    .collect::<Vec<usize>>()))
                .collect::<Vec<Value>>(),
        })
    }
}

/// Computes the left-greedy normal form of a word.
pub fn normal_form(sys: &RootSystem, word: &ArtinWord) -> Result<NormalForm, ArtinError> {
    if word.rank() != sys.rank() {
        return Err(ArtinError::DiagramMismatch);
    }
    let n = sys.rank();
    let w0 = longest_element(sys);
    let twist = |f: &WeylElement| w0.mul(f).mul(&w0);

    let mut inf: i64 = 0;
    let mut factors: Vec<WeylElement> = Vec::new();
    for &(i, is_inverse) in word.letters() {
        let r = WeylElement::simple(sys, i);
        if is_inverse {
            // R_i^{-1} = Delta^{-1} * lift(w_0 r_i); moving Delta^{-1} left
            // across the accumulated factors conjugates each by w_0.
            inf -= 1;
            for f in factors.iter_mut() {
                *f = twist(f);
            }
            factors.push(w0.mul(&r));
        } else {
            factors.push(r);
        }
    }

    // Slide left until every adjacent pair is left-weighted.
    let mut changed = true;
    let mut guard = 0usize;
    while changed {
        changed = false;
        guard += 1;
        assert!(guard <= 4 * (factors.len() + 1) * (factors.len() + 1) + 16);
        for t in 0..factors.len().saturating_sub(1) {
            loop {
                let Some(i) = (0..n)
                    .find(|&i| factors[t + 1].left_descent(i) && !factors[t].right_descent(i))
                else {
                    break;
                };
                let r = WeylElement::simple(sys, i);
                factors[t] = factors[t].mul(&r);
                factors[t + 1] = r.mul(&factors[t + 1]);
                changed = true;
            }
        }
    }
    while factors.last().is_some_and(|f| f.is_identity()) {
        factors.pop();
    }
    let lead = factors.iter().take_while(|f| **f == w0).count();
    factors.drain(..lead);
    inf += lead as i64;
    Ok(NormalForm { inf, factors })
}

/// Decides equality of two words in the Artin group of the system.
pub fn words_equal(sys: &RootSystem, a: &ArtinWord, b: &ArtinWord) -> Result<bool, ArtinError> {
    Ok(normal_form(sys, a)? == normal_form(sys, b)?)
}

/// The image of a word in the Weyl group (inverse letters map to the same
/// reflection).
pub fn project_to_weyl(sys: &RootSystem, word: &ArtinWord) -> Result<WeylElement, ArtinError> {
    if word.rank() != sys.rank() {
        return Err(ArtinError::DiagramMismatch);
    }
    Ok(word
        .letters()
        .iter()
        .fold(WeylElement::identity(sys.rank()), |acc, &(i, _)| {
            acc.mul(&WeylElement::simple(sys, i))
        }))
}

/// Action of a word on a rational coordinate vector through the Weyl
/// projection. Inverse letters act by the same reflection, so the action
/// factors through the Weyl group.
pub fn lattice_action(
    sys: &RootSystem,
    word: &ArtinWord,
    v: &[Rat],
) -> Result<Vec<Rat>, ArtinError> {
    Ok(project_to_weyl(sys, word)?.mat().apply_rat(v))
}
