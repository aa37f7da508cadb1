//! Weights of monomials and polynomials, weighted leading terms and
//! truncations.

mod poly;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::lattice::dot_rat;
use crate::rat::{self, ExtRat, Rat};

pub use poly::{parse_poly, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight entry {index} is {value}, weights must be positive")]
    NonPositive { index: usize, value: String },
    #[error("weight has no entries")]
    Empty,
    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,
    #[error("weight has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// A vector of strictly positive rationals, one per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(Vec<Rat>);

impl Weight {
    pub fn new(entries: Vec<Rat>) -> Result<Self, WeightError> {
        if entries.is_empty() {
            return Err(WeightError::Empty);
        }
        if let Some((index, value)) = entries.iter().enumerate().find(|(_, x)| **x <= Rat::zero()) {
            return Err(WeightError::NonPositive {
                index,
                value: rat::fmt_rat(value),
            });
        }
        Ok(Weight(entries))
    }

    /// `(1/den)·(numerators)`.
    pub fn from_ints(numerators: &[i64], den: i64) -> Result<Self, WeightError> {
        assert!(den > 0, "weight denominator must be positive");
        Self::new(numerators.iter().map(|&a| rat::ratio(a, den)).collect())
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, mu: &Rat) -> Result<Self, WeightError> {
        Self::new(self.0.iter().map(|x| x * mu).collect())
    }

    pub fn min_entry(&self) -> &Rat {
        self.0.iter().min().expect("weights are nonempty")
    }

    /// Total degree beyond which no monomial can have weight `≤ target`:
    /// `⌈target / min wᵢ⌉`. Truncating a series at this degree leaves every
    /// weight computation up to `target` unchanged.
    pub fn truncation_degree(&self, target: &Rat) -> u64 {
        let q = target / self.min_entry();
        rat::ceil_int(&q).try_into().unwrap_or(0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rat::fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn weight_of_monomial(w: &Weight, alpha: &[i64]) -> Rat {
    assert_eq!(
        w.dim(),
        alpha.len(),
        "weight and exponent dimensions differ"
    );
    dot_rat(w.entries(), alpha)
}

/// Minimum weight over the support; `+∞` for the zero polynomial.
pub fn weight_of_poly(w: &Weight, h: &Poly) -> ExtRat {
    assert_eq!(w.dim(), h.dim(), "weight and polynomial dimensions differ");
    h.support()
        .map(|e| weight_of_monomial(w, e))
        .min()
        .map_or(ExtRat::PosInf, ExtRat::Finite)
}

/// The sum of the terms of minimal `w`-weight.
pub fn leading_term(w: &Weight, h: &Poly) -> Result<Poly, WeightError> {
    let min = weight_of_poly(w, h)
        .into_finite()
        .ok_or(WeightError::ZeroPolynomial)?;
    Ok(h.filter(|e, _| weight_of_monomial(w, e) == min))
}

pub fn is_w_homogeneous(w: &Weight, h: &Poly) -> bool {
    match leading_term(w, h) {
        Ok(lt) => lt.len() == h.len(),
        Err(_) => true,
    }
}

pub fn truncate(h: &Poly, c: u64) -> Poly {
    h.truncate(c)
}

/// How two weights relate: `geq` is `w ⪰ w2` (entrywise), and
/// `scalar_multiple` is `μ` with `w = μ·w2` when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightComparison {
    pub geq: bool,
    pub scalar_multiple: Option<Rat>,
}

impl WeightComparison {
    pub fn is_incomparable(&self) -> bool {
        !self.geq && self.scalar_multiple.is_none()
    }
}

pub fn compare_weights(w: &Weight, w2: &Weight) -> WeightComparison {
    assert_eq!(w.dim(), w2.dim(), "weights of different dimension");
    let geq = w.entries().iter().zip(w2.entries()).all(|(a, b)| a >= b);
    let mu = &w.entries()[0] / &w2.entries()[0];
    let scalar = w
        .entries()
        .iter()
        .zip(w2.entries())
        .all(|(a, b)| *a == b * &mu);
    WeightComparison {
        geq,
        scalar_multiple: scalar.then_some(mu),
    }
}
