//! Hyperquotient germs `(φ₁ = … = φ_m = 0) ⊂ (ℂ^d ∋ o)/(1/n)(a₁,…,a_d)`,
//! admissible weights and the weighted blow-up discrepancy formula
//! `a(E, X, B) = 1 + w(X∋x) − w(B)`.

mod certificate;
mod kawakita;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::par::{self, Exec};
use crate::rat::{self, ExtRat, Rat};
use crate::weighted::{self, Poly, Weight};

pub use certificate::{irreducibility_certificate, Certificate, CertificateKind};
pub use kawakita::{check_kawakita_pattern, Condition, KawakitaCase, PatternReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("cyclic action order must be positive, got {0}")]
    BadOrder(i64),
    #[error("germ needs at least one coordinate")]
    NoCoordinates,
    #[error("equation {index} has dimension {got}, germ has {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("{count} equations in dimension {dim}: need fewer equations than coordinates")]
    TooManyEquations { count: usize, dim: usize },
    #[error("equation {0} is not semi-invariant under the action")]
    EquationNotSemiInvariant(usize),
    #[error("boundary divisor {0} is not semi-invariant under the action")]
    BoundaryNotSemiInvariant(usize),
    #[error("boundary divisor {0} has negative coefficient")]
    NegativeCoefficient(usize),
    #[error("equation {0} is zero")]
    ZeroEquation(usize),
    #[error("boundary divisor {0} is defined by the zero polynomial")]
    ZeroDivisor(usize),
    #[error("weight {numerators:?}/{denominator} is not admissible for this germ")]
    NotAdmissible {
        numerators: Vec<i64>,
        denominator: i64,
    },
    #[error("weight entries must be positive, got {0:?}")]
    NonPositiveWeight(Vec<i64>),
    #[error("pattern checks need ambient dimension 4 or 5, got {0}")]
    UnsupportedDimension(usize),
    #[error("no admissible weight with total at most {0}")]
    EmptyEnumeration(i64),
    #[error("unknown germ tag {0:?}")]
    UnknownTag(String),
}

/// The action of `μ_n` on `ℂ^d` with characters `a₁,…,a_d` (kept in `[0,n)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicAction {
    n: i64,
    chars: Vec<i64>,
}

impl CyclicAction {
    pub fn new(n: i64, chars: &[i64]) -> Result<Self, GermError> {
        if n <= 0 {
            return Err(GermError::BadOrder(n));
        }
        if chars.is_empty() {
            return Err(GermError::NoCoordinates);
        }
        Ok(CyclicAction {
            n,
            chars: chars.iter().map(|a| a.mod_floor(&n)).collect(),
        })
    }

    pub fn trivial(dim: usize) -> Self {
        CyclicAction {
            n: 1,
            chars: vec![0; dim],
        }
    }

    pub fn order(&self) -> i64 {
        self.n
    }

    pub fn chars(&self) -> &[i64] {
        &self.chars
    }

    pub fn dim(&self) -> usize {
        self.chars.len()
    }
}

impl fmt::Display for CyclicAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.chars.iter().map(|c| c.to_string()).collect();
        write!(f, "1/{}({})", self.n, cs.join(","))
    }
}

/// `Σ aᵢαᵢ mod n`.
pub fn character_of(action: &CyclicAction, alpha: &[i64]) -> i64 {
    assert_eq!(
        alpha.len(),
        action.dim(),
        "exponent and action dimensions differ"
    );
    let n = action.n as i128;
    let s: i128 = action
        .chars
        .iter()
        .zip(alpha)
        .map(|(&a, &e)| a as i128 * e as i128)
        .sum();
    s.rem_euclid(n) as i64
}

/// All monomials of `h` share one character (the zero polynomial does).
pub fn is_semi_invariant(action: &CyclicAction, h: &Poly) -> bool {
    let mut chars = h.support().map(|e| character_of(action, e));
    match chars.next() {
        None => true,
        Some(c) => chars.all(|x| x == c),
    }
}

/// Normal-form labels of the classified terminal germs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GermTag {
    Smooth,
    CaOverN,
    Cd41,
    Cd52,
    Cd2Over41,
    Cd2Over52,
}

impl GermTag {
    pub fn as_str(self) -> &'static str {
        match self {
            GermTag::Smooth => "Smooth",
            GermTag::CaOverN => "cA_over_n",
            GermTag::Cd41 => "cD_41",
            GermTag::Cd52 => "cD_52",
            GermTag::Cd2Over41 => "cD2_41",
            GermTag::Cd2Over52 => "cD2_52",
        }
    }
}

impl FromStr for GermTag {
    type Err = GermError;
    fn from_str(s: &str) -> Result<Self, GermError> {
        Ok(match s {
            "Smooth" => GermTag::Smooth,
            "cA_over_n" => GermTag::CaOverN,
            "cD_41" => GermTag::Cd41,
            "cD_52" => GermTag::Cd52,
            "cD2_41" => GermTag::Cd2Over41,
            "cD2_52" => GermTag::Cd2Over52,
            _ => return Err(GermError::UnknownTag(s.to_string())),
        })
    }
}

impl fmt::Display for GermTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(φ₁ = … = φ_m = 0) ⊂ ℂ^d / μ_n` with semi-invariant equations, `m < d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperquotientGerm {
    action: CyclicAction,
    eqs: Vec<Poly>,
    tag: Option<GermTag>,
}

impl HyperquotientGerm {
    pub fn new(
        action: CyclicAction,
        eqs: Vec<Poly>,
        tag: Option<GermTag>,
    ) -> Result<Self, GermError> {
        let dim = action.dim();
        if eqs.len() >= dim {
            return Err(GermError::TooManyEquations {
                count: eqs.len(),
                dim,
            });
        }
        for (index, eq) in eqs.iter().enumerate() {
            if eq.dim() != dim {
                return Err(GermError::DimensionMismatch {
                    index,
                    got: eq.dim(),
                    expected: dim,
                });
            }
            if !is_semi_invariant(&action, eq) {
                return Err(GermError::EquationNotSemiInvariant(index));
            }
        }
        Ok(HyperquotientGerm { action, eqs, tag })
    }

    /// The cyclic quotient `ℂ^d / (1/n)(a₁,…,a_d)` with no equations.
    pub fn quotient(n: i64, chars: &[i64]) -> Result<Self, GermError> {
        Self::new(CyclicAction::new(n, chars)?, Vec::new(), None)
    }

    pub fn smooth(dim: usize) -> Self {
        HyperquotientGerm {
            action: CyclicAction::trivial(dim),
            eqs: Vec::new(),
            tag: Some(GermTag::Smooth),
        }
    }

    pub fn action(&self) -> &CyclicAction {
        &self.action
    }

    pub fn eqs(&self) -> &[Poly] {
        &self.eqs
    }

    pub fn tag(&self) -> Option<GermTag> {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    pub fn order(&self) -> i64 {
        self.action.n
    }
}

/// A boundary component `coeff · (defining = 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDivisor {
    pub coeff: Rat,
    pub defining: Poly,
}

impl BoundaryDivisor {
    pub fn new(coeff: Rat, defining: Poly) -> Self {
        BoundaryDivisor { coeff, defining }
    }
}

/// Checks non-negativity, non-vanishing and semi-invariance of a boundary.
pub fn validate_boundary(germ: &HyperquotientGerm, b: &[BoundaryDivisor]) -> Result<(), GermError> {
    for (i, bd) in b.iter().enumerate() {
        if bd.coeff < Rat::zero() {
            return Err(GermError::NegativeCoefficient(i));
        }
        if bd.defining.dim() != germ.dim() {
            return Err(GermError::DimensionMismatch {
                index: i,
                got: bd.defining.dim(),
                expected: germ.dim(),
            });
        }
        if bd.defining.is_zero() {
            return Err(GermError::ZeroDivisor(i));
        }
        if !is_semi_invariant(&germ.action, &bd.defining) {
            return Err(GermError::BoundaryNotSemiInvariant(i));
        }
    }
    Ok(())
}

/// `(1/n)(w₁,…,w_d)` with `wᵢ ≡ b·aᵢ (mod n)` for the stored witness `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleWeight {
    numerators: Vec<i64>,
    denominator: i64,
    witness_b: i64,
}

impl AdmissibleWeight {
    /// Validates `numerators` against `germ`, storing the least witness.
    pub fn new(germ: &HyperquotientGerm, numerators: &[i64]) -> Result<Self, GermError> {
        let b = is_admissible(germ, numerators)?.ok_or_else(|| GermError::NotAdmissible {
            numerators: numerators.to_vec(),
            denominator: germ.order(),
        })?;
        Ok(AdmissibleWeight {
            numerators: numerators.to_vec(),
            denominator: germ.order(),
            witness_b: b,
        })
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn witness_b(&self) -> i64 {
        self.witness_b
    }

    pub fn weight(&self) -> Weight {
        Weight::from_ints(&self.numerators, self.denominator).expect("numerators are positive")
    }

    pub fn total(&self) -> i64 {
        self.numerators.iter().sum()
    }
}

impl fmt::Display for AdmissibleWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.numerators.iter().map(|w| w.to_string()).collect();
        if self.denominator == 1 {
            write!(f, "({})", ws.join(","))
        } else {
            write!(f, "1/{}({})", self.denominator, ws.join(","))
        }
    }
}

/// The least `b ∈ [0, n)` with `wᵢ ≡ b·aᵢ (mod n)` for every `i`, if any.
pub fn is_admissible(
    germ: &HyperquotientGerm,
    numerators: &[i64],
) -> Result<Option<i64>, GermError> {
    if numerators.len() != germ.dim() {
        return Err(GermError::DimensionMismatch {
            index: 0,
            got: numerators.len(),
            expected: germ.dim(),
        });
    }
    if numerators.iter().any(|&w| w <= 0) {
        return Err(GermError::NonPositiveWeight(numerators.to_vec()));
    }
    Ok(admissible_witness(&germ.action, numerators))
}

fn admissible_witness(action: &CyclicAction, numerators: &[i64]) -> Option<i64> {
    let n = action.n;
    (0..n).find(|&b| {
        action
            .chars
            .iter()
            .zip(numerators)
            .all(|(&a, &w)| (w - (b as i128 * a as i128 % n as i128) as i64).mod_floor(&n) == 0)
    })
}

/// All admissible weights with `Σwᵢ ≤ max_total`, in lexicographic order.
pub fn enumerate_admissible_weights(
    germ: &HyperquotientGerm,
    max_total: i64,
) -> Vec<AdmissibleWeight> {
    enumerate_admissible_weights_with(germ, max_total, Exec::default())
}

pub fn enumerate_admissible_weights_with(
    germ: &HyperquotientGerm,
    max_total: i64,
    exec: Exec,
) -> Vec<AdmissibleWeight> {
    let d = germ.dim() as i64;
    if max_total < d {
        return Vec::new();
    }
    // The first coordinate ranges over [1, max_total − (d − 1)]; each value
    // is an independent slab of the search.
    let firsts: Vec<i64> = (1..=max_total - (d - 1)).collect();
    par::map_collect(exec, &firsts, |&w1| {
        let mut out = Vec::new();
        let mut cur = vec![w1];
        extend_weights(germ, max_total - w1, &mut cur, &mut out);
        out
    })
}

fn extend_weights(
    germ: &HyperquotientGerm,
    budget: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<AdmissibleWeight>,
) {
    let d = germ.dim();
    if cur.len() == d {
        if let Some(b) = admissible_witness(&germ.action, cur) {
            out.push(AdmissibleWeight {
                numerators: cur.clone(),
                denominator: germ.order(),
                witness_b: b,
            });
        }
        return;
    }
    let remaining_after = (d - cur.len() - 1) as i64;
    for w in 1..=budget - remaining_after {
        cur.push(w);
        extend_weights(germ, budget - w, cur, out);
        cur.pop();
    }
}

/// `w(X∋x) = (1/n)Σwᵢ − Σ w(φᵢ) − 1`.
pub fn germ_weight_discrepancy(
    germ: &HyperquotientGerm,
    w: &AdmissibleWeight,
) -> Result<Rat, GermError> {
    check_weight_dim(germ, w)?;
    let weight = w.weight();
    let mut total = Rat::new(w.total().into(), w.denominator().into()) - Rat::one();
    for (i, eq) in germ.eqs.iter().enumerate() {
        match weighted::weight_of_poly(&weight, eq) {
            ExtRat::Finite(x) => total -= x,
            ExtRat::PosInf => return Err(GermError::ZeroEquation(i)),
        }
    }
    Ok(total)
}

fn check_weight_dim(germ: &HyperquotientGerm, w: &AdmissibleWeight) -> Result<(), GermError> {
    if w.numerators.len() != germ.dim() {
        return Err(GermError::DimensionMismatch {
            index: 0,
            got: w.numerators.len(),
            expected: germ.dim(),
        });
    }
    Ok(())
}

/// `w(B) = Σ bᵢ·w(hᵢ)`.
pub fn boundary_weight(
    germ: &HyperquotientGerm,
    b: &[BoundaryDivisor],
    w: &AdmissibleWeight,
) -> Result<Rat, GermError> {
    check_weight_dim(germ, w)?;
    validate_boundary(germ, b)?;
    let weight = w.weight();
    let mut total = Rat::zero();
    for (i, bd) in b.iter().enumerate() {
        match weighted::weight_of_poly(&weight, &bd.defining) {
            ExtRat::Finite(x) => total += &bd.coeff * x,
            ExtRat::PosInf => return Err(GermError::ZeroDivisor(i)),
        }
    }
    Ok(total)
}

/// `a(E, X, B) = 1 + w(X∋x) − w(B)` for the exceptional divisor of the
/// weighted blow-up.
pub fn log_discrepancy(
    germ: &HyperquotientGerm,
    b: &[BoundaryDivisor],
    w: &AdmissibleWeight,
) -> Result<Rat, GermError> {
    Ok(Rat::one() + germ_weight_discrepancy(germ, w)? - boundary_weight(germ, b, w)?)
}

/// An upper bound for the canonical threshold of `D`, with the weight that
/// realizes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtUpperBound {
    pub bound: ExtRat,
    pub weight: AdmissibleWeight,
}

/// `min w(X∋x)/w(D)` over admissible weights with `Σwᵢ ≤ max_total`.
///
/// Each such weighted blow-up only constrains the threshold from above,
/// so the result is an upper bound, never the threshold itself. Ties keep
/// the lexicographically least weight.
pub fn ct_upper_bound(
    germ: &HyperquotientGerm,
    d: &Poly,
    max_total: i64,
) -> Result<CtUpperBound, GermError> {
    ct_upper_bound_with(germ, d, max_total, Exec::default())
}

pub fn ct_upper_bound_with(
    germ: &HyperquotientGerm,
    d: &Poly,
    max_total: i64,
    exec: Exec,
) -> Result<CtUpperBound, GermError> {
    validate_boundary(germ, &[BoundaryDivisor::new(Rat::one(), d.clone())])?;
    let weights = enumerate_admissible_weights_with(germ, max_total, exec);
    let values = par::map(exec, &weights, |w| -> Result<ExtRat, GermError> {
        let disc = germ_weight_discrepancy(germ, w)?;
        let wd = weighted::weight_of_poly(&w.weight(), d)
            .into_finite()
            .expect("nonzero divisor");
        Ok(if wd.is_zero() {
            ExtRat::PosInf
        } else {
            ExtRat::Finite(disc / wd)
        })
    });
    let mut best: Option<CtUpperBound> = None;
    for (w, v) in weights.into_iter().zip(values) {
        let v = v?;
        if best.as_ref().is_none_or(|b| v < b.bound) {
            best = Some(CtUpperBound {
                bound: v,
                weight: w,
            });
        }
    }
    best.ok_or(GermError::EmptyEnumeration(max_total))
}

/// `Σ bᵢ ≤ 2` at a smooth point, `Σ bᵢ ≤ 1` otherwise.
pub fn coefficient_sum_check(is_smooth: bool, coeffs: &[Rat]) -> bool {
    let sum: Rat = coeffs.iter().sum();
    sum <= rat::int(if is_smooth { 2 } else { 1 })
}

/// `2 − mult` when `mult ≤ 1`; `None` past that boundary.
pub fn codim2_mld(mult: &Rat) -> Option<Rat> {
    (*mult <= Rat::one()).then(|| rat::int(2) - mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};
    use crate::weighted::parse_poly;

    pub(crate) fn ca7() -> HyperquotientGerm {
        HyperquotientGerm::new(
            CyclicAction::new(7, &[1, 6, 2, 0]).unwrap(),
            vec![parse_poly(4, "x1*x2 + x3^7").unwrap()],
            Some(GermTag::CaOverN),
        )
        .unwrap()
    }

    #[test]
    fn characters() {
        let triv = CyclicAction::trivial(3);
        assert_eq!(character_of(&triv, &[4, 5, 6]), 0);
        let a = CyclicAction::new(7, &[1, 6, 2, 0]).unwrap();
        assert_eq!(character_of(&a, &[1, 1, 0, 0]), 0);
        assert_eq!(character_of(&a, &[0, 0, 0, 0]), 0);
        assert_eq!(CyclicAction::new(7, &[1, -1, 2, 0]).unwrap(), a);
    }

    #[test]
    fn semi_invariance() {
        let a = CyclicAction::new(7, &[1, -1, 2, 0]).unwrap();
        assert!(is_semi_invariant(
            &a,
            &parse_poly(4, "x1*x2 + x3^7").unwrap()
        ));
        let b = CyclicAction::new(2, &[1, 0]).unwrap();
        assert!(!is_semi_invariant(&b, &parse_poly(2, "x1 + x2").unwrap()));
        assert!(is_semi_invariant(&b, &parse_poly(2, "3*x1^5*x2").unwrap()));
        assert!(matches!(
            HyperquotientGerm::new(b, vec![parse_poly(2, "x1 + x2").unwrap()], None),
            Err(GermError::EquationNotSemiInvariant(0))
        ));
    }

    #[test]
    fn admissibility() {
        let s = HyperquotientGerm::smooth(3);
        assert_eq!(is_admissible(&s, &[4, 1, 9]).unwrap(), Some(0));
        assert_eq!(is_admissible(&ca7(), &[5, 16, 3, 7]).unwrap(), Some(5));
        let q = HyperquotientGerm::quotient(2, &[1, 1]).unwrap();
        assert_eq!(is_admissible(&q, &[1, 2]).unwrap(), None);
        assert!(matches!(
            AdmissibleWeight::new(&q, &[1, 2]),
            Err(GermError::NotAdmissible { .. })
        ));
    }

    #[test]
    fn enumeration() {
        let s = HyperquotientGerm::smooth(2);
        let ws: Vec<Vec<i64>> = enumerate_admissible_weights(&s, 3)
            .iter()
            .map(|w| w.numerators().to_vec())
            .collect();
        assert_eq!(ws, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        let q = HyperquotientGerm::quotient(2, &[1, 1]).unwrap();
        let ws = enumerate_admissible_weights(&q, 4);
        assert_eq!(ws.len(), 4); // (1,1),(1,3),(2,2),(3,1)
        assert!(ws
            .iter()
            .all(|w| (w.numerators()[0] - w.numerators()[1]) % 2 == 0));
        assert!(enumerate_admissible_weights(&HyperquotientGerm::smooth(3), 2).is_empty());
    }

    #[test]
    fn discrepancies() {
        let s = HyperquotientGerm::smooth(3);
        let w = AdmissibleWeight::new(&s, &[1, 4, 9]).unwrap();
        assert_eq!(germ_weight_discrepancy(&s, &w).unwrap(), int(13));
        let g = ca7();
        let w = AdmissibleWeight::new(&g, &[5, 16, 3, 7]).unwrap();
        assert_eq!(germ_weight_discrepancy(&g, &w).unwrap(), ratio(3, 7));

        let x3 = BoundaryDivisor::new(int(1), parse_poly(4, "x3").unwrap());
        assert_eq!(boundary_weight(&g, &[], &w).unwrap(), int(0));
        assert_eq!(
            boundary_weight(&g, std::slice::from_ref(&x3), &w).unwrap(),
            ratio(3, 7)
        );
        assert_eq!(log_discrepancy(&g, &[x3], &w).unwrap(), int(1));
        let half = BoundaryDivisor::new(ratio(1, 2), parse_poly(4, "x4").unwrap());
        assert_eq!(
            boundary_weight(&g, &[half.clone(), half], &w).unwrap(),
            int(1)
        );

        let w111 = AdmissibleWeight::new(&s, &[1, 1, 1]).unwrap();
        assert_eq!(log_discrepancy(&s, &[], &w111).unwrap(), int(3));
    }

    #[test]
    fn ct_bounds() {
        let s = HyperquotientGerm::smooth(3);
        let x1 = parse_poly(3, "x1").unwrap();
        let b = ct_upper_bound(&s, &x1, 3).unwrap();
        assert_eq!(b.bound, ExtRat::Finite(int(2)));
        assert_eq!(b.weight.numerators(), &[1, 1, 1]);
        // (a, 1, 1) gives (a + 1)/a, which decreases towards 1.
        let b = ct_upper_bound(&s, &x1, 10).unwrap();
        assert_eq!(b.bound, ExtRat::Finite(ratio(9, 8)));
        assert_eq!(b.weight.numerators(), &[8, 1, 1]);
        let q = parse_poly(3, "x1^2 + x2^2 + x3^2").unwrap();
        assert_eq!(
            ct_upper_bound(&s, &q, 3).unwrap().bound,
            ExtRat::Finite(int(1))
        );
        assert!(matches!(
            ct_upper_bound(&s, &x1, 2),
            Err(GermError::EmptyEnumeration(2))
        ));
    }

    #[test]
    fn coefficient_bounds_and_codim2() {
        assert!(coefficient_sum_check(true, &[int(1), int(1)]));
        assert!(!coefficient_sum_check(false, &[ratio(3, 5), ratio(3, 5)]));
        assert!(coefficient_sum_check(false, &[]));
        assert_eq!(codim2_mld(&int(0)), Some(int(2)));
        assert_eq!(codim2_mld(&int(1)), Some(int(1)));
        assert_eq!(codim2_mld(&ratio(3, 2)), None);
    }
}
