use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{caratheodory_decompose, psi_from_pair, Caratheodory, Psi, ToricError, ToricPair};
use crate::lattice::{self, Constraint, LatticePoint};
use crate::par::{self, Exec};
use crate::rat::{self, ExtRat, Rat};

/// A minimal log discrepancy: a rational, or `−∞` for pairs that are not
/// log canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MldValue {
    NegInfinity,
    Finite(Rat),
}

impl fmt::Display for MldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MldValue::NegInfinity => f.write_str("-inf"),
            MldValue::Finite(r) => f.write_str(&rat::fmt_rat(r)),
        }
    }
}

/// The mld with the lexicographically least minimizing lattice point and
/// its Carathéodory fold. Witness data is absent for `−∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldResult {
    pub value: MldValue,
    pub witness: Option<LatticePoint>,
    pub fold: Option<Caratheodory>,
}

/// `min ψ` over `N ∩ relint(σ)`.
///
/// For log canonical pairs the minimum is attained at a point with
/// `ψ₀ ≤ d`, so the search runs over the bounded region
/// `S = relint(σ) ∩ {ψ₀ ≤ d}`.
pub fn toric_mld(pair: &ToricPair) -> Result<MldResult, ToricError> {
    toric_mld_with(pair, Exec::default())
}

pub fn toric_mld_with(pair: &ToricPair, exec: Exec) -> Result<MldResult, ToricError> {
    let psi = psi_from_pair(pair)?;
    if pair.coeffs().iter().any(|b| *b > Rat::one()) {
        return Ok(MldResult {
            value: MldValue::NegInfinity,
            witness: None,
            fold: None,
        });
    }
    let region = search_region(pair, exec)?;
    let (witness, value) = region
        .into_iter()
        .map(|p| {
            let v = psi.eval(&p);
            (p, v)
        })
        // `min_by` keeps the first of equal elements, and the region is
        // sorted lexicographically.
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("relint(σ) ∩ {ψ₀ ≤ d} is never empty");
    let fold = caratheodory_decompose(pair.germ(), &witness)?;
    Ok(MldResult {
        value: MldValue::Finite(value),
        witness: Some(witness),
        fold: Some(fold),
    })
}

/// Lattice points of `relint(σ) ∩ {ψ₀ ≤ d}`, lexicographically sorted.
pub(crate) fn search_region(pair: &ToricPair, exec: Exec) -> Result<Vec<LatticePoint>, ToricError> {
    region_with_bound(pair, pair.germ().dim() as i64, exec)
}

/// Lattice points of `relint(σ) ∩ {ψ₀ ≤ bound}`.
pub fn region_with_bound(
    pair: &ToricPair,
    bound: i64,
    exec: Exec,
) -> Result<Vec<LatticePoint>, ToricError> {
    let germ = pair.germ();
    let psi0 = germ.psi0()?;
    let mut cs: Vec<Constraint> = germ
        .facets()
        .iter()
        .map(|u| Constraint::ge(u.iter().map(|&x| rat::int(x)).collect(), Rat::zero(), true))
        .collect();
    cs.push(Constraint::le(psi0.0.clone(), rat::int(bound)));
    Ok(lattice::enumerate_lattice_points_with(
        germ.dim(),
        &cs,
        exec,
    )?)
}

/// `min ψ` over `relint(σ) ∩ {ψ₀ ≤ bound}`, without the lc shortcut. For
/// lc pairs any `bound ≥ d` gives the mld.
pub fn mld_over_region(pair: &ToricPair, bound: i64) -> Result<MldValue, ToricError> {
    let psi = psi_from_pair(pair)?;
    let region = region_with_bound(pair, bound, Exec::default())?;
    Ok(region
        .iter()
        .map(|p| psi.eval(p))
        .min()
        .map_or(MldValue::NegInfinity, MldValue::Finite))
}

/// `sup{t ≥ 0 : mld(X ∋ x, B + tD) ≥ a}` and the constraint that binds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlctResult {
    pub value: ExtRat,
    /// The lattice point whose constraint binds, if a point (rather than a
    /// ray coefficient) attains the minimum.
    pub point: Option<LatticePoint>,
    /// The ray whose coefficient reaches 1 first, if that binds.
    pub ray: Option<usize>,
}

/// The `a`-lc threshold of `D = Σ dᵢ V(eᵢ)` with respect to `(X ∋ x, B)`.
///
/// The threshold is the least of `(1 − bᵢ)/dᵢ` over rays with `dᵢ > 0`
/// and `(ψ_B(e) − a)/ψ_D(e)` over `e ∈ S` with `ψ_D(e) > 0`.
pub fn toric_alct(pair: &ToricPair, dcoeffs: &[Rat], a: &Rat) -> Result<AlctResult, ToricError> {
    toric_alct_with(pair, dcoeffs, a, Exec::default())
}

pub fn toric_alct_with(
    pair: &ToricPair,
    dcoeffs: &[Rat],
    a: &Rat,
    exec: Exec,
) -> Result<AlctResult, ToricError> {
    let psi_d: Psi = pair.germ().linear_function(dcoeffs)?;
    if dcoeffs.iter().all(Zero::is_zero) {
        return Err(ToricError::ZeroDivisor);
    }
    let base = toric_mld_with(pair, exec)?;
    let below = match &base.value {
        MldValue::NegInfinity => true,
        MldValue::Finite(m) => m < a,
    };
    if below {
        return Err(ToricError::BelowThresholdAtZero {
            mld: base.value.to_string(),
            a: rat::fmt_rat(a),
        });
    }
    let psi_b = psi_from_pair(pair)?;
    let mut best = AlctResult {
        value: ExtRat::PosInf,
        point: None,
        ray: None,
    };
    for (i, (b, d)) in pair.coeffs().iter().zip(dcoeffs).enumerate() {
        if d.is_positive() {
            let t = ExtRat::Finite((Rat::one() - b) / d);
            if t < best.value {
                best = AlctResult {
                    value: t,
                    point: None,
                    ray: Some(i),
                };
            }
        }
    }
    let region = search_region(pair, exec)?;
    let candidates = par::map(exec, &region, |p| {
        let pd = psi_d.eval(p);
        pd.is_positive().then(|| (psi_b.eval(p) - a) / pd)
    });
    for (p, t) in region.into_iter().zip(candidates) {
        if let Some(t) = t {
            let t = ExtRat::Finite(t);
            if t < best.value {
                best = AlctResult {
                    value: t,
                    point: Some(p),
                    ray: None,
                };
            }
        }
    }
    Ok(best)
}
