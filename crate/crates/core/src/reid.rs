//! Residues, generalized sums, the local contributions `c_x(D)` of Reid's
//! singular Riemann–Roch formula, and the periodic basket functions used to
//! pin down the index of a divisorial contraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::germs::Condition;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReidError {
    #[error("index must be positive, got {0}")]
    BadIndex(i64),
    #[error("{b} is not coprime to {r}")]
    NotCoprime { b: i64, r: i64 },
    #[error("basket weight {v} is outside [0, {r}/2]")]
    WeightOutOfRange { v: i64, r: i64 },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("family parameter must be at least 2, got {0}")]
    FamilyParameter(i64),
}

/// `m − ⌊m/n⌋·n ∈ [0, n)`.
pub fn residue(m: i64, n: i64) -> i64 {
    assert!(n >= 1, "residue modulus must be positive");
    m.mod_floor(&n)
}

fn residue128(m: i128, n: i64) -> i64 {
    m.mod_floor(&(n as i128)) as i64
}

/// `Σ_{i=from}^{to} s_i` with the reversed-bounds convention: `0` when
/// `to = from − 1` and `−Σ_{i=to+1}^{from−1} s_i` when `to < from − 1`.
pub fn gen_sum<F: Fn(i64) -> Rat>(terms: F, from: i64, to: i64) -> Rat {
    if from <= to {
        (from..=to).map(terms).fold(Rat::zero(), |a, b| a + b)
    } else {
        -(to + 1..from).map(terms).fold(Rat::zero(), |a, b| a + b)
    }
}

fn check_index(r: i64) -> Result<(), ReidError> {
    if r < 1 {
        Err(ReidError::BadIndex(r))
    } else {
        Ok(())
    }
}

fn check_coprime(r: i64, b: i64) -> Result<(), ReidError> {
    check_index(r)?;
    if b.gcd(&r) != 1 {
        Err(ReidError::NotCoprime { b, r })
    } else {
        Ok(())
    }
}

/// `2r · B_Q(r, i)`, an integer.
fn b_scaled(r: i64, i: i128) -> i128 {
    let k = residue128(i, r) as i128;
    k * (r as i128 - k)
}

/// `B_Q(r, i) = (i)̄_r (r − (i)̄_r) / (2r)`, even and `r`-periodic.
pub fn b_q(r: i64, i: i64) -> Result<Rat, ReidError> {
    check_index(r)?;
    Ok(Rat::new(b_scaled(r, i as i128).into(), BigInt::from(2 * r)))
}

/// `c_x(D)` at a point of type `1/r(1, −1, b)` where `D ~ iK_X`:
/// `−i(r²−1)/(12r) + Σ_{j=1}^{i−1} B_Q(r, jb)` as a generalized sum.
pub fn c_point(r: i64, b: i64, i: i64) -> Result<Rat, ReidError> {
    check_coprime(r, b)?;
    // Work with numerators over 12r: B_Q contributes 6·(2r·B_Q).
    let (lo, hi) = if i >= 2 { (1, i - 1) } else { (i, 0) };
    let sign: i128 = if i >= 2 { 1 } else { -1 };
    let sum: i128 = (lo..=hi).map(|j| b_scaled(r, j as i128 * b as i128)).sum();
    let r128 = r as i128;
    let num = -(i as i128) * (r128 * r128 - 1) + 6 * sign * sum;
    Ok(Rat::new(num.into(), BigInt::from(12 * r128)))
}

/// `A_Q(i)`: the same expression as [`c_point`], read as a function of
/// `i` attached to a basket point.
pub fn a_q(r: i64, b: i64, i: i64) -> Result<Rat, ReidError> {
    c_point(r, b, i)
}

/// A fictitious point of type `1/r(1, −1, b)` with `E ~ d·K` near it and
/// basket weight `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FictitiousPoint {
    pub r: i64,
    pub b: i64,
    pub d: i64,
    pub v: i64,
}

impl FictitiousPoint {
    pub fn new(r: i64, b: i64, d: i64, v: i64) -> Result<Self, ReidError> {
        check_coprime(r, b)?;
        if v < 0 || 2 * v > r {
            return Err(ReidError::WeightOutOfRange { v, r });
        }
        Ok(FictitiousPoint { r, b, d, v })
    }

    /// `f` with `f·b ≡ v (mod r)`, `0 ≤ f < r`.
    pub fn class(&self) -> i64 {
        let inv = self.b.extended_gcd(&self.r).x;
        residue128(inv as i128 * self.v as i128, self.r)
    }

    /// `B_Q(jb) − B_Q(jb − v)` scaled by `2r`.
    fn delta_term(&self, j: i64) -> i128 {
        let jb = j as i128 * self.b as i128;
        b_scaled(self.r, jb) - b_scaled(self.r, jb - self.v as i128)
    }
}

/// Ambient data `n, a, b` and the two basket points `Q₁, Q₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasketConfig {
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub points: [FictitiousPoint; 2],
}

impl BasketConfig {
    pub fn new(n: i64, a: i64, b: i64, points: [FictitiousPoint; 2]) -> Result<Self, ReidError> {
        check_coprime(n, b)?;
        Ok(BasketConfig { n, a, b, points })
    }
}

/// Prefix sums of `2r·(B_Q(jb) − B_Q(jb − v))` over one period, so that a
/// sum over any window of `j` costs O(1).
struct PeriodSums {
    r: i64,
    prefix: Vec<i128>,
}

impl PeriodSums {
    fn new(q: &FictitiousPoint) -> Self {
        let mut prefix = Vec::with_capacity(q.r as usize + 1);
        let mut acc = 0i128;
        prefix.push(0);
        for j in 0..q.r {
            acc += q.delta_term(j);
            prefix.push(acc);
        }
        PeriodSums { r: q.r, prefix }
    }

    /// `Σ_{j=0}^{m−1}` extended to all integers `m` by periodicity, so that
    /// `G(to + 1) − G(from)` is the generalized sum over `[from, to]`.
    fn cumulative(&self, m: i128) -> i128 {
        let (q, rem) = m.div_mod_floor(&(self.r as i128));
        q * self.prefix[self.r as usize] + self.prefix[rem as usize]
    }

    fn window(&self, from: i128, to: i128) -> i128 {
        self.cumulative(to + 1) - self.cumulative(from)
    }
}

/// The right-hand side of the periodic identity for `δ_r(i+1) − δ_r(i)`:
/// `Σ_Q Σ_{j=i·d_Q}^{(i+1)d_Q−1} (B_Q(jb_Q) − B_Q(jb_Q − v_Q))`.
pub fn delta_difference(config: &BasketConfig, i: i64) -> Rat {
    let tables: Vec<PeriodSums> = config.points.iter().map(PeriodSums::new).collect();
    delta_from_tables(config, &tables, i)
}

fn delta_from_tables(config: &BasketConfig, tables: &[PeriodSums], i: i64) -> Rat {
    config
        .points
        .iter()
        .zip(tables)
        .map(|(q, t)| {
            let from = i as i128 * q.d as i128;
            let to = (i as i128 + 1) * q.d as i128 - 1;
            Rat::new(t.window(from, to).into(), BigInt::from(2 * q.r))
        })
        .fold(Rat::zero(), |a, b| a + b)
}

/// Outcome of [`verify_delta_identity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub checked: i64,
    pub violations: Vec<i64>,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `δ_r(i+1) − δ_r(i) = delta_difference(config, i)` for
/// `i ∈ [0, imax]`, where `δ_r(i) = 1` if `r | i` and `0` otherwise.
pub fn verify_delta_identity(
    config: &BasketConfig,
    r: i64,
    imax: i64,
) -> Result<DeltaReport, ReidError> {
    check_index(r)?;
    let tables: Vec<PeriodSums> = config.points.iter().map(PeriodSums::new).collect();
    let delta = |i: i64| i64::from(i % r == 0);
    let violations = (0..=imax)
        .filter(|&i| {
            delta_from_tables(config, &tables, i)
                != Rat::from_integer((delta(i + 1) - delta(i)).into())
        })
        .collect();
    Ok(DeltaReport {
        checked: imax.max(-1) + 1,
        violations,
    })
}

/// `lcm(r₁/gcd(r₁,d₁), r₂/gcd(r₂,d₂))`.
pub fn index_from_basket(r1: i64, d1: i64, r2: i64, d2: i64) -> Result<i64, ReidError> {
    for r in [r1, d1, r2, d2] {
        check_index(r)?;
    }
    Ok((r1 / r1.gcd(&d1)).lcm(&(r2 / r2.gcd(&d2))))
}

/// Whether `r | gcd(r₁, r₂)`, given `r | n` and `n | r₁ + r₂`.
pub fn check_divisibility_conclusion(config: &BasketConfig, r: i64) -> Result<bool, ReidError> {
    check_index(r)?;
    let [q1, q2] = config.points;
    if config.n % r != 0 {
        return Err(ReidError::SideConditionViolated(format!(
            "{r} does not divide n = {}",
            config.n
        )));
    }
    if (q1.r + q2.r) % config.n != 0 {
        return Err(ReidError::SideConditionViolated(format!(
            "n = {} does not divide r1 + r2 = {}",
            config.n,
            q1.r + q2.r
        )));
    }
    Ok(q1.r.gcd(&q2.r) % r == 0)
}

/// A member of the one-parameter family of basket data and the verdicts of
/// the arithmetic conditions it is meant to satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub rparam: i64,
    pub config: BasketConfig,
    pub conditions: Vec<Condition>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }
}

/// `n = r(4r²−2r−1)`, `a = r`, `b = 4r²+2r−1`,
/// `Q₁ = (r₁ = d₁ = (2r−1)²r², b₁ = 4r³−r+1)`,
/// `Q₂ = (r₂ = 2r²(r−1), d₂ = 2r(r−1), b₂ = 2r²−1)`, both with `v = 1`.
pub fn remark_family(rparam: i64) -> Result<FamilyReport, ReidError> {
    let r = rparam;
    if r < 2 {
        return Err(ReidError::FamilyParameter(r));
    }
    let n = r * (4 * r * r - 2 * r - 1);
    let a = r;
    let b = 4 * r * r + 2 * r - 1;
    let r1 = (2 * r - 1) * (2 * r - 1) * r * r;
    let q1 = FictitiousPoint::new(r1, 4 * r * r * r - r + 1, r1, 1)?;
    let q2 = FictitiousPoint::new(2 * r * r * (r - 1), 2 * r * r - 1, 2 * r * (r - 1), 1)?;
    let config = BasketConfig::new(n, a, b, [q1, q2])?;
    let abr = a - b * q1.r;
    let cond = |name: &str, holds: bool| Condition {
        name: name.to_string(),
        holds,
    };
    let conditions = vec![
        cond("r | n", n % r == 0),
        cond("gcd(b, n) = 1", b.gcd(&n) == 1),
        cond("n | a - b*r1", abr % n == 0),
        cond("a*n | r1 + r2", (q1.r + q2.r) % (a * n) == 0),
        cond("gcd((a - b*r1)/n, r1) = 1", (abr / n).gcd(&q1.r) == 1),
    ];
    Ok(FamilyReport {
        rparam,
        config,
        conditions,
    })
}

/// `E³`, `E²·K_Y` and `E·c₂`, supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    pub e3: Rat,
    pub e2k: Rat,
    pub ec2: Rat,
}

/// The value of `χ(Y, iE) − χ(Y, (i−1)E)`-type differences and the divisor
/// classes `f_Q` used for each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiDifference {
    pub value: Rat,
    pub classes: [i64; 2],
}

/// `E³/6 + E²K/4 + E·c₂/12 + Σ_Q (A_Q(i·d_Q) − A_Q(i·d_Q − f_Q))`, where
/// `f_Q` solves `f·b_Q ≡ v_Q (mod r_Q)`.
pub fn chi_difference(
    config: &BasketConfig,
    data: &IntersectionData,
    i: i64,
) -> Result<ChiDifference, ReidError> {
    let mut value = &data.e3 / Rat::from_integer(6.into())
        + &data.e2k / Rat::from_integer(4.into())
        + &data.ec2 / Rat::from_integer(12.into());
    let mut classes = [0; 2];
    for (q, slot) in config.points.iter().zip(classes.iter_mut()) {
        let f = q.class();
        *slot = f;
        let id = i * q.d;
        value += a_q(q.r, q.b, id)? - a_q(q.r, q.b, id - f)?;
    }
    Ok(ChiDifference { value, classes })
}
