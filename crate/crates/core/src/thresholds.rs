//! Finite shadows of the canonical-threshold sets near their accumulation
//! points, plus the small combinatorial tools used alongside them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::newton::longest_chain_by;
use crate::par::{self, Exec};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("k must be positive, got {0}")]
    BadK(i64),
    #[error("cap must be positive, got {0}")]
    BadCap(i64),
    #[error("no values to scan")]
    EmptyValues,
    #[error("no sequences, or sequences of length zero")]
    DegenerateInput,
    #[error("sequence {index} has length {got}, expected {expected}")]
    LengthMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("entry {position} of sequence {index} is not positive")]
    NonPositive { index: usize, position: usize },
}

/// Whether `t ∈ I_k`: the reduced numerator of `t` is at most `16(k+1)²`.
/// Non-positive `t` is never a member.
pub fn ik_contains(k: i64, t: &Rat) -> bool {
    t.is_positive() && *t.numer() <= BigInt::from(16 * (k + 1) * (k + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CtKind {
    Smooth,
    CA,
}

impl std::str::FromStr for CtKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smooth" => Ok(CtKind::Smooth),
            "cA" => Ok(CtKind::CA),
            other => Err(format!(
                "unknown threshold kind {other:?} (expected smooth or cA)"
            )),
        }
    }
}

/// One value `(r₁ + r₂)/dm` with the lexicographically least `(r₁, r₂, dm)`
/// producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtEntry {
    pub value: Rat,
    pub r1: i64,
    pub r2: i64,
    pub dm: i64,
}

/// Values `(r₁+r₂)/m` over `1 ≤ r₁ ≤ k+1`, `r₁ ≤ r₂ ≤ cap` and
/// `(k+1)r₂ ≤ m < (k+1)(r₁+r₂)`, ascending and without repeats.
///
/// For `cA` the denominator is a product `dm` in the same window; since
/// only the product enters, both kinds enumerate the same triples.
pub fn enumerate_ct_set(kind: CtKind, k: i64, cap: i64) -> Result<Vec<CtEntry>, ThresholdError> {
    enumerate_ct_set_with(kind, k, cap, Exec::default())
}

pub fn enumerate_ct_set_with(
    _kind: CtKind,
    k: i64,
    cap: i64,
    exec: Exec,
) -> Result<Vec<CtEntry>, ThresholdError> {
    if k < 1 {
        return Err(ThresholdError::BadK(k));
    }
    if cap < 1 {
        return Err(ThresholdError::BadCap(cap));
    }
    let r1s: Vec<i64> = (1..=(k + 1).min(cap)).collect();
    let triples = par::map_collect(exec, &r1s, |&r1| {
        let mut out = Vec::new();
        for r2 in r1..=cap {
            for dm in (k + 1) * r2..(k + 1) * (r1 + r2) {
                out.push(CtEntry {
                    value: rat::ratio(r1 + r2, dm),
                    r1,
                    r2,
                    dm,
                });
            }
        }
        out
    });
    // Triples arrive in lexicographic order, so the first one seen for a
    // value is the least.
    let mut by_value: BTreeMap<Rat, CtEntry> = BTreeMap::new();
    for e in triples {
        by_value.entry(e.value.clone()).or_insert(e);
    }
    Ok(by_value.into_values().collect())
}

pub fn enumerate_smooth_ct_set(k: i64, cap: i64) -> Result<Vec<Rat>, ThresholdError> {
    Ok(enumerate_ct_set(CtKind::Smooth, k, cap)?
        .into_iter()
        .map(|e| e.value)
        .collect())
}

#[allow(non_snake_case)]
pub fn enumerate_cA_ct_set(k: i64, cap: i64) -> Result<Vec<Rat>, ThresholdError> {
    Ok(enumerate_ct_set(CtKind::CA, k, cap)?
        .into_iter()
        .map(|e| e.value)
        .collect())
}

/// Tail counts above one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetCounts {
    pub target: Rat,
    /// `(ε, #{v : τ + ε < v < next target})` for each rung of the ladder.
    pub counts: Vec<(Rat, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccumulationReport {
    /// Ascending, without repeats.
    pub values: Vec<Rat>,
    pub targets: Vec<TargetCounts>,
    pub min: Rat,
    /// `min(values) − min(targets)`, if there are targets.
    pub gap: Option<Rat>,
}

/// Diagnostics of finitely many values against candidate accumulation
/// points. Nothing is claimed beyond the data supplied.
pub fn accumulation_scan(
    values: &[Rat],
    targets: &[Rat],
    eps_ladder: &[Rat],
) -> Result<AccumulationReport, ThresholdError> {
    let mut vals = values.to_vec();
    vals.sort();
    vals.dedup();
    let min = vals.first().cloned().ok_or(ThresholdError::EmptyValues)?;
    let mut ts = targets.to_vec();
    ts.sort();
    ts.dedup();
    let report = ts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let next = ts.get(i + 1);
            let counts = eps_ladder
                .iter()
                .map(|e| {
                    let lo = t + e;
                    let n = vals
                        .iter()
                        .filter(|v| **v > lo && next.is_none_or(|nx| *v < nx))
                        .count();
                    (e.clone(), n)
                })
                .collect();
            TargetCounts {
                target: t.clone(),
                counts,
            }
        })
        .collect();
    let gap = ts.first().map(|t| &min - t);
    Ok(AccumulationReport {
        values: vals,
        targets: report,
        min,
        gap,
    })
}

/// `(⌈μm⌉, ⌊ratio·m⌋)`: the window for the multiplicity `m′` along a
/// second weight. An empty window (`lo > hi`) is reported as is.
pub fn comparison_bounds(mu: &Rat, m: i64, ratio: &Rat) -> (BigInt, BigInt) {
    let m = rat::int(m);
    (rat::ceil_int(&(mu * &m)), rat::floor_int(&(ratio * &m)))
}

pub fn check_in_bounds(bounds: &(BigInt, BigInt), m_prime: i64) -> bool {
    let m = BigInt::from(m_prime);
    bounds.0 <= m && m <= bounds.1
}

/// A pivot sequence `k` and positions along which every ratio sequence
/// `a_{·,j}/a_{·,k}` is non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneSubsequence {
    pub pivot: usize,
    pub indices: Vec<usize>,
}

/// For each pivot, the longest position chain along which all ratios to
/// the pivot are non-increasing; the longest over pivots wins, ties going
/// to the least pivot and then the lexicographically least positions.
pub fn monotone_ratio_subsequence(
    seqs: &[Vec<Rat>],
) -> Result<MonotoneSubsequence, ThresholdError> {
    let len = seqs.first().map_or(0, Vec::len);
    if len == 0 {
        return Err(ThresholdError::DegenerateInput);
    }
    for (index, s) in seqs.iter().enumerate() {
        if s.len() != len {
            return Err(ThresholdError::LengthMismatch {
                index,
                got: s.len(),
                expected: len,
            });
        }
        if let Some(position) = s.iter().position(|x| !x.is_positive()) {
            return Err(ThresholdError::NonPositive { index, position });
        }
    }
    let mut best: Option<MonotoneSubsequence> = None;
    for pivot in 0..seqs.len() {
        let ratios: Vec<Vec<Rat>> = seqs
            .iter()
            .map(|s| s.iter().zip(&seqs[pivot]).map(|(a, p)| a / p).collect())
            .collect();
        let indices = longest_chain_by(len, |p, q| ratios.iter().all(|r| r[q] <= r[p]));
        if best
            .as_ref()
            .is_none_or(|b| indices.len() > b.indices.len())
        {
            best = Some(MonotoneSubsequence { pivot, indices });
        }
    }
    Ok(best.expect("at least one pivot"))
}

/// Post-hoc check of [`monotone_ratio_subsequence`] output.
pub fn verify_monotone(seqs: &[Vec<Rat>], sub: &MonotoneSubsequence) -> bool {
    let p = &seqs[sub.pivot];
    sub.indices.windows(2).all(|w| w[0] < w[1])
        && seqs.iter().all(|s| {
            sub.indices
                .windows(2)
                .all(|w| &s[w[1]] / &p[w[1]] <= &s[w[0]] / &p[w[0]])
        })
}

/// `1/(k+1)`.
pub fn accumulation_point(k: i64) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(k + 1))
}

/// Values strictly above `1/(k+1) + eps`.
pub fn tail_count(values: &[Rat], k: i64, eps: &Rat) -> usize {
    let lo = accumulation_point(k) + eps;
    values.iter().filter(|v| **v > lo).count()
}
