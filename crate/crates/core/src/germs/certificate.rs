//! Irreducibility certificates for weighted blow-ups of classified germs.
//!
//! A certificate is issued only when the weighted leading terms of the
//! equations have one of the integral shapes from the classification, in
//! which case the exceptional divisor is prime and `w(X∋x)` is predicted by
//! the shape alone. Anything else is reported as unknown; no general
//! primality test is attempted.

use std::fmt;

use num_integer::Integer;

use super::kawakita::has;
use super::{germ_weight_discrepancy, AdmissibleWeight, GermError, GermTag, HyperquotientGerm};
use crate::rat::{self, Rat};
use crate::weighted::{leading_term, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    /// `cA/n`, `w = (1/n)(r₁,r₂,a,n)`: `φ_w = x₁x₂ + h(x₃,x₄)`.
    CaOverN,
    /// `cD`, `w = (r+1,r,a,1)`: `φ_w = x₂²x₄ + μx₃^d`, `d` odd.
    CdOneGeneral,
    /// `cD`, `w = (d,d,2,1)`: `φ_w = x₁² + μx₃^d`, `d` odd.
    CdOneSpecial,
    /// `cD` in `ℂ⁵`, `w = (r+1,r,a,1,r+2)`: `φ₂_w = x₂x₄ + x₃^d`.
    CdTwoGeneral,
    /// `cD` in `ℂ⁵`, `w = (d,d,1,1,d)`: `φ₂_w = x₅ + x₃^d`.
    CdTwoSpecial,
    /// `cD/2`, `w = (1/2)(r+2,r,a,2)`: `φ_w = x₂²x₄ + x₃^{2d}`.
    Cd2One,
    /// `cD/2` in `ℂ⁵`, `w = (1/2)(r+2,r,a,2,r+4)`.
    Cd2Two,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::CaOverN => "cA/n",
            CertificateKind::CdOneGeneral => "cD (r+1,r,a,1)",
            CertificateKind::CdOneSpecial => "cD (d,d,2,1)",
            CertificateKind::CdTwoGeneral => "cD (r+1,r,a,1,r+2)",
            CertificateKind::CdTwoSpecial => "cD (d,d,1,1,d)",
            CertificateKind::Cd2One => "cD/2 (r+2,r,a,2)/2",
            CertificateKind::Cd2Two => "cD/2 (r+2,r,a,2,r+4)/2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// `w(X∋x)` as predicted by the matched shape.
    pub predicted: Rat,
    /// The weighted leading terms that matched.
    pub leading_terms: Vec<Poly>,
}

/// `Some(certificate)` when the leading terms match a classified integral
/// shape, `None` when irreducibility is unknown.
///
/// # Panics
///
/// If the predicted `w(X∋x)` disagrees with the value computed from the
/// discrepancy formula; that would be a bug in the shape tables.
pub fn irreducibility_certificate(
    germ: &HyperquotientGerm,
    w: &AdmissibleWeight,
) -> Result<Option<Certificate>, GermError> {
    let actual = germ_weight_discrepancy(germ, w)?;
    let Some(tag) = germ.tag() else {
        return Ok(None);
    };
    let weight = w.weight();
    let lts: Vec<Poly> = germ
        .eqs()
        .iter()
        .map(|eq| leading_term(&weight, eq).expect("nonzero after discrepancy check"))
        .collect();
    let ws = w.numerators();
    let n = germ.order();
    let found = match (tag, germ.dim(), lts.len()) {
        (GermTag::CaOverN, 4, 1) => ca(ws, n, &lts[0]),
        (GermTag::Cd41, 4, 1) if n == 1 => cd_one(ws, &lts[0]),
        (GermTag::Cd52, 5, 2) if n == 1 => cd_two(ws, &lts[0], &lts[1]),
        (GermTag::Cd2Over41, 4, 1) if n == 2 => cd2_one(ws, &lts[0]),
        (GermTag::Cd2Over52, 5, 2) if n == 2 => cd2_two(ws, &lts[0], &lts[1]),
        _ => None,
    };
    Ok(found.map(|(kind, predicted)| {
        assert_eq!(
            predicted, actual,
            "shape {kind} predicts w(X∋x) = {predicted}, discrepancy formula gives {actual}"
        );
        Certificate {
            kind,
            predicted,
            leading_terms: lts,
        }
    }))
}

/// Exponent of `h = c·x₃^k` restricted to a pure power of `x₃`, if it is one.
fn x3_power(e: &[i64]) -> Option<i64> {
    e.iter()
        .enumerate()
        .all(|(i, &a)| i == 2 || a == 0)
        .then_some(e[2])
        .filter(|&k| k > 0)
}

/// `h` consists of exactly the monomial `fixed` plus one pure `x₃` power;
/// returns that power.
fn fixed_plus_x3(h: &Poly, fixed: &[i64]) -> Option<i64> {
    if h.len() != 2 || !has(h, fixed) {
        return None;
    }
    h.support()
        .find(|e| &e[..] != fixed)
        .and_then(|e| x3_power(e))
}

fn ca(w: &[i64], n: i64, lt: &Poly) -> Option<(CertificateKind, Rat)> {
    let shape = w[3] == n
        && has(lt, &[1, 1, 0, 0])
        && lt.support().any(|e| x3_power(e).is_some())
        && lt
            .support()
            .all(|e| e[..] == [1, 1, 0, 0] || (e[0] == 0 && e[1] == 0));
    shape.then(|| (CertificateKind::CaOverN, rat::ratio(w[2], n)))
}

fn cd_one(w: &[i64], lt: &Poly) -> Option<(CertificateKind, Rat)> {
    if w[3] != 1 {
        return None;
    }
    if w[0] == w[1] + 1 {
        let k = fixed_plus_x3(lt, &[0, 2, 0, 1])?;
        return (k.is_odd() && k >= 3).then(|| (CertificateKind::CdOneGeneral, rat::int(w[2])));
    }
    if w[0] == w[1] && w[2] == 2 {
        let k = fixed_plus_x3(lt, &[2, 0, 0, 0])?;
        return (k.is_odd() && k == w[0]).then(|| (CertificateKind::CdOneSpecial, rat::int(2)));
    }
    None
}

fn cd_two(w: &[i64], lt1: &Poly, lt2: &Poly) -> Option<(CertificateKind, Rat)> {
    if w[3] != 1 {
        return None;
    }
    if w[0] == w[1] + 1 && w[4] == w[1] + 2 {
        let k = fixed_plus_x3(lt2, &[0, 1, 0, 1, 0])?;
        let allowed = |e: &[i64]| {
            matches!(e, [2, 0, 0, 0, 0] | [0, 1, 0, 0, 1] | [0, 2, 0, 2, 0])
                || e == [0, 0, 2 * k, 0, 0]
                || e == [0, 1, k, 1, 0]
        };
        let ok = has(lt1, &[2, 0, 0, 0, 0]) && lt1.support().all(|e| allowed(e));
        return ok.then(|| (CertificateKind::CdTwoGeneral, rat::int(w[2])));
    }
    if w[0] == w[1] && w[2] == 1 && w[4] == w[0] {
        let d = w[0];
        let k = fixed_plus_x3(lt2, &[0, 0, 0, 0, 1])?;
        let ok = k == d
            && has(lt1, &[2, 0, 0, 0, 0])
            && has(lt1, &[0, 1, 0, 0, 1])
            && lt1.support().all(|e| {
                matches!(&e[..], [2, 0, 0, 0, 0] | [0, 1, 0, 0, 1]) || e[..] == [0, 0, 2 * d, 0, 0]
            });
        return ok.then(|| (CertificateKind::CdTwoSpecial, rat::int(1)));
    }
    None
}

fn cd2_one(w: &[i64], lt: &Poly) -> Option<(CertificateKind, Rat)> {
    if w[3] != 2 || w[0] != w[1] + 2 {
        return None;
    }
    let k = fixed_plus_x3(lt, &[0, 2, 0, 1])?;
    k.is_even()
        .then(|| (CertificateKind::Cd2One, rat::ratio(w[2], 2)))
}

fn cd2_two(w: &[i64], lt1: &Poly, lt2: &Poly) -> Option<(CertificateKind, Rat)> {
    if w[3] != 2 || w[0] != w[1] + 2 || w[4] != w[1] + 4 {
        return None;
    }
    let k = fixed_plus_x3(lt2, &[0, 1, 0, 1, 0])?;
    let ok = k.is_odd()
        && has(lt1, &[2, 0, 0, 0, 0])
        && has(lt1, &[0, 1, 0, 0, 1])
        && lt1.support().all(|e| {
            matches!(&e[..], [2, 0, 0, 0, 0] | [0, 1, 0, 0, 1]) || e[..] == [0, 0, 2 * k, 0, 0]
        });
    ok.then(|| (CertificateKind::Cd2Two, rat::ratio(w[2], 2)))
}
