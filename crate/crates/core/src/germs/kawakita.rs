//! Side conditions of Kawakita's classification of ordinary divisorial
//! contractions to terminal threefold points, checked against a germ and a
//! weight.
//!
//! Optional data of the normal forms (the `q`, `λ`, `μ` terms) is only
//! validated when the corresponding terms are present.

use std::fmt;

use num_integer::Integer;

use super::{AdmissibleWeight, GermError, GermTag, HyperquotientGerm};
use crate::weighted::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KawakitaCase {
    /// `cA/n`: `x₁x₂ + g(x₃ⁿ, x₄)` in `(1/n)(1,−1,b,0)`.
    CaOverN,
    /// `cD`, one equation in `ℂ⁴`.
    Cd21,
    /// `cD`, two equations in `ℂ⁵`.
    Cd22,
    /// `cD/2`, one equation in `ℂ⁴/(1/2)(1,1,1,0)`.
    Cd2Over31,
    /// `cD/2`, two equations in `ℂ⁵/(1/2)(1,1,1,0,1)`.
    Cd2Over32,
}

impl KawakitaCase {
    pub fn label(self) -> &'static str {
        match self {
            KawakitaCase::CaOverN => "1",
            KawakitaCase::Cd21 => "2.1",
            KawakitaCase::Cd22 => "2.2",
            KawakitaCase::Cd2Over31 => "3.1",
            KawakitaCase::Cd2Over32 => "3.2",
        }
    }
}

impl fmt::Display for KawakitaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

/// Which case was examined, every side condition with its verdict, and the
/// integer parameters read off the weight. `case == None` means the germ
/// carries no classified normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PatternReport {
    pub case: Option<KawakitaCase>,
    pub conditions: Vec<Condition>,
    pub params: Vec<(String, i64)>,
}

impl PatternReport {
    pub fn passed(&self) -> bool {
        self.case.is_some() && self.conditions.iter().all(|c| c.holds)
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    fn check(&mut self, name: &str, holds: bool) {
        self.conditions.push(Condition {
            name: name.to_string(),
            holds,
        });
    }

    fn set(&mut self, name: &str, v: i64) {
        self.params.push((name.to_string(), v));
    }
}

pub fn check_kawakita_pattern(
    germ: &HyperquotientGerm,
    w: &AdmissibleWeight,
) -> Result<PatternReport, GermError> {
    let d = germ.dim();
    if !matches!(d, 4 | 5) {
        return Err(GermError::UnsupportedDimension(d));
    }
    super::check_weight_dim(germ, w)?;
    let case = match germ.tag() {
        _ if germ.eqs().is_empty() => return Ok(PatternReport::default()),
        None | Some(GermTag::Smooth) => return Ok(PatternReport::default()),
        Some(GermTag::CaOverN) => KawakitaCase::CaOverN,
        Some(GermTag::Cd41) => KawakitaCase::Cd21,
        Some(GermTag::Cd52) => KawakitaCase::Cd22,
        Some(GermTag::Cd2Over41) => KawakitaCase::Cd2Over31,
        Some(GermTag::Cd2Over52) => KawakitaCase::Cd2Over32,
    };
    let mut rep = PatternReport {
        case: Some(case),
        ..Default::default()
    };
    let ctx = Ctx {
        germ,
        w: w.numerators(),
    };
    let (want_dim, want_eqs) = match case {
        KawakitaCase::CaOverN | KawakitaCase::Cd21 | KawakitaCase::Cd2Over31 => (4, 1),
        _ => (5, 2),
    };
    rep.check(
        &format!("{want_eqs} equation(s) in dimension {want_dim}"),
        d == want_dim && germ.eqs().len() == want_eqs,
    );
    if !rep.passed() {
        return Ok(rep);
    }
    match case {
        KawakitaCase::CaOverN => case_ca(&ctx, &mut rep),
        KawakitaCase::Cd21 => case_cd21(&ctx, &mut rep),
        KawakitaCase::Cd22 => case_cd22(&ctx, &mut rep),
        KawakitaCase::Cd2Over31 => case_cd2_31(&ctx, &mut rep),
        KawakitaCase::Cd2Over32 => case_cd2_32(&ctx, &mut rep),
    }
    Ok(rep)
}

struct Ctx<'a> {
    germ: &'a HyperquotientGerm,
    /// Weight numerators; the weight is these over the action order.
    w: &'a [i64],
}

impl Ctx<'_> {
    fn n(&self) -> i64 {
        self.germ.order()
    }

    fn eq(&self, i: usize) -> &Poly {
        &self.germ.eqs()[i]
    }

    /// `n · w(x^α)`.
    fn iw(&self, e: &[i64]) -> i64 {
        self.w.iter().zip(e).map(|(a, b)| a * b).sum()
    }

    /// `n · w(h)` over the terms selected by `keep`; `None` if none is.
    fn iw_of(&self, h: &Poly, keep: impl Fn(&[i64]) -> bool) -> Option<i64> {
        h.support().filter(|e| keep(e)).map(|e| self.iw(e)).min()
    }
}

pub(super) fn has(h: &Poly, e: &[i64]) -> bool {
    h.contains_monomial(e)
}

fn is_const(e: &[i64]) -> bool {
    e.iter().all(|&a| a == 0)
}

fn deg(e: &[i64]) -> i64 {
    e.iter().sum()
}

/// Characters multiplied by the inverse of the first one, so that a
/// `(1/n)(1,−1,b,0)` action is recognized in any presentation.
fn normalized_chars(germ: &HyperquotientGerm) -> Option<Vec<i64>> {
    let n = germ.order();
    let a0 = germ.action().chars()[0];
    let g = a0.extended_gcd(&n);
    if g.gcd != 1 {
        return None;
    }
    let inv = g.x.mod_floor(&n);
    Some(
        germ.action()
            .chars()
            .iter()
            .map(|&a| (a as i128 * inv as i128).rem_euclid(n as i128) as i64)
            .collect(),
    )
}

fn case_ca(c: &Ctx, rep: &mut PatternReport) {
    let n = c.n();
    let chars = normalized_chars(c.germ);
    let b = chars.as_ref().map(|ch| ch[2]);
    rep.check(
        "action is (1/n)(1,-1,b,0)",
        chars
            .as_ref()
            .is_some_and(|ch| ch[1] == (n - 1).mod_floor(&n) && ch[3] == 0),
    );
    let (r1, r2, a) = (c.w[0], c.w[1], c.w[2]);
    rep.set("n", n);
    if let Some(b) = b {
        rep.set("b", b);
    }
    rep.set("r1", r1);
    rep.set("r2", r2);
    rep.set("a", a);
    rep.check("w = (1/n)(r1,r2,a,n)", c.w[3] == n);
    let phi = c.eq(0);
    rep.check(
        "phi = x1*x2 + g(x3^n, x4)",
        has(phi, &[1, 1, 0, 0])
            && phi.support().all(|e| {
                e[..] == [1, 1, 0, 0] || (e[0] == 0 && e[1] == 0 && !is_const(e) && e[2] % n == 0)
            }),
    );
    rep.check(
        "n*w(phi) = r1 + r2",
        c.iw_of(phi, |_| true) == Some(r1 + r2),
    );
    let d = ((r1 + r2) % (a * n) == 0).then(|| (r1 + r2) / (a * n));
    rep.check("r1 + r2 = a*d*n", d.is_some());
    if let Some(d) = d {
        rep.set("d", d);
        rep.check("x3^(d*n) in g", has(phi, &[0, 0, d * n, 0]));
    }
    rep.check(
        "a = b*r1 mod n",
        b.is_some_and(|b| (a - b * r1).mod_floor(&n) == 0),
    );
}

fn case_cd21(c: &Ctx, rep: &mut PatternReport) {
    rep.check("action is trivial", c.n() == 1);
    let (r, a) = (c.w[1], c.w[2]);
    rep.set("r", r);
    rep.set("a", a);
    rep.check("w = (r+1,r,a,1)", c.w[0] == r + 1 && c.w[3] == 1);
    let phi = c.eq(0);
    let special = |e: &[i64]| matches!(e, [0, 2, 0, 1] | [0, 1, 2, 0] | [0, 0, 3, 0]);
    rep.check(
        "phi = x1^2 + x1*q(x3,x4) + x2^2*x4 + l*x2*x3^2 + m*x3^3 + p, p in (x2,x3,x4)^4",
        has(phi, &[2, 0, 0, 0])
            && has(phi, &[0, 2, 0, 1])
            && phi.support().all(|e| match e[0] {
                2 => e[..] == [2, 0, 0, 0],
                1 => e[1] == 0 && !is_const(&e[2..]),
                0 => special(e) || deg(e) >= 4,
                _ => false,
            }),
    );
    rep.check("a is odd", a.is_odd());
    rep.check(
        "w(phi) = w(x2^2*x4) = 2r+1",
        c.iw_of(phi, |_| true) == Some(2 * r + 1) && c.iw(&[0, 2, 0, 1]) == 2 * r + 1,
    );
    let d = ((2 * r + 1) % a == 0).then(|| (2 * r + 1) / a);
    rep.check(
        "2r+1 = a*d with d odd, d >= 3",
        d.is_some_and(|d| d.is_odd() && d >= 3),
    );
    if let Some(d) = d {
        rep.set("d", d);
        rep.check("x3^d in phi", has(phi, &[0, 0, d, 0]));
        if d > 3 {
            rep.check(
                "d > 3 implies lambda = mu = 0",
                !has(phi, &[0, 1, 2, 0]) && !has(phi, &[0, 0, 3, 0]),
            );
        }
    }
    if let Some(wq) = c.iw_of(phi, |e| e[0] == 1) {
        rep.check("w(x1*q) = 2r+1", wq == 2 * r + 1);
    }
}

fn case_cd22(c: &Ctx, rep: &mut PatternReport) {
    rep.check("action is trivial", c.n() == 1);
    let (r, a) = (c.w[1], c.w[2]);
    rep.set("r", r);
    rep.set("a", a);
    rep.check(
        "w = (r+1,r,a,1,r+2)",
        c.w[0] == r + 1 && c.w[3] == 1 && c.w[4] == r + 2,
    );
    let d = ((r + 1) % a == 0).then(|| (r + 1) / a);
    rep.check("r+1 = a*d with d >= 2", d.is_some_and(|d| d >= 2));
    if let Some(d) = d {
        rep.set("d", d);
    }
    let (phi1, phi2) = (c.eq(0), c.eq(1));
    rep.check(
        "phi1 = x1^2 + x2*x5 + p(x2,x3,x4), p in (x2,x3,x4)^4",
        has(phi1, &[2, 0, 0, 0, 0])
            && has(phi1, &[0, 1, 0, 0, 1])
            && phi1.support().all(|e| {
                matches!(&e[..], [2, 0, 0, 0, 0] | [0, 1, 0, 0, 1])
                    || (e[0] == 0 && e[4] == 0 && deg(e) >= 4)
            }),
    );
    let q_term = |e: &[i64]| e[0] == 0 && e[1] == 0 && e[4] == 0 && e[3] >= 1;
    rep.check(
        "phi2 = x2*x4 + x3^d + q(x3,x4)*x4 + x5",
        d.is_some_and(|d| {
            has(phi2, &[0, 1, 0, 1, 0])
                && has(phi2, &[0, 0, d, 0, 0])
                && has(phi2, &[0, 0, 0, 0, 1])
                && phi2.support().all(|e| {
                    matches!(&e[..], [0, 1, 0, 1, 0] | [0, 0, 0, 0, 1])
                        || e[..] == [0, 0, d, 0, 0]
                        || (q_term(e) && e[..] != [0, 1, 0, 1, 0])
                })
        }),
    );
    rep.check(
        "w(phi1) = 2(r+1)",
        c.iw_of(phi1, |_| true) == Some(2 * (r + 1)),
    );
    rep.check("w(phi2) = r+1", c.iw_of(phi2, |_| true) == Some(r + 1));
    if let Some(wq) = c.iw_of(phi2, q_term) {
        rep.check("w(q*x4) = r+1", wq == r + 1);
    }
}

fn action_is(c: &Ctx, n: i64, chars: &[i64]) -> bool {
    c.n() == n && c.germ.action().chars() == chars
}

fn case_cd2_31(c: &Ctx, rep: &mut PatternReport) {
    rep.check("action is (1/2)(1,1,1,0)", action_is(c, 2, &[1, 1, 1, 0]));
    let (r, a) = (c.w[1], c.w[2]);
    rep.set("r", r);
    rep.set("a", a);
    rep.check("w = (1/2)(r+2,r,a,2)", c.w[0] == r + 2 && c.w[3] == 2);
    let phi = c.eq(0);
    rep.check(
        "phi = x1^2 + x1*x3*q(x3^2,x4) + x2^2*x4 + l*x2*x3^(2k-1) + p(x3^2,x4)",
        has(phi, &[2, 0, 0, 0])
            && has(phi, &[0, 2, 0, 1])
            && phi.support().all(|e| match (e[0], e[1]) {
                (2, _) => e[..] == [2, 0, 0, 0],
                (1, 0) => e[2].is_odd(),
                (0, 2) => e[..] == [0, 2, 0, 1],
                (0, 1) => e[3] == 0 && e[2].is_odd(),
                (0, 0) => e[2].is_even() && !is_const(e),
                _ => false,
            }),
    );
    rep.check("a and r are odd", a.is_odd() && r.is_odd());
    // Numerators are twice the weights.
    rep.check(
        "w(phi) = w(x2^2*x4) = r+1",
        c.iw_of(phi, |_| true) == Some(2 * (r + 1)) && c.iw(&[0, 2, 0, 1]) == 2 * (r + 1),
    );
    let d = ((r + 1) % a == 0).then(|| (r + 1) / a);
    rep.check("r+1 = a*d", d.is_some());
    if let Some(d) = d {
        rep.set("d", d);
        rep.check("x3^(2d) in p", has(phi, &[0, 0, 2 * d, 0]));
    }
    if let Some(wq) = c.iw_of(phi, |e| e[0] == 1) {
        rep.check("w(x1*x3*q) = r+1", wq == 2 * (r + 1));
    }
}

fn case_cd2_32(c: &Ctx, rep: &mut PatternReport) {
    rep.check(
        "action is (1/2)(1,1,1,0,1)",
        action_is(c, 2, &[1, 1, 1, 0, 1]),
    );
    let (r, a) = (c.w[1], c.w[2]);
    rep.set("r", r);
    rep.set("a", a);
    rep.check(
        "w = (1/2)(r+2,r,a,2,r+4)",
        c.w[0] == r + 2 && c.w[3] == 2 && c.w[4] == r + 4,
    );
    let d = ((r + 2) % a == 0).then(|| (r + 2) / a);
    rep.check("r+2 = a*d with d odd", d.is_some_and(|d| d.is_odd()));
    if let Some(d) = d {
        rep.set("d", d);
    }
    let (phi1, phi2) = (c.eq(0), c.eq(1));
    rep.check(
        "phi1 = x1^2 + x2*x5 + p(x3^2,x4)",
        has(phi1, &[2, 0, 0, 0, 0])
            && has(phi1, &[0, 1, 0, 0, 1])
            && phi1.support().all(|e| {
                matches!(&e[..], [2, 0, 0, 0, 0] | [0, 1, 0, 0, 1])
                    || (e[0] == 0 && e[1] == 0 && e[4] == 0 && e[2].is_even() && !is_const(e))
            }),
    );
    let q_term = |e: &[i64]| e[0] == 0 && e[1] == 0 && e[4] == 0 && e[2].is_odd() && e[3] >= 1;
    rep.check(
        "phi2 = x2*x4 + x3^d + q(x3^2,x4)*x3*x4 + x5",
        d.is_some_and(|d| {
            has(phi2, &[0, 1, 0, 1, 0])
                && has(phi2, &[0, 0, d, 0, 0])
                && has(phi2, &[0, 0, 0, 0, 1])
                && phi2.support().all(|e| {
                    matches!(&e[..], [0, 1, 0, 1, 0] | [0, 0, 0, 0, 1])
                        || e[..] == [0, 0, d, 0, 0]
                        || q_term(e)
                })
        }),
    );
    rep.check(
        "w(phi1) = r+2",
        c.iw_of(phi1, |_| true) == Some(2 * (r + 2)),
    );
    rep.check("w(phi2) = (r+2)/2", c.iw_of(phi2, |_| true) == Some(r + 2));
    if let Some(wq) = c.iw_of(phi2, q_term) {
        rep.check("w(q*x3*x4) = (r+2)/2", wq == r + 2);
    }
}
