//! Seeded self-checks of the invariants each module promises.
//!
//! Every suite draws its instances from a ChaCha stream keyed by the seed,
//! so a run is reproducible bit for bit. Suites are small enough to run in
//! well under a second each; the heavier versions live in the test suite.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::germs::{
    self, check_kawakita_pattern, irreducibility_certificate, AdmissibleWeight, CyclicAction,
    GermTag, HyperquotientGerm,
};
use crate::lattice::{self, Constraint, IntMatrix, LatticePoint};
use crate::newton::{self, NewtonPolytope};
use crate::rat::{self, ExtRat, Rat};
use crate::reid;
use crate::thresholds;
use crate::toric::{self, MldValue, ToricGerm, ToricPair};
use crate::weighted::{self, parse_poly, Poly, Weight};

pub const DEFAULT_SEED: u64 = 0x6d6c_646b;

pub const SUITES: [&str; 7] = [
    "lattice",
    "newton",
    "weighted",
    "germs",
    "toric",
    "reid",
    "thresholds",
];

/// Outcome of one suite: how many checks ran and which failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Checker {
    report: SuiteReport,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Checker {
            report: SuiteReport {
                name,
                checks: 0,
                failures: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.failures.push(what());
        }
    }
}

/// Runs the named suite, or `None` if there is no such suite.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = match name {
        "lattice" => lattice_suite(&mut rng),
        "newton" => newton_suite(&mut rng),
        "weighted" => weighted_suite(&mut rng),
        "germs" => germs_suite(&mut rng),
        "toric" => toric_suite(&mut rng),
        "reid" => reid_suite(&mut rng),
        "thresholds" => thresholds_suite(),
        _ => return None,
    };
    Some(report)
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, seed).expect("listed suites exist"))
        .collect()
}

fn lattice_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut c = Checker::new("lattice");
    for _ in 0..40 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect())
            .collect();
        let mat = IntMatrix::from_rows(&m);
        let h = lattice::hermite_normal_form(&mat);
        c.check(h.u.mul(&mat) == h.h, || format!("U·M ≠ H for {m:?}"));
        let det = h.u.det();
        c.check(det == 1.into() || det == (-1).into(), || {
            format!("U not unimodular for {m:?}")
        });
    }
    for _ in 0..20 {
        let dim = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=4);
        let mut cs = Vec::new();
        for i in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[i] = Rat::one();
            cs.push(Constraint::le(e.clone(), rat::int(r)));
            cs.push(Constraint::ge(e, rat::int(-r), false));
        }
        let cov: Vec<Rat> = (0..dim).map(|_| rat::int(rng.gen_range(-3..=3))).collect();
        cs.push(Constraint::lt(cov, rat::int(rng.gen_range(-2..=3))));
        let got = lattice::enumerate_lattice_points(dim, &cs);
        let mut expected = Vec::new();
        let mut p = vec![-r; dim];
        loop {
            if cs.iter().all(|k| k.satisfied_by(&p)) {
                expected.push(LatticePoint(p.clone()));
            }
            let Some(i) = (0..dim).rev().find(|&i| p[i] < r) else {
                break;
            };
            p[i] += 1;
            p[i + 1..].iter_mut().for_each(|x| *x = -r);
        }
        c.check(got.as_ref() == Ok(&expected), || {
            format!("enumeration differs from box scan: {cs:?}")
        });
    }
    c.report
}

fn random_polytope(rng: &mut ChaCha8Rng, dim: usize) -> NewtonPolytope {
    let n = rng.gen_range(1..=4);
    let pts: Vec<LatticePoint> = (0..n)
        .map(|_| LatticePoint((0..dim).map(|_| rng.gen_range(0..=8)).collect()))
        .collect();
    NewtonPolytope::from_generators(dim, &pts).expect("nonnegative points")
}

fn newton_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut c = Checker::new("newton");
    for _ in 0..40 {
        let dim = rng.gen_range(1..=3);
        let a = random_polytope(rng, dim);
        let b = random_polytope(rng, dim);
        let u = a.union(&b);
        c.check(a.is_subpolytope(&u) && b.is_subpolytope(&u), || {
            format!("union {u} misses {a} or {b}")
        });
        c.check(a.is_antichain(), || format!("{a} generators not minimal"));
        let seq: Vec<NewtonPolytope> = (0..8).map(|_| random_polytope(rng, dim)).collect();
        let chain = newton::longest_descending_chain(&seq);
        let ok = chain
            .windows(2)
            .all(|w| w[0] < w[1] && seq[w[1]].is_subpolytope(&seq[w[0]]));
        c.check(ok && !chain.is_empty(), || format!("bad chain {chain:?}"));
    }
    c.report
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize) -> Poly {
    let mut p = Poly::zero(dim);
    for _ in 0..rng.gen_range(1..=3) {
        let e: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=3)).collect();
        let m =
            Poly::monomial(rat::int(rng.gen_range(1..=3)), LatticePoint(e)).expect("nonnegative");
        p = &p + &m;
    }
    p
}

fn weighted_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut c = Checker::new("weighted");
    for _ in 0..40 {
        let dim = rng.gen_range(1..=3);
        let nums: Vec<i64> = (0..dim).map(|_| rng.gen_range(1..=6)).collect();
        let w = Weight::from_ints(&nums, rng.gen_range(1..=5)).expect("positive");
        let f = random_poly(rng, dim);
        let g = random_poly(rng, dim);
        let wf = weighted::weight_of_poly(&w, &f);
        let wg = weighted::weight_of_poly(&w, &g);
        let wfg = weighted::weight_of_poly(&w, &(&f * &g));
        c.check(wfg == wf.clone() + wg.clone(), || {
            format!("w(fg) ≠ w(f) + w(g) for {f}, {g}")
        });
        let wsum = weighted::weight_of_poly(&w, &(&f + &g));
        c.check(wsum >= wf.clone().min(wg), || {
            format!("w(f+g) < min for {f}, {g}")
        });
        let lt = weighted::leading_term(&w, &f).expect("nonzero");
        c.check(weighted::is_w_homogeneous(&w, &lt), || {
            format!("leading term of {f} not homogeneous")
        });
        let mu = rat::ratio(rng.gen_range(1..=5), rng.gen_range(1..=5));
        let ws = w.scale(&mu).expect("positive");
        c.check(
            weighted::weight_of_poly(&ws, &f)
                == match &wf {
                    ExtRat::Finite(x) => ExtRat::Finite(x * &mu),
                    ExtRat::PosInf => ExtRat::PosInf,
                },
            || format!("scaling by {mu} broke w({f})"),
        );
    }
    c.report
}

fn germs_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut c = Checker::new("germs");
    let ca7 = HyperquotientGerm::new(
        CyclicAction::new(7, &[1, 6, 2, 0]).expect("valid action"),
        vec![parse_poly(4, "x1*x2 + x3^7").expect("valid polynomial")],
        Some(GermTag::CaOverN),
    )
    .expect("valid germ");
    let w = AdmissibleWeight::new(&ca7, &[5, 16, 3, 7]).expect("admissible");
    let rep = check_kawakita_pattern(&ca7, &w);
    c.check(rep.as_ref().is_ok_and(|r| r.passed()), || {
        format!("cA/7 pattern failed: {rep:?}")
    });
    let wx = germs::germ_weight_discrepancy(&ca7, &w);
    let cert = irreducibility_certificate(&ca7, &w);
    c.check(
        matches!((&cert, &wx), (Ok(Some(cert)), Ok(x)) if cert.predicted == *x && *x == rat::ratio(3, 7)),
        || format!("cA/7 certificate {cert:?} vs {wx:?}"),
    );
    for _ in 0..10 {
        let (n, chars) = random_well_formed_action(rng);
        let germ = HyperquotientGerm::quotient(n, &chars).expect("valid action");
        let q = toric::quotient_germ_to_toric(n, &chars).expect("valid action");
        let pair = ToricPair::without_boundary(q.germ.clone());
        let psi = toric::psi_from_pair(&pair).expect("simplicial");
        for w in germs::enumerate_admissible_weights(&germ, 12) {
            let ld = germs::log_discrepancy(&germ, &[], &w).expect("valid weight");
            let ok = q
                .to_toric(w.numerators())
                .is_some_and(|p| psi.eval(&p) == ld);
            c.check(ok, || format!("1/{n}{chars:?} weight {w}: ψ ≠ {ld}"));
        }
    }
    c.report
}

/// A cyclic action without pseudo-reflections, `d ∈ {2, 3}`.
fn random_well_formed_action(rng: &mut ChaCha8Rng) -> (i64, Vec<i64>) {
    loop {
        let n = rng.gen_range(1..=9);
        let d = rng.gen_range(2..=3);
        let chars: Vec<i64> = (0..d).map(|_| rng.gen_range(0..n)).collect();
        if toric::quotient_germ_to_toric(n, &chars).is_ok_and(|q| q.is_well_formed()) {
            return (n, chars);
        }
    }
}

/// A random simplicial cone in dimension `d` with small entries.
fn random_cone(rng: &mut ChaCha8Rng, d: usize) -> ToricGerm {
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(-2..=3)).collect())
            .collect();
        if let Ok(g) = ToricGerm::from_rows(&rows) {
            return g;
        }
    }
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=4);
            rat::ratio(rng.gen_range(0..=q), q)
        })
        .collect()
}

fn toric_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut c = Checker::new("toric");
    for d in 2..=3 {
        for n in 1..=6 {
            let q = toric::quotient_germ_to_toric(n, &vec![1; d]).expect("valid action");
            let r = toric::toric_mld(&ToricPair::without_boundary(q.germ));
            let want = MldValue::Finite(rat::ratio(d as i64, n));
            c.check(r.as_ref().is_ok_and(|r| r.value == want), || {
                format!("1/{n}(1,…,1) in dim {d}: {r:?}")
            });
        }
    }
    for _ in 0..20 {
        let d = rng.gen_range(2..=3);
        let germ = random_cone(rng, d);
        let pair = ToricPair::new(germ.clone(), random_coeffs(rng, d)).expect("d coefficients");
        let Ok(r) = toric::toric_mld(&pair) else {
            c.check(false, || format!("toric_mld failed on {germ:?}"));
            continue;
        };
        let psi0 = germ.psi0().expect("simplicial");
        let bound_ok = r
            .witness
            .as_ref()
            .is_some_and(|w| psi0.eval(w) <= rat::int(d as i64) && germ.in_relative_interior(w));
        c.check(bound_ok, || format!("witness outside S for {germ:?}"));
        let wider = toric::mld_over_region(&pair, d as i64 + 2);
        c.check(wider.as_ref().ok() == Some(&r.value), || {
            format!("wider region disagrees for {pair:?}")
        });
        let dcoeffs: Vec<Rat> = (0..d).map(|_| rat::int(rng.gen_range(0..=2))).collect();
        if dcoeffs.iter().all(Zero::is_zero) {
            continue;
        }
        let a = rat::ratio(rng.gen_range(0..=2), 2);
        match toric::toric_alct(&pair, &dcoeffs, &a) {
            Ok(t) => {
                let oracle = bisect_alct(&pair, &dcoeffs, &a);
                c.check(oracle == t.value, || {
                    format!("alct {} vs bisection {} on {pair:?}", t.value, oracle)
                });
            }
            Err(toric::ToricError::BelowThresholdAtZero { .. }) => {}
            Err(e) => c.check(false, || format!("alct error {e}")),
        }
    }
    c.report
}

/// `sup{t : mld(B + tD) ≥ a}` by bisection and rational reconstruction.
fn bisect_alct(pair: &ToricPair, dcoeffs: &[Rat], a: &Rat) -> ExtRat {
    let holds = |t: &Rat| {
        let coeffs: Vec<Rat> = pair
            .coeffs()
            .iter()
            .zip(dcoeffs)
            .map(|(b, d)| b + t * d)
            .collect();
        let p = ToricPair::new(pair.germ().clone(), coeffs).expect("same length");
        match toric::toric_mld(&p).expect("simplicial").value {
            MldValue::NegInfinity => false,
            MldValue::Finite(m) => &m >= a,
        }
    };
    let mut lo = Rat::zero();
    let mut hi = Rat::one();
    while holds(&hi) {
        lo = hi.clone();
        hi = &hi * rat::int(2);
        if hi > rat::int(1 << 20) {
            return ExtRat::PosInf;
        }
    }
    for _ in 0..60 {
        let mid = (&lo + &hi) / rat::int(2);
        if holds(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ExtRat::Finite(rat::simplest_between(&lo, &hi))
}

fn reid_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut c = Checker::new("reid");
    for _ in 0..200 {
        let r = rng.gen_range(1..=60);
        let b = loop {
            let b = rng.gen_range(1..=r);
            if num_integer::gcd(b, r) == 1 {
                break b;
            }
        };
        let i = rng.gen_range(-3 * r..=3 * r);
        let v = reid::c_point(r, b, i).expect("coprime");
        c.check(reid::c_point(r, b, i + r).as_ref() == Ok(&v), || {
            format!("c({r},{b},{i}) not {r}-periodic")
        });
        c.check(reid::c_point(r, r - b, i).as_ref() == Ok(&v), || {
            format!("c({r},{b},{i}) changes under b ↦ r − b")
        });
        c.check(
            reid::a_q(r, b, reid::residue(i, r)).as_ref() == Ok(&v),
            || format!("A({r},{b},{i}) ≠ A at the residue"),
        );
    }
    for rp in 2..=3 {
        let Ok(fam) = reid::remark_family(rp) else {
            c.check(false, || format!("family {rp} rejected"));
            continue;
        };
        c.check(fam.passed(), || format!("family {rp} conditions fail"));
        let [q1, q2] = fam.config.points;
        let span = 2 * num_integer::lcm(q1.r, q2.r);
        let rep = reid::verify_delta_identity(&fam.config, rp, span);
        c.check(rep.as_ref().is_ok_and(|r| r.passed()), || {
            format!("delta identity fails for family {rp}")
        });
        c.check(
            reid::index_from_basket(q1.r, q1.d, q2.r, q2.d) == Ok(rp),
            || format!("index of family {rp}"),
        );
        c.check(
            reid::check_divisibility_conclusion(&fam.config, rp) == Ok(true),
            || format!("divisibility for family {rp}"),
        );
    }
    c.report
}

fn thresholds_suite() -> SuiteReport {
    let mut c = Checker::new("thresholds");
    let eps = rat::ratio(1, 20);
    for k in 1..=2 {
        let small = thresholds::enumerate_smooth_ct_set(k, 50).expect("valid");
        let large = thresholds::enumerate_smooth_ct_set(k, 100).expect("valid");
        let floor = thresholds::accumulation_point(k);
        c.check(large.iter().all(|v| *v > floor), || {
            format!("value at or below 1/{} for k = {k}", k + 1)
        });
        c.check(&large[0] - &floor <= rat::ratio(2, 100), || {
            format!("minimum {} too far from 1/{}", large[0], k + 1)
        });
        c.check(
            thresholds::tail_count(&small, k, &eps) == thresholds::tail_count(&large, k, &eps),
            || format!("tail above 1/{} + 1/20 moved between caps", k + 1),
        );
    }
    for m in 1..=20 {
        let b = thresholds::comparison_bounds(&Rat::one(), m, &Rat::one());
        c.check(b == (m.into(), m.into()), || {
            format!("identity bounds at m = {m}")
        });
    }
    c.report
}
