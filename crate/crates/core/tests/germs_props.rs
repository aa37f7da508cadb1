mod common;

use common::{q, z};
use mldkit::germs::{
    enumerate_admissible_weights, germ_weight_discrepancy, log_discrepancy, AdmissibleWeight,
    BoundaryDivisor, CyclicAction, GermTag, HyperquotientGerm,
};
use mldkit::lattice::LatticePoint;
use mldkit::rat::Rat;
use mldkit::toric::{psi_from_pair, quotient_germ_to_toric, ToricPair};
use mldkit::weighted::{parse_poly, Poly};
use num_integer::Integer;
use proptest::prelude::*;

/// Oracle: no proper subgroup fixes a coordinate hyperplane, i.e. every
/// `d − 1` of the characters generate `ℤ/n`.
fn well_formed(n: i64, chars: &[i64]) -> bool {
    (0..chars.len()).all(|i| {
        chars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(n, |g, (_, &a)| g.gcd(&a))
            == 1
    })
}

/// Oracle: all numerator vectors with `Σv ≤ budget` congruent to a
/// multiple of the characters.
fn admissible_oracle(n: i64, chars: &[i64], budget: i64) -> Vec<Vec<i64>> {
    let d = chars.len();
    let mut out = Vec::new();
    let mut v = vec![1i64; d];
    loop {
        if v.iter().sum::<i64>() <= budget
            && (0..n).any(|b| {
                v.iter()
                    .zip(chars)
                    .all(|(&w, &a)| (w - b * a).mod_floor(&n) == 0)
            })
        {
            out.push(v.clone());
        }
        let mut k = d;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            v[k] += 1;
            if v[k] <= budget {
                break;
            }
            v[k] = 1;
        }
    }
}

fn coordinate(d: usize, i: usize) -> Poly {
    let mut e = vec![0; d];
    e[i] = 1;
    Poly::monomial(z(1), LatticePoint(e)).unwrap()
}

fn action() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (2i64..=9, 2usize..=4)
        .prop_flat_map(|(n, d)| (Just(n), prop::collection::vec(0..n, d)))
        .prop_filter("well-formed", |(n, c)| well_formed(*n, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn enumeration_matches_oracle((n, chars) in action(), budget in 2i64..=14) {
        let germ = HyperquotientGerm::quotient(n, &chars).unwrap();
        let got: Vec<Vec<i64>> = enumerate_admissible_weights(&germ, budget)
            .iter()
            .map(|w| w.numerators().to_vec())
            .collect();
        prop_assert_eq!(got, admissible_oracle(n, &chars, budget));
    }

    #[test]
    fn quotient_discrepancy_agrees_with_toric_psi(
        (n, chars) in action(),
        bnum in prop::collection::vec(0i64..=4, 4),
        budget in 4i64..=20,
    ) {
        let d = chars.len();
        let germ = HyperquotientGerm::quotient(n, &chars).unwrap();
        let qt = quotient_germ_to_toric(n, &chars).unwrap();
        prop_assert_eq!(qt.is_well_formed(), true);
        let coeffs: Vec<Rat> = bnum[..d].iter().map(|&b| q(b, 4)).collect();
        let boundary: Vec<BoundaryDivisor> = (0..d)
            .map(|i| BoundaryDivisor::new(coeffs[i].clone(), coordinate(d, i)))
            .collect();
        let pair = ToricPair::new(qt.germ.clone(), coeffs.clone()).unwrap();
        let psi = psi_from_pair(&pair).unwrap();
        for w in enumerate_admissible_weights(&germ, budget) {
            let v = w.numerators();
            let point = qt.to_toric(v).expect("admissible weights are lattice points");
            prop_assert_eq!(qt.numerators(&point.0), v.to_vec());
            let oracle: Rat = v.iter().zip(&coeffs).map(|(&x, b)| (z(1) - b) * q(x, n)).sum();
            let ld = log_discrepancy(&germ, &boundary, &w).unwrap();
            prop_assert_eq!(&ld, &oracle);
            prop_assert_eq!(psi.eval(&point), oracle);
        }
    }

    #[test]
    fn hypersurface_discrepancy_matches_formula(w in prop::collection::vec(1i64..=12, 3), k in 2u32..=9) {
        let germ = HyperquotientGerm::new(
            CyclicAction::trivial(3),
            vec![parse_poly(3, &format!("x1*x2 + x3^{k}")).unwrap()],
            None,
        )
        .unwrap();
        let aw = AdmissibleWeight::new(&germ, &w).unwrap();
        let lowest = (w[0] + w[1]).min(w[2] * k as i64);
        let expected = z(w.iter().sum::<i64>() - 1 - lowest);
        prop_assert_eq!(germ_weight_discrepancy(&germ, &aw).unwrap(), expected);
    }
}

#[test]
fn terminal_quotient_examples() {
    let g = HyperquotientGerm::quotient(2, &[1, 1, 1]).unwrap();
    let w = AdmissibleWeight::new(&g, &[1, 1, 1]).unwrap();
    assert_eq!(germ_weight_discrepancy(&g, &w).unwrap(), q(1, 2));
    assert!(AdmissibleWeight::new(&g, &[1, 2, 1]).is_err());

    let eq = parse_poly(4, "x1*x2 + x3^7").unwrap();
    let ca7 = HyperquotientGerm::new(
        CyclicAction::new(7, &[1, 6, 2, 0]).unwrap(),
        vec![eq],
        Some(GermTag::CaOverN),
    )
    .unwrap();
    let w = AdmissibleWeight::new(&ca7, &[5, 16, 3, 7]).unwrap();
    assert_eq!(germ_weight_discrepancy(&ca7, &w).unwrap(), q(3, 7));
}
