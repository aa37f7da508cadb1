mod common;

use common::{q, z};
use mldkit::rat::Rat;
use mldkit::reid::{
    a_q, b_q, c_point, delta_difference, index_from_basket, remark_family, residue,
    verify_delta_identity, BasketConfig, FictitiousPoint,
};
use num_integer::Integer;
use proptest::prelude::*;

/// Oracle `B(r, i)` from the definition, with Euclid's remainder.
fn b_oracle(r: i64, i: i64) -> Rat {
    let k = i.rem_euclid(r);
    q(k * (r - k), 2 * r)
}

/// Oracle `c(r, b, i)` term by term, honouring reversed bounds.
fn c_oracle(r: i64, b: i64, i: i64) -> Rat {
    let head = q(-i * (r * r - 1), 12 * r);
    let sum: Rat = if i >= 2 {
        (1..i).map(|j| b_oracle(r, j * b)).sum()
    } else {
        -(i..1).map(|j| b_oracle(r, j * b)).sum::<Rat>()
    };
    head + sum
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=200)
        .prop_flat_map(|r| (Just(r), 0..r))
        .prop_filter("coprime", |(r, b)| b.gcd(r) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn c_matches_oracle_and_is_invariant((r, b) in coprime_pair(), t in -3i64..=3, frac in 0.0f64..1.0) {
        let i = t * r + (frac * r as f64) as i64;
        let c = c_point(r, b, i).unwrap();
        prop_assert_eq!(&c, &c_oracle(r, b, i));
        prop_assert_eq!(&c, &c_point(r, b, i + r).unwrap());
        prop_assert_eq!(&c, &c_point(r, r - b, i).unwrap());
        prop_assert_eq!(a_q(r, b, i).unwrap(), a_q(r, b, residue(i, r)).unwrap());
        prop_assert_eq!(b_q(r, i).unwrap(), b_oracle(r, i));
        prop_assert_eq!(b_q(r, i).unwrap(), b_q(r, -i).unwrap());
    }
}

/// Oracle for the periodic right-hand side, term by term.
fn delta_oracle(config: &BasketConfig, i: i64) -> Rat {
    config
        .points
        .iter()
        .map(|p| {
            (i * p.d..(i + 1) * p.d)
                .map(|j| b_oracle(p.r, j * p.b) - b_oracle(p.r, j * p.b - p.v))
                .sum::<Rat>()
        })
        .sum()
}

#[test]
fn delta_difference_matches_oracle_on_small_baskets() {
    let mut checked = 0;
    for r1 in 2..=7i64 {
        for r2 in 2..=7i64 {
            for b1 in (1..r1).filter(|b| b.gcd(&r1) == 1) {
                let b2 = (1..r2).find(|b| b.gcd(&r2) == 1).unwrap();
                for (d1, d2, v) in [(1, 1, 1), (r1, 2, 1), (3, r2, r1.min(r2) / 2)] {
                    let p1 = FictitiousPoint::new(r1, b1, d1, v).unwrap();
                    let p2 = FictitiousPoint::new(r2, b2, d2, v).unwrap();
                    assert_eq!(p1.class() * b1 % r1, v % r1);
                    let config = BasketConfig {
                        n: 1,
                        a: 1,
                        b: 1,
                        points: [p1, p2],
                    };
                    for i in -4..=8 {
                        assert_eq!(delta_difference(&config, i), delta_oracle(&config, i));
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn family_members_are_consistent() {
    for rp in 2..=4 {
        let rep = remark_family(rp).unwrap();
        assert!(rep.passed(), "{:?}", rep.conditions);
        let [p1, p2] = rep.config.points;
        assert_eq!(index_from_basket(p1.r, p1.d, p2.r, p2.d).unwrap(), rp);
        let imax = 2 * p1.r.lcm(&p2.r);
        let report = verify_delta_identity(&rep.config, rp, imax).unwrap();
        assert!(report.passed());
        // Spot-check the fast window sums against the term-by-term oracle.
        for i in [0, 1, 2, rp - 1, rp, rp + 1, imax / 3] {
            assert_eq!(
                delta_difference(&rep.config, i),
                delta_oracle(&rep.config, i)
            );
            let expected = i64::from((i + 1) % rp == 0) - i64::from(i % rp == 0);
            assert_eq!(delta_oracle(&rep.config, i), z(expected));
        }
    }
}
