mod common;

use std::collections::BTreeSet;

use common::q;
use mldkit::par::Exec;
use mldkit::rat::Rat;
use mldkit::thresholds::{
    accumulation_point, enumerate_cA_ct_set, enumerate_ct_set_with, enumerate_smooth_ct_set,
    monotone_ratio_subsequence, tail_count, verify_monotone, CtKind,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle: the defining triples, collected into an ordered set.
fn ct_oracle(k: i64, cap: i64) -> Vec<Rat> {
    let mut set = BTreeSet::new();
    for r1 in 1..=k + 1 {
        for r2 in r1..=cap {
            for m in (k + 1) * r2..(k + 1) * (r1 + r2) {
                set.insert(q(r1 + r2, m));
            }
        }
    }
    set.into_iter().collect()
}

#[test]
fn enumeration_matches_oracle() {
    for k in 1..=3 {
        for cap in [1, 2, 7, 30] {
            let want = ct_oracle(k, cap);
            assert_eq!(enumerate_smooth_ct_set(k, cap).unwrap(), want);
            assert_eq!(enumerate_cA_ct_set(k, cap).unwrap(), want);
            let seq: Vec<Rat> = enumerate_ct_set_with(CtKind::Smooth, k, cap, Exec::Sequential)
                .unwrap()
                .into_iter()
                .map(|e| e.value)
                .collect();
            assert_eq!(seq, want);
        }
    }
}

#[test]
fn entries_carry_their_least_triple() {
    for e in enumerate_ct_set_with(CtKind::Smooth, 2, 12, Exec::Parallel).unwrap() {
        assert_eq!(e.value, q(e.r1 + e.r2, e.dm));
        // No lexicographically smaller triple gives the same value.
        for r1 in 1..=3 {
            for r2 in r1..=12 {
                for m in 3 * r2..3 * (r1 + r2) {
                    if q(r1 + r2, m) == e.value {
                        assert!((e.r1, e.r2, e.dm) <= (r1, r2, m));
                    }
                }
            }
        }
    }
}

#[test]
fn values_accumulate_only_from_above() {
    for k in 1..=2 {
        let tau = accumulation_point(k);
        let eps = q(1, 20);
        let small = enumerate_smooth_ct_set(k, 50).unwrap();
        let large = enumerate_smooth_ct_set(k, 100).unwrap();
        assert!(large.iter().all(|v| *v > tau));
        assert!(&large[0] - &tau <= q(2, 100));
        assert!(&small[0] - &tau >= &large[0] - &tau);
        assert_eq!(tail_count(&small, k, &eps), tail_count(&large, k, &eps));
    }
}

/// Oracle: exhaustive search over position subsets, longest first, then
/// least pivot, then lexicographically least positions.
fn monotone_oracle(seqs: &[Vec<Rat>]) -> (usize, Vec<usize>) {
    let len = seqs[0].len();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for pivot in 0..seqs.len() {
        let mut subsets: Vec<Vec<usize>> = (1u32..1 << len)
            .map(|mask| (0..len).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        subsets.sort_by(|a: &Vec<usize>, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let ok = |s: &Vec<usize>| {
            s.windows(2).all(|w| {
                seqs.iter()
                    .all(|x| &x[w[1]] / &seqs[pivot][w[1]] <= &x[w[0]] / &seqs[pivot][w[0]])
            })
        };
        let found = subsets.into_iter().find(ok).unwrap();
        if best.as_ref().is_none_or(|b| found.len() > b.1.len()) {
            best = Some((pivot, found));
        }
    }
    best.unwrap()
}

fn sequences() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    (1usize..=3, 1usize..=8).prop_flat_map(|(m, len)| {
        prop::collection::vec(
            prop::collection::vec((1i64..=9, 1i64..=4).prop_map(|(a, b)| q(a, b)), len),
            m,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monotone_subsequence_matches_exhaustive_oracle(seqs in sequences()) {
        let got = monotone_ratio_subsequence(&seqs).unwrap();
        prop_assert!(verify_monotone(&seqs, &got));
        let (pivot, indices) = monotone_oracle(&seqs);
        prop_assert_eq!(got.pivot, pivot);
        prop_assert_eq!(got.indices, indices);
    }
}

#[test]
fn long_sequences_give_a_long_monotone_chain() {
    // Three positive sequences of length 256: by the pigeonhole argument on
    // pairs of ratios a long non-increasing chain always exists.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let seqs: Vec<Vec<Rat>> = (0..3)
        .map(|_| {
            (0..256)
                .map(|_| q(rng.gen_range(1..=50), rng.gen_range(1..=50)))
                .collect()
        })
        .collect();
    let got = monotone_ratio_subsequence(&seqs).unwrap();
    assert!(verify_monotone(&seqs, &got));
    assert!(
        got.indices.len() >= 4,
        "chain of length {}",
        got.indices.len()
    );
}
