#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use wci_core::filters::{deltas_ok, is_linear_cone, last_weight_ok};
use wci_core::{run_all, Candidate, FilterId, Profile};

pub fn cand(w: &[i64], d: &[i64]) -> Candidate {
    Candidate::new(w.to_vec(), d.to_vec()).unwrap()
}

/// Entries biased towards small values and shared factors, so that gcd
/// classes are common and both verdicts of the gcd-cover filter show up.
pub fn entry() -> impl Strategy<Value = i64> {
    prop_oneof![
        4 => 1i64..=6,
        2 => prop::sample::select(vec![2i64, 3, 4, 6, 8, 9, 10, 12, 15, 18, 20, 24, 30]),
        1 => 1i64..=30,
    ]
}

/// Arbitrary valid candidates with `N <= max_n` and entries `<= 30`.
pub fn candidate(max_n: usize) -> impl Strategy<Value = Candidate> {
    (1usize..=max_n + 1)
        .prop_flat_map(|len| (prop::collection::vec(entry(), len), 0..len))
        .prop_flat_map(|(weights, k)| {
            let pool = weights.clone();
            let degree = prop_oneof![
                2 => entry(),
                // products of weights make divisibility likely
                2 => (prop::sample::select(pool.clone()), prop::sample::select(pool), 1i64..=2)
                    .prop_map(|(a, b, c)| (a * b * c).min(30)),
            ];
            (Just(weights), prop::collection::vec(degree, k))
        })
        .prop_map(|(w, d)| Candidate::new(w, d).unwrap())
}

pub fn nondecreasing(lo: i64, hi: i64, len: usize, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if cur.len() == len {
        f(cur);
        return;
    }
    for x in lo..=hi {
        cur.push(x);
        nondecreasing(x, hi, len, cur, f);
        cur.pop();
    }
}

/// Non-decreasing `len`-tuples of positive integers summing to `sum`.
pub fn partitions(sum: i64, len: usize, min: i64, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if len == 0 {
        if sum == 0 {
            f(cur);
        }
        return;
    }
    let mut x = min;
    while x * len as i64 <= sum {
        cur.push(x);
        partitions(sum - x, len - 1, x, cur, f);
        cur.pop();
        x += 1;
    }
}

/// Full-grid enumeration: every normalized tuple with `N = n + k`, weights in
/// `[1, cap]` and any positive degrees, grouped by index. No pruning; the
/// cheap checks below only skip `run_all` when it would fail anyway.
pub fn naive_grid(
    n: usize,
    k: usize,
    cap: i64,
    max_index: i64,
    profile: &Profile,
) -> BTreeMap<i64, Vec<Candidate>> {
    let has = |id| profile.contains(id);
    let mut out: BTreeMap<i64, Vec<Candidate>> = BTreeMap::new();
    let mut weights = Vec::new();
    nondecreasing(1, cap, n + k + 1, &mut weights, &mut |w| {
        let total: i64 = w.iter().sum();
        for index in 0..=max_index {
            let degree_sum = total - index;
            if degree_sum < k as i64 {
                continue;
            }
            let mut degrees = Vec::new();
            partitions(degree_sum, k, 1, &mut degrees, &mut |d| {
                let c = Candidate::new(w.to_vec(), d.to_vec()).unwrap();
                if has(FilterId::Deltas) && !deltas_ok(&c).unwrap().passed {
                    return;
                }
                if has(FilterId::LinearCone) && !is_linear_cone(&c).passed {
                    return;
                }
                if has(FilterId::LastWeight) && k > 0 && !last_weight_ok(&c).unwrap().passed {
                    return;
                }
                if run_all(&c, profile).unwrap().survives() {
                    out.entry(index).or_default().push(c);
                }
            });
        }
    });
    for v in out.values_mut() {
        v.sort();
    }
    out
}
