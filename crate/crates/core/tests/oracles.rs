mod common;

use common::{cand, candidate, naive_grid};
use proptest::prelude::*;
use wci_core::filters::{
    ambient_well_formed, gcd_cover_bruteforce, gcd_cover_ok, is_linear_cone, run_all,
};
use wci_core::{enumerate, gcd_all, Candidate, EnumerationQuery, FilterId, Profile};

fn subsets(len: usize) -> impl Iterator<Item = Vec<usize>> {
    (1usize..(1 << len)).map(move |m| (0..len).filter(|i| m >> i & 1 == 1).collect())
}

#[test]
fn gcd_classes_cover_every_subset() {
    for weights in [
        vec![6, 10, 15],
        vec![1, 2, 4],
        vec![2, 3, 4, 6, 12],
        vec![4, 6, 9, 10, 15, 25, 30, 1],
        vec![7, 14, 21, 28, 35],
    ] {
        let classes = wci_core::gcd_classes(&weights);
        for c in &classes {
            assert!(c.class_gcd >= c.delta && c.class_gcd % c.delta == 0);
            assert!(c.members.iter().all(|&i| weights[i] % c.delta == 0));
        }
        for s in subsets(weights.len()) {
            let g = gcd_all(s.iter().map(|&i| weights[i]));
            if g <= 1 {
                continue;
            }
            let class = classes
                .iter()
                .find(|c| {
                    c.members
                        == (0..weights.len())
                            .filter(|&i| weights[i] % g == 0)
                            .collect::<Vec<_>>()
                })
                .unwrap_or_else(|| panic!("no class for gcd {g} in {weights:?}"));
            assert!(s.iter().all(|i| class.members.contains(i)));
        }
    }
}

#[test]
fn gcd_cover_bruteforce_agrees_on_examples() {
    for (w, d) in [
        (vec![6, 10, 15], vec![30]),
        (vec![1, 1, 1, 1, 2, 3], vec![6]),
        (vec![1, 1, 2, 2], vec![2, 3]),
        (vec![1, 1, 1, 2, 2], vec![4, 4]),
        (vec![1, 2, 2, 3, 3], vec![6, 6]),
    ] {
        let c = cand(&w, &d);
        assert_eq!(gcd_cover_ok(&c).passed, gcd_cover_bruteforce(&c).unwrap().passed, "{c}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn gcd_cover_matches_bruteforce(c in candidate(8)) {
        let fast = gcd_cover_ok(&c);
        let slow = gcd_cover_bruteforce(&c).unwrap();
        prop_assert_eq!(fast.passed, slow.passed);
        for v in [&fast, &slow] {
            if let Some(w) = &v.witness {
                prop_assert!(w.certifies(&c));
            }
        }
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_multisets(c in candidate(8)) {
        let once = c.normalize();
        prop_assert_eq!(once.normalize(), once.clone());
        prop_assert!(once.is_normalized());
        let mut w = c.weights().to_vec();
        let mut d = c.degrees().to_vec();
        w.sort();
        d.sort();
        prop_assert_eq!(once.weights(), &w[..]);
        prop_assert_eq!(once.degrees(), &d[..]);
        prop_assert_eq!(once.fano_index().unwrap(), c.fano_index().unwrap());
    }

    #[test]
    fn witnesses_certify_failures(c in candidate(8)) {
        let r = run_all(&c.normalize(), &Profile::smooth_fano()).unwrap();
        for v in r.failures() {
            let w = v.witness.as_ref().unwrap();
            prop_assert!(w.certifies(&r.candidate), "{:?} on {}", w, r.candidate);
        }
    }

    #[test]
    fn order_free_filters_ignore_permutations(c in candidate(8), seed in any::<u64>()) {
        let mut w = c.weights().to_vec();
        let mut d = c.degrees().to_vec();
        // deterministic shuffle from the seed
        let mut s = seed;
        for xs in [&mut w, &mut d] {
            for i in (1..xs.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                xs.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        let p = Candidate::new(w, d).unwrap();
        prop_assert_eq!(ambient_well_formed(&c).passed, ambient_well_formed(&p).passed);
        prop_assert_eq!(is_linear_cone(&c).passed, is_linear_cone(&p).passed);
        prop_assert_eq!(gcd_cover_ok(&c).passed, gcd_cover_ok(&p).passed);
        prop_assert_eq!(c.fano_index().unwrap(), p.fano_index().unwrap());
    }
}

fn compare_with_grid(profile: &Profile, max_cap: i64, max_codim_over_dim: usize) -> usize {
    let mut compared = 0;
    for n in 1..=3usize {
        for k in 0..=n + max_codim_over_dim {
            let max_index = n as i64 + 2;
            let grid = naive_grid(n, k, max_cap, max_index, profile);
            for index in 0..=max_index {
                for cap in 1..=max_cap {
                    let expected: Vec<Candidate> = grid
                        .get(&index)
                        .map(|v| {
                            v.iter()
                                .filter(|c| *c.weights().last().unwrap() <= cap)
                                .cloned()
                                .collect()
                        })
                        .unwrap_or_default();
                    let q = EnumerationQuery::new(n, index, k)
                        .with_max_weight(cap)
                        .with_profile(profile.clone());
                    let got = enumerate(&q).unwrap();
                    assert_eq!(got.survivors, expected, "n={n} i={index} k={k} cap={cap}");
                    compared += expected.len();
                }
            }
        }
    }
    compared
}

#[test]
fn pruned_search_matches_full_grid() {
    let compared = compare_with_grid(&Profile::smooth_fano(), 8, 1);
    // the comparison is not vacuous
    assert!(compared > 100, "only {compared} survivors compared");
}

/// Only the filters the generator builds in: no analytic closure, no weight
/// prechecks.
#[test]
fn structural_generator_matches_full_grid() {
    let profile = Profile::new([FilterId::Normalized, FilterId::Deltas, FilterId::UnitPrefix]);
    let compared = compare_with_grid(&profile, 5, 0);
    assert!(compared > 1000, "only {compared} survivors compared");
}
