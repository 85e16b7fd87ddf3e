use std::sync::{Arc, OnceLock};

use anticonc::bounds::{
    m_tilde, signed_walk_counts, symmetric_interval, theorem1_bound, theorem2_bound,
};
use anticonc::catalog::parse_group;
use anticonc::decompose::{decompose_to_pairs, mixture_law};
use anticonc::dist::{
    convolve, mass_of_set, pair_walk, product_walk, top_k_mass, ExactDist, TwoPointVar,
};
use anticonc::group::FiniteGroup;
use anticonc::rational::{ratio, Rational};
use anticonc::search::{eligible_vars, exhaustive_rho, lemma1_check, Mode, SearchLimits};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn groups() -> &'static [Arc<FiniteGroup>] {
    static GROUPS: OnceLock<Vec<Arc<FiniteGroup>>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        [
            "Z5", "Z6", "Z8", "Z3^2", "Z2xZ4", "D4", "D5", "S3", "S4", "GL2_3",
        ]
        .iter()
        .map(|s| Arc::new(parse_group(s).unwrap()))
        .collect()
    })
}

fn nonabelian() -> Vec<Arc<FiniteGroup>> {
    groups()
        .iter()
        .filter(|g| !g.is_abelian())
        .cloned()
        .collect()
}

/// A random law on `g` from raw weights (zero weights dropped).
fn law(g: &Arc<FiniteGroup>, weights: &[u8]) -> ExactDist {
    let mut w: Vec<(usize, u64)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| (i % g.size(), w as u64))
        .filter(|p| p.1 > 0)
        .collect();
    if w.is_empty() {
        w.push((0, 1));
    }
    let total: u64 = w.iter().map(|p| p.1).sum();
    ExactDist::from_masses(
        g.clone(),
        w.into_iter()
            .map(|(x, m)| (x, ratio(m as i64, total as i64))),
    )
    .unwrap()
}

fn total(d: &ExactDist) -> Rational {
    d.masses().map(|(_, m)| m).sum()
}

fn pairs(g: &FiniteGroup, raw: &[(usize, usize)]) -> Vec<TwoPointVar> {
    raw.iter()
        .map(|&(a, b)| (a % g.size(), b % g.size()))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| TwoPointVar::new(a, b).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convolution_keeps_mass_and_associates(
        gi in 0usize..10,
        x in prop::collection::vec(0u8..6, 1..8),
        y in prop::collection::vec(0u8..6, 1..8),
        z in prop::collection::vec(0u8..6, 1..8),
    ) {
        let g = &groups()[gi];
        let (a, b, c) = (law(g, &x), law(g, &y), law(g, &z));
        let ab = convolve(&a, &b).unwrap();
        prop_assert!(total(&ab).is_one());
        let left = convolve(&ab, &c).unwrap();
        let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, product_walk(g, &[a, b, c]).unwrap());
    }

    #[test]
    fn top_k_is_monotone_and_dominates_sets(
        gi in 0usize..10,
        raw in prop::collection::vec((0usize..64, 0usize..64), 1..6),
        set in prop::collection::btree_set(0usize..64, 0..6),
    ) {
        let g = &groups()[gi];
        let vars = pairs(g, &raw);
        let d = pair_walk(g, &vars).unwrap();
        let mut prev = Rational::zero();
        for k in 0..=g.size() {
            let (m, witness) = top_k_mass(&d, k);
            prop_assert!(m >= prev);
            prop_assert_eq!(witness.len(), k);
            prop_assert_eq!(mass_of_set(&d, &witness), m.clone());
            prev = m;
        }
        prop_assert!(prev.is_one());
        let set: Vec<usize> = set.into_iter().map(|x| x % g.size()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        prop_assert!(mass_of_set(&d, &set) <= top_k_mass(&d, set.len()).0);
    }

    #[test]
    fn symmetric_walks_are_inversion_invariant(
        gi in 0usize..10,
        raw in prop::collection::vec(0usize..64, 1..6),
    ) {
        let g = &groups()[gi];
        let vars: Vec<TwoPointVar> = raw
            .iter()
            .map(|&x| x % g.size())
            .filter(|&x| g.inverse(x) != x)
            .map(|x| TwoPointVar::symmetric(g, x).unwrap())
            .collect();
        let d = pair_walk(g, &vars).unwrap();
        let mut reversed = vars.clone();
        reversed.reverse();
        let r = pair_walk(g, &reversed).unwrap();
        // P(x1...xn = y) = P(xn^-1...x1^-1 = y) and each factor is inverse-symmetric
        for y in 0..g.size() {
            prop_assert_eq!(d.mass(y), r.mass(g.inverse(y)));
            if g.is_abelian() {
                prop_assert_eq!(d.mass(y), d.mass(g.inverse(y)));
            }
        }
    }

    #[test]
    fn decomposition_reconstructs(
        gi in 0usize..10,
        weights in prop::collection::vec(1u8..5, 2..12),
    ) {
        let g = &groups()[gi];
        let d = law(g, &weights);
        prop_assume!(d.support_size() >= 2 && d.max_mass() <= ratio(1, 2));
        let p = decompose_to_pairs(&d).unwrap();
        let w: Rational = p.components.iter().map(|(_, w)| w).sum();
        prop_assert!(w.is_one());
        prop_assert_eq!(mixture_law(&p, g).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn small_sets_are_never_periodic(
        gi in 0usize..10,
        x in 0usize..64,
        raw in prop::collection::vec(0usize..64, 8),
        size in 0u64..64,
        s in 0u64..64,
    ) {
        let g = &groups()[gi];
        let x = x % g.size();
        let o = g.order(x);
        prop_assume!(o >= 2);
        let size = 1 + size % (o - 1);
        let s = 1 + s % ((o - 1) / size);
        let set: Vec<usize> = raw
            .into_iter()
            .map(|a| a % g.size())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .take(size as usize)
            .collect();
        prop_assert!(s * (set.len() as u64) < o);
        prop_assert!(!lemma1_check(g, &set, x, s).unwrap());
    }
}

#[test]
fn reversal_is_exercised_on_nonabelian_groups() {
    // the reversal form is the only one that holds there
    let g = &nonabelian()[0];
    let movers: Vec<usize> = (0..g.size()).filter(|&x| g.inverse(x) != x).collect();
    assert!(movers.len() >= 2);
    let vars: Vec<TwoPointVar> = movers
        .iter()
        .take(3)
        .map(|&x| TwoPointVar::symmetric(g, x).unwrap())
        .collect();
    let d = pair_walk(g, &vars).unwrap();
    let mut rev = vars.clone();
    rev.reverse();
    let r = pair_walk(g, &rev).unwrap();
    assert!((0..g.size()).all(|y| d.mass(y) == r.mass(g.inverse(y))));
}

/// Full enumeration of ordered sequences over every eligible element (both
/// g and g^-1, involutions included) as the reference for the reduced search.
fn naive_symmetric_max(g: &Arc<FiniteGroup>, n: usize, k: usize, m: u64) -> Rational {
    let elems: Vec<usize> = (0..g.size()).filter(|&x| g.order(x) >= m).collect();
    let mut best = Rational::zero();
    let mut idx = vec![0usize; n];
    loop {
        // written out by hand rather than through uniform_pair
        let vars: Vec<ExactDist> = idx
            .iter()
            .map(|&i| {
                let (x, y) = (elems[i], g.inverse(elems[i]));
                let masses = if x == y {
                    vec![(x, ratio(1, 1))]
                } else {
                    vec![(x, ratio(1, 2)), (y, ratio(1, 2))]
                };
                ExactDist::from_masses(g.clone(), masses).unwrap()
            })
            .collect();
        let d = product_walk(g, &vars).unwrap();
        best = best.max(top_k_mass(&d, k).0);
        let mut pos = 0;
        loop {
            if pos == n {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn reduced_search_matches_full_enumeration() {
    for spec in ["Z5", "Z6", "Z8", "D4", "S3", "Z2xZ4"] {
        let g = Arc::new(parse_group(spec).unwrap());
        for m in 2..=4 {
            if eligible_vars(&g, m, Mode::SymmetricPairs).is_empty() {
                continue;
            }
            for n in 1..=3 {
                for k in 1..=2 {
                    let fast =
                        exhaustive_rho(&g, n, k, m, Mode::SymmetricPairs, &SearchLimits::default())
                            .unwrap();
                    let slow = naive_symmetric_max(&g, n as usize, k as usize, m);
                    assert_eq!(fast.max_value, slow, "{spec} n={n} k={k} m={m}");
                }
            }
        }
    }
}

#[test]
fn any_pairs_search_dominates_symmetric() {
    for spec in ["Z5", "Z6", "S3"] {
        let g = Arc::new(parse_group(spec).unwrap());
        for n in 1..=3 {
            let sym = exhaustive_rho(&g, n, 1, 3, Mode::SymmetricPairs, &SearchLimits::default())
                .unwrap();
            let any =
                exhaustive_rho(&g, n, 1, 3, Mode::AnyPairs, &SearchLimits::default()).unwrap();
            assert!(any.max_value >= sym.max_value, "{spec} n={n}");
        }
    }
}

#[test]
fn signed_walk_law_matches_group_walk() {
    // the signed walk on Z_M is the walk of {1, -1} factors
    for modulus in [2usize, 4, 6, 10] {
        let g = Arc::new(parse_group(&format!("Z{modulus}")).unwrap());
        let v = TwoPointVar::symmetric(&g, 1).ok();
        for n in 0..=8u64 {
            let counts = signed_walk_counts(n, modulus as u64).unwrap();
            let d = match v {
                Some(v) => pair_walk(&g, &vec![v; n as usize]).unwrap(),
                None => anticonc::dist::point_mass(&g, (n as usize) % 2).unwrap(),
            };
            for (x, c) in counts.iter().enumerate() {
                assert_eq!(
                    d.mass(x),
                    anticonc::rational::dyadic(c, n as u32),
                    "Z{modulus} n={n} x={x}"
                );
            }
        }
    }
}

#[test]
fn binary_bound_is_a_signed_walk_probability() {
    // tau in I iff the +-1 sum lies in 2I - n
    for m in [3u64, 5, 7, 9] {
        let g = Arc::new(parse_group(&format!("Z{m}")).unwrap());
        let v = TwoPointVar::new(1, (m - 1) as usize).unwrap();
        for n in 1..=10u64 {
            let d = pair_walk(&g, &vec![v; n as usize]).unwrap();
            for k in 1..m {
                let interval = anticonc::bounds::interval_ink(n, k, m).unwrap();
                let image: Vec<usize> = interval
                    .elements()
                    .map(|i| ((2 * i + m * n - n) % m) as usize)
                    .collect();
                assert_eq!(
                    mass_of_set(&d, &image),
                    theorem2_bound(n, k, m).unwrap(),
                    "m={m} n={n} k={k}"
                );
            }
        }
    }
}

#[test]
fn recursion_intervals_are_disjoint() {
    for m in 3..=15u64 {
        let modulus = m_tilde(m);
        for k in (1..).take_while(|k| 2 * k < m) {
            let a: Vec<u64> = symmetric_interval(k - 1, modulus).elements().collect();
            let shifted = anticonc::bounds::ResidueInterval::new(modulus, k as i64, 2);
            assert!(shifted.elements().all(|x| !a.contains(&x)), "m={m} k={k}");
        }
    }
}

#[test]
fn involution_walks_stay_at_one_half() {
    for spec in ["Z2", "Z6", "D4", "S3"] {
        let g = Arc::new(parse_group(spec).unwrap());
        let h = (0..g.size()).find(|&x| g.order(x) == 2).unwrap();
        let v = TwoPointVar::new(g.identity(), h).unwrap();
        for n in 1..=6 {
            let d = pair_walk(&g, &vec![v; n]).unwrap();
            assert_eq!(top_k_mass(&d, 1).0, ratio(1, 2), "{spec} n={n}");
        }
    }
}

#[test]
fn theorem1_bound_never_increases_in_n() {
    for m in 2..=12u64 {
        for k in (1..).take_while(|k| 2 * k <= m) {
            let mut prev = theorem1_bound(1, k, m).unwrap();
            for n in 2..=30 {
                let next = theorem1_bound(n, k, m).unwrap();
                assert!(next <= prev, "m={m} k={k} n={n}");
                prev = next;
            }
        }
    }
}
