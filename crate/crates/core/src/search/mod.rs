//! Exhaustive worst-case search over small groups.
//!
//! For given `(n, k)` the search enumerates every admissible choice of `n`
//! two-point variables, computes the exact law of their product, and takes
//! the largest mass any `k`-set can receive. Abelian groups are searched over
//! multisets; nonabelian groups over ordered sequences, since the product
//! law there depends on the order of the factors.

mod conjecture;
mod enumerate;

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

pub use conjecture::{
    conjecture_probe, ConjectureCase, ConjectureVerdict, ConjectureVerdictJson, Counterexample,
    CounterexampleJson,
};

use crate::bounds::{theorem1_bound, theorem2_bound};
use crate::dist::{pair_walk, top_k_mass, TwoPointVar};
use crate::error::{Error, Result};
use crate::group::{elements_with_min_order, FiniteGroup};
use crate::rational::{dyadic, Rational, RationalJson};

pub const DEFAULT_MAX_LAWS: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Uniform on `{g^-1, g}` for `g` of order at least the threshold.
    SymmetricPairs,
    /// Uniform on any two distinct elements, identity included.
    AnyPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    Multisets,
    Sequences,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub max_laws: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_laws: DEFAULT_MAX_LAWS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub group: String,
    pub n: u64,
    pub k: u64,
    pub min_order: u64,
    pub mode: Mode,
    pub enumeration: Enumeration,
    pub max_value: Rational,
    /// One maximizing choice of variables, in product order.
    pub argmax: Vec<TwoPointVar>,
    /// A `k`-set receiving `max_value` under the argmax law.
    pub witness_set: Vec<usize>,
    pub laws_evaluated: u128,
    pub bound: Option<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub theorem: u8,
    pub bound_value: Rational,
    /// `bound_value - max_value`; negative means the bound failed.
    pub slack: Rational,
    pub tight: bool,
}

impl SearchResult {
    fn attach_bound(&mut self, theorem: u8, bound_value: Rational) {
        let slack = &bound_value - &self.max_value;
        self.bound = Some(BoundCheck {
            theorem,
            tight: slack.is_zero(),
            bound_value,
            slack,
        });
    }

    /// False only when an attached bound is exceeded.
    pub fn holds(&self) -> bool {
        self.bound
            .as_ref()
            .is_none_or(|b| b.slack >= Rational::zero())
    }

    pub fn is_tight(&self) -> bool {
        self.bound.as_ref().is_some_and(|b| b.tight)
    }
}

/// The variables a search ranges over. Symmetric mode lists each inverse
/// pair `{g, g^-1}` once; an eligible involution contributes a point mass.
pub fn eligible_vars(g: &FiniteGroup, min_order: u64, mode: Mode) -> Vec<TwoPointVar> {
    match mode {
        Mode::SymmetricPairs => elements_with_min_order(g, min_order)
            .into_iter()
            .filter(|&x| x <= g.inverse(x))
            .map(|x| TwoPointVar {
                a: x,
                b: g.inverse(x),
            })
            .collect(),
        Mode::AnyPairs => (0..g.size())
            .flat_map(|a| (a + 1..g.size()).map(move |b| TwoPointVar { a, b }))
            .collect(),
    }
}

pub fn exhaustive_rho(
    g: &Arc<FiniteGroup>,
    n: u64,
    k: u64,
    min_order: u64,
    mode: Mode,
    limits: &SearchLimits,
) -> Result<SearchResult> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(
            "search needs n >= 1 and k >= 1".into(),
        ));
    }
    if n > enumerate::MAX_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "search depth {n} exceeds {}",
            enumerate::MAX_DEPTH
        )));
    }
    if mode == Mode::SymmetricPairs && min_order < 2 {
        return Err(Error::InvalidParameter(
            "minimum order must be at least 2".into(),
        ));
    }
    let vars = eligible_vars(g, min_order, mode);
    if vars.is_empty() {
        return Err(Error::NoEligible(format!(
            "{} has no {} with order >= {min_order}",
            g.label(),
            match mode {
                Mode::SymmetricPairs => "non-identity elements",
                Mode::AnyPairs => "pair of distinct elements",
            }
        )));
    }
    let enumeration = if g.is_abelian() {
        Enumeration::Multisets
    } else {
        Enumeration::Sequences
    };
    let ordered = enumeration == Enumeration::Sequences;
    let count = enumerate::search_size(vars.len(), n, ordered);
    if count > limits.max_laws {
        return Err(Error::SearchTooLarge {
            count,
            cap: limits.max_laws,
        });
    }
    let best = enumerate::search(g, &vars, n as usize, k as usize, ordered);
    let max_value = dyadic(&BigUint::from(best.count), n as u32);
    let argmax: Vec<TwoPointVar> = best.picks.iter().map(|&i| vars[i]).collect();

    // Recompute the argmax law from scratch through the rational path.
    let law = pair_walk(g, &argmax)?;
    let (check, witness_set) = top_k_mass(&law, k as usize);
    if check != max_value {
        return Err(Error::Inconsistent(format!(
            "argmax law gives {check}, search reported {max_value}"
        )));
    }
    Ok(SearchResult {
        group: g.label().to_string(),
        n,
        k,
        min_order,
        mode,
        enumeration,
        max_value,
        argmax,
        witness_set,
        laws_evaluated: best.laws,
        bound: None,
    })
}

/// Worst case over symmetric pairs of order at least `m`, checked against
/// the signed-walk bound.
pub fn verify_theorem1(
    g: &Arc<FiniteGroup>,
    n: u64,
    k: u64,
    m: u64,
    limits: &SearchLimits,
) -> Result<SearchResult> {
    let bound = theorem1_bound(n, k, m)?;
    let mut r = exhaustive_rho(g, n, k, m, Mode::SymmetricPairs, limits)?;
    r.attach_bound(1, bound);
    Ok(r)
}

/// Worst case over all two-point laws, checked against the binary-walk
/// bound. The group must have only odd orders, each at least `m`.
pub fn verify_theorem2(
    g: &Arc<FiniteGroup>,
    n: u64,
    k: u64,
    m: u64,
    limits: &SearchLimits,
) -> Result<SearchResult> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "m must be odd and >= 3, got {m}"
        )));
    }
    let id = g.identity();
    if let Some(x) = (0..g.size()).find(|&x| g.order(x).is_multiple_of(2)) {
        return Err(Error::Hypothesis(format!(
            "{} has order {}; an even order forces an element of order 2, and uniform steps on {{1, h}} keep mass 1/2",
            g.name(x),
            g.order(x)
        )));
    }
    if let Some(x) = (0..g.size()).find(|&x| x != id && g.order(x) < m) {
        return Err(Error::Hypothesis(format!(
            "{} has order {} < m = {m}",
            g.name(x),
            g.order(x)
        )));
    }
    let bound = theorem2_bound(n, k, m)?;
    let mut r = exhaustive_rho(g, n, k, m, Mode::AnyPairs, limits)?;
    r.attach_bound(2, bound);
    Ok(r)
}

/// Whether `A = A x^s`. For `x` of order at least `m` and `s |A| < m` with
/// `A` nonempty this is always false.
pub fn lemma1_check(g: &FiniteGroup, set: &[usize], x: usize, s: u64) -> Result<bool> {
    g.check_element(x)?;
    for &a in set {
        g.check_element(a)?;
    }
    let shift = g.pow(x, s);
    let mut left = set.to_vec();
    left.sort_unstable();
    left.dedup();
    let mut right: Vec<usize> = left.iter().map(|&a| g.mul(a, shift)).collect();
    right.sort_unstable();
    Ok(left == right)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairJson {
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResultJson {
    pub group: String,
    pub n: u64,
    pub k: u64,
    pub min_order: u64,
    pub mode: Mode,
    pub enumeration: Enumeration,
    pub max_value: RationalJson,
    pub argmax_multiset: Vec<PairJson>,
    pub witness_set: Vec<usize>,
    pub laws_evaluated: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_value: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<RationalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight: Option<bool>,
}

pub fn pairs_json(v: &[TwoPointVar]) -> Vec<PairJson> {
    v.iter().map(|p| PairJson { a: p.a, b: p.b }).collect()
}

impl From<&SearchResult> for SearchResultJson {
    fn from(r: &SearchResult) -> Self {
        SearchResultJson {
            group: r.group.clone(),
            n: r.n,
            k: r.k,
            min_order: r.min_order,
            mode: r.mode,
            enumeration: r.enumeration,
            max_value: (&r.max_value).into(),
            argmax_multiset: pairs_json(&r.argmax),
            witness_set: r.witness_set.clone(),
            laws_evaluated: r.laws_evaluated.to_string(),
            theorem: r.bound.as_ref().map(|b| b.theorem),
            bound_value: r.bound.as_ref().map(|b| (&b.bound_value).into()),
            slack: r.bound.as_ref().map(|b| (&b.slack).into()),
            tight: r.bound.as_ref().map(|b| b.tight),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_cyclic, make_cyclic_power, make_dihedral, make_symmetric};
    use crate::rational::ratio;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn z6_symmetric_single_pair() {
        let g = arc(make_cyclic(6).unwrap());
        let r = verify_theorem1(&g, 2, 1, 5, &SearchLimits::default()).unwrap();
        assert_eq!(r.max_value, ratio(1, 2));
        assert_eq!(r.argmax, vec![TwoPointVar::new(1, 5).unwrap(); 2]);
        assert_eq!(r.witness_set, vec![0]);
        assert!(r.is_tight() && r.holds());
        assert_eq!(r.laws_evaluated, 1);
    }

    #[test]
    fn z5_any_pairs() {
        let g = arc(make_cyclic(5).unwrap());
        let r = exhaustive_rho(&g, 2, 1, 5, Mode::AnyPairs, &SearchLimits::default()).unwrap();
        assert_eq!(r.max_value, ratio(1, 2));
        assert_eq!(r.max_value, theorem2_bound(2, 1, 5).unwrap());
        assert_eq!(r.laws_evaluated, 55);
    }

    #[test]
    fn single_step_is_half() {
        for g in [
            make_cyclic(7).unwrap(),
            make_symmetric(3).unwrap(),
            make_dihedral(4).unwrap(),
        ] {
            let g = arc(g);
            let r = exhaustive_rho(&g, 1, 1, 3, Mode::SymmetricPairs, &SearchLimits::default())
                .unwrap();
            assert_eq!(r.max_value, ratio(1, 2));
        }
    }

    /// Every choice of pairs from `choices` (with order) and every coin vector.
    fn brute_force_top1(m: usize, choices: &[(usize, usize)], n: u32) -> Rational {
        let mut best = 0u64;
        let combos = (choices.len() as u64).pow(n);
        for c in 0..combos {
            let picks: Vec<(usize, usize)> = (0..n)
                .map(|i| choices[(c / (choices.len() as u64).pow(i)) as usize % choices.len()])
                .collect();
            let mut counts = vec![0u64; m];
            for coins in 0u32..(1 << n) {
                let s: usize = picks
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| if coins >> i & 1 == 1 { a } else { b })
                    .sum();
                counts[s % m] += 1;
            }
            best = best.max(*counts.iter().max().unwrap());
        }
        ratio(best as i64, 1 << n)
    }

    #[test]
    fn z5_theorem1_against_brute_force() {
        let g = arc(make_cyclic(5).unwrap());
        for n in 1..=5u64 {
            let r = verify_theorem1(&g, n, 1, 5, &SearchLimits::default()).unwrap();
            assert!(r.holds());
            assert_eq!(
                r.max_value,
                brute_force_top1(5, &[(1, 4), (2, 3)], n as u32)
            );
        }
        // n = 4: four copies of {1, 4} put 6/16 on 0, which meets the bound
        let r = verify_theorem1(&g, 4, 1, 5, &SearchLimits::default()).unwrap();
        assert_eq!(r.max_value, ratio(3, 8));
        assert!(r.is_tight());
    }

    #[test]
    fn any_pairs_against_brute_force() {
        let g = arc(make_cyclic(5).unwrap());
        let all: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        for n in 1..=3u64 {
            let r = exhaustive_rho(&g, n, 1, 5, Mode::AnyPairs, &SearchLimits::default()).unwrap();
            assert_eq!(r.max_value, brute_force_top1(5, &all, n as u32));
        }
    }

    #[test]
    fn theorem2_on_z3_squared() {
        let g = arc(make_cyclic_power(3, 2).unwrap());
        let r = verify_theorem2(&g, 4, 1, 3, &SearchLimits::default()).unwrap();
        assert_eq!(r.bound.as_ref().unwrap().bound_value, ratio(3, 8));
        assert!(r.holds());
        assert_eq!(r.laws_evaluated, 82251);
    }

    #[test]
    fn theorem2_trivial_k() {
        let g = arc(make_cyclic(7).unwrap());
        let r = verify_theorem2(&g, 1, 7, 7, &SearchLimits::default()).unwrap();
        assert_eq!(r.bound.unwrap().bound_value, ratio(1, 1));
    }

    #[test]
    fn theorem2_rejects_even_orders() {
        let g = arc(make_cyclic(6).unwrap());
        assert!(matches!(
            verify_theorem2(&g, 2, 1, 3, &SearchLimits::default()),
            Err(Error::Hypothesis(_))
        ));
        let g = arc(make_cyclic(9).unwrap());
        assert!(matches!(
            verify_theorem2(&g, 2, 1, 5, &SearchLimits::default()),
            Err(Error::Hypothesis(_))
        ));
        assert!(verify_theorem2(&g, 2, 1, 4, &SearchLimits::default()).is_err());
    }

    #[test]
    fn caps_and_empty_sets() {
        let g = arc(make_cyclic(4).unwrap());
        assert!(matches!(
            exhaustive_rho(&g, 3, 1, 5, Mode::SymmetricPairs, &SearchLimits::default()),
            Err(Error::NoEligible(_))
        ));
        let g = arc(make_cyclic(13).unwrap());
        let err = exhaustive_rho(
            &g,
            20,
            1,
            2,
            Mode::AnyPairs,
            &SearchLimits { max_laws: 1000 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::SearchTooLarge { count, cap: 1000 } if count > 1000));
    }

    #[test]
    fn nonabelian_uses_sequences() {
        let g = arc(make_symmetric(3).unwrap());
        let r =
            exhaustive_rho(&g, 3, 1, 3, Mode::SymmetricPairs, &SearchLimits::default()).unwrap();
        assert_eq!(r.enumeration, Enumeration::Sequences);
        // S3 has a single inverse pair of 3-cycles, so one sequence per n
        assert_eq!(r.laws_evaluated, 1);
        let d4 = arc(make_dihedral(4).unwrap());
        let r = exhaustive_rho(&d4, 2, 1, 2, Mode::AnyPairs, &SearchLimits::default()).unwrap();
        assert_eq!(r.laws_evaluated, 28 * 28);
    }

    #[test]
    fn periodic_set_examples() {
        let z6 = make_cyclic(6).unwrap();
        assert!(lemma1_check(&z6, &[0, 3], 3, 1).unwrap());
        let z5 = make_cyclic(5).unwrap();
        assert!(!lemma1_check(&z5, &[0, 1], 1, 1).unwrap());
        assert!(lemma1_check(&z5, &[], 1, 1).unwrap());
        assert!(lemma1_check(&z5, &[9], 1, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let g = arc(make_cyclic(6).unwrap());
        let r = verify_theorem1(&g, 2, 1, 5, &SearchLimits::default()).unwrap();
        let v = serde_json::to_value(SearchResultJson::from(&r)).unwrap();
        assert_eq!(v["mode"], "symmetric-pairs");
        assert_eq!(v["slack"]["num"], "0");
        assert_eq!(v["tight"], true);
        assert_eq!(v["argmax_multiset"][0]["b"], 5);
    }
}
