//! Splitting a law with all masses at most 1/2 into a convex combination of
//! uniform two-point laws.
//!
//! Scale the law to a multiset of `2N` entries whose multiplicities are
//! proportional to the masses, lay the entries out grouped by element, and
//! pair slot `i` with slot `i + N`. No element fills more than `N` slots, so
//! every pair has two distinct members. Slots are handled as runs rather than
//! one by one, since `N` can be a large common denominator.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::{uniform_pair, ExactDist, TwoPointVar};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rational::{half, parse_parts, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMixture {
    pub components: Vec<(TwoPointVar, Rational)>,
}

pub fn decompose_to_pairs(d: &ExactDist) -> Result<PairMixture> {
    if d.support_size() < 2 {
        return Err(Error::InvalidDistribution(
            "a law on a single point is not a mixture of two-point laws".into(),
        ));
    }
    if let Some((x, p)) = d.masses().find(|(_, p)| **p > half()) {
        return Err(Error::MassAboveHalf {
            element: x,
            mass: p.to_string(),
        });
    }
    let lcd = d
        .masses()
        .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
    let half_total = lcd.to_biguint().expect("positive denominator");
    // runs of equal entries, in element order
    let mut runs: Vec<(usize, BigUint, BigUint)> = Vec::new();
    let mut offset = BigUint::zero();
    for (x, p) in d.masses() {
        let count = (p.numer() * (&lcd / p.denom()) * 2u32)
            .to_biguint()
            .expect("positive mass");
        let end = &offset + &count;
        runs.push((x, offset, end.clone()));
        offset = end;
    }
    debug_assert_eq!(offset, &half_total * 2u32);

    let clip =
        |lo: &BigUint, hi: &BigUint, from: &BigUint, to: &BigUint| -> Option<(BigUint, BigUint)> {
            let a = lo.max(from).clone();
            let b = hi.min(to).clone();
            (a < b).then_some((a, b))
        };
    let zero = BigUint::zero();
    let total = &half_total * 2u32;
    let lower: Vec<(usize, BigUint, BigUint)> = runs
        .iter()
        .filter_map(|(x, lo, hi)| clip(lo, hi, &zero, &half_total).map(|(a, b)| (*x, a, b)))
        .collect();
    let upper: Vec<(usize, BigUint, BigUint)> = runs
        .iter()
        .filter_map(|(x, lo, hi)| {
            clip(lo, hi, &half_total, &total).map(|(a, b)| (*x, a - &half_total, b - &half_total))
        })
        .collect();

    let mut merged: BTreeMap<TwoPointVar, BigUint> = BTreeMap::new();
    let (mut i, mut j) = (0, 0);
    while i < lower.len() && j < upper.len() {
        let (x, ref a_lo, ref a_hi) = lower[i];
        let (y, ref b_lo, ref b_hi) = upper[j];
        if let Some((lo, hi)) = clip(a_lo, a_hi, b_lo, b_hi) {
            let pair = TwoPointVar::new(x, y)
                .expect("offset pairing never matches an element with itself");
            *merged.entry(pair).or_insert_with(BigUint::zero) += hi - lo;
        }
        if a_hi <= b_hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    let components = merged
        .into_iter()
        .map(|(v, w)| (v, Rational::new(BigInt::from(w), lcd.clone())))
        .collect();
    Ok(PairMixture { components })
}

/// `sum_i w_i * Uniform{a_i, b_i}`.
pub fn mixture_law(p: &PairMixture, g: &Arc<FiniteGroup>) -> Result<ExactDist> {
    let mut masses: Vec<(usize, Rational)> = Vec::new();
    for (v, w) in &p.components {
        if *w <= Rational::zero() {
            return Err(Error::InvalidDistribution(format!(
                "non-positive weight {w}"
            )));
        }
        for (x, q) in uniform_pair(g, *v)?.masses() {
            masses.push((x, w * q));
        }
    }
    ExactDist::from_masses(g.clone(), masses)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentJson {
    pub a: usize,
    pub b: usize,
    pub num: String,
    pub den: String,
}

/// `{"components": [{"a": i, "b": j, "num": "...", "den": "..."}]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairMixtureJson {
    pub components: Vec<ComponentJson>,
}

impl From<&PairMixture> for PairMixtureJson {
    fn from(p: &PairMixture) -> Self {
        PairMixtureJson {
            components: p
                .components
                .iter()
                .map(|(v, w)| ComponentJson {
                    a: v.a,
                    b: v.b,
                    num: w.numer().to_string(),
                    den: w.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl PairMixtureJson {
    pub fn parse(&self) -> Result<PairMixture> {
        let components = self
            .components
            .iter()
            .map(|c| Ok((TwoPointVar::new(c.a, c.b)?, parse_parts(&c.num, &c.den)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PairMixture { components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_cyclic;
    use crate::rational::ratio;

    fn law(entries: &[(usize, i64, i64)]) -> (Arc<FiniteGroup>, ExactDist) {
        let g = Arc::new(make_cyclic(8).unwrap());
        let d =
            ExactDist::from_masses(g.clone(), entries.iter().map(|&(x, n, d)| (x, ratio(n, d))))
                .unwrap();
        (g, d)
    }

    fn pair(a: usize, b: usize) -> TwoPointVar {
        TwoPointVar::new(a, b).unwrap()
    }

    #[test]
    fn half_quarter_quarter() {
        let (g, d) = law(&[(0, 1, 2), (1, 1, 4), (2, 1, 4)]);
        let p = decompose_to_pairs(&d).unwrap();
        assert_eq!(
            p.components,
            vec![(pair(0, 1), ratio(1, 2)), (pair(0, 2), ratio(1, 2))]
        );
        assert_eq!(mixture_law(&p, &g).unwrap(), d);
    }

    #[test]
    fn already_two_point() {
        let (g, d) = law(&[(3, 1, 2), (5, 1, 2)]);
        let p = decompose_to_pairs(&d).unwrap();
        assert_eq!(p.components, vec![(pair(3, 5), ratio(1, 1))]);
        assert_eq!(mixture_law(&p, &g).unwrap(), d);
    }

    #[test]
    fn thirds() {
        let (g, d) = law(&[(0, 1, 3), (1, 1, 3), (2, 1, 3)]);
        let p = decompose_to_pairs(&d).unwrap();
        assert_eq!(
            p.components,
            vec![
                (pair(0, 1), ratio(1, 3)),
                (pair(0, 2), ratio(1, 3)),
                (pair(1, 2), ratio(1, 3))
            ]
        );
        assert_eq!(mixture_law(&p, &g).unwrap(), d);
    }

    #[test]
    fn rejects_heavy_or_single_point() {
        let (_, d) = law(&[(0, 3, 5), (1, 2, 5)]);
        assert!(matches!(
            decompose_to_pairs(&d),
            Err(Error::MassAboveHalf { element: 0, .. })
        ));
        let (_, d) = law(&[(4, 1, 1)]);
        assert!(matches!(
            decompose_to_pairs(&d),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let (g, d) = law(&[(0, 1, 3), (1, 1, 3), (2, 1, 3)]);
        let p = decompose_to_pairs(&d).unwrap();
        let text = serde_json::to_string(&PairMixtureJson::from(&p)).unwrap();
        let back: PairMixtureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(mixture_law(&back.parse().unwrap(), &g).unwrap(), d);
    }

    #[test]
    fn any_valid_matching_is_accepted() {
        let (g, d) = law(&[(0, 1, 4), (1, 1, 4), (2, 1, 4), (3, 1, 4)]);
        let other = PairMixture {
            components: vec![(pair(0, 3), ratio(1, 2)), (pair(1, 2), ratio(1, 2))],
        };
        assert_eq!(mixture_law(&other, &g).unwrap(), d);
        assert_ne!(decompose_to_pairs(&d).unwrap(), other);
    }
}
