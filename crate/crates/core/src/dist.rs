//! Exact probability laws on a finite group and their convolution.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::parse_group;
use crate::error::{Error, Result};
use crate::group::{from_cayley_json, CayleyJson, FiniteGroup, DEFAULT_MAX_TABLE_ENTRIES};
use crate::rational::{half, parse_parts, Rational};

/// A law on group elements with exact rational masses. Only positive masses
/// are stored, and they always sum to one.
#[derive(Debug, Clone)]
pub struct ExactDist {
    group: Arc<FiniteGroup>,
    masses: BTreeMap<usize, Rational>,
}

/// Uniform variable on `{a, b}`, stored with `a <= b`. The two points are
/// distinct except for the symmetric pair of an involution, which is a point
/// mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwoPointVar {
    pub a: usize,
    pub b: usize,
}

impl TwoPointVar {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        Ok(TwoPointVar {
            a: a.min(b),
            b: a.max(b),
        })
    }

    /// The pair `{x^-1, x}`, degenerate when `x` is an involution.
    pub fn symmetric(g: &FiniteGroup, x: usize) -> Result<Self> {
        g.check_element(x)?;
        let y = g.inverse(x);
        Ok(TwoPointVar {
            a: x.min(y),
            b: x.max(y),
        })
    }

    pub fn is_point(&self) -> bool {
        self.a == self.b
    }

    pub fn check_in(&self, g: &FiniteGroup) -> Result<()> {
        g.check_element(self.a)?;
        g.check_element(self.b)
    }
}

impl PartialEq for ExactDist {
    fn eq(&self, other: &Self) -> bool {
        self.group.id() == other.group.id() && self.masses == other.masses
    }
}

impl Eq for ExactDist {}

impl ExactDist {
    /// Validates support, positivity and normalization.
    pub fn from_masses(
        group: Arc<FiniteGroup>,
        masses: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (x, p) in masses {
            group.check_element(x)?;
            if p < Rational::zero() {
                return Err(Error::InvalidDistribution(format!(
                    "negative mass {p} at {x}"
                )));
            }
            *map.entry(x).or_insert_with(Rational::zero) += p;
        }
        map.retain(|_, p| !p.is_zero());
        if let Some((x, p)) = map.iter().find(|(_, p)| **p > Rational::one()) {
            return Err(Error::InvalidDistribution(format!(
                "mass {p} at {x} exceeds 1"
            )));
        }
        let total: Rational = map.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(ExactDist { group, masses: map })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn mass(&self, x: usize) -> Rational {
        self.masses.get(&x).cloned().unwrap_or_else(Rational::zero)
    }

    /// Positive masses in element order.
    pub fn masses(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.masses.iter().map(|(&x, p)| (x, p))
    }

    pub fn support(&self) -> Vec<usize> {
        self.masses.keys().copied().collect()
    }

    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    pub fn max_mass(&self) -> Rational {
        self.masses
            .values()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn same_group(&self, other: &ExactDist) -> Result<()> {
        check_same_group(&self.group, &other.group)
    }

    pub fn to_json(&self, group: GroupRef) -> DistJson {
        DistJson {
            group,
            masses: self
                .masses()
                .map(|(x, p)| MassJson {
                    element: x,
                    num: p.numer().to_string(),
                    den: p.denom().to_string(),
                })
                .collect(),
        }
    }
}

pub(crate) fn check_same_group(g: &FiniteGroup, h: &FiniteGroup) -> Result<()> {
    if g.id() != h.id() {
        return Err(Error::GroupMismatch {
            left: g.label().to_string(),
            right: h.label().to_string(),
        });
    }
    Ok(())
}

pub fn point_mass(g: &Arc<FiniteGroup>, x: usize) -> Result<ExactDist> {
    g.check_element(x)?;
    Ok(ExactDist {
        group: g.clone(),
        masses: BTreeMap::from([(x, Rational::one())]),
    })
}

pub fn uniform_pair(g: &Arc<FiniteGroup>, v: TwoPointVar) -> Result<ExactDist> {
    v.check_in(g)?;
    let masses = if v.is_point() {
        BTreeMap::from([(v.a, Rational::one())])
    } else {
        BTreeMap::from([(v.a, half()), (v.b, half())])
    };
    Ok(ExactDist {
        group: g.clone(),
        masses,
    })
}

/// Law of `X * Y` for independent `X ~ d1`, `Y ~ d2`.
pub fn convolve(d1: &ExactDist, d2: &ExactDist) -> Result<ExactDist> {
    d1.same_group(d2)?;
    let g = &d1.group;
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for (&x, p) in &d1.masses {
        for (&y, q) in &d2.masses {
            *out.entry(g.mul(x, y)).or_insert_with(Rational::zero) += p * q;
        }
    }
    Ok(ExactDist {
        group: g.clone(),
        masses: out,
    })
}

/// Law of the ordered product `X1 * X2 * ... * Xn`, folded left to right.
pub fn product_walk(g: &Arc<FiniteGroup>, vars: &[ExactDist]) -> Result<ExactDist> {
    let mut acc = point_mass(g, g.identity())?;
    for d in vars {
        check_same_group(g, &d.group)?;
        acc = convolve(&acc, d)?;
    }
    Ok(acc)
}

/// Convenience: the product law of uniform pairs.
pub fn pair_walk(g: &Arc<FiniteGroup>, vars: &[TwoPointVar]) -> Result<ExactDist> {
    let laws = vars
        .iter()
        .map(|&v| uniform_pair(g, v))
        .collect::<Result<Vec<_>>>()?;
    product_walk(g, &laws)
}

/// The largest mass any `k`-element set can carry, with one witnessing set.
/// Ties are broken toward smaller element indices.
pub fn top_k_mass(d: &ExactDist, k: usize) -> (Rational, Vec<usize>) {
    let mut ranked: Vec<(usize, &Rational)> = d.masses().collect();
    ranked.sort_by(|(x, p), (y, q)| q.cmp(p).then(x.cmp(y)));
    let mut set: Vec<usize> = ranked.iter().take(k).map(|(x, _)| *x).collect();
    let total = ranked.iter().take(k).map(|(_, p)| *p).sum();
    // pad with zero-mass elements so the witness has exactly k members
    if set.len() < k {
        let mut extra = (0..d.group.size()).filter(|x| !d.masses.contains_key(x));
        while set.len() < k.min(d.group.size()) {
            set.push(extra.next().expect("group has enough elements"));
        }
    }
    set.sort_unstable();
    (total, set)
}

pub fn mass_of_set(d: &ExactDist, set: &[usize]) -> Rational {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s.iter().filter_map(|x| d.masses.get(x)).sum()
}

/// Group reference in a distribution document: a builtin name or an inline table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Builtin(String),
    Inline(CayleyJson),
}

impl GroupRef {
    pub fn resolve(&self) -> Result<FiniteGroup> {
        match self {
            GroupRef::Builtin(name) => parse_group(name),
            GroupRef::Inline(doc) => from_cayley_json(doc.clone(), DEFAULT_MAX_TABLE_ENTRIES),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MassJson {
    pub element: usize,
    pub num: String,
    pub den: String,
}

/// `{"group": ..., "masses": [{"element": i, "num": "...", "den": "..."}]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistJson {
    pub group: GroupRef,
    pub masses: Vec<MassJson>,
}

impl DistJson {
    /// Resolves the group and validates the masses against it.
    pub fn into_dist(self) -> Result<ExactDist> {
        let g = Arc::new(self.group.resolve()?);
        let masses = self
            .masses
            .iter()
            .map(|m| Ok((m.element, parse_parts(&m.num, &m.den)?)))
            .collect::<Result<Vec<_>>>()?;
        ExactDist::from_masses(g, masses)
    }
}
