//! Probe for the open bound on groups that mix odd and even orders.
//!
//! Given an odd threshold `m`, let `S` be the even element orders above `m`
//! and `m1` the smallest of them. When `m1 < 2m` the candidate bound is the
//! signed walk on Z_m1; otherwise (or when `S` is empty) it is the binary
//! walk interval bound on Z_m. The probe only searches; it never treats the
//! candidate as established.

use std::sync::Arc;

use serde::Serialize;

use super::{exhaustive_rho, pairs_json, Mode, PairJson, SearchLimits, SearchResult};
use crate::bounds::{signed_interval_mass, theorem2_bound};
use crate::dist::{mass_of_set, pair_walk, TwoPointVar};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rational::{Rational, RationalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConjectureCase {
    /// `m1 < 2m`: signed walk on Z_m1.
    #[serde(rename = "m1 < 2m")]
    SignedWalk,
    /// `m1 >= 2m` or no even order above `m`: binary walk on Z_m.
    #[serde(rename = "m1 >= 2m or S empty")]
    BinaryWalk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub multiset: Vec<TwoPointVar>,
    pub set: Vec<usize>,
    pub probability: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureVerdict {
    pub group: String,
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub even_orders: Vec<u64>,
    pub m1: Option<u64>,
    pub case: ConjectureCase,
    pub conjectured_bound: Rational,
    pub exhaustive_max: Rational,
    pub search: SearchResult,
    pub counterexample: Option<Counterexample>,
}

pub fn conjecture_probe(
    g: &Arc<FiniteGroup>,
    m: u64,
    n: u64,
    k: u64,
    limits: &SearchLimits,
) -> Result<ConjectureVerdict> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "m must be odd and >= 3, got {m}"
        )));
    }
    let mut even_orders: Vec<u64> = g
        .orders()
        .iter()
        .copied()
        .filter(|&o| o % 2 == 0 && o > m)
        .collect();
    even_orders.sort_unstable();
    even_orders.dedup();
    let m1 = even_orders.first().copied();
    let (case, conjectured_bound) = match m1 {
        Some(m1) if m1 < 2 * m => (ConjectureCase::SignedWalk, signed_interval_mass(n, k, m1)?),
        _ => (ConjectureCase::BinaryWalk, theorem2_bound(n, k, m)?),
    };
    let search = exhaustive_rho(g, n, k, m, Mode::SymmetricPairs, limits)?;
    let counterexample = if search.max_value > conjectured_bound {
        // independent recomputation before anything is reported
        let law = pair_walk(g, &search.argmax)?;
        let probability = mass_of_set(&law, &search.witness_set);
        if probability != search.max_value
            || search.witness_set.len() as u64 != k.min(g.size() as u64)
        {
            return Err(Error::Inconsistent(format!(
                "counterexample recomputes to {probability}, search reported {}",
                search.max_value
            )));
        }
        Some(Counterexample {
            multiset: search.argmax.clone(),
            set: search.witness_set.clone(),
            probability,
        })
    } else {
        None
    };
    Ok(ConjectureVerdict {
        group: g.label().to_string(),
        m,
        n,
        k,
        even_orders,
        m1,
        case,
        conjectured_bound,
        exhaustive_max: search.max_value.clone(),
        search,
        counterexample,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleJson {
    pub multiset: Vec<PairJson>,
    pub set: Vec<usize>,
    pub probability: RationalJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureVerdictJson {
    pub group: String,
    pub m: u64,
    pub n: u64,
    pub k: u64,
    #[serde(rename = "S")]
    pub even_orders: Vec<u64>,
    pub m1: Option<u64>,
    pub case: ConjectureCase,
    pub conjectured_bound: RationalJson,
    pub exhaustive_max: RationalJson,
    pub argmax_multiset: Vec<PairJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

impl From<&ConjectureVerdict> for ConjectureVerdictJson {
    fn from(v: &ConjectureVerdict) -> Self {
        ConjectureVerdictJson {
            group: v.group.clone(),
            m: v.m,
            n: v.n,
            k: v.k,
            even_orders: v.even_orders.clone(),
            m1: v.m1,
            case: v.case,
            conjectured_bound: (&v.conjectured_bound).into(),
            exhaustive_max: (&v.exhaustive_max).into(),
            argmax_multiset: pairs_json(&v.search.argmax),
            counterexample: v.counterexample.as_ref().map(|c| CounterexampleJson {
                multiset: pairs_json(&c.multiset),
                set: c.set.clone(),
                probability: (&c.probability).into(),
            }),
        }
    }
}
