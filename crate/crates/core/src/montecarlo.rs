//! Seeded simulation of random products, for groups too large to tabulate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dist::TwoPointVar;
use crate::error::{Error, Result};
use crate::group::{is_prime, mat2_det, mat2_mul, mat2_name, FiniteGroup, Mat2};
use crate::rational::{Rational, RationalJson};
use crate::rng::coin;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

const CHUNK: u64 = 1 << 15;

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let rad = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - rad) / denom).max(0.0),
        ((center + rad) / denom).min(1.0),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub element: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub samples: u64,
    pub seed: u64,
    /// Nonzero cells in element order.
    pub counts: Vec<Cell>,
    /// Samples folded out of `counts` by [`SampleReport::truncated`].
    pub overflow: u64,
    pub max_cell: String,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<RationalJson>,
    pub note: &'static str,
}

impl SampleReport {
    fn from_cells(samples: u64, seed: u64, counts: Vec<Cell>) -> Self {
        // first cell wins ties, so the choice is stable across runs
        let max = counts
            .iter()
            .fold(None::<&Cell>, |best, c| match best {
                Some(b) if b.count >= c.count => Some(b),
                _ => Some(c),
            })
            .expect("at least one sample");
        let (ci_low, ci_high) = wilson_interval(max.count, samples, Z_99);
        SampleReport {
            samples,
            seed,
            max_cell: max.element.clone(),
            estimate: max.count as f64 / samples as f64,
            ci_low,
            ci_high,
            counts,
            overflow: 0,
            target: None,
            note: "99% Wilson interval for the frequency of the selected max cell; not a simultaneous band",
        }
    }

    pub fn with_target(mut self, exact: &Rational) -> Self {
        self.target = Some(exact.into());
        self
    }

    pub fn covers_target(&self, exact: f64) -> bool {
        self.ci_low <= exact && exact <= self.ci_high
    }

    /// Keeps the `top` most frequent cells and moves the rest into `overflow`.
    pub fn truncated(mut self, top: usize) -> Self {
        let mut order: Vec<usize> = (0..self.counts.len()).collect();
        order.sort_by(|&i, &j| {
            self.counts[j]
                .count
                .cmp(&self.counts[i].count)
                .then(i.cmp(&j))
        });
        let mut keep: Vec<usize> = order.into_iter().take(top).collect();
        keep.sort_unstable();
        let kept: u64 = keep.iter().map(|&i| self.counts[i].count).sum();
        self.overflow += self.counts.iter().map(|c| c.count).sum::<u64>() - kept;
        self.counts = keep.into_iter().map(|i| self.counts[i].clone()).collect();
        self
    }
}

fn check_samples(vars: usize, samples: u64) -> Result<()> {
    if vars == 0 {
        return Err(Error::InvalidParameter("need at least one factor".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    Ok(())
}

fn chunks(samples: u64) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(move |c| c * CHUNK..((c + 1) * CHUNK).min(samples))
}

/// Simulates `X_1 * ... * X_n` with one coin per factor; coin 1 picks `b`.
pub fn estimate_rho(
    g: &FiniteGroup,
    vars: &[TwoPointVar],
    samples: u64,
    seed: u64,
) -> Result<SampleReport> {
    check_samples(vars.len(), samples)?;
    for v in vars {
        v.check_in(g)?;
    }
    let size = g.size();
    let tally = chunks(samples)
        .map(|range| {
            let mut counts = vec![0u64; size];
            for s in range {
                let x = vars.iter().enumerate().fold(g.identity(), |x, (i, v)| {
                    g.mul(x, if coin(seed, s, i as u64) { v.b } else { v.a })
                });
                counts[x] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let cells = tally
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(x, count)| Cell {
            element: g.name(x).to_string(),
            count,
        })
        .collect();
    Ok(SampleReport::from_cells(samples, seed, cells))
}

/// Uniform variable on two distinct invertible 2x2 matrices over Z_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixPair {
    pub a: Mat2,
    pub b: Mat2,
}

/// Largest modulus for which entry products cannot overflow.
pub const MAX_MATRIX_MODULUS: u64 = (1 << 31) - 1;

/// Same as [`estimate_rho`] over GL2(p), multiplying matrices directly.
pub fn estimate_matrix_walk(
    p: u64,
    vars: &[MatrixPair],
    samples: u64,
    seed: u64,
) -> Result<SampleReport> {
    if !is_prime(p) || p > MAX_MATRIX_MODULUS {
        return Err(Error::InvalidParameter(format!(
            "matrix walk needs a prime modulus below 2^31, got {p}"
        )));
    }
    check_samples(vars.len(), samples)?;
    let q = p as u32;
    for v in vars {
        for m in [&v.a, &v.b] {
            if m.iter().any(|&e| e >= q) || mat2_det(m, q) == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{} is not in GL2({p})",
                    mat2_name(m)
                )));
            }
        }
        if v.a == v.b {
            return Err(Error::InvalidParameter(format!(
                "pair repeats {}",
                mat2_name(&v.a)
            )));
        }
    }
    let identity: Mat2 = [1, 0, 0, 1];
    let tally = chunks(samples)
        .map(|range| {
            let mut counts: BTreeMap<Mat2, u64> = BTreeMap::new();
            for s in range {
                let x = vars.iter().enumerate().fold(identity, |x, (i, v)| {
                    mat2_mul(&x, if coin(seed, s, i as u64) { &v.b } else { &v.a }, q)
                });
                *counts.entry(x).or_insert(0) += 1;
            }
            counts
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        });
    let cells = tally
        .into_iter()
        .map(|(m, count)| Cell {
            element: mat2_name(&m),
            count,
        })
        .collect();
    Ok(SampleReport::from_cells(samples, seed, cells))
}
