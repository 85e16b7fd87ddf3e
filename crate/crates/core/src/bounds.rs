//! Exact evaluation of the worst-case walk bounds.
//!
//! Two comparison walks drive everything here: the signed walk (uniform ±1
//! steps on an even modulus) and the binary walk (uniform 0/1 steps on an odd
//! modulus). Their laws are tabulated exactly by dynamic programming over
//! residues, as integer counts over a common denominator `2^n`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dist::ExactDist;
use crate::error::{Error, Result};
use crate::group::make_cyclic;
use crate::rational::{dyadic, ratio, to_f64, Rational, RationalJson};

/// Smallest even number that is at least `m`.
pub fn m_tilde(m: u64) -> u64 {
    2 * m.div_ceil(2)
}

/// `{start, start+1, ..., start+length-1}` mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueInterval {
    pub modulus: u64,
    pub start: u64,
    pub length: u64,
}

impl ResidueInterval {
    /// Any integer start is reduced mod `modulus`; lengths past a full turn clamp.
    pub fn new(modulus: u64, start: i64, length: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        ResidueInterval {
            modulus,
            start: start.rem_euclid(modulus as i64) as u64,
            length: length.min(modulus),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn contains(&self, x: u64) -> bool {
        let offset = (x % self.modulus + self.modulus - self.start) % self.modulus;
        offset < self.length
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(move |i| (self.start + i) % self.modulus)
    }

    /// Sum of `counts` over the residues in the interval.
    pub fn total(&self, counts: &[BigUint]) -> BigUint {
        debug_assert_eq!(counts.len() as u64, self.modulus);
        self.elements().map(|r| &counts[r as usize]).sum()
    }
}

/// `(-k, k]` mod `modulus`.
pub fn symmetric_interval(k: u64, modulus: u64) -> ResidueInterval {
    ResidueInterval::new(modulus, 1 - k as i64, 2 * k)
}

fn cyclic_dist(modulus: u64, counts: &[BigUint], n: u32) -> Result<ExactDist> {
    let g = Arc::new(make_cyclic(modulus as usize)?);
    ExactDist::from_masses(
        g,
        counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| (r, dyadic(c, n))),
    )
}

fn check_n(n: u64) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::InvalidParameter(format!("walk length {n} too large")))
}

/// Counts of sign vectors whose sum lands on each residue of Z_modulus.
pub fn signed_walk_counts(n: u64, modulus: u64) -> Result<Vec<BigUint>> {
    if modulus < 2 || modulus % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "signed walk needs an even modulus >= 2, got {modulus}"
        )));
    }
    check_n(n)?;
    let m = modulus as usize;
    let mut cur = vec![BigUint::zero(); m];
    let mut next = vec![BigUint::zero(); m];
    cur[0] = BigUint::one();
    for _ in 0..n {
        for r in 0..m {
            next[r].clone_from(&cur[(r + m - 1) % m]);
            next[r] += &cur[(r + 1) % m];
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

/// Law of `e_1 + ... + e_n` in Z_modulus with uniform `e_i` in {-1, 1}.
pub fn signed_walk_dist(n: u64, modulus: u64) -> Result<ExactDist> {
    let counts = signed_walk_counts(n, modulus)?;
    cyclic_dist(modulus, &counts, check_n(n)?)
}

/// Probability that the signed walk on Z_modulus ends in `(-k, k]`.
pub fn signed_interval_mass(n: u64, k: u64, modulus: u64) -> Result<Rational> {
    let counts = signed_walk_counts(n, modulus)?;
    Ok(dyadic(
        &symmetric_interval(k, modulus).total(&counts),
        check_n(n)?,
    ))
}

/// Upper bound for `P(X_1 * ... * X_n in A)`, `|A| = k`, over symmetric pairs
/// of order at least `m`.
pub fn theorem1_bound(n: u64, k: u64, m: u64) -> Result<Rational> {
    if n == 0 || k == 0 || m < 2 {
        return Err(Error::InvalidParameter(format!(
            "signed-walk bound needs n >= 1, k >= 1, m >= 2 (got n={n}, k={k}, m={m})"
        )));
    }
    signed_interval_mass(n, k, m_tilde(m))
}

fn check_odd(m: u64) -> Result<()> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "need an odd modulus >= 3, got {m}"
        )));
    }
    Ok(())
}

/// The `k` consecutive residues mod `m` starting at `ceil((n-k+1)/2)`.
pub fn interval_ink(n: u64, k: u64, m: u64) -> Result<ResidueInterval> {
    check_odd(m)?;
    let lo = n as i64 - k as i64 + 1;
    // ceil(lo / 2) for signed lo
    let start = (lo + 1).div_euclid(2);
    Ok(ResidueInterval::new(m, start, k))
}

/// Counts of 0/1 vectors whose sum lands on each residue of Z_m.
pub fn binary_walk_counts(n: u64, m: u64) -> Result<Vec<BigUint>> {
    check_odd(m)?;
    check_n(n)?;
    let m = m as usize;
    let mut cur = vec![BigUint::zero(); m];
    let mut next = vec![BigUint::zero(); m];
    cur[0] = BigUint::one();
    for _ in 0..n {
        for r in 0..m {
            next[r].clone_from(&cur[r]);
            next[r] += &cur[(r + m - 1) % m];
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

pub fn binary_walk_dist(n: u64, m: u64) -> Result<ExactDist> {
    let counts = binary_walk_counts(n, m)?;
    cyclic_dist(m, &counts, check_n(n)?)
}

/// Upper bound for `P(X_1 * ... * X_n in A)`, `|A| = k`, in groups whose
/// non-identity elements all have odd order at least `m`.
pub fn theorem2_bound(n: u64, k: u64, m: u64) -> Result<Rational> {
    check_odd(m)?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "binary-walk bound needs n >= 1".into(),
        ));
    }
    if k >= m {
        return Ok(Rational::one());
    }
    let counts = binary_walk_counts(n, m)?;
    Ok(dyadic(&interval_ink(n, k, m)?.total(&counts), check_n(n)?))
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(BigUint::one());
        row = next;
    }
    row
}

/// `P(e_1 + ... + e_n in (-k, k])` for the ±1 walk on the integers.
pub fn erdos_interval_bound(n: u64, k: u64) -> Result<Rational> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(
            "integer interval bound needs n, k >= 1".into(),
        ));
    }
    let row = binomial_row(n);
    let (n_i, k_i) = (n as i64, k as i64);
    let hits: BigUint = row
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let value = n_i - 2 * *i as i64;
            -k_i < value && value <= k_i
        })
        .map(|(_, c)| c)
        .sum();
    Ok(dyadic(&hits, check_n(n)?))
}

/// `2/m~ + sqrt(2/pi)/sqrt(n)`.
pub fn corollary_closed_form(n: u64, m: u64) -> f64 {
    2.0 / m_tilde(m) as f64 + (2.0 / PI).sqrt() / (n as f64).sqrt()
}

/// `3 max(1/m, 1/sqrt(n))`, the coarser end of the closed-form chain.
pub fn corollary_coarse_form(n: u64, m: u64) -> f64 {
    3.0 * (1.0 / m as f64).max(1.0 / (n as f64).sqrt())
}

/// `141 max(1/m, 1/sqrt(n))`, the earlier comparator for matrix groups.
pub fn tiep_vu_bound(n: u64, m: u64) -> f64 {
    141.0 * (1.0 / m as f64).max(1.0 / (n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialIdentity {
    pub exact: BigUint,
    pub trig: f64,
}

impl BinomialIdentity {
    pub fn relative_error(&self) -> f64 {
        let exact = self
            .exact
            .to_string()
            .parse::<f64>()
            .unwrap_or(f64::INFINITY);
        (self.trig - exact).abs() / exact.max(1.0)
    }
}

/// `C(n,t) + C(n,t+s) + C(n,t+2s) + ...`, summed exactly and through the
/// cosine formula `(1/s) sum_j (2 cos(j pi/s))^n cos(pi (n-2t) j/s)`.
pub fn evenly_spaced_binomial_sum(n: u64, s: u64, t: u64) -> Result<BinomialIdentity> {
    if s == 0 || t >= s {
        return Err(Error::InvalidParameter(format!(
            "need s >= 1 and 0 <= t < s (got s={s}, t={t})"
        )));
    }
    let exact = binomial_row(n)
        .into_iter()
        .skip(t as usize)
        .step_by(s as usize)
        .sum();
    let sf = s as f64;
    let shift = n as f64 - 2.0 * t as f64;
    let trig = (0..s)
        .map(|j| {
            let j = j as f64;
            (2.0 * (j * PI / sf).cos()).powi(n as i32) * (PI * shift * j / sf).cos()
        })
        .sum::<f64>()
        / sf;
    Ok(BinomialIdentity { exact, trig })
}

/// `|P(e_1 + ... + e_n = l in Z_m~) - 2/m~|` for `l` of the parity of `n`.
/// `l` is reduced to its representative in `[0, m~)` before the parity test.
pub fn proposition1_gap(n: u64, m: u64, l: u64) -> Result<Rational> {
    if n == 0 || m < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and m >= 2 (got n={n}, m={m})"
        )));
    }
    let modulus = m_tilde(m);
    let l = l % modulus;
    if l % 2 != n % 2 {
        return Err(Error::InvalidParameter(format!(
            "residue {l} has the wrong parity for n = {n}; the walk never visits it"
        )));
    }
    let counts = signed_walk_counts(n, modulus)?;
    let p = dyadic(&counts[l as usize], check_n(n)?);
    let limit = ratio(2, modulus as i64);
    Ok(if p > limit { p - limit } else { limit - p })
}

/// Every bound evaluated at one `(n, k, m)`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub m_tilde: u64,
    pub theorem1: Rational,
    pub theorem2: Option<Rational>,
    pub erdos: Rational,
    pub corollary_closed_form: f64,
    pub tiep_vu: f64,
    pub notes: Vec<String>,
}

pub fn bound_report(n: u64, k: u64, m: u64) -> Result<BoundReport> {
    let theorem1 = theorem1_bound(n, k, m)?;
    let mut notes = Vec::new();
    let theorem2 = if m % 2 == 1 && m >= 3 {
        Some(theorem2_bound(n, k, m)?)
    } else {
        notes.push(format!("binary-walk bound undefined for even m = {m}"));
        None
    };
    let corollary = corollary_closed_form(n, m);
    if k == 1 && to_f64(&theorem1) > corollary + f64::powi(2.0, -50) {
        notes.push("signed-walk bound exceeds the closed form".into());
    }
    let tiep_vu = tiep_vu_bound(n, m);
    if tiep_vu > 1.0 {
        notes.push("comparator 141*max(1/m, 1/sqrt(n)) exceeds 1".into());
    }
    Ok(BoundReport {
        n,
        k,
        m,
        m_tilde: m_tilde(m),
        theorem1,
        theorem2,
        erdos: erdos_interval_bound(n, k)?,
        corollary_closed_form: corollary,
        tiep_vu,
        notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReportJson {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub m_tilde: u64,
    pub theorem1: RationalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem2: Option<RationalJson>,
    pub erdos: RationalJson,
    pub corollary_closed_form: f64,
    pub tiep_vu: f64,
    pub notes: Vec<String>,
}

impl From<&BoundReport> for BoundReportJson {
    fn from(r: &BoundReport) -> Self {
        BoundReportJson {
            n: r.n,
            k: r.k,
            m: r.m,
            m_tilde: r.m_tilde,
            theorem1: (&r.theorem1).into(),
            theorem2: r.theorem2.as_ref().map(Into::into),
            erdos: (&r.erdos).into(),
            corollary_closed_form: r.corollary_closed_form,
            tiep_vu: r.tiep_vu,
            notes: r.notes.clone(),
        }
    }
}
