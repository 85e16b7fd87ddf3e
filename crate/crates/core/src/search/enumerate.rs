//! Depth-first enumeration of pair sequences with incremental product laws.
//!
//! Laws along the search path are kept as integer counts over `2^depth`, so
//! every comparison at a fixed depth is an exact integer comparison.

use rayon::prelude::*;

use crate::dist::TwoPointVar;
use crate::group::FiniteGroup;

/// Deepest walk whose counts fit in `u128`.
pub(crate) const MAX_DEPTH: u64 = 120;

#[derive(Debug, Clone)]
pub(crate) struct Best {
    /// Sum of the `k` largest counts; the probability is this over `2^n`.
    pub count: u128,
    /// Indices into the variable list, in product order.
    pub picks: Vec<usize>,
    pub laws: u128,
}

/// Number of laws the search will evaluate.
pub(crate) fn search_size(vars: usize, n: u64, ordered: bool) -> u128 {
    let v = vars as u128;
    if ordered {
        (0..n)
            .try_fold(1u128, |acc, _| acc.checked_mul(v))
            .unwrap_or(u128::MAX)
    } else {
        // C(v + n - 1, n), built up so each partial quotient is exact
        (0..n as u128)
            .try_fold(1u128, |acc, i| Some(acc.checked_mul(v + i)? / (i + 1)))
            .unwrap_or(u128::MAX)
    }
}

struct Walker<'a> {
    g: &'a FiniteGroup,
    vars: &'a [TwoPointVar],
    n: usize,
    k: usize,
    ordered: bool,
    levels: Vec<Vec<u128>>,
    scratch: Vec<u128>,
    picks: Vec<usize>,
    best: Option<Best>,
    laws: u128,
}

impl Walker<'_> {
    fn step(&mut self, depth: usize, var: usize) {
        let TwoPointVar { a, b } = self.vars[var];
        let (done, rest) = self.levels.split_at_mut(depth + 1);
        let (src, dst) = (&done[depth], &mut rest[0]);
        dst.iter_mut().for_each(|c| *c = 0);
        for (x, &c) in src.iter().enumerate() {
            if c != 0 {
                dst[self.g.mul(x, a)] += c;
                dst[self.g.mul(x, b)] += c;
            }
        }
    }

    fn top_k(&mut self) -> u128 {
        let law = &self.levels[self.n];
        if self.k >= law.len() {
            return law.iter().sum();
        }
        self.scratch.copy_from_slice(law);
        let k = self.k;
        self.scratch.select_nth_unstable_by(k - 1, |x, y| y.cmp(x));
        self.scratch[..k].iter().sum()
    }

    fn descend(&mut self, depth: usize, from: usize) {
        if depth == self.n {
            self.laws += 1;
            let value = self.top_k();
            if self.best.as_ref().is_none_or(|b| value > b.count) {
                self.best = Some(Best {
                    count: value,
                    picks: self.picks.clone(),
                    laws: 0,
                });
            }
            return;
        }
        let first = if self.ordered { 0 } else { from };
        for var in first..self.vars.len() {
            self.step(depth, var);
            self.picks.push(var);
            self.descend(depth + 1, var);
            self.picks.pop();
        }
    }
}

/// Maximum top-`k` count over all length-`n` products of `vars`. Multisets
/// when `ordered` is false, sequences otherwise. Ties keep the
/// lexicographically smallest pick list.
pub(crate) fn search(
    g: &FiniteGroup,
    vars: &[TwoPointVar],
    n: usize,
    k: usize,
    ordered: bool,
) -> Best {
    assert!(n >= 1 && !vars.is_empty());
    let size = g.size();
    let chunks: Vec<Best> = (0..vars.len())
        .into_par_iter()
        .map(|first| {
            let mut levels = vec![vec![0u128; size]; n + 1];
            levels[0][g.identity()] = 1;
            let mut w = Walker {
                g,
                vars,
                n,
                k,
                ordered,
                levels,
                scratch: vec![0; size],
                picks: vec![first],
                best: None,
                laws: 0,
            };
            w.step(0, first);
            w.descend(1, first);
            let mut best = w.best.expect("at least one law per chunk");
            best.laws = w.laws;
            best
        })
        .collect();
    let laws = chunks.iter().map(|c| c.laws).sum();
    let mut best = chunks
        .into_iter()
        .reduce(|acc, c| if c.count > acc.count { c } else { acc })
        .expect("nonempty variable list");
    best.laws = laws;
    best
}
