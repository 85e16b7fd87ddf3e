//! Finite groups as dense Cayley tables.
//!
//! Every constructor lowers its family (cyclic, products, dihedral, symmetric,
//! GL2 over a prime field, or a loaded table) into the same [`FiniteGroup`]
//! representation, with precomputed identity, inverses and element orders.
//! Elements are addressed by their index in `0..size`.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of Cayley table entries (`size * size`).
/// Sized so that S7 and GL2(7), the largest builtin families, fit.
pub const DEFAULT_MAX_TABLE_ENTRIES: u128 = 5040 * 5040;

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    id: u64,
    label: String,
    size: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    orders: Vec<u64>,
    names: Vec<String>,
}

/// The shape of a Cayley table on the wire:
/// `{"size": N, "names": [...], "table": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CayleyJson {
    pub size: usize,
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Unique per constructed group; clones share it.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.size
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                index: a,
                size: self.size,
            })
        }
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (a + 1..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Index of the element with the given display name.
    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn to_cayley_json(&self) -> CayleyJson {
        CayleyJson {
            size: self.size,
            names: self.names.clone(),
            table: (0..self.size)
                .map(|a| (0..self.size).map(|b| self.mul(a, b)).collect())
                .collect(),
        }
    }

    /// Re-runs the full axiom check on this group's table.
    pub fn validate(&self) -> Result<()> {
        let checked = check_axioms(self.size, &self.table, &self.names)?;
        if checked.identity != self.identity || checked.inverse != self.inverse {
            return Err(Error::NotAGroup(
                "stored identity or inverses disagree with the table".into(),
            ));
        }
        if checked.orders != self.orders {
            return Err(Error::NotAGroup(
                "stored element orders disagree with the table".into(),
            ));
        }
        Ok(())
    }

    /// Builds from a raw table produced by a structured constructor, where
    /// the axioms hold by construction. Identity, inverses and orders are
    /// still derived from the table rather than trusted.
    fn from_generated(
        label: String,
        names: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
        cap: u128,
    ) -> Result<Self> {
        let size = names.len();
        check_cap(size, cap)?;
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                table.push(mul(a, b) as u32);
            }
        }
        let identity = (0..size)
            .find(|&e| (0..size).all(|b| table[e * size + b] as usize == b))
            .ok_or_else(|| Error::NotAGroup(format!("{label}: generated table has no identity")))?;
        let inverse = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| table[a * size + b] as usize == identity)
                    .ok_or_else(|| {
                        Error::NotAGroup(format!("{label}: no inverse for {}", names[a]))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let orders = compute_orders(size, &table, identity)?;
        Ok(FiniteGroup {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            label,
            size,
            table,
            identity,
            inverse,
            orders,
            names,
        })
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FiniteGroup {}

fn check_cap(size: usize, cap: u128) -> Result<()> {
    let entries = (size as u128) * (size as u128);
    if entries > cap {
        return Err(Error::GroupTooLarge { entries, cap });
    }
    Ok(())
}

fn compute_orders(size: usize, table: &[u32], identity: usize) -> Result<Vec<u64>> {
    (0..size)
        .map(|a| {
            let mut x = a;
            let mut t = 1u64;
            while x != identity {
                x = table[x * size + a] as usize;
                t += 1;
                if t > size as u64 {
                    return Err(Error::NotAGroup(format!("element {a} has no finite order")));
                }
            }
            Ok(t)
        })
        .collect()
}

/// Z_m with element `i` named `"i"`.
pub fn make_cyclic(m: usize) -> Result<FiniteGroup> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "cyclic group order must be at least 1".into(),
        ));
    }
    let names = (0..m).map(|i| i.to_string()).collect();
    FiniteGroup::from_generated(
        format!("Z{m}"),
        names,
        |a, b| (a + b) % m,
        DEFAULT_MAX_TABLE_ENTRIES,
    )
}

/// Z_m^l with mixed-radix indices and tuple names `"(a,b,c)"`.
pub fn make_cyclic_power(m: usize, l: u32) -> Result<FiniteGroup> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidParameter(
            "Z_m^l needs m >= 1 and l >= 1".into(),
        ));
    }
    if l == 1 {
        return make_cyclic(m);
    }
    let size = (m as u128)
        .checked_pow(l)
        .filter(|s| s * s <= DEFAULT_MAX_TABLE_ENTRIES)
        .ok_or(Error::GroupTooLarge {
            entries: (m as u128).saturating_pow(2 * l),
            cap: DEFAULT_MAX_TABLE_ENTRIES,
        })? as usize;
    let digits = |mut x: usize| {
        let mut d = vec![0usize; l as usize];
        for slot in d.iter_mut().rev() {
            *slot = x % m;
            x /= m;
        }
        d
    };
    let names = (0..size)
        .map(|x| {
            let parts: Vec<String> = digits(x).iter().map(|d| d.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    FiniteGroup::from_generated(
        format!("Z{m}^{l}"),
        names,
        |a, b| {
            digits(a)
                .iter()
                .zip(digits(b))
                .fold(0, |acc, (x, y)| acc * m + (x + y) % m)
        },
        DEFAULT_MAX_TABLE_ENTRIES,
    )
}

pub fn make_direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    make_direct_product_capped(g, h, DEFAULT_MAX_TABLE_ENTRIES)
}

/// Componentwise product; element `(x, y)` has index `x * |h| + y`.
pub fn make_direct_product_capped(
    g: &FiniteGroup,
    h: &FiniteGroup,
    cap: u128,
) -> Result<FiniteGroup> {
    let size = (g.size as u128) * (h.size as u128);
    if size * size > cap {
        return Err(Error::GroupTooLarge {
            entries: size * size,
            cap,
        });
    }
    let hs = h.size;
    let mut names = Vec::with_capacity(size as usize);
    for x in 0..g.size {
        for y in 0..hs {
            names.push(format!("({},{})", g.name(x), h.name(y)));
        }
    }
    FiniteGroup::from_generated(
        format!("{}x{}", g.label, h.label),
        names,
        |a, b| g.mul(a / hs, b / hs) * hs + h.mul(a % hs, b % hs),
        cap,
    )
}

/// Dihedral group of order 2m: `r^k` at index k, `s r^k` at index m + k.
pub fn make_dihedral(m: usize) -> Result<FiniteGroup> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "dihedral group needs m >= 2".into(),
        ));
    }
    let rot = |k: usize| match k {
        0 => String::new(),
        1 => "r".to_string(),
        _ => format!("r^{k}"),
    };
    let mut names: Vec<String> = (0..m)
        .map(|k| if k == 0 { "e".into() } else { rot(k) })
        .collect();
    names.extend((0..m).map(|k| format!("s{}", rot(k))));
    FiniteGroup::from_generated(
        format!("D{m}"),
        names,
        |a, b| {
            let (ra, fa) = (a % m, a >= m);
            let (rb, fb) = (b % m, b >= m);
            // r^a s = s r^-a
            let r = if fb { (rb + m - ra) % m } else { (ra + rb) % m };
            if fa ^ fb {
                m + r
            } else {
                r
            }
        },
        DEFAULT_MAX_TABLE_ENTRIES,
    )
}

/// Symmetric group on d letters; permutations in lexicographic order,
/// composed as `(p * q)(x) = p(q(x))`.
pub fn make_symmetric(d: usize) -> Result<FiniteGroup> {
    if d == 0 || d > 7 {
        return Err(Error::InvalidParameter(format!(
            "symmetric group S_{d}: need 1 <= d <= 7"
        )));
    }
    let perms = permutations(d);
    let index = |p: &[usize]| -> usize {
        // Lehmer code gives the lexicographic rank.
        let mut rank = 0;
        for i in 0..d {
            let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
            rank = rank * (d - i) + smaller;
        }
        rank
    };
    debug_assert!(perms.iter().enumerate().all(|(i, p)| index(p) == i));
    let names = perms
        .iter()
        .map(|p| {
            let parts: Vec<String> = p.iter().map(|x| (x + 1).to_string()).collect();
            format!("[{}]", parts.join(" "))
        })
        .collect();
    FiniteGroup::from_generated(
        format!("S{d}"),
        names,
        |a, b| {
            let (p, q) = (&perms[a], &perms[b]);
            let r: Vec<usize> = (0..d).map(|x| p[q[x]]).collect();
            index(&r)
        },
        DEFAULT_MAX_TABLE_ENTRIES,
    )
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..d.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..d).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// 2x2 matrix `[a, b, c, d]` (row-major) over Z_p.
pub type Mat2 = [u32; 4];

pub fn mat2_mul(x: &Mat2, y: &Mat2, p: u32) -> Mat2 {
    let p = p as u64;
    let e =
        |a: u32, b: u32, c: u32, d: u32| ((a as u64 * b as u64 + c as u64 * d as u64) % p) as u32;
    [
        e(x[0], y[0], x[1], y[2]),
        e(x[0], y[1], x[1], y[3]),
        e(x[2], y[0], x[3], y[2]),
        e(x[2], y[1], x[3], y[3]),
    ]
}

pub fn mat2_det(x: &Mat2, p: u32) -> u32 {
    let p = p as u64;
    ((x[0] as u64 * x[3] as u64 + p * p - (x[1] as u64 * x[2] as u64) % p) % p) as u32
}

pub fn mat2_name(x: &Mat2) -> String {
    format!("[[{},{}],[{},{}]]", x[0], x[1], x[2], x[3])
}

/// GL2(p) for prime p <= 7, matrices enumerated lexicographically by entries.
pub fn make_gl2(p: u64) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "GL2 needs a prime modulus, got {p}"
        )));
    }
    if p > 7 {
        return Err(Error::InvalidParameter(format!(
            "GL2({p}) exceeds the table limit p <= 7"
        )));
    }
    let q = p as u32;
    let mut mats: Vec<Mat2> = Vec::new();
    let mut slot = vec![usize::MAX; (q as usize).pow(4)];
    let key = |m: &Mat2| (((m[0] * q + m[1]) * q + m[2]) * q + m[3]) as usize;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = [a, b, c, d];
                    if mat2_det(&m, q) != 0 {
                        slot[key(&m)] = mats.len();
                        mats.push(m);
                    }
                }
            }
        }
    }
    let names = mats.iter().map(mat2_name).collect();
    FiniteGroup::from_generated(
        format!("GL2_{p}"),
        names,
        |x, y| slot[key(&mat2_mul(&mats[x], &mats[y], q))],
        DEFAULT_MAX_TABLE_ENTRIES,
    )
}

/// Reads and fully validates a Cayley JSON document.
pub fn load_cayley(source: impl std::io::Read) -> Result<FiniteGroup> {
    let doc: CayleyJson =
        serde_json::from_reader(source).map_err(|e| Error::Malformed(e.to_string()))?;
    from_cayley_json(doc, DEFAULT_MAX_TABLE_ENTRIES)
}

pub fn from_cayley_json(doc: CayleyJson, cap: u128) -> Result<FiniteGroup> {
    let n = doc.size;
    if n == 0 {
        return Err(Error::Malformed("size must be positive".into()));
    }
    check_cap(n, cap)?;
    if doc.names.len() != n {
        return Err(Error::Malformed(format!(
            "expected {n} names, found {}",
            doc.names.len()
        )));
    }
    if doc.table.len() != n {
        return Err(Error::Malformed(format!(
            "expected {n} table rows, found {}",
            doc.table.len()
        )));
    }
    let mut table = Vec::with_capacity(n * n);
    for (i, row) in doc.table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::Malformed(format!(
                    "entry ({i},{j}) = {v} is out of range"
                )));
            }
            table.push(v as u32);
        }
    }
    let checked = check_axioms(n, &table, &doc.names)?;
    Ok(FiniteGroup {
        id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
        label: "cayley".into(),
        size: n,
        table,
        identity: checked.identity,
        inverse: checked.inverse,
        orders: checked.orders,
        names: doc.names,
    })
}

struct CheckedAxioms {
    identity: usize,
    inverse: Vec<usize>,
    orders: Vec<u64>,
}

/// Identity, associativity, cancellation, inverses, then the Lagrange
/// tripwire, in that order. The first failure is reported.
fn check_axioms(n: usize, table: &[u32], names: &[String]) -> Result<CheckedAxioms> {
    let at = |a: usize, b: usize| table[a * n + b] as usize;
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
        .ok_or_else(|| Error::NotAGroup("no two-sided identity element".into()))?;

    // Light's test: the elements `g` with (x g) y = x (g y) for all x, y form
    // a submagma, so checking a generating set covers the whole table.
    for g in magma_generators(n, table) {
        for x in 0..n {
            let xg = at(x, g);
            for y in 0..n {
                let left = at(xg, y);
                let right = at(x, at(g, y));
                if left != right {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails at ({}, {}, {}): ({0}*{1})*{2} = {} but {0}*({1}*{2}) = {}",
                        names[x], names[g], names[y], names[left], names[right]
                    )));
                }
            }
        }
    }

    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = at(a, b);
            if seen[v] == a {
                return Err(Error::NotAGroup(format!(
                    "not left-cancellative: row {} repeats {}",
                    names[a], names[v]
                )));
            }
            seen[v] = a;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for b in 0..n {
        for a in 0..n {
            let v = at(a, b);
            if seen[v] == b {
                return Err(Error::NotAGroup(format!(
                    "not right-cancellative: column {} repeats {}",
                    names[b], names[v]
                )));
            }
            seen[v] = b;
        }
    }

    let inverse = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::NotAGroup(format!("{} has no two-sided inverse", names[a])))
        })
        .collect::<Result<Vec<_>>>()?;
    let orders = compute_orders(n, table, identity)?;
    if let Some(a) = (0..n).find(|&a| !(n as u64).is_multiple_of(orders[a])) {
        return Err(Error::NotAGroup(format!(
            "order {} of {} does not divide the group size {n}",
            orders[a], names[a]
        )));
    }
    Ok(CheckedAxioms {
        identity,
        inverse,
        orders,
    })
}

/// Greedy generating set of the magma defined by `table`.
fn magma_generators(n: usize, table: &[u32]) -> Vec<usize> {
    let at = |a: usize, b: usize| table[a * n + b] as usize;
    let mut inside = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    for cand in 0..n {
        if inside[cand] {
            continue;
        }
        gens.push(cand);
        let mut queue = vec![cand];
        inside[cand] = true;
        while let Some(e) = queue.pop() {
            members.push(e);
            for &f in &members {
                for v in [at(e, f), at(f, e)] {
                    if !inside[v] {
                        inside[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
    }
    gens
}

/// Least t >= 1 with x^t = identity, by iterated multiplication.
pub fn element_order(g: &FiniteGroup, x: usize) -> u64 {
    let mut y = x;
    let mut t = 1;
    while y != g.identity {
        y = g.mul(y, x);
        t += 1;
    }
    t
}

/// Elements of order at least `m`, in index order. Never includes the identity.
pub fn elements_with_min_order(g: &FiniteGroup, m: u64) -> Vec<usize> {
    let m = m.max(2);
    (0..g.size).filter(|&x| g.orders[x] >= m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_orders(g: &FiniteGroup) -> Vec<u64> {
        let mut o = g.orders().to_vec();
        o.sort();
        o
    }

    #[test]
    fn cyclic_orders() {
        let z1 = make_cyclic(1).unwrap();
        assert_eq!(z1.size(), 1);
        assert_eq!(z1.orders(), &[1]);
        assert_eq!(make_cyclic(6).unwrap().orders(), &[1, 6, 3, 2, 3, 6]);
        assert!(make_cyclic(5).unwrap().orders()[1..]
            .iter()
            .all(|&o| o == 5));
        assert!(make_cyclic(0).is_err());
    }

    #[test]
    fn products() {
        let z2 = make_cyclic(2).unwrap();
        let v4 = make_direct_product(&z2, &z2).unwrap();
        assert_eq!(sorted_orders(&v4), vec![1, 2, 2, 2]);
        let z34 = make_direct_product(&make_cyclic(3).unwrap(), &make_cyclic(4).unwrap()).unwrap();
        assert_eq!(
            sorted_orders(&z34),
            vec![1, 2, 3, 3, 4, 4, 6, 6, 12, 12, 12, 12]
        );
        let z55 = make_cyclic_power(5, 2).unwrap();
        assert_eq!(z55.size(), 25);
        assert_eq!(z55.orders().iter().filter(|&&o| o == 5).count(), 24);
        assert_eq!(z55.name(7), "(1,2)");
        let z10 = make_cyclic(10).unwrap();
        assert!(matches!(
            make_direct_product_capped(&z10, &z10, 1000),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn dihedral() {
        let d2 = make_dihedral(2).unwrap();
        assert_eq!(sorted_orders(&d2), vec![1, 2, 2, 2]);
        let d5 = make_dihedral(5).unwrap();
        assert_eq!(d5.size(), 10);
        assert_eq!(d5.order(1), 5);
        assert_eq!(d5.order(5), 2);
        assert!((5..10).all(|x| d5.order(x) == 2));
        let d3 = make_dihedral(3).unwrap();
        let (r, s) = (d3.find("r").unwrap(), d3.find("s").unwrap());
        assert_ne!(d3.mul(s, r), d3.mul(r, s));
        assert!(make_dihedral(1).is_err());
    }

    #[test]
    fn symmetric() {
        assert_eq!(sorted_orders(&make_symmetric(2).unwrap()), vec![1, 2]);
        assert_eq!(
            sorted_orders(&make_symmetric(3).unwrap()),
            vec![1, 2, 2, 2, 3, 3]
        );
        let s4 = make_symmetric(4).unwrap();
        assert_eq!(s4.size(), 24);
        assert_eq!(s4.order(s4.find("[2 3 4 1]").unwrap()), 4);
        assert_eq!(s4.identity(), 0);
        assert!(make_symmetric(8).is_err());
        assert!(make_symmetric(0).is_err());
    }

    #[test]
    fn general_linear() {
        let g2 = make_gl2(2).unwrap();
        assert_eq!(g2.size(), 6);
        assert_eq!(sorted_orders(&g2), vec![1, 2, 2, 2, 3, 3]);
        let g3 = make_gl2(3).unwrap();
        assert_eq!(g3.size(), 48);
        assert_eq!(g3.name(g3.identity()), "[[1,0],[0,1]]");
        assert_eq!(g3.order(g3.identity()), 1);
        assert!(make_gl2(4).is_err());
        assert!(make_gl2(11).is_err());
    }

    #[test]
    fn constructors_satisfy_axioms() {
        let groups = [
            make_cyclic(1).unwrap(),
            make_cyclic(12).unwrap(),
            make_cyclic_power(3, 3).unwrap(),
            make_direct_product(&make_cyclic(3).unwrap(), &make_cyclic(4).unwrap()).unwrap(),
            make_dihedral(6).unwrap(),
            make_symmetric(4).unwrap(),
            make_gl2(3).unwrap(),
        ];
        for g in &groups {
            g.validate().unwrap();
            for x in 0..g.size() {
                assert_eq!(element_order(g, x), g.order(x));
                assert_eq!(g.order(g.inverse(x)), g.order(x));
                assert_eq!(g.size() as u64 % g.order(x), 0);
            }
            // exhaustive associativity, independent of the generator shortcut
            let n = g.size();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn order_queries() {
        let z6 = make_cyclic(6).unwrap();
        assert_eq!(element_order(&z6, 0), 1);
        assert_eq!(element_order(&z6, 2), 3);
        assert_eq!(element_order(&make_cyclic(5).unwrap(), 1), 5);
        assert_eq!(elements_with_min_order(&z6, 5), vec![1, 5]);
        assert_eq!(
            elements_with_min_order(&make_cyclic(5).unwrap(), 5),
            vec![1, 2, 3, 4]
        );
        assert!(elements_with_min_order(&make_cyclic(4).unwrap(), 5).is_empty());
    }

    fn doc(names: &[&str], table: Vec<Vec<usize>>) -> String {
        serde_json::to_string(&CayleyJson {
            size: names.len(),
            names: names.iter().map(|s| s.to_string()).collect(),
            table,
        })
        .unwrap()
    }

    #[test]
    fn load_valid_z3() {
        let src = doc(
            &["0", "1", "2"],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        );
        let g = load_cayley(src.as_bytes()).unwrap();
        assert_eq!(g.size(), 3);
        assert_eq!(g.orders(), &[1, 3, 3]);
        assert_eq!(g.inverse(1), 2);
    }

    #[test]
    fn load_rejects_non_cancellative() {
        // {0, 1} with 1*1 = 1: associative with identity, but row 1 repeats.
        let src = doc(&["e", "z"], vec![vec![0, 1], vec![1, 1]]);
        let err = load_cayley(src.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("not left-cancellative"), "{err}");
    }

    #[test]
    fn load_rejects_corrupted_z4() {
        let z4 = make_cyclic(4).unwrap();
        let mut cj = z4.to_cayley_json();
        cj.table[2][2] = 1;
        let src = serde_json::to_string(&cj).unwrap();
        let err = load_cayley(src.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("associativity fails at"), "{err}");
    }

    #[test]
    fn load_rejects_malformed() {
        assert!(matches!(
            load_cayley("{".as_bytes()),
            Err(Error::Malformed(_))
        ));
        let short = r#"{"size": 2, "names": ["a"], "table": [[0,1],[1,0]]}"#;
        assert!(matches!(
            load_cayley(short.as_bytes()),
            Err(Error::Malformed(_))
        ));
        let range = r#"{"size": 2, "names": ["a","b"], "table": [[0,2],[1,0]]}"#;
        assert!(matches!(
            load_cayley(range.as_bytes()),
            Err(Error::Malformed(_))
        ));
        let no_id = doc(&["a", "b"], vec![vec![1, 0], vec![1, 0]]);
        assert!(load_cayley(no_id.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("identity"));
    }

    #[test]
    fn round_trip_through_json() {
        let s3 = make_symmetric(3).unwrap();
        let src = serde_json::to_string(&s3.to_cayley_json()).unwrap();
        let back = load_cayley(src.as_bytes()).unwrap();
        assert_eq!(back.names(), s3.names());
        assert_eq!(back.orders(), s3.orders());
        assert_ne!(back, s3);
    }

    #[test]
    fn pow_matches_iteration() {
        let g = make_gl2(3).unwrap();
        for x in 0..g.size() {
            let mut y = g.identity();
            for e in 0..10 {
                assert_eq!(g.pow(x, e), y);
                y = g.mul(y, x);
            }
        }
    }
}
