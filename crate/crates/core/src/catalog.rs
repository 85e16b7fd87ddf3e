//! Builtin group names: `Z<m>`, `Z<m>^<l>`, `D<m>`, `S<d>`, `GL2_<p>`,
//! `@path.json`, and `x`-joined direct products such as `Z3xZ4`.

use std::fs::File;

use crate::error::{Error, Result};
use crate::group::{
    from_cayley_json, make_cyclic, make_cyclic_power, make_dihedral, make_direct_product_capped,
    make_gl2, make_symmetric, CayleyJson, FiniteGroup, DEFAULT_MAX_TABLE_ENTRIES,
};

pub fn parse_group(spec: &str) -> Result<FiniteGroup> {
    parse_group_capped(spec, DEFAULT_MAX_TABLE_ENTRIES)
}

/// As [`parse_group`], refusing any Cayley table with more than `cap` entries.
pub fn parse_group_capped(spec: &str, cap: u128) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let file = File::open(path).map_err(|e| Error::Malformed(format!("{path}: {e}")))?;
        let doc: CayleyJson = serde_json::from_reader(std::io::BufReader::new(file))
            .map_err(|e| Error::Malformed(format!("{path}: {e}")))?;
        return Ok(from_cayley_json(doc, cap)?.with_label(spec));
    }
    let factors: Vec<&str> = spec.split('x').collect();
    let mut group = parse_factor(factors[0])?;
    for f in &factors[1..] {
        group = make_direct_product_capped(&group, &parse_factor(f)?, cap)?;
    }
    let entries = (group.size() as u128).pow(2);
    if entries > cap {
        return Err(Error::GroupTooLarge { entries, cap });
    }
    Ok(group.with_label(spec))
}

fn parse_factor(s: &str) -> Result<FiniteGroup> {
    let bad = || Error::InvalidParameter(format!("unrecognized group {s:?}"));
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    if let Some(p) = s.strip_prefix("GL2_") {
        return make_gl2(num(p)? as u64);
    }
    if let Some(rest) = s.strip_prefix('Z') {
        return match rest.split_once('^') {
            Some((m, l)) => make_cyclic_power(num(m)?, num(l)? as u32),
            None => make_cyclic(num(rest)?),
        };
    }
    if let Some(m) = s.strip_prefix('D') {
        return make_dihedral(num(m)?);
    }
    if let Some(d) = s.strip_prefix('S') {
        return make_symmetric(num(d)?);
    }
    Err(bad())
}
