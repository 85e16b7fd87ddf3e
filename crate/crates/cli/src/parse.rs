//! Value parsers for the compact flag syntaxes.

use anticonc::group::Mat2;
use anticonc::montecarlo::MatrixPair;

/// `7`, `1..=10`, `1..10` or a comma list such as `1,3,5`.
pub fn values(s: &str) -> Result<Vec<u64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("expected an integer, got {t:?}"))
    };
    let out: Vec<u64> = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(format!("{s:?} is an empty range"));
    }
    Ok(out)
}

/// `a:b,c:d` as element index pairs.
pub fn index_pairs(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(',')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| format!("pair {p:?} is not of the form a:b"))?;
            let idx = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("bad element index {t:?}"))
            };
            Ok((idx(a)?, idx(b)?))
        })
        .collect()
}

pub fn indices(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad element index {t:?}"))
        })
        .collect()
}

fn matrix(s: &str) -> Result<Mat2, String> {
    let entries: Vec<u32> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad matrix entry {t:?}"))
        })
        .collect::<Result<_, _>>()?;
    entries
        .try_into()
        .map_err(|_| format!("matrix {s:?} needs four entries a,b,c,d"))
}

/// `a,b,c,d:e,f,g,h;...` where each side lists a 2x2 matrix row by row.
pub fn matrix_pairs(s: &str) -> Result<Vec<MatrixPair>, String> {
    s.split(';')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| format!("matrix pair {p:?} is not of the form A:B"))?;
            Ok(MatrixPair {
                a: matrix(a)?,
                b: matrix(b)?,
            })
        })
        .collect()
}
