use serde::Serialize;

use crate::error::{Error, Result};

/// `3 log(n/2) / n^2`, Matveev's lower bound for `log house`.
pub fn matveev_bound(n: usize) -> Result<f64> {
    if n < 12 {
        return Err(Error::InvalidArgument(format!(
            "Matveev's bound is only stated for degree n >= 12, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(3.0 * (nf / 2.0).ln() / (nf * nf))
}

/// `log 2 / (4n)`, the logarithm of `2^(1/(4n))`.
fn ours(n: usize) -> f64 {
    std::f64::consts::LN_2 / (4 * n) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatveevRow {
    pub n: usize,
    pub matveev: f64,
    pub ours: f64,
    pub ours_stronger: bool,
}

pub fn matveev_table(lo: usize, hi: usize) -> Result<Vec<MatveevRow>> {
    (lo..=hi)
        .map(|n| {
            let m = matveev_bound(n)?;
            let o = ours(n);
            Ok(MatveevRow { n, matveev: m, ours: o, ours_stronger: o > m })
        })
        .collect()
}

/// Smallest `n0 >= 12` with `log 2/(4n) > 3 log(n/2)/n^2` for every
/// `n0 <= n <= max_n`.
pub fn matveev_crossover(max_n: usize) -> Result<usize> {
    let mut n0 = None;
    for n in 12..=max_n {
        if ours(n) > matveev_bound(n)? {
            n0.get_or_insert(n);
        } else {
            n0 = None;
        }
    }
    n0.ok_or_else(|| Error::InvalidArgument(format!("no crossover up to {max_n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_is_59() {
        assert_eq!(matveev_crossover(10_000).unwrap(), 59);
        let t = matveev_table(55, 62).unwrap();
        assert_eq!(t.len(), 8);
        for r in &t {
            assert_eq!(r.ours_stronger, r.n >= 59, "{r:?}");
        }
        let r58 = &t[3];
        assert!((r58.ours - 0.0029877).abs() < 1e-7 && (r58.matveev - 0.0030030).abs() < 1e-7);
        let r59 = &t[4];
        assert!((r59.ours - 0.0029371).abs() < 1e-7 && (r59.matveev - 0.0029168).abs() < 1e-7);
    }

    #[test]
    fn small_degree_rejected() {
        assert!(matches!(matveev_bound(11), Err(Error::InvalidArgument(m)) if m.contains("12")));
        assert!(matveev_bound(12).is_ok());
    }
}
