use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Union of the radial segments `[0, a_i]`. Spikes may overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct Hedgehog {
    vertices: Vec<Complex64>,
}

impl Serialize for Hedgehog {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.vertices.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl Hedgehog {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("hedgehog needs at least one vertex".into()));
        }
        if vertices.iter().any(|z| z.norm() == 0.0 || !z.is_finite()) {
            return Err(Error::InvalidArgument("hedgehog vertices must be finite and nonzero".into()));
        }
        Ok(Hedgehog { vertices })
    }

    /// `m` spikes of common length `len` at the `m`-th roots of unity.
    pub fn regular(m: usize, len: f64) -> Result<Self> {
        Self::new(
            (0..m)
                .map(|k| Complex64::from_polar(len, std::f64::consts::TAU * k as f64 / m as f64))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn spikes(&self) -> usize {
        self.vertices.len()
    }

    pub fn max_modulus(&self) -> f64 {
        self.vertices.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(self.vertices.iter().map(|z| z * c).collect())
    }
}

/// `(max |a_i|^m / 4)^(1/m)`, an upper bound for the transfinite diameter;
/// equality holds for the vertices of a regular `m`-gon about 0.
pub fn dubinin_bound(k: &Hedgehog) -> f64 {
    let m = k.spikes() as f64;
    k.max_modulus() * 4f64.powf(-1.0 / m)
}

/// Candidate points per spike for a requested sample size.
fn grid_per_spike(npts: usize, spikes: usize) -> usize {
    (20 * npts).div_ceil(spikes).max(8)
}

/// Geometric mean of pairwise distances of `npts` greedy Leja points drawn
/// from a uniform grid on the spikes. Tends to the transfinite diameter from
/// above, at rate roughly `log n / n`.
pub fn leja_capacity_estimate(k: &Hedgehog, npts: usize) -> Result<f64> {
    if npts < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 points, got {npts}")));
    }
    let per = grid_per_spike(npts, k.spikes());
    let mut cand: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    for a in k.vertices() {
        cand.extend((1..=per).map(|j| a * (j as f64 / per as f64)));
    }
    // start from a vertex of largest modulus
    let first = cand
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, _)| i)
        .unwrap();
    let mut score = vec![0.0f64; cand.len()];
    let mut used = vec![false; cand.len()];
    let mut chosen = first;
    let mut total = 0.0;
    for _ in 1..npts {
        used[chosen] = true;
        let z = cand[chosen];
        for (i, c) in cand.iter().enumerate() {
            if !used[i] {
                score[i] += (c - z).norm().ln();
            }
        }
        let next = (0..cand.len())
            .filter(|&i| !used[i])
            .max_by(|&a, &b| score[a].total_cmp(&score[b]).then(b.cmp(&a)))
            .ok_or_else(|| Error::InvalidArgument("grid exhausted".into()))?;
        // the chosen point's score is the sum of logs to all earlier points
        total += score[next];
        chosen = next;
    }
    let n = npts as f64;
    Ok((2.0 * total / (n * (n - 1.0))).exp())
}

/// Mapping radius `(4 b^k S^(2k) / (b^k + S^k)^2)^(1/k)` of the disk of radius
/// `S` slit along `k` rays from radius `b` outward.
pub fn slit_disk_radius(b: f64, s: f64, k: u32) -> Result<f64> {
    if !(b > 0.0 && b <= s && s.is_finite()) || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "slit disk needs 0 < b <= S and k >= 1, got b={b}, S={s}, k={k}"
        )));
    }
    let kf = k as f64;
    // 4^(1/k) b / (1 + (b/S)^k)^(2/k)
    Ok(4f64.powf(1.0 / kf) * b * (-(2.0 / kf) * (b / s).powf(kf).ln_1p()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dubinin_examples() {
        let cross = Hedgehog::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ])
        .unwrap();
        assert!((dubinin_bound(&cross) - 4f64.powf(-0.25)).abs() < 1e-15);
        let seg = Hedgehog::new(vec![Complex64::new(3.0, 0.0)]).unwrap();
        assert!((dubinin_bound(&seg) - 0.75).abs() < 1e-15);
        let reg = Hedgehog::regular(6, 2.0).unwrap();
        assert!((dubinin_bound(&reg) - 2.0 / 4f64.powf(1.0 / 6.0)).abs() < 1e-14);
        assert!(Hedgehog::new(vec![]).is_err());
        assert!(Hedgehog::new(vec![Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn leja_estimates_from_above() {
        let exact = 4f64.powf(-0.25);
        let est = leja_capacity_estimate(&Hedgehog::regular(4, 1.0).unwrap(), 64).unwrap();
        assert!(est > exact && est < exact * 1.1, "{est}");
        let seg = leja_capacity_estimate(&Hedgehog::regular(1, 1.0).unwrap(), 512).unwrap();
        assert!((seg - 0.25).abs() < 0.02 * 0.25, "{seg}");
    }

    #[test]
    fn leja_is_homogeneous() {
        let k = Hedgehog::new(vec![Complex64::new(1.0, 0.2), Complex64::new(-0.3, 0.8)]).unwrap();
        let base = leja_capacity_estimate(&k, 40).unwrap();
        let doubled = leja_capacity_estimate(&k.scaled(Complex64::new(2.0, 0.0)).unwrap(), 40).unwrap();
        assert!((doubled - 2.0 * base).abs() < 1e-13);
        let c = Complex64::new(0.3, 0.4);
        let rotated = leja_capacity_estimate(&k.scaled(c).unwrap(), 40).unwrap();
        assert!((rotated - 0.5 * base).abs() < 1e-9 * base);
    }

    #[test]
    fn slit_disk_examples() {
        assert!((slit_disk_radius(1.0, 2.0, 1).unwrap() - 16.0 / 9.0).abs() < 1e-14);
        assert!((slit_disk_radius(1.0, 1e6, 1).unwrap() - 4.0).abs() < 1e-5);
        for k in 1..6 {
            assert!((slit_disk_radius(1.7, 1.7, k).unwrap() - 1.7).abs() < 1e-14);
        }
        // direct formula
        let (b, s, k) = (0.8f64, 3.0f64, 3);
        let direct = (4.0 * b.powi(k) * s.powi(2 * k) / (b.powi(k) + s.powi(k)).powi(2)).powf(1.0 / k as f64);
        assert!((slit_disk_radius(b, s, k as u32).unwrap() - direct).abs() < 1e-12 * direct);
        assert!(slit_disk_radius(2.0, 1.0, 1).is_err());
        assert!(slit_disk_radius(1.0, 2.0, 0).is_err());
    }

    /// `1/z -> (1/z) / (1 - b z^-n / 4)^(2/n)` maps the circle
    /// `|1/z| = (4/b)^(1/n)` onto the boundary of a regular hedgehog: `w^n`
    /// lands on `[-b, 0]`.
    #[test]
    fn conformal_map_boundary_lands_on_spikes() {
        for n in 1..=6u32 {
            let b = 2.5f64;
            let r = (4.0 / b).powf(1.0 / n as f64);
            for step in 1..50 {
                let zeta = Complex64::from_polar(r, 0.1237 * step as f64);
                let wn = (1.0 - b * zeta.powu(n) / 4.0).powu(2) / zeta.powu(n);
                assert!(wn.im.abs() < 1e-12 && wn.re <= 1e-12 && wn.re >= -b - 1e-12, "{wn}");
            }
            // interior points stay off the hedgehog
            let zeta = Complex64::from_polar(0.5 * r, 0.3);
            let wn = (1.0 - b * zeta.powu(n) / 4.0).powu(2) / zeta.powu(n);
            assert!(wn.im.abs() > 1e-6 || wn.re > 0.0 || wn.re < -b);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn dubinin_monotone_and_homogeneous(mods in proptest::collection::vec(0.1f64..5.0, 1..6), args in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 6), bump in 0.0f64..2.0, c in 0.1f64..10.0) {
            let v: Vec<Complex64> = mods.iter().zip(&args).map(|(m, a)| Complex64::from_polar(*m, *a)).collect();
            let k = Hedgehog::new(v.clone()).unwrap();
            let mut w = v.clone();
            w[0] *= 1.0 + bump;
            prop_assert!(dubinin_bound(&Hedgehog::new(w).unwrap()) >= dubinin_bound(&k));
            let scaled = k.scaled(Complex64::from_polar(c, 1.0)).unwrap();
            prop_assert!((dubinin_bound(&scaled) - c * dubinin_bound(&k)).abs() < 1e-12 * c * dubinin_bound(&k).max(1.0));
        }

        #[test]
        fn leja_not_below_exact_on_regular(m in 1usize..=6, len in 0.5f64..2.0) {
            let k = Hedgehog::regular(m, len).unwrap();
            let est = leja_capacity_estimate(&k, 48).unwrap();
            prop_assert!(est >= dubinin_bound(&k) * 0.98);
        }
    }
}
