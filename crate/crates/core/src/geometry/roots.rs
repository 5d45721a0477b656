//! Certified root enclosures.
//!
//! Roots are approximated by Aberth–Ehrlich iteration, first in `f64` and
//! then, if the result cannot be certified, in fixed-point big-integer
//! arithmetic at doubling precision. Certification is exact: at each `f64`
//! center `c` the ratio `P(c) / P'(c)` is evaluated in Gaussian integers and
//! the disk of radius `n |P(c) / P'(c)|` contains a root. Pairwise disjoint
//! disks, one per root, therefore contain exactly one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::rational_to_f64;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Relative slack applied whenever an exact bound is rounded to `f64`.
const ROUND_SLACK: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootEnclosure {
    #[serde(serialize_with = "ser_complex")]
    pub center: Complex64,
    pub radius: f64,
    /// Number of roots, with multiplicity, inside the disk.
    pub multiplicity: usize,
    /// Set when several distinct roots could not be separated.
    pub cluster: bool,
}

pub(crate) fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl RootEnclosure {
    /// Bounds on `|z|` over the disk, widened by a rounding margin.
    pub fn modulus_bounds(&self) -> (f64, f64) {
        let m = self.center.norm();
        let lo = ((m - self.radius) * (1.0 - ROUND_SLACK)).max(0.0);
        let hi = (m + self.radius) * (1.0 + ROUND_SLACK);
        (lo, hi)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Isolation {
    pub roots: Vec<RootEnclosure>,
    /// Highest working precision reached, in bits.
    pub precision_bits: u32,
}

/// Enclosures for every root of `p` with radii at most `tol * max(1, |z|)`.
pub fn isolate_roots(p: &IntPoly, tol: f64) -> Result<Vec<RootEnclosure>> {
    Ok(isolate_roots_with(p, tol, DEFAULT_PRECISION_CAP)?.roots)
}

pub fn isolate_roots_with(p: &IntPoly, tol: f64, cap: u32) -> Result<Isolation> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut roots = Vec::new();
    let (k, rest) = p.strip_x_power();
    if k > 0 {
        roots.push(RootEnclosure {
            center: Complex64::new(0.0, 0.0),
            radius: 0.0,
            multiplicity: k,
            cluster: false,
        });
    }
    if rest.deg() == 0 {
        return Ok(Isolation { roots, precision_bits: 53 });
    }
    let factors: Vec<(IntPoly, usize)> = rest
        .squarefree_decomposition()
        .into_iter()
        .filter(|(f, _)| f.deg() > 0)
        .collect();
    if let [(f, m)] = factors.as_slice() {
        let (mut encl, bits) = isolate_squarefree(f, tol, cap)?;
        for e in &mut encl {
            e.multiplicity *= m;
        }
        roots.extend(encl);
        return Ok(Isolation { roots, precision_bits: bits });
    }
    // several multiplicities: isolate the squarefree part and attribute each
    // factor's roots to the nearest enclosure
    let (mut encl, mut bits) = isolate_squarefree(&rest.squarefree_part(), tol, cap)?;
    for e in &mut encl {
        e.multiplicity = 0;
    }
    for (f, m) in &factors {
        let (sub, b) = isolate_squarefree(f, tol, cap)?;
        bits = bits.max(b);
        for r in sub {
            let idx = nearest(&encl, r.center);
            encl[idx].multiplicity += r.multiplicity * m;
        }
    }
    encl.retain(|e| e.multiplicity > 0);
    roots.extend(encl);
    Ok(Isolation { roots, precision_bits: bits })
}

fn nearest(encl: &[RootEnclosure], z: Complex64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, e) in encl.iter().enumerate() {
        let d = (e.center - z).norm() - e.radius;
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

fn within_tol(c: Complex64, r: f64, tol: f64) -> bool {
    r <= tol * c.norm().max(1.0)
}

fn isolate_squarefree(f: &IntPoly, tol: f64, cap: u32) -> Result<(Vec<RootEnclosure>, u32)> {
    let coeffs = f.to_f64_coeffs();
    let mut z = if coeffs.iter().all(|c| c.is_finite()) {
        aberth_f64(&coeffs)
    } else {
        initial_points(f.deg(), f.cauchy_bound().min(1e300))
    };
    separate_duplicates(&mut z);
    let mut prec = 53u32;
    loop {
        let radii = certify(f, &z);
        let ok = radii
            .iter()
            .zip(&z)
            .all(|(r, c)| within_tol(*c, *r, tol))
            && disjoint(&z, &radii);
        if ok {
            let encl = z
                .iter()
                .zip(radii)
                .map(|(c, r)| RootEnclosure { center: *c, radius: r, multiplicity: 1, cluster: false })
                .collect();
            return Ok((encl, prec));
        }
        let next = if prec < 106 { 106 } else { prec.saturating_mul(2) };
        if next > cap {
            break;
        }
        prec = next;
        let (refined, converged) = fixed::aberth(f, &z, prec);
        z = refined;
        separate_duplicates(&mut z);
        if converged {
            // the f64 centers are now as good as they get; more bits cannot
            // help, so only clustering remains
            let radii = certify(f, &z);
            let ok = radii.iter().zip(&z).all(|(r, c)| within_tol(*c, *r, tol)) && disjoint(&z, &radii);
            if !ok {
                break;
            }
        }
    }
    let encl = clusters(f, &z);
    if encl.iter().any(|e| !e.cluster && !within_tol(e.center, e.radius, tol)) {
        return Err(Error::NonConvergence { cap });
    }
    Ok((encl, prec))
}

fn initial_points(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.7))
        .collect()
}

fn separate_duplicates(z: &mut [Complex64]) {
    for i in 0..z.len() {
        for j in 0..i {
            if z[i] == z[j] {
                let s = z[i].norm().max(1e-300) * 1e-9;
                z[i] += Complex64::new(s, s * (i as f64));
            }
        }
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Aberth–Ehrlich in double precision, Gauss–Seidel ordering.
fn aberth_f64(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let a: Vec<f64> = c.iter().map(|x| x / lead).collect();
    // Fujiwara bound halved as the starting radius
    let fuj = (1..=n)
        .map(|k| {
            let v = a[n - k].abs();
            if k == n {
                (v / 2.0).powf(1.0 / k as f64)
            } else {
                v.powf(1.0 / k as f64)
            }
        })
        .fold(0.0, f64::max);
    let mut z = initial_points(n, fuj.max(1e-3));
    let mut quiet = 0;
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for j in 0..n {
            let (p, dp) = horner(&a, z[j]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = if dp.norm() == 0.0 { p } else { p / dp };
            let s: Complex64 = (0..n).filter(|&k| k != j).map(|k| (z[j] - z[k]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[j] -= w;
                worst = worst.max(w.norm() / z[j].norm().max(1e-300));
            }
        }
        if worst < 4.0 * f64::EPSILON {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    z
}

/// Centers written as `(X + iY) / 2^e` with a shared exponent.
fn to_dyadic(zs: &[Complex64]) -> (Vec<(BigInt, BigInt)>, u32) {
    let parts: Vec<[(i64, i64); 2]> = zs
        .iter()
        .map(|z| {
            let d = |x: f64| {
                let (m, e, s) = x.integer_decode();
                (s as i64 * m as i64, e as i64)
            };
            [d(z.re), d(z.im)]
        })
        .collect();
    let e = parts
        .iter()
        .flat_map(|p| p.iter())
        .filter(|(m, _)| *m != 0)
        .map(|(_, e)| -e)
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let lift = |(m, ex): (i64, i64)| BigInt::from(m) << (ex + e as i64) as usize;
    let out = parts.into_iter().map(|[re, im]| (lift(re), lift(im))).collect();
    (out, e)
}

/// `f(c) * 2^(e * deg f)` for `c = (x + iy) / 2^e`.
fn eval_scaled(coeffs: &[BigInt], x: &BigInt, y: &BigInt, e: u32) -> (BigInt, BigInt) {
    let n = coeffs.len() - 1;
    let mut re = coeffs[n].clone();
    let mut im = BigInt::zero();
    for (step, a) in coeffs[..n].iter().rev().enumerate() {
        let nre = &re * x - &im * y;
        let nim = &re * y + &im * x;
        re = nre + (a << (e as usize * (step + 1)));
        im = nim;
    }
    (re, im)
}

fn norm_sq(v: &(BigInt, BigInt)) -> BigInt {
    &v.0 * &v.0 + &v.1 * &v.1
}

fn sqrt_up(q: BigRational) -> f64 {
    rational_to_f64(&q).sqrt() * (1.0 + ROUND_SLACK)
}

/// `n |P(c) / P'(c)|` at each center, exactly up to the final rounding.
fn certify(f: &IntPoly, z: &[Complex64]) -> Vec<f64> {
    let n = f.deg();
    let coeffs = f.coeffs();
    let deriv = f.derivative();
    let (pts, e) = to_dyadic(z);
    pts.iter()
        .map(|(x, y)| {
            let num = norm_sq(&eval_scaled(coeffs, x, y, e));
            if num.is_zero() {
                return 0.0;
            }
            let den = norm_sq(&eval_scaled(deriv.coeffs(), x, y, e)) << (2 * e as usize);
            if den.is_zero() {
                return f64::INFINITY;
            }
            n as f64 * sqrt_up(BigRational::new(num, den))
        })
        .collect()
}

fn disjoint(z: &[Complex64], r: &[f64]) -> bool {
    for i in 0..z.len() {
        for j in 0..i {
            let d = (z[i] - z[j]).norm() * (1.0 - ROUND_SLACK);
            if d <= (r[i] + r[j]) * (1.0 + ROUND_SLACK) {
                return false;
            }
        }
    }
    true
}

/// Groups roots by connected components of the Weierstrass disks
/// `D(z_j, n |W_j|)`, `W_j = f(z_j) / (lc f * prod_{k != j} (z_j - z_k))`.
/// A component made of `m` disks holds exactly `m` roots.
fn clusters(f: &IntPoly, z: &[Complex64]) -> Vec<RootEnclosure> {
    let n = z.len();
    let (pts, e) = to_dyadic(z);
    let lead = f.lead().expect("nonzero").clone();
    let rho: Vec<f64> = (0..n)
        .map(|j| {
            let num = norm_sq(&eval_scaled(f.coeffs(), &pts[j].0, &pts[j].1, e));
            if num.is_zero() {
                return 0.0;
            }
            let (mut re, mut im) = (BigInt::one(), BigInt::zero());
            for k in (0..n).filter(|&k| k != j) {
                let dx = &pts[j].0 - &pts[k].0;
                let dy = &pts[j].1 - &pts[k].1;
                let nre = &re * &dx - &im * &dy;
                im = &re * &dy + &im * &dx;
                re = nre;
            }
            let den = ((&lead * &lead) * (&re * &re + &im * &im)) << (2 * e as usize);
            if den.is_zero() {
                return f64::INFINITY;
            }
            n as f64 * sqrt_up(BigRational::new(num, den))
        })
        .collect();
    if rho.iter().any(|r| !r.is_finite()) {
        return vec![RootEnclosure {
            center: Complex64::new(0.0, 0.0),
            radius: f.cauchy_bound() * (1.0 + ROUND_SLACK),
            multiplicity: n,
            cluster: n > 1,
        }];
    }
    // union-find over overlapping disks
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..i {
            if (z[i] - z[j]).norm() * (1.0 - ROUND_SLACK) <= (rho[i] + rho[j]) * (1.0 + ROUND_SLACK) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups
        .into_values()
        .map(|members| {
            if let [j] = members.as_slice() {
                return RootEnclosure { center: z[*j], radius: rho[*j], multiplicity: 1, cluster: false };
            }
            let m = members.len() as f64;
            let center = members.iter().map(|&j| z[j]).sum::<Complex64>() / m;
            let radius = members
                .iter()
                .map(|&j| (z[j] - center).norm() + rho[j])
                .fold(0.0, f64::max)
                * (1.0 + ROUND_SLACK);
            RootEnclosure { center, radius, multiplicity: members.len(), cluster: true }
        })
        .collect()
}

/// Fixed-point complex arithmetic on `BigInt` scaled by `2^prec`.
mod fixed {
    use super::*;

    #[derive(Clone, Debug)]
    struct Fx {
        re: BigInt,
        im: BigInt,
    }

    fn from_f64(x: f64, prec: u32) -> BigInt {
        let (m, e, s) = x.integer_decode();
        let v = BigInt::from(s as i64 * m as i64);
        let shift = e as i64 + prec as i64;
        if shift >= 0 {
            v << shift as usize
        } else {
            v >> (-shift) as usize
        }
    }

    fn to_f64(v: &BigInt, prec: u32) -> f64 {
        let bits = v.bits() as i64;
        // keep 64 significant bits before the float conversion
        let drop = (bits - 64).max(0);
        let top = (v >> drop as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((drop - prec as i64) as i32)
    }

    fn mul(a: &Fx, b: &Fx, prec: u32) -> Fx {
        Fx {
            re: (&a.re * &b.re - &a.im * &b.im) >> prec as usize,
            im: (&a.re * &b.im + &a.im * &b.re) >> prec as usize,
        }
    }

    fn div(a: &Fx, b: &Fx, prec: u32) -> Option<Fx> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        let nre = (&a.re * &b.re + &a.im * &b.im) << prec as usize;
        let nim = (&a.im * &b.re - &a.re * &b.im) << prec as usize;
        Some(Fx { re: nre / &den, im: nim / &den })
    }

    fn sub(a: &Fx, b: &Fx) -> Fx {
        Fx { re: &a.re - &b.re, im: &a.im - &b.im }
    }

    fn magnitude_bits(a: &Fx) -> u64 {
        a.re.abs().max(a.im.abs()).bits()
    }

    /// Aberth iteration at `prec` bits from the given starting points.
    /// Returns rounded centers and whether the corrections became
    /// negligible at this precision.
    pub(super) fn aberth(f: &IntPoly, start: &[Complex64], prec: u32) -> (Vec<Complex64>, bool) {
        let n = f.deg();
        let one = Fx { re: BigInt::one() << prec as usize, im: BigInt::zero() };
        let coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| c << prec as usize).collect();
        let mut z: Vec<Fx> = start
            .iter()
            .map(|c| Fx { re: from_f64(c.re, prec), im: from_f64(c.im, prec) })
            .collect();
        let mut converged = false;
        for _ in 0..200 {
            let mut quiet = true;
            for j in 0..n {
                let mut p = Fx { re: coeffs[n].clone(), im: BigInt::zero() };
                let mut dp = Fx { re: BigInt::zero(), im: BigInt::zero() };
                for a in coeffs[..n].iter().rev() {
                    let t = mul(&dp, &z[j], prec);
                    dp = Fx { re: t.re + &p.re, im: t.im + &p.im };
                    let t = mul(&p, &z[j], prec);
                    p = Fx { re: t.re + a, im: t.im };
                }
                let Some(ratio) = div(&p, &dp, prec) else {
                    quiet = false;
                    continue;
                };
                let mut s = Fx { re: BigInt::zero(), im: BigInt::zero() };
                for k in (0..n).filter(|&k| k != j) {
                    if let Some(inv) = div(&one, &sub(&z[j], &z[k]), prec) {
                        s = Fx { re: s.re + inv.re, im: s.im + inv.im };
                    }
                }
                let den = sub(&one, &mul(&ratio, &s, prec));
                let Some(w) = div(&ratio, &den, prec) else {
                    quiet = false;
                    continue;
                };
                let zb = magnitude_bits(&z[j]).max(prec as u64);
                // |w| < 2^(16 - prec) max(1, |z|)
                if magnitude_bits(&w) + prec as u64 > zb + 16 {
                    quiet = false;
                }
                z[j] = sub(&z[j], &w);
            }
            if quiet {
                converged = true;
                break;
            }
        }
        let out = z
            .iter()
            .map(|v| Complex64::new(to_f64(&v.re, prec), to_f64(&v.im, prec)))
            .collect();
        (out, converged)
    }
}
