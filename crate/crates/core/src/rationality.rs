//! Kronecker's rationality test on truncated series: Hankel determinants,
//! Padé reconstruction and the decay of `|D_k|^(1/k^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{denominator_lcm, ln_abs_rational};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RationalWindow,
    NonRational,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::RationalWindow => "rational-window",
            Verdict::NonRational => "non-rational",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HankelReport {
    /// `D_k = det(a_{i+j+1})_{0 <= i, j <= k}` for `k = 0..=K`.
    #[serde(serialize_with = "ser_rationals")]
    pub dets: Vec<BigRational>,
    /// `|D_k|^(1/k^2)` for `k = 1..=K`.
    pub decay: Vec<f64>,
    pub verdict: Verdict,
}

fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().serialize(s)
}

/// Determinant by fraction-free elimination with row pivoting.
pub fn bareiss_determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Leading principal minors `det M[0..=k][0..=k]` of a square matrix, read off
/// a single unpivoted elimination. Stops at the first vanishing pivot and
/// returns the minors found so far.
fn leading_minors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = matrix.len();
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = m[k][k].clone();
        out.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &pivot - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = pivot;
    }
    out
}

/// `(a_{i+j+1})_{0 <= i, j <= k}` with integer entries.
pub fn hankel_matrix(a: &[BigInt], k: usize) -> Vec<Vec<BigInt>> {
    (0..=k)
        .map(|i| (0..=k).map(|j| a[i + j + 1].clone()).collect())
        .collect()
}

/// `D_0, ..., D_K` for the shifted coefficients of `f`.
pub fn hankel_dets(f: &TruncatedSeries, k_max: usize) -> Result<Vec<BigRational>> {
    let need = 2 * k_max + 2;
    if f.coeffs().len() < need {
        return Err(Error::InsufficientCoefficients { have: f.coeffs().len(), need });
    }
    let window = &f.coeffs()[..need];
    let l = denominator_lcm(&window[1..]);
    let a: Vec<BigInt> = window.iter().map(|c| (c * &l).to_integer()).collect();
    let full = hankel_matrix(&a, k_max);
    let mut ints = leading_minors(&full);
    if ints.len() < k_max + 1 {
        let start = ints.len();
        let rest: Vec<BigInt> = (start..=k_max)
            .into_par_iter()
            .map(|k| bareiss_determinant(&hankel_matrix(&a, k)))
            .collect();
        ints.extend(rest);
    }
    // entries were scaled by l, so D_k picks up l^(k+1)
    let mut scale = BigInt::one();
    Ok(ints
        .into_iter()
        .map(|d| {
            scale *= &l;
            BigRational::new(d, scale.clone())
        })
        .collect())
}

fn decay_of(dets: &[BigRational]) -> Vec<f64> {
    dets.iter()
        .enumerate()
        .skip(1)
        .map(|(k, d)| {
            if d.is_zero() {
                0.0
            } else {
                (ln_abs_rational(d) / (k * k) as f64).exp()
            }
        })
        .collect()
}

/// First index of the top third of `0..=K`.
fn window_start(k_max: usize) -> usize {
    (2 * k_max).div_ceil(3)
}

pub fn hankel_determinants(f: &TruncatedSeries, k_max: usize) -> Result<HankelReport> {
    let dets = hankel_dets(f, k_max)?;
    let tail = &dets[window_start(k_max)..];
    let verdict = if tail.iter().all(|d| d.is_zero()) {
        Verdict::RationalWindow
    } else if tail.iter().all(|d| !d.is_zero()) {
        Verdict::NonRational
    } else {
        Verdict::Inconclusive
    };
    Ok(HankelReport { decay: decay_of(&dets), dets, verdict })
}

type QPoly = Vec<BigRational>;

fn qtrim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn qdeg(p: &QPoly) -> Option<usize> {
    p.len().checked_sub(1)
}

fn qmul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(out)
}

fn qsub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    qtrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn qdivrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = qdeg(b).expect("nonzero divisor");
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    let lead = b[db].clone();
    while let Some(dr) = qdeg(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] -= &c * bi;
        }
        q[dr - db] = c;
        r = qtrim(r);
    }
    (qtrim(q), r)
}

/// Finds coprime `(p, q)` with `q(0) > 0`, both of degree at most `dmax`,
/// such that `p / q` agrees with `f` through every stored coefficient.
pub fn reconstruct_rational(f: &TruncatedSeries, dmax: usize) -> Option<(IntPoly, IntPoly)> {
    let m = 2 * dmax + 1;
    if f.coeffs().len() < m + 1 {
        return None;
    }
    let mut r0: QPoly = vec![BigRational::zero(); m + 1];
    r0[m] = BigRational::one();
    let mut r1: QPoly = qtrim(f.coeffs()[..m].to_vec());
    let mut t0: QPoly = Vec::new();
    let mut t1: QPoly = vec![BigRational::one()];
    while qdeg(&r1).is_some_and(|d| d > dmax) {
        let (q, r) = qdivrem(&r0, &r1);
        let t = qsub(&t0, &qmul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_empty() || qdeg(&t1)? > dmax || t1[0].is_zero() {
        return None;
    }
    // common scale for both halves
    let l = denominator_lcm(r1.iter().chain(t1.iter()));
    let ints = |p: &QPoly| IntPoly::new(p.iter().map(|c| (c * &l).to_integer()).collect());
    let mut num = ints(&r1);
    let mut den = ints(&t1);
    let g = num.gcd(&den);
    if g.deg() > 0 {
        num = num.exact_div(&g)?;
        den = den.exact_div(&g)?;
    }
    let c = num_integer::Integer::gcd(&num.content(), &den.content());
    if !c.is_zero() && !c.is_one() {
        num = num.div_scalar_exact(&c)?;
        den = den.div_scalar_exact(&c)?;
    }
    if den.constant_term().is_negative() {
        num = -num;
        den = -den;
    }
    // residual over all available coefficients
    let n = f.order();
    let lhs = TruncatedSeries::from_poly(&den, n).mul(f);
    if lhs != TruncatedSeries::from_poly(&num, n) {
        return None;
    }
    Some((num, den))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub decay: Vec<f64>,
    pub final_value: f64,
    pub capacity_bound: f64,
    pub slack: f64,
    /// `final_value <= capacity_bound * slack`. Diagnostic only.
    pub within: bool,
}

/// Compares `|D_k|^(1/k^2)` against a capacity bound `d`.
pub fn decay_against_capacity(
    f: &TruncatedSeries,
    d: f64,
    k_max: usize,
    slack: f64,
) -> Result<DecayReport> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("decay needs K >= 1".into()));
    }
    let decay = decay_of(&hankel_dets(f, k_max)?);
    let final_value = *decay.last().unwrap();
    Ok(DecayReport {
        within: final_value <= d * slack,
        final_value,
        capacity_bound: d,
        slack,
        decay,
    })
}
