//! Truncated power series with exact rational coefficients.

mod ode;

pub use ode::{OdeOperator, Recurrence};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{denominator_lcm, ln_abs, rat_int};
use crate::error::{Error, Result};
use crate::poly::{reciprocal, root_power_transform, IntPoly};

/// `a_0 + a_1 X + ... + a_N X^N`, known modulo `X^(N+1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InsufficientCoefficients { have: 0, need: 1 });
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_integers(coeffs: Vec<BigInt>) -> Result<Self> {
        Self::new(coeffs.into_iter().map(rat_int).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::from_integers(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `p` truncated (or zero padded) to order `n`.
    pub fn from_poly(p: &IntPoly, n: usize) -> Self {
        TruncatedSeries {
            coeffs: (0..=n).map(|i| rat_int(p.coeff(i))).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n + 1, BigRational::zero());
        TruncatedSeries { coeffs: c }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Index of the first non-integral coefficient.
    pub fn first_non_integral(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_integer())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        mul_trunc(&self.coeffs, &other.coeffs, n)
    }

    /// `self / X^k`, requiring the first `k` coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::InsufficientCoefficients { have: self.coeffs.len(), need: k + 1 });
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument(format!("series is not divisible by X^{k}")));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Multiplicative inverse, by Newton iteration `g <- g (2 - f g)`.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let mut g = vec![a0.recip()];
        let two = BigRational::from_integer(BigInt::from(2));
        for prec in newton_schedule(n) {
            let fg = mul_trunc(&self.coeffs[..=prec.min(n)], &g, prec);
            let mut corr: Vec<BigRational> = fg.coeffs.iter().map(|c| -c).collect();
            corr[0] += &two;
            g = mul_trunc(&g, &corr, prec).coeffs;
        }
        Ok(TruncatedSeries { coeffs: g })
    }

    /// Evaluates `self` as a power series in `X` at `x`, summing every stored
    /// term.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::arith::rational_to_f64(c))
    }
}

/// Orders `1, 3, 7, ..., n` reached by successive doublings of the number of
/// correct terms.
fn newton_schedule(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut len = 1usize;
    while len < n + 1 {
        len = (2 * len).min(n + 1);
        out.push(len - 1);
    }
    out
}

fn mul_trunc(a: &[BigRational], b: &[BigRational], n: usize) -> TruncatedSeries {
    let la = a.len().min(n + 1);
    let lb = b.len().min(n + 1);
    let da = denominator_lcm(&a[..la]);
    let db = denominator_lcm(&b[..lb]);
    let ai: Vec<BigInt> = a[..la].iter().map(|c| (c * &da).to_integer()).collect();
    let bi: Vec<BigInt> = b[..lb].iter().map(|c| (c * &db).to_integer()).collect();
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in ai.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in bi.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    let den = da * db;
    TruncatedSeries {
        coeffs: out
            .into_iter()
            .map(|c| BigRational::new(c, den.clone()))
            .collect(),
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + O(X^{})", self.to_strings().join(", "), self.coeffs.len())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn require_unit_constant(q: &IntPoly) -> Result<()> {
    if !q.constant_term().is_one() {
        return Err(Error::ConstantTermNotOne(q.constant_term().to_string()));
    }
    Ok(())
}

/// The series `s` with `s(0) = 1` and `s^2 = Q` to order `n`.
pub fn sqrt_series(q: &IntPoly, n: usize) -> Result<TruncatedSeries> {
    pth_root_series(q, 2, n)
}

/// The series `s` with `s(0) = 1` and `s^p = Q` to order `n`, by Newton
/// iteration `s <- ((p-1) s + Q s^(1-p)) / p`.
pub fn pth_root_series(q: &IntPoly, p: u32, n: usize) -> Result<TruncatedSeries> {
    require_unit_constant(q)?;
    if p == 0 {
        return Err(Error::InvalidArgument("root index must be positive".into()));
    }
    let target = TruncatedSeries::from_poly(q, n);
    let mut s = TruncatedSeries { coeffs: vec![BigRational::one()] };
    let pr = BigRational::from_integer(BigInt::from(p));
    let pm1 = BigRational::from_integer(BigInt::from(p - 1));
    for prec in newton_schedule(n) {
        let s_ext = s.truncate(prec);
        let mut pow = TruncatedSeries::from_poly(&IntPoly::one(), prec);
        for _ in 0..p - 1 {
            pow = pow.mul(&s_ext);
        }
        let quot = target.truncate(prec).mul(&pow.inverse()?);
        s = s_ext.scale(&pm1).add(&quot).scale(&pr.recip());
    }
    Ok(s.truncate(n))
}

/// Expansion of `sqrt(P_2*(x) P_4*(x))` in `x = 1/X`, to order `n`.
///
/// Integrality of every coefficient is checked; a fractional coefficient is
/// reported as an internal fault since it contradicts the mod 4 congruence.
pub fn sz_series(p: &IntPoly, n: usize) -> Result<TruncatedSeries> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let p2 = root_power_transform(p, 2)?;
    let p4 = root_power_transform(&p2, 2)?;
    let q = &reciprocal(&p2)? * &reciprocal(&p4)?;
    let s = sqrt_series(&q, n)?;
    if let Some(i) = s.first_non_integral() {
        return Err(Error::InternalFault(format!(
            "coefficient {i} of the radical for {p} is {}",
            s.coeffs[i]
        )));
    }
    Ok(s)
}

/// The branch `(A - sqrt(Q)) / B` of a quadratic equation, to order `n`.
/// `B` may vanish at 0 to order `j` provided `A - sqrt(Q)` does too.
pub fn quadratic_branch_series(
    a: &IntPoly,
    b: &IntPoly,
    q: &IntPoly,
    n: usize,
) -> Result<TruncatedSeries> {
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (j, b0) = b.strip_x_power();
    let num = TruncatedSeries::from_poly(a, n + j).sub(&sqrt_series(q, n + j)?);
    let num = num.shift_down(j)?;
    Ok(num.mul(&TruncatedSeries::from_poly(&b0, n).inverse()?))
}

/// Height growth estimate `max_{N/2 <= n <= N} h([a_0 : ... : a_n]) / n`.
///
/// `h` is the log of the largest entry of the coprime integer vector
/// proportional to the prefix.
pub fn series_height(f: &TruncatedSeries) -> Result<f64> {
    let len = f.coeffs.len();
    if len < 16 {
        return Err(Error::InsufficientCoefficients { have: len, need: 16 });
    }
    let n_max = f.order();
    let mut lcm = BigInt::one();
    let mut best = 0.0f64;
    let mut max_ratio: Option<BigRational> = None;
    for n in 0..=n_max {
        let c = &f.coeffs[n];
        lcm = lcm.lcm(c.denom());
        let abs = c.abs();
        if max_ratio.as_ref().is_none_or(|m| abs > *m) {
            max_ratio = Some(abs);
        }
        if n == 0 || 2 * n < n_max {
            continue;
        }
        let m = max_ratio.as_ref().unwrap();
        if m.is_zero() {
            continue;
        }
        // the coprime vector is lcm * a / g with g the gcd of lcm * a_i
        let scaled: Vec<BigInt> = f.coeffs[..=n].iter().map(|c| (c * &lcm).to_integer()).collect();
        let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let top = (m * &lcm).to_integer();
        let h = ln_abs(&top) - ln_abs(&g);
        best = best.max(h / n as f64);
    }
    Ok(best)
}
