//! Dense univariate polynomials over the integers.
//!
//! [`IntPoly`] stores coefficients in ascending order with arbitrary-precision
//! entries. The zero polynomial is the empty coefficient vector; every other
//! value has a nonzero top coefficient.

mod cyclotomic;
mod parse;
mod transforms;

pub use cyclotomic::{cyclotomic, is_cyclotomic_product};
pub use transforms::{
    is_perfect_pth_power, power_sums, reciprocal, root_power_transform,
    root_power_transform_via_power_sums, PowerSums,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::rational_to_f64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Builds from ascending `i64` coefficients.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds from descending `i64` coefficients, highest degree first.
    pub fn from_descending_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `c * X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n] = BigInt::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `P(X^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.deg() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `P(-X)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Strips the factor `X^k` of maximal `k`, returning `(k, P / X^k)`.
    pub fn strip_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| rational_to_f64(&BigRational::from_integer(c.clone())))
            .collect()
    }

    /// gcd of the coefficients (nonnegative, zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn all_divisible_by(&self, m: &BigInt) -> bool {
        self.coeffs.iter().all(|c| (c % m).is_zero())
    }

    /// Divides every coefficient by `m`, which must divide all of them.
    pub fn div_scalar_exact(&self, m: &BigInt) -> Option<Self> {
        if !self.all_divisible_by(m) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().map(|c| c / m).collect()))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero");
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return self.clone();
        }
        let lb = b.lead().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        let mut extra = self.deg() - db + 1;
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let lr = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            let shift = top - db;
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            extra -= 1;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        if extra > 0 {
            let f = num_traits::pow(lb, extra);
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        Self::new(r)
    }

    /// Exact quotient `self / d` in `Z[X]`, or `None` when `d` does not
    /// divide `self` over the integers.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let ld = d.lead().expect("nonzero");
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &qk * dc;
            }
            q[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Remainder modulo a monic divisor, exact over the integers.
    pub fn rem_monic(&self, d: &Self) -> Self {
        assert!(d.is_monic(), "rem_monic requires a monic divisor");
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let lr = r[top].clone();
            if !lr.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[top - dd + i] -= &lr * dc;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Primitive gcd over `Q[X]`, normalized to positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Resultant by the subresultant polynomial remainder sequence.
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut sign = BigInt::one();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
            if (a.deg() * b.deg()) % 2 == 1 {
                sign = -sign;
            }
        }
        if b.deg() == 0 {
            return sign * num_traits::pow(b.coeffs[0].clone(), a.deg());
        }
        let ca = a.content();
        let cb = b.content();
        let t = num_traits::pow(ca.clone(), b.deg()) * num_traits::pow(cb.clone(), a.deg());
        a = a.div_scalar_exact(&ca).expect("content divides");
        b = b.div_scalar_exact(&cb).expect("content divides");
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.deg() - b.deg();
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign = -sign;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = r.div_scalar_exact(&divisor).expect("subresultant division is exact");
            g = a.lead().expect("nonzero").clone();
            h = match delta {
                0 => h,
                1 => g.clone(),
                _ => num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1),
            };
            if b.is_zero() {
                return BigInt::zero();
            }
            if b.deg() == 0 {
                break;
            }
        }
        let da = a.deg();
        let lb = b.coeffs[0].clone();
        let hh = if da == 0 {
            BigInt::one()
        } else {
            num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
        };
        sign * t * hh
    }

    /// Squarefree decomposition (Yun). Returns pairwise coprime primitive
    /// factors `f_i` with multiplicity `i`, so that `P` is a constant times
    /// the product of `f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let c = df.exact_div(&a0).expect("gcd divides derivative");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            let nb = b.exact_div(&a).expect("gcd divides");
            let nc = d.exact_div(&a).expect("gcd divides");
            d = &nc - &nb.derivative();
            if a.deg() > 0 {
                out.push((a.primitive_part(), i));
            }
            b = nb;
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (primitive).
    pub fn squarefree_part(&self) -> Self {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return f;
        }
        f.exact_div(&f.gcd(&f.derivative()))
            .expect("gcd divides")
            .primitive_part()
    }

    /// Coefficients in descending degree as decimal strings (the wire form).
    pub fn to_descending_strings(&self) -> Vec<String> {
        self.coeffs.iter().rev().map(|c| c.to_string()).collect()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Approximate f64 coefficient bound used by root-finding heuristics.
    pub(crate) fn cauchy_bound(&self) -> f64 {
        let lead = self.lead().and_then(|l| l.abs().to_f64()).unwrap_or(1.0);
        let max = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .filter_map(|c| c.abs().to_f64())
            .fold(0.0, f64::max);
        1.0 + max / lead
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_mag { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_mag { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_descending_strings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn canonical_zero_and_degree() {
        let z = IntPoly::from_i64(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(p(&[1, 2, 3]).degree(), Some(2));
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn display_human_form() {
        assert_eq!(p(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(p(&[1, 0, -3, 2]).to_string(), "2*x^3 - 3*x^2 + 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = p(&[-1, 1]) * p(&[1, 1, 1]);
        assert_eq!(a.exact_div(&p(&[1, 1, 1])), Some(p(&[-1, 1])));
        assert_eq!(a.exact_div(&p(&[1, 2])), None);
        let g = (p(&[-1, 1]) * p(&[2, 1])).gcd(&(p(&[-1, 1]) * p(&[3, 1])));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn resultant_small_cases() {
        // Res(x^2 - 2, x - 1) = (1)^2 - 2 = -1
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[-1, 1])), BigInt::from(-1));
        // Res(x^2+1, x^2-1) = prod over roots of x^2+1 of (a^2-1) = (-2)(-2) = 4
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[-1, 0, 1])), BigInt::from(4));
        // common root
        assert_eq!(p(&[-1, 0, 1]).resultant(&p(&[-1, 1])), BigInt::zero());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        let f = p(&[-1, 1]).pow(3) * p(&[1, 1, 1]) * p(&[2, 0, 1]).pow(2);
        let mut dec = f.squarefree_decomposition();
        dec.sort_by_key(|(_, m)| *m);
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], (p(&[1, 1, 1]), 1));
        assert_eq!(dec[1], (p(&[2, 0, 1]), 2));
        assert_eq!(dec[2], (p(&[-1, 1]), 3));
        assert_eq!(f.squarefree_part(), p(&[-1, 1]) * p(&[1, 1, 1]) * p(&[2, 0, 1]));
    }

    /// Sylvester-matrix determinant over the rationals, independent of the
    /// remainder-sequence route.
    fn sylvester_resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..n {
            let mut row = vec![BigRational::zero(); size];
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                row[i + j] = BigRational::from_integer(c.clone());
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigRational::zero(); size];
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                row[i + j] = BigRational::from_integer(c.clone());
            }
            rows.push(row);
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if piv != col {
                rows.swap(piv, col);
                det = -det;
            }
            let pv = rows[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let f = &rows[r][col] / &pv;
                for c in col..size {
                    let v = &rows[col][c] * &f;
                    rows[r][c] -= v;
                }
            }
        }
        assert!(det.is_integer());
        det.to_integer()
    }

    proptest! {
        #[test]
        fn resultant_matches_sylvester(
            a in proptest::collection::vec(-9i64..=9, 2..6),
            b in proptest::collection::vec(-9i64..=9, 2..5),
        ) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(a.deg() >= 1 && b.deg() >= 1);
            prop_assert_eq!(a.resultant(&b), sylvester_resultant(&a, &b));
        }

        #[test]
        fn pseudo_division_identity(
            a in proptest::collection::vec(-9i64..=9, 1..7),
            b in proptest::collection::vec(-9i64..=9, 1..4),
        ) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            let r = a.pseudo_rem(&b);
            prop_assert!(r.is_zero() || r.deg() < b.deg());
            if a.deg() >= b.deg() && !a.is_zero() {
                let e = (a.deg() - b.deg() + 1) as u32;
                let scaled = a.scale(&num_traits::pow(b.lead().unwrap().clone(), e as usize));
                prop_assert!((&scaled - &r).exact_div(&b).is_some());
            }
        }
    }
}
