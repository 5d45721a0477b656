use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::Settings;
use crate::arith::ln_abs_rational;
use crate::error::{Error, Result};
use crate::geometry::isolate_roots_with;
use crate::poly::IntPoly;
use crate::series::TruncatedSeries;

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// `R = P / Q` with coprime integer `P, Q`, `P(0) = 0` and `P'(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalMap {
    pub p: IntPoly,
    pub q: IntPoly,
}

impl RationalMap {
    pub fn new(p: IntPoly, q: IntPoly) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !p.constant_term().is_zero() {
            return Err(Error::Precondition("numerator must vanish at 0".into()));
        }
        if !p.coeff(1).is_one() {
            return Err(Error::Precondition("numerator must have P'(0) = 1".into()));
        }
        if q.constant_term().is_zero() {
            return Err(Error::Precondition("denominator must not vanish at 0".into()));
        }
        if p.gcd(&q).deg() > 0 {
            return Err(Error::Precondition("numerator and denominator share a factor".into()));
        }
        Ok(RationalMap { p, q })
    }

    pub fn polynomial(p: IntPoly) -> Result<Self> {
        Self::new(p, IntPoly::one())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.p.eval_complex(z) / self.q.eval_complex(z)
    }

    /// `P'Q - PQ'`.
    pub fn derivative_numerator(&self) -> IntPoly {
        &(&self.p.derivative() * &self.q) - &(&self.p * &self.q.derivative())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalValue {
    #[serde(serialize_with = "ser_complex")]
    pub point: Complex64,
    pub point_radius: f64,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// First and second order propagation of the point radius, plus rounding.
    pub value_error: f64,
    pub multiplicity: usize,
}

/// Finite critical points of `R` and their images. Roots of `P'Q - PQ'`
/// shared with `Q` sit at multiple poles and are dropped.
pub fn critical_values(r: &RationalMap, settings: &Settings) -> Result<Vec<CriticalValue>> {
    let mut n = r.derivative_numerator();
    if n.is_zero() {
        return Err(Error::InternalFault("derivative numerator vanished".into()));
    }
    loop {
        let g = n.gcd(&r.q);
        if g.deg() == 0 {
            break;
        }
        n = n.exact_div(&g).ok_or_else(|| Error::InternalFault("gcd does not divide".into()))?;
    }
    if n.deg() == 0 {
        return Ok(Vec::new());
    }
    let iso = isolate_roots_with(&n, settings.tol, settings.precision_cap)?;
    let (p1, q1) = (r.p.derivative(), r.q.derivative());
    let (p2, q2) = (p1.derivative(), q1.derivative());
    Ok(iso
        .roots
        .iter()
        .map(|e| {
            let z = e.center;
            let (pv, qv) = (r.p.eval_complex(z), r.q.eval_complex(z));
            let (pd, qd) = (p1.eval_complex(z), q1.eval_complex(z));
            let (pdd, qdd) = (p2.eval_complex(z), q2.eval_complex(z));
            let value = pv / qv;
            let d1 = (pd * qv - pv * qd) / (qv * qv);
            // differentiate R Q = P twice
            let d2 = (pdd - value * qdd - 2.0 * d1 * qd) / qv;
            let rad = e.radius;
            let value_error = rad * d1.norm() + rad * rad * d2.norm() + 1e-15 * (1.0 + value.norm());
            CriticalValue { point: z, point_radius: rad, value, value_error, multiplicity: e.multiplicity }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SmaleReport {
    pub map: RationalMap,
    pub critical_values: Vec<CriticalValue>,
    /// `exp(-log 4 / (deg P + deg Q - 1))`.
    pub bound: f64,
    pub min_modulus: Option<f64>,
    /// `bound - min |R(w)|`; zero in the extremal cases.
    pub slack: Option<f64>,
    /// No critical points: nothing to assert.
    pub vacuous: bool,
    pub passed: bool,
}

/// `min |R(w)| <= 4^(-1/(deg P + deg Q - 1))` over finite critical points.
pub fn check_smale_bound(r: &RationalMap, settings: &Settings) -> Result<SmaleReport> {
    let total = r.p.deg() + r.q.deg();
    if total < 2 {
        return Err(Error::Precondition("deg P + deg Q must be at least 2".into()));
    }
    let bound = (-(4f64.ln()) / (total - 1) as f64).exp();
    let cv = critical_values(r, settings)?;
    let best = cv
        .iter()
        .map(|c| (c.value.norm() - c.value_error).max(0.0))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))));
    let min_modulus = cv.iter().map(|c| c.value.norm()).reduce(f64::min);
    Ok(SmaleReport {
        map: r.clone(),
        bound,
        slack: min_modulus.map(|m| bound - m),
        vacuous: cv.is_empty(),
        passed: best.is_none_or(|b| b <= bound + settings.tol),
        min_modulus,
        critical_values: cv,
    })
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Diagonal of `1 / (X Q(Y) - P(Y)/Y)`: `a_i = -[Y^i] Q^i / u^(i+1)` with
/// `u = P / Y`, which has constant term 1.
pub fn diagonal_series(r: &RationalMap, n: usize) -> Result<TruncatedSeries> {
    let len = n + 1;
    let u: Vec<BigInt> = r.p.coeffs()[1..].to_vec();
    if !u[0].is_one() {
        return Err(Error::Precondition("unit condition P'(0) = 1 violated".into()));
    }
    // 1/u by the recursion b_k = -sum_{j>=1} u_j b_{k-j}
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for k in 1..len {
        let mut s = BigInt::zero();
        for j in 1..=k.min(u.len() - 1) {
            s += &u[j] * &inv[k - j];
        }
        inv[k] = -s;
    }
    let step = mul_trunc(r.q.coeffs(), &inv, len);
    let mut cur = inv;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(-cur[i].clone());
        if i + 1 < len {
            cur = mul_trunc(&cur, &step, len);
        }
    }
    TruncatedSeries::from_integers(out)
}

/// `(|a_m| / |a_n|)^(1/(n - m))` with `n`, `m` the last nonzero indices in
/// the full range and its first half.
pub fn growth_radius(f: &TruncatedSeries) -> Result<f64> {
    let c = f.coeffs();
    let last_nonzero = |end: usize| (1..=end).rev().find(|&i| !c[i].is_zero());
    let n = last_nonzero(f.order());
    let m = last_nonzero(f.order() / 2);
    match (m, n) {
        (Some(m), Some(n)) if n > m => {
            Ok(((ln_abs_rational(&c[m]) - ln_abs_rational(&c[n])) / (n - m) as f64).exp())
        }
        _ => Err(Error::InsufficientCoefficients { have: c.len(), need: 16 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn z_plus_z_squared_is_extremal() {
        let s = Settings::default();
        let r = RationalMap::polynomial(p(&[0, 1, 1])).unwrap();
        let rep = check_smale_bound(&r, &s).unwrap();
        assert!(rep.passed && !rep.vacuous);
        assert!(rep.slack.unwrap().abs() <= 1e-12);
        assert!((rep.critical_values[0].value - Complex64::new(-0.25, 0.0)).norm() < 1e-15);
        let minus = check_smale_bound(&RationalMap::polynomial(p(&[0, 1, -1])).unwrap(), &s).unwrap();
        assert!(minus.slack.unwrap().abs() <= 1e-12);
    }

    #[test]
    fn z_plus_z_cubed() {
        let r = RationalMap::polynomial(p(&[0, 1, 0, 1])).unwrap();
        let rep = check_smale_bound(&r, &Settings::default()).unwrap();
        let target = 2.0 / (3.0 * 3f64.sqrt());
        assert!((rep.min_modulus.unwrap() - target).abs() < 1e-12);
        assert!((rep.bound - 0.5).abs() < 1e-15 && rep.passed);
        assert_eq!(rep.critical_values.len(), 2);
    }

    #[test]
    fn mobius_map_has_no_critical_points() {
        let r = RationalMap::new(p(&[0, 1]), p(&[1, -1])).unwrap();
        let rep = check_smale_bound(&r, &Settings::default()).unwrap();
        assert!(rep.vacuous && rep.passed && rep.min_modulus.is_none());
    }

    #[test]
    fn double_pole_is_not_critical() {
        // z / (1 - z)^2: P'Q - PQ' = (1 - z)(1 + z), the (1 - z) is a pole
        let r = RationalMap::new(p(&[0, 1]), p(&[1, -2, 1])).unwrap();
        let cv = critical_values(&r, &Settings::default()).unwrap();
        assert_eq!(cv.len(), 1);
        assert!((cv[0].point - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((cv[0].value - Complex64::new(-0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn invariants_enforced() {
        assert!(RationalMap::polynomial(p(&[1, 1])).is_err());
        assert!(RationalMap::polynomial(p(&[0, 2, 1])).is_err());
        assert!(RationalMap::new(p(&[0, 1, -1]), p(&[1, -1])).is_err());
    }

    #[test]
    fn diagonal_is_signed_central_binomial() {
        let r = RationalMap::polynomial(p(&[0, 1, 1])).unwrap();
        let d = diagonal_series(&r, 200).unwrap();
        let first: Vec<String> = d.to_strings().into_iter().take(5).collect();
        assert_eq!(first, ["-1", "2", "-6", "20", "-70"]);
        let mut c = BigInt::one();
        for i in 0..=200u32 {
            let expect = if i % 2 == 0 { -c.clone() } else { c.clone() };
            assert_eq!(d.coeff(i as usize).to_integer(), expect);
            c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 1);
        }
        let rad = growth_radius(&d).unwrap();
        assert!((rad - 0.25).abs() < 0.05 * 0.25, "{rad}");
    }

    #[test]
    fn diagonal_growth_tracks_smallest_critical_value() {
        let r = RationalMap::polynomial(p(&[0, 1, 0, 1])).unwrap();
        let d = diagonal_series(&r, 200).unwrap();
        assert!(d.is_integral());
        let rad = growth_radius(&d).unwrap();
        let target = 2.0 / (3.0 * 3f64.sqrt());
        assert!((rad - target).abs() < 0.05 * target, "{rad}");
    }
}
