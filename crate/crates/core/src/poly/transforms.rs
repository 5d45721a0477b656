use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntPoly;
use crate::arith::{exact_root, prime_factors};
use crate::error::{Error, Result};

/// Power sums `s_1..s_M` of the roots of a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSums {
    pub values: Vec<BigInt>,
}

impl PowerSums {
    /// Elementary symmetric functions `e_0 = 1, e_1, ..., e_k` recovered by
    /// the Newton-Girard identities, `k = min(M, n)`.
    pub fn elementary(&self, n: usize) -> Vec<BigInt> {
        let k_max = n.min(self.values.len());
        let mut e = vec![BigInt::one()];
        for k in 1..=k_max {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                let term = &e[k - i] * &self.values[i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            debug_assert!((&acc % BigInt::from(k)).is_zero());
            e.push(acc / BigInt::from(k));
        }
        e
    }
}

fn require_monic(p: &IntPoly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(())
}

/// Power sums of the roots via Newton's identities on the coefficients.
pub fn power_sums(p: &IntPoly, count: usize) -> Result<PowerSums> {
    require_monic(p)?;
    if count == 0 {
        return Err(Error::InvalidArgument("power sum count must be positive".into()));
    }
    let n = p.deg();
    // a[j] is the coefficient of X^(n-j)
    let a: Vec<BigInt> = (0..=n).map(|j| p.coeff(n - j)).collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for m in 1..=count {
        let mut acc = BigInt::zero();
        for j in 1..m.min(n + 1) {
            acc -= &a[j] * &s[m - j - 1];
        }
        if m <= n {
            acc -= BigInt::from(m) * &a[m];
        }
        s.push(acc);
    }
    Ok(PowerSums { values: s })
}

/// `X^n P(1/X)` with trailing zeros trimmed.
pub fn reciprocal(p: &IntPoly) -> Result<IntPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = p.coeffs().to_vec();
    c.reverse();
    Ok(IntPoly::new(c))
}

/// The monic polynomial whose roots are the `m`-th powers of the roots of
/// the monic `p`.
///
/// Each prime factor `q` of `m` is applied as the resultant
/// `Res_Y(P(Y), X - Y^q)`, evaluated exactly at `deg P + 1` integer points by
/// the subresultant sequence and interpolated back.
pub fn root_power_transform(p: &IntPoly, m: u32) -> Result<IntPoly> {
    require_monic(p)?;
    if m == 0 {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    let mut out = p.clone();
    for q in prime_factors(m as u64) {
        out = prime_root_power(&out, q as usize)?;
    }
    Ok(out)
}

fn prime_root_power(p: &IntPoly, q: usize) -> Result<IntPoly> {
    let n = p.deg();
    if n == 0 {
        return Ok(p.clone());
    }
    let xs: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|x0| {
            let mut g = IntPoly::monomial(-BigInt::one(), q);
            g = &g + &IntPoly::constant(x0.clone());
            p.resultant(&g)
        })
        .collect();
    let poly = interpolate(&xs, &ys)?;
    if poly.deg() != n || !poly.is_monic() {
        return Err(Error::InternalFault(format!(
            "root-power interpolation produced non-monic {poly}"
        )));
    }
    Ok(poly)
}

/// Newton divided-difference interpolation through integer nodes; the result
/// must have integer coefficients.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Result<IntPoly> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    // Horner on the Newton form
    let mut acc: Vec<BigRational> = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        // acc = acc * (X - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        let xi = BigRational::from_integer(xs[i].clone());
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &xi;
        }
        next[0] += &dd[i];
        acc = next;
    }
    let mut coeffs = Vec::with_capacity(acc.len());
    for c in acc {
        if !c.is_integer() {
            return Err(Error::InternalFault("interpolated coefficient is not integral".into()));
        }
        coeffs.push(c.to_integer());
    }
    Ok(IntPoly::new(coeffs))
}

/// Second, independent route to the root-power transform: power sums of
/// `P` at multiples of `m` fed back through Newton-Girard.
pub fn root_power_transform_via_power_sums(p: &IntPoly, m: u32) -> Result<IntPoly> {
    require_monic(p)?;
    if m == 0 {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    let n = p.deg();
    if n == 0 {
        return Ok(p.clone());
    }
    let s = power_sums(p, n * m as usize)?;
    let t = PowerSums {
        values: (1..=n).map(|k| s.values[k * m as usize - 1].clone()).collect(),
    };
    let e = t.elementary(n);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, ek) in e.iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek.clone() } else { -ek };
    }
    Ok(IntPoly::new(coeffs))
}

/// Returns `Q` with `Q^p = P` when it exists. For even `p` the root with
/// positive leading coefficient is returned.
///
/// The candidate is built by coefficient matching from the leading term
/// (a formal `p`-th root of the reversed, normalized polynomial) and then
/// verified by exact expansion.
pub fn is_perfect_pth_power(p: &IntPoly, prime: u32) -> Result<Option<IntPoly>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if prime < 2 {
        return Err(Error::InvalidArgument("root index must be at least 2".into()));
    }
    let n = p.deg();
    let pu = prime as usize;
    if !n.is_multiple_of(pu) {
        return Ok(None);
    }
    let lead = p.lead().unwrap();
    let Some(mut c) = exact_root(lead, prime) else {
        return Ok(None);
    };
    if prime.is_multiple_of(2) && c.is_negative() {
        c = -c;
    }
    let m = n / pu;
    let lead_q = BigRational::from_integer(lead.clone());
    let f: Vec<BigRational> = (0..=n)
        .map(|i| BigRational::from_integer(p.coeff(n - i)) / &lead_q)
        .collect();
    let pr = BigRational::from_integer(BigInt::from(prime));
    let mut s: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=m {
        let mut acc = BigRational::zero();
        for i in 1..=k.min(n) {
            let w = BigInt::from(i as i64 * (prime as i64 + 1) - prime as i64 * k as i64);
            acc += BigRational::from_integer(w) * &f[i] * &s[k - i];
        }
        s.push(acc / (&pr * BigRational::from_integer(BigInt::from(k))));
    }
    let cq = BigRational::from_integer(c);
    let mut coeffs = vec![BigInt::zero(); m + 1];
    for (k, sk) in s.iter().enumerate() {
        let v = sk * &cq;
        if !v.is_integer() {
            return Ok(None);
        }
        coeffs[m - k] = v.to_integer();
    }
    let q = IntPoly::new(coeffs);
    Ok(if q.pow(prime) == *p { Some(q) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn golden() -> IntPoly {
        p(&[-1, -1, 1])
    }

    #[test]
    fn golden_ratio_transforms() {
        assert_eq!(root_power_transform(&golden(), 2).unwrap(), p(&[1, -3, 1]));
        assert_eq!(root_power_transform(&golden(), 4).unwrap(), p(&[1, -7, 1]));
        assert_eq!(root_power_transform(&golden(), 1).unwrap(), golden());
    }

    #[test]
    fn transform_rejects_non_monic() {
        assert_eq!(root_power_transform(&p(&[1, 2]), 2), Err(Error::NotMonic));
        assert_eq!(power_sums(&p(&[1, 2]), 2), Err(Error::NotMonic));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(reciprocal(&golden()).unwrap(), p(&[1, -1, -1]));
        assert_eq!(reciprocal(&p(&[0, 2, 0, 1])).unwrap(), p(&[1, 0, 2]));
        let phi5 = p(&[1, 1, 1, 1, 1]);
        assert_eq!(reciprocal(&phi5).unwrap(), phi5);
        assert_eq!(reciprocal(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn power_sum_examples() {
        let s = power_sums(&golden(), 4).unwrap().values;
        assert_eq!(s, [1, 3, 4, 7].map(BigInt::from));
        let s = power_sums(&p(&[-1, 1]), 3).unwrap().values;
        assert_eq!(s, [1, 1, 1].map(BigInt::from));
        let s = power_sums(&p(&[1, 1, 1, 1, 1]), 5).unwrap().values;
        assert_eq!(s, [-1, -1, -1, -1, 4].map(BigInt::from));
    }

    #[test]
    fn golden_power_sums_match_numeric_roots() {
        let r = [(1.0 + 5f64.sqrt()) / 2.0, (1.0 - 5f64.sqrt()) / 2.0];
        let s = power_sums(&golden(), 12).unwrap().values;
        for (m, v) in s.iter().enumerate() {
            let num = r[0].powi(m as i32 + 1) + r[1].powi(m as i32 + 1);
            assert!((num - v.to_string().parse::<f64>().unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn perfect_power_examples() {
        let sq = p(&[-2, 1]).pow(2);
        assert_eq!(is_perfect_pth_power(&sq, 2).unwrap(), Some(p(&[-2, 1])));
        assert_eq!(is_perfect_pth_power(&p(&[1, -3, 1]), 2).unwrap(), None);
        let cube = p(&[1, -3, 1]).pow(3);
        assert_eq!(is_perfect_pth_power(&cube, 3).unwrap(), Some(p(&[1, -3, 1])));
        // negative leading coefficient under an odd root
        let neg = p(&[1, 0, -2]).pow(3);
        assert_eq!(is_perfect_pth_power(&neg, 3).unwrap(), Some(p(&[1, 0, -2])));
        // even root prefers the positive leading coefficient
        let sq2 = p(&[3, -2]).pow(2);
        assert_eq!(is_perfect_pth_power(&sq2, 2).unwrap(), Some(p(&[-3, 2])));
    }

    #[test]
    fn already_a_pth_power_examples() {
        // P = X^p - 2 has P_p = (X - 2)^p
        for prime in [2u32, 3, 5] {
            let mut c = vec![0i64; prime as usize + 1];
            c[0] = -2;
            c[prime as usize] = 1;
            let pp = root_power_transform(&p(&c), prime).unwrap();
            assert_eq!(pp, p(&[-2, 1]).pow(prime));
            assert_eq!(is_perfect_pth_power(&pp, prime).unwrap(), Some(p(&[-2, 1])));
        }
    }

    fn roots_numeric(poly: &IntPoly) -> Vec<Complex64> {
        // small companion-free Durand-Kerner, test-only
        let n = poly.deg();
        let c = poly.to_f64_coeffs();
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.3, 0.4 + k as f64 * std::f64::consts::TAU / n as f64))
            .collect();
        for _ in 0..2000 {
            for i in 0..n {
                let pv = c.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &b| a * z[i] + b);
                let mut den = Complex64::new(c[n], 0.0);
                for j in 0..n {
                    if j != i {
                        den *= z[i] - z[j];
                    }
                }
                z[i] -= pv / den;
            }
        }
        z
    }

    #[test]
    fn transform_matches_powered_numeric_roots() {
        let poly = p(&[1, -2, 0, 3, 1]);
        let p3 = root_power_transform(&poly, 3).unwrap();
        let mut want: Vec<Complex64> = roots_numeric(&poly).iter().map(|z| z.powu(3)).collect();
        let mut got = roots_numeric(&p3);
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000_007 + (z.im * 1e6).round() as i64;
        want.sort_by_key(key);
        got.sort_by_key(key);
        for (a, b) in want.iter().zip(&got) {
            assert!((a - b).norm() < 1e-7, "{a} vs {b}");
        }
    }

    fn monic(c: Vec<i64>) -> IntPoly {
        let mut c = c;
        c.push(1);
        p(&c)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn transform_composes(c in proptest::collection::vec(-6i64..=6, 1..5), a in 1u32..=8, b in 1u32..=8) {
            let poly = monic(c);
            let ab = root_power_transform(&poly, a * b).unwrap();
            let nested = root_power_transform(&root_power_transform(&poly, a).unwrap(), b).unwrap();
            prop_assert_eq!(ab, nested);
        }

        #[test]
        fn graeffe_identity(c in proptest::collection::vec(-9i64..=9, 1..7)) {
            let poly = monic(c);
            let lhs = root_power_transform(&poly, 2).unwrap().substitute_power(2);
            let mut rhs = &poly * &poly.negate_variable();
            if poly.deg() % 2 == 1 {
                rhs = -rhs;
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn power_sums_of_transform(c in proptest::collection::vec(-5i64..=5, 1..5), m in 1usize..=8) {
            let poly = monic(c);
            let k = 32 / m;
            let lhs = power_sums(&root_power_transform(&poly, m as u32).unwrap(), k).unwrap().values;
            let all = power_sums(&poly, m * k).unwrap().values;
            let rhs: Vec<BigInt> = (1..=k).map(|j| all[j * m - 1].clone()).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn two_transform_routes_agree(c in proptest::collection::vec(-9i64..=9, 1..7), m in 1u32..=9) {
            let poly = monic(c);
            prop_assert_eq!(
                root_power_transform(&poly, m).unwrap(),
                root_power_transform_via_power_sums(&poly, m).unwrap()
            );
        }

        #[test]
        fn newton_girard_round_trip(c in proptest::collection::vec(-9i64..=9, 1..7), extra in 0usize..4) {
            let poly = monic(c);
            let n = poly.deg();
            let s = power_sums(&poly, n + extra).unwrap();
            let e = s.elementary(n);
            for (k, ek) in e.iter().enumerate() {
                let want = if k % 2 == 0 { poly.coeff(n - k) } else { -poly.coeff(n - k) };
                prop_assert_eq!(ek, &want);
            }
        }

        #[test]
        fn pth_root_recovers_base(c in proptest::collection::vec(-4i64..=4, 1..7), lead in 1i64..=3, idx in 0usize..3) {
            let prime = [2u32, 3, 5][idx];
            let mut c = c;
            c.push(lead);
            let q = p(&c);
            let got = is_perfect_pth_power(&q.pow(prime), prime).unwrap().expect("constructed power");
            if prime.is_multiple_of(2) {
                prop_assert!(got == q || got == -&q);
                prop_assert!(got.lead().unwrap().is_positive());
            } else {
                prop_assert_eq!(got, q);
            }
        }
    }
}
