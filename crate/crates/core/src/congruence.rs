//! Prime-power congruences between root-power transforms, and mod 4 square
//! certificates.
//!
//! For a monic integer `P`, `P_4 - P_2` is divisible by 4 and, more generally,
//! `P_{p^2} - P_p` is divisible by `p^2` for every prime `p`. These
//! congruences are what make the radicals built from `P_p` and `P_{p^2}` have
//! integral Taylor expansions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime, valuation};
use crate::error::{Error, Result};
use crate::poly::{root_power_transform, IntPoly};

/// `Q = U^2 + 4V` with `U(0) = 1`, `V(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCertificate {
    pub u: IntPoly,
    pub v: IntPoly,
}

impl SquareCertificate {
    pub fn reconstruct(&self) -> IntPoly {
        &(&self.u * &self.u) + &self.v.scale(&BigInt::from(4))
    }
}

/// Difference `P_{p^2} - P_p` together with its quotient by `p^2` when the
/// division is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceWitness {
    pub prime: u64,
    pub modulus: String,
    pub low: IntPoly,
    pub high: IntPoly,
    pub difference: IntPoly,
    pub quotient: Option<IntPoly>,
}

impl CongruenceWitness {
    pub fn holds(&self) -> bool {
        self.quotient.is_some()
    }
}

/// Computes `P_{p^2} - P_p` and whether `p^2` divides it.
pub fn congruence_witness(p: &IntPoly, prime: u64) -> Result<CongruenceWitness> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let low = root_power_transform(p, prime as u32)?;
    let high = root_power_transform(&low, prime as u32)?;
    let difference = &high - &low;
    let modulus = BigInt::from(prime * prime);
    let quotient = difference.div_scalar_exact(&modulus);
    Ok(CongruenceWitness {
        prime,
        modulus: modulus.to_string(),
        low,
        high,
        difference,
        quotient,
    })
}

/// `P_4 ≡ P_2 (mod 4)`.
pub fn verify_mod4(p: &IntPoly) -> Result<bool> {
    Ok(congruence_witness(p, 2)?.holds())
}

/// `P_{p^2} ≡ P_p (mod p^2)` coefficientwise.
pub fn verify_prime_congruence(p: &IntPoly, prime: u64) -> Result<bool> {
    Ok(congruence_witness(p, prime)?.holds())
}

/// Finds `U, V` with `Q = U^2 + 4V`, `U(0) = 1`, `V(0) = 0`, or `None` if
/// `Q mod 4` is not the square of a polynomial with unit constant term.
///
/// The square root in `(Z/4)[X]` is extracted coefficient by coefficient:
/// `2 u_k ≡ q_k - sum_{0<i<k} u_i u_{k-i} (mod 4)` fixes `u_k` modulo 2, and
/// the representative in `{-1, 0, 1}` carrying the sign of the half
/// difference is kept.
pub fn certify_square_mod4(q: &IntPoly) -> Result<Option<SquareCertificate>> {
    if !q.constant_term().is_one() {
        return Err(Error::ConstantTermNotOne(q.constant_term().to_string()));
    }
    let d = q.deg();
    let half = d / 2;
    let four = BigInt::from(4);
    let mut u: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=half {
        let mut s = BigInt::zero();
        for i in 1..k {
            s += &u[i] * &u[k - i];
        }
        let t: BigInt = q.coeff(k) - s;
        if t.is_odd() {
            return Ok(None);
        }
        let h: BigInt = t / 2;
        let uk = if h.is_even() {
            BigInt::zero()
        } else if h.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        u.push(uk);
    }
    let u = IntPoly::new(u);
    let rest = q - &(&u * &u);
    match rest.div_scalar_exact(&four) {
        Some(v) => Ok(Some(SquareCertificate { u, v })),
        None => Ok(None),
    }
}

/// `(|c_0|_l / max_i |c_i|_l)^(p^(e+1))`, the radius of the `l`-adic disk on
/// which the `p`-th root series built from `P` converges.
pub fn v_adic_radius(p: &IntPoly, ell: u64, e: u32, prime: u64) -> Result<BigRational> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if !(1..=2).contains(&e) {
        return Err(Error::InvalidArgument(format!("e must be 1 or 2, got {e}")));
    }
    let c0 = p.constant_term();
    if c0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let v0 = valuation(&c0, ell);
    let vmin = p
        .coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| valuation(c, ell))
        .min()
        .expect("nonzero polynomial");
    // |c0| / max|ci| = ell^(vmin - v0) <= 1
    let exp = (prime as u32).pow(e + 1);
    let base = num_traits::pow(BigInt::from(ell), ((v0 - vmin) * exp) as usize);
    Ok(BigRational::new(BigInt::one(), base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn mod4_examples() {
        let w = congruence_witness(&p(&[-1, -1, 1]), 2).unwrap();
        assert_eq!(w.difference, p(&[0, -4]));
        assert_eq!(w.quotient, Some(p(&[0, -1])));
        assert!(verify_mod4(&p(&[-1, 1])).unwrap());
    }

    #[test]
    fn prime_congruence_examples() {
        assert!(verify_prime_congruence(&p(&[-1, -1, 1]), 2).unwrap());
        let w = congruence_witness(&p(&[-1, -1, 1]), 3).unwrap();
        assert!(w.holds());
        // trace coefficient: L_9 - L_3 = 76 - 4 = 72 = 8 * 9
        assert_eq!(w.difference.coeff(1), BigInt::from(-72));
        assert!(verify_prime_congruence(&p(&[-1, 1]), 5).unwrap());
    }

    #[test]
    fn congruence_input_validation() {
        assert_eq!(verify_prime_congruence(&p(&[-1, 1]), 4), Err(Error::NotPrime(4)));
        assert_eq!(verify_mod4(&p(&[1, 3])), Err(Error::NotMonic));
    }

    #[test]
    fn square_certificates_of_classical_radicands() {
        // Catalan, large Schroeder, Motzkin
        let cat = certify_square_mod4(&p(&[1, -4])).unwrap().unwrap();
        assert_eq!((cat.u.clone(), cat.v.clone()), (p(&[1]), p(&[0, -1])));
        let sch = certify_square_mod4(&p(&[1, -6, 1])).unwrap().unwrap();
        assert_eq!((sch.u.clone(), sch.v.clone()), (p(&[1, -1]), p(&[0, -1])));
        let mot = certify_square_mod4(&p(&[1, -2, -3])).unwrap().unwrap();
        assert_eq!((mot.u.clone(), mot.v.clone()), (p(&[1, -1]), p(&[0, 0, -1])));
        for (c, q) in [(cat, p(&[1, -4])), (sch, p(&[1, -6, 1])), (mot, p(&[1, -2, -3]))] {
            assert_eq!(c.reconstruct(), q);
        }
    }

    #[test]
    fn non_squares_mod4() {
        assert_eq!(certify_square_mod4(&p(&[1, 1])).unwrap(), None);
        assert_eq!(certify_square_mod4(&p(&[1, 2])).unwrap(), None);
        assert_eq!(certify_square_mod4(&p(&[1, 0, 2])).unwrap(), None);
        assert!(certify_square_mod4(&p(&[3, 1])).is_err());
    }

    #[test]
    fn v_adic_examples() {
        assert_eq!(v_adic_radius(&p(&[3, 1]), 3, 1, 2).unwrap(), rat(1, 81));
        assert_eq!(v_adic_radius(&p(&[-1, -1, 1]), 5, 1, 2).unwrap(), rat(1, 1));
        assert_eq!(v_adic_radius(&p(&[1, 2]), 2, 2, 2).unwrap(), rat(1, 1));
        assert_eq!(v_adic_radius(&p(&[12, 1]), 2, 2, 3).unwrap(), rat(1, 1 << 54));
        assert_eq!(v_adic_radius(&p(&[0, 1]), 2, 1, 2), Err(Error::ZeroConstantTerm));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn congruences_hold_for_monic(c in proptest::collection::vec(-20i64..=20, 1..9), idx in 0usize..3) {
            let mut c = c;
            c.push(1);
            let poly = p(&c);
            prop_assert!(verify_mod4(&poly).unwrap());
            prop_assert!(verify_prime_congruence(&poly, [2, 3, 5][idx]).unwrap());
        }

        #[test]
        fn certificates_are_self_checking(c in proptest::collection::vec(-12i64..=12, 1..8)) {
            let mut c = c;
            c.insert(0, 1);
            let q = p(&c);
            if let Some(cert) = certify_square_mod4(&q).unwrap() {
                prop_assert_eq!(cert.reconstruct(), q);
                prop_assert!(cert.u.constant_term().is_one());
                prop_assert!(cert.v.constant_term().is_zero());
            }
        }

        #[test]
        fn squares_are_always_certified(c in proptest::collection::vec(-6i64..=6, 0..5), w in proptest::collection::vec(-6i64..=6, 0..8)) {
            // U^2 + 4W with U(0) = 1
            let mut c = c;
            c.insert(0, 1);
            let u = p(&c);
            let mut w = w;
            if !w.is_empty() { w[0] = 0; }
            let q = &(&u * &u) + &p(&w).scale(&BigInt::from(4));
            prop_assert!(certify_square_mod4(&q).unwrap().is_some());
        }
    }
}
