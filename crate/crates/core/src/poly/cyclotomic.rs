use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::IntPoly;
use crate::arith::{divisors, totient};
use crate::error::{Error, Result};

/// The `n`-th cyclotomic polynomial, by exact division of `X^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclotomic level must be positive".into()));
    }
    let mut table: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for d in divisors(n) {
        let mut acc = IntPoly::x_pow_minus_one(d as usize);
        for e in divisors(d) {
            if e < d {
                acc = acc.exact_div(&table[&e]).expect("cyclotomic factors divide X^d - 1");
            }
        }
        table.insert(d, acc);
    }
    Ok(table.remove(&n).unwrap())
}

/// `X^n mod m` for monic `m`, by repeated squaring.
fn x_pow_mod(n: usize, m: &IntPoly) -> IntPoly {
    let mut result = IntPoly::one().rem_monic(m);
    let mut base = IntPoly::x().rem_monic(m);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = (&result * &base).rem_monic(m);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).rem_monic(m);
        }
    }
    result
}

/// True iff every root of the monic `p` is a root of unity.
///
/// Repeatedly strips `gcd(P, X^N - 1)` for every level `N <= 2 deg(P)^2`
/// with `phi(N) <= deg P`; `phi(N) >= sqrt(N/2)` makes the bound complete.
pub fn is_cyclotomic_product(p: &IntPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if p.constant_term() == BigInt::from(0) {
        return Err(Error::ZeroConstantTerm);
    }
    let d = p.deg();
    let mut rem = p.clone();
    let bound = (2 * d * d).max(2) as u64;
    for level in 1..=bound {
        if rem.deg() == 0 {
            break;
        }
        if totient(level) as usize > d {
            continue;
        }
        loop {
            if rem.deg() == 0 {
                break;
            }
            let h = &x_pow_mod(level as usize, &rem) - &IntPoly::one();
            let g = if h.is_zero() { rem.clone() } else { rem.gcd(&h) };
            if g.deg() == 0 {
                break;
            }
            rem = rem.exact_div(&g).expect("gcd divides");
        }
    }
    Ok(rem.deg() == 0 && rem.lead().is_some_and(|c| c.is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).unwrap(), p(&[-1, 1]));
        assert_eq!(cyclotomic(5).unwrap(), p(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic(12).unwrap(), p(&[1, 0, -1, 0, 1]));
        assert!(cyclotomic(0).is_err());
    }

    #[test]
    fn cyclotomic_degree_is_totient_and_product_is_x_n_minus_one() {
        for n in 1..=60u64 {
            let phi = cyclotomic(n).unwrap();
            assert_eq!(phi.deg() as u64, totient(n), "level {n}");
            assert!(phi.is_monic());
        }
        // oracle: X^12 - 1 equals the product over divisors
        let prod = divisors(12)
            .into_iter()
            .map(|d| cyclotomic(d).unwrap())
            .fold(IntPoly::one(), |a, b| &a * &b);
        assert_eq!(prod, IntPoly::x_pow_minus_one(12));
    }

    #[test]
    fn detection_examples() {
        let f = &cyclotomic(5).unwrap() * &cyclotomic(3).unwrap();
        assert!(is_cyclotomic_product(&f).unwrap());
        assert!(!is_cyclotomic_product(&p(&[-1, -1, 1])).unwrap());
        let lehmer = IntPoly::from_descending_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert!(!is_cyclotomic_product(&lehmer).unwrap());
        // repeated factors
        let sq = cyclotomic(7).unwrap().pow(2);
        assert!(is_cyclotomic_product(&sq).unwrap());
        assert!(!is_cyclotomic_product(&(&sq * &p(&[-1, -1, 1]))).unwrap());
    }

    #[test]
    fn detection_rejects_bad_input() {
        assert_eq!(is_cyclotomic_product(&p(&[1, 2])), Err(Error::NotMonic));
        assert_eq!(is_cyclotomic_product(&p(&[0, 1, 1])), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn all_products_up_to_degree_24() {
        // levels with totient <= 24
        let levels: Vec<u64> = (1..=90).filter(|&n| totient(n) <= 24).collect();
        let mut checked = 0;
        // pairs and triples with total degree <= 24, deterministic sample
        for (i, &a) in levels.iter().enumerate() {
            for &b in &levels[i..] {
                let f = &cyclotomic(a).unwrap() * &cyclotomic(b).unwrap();
                if f.deg() > 24 {
                    continue;
                }
                assert!(is_cyclotomic_product(&f).unwrap(), "Phi_{a} Phi_{b}");
                checked += 1;
                if (a + b) % 7 == 0 {
                    for &c in levels.iter().step_by(5) {
                        let g = &f * &cyclotomic(c).unwrap();
                        if g.deg() <= 24 {
                            assert!(is_cyclotomic_product(&g).unwrap());
                        }
                    }
                }
            }
        }
        assert!(checked > 200);
    }

    #[test]
    fn near_miss_is_rejected() {
        // Phi_5 with a perturbed coefficient; [1, 1, 2, 1, 1] would be Phi_3 Phi_4
        assert!(!is_cyclotomic_product(&p(&[1, 1, 3, 1, 1])).unwrap());
        assert!(is_cyclotomic_product(&p(&[1, 1, 2, 1, 1])).unwrap());
        assert!(!is_cyclotomic_product(&p(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1])).unwrap());
    }
}
