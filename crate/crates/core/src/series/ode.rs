use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// `q(X) D^r + a_{r-1}(X) D^(r-1) + ... + a_0(X)` with `D = d/dX`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OdeOperator {
    pub leading: IntPoly,
    pub lower: Vec<IntPoly>,
}

/// `sum_s c_s(n) a_{n+s} = 0` for every `n >= 0`, with `a_k = 0` for `k < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    /// `(s, c_s)` with nonzero `c_s`, sorted by shift.
    pub terms: Vec<(i64, IntPoly)>,
}

/// `(n + s)(n + s - 1)...(n + s - i + 1)` as a polynomial in `n`.
fn shifted_falling_factorial(s: i64, i: usize) -> IntPoly {
    (0..i as i64).fold(IntPoly::one(), |acc, t| &acc * &IntPoly::from_i64(&[s - t, 1]))
}

impl OdeOperator {
    pub fn new(leading: IntPoly, lower: Vec<IntPoly>) -> Result<Self> {
        if leading.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if lower.is_empty() {
            return Err(Error::InvalidArgument("operator order must be at least 1".into()));
        }
        Ok(OdeOperator { leading, lower })
    }

    pub fn order(&self) -> usize {
        self.lower.len()
    }

    /// Coefficient of `D^i`.
    pub fn coefficient(&self, i: usize) -> &IntPoly {
        if i == self.order() {
            &self.leading
        } else {
            &self.lower[i]
        }
    }

    /// Annihilator of the branch `f = (A - sqrt(Q)) / B`.
    ///
    /// `f` satisfies `m1 f' + m0 f = c` with `m1 = -2QB`,
    /// `m0 = Q'B - 2QB'` and `c = Q'A - 2QA'`; when `c != 0` the right side
    /// is removed by differentiating `(m1 f' + m0 f) / c`.
    pub fn quadratic_branch(a: &IntPoly, b: &IntPoly, q: &IntPoly) -> Result<Self> {
        if b.is_zero() || q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let two = BigInt::from(2);
        let two_q = q.scale(&two);
        let m1 = -(&two_q * b);
        let m0 = &(&q.derivative() * b) - &(&two_q * &b.derivative());
        let c = &(&q.derivative() * a) - &(&two_q * &a.derivative());
        let (leading, lower) = if c.is_zero() {
            (m1, vec![m0])
        } else {
            let dc = c.derivative();
            let l2 = &c * &m1;
            let l1 = &(&c * &(&m1.derivative() + &m0)) - &(&dc * &m1);
            let l0 = &(&c * &m0.derivative()) - &(&dc * &m0);
            (l2, vec![l0, l1])
        };
        let content = lower
            .iter()
            .fold(leading.content(), |g, p| num_integer::Integer::gcd(&g, &p.content()));
        let norm = |p: &IntPoly| p.div_scalar_exact(&content).expect("content divides");
        Self::new(norm(&leading), lower.iter().map(norm).collect())
    }

    /// The recurrence on coefficients: `c X^j D^i` contributes
    /// `c (n+s)...(n+s-i+1) a_{n+s}` with `s = i - j`.
    pub fn recurrence(&self) -> Recurrence {
        let mut acc: std::collections::BTreeMap<i64, IntPoly> = Default::default();
        for i in 0..=self.order() {
            for (j, c) in self.coefficient(i).coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let s = i as i64 - j as i64;
                let term = shifted_falling_factorial(s, i).scale(c);
                let slot = acc.entry(s).or_insert_with(IntPoly::zero);
                *slot = &*slot + &term;
            }
        }
        Recurrence {
            terms: acc.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    /// `L f`, valid to order `f.order() - r`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let r = self.order();
        let n = f.order();
        if n < r {
            return Err(Error::InsufficientCoefficients { have: n + 1, need: r + 1 });
        }
        let mut out = vec![BigRational::zero(); n - r + 1];
        let mut deriv = f.coeffs().to_vec();
        for i in 0..=r {
            let c = self.coefficient(i);
            for (j, cj) in c.coeffs().iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                for (m, slot) in out.iter_mut().enumerate().skip(j) {
                    if let Some(d) = deriv.get(m - j) {
                        *slot += d * cj;
                    }
                }
            }
            // differentiate once more
            deriv = deriv
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigInt::from(k))
                .collect();
        }
        TruncatedSeries::new(out)
    }

    /// Exact check that `L f = 0` through every coefficient `f` determines.
    pub fn annihilates(&self, f: &TruncatedSeries) -> Result<bool> {
        Ok(self.apply(f)?.coeffs().iter().all(|c| c.is_zero()))
    }
}

impl Recurrence {
    pub fn max_shift(&self) -> i64 {
        self.terms.last().map_or(0, |t| t.0)
    }

    pub fn min_shift(&self) -> i64 {
        self.terms.first().map_or(0, |t| t.0)
    }

    /// Number of leading terms that no equation determines: indices below
    /// the top shift plus every `n` where the top coefficient vanishes.
    pub fn seed_length(&self) -> usize {
        let Some((smax, top)) = self.terms.last() else {
            return 0;
        };
        let smax = *smax;
        let mut need = smax.max(0) as usize;
        // nonnegative integer roots of top(n - smax) are bounded by the
        // Cauchy bound of top
        let lead = top.lead().expect("nonzero").abs();
        let bound = top
            .coeffs()
            .iter()
            .map(|c| (c.abs() / &lead).to_i64().unwrap_or(i64::MAX / 4))
            .max()
            .unwrap_or(0)
            .saturating_add(1);
        let hi = (bound + smax).min(1 << 20);
        for n in smax.max(0)..=hi {
            if top.eval(&BigInt::from(n - smax)).is_zero() {
                need = need.max(n as usize + 1);
            }
        }
        need
    }

    /// Extends `seed` to order `n`. Fails if an index left free by the
    /// recurrence lies beyond the seed.
    pub fn generate(&self, seed: &[BigRational], n: usize) -> Result<TruncatedSeries> {
        if self.terms.is_empty() {
            return Err(Error::InvalidArgument("empty recurrence".into()));
        }
        let smax = self.max_shift();
        let top = &self.terms.last().unwrap().1;
        let mut a: Vec<BigRational> = seed.iter().take(n + 1).cloned().collect();
        while a.len() <= n {
            let idx = a.len() as i64;
            let m = idx - smax;
            let lead = BigRational::from_integer(top.eval(&BigInt::from(m)));
            if m < 0 || lead.is_zero() {
                return Err(Error::InsufficientCoefficients {
                    have: seed.len(),
                    need: self.seed_length(),
                });
            }
            let mut rhs = BigRational::zero();
            for (s, c) in &self.terms[..self.terms.len() - 1] {
                let k = m + s;
                if k >= 0 {
                    rhs -= &a[k as usize] * BigRational::from_integer(c.eval(&BigInt::from(m)));
                }
            }
            a.push(rhs / lead);
        }
        TruncatedSeries::new(a)
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                let poly = c.to_string().replace('x', "n");
                let idx = match s.signum() {
                    0 => "n".to_string(),
                    1 => format!("n+{s}"),
                    _ => format!("n-{}", -s),
                };
                format!("({poly})*a({idx})")
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}
