//! Root geometry: certified roots, house, unit-circle counts, Mahler
//! measure, hedgehog capacities.

mod capacity;
mod roots;
mod unit_circle;

pub use capacity::{dubinin_bound, leja_capacity_estimate, slit_disk_radius, Hedgehog};
pub use roots::{isolate_roots, isolate_roots_with, Isolation, RootEnclosure, DEFAULT_PRECISION_CAP};
pub use unit_circle::{reciprocal_sign, sturm_count, unit_circle_roots};

use serde::Serialize;

use crate::arith::ln_abs;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// `max |alpha|` over the enclosed roots.
pub fn house_of(roots: &[RootEnclosure]) -> Interval {
    let (lo, hi) = roots
        .iter()
        .map(|e| e.modulus_bounds())
        .fold((0.0f64, 0.0f64), |(a, b), (l, h)| (a.max(l), b.max(h)));
    Interval { lo, hi }
}

/// `min |alpha|` over the enclosed roots.
pub fn min_modulus_of(roots: &[RootEnclosure]) -> Interval {
    let (lo, hi) = roots
        .iter()
        .map(|e| e.modulus_bounds())
        .fold((f64::INFINITY, f64::INFINITY), |(a, b), (l, h)| (a.min(l), b.min(h)));
    Interval { lo, hi }
}

pub fn house(p: &IntPoly, tol: f64) -> Result<Interval> {
    house_with(p, tol, DEFAULT_PRECISION_CAP)
}

pub fn house_with(p: &IntPoly, tol: f64, cap: u32) -> Result<Interval> {
    Ok(house_of(&isolate_roots_with(p, tol, cap)?.roots))
}

pub fn min_modulus(p: &IntPoly, tol: f64) -> Result<Interval> {
    Ok(min_modulus_of(&isolate_roots(p, tol)?))
}

/// `log |lc P| + sum log+ |alpha|`, from certified enclosures.
pub fn mahler_measure(p: &IntPoly, tol: f64) -> Result<Interval> {
    let roots = isolate_roots(p, tol)?;
    let lead = ln_abs(p.lead().ok_or(Error::ZeroPolynomial)?);
    let (mut lo, mut hi) = (lead, lead);
    for e in &roots {
        let (l, h) = e.modulus_bounds();
        let m = e.multiplicity as f64;
        lo += m * l.ln().max(0.0);
        hi += m * h.ln().max(0.0);
    }
    let pad = 1e-14 * (1.0 + hi.abs());
    Ok(Interval { lo: (lo - pad).max(0.0), hi: hi + pad })
}

/// `m(P) / deg P`, the Weil height of a root when `P` is irreducible.
pub fn weil_height(p: &IntPoly, tol: f64) -> Result<Interval> {
    let m = mahler_measure(p, tol)?;
    let d = p.deg() as f64;
    Ok(Interval { lo: m.lo / d, hi: m.hi / d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{cyclotomic, reciprocal};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn lehmer() -> IntPoly {
        IntPoly::from_descending_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    const LEHMER: f64 = 1.176_280_818_259_917_5;

    #[test]
    fn house_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let h = house(&IntPoly::from_i64(&[-1, -1, 1]), 1e-12).unwrap();
        assert!(h.contains(phi) && h.width() <= 2e-12 * phi);
        for n in [1, 5, 12, 30] {
            let h = house(&cyclotomic(n).unwrap(), 1e-12).unwrap();
            assert!(h.contains(1.0) && h.width() <= 2e-12 + 1e-15, "{n}: {h:?}");
        }
        assert!(house(&lehmer(), 1e-12).unwrap().contains(LEHMER));
    }

    #[test]
    fn mahler_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(mahler_measure(&IntPoly::from_i64(&[-1, -1, 1]), 1e-12).unwrap().contains(phi.ln()));
        assert!(mahler_measure(&cyclotomic(7).unwrap(), 1e-12).unwrap().contains(0.0));
        let m = mahler_measure(&lehmer(), 1e-12).unwrap();
        assert!(m.contains(LEHMER.ln()) && (m.mid() - 0.162357).abs() < 1e-6);
        // leading coefficient counts: 2X - 1 has m = log 2
        assert!(mahler_measure(&IntPoly::from_i64(&[-1, 2]), 1e-12).unwrap().contains(2f64.ln()));
        let w = weil_height(&lehmer(), 1e-12).unwrap();
        assert!(w.contains(LEHMER.ln() / 10.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        /// Roots of `P*` are the inverses of the roots of `P`, so the house
        /// of `P*` is the inverse of the smallest root modulus of `P`.
        #[test]
        fn reciprocal_house_inverts_min_modulus(c in proptest::collection::vec(-9i64..=9, 1..8)) {
            let mut c = c;
            c.push(1);
            let p = IntPoly::from_i64(&c);
            prop_assume!(!p.constant_term().is_zero());
            let h = house(&reciprocal(&p).unwrap(), 1e-12).unwrap();
            let m = min_modulus(&p, 1e-12).unwrap();
            let inv = Interval { lo: 1.0 / m.hi, hi: 1.0 / m.lo };
            prop_assert!(h.lo <= inv.hi * (1.0 + 1e-12) && inv.lo <= h.hi * (1.0 + 1e-12), "{:?} {:?}", h, inv);
        }

        #[test]
        fn mahler_is_multiplicative(a in proptest::collection::vec(-5i64..=5, 1..5), b in proptest::collection::vec(-5i64..=5, 1..5)) {
            let mut a = a;
            a.push(1);
            let mut b = b;
            b.push(2);
            let (pa, pb) = (IntPoly::from_i64(&a), IntPoly::from_i64(&b));
            let ma = mahler_measure(&pa, 1e-12).unwrap();
            let mb = mahler_measure(&pb, 1e-12).unwrap();
            let mab = mahler_measure(&(&pa * &pb), 1e-12).unwrap();
            prop_assert!((mab.mid() - ma.mid() - mb.mid()).abs() < 1e-9);
        }
    }
}
