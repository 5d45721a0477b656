use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::Settings;
use crate::error::{Error, Result};
use crate::geometry::{
    dubinin_bound, house_of, isolate_roots_with, reciprocal_sign, unit_circle_roots, Hedgehog, Interval,
};
use crate::poly::{is_cyclotomic_product, root_power_transform, IntPoly};
use crate::rationality::{hankel_determinants, HankelReport};
use crate::series::sz_series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    CyclotomicProduct,
    BoundSatisfied,
    Fault,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::CyclotomicProduct => "cyclotomic-product",
            Classification::BoundSatisfied => "bound-satisfied",
            Classification::Fault => "fault",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SzTrace {
    pub input: IntPoly,
    pub degree: usize,
    pub p2: IntPoly,
    pub p4: IntPoly,
    pub series_integral: bool,
    pub series_order: usize,
    pub hedgehog: Hedgehog,
    pub dubinin: f64,
    pub capacity_lt_one: bool,
    pub hankel: HankelReport,
    pub house: Interval,
    /// `2^(1/(4n))`.
    pub threshold: f64,
    pub cyclotomic_product: bool,
    pub classification: Classification,
    pub precision_bits: u32,
    pub fault_reason: Option<String>,
}

fn require_monic_nonconstant(p: &IntPoly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if p.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(())
}

/// Hankel size large enough that the top third of `0..=K` lies past the
/// degree of a rational (polynomial) radical.
fn hankel_size(n: usize, order: usize) -> usize {
    (3 * n / 2 + 6).min(order.saturating_sub(1) / 2)
}

/// Runs the full chain for a monic `P`: cyclotomic test, transforms, the
/// radical series and its Hankel window, the hedgehog of squares and fourth
/// powers with its Dubinin bound, and the house against `2^(1/(4n))`.
pub fn check_sz_bound(p: &IntPoly, settings: &Settings) -> Result<SzTrace> {
    require_monic_nonconstant(p)?;
    let n = p.deg();
    let p2 = root_power_transform(p, 2)?;
    let p4 = root_power_transform(&p2, 2)?;
    let order = settings.order.max(2 * n + 4);
    let (series, series_fault) = match sz_series(p, order) {
        Ok(s) => (Some(s), None),
        Err(Error::InternalFault(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let hankel = match &series {
        Some(s) => hankel_determinants(s, hankel_size(n, order))?,
        None => HankelReport { dets: vec![], decay: vec![], verdict: crate::rationality::Verdict::Inconclusive },
    };
    let iso = isolate_roots_with(p, settings.tol, settings.precision_cap)?;
    let house = house_of(&iso.roots);
    let mut vertices = Vec::with_capacity(2 * n);
    for e in &iso.roots {
        for _ in 0..e.multiplicity {
            let sq = e.center * e.center;
            vertices.push(sq);
            vertices.push(sq * sq);
        }
    }
    let hedgehog = Hedgehog::new(vertices)?;
    let dubinin = dubinin_bound(&hedgehog);
    let capacity_lt_one = dubinin < 1.0;
    let cyclotomic_product = is_cyclotomic_product(p)?;
    let threshold = 2f64.powf(1.0 / (4 * n) as f64);
    let margin = 2.0 * settings.tol;

    let mut fault_reason = series_fault;
    let classification = if fault_reason.is_some() {
        Classification::Fault
    } else if cyclotomic_product {
        Classification::CyclotomicProduct
    } else if house.lo >= threshold - margin {
        if capacity_lt_one {
            fault_reason = Some(format!("Dubinin bound {dubinin} < 1 for a non-cyclotomic polynomial"));
            Classification::Fault
        } else {
            Classification::BoundSatisfied
        }
    } else if house.hi < threshold - margin {
        fault_reason = Some(format!("house {} below 2^(1/{})", house.hi, 4 * n));
        Classification::Fault
    } else {
        return Err(Error::Undecided(format!(
            "house interval [{}, {}] straddles 2^(1/{}) = {threshold}; retry with a smaller tolerance",
            house.lo,
            house.hi,
            4 * n
        )));
    };
    Ok(SzTrace {
        input: p.clone(),
        degree: n,
        p2,
        p4,
        series_integral: series.is_some(),
        series_order: order,
        hedgehog,
        dubinin,
        capacity_lt_one,
        hankel,
        house,
        threshold,
        cyclotomic_product,
        classification,
        precision_bits: iso.precision_bits,
        fault_reason,
    })
}

/// Spikes not contained in a longer spike on the same ray.
pub fn essential_spikes(k: &Hedgehog) -> usize {
    let v = k.vertices();
    let same_ray = |a: Complex64, b: Complex64| {
        let cross = a.re * b.im - a.im * b.re;
        let dot = a.re * b.re + a.im * b.im;
        dot > 0.0 && cross.abs() <= 1e-9 * a.norm() * b.norm()
    };
    (0..v.len())
        .filter(|&i| {
            !(0..v.len()).any(|j| {
                j != i
                    && same_ray(v[i], v[j])
                    && (v[j].norm() > v[i].norm() * (1.0 + 1e-12)
                        || (v[j].norm() >= v[i].norm() * (1.0 - 1e-12) && j < i))
            })
        })
        .count()
}

#[derive(Clone, Debug, Serialize)]
pub struct AtoralReport {
    pub input: IntPoly,
    pub degree: usize,
    pub house: Interval,
    /// `2^(1/(2n))`.
    pub threshold: f64,
    pub passed: bool,
    pub spikes_total: usize,
    pub spikes_essential: usize,
    /// `(max |alpha|^(4m) / 4)^(1/m)` with `m` the essential spike count.
    pub dubinin_essential: f64,
    pub precision_bits: u32,
}

/// The reciprocal, circle-free case, with its sharper threshold `2^(1/(2n))`.
pub fn check_atoral_bound(p: &IntPoly, settings: &Settings) -> Result<AtoralReport> {
    require_monic_nonconstant(p)?;
    let n = p.deg();
    if n < 2 {
        return Err(Error::Precondition("degree must exceed 1".into()));
    }
    if reciprocal_sign(p).is_none() {
        return Err(Error::Precondition("polynomial is not reciprocal".into()));
    }
    let on_circle = unit_circle_roots(p)?;
    if on_circle > 0 {
        return Err(Error::Precondition(format!("{on_circle} roots on the unit circle")));
    }
    if n % 2 == 1 {
        return Err(Error::Precondition("odd degree".into()));
    }
    let iso = isolate_roots_with(p, settings.tol, settings.precision_cap)?;
    let house = house_of(&iso.roots);
    let threshold = 2f64.powf(1.0 / (2 * n) as f64);
    let margin = 2.0 * settings.tol;
    let passed = if house.lo >= threshold - margin {
        true
    } else if house.hi < threshold - margin {
        false
    } else {
        return Err(Error::Undecided(format!(
            "house interval [{}, {}] straddles 2^(1/{})",
            house.lo,
            house.hi,
            2 * n
        )));
    };
    let mut vertices = Vec::with_capacity(2 * n);
    for e in &iso.roots {
        for _ in 0..e.multiplicity {
            let sq = e.center * e.center;
            vertices.push(sq);
            vertices.push(sq * sq);
        }
    }
    let hedgehog = Hedgehog::new(vertices)?;
    let m = essential_spikes(&hedgehog);
    let dubinin_essential = hedgehog.max_modulus() * 4f64.powf(-1.0 / m as f64);
    Ok(AtoralReport {
        input: p.clone(),
        degree: n,
        house,
        threshold,
        passed,
        spikes_total: 2 * n,
        spikes_essential: m,
        dubinin_essential,
        precision_bits: iso.precision_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;
    use crate::rationality::Verdict;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn sz_examples() {
        let s = Settings::default();
        let golden = check_sz_bound(&p(&[-1, -1, 1]), &s).unwrap();
        assert_eq!(golden.classification, Classification::BoundSatisfied);
        assert!((golden.threshold - 2f64.powf(0.125)).abs() < 1e-15);
        assert!(golden.series_integral && !golden.capacity_lt_one);
        assert_eq!(golden.hankel.verdict, Verdict::NonRational);

        let phi12 = check_sz_bound(&cyclotomic(12).unwrap(), &s).unwrap();
        assert_eq!(phi12.classification, Classification::CyclotomicProduct);
        assert!(phi12.capacity_lt_one);

        let lehmer = IntPoly::from_descending_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let t = check_sz_bound(&lehmer, &s).unwrap();
        assert_eq!(t.classification, Classification::BoundSatisfied);
        assert!(t.house.contains(1.176_280_818_259_917_5));
        assert!((t.threshold - 2f64.powf(1.0 / 40.0)).abs() < 1e-15);
    }

    #[test]
    fn sz_rejects_bad_input() {
        let s = Settings::default();
        assert_eq!(check_sz_bound(&p(&[1, 2]), &s).unwrap_err(), Error::NotMonic);
        assert_eq!(check_sz_bound(&p(&[0, 1, 1]), &s).unwrap_err(), Error::ZeroConstantTerm);
        assert_eq!(check_sz_bound(&p(&[1]), &s).unwrap_err(), Error::ConstantPolynomial);
    }

    #[test]
    fn hedgehog_vertices_track_the_house() {
        let t = check_sz_bound(&p(&[-1, -1, 1]), &Settings::default()).unwrap();
        assert_eq!(t.hedgehog.spikes(), 4);
        let top = t.hedgehog.max_modulus();
        assert!(top >= t.house.lo.powi(4) - 1e-9 && top <= t.house.hi.powi(4) + 1e-9);
    }

    #[test]
    fn atoral_examples() {
        let s = Settings::default();
        // t = z + 1/z with (t - 3)(t - 4): roots (3 +- sqrt 5)/2 and 2 +- sqrt 3
        let r = check_atoral_bound(&p(&[1, -7, 14, -7, 1]), &s).unwrap();
        assert!(r.passed && r.house.contains(2.0 + 3f64.sqrt()), "{:?}", r.house);
        // all roots positive: every spike lies on one ray
        assert_eq!(r.spikes_essential, 1);
        let w = check_atoral_bound(&p(&[1, 0, 11, 0, 1]), &s).unwrap();
        assert!(w.passed && w.spikes_essential <= w.degree && w.spikes_total == 8);
        let q = check_atoral_bound(&p(&[1, -3, 1]), &s).unwrap();
        assert!(q.house.contains((3.0 + 5f64.sqrt()) / 2.0) && q.passed);
        assert!(matches!(
            check_atoral_bound(&cyclotomic(5).unwrap(), &s),
            Err(Error::Precondition(m)) if m.contains("unit circle")
        ));
        assert!(matches!(
            check_atoral_bound(&p(&[-1, -1, 1]), &s),
            Err(Error::Precondition(m)) if m.contains("not reciprocal")
        ));
        // X^3 - 3X^2 - 3X + 1 = (X + 1)(X^2 - 4X + 1) is reciprocal with a root at -1
        assert!(matches!(check_atoral_bound(&p(&[1, -3, -3, 1]), &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn spike_overlap_counting() {
        let k = Hedgehog::new(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(essential_spikes(&k), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn dichotomy_on_random_monic(c in proptest::collection::vec(-3i64..=3, 1..6), sign in prop::bool::ANY) {
            let mut c = c;
            c[0] = if sign { 1 } else { -1 };
            c.push(1);
            let t = check_sz_bound(&p(&c), &Settings { order: 48, ..Settings::default() }).unwrap();
            prop_assert_ne!(t.classification, Classification::Fault);
            if t.cyclotomic_product {
                prop_assert!(t.capacity_lt_one);
            }
        }
    }
}
