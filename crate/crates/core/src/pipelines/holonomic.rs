use num_traits::Zero;
use serde::Serialize;

use super::Settings;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::series::{series_height, OdeOperator, TruncatedSeries};

/// `f = numerator / (X^j - 1)^m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialForm {
    pub numerator: IntPoly,
    pub j: usize,
    pub m: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolonomicReport {
    pub operator: OdeOperator,
    /// Distinct complex roots of the leading coefficient.
    pub k: usize,
    pub integral: bool,
    pub special_form: Option<SpecialForm>,
    pub height: Option<f64>,
    /// `1 / (150 k)`.
    pub general_bound: f64,
    /// `log 4 / k`, asserted only for integral series.
    pub integer_bound: Option<f64>,
    pub slack: f64,
    pub passed: bool,
}

const MAX_POLE_ORDER: u32 = 8;

/// Looks for `f (X^j - 1)^m` vanishing on the upper half of the stored range.
fn special_form(f: &TruncatedSeries, k: usize) -> Option<SpecialForm> {
    let n = f.order();
    let cut = n / 2;
    let tail_vanishes = |g: &TruncatedSeries| g.coeffs()[cut + 1..].iter().all(Zero::is_zero);
    let to_poly = |g: &TruncatedSeries| {
        IntPoly::new(g.coeffs()[..=cut].iter().map(|c| c.to_integer()).collect())
    };
    let integral = f.is_integral();
    if integral && tail_vanishes(f) {
        return Some(SpecialForm { numerator: to_poly(f), j: 1, m: 0 });
    }
    for j in 1..=k.max(1) {
        let base = IntPoly::x_pow_minus_one(j);
        let mut den = IntPoly::one();
        for m in 1..=MAX_POLE_ORDER {
            den = &den * &base;
            if den.deg() > cut {
                break;
            }
            let g = f.mul(&TruncatedSeries::from_poly(&den, n));
            if g.is_integral() && tail_vanishes(&g) {
                return Some(SpecialForm { numerator: to_poly(&g), j, m });
            }
        }
    }
    None
}

/// Checks that `op` annihilates `f`, then either recognizes
/// `f = p / (X^j - 1)^m` or tests the height of `f` against `1/(150k)` and,
/// for integer coefficients, `log 4 / k`.
pub fn check_holonomic_bound(f: &TruncatedSeries, op: &OdeOperator, settings: &Settings) -> Result<HolonomicReport> {
    if f.coeffs().iter().all(Zero::is_zero) {
        return Err(Error::Precondition("series is zero".into()));
    }
    if !op.annihilates(f)? {
        return Err(Error::Precondition("operator does not annihilate the series".into()));
    }
    let k = op.leading.squarefree_part().deg();
    let kf = k.max(1) as f64;
    let general_bound = 1.0 / (150.0 * kf);
    let integral = f.is_integral();
    let integer_bound = integral.then(|| 4f64.ln() / kf);
    let slack = settings.holonomic_slack;
    let special = special_form(f, k);
    let (height, passed) = if special.is_some() {
        (None, true)
    } else {
        let h = series_height(f)?;
        let need = integer_bound.unwrap_or(general_bound);
        (Some(h), h >= need * (1.0 - slack))
    };
    Ok(HolonomicReport {
        operator: op.clone(),
        k,
        integral,
        special_form: special,
        height,
        general_bound,
        integer_bound,
        slack,
        passed,
    })
}
