use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_sz_bound, Classification, Settings};
use crate::error::{Error, Result};
use crate::geometry::Interval;
use crate::poly::IntPoly;

/// Real root of `X^3 - X - 1`, the smallest Pisot number.
pub const SMYTH_CONSTANT: f64 = 1.324_717_957_244_746;

const CHUNK: u64 = 256;

/// Position in the enumeration, written `n:B:index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResumeToken {
    pub degree: usize,
    pub coeff_bound: u32,
    pub index: u64,
}

impl fmt::Display for ResumeToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.degree, self.coeff_bound, self.index)
    }
}

impl FromStr for ResumeToken {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("resume token must look like n:B:index"));
        }
        Ok(ResumeToken {
            degree: parts[0].parse().map_err(|_| bad("bad degree"))?,
            coeff_bound: parts[1].parse().map_err(|_| bad("bad coefficient bound"))?,
            index: parts[2].parse().map_err(|_| bad("bad index"))?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanStatus {
    Complete,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub degree: usize,
    pub coeff_bound: u32,
    /// Size of the whole family: monic, `P(0) = +-1`, other coefficients in `[-B, B]`.
    pub total: u64,
    pub start: u64,
    pub end: u64,
    /// Representatives checked, one per orbit under `X -> -X`.
    pub examined: u64,
    /// Polynomials accounted for, counting both orbit members.
    pub covered: u64,
    pub cyclotomic: u64,
    pub satisfied: u64,
    pub counterexamples: Vec<IntPoly>,
    pub faults: Vec<IntPoly>,
    pub undecided: Vec<IntPoly>,
    pub min_house: Option<Interval>,
    pub witness: Option<IntPoly>,
    pub threshold: f64,
    /// `1.3247...^(1/n)`.
    pub smyth_line: f64,
    pub status: ScanStatus,
    pub resume: Option<String>,
}

fn decode(n: usize, b: u32, index: u64) -> Vec<i64> {
    let base = 2 * b as u64 + 1;
    let mut c = Vec::with_capacity(n + 1);
    c.push(if index.is_multiple_of(2) { 1 } else { -1 });
    let mut rest = index / 2;
    for _ in 1..n {
        c.push((rest % base) as i64 - b as i64);
        rest /= base;
    }
    c.push(1);
    c
}

/// `(-1)^n P(-X)`, still monic.
fn mirror(c: &[i64]) -> Vec<i64> {
    let n = c.len() - 1;
    c.iter().enumerate().map(|(k, &a)| if (n - k).is_multiple_of(2) { a } else { -a }).collect()
}

#[derive(Default)]
struct Partial {
    examined: u64,
    covered: u64,
    cyclotomic: u64,
    satisfied: u64,
    counterexamples: Vec<IntPoly>,
    faults: Vec<IntPoly>,
    undecided: Vec<IntPoly>,
    min: Option<(Interval, IntPoly)>,
}

impl Partial {
    fn merge(mut self, o: Partial) -> Partial {
        self.examined += o.examined;
        self.covered += o.covered;
        self.cyclotomic += o.cyclotomic;
        self.satisfied += o.satisfied;
        self.counterexamples.extend(o.counterexamples);
        self.faults.extend(o.faults);
        self.undecided.extend(o.undecided);
        if let Some((h, w)) = o.min {
            if self.min.as_ref().is_none_or(|(m, _)| h.hi < m.hi) {
                self.min = Some((h, w));
            }
        }
        self
    }
}

fn run_chunk(n: usize, b: u32, lo: u64, hi: u64, settings: &Settings) -> Result<Partial> {
    let mut acc = Partial::default();
    for index in lo..hi {
        let c = decode(n, b, index);
        let m = mirror(&c);
        if m < c {
            continue;
        }
        acc.examined += 1;
        acc.covered += if m == c { 1 } else { 2 };
        let p = IntPoly::from_i64(&c);
        match check_sz_bound(&p, settings) {
            Ok(t) => match t.classification {
                Classification::CyclotomicProduct => acc.cyclotomic += 1,
                Classification::BoundSatisfied => {
                    acc.satisfied += 1;
                    if acc.min.as_ref().is_none_or(|(h, _)| t.house.hi < h.hi) {
                        acc.min = Some((t.house, p));
                    }
                }
                Classification::Fault => {
                    if t.house.hi < t.threshold {
                        acc.counterexamples.push(p.clone());
                    }
                    acc.faults.push(p);
                }
            },
            Err(Error::Undecided(_)) => acc.undecided.push(p),
            Err(e) => return Err(e),
        }
    }
    Ok(acc)
}

/// Checks every monic degree-`n` polynomial with `P(0) = +-1` and other
/// coefficients in `[-B, B]`, one representative per `X -> -X` orbit
/// (the map preserves the house). Stops after `settings.scan_budget`
/// work units and hands back a resume token.
pub fn scan(n: usize, b: u32, settings: &Settings, resume: Option<ResumeToken>) -> Result<ScanReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("scan degree must be at least 2, got {n}")));
    }
    let total = (2 * b as u64 + 1)
        .checked_pow(n as u32 - 1)
        .and_then(|x| x.checked_mul(2))
        .ok_or_else(|| Error::BudgetExceeded(format!("family size overflows for n={n}, B={b}")))?;
    let start = match resume {
        Some(t) if t.degree != n || t.coeff_bound != b => {
            return Err(Error::InvalidArgument(format!("resume token {t} is for a different scan")));
        }
        Some(t) if t.index > total => {
            return Err(Error::InvalidArgument(format!("resume index {} beyond {total}", t.index)));
        }
        Some(t) => t.index,
        None => 0,
    };
    let allowed = (settings.scan_budget / n as u64).max(1);
    let end = start.saturating_add(allowed).min(total);
    let chunks: Vec<(u64, u64)> =
        (start..end).step_by(CHUNK as usize).map(|lo| (lo, (lo + CHUNK).min(end))).collect();
    let parts: Vec<Result<Partial>> =
        chunks.par_iter().map(|&(lo, hi)| run_chunk(n, b, lo, hi, settings)).collect();
    let mut acc = Partial::default();
    for part in parts {
        acc = acc.merge(part?);
    }
    let (status, resume) = if end < total {
        let t = ResumeToken { degree: n, coeff_bound: b, index: end };
        (ScanStatus::BudgetExceeded, Some(t.to_string()))
    } else {
        (ScanStatus::Complete, None)
    };
    let (min_house, witness) = match acc.min {
        Some((h, w)) => (Some(h), Some(w)),
        None => (None, None),
    };
    Ok(ScanReport {
        degree: n,
        coeff_bound: b,
        total,
        start,
        end,
        examined: acc.examined,
        covered: acc.covered,
        cyclotomic: acc.cyclotomic,
        satisfied: acc.satisfied,
        counterexamples: acc.counterexamples,
        faults: acc.faults,
        undecided: acc.undecided,
        min_house,
        witness,
        threshold: 2f64.powf(1.0 / (4 * n) as f64),
        smyth_line: SMYTH_CONSTANT.powf(1.0 / n as f64),
        status,
        resume,
    })
}
