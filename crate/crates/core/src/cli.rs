//! Command-line front end. Every subcommand prints one JSON document;
//! exact integers and rationals appear as decimal strings, floats as floats.
//!
//! Exit codes: 0 success, 1 failed assertion or fault, 2 usage error,
//! 3 undecided at the requested precision.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::congruence::{certify_square_mod4, congruence_witness};
use crate::error::{Error, Result};
use crate::geometry::{
    dubinin_bound, isolate_roots_with, leja_capacity_estimate, mahler_measure, house_with, slit_disk_radius,
    Hedgehog,
};
use crate::pipelines::{
    check_atoral_bound, check_holonomic_bound, check_smale_bound, check_sz_bound, critical_values,
    diagonal_series, growth_radius, matveev_crossover, matveev_table, scan, Classification, RationalMap,
    ResumeToken, ScanStatus, Settings,
};
use crate::poly::IntPoly;
use crate::rationality::{hankel_determinants, reconstruct_rational};
use crate::series::{pth_root_series, quadratic_branch_series, sz_series, OdeOperator, TruncatedSeries};

#[derive(Parser, Debug)]
#[command(name = "szbound", version, about = "Certified checks around the Schinzel-Zassenhaus bound")]
struct Cli {
    /// Root enclosure radius target (relative for roots of modulus above 1).
    #[arg(long, global = true, env = "SZ_TOL", default_value_t = 1e-12)]
    tol: f64,
    /// Truncation order for power series.
    #[arg(long, global = true, env = "SZ_ORDER", default_value_t = 128)]
    order: usize,
    /// Largest working precision for root refinement, in bits.
    #[arg(long, global = true, env = "SZ_PRECISION_CAP", default_value_t = 4096)]
    precision_cap: u32,
    /// Slack multiplier for Hankel decay against capacity.
    #[arg(long, global = true, env = "SZ_SLACK", default_value_t = 1.5)]
    slack: f64,
    /// Relative shortfall allowed by the holonomic height bounds.
    #[arg(long, global = true, env = "SZ_HOLONOMIC_SLACK", default_value_t = 0.05)]
    holonomic_slack: f64,
    /// Work units a scan may spend before handing back a resume token.
    #[arg(long, global = true, env = "SZ_BUDGET", default_value_t = 50_000_000)]
    budget: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "SZ_JOBS")]
    jobs: Option<usize>,
    /// Write a run manifest to this path.
    #[arg(long, global = true, env = "SZ_MANIFEST")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// P_{p^2} - P_p and its quotient by p^2, plus a mod 4 square certificate.
    Congruence {
        poly: String,
        #[arg(long = "prime", default_values_t = [2u64, 3, 5])]
        primes: Vec<u64>,
    },
    /// Expand Q^(1/p) or sqrt(P_2* P_4*) as a power series.
    Expand {
        #[arg(long, conflicts_with = "sz", required_unless_present = "sz")]
        sqrt: Option<String>,
        #[arg(long)]
        sz: Option<String>,
        /// Root index used with --sqrt.
        #[arg(long, default_value_t = 2)]
        root: u32,
        #[arg(short = 'n', long = "terms", default_value_t = 16)]
        n: usize,
        #[arg(long)]
        assert_integral: bool,
    },
    /// Hankel determinants and rational reconstruction of sqrt(P_2* P_4*).
    Rationality {
        poly: String,
        /// Treat the polynomial as a radicand and expand its square root instead.
        #[arg(long)]
        sqrt: bool,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Certified root enclosures.
    Roots { poly: String },
    /// House and Mahler measure.
    House { poly: String },
    /// Dubinin bound and Leja estimate for a hedgehog.
    Capacity {
        /// JSON list of [re, im] vertices.
        #[arg(long, conflicts_with = "regular", required_unless_present = "regular")]
        vertices: Option<String>,
        /// Number of equally spaced spikes.
        #[arg(long)]
        regular: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 256)]
        npts: usize,
        /// Slit disk mapping radius for inner radius b, outer radius S, k slits.
        #[arg(long, num_args = 3, value_names = ["B", "S", "K"])]
        slit: Option<Vec<f64>>,
    },
    /// Trace the house bound 2^(1/(4n)) for a monic polynomial.
    SzCheck { poly: String },
    /// House bound 2^(1/(2n)) for reciprocal polynomials without unimodular roots.
    AtoralCheck { poly: String },
    /// Exhaustive check over a box of monic polynomials with P(0) = +-1.
    Scan {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        coeff_bound: u32,
        #[arg(long)]
        resume: Option<String>,
    },
    /// Height growth of a holonomic series against its singularity count.
    HolonomicCheck {
        /// Series sqrt(Q).
        #[arg(long, group = "series")]
        sqrt: Option<String>,
        /// Series (A - sqrt(Q)) / B with its own annihilator.
        #[arg(long, num_args = 3, value_names = ["A", "B", "Q"], group = "series")]
        branch: Option<Vec<String>>,
        /// Series num / den.
        #[arg(long, requires = "den", group = "series")]
        num: Option<String>,
        #[arg(long)]
        den: Option<String>,
        /// Operator coefficients from the highest derivative down.
        #[arg(long = "op")]
        op: Vec<String>,
    },
    /// Critical points and values of P / Q.
    CriticalValues {
        poly: String,
        #[arg(long)]
        den: Option<String>,
    },
    /// min |R(w)| over critical points against 4^(-1/(deg P + deg Q - 1)).
    SmaleCheck {
        poly: String,
        #[arg(long)]
        den: Option<String>,
    },
    /// Diagonal of 1 / (X Q(Y) - P(Y)/Y) and its growth radius.
    Diagonal {
        poly: String,
        #[arg(long)]
        den: Option<String>,
        #[arg(short = 'n', long = "terms", default_value_t = 200)]
        n: usize,
    },
    /// Compare 3 log(n/2)/n^2 with log 2/(4n).
    Matveev {
        #[arg(long, default_value_t = 55)]
        from: usize,
        #[arg(long, default_value_t = 62)]
        to: usize,
    },
    /// Re-run a manifest and check the output digest.
    Replay { manifest: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Congruence { .. } => "congruence",
            Command::Expand { .. } => "expand",
            Command::Rationality { .. } => "rationality",
            Command::Roots { .. } => "roots",
            Command::House { .. } => "house",
            Command::Capacity { .. } => "capacity",
            Command::SzCheck { .. } => "sz-check",
            Command::AtoralCheck { .. } => "atoral-check",
            Command::Scan { .. } => "scan",
            Command::HolonomicCheck { .. } => "holonomic-check",
            Command::CriticalValues { .. } => "critical-values",
            Command::SmaleCheck { .. } => "smale-check",
            Command::Diagonal { .. } => "diagonal",
            Command::Matveev { .. } => "matveev",
            Command::Replay { .. } => "replay",
        }
    }
}

/// Everything needed to reproduce one run byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    inputs: Command,
    pub config: Settings,
    /// Hex SHA-256 of the printed output.
    pub outcome: String,
    pub exit_code: i32,
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Undecided(_) | Error::NonConvergence { .. } => 3,
        Error::InternalFault(_) | Error::BudgetExceeded(_) | Error::InsufficientCoefficients { .. } => 1,
        _ => 2,
    }
}

fn poly(s: &str) -> Result<IntPoly> {
    s.parse()
}

fn rational_map(p: &str, den: &Option<String>) -> Result<RationalMap> {
    let q = match den {
        Some(d) => poly(d)?,
        None => IntPoly::one(),
    };
    RationalMap::new(poly(p)?, q)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn series_json(f: &TruncatedSeries) -> Value {
    json!({
        "coefficients": f.to_strings(),
        "integral": f.is_integral(),
        "first_non_integral": f.first_non_integral(),
    })
}

fn execute(cmd: &Command, s: &Settings) -> Result<(i32, Value)> {
    match cmd {
        Command::Congruence { poly: p, primes } => {
            let p = poly(p)?;
            let witnesses = primes.iter().map(|&q| congruence_witness(&p, q)).collect::<Result<Vec<_>>>()?;
            let ok = witnesses.iter().all(|w| w.holds());
            let p2 = crate::poly::root_power_transform(&p, 2)?;
            let p4 = crate::poly::root_power_transform(&p2, 2)?;
            let radicand = &crate::poly::reciprocal(&p2)? * &crate::poly::reciprocal(&p4)?;
            let certificate = certify_square_mod4(&radicand)?;
            Ok((i32::from(!ok), json!({ "holds": ok, "witnesses": to_value(&witnesses), "square_certificate": to_value(&certificate) })))
        }
        Command::Expand { sqrt, sz, root, n, assert_integral } => {
            let f = match (sqrt, sz) {
                (Some(q), _) => pth_root_series(&poly(q)?, *root, *n)?,
                (None, Some(p)) => match sz_series(&poly(p)?, *n) {
                    Ok(f) => f,
                    Err(Error::InternalFault(msg)) => {
                        return Ok((1, json!({ "integral": false, "fault": msg })));
                    }
                    Err(e) => return Err(e),
                },
                (None, None) => return Err(Error::InvalidArgument("one of --sqrt or --sz is required".into())),
            };
            let code = i32::from(*assert_integral && !f.is_integral());
            Ok((code, series_json(&f)))
        }
        Command::Rationality { poly: p, sqrt, k, dmax } => {
            let p = poly(p)?;
            let order = s.order;
            let f = if *sqrt { pth_root_series(&p, 2, order)? } else { sz_series(&p, order)? };
            let k = k.unwrap_or(((3 * p.deg()) / 2 + 6).min(order.saturating_sub(1) / 2));
            let report = hankel_determinants(&f, k)?;
            let dmax = dmax.unwrap_or(p.deg().max(1));
            let rational = reconstruct_rational(&f, dmax)
                .map(|(num, den)| json!({ "numerator": to_value(&num), "denominator": to_value(&den) }));
            let mut v = to_value(&report);
            v["rational"] = rational.unwrap_or(Value::Null);
            v["k"] = json!(k);
            Ok((0, v))
        }
        Command::Roots { poly: p } => {
            let iso = isolate_roots_with(&poly(p)?, s.tol, s.precision_cap)?;
            Ok((0, to_value(&iso)))
        }
        Command::House { poly: p } => {
            let p = poly(p)?;
            let h = house_with(&p, s.tol, s.precision_cap)?;
            let m = mahler_measure(&p, s.tol)?;
            Ok((0, json!({ "house": to_value(&h), "mahler_measure": to_value(&m) })))
        }
        Command::Capacity { vertices, regular, length, npts, slit } => {
            let k = match (vertices, regular) {
                (Some(v), _) => {
                    let pts: Vec<[f64; 2]> = serde_json::from_str(v)
                        .map_err(|e| Error::InvalidArgument(format!("vertices must be a JSON list of [re, im]: {e}")))?;
                    Hedgehog::new(pts.iter().map(|&[a, b]| Complex64::new(a, b)).collect())?
                }
                (None, Some(m)) => Hedgehog::regular(*m, *length)?,
                (None, None) => return Err(Error::InvalidArgument("one of --vertices or --regular is required".into())),
            };
            let mut v = json!({
                "hedgehog": to_value(&k),
                "dubinin_bound": dubinin_bound(&k),
                "leja_estimate": leja_capacity_estimate(&k, *npts)?,
                "npts": npts,
            });
            if let Some(sl) = slit {
                let kk = sl[2];
                if kk.fract() != 0.0 || kk < 1.0 {
                    return Err(Error::InvalidArgument(format!("slit count must be a positive integer, got {kk}")));
                }
                v["slit_disk_radius"] = json!(slit_disk_radius(sl[0], sl[1], kk as u32)?);
            }
            Ok((0, v))
        }
        Command::SzCheck { poly: p } => {
            let t = check_sz_bound(&poly(p)?, s)?;
            Ok((i32::from(t.classification == Classification::Fault), to_value(&t)))
        }
        Command::AtoralCheck { poly: p } => {
            let r = check_atoral_bound(&poly(p)?, s)?;
            Ok((i32::from(!r.passed), to_value(&r)))
        }
        Command::Scan { degree, coeff_bound, resume } => {
            let token = resume.as_deref().map(str::parse::<ResumeToken>).transpose()?;
            let r = scan(*degree, *coeff_bound, s, token)?;
            let code = if !r.counterexamples.is_empty() || !r.faults.is_empty() {
                1
            } else if !r.undecided.is_empty() {
                3
            } else if r.status == ScanStatus::BudgetExceeded {
                1
            } else {
                0
            };
            Ok((code, to_value(&r)))
        }
        Command::HolonomicCheck { sqrt, branch, num, den, op } => {
            let order = s.order;
            let explicit_op = || -> Result<OdeOperator> {
                if op.len() < 2 {
                    return Err(Error::InvalidArgument("--op must be given at least twice, leading coefficient first".into()));
                }
                let mut cs = op.iter().map(|c| poly(c)).collect::<Result<Vec<_>>>()?;
                let leading = cs.remove(0);
                cs.reverse();
                OdeOperator::new(leading, cs)
            };
            let (f, l) = match (sqrt, branch, num) {
                (Some(q), _, _) => (pth_root_series(&poly(q)?, 2, order)?, explicit_op()?),
                (None, Some(abq), _) => {
                    let (a, b, q) = (poly(&abq[0])?, poly(&abq[1])?, poly(&abq[2])?);
                    let l = if op.is_empty() { OdeOperator::quadratic_branch(&a, &b, &q)? } else { explicit_op()? };
                    (quadratic_branch_series(&a, &b, &q, order)?, l)
                }
                (None, None, Some(nm)) => {
                    let d = poly(den.as_deref().unwrap_or("1"))?;
                    let f = TruncatedSeries::from_poly(&poly(nm)?, order).mul(&TruncatedSeries::from_poly(&d, order).inverse()?);
                    (f, explicit_op()?)
                }
                _ => return Err(Error::InvalidArgument("one of --sqrt, --branch or --num is required".into())),
            };
            let r = check_holonomic_bound(&f, &l, s)?;
            Ok((i32::from(!r.passed), to_value(&r)))
        }
        Command::CriticalValues { poly: p, den } => {
            let r = rational_map(p, den)?;
            Ok((0, json!({ "map": to_value(&r), "critical_values": to_value(&critical_values(&r, s)?) })))
        }
        Command::SmaleCheck { poly: p, den } => {
            let r = check_smale_bound(&rational_map(p, den)?, s)?;
            Ok((i32::from(!r.passed), to_value(&r)))
        }
        Command::Diagonal { poly: p, den, n } => {
            let f = diagonal_series(&rational_map(p, den)?, *n)?;
            let mut v = series_json(&f);
            v["growth_radius"] = growth_radius(&f).map_or(Value::Null, |r| json!(r));
            Ok((i32::from(!f.is_integral()), v))
        }
        Command::Matveev { from, to } => {
            let table = matveev_table(*from, *to)?;
            let crossover = matveev_crossover(10_000)?;
            let consistent = table.iter().all(|r| r.ours_stronger == (r.n >= crossover));
            Ok((
                i32::from(!consistent),
                json!({ "table": to_value(&table), "crossover": crossover, "consistent": consistent }),
            ))
        }
        Command::Replay { .. } => Err(Error::InvalidArgument("replay cannot be nested".into())),
    }
}

fn envelope(command: &str, s: &Settings, body: std::result::Result<Value, String>) -> String {
    let precision = json!({ "floats": "ieee754-binary64", "tol": s.tol, "precision_cap_bits": s.precision_cap });
    let doc = match body {
        Ok(result) => json!({ "command": command, "precision": precision, "result": result }),
        Err(msg) => json!({ "command": command, "precision": precision, "error": msg }),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("json values serialize");
    out.push('\n');
    out
}

fn run_command(cmd: &Command, s: &Settings, jobs: Option<usize>) -> (i32, String) {
    let go = || match execute(cmd, s) {
        Ok((code, v)) => (code, envelope(cmd.name(), s, Ok(v))),
        Err(e) => (exit_code_for(&e), envelope(cmd.name(), s, Err(e.to_string()))),
    };
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => (1, envelope(cmd.name(), s, Err(format!("thread pool: {e}")))),
        },
        None => go(),
    }
}

fn replay(path: &Path, jobs: Option<usize>, fallback: &Settings) -> (i32, String) {
    let read = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read manifest {}: {e}", path.display()))
        .and_then(|t| serde_json::from_str::<RunManifest>(&t).map_err(|e| format!("malformed manifest: {e}")));
    let m = match read {
        Ok(m) => m,
        Err(msg) => return (2, envelope("replay", fallback, Err(msg))),
    };
    let (code, out) = run_command(&m.inputs, &m.config, jobs);
    if digest(&out) != m.outcome || code != m.exit_code {
        let msg = format!(
            "replay diverged: digest {} exit {code}, manifest has {} exit {}",
            digest(&out),
            m.outcome,
            m.exit_code
        );
        return (1, envelope("replay", &m.config, Err(msg)));
    }
    (code, out)
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code with the text to print.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (2, envelope("usage", &Settings::default(), Err(e.render().to_string()))),
            };
        }
    };
    let settings = Settings {
        tol: cli.tol,
        order: cli.order,
        precision_cap: cli.precision_cap,
        slack: cli.slack,
        holonomic_slack: cli.holonomic_slack,
        scan_budget: cli.budget,
    };
    if !(settings.tol > 0.0 && settings.tol.is_finite()) {
        return (2, envelope(cli.command.name(), &settings, Err("--tol must be positive".into())));
    }
    if let Command::Replay { manifest } = &cli.command {
        return replay(manifest, cli.jobs, &settings);
    }
    let (code, out) = run_command(&cli.command, &settings, cli.jobs);
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command: cli.command.name().to_string(),
            inputs: cli.command.clone(),
            config: settings.clone(),
            outcome: digest(&out),
            exit_code: code,
        };
        let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        if let Err(e) = std::fs::write(path, text) {
            return (1, envelope(cli.command.name(), &settings, Err(format!("cannot write manifest: {e}"))));
        }
    }
    (code, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, Value) {
        let (code, out) = run(std::iter::once("szbound").chain(args.iter().copied()));
        (code, serde_json::from_str(&out).unwrap_or(Value::String(out)))
    }

    #[test]
    fn catalan_expansion() {
        let (code, v) = run_args(&["expand", "--sqrt", "1-4x", "-n", "5", "--assert-integral"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["coefficients"], json!(["1", "-2", "-2", "-4", "-10", "-28"]));
    }

    #[test]
    fn assert_integral_fails_on_fractions() {
        let (code, v) = run_args(&["expand", "--sqrt", "1+x", "-n", "3", "--assert-integral"]);
        assert_eq!(code, 1);
        assert_eq!(v["result"]["first_non_integral"], json!(1));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        let (code, v) = run_args(&["sz-check", "x^^2"]);
        assert_eq!(code, 2);
        let msg = v["error"].as_str().unwrap();
        assert!(msg.contains("x^2-x-1") && msg.contains("JSON array"), "{msg}");
        assert_eq!(run_args(&["sz-check", "2x+1"]).0, 2);
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code_for(&Error::Undecided("x".into())), 3);
        assert_eq!(exit_code_for(&Error::InternalFault("x".into())), 1);
        assert_eq!(exit_code_for(&Error::NotMonic), 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out) = run(["szbound", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sz-check"));
    }
}
