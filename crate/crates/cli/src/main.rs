//! Command-line frontend: named instances, experiment orchestration, and
//! machine-readable outputs. Every report embeds its full configuration and
//! the seeds used, so identical invocations produce byte-identical files.
//!
//! Exit codes: 0 success, 2 degenerate rank, 3 budget exhausted,
//! 4 precision exhausted, 5 invalid configuration.

mod instances;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use diokit::badset::{bad_certificate, Selector};
use diokit::bestapprox::compute_best_approx;
use diokit::BestApproxError;
use diokit::error::NumError;
use diokit::exponents::{
    estimate_from_grid_sweep, estimate_ordinary_from_sequence, estimate_uniform_from_sequence,
    liouville_probes, sweep_simultaneous, ExponentKind, GridParams,
};
use diokit::grassmann::{self, Mode};
use diokit::numerics::{format_rat, parse_cert_real, parse_rat};
use diokit::transference::{
    bl_validate, dyson_classical_bound, dyson_weighted_bound, validate_dyson, Direction,
    DysonBoundInput, ExtRat,
};
use instances::{as_vector, parse_bound, parse_theta, parse_weights, Instance};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "diokit", version, about = "weighted Diophantine approximation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file; stdout when omitted. Relative paths resolve against
    /// DIOKIT_OUT_DIR when that variable is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for sequence data: json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Named instance: phi, sqrt2, sqrt3, sqrt5, liouville2, half.
    #[arg(long)]
    instance: Option<String>,
    /// Explicit matrix, rows split by `;`, entries by `,`
    /// (tokens: rationals, sqrt(r), phi, liouville(b)).
    #[arg(long)]
    matrix: Option<String>,
    /// Size-side weights (`uniform` or comma-separated rationals).
    #[arg(long)]
    weights_r: Option<String>,
    /// Error-side weights.
    #[arg(long)]
    weights_s: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a weighted best-approximation sequence.
    Bestapprox {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Bound on the size N(X).
        #[arg(long, default_value = "1e6")]
        bound: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Exponent estimates (sequence-driven homogeneous, grid-driven
    /// inhomogeneous when --theta is given).
    Exponents {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "1e6")]
        bound: String,
        /// Shift vector (comma-separated rationals) for the inhomogeneous
        /// grid path.
        #[arg(long)]
        theta: Option<String>,
        /// Largest grid octave (scales up to 2^octave).
        #[arg(long, default_value_t = 17)]
        tmax_octave: u32,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Evaluate the transfer bounds, or validate them on an instance.
    Dyson {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Input exponent (rational or `inf`).
        #[arg(long, default_value = "1")]
        omega: String,
        #[arg(long)]
        weights_s: Option<String>,
        #[arg(long)]
        weights_r: Option<String>,
        #[arg(long, default_value = "forward")]
        direction: String,
        /// Validate both directions empirically on an instance.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, default_value = "1e5")]
        bound: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Homogeneous-inhomogeneous reciprocal transfer validation.
    Bl {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = 100)]
        theta_samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "1e6")]
        bound: String,
        #[arg(long, default_value_t = 17)]
        tmax_octave: u32,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Slack subtracted from the reciprocal bound for the certified
        /// lower-bound comparison.
        #[arg(long, default_value_t = 0.1)]
        lb_slack: f64,
        /// Equality-band tolerance for the point estimates.
        #[arg(long, default_value_t = 0.15)]
        eq_tolerance: f64,
    },
    /// Intermediate exponents over grade-d integer multivectors.
    Intermediate {
        /// Point coordinates, comma-separated tokens.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        d: usize,
        /// Shift in coefficient space (comma-separated rationals).
        #[arg(long)]
        theta: Option<String>,
        #[arg(long, default_value = "ordinary")]
        mode: String,
        #[arg(long, default_value_t = 12)]
        tmax_octave: u32,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Run the reciprocal transfer validation with this many shifts.
        #[arg(long)]
        bv_samples: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Generate a twisted badly-approximable certificate.
    Badgen {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "1/5")]
        alpha: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value = "1e4")]
        check_bound: String,
        /// Child selector: `first` or `random`.
        #[arg(long, default_value = "first")]
        selector: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &anyhow::Error) -> u8 {
    if let Some(b) = e.downcast_ref::<BestApproxError>() {
        return match b {
            BestApproxError::DegenerateRank { .. } => 2,
            BestApproxError::BudgetExceeded { .. } => 3,
            BestApproxError::Num(NumError::PrecisionExhausted { .. }) => 4,
            _ => 1,
        };
    }
    if let Some(b) = e.downcast_ref::<diokit::BadSetError>() {
        return match b {
            diokit::BadSetError::BestApprox(BestApproxError::DegenerateRank { .. }) => 2,
            diokit::BadSetError::BestApprox(BestApproxError::BudgetExceeded { .. }) => 3,
            diokit::BadSetError::Num(NumError::PrecisionExhausted { .. }) => 4,
            diokit::BadSetError::BadParameter(_) | diokit::BadSetError::Precondition(_) => 5,
            _ => 1,
        };
    }
    if let Some(n) = e.downcast_ref::<NumError>() {
        return match n {
            NumError::PrecisionExhausted { .. } => 4,
            _ => 5,
        };
    }
    1
}

fn emit(cli: &Cli, text: String) -> Result<()> {
    match &cli.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let path = if path.is_relative() {
                match std::env::var_os("DIOKIT_OUT_DIR") {
                    Some(dir) => PathBuf::from(dir).join(path),
                    None => path.clone(),
                }
            } else {
                path.clone()
            };
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            // atomic write
            let tmp = path.with_extension("tmp");
            {
                let mut f = std::fs::File::create(&tmp)?;
                f.write_all(text.as_bytes())?;
                f.write_all(b"\n")?;
            }
            std::fs::rename(&tmp, &path)?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Bestapprox { inst, bound, budget } => {
            let instance = Instance::resolve(inst.instance.as_deref(), inst.matrix.as_deref())?;
            // the engine works on Z^m with N = ||.||_s and
            // L = min_p ||^tA X - p||_r of the given target
            let s = parse_weights(inst.weights_s.as_deref(), instance.matrix.m)?;
            let r = parse_weights(inst.weights_r.as_deref(), instance.matrix.n)?;
            let n_bound = parse_bound(bound)?;
            let seq = compute_best_approx(&instance.matrix, &s, &r, &n_bound, *budget)
                .map_err(anyhow::Error::from)?;
            if cli.format == "csv" {
                return emit(cli, seq.to_csv());
            }
            let entries: Vec<serde_json::Value> = seq
                .entries
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    json!({
                        "k": k + 1,
                        "x": e.x.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "p": e.p_witness.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "y": e.y.to_f64(),
                        "m": e.m_val.to_f64(),
                    })
                })
                .collect();
            let out = json!({
                "tool": {"name": "diokit", "version": VERSION},
                "command": "bestapprox",
                "config": {
                    "instance": instance.describe(),
                    "weights_s": weights_desc(&s),
                    "weights_r": weights_desc(&r),
                    "bound": format_rat(&n_bound),
                    "budget": budget,
                },
                "exhausted_up_to": format_rat(&seq.exhausted_up_to),
                "entries": entries,
            });
            emit(cli, serde_json::to_string_pretty(&out)?)
        }
        Command::Exponents { inst, bound, theta, tmax_octave, budget } => {
            let instance = Instance::resolve(inst.instance.as_deref(), inst.matrix.as_deref())?;
            let n_bound = parse_bound(bound)?;
            let s = parse_weights(inst.weights_s.as_deref(), instance.matrix.m)?;
            let r = parse_weights(inst.weights_r.as_deref(), instance.matrix.n)?;
            let mut report = json!({
                "tool": {"name": "diokit", "version": VERSION},
                "command": "exponents",
                "config": {
                    "instance": instance.describe(),
                    "bound": format_rat(&n_bound),
                    "tmax_octave": tmax_octave,
                    "budget": budget,
                    "theta": theta.clone().unwrap_or_else(|| "zero".into()),
                },
            });
            match theta.as_deref() {
                None | Some("zero") => {
                    let seq = compute_best_approx(&instance.matrix, &s, &r, &n_bound, *budget)
                        .map_err(anyhow::Error::from)?;
                    // deep probes for factorial-series entries
                    let mut probes = Vec::new();
                    if instance.matrix.m == 1 && instance.matrix.n == 1 {
                        if let Some(base) = instance.matrix.at(0, 0).as_liouville() {
                            probes = liouville_probes(base, 11);
                        }
                    }
                    let ord = estimate_ordinary_from_sequence(&seq, &probes)
                        .map_err(anyhow::Error::from)?;
                    let unif =
                        estimate_uniform_from_sequence(&seq).map_err(anyhow::Error::from)?;
                    print_summary_table(&[("ordinary", &ord), ("uniform", &unif)]);
                    report["ordinary"] = serde_json::to_value(&ord)?;
                    report["uniform"] = serde_json::to_value(&unif)?;
                }
                Some(spec) => {
                    let alphas = as_vector(&instance)
                        .ok_or_else(|| anyhow!("inhomogeneous path requires a vector instance"))?;
                    let theta_v = parse_theta(Some(spec), alphas.len())?;
                    let grid = GridParams::new(1, *tmax_octave);
                    let w = parse_weights(None, alphas.len())?;
                    let sweep = sweep_simultaneous(&alphas, &theta_v, &w, &grid, *budget)
                        .map_err(anyhow::Error::from)?;
                    let est = estimate_from_grid_sweep(
                        &sweep,
                        ExponentKind { uniform: false, multiplicative: false, inhomogeneous: true },
                    );
                    print_summary_table(&[("inhomogeneous", &est)]);
                    report["inhomogeneous"] = serde_json::to_value(&est)?;
                }
            }
            emit(cli, serde_json::to_string_pretty(&report)?)
        }
        Command::Dyson {
            m,
            n,
            omega,
            weights_s,
            weights_r,
            direction,
            instance,
            matrix,
            bound,
            budget,
        } => {
            let omega_ext = if omega == "inf" {
                ExtRat::Inf
            } else {
                ExtRat::Finite(parse_rat(omega).map_err(|e| anyhow!(e))?)
            };
            let s = parse_weights(weights_s.as_deref(), *m)?;
            let r = parse_weights(weights_r.as_deref(), *n)?;
            let dir = match direction.as_str() {
                "forward" => Direction::Forward,
                "backward" => Direction::Backward,
                other => return Err(anyhow!("unknown direction `{other}`")),
            };
            let input = DysonBoundInput {
                m: *m,
                n: *n,
                s: s.clone(),
                r: r.clone(),
                omega: omega_ext.clone(),
            };
            let weighted = dyson_weighted_bound(&input, dir);
            let classical = dyson_classical_bound(*m, *n, &omega_ext);
            eprintln!("weighted bound:  {weighted}");
            eprintln!("classical bound: {classical}");
            let mut report = json!({
                "tool": {"name": "diokit", "version": VERSION},
                "command": "dyson",
                "config": {
                    "m": m, "n": n,
                    "omega": omega,
                    "direction": direction,
                    "weights_s": weights_desc(&s),
                    "weights_r": weights_desc(&r),
                },
                "weighted_bound": weighted.to_string(),
                "classical_bound": classical.to_string(),
            });
            if instance.is_some() || matrix.is_some() {
                let inst = Instance::resolve(instance.as_deref(), matrix.as_deref())?;
                let v = validate_dyson(&inst.matrix, &s, &r, &parse_bound(bound)?, *budget)
                    .map_err(anyhow::Error::from)?;
                report["validation"] = serde_json::to_value(&v)?;
            }
            emit(cli, serde_json::to_string_pretty(&report)?)
        }
        Command::Bl {
            inst,
            theta_samples,
            seed,
            bound,
            tmax_octave,
            budget,
            lb_slack,
            eq_tolerance,
        } => {
            let instance = Instance::resolve(inst.instance.as_deref(), inst.matrix.as_deref())?;
            let s = parse_weights(inst.weights_s.as_deref(), instance.matrix.m)?;
            let r = parse_weights(inst.weights_r.as_deref(), instance.matrix.n)?;
            let grid = GridParams::new(1, *tmax_octave);
            let v = bl_validate(
                &instance.matrix,
                &s,
                &r,
                *theta_samples,
                *seed,
                &parse_bound(bound)?,
                &grid,
                *budget,
                *lb_slack,
                *eq_tolerance,
            )
            .map_err(anyhow::Error::from)?;
            eprintln!(
                "omega_hat = {:.4}; bound = {:.4}; {} samples; within-band {:.1}%; verdict {:?}",
                v.omega_hat,
                v.bound,
                v.samples.len(),
                100.0 * v.within_fraction,
                v.verdict
            );
            let report = json!({
                "tool": {"name": "diokit", "version": VERSION},
                "command": "bl",
                "config": {
                    "instance": instance.describe(),
                    "theta_samples": theta_samples,
                    "seed": seed,
                    "bound": bound,
                    "tmax_octave": tmax_octave,
                    "budget": budget,
                    "lb_slack": lb_slack,
                    "eq_tolerance": eq_tolerance,
                },
                "report": serde_json::to_value(&v)?,
            });
            emit(cli, serde_json::to_string_pretty(&report)?)
        }
        Command::Intermediate {
            alpha,
            d,
            theta,
            mode,
            tmax_octave,
            budget,
            bv_samples,
            seed,
        } => {
            let alphas: Vec<_> = alpha
                .split(',')
                .map(|t| parse_cert_real(t.trim()).map_err(|e| anyhow!(e)))
                .collect::<Result<_>>()?;
            let n = alphas.len();
            let mode_v = match mode.as_str() {
                "ordinary" => Mode::Ordinary,
                "uniform" => Mode::Uniform,
                other => return Err(anyhow!("unknown mode `{other}`")),
            };
            let y_dim = grassmann::binomial(n, d + 1);
            let theta_v = parse_theta(theta.as_deref(), y_dim)?;
            let grid = GridParams::new(1, *tmax_octave);
            let est =
                grassmann::intermediate_exponent(&alphas, *d, &theta_v, mode_v, &grid, *budget)
                    .map_err(anyhow::Error::from)?;
            print_summary_table(&[("intermediate", &est)]);
            let mut report = json!({
                "tool": {"name": "diokit", "version": VERSION},
                "command": "intermediate",
                "config": {
                    "alpha": alpha,
                    "d": d,
                    "mode": mode,
                    "theta": theta.clone().unwrap_or_else(|| "zero".into()),
                    "tmax_octave": tmax_octave,
                    "budget": budget,
                    "seed": seed,
                },
                "estimate": serde_json::to_value(&est)?,
            });
            if let Some(count) = bv_samples {
                let bv =
                    grassmann::bv_transfer_check(&alphas, *d, *count, *seed, &grid, *budget, 0.25)
                        .map_err(anyhow::Error::from)?;
                report["bv_validation"] = serde_json::to_value(&bv)?;
            }
            emit(cli, serde_json::to_string_pretty(&report)?)
        }
        Command::Badgen { inst, alpha, depth, check_bound, selector, seed, budget } => {
            let instance = Instance::resolve(inst.instance.as_deref(), inst.matrix.as_deref())?;
            let s = parse_weights(inst.weights_s.as_deref(), instance.matrix.m)?;
            let r = parse_weights(inst.weights_r.as_deref(), instance.matrix.n)?;
            let alpha_v = parse_rat(alpha).map_err(|e| anyhow!(e))?;
            let sel = match selector.as_str() {
                "first" => Selector::First,
                "random" => Selector::Random(*seed),
                other => return Err(anyhow!("unknown selector `{other}`")),
            };
            let cert = bad_certificate(
                &instance.matrix,
                &s,
                &r,
                &alpha_v,
                *depth,
                &parse_bound(check_bound)?,
                sel,
                *budget,
            )
            .map_err(anyhow::Error::from)?;
            eprintln!(
                "theta = {:?}; epsilon = {:.6e}; window pass = {}",
                cert.theta, cert.epsilon, cert.window_pass
            );
            let report = json!({
                "tool": {"name": "diokit", "version": VERSION},
                "command": "badgen",
                "config": {
                    "instance": instance.describe(),
                    "alpha": alpha,
                    "depth": depth,
                    "check_bound": check_bound,
                    "selector": selector,
                    "seed": seed,
                    "budget": budget,
                },
                "certificate": serde_json::to_value(&cert)?,
            });
            emit(cli, serde_json::to_string_pretty(&report)?)
        }
    }
}

fn weights_desc(w: &diokit::WeightVector) -> Vec<String> {
    w.weights().iter().map(format_rat).collect()
}

fn print_summary_table(rows: &[(&str, &diokit::exponents::ExponentEstimate)]) {
    eprintln!(
        "{:<16} {:>12} {:>14} {:>20} {:>8}",
        "kind", "lower_bound", "point_estimate", "ln-scale range", "capped"
    );
    for (name, est) in rows {
        eprintln!(
            "{:<16} {:>12.5} {:>14.5} {:>9.2}..{:>9.2} {:>8}",
            name,
            est.lower_bound_f64(),
            est.point_estimate,
            est.t_range.0,
            est.t_range.1,
            est.capped
        );
    }
}
