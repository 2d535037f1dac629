//! Command-line surface: configuration, dispatch and CSV output.

pub mod config;
pub mod run;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::besov::{besov_seminorm, block_table, class_norm};
use crate::error::{Error, Result};
use crate::grid::{analyze, hyperbolic_cross};
use crate::norms::{classical_lorentz_norm, lebesgue_norm, lorentz_norm_aniso};
use crate::rearrange::{iterated_rearrangement, rearrange_1d};
use crate::report::fmt_sig12;
use crate::verify::best_approx_refine;

pub use config::{parse_config, ExperimentConfig, CHECKS};
pub use run::{run, run_check, EXIT_FLAGS, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "lorentz-besov", version, about = "Lorentz norms, dyadic blocks and hyperbolic-cross checks on periodic grids")]
pub struct Cli {
    /// Experiment configuration (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for CSV reports.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by the function-level subcommands; each overrides the config key of the same name.
#[derive(Debug, Args, Default)]
pub struct Common {
    /// Grid file or `gen:block:<s..>`, `gen:random-bandlimited:<seed>:<lmax>`, `gen:rect:<a..>`.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub dims: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one norm of the input with 12 significant digits.
    Norm {
        #[command(flatten)]
        common: Common,
        /// lorentz | lebesgue | classical
        #[arg(long, default_value = "lorentz")]
        space: String,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        /// Exponent for the Lebesgue and classical Lorentz norms.
        #[arg(long)]
        q: Option<String>,
    },
    /// Emit the non-increasing rearrangement as CSV.
    Rearrange {
        #[command(flatten)]
        common: Common,
    },
    /// Emit `‖δ_s̄‖*` in `X(φ̄)` for every dyadic block.
    Blocks {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        eta: Option<String>,
    },
    /// List the blocks of a step hyperbolic cross.
    Cross {
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        n: f64,
    },
    /// Print the Besov seminorm and class norm.
    Besov {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        theta: Option<String>,
    },
    /// Refine the hyperbolic-cross partial sum toward the best approximation.
    Approx {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        iters: Option<String>,
    },
    /// Run one check; writes `<out>/<id>.csv`, or prints the CSV without `--out`.
    Verify {
        /// One of: hardy1 hardy6 hardy-random lemma2 lemma4 lemma5 lemma7 blocks dirichlet theorem1..theorem5 approx
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run every check listed under `checks` in the config.
    Run,
}

fn push(overrides: &mut Vec<config::Entry>, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        overrides.push(config::Entry { line: 0, key: key.into(), value: v.clone() });
    }
}

fn common_overrides(c: &Common, out: &mut Vec<config::Entry>) {
    push(out, "input", &c.input);
    push(out, "m", &c.m);
    push(out, "dims", &c.dims);
}

/// Configuration from `--config` (if any) with command-line values layered on top.
fn load(cli: &Cli, overrides: Vec<config::Entry>) -> std::result::Result<ExperimentConfig, Vec<Error>> {
    let (mut entries, errors) = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| vec![Error::Io(e)])?;
            config::entries(&text)
        }
        None => (Vec::new(), Vec::new()),
    };
    entries.extend(overrides);
    if let Some(seed) = cli.seed {
        entries.push(config::Entry { line: 0, key: "seed".into(), value: seed.to_string() });
    }
    config::build_after(entries, errors)
}

fn input(cfg: &ExperimentConfig) -> Result<crate::grid::GridFunction> {
    cfg.input
        .as_ref()
        .ok_or_else(|| Error::Domain("this subcommand needs --input (or 'input' in the config)".into()))?
        .generate(&cfg.dims)
}

fn emit(cli: &Cli, name: &str, text: &str) -> Result<()> {
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cli: &Cli, cfg: &ExperimentConfig) -> Result<u8> {
    match &cli.command {
        Command::Norm { space, q, .. } => {
            let f = input(cfg)?;
            let q = match q {
                Some(v) => v.trim().parse::<f64>().map_err(|_| Error::Domain(format!("'{v}' is not a number")))?,
                None => cfg.q,
            };
            let value = match space.as_str() {
                "lorentz" => lorentz_norm_aniso(&f, &crate::norms::LorentzParams::new(cfg.psi.clone(), cfg.tau.clone())?)?,
                "lebesgue" => lebesgue_norm(&f, q),
                "classical" => classical_lorentz_norm(&f, q, cfg.tau[0])?,
                other => return Err(Error::Domain(format!("unknown space '{other}' (lorentz|lebesgue|classical)"))),
            };
            println!("{}", fmt_sig12(value));
        }
        Command::Rearrange { .. } => {
            let f = input(cfg)?;
            let mut out = String::new();
            if f.m() == 1 {
                let step = rearrange_1d(&f.abs_values())?;
                out.push_str("t,value\n");
                for (t, v) in step.breakpoints.iter().zip(&step.values) {
                    let _ = writeln!(out, "{},{}", fmt_sig12(*t), fmt_sig12(*v));
                }
            } else {
                let r = iterated_rearrangement(&f);
                let names: Vec<String> = (1..=f.m()).map(|j| format!("t{j}")).collect();
                let _ = writeln!(out, "{},value", names.join(","));
                for (flat, v) in r.values.iter().enumerate() {
                    let mut rest = flat;
                    let ts: Vec<String> = r
                        .dims
                        .iter()
                        .map(|&n| {
                            let i = rest % n;
                            rest /= n;
                            fmt_sig12(i as f64 / n as f64)
                        })
                        .collect();
                    let _ = writeln!(out, "{},{}", ts.join(","), fmt_sig12(*v));
                }
            }
            emit(cli, "rearrange.csv", &out)?;
        }
        Command::Blocks { .. } => {
            let f = input(cfg)?;
            let table = block_table(&analyze(&f), &crate::norms::LorentzParams::new(cfg.phi.clone(), cfg.eta.clone())?)?;
            let names: Vec<String> = (1..=f.m()).map(|j| format!("s{j}")).collect();
            let mut out = format!("{},norm\n", names.join(","));
            for (s, v) in table.indices().zip(&table.values) {
                let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{},{}", s.join(","), fmt_sig12(*v));
            }
            emit(cli, "blocks.csv", &out)?;
        }
        Command::Cross { n, .. } => {
            let cross = hyperbolic_cross(&cfg.gamma, *n, cfg.m)?;
            let names: Vec<String> = (1..=cfg.m).map(|j| format!("s{j}")).collect();
            let mut out = format!("{}\n", names.join(","));
            for s in cross.blocks() {
                let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{}", s.join(","));
            }
            let _ = writeln!(out, "cardinality,{}", cross.cardinality());
            emit(cli, "cross.csv", &out)?;
        }
        Command::Besov { .. } => {
            let f = input(cfg)?;
            let params = crate::besov::BesovParams::new(
                crate::norms::LorentzParams::new(cfg.phi.clone(), cfg.eta.clone())?,
                cfg.r.clone(),
                cfg.theta.clone(),
            )?;
            println!("seminorm,{}", fmt_sig12(besov_seminorm(&f, &params)?));
            println!("class_norm,{}", fmt_sig12(class_norm(&f, &params)?));
        }
        Command::Approx { n, .. } => {
            let f = input(cfg)?;
            let cross = hyperbolic_cross(&cfg.gamma, *n as f64, cfg.m)?;
            let target = crate::norms::LorentzParams::new(cfg.psi.clone(), cfg.tau.clone())?;
            let r = best_approx_refine(&f, &cross, &target, cfg.iters)?;
            println!("partial_sum_error,{}", fmt_sig12(r.partial_sum_error));
            println!("refined_error,{}", fmt_sig12(r.error));
            println!("sweeps,{}", r.history.len() - 1);
        }
        Command::Verify { id, .. } => {
            if !CHECKS.contains(&id.as_str()) {
                return Err(Error::Domain(format!("unknown check '{id}'; known: {}", CHECKS.join(" "))));
            }
            let mut cfg = cfg.clone();
            cfg.checks = vec![id.clone()];
            if cfg.needs_seed() && cfg.seed.is_none() {
                return Err(Error::Domain(format!("{id} draws random data; set 'seed' or pass --seed")));
            }
            let report = run_check(&cfg, id)?;
            match &cli.out {
                Some(dir) => run::write_report(dir, &report)?,
                None => print!("{}", report.to_csv()),
            }
            for flag in &report.precondition_flags {
                eprintln!("{id}: flag: {flag}");
            }
            return Ok(if report.is_clean() { EXIT_OK } else { EXIT_FLAGS });
        }
        Command::Run => {
            if cfg.needs_seed() && cfg.seed.is_none() {
                return Err(Error::Domain("the configured checks draw random data; set 'seed' or pass --seed".into()));
            }
            let dir = cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("reports"));
            return Ok(run(cfg, &dir));
        }
    }
    Ok(EXIT_OK)
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with(cli: Cli) -> u8 {
    let mut overrides = Vec::new();
    match &cli.command {
        Command::Norm { common, psi, tau, .. } => {
            common_overrides(common, &mut overrides);
            push(&mut overrides, "psi", psi);
            push(&mut overrides, "tau", tau);
        }
        Command::Rearrange { common } => common_overrides(common, &mut overrides),
        Command::Blocks { common, phi, eta } => {
            common_overrides(common, &mut overrides);
            push(&mut overrides, "phi", phi);
            push(&mut overrides, "eta", eta);
        }
        Command::Cross { m, gamma, .. } => {
            push(&mut overrides, "m", m);
            push(&mut overrides, "gamma", gamma);
        }
        Command::Besov { common, phi, eta, r, theta } => {
            common_overrides(common, &mut overrides);
            push(&mut overrides, "phi", phi);
            push(&mut overrides, "eta", eta);
            push(&mut overrides, "r", r);
            push(&mut overrides, "theta", theta);
        }
        Command::Approx { common, gamma, psi, tau, iters, .. } => {
            common_overrides(common, &mut overrides);
            push(&mut overrides, "gamma", gamma);
            push(&mut overrides, "psi", psi);
            push(&mut overrides, "tau", tau);
            push(&mut overrides, "iters", iters);
        }
        Command::Verify { common, .. } => common_overrides(common, &mut overrides),
        Command::Run => {}
    }
    let cfg = match load(&cli, overrides) {
        Ok(cfg) => cfg,
        Err(errors) => {
            for e in errors {
                match e {
                    Error::Parse { line: 0, message } => eprintln!("command line: {message}"),
                    other => eprintln!("config: {other}"),
                }
            }
            return EXIT_USAGE;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("threads: {e}");
            return EXIT_INTERNAL;
        }
    }
    match execute(&cli, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            run::error_code(&e)
        }
    }
}
