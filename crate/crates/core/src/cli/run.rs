//! Check dispatch and CSV emission.

use std::fs;
use std::path::Path;

use crate::besov::{normalize_to_ball, BesovParams};
use crate::error::{Error, Result};
use crate::grid::{hyperbolic_cross, max_level, GridFunction};
use crate::norms::{block_norm_check, dirichlet_norm_check, LorentzParams};
use crate::numeric::log2_exact;
use crate::phi::{lemma2_check, lemma4_check, lemma5_check};
use crate::report::VerificationReport;
use crate::verify::{
    best_approx_refine, class_ball_corpus, hardy1_check, hardy6_check, hardy_random_check, lacunary_corpus, lemma7_check,
    lemma7_random_cases, random_corpus, theorem1_check, theorem2_depth_check, theorem3_check, theorem4_corpus_check, theorem5_check,
    BoxArray, Corpus,
};

use super::config::ExperimentConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FLAGS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

/// Exit code for a failed check: bad parameters are usage errors.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Resolution(_) | Error::Precondition(_) | Error::Parse { .. } => EXIT_USAGE,
        Error::Degenerate(_) | Error::Io(_) => EXIT_INTERNAL,
    }
}

fn seed(cfg: &ExperimentConfig) -> Result<u64> {
    cfg.seed.ok_or_else(|| Error::Domain("this check draws random data; set 'seed' or pass --seed".into()))
}

fn target(cfg: &ExperimentConfig) -> Result<LorentzParams> {
    LorentzParams::new(cfg.psi.clone(), cfg.tau.clone())
}

fn space(cfg: &ExperimentConfig) -> Result<LorentzParams> {
    LorentzParams::new(cfg.phi.clone(), cfg.eta.clone())
}

fn besov(cfg: &ExperimentConfig) -> Result<BesovParams> {
    BesovParams::new(space(cfg)?, cfg.r.clone(), cfg.theta.clone())
}

fn default_lmax(cfg: &ExperimentConfig) -> usize {
    cfg.lmax.unwrap_or_else(|| cfg.dims.iter().map(|&n| max_level(n)).min().unwrap_or(1))
}

fn max_scale(cfg: &ExperimentConfig) -> usize {
    cfg.scales.iter().copied().max().unwrap_or(0)
}

/// The configured input, or the seeded random corpus.
pub fn function_corpus(cfg: &ExperimentConfig, lmax: usize) -> Result<Corpus> {
    match &cfg.input {
        Some(src) => Ok(vec![(src.to_string(), src.generate(&cfg.dims)?)]),
        None => {
            let s = seed(cfg)?;
            random_corpus(&cfg.dims, s..s + cfg.corpus as u64, lmax)
        }
    }
}

fn prefixed(mut report: VerificationReport, prefix: &str) -> VerificationReport {
    for row in &mut report.rows {
        row.case_id = format!("{prefix}/{}", row.case_id);
    }
    report
}

fn per_function(check: &str, corpus: &Corpus, mut f: impl FnMut(&GridFunction) -> Result<VerificationReport>) -> Result<VerificationReport> {
    let mut out = VerificationReport::new(check);
    for (id, g) in corpus {
        out.merge(prefixed(f(g)?, id));
    }
    Ok(out.finish())
}

fn geometric(ratio: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| ratio.powi(k as i32)).collect()
}

/// Run one check by id.
pub fn run_check(cfg: &ExperimentConfig, id: &str) -> Result<VerificationReport> {
    let m = cfg.m;
    match id {
        "hardy1" => {
            let n = cfg.trunc;
            hardy1_check(&geometric(cfg.hardy_a, n + 1), &geometric(cfg.hardy_b, n + 1), cfg.theta[0], cfg.variant, n)
        }
        "hardy6" => {
            let n = cfg.trunc;
            let a = geometric(cfg.hardy_a, n + 1);
            let b = BoxArray::from_fn(m, n + 1, |k| cfg.hardy_b.powi(k.iter().sum::<usize>() as i32));
            hardy6_check(&vec![a; m], &b, &cfg.theta, cfg.variant, n)
        }
        "hardy-random" => hardy_random_check(seed(cfg)?, cfg.corpus, cfg.trunc),
        "lemma2" => lemma2_check(&cfg.psi[0], cfg.q, max_scale(cfg)),
        "lemma4" => lemma4_check(&cfg.psi[0], &cfg.phi[0], cfg.theta[0], max_scale(cfg)),
        "lemma5" => {
            let lo = cfg.scales.iter().copied().min().unwrap_or(0);
            lemma5_check(&cfg.psi[0], cfg.theta[0], lo, max_scale(cfg))
        }
        "lemma7" => {
            let cases = lemma7_random_cases(&cfg.dims, &cfg.degrees, seed(cfg)?, cfg.corpus)?;
            lemma7_check(&cases, &space(cfg)?)
        }
        "blocks" => {
            let lo = cfg.scales.iter().copied().min().unwrap_or(0);
            block_norm_check(&target(cfg)?, lo, max_scale(cfg), &cfg.dims, cfg.selection)
        }
        "dirichlet" => {
            let grid_log2 = log2_exact(cfg.dims[0]).ok_or_else(|| Error::Domain("grid size must be a power of two".into()))?;
            dirichlet_norm_check(&cfg.phi[0], cfg.eta[0], max_scale(cfg), grid_log2)
        }
        "theorem1" => {
            let ns: Vec<Vec<usize>> = cfg.scales.iter().map(|&n| vec![n; m]).collect();
            let sp = space(cfg)?;
            per_function("theorem1", &function_corpus(cfg, default_lmax(cfg))?, |f| theorem1_check(f, &ns, &sp))
        }
        "theorem2" => {
            let lmax = cfg.lmax.unwrap_or(max_scale(cfg));
            theorem2_depth_check(&function_corpus(cfg, lmax)?, &cfg.scales, &target(cfg)?, &space(cfg)?)
        }
        "theorem3" => {
            let (b, t) = (besov(cfg)?, target(cfg)?);
            per_function("theorem3", &function_corpus(cfg, default_lmax(cfg))?, |f| theorem3_check(f, &b, &t))
        }
        "theorem4" => {
            let s_max = cfg.lmax.unwrap_or(max_scale(cfg)).max(1);
            let series = lacunary_corpus(m, s_max, seed(cfg)?, cfg.corpus)?;
            theorem4_corpus_check(&series, &cfg.lambda, &target(cfg)?, &cfg.dims)
        }
        "theorem5" => {
            let b = besov(cfg)?;
            let corpus = match &cfg.input {
                Some(src) => vec![(src.to_string(), normalize_to_ball(&src.generate(&cfg.dims)?, &b)?)],
                None => {
                    let s = seed(cfg)?;
                    class_ball_corpus(&cfg.dims, s..s + cfg.corpus as u64, default_lmax(cfg), &b)?
                }
            };
            theorem5_check(&b, &target(cfg)?, &cfg.gamma, &cfg.scales, &corpus)
        }
        "approx" => {
            let t = target(cfg)?;
            let corpus = function_corpus(cfg, default_lmax(cfg))?;
            let mut report = VerificationReport::new("approx");
            for (fid, f) in &corpus {
                for &n in &cfg.scales {
                    let cross = hyperbolic_cross(&cfg.gamma, n as f64, m)?;
                    let out = best_approx_refine(f, &cross, &t, cfg.iters)?;
                    report.push(fid.clone(), n as i64, out.error, out.partial_sum_error);
                }
            }
            report.note("lhs is the refined error, rhs the partial-sum error");
            Ok(report.finish())
        }
        other => Err(Error::Domain(format!("unknown check '{other}'"))),
    }
}

/// Write `<dir>/<check>.csv`.
pub fn write_report(dir: &Path, report: &VerificationReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{}.csv", report.check_id)), report.to_csv())?;
    Ok(())
}

/// Run every configured check, writing one CSV each; returns the exit code.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> u8 {
    let mut code = EXIT_OK;
    for id in &cfg.checks {
        match run_check(cfg, id).and_then(|r| write_report(out_dir, &r).map(|_| r)) {
            Ok(report) => {
                for flag in &report.precondition_flags {
                    eprintln!("{id}: flag: {flag}");
                }
                if !report.is_clean() {
                    code = code.max(EXIT_FLAGS);
                }
            }
            Err(e) => {
                eprintln!("{id}: {e}");
                code = code.max(error_code(&e));
            }
        }
    }
    code
}
