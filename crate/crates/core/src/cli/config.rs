//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::Error;
use crate::grid::Source;
use crate::norms::BlockSelection;
use crate::phi::PhiFunction;
use crate::verify::HardyVariant;

/// Check ids understood by `run` and `verify`.
pub const CHECKS: &[&str] = &[
    "hardy1",
    "hardy6",
    "hardy-random",
    "lemma2",
    "lemma4",
    "lemma5",
    "lemma7",
    "blocks",
    "dirichlet",
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem4",
    "theorem5",
    "approx",
];

const KEYS: &[&str] = &[
    "checks", "m", "dims", "seed", "input", "corpus", "lmax", "psi", "tau", "phi", "eta", "r", "theta", "gamma", "lambda",
    "degrees", "scales", "q", "variant", "hardy_a", "hardy_b", "trunc", "selection", "iters", "out",
];

/// Keys whose list length must equal `m`.
const PER_AXIS: &[&str] = &["dims", "psi", "tau", "phi", "eta", "r", "theta", "gamma", "lambda", "degrees"];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub checks: Vec<String>,
    pub m: usize,
    pub dims: Vec<usize>,
    pub seed: Option<u64>,
    /// A single input replaces the random corpus.
    pub input: Option<Source>,
    /// Corpus size (random functions, random Hardy or Lemma 7 cases, random series).
    pub corpus: usize,
    pub lmax: Option<usize>,
    pub psi: Vec<PhiFunction>,
    pub tau: Vec<f64>,
    pub phi: Vec<PhiFunction>,
    pub eta: Vec<f64>,
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
    pub degrees: Vec<usize>,
    pub scales: Vec<usize>,
    pub q: f64,
    pub variant: HardyVariant,
    pub hardy_a: f64,
    pub hardy_b: f64,
    pub trunc: usize,
    pub selection: BlockSelection,
    pub iters: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::with_m(1)
    }
}

impl ExperimentConfig {
    /// Defaults for `m` axes: `ψ = t^0.55`, `φ = t^0.7`, `τ = η = θ = 2`, `r = 1/2`, `γ = 1`.
    pub fn with_m(m: usize) -> Self {
        let pow = |a: f64| PhiFunction::power(a).expect("valid default exponent");
        Self {
            checks: Vec::new(),
            m,
            dims: vec![256; m],
            seed: None,
            input: None,
            corpus: 10,
            lmax: None,
            psi: vec![pow(0.55); m],
            tau: vec![2.0; m],
            phi: vec![pow(0.7); m],
            eta: vec![2.0; m],
            r: vec![0.5; m],
            theta: vec![2.0; m],
            gamma: vec![1.0; m],
            lambda: vec![1.0 / 1.3f64.log2(); m],
            degrees: vec![4; m],
            scales: (1..=5).collect(),
            q: 2.0,
            variant: HardyVariant::A,
            hardy_a: 2.0,
            hardy_b: 0.25,
            trunc: 30,
            selection: BlockSelection::Box,
            iters: 100,
            out: None,
        }
    }

    /// Whether any requested check draws random data.
    pub fn needs_seed(&self) -> bool {
        self.checks.iter().any(|c| match c.as_str() {
            "hardy-random" | "lemma7" | "theorem4" => true,
            "theorem1" | "theorem2" | "theorem3" | "theorem5" | "approx" => self.input.is_none(),
            _ => false,
        })
    }
}

/// A `key = value` pair with its origin line (0 for command-line overrides).
#[derive(Clone, Debug)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Split text into entries, stripping `#` comments and blank lines.
/// Split into entries; malformed lines come back as errors alongside the good entries.
pub fn entries(text: &str) -> (Vec<Entry>, Vec<Error>) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content.split_once('=') {
            Some((k, v)) => out.push(Entry { line, key: k.trim().to_string(), value: v.trim().to_string() }),
            None => errors.push(Error::Parse { line, message: format!("expected 'key = value', found '{content}'") }),
        }
    }
    (out, errors)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, Vec<Error>> {
    let (entries, errors) = entries(text);
    build_after(entries, errors)
}

/// `build`, reporting `earlier` errors together with its own.
pub fn build_after(entries: Vec<Entry>, mut earlier: Vec<Error>) -> Result<ExperimentConfig, Vec<Error>> {
    match build(entries) {
        Ok(cfg) if earlier.is_empty() => Ok(cfg),
        Ok(_) => Err(earlier),
        Err(errs) => {
            earlier.extend(errs);
            earlier.sort_by_key(line_key);
            Err(earlier)
        }
    }
}

fn line_key(e: &Error) -> usize {
    match e {
        Error::Parse { line, .. } => *line,
        _ => 0,
    }
}

fn list(value: &str) -> Vec<&str> {
    if value.trim().is_empty() {
        return Vec::new();
    }
    value.split(',').map(str::trim).collect()
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|_| format!("'{s}' is not a number")),
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("'{s}' is not a non-negative integer"))
}

/// Integers, with `a:b` expanding to the inclusive range.
fn parse_usize_list(value: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in list(value) {
        match item.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (parse_usize(a.trim())?, parse_usize(b.trim())?);
                if a > b {
                    return Err(format!("empty range '{item}'"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_usize(item)?),
        }
    }
    Ok(out)
}

fn parse_f64_list(value: &str) -> Result<Vec<f64>, String> {
    list(value).into_iter().map(parse_f64).collect()
}

fn parse_phi_list(value: &str) -> Result<Vec<PhiFunction>, String> {
    list(value).into_iter().map(|s| PhiFunction::parse(s).map_err(|e| e.to_string())).collect()
}

/// Apply entries in order (later entries override earlier ones) and validate.
pub fn build(entries: Vec<Entry>) -> Result<ExperimentConfig, Vec<Error>> {
    let mut errors = Vec::new();
    let mut latest: BTreeMap<String, Entry> = BTreeMap::new();
    let mut seen_in_file: BTreeMap<String, usize> = BTreeMap::new();
    for e in entries {
        if !KEYS.contains(&e.key.as_str()) {
            errors.push(Error::Parse { line: e.line, message: format!("unknown key '{}'", e.key) });
            continue;
        }
        if e.line > 0 {
            if let Some(first) = seen_in_file.insert(e.key.clone(), e.line) {
                errors.push(Error::Parse { line: e.line, message: format!("key '{}' already set on line {first}", e.key) });
                continue;
            }
        }
        latest.insert(e.key.clone(), e);
    }
    // without an explicit m, the grid shape decides
    let mut m = latest.get("dims").map_or(1, |e| list(&e.value).len().clamp(1, 3));
    if let Some(e) = latest.get("m") {
        match parse_usize(&e.value) {
            Ok(v) if (1..=3).contains(&v) => m = v,
            Ok(v) => errors.push(Error::Parse { line: e.line, message: format!("m = {v} must be 1, 2 or 3") }),
            Err(msg) => errors.push(Error::Parse { line: e.line, message: msg }),
        }
    }
    let mut cfg = ExperimentConfig::with_m(m);
    for (key, e) in &latest {
        if let Err(message) = apply(&mut cfg, key, &e.value) {
            errors.push(Error::Parse { line: e.line, message: format!("{key}: {message}") });
            continue;
        }
        if PER_AXIS.contains(&key.as_str()) {
            let len = list(&e.value).len();
            if len != m {
                errors.push(Error::Parse { line: e.line, message: format!("{key} has {len} entries but m = {m}") });
            }
        }
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        errors.sort_by_key(line_key);
        Err(errors)
    }
}

fn apply(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "m" => {}
        "checks" => {
            let ids: Vec<String> = list(value).into_iter().map(str::to_string).collect();
            if let Some(bad) = ids.iter().find(|id| !CHECKS.contains(&id.as_str())) {
                return Err(format!("unknown check '{bad}'"));
            }
            cfg.checks = ids;
        }
        "dims" => cfg.dims = list(value).into_iter().map(parse_usize).collect::<Result<_, _>>()?,
        "seed" => cfg.seed = Some(value.parse().map_err(|_| format!("'{value}' is not a seed"))?),
        "input" => cfg.input = Some(Source::parse(value).map_err(|e| e.to_string())?),
        "corpus" => cfg.corpus = parse_usize(value)?,
        "lmax" => cfg.lmax = Some(parse_usize(value)?),
        "psi" => cfg.psi = parse_phi_list(value)?,
        "phi" => cfg.phi = parse_phi_list(value)?,
        "tau" => cfg.tau = parse_f64_list(value)?,
        "eta" => cfg.eta = parse_f64_list(value)?,
        "r" => cfg.r = parse_f64_list(value)?,
        "theta" => cfg.theta = parse_f64_list(value)?,
        "gamma" => cfg.gamma = parse_f64_list(value)?,
        "lambda" => cfg.lambda = parse_f64_list(value)?,
        "degrees" => cfg.degrees = list(value).into_iter().map(parse_usize).collect::<Result<_, _>>()?,
        "scales" => {
            cfg.scales = parse_usize_list(value)?;
            if cfg.scales.is_empty() {
                return Err("needs at least one scale".into());
            }
        }
        "q" => cfg.q = parse_f64(value)?,
        "variant" => cfg.variant = value.parse().map_err(|e: Error| e.to_string())?,
        "hardy_a" => cfg.hardy_a = parse_f64(value)?,
        "hardy_b" => cfg.hardy_b = parse_f64(value)?,
        "trunc" => cfg.trunc = parse_usize(value)?,
        "selection" => {
            cfg.selection = match value {
                "box" => BlockSelection::Box,
                "diagonal" => BlockSelection::Diagonal,
                other => return Err(format!("unknown selection '{other}' (box|diagonal)")),
            }
        }
        "iters" => cfg.iters = parse_usize(value)?,
        "out" => cfg.out = Some(PathBuf::from(value)),
        _ => unreachable!("key list and match arms agree"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(errs: &[Error]) -> Vec<usize> {
        errs.iter()
            .map(|e| match e {
                Error::Parse { line, .. } => *line,
                _ => 0,
            })
            .collect()
    }

    #[test]
    fn parses_lists_and_comments() {
        let cfg = parse_config("# demo\nm = 2\ntau = 2,2  # both axes\nscales = 1:3, 7\npsi = pow:0.5, powlog:0.6:1\n").unwrap();
        assert_eq!(cfg.m, 2);
        assert_eq!(cfg.tau, vec![2.0, 2.0]);
        assert_eq!(cfg.scales, vec![1, 2, 3, 7]);
        assert_eq!(cfg.psi.len(), 2);
    }

    #[test]
    fn length_mismatch_reports_line() {
        let errs = parse_config("m = 2\n\ntau = 2\n").unwrap_err();
        assert_eq!(line_of(&errs), vec![3]);
        assert!(errs[0].to_string().contains("m = 2"));
    }

    #[test]
    fn key_order_does_not_matter() {
        let cfg = parse_config("tau = 3,3,3\nm = 3\n").unwrap();
        assert_eq!(cfg.tau, vec![3.0; 3]);
    }

    #[test]
    fn errors_are_collected() {
        let errs = parse_config("colour = red\nm = 1\npsi = pow:7\nthis line\ncheckz = 1\nm = 1\n").unwrap_err();
        assert_eq!(line_of(&errs), vec![1, 3, 4, 5, 6]);
    }

    #[test]
    fn unknown_check_rejected() {
        assert!(parse_config("checks = theorem9").is_err());
        let cfg = parse_config("checks = theorem5, hardy1").unwrap();
        assert_eq!(cfg.checks, vec!["theorem5", "hardy1"]);
    }

    #[test]
    fn seed_requirement() {
        let mut cfg = parse_config("checks = theorem5").unwrap();
        assert!(cfg.needs_seed());
        cfg.input = Some(Source::Block(vec![3]));
        assert!(!cfg.needs_seed());
        assert!(!parse_config("checks = hardy1").unwrap().needs_seed());
    }
}
