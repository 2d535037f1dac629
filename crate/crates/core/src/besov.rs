//! Nikol'skii–Besov seminorms over a generalized Lorentz space `X(φ̄) = L*_{φ̄,η̄}`,
//! class-ball normalization and the weight sequences `μ(s) = ψ(2^{-s})/φ(2^{-s})`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{analyze, is_zero_mean, max_level, synthesize, GridFunction, SpectralFunction};
use crate::norms::{lorentz_norm_aniso, LorentzParams};
use crate::numeric::{box_indices, mixed_norm};
use crate::phi::PhiFunction;

#[derive(Clone, Debug, PartialEq)]
pub struct BesovParams {
    /// `(φ̄, η̄)` defining `X(φ̄)`.
    pub space: LorentzParams,
    pub r: Vec<f64>,
    /// `θ_j` in `[1, ∞]`.
    pub theta: Vec<f64>,
}

impl BesovParams {
    pub fn new(space: LorentzParams, r: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        let m = space.m();
        if r.len() != m || theta.len() != m {
            return Err(Error::domain(format!(
                "Besov parameters need {m} smoothness and {m} θ values, got {} and {}",
                r.len(),
                theta.len()
            )));
        }
        if let Some(v) = r.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::domain(format!("smoothness r = {v} must be positive")));
        }
        if let Some(v) = theta.iter().find(|v| !(**v >= 1.0)) {
            return Err(Error::domain(format!("θ = {v} must be at least 1")));
        }
        Ok(Self { space, r, theta })
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }
}

/// `‖δ_s̄(f)‖*` for every `s̄` with `s_j <= levels[j]`, axis 1 fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTable {
    pub levels: Vec<usize>,
    pub values: Vec<f64>,
}

impl BlockTable {
    pub fn shape(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l + 1).collect()
    }

    pub fn get(&self, s: &[usize]) -> f64 {
        let mut flat = 0;
        let mut stride = 1;
        for (&sj, &l) in s.iter().zip(&self.levels) {
            if sj > l {
                return 0.0;
            }
            flat += sj * stride;
            stride *= l + 1;
        }
        self.values[flat]
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let shape = self.shape();
        let total: usize = shape.iter().product();
        (0..total).map(move |mut flat| {
            shape
                .iter()
                .map(|&len| {
                    let i = flat % len;
                    flat /= len;
                    i
                })
                .collect()
        })
    }

    /// Table of `w(s̄) · value(s̄)`.
    pub fn weighted(&self, w: impl Fn(&[usize]) -> f64) -> Vec<f64> {
        self.indices().zip(&self.values).map(|(s, &v)| if v == 0.0 { 0.0 } else { w(&s) * v }).collect()
    }
}

/// Block norms of a spectrum under `norm`, every block up to Nyquist.
pub fn block_table(spec: &SpectralFunction, norm: &LorentzParams) -> Result<BlockTable> {
    if norm.m() != spec.m() {
        return Err(Error::domain("norm and function dimensions differ"));
    }
    let levels: Vec<usize> = spec.dims().iter().map(|&n| max_level(n)).collect();
    let shape: Vec<usize> = levels.iter().map(|l| l + 1).collect();
    let blocks: Vec<Vec<usize>> = box_indices(&shape).collect();
    let values = blocks
        .par_iter()
        .map(|s| {
            if spec.block_max_abs(s) == 0.0 {
                return Ok(0.0);
            }
            let block = synthesize(&spec.block(s)?);
            lorentz_norm_aniso(&block, norm)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(BlockTable { levels, values })
}

fn require_zero_mean(spec: &SpectralFunction) -> Result<()> {
    if !is_zero_mean(spec) {
        return Err(Error::Precondition(
            "Besov seminorm needs a zero-mean function (apply zero_mean_project)".into(),
        ));
    }
    Ok(())
}

/// Mixed `ℓ_θ̄` norm of `{∏ 2^{s_j r_j} ‖δ_s̄‖*}` from a precomputed table.
pub fn seminorm_from_table(table: &BlockTable, params: &BesovParams) -> f64 {
    let weighted = table.weighted(|s| s.iter().zip(&params.r).map(|(&sj, &rj)| (sj as f64 * rj).exp2()).product());
    mixed_norm(&weighted, &table.shape(), &params.theta)
}

pub fn besov_seminorm(f: &GridFunction, params: &BesovParams) -> Result<f64> {
    let spec = analyze(f);
    require_zero_mean(&spec)?;
    let table = block_table(&spec, &params.space)?;
    Ok(seminorm_from_table(&table, params))
}

/// `‖f‖*_{X(φ̄)}` plus the seminorm.
pub fn class_norm(f: &GridFunction, params: &BesovParams) -> Result<f64> {
    Ok(lorentz_norm_aniso(f, &params.space)? + besov_seminorm(f, params)?)
}

/// `f / class_norm(f)`.
pub fn normalize_to_ball(f: &GridFunction, params: &BesovParams) -> Result<GridFunction> {
    let c = class_norm(f, params)?;
    if c == 0.0 {
        return Err(Error::domain("cannot normalize the zero function"));
    }
    Ok(f.scale(1.0 / c))
}

/// `μ(s) = ψ(2^{-s})/φ(2^{-s})`, `s = 0..=S`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSeq {
    pub values: Vec<f64>,
}

impl WeightSeq {
    pub fn at(&self, s: usize) -> f64 {
        self.values[s]
    }
}

pub fn mu_weights(psi: &PhiFunction, phi: &PhiFunction, s_max: usize) -> Result<WeightSeq> {
    let values = (0..=s_max)
        .map(|s| {
            let t = (-(s as f64)).exp2();
            let den = phi.value(t);
            if den > 0.0 {
                Ok(psi.value(t) / den)
            } else {
                Err(Error::Degenerate(format!("phi vanishes at 2^-{s}")))
            }
        })
        .collect::<Result<_>>()?;
    Ok(WeightSeq { values })
}

/// `ε = τθ/(θ-τ)` when `θ > τ`, else `∞`.
pub fn epsilon(tau: f64, theta: f64) -> f64 {
    if theta.is_infinite() {
        tau
    } else if theta > tau {
        tau * theta / (theta - tau)
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition13 {
    pub value: f64,
    pub finite: bool,
    pub epsilon: f64,
}

/// `(Σ_{s=0}^{S} (μ(s) 2^{-s r})^ε)^{1/ε}` (a supremum when `ε = ∞`), with a
/// finiteness verdict from the summand ratio over the last quarter of the range.
pub fn condition13_eval(psi: &PhiFunction, phi: &PhiFunction, r: f64, tau: f64, theta: f64, s_max: usize) -> Result<Condition13> {
    if s_max < 4 {
        return Err(Error::domain("condition (13) needs at least 4 terms"));
    }
    let mu = mu_weights(psi, phi, s_max)?;
    let terms: Vec<f64> = mu.values.iter().enumerate().map(|(s, &m)| m * (-(s as f64) * r).exp2()).collect();
    let eps = epsilon(tau, theta);
    let value = crate::numeric::lp_norm(&terms, eps);
    let tail_start = s_max - s_max / 4;
    let worst = terms[tail_start..]
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .fold(0.0, f64::max);
    const RATIO_TOL: f64 = 1e-9;
    let finite = if eps.is_infinite() { worst <= 1.0 + RATIO_TOL } else { worst < 1.0 - RATIO_TOL };
    Ok(Condition13 { value, finite, epsilon: eps })
}
