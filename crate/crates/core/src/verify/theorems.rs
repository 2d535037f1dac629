//! Final-statement checks of the maximal-function estimate, the embeddings and
//! the hyperbolic-cross approximation order.

use rayon::prelude::*;

use crate::besov::{block_table, class_norm, condition13_eval, epsilon, mu_weights, seminorm_from_table, BesovParams, BlockTable};
use crate::error::{Error, Result};
use crate::grid::{analyze, cross_residual, hyperbolic_cross, is_zero_mean, max_level, synthesize, unit_block, GridFunction};
use crate::norms::{lorentz_norm_aniso, LorentzParams};
use crate::numeric::{box_indices, compensated_sum, mixed_norm};
use crate::phi::{index_chain_flags, index_flag, PhiFunction, TAIL_S_MAX};
use crate::rearrange::maximal_average;
use crate::report::VerificationReport;

use super::corpus::{truncate_depth, BlockSeries, Corpus};

const ROUNDOFF: f64 = 1e-12;

fn check_m(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::domain(format!("{what} has {got} axes, expected {expected}")));
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":")
}

fn chain_flags(report: &mut VerificationReport, target: &LorentzParams, space: &LorentzParams) {
    for j in 0..target.m() {
        for f in index_chain_flags(&target.psis[j], &space.psis[j]) {
            report.flag(format!("axis {}: {f}", j + 1));
        }
    }
}

/// Maximal average `f̄(t̄)` at `t_j = 2^{-n_j}` against the block-norm sums.
pub fn theorem1_check(f: &GridFunction, ns: &[Vec<usize>], space: &LorentzParams) -> Result<VerificationReport> {
    let m = f.m();
    check_m("space", m, space.m())?;
    let spec = analyze(f);
    if !is_zero_mean(&spec) {
        return Err(Error::Precondition("maximal-function bound needs a zero-mean function".into()));
    }
    for n in ns {
        check_m("n", m, n.len())?;
        for (j, (&nj, &dim)) in n.iter().zip(f.dims()).enumerate() {
            if nj > max_level(dim) {
                return Err(Error::resolution(format!("n_{} = {nj} needs a grid finer than N = {dim}", j + 1)));
            }
        }
    }
    let mut report = VerificationReport::new("theorem1");
    for (j, phi) in space.psis.iter().enumerate() {
        index_flag(&format!("phi_{}", j + 1), phi, &mut report);
    }
    let table = block_table(&spec, space)?;
    let rows: Vec<(String, i64, f64, f64)> = ns
        .par_iter()
        .map(|n| {
            let t: Vec<f64> = n.iter().map(|&nj| (-(nj as f64)).exp2()).collect();
            let lhs = maximal_average(f, &t)?;
            Ok((format!("n={}", join(n)), n.iter().sum::<usize>() as i64, lhs, theorem1_rhs(&table, n, &space.psis)))
        })
        .collect::<Result<_>>()?;
    for (id, scale, lhs, rhs) in rows {
        report.push(id, scale, lhs, rhs);
    }
    Ok(report.finish())
}

/// `∏ 1/φ_j(t_j) Σ_{s̄>n̄} ‖δ_s̄‖ + Σ_{e≠∅} ∏_{j∉e} 1/φ_j(t_j) Σ_{s̄∈G_e} ∏_{j∈e} 1/φ_j(2^{-s_j}) ‖δ_s̄‖`,
/// where `G_e` has `1 <= s_j <= n_j` on `e` and `s_j > n_j` off it. The empty `e`
/// is the first term.
fn theorem1_rhs(table: &BlockTable, n: &[usize], phis: &[PhiFunction]) -> f64 {
    let m = n.len();
    let inv_t: Vec<f64> = (0..m).map(|j| 1.0 / phis[j].value((-(n[j] as f64)).exp2())).collect();
    let mut terms = Vec::new();
    for s in table.indices() {
        let v = table.get(&s);
        if v == 0.0 || s.contains(&0) {
            continue;
        }
        // the axes with s_j <= n_j form the unique e with s̄ ∈ G_e
        let mut w = 1.0;
        for j in 0..m {
            w *= if s[j] <= n[j] { 1.0 / phis[j].value((-(s[j] as f64)).exp2()) } else { inv_t[j] };
        }
        terms.push(w * v);
    }
    compensated_sum(terms)
}

/// Theorem 2 sides from a block table, restricted to `s_j <= depth`.
fn theorem2_rhs(table: &BlockTable, mus: &[Vec<f64>], taus: &[f64], depth: usize) -> f64 {
    let weighted = table.weighted(|s| {
        if s.iter().any(|&sj| sj > depth) {
            0.0
        } else {
            s.iter().enumerate().map(|(j, &sj)| mus[j][sj]).product()
        }
    });
    mixed_norm(&weighted, &table.shape(), taus)
}

fn mu_tables(target: &LorentzParams, space: &LorentzParams, levels: &[usize]) -> Result<Vec<Vec<f64>>> {
    (0..target.m())
        .map(|j| Ok(mu_weights(&target.psis[j], &space.psis[j], levels[j])?.values))
        .collect()
}

/// `‖f‖*_{ψ̄,τ̄}` against the mixed `ℓ_τ̄` norm of `∏ μ_j(s_j) ‖δ_s̄(f)‖*_{X(φ̄)}`.
pub fn theorem2_check(f: &GridFunction, target: &LorentzParams, space: &LorentzParams) -> Result<VerificationReport> {
    check_m("target", f.m(), target.m())?;
    check_m("space", f.m(), space.m())?;
    let mut report = VerificationReport::new("theorem2");
    chain_flags(&mut report, target, space);
    let table = block_table(&analyze(f), space)?;
    let mus = mu_tables(target, space, &table.levels)?;
    let rhs = theorem2_rhs(&table, &mus, &target.taus, usize::MAX);
    report.push("f", 0, lorentz_norm_aniso(f, target)?, rhs);
    Ok(report.finish())
}

/// Theorem 2 on the truncations of each corpus function to block depth `S`, scale `S`.
pub fn theorem2_depth_check(corpus: &Corpus, depths: &[usize], target: &LorentzParams, space: &LorentzParams) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("theorem2");
    chain_flags(&mut report, target, space);
    let rows: Vec<Vec<(String, i64, f64, f64)>> = corpus
        .par_iter()
        .map(|(id, f)| {
            check_m("target", f.m(), target.m())?;
            check_m("space", f.m(), space.m())?;
            let spec = analyze(f);
            let table = block_table(&spec, space)?;
            let mus = mu_tables(target, space, &table.levels)?;
            depths
                .iter()
                .map(|&depth| {
                    if table.levels.iter().any(|&l| l < depth) {
                        return Err(Error::resolution(format!("depth {depth} exceeds the grid Nyquist level")));
                    }
                    let lhs = lorentz_norm_aniso(&synthesize(&truncate_depth(&spec, depth)), target)?;
                    Ok((id.clone(), depth as i64, lhs, theorem2_rhs(&table, &mus, &target.taus, depth)))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    for (id, scale, lhs, rhs) in rows.into_iter().flatten() {
        report.push(id, scale, lhs, rhs);
    }
    Ok(report.finish())
}

/// Embedding ratio `‖f‖*_{ψ̄,τ̄} / (‖f‖*_{X(φ̄)} + seminorm)` plus the Hölder/Jensen route:
/// the Theorem 2 right side `σ` against `∏_j ‖μ_j(s) 2^{-s r_j}‖_{ℓ_{ε_j}}` times the seminorm.
pub fn theorem3_check(f: &GridFunction, besov: &BesovParams, target: &LorentzParams) -> Result<VerificationReport> {
    let m = f.m();
    check_m("target", m, target.m())?;
    check_m("Besov parameters", m, besov.m())?;
    let mut report = VerificationReport::new("theorem3");
    chain_flags(&mut report, target, &besov.space);
    let mut route_constant = 1.0;
    for j in 0..m {
        let c = condition13_eval(&target.psis[j], &besov.space.psis[j], besov.r[j], target.taus[j], besov.theta[j], TAIL_S_MAX)?;
        if !c.finite {
            report.flag(format!("axis {}: weight condition diverges", j + 1));
        }
        let regime = if besov.theta[j] > target.taus[j] { "tau < theta" } else { "theta <= tau" };
        report.note(format!("axis {}: regime {regime}, epsilon = {}", j + 1, c.epsilon));
        route_constant *= c.value;
    }
    let spec = analyze(f);
    let table = block_table(&spec, &besov.space)?;
    let mus = mu_tables(target, &besov.space, &table.levels)?;
    let sigma = theorem2_rhs(&table, &mus, &target.taus, usize::MAX);
    let lhs = lorentz_norm_aniso(f, target)?;
    let cn = class_norm(f, besov)?;
    report.push("embedding", 0, lhs, cn);
    report.push("route", 0, sigma, route_constant * seminorm_from_table(&table, besov));
    Ok(report.finish())
}

/// `L*_{λ̄,τ̄}` built from `pow:1/λ_j`.
pub fn lambda_space(lambdas: &[f64], taus: &[f64]) -> Result<LorentzParams> {
    let psis = lambdas.iter().map(|&l| PhiFunction::power(1.0 / l)).collect::<Result<Vec<_>>>()?;
    LorentzParams::new(psis, taus.to_vec())
}

fn theorem4_flags(report: &mut VerificationReport, lambdas: &[f64], target: &LorentzParams) {
    for j in 0..target.m() {
        let base = (1.0 / lambdas[j]).exp2();
        if let Some(ix) = index_flag(&format!("psi_{}", j + 1), &target.psis[j], report) {
            if !(base > 1.0 && base < ix.alpha) {
                report.flag(format!("axis {}: 2^(1/lambda) = {base:.6} is not inside (1, alpha_psi = {:.6})", j + 1, ix.alpha));
            }
        }
        if !(target.taus[j] > 1.0 && target.taus[j].is_finite()) {
            report.flag(format!("axis {}: tau = {} is not in (1, inf)", j + 1, target.taus[j]));
        }
    }
}

/// Sides of the lower estimate for one series on one grid.
pub fn theorem4_sides(series: &BlockSeries, lambdas: &[f64], target: &LorentzParams, dims: &[usize]) -> Result<(f64, f64)> {
    let m = series.m();
    check_m("target", m, target.m())?;
    check_m("lambda", m, lambdas.len())?;
    let lam_space = lambda_space(lambdas, &target.taus)?;
    let lhs = lorentz_norm_aniso(&series.realize(dims)?, target)?;
    let depth = series.depth().max(1);
    let shape = vec![depth; m];
    let blocks: Vec<Vec<usize>> = box_indices(&shape).map(|k| k.iter().map(|v| v + 1).collect()).collect();
    let values = blocks
        .par_iter()
        .map(|s| {
            let b = series.coefficient(s);
            if b == 0.0 {
                return Ok(0.0);
            }
            let block = lorentz_norm_aniso(&unit_block(dims, s)?, &lam_space)? * b;
            let w: f64 = s
                .iter()
                .enumerate()
                .map(|(j, &sj)| (sj as f64 / lambdas[j]).exp2() * target.psis[j].value((-(sj as f64)).exp2()))
                .product();
            Ok(w * block)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((lhs, mixed_norm(&values, &shape, &target.taus)))
}

pub fn theorem4_check(series: &BlockSeries, lambdas: &[f64], target: &LorentzParams, dims: &[usize]) -> Result<VerificationReport> {
    theorem4_corpus_check(&[("series".to_string(), series.clone())], lambdas, target, dims)
}

/// One row per series; scale is the series depth.
pub fn theorem4_corpus_check(corpus: &[(String, BlockSeries)], lambdas: &[f64], target: &LorentzParams, dims: &[usize]) -> Result<VerificationReport> {
    check_m("lambda", target.m(), lambdas.len())?;
    let mut report = VerificationReport::new("theorem4");
    theorem4_flags(&mut report, lambdas, target);
    for (id, series) in corpus {
        let (lhs, rhs) = theorem4_sides(series, lambdas, target, dims)?;
        report.push(id.clone(), series.depth() as i64, lhs, rhs);
    }
    Ok(report.finish())
}

/// Weight `∏ 2^{-s_j r_j} μ_j(s_j)` on `s_j <= TAIL_S_MAX`, zero off `⟨s̄,γ̄⟩ >= n`,
/// reduced by the mixed `ℓ_ε̄` norm.
fn theorem5_rhs(mu: &[Vec<f64>], r: &[f64], eps: &[f64], gamma: &[f64], n: usize) -> f64 {
    let m = mu.len();
    let shape = vec![TAIL_S_MAX + 1; m];
    let values: Vec<f64> = box_indices(&shape)
        .map(|s| {
            let dot: f64 = s.iter().zip(gamma).map(|(&sj, &g)| sj as f64 * g).sum();
            if dot < n as f64 {
                return 0.0;
            }
            s.iter().enumerate().map(|(j, &sj)| (-(sj as f64) * r[j]).exp2() * mu[j][sj]).product()
        })
        .collect();
    mixed_norm(&values, &shape, eps)
}

/// `‖f − S_n^γ f‖*_{ψ̄,τ̄}` against the weight norm over `Y^m(γ̄, n)`, per `(f, n)`.
pub fn theorem5_check(besov: &BesovParams, target: &LorentzParams, gamma: &[f64], n_range: &[usize], corpus: &Corpus) -> Result<VerificationReport> {
    let m = besov.m();
    check_m("target", m, target.m())?;
    check_m("gamma", m, gamma.len())?;
    let mut report = VerificationReport::new("theorem5");
    chain_flags(&mut report, target, &besov.space);
    let mut mu = Vec::with_capacity(m);
    let mut eps = Vec::with_capacity(m);
    for j in 0..m {
        let c = condition13_eval(&target.psis[j], &besov.space.psis[j], besov.r[j], target.taus[j], besov.theta[j], TAIL_S_MAX)?;
        if !c.finite {
            report.flag(format!("axis {}: weight condition diverges", j + 1));
        }
        eps.push(epsilon(target.taus[j], besov.theta[j]));
        mu.push(mu_weights(&target.psis[j], &besov.space.psis[j], TAIL_S_MAX)?.values);
    }
    report.note(format!("weights summed over s_j <= {TAIL_S_MAX}; the omitted tail is below 2^-{TAIL_S_MAX} times the first term"));
    let crosses = n_range
        .iter()
        .map(|&n| hyperbolic_cross(gamma, n as f64, m))
        .collect::<Result<Vec<_>>>()?;
    let rhs: Vec<f64> = n_range.iter().map(|&n| theorem5_rhs(&mu, &besov.r, &eps, gamma, n)).collect();
    let rows: Vec<Vec<(String, i64, f64, f64)>> = corpus
        .par_iter()
        .map(|(id, f)| {
            check_m("corpus function", m, f.m())?;
            let cn = class_norm(f, besov)?;
            let spec = analyze(f);
            // coefficients at transform roundoff level are treated as absent
            let floor = ROUNDOFF * spec.max_abs();
            let mut out = Vec::with_capacity(n_range.len());
            for ((&n, cross), &r) in n_range.iter().zip(&crosses).zip(&rhs) {
                let residual = synthesize(&cross_residual(&spec, cross)?.chop(floor));
                out.push((id.clone(), n as i64, lorentz_norm_aniso(&residual, target)?, r));
            }
            Ok((cn, out))
        })
        .collect::<Result<Vec<(f64, Vec<_>)>>>()?
        .into_iter()
        .zip(corpus)
        .map(|((cn, out), (id, _))| {
            if cn > 1.0 + 1e-9 {
                report.flag(format!("{id}: class norm {cn:.6} lies outside the unit ball"));
            }
            out
        })
        .collect();
    for (id, scale, lhs, rhs) in rows.into_iter().flatten() {
        report.push(id, scale, lhs, rhs);
    }
    Ok(report.finish())
}
