//! Generalized Lorentz norms (isotropic and anisotropic), Lebesgue and classical
//! Lorentz norms, and the block and Dirichlet-kernel norm checks.

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};
use crate::grid::{dirichlet_kernel, max_level, unit_block, GridFunction};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::phi::{log_integral, PhiFunction};
use crate::rearrange::iterated_sort;
use crate::report::VerificationReport;

/// Log-uniform midpoint pieces per rearrangement cell for non-power `ψ`.
pub const CELL_PIECES: usize = 8;

/// `(ψ̄, τ̄)`: one Φ-function and exponent per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzParams {
    pub psis: Vec<PhiFunction>,
    pub taus: Vec<f64>,
}

impl LorentzParams {
    pub fn new(psis: Vec<PhiFunction>, taus: Vec<f64>) -> Result<Self> {
        if psis.len() != taus.len() || psis.is_empty() {
            return Err(Error::domain(format!(
                "{} Φ-functions but {} exponents",
                psis.len(),
                taus.len()
            )));
        }
        if let Some(t) = taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::domain(format!("exponent {t} must be positive and finite")));
        }
        Ok(Self { psis, taus })
    }

    /// Same `(ψ, τ)` on all `m` axes.
    pub fn uniform(m: usize, psi: PhiFunction, tau: f64) -> Result<Self> {
        Self::new(vec![psi; m], vec![tau; m])
    }

    /// `L_q` on every axis: `ψ = t^{1/q}`, `τ = q`.
    pub fn lebesgue(m: usize, q: f64) -> Result<Self> {
        Self::uniform(m, PhiFunction::power(1.0 / q)?, q)
    }

    pub fn m(&self) -> usize {
        self.psis.len()
    }

    /// Parameters acting on a single axis.
    pub fn axis(&self, j: usize) -> LorentzParams {
        LorentzParams {
            psis: vec![self.psis[j].clone()],
            taus: vec![self.taus[j]],
        }
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if self.m() != m {
            return Err(Error::domain(format!("norm has {} axes but the function has {m}", self.m())));
        }
        Ok(())
    }
}

/// `W_i = ∫_{i/n}^{(i+1)/n} ψ^τ(t) dt/t` for `i = 0..n`.
pub fn cell_weights(psi: &PhiFunction, tau: f64, n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (0..n)
        .map(|i| log_integral(psi, tau, i as f64 * h, (i + 1) as f64 * h, CELL_PIECES))
        .collect()
}

fn sorted_desc(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| b.total_cmp(a));
    v
}

/// `Σ v_i^τ W_i` for a non-increasing `v`.
fn weighted_power_sum(v: &[f64], weights: &[f64], tau: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (&x, &w) in v.iter().zip(weights) {
        if x > 0.0 {
            acc.add(x.powf(tau) * w);
        }
    }
    acc.value()
}

/// `‖f‖*_{ψ,τ}` over all of `I^m` with the full (non-iterated) rearrangement.
pub fn lorentz_norm_iso(f: &GridFunction, psi: &PhiFunction, tau: f64) -> f64 {
    lorentz_norm_iso_values(&f.abs_values(), psi, tau)
}

pub fn lorentz_norm_iso_values(values: &[f64], psi: &PhiFunction, tau: f64) -> f64 {
    let v = sorted_desc(values);
    let w = cell_weights(psi, tau, v.len());
    weighted_power_sum(&v, &w, tau).powf(1.0 / tau)
}

/// `‖f‖*_{ψ̄,τ̄}`: iterated rearrangement, then `t_1` innermost through `t_m` outermost
/// with the exponent chain `τ_{j+1}/τ_j`.
pub fn lorentz_norm_aniso(f: &GridFunction, params: &LorentzParams) -> Result<f64> {
    params.check_m(f.m())?;
    lorentz_norm_aniso_values(f.dims(), &f.abs_values(), params)
}

pub fn lorentz_norm_aniso_values(dims: &[usize], values: &[f64], params: &LorentzParams) -> Result<f64> {
    params.check_m(dims.len())?;
    let r = iterated_sort(dims, values)?;
    Ok(aniso_of_rearranged(dims, &r.values, params))
}

/// Anisotropic norm of values that are already non-increasing along every axis.
pub(crate) fn aniso_of_rearranged(dims: &[usize], values: &[f64], params: &LorentzParams) -> f64 {
    // I_1 = ∫ ψ_1^{τ_1} (f*)^{τ_1} dt/t on each axis-1 fiber; the result is
    // raised to τ_{j+1}/τ_j and integrated along the next axis
    let w0 = cell_weights(&params.psis[0], params.taus[0], dims[0]);
    let mut current: Vec<f64> = values.chunks(dims[0]).map(|fiber| weighted_power_sum(fiber, &w0, params.taus[0])).collect();
    for j in 1..dims.len() {
        let (tau, prev) = (params.taus[j], params.taus[j - 1]);
        let w = cell_weights(&params.psis[j], tau, dims[j]);
        current = current
            .chunks(dims[j])
            .map(|fiber| {
                // iterated rearrangement keeps each fiber non-increasing, so the
                // inner integrals are non-increasing along axis j as well
                compensated_sum(fiber.iter().zip(&w).map(|(&v, &wi)| if v > 0.0 { v.powf(tau / prev) * wi } else { 0.0 }))
            })
            .collect();
    }
    current[0].powf(1.0 / params.taus[dims.len() - 1])
}

/// `(mean |f|^q)^{1/q}`; `q = ∞` gives the maximum.
pub fn lebesgue_norm(f: &GridFunction, q: f64) -> f64 {
    let v = f.abs_values();
    if q.is_infinite() {
        return v.iter().fold(0.0, |m: f64, &x| m.max(x));
    }
    let n = v.len() as f64;
    (compensated_sum(v.iter().map(|x| x.powf(q))) / n).powf(1.0 / q)
}

/// `((τ/q) ∫_0^1 (∫_0^t f*)^τ t^{τ(1/q-1)-1} dt)^{1/τ}`.
///
/// `∫_0^t f*` is piecewise linear; each cell is integrated exactly by binomial
/// expansion for integer `τ` and by 16-point Gauss-Legendre otherwise.
pub fn classical_lorentz_norm(f: &GridFunction, q: f64, tau: f64) -> Result<f64> {
    classical_lorentz_norm_values(&f.abs_values(), q, tau)
}

pub fn classical_lorentz_norm_values(values: &[f64], q: f64, tau: f64) -> Result<f64> {
    if !(q > 1.0 && q.is_finite() && tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("classical Lorentz norm needs 1 < q < ∞, 0 < τ < ∞ (q={q}, τ={tau})")));
    }
    let v = sorted_desc(values);
    let n = v.len();
    let h = 1.0 / n as f64;
    let p = tau * (1.0 / q - 1.0) - 1.0;
    let integer_tau = (tau - tau.round()).abs() < 1e-12;
    let quad = GaussLegendre::new(16.try_into().expect("16 > 1"));
    let mut acc = CompensatedSum::new();
    // first cell: F(t) = v_0 t, ∫_0^h v^τ t^{τ+p} dt with τ + p + 1 = τ/q > 0
    acc.add(v[0].powf(tau) * h.powf(tau / q) / (tau / q));
    let mut prefix = v[0] * h;
    for i in 1..n {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        // F(t) = c + v_i t on [a, b], with c = prefix - v_i a >= 0
        let c = (prefix - v[i] * a).max(0.0);
        let cell = if integer_tau {
            binomial_cell(c, v[i], tau.round() as u32, p, a, b)
        } else {
            quad.integrate(a, b, |t| (c + v[i] * t).powf(tau) * t.powf(p))
        };
        acc.add(cell);
        prefix += v[i] * h;
    }
    Ok((tau / q * acc.value()).max(0.0).powf(1.0 / tau))
}

/// `∫_a^b (c + v t)^k t^p dt` for integer `k`.
fn binomial_cell(c: f64, v: f64, k: u32, p: f64, a: f64, b: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut binom = 1.0;
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as f64 / j as f64;
        }
        let e = j as f64 + p + 1.0;
        let moment = if e.abs() < 1e-14 { (b / a).ln() } else { (b.powf(e) - a.powf(e)) / e };
        let coef = binom * c.powi((k - j) as i32) * v.powi(j as i32);
        if coef != 0.0 {
            acc.add(coef * moment);
        }
    }
    acc.value()
}

/// Which block indices `block_norm_check` visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSelection {
    /// Every `s̄` with `s_min <= s_j <= s_max`.
    Box,
    /// `s̄ = (s, ..., s)`.
    Diagonal,
}

/// Ratio `‖Σ_{k̄∈ρ(s̄)} e^{i⟨k̄,x̄⟩}‖*_{ψ̄,τ̄} / ∏ 2^{s_j} ψ_j(2^{-s_j})` over blocks.
pub fn block_norm_check(
    params: &LorentzParams,
    s_min: usize,
    s_max: usize,
    dims: &[usize],
    selection: BlockSelection,
) -> Result<VerificationReport> {
    params.check_m(dims.len())?;
    let mut report = VerificationReport::new("blocks");
    for (j, (&n, psi)) in dims.iter().zip(&params.psis).enumerate() {
        if s_max > max_level(n) {
            return Err(Error::resolution(format!(
                "block level {s_max} exceeds the Nyquist limit of axis {} (N = {n})",
                j + 1
            )));
        }
        if let Ok(ix) = psi.dilation_indices(crate::phi::PROBE_DEPTH) {
            if !ix.strictly_inside() {
                report.flag(format!("index precondition violated for psi_{} = {psi}", j + 1));
            }
        }
    }
    let blocks: Vec<Vec<usize>> = match selection {
        BlockSelection::Diagonal => (s_min..=s_max).map(|s| vec![s; dims.len()]).collect(),
        BlockSelection::Box => {
            let side = s_max + 1 - s_min;
            crate::numeric::box_indices(&vec![side; dims.len()])
                .map(|idx| idx.iter().map(|i| i + s_min).collect())
                .collect()
        }
    };
    for s in blocks {
        let f = unit_block(dims, &s)?;
        let lhs = lorentz_norm_aniso(&f, params)?;
        let rhs: f64 = s
            .iter()
            .zip(&params.psis)
            .map(|(&sj, psi)| {
                let t = (-(sj as f64)).exp2();
                psi.value(t) / t
            })
            .product();
        let label: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        report.push(format!("s={}", label.join(":")), s.iter().sum::<usize>() as i64, lhs, rhs);
    }
    Ok(report.finish())
}

/// Ratio `‖D_n‖*_{φ̃,η} / (n φ̃(1/n))` for `n = 2^k`, `k = 0..=k_max`, on a grid of `2^grid_log2` points.
pub fn dirichlet_norm_check(phi: &PhiFunction, eta: f64, k_max: usize, grid_log2: u32) -> Result<VerificationReport> {
    let grid = 1usize << grid_log2;
    let tilde = phi.tilde();
    let mut report = VerificationReport::new("dirichlet");
    if let Ok(ix) = phi.dilation_indices(crate::phi::PROBE_DEPTH) {
        if !(ix.alpha > 1.0 && ix.beta <= 2.0) {
            report.flag(format!("index precondition 1 < alpha <= beta <= 2 violated for phi = {phi}"));
        }
    }
    for k in 0..=k_max {
        let n = 1usize << k;
        let d = dirichlet_kernel(n, grid)?;
        let lhs = lorentz_norm_iso(&d, &tilde, eta);
        let rhs = n as f64 * tilde.value(1.0 / n as f64);
        report.push(format!("n={n}"), n as i64, lhs, rhs);
    }
    Ok(report.finish())
}
