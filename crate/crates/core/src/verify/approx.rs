//! Coordinate-descent refinement of the hyperbolic-cross partial sum toward the
//! best approximation in a Lorentz norm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{analyze, cross_part, synthesize, GridFunction, HyperbolicCross};
use crate::norms::{lorentz_norm_aniso_values, LorentzParams};

#[derive(Clone, Debug)]
pub struct Refinement {
    pub approximant: GridFunction,
    /// `‖f − t*‖*_{ψ̄,τ̄}`.
    pub error: f64,
    /// `‖f − S_n^γ f‖*_{ψ̄,τ̄}`.
    pub partial_sum_error: f64,
    /// Error after every sweep, starting with the partial-sum error.
    pub history: Vec<f64>,
}

/// A real direction in the coefficient space of the cross.
#[derive(Clone, Debug)]
struct Coordinate {
    k: Vec<i64>,
    imaginary: bool,
    /// Move `k` and `-k` together so that real inputs stay real.
    paired: bool,
}

/// Whether `k` is the representative of `{k, -k}`: zero, or last nonzero entry positive.
fn representative(k: &[i64]) -> bool {
    k.iter().rev().find(|&&v| v != 0).is_none_or(|&v| v > 0)
}

fn coordinates(cross: &HyperbolicCross, real: bool) -> Vec<Coordinate> {
    let mut out = Vec::new();
    for k in cross.index_set() {
        if real {
            if !representative(&k) {
                continue;
            }
            out.push(Coordinate { k: k.clone(), imaginary: false, paired: true });
            if k.iter().any(|&v| v != 0) {
                out.push(Coordinate { k, imaginary: true, paired: true });
            }
        } else {
            out.push(Coordinate { k: k.clone(), imaginary: false, paired: false });
            out.push(Coordinate { k, imaginary: true, paired: false });
        }
    }
    out
}

/// Samples of the basis function of one coordinate.
fn basis(dims: &[usize], c: &Coordinate) -> Vec<Complex64> {
    let total: usize = dims.iter().product();
    let self_conjugate = c.k.iter().all(|&v| v == 0);
    (0..total)
        .map(|mut flat| {
            let mut phase = 0.0;
            for (&n, &kj) in dims.iter().zip(&c.k) {
                let i = flat % n;
                flat /= n;
                phase += std::f64::consts::TAU * ((kj * i as i64).rem_euclid(n as i64)) as f64 / n as f64;
            }
            let e = Complex64::from_polar(1.0, phase);
            match (c.paired && !self_conjugate, c.imaginary) {
                // e_k + e_{-k} and i(e_k - e_{-k})
                (true, false) => Complex64::new(2.0 * e.re, 0.0),
                (true, true) => Complex64::new(-2.0 * e.im, 0.0),
                (false, false) => e,
                (false, true) => e * Complex64::i(),
            }
        })
        .collect()
}

fn residual_norm(dims: &[usize], r: &[Complex64], target: &LorentzParams) -> Result<f64> {
    let abs: Vec<f64> = r.iter().map(|z| z.norm()).collect();
    lorentz_norm_aniso_values(dims, &abs, target)
}

/// Start from `S_n^γ f` and run up to `iters` cyclic sweeps. A sweep tries `±step`
/// along every coordinate and keeps strict decreases; a sweep without progress
/// halves the step.
pub fn best_approx_refine(f: &GridFunction, cross: &HyperbolicCross, target: &LorentzParams, iters: usize) -> Result<Refinement> {
    if target.m() != f.m() {
        return Err(Error::domain("target and function dimensions differ"));
    }
    if let Some(t) = target.taus.iter().find(|&&t| t < 1.0) {
        return Err(Error::domain(format!("refinement needs tau >= 1, got {t}")));
    }
    let dims = f.dims().to_vec();
    let partial = synthesize(&cross_part(&analyze(f), cross)?);
    let mut r: Vec<Complex64> = f.samples().iter().zip(partial.samples()).map(|(a, b)| a - b).collect();
    let partial_sum_error = residual_norm(&dims, &r, target)?;
    let mut error = partial_sum_error;
    let mut history = vec![error];
    if error > 0.0 {
        let coords = coordinates(cross, f.is_real());
        let mut step = 0.5 * error;
        let floor = 1e-13 * error;
        let mut cand = r.clone();
        for _ in 0..iters {
            let mut improved = false;
            for c in &coords {
                let b = basis(&dims, c);
                for sign in [1.0, -1.0] {
                    for ((x, &ri), &bi) in cand.iter_mut().zip(&r).zip(&b) {
                        *x = ri - bi * (sign * step);
                    }
                    let e = residual_norm(&dims, &cand, target)?;
                    if e < error {
                        error = e;
                        std::mem::swap(&mut r, &mut cand);
                        improved = true;
                        break;
                    }
                }
            }
            history.push(error);
            if !improved {
                step *= 0.5;
                if step < floor {
                    break;
                }
            }
        }
    }
    let approximant = GridFunction::new(dims, f.samples().iter().zip(&r).map(|(a, b)| a - b).collect())?;
    Ok(Refinement { approximant, error, partial_sum_error, history })
}
