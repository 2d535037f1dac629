//! Integrals of trigonometric polynomials over products of sets.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::{synthesize, SpectralFunction};
use crate::norms::{lorentz_norm_aniso, LorentzParams};
use crate::numeric::compensated_sum;
use crate::phi::index_flag;
use crate::report::VerificationReport;

/// One instance: a polynomial of degree `n̄`, per-axis cell masks and the axis subset `e`.
#[derive(Clone, Debug)]
pub struct Lemma7Case {
    pub id: String,
    pub poly: SpectralFunction,
    pub degrees: Vec<usize>,
    /// `sets[j][i]`: whether cell `i` of axis `j` belongs to `E_j`.
    pub sets: Vec<Vec<bool>>,
    pub e: Vec<bool>,
}

fn validate(case: &Lemma7Case, m: usize) -> Result<()> {
    let dims = case.poly.dims();
    if dims.len() != m || case.degrees.len() != m || case.sets.len() != m || case.e.len() != m {
        return Err(Error::domain(format!("case {}: dimension mismatch", case.id)));
    }
    for (j, set) in case.sets.iter().enumerate() {
        if set.len() != dims[j] {
            return Err(Error::domain(format!("case {}: axis {} mask has the wrong length", case.id, j + 1)));
        }
        if case.e[j] && case.degrees[j] == 0 {
            return Err(Error::domain(format!("case {}: axis {} in e needs degree >= 1", case.id, j + 1)));
        }
    }
    let tol = 1e-12 * case.poly.max_abs();
    for (k, c) in case.poly.iter() {
        if c.norm() > tol && k.iter().zip(&case.degrees).any(|(&kj, &n)| kj.unsigned_abs() as usize > n) {
            return Err(Error::domain(format!("case {}: coefficient at {k:?} exceeds the degree", case.id)));
        }
    }
    Ok(())
}

/// `(LHS, RHS)` in normalized measure, or `None` when some `E_j` is empty.
pub fn lemma7_sides(case: &Lemma7Case, space: &LorentzParams) -> Result<Option<(f64, f64)>> {
    validate(case, space.m())?;
    let dims = case.poly.dims().to_vec();
    let measures: Vec<f64> = case
        .sets
        .iter()
        .map(|s| s.iter().filter(|&&b| b).count() as f64 / s.len() as f64)
        .collect();
    if measures.contains(&0.0) {
        return Ok(None);
    }
    let t = synthesize(&case.poly);
    let total: usize = dims.iter().product();
    let lhs = compensated_sum(t.samples().iter().enumerate().filter_map(|(flat, z)| {
        let mut rest = flat;
        for (j, &n) in dims.iter().enumerate() {
            if !case.sets[j][rest % n] {
                return None;
            }
            rest /= n;
        }
        Some(z.norm())
    })) / total as f64;
    let mut factor = 1.0;
    for j in 0..dims.len() {
        let phi = &space.psis[j];
        if case.e[j] {
            factor *= measures[j] / phi.value(1.0 / case.degrees[j] as f64);
        } else {
            factor *= measures[j] / phi.value(measures[j]);
        }
    }
    let rhs = factor * lorentz_norm_aniso(&t, space)?;
    Ok(Some((lhs, rhs)))
}

pub fn lemma7_check(cases: &[Lemma7Case], space: &LorentzParams) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("lemma7");
    for (j, phi) in space.psis.iter().enumerate() {
        index_flag(&format!("phi_{}", j + 1), phi, &mut report);
    }
    for case in cases {
        match lemma7_sides(case, space)? {
            Some((lhs, rhs)) => report.push(case.id.clone(), case.degrees.iter().sum::<usize>() as i64, lhs, rhs),
            None => report.note(format!("{}: empty set on some axis, skipped", case.id)),
        }
    }
    Ok(report.finish())
}

/// Random polynomials of degree `degrees`, random cell-union sets and random `e`.
pub fn lemma7_random_cases(dims: &[usize], degrees: &[usize], seed: u64, count: usize) -> Result<Vec<Lemma7Case>> {
    if dims.len() != degrees.len() {
        return Err(Error::domain("degrees and grid dimensions differ"));
    }
    for (&n, &d) in dims.iter().zip(degrees) {
        if 2 * d >= n {
            return Err(Error::resolution(format!("degree {d} needs a grid finer than N = {n}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = dims.len();
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let mut poly = SpectralFunction::zeros(dims.to_vec())?;
        let shape: Vec<usize> = degrees.iter().map(|&d| 2 * d + 1).collect();
        for k in crate::numeric::box_indices(&shape) {
            let freq: Vec<i64> = k.iter().zip(degrees).map(|(&kj, &d)| kj as i64 - d as i64).collect();
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            poly.set(&freq, Complex64::new(re, im))?;
        }
        let sets: Vec<Vec<bool>> = dims
            .iter()
            .map(|&n| {
                if rng.random_bool(0.5) {
                    // an interval of cells
                    let len = rng.random_range(1..=n);
                    let start = rng.random_range(0..n);
                    (0..n).map(|c| (c + n - start) % n < len).collect()
                } else {
                    let p: f64 = rng.random_range(0.05..0.9);
                    (0..n).map(|_| rng.random_bool(p)).collect()
                }
            })
            .collect();
        let e: Vec<bool> = (0..m).map(|_| rng.random_bool(0.5)).collect();
        cases.push(Lemma7Case { id: format!("case{i}"), poly, degrees: degrees.to_vec(), sets, e });
    }
    Ok(cases)
}
