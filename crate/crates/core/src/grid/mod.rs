//! Sampled periodic functions on dyadic grids and their discrete Fourier analysis.
//!
//! Samples are stored row-major with axis 1 fastest at `x_j = 2π i_j / N_j`.
//! Spectra are dense arrays in FFT bin order; bin `i` carries frequency `i` for
//! `i < N/2` and `i - N` above. The Nyquist bin `N/2` is kept for exact round
//! trips but belongs to no dyadic block.

mod cross;
mod io;
mod source;

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::numeric::log2_exact;

pub use cross::{hyperbolic_cross, HyperbolicCross};
pub use io::{read_grid, read_grid_file, write_grid};
pub use source::{rect_indicator, random_bandlimited, unit_block, Source};

pub const MAX_DIM: usize = 3;
const REAL_TOL: f64 = 1e-10;

fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.len() > MAX_DIM {
        return Err(Error::domain(format!("dimension m = {} outside 1..=3", dims.len())));
    }
    for &n in dims {
        if log2_exact(n).is_none() || n < 4 {
            return Err(Error::domain(format!("axis length {n} is not a power of two >= 4")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    dims: Vec<usize>,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(dims: Vec<usize>, samples: Vec<Complex64>) -> Result<Self> {
        validate_dims(&dims)?;
        let total: usize = dims.iter().product();
        if samples.len() != total {
            return Err(Error::domain(format!(
                "{} samples for a grid of {total} points",
                samples.len()
            )));
        }
        Ok(Self { dims, samples })
    }

    pub fn from_real(dims: Vec<usize>, values: &[f64]) -> Result<Self> {
        Self::new(dims, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let total = dims.iter().product();
        Self::new(dims, vec![Complex64::new(0.0, 0.0); total])
    }

    /// Sample `f(x̄)` at every grid point.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(dims: Vec<usize>, f: F) -> Result<Self> {
        validate_dims(&dims)?;
        let total: usize = dims.iter().product();
        let mut x = vec![0.0; dims.len()];
        let samples = (0..total)
            .map(|flat| {
                let mut rem = flat;
                for (j, &n) in dims.iter().enumerate() {
                    x[j] = std::f64::consts::TAU * (rem % n) as f64 / n as f64;
                    rem /= n;
                }
                f(&x)
            })
            .collect();
        Ok(Self { dims, samples })
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im.abs() < REAL_TOL)
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        GridFunction {
            dims: self.dims.clone(),
            samples: self.samples.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &GridFunction, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<GridFunction> {
        if self.dims != other.dims {
            return Err(Error::domain("grid shapes differ"));
        }
        Ok(GridFunction {
            dims: self.dims.clone(),
            samples: self.samples.iter().zip(&other.samples).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction {
    dims: Vec<usize>,
    coeffs: Vec<Complex64>,
}

/// Frequency carried by FFT bin `i` of an axis of length `n`; Nyquist maps to `-n/2`.
pub fn bin_to_freq(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT bin of frequency `k`, if `|k| < n/2`.
pub fn freq_to_bin(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k.abs() >= half {
        None
    } else if k >= 0 {
        Some(k as usize)
    } else {
        Some((n as i64 + k) as usize)
    }
}

/// Dyadic level of a frequency: `0` for `k = 0`, else `s` with `2^{s-1} <= |k| < 2^s`.
pub fn freq_level(k: i64) -> usize {
    if k == 0 {
        0
    } else {
        (64 - k.unsigned_abs().leading_zeros()) as usize
    }
}

/// Largest block level `S` with `2^S <= N/2`.
pub fn max_level(n: usize) -> usize {
    log2_exact(n).map_or(0, |l| l.saturating_sub(1) as usize)
}

impl SpectralFunction {
    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        validate_dims(&dims)?;
        let total = dims.iter().product();
        Ok(Self {
            dims,
            coeffs: vec![Complex64::new(0.0, 0.0); total],
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    /// Raw coefficients in FFT bin order, Nyquist bins included.
    pub fn raw(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn flat_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dims.len() {
            return None;
        }
        let mut flat = 0;
        let mut stride = 1;
        for (&kj, &n) in k.iter().zip(&self.dims) {
            flat += freq_to_bin(kj, n)? * stride;
            stride *= n;
        }
        Some(flat)
    }

    fn freqs_of(&self, mut flat: usize) -> (Vec<i64>, bool) {
        let mut nyquist = false;
        let k = self
            .dims
            .iter()
            .map(|&n| {
                let i = flat % n;
                flat /= n;
                nyquist |= i == n / 2;
                bin_to_freq(i, n)
            })
            .collect();
        (k, nyquist)
    }

    /// `a_k̄` for `|k_j| < N_j/2`.
    pub fn coefficient(&self, k: &[i64]) -> Option<Complex64> {
        self.flat_index(k).map(|i| self.coeffs[i])
    }

    pub fn set(&mut self, k: &[i64], value: Complex64) -> Result<()> {
        let i = self
            .flat_index(k)
            .ok_or_else(|| Error::resolution(format!("frequency {k:?} outside the grid spectrum")))?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// All `(k̄, a_k̄)` below Nyquist.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        (0..self.coeffs.len()).filter_map(move |flat| {
            let (k, nyq) = self.freqs_of(flat);
            (!nyq).then(|| (k, self.coeffs[flat]))
        })
    }

    /// `Σ |a_k̄|²` over every bin.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Keep only coefficients whose frequency satisfies `keep`; Nyquist bins are dropped.
    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> SpectralFunction {
        let coeffs = (0..self.coeffs.len())
            .map(|flat| {
                let (k, nyq) = self.freqs_of(flat);
                if !nyq && keep(&k) {
                    self.coeffs[flat]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        SpectralFunction {
            dims: self.dims.clone(),
            coeffs,
        }
    }

    /// Zero every coefficient of magnitude at most `tol`.
    pub fn chop(&self, tol: f64) -> SpectralFunction {
        let coeffs = self.coeffs.iter().map(|&c| if c.norm() <= tol { Complex64::new(0.0, 0.0) } else { c }).collect();
        SpectralFunction {
            dims: self.dims.clone(),
            coeffs,
        }
    }

    /// Restriction to `ρ(s̄)`.
    pub fn block(&self, s: &[usize]) -> Result<SpectralFunction> {
        check_block_fits(s, &self.dims)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        for_each_block_bin(s, &self.dims, |flat| coeffs[flat] = self.coeffs[flat]);
        Ok(SpectralFunction {
            dims: self.dims.clone(),
            coeffs,
        })
    }

    /// Largest coefficient magnitude inside `ρ(s̄)`, without allocating.
    pub fn block_max_abs(&self, s: &[usize]) -> f64 {
        let mut best = 0.0_f64;
        for_each_block_bin(s, &self.dims, |flat| best = best.max(self.coeffs[flat].norm()));
        best
    }

    pub fn scale(&self, c: f64) -> SpectralFunction {
        SpectralFunction {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }
}

fn check_block_fits(s: &[usize], dims: &[usize]) -> Result<()> {
    if s.len() != dims.len() {
        return Err(Error::domain(format!("block index {s:?} has wrong dimension")));
    }
    for (&sj, &n) in s.iter().zip(dims) {
        if sj > max_level(n) {
            return Err(Error::resolution(format!(
                "block level {sj} needs 2^{sj} <= N/2 but N = {n}"
            )));
        }
    }
    Ok(())
}

fn for_each_block_bin(s: &[usize], dims: &[usize], mut visit: impl FnMut(usize)) {
    let axes: Vec<Vec<usize>> = s
        .iter()
        .zip(dims)
        .map(|(&sj, &n)| axis_range(sj).into_iter().filter_map(|k| freq_to_bin(k, n)).collect())
        .collect();
    let mut idx = vec![0usize; axes.len()];
    if axes.iter().any(Vec::is_empty) {
        return;
    }
    loop {
        let mut flat = 0;
        let mut stride = 1;
        for (j, a) in axes.iter().enumerate() {
            flat += a[idx[j]] * stride;
            stride *= dims[j];
        }
        visit(flat);
        let mut j = 0;
        loop {
            if j == axes.len() {
                return;
            }
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Frequencies of one axis in `ρ`: `{0}` at level 0, else `±[2^{s-1}, 2^s)`.
pub fn axis_range(s: usize) -> Vec<i64> {
    if s == 0 {
        return vec![0];
    }
    let lo = 1i64 << (s - 1);
    let hi = 1i64 << s;
    (lo..hi).chain(-hi + 1..=-lo).collect()
}

/// The index set `ρ(s̄)` as explicit multi-indices, axis 1 fastest.
pub fn rho_block(s: &[i64]) -> Result<Vec<Vec<i64>>> {
    if s.is_empty() {
        return Err(Error::domain("empty block index"));
    }
    if let Some(&neg) = s.iter().find(|&&v| v < 0) {
        return Err(Error::domain(format!("negative block level {neg}")));
    }
    let axes: Vec<Vec<i64>> = s.iter().map(|&sj| axis_range(sj as usize)).collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for &k in axis {
            for prefix in &out {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        out = next;
    }
    // restore axis-1-fastest ordering
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    Ok(out)
}

struct Plans {
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

fn plans(dims: &[usize]) -> Plans {
    let mut planner = FftPlanner::new();
    Plans {
        forward: dims.iter().map(|&n| planner.plan_fft_forward(n)).collect(),
        inverse: dims.iter().map(|&n| planner.plan_fft_inverse(n)).collect(),
    }
}

fn transform_axes(data: &mut [Complex64], dims: &[usize], ffts: &[Arc<dyn Fft<f64>>]) {
    let total = data.len();
    let mut stride = 1;
    for (axis, &n) in dims.iter().enumerate() {
        let fft = &ffts[axis];
        if stride == 1 {
            fft.process(data);
        } else {
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            let block = stride * n;
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    for (i, b) in buf.iter_mut().enumerate() {
                        *b = data[base + off + i * stride];
                    }
                    fft.process(&mut buf);
                    for (i, b) in buf.iter().enumerate() {
                        data[base + off + i * stride] = *b;
                    }
                }
            }
        }
        stride *= n;
    }
}

/// `a_k̄ = (1/∏N_j) Σ f(x̄) e^{-i⟨k̄,x̄⟩}`.
pub fn analyze(f: &GridFunction) -> SpectralFunction {
    let p = plans(&f.dims);
    let mut data = f.samples.clone();
    transform_axes(&mut data, &f.dims, &p.forward);
    let norm = 1.0 / data.len() as f64;
    for z in &mut data {
        *z *= norm;
    }
    SpectralFunction {
        dims: f.dims.clone(),
        coeffs: data,
    }
}

/// `f(x̄) = Σ a_k̄ e^{i⟨k̄,x̄⟩}`.
pub fn synthesize(spec: &SpectralFunction) -> GridFunction {
    let p = plans(&spec.dims);
    let mut data = spec.coeffs.clone();
    transform_axes(&mut data, &spec.dims, &p.inverse);
    GridFunction {
        dims: spec.dims.clone(),
        samples: data,
    }
}

/// `δ_s̄(f)`: synthesis restricted to `ρ(s̄)`.
pub fn dyadic_block(spec: &SpectralFunction, s: &[usize]) -> Result<GridFunction> {
    Ok(synthesize(&spec.block(s)?))
}

/// `S_n^γ(f)`: synthesis restricted to the cross.
pub fn partial_sum(spec: &SpectralFunction, cross: &HyperbolicCross) -> Result<GridFunction> {
    Ok(synthesize(&cross_part(spec, cross)?))
}

/// Spectrum of `S_n^γ(f)`.
pub fn cross_part(spec: &SpectralFunction, cross: &HyperbolicCross) -> Result<SpectralFunction> {
    cross.check_fits(spec.dims())?;
    Ok(spec.filter(|k| cross.contains(k)))
}

/// Spectrum of `f - S_n^γ(f)`: every bin outside the cross, Nyquist included.
pub fn cross_residual(spec: &SpectralFunction, cross: &HyperbolicCross) -> Result<SpectralFunction> {
    cross.check_fits(spec.dims())?;
    let mut out = spec.clone();
    for flat in 0..out.coeffs.len() {
        let (k, nyq) = out.freqs_of(flat);
        if !nyq && cross.contains(&k) {
            out.coeffs[flat] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

/// Samples of `D_n(t) = Σ_{|k|<=n} e^{ikt}` on `N` points.
pub fn dirichlet_kernel(n: usize, grid: usize) -> Result<GridFunction> {
    if n >= grid / 2 {
        return Err(Error::resolution(format!(
            "Dirichlet kernel of degree {n} needs n < N/2 with N = {grid}"
        )));
    }
    let mut spec = SpectralFunction::zeros(vec![grid])?;
    for k in -(n as i64)..=(n as i64) {
        spec.set(&[k], Complex64::new(1.0, 0.0))?;
    }
    Ok(synthesize(&spec))
}

/// Zero every coefficient with some `k_j = 0`.
pub fn zero_mean_project(spec: &SpectralFunction) -> SpectralFunction {
    let mut out = spec.clone();
    for flat in 0..out.coeffs.len() {
        let (k, _) = out.freqs_of(flat);
        if k.contains(&0) {
            out.coeffs[flat] = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// Whether every coefficient with some `k_j = 0` is negligible.
pub fn is_zero_mean(spec: &SpectralFunction) -> bool {
    let tol = 1e-12 * spec.max_abs().max(1e-300);
    (0..spec.coeffs.len()).all(|flat| {
        let (k, _) = spec.freqs_of(flat);
        !k.contains(&0) || spec.coeffs[flat].norm() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn analyze_pure_exponential() {
        let f = GridFunction::from_fn(vec![16], |x| Complex64::from_polar(1.0, 3.0 * x[0])).unwrap();
        let spec = analyze(&f);
        for (k, a) in spec.iter() {
            let expect = if k[0] == 3 { 1.0 } else { 0.0 };
            assert!((a - c(expect)).norm() < 1e-12, "k = {k:?}");
        }
        let back = synthesize(&spec);
        assert!(back.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn analyze_constant_and_product() {
        let f = GridFunction::from_fn(vec![8, 8], |_| c(2.5)).unwrap();
        let spec = analyze(&f);
        assert!((spec.coefficient(&[0, 0]).unwrap() - c(2.5)).norm() < 1e-14);
        let g = GridFunction::from_fn(vec![8, 16], |x| c(x[0].cos() * x[1].cos())).unwrap();
        let spec = analyze(&g);
        for (k, a) in spec.iter() {
            let expect = if k[0].abs() == 1 && k[1].abs() == 1 { 0.25 } else { 0.0 };
            assert!((a - c(expect)).norm() < 1e-13, "k = {k:?}");
        }
    }

    #[test]
    fn synthesize_examples() {
        let mut spec = SpectralFunction::zeros(vec![16]).unwrap();
        spec.set(&[3], c(1.0)).unwrap();
        let f = synthesize(&spec);
        for (i, z) in f.samples().iter().enumerate() {
            let x = std::f64::consts::TAU * i as f64 / 16.0;
            assert!((z - Complex64::from_polar(1.0, 3.0 * x)).norm() < 1e-12);
        }
        let mut spec = SpectralFunction::zeros(vec![8, 8]).unwrap();
        spec.set(&[0, 0], c(-1.5)).unwrap();
        assert!(synthesize(&spec).samples().iter().all(|z| (z - c(-1.5)).norm() < 1e-14));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_block(&[1]).unwrap(), vec![vec![-1], vec![1]]);
        assert_eq!(rho_block(&[0]).unwrap(), vec![vec![0]]);
        let b = rho_block(&[1, 2]).unwrap();
        assert_eq!(b.len(), 8);
        for k in &b {
            assert_eq!(k[0].abs(), 1);
            assert!(k[1].abs() == 2 || k[1].abs() == 3);
        }
        assert!(matches!(rho_block(&[1, -1]), Err(Error::Domain(_))));
        for s in 0..6i64 {
            let card = if s == 0 { 1 } else { 1usize << s };
            assert_eq!(rho_block(&[s]).unwrap().len(), card);
        }
    }

    #[test]
    fn blocks_partition_lattice() {
        // every frequency |k_j| < 16 lies in exactly one block at N = 32
        let dims = [32usize, 32];
        let mut count = std::collections::HashMap::new();
        for s1 in 0..=max_level(32) as i64 {
            for s2 in 0..=max_level(32) as i64 {
                for k in rho_block(&[s1, s2]).unwrap() {
                    *count.entry(k).or_insert(0) += 1;
                }
            }
        }
        assert_eq!(count.len(), 31 * 31);
        assert!(count.values().all(|&v| v == 1));
        assert!(count.keys().all(|k| k.iter().zip(&dims).all(|(&kj, &n)| kj.abs() < (n / 2) as i64)));
    }

    #[test]
    fn dyadic_block_examples() {
        let f = GridFunction::from_fn(vec![16], |x| Complex64::from_polar(1.0, 3.0 * x[0])).unwrap();
        let spec = analyze(&f);
        assert!(dyadic_block(&spec, &[2]).unwrap().max_abs_diff(&f) < 1e-12);
        for s in [0usize, 1, 3] {
            let b = dyadic_block(&spec, &[s]).unwrap();
            assert!(b.samples().iter().all(|z| z.norm() < 1e-12));
        }
        let g = GridFunction::from_fn(vec![16], |x| c(x[0].cos())).unwrap();
        assert!(dyadic_block(&analyze(&g), &[1]).unwrap().max_abs_diff(&g) < 1e-12);
        assert!(matches!(dyadic_block(&spec, &[4]), Err(Error::Resolution(_))));
    }

    #[test]
    fn block_sum_reconstructs_bandlimited() {
        let f = random_bandlimited(&[32, 16], 11, 3).unwrap();
        let spec = analyze(&f);
        let mut acc = GridFunction::zeros(vec![32, 16]).unwrap();
        for s1 in 0..=max_level(32) {
            for s2 in 0..=max_level(16) {
                acc = acc.add(&dyadic_block(&spec, &[s1, s2]).unwrap()).unwrap();
            }
        }
        assert!(acc.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn dirichlet_examples() {
        let d = dirichlet_kernel(5, 32).unwrap();
        assert_relative_eq!(d.samples()[0].re, 11.0, max_relative = 1e-13);
        let d1 = dirichlet_kernel(1, 8).unwrap();
        assert_relative_eq!(d1.samples()[4].re, -1.0, max_relative = 1e-13);
        let a0 = analyze(&d).coefficient(&[0]).unwrap();
        assert!((a0 - c(1.0)).norm() < 1e-13);
        assert!(matches!(dirichlet_kernel(4, 8), Err(Error::Resolution(_))));
    }

    #[test]
    fn zero_mean_examples() {
        let one = GridFunction::from_fn(vec![8, 8], |_| c(1.0)).unwrap();
        assert_eq!(zero_mean_project(&analyze(&one)).max_abs(), 0.0);
        let g = GridFunction::from_fn(vec![8, 8], |x| c(x[0].cos() * x[1].cos())).unwrap();
        let sg = analyze(&g);
        let p = zero_mean_project(&sg);
        assert!(synthesize(&p).max_abs_diff(&g) < 1e-13);
        assert!(is_zero_mean(&sg));
        let h = GridFunction::from_fn(vec![8, 8], |x| c(x[0].cos())).unwrap();
        assert!(zero_mean_project(&analyze(&h)).max_abs() < 1e-15);
        assert!(!is_zero_mean(&analyze(&h)));
    }

    #[test]
    fn dims_are_validated() {
        assert!(GridFunction::zeros(vec![6]).is_err());
        assert!(GridFunction::zeros(vec![2]).is_err());
        assert!(GridFunction::zeros(vec![4, 4, 4, 4]).is_err());
        assert!(GridFunction::new(vec![4], vec![c(0.0); 3]).is_err());
    }

    #[test]
    fn per_block_parseval() {
        let f = random_bandlimited(&[64], 3, 4).unwrap();
        let spec = analyze(&f);
        let total: f64 = f.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / f.len() as f64;
        let mut blocks = 0.0;
        for s in 0..=max_level(64) {
            let b = dyadic_block(&spec, &[s]).unwrap();
            blocks += b.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / b.len() as f64;
        }
        assert_relative_eq!(blocks, total, max_relative = 1e-10);
    }

    fn arb_dims() -> impl Strategy<Value = Vec<usize>> {
        prop_oneof![
            (3u32..=10).prop_map(|a| vec![1usize << a]),
            ((3u32..=6), (3u32..=6)).prop_map(|(a, b)| vec![1usize << a, 1 << b]),
            ((3u32..=4), (3u32..=4), (3u32..=4)).prop_map(|(a, b, c)| vec![1usize << a, 1 << b, 1 << c]),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip_and_parseval(dims in arb_dims(), seed in 0u64..1000) {
            use rand::{RngExt, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let total: usize = dims.iter().product();
            let coeffs: Vec<Complex64> = (0..total)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let spec = SpectralFunction { dims: dims.clone(), coeffs };
            let f = synthesize(&spec);
            let back = analyze(&f);
            let scale = spec.max_abs();
            let err = spec.coeffs.iter().zip(&back.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-10 * scale);
            let mean_sq: f64 = f.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / total as f64;
            prop_assert!((spec.energy() - mean_sq).abs() <= 1e-10 * mean_sq);
        }
    }
}
