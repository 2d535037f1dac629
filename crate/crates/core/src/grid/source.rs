use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::{axis_range, max_level, read_grid_file, synthesize, GridFunction, SpectralFunction};

/// Where a grid function comes from: a grid file or a generator spec.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    File(PathBuf),
    /// `gen:block:<s1,...,sm>`
    Block(Vec<usize>),
    /// `gen:random-bandlimited:<seed>:<Lmax>`
    RandomBandlimited { seed: u64, lmax: usize },
    /// `gen:rect:<a1,...,am>`
    Rect(Vec<f64>),
}

impl Source {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let Some(rest) = spec.strip_prefix("gen:") else {
            if spec.is_empty() {
                return Err(Error::domain("empty function source"));
            }
            return Ok(Source::File(PathBuf::from(spec)));
        };
        let bad = || Error::domain(format!("malformed generator spec '{spec}'"));
        let parts: Vec<&str> = rest.split(':').collect();
        match parts.as_slice() {
            ["block", levels] => Ok(Source::Block(
                levels
                    .split(',')
                    .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?,
            )),
            ["random-bandlimited", seed, lmax] => Ok(Source::RandomBandlimited {
                seed: seed.trim().parse().map_err(|_| bad())?,
                lmax: lmax.trim().parse().map_err(|_| bad())?,
            }),
            ["rect", sides] => {
                let a: Vec<f64> = sides
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                if a.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
                    return Err(Error::domain(format!("rect sides in '{spec}' must lie in (0, 1]")));
                }
                Ok(Source::Rect(a))
            }
            _ => Err(bad()),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Source::RandomBandlimited { .. })
    }

    /// Materialize on a grid of shape `dims` (ignored for files).
    pub fn generate(&self, dims: &[usize]) -> Result<GridFunction> {
        let check_m = |m: usize| {
            if m != dims.len() {
                Err(Error::domain(format!("generator has {m} axes but the grid has {}", dims.len())))
            } else {
                Ok(())
            }
        };
        match self {
            Source::File(path) => read_grid_file(path),
            Source::Block(s) => {
                check_m(s.len())?;
                unit_block(dims, s)
            }
            Source::RandomBandlimited { seed, lmax } => random_bandlimited(dims, *seed, *lmax),
            Source::Rect(a) => {
                check_m(a.len())?;
                rect_indicator(dims, a)
            }
        }
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[String]| v.join(",");
        match self {
            Source::File(p) => write!(f, "{}", p.display()),
            Source::Block(s) => write!(f, "gen:block:{}", join(&s.iter().map(|v| v.to_string()).collect::<Vec<_>>())),
            Source::RandomBandlimited { seed, lmax } => write!(f, "gen:random-bandlimited:{seed}:{lmax}"),
            Source::Rect(a) => write!(f, "gen:rect:{}", join(&a.iter().map(|v| v.to_string()).collect::<Vec<_>>())),
        }
    }
}

fn check_levels(dims: &[usize], levels: impl IntoIterator<Item = usize>) -> Result<()> {
    for (l, &n) in levels.into_iter().zip(dims) {
        if l > max_level(n) {
            return Err(Error::resolution(format!("level {l} exceeds the Nyquist limit of N = {n}")));
        }
    }
    Ok(())
}

/// `Σ_{k̄ ∈ ρ(s̄)} e^{i⟨k̄,x̄⟩}`.
pub fn unit_block(dims: &[usize], s: &[usize]) -> Result<GridFunction> {
    if s.len() != dims.len() {
        return Err(Error::domain("block index and grid dimensions differ"));
    }
    check_levels(dims, s.iter().copied())?;
    let mut spec = SpectralFunction::zeros(dims.to_vec())?;
    let axes: Vec<Vec<i64>> = s.iter().map(|&sj| axis_range(sj)).collect();
    for_each_product(&axes, |k| spec.set(k, Complex64::new(1.0, 0.0)))?;
    Ok(synthesize(&spec))
}

fn for_each_product(axes: &[Vec<i64>], mut visit: impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
    let m = axes.len();
    let mut idx = vec![0usize; m];
    let mut k = vec![0i64; m];
    if axes.iter().any(Vec::is_empty) {
        return Ok(());
    }
    loop {
        for j in 0..m {
            k[j] = axes[j][idx[j]];
        }
        visit(&k)?;
        let mut j = 0;
        loop {
            if j == m {
                return Ok(());
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

/// Real, zero-mean trigonometric polynomial with Gaussian coefficients of size
/// `∏ 2^{-s_j}` on every block `1 <= s_j <= lmax`. Deterministic in `seed`.
pub fn random_bandlimited(dims: &[usize], seed: u64, lmax: usize) -> Result<GridFunction> {
    let mut spec = SpectralFunction::zeros(dims.to_vec())?;
    check_levels(dims, std::iter::repeat_n(lmax, dims.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 1i64 << lmax;
    let axis: Vec<i64> = (-bound + 1..bound).filter(|&k| k != 0).collect();
    let axes = vec![axis; dims.len()];
    let mut draws: Vec<(Vec<i64>, Complex64)> = Vec::new();
    for_each_product(&axes, |k| {
        // one draw per conjugate pair; the representative has its last axis positive
        if k[k.len() - 1] > 0 {
            let amp: f64 = k.iter().map(|&kj| (-(super::freq_level(kj) as f64)).exp2()).product();
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            draws.push((k.to_vec(), Complex64::new(re, im) * (amp / std::f64::consts::SQRT_2)));
        }
        Ok(())
    })?;
    for (k, c) in draws {
        let neg: Vec<i64> = k.iter().map(|v| -v).collect();
        spec.set(&k, c)?;
        spec.set(&neg, c.conj())?;
    }
    let f = synthesize(&spec);
    GridFunction::new(
        f.dims().to_vec(),
        f.samples().iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
    )
}

/// Indicator of the box `∏ [0, 2π a_j)`.
pub fn rect_indicator(dims: &[usize], a: &[f64]) -> Result<GridFunction> {
    if a.len() != dims.len() {
        return Err(Error::domain("rect sides and grid dimensions differ"));
    }
    let (dims_v, a) = (dims.to_vec(), a.to_vec());
    GridFunction::from_fn(dims_v, move |x| {
        let inside = x
            .iter()
            .zip(&a)
            .all(|(&xj, &aj)| xj / std::f64::consts::TAU < aj - 1e-12);
        Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
    })
}
