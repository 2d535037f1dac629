//! Reproducible test corpora.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::besov::{normalize_to_ball, BesovParams};
use crate::error::{Error, Result};
use crate::grid::{freq_level, random_bandlimited, unit_block, GridFunction, SpectralFunction};
use crate::numeric::box_indices;

pub type Corpus = Vec<(String, GridFunction)>;

/// `random_bandlimited` for every seed in `seeds`, ids `seed<k>`.
pub fn random_corpus(dims: &[usize], seeds: std::ops::Range<u64>, lmax: usize) -> Result<Corpus> {
    seeds
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&seed| Ok((format!("seed{seed}"), random_bandlimited(dims, seed, lmax)?)))
        .collect()
}

/// Random corpus scaled onto the unit sphere of the Besov class.
pub fn class_ball_corpus(dims: &[usize], seeds: std::ops::Range<u64>, lmax: usize, besov: &BesovParams) -> Result<Corpus> {
    random_corpus(dims, seeds, lmax)?
        .into_par_iter()
        .map(|(id, f)| Ok((id, normalize_to_ball(&f, besov)?)))
        .collect()
}

/// Keep the blocks with every `s_j <= depth`.
pub fn truncate_depth(spec: &SpectralFunction, depth: usize) -> SpectralFunction {
    spec.filter(|k| k.iter().all(|&kj| freq_level(kj) <= depth))
}

/// Finite block series `Σ b_s̄ Σ_{k̄∈ρ(s̄)} e^{i⟨k̄,x̄⟩}` with `b_s̄ >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSeries {
    m: usize,
    coeffs: Vec<(Vec<usize>, f64)>,
}

impl BlockSeries {
    pub fn new(m: usize, coeffs: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        for (s, b) in &coeffs {
            if s.len() != m {
                return Err(Error::domain(format!("block {s:?} does not have {m} entries")));
            }
            if !(*b >= 0.0 && b.is_finite()) {
                return Err(Error::domain(format!("coefficient {b} must be non-negative")));
            }
        }
        let mut coeffs = coeffs;
        coeffs.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
        if coeffs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("repeated block in series"));
        }
        Ok(Self { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[(Vec<usize>, f64)] {
        &self.coeffs
    }

    pub fn coefficient(&self, s: &[usize]) -> f64 {
        self.coeffs.iter().find(|(t, _)| t == s).map_or(0.0, |(_, b)| *b)
    }

    /// Highest block level on any axis.
    pub fn depth(&self) -> usize {
        self.coeffs.iter().flat_map(|(s, _)| s.iter().copied()).max().unwrap_or(0)
    }

    pub fn realize(&self, dims: &[usize]) -> Result<GridFunction> {
        if dims.len() != self.m {
            return Err(Error::domain("series and grid dimensions differ"));
        }
        let mut acc = GridFunction::zeros(dims.to_vec())?;
        for (s, b) in &self.coeffs {
            if *b != 0.0 {
                acc = acc.add(&unit_block(dims, s)?.scale(*b))?;
            }
        }
        Ok(acc)
    }
}

/// Structured and random non-negative series on blocks `1 <= s_j <= s_max`.
///
/// Structured members: geometric `∏ 2^{-s_j}`, flat, lacunary (levels that are
/// powers of two) and the single top block. The rest draw a random support and
/// magnitudes `u · 2^{-κ Σ s_j}`.
pub fn lacunary_corpus(m: usize, s_max: usize, seed: u64, random: usize) -> Result<Vec<(String, BlockSeries)>> {
    if s_max == 0 {
        return Err(Error::domain("lacunary corpus needs s_max >= 1"));
    }
    let shape = vec![s_max; m];
    let all: Vec<Vec<usize>> = box_indices(&shape).map(|k| k.iter().map(|v| v + 1).collect()).collect();
    let mut out = Vec::new();
    let geometric = all.iter().map(|s| (s.clone(), s.iter().map(|&v| (-(v as f64)).exp2()).product())).collect();
    out.push(("geometric".to_string(), BlockSeries::new(m, geometric)?));
    out.push(("flat".to_string(), BlockSeries::new(m, all.iter().map(|s| (s.clone(), 1.0)).collect())?));
    let lac = all
        .iter()
        .filter(|s| s.iter().all(|v| v.is_power_of_two()))
        .map(|s| (s.clone(), 1.0))
        .collect();
    out.push(("lacunary".to_string(), BlockSeries::new(m, lac)?));
    out.push(("single".to_string(), BlockSeries::new(m, vec![(vec![s_max; m], 1.0)])?));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..random {
        let kappa: f64 = rng.random_range(0.0..1.5);
        let mut coeffs: Vec<(Vec<usize>, f64)> = Vec::new();
        for s in &all {
            if rng.random_bool(0.6) {
                let u: f64 = rng.random_range(0.1..1.0);
                coeffs.push((s.clone(), u * (-kappa * s.iter().sum::<usize>() as f64).exp2()));
            }
        }
        if coeffs.is_empty() {
            coeffs.push((all[0].clone(), 1.0));
        }
        out.push((format!("random{i}"), BlockSeries::new(m, coeffs)?));
    }
    Ok(out)
}
