use crate::error::{Error, Result};

use super::{axis_range, freq_level, max_level};

/// The step hyperbolic cross `Q_n^γ = ∪_{⟨s̄,γ̄⟩ < n} ρ(s̄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicCross {
    gamma: Vec<f64>,
    n: f64,
    blocks: Vec<Vec<usize>>,
}

pub fn hyperbolic_cross(gamma: &[f64], n: f64, m: usize) -> Result<HyperbolicCross> {
    if gamma.len() != m || m == 0 {
        return Err(Error::domain(format!("gamma has {} entries for m = {m}", gamma.len())));
    }
    if let Some(g) = gamma.iter().find(|&&g| !(g > 0.0) || !g.is_finite()) {
        return Err(Error::domain(format!("gamma entry {g} must be positive")));
    }
    if !(n >= 0.0) {
        return Err(Error::domain(format!("cross scale {n} must be non-negative")));
    }
    let mut blocks = Vec::new();
    let mut current = vec![0usize; m];
    enumerate(gamma, n, 0, 0.0, &mut current, &mut blocks);
    blocks.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    Ok(HyperbolicCross {
        gamma: gamma.to_vec(),
        n,
        blocks,
    })
}

fn enumerate(gamma: &[f64], n: f64, axis: usize, partial: f64, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if axis == gamma.len() {
        out.push(current.clone());
        return;
    }
    let mut s = 0usize;
    while partial + s as f64 * gamma[axis] < n {
        current[axis] = s;
        enumerate(gamma, n, axis + 1, partial + s as f64 * gamma[axis], current, out);
        s += 1;
    }
    current[axis] = 0;
}

impl HyperbolicCross {
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.gamma.len()
    }

    /// Blocks `s̄` with `⟨s̄,γ̄⟩ < n`.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dot(&self, s: &[usize]) -> f64 {
        s.iter().zip(&self.gamma).map(|(&sj, &g)| sj as f64 * g).sum()
    }

    pub fn contains_block(&self, s: &[usize]) -> bool {
        s.len() == self.gamma.len() && self.dot(s) < self.n
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        let s: Vec<usize> = k.iter().map(|&kj| freq_level(kj)).collect();
        self.contains_block(&s)
    }

    /// Number of frequencies in the cross.
    pub fn cardinality(&self) -> usize {
        self.blocks
            .iter()
            .map(|s| s.iter().map(|&sj| if sj == 0 { 1 } else { 1usize << sj }).product::<usize>())
            .sum()
    }

    /// Every frequency of the cross.
    pub fn index_set(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.cardinality());
        for s in &self.blocks {
            let mut acc = vec![Vec::new()];
            for &sj in s {
                let axis = axis_range(sj);
                acc = acc
                    .iter()
                    .flat_map(|p: &Vec<i64>| {
                        axis.iter().map(move |&k| {
                            let mut v = p.clone();
                            v.push(k);
                            v
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
        out
    }

    pub fn check_fits(&self, dims: &[usize]) -> Result<()> {
        if dims.len() != self.gamma.len() {
            return Err(Error::domain("cross and grid dimensions differ"));
        }
        for s in &self.blocks {
            for (&sj, &n) in s.iter().zip(dims) {
                if sj > max_level(n) {
                    return Err(Error::resolution(format!(
                        "cross block {s:?} exceeds the Nyquist limit of N = {n}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cross_examples() {
        let q = hyperbolic_cross(&[1.0], 3.0, 1).unwrap();
        let mut idx: Vec<i64> = q.index_set().into_iter().map(|k| k[0]).collect();
        idx.sort();
        assert_eq!(idx, (-3..=3).collect::<Vec<_>>());
        let q = hyperbolic_cross(&[1.0, 1.0], 3.0, 2).unwrap();
        assert_eq!(q.blocks().len(), 6);
        assert_eq!(q.cardinality(), 17);
        assert_eq!(q.index_set().len(), 17);
        let q = hyperbolic_cross(&[1.0, 2.0], 0.0, 2).unwrap();
        assert!(q.blocks().is_empty());
        assert_eq!(q.cardinality(), 0);
        assert!(hyperbolic_cross(&[0.0], 3.0, 1).is_err());
        assert!(hyperbolic_cross(&[1.0], 3.0, 2).is_err());
    }

    fn brute_force(gamma: &[f64], n: f64, bound: i64) -> HashSet<Vec<i64>> {
        let m = gamma.len();
        let mut out = HashSet::new();
        let range: Vec<i64> = (-bound..=bound).collect();
        let mut idx = vec![0usize; m];
        loop {
            let k: Vec<i64> = idx.iter().map(|&i| range[i]).collect();
            let dot: f64 = k.iter().zip(gamma).map(|(&kj, &g)| freq_level(kj) as f64 * g).sum();
            if dot < n {
                out.insert(k);
            }
            let mut j = 0;
            loop {
                if j == m {
                    return out;
                }
                idx[j] += 1;
                if idx[j] < range.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn cardinality_matches_brute_force() {
        for (gamma, bound) in [(vec![1.0], 1100), (vec![1.0, 1.5], 1100), (vec![1.0, 1.0, 2.0], 40)] {
            let mut last = 0;
            let n_max = if gamma.len() == 3 { 6 } else { 10 };
            for n in 0..=n_max {
                let q = hyperbolic_cross(&gamma, n as f64, gamma.len()).unwrap();
                let set: HashSet<Vec<i64>> = q.index_set().into_iter().collect();
                assert_eq!(set.len(), q.cardinality());
                assert_eq!(set, brute_force(&gamma, n as f64, bound));
                assert!(q.cardinality() >= last);
                last = q.cardinality();
                // symmetric under k ↦ -k
                assert!(set.iter().all(|k| set.contains(&k.iter().map(|v| -v).collect::<Vec<_>>())));
            }
        }
    }
}
