//! Non-increasing rearrangements on the grid, distribution functions and the
//! iterated maximal average `f̄(t̄)`.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::numeric::{compensated_sum, log2_exact};

/// Step function on `[0, 1]` with non-increasing cell values.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFunction {
    /// Right-continuous evaluation, `f*(t)` for `t` in `[0, 1)`; zero at `t >= 1`.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.values.first().copied().unwrap_or(0.0);
        }
        let cell = self.breakpoints.partition_point(|&b| b <= t);
        if cell == 0 || cell > self.values.len() {
            0.0
        } else {
            self.values[cell - 1]
        }
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }
}

fn check_samples(samples: &[f64]) -> Result<()> {
    if let Some(v) = samples.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::domain(format!("rearrangement needs finite non-negative values, got {v}")));
    }
    Ok(())
}

fn sort_desc(v: &mut [f64]) {
    v.sort_unstable_by(|a, b| b.total_cmp(a));
}

pub fn rearrange_1d(samples: &[f64]) -> Result<StepFunction> {
    check_samples(samples)?;
    if samples.is_empty() {
        return Err(Error::domain("empty sample list"));
    }
    let n = samples.len();
    let mut values = samples.to_vec();
    sort_desc(&mut values);
    let breakpoints = (0..=n).map(|i| i as f64 / n as f64).collect();
    Ok(StepFunction { breakpoints, values })
}

/// `μ{x : f(x) > λ}` with normalized measure.
pub fn distribution_function(samples: &[f64], lambda: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().filter(|&&v| v > lambda).count() as f64 / samples.len() as f64
}

/// Iterated rearrangement `f^{*1,...,*m}` on a box; cell `(i_1,...,i_m)` covers
/// `∏ [i_j/N_j, (i_j+1)/N_j)`. Row-major, axis 1 fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct RearrangedGrid {
    pub dims: Vec<usize>,
    pub values: Vec<f64>,
}

impl RearrangedGrid {
    pub fn at(&self, idx: &[usize]) -> f64 {
        self.values[flat_index(&self.dims, idx)]
    }

    pub fn is_non_increasing(&self) -> bool {
        (0..self.dims.len()).all(|axis| {
            fibers(&self.dims, axis).all(|fiber| fiber.windows(2).all(|w| self.values[w[0]] >= self.values[w[1]]))
        })
    }
}

fn flat_index(dims: &[usize], idx: &[usize]) -> usize {
    let mut flat = 0;
    let mut stride = 1;
    for (&i, &n) in idx.iter().zip(dims) {
        flat += i * stride;
        stride *= n;
    }
    flat
}

/// Flat positions of every fiber along `axis`.
fn fibers(dims: &[usize], axis: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let stride: usize = dims[..axis].iter().product();
    let len = dims[axis];
    let total: usize = dims.iter().product();
    let outer = total / (stride * len);
    (0..outer).flat_map(move |o| {
        (0..stride).map(move |inner| (0..len).map(|i| o * stride * len + i * stride + inner).collect())
    })
}

/// Sort along axis 1, then axis 2, and so on.
pub fn iterated_sort(dims: &[usize], values: &[f64]) -> Result<RearrangedGrid> {
    check_samples(values)?;
    if dims.iter().product::<usize>() != values.len() || dims.is_empty() {
        return Err(Error::domain("values do not fill the given box"));
    }
    let mut out = values.to_vec();
    let mut buf = Vec::new();
    for axis in 0..dims.len() {
        for fiber in fibers(dims, axis) {
            buf.clear();
            buf.extend(fiber.iter().map(|&p| out[p]));
            sort_desc(&mut buf);
            for (&p, &v) in fiber.iter().zip(&buf) {
                out[p] = v;
            }
        }
    }
    Ok(RearrangedGrid { dims: dims.to_vec(), values: out })
}

pub fn iterated_rearrangement(f: &GridFunction) -> RearrangedGrid {
    iterated_sort(f.dims(), &f.abs_values()).expect("absolute values are non-negative")
}

/// Number of cells in `[0, t]` when `t` is a dyadic fraction `2^{-k}` resolvable on `n` cells.
fn dyadic_cells(t: f64, n: usize) -> Result<usize> {
    let cells = t * n as f64;
    let k = cells.round();
    let ok = t > 0.0 && t <= 1.0 && k >= 1.0 && (cells - k).abs() < 1e-9 && log2_exact(k as usize).is_some();
    if !ok || log2_exact(n).is_none() {
        return Err(Error::resolution(format!("t = {t} is not a dyadic width resolvable on {n} cells")));
    }
    Ok(k as usize)
}

/// `f̄(t̄)`: along axis 1 each fiber is replaced by the mean of its `t_1 N_1` largest
/// values, then the same along axis 2 of the result, and so on.
pub fn maximal_average(f: &GridFunction, t: &[f64]) -> Result<f64> {
    if t.len() != f.m() {
        return Err(Error::domain("t̄ has the wrong number of components"));
    }
    maximal_average_values(f.dims(), &f.abs_values(), t)
}

pub fn maximal_average_values(dims: &[usize], values: &[f64], t: &[f64]) -> Result<f64> {
    check_samples(values)?;
    let counts: Vec<usize> = t.iter().zip(dims).map(|(&tj, &n)| dyadic_cells(tj, n)).collect::<Result<_>>()?;
    let mut current = values.to_vec();
    for (&n, &k) in dims.iter().zip(&counts) {
        current = current
            .chunks(n)
            .map(|fiber| {
                let mut v = fiber.to_vec();
                sort_desc(&mut v);
                compensated_sum(v[..k].iter().copied()) / k as f64
            })
            .collect();
    }
    Ok(current[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{random_bandlimited, rect_indicator};
    use proptest::prelude::*;

    #[test]
    fn rearrange_examples() {
        let r = rearrange_1d(&[3.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(r.values, vec![3.0, 2.0, 1.0, 0.0]);
        assert_eq!(r.breakpoints, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let c = rearrange_1d(&[2.5; 8]).unwrap();
        assert!(c.values.iter().all(|&v| v == 2.5));
        let ind = rearrange_1d(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        for i in 0..8 {
            let t = (i as f64 + 0.5) / 8.0;
            assert_eq!(ind.eval(t), if t < 0.25 { 1.0 } else { 0.0 });
        }
        assert!(rearrange_1d(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn distribution_examples() {
        let ind = [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        assert_eq!(distribution_function(&ind, 0.5), 0.25);
        assert_eq!(distribution_function(&[1.0; 4], 1.0), 0.0);
        assert_eq!(distribution_function(&[3.0, 1.0, 2.0, 0.0], 1.5), 0.5);
    }

    #[test]
    fn iterated_examples() {
        let r = iterated_sort(&[2, 2], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(r.values, vec![4.0, 3.0, 2.0, 1.0]);

        let g = [0.5, 2.0, 0.0, 1.0, 3.0, 0.25, 0.0, 1.5];
        let h = [1.0, 0.0, 4.0, 2.0];
        let vals: Vec<f64> = h.iter().flat_map(|&hv| g.iter().map(move |&gv| gv * hv)).collect();
        let r = iterated_sort(&[8, 4], &vals).unwrap();
        let gs = rearrange_1d(&g).unwrap().values;
        let hs = rearrange_1d(&h).unwrap().values;
        for (j, &hv) in hs.iter().enumerate() {
            for (i, &gv) in gs.iter().enumerate() {
                assert_eq!(r.at(&[i, j]), gv * hv);
            }
        }

        let f = rect_indicator(&[8, 16], &[0.25, 0.5]).unwrap();
        let r = iterated_rearrangement(&f);
        for j in 0..16 {
            for i in 0..8 {
                let inside = i < 2 && j < 8;
                assert_eq!(r.at(&[i, j]), if inside { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn maximal_average_examples() {
        let c = GridFunction::from_real(vec![16, 8], &[1.75; 128]).unwrap();
        assert_eq!(maximal_average(&c, &[0.25, 0.5]).unwrap(), 1.75);
        let ind = rect_indicator(&[32], &[0.25]).unwrap();
        for (t, expect) in [(0.5, 0.5), (1.0, 0.25), (0.25, 1.0), (0.125, 1.0), (1.0 / 32.0, 1.0)] {
            assert_eq!(maximal_average(&ind, &[t]).unwrap(), expect);
        }
        assert!(maximal_average(&ind, &[1.0 / 64.0]).is_err());
        assert!(maximal_average(&ind, &[0.3]).is_err());
    }

    #[test]
    fn exhaustive_monotone_3d() {
        // every 0/1 pattern on a 2x2x2 box plus random 4x4x4 boxes
        for mask in 0u32..256 {
            let vals: Vec<f64> = (0..8).map(|b| ((mask >> b) & 1) as f64).collect();
            assert!(iterated_sort(&[2, 2, 2], &vals).unwrap().is_non_increasing());
        }
        let f = random_bandlimited(&[4, 4, 4], 3, 1).unwrap();
        assert!(iterated_rearrangement(&f).is_non_increasing());
    }

    fn values_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..10.0, len)
    }

    proptest! {
        #[test]
        fn equimeasurable(v in values_strategy(64)) {
            let r = rearrange_1d(&v).unwrap();
            for &lambda in &v {
                prop_assert_eq!(distribution_function(&v, lambda), distribution_function(&r.values, lambda));
            }
        }

        #[test]
        fn monotone_on_every_axis(v in values_strategy(64), shape in 0usize..2) {
            let dims: &[usize] = if shape == 0 { &[8, 8] } else { &[4, 4, 4] };
            let r = iterated_sort(dims, &v).unwrap();
            prop_assert!(r.is_non_increasing());
        }

        #[test]
        fn dominated_by_maximal_average(v in values_strategy(32), k1 in 0u32..3, k2 in 0u32..2) {
            let dims = [8usize, 4];
            let r = iterated_sort(&dims, &v).unwrap();
            let t = [(-(k1 as f64)).exp2() / 2.0, (-(k2 as f64)).exp2() / 2.0];
            let avg = maximal_average_values(&dims, &v, &t).unwrap();
            let cell = [(t[0] * 8.0) as usize - 1, (t[1] * 4.0) as usize - 1];
            prop_assert!(r.at(&cell) <= avg * (1.0 + 1e-12));
        }

        #[test]
        fn maximal_average_non_increasing(v in values_strategy(32)) {
            let dims = [8usize, 4];
            let mut prev = f64::INFINITY;
            for k in (0..3).rev() {
                let t = [(-(k as f64)).exp2(), 0.5];
                let a = maximal_average_values(&dims, &v, &t).unwrap();
                prop_assert!(a <= prev * (1.0 + 1e-12));
                prev = a;
            }
        }
    }
}
