//! Small numerical helpers shared by the norm and verification code.

/// Neumaier-compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Smallest point reached when an integral with an integrable singularity at
/// zero is truncated.
pub const LOG_FLOOR_EXP: i32 = 60;

/// Midpoint rule in the variable `u = ln t` for `∫_a^b g(t) dt/t`, with `pieces`
/// log-uniform subintervals. Requires `0 < a <= b`.
pub fn log_midpoint<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64, pieces: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (ua, ub) = (a.ln(), b.ln());
    let h = (ub - ua) / pieces as f64;
    let mut acc = CompensatedSum::new();
    for p in 0..pieces {
        let u = ua + (p as f64 + 0.5) * h;
        acc.add(g(u.exp()));
    }
    acc.value() * h
}

/// `∫_0^b g(t) dt/t` split into dyadic pieces `[b 2^{-k-1}, b 2^{-k}]` down to
/// `2^{-LOG_FLOOR_EXP}`; each piece uses the log-midpoint rule. The part below the
/// floor is dropped.
pub fn log_midpoint_from_zero<F: Fn(f64) -> f64>(g: &F, b: f64, pieces: usize) -> f64 {
    let floor = (-(LOG_FLOOR_EXP as f64)).exp2();
    let mut acc = CompensatedSum::new();
    let mut hi = b;
    while hi > floor {
        let lo = (hi * 0.5).max(floor);
        acc.add(log_midpoint(g, lo, hi, pieces));
        hi = lo;
    }
    acc.value()
}

/// `(Σ |x|^p)^{1/p}`, or the maximum for `p = ∞`.
pub fn lp_norm(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    } else {
        compensated_sum(values.iter().map(|v| v.abs().powf(p))).powf(1.0 / p)
    }
}

/// Mixed sequence norm over a box with axis 1 innermost:
/// `‖ ... ‖ ‖x‖_{ℓ_{p_1}} ‖_{ℓ_{p_2}} ... ‖_{ℓ_{p_m}}`.
///
/// `values` is row-major with axis 1 fastest and `shape[j]` entries along axis `j`.
pub fn mixed_norm(values: &[f64], shape: &[usize], exps: &[f64]) -> f64 {
    assert_eq!(shape.len(), exps.len());
    assert_eq!(values.len(), shape.iter().product::<usize>());
    let mut current = values.to_vec();
    for (&len, &p) in shape.iter().zip(exps) {
        current = current.chunks(len).map(|fiber| lp_norm(fiber, p)).collect();
    }
    current[0]
}

/// Iterate every multi-index of a box with axis 1 fastest.
pub fn box_indices(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
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

/// Exact `log2` of a power of two.
pub fn log2_exact(n: usize) -> Option<u32> {
    if n.is_power_of_two() {
        Some(n.trailing_zeros())
    } else {
        None
    }
}
