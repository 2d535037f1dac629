//! Discrete Hardy-type inequalities, one-dimensional and nested.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{box_indices, compensated_sum, CompensatedSum};
use crate::report::VerificationReport;

/// Premise constants above this are treated as a violated premise.
pub const PREMISE_LIMIT: f64 = 1e6;
const ORDER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardyVariant {
    /// `Σ_{k<=n} a_k <= C a_n`; tails of `b` on the left.
    A,
    /// `Σ_{k>=n} a_k <= C a_n`; heads of `b` on the left.
    B,
}

impl std::str::FromStr for HardyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(HardyVariant::A),
            "b" | "B" => Ok(HardyVariant::B),
            other => Err(Error::domain(format!("unknown Hardy variant '{other}'"))),
        }
    }
}

/// Which way partial sums are accumulated; both must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumOrder {
    /// Every inner sum from scratch.
    Direct,
    /// Running cumulative sums.
    Running,
}

/// `max_n Σ_{k<=n} a_k / a_n` (variant A) or `max_n Σ_{k>=n} a_k / a_n` (variant B) on `[0, t]`.
pub fn premise_constant(a: &[f64], variant: HardyVariant, t: usize) -> f64 {
    let a = &a[..=t];
    (0..=t)
        .map(|n| {
            let s = match variant {
                HardyVariant::A => compensated_sum(a[..=n].iter().copied()),
                HardyVariant::B => compensated_sum(a[n..].iter().copied()),
            };
            s / a[n]
        })
        .fold(0.0, f64::max)
}

/// Constant of the power-form inequality: `C` for `θ <= 1`, `(θC)^θ` above (Leindler).
pub fn hardy1_constant(premise: f64, theta: f64) -> f64 {
    if theta <= 1.0 {
        premise
    } else {
        (theta * premise).powf(theta)
    }
}

/// Partial sums of `b` entering the left side: tails (A) or heads (B) on `[0, t]`.
fn partial_sums(b: &[f64], variant: HardyVariant, t: usize, order: SumOrder) -> Vec<f64> {
    let b = &b[..=t];
    match order {
        SumOrder::Direct => (0..=t)
            .map(|n| match variant {
                HardyVariant::A => compensated_sum(b[n..].iter().copied()),
                HardyVariant::B => compensated_sum(b[..=n].iter().copied()),
            })
            .collect(),
        SumOrder::Running => {
            let mut out = vec![0.0; t + 1];
            let mut acc = CompensatedSum::new();
            match variant {
                HardyVariant::A => {
                    for n in (0..=t).rev() {
                        acc.add(b[n]);
                        out[n] = acc.value();
                    }
                }
                HardyVariant::B => {
                    for n in 0..=t {
                        acc.add(b[n]);
                        out[n] = acc.value();
                    }
                }
            }
            out
        }
    }
}

/// Power-form sides `(Σ a_n (B_n)^θ, Σ a_n b_n^θ)` on the truncation `[0, t]`.
pub fn hardy1_sides(a: &[f64], b: &[f64], theta: f64, variant: HardyVariant, t: usize, order: SumOrder) -> (f64, f64) {
    let partial = partial_sums(b, variant, t, order);
    let lhs = compensated_sum((0..=t).map(|n| a[n] * partial[n].powf(theta)));
    let rhs = compensated_sum((0..=t).map(|n| a[n] * b[n].powf(theta)));
    (lhs, rhs)
}

fn check_sequences(a: &[f64], b: &[f64], n: usize) -> Result<()> {
    if a.len() <= n || b.len() <= n {
        return Err(Error::domain(format!("sequences need at least {} terms", n + 1)));
    }
    if a[..=n].iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::domain("a_k must be positive and finite"));
    }
    if b[..=n].iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::domain("b_k must be non-negative and finite"));
    }
    Ok(())
}

/// One row per truncation `[0, t]`, `t = 0..=n`.
pub fn hardy1_check(a: &[f64], b: &[f64], theta: f64, variant: HardyVariant, n: usize) -> Result<VerificationReport> {
    check_sequences(a, b, n)?;
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::domain(format!("θ = {theta} must be positive")));
    }
    let mut report = VerificationReport::new("hardy1");
    let c = premise_constant(a, variant, n);
    if c > PREMISE_LIMIT {
        report.flag(format!("premise constant {c:.3e} exceeds {PREMISE_LIMIT:e}"));
    }
    report.note(format!("premise constant C = {c:.12e}"));
    report.note(format!("oracle constant = {:.12e}", hardy1_constant(c, theta)));
    for t in 0..=n {
        let (lhs, rhs) = hardy1_sides(a, b, theta, variant, t, SumOrder::Direct);
        let (lhs2, rhs2) = hardy1_sides(a, b, theta, variant, t, SumOrder::Running);
        if !close(lhs, lhs2) || !close(rhs, rhs2) {
            report.flag(format!("summation orders disagree at t = {t}"));
        }
        report.push("trunc", t as i64, lhs, rhs);
    }
    Ok(report.finish())
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= ORDER_TOL * x.abs().max(y.abs())
}

/// A non-negative array on `[0, n]^m`, axis 1 fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxArray {
    pub side: usize,
    pub m: usize,
    pub values: Vec<f64>,
}

impl BoxArray {
    pub fn from_fn(m: usize, side: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let shape = vec![side; m];
        let values = box_indices(&shape).map(|k| f(&k)).collect();
        Self { side, m, values }
    }

    /// Restriction to `[0, t]^m`.
    fn truncate(&self, t: usize) -> BoxArray {
        BoxArray::from_fn(self.m, t + 1, |k| self.values[flat(k, self.side)])
    }
}

fn flat(k: &[usize], side: usize) -> usize {
    k.iter().rev().fold(0, |acc, &i| acc * side + i)
}

/// Cumulative sums along every axis: tails (A) or heads (B), axes visited in `axes` order.
fn multi_partial(b: &BoxArray, variant: HardyVariant, axes: &[usize]) -> Vec<f64> {
    let side = b.side;
    let mut v = b.values.clone();
    for &axis in axes {
        let stride = side.pow(axis as u32);
        for base in 0..v.len() {
            if !(base / stride).is_multiple_of(side) {
                continue;
            }
            let mut acc = CompensatedSum::new();
            let idx: Vec<usize> = (0..side).map(|i| base + i * stride).collect();
            let order: Box<dyn Iterator<Item = &usize>> = match variant {
                HardyVariant::A => Box::new(idx.iter().rev()),
                HardyVariant::B => Box::new(idx.iter()),
            };
            for &p in order {
                acc.add(v[p]);
                v[p] = acc.value();
            }
        }
    }
    v
}

/// `{Σ_{n_m} a_{n_m} [ ... [Σ_{n_1} a_{n_1} v_n̄^{θ_1}]^{θ_2/θ_1} ... ]^{θ_m/θ_{m-1}}}^{1/θ_m}`.
fn nested(values: &[f64], side: usize, a_axes: &[Vec<f64>], thetas: &[f64]) -> f64 {
    let mut current: Vec<f64> = values
        .chunks(side)
        .map(|fib| compensated_sum(fib.iter().enumerate().map(|(i, &x)| a_axes[0][i] * x.powf(thetas[0]))))
        .collect();
    for j in 1..thetas.len() {
        let e = thetas[j] / thetas[j - 1];
        current = current
            .chunks(side)
            .map(|fib| compensated_sum(fib.iter().enumerate().map(|(i, &x)| a_axes[j][i] * x.powf(e))))
            .collect();
    }
    current[0].powf(1.0 / thetas[thetas.len() - 1])
}

/// Norm-form sides of the nested inequality on `[0, t]^m`.
pub fn hardy6_sides(a_axes: &[Vec<f64>], b: &BoxArray, thetas: &[f64], variant: HardyVariant, t: usize, reverse_axes: bool) -> (f64, f64) {
    let bt = b.truncate(t);
    let mut axes: Vec<usize> = (0..b.m).collect();
    if reverse_axes {
        axes.reverse();
    }
    let partial = multi_partial(&bt, variant, &axes);
    let lhs = nested(&partial, t + 1, a_axes, thetas);
    let rhs = nested(&bt.values, t + 1, a_axes, thetas);
    (lhs, rhs)
}

/// Norm-form constant `∏ θ_j C_j` (`C_j` alone when `θ_j = 1`).
pub fn hardy6_constant(premises: &[f64], thetas: &[f64]) -> f64 {
    premises.iter().zip(thetas).map(|(&c, &th)| th.max(1.0) * c).product()
}

pub fn hardy6_check(a_axes: &[Vec<f64>], b: &BoxArray, thetas: &[f64], variant: HardyVariant, n: usize) -> Result<VerificationReport> {
    let m = b.m;
    if !(2..=3).contains(&m) || a_axes.len() != m || thetas.len() != m {
        return Err(Error::domain("nested Hardy check needs m in {2, 3} with one sequence and θ per axis"));
    }
    if b.side <= n {
        return Err(Error::domain(format!("b must cover [0, {n}]^m")));
    }
    if let Some(th) = thetas.iter().find(|t| !(**t >= 1.0 && t.is_finite())) {
        return Err(Error::domain(format!("θ = {th} must lie in [1, ∞)")));
    }
    for a in a_axes {
        check_sequences(a, a, n)?;
    }
    if b.values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::domain("b must be non-negative and finite"));
    }
    let mut report = VerificationReport::new("hardy6");
    let premises: Vec<f64> = a_axes.iter().map(|a| premise_constant(a, variant, n)).collect();
    for (j, &c) in premises.iter().enumerate() {
        if c > PREMISE_LIMIT {
            report.flag(format!("premise constant of axis {} is {c:.3e}", j + 1));
        }
    }
    report.note(format!("oracle constant = {:.12e}", hardy6_constant(&premises, thetas)));
    for t in 0..=n {
        let (lhs, rhs) = hardy6_sides(a_axes, b, thetas, variant, t, false);
        let (lhs2, rhs2) = hardy6_sides(a_axes, b, thetas, variant, t, true);
        if !close(lhs, lhs2) || !close(rhs, rhs2) {
            report.flag(format!("summation orders disagree at t = {t}"));
        }
        report.push("trunc", t as i64, lhs, rhs);
    }
    Ok(report.finish())
}

fn random_weights(rng: &mut ChaCha8Rng, variant: HardyVariant, len: usize) -> Vec<f64> {
    // geometric growth (A) or decay (B) with random factors keeps the premise constant finite
    let mut a = Vec::with_capacity(len);
    let mut v: f64 = rng.random_range(0.5..2.0);
    for _ in 0..len {
        a.push(v);
        let g: f64 = rng.random_range(1.3..4.0);
        v = match variant {
            HardyVariant::A => v * g,
            HardyVariant::B => v / g,
        };
    }
    a
}

/// Random premise-satisfying instances. Each row holds the largest ratio over all
/// truncations against the oracle constant, so every ratio should be at most 1.
pub fn hardy_random_check(seed: u64, cases: usize, n: usize) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("hardy-random");
    for case in 0..cases {
        let variant = if rng.random_bool(0.5) { HardyVariant::A } else { HardyVariant::B };
        let multi = case % 2 == 1;
        if multi {
            let m = if rng.random_bool(0.5) { 2 } else { 3 };
            let side = if m == 2 { n + 1 } else { n.min(8) + 1 };
            let t_max = side - 1;
            let a_axes: Vec<Vec<f64>> = (0..m).map(|_| random_weights(&mut rng, variant, side)).collect();
            let thetas: Vec<f64> = (0..m).map(|_| rng.random_range(1.0..3.0)).collect();
            let vals: Vec<f64> = (0..side.pow(m as u32)).map(|_| (rng.random_range(-6.0..2.0f64)).exp2()).collect();
            let b = BoxArray { side, m, values: vals };
            let r = hardy6_check(&a_axes, &b, &thetas, variant, t_max)?;
            let oracle = hardy6_constant(&a_axes.iter().map(|a| premise_constant(a, variant, t_max)).collect::<Vec<_>>(), &thetas);
            let worst = r.ratios().fold(0.0, f64::max);
            report.push(format!("case{case}-m{m}"), case as i64, worst, oracle);
        } else {
            let a = random_weights(&mut rng, variant, n + 1);
            let b: Vec<f64> = (0..=n).map(|_| (rng.random_range(-6.0..2.0f64)).exp2()).collect();
            let theta = rng.random_range(0.5..3.0);
            let r = hardy1_check(&a, &b, theta, variant, n)?;
            let oracle = hardy1_constant(premise_constant(&a, variant, n), theta);
            let worst = r.ratios().fold(0.0, f64::max);
            report.push(format!("case{case}-m1"), case as i64, worst, oracle);
        }
    }
    Ok(report.finish())
}
