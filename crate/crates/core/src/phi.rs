//! Φ-functions: concave, non-decreasing functions on `[0, 1]` vanishing at zero.
//!
//! A [`PhiFunction`] is the fundamental function of a rearrangement-invariant
//! space. Dilation indices are estimated from ratios `φ(2t)/φ(t)` on the dyadic
//! probe grid `t = 2^{-j}`, and the checks at the bottom of this module measure
//! the dyadic sum and integral estimates that hold for Φ-functions whose
//! indices lie strictly inside `(1, 2)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_midpoint, log_midpoint_from_zero};
use crate::report::VerificationReport;

/// Depth of the dyadic probe grid `t = 2^{-j}, j = 0..=PROBE_DEPTH`.
pub const PROBE_DEPTH: usize = 48;

/// Truncation point of infinite dyadic tails.
pub const TAIL_S_MAX: usize = 64;

const INDEX_TOL: f64 = 1e-9;

/// Piecewise-linear function through `(0, 0)` and ascending knots.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    fn new(mut knots: Vec<(f64, f64)>) -> Self {
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.first().is_none_or(|k| k.0 > 0.0) {
            knots.insert(0, (0.0, 0.0));
        }
        Self { knots }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        let last = k[k.len() - 1];
        if t >= last.0 {
            return last.1;
        }
        let i = k.partition_point(|p| p.0 <= t);
        let (t0, y0) = k[i - 1];
        let (t1, y1) = k[i];
        y0 + (y1 - y0) * (t - t0) / (t1 - t0)
    }

    fn first_slope(&self) -> f64 {
        let (t1, y1) = self.knots[1.min(self.knots.len() - 1)];
        if t1 > 0.0 {
            y1 / t1
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `t^a`; `a = 0` is the constant 1 on `(0, 1]`, produced only by the tilde transform.
    Power { a: f64 },
    /// `t^a (1 + ln(1/t))^b`.
    PowerLog { a: f64, b: f64 },
    /// Least concave majorant of a dyadic table.
    Envelope(PiecewiseLinear),
    /// User-supplied table, interpolated linearly.
    Table(PiecewiseLinear),
    /// `t / φ(t)` of the inner function.
    Tilde(Box<PhiFunction>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiFunction {
    family: Family,
    label: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilationIndices {
    pub alpha: f64,
    pub beta: f64,
    pub probe_depth: usize,
}

impl DilationIndices {
    /// `1 < alpha <= beta < 2`.
    pub fn strictly_inside(&self) -> bool {
        self.alpha > 1.0 + INDEX_TOL && self.beta < 2.0 - INDEX_TOL
    }

    /// `1 <= alpha <= beta <= 2`, the range every fundamental function obeys.
    pub fn in_symmetric_range(&self) -> bool {
        self.alpha >= 1.0 - INDEX_TOL && self.beta <= 2.0 + INDEX_TOL && self.alpha <= self.beta + INDEX_TOL
    }
}

/// Invariant diagnostics on the probe grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiDiagnostics {
    pub monotone: bool,
    pub concave: bool,
    pub continuous_at_zero: bool,
    pub indices: DilationIndices,
}

impl PhiDiagnostics {
    pub fn is_phi(&self) -> bool {
        self.monotone && self.concave && self.continuous_at_zero
    }
}

/// Result of [`concave_envelope`].
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub phi: PhiFunction,
    /// `max_j envelope(t_j) / g_j`.
    pub k: f64,
    /// Set when the table has no Φ-function equivalent: its lower dilation
    /// index on the tail is not above 1 (e.g. the table is decreasing).
    pub majorant_fails: bool,
    pub lower_index: f64,
}

impl PhiFunction {
    pub fn power(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !a.is_finite() {
            return Err(Error::domain(format!("power exponent {a} outside [0, 1]")));
        }
        Ok(Self {
            family: Family::Power { a },
            label: format!("pow:{a}"),
        })
    }

    /// Raw `t^a (1 + ln(1/t))^b`; see [`PhiFunction::ensure_phi`] for the concave version.
    pub fn powlog(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) || !b.is_finite() {
            return Err(Error::domain(format!("powlog parameters a={a}, b={b} invalid")));
        }
        Ok(Self {
            family: Family::PowerLog { a, b },
            label: format!("powlog:{a}:{b}"),
        })
    }

    /// Custom table through `(t, g)` points with `t` in `(0, 1]`, anchored at the origin.
    pub fn table(points: &[(f64, f64)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("empty table"));
        }
        for &(t, g) in points {
            if !(t > 0.0 && t <= 1.0) || !(g >= 0.0) {
                return Err(Error::domain(format!("table point ({t}, {g}) invalid")));
            }
        }
        Ok(Self {
            family: Family::Table(PiecewiseLinear::new(points.to_vec())),
            label: "table".to_string(),
        })
    }

    /// Parse `pow:<a>` or `powlog:<a>:<b>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("malformed number '{s}' in Φ-spec '{spec}'")))
        };
        match parts.as_slice() {
            ["pow", a] => {
                let a = num(a)?;
                if a <= 0.0 {
                    return Err(Error::domain(format!("pow exponent must lie in (0, 1], got {a}")));
                }
                Self::power(a)
            }
            ["powlog", a, b] => Ok(Self::powlog(num(a)?, num(b)?)?.ensure_phi()),
            _ => Err(Error::domain(format!("unknown Φ-spec '{spec}'"))),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Exponent when the function is exactly `t^a`.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.family {
            Family::Power { a } => Some(a),
            _ => None,
        }
    }

    /// `φ(t)` without range checking; `t` must lie in `[0, 1]`.
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Power { a } => {
                if *a == 0.0 {
                    1.0
                } else {
                    t.powf(*a)
                }
            }
            Family::PowerLog { a, b } => t.powf(*a) * (1.0 - t.ln()).powf(*b),
            Family::Envelope(pl) | Family::Table(pl) => pl.eval(t),
            Family::Tilde(inner) => {
                let v = inner.value(t);
                if v > 0.0 {
                    t / v
                } else {
                    0.0
                }
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("t = {t} outside [0, 1]")));
        }
        Ok(self.value(t))
    }

    /// `t ↦ t/φ(t)`, zero at the origin. Involutive.
    pub fn tilde(&self) -> PhiFunction {
        match &self.family {
            Family::Power { a } => PhiFunction {
                family: Family::Power { a: 1.0 - a },
                label: format!("pow:{}", 1.0 - a),
            },
            Family::Tilde(inner) => (**inner).clone(),
            _ => PhiFunction {
                label: format!("tilde({})", self.label),
                family: Family::Tilde(Box::new(self.clone())),
            },
        }
    }

    pub fn continuous_at_zero(&self) -> bool {
        match &self.family {
            Family::Power { a } => *a > 0.0,
            Family::PowerLog { .. } | Family::Envelope(_) | Family::Table(_) => true,
            // t/φ(t) → 0 iff φ(t)/t → ∞
            Family::Tilde(inner) => match &inner.family {
                Family::Power { a } => *a < 1.0,
                Family::PowerLog { a, b } => *a < 1.0 || *b > 0.0,
                Family::Envelope(pl) | Family::Table(pl) => !pl.first_slope().is_finite(),
                Family::Tilde(_) => true,
            },
        }
    }

    pub fn dilation_indices(&self, probe_depth: usize) -> Result<DilationIndices> {
        if probe_depth < 8 {
            return Err(Error::domain(format!("probe depth {probe_depth} < 8")));
        }
        let first = probe_depth - probe_depth / 4 + 1;
        let mut alpha = f64::INFINITY;
        let mut beta = f64::NEG_INFINITY;
        for j in first..=probe_depth {
            let hi = self.value((-(j as f64 - 1.0)).exp2());
            let lo = self.value((-(j as f64)).exp2());
            if lo <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "{} vanishes at t = 2^-{j}",
                    self.label
                )));
            }
            let r = hi / lo;
            alpha = alpha.min(r);
            beta = beta.max(r);
        }
        Ok(DilationIndices {
            alpha,
            beta,
            probe_depth,
        })
    }

    pub fn diagnostics(&self) -> Result<PhiDiagnostics> {
        let probes: Vec<f64> = (0..=PROBE_DEPTH).map(|j| (-(j as f64)).exp2()).collect();
        let vals: Vec<f64> = probes.iter().map(|&t| self.value(t)).collect();
        let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        let tol = 1e-12 * scale;
        // probes descend in t, so values must descend too
        let monotone = vals.windows(2).all(|w| w[1] <= w[0] + tol);
        let concave = probes.windows(2).zip(vals.windows(2)).all(|(t, v)| {
            let mid = self.value(0.5 * (t[0] + t[1]));
            mid >= 0.5 * (v[0] + v[1]) - tol
        });
        Ok(PhiDiagnostics {
            monotone,
            concave,
            continuous_at_zero: self.continuous_at_zero(),
            indices: self.dilation_indices(PROBE_DEPTH)?,
        })
    }

    /// Return `self` if it passes the probe-grid invariants, else the least
    /// concave majorant of its probe values.
    pub fn ensure_phi(self) -> PhiFunction {
        match self.diagnostics() {
            Ok(d) if d.monotone && d.concave => self,
            _ => {
                let table: Vec<(f64, f64)> = (0..=PROBE_DEPTH)
                    .map(|j| {
                        let t = (-(j as f64)).exp2();
                        (t, self.value(t))
                    })
                    .collect();
                match concave_envelope(&table) {
                    Ok(env) => PhiFunction {
                        family: env.phi.family,
                        label: format!("{} (envelope)", self.label),
                    },
                    Err(_) => self,
                }
            }
        }
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Least concave non-decreasing majorant of a dyadic table `(t_j, g_j)` with
/// `t_j = 2^{-j}` descending, anchored to `0` at `t = 0`.
pub fn concave_envelope(values: &[(f64, f64)]) -> Result<Envelope> {
    if values.is_empty() {
        return Err(Error::domain("empty table"));
    }
    for &(t, g) in values {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::domain(format!("non-positive table value {g} at t = {t}")));
        }
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::domain(format!("table abscissa {t} outside (0, 1]")));
        }
    }
    for w in values.windows(2) {
        if ((w[0].0 / w[1].0) - 2.0).abs() > 1e-12 {
            return Err(Error::domain("table grid is not dyadic and descending"));
        }
    }

    let mut pts: Vec<(f64, f64)> = values.to_vec();
    pts.reverse();
    pts.insert(0, (0.0, 0.0));

    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // flatten after the maximum so the majorant is non-decreasing
    let imax = hull
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let t_end = hull[hull.len() - 1].0;
    let y_max = hull[imax].1;
    hull.truncate(imax + 1);
    if t_end > hull[imax].0 {
        hull.push((t_end, y_max));
    }

    let pl = PiecewiseLinear::new(hull);
    let k = values
        .iter()
        .map(|&(t, g)| pl.eval(t) / g)
        .fold(1.0_f64, f64::max);

    // lower dilation index of the table itself on its deepest quartile
    let n = values.len();
    let quart = (n / 4).max(1);
    let lower_index = values
        .windows(2)
        .skip(n.saturating_sub(1 + quart))
        .map(|w| w[0].1 / w[1].1)
        .fold(f64::INFINITY, f64::min);
    let majorant_fails = !(lower_index > 1.0 + INDEX_TOL);

    Ok(Envelope {
        phi: PhiFunction {
            family: Family::Envelope(pl),
            label: "envelope".to_string(),
        },
        k,
        majorant_fails,
        lower_index,
    })
}

/// `∫_a^b φ^p(t) dt/t` with `0 <= a <= b <= 1`; closed form for powers,
/// otherwise log-midpoint quadrature with `pieces` points per dyadic interval.
pub fn log_integral(phi: &PhiFunction, p: f64, a: f64, b: f64, pieces: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    if let Some(exp) = phi.power_exponent() {
        let c = exp * p;
        if c == 0.0 {
            return if a == 0.0 { f64::INFINITY } else { (b / a).ln() };
        }
        if a == 0.0 {
            return if c > 0.0 { b.powf(c) / c } else { f64::INFINITY };
        }
        return (b.powf(c) - a.powf(c)) / c;
    }
    let g = |t: f64| phi.value(t).powf(p);
    if a == 0.0 {
        return log_midpoint_from_zero(&g, b, pieces);
    }
    // split at dyadic points so each piece has log-width at most ln 2
    let mut acc = Vec::new();
    let mut hi = b;
    while hi > a {
        let lo = (hi * 0.5).max(a);
        acc.push(log_midpoint(&g, lo, hi, pieces));
        hi = lo;
    }
    compensated_sum(acc)
}

pub(crate) fn index_flag(name: &str, phi: &PhiFunction, report: &mut VerificationReport) -> Option<DilationIndices> {
    match phi.dilation_indices(PROBE_DEPTH) {
        Ok(ix) => {
            if !ix.strictly_inside() {
                report.flag(format!(
                    "index precondition 1 < alpha <= beta < 2 violated for {name} = {} (alpha={:.6}, beta={:.6})",
                    phi, ix.alpha, ix.beta
                ));
            }
            Some(ix)
        }
        Err(e) => {
            report.flag(format!("{name} = {phi}: {e}"));
            None
        }
    }
}

/// Flags for the chain `1 < α_ψ <= β_ψ < α_φ <= β_φ < 2`.
pub fn index_chain_flags(psi: &PhiFunction, phi: &PhiFunction) -> Vec<String> {
    let mut r = VerificationReport::new("chain");
    let ip = index_flag("psi", psi, &mut r);
    let iq = index_flag("phi", phi, &mut r);
    if let (Some(ip), Some(iq)) = (ip, iq) {
        if !(ip.beta < iq.alpha - INDEX_TOL) {
            r.flag(format!(
                "index chain beta_psi < alpha_phi violated for psi = {psi}, phi = {phi} ({:.6} >= {:.6})",
                ip.beta, iq.alpha
            ));
        }
    }
    r.precondition_flags
}

const CHECK_PIECES: usize = 32;

/// Head and tail integral estimates for `ψ^q` at `x = 2^{-n}`, `n = 1..=depth`.
///
/// Rows `head`: `∫_0^x ψ^q dt/t` against `ψ^q(x)`.
/// Rows `tail`: `∫_x^1 (t ψ^q(t))^{-1} dt` against `ψ^{-q}(x)`.
pub fn lemma2_check(psi: &PhiFunction, q: f64, depth: usize) -> Result<VerificationReport> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("q = {q} must be positive")));
    }
    let mut report = VerificationReport::new("lemma2");
    index_flag("psi", psi, &mut report);
    for n in 1..=depth {
        let x = (-(n as f64)).exp2();
        let px = psi.value(x).powf(q);
        let head = log_integral(psi, q, 0.0, x, CHECK_PIECES);
        let tail = log_integral(psi, -q, x, 1.0, CHECK_PIECES);
        report.push("head", n as i64, head, px);
        report.push("tail", n as i64, tail, 1.0 / px);
    }
    Ok(report.finish())
}

/// `Σ_{s=0}^n (ψ/φ)^θ(2^{-s})` against its last term, `n = 0..=n_max`.
pub fn lemma4_check(psi: &PhiFunction, phi: &PhiFunction, theta: f64, n_max: usize) -> Result<VerificationReport> {
    if !(theta > 0.0) {
        return Err(Error::domain(format!("theta = {theta} must be positive")));
    }
    let mut report = VerificationReport::new("lemma4");
    for f in index_chain_flags(psi, phi) {
        report.flag(f);
    }
    let w = |s: usize| {
        let t = (-(s as f64)).exp2();
        (psi.value(t) / phi.value(t)).powf(theta)
    };
    let terms: Vec<f64> = (0..=n_max).map(w).collect();
    for n in 0..=n_max {
        let lhs = compensated_sum(terms[..=n].iter().copied());
        report.push("sum", n as i64, lhs, terms[n]);
    }
    Ok(report.finish())
}

/// `Σ_{s=n}^{S_max} ψ^θ(2^{-s})` against `ψ^θ(2^{-n})` for `n = n_min..=n_max`,
/// with the tail beyond `S_max = 64` bounded geometrically in the notes.
pub fn lemma5_check(psi: &PhiFunction, theta: f64, n_min: usize, n_max: usize) -> Result<VerificationReport> {
    if !(theta > 0.0) {
        return Err(Error::domain(format!("theta = {theta} must be positive")));
    }
    if n_max > TAIL_S_MAX || n_min > n_max {
        return Err(Error::domain(format!(
            "scale range {n_min}..={n_max} must lie within 0..={TAIL_S_MAX}"
        )));
    }
    let mut report = VerificationReport::new("lemma5");
    let ix = index_flag("psi", psi, &mut report);
    let terms: Vec<f64> = (0..=TAIL_S_MAX)
        .map(|s| psi.value((-(s as f64)).exp2()).powf(theta))
        .collect();
    for n in n_min..=n_max {
        let lhs = compensated_sum(terms[n..].iter().copied());
        report.push("tail", n as i64, lhs, terms[n]);
    }
    if let Some(ix) = ix {
        let rho = ix.alpha.powf(-theta);
        if rho < 1.0 {
            let bound = terms[TAIL_S_MAX] * rho / (1.0 - rho);
            report.note(format!(
                "sum truncated at s = {TAIL_S_MAX}; omitted tail <= {bound:.3e}"
            ));
        } else {
            report.note(format!("sum truncated at s = {TAIL_S_MAX}; tail not summable"));
        }
    }
    Ok(report.finish())
}
