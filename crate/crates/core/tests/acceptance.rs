//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines always reach the output.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use lorentz_besov::besov::{normalize_to_ball, BesovParams};
use lorentz_besov::grid::{random_bandlimited, rect_indicator, unit_block, hyperbolic_cross, GridFunction};
use lorentz_besov::norms::{block_norm_check, dirichlet_norm_check, lebesgue_norm, lorentz_norm_iso, BlockSelection, LorentzParams};
use lorentz_besov::phi::{lemma2_check, lemma4_check, lemma5_check, PhiFunction, PROBE_DEPTH};
use lorentz_besov::rearrange::{distribution_function, iterated_sort, rearrange_1d};
use lorentz_besov::report::VerificationReport;
use lorentz_besov::verify::{
    best_approx_refine, class_ball_corpus, hardy1_check, hardy6_check, hardy_random_check, lacunary_corpus, random_corpus,
    theorem2_depth_check, theorem4_corpus_check, theorem5_check, BoxArray, HardyVariant,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn pow(a: f64) -> PhiFunction {
    PhiFunction::power(a).unwrap()
}

fn uniform(m: usize, a: f64, tau: f64) -> LorentzParams {
    LorentzParams::uniform(m, pow(a), tau).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {:.1?}, limit {:.0?}", elapsed, limit))
}

/// Largest ratio per scale across the report.
fn max_by_scale(r: &VerificationReport) -> BTreeMap<i64, f64> {
    r.max_ratio_by_scale().into_iter().collect()
}

/// Largest ratio of the max-ratio column between consecutive scales.
fn growth(r: &VerificationReport) -> f64 {
    let v: Vec<f64> = max_by_scale(r).into_values().collect();
    v.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

fn c1_lq_collapse() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (dims, count) in [(vec![256], 50u64), (vec![64, 64], 50)] {
        let lmax = if dims.len() == 1 { 7 } else { 5 };
        for seed in 0..count {
            let f = random_bandlimited(&dims, seed, lmax).map_err(|e| e.to_string())?;
            for q in [2.0, 3.0] {
                let lq = lebesgue_norm(&f, q);
                let iso = lorentz_norm_iso(&f, &pow(1.0 / q), q);
                worst = worst.max((iso - lq).abs() / lq);
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "L_q collapse")?;
    ensure(worst < 1e-10, || format!("worst relative gap {worst:.3e}"))?;
    Ok(format!("worst relative gap {worst:.2e} over 200 evaluations in {:.2?}", start.elapsed()))
}

fn c2_rearrangement() -> Outcome {
    // equimeasurability on the random corpus
    let corpus = random_corpus(&[256], 0..25, 7)
        .and_then(|mut c| {
            c.extend(random_corpus(&[32, 32], 100..125, 4)?);
            Ok(c)
        })
        .map_err(|e| e.to_string())?;
    for (id, f) in &corpus {
        let samples = f.abs_values();
        let step = rearrange_1d(&samples).map_err(|e| e.to_string())?;
        let mut sorted = samples.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        ensure(step.values == sorted, || format!("{id}: rearranged values are not a permutation"))?;
        for &lambda in samples.iter().step_by(7) {
            let mu_f = distribution_function(&samples, lambda);
            let mu_star = distribution_function(&step.values, lambda);
            ensure(mu_f == mu_star, || format!("{id}: distribution differs at {lambda}"))?;
        }
    }
    // indicators rearrange to χ_[0,t)
    for k in 1..=64 {
        let t = k as f64 / 64.0;
        let chi = rect_indicator(&[64], &[t]).map_err(|e| e.to_string())?;
        let step = rearrange_1d(&chi.abs_values()).map_err(|e| e.to_string())?;
        for i in 0..64 {
            let expected = if i < k { 1.0 } else { 0.0 };
            ensure(step.values[i] == expected, || format!("indicator of [0,{t}) cell {i}"))?;
        }
    }
    // every sub-box indicator of a 4×4×4 grid, plus random values
    let intervals: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..=4).map(move |b| (a, b))).collect();
    let mut checked = 0;
    for &(a1, b1) in &intervals {
        for &(a2, b2) in &intervals {
            for &(a3, b3) in &intervals {
                let values: Vec<f64> = (0..64)
                    .map(|flat| {
                        let (i, j, k) = (flat % 4, (flat / 4) % 4, flat / 16);
                        let inside = (a1..b1).contains(&i) && (a2..b2).contains(&j) && (a3..b3).contains(&k);
                        if inside { 1.0 } else { 0.0 }
                    })
                    .collect();
                let r = iterated_sort(&[4, 4, 4], &values).map_err(|e| e.to_string())?;
                ensure(r.is_non_increasing(), || format!("box {a1}..{b1} x {a2}..{b2} x {a3}..{b3}"))?;
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..2000 {
        let values: Vec<f64> = (0..64).map(|_| (rng.random_range(0..5u32)) as f64).collect();
        let r = iterated_sort(&[4, 4, 4], &values).map_err(|e| e.to_string())?;
        ensure(r.is_non_increasing(), || format!("random 4x4x4 trial {trial}"))?;
        checked += 1;
    }
    Ok(format!("{} corpus functions equimeasurable, 64 indicators exact, {checked} 4x4x4 grids monotone", corpus.len()))
}

fn c3_dilation_indices() -> Outcome {
    let mut worst: f64 = 0.0;
    for q in [1.1, 2.0, 4.0, 10.0] {
        let ix = pow(1.0 / q).dilation_indices(PROBE_DEPTH).map_err(|e| e.to_string())?;
        let expected = (1.0 / q).exp2();
        worst = worst.max((ix.alpha - expected).abs()).max((ix.beta - expected).abs());
    }
    ensure(worst < 1e-12, || format!("worst deviation {worst:.3e}"))?;
    Ok(format!("worst deviation {worst:.2e}"))
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn c4_hardy() -> Outcome {
    let start = Instant::now();
    let n = 30;
    let mut worst: f64 = 0.0;
    let geo = |r: f64| (0..=n).map(|k| r.powi(k as i32)).collect::<Vec<f64>>();
    // a_k = 2^k, b_k = 4^{-k}, θ = 1
    let lhs_a = |t: i32| geometric_oracle(t).0;
    let rhs_a = |t: i32| geometric_oracle(t).1;
    let r = hardy1_check(&geo(2.0), &geo(0.25), 1.0, HardyVariant::A, n).map_err(|e| e.to_string())?;
    ensure(r.is_clean(), || format!("variant a flags {:?}", r.precondition_flags))?;
    for row in &r.rows {
        let t = row.scale as i32;
        worst = worst.max(rel(row.lhs, lhs_a(t))).max(rel(row.rhs, rhs_a(t)));
        ensure(row.ratio().unwrap() <= 4.0 / 3.0 + 1e-12, || format!("variant a ratio {} above 4/3", row.ratio().unwrap()))?;
    }
    // a_k = 2^{-k}, b_k = 1 for k <= 5, θ = 2
    let b: Vec<f64> = (0..=n).map(|k| if k <= 5 { 1.0 } else { 0.0 }).collect();
    let r = hardy1_check(&geo(0.5), &b, 2.0, HardyVariant::B, n).map_err(|e| e.to_string())?;
    for row in &r.rows {
        let t = row.scale as i32;
        let lhs: f64 = (0..=t).map(|k| 0.5f64.powi(k) * ((k.min(5) + 1) as f64).powi(2)).sum();
        let rhs: f64 = (0..=t.min(5)).map(|k| 0.5f64.powi(k)).sum();
        worst = worst.max(rel(row.lhs, lhs)).max(rel(row.rhs, rhs));
    }
    // m = 2: a_k = 2^k, b = 2^{-2(k1+k2)}, θ = (1, 1) factors into the one-dimensional oracle
    let b2 = BoxArray::from_fn(2, n + 1, |k| 0.25f64.powi((k[0] + k[1]) as i32));
    let r = hardy6_check(&[geo(2.0), geo(2.0)], &b2, &[1.0, 1.0], HardyVariant::A, n).map_err(|e| e.to_string())?;
    ensure(r.is_clean(), || format!("nested flags {:?}", r.precondition_flags))?;
    for row in &r.rows {
        let t = row.scale as i32;
        worst = worst.max(rel(row.lhs, lhs_a(t).powi(2))).max(rel(row.rhs, rhs_a(t).powi(2)));
        ensure(row.ratio().unwrap() <= 16.0 / 9.0 + 1e-12, || "nested ratio above (4/3)^2".into())?;
    }
    ensure(worst < 1e-9, || format!("oracle mismatch {worst:.3e}"))?;
    let random = hardy_random_check(2024, 200, 20).map_err(|e| e.to_string())?;
    let over: Vec<&str> = random.rows.iter().filter(|row| row.lhs > row.rhs).map(|row| row.case_id.as_str()).collect();
    ensure(over.is_empty(), || format!("oracle constant exceeded on {over:?}"))?;
    ensure(random.is_clean(), || format!("random flags {:?}", random.precondition_flags))?;
    within(start.elapsed(), Duration::from_secs(5), "Hardy suite")?;
    let tightest = random.rows.iter().map(|row| row.lhs / row.rhs).fold(0.0, f64::max);
    Ok(format!("oracle mismatch {worst:.2e}; 200 random cases, largest ratio/constant {tightest:.3}; {:.2?}", start.elapsed()))
}

/// Closed-form sides for `a_k = 2^k`, `b_k = 4^{-k}`, `θ = 1` on `[0, t]`.
fn geometric_oracle(t: i32) -> (f64, f64) {
    let rhs = 2.0 * (1.0 - 0.5f64.powi(t + 1));
    (4.0 / 3.0 * (rhs - 0.25f64.powi(t + 1) * (2f64.powi(t + 1) - 1.0)), rhs)
}

fn spread(r: &VerificationReport, case: &str) -> f64 {
    let v: Vec<f64> = r.rows_for(case).filter(|row| row.scale >= 1).filter_map(|row| row.ratio()).collect();
    v.iter().copied().fold(0.0, f64::max) / v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn c5_lemmas() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut clean = Vec::new();
    for (a, q) in [(0.5, 2.0), (0.7, 1.5)] {
        let r = lemma2_check(&pow(a), q, 30).map_err(|e| e.to_string())?;
        clean.push(r.is_clean());
        worst = worst.max(spread(&r, "head")).max(spread(&r, "tail"));
    }
    for theta in [1.0, 2.0] {
        let r = lemma4_check(&pow(0.55), &pow(0.7), theta, 30).map_err(|e| e.to_string())?;
        clean.push(r.is_clean());
        worst = worst.max(spread(&r, "sum"));
    }
    for theta in [1.0, 2.0] {
        let r = lemma5_check(&pow(0.5), theta, 1, 30).map_err(|e| e.to_string())?;
        clean.push(r.is_clean());
        worst = worst.max(spread(&r, "tail"));
    }
    ensure(clean.iter().all(|&c| c), || "an admissible instance raised a flag".into())?;
    ensure(worst < 20.0, || format!("spread factor {worst:.3}"))?;
    // ψ = t sits on the boundary of the index range
    let linear = pow(1.0);
    let l2 = lemma2_check(&linear, 2.0, 30).map_err(|e| e.to_string())?;
    let l4 = lemma4_check(&linear, &pow(0.7), 1.0, 30).map_err(|e| e.to_string())?;
    let l5 = lemma5_check(&linear, 1.0, 1, 30).map_err(|e| e.to_string())?;
    ensure(!l2.is_clean() && !l4.is_clean() && !l5.is_clean(), || "psi = t not flagged".into())?;
    let diverging = spread(&l4, "sum");
    ensure(diverging > 1e2, || format!("psi = t ratios do not diverge (spread {diverging:.3})"))?;
    Ok(format!("admissible spread {worst:.3}; psi = t flagged in all three, Lemma 4 spread {diverging:.3e}"))
}

fn c6_block_norms() -> Outcome {
    let params = uniform(1, 0.7, 2.0);
    let coarse = block_norm_check(&params, 1, 8, &[1024], BlockSelection::Box).map_err(|e| e.to_string())?;
    let fine = block_norm_check(&params, 1, 8, &[2048], BlockSelection::Box).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = coarse.ratios().collect();
    let c2 = ratios.iter().copied().fold(0.0, f64::max);
    let c1 = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(c2 / c1 < 10.0, || format!("bracket {:.3}", c2 / c1))?;
    let moved = coarse.ratios().zip(fine.ratios()).map(|(a, b)| (a - b).abs() / a).fold(0.0, f64::max);
    ensure(moved < 0.02, || format!("refinement moved a ratio by {:.2}%", 100.0 * moved))?;
    Ok(format!("c1 = {c1:.4}, c2 = {c2:.4}, c2/c1 = {:.4}, refinement shift {:.3}%", c2 / c1, 100.0 * moved))
}

fn c7_dirichlet() -> Outcome {
    let phi = pow(0.7);
    let coarse = dirichlet_norm_check(&phi, 2.0, 10, 12).map_err(|e| e.to_string())?;
    let fine = dirichlet_norm_check(&phi, 2.0, 10, 13).map_err(|e| e.to_string())?;
    ensure(coarse.is_clean(), || format!("flags {:?}", coarse.precondition_flags))?;
    // n = 2..1024
    let r: Vec<f64> = coarse.rows.iter().filter(|row| row.scale >= 2).map(|row| row.ratio().unwrap()).collect();
    ensure(r.iter().all(|x| x.is_finite()), || "non-finite ratio".into())?;
    let upticks = r.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    ensure(upticks <= 1.001 && r[r.len() - 1] < r[0], || format!("not non-increasing: largest step factor {upticks:.5}"))?;
    let moved = coarse
        .rows
        .iter()
        .zip(&fine.rows)
        .filter(|(a, _)| a.scale >= 2)
        .map(|(a, b)| (a.ratio().unwrap() - b.ratio().unwrap()).abs() / a.ratio().unwrap())
        .fold(0.0, f64::max);
    ensure(moved < 0.02, || format!("refinement moved a ratio by {:.2}%", 100.0 * moved))?;
    let max = r.iter().copied().fold(0.0, f64::max);
    Ok(format!("max ratio {max:.4} at n = 2, {:.4} at n = 1024, largest step factor {upticks:.5}, refinement shift {:.3}%", r[r.len() - 1], 100.0 * moved))
}

fn c8_theorem2() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for dims in [vec![256], vec![128, 128]] {
        let m = dims.len();
        let corpus = random_corpus(&dims, 0..50, 6).map_err(|e| e.to_string())?;
        let r = theorem2_depth_check(&corpus, &[4, 5, 6], &uniform(m, 0.7, 2.0), &uniform(m, 0.55, 2.0)).map_err(|e| e.to_string())?;
        let g = growth(&r);
        ensure(g < 1.1, || format!("m = {m}: growth {g:.4}"))?;
        ensure(r.ratios().all(f64::is_finite), || format!("m = {m}: non-finite ratio"))?;
        parts.push(format!("m = {m}: growth {g:.4}, max ratio {:.4}", r.summary().max_ratio.unwrap()));
    }
    within(start.elapsed(), Duration::from_secs(120), "Theorem 2 corpus")?;
    Ok(format!("{} ({:.1?}; index chain flagged for this pair)", parts.join("; "), start.elapsed()))
}

fn theorem5_instance(psi: f64, phi: f64) -> Result<VerificationReport, String> {
    let besov = BesovParams::new(uniform(1, phi, 2.0), vec![0.5], vec![2.0]).map_err(|e| e.to_string())?;
    let corpus = class_ball_corpus(&[1024], 0..50, 9, &besov).map_err(|e| e.to_string())?;
    let ns: Vec<usize> = (1..=7).collect();
    theorem5_check(&besov, &uniform(1, psi, 2.0), &[1.0], &ns, &corpus).map_err(|e| e.to_string())
}

fn c9_theorem5() -> Outcome {
    let r = theorem5_instance(0.55, 0.7)?;
    ensure(r.is_clean(), || format!("flags {:?}", r.precondition_flags))?;
    let g = growth(&r);
    ensure(g < 1.1, || format!("growth {g:.4}"))?;
    ensure(r.ratios().all(f64::is_finite), || "non-finite ratio".into())?;
    // a function inside the cross
    let besov = BesovParams::new(uniform(1, 0.7, 2.0), vec![0.5], vec![2.0]).unwrap();
    let inside = normalize_to_ball(&random_bandlimited(&[1024], 77, 3).unwrap(), &besov).unwrap();
    let z = theorem5_check(&besov, &uniform(1, 0.55, 2.0), &[1.0], &[4, 5, 6, 7], &vec![("inside".into(), inside)])
        .map_err(|e| e.to_string())?;
    ensure(z.rows.iter().all(|row| row.lhs == 0.0), || "LHS not exactly zero inside the cross".into())?;
    let swapped = theorem5_instance(0.7, 0.55)?;
    println!(
        "info: Theorem 5 with psi = t^0.7, phi = t^0.55 (index chain violated, flagged = {}): growth {:.4}",
        !swapped.is_clean(),
        growth(&swapped)
    );
    Ok(format!("psi = t^0.55, phi = t^0.7: growth {g:.4}, max ratio {:.4}; inside-cross LHS = 0 exactly", r.summary().max_ratio.unwrap()))
}

fn c10_theorem4() -> Outcome {
    let target = uniform(1, 0.6, 2.0);
    let lambda = [1.0 / 1.3f64.log2()];
    let corpus = lacunary_corpus(1, 6, 17, 20).map_err(|e| e.to_string())?;
    let coarse = theorem4_corpus_check(&corpus, &lambda, &target, &[256]).map_err(|e| e.to_string())?;
    let fine = theorem4_corpus_check(&corpus, &lambda, &target, &[512]).map_err(|e| e.to_string())?;
    ensure(coarse.is_clean(), || format!("flags {:?}", coarse.precondition_flags))?;
    let min = coarse.ratios().fold(f64::INFINITY, f64::min);
    ensure(min > 1e-3, || format!("min ratio {min:.3e}"))?;
    let fine_by_id: BTreeMap<&str, f64> = fine.rows.iter().map(|row| (row.case_id.as_str(), row.ratio().unwrap())).collect();
    let moved = coarse
        .rows
        .iter()
        .map(|row| (row.ratio().unwrap() - fine_by_id[row.case_id.as_str()]).abs() / row.ratio().unwrap())
        .fold(0.0, f64::max);
    ensure(moved < 0.02, || format!("refinement moved a ratio by {:.2}%", 100.0 * moved))?;
    Ok(format!("min ratio {min:.4} over {} series, refinement shift {:.3}%", corpus.len(), 100.0 * moved))
}

fn c11_best_approx() -> Outcome {
    let cross = hyperbolic_cross(&[1.0], 4.0, 1).unwrap();
    let l2 = uniform(1, 0.5, 2.0);
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let f = random_bandlimited(&[128], seed, 6).unwrap();
        let out = best_approx_refine(&f, &cross, &l2, 40).map_err(|e| e.to_string())?;
        worst = worst.max((out.error - out.partial_sum_error).abs());
    }
    ensure(worst <= 1e-8, || format!("L2 refinement moved the error by {worst:.3e}"))?;
    let t3 = uniform(1, 0.7, 3.0);
    let mut strict = 0;
    let mut best_gain: f64 = 0.0;
    for seed in 0..5 {
        let noise = random_bandlimited(&[128], 100 + seed, 3).unwrap().scale(0.3);
        let f: GridFunction = unit_block(&[128], &[5]).unwrap().add(&noise).unwrap();
        let out = best_approx_refine(&f, &cross, &t3, 60).map_err(|e| e.to_string())?;
        ensure(out.error <= out.partial_sum_error, || format!("seed {seed}: refinement is worse"))?;
        ensure(out.history.windows(2).all(|w| w[1] <= w[0]), || format!("seed {seed}: history not monotone"))?;
        if out.error < out.partial_sum_error {
            strict += 1;
            best_gain = best_gain.max(1.0 - out.error / out.partial_sum_error);
        }
    }
    ensure(strict >= 1, || "tau = 3 refinement never improved".into())?;
    Ok(format!("L2 shift {worst:.2e}; tau = 3 strictly better on {strict}/5, best gain {:.2}%", 100.0 * best_gain))
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lorentz-besov-acceptance-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn c12_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_lorentz-besov");
    let config = scratch_dir("config");
    std::fs::create_dir_all(&config).map_err(|e| e.to_string())?;
    let cfg = config.join("run.cfg");
    std::fs::write(&cfg, "dims = 256\nscales = 1:5\ncorpus = 8\nlmax = 6\ntrunc = 12\n").map_err(|e| e.to_string())?;
    let mut compared = 0;
    for id in ["theorem1", "theorem2", "theorem5", "hardy-random", "lemma7", "theorem4", "approx"] {
        let mut outputs = Vec::new();
        for (run, threads) in [(0, None), (1, Some("1"))] {
            let dir = scratch_dir(&format!("{id}-{run}"));
            let mut cmd = Command::new(bin);
            cmd.args(["verify", id, "--seed", "7", "--config"]).arg(&cfg).arg("--out").arg(&dir);
            if let Some(t) = threads {
                cmd.args(["--threads", t]);
            }
            let status = cmd.output().map_err(|e| e.to_string())?;
            ensure(status.status.code().is_some_and(|c| c <= 1), || {
                format!("{id}: exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(std::fs::read(dir.join(format!("{id}.csv"))).map_err(|e| e.to_string())?);
            let _ = std::fs::remove_dir_all(&dir);
        }
        ensure(outputs[0] == outputs[1], || format!("{id}: CSVs differ between runs"))?;
        compared += 1;
    }
    let _ = std::fs::remove_dir_all(&config);
    Ok(format!("{compared} checks byte-identical across repeated runs"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 L_q collapse", c1_lq_collapse),
        ("2 rearrangement", c2_rearrangement),
        ("3 dilation indices", c3_dilation_indices),
        ("4 Hardy suite", c4_hardy),
        ("5 Lemmas 2/4/5", c5_lemmas),
        ("6 block norm equivalence", c6_block_norms),
        ("7 Dirichlet bound", c7_dirichlet),
        ("8 Theorem 2 embedding", c8_theorem2),
        ("9 Theorem 5 order bound", c9_theorem5),
        ("10 Theorem 4 lower bound", c10_theorem4),
        ("11 best approximation", c11_best_approx),
        ("12 determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{:.2?}]", start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
