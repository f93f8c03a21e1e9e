//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::f64::consts::LN_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use skewjs::{HistogramFile, PgmImage};
use skewjs_core::centroid::{js_centroid, vector_skew_centroid};
use skewjs_core::divergence::{
    bi_vector_skew, jeffreys, js, kl, kl_alpha_beta, mean_symmetrized_kl, vector_skew_js, vector_skew_js_kl_form,
};
use skewjs_core::mixture::{bregman, grad_negentropy, grad_negentropy_inverse, negentropy};
use skewjs_core::{
    CentroidProblem, DiscreteDensity, KlMean, NaturalParam, PositiveDensity, SkewProfile, SolverSettings,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("JSD bounds", jsd_bounds),
        ("KL between w-mixtures bounded", kl_mixture_bound),
        ("vector-skew JSD bounded", vskew_bound),
        ("dual-form identity", dual_forms),
        ("Bregman-KL identity", bregman_kl),
        ("gradient correctness", gradients),
        ("CCCP behavior", cccp_behavior),
        ("centroid oracle equivalence", centroid_oracle),
        ("symmetric-family construction", symmetric_family),
        ("conclusion identities", conclusion_identities),
        ("figure-shape reproduction", figure_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            check(false, format!("panicked: {msg}"))
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s]",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x00ac_ce97 ^ (stream << 32))
}

/// Random density with each bin zero with probability `zeros`.
fn density(rng: &mut ChaCha8Rng, d: usize, zeros: f64) -> DiscreteDensity {
    loop {
        let bins: Vec<f64> = (0..d)
            .map(|_| {
                if rng.random::<f64>() < zeros {
                    0.0
                } else {
                    rng.random::<f64>().powi(rng.random_range(1..=3))
                }
            })
            .collect();
        if bins.iter().any(|&b| b > 0.0) {
            return PositiveDensity::new(bins).unwrap().normalize().unwrap();
        }
    }
}

fn interior(rng: &mut ChaCha8Rng, d: usize, low: f64) -> DiscreteDensity {
    let bins: Vec<f64> = (0..d).map(|_| rng.random_range(low..=1.0)).collect();
    PositiveDensity::new(bins).unwrap().normalize().unwrap()
}

fn disjoint_pair(rng: &mut ChaCha8Rng, d: usize) -> (DiscreteDensity, DiscreteDensity) {
    assert!(d >= 2);
    let split = rng.random_range(1..d);
    let mut order: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut p = vec![0.0; d];
    let mut q = vec![0.0; d];
    for (rank, &i) in order.iter().enumerate() {
        let v = rng.random_range(0.01..=1.0);
        if rank < split {
            p[i] = v;
        } else {
            q[i] = v;
        }
    }
    (
        PositiveDensity::new(p).unwrap().normalize().unwrap(),
        PositiveDensity::new(q).unwrap().normalize().unwrap(),
    )
}

fn pair(rng: &mut ChaCha8Rng, d: usize, case: usize) -> (DiscreteDensity, DiscreteDensity) {
    if case % 5 == 4 {
        disjoint_pair(rng, d)
    } else {
        let zeros = [0.0, 0.2, 0.5, 0.8][case % 4];
        (density(rng, d, zeros), density(rng, d, zeros))
    }
}

fn skew(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random(),
    }
}

fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..=1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

fn random_profile(rng: &mut ChaCha8Rng, k_max: usize) -> SkewProfile {
    loop {
        let k = rng.random_range(1..=k_max);
        let alpha: Vec<f64> = (0..k).map(|_| skew(rng)).collect();
        if let Ok(profile) = SkewProfile::new(alpha, random_weights(rng, k)) {
            if profile.interior_alpha_bar().is_ok() {
                return profile;
            }
        }
    }
}

fn jsd_bounds() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut min_value = f64::INFINITY;
    for case in 0..10_000 {
        let d = rng.random_range(2..=256);
        let (p, q) = pair(&mut rng, d, case);
        let v = js(&p, &q).unwrap();
        worst_excess = worst_excess.max(v - LN_2);
        min_value = min_value.min(v);
    }
    let mut worst_gap: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=256);
        let (p, q) = disjoint_pair(&mut rng, d);
        worst_gap = worst_gap.max((js(&p, &q).unwrap() - LN_2).abs());
    }
    let elapsed = start.elapsed();
    check(
        min_value >= 0.0 && worst_excess <= 1e-12 && worst_gap <= 1e-12 && elapsed < Duration::from_secs(5),
        format!(
            "min {min_value:.3e}, max - log2 {worst_excess:.3e} over 10000 pairs; disjoint |js - log2| <= {worst_gap:.3e} over 100; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn kl_mixture_bound() -> Outcome {
    let mut rng = rng(2);
    let mut worst = f64::NEG_INFINITY;
    for case in 0..10_000 {
        let d = rng.random_range(2..=64);
        let (p, q) = pair(&mut rng, d, case);
        let beta = rng.random_range(0.01..=0.99);
        let alpha = loop {
            let a = skew(&mut rng);
            if a != beta {
                break a;
            }
        };
        let v = kl_alpha_beta(&p, &q, alpha, beta).unwrap();
        let bound = (1.0 / (beta * (1.0 - beta))).ln();
        worst = worst.max(v - bound);
    }
    check(
        worst <= 1e-12,
        format!("max (value - bound) = {worst:.3e} over 10000 cases"),
    )
}

fn vskew_bound() -> Outcome {
    let mut rng = rng(3);
    let mut worst = f64::NEG_INFINITY;
    for case in 0..5_000 {
        let profile = random_profile(&mut rng, 5);
        let d = rng.random_range(2..=64);
        let (p, q) = pair(&mut rng, d, case);
        let v = vector_skew_js(&p, &q, &profile).unwrap();
        let ab = profile.alpha_bar();
        worst = worst.max(v - (1.0 / (ab * (1.0 - ab))).ln());
    }
    check(
        worst <= 1e-12,
        format!("max (value - bound) = {worst:.3e} over 5000 cases"),
    )
}

fn dual_forms() -> Outcome {
    let mut rng = rng(4);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 5_000 {
        let profile = random_profile(&mut rng, 5);
        let d = rng.random_range(2..=256);
        let (p, q) = pair(&mut rng, d, cases);
        let entropy_form = vector_skew_js(&p, &q, &profile).unwrap();
        let kl_form = vector_skew_js_kl_form(&p, &q, &profile).unwrap();
        if !(entropy_form.is_finite() && kl_form.is_finite()) {
            continue;
        }
        worst = worst.max((entropy_form - kl_form).abs());
        cases += 1;
    }
    check(
        worst <= 1e-12,
        format!("max |entropy form - KL form| = {worst:.3e} over 5000 cases"),
    )
}

fn bregman_kl() -> Outcome {
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1_000 {
        let dim = rng.random_range(1..=255);
        let t1 = NaturalParam::from_density(&interior(&mut rng, dim + 1, 1e-3)).unwrap();
        let t2 = NaturalParam::from_density(&interior(&mut rng, dim + 1, 1e-3)).unwrap();
        let b = bregman(&t1, &t2).unwrap();
        let k = kl(&t1.to_density(), &t2.to_density()).unwrap();
        worst = worst.max((b - k).abs() / (1.0 + k));
    }
    check(
        worst <= 1e-12,
        format!("max |B - KL| / (1 + KL) = {worst:.3e} over 1000 pairs"),
    )
}

fn gradients() -> Outcome {
    let mut rng = rng(6);
    let mut worst_fd: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    for dim in [1usize, 5, 50] {
        for _ in 0..50 {
            let theta = NaturalParam::from_density(&interior(&mut rng, dim + 1, 0.05)).unwrap();
            let t = theta.as_slice();
            let grad = grad_negentropy(&theta);
            let h = 1e-4 * t.iter().copied().fold(theta.theta0(), f64::min);
            for i in 0..dim {
                let shifted = |delta: f64| {
                    let mut v = t.to_vec();
                    v[i] += delta;
                    negentropy(&NaturalParam::new(v).unwrap())
                };
                let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
                let g = grad.as_slice()[i];
                worst_fd = worst_fd.max((fd - g).abs() / g.abs().max(1.0));
            }
            let back = grad_negentropy_inverse(&grad);
            let diff = back
                .as_slice()
                .iter()
                .zip(t)
                .map(|(a, b)| (a - b).abs())
                .fold((back.theta0() - theta.theta0()).abs(), f64::max);
            worst_round = worst_round.max(diff);
        }
    }
    check(
        worst_fd <= 1e-5 && worst_round <= 1e-10,
        format!("finite differences rel err <= {worst_fd:.3e}; inverse round trip <= {worst_round:.3e} on 150 points"),
    )
}

fn cccp_behavior() -> Outcome {
    let mut rng = rng(7);
    let mut failures = Vec::new();
    let mut worst_rise = f64::NEG_INFINITY;
    let mut worst_gap: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let mut max_iters = 0;
    let mut rates = Vec::new();
    for case in 0..200 {
        let dim = rng.random_range(1..=10);
        let n = rng.random_range(1..=8);
        let zeros = [0.0, 0.3][case % 2];
        let densities: Vec<DiscreteDensity> = (0..n).map(|_| density(&mut rng, dim + 1, zeros)).collect();
        let problem = CentroidProblem::from_densities(&densities)
            .unwrap()
            .with_weights(random_weights(&mut rng, n))
            .unwrap();
        let result = js_centroid(&problem).unwrap();
        let trace = &result.energy_trace;
        for w in trace.windows(2) {
            worst_rise = worst_rise.max((w[1] - w[0]) / (1.0 + w[0].abs()));
        }
        worst_gap = worst_gap.max(result.stationarity_gap);
        worst_residual = worst_residual.max(result.fixed_point_residual);
        max_iters = max_iters.max(result.iterations);
        if !result.converged || result.stationarity_gap > 1e-8 || result.fixed_point_residual > 1e-8 {
            failures.push(case);
        }
        if let Some(rate) = contraction_rate(trace) {
            rates.push(rate);
        }
    }
    rates.sort_by(f64::total_cmp);
    let median = rates.get(rates.len() / 2).copied().unwrap_or(f64::NAN);
    let p90 = rates.get(rates.len() * 9 / 10).copied().unwrap_or(f64::NAN);
    check(
        failures.is_empty() && worst_rise <= 1e-12,
        format!(
            "max energy rise {worst_rise:.3e}, max gap {worst_gap:.3e}, max residual {worst_residual:.3e}, max iterations {max_iters}, unconverged {failures:?}; observed |E_t - E*| contraction median {median:.3} p90 {p90:.3} over {} traces (not asserted)",
            rates.len()
        ),
    )
}

/// Geometric-mean ratio of successive `|E_t - E*|` while above round-off.
fn contraction_rate(trace: &[f64]) -> Option<f64> {
    let last = *trace.last()?;
    let errs: Vec<f64> = trace
        .iter()
        .map(|e| e - last)
        .take_while(|&e| e > 1e-13 * (1.0 + last.abs()))
        .collect();
    if errs.len() < 3 {
        return None;
    }
    Some((errs[errs.len() - 1] / errs[0]).powf(1.0 / (errs.len() - 1) as f64))
}

/// Brute-force objective `Σⱼ ωⱼ JS^{α,w}(pⱼ : c)` in entropy form, for up to
/// three bins.
fn oracle_objective(inputs: &[Vec<f64>], omega: &[f64], alpha: &[f64], w: &[f64], alpha_bar: f64, c: &[f64]) -> f64 {
    let entropy = |p: &[f64], a: f64| -> f64 {
        let mut h = 0.0;
        for (&x, &y) in p.iter().zip(c) {
            let m = (1.0 - a) * x + a * y;
            if m > 0.0 {
                h -= m * m.ln();
            }
        }
        h
    };
    let mut total = 0.0;
    for (p, &wj) in inputs.iter().zip(omega) {
        let mut gap = entropy(p, alpha_bar);
        for (&a, &wi) in alpha.iter().zip(w) {
            gap -= wi * entropy(p, a);
        }
        total += wj * gap;
    }
    total
}

fn grid_minimizer_1d(f: &dyn Fn(&[f64]) -> f64, step: f64) -> Vec<f64> {
    let cells = (1.0 / step).round() as usize;
    let mut best = (f64::INFINITY, 0.0);
    for i in 1..cells {
        let t = i as f64 * step;
        let v = f(&[t, 1.0 - t]);
        if v < best.0 {
            best = (v, t);
        }
    }
    vec![best.1]
}

/// Coarse scan at `coarse`, then a full scan at `fine` within `window` of the
/// coarse minimizer. Fails if the fine minimizer lands on the window edge.
fn grid_minimizer_2d(f: &dyn Fn(&[f64]) -> f64, coarse: f64, fine: f64, window: f64) -> Option<Vec<f64>> {
    let scan = |step: f64, lo: [usize; 2], hi: [usize; 2]| {
        let cells = (1.0 / step).round() as usize;
        let mut best = (f64::INFINITY, [0usize; 2]);
        for i in lo[0]..=hi[0] {
            for j in lo[1]..=hi[1] {
                if i + j >= cells {
                    break;
                }
                let (a, b) = (i as f64 * step, j as f64 * step);
                let v = f(&[a, b, 1.0 - a - b]);
                if v < best.0 {
                    best = (v, [i, j]);
                }
            }
        }
        best.1
    };
    let cells = (1.0 / coarse).round() as usize;
    let c = scan(coarse, [1, 1], [cells - 1, cells - 1]);
    let ratio = (coarse / fine).round() as usize;
    let half = (window / fine).round() as usize;
    let fine_cells = (1.0 / fine).round() as usize;
    let lo = c.map(|x| (x * ratio).saturating_sub(half).max(1));
    let hi = c.map(|x| (x * ratio + half).min(fine_cells - 1));
    let b = scan(fine, lo, hi);
    for k in 0..2 {
        if (b[k] == lo[k] && lo[k] > 1) || (b[k] == hi[k] && hi[k] < fine_cells - 1) {
            return None;
        }
    }
    Some(vec![b[0] as f64 * fine, b[1] as f64 * fine])
}

fn centroid_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(8);
    let third = 1.0 / 3.0;
    let profiles = [
        ("js", SkewProfile::jensen_shannon()),
        (
            "(0,1,1/3)",
            SkewProfile::new(vec![0.0, 1.0, third], vec![third, third, third]).unwrap(),
        ),
        ("(0.25,1)", SkewProfile::new(vec![0.25, 1.0], vec![0.6, 0.4]).unwrap()),
    ];
    let settings = SolverSettings {
        max_iters: 100_000,
        ..SolverSettings::default()
    };
    let mut worst = [0.0f64; 2];
    let mut problems = 0;
    let mut failures = Vec::new();
    for (label, profile) in &profiles {
        for (dim, step, ns) in [(1usize, 1e-6, [1usize, 2, 3, 4]), (2, 1e-4, [1, 2, 3, 3])] {
            for &n in &ns {
                let densities: Vec<DiscreteDensity> = (0..n).map(|_| density(&mut rng, dim + 1, 0.15)).collect();
                let omega = random_weights(&mut rng, n);
                let problem = CentroidProblem::from_densities(&densities)
                    .unwrap()
                    .with_weights(omega.clone())
                    .unwrap()
                    .with_profile(profile.clone())
                    .unwrap()
                    .with_settings(settings);
                let result = if profile.is_jensen_shannon() {
                    js_centroid(&problem).unwrap()
                } else {
                    vector_skew_centroid(&problem).unwrap()
                };
                let inputs: Vec<Vec<f64>> = densities.iter().map(|d| d.bins().to_vec()).collect();
                let ab = profile.alpha_bar();
                let f = |c: &[f64]| oracle_objective(&inputs, &omega, profile.alpha(), profile.weights(), ab, c);
                let grid = if dim == 1 {
                    Some(grid_minimizer_1d(&f, step))
                } else {
                    grid_minimizer_2d(&f, 1e-2, step, 0.05)
                };
                problems += 1;
                let Some(grid) = grid else {
                    failures.push(format!("{label} D={dim} n={n}: fine minimizer on window edge"));
                    continue;
                };
                let dist = grid
                    .iter()
                    .zip(result.density.bins())
                    .map(|(g, c)| (g - c).abs())
                    .fold(0.0, f64::max);
                worst[dim - 1] = worst[dim - 1].max(dist / step);
                if dist > step * (1.0 + 1e-9) {
                    failures.push(format!("{label} D={dim} n={n}: distance {dist:.3e}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "{problems} problems over 3 profiles; max distance D=1 {:.3} cells, D=2 {:.3} cells; {:.2}s{}",
            worst[0],
            worst[1],
            elapsed.as_secs_f64(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; {failures:?}")
            }
        ),
    )
}

fn symmetric_family() -> Outcome {
    let mut rng = rng(9);
    let third = 1.0 / 3.0;
    let mut worst_two: f64 = 0.0;
    let mut worst_four: f64 = 0.0;
    for case in 0..1_000 {
        let d = rng.random_range(2..=64);
        let (p, q) = pair(&mut rng, d, case);
        let a: f64 = rng.random();
        let b: f64 = rng.random();
        let two = SkewProfile::new(vec![a, 1.0 - a], vec![0.5, 0.5]).unwrap();
        let four = SkewProfile::new(vec![a, 1.0 - a, b, 1.0 - b], vec![third, third, 1.0 / 6.0, 1.0 / 6.0]).unwrap();
        let gap = |profile: &SkewProfile| {
            (vector_skew_js(&p, &q, profile).unwrap() - vector_skew_js(&q, &p, profile).unwrap()).abs()
        };
        worst_two = worst_two.max(gap(&two));
        worst_four = worst_four.max(gap(&four));
    }
    check(
        worst_two <= 1e-13 && worst_four <= 1e-13,
        format!("max asymmetry k=2 {worst_two:.3e}, k=4 {worst_four:.3e} over 1000 cases"),
    )
}

fn conclusion_identities() -> Outcome {
    let mut rng = rng(10);
    let mut mismatches = 0;
    let mut order_violations = 0;
    for _ in 0..1_000 {
        let d = rng.random_range(2..=64);
        let p = interior(&mut rng, d, 1e-3);
        let q = interior(&mut rng, d, 1e-3);
        let bi = bi_vector_skew(&p, &q, kl, &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).unwrap();
        if bi != jeffreys(&p, &q).unwrap() {
            mismatches += 1;
        }
        let m = |mean| mean_symmetrized_kl(&p, &q, mean).unwrap();
        let (min, harmonic, arithmetic, max) = (
            m(KlMean::Min),
            m(KlMean::Harmonic),
            m(KlMean::Arithmetic),
            m(KlMean::Max),
        );
        let tol = 1e-12 * (1.0 + max);
        if !(min <= harmonic + tol && harmonic <= 0.5 * arithmetic + tol && 0.5 * arithmetic <= max + tol) {
            order_violations += 1;
        }
    }
    check(
        mismatches == 0 && order_violations == 0,
        format!("bi-vector-skew != Jeffreys in {mismatches}/1000; mean ordering violated in {order_violations}/1000"),
    )
}

/// 256x256 image whose samples follow a two-component Gaussian mixture
/// truncated to `[lo, hi]`.
fn bimodal_image(rng: &mut ChaCha8Rng, modes: [(f64, f64, f64); 2], lo: u16, hi: u16) -> PgmImage {
    let normals = modes.map(|(_, mean, sd)| Normal::new(mean, sd).unwrap());
    let pixels = (0..256 * 256)
        .map(|_| {
            let k = usize::from(rng.random::<f64>() >= modes[0].0);
            loop {
                let v = normals[k].sample(rng).round();
                if v >= f64::from(lo) && v <= f64::from(hi) {
                    break v as u16;
                }
            }
        })
        .collect();
    PgmImage::new(256, 256, 255, pixels).unwrap()
}

fn skewjs(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_skewjs"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("skewjs {args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn figure_pipeline() -> Outcome {
    match run_figure_pipeline() {
        Ok(outcome) => outcome,
        Err(e) => check(false, e),
    }
}

fn run_figure_pipeline() -> Result<Outcome, String> {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let mut rng = rng(11);
    let a = bimodal_image(&mut rng, [(0.55, 55.0, 9.0), (0.45, 130.0, 11.0)], 20, 160);
    let b = bimodal_image(&mut rng, [(0.5, 125.0, 10.0), (0.5, 205.0, 12.0)], 100, 240);
    std::fs::write(path("a.pgm"), a.encode_p5()).map_err(|e| e.to_string())?;
    std::fs::write(path("b.pgm"), b.encode_p2()).map_err(|e| e.to_string())?;

    skewjs(&["hist", &path("a.pgm"), "--normalize", "--out", &path("a.csv")])?;
    skewjs(&["hist", &path("b.pgm"), "--normalize", "--out", &path("b.csv")])?;
    skewjs(&[
        "centroid",
        &path("a.csv"),
        &path("b.csv"),
        "--mode",
        "exact",
        "--compare-jeffreys",
        "--out",
        &path("js.csv"),
        "--svg",
        &path("fig.svg"),
        "--report",
        &path("js.json"),
    ])?;
    skewjs(&[
        "centroid",
        &path("a.csv"),
        &path("b.csv"),
        "--mode",
        "jeffreys",
        "--out",
        &path("jeffreys.csv"),
        "--report",
        &path("jeffreys.json"),
    ])?;

    let read = |name: &str| -> Result<Vec<f64>, String> {
        HistogramFile::read(path(name))
            .map(|h| h.bins)
            .map_err(|e| e.to_string())
    };
    let (pa, pb, c_js, c_j) = (read("a.csv")?, read("b.csv")?, read("js.csv")?, read("jeffreys.csv")?);
    if pa.len() != 256 || pb.len() != 256 {
        return Err("histograms must have 256 bins".into());
    }
    let svg = std::fs::read_to_string(path("fig.svg")).map_err(|e| e.to_string())?;
    roxmltree::Document::parse(&svg).map_err(|e| format!("SVG is not well-formed: {e}"))?;

    let inputs = [
        DiscreteDensity::new(pa.clone()).map_err(|e| e.to_string())?,
        DiscreteDensity::new(pb.clone()).map_err(|e| e.to_string())?,
    ];
    let objective = |c: &[f64]| -> Result<f64, String> {
        let c = DiscreteDensity::new(c.to_vec()).map_err(|e| e.to_string())?;
        let mut total = 0.0;
        for p in &inputs {
            total += 0.5 * js(p, &c).map_err(|e| e.to_string())?;
        }
        Ok(total)
    };
    let (e_js, e_j) = (objective(&c_js)?, objective(&c_j)?);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path("js.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let converged = report["centroid"]["converged"] == true;

    // one-sided regions: exactly one input has mass
    let mut spreads = Vec::new();
    let mut region_bins = 0;
    for (sole, other) in [(&pa, &pb), (&pb, &pa)] {
        let ratios: Vec<f64> = (0..256)
            .filter(|&i| sole[i] > 0.0 && other[i] == 0.0)
            .map(|i| c_js[i] / sole[i])
            .collect();
        region_bins += ratios.len();
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        spreads.push((hi - lo) / lo);
    }
    let spread = spreads.iter().copied().fold(0.0, f64::max);
    let distinct = c_js != c_j;
    Ok(check(
        e_js < e_j && spread <= 1e-3 && distinct && converged && region_bins > 0,
        format!(
            "JS objective: JS centroid {e_js:.9}, Jeffreys centroid {e_j:.9}; one-sided ratio spread {spread:.3e} over {region_bins} bins; converged {converged}; SVG well-formed"
        ),
    ))
}
