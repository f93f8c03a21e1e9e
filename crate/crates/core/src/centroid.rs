//! Jensen-Shannon-type centroids of categorical distributions by the
//! concave-convex procedure (CCCP).
//!
//! The barycenter of `n` densities `m_θⱼ` with weights `ω` under `JS^{α,w}`
//! minimizes, up to a constant,
//!
//! ```text
//! L(θ) = A(θ) - B(θ)
//! A(θ) = Σⱼ Σᵢ ωⱼ wᵢ F((θⱼθ)_αᵢ)      (convex)
//! B(θ) = Σⱼ ωⱼ F((θⱼθ)_ᾱ)             (convex)
//! ```
//!
//! CCCP replaces `-B` by its tangent at the current iterate and minimizes the
//! resulting convex surrogate, i.e. solves `∇A(θ⁽ᵗ⁺¹⁾) = ∇B(θ⁽ᵗ⁾)`. Every step
//! therefore decreases `L`. For the plain JS profile `A = ½F` and the update is
//! the closed form
//!
//! ```text
//! θ⁽ᵗ⁺¹⁾ = (∇F)⁻¹( Σⱼ ωⱼ ∇F((θⱼ + θ⁽ᵗ⁾)/2) )
//! ```
//!
//! whose fixed points are the quasi-arithmetic means
//! `θ = M_∇F((θ₁+θ)/2, …, (θₙ+θ)/2)`. For other profiles the surrogate is
//! minimized exactly over the simplex: in full-density coordinates `∇A` splits
//! into one increasing scalar function per bin, leaving a one-dimensional
//! root find for the normalization multiplier.
//!
//! The separable relaxations ([`separable_positive_centroid`],
//! [`jeffreys_centroid_fixed_point`]) solve one scalar problem per bin on
//! positive measures and normalize afterwards.

use alloc::vec;
use alloc::vec::Vec;

use crate::divergence;
use crate::error::{check_same_len, Error, Result};
use crate::math::{self, exp, ln, xlogx, KahanSum};
use crate::mixture::{
    self, grad_negentropy, grad_negentropy_inverse_flagged, natural_from_bins, negentropy, DualParam, NaturalParam,
    INTERIOR_EPS,
};
use crate::simplex::{DiscreteDensity, PositiveDensity, SkewProfile};

/// Iteration limits and tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Maximum number of outer iterations.
    pub max_iters: usize,
    /// Stall threshold on `|E(θ⁽ᵗ⁾) - E(θ⁽ᵗ⁺¹⁾)|`.
    pub energy_tol: f64,
    /// Stall threshold on `‖θ⁽ᵗ⁺¹⁾ - θ⁽ᵗ⁾‖∞`.
    pub param_tol: f64,
    /// Required stationarity gap `‖∇A(θ) - ∇B(θ)‖∞` at convergence.
    pub grad_tol: f64,
    /// Iteration cap of inner scalar solves.
    pub inner_max_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            energy_tol: 1e-12,
            param_tol: 1e-10,
            grad_tol: 1e-8,
            inner_max_iters: 200,
        }
    }
}

/// Input points, barycenter weights, skew profile and solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidProblem {
    thetas: Vec<NaturalParam>,
    omega: Vec<f64>,
    profile: SkewProfile,
    settings: SolverSettings,
    raw: Option<Vec<DiscreteDensity>>,
}

impl CentroidProblem {
    /// Uniform weights, the JS profile and default settings.
    pub fn new(thetas: Vec<NaturalParam>) -> Result<Self> {
        let first = thetas.first().ok_or(Error::Empty)?;
        for t in &thetas {
            check_same_len(first.dim(), t.dim())?;
        }
        let n = thetas.len();
        Ok(Self {
            thetas,
            omega: vec![1.0 / n as f64; n],
            profile: SkewProfile::jensen_shannon(),
            settings: SolverSettings::default(),
            raw: None,
        })
    }

    /// Converts densities (projecting empty bins into the interior) and keeps
    /// the raw densities to report the divergence objective on them.
    pub fn from_densities(densities: &[DiscreteDensity]) -> Result<Self> {
        let thetas = densities.iter().map(mixture::to_natural).collect::<Result<Vec<_>>>()?;
        let mut problem = Self::new(thetas)?;
        problem.raw = Some(densities.to_vec());
        Ok(problem)
    }

    /// Barycenter weights `ω`: positive, summing to one within `1e-12`.
    pub fn with_weights(mut self, omega: Vec<f64>) -> Result<Self> {
        check_same_len(self.thetas.len(), omega.len())?;
        if omega.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter("density weights must be positive"));
        }
        if (math::sum(omega.iter().copied()) - 1.0).abs() > crate::simplex::WEIGHT_TOLERANCE {
            return Err(Error::InvalidParameter("density weights must sum to one"));
        }
        self.omega = omega;
        Ok(self)
    }

    /// Skew profile with `ᾱ ∈ (0, 1)`.
    pub fn with_profile(mut self, profile: SkewProfile) -> Result<Self> {
        profile.interior_alpha_bar()?;
        self.profile = profile;
        Ok(self)
    }

    /// Replaces the solver settings.
    pub fn with_settings(mut self, settings: SolverSettings) -> Self {
        self.settings = settings;
        self
    }

    /// Input natural parameters.
    pub fn thetas(&self) -> &[NaturalParam] {
        &self.thetas
    }

    /// Barycenter weights `ω`.
    pub fn weights(&self) -> &[f64] {
        &self.omega
    }

    /// Skew profile.
    pub fn profile(&self) -> &SkewProfile {
        &self.profile
    }

    /// Solver settings.
    pub fn settings(&self) -> &SolverSettings {
        &self.settings
    }

    /// Raw densities, when built by [`CentroidProblem::from_densities`].
    pub fn raw_densities(&self) -> Option<&[DiscreteDensity]> {
        self.raw.as_deref()
    }

    /// Parameter dimension `D`.
    pub fn dim(&self) -> usize {
        self.thetas[0].dim()
    }

    /// Number of input points `n`.
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    /// Always `false`.
    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Weighted mean of the natural parameters, `Σ ωⱼ θⱼ`.
    pub fn initial_point(&self) -> NaturalParam {
        let d = self.dim() + 1;
        let mut bins = vec![KahanSum::new(); d];
        for (t, &w) in self.thetas.iter().zip(&self.omega) {
            for (acc, &b) in bins.iter_mut().zip(t.as_slice()) {
                acc.add(w * b);
            }
            bins[d - 1].add(w * t.theta0());
        }
        let bins: Vec<f64> = bins.iter().map(KahanSum::value).collect();
        natural_from_bins(bins)
    }

    /// Lower bin bound of the general update: `min(ε, input bins, θ bins)`.
    fn floor(&self, theta: &NaturalParam) -> f64 {
        self.thetas
            .iter()
            .chain(core::iter::once(theta))
            .flat_map(|t| t.as_slice().iter().copied().chain(core::iter::once(t.theta0())))
            .fold(INTERIOR_EPS, f64::min)
    }

    fn check_point(&self, theta: &NaturalParam) -> Result<()> {
        check_same_len(self.dim(), theta.dim())
    }

    fn points(&self) -> Vec<DiscreteDensity> {
        self.thetas.iter().map(NaturalParam::to_density).collect()
    }
}

/// Outcome of a CCCP solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidResult {
    /// Final natural parameter.
    pub theta_star: NaturalParam,
    /// Final density.
    pub density: DiscreteDensity,
    /// Objective value at the initial point and after every iteration.
    pub energy_trace: Vec<f64>,
    /// Number of CCCP iterations performed.
    pub iterations: usize,
    /// `‖∇A(θ*) - ∇B(θ*)‖∞`.
    pub stationarity_gap: f64,
    /// KKT residual over the floored simplex the general update works on;
    /// equal to `stationarity_gap` when no bin sits on the floor.
    pub kkt_gap: f64,
    /// `‖T(θ*) - θ*‖∞` for the CCCP map `T`.
    pub fixed_point_residual: f64,
    /// Whether the KKT residual reached `grad_tol`.
    pub converged: bool,
    /// Whether some iterate reached the ε floor or had to be projected.
    pub projected: bool,
    /// `Σ ωⱼ JS^{α,w}(pⱼ : p*)` on the raw (unprojected) input densities.
    pub raw_objective: Option<f64>,
}

impl CentroidResult {
    /// Last entry of the energy trace.
    pub fn final_energy(&self) -> f64 {
        *self.energy_trace.last().expect("trace holds the initial energy")
    }
}

/// Which CCCP update to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    /// Closed form for the JS profile, exact surrogate minimization otherwise.
    Auto,
    /// The closed-form JS update; requires the JS profile.
    ClosedForm,
    /// Exact surrogate minimization for any profile.
    General,
}

/// The constant-free DC objective
/// `Σⱼ ωⱼ [Σ_{i: αᵢ>0} wᵢ F((θⱼθ)_αᵢ) - F((θⱼθ)_ᾱ)]`.
///
/// For the JS profile this is `E(θ) = ½F(θ) - Σⱼ ωⱼ F((θⱼ+θ)/2)`. It differs
/// from [`divergence_objective`] by the θ-independent `Σⱼ ωⱼ Σ_{i: αᵢ=0} wᵢ F(θⱼ)`.
pub fn objective(problem: &CentroidProblem, theta: &NaturalParam) -> Result<f64> {
    problem.check_point(theta)?;
    let profile = &problem.profile;
    let alpha_bar = profile.alpha_bar();
    let mut acc = KahanSum::new();
    for (tj, &wj) in problem.thetas.iter().zip(&problem.omega) {
        for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
            if a > 0.0 {
                acc.add(wj * w * negentropy(&tj.mix_unchecked(theta, a)));
            }
        }
        acc.add(-wj * negentropy(&tj.mix_unchecked(theta, alpha_bar)));
    }
    Ok(acc.value())
}

/// `L(θ) = Σⱼ ωⱼ JS^{α,w}(m_θⱼ : m_θ)`, the full barycenter objective.
pub fn divergence_objective(problem: &CentroidProblem, theta: &NaturalParam) -> Result<f64> {
    problem.check_point(theta)?;
    let mut acc = KahanSum::new();
    for (tj, &wj) in problem.thetas.iter().zip(&problem.omega) {
        acc.add(wj * mixture::jensen_diversity(tj, theta, &problem.profile)?);
    }
    Ok(acc.value())
}

/// `log`-sum `Σ c log(a + s x)` for one bin; increasing and concave in `x`.
#[derive(Debug, Clone)]
struct LogSum {
    terms: Vec<(f64, f64, f64)>,
}

impl LogSum {
    fn value(&self, x: f64) -> f64 {
        let mut acc = KahanSum::new();
        for &(c, a, s) in &self.terms {
            acc.add(c * ln(a + s * x));
        }
        acc.value()
    }

    fn derivative(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(c, a, s)| c * s / (a + s * x)).sum()
    }

    /// Solves `value(x) = y` on `[floor, cap]`, clamping at the ends.
    fn invert(&self, y: f64, floor: f64, cap: f64, max_iters: usize) -> f64 {
        if self.value(cap) <= y {
            return cap;
        }
        if self.value(floor) >= y {
            return floor;
        }
        // u = log x; value(e^u) is increasing and nearly linear for small x
        let mut hi = ln(cap);
        let mut lo = if floor > 0.0 { ln(floor) } else { hi - 40.0 };
        while self.value(exp(lo)) > y {
            lo -= 40.0;
            if lo < -740.0 {
                return floor;
            }
        }
        let mut u = hi;
        for _ in 0..max_iters {
            let x = exp(u);
            let f = self.value(x) - y;
            if f == 0.0 {
                return x;
            }
            if f > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let slope = self.derivative(x) * x;
            let mut next = u - f / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - u).abs() <= 1e-15 * (1.0 + u.abs()) || hi - lo <= 1e-15 * (1.0 + u.abs()) {
                return exp(next).max(floor);
            }
            u = next;
        }
        exp(u).max(floor)
    }
}

/// Per-bin pieces of `∇A` and `∇B` in full-density coordinates.
struct BinFunctions {
    /// `Φ_b(x) = Σⱼ Σᵢ ωⱼ wᵢ αᵢ log((1-αᵢ) pⱼᵦ + αᵢ x)`
    convex: Vec<LogSum>,
    /// `Ψ_b(x) = ᾱ Σⱼ ωⱼ log((1-ᾱ) pⱼᵦ + ᾱ x)`
    concave: Vec<LogSum>,
}

impl BinFunctions {
    fn new(problem: &CentroidProblem) -> Self {
        let points = problem.points();
        let d = problem.dim() + 1;
        let profile = &problem.profile;
        let alpha_bar = profile.alpha_bar();
        let mut convex = Vec::with_capacity(d);
        let mut concave = Vec::with_capacity(d);
        for b in 0..d {
            let mut terms = Vec::new();
            for (p, &wj) in points.iter().zip(&problem.omega) {
                for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
                    if a > 0.0 {
                        terms.push((wj * w * a, (1.0 - a) * p.bins()[b], a));
                    }
                }
            }
            convex.push(LogSum { terms });
            let terms = points
                .iter()
                .zip(&problem.omega)
                .map(|(p, &wj)| (alpha_bar * wj, (1.0 - alpha_bar) * p.bins()[b], alpha_bar))
                .collect();
            concave.push(LogSum { terms });
        }
        Self { convex, concave }
    }

    fn gradient(parts: &[LogSum], bins: &[f64]) -> Vec<f64> {
        let last = bins.len() - 1;
        let reference = parts[last].value(bins[last]);
        (0..last).map(|b| parts[b].value(bins[b]) - reference).collect()
    }
}

/// `∇A(θ) = Σⱼ Σᵢ ωⱼ wᵢ αᵢ ∇F((θⱼθ)_αᵢ)`.
pub fn grad_convex(problem: &CentroidProblem, theta: &NaturalParam) -> Result<DualParam> {
    problem.check_point(theta)?;
    let f = BinFunctions::new(problem);
    DualParam::new(BinFunctions::gradient(&f.convex, theta.to_density().bins()))
}

/// `∇B(θ) = ᾱ Σⱼ ωⱼ ∇F((θⱼθ)_ᾱ)`.
pub fn grad_concave(problem: &CentroidProblem, theta: &NaturalParam) -> Result<DualParam> {
    problem.check_point(theta)?;
    let f = BinFunctions::new(problem);
    DualParam::new(BinFunctions::gradient(&f.concave, theta.to_density().bins()))
}

/// `‖∇A(θ) - ∇B(θ)‖∞`; zero exactly at stationary points.
pub fn stationarity_gap(problem: &CentroidProblem, theta: &NaturalParam) -> Result<f64> {
    problem.check_point(theta)?;
    Ok(gap_with(&BinFunctions::new(problem), theta))
}

fn gap_with(f: &BinFunctions, theta: &NaturalParam) -> f64 {
    let bins = theta.to_density();
    let a = BinFunctions::gradient(&f.convex, bins.bins());
    let b = BinFunctions::gradient(&f.concave, bins.bins());
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// KKT residual of `min L` over `{c ∈ Δ : c ≥ floor}`: bins strictly above
/// the floor must share the multiplier, bins on it may only push outward.
/// Equals [`gap_with`] when no bin is on the floor.
fn kkt_gap_with(f: &BinFunctions, theta: &NaturalParam, floor: f64) -> f64 {
    let bins = theta.to_density();
    let g: Vec<f64> = f
        .convex
        .iter()
        .zip(&f.concave)
        .zip(bins.bins())
        .map(|((phi, psi), &c)| phi.value(c) - psi.value(c))
        .collect();
    let (reference, _) =
        bins.bins().iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, &c)| if c > best.1 { (i, c) } else { best },
        );
    let on_floor = |c: f64| floor > 0.0 && c <= floor * (1.0 + 1e-9);
    if !bins.bins().iter().any(|&c| on_floor(c)) {
        return gap_with(f, theta);
    }
    let tau = g[reference];
    bins.bins()
        .iter()
        .zip(&g)
        .map(|(&c, &gb)| {
            if on_floor(c) {
                (tau - gb).max(0.0)
            } else {
                (gb - tau).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// One CCCP iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    /// The new parameter.
    pub theta: NaturalParam,
    /// Whether a bin reached the ε floor or had to be projected.
    pub projected: bool,
}

/// One CCCP update `θ⁽ᵗ⁺¹⁾` solving `∇A(θ⁽ᵗ⁺¹⁾) = ∇B(θ⁽ᵗ⁾)`.
///
/// The JS profile uses the closed form; other profiles minimize the convex
/// surrogate exactly over the simplex with bins at least
/// `min(ε, smallest input bin, smallest bin of θ⁽ᵗ⁾)`.
pub fn cccp_step(problem: &CentroidProblem, theta: &NaturalParam) -> Result<Step> {
    problem.check_point(theta)?;
    if problem.profile.is_jensen_shannon() {
        Ok(closed_form_step(problem, theta))
    } else {
        let floor = problem.floor(theta);
        Ok(general_step(problem, &BinFunctions::new(problem), theta, floor))
    }
}

/// `θ⁽ᵗ⁺¹⁾ = (∇F)⁻¹(Σⱼ ωⱼ ∇F((θⱼ + θ⁽ᵗ⁾)/2))`.
fn closed_form_step(problem: &CentroidProblem, theta: &NaturalParam) -> Step {
    let dim = problem.dim();
    let mut eta = vec![KahanSum::new(); dim];
    for (tj, &wj) in problem.thetas.iter().zip(&problem.omega) {
        let g = grad_negentropy(&tj.mix_unchecked(theta, 0.5));
        for (acc, &e) in eta.iter_mut().zip(g.as_slice()) {
            acc.add(wj * e);
        }
    }
    let eta =
        DualParam::new(eta.iter().map(KahanSum::value).collect()).expect("gradients of interior points are finite");
    let (theta, projected) = grad_negentropy_inverse_flagged(&eta);
    Step { theta, projected }
}

/// Minimizes `A(c) - ⟨∇B(c⁽ᵗ⁾), c⟩` over `{c ∈ Δ : c ≥ floor}` through its
/// KKT system `c_b = max(floor, Φ_b⁻¹(Ψ_b(c⁽ᵗ⁾_b) + τ))`, with `τ` fixed by
/// `Σ c_b = 1`.
fn general_step(problem: &CentroidProblem, f: &BinFunctions, theta: &NaturalParam, floor: f64) -> Step {
    let current = theta.to_density();
    let targets: Vec<f64> = f
        .concave
        .iter()
        .zip(current.bins())
        .map(|(psi, &c)| psi.value(c))
        .collect();
    let d = targets.len();
    let inner = problem.settings.inner_max_iters;
    let solve = |tau: f64| -> Vec<f64> {
        f.convex
            .iter()
            .zip(&targets)
            .map(|(phi, &g)| phi.invert(g + tau, floor, 1.0, inner))
            .collect()
    };
    let excess = |c: &[f64]| math::sum(c.iter().copied()) - 1.0;

    // at `lo` every bin is at most 1/d, at `hi` some bin is 1
    let mut lo = f
        .convex
        .iter()
        .zip(&targets)
        .map(|(phi, &g)| phi.value(1.0 / d as f64) - g)
        .fold(f64::INFINITY, f64::min);
    let mut hi = f
        .convex
        .iter()
        .zip(&targets)
        .map(|(phi, &g)| phi.value(1.0) - g)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut tau = 0.5 * (lo + hi);
    let mut c = solve(tau);
    for _ in 0..inner {
        let s = excess(&c);
        if s.abs() <= 1e-15 {
            break;
        }
        if s > 0.0 {
            hi = tau;
        } else {
            lo = tau;
        }
        let slope: f64 = c
            .iter()
            .zip(&f.convex)
            .filter(|(&x, _)| x > floor && x < 1.0)
            .map(|(&x, phi)| 1.0 / phi.derivative(x))
            .sum();
        let mut next = tau - s / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - tau).abs() <= 1e-16 * (1.0 + tau.abs()) {
            break;
        }
        tau = next;
        c = solve(tau);
    }
    let total = math::sum(c.iter().copied());
    let projected = c.iter().any(|&x| x <= floor);
    let bins: Vec<f64> = c.iter().map(|x| (x / total).max(floor)).collect();
    Step {
        theta: natural_from_bins(bins),
        projected,
    }
}

/// `‖T(θ) - θ‖∞` over all bins for the CCCP map `T`; for the JS profile this is the
/// residual of the quasi-arithmetic-mean fixed-point equation.
pub fn fixed_point_residual(problem: &CentroidProblem, theta: &NaturalParam) -> Result<f64> {
    let next = cccp_step(problem, theta)?;
    Ok(param_diff(&next.theta, theta))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sup-norm distance over all bins, `θ₀` included.
fn param_diff(a: &NaturalParam, b: &NaturalParam) -> f64 {
    max_abs_diff(a.as_slice(), b.as_slice()).max((a.theta0() - b.theta0()).abs())
}

/// CCCP from `θ⁽⁰⁾ = Σ ωⱼ θⱼ` with the closed-form JS update.
///
/// Fails with [`Error::InvalidParameter`] unless the problem carries the JS
/// profile.
pub fn js_centroid(problem: &CentroidProblem) -> Result<CentroidResult> {
    solve_from(problem, &problem.initial_point(), UpdateRule::ClosedForm)
}

/// CCCP for an arbitrary skew profile, always through the exact surrogate
/// minimization (also for the JS profile).
pub fn vector_skew_centroid(problem: &CentroidProblem) -> Result<CentroidResult> {
    solve_from(problem, &problem.initial_point(), UpdateRule::General)
}

/// Runs CCCP from an arbitrary interior starting point.
///
/// Stops once the energy or the parameters stall and the KKT residual is
/// below `grad_tol`, or after `max_iters` iterations.
pub fn solve_from(problem: &CentroidProblem, init: &NaturalParam, rule: UpdateRule) -> Result<CentroidResult> {
    problem.check_point(init)?;
    let closed = match rule {
        UpdateRule::ClosedForm => {
            if !problem.profile.is_jensen_shannon() {
                return Err(Error::InvalidParameter(
                    "the closed-form update needs the Jensen-Shannon profile",
                ));
            }
            true
        }
        UpdateRule::General => false,
        UpdateRule::Auto => problem.profile.is_jensen_shannon(),
    };
    let f = BinFunctions::new(problem);
    // the closed form is unconstrained; the general update keeps a floor that
    // contains every iterate, so each step minimizes over the same set
    let floor = if closed { 0.0 } else { problem.floor(init) };
    let step = |theta: &NaturalParam| {
        if closed {
            closed_form_step(problem, theta)
        } else {
            general_step(problem, &f, theta, floor)
        }
    };
    let settings = problem.settings;

    let mut theta = init.clone();
    let mut energy = objective(problem, &theta)?;
    let mut trace = vec![energy];
    let mut projected = false;
    let mut iterations = 0;
    let mut kkt = kkt_gap_with(&f, &theta, floor);
    while iterations < settings.max_iters {
        let next = step(&theta);
        projected |= next.projected;
        iterations += 1;
        let next_energy = objective(problem, &next.theta)?;
        let delta_param = param_diff(&next.theta, &theta);
        let delta_energy = (energy - next_energy).abs();
        theta = next.theta;
        energy = next_energy;
        trace.push(energy);
        kkt = kkt_gap_with(&f, &theta, floor);
        let stalled = delta_energy < settings.energy_tol || delta_param < settings.param_tol;
        if (stalled && kkt <= settings.grad_tol) || delta_param == 0.0 {
            break;
        }
    }
    let residual = param_diff(&step(&theta).theta, &theta);
    let density = theta.to_density();
    let raw_objective = match &problem.raw {
        Some(raw) => {
            let mut acc = KahanSum::new();
            for (p, &w) in raw.iter().zip(&problem.omega) {
                acc.add(w * divergence::vector_skew_js(p, &density, &problem.profile)?);
            }
            Some(acc.value())
        }
        None => None,
    };
    Ok(CentroidResult {
        stationarity_gap: gap_with(&f, &theta),
        kkt_gap: kkt,
        theta_star: theta,
        density,
        energy_trace: trace,
        iterations,
        fixed_point_residual: residual,
        converged: kkt <= settings.grad_tol,
        projected,
        raw_objective,
    })
}

fn check_weights(n: usize, weights: &[f64]) -> Result<()> {
    check_same_len(n, weights.len())?;
    if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidParameter("weights must be positive"));
    }
    if (math::sum(weights.iter().copied()) - 1.0).abs() > crate::simplex::WEIGHT_TOLERANCE {
        return Err(Error::InvalidParameter("weights must sum to one"));
    }
    Ok(())
}

fn logit(x: f64) -> f64 {
    ln(x / (1.0 - x))
}

fn logistic(e: f64) -> f64 {
    if e >= 0.0 {
        1.0 / (1.0 + exp(-e))
    } else {
        let z = exp(e);
        z / (1.0 + z)
    }
}

/// Binary JS centroid by the scalar CCCP iteration
/// `θ ← σ(Σᵢ wᵢ logit((θ + θᵢ)/2))`, run until the iterate stops moving.
pub fn bernoulli_centroid(thetas: &[f64], weights: &[f64], settings: &SolverSettings) -> Result<f64> {
    if thetas.is_empty() {
        return Err(Error::Empty);
    }
    check_weights(thetas.len(), weights)?;
    if thetas.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
        return Err(Error::NotInterior);
    }
    let mut theta = math::sum(thetas.iter().zip(weights).map(|(t, w)| t * w));
    for _ in 0..settings.max_iters {
        let eta = math::sum(thetas.iter().zip(weights).map(|(&t, &w)| w * logit(0.5 * (theta + t))));
        let next = logistic(eta);
        let moved = (next - theta).abs();
        theta = next;
        if moved <= 2.0 * f64::EPSILON * theta {
            break;
        }
    }
    Ok(theta)
}

/// A centroid computed on positive measures, with its normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveCentroid {
    /// Unnormalized minimizer.
    pub positive: PositiveDensity,
    /// `positive` divided by its mass.
    pub density: DiscreteDensity,
    /// Largest per-bin iteration count.
    pub iterations: usize,
    /// Whether every bin met its tolerance.
    pub converged: bool,
}

fn floored_columns(histograms: &[PositiveDensity], weights: &[f64]) -> Result<Vec<Vec<f64>>> {
    let first = histograms.first().ok_or(Error::Empty)?;
    for h in histograms {
        check_same_len(first.len(), h.len())?;
    }
    check_weights(histograms.len(), weights)?;
    Ok((0..first.len())
        .map(|b| histograms.iter().map(|h| h.bins()[b].max(INTERIOR_EPS)).collect())
        .collect())
}

fn finish_positive(bins: Vec<f64>, iterations: usize, converged: bool) -> Result<PositiveCentroid> {
    let positive = PositiveDensity::new(bins)?;
    let density = positive.normalize()?;
    Ok(PositiveCentroid {
        positive,
        density,
        iterations,
        converged,
    })
}

/// Per-bin relaxation of the JS-type centroid on positive measures, with the
/// scalar generator `f(x) = x log x - x`, followed by normalization.
///
/// For the JS profile each bin iterates `x ← exp(Σⱼ ωⱼ log((xⱼ + x)/2))`.
/// Bins are floored at [`INTERIOR_EPS`] first.
pub fn separable_positive_centroid(
    histograms: &[PositiveDensity],
    weights: &[f64],
    profile: &SkewProfile,
    settings: &SolverSettings,
) -> Result<PositiveCentroid> {
    let columns = floored_columns(histograms, weights)?;
    let alpha_bar = profile.interior_alpha_bar()?;
    let plain = profile.is_jensen_shannon();
    let solve_bin = |xs: &Vec<f64>| -> (f64, usize, bool) {
        let convex = LogSum {
            terms: xs
                .iter()
                .zip(weights)
                .flat_map(|(&x, &wj)| {
                    profile
                        .alpha()
                        .iter()
                        .zip(profile.weights())
                        .filter(|(&a, _)| a > 0.0)
                        .map(move |(&a, &w)| (wj * w * a, (1.0 - a) * x, a))
                })
                .collect(),
        };
        let concave = LogSum {
            terms: xs
                .iter()
                .zip(weights)
                .map(|(&x, &wj)| (alpha_bar * wj, (1.0 - alpha_bar) * x, alpha_bar))
                .collect(),
        };
        let cap = 2.0 * xs.iter().copied().fold(0.0, f64::max);
        let mut x = math::sum(xs.iter().zip(weights).map(|(a, w)| a * w));
        for it in 1..=settings.max_iters {
            let next = if plain {
                exp(math::sum(xs.iter().zip(weights).map(|(&a, &w)| w * ln(0.5 * (a + x)))))
            } else {
                convex.invert(concave.value(x), 0.0, cap, settings.inner_max_iters)
            };
            let moved = (next - x).abs();
            x = next;
            if moved <= 4.0 * f64::EPSILON * x {
                return (x, it, true);
            }
        }
        (x, settings.max_iters, false)
    };
    let solved = map_columns(&columns, solve_bin);
    let iterations = solved.iter().map(|s| s.1).max().unwrap_or(0);
    let converged = solved.iter().all(|s| s.2);
    finish_positive(solved.into_iter().map(|s| s.0).collect(), iterations, converged)
}

/// Separable Jeffreys objective `Σⱼ ωⱼ J⁺(p̃ⱼ, x)`.
pub fn jeffreys_objective(histograms: &[PositiveDensity], weights: &[f64], x: &PositiveDensity) -> Result<f64> {
    check_same_len(histograms.len(), weights.len())?;
    let mut acc = KahanSum::new();
    for (h, &w) in histograms.iter().zip(weights) {
        acc.add(w * divergence::jeffreys_plus(h, x)?);
    }
    Ok(acc.value())
}

/// Positive Jeffreys centroid, bin by bin, then normalized.
///
/// Each bin solves the stationarity condition `log(x/g) + 1 - a/x = 0`, with
/// `a` and `g` the weighted arithmetic and geometric means of the bin, by the
/// damped fixed-point iteration `x ← x + λ (a / (1 + log(x/g)) - x)`,
/// `λ = a / (a + x)`, kept inside the bracket `[g, a]`.
pub fn jeffreys_centroid_fixed_point(
    histograms: &[PositiveDensity],
    weights: &[f64],
    settings: &SolverSettings,
) -> Result<PositiveCentroid> {
    let columns = floored_columns(histograms, weights)?;
    let solve_bin = |xs: &Vec<f64>| -> (f64, usize, bool) {
        let a = math::sum(xs.iter().zip(weights).map(|(x, w)| x * w));
        let log_g = math::sum(xs.iter().zip(weights).map(|(&x, &w)| w * ln(x)));
        let g = exp(log_g).min(a);
        if a - g <= 4.0 * f64::EPSILON * a {
            return (a, 0, true);
        }
        let residual = |x: f64| ln(x) - log_g + 1.0 - a / x;
        let (mut lo, mut hi) = (g, a);
        let mut x = 0.5 * (g + a);
        for it in 1..=settings.max_iters {
            let r = residual(x);
            if r.abs() <= 1e-15 * (1.0 + a / x) {
                return (x, it, true);
            }
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let target = a / (1.0 + ln(x) - log_g);
            let damping = a / (a + x);
            let mut next = x + damping * (target - x);
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= f64::EPSILON * x {
                return (next, it, true);
            }
            x = next;
        }
        (x, settings.max_iters, false)
    };
    let solved = map_columns(&columns, solve_bin);
    let iterations = solved.iter().map(|s| s.1).max().unwrap_or(0);
    let converged = solved.iter().all(|s| s.2);
    finish_positive(solved.into_iter().map(|s| s.0).collect(), iterations, converged)
}

#[cfg(feature = "rayon")]
fn map_columns<F>(columns: &[Vec<f64>], f: F) -> Vec<(f64, usize, bool)>
where
    F: Fn(&Vec<f64>) -> (f64, usize, bool) + Sync + Send,
{
    use rayon::prelude::*;
    columns.par_iter().map(f).collect()
}

#[cfg(not(feature = "rayon"))]
fn map_columns<F>(columns: &[Vec<f64>], f: F) -> Vec<(f64, usize, bool)>
where
    F: Fn(&Vec<f64>) -> (f64, usize, bool),
{
    columns.iter().map(f).collect()
}

/// Shannon entropy of the positive centroid's normalization; convenience for
/// reports.
pub fn normalized_entropy(c: &PositiveCentroid) -> f64 {
    -math::sum(c.density.bins().iter().map(|&x| xlogx(x)))
}
