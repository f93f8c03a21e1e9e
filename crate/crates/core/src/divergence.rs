//! Two-point divergences on discrete and positive densities.
//!
//! | Function | Formula |
//! |----------|---------|
//! | [`kl`] | KL(p:q) = Σ p log(p/q) |
//! | [`kl_plus`] | KL⁺(p̃:q̃) = Σ p̃ log(p̃/q̃) + q̃ - p̃ |
//! | [`jeffreys`] | J(p,q) = KL(p:q) + KL(q:p) |
//! | [`js`] | JS(p,q) = ½ KL(p:(p+q)/2) + ½ KL(q:(p+q)/2) |
//! | [`skew_k`] | K_α(p:q) = KL(p:(pq)_α) |
//! | [`skew_js_asym`] | (1-α) KL(p:(pq)_α) + α KL(q:(pq)_α) |
//! | [`skew_js_sym`] | ½ K_α(p:q) + ½ K_α(q:p) |
//! | [`kl_alpha_beta`] | KL((pq)_α:(pq)_β) |
//! | [`vector_skew_js`] | h((pq)_ᾱ) - Σ wᵢ h((pq)_αᵢ) |
//! | [`sym_vector_skew_js`] | h((pq)_½) - Σ wᵢ [h((pq)_αᵢ) + h((pq)_{1-αᵢ})]/2 |
//! | [`bi_vector_skew`] | Σ wᵢ D((pq)_αᵢ : (pq)_βᵢ) |
//! | [`mean_symmetrized_kl`] | M(KL(p:q), KL(q:p)) |
//!
//! Zero bins follow `0 log 0 = 0` and `log(0/0) = 0`; a positive bin of `p`
//! facing a zero bin of `q` makes KL-type quantities `+∞`. The JS family is
//! always finite. All sums over bins are compensated.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{check_same_len, Error, Result};
use crate::math::{self, cross_term, kl_term, xlogx, KahanSum};
use crate::simplex::{mix_bins, mix_positive, mix_unchecked, DiscreteDensity, PositiveDensity, SkewProfile};

fn same_dim(p: &DiscreteDensity, q: &DiscreteDensity) -> Result<()> {
    check_same_len(p.len(), q.len())
}

fn kl_bins(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for (&a, &b) in p.iter().zip(q) {
        let t = kl_term(a, b);
        if t == f64::INFINITY {
            return f64::INFINITY;
        }
        acc.add(t);
    }
    acc.value().max(0.0)
}

fn entropy_bins(p: &[f64]) -> f64 {
    -math::sum(p.iter().map(|&x| xlogx(x)))
}

/// Kullback-Leibler divergence `Σ_{pᵢ>0} pᵢ log(pᵢ/qᵢ)`, possibly `+∞`.
pub fn kl(p: &DiscreteDensity, q: &DiscreteDensity) -> Result<f64> {
    same_dim(p, q)?;
    Ok(kl_bins(p.bins(), q.bins()))
}

/// Extended KL divergence between positive measures:
/// `Σ p̃ log(p̃/q̃) + q̃ - p̃`.
pub fn kl_plus(p: &PositiveDensity, q: &PositiveDensity) -> Result<f64> {
    check_same_len(p.len(), q.len())?;
    Ok(kl_plus_bins(p.bins(), q.bins()))
}

fn kl_plus_bins(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for (&a, &b) in p.iter().zip(q) {
        let t = kl_term(a, b);
        if t == f64::INFINITY {
            return f64::INFINITY;
        }
        acc.add(t);
        acc.add(b - a);
    }
    acc.value().max(0.0)
}

/// Jeffreys divergence `KL(p:q) + KL(q:p)`.
pub fn jeffreys(p: &DiscreteDensity, q: &DiscreteDensity) -> Result<f64> {
    Ok(kl(p, q)? + kl(q, p)?)
}

/// Jeffreys divergence between positive measures, `Σ (p̃ - q̃) log(p̃/q̃)`.
pub fn jeffreys_plus(p: &PositiveDensity, q: &PositiveDensity) -> Result<f64> {
    check_same_len(p.len(), q.len())?;
    Ok(kl_plus_bins(p.bins(), q.bins()) + kl_plus_bins(q.bins(), p.bins()))
}

/// Jensen-Shannon divergence; finite, symmetric, in `[0, log 2]`.
pub fn js(p: &DiscreteDensity, q: &DiscreteDensity) -> Result<f64> {
    same_dim(p, q)?;
    let mut acc = KahanSum::new();
    for (&a, &b) in p.bins().iter().zip(q.bins()) {
        let m = 0.5 * a + 0.5 * b;
        acc.add(0.5 * (kl_term(a, m) + kl_term(b, m)));
    }
    Ok(acc.value().max(0.0))
}

fn check_unit(a: f64, what: &'static str) -> Result<()> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what))
    }
}

fn check_open_unit(a: f64, what: &'static str) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what))
    }
}

/// α-skew K-divergence `KL(p : (pq)_α)`, `α ∈ [0, 1]`.
pub fn skew_k(p: &DiscreteDensity, q: &DiscreteDensity, alpha: f64) -> Result<f64> {
    same_dim(p, q)?;
    check_unit(alpha, "skew must lie in [0, 1]")?;
    if alpha == 0.0 || p == q {
        return Ok(0.0);
    }
    Ok(kl_bins(p.bins(), &mix_bins(p.bins(), q.bins(), alpha)))
}

/// Asymmetric α-skew JS divergence
/// `(1-α) KL(p:(pq)_α) + α KL(q:(pq)_α)`, `α ∈ (0, 1)`.
pub fn skew_js_asym(p: &DiscreteDensity, q: &DiscreteDensity, alpha: f64) -> Result<f64> {
    same_dim(p, q)?;
    check_open_unit(alpha, "skew must lie in (0, 1)")?;
    if p == q {
        return Ok(0.0);
    }
    let m = mix_bins(p.bins(), q.bins(), alpha);
    Ok((1.0 - alpha) * kl_bins(p.bins(), &m) + alpha * kl_bins(q.bins(), &m))
}

/// Symmetric α-skew JS divergence `½ K_α(p:q) + ½ K_α(q:p)`, `α ∈ (0, 1)`.
pub fn skew_js_sym(p: &DiscreteDensity, q: &DiscreteDensity, alpha: f64) -> Result<f64> {
    check_open_unit(alpha, "skew must lie in (0, 1)")?;
    Ok(0.5 * skew_k(p, q, alpha)? + 0.5 * skew_k(q, p, alpha)?)
}

/// `KL((pq)_α : (pq)_β)` for `α ∈ [0,1]`, `β ∈ (0,1)`, `α ≠ β`.
///
/// Bounded above by `log(1/(β(1-β)))` whatever the supports.
pub fn kl_alpha_beta(p: &DiscreteDensity, q: &DiscreteDensity, alpha: f64, beta: f64) -> Result<f64> {
    same_dim(p, q)?;
    check_unit(alpha, "alpha must lie in [0, 1]")?;
    check_open_unit(beta, "beta must lie in (0, 1)")?;
    if alpha == beta {
        return Err(Error::InvalidParameter("alpha and beta must differ"));
    }
    if p == q {
        return Ok(0.0);
    }
    Ok(kl_bins(
        &mix_bins(p.bins(), q.bins(), alpha),
        &mix_bins(p.bins(), q.bins(), beta),
    ))
}

/// Shannon entropy `-Σ p log p` in nats.
pub fn entropy(p: &DiscreteDensity) -> f64 {
    entropy_bins(p.bins())
}

/// Cross-entropy `-Σ_{pᵢ>0} pᵢ log qᵢ`, possibly `+∞`.
pub fn cross_entropy(p: &DiscreteDensity, q: &DiscreteDensity) -> Result<f64> {
    same_dim(p, q)?;
    let mut acc = KahanSum::new();
    for (&a, &b) in p.bins().iter().zip(q.bins()) {
        let t = cross_term(a, b);
        if t == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        acc.add(t);
    }
    Ok(acc.value())
}

/// Entropy extended to positive measures, `-Σ (p̃ log p̃ - p̃)`.
pub fn entropy_plus(p: &PositiveDensity) -> f64 {
    -math::sum(p.bins().iter().map(|&x| xlogx(x) - x))
}

/// Cross-entropy extended to positive measures, `-Σ (p̃ log q̃ - q̃)`, so that
/// `KL⁺(p̃:q̃) = h×₊(p̃:q̃) - h₊(p̃)`.
pub fn cross_entropy_plus(p: &PositiveDensity, q: &PositiveDensity) -> Result<f64> {
    check_same_len(p.len(), q.len())?;
    let mut acc = KahanSum::new();
    for (&a, &b) in p.bins().iter().zip(q.bins()) {
        let t = cross_term(a, b);
        if t == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        acc.add(t + b);
    }
    Ok(acc.value())
}

/// Weighted vector-skew Jensen-Shannon divergence `JS^{α,w}(p:q)`.
///
/// Evaluated through the entropy gap `h((pq)_ᾱ) - Σ wᵢ h((pq)_αᵢ)`, which is
/// finite on any pair of supports. Debug builds cross-check it against the
/// KL-sum form [`vector_skew_js_kl_form`].
pub fn vector_skew_js(p: &DiscreteDensity, q: &DiscreteDensity, profile: &SkewProfile) -> Result<f64> {
    same_dim(p, q)?;
    let alpha_bar = profile.interior_alpha_bar()?;
    if p == q {
        return Ok(0.0);
    }
    let (pb, qb) = (p.bins(), q.bins());
    let mut acc = KahanSum::new();
    acc.add(entropy_bins(&mix_bins(pb, qb, alpha_bar)));
    for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
        acc.add(-w * entropy_bins(&mix_bins(pb, qb, a)));
    }
    let value = acc.value().max(0.0);
    debug_assert!({
        let kl_form = vector_skew_js_kl_form(p, q, profile).unwrap_or(value);
        (kl_form - value).abs() <= 1e-9 * (1.0 + value)
    });
    Ok(value)
}

/// `Σ wᵢ KL((pq)_αᵢ : (pq)_ᾱ)`: the defining form of [`vector_skew_js`].
pub fn vector_skew_js_kl_form(p: &DiscreteDensity, q: &DiscreteDensity, profile: &SkewProfile) -> Result<f64> {
    same_dim(p, q)?;
    let alpha_bar = profile.interior_alpha_bar()?;
    let (pb, qb) = (p.bins(), q.bins());
    let center = mix_bins(pb, qb, alpha_bar);
    let mut acc = KahanSum::new();
    for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
        acc.add(w * kl_bins(&mix_bins(pb, qb, a), &center));
    }
    Ok(acc.value())
}

/// `Σ wᵢ KL⁺((p̃q̃)_αᵢ : (p̃q̃)_ᾱ)` on positive measures.
///
/// The mass-correction terms cancel, so on normalized inputs this is
/// [`vector_skew_js`].
pub fn vector_skew_js_positive(p: &PositiveDensity, q: &PositiveDensity, profile: &SkewProfile) -> Result<f64> {
    check_same_len(p.len(), q.len())?;
    let alpha_bar = profile.interior_alpha_bar()?;
    let center = mix_positive(p, q, alpha_bar)?;
    let mut acc = KahanSum::new();
    for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
        let m = mix_positive(p, q, a)?;
        acc.add(w * kl_plus_bins(m.bins(), center.bins()));
    }
    Ok(acc.value().max(0.0))
}

/// Entropy-gap form `h₊((p̃q̃)_ᾱ) - Σ wᵢ h₊((p̃q̃)_αᵢ)` of
/// [`vector_skew_js_positive`].
pub fn vector_skew_js_positive_entropy_form(
    p: &PositiveDensity,
    q: &PositiveDensity,
    profile: &SkewProfile,
) -> Result<f64> {
    check_same_len(p.len(), q.len())?;
    let alpha_bar = profile.interior_alpha_bar()?;
    let mut acc = KahanSum::new();
    acc.add(entropy_plus(&mix_positive(p, q, alpha_bar)?));
    for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
        acc.add(-w * entropy_plus(&mix_positive(p, q, a)?));
    }
    Ok(acc.value())
}

/// Symmetric vector-skew JS divergence
/// `JS_s^{α,w}(p,q) = Σ wᵢ [h((pq)_½) - (h((pq)_αᵢ) + h((pq)_{1-αᵢ}))/2]`.
///
/// Only the skews and weights of `profile` are used; `ᾱ` plays no role.
pub fn sym_vector_skew_js(p: &DiscreteDensity, q: &DiscreteDensity, profile: &SkewProfile) -> Result<f64> {
    same_dim(p, q)?;
    if p == q {
        return Ok(0.0);
    }
    let (pb, qb) = (p.bins(), q.bins());
    let mut acc = KahanSum::new();
    acc.add(entropy_bins(&mix_bins(pb, qb, 0.5)));
    for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
        // (pq)_{1-a} is evaluated as (qp)_a so both orientations round alike
        let forward = entropy_bins(&mix_bins(pb, qb, a));
        let backward = entropy_bins(&mix_bins(qb, pb, a));
        acc.add(-0.5 * w * (forward + backward));
    }
    Ok(acc.value().max(0.0))
}

/// Profile `((α, 1-α), (w/2, w/2))`, whose vector-skew JS divergence is
/// symmetric.
pub fn symmetrize_by_doubling(profile: &SkewProfile) -> SkewProfile {
    profile.doubled()
}

/// Bi-vector-skew divergence `Σ wᵢ D((pq)_αᵢ : (pq)_βᵢ)` for an arbitrary
/// base divergence `D`.
///
/// Weights need only be positive; `((0,1),(1,0),(1,1))` with `D = KL` gives
/// the Jeffreys divergence.
pub fn bi_vector_skew<D>(
    p: &DiscreteDensity,
    q: &DiscreteDensity,
    base: D,
    alpha: &[f64],
    beta: &[f64],
    weights: &[f64],
) -> Result<f64>
where
    D: Fn(&DiscreteDensity, &DiscreteDensity) -> Result<f64>,
{
    same_dim(p, q)?;
    check_bi_skew(alpha, beta, weights)?;
    if p == q {
        return Ok(0.0);
    }
    let mut acc = KahanSum::new();
    for ((&a, &b), &w) in alpha.iter().zip(beta).zip(weights) {
        let left = mix_unchecked(p, q, a);
        let right = mix_unchecked(p, q, b);
        let d = base(&left, &right)?;
        if d == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        acc.add(w * d);
    }
    Ok(acc.value())
}

fn check_bi_skew(alpha: &[f64], beta: &[f64], weights: &[f64]) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::Empty);
    }
    check_same_len(alpha.len(), beta.len())?;
    check_same_len(alpha.len(), weights.len())?;
    for (&a, &b) in alpha.iter().zip(beta) {
        check_unit(a, "skew values must lie in [0, 1]")?;
        check_unit(b, "skew values must lie in [0, 1]")?;
        if a == b {
            return Err(Error::InvalidParameter("alpha and beta must differ componentwise"));
        }
    }
    if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidParameter("weights must be positive"));
    }
    Ok(())
}

/// Abstract mean used to symmetrize the two KL orientations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlMean {
    /// Twice the arithmetic mean: the Jeffreys divergence.
    Arithmetic,
    /// Harmonic mean: the resistor-average divergence.
    Harmonic,
    /// Smaller orientation.
    Min,
    /// Larger orientation.
    Max,
}

impl KlMean {
    /// Applies the mean (scaled as documented on each variant) to `a` and `b`.
    ///
    /// The harmonic mean with one infinite argument is its limit, twice the
    /// finite argument.
    pub fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            KlMean::Arithmetic => a + b,
            KlMean::Harmonic => {
                if a == f64::INFINITY && b == f64::INFINITY {
                    f64::INFINITY
                } else if a == f64::INFINITY {
                    2.0 * b
                } else if b == f64::INFINITY {
                    2.0 * a
                } else if a + b == 0.0 {
                    0.0
                } else {
                    2.0 * a * b / (a + b)
                }
            }
            KlMean::Min => a.min(b),
            KlMean::Max => a.max(b),
        }
    }
}

/// `M(KL(p:q), KL(q:p))` for the chosen [`KlMean`].
pub fn mean_symmetrized_kl(p: &DiscreteDensity, q: &DiscreteDensity, mean: KlMean) -> Result<f64> {
    Ok(mean.combine(kl(p, q)?, kl(q, p)?))
}

/// Catalog of the divergences, evaluated through [`DivergenceKind::evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub enum DivergenceKind {
    /// [`kl`]
    Kl,
    /// [`kl_plus`] on the densities viewed as unit-mass measures.
    KlPlus,
    /// [`jeffreys`]
    Jeffreys,
    /// [`js`]
    Js,
    /// [`skew_k`]
    SkewK(f64),
    /// [`skew_js_asym`]
    SkewJsAsym(f64),
    /// [`skew_js_sym`]
    SkewJsSym(f64),
    /// [`vector_skew_js`]
    VectorSkewJs(SkewProfile),
    /// [`kl_alpha_beta`]
    KlAlphaBeta {
        /// Skew of the first mixture.
        alpha: f64,
        /// Skew of the second mixture.
        beta: f64,
    },
    /// [`bi_vector_skew`] around another kind.
    BiVectorSkew {
        /// Divergence applied to each pair of mixtures.
        base: Box<DivergenceKind>,
        /// Skews of the left mixtures.
        alpha: Vec<f64>,
        /// Skews of the right mixtures.
        beta: Vec<f64>,
        /// Positive weights.
        weights: Vec<f64>,
    },
    /// [`mean_symmetrized_kl`]
    MeanSymmetrizedKl(KlMean),
}

impl DivergenceKind {
    /// Checks the scalar and vector parameters without evaluating anything.
    pub fn validate(&self) -> Result<()> {
        match self {
            DivergenceKind::SkewK(a) => check_unit(*a, "skew must lie in [0, 1]"),
            DivergenceKind::SkewJsAsym(a) | DivergenceKind::SkewJsSym(a) => {
                check_open_unit(*a, "skew must lie in (0, 1)")
            }
            DivergenceKind::VectorSkewJs(profile) => profile.interior_alpha_bar().map(|_| ()),
            DivergenceKind::KlAlphaBeta { alpha, beta } => {
                check_unit(*alpha, "alpha must lie in [0, 1]")?;
                check_open_unit(*beta, "beta must lie in (0, 1)")?;
                if alpha == beta {
                    Err(Error::InvalidParameter("alpha and beta must differ"))
                } else {
                    Ok(())
                }
            }
            DivergenceKind::BiVectorSkew {
                base,
                alpha,
                beta,
                weights,
            } => {
                base.validate()?;
                check_bi_skew(alpha, beta, weights)
            }
            _ => Ok(()),
        }
    }

    /// Evaluates the divergence `D(p : q)`.
    pub fn evaluate(&self, p: &DiscreteDensity, q: &DiscreteDensity) -> Result<f64> {
        match self {
            DivergenceKind::Kl => kl(p, q),
            DivergenceKind::KlPlus => kl_plus(&p.to_positive(), &q.to_positive()),
            DivergenceKind::Jeffreys => jeffreys(p, q),
            DivergenceKind::Js => js(p, q),
            DivergenceKind::SkewK(a) => skew_k(p, q, *a),
            DivergenceKind::SkewJsAsym(a) => skew_js_asym(p, q, *a),
            DivergenceKind::SkewJsSym(a) => skew_js_sym(p, q, *a),
            DivergenceKind::VectorSkewJs(profile) => vector_skew_js(p, q, profile),
            DivergenceKind::KlAlphaBeta { alpha, beta } => kl_alpha_beta(p, q, *alpha, *beta),
            DivergenceKind::BiVectorSkew {
                base,
                alpha,
                beta,
                weights,
            } => bi_vector_skew(p, q, |a, b| base.evaluate(a, b), alpha, beta, weights),
            DivergenceKind::MeanSymmetrizedKl(mean) => mean_symmetrized_kl(p, q, *mean),
        }
    }

    /// Short lowercase identifier, as used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            DivergenceKind::Kl => "kl",
            DivergenceKind::KlPlus => "kl+",
            DivergenceKind::Jeffreys => "jeffreys",
            DivergenceKind::Js => "js",
            DivergenceKind::SkewK(_) => "skew-k",
            DivergenceKind::SkewJsAsym(_) => "skew-js-asym",
            DivergenceKind::SkewJsSym(_) => "skew-js",
            DivergenceKind::VectorSkewJs(_) => "vskew",
            DivergenceKind::KlAlphaBeta { .. } => "kl-ab",
            DivergenceKind::BiVectorSkew { .. } => "bi-vskew",
            DivergenceKind::MeanSymmetrizedKl(KlMean::Arithmetic) => "kl-arithmetic",
            DivergenceKind::MeanSymmetrizedKl(KlMean::Harmonic) => "kl-harmonic",
            DivergenceKind::MeanSymmetrizedKl(KlMean::Min) => "kl-min",
            DivergenceKind::MeanSymmetrizedKl(KlMean::Max) => "kl-max",
        }
    }

    /// The skew profile when this kind is a JS-type divergence with a
    /// CCCP-computable centroid (`Js` or `VectorSkewJs`).
    pub fn centroid_profile(&self) -> Option<SkewProfile> {
        match self {
            DivergenceKind::Js => Some(SkewProfile::jensen_shannon()),
            DivergenceKind::VectorSkewJs(profile) => Some(profile.clone()),
            _ => None,
        }
    }
}
