//! Densities on a finite alphabet and their weighted mixtures.
//!
//! A [`DiscreteDensity`] is a point of the closed probability simplex: zero
//! bins are allowed and stored as exact `0.0`. A [`PositiveDensity`] is an
//! unnormalized non-negative measure. Both are dense, immutable vectors.
//!
//! The mixture `(pq)_a := (1 - a) p + a q` is written [`mix`].

use alloc::vec::Vec;

use crate::error::{check_same_len, Error, Result};
use crate::math::{self, ln};

/// Tolerance on `|Σ bins - 1|` accepted by [`DiscreteDensity::new`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Tolerance on `|Σ w - 1|` accepted by [`SkewProfile::new`].
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

fn check_bins(bins: &[f64]) -> Result<()> {
    if bins.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in bins.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidBin { index, value });
        }
    }
    Ok(())
}

/// A probability vector on `d ≥ 1` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDensity {
    bins: Vec<f64>,
}

impl DiscreteDensity {
    /// Validates non-negativity and `Σ = 1` (within [`SUM_TOLERANCE`]), then
    /// divides by the compensated sum so downstream code sees a sum of one to
    /// machine precision.
    pub fn new(bins: Vec<f64>) -> Result<Self> {
        check_bins(&bins)?;
        let sum = math::sum(bins.iter().copied());
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        let mut bins = bins;
        if sum != 1.0 {
            for b in &mut bins {
                *b /= sum;
            }
        }
        Ok(Self { bins })
    }

    /// Uniform density on `d` bins.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            bins: alloc::vec![1.0 / d as f64; d],
        })
    }

    /// Dirac mass on bin `index` of a `d`-bin alphabet.
    pub fn point_mass(d: usize, index: usize) -> Result<Self> {
        if index >= d {
            return Err(Error::InvalidParameter("point mass index out of range"));
        }
        let mut bins = alloc::vec![0.0; d];
        bins[index] = 1.0;
        Ok(Self { bins })
    }

    /// Caller guarantees the bins are a valid probability vector.
    pub(crate) fn from_bins_unchecked(bins: Vec<f64>) -> Self {
        debug_assert!(!bins.is_empty());
        Self { bins }
    }

    /// The probability values.
    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// Number of bins `d`.
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    /// Always `false`; a density has at least one bin.
    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Consumes the density and returns its bins.
    pub fn into_bins(self) -> Vec<f64> {
        self.bins
    }

    /// See [`support`].
    pub fn support(&self) -> Vec<usize> {
        support(self)
    }

    /// Same bins viewed as a positive measure of mass one.
    pub fn to_positive(&self) -> PositiveDensity {
        PositiveDensity {
            bins: self.bins.clone(),
            mass: 1.0,
        }
    }
}

/// `(pq)_a = (1 - a) p + a q`, computed bin by bin without renormalization.
pub fn mix(p: &DiscreteDensity, q: &DiscreteDensity, a: f64) -> Result<DiscreteDensity> {
    check_same_len(p.len(), q.len())?;
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter("mixing weight must lie in [0, 1]"));
    }
    Ok(mix_unchecked(p, q, a))
}

pub(crate) fn mix_unchecked(p: &DiscreteDensity, q: &DiscreteDensity, a: f64) -> DiscreteDensity {
    DiscreteDensity::from_bins_unchecked(mix_bins(&p.bins, &q.bins, a))
}

pub(crate) fn mix_bins(p: &[f64], q: &[f64], a: f64) -> Vec<f64> {
    p.iter().zip(q).map(|(&x, &y)| math::lerp(x, y, a)).collect()
}

/// Indices (0-based) of the strictly positive bins.
pub fn support(p: &DiscreteDensity) -> Vec<usize> {
    p.bins
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// A non-negative measure on `d ≥ 1` bins with positive finite mass.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDensity {
    bins: Vec<f64>,
    mass: f64,
}

impl PositiveDensity {
    /// Validates that every bin is finite and non-negative and the total mass
    /// is positive and finite.
    pub fn new(bins: Vec<f64>) -> Result<Self> {
        check_bins(&bins)?;
        let mass = math::sum(bins.iter().copied());
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::ZeroMass);
        }
        Ok(Self { bins, mass })
    }

    /// The bin values.
    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// Number of bins.
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    /// Always `false`.
    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Total mass `Σ bins`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Every bin multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter("scale factor must be positive"));
        }
        Self::new(self.bins.iter().map(|b| b * factor).collect())
    }

    /// See [`normalize`].
    pub fn normalize(&self) -> Result<DiscreteDensity> {
        normalize(self)
    }
}

/// Divides every bin by the total mass.
///
/// Bins are first rescaled by the largest bin so tiny or subnormal inputs keep
/// full relative precision.
pub fn normalize(p: &PositiveDensity) -> Result<DiscreteDensity> {
    let max = p.bins.iter().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return Err(Error::ZeroMass);
    }
    let scaled: Vec<f64> = p.bins.iter().map(|b| b / max).collect();
    let total = math::sum(scaled.iter().copied());
    Ok(DiscreteDensity::from_bins_unchecked(
        scaled.into_iter().map(|b| b / total).collect(),
    ))
}

/// Mixture of two positive densities.
pub fn mix_positive(p: &PositiveDensity, q: &PositiveDensity, a: f64) -> Result<PositiveDensity> {
    check_same_len(p.len(), q.len())?;
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter("mixing weight must lie in [0, 1]"));
    }
    let bins = mix_bins(&p.bins, &q.bins, a);
    let mass = math::sum(bins.iter().copied());
    Ok(PositiveDensity { bins, mass })
}

/// Skew vector `α ∈ [0,1]^k` with weights `w` in the open simplex.
///
/// The weighted mean skew `ᾱ = Σ wᵢ αᵢ` must lie in `(0, 1)` before the
/// profile can be used by a divergence; construction itself accepts
/// degenerate profiles so they can be built up and inspected.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewProfile {
    alpha: Vec<f64>,
    weights: Vec<f64>,
    alpha_bar: f64,
}

impl SkewProfile {
    /// Validates `αᵢ ∈ [0,1]`, `wᵢ > 0` and `|Σ wᵢ - 1| ≤ 1e-12`.
    pub fn new(alpha: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Empty);
        }
        check_same_len(alpha.len(), weights.len())?;
        if alpha.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::InvalidParameter("skew values must lie in [0, 1]"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter("skew weights must be positive"));
        }
        let total = math::sum(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidParameter("skew weights must sum to one"));
        }
        let alpha_bar = math::sum(alpha.iter().zip(&weights).map(|(a, w)| a * w));
        Ok(Self {
            alpha,
            weights,
            alpha_bar,
        })
    }

    /// Equal weights `1/k`.
    pub fn uniform(alpha: Vec<f64>) -> Result<Self> {
        let k = alpha.len();
        if k == 0 {
            return Err(Error::Empty);
        }
        Self::new(alpha, alloc::vec![1.0 / k as f64; k])
    }

    /// `α = (0, 1)`, `w = (½, ½)`: the ordinary Jensen-Shannon divergence.
    pub fn jensen_shannon() -> Self {
        Self {
            alpha: alloc::vec![0.0, 1.0],
            weights: alloc::vec![0.5, 0.5],
            alpha_bar: 0.5,
        }
    }

    /// True for `((0,1),(½,½))` or `((1,0),(½,½))`.
    pub fn is_jensen_shannon(&self) -> bool {
        self.weights == [0.5, 0.5] && (self.alpha == [0.0, 1.0] || self.alpha == [1.0, 0.0])
    }

    /// Skew values.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ᾱ = Σ wᵢ αᵢ`.
    pub fn alpha_bar(&self) -> f64 {
        self.alpha_bar
    }

    /// Number of skew components `k`.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    /// Always `false`.
    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Returns `ᾱ` if it lies in the open interval `(0, 1)`.
    pub fn interior_alpha_bar(&self) -> Result<f64> {
        if self.alpha_bar > 0.0 && self.alpha_bar < 1.0 {
            Ok(self.alpha_bar)
        } else {
            Err(Error::DegenerateProfile {
                alpha_bar: self.alpha_bar,
            })
        }
    }

    /// Upper bound `log(1 / (ᾱ (1 - ᾱ)))` on the vector-skew divergence.
    pub fn divergence_bound(&self) -> f64 {
        -ln(self.alpha_bar * (1.0 - self.alpha_bar))
    }

    /// Profile `(1 - α, w)`; swaps the roles of the two densities.
    pub fn reflected(&self) -> Self {
        let alpha: Vec<f64> = self.alpha.iter().map(|a| 1.0 - a).collect();
        let alpha_bar = math::sum(alpha.iter().zip(&self.weights).map(|(a, w)| a * w));
        Self {
            alpha,
            weights: self.weights.clone(),
            alpha_bar,
        }
    }

    /// Doubles the dimension: `α' = (α, 1 - α)`, `w' = (w/2, w/2)`.
    ///
    /// The resulting divergence is symmetric in its two arguments.
    pub fn doubled(&self) -> Self {
        let mut alpha = self.alpha.clone();
        alpha.extend(self.alpha.iter().map(|a| 1.0 - a));
        let half: Vec<f64> = self.weights.iter().map(|w| 0.5 * w).collect();
        let mut weights = half.clone();
        weights.extend(half);
        let alpha_bar = math::sum(alpha.iter().zip(&weights).map(|(a, w)| a * w));
        Self {
            alpha,
            weights,
            alpha_bar,
        }
    }
}
