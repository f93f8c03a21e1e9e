//! The mixture family of categorical distributions as a Bregman chart.
//!
//! A categorical distribution on `D + 1` bins is parameterized by the first
//! `D` bins, `θ = (p₁, …, p_D)`; the dropped last bin is `θ₀ = 1 - Σ θᵢ`.
//! With the Shannon negentropy
//!
//! ```text
//! F(θ)       = Σ θᵢ log θᵢ + θ₀ log θ₀
//! ∇F(θ)ᵢ     = log(θᵢ / θ₀)
//! (∇F)⁻¹(η)ᵢ = exp(ηᵢ) / (1 + Σ exp(ηⱼ))
//! ```
//!
//! the KL divergence between two members is the Bregman divergence `B_F`, and
//! every vector-skew JS divergence is a Jensen diversity of `F`.
//!
//! `F` and `∇F` blow up on the boundary of the simplex, so densities with
//! empty bins are pulled into the interior by [`project_interior`] before
//! they are converted.

use alloc::vec::Vec;

use crate::error::{check_same_len, Error, Result};
use crate::math::{self, exp, ln, xlogx, KahanSum};
use crate::simplex::{DiscreteDensity, SkewProfile};

/// Minimum bin mass after interior projection.
pub const INTERIOR_EPS: f64 = 1e-10;

/// Natural parameter `θ ∈ ℝ^D` of a `(D+1)`-bin categorical distribution,
/// strictly inside the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParam {
    theta: Vec<f64>,
    theta0: f64,
}

impl NaturalParam {
    /// Validates `θᵢ > 0` and `Σ θᵢ < 1`.
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::Empty);
        }
        if theta.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::NotInterior);
        }
        let theta0 = 1.0 - math::sum(theta.iter().copied());
        if theta0 <= 0.0 {
            return Err(Error::NotInterior);
        }
        Ok(Self { theta, theta0 })
    }

    /// Caller guarantees `θ` is interior and `theta0 = 1 - Σθ` up to rounding.
    fn from_parts(theta: Vec<f64>, theta0: f64) -> Self {
        Self { theta, theta0 }
    }

    /// See [`to_natural`].
    pub fn from_density(p: &DiscreteDensity) -> Result<Self> {
        to_natural(p)
    }

    /// Coordinates `θ₁..θ_D`.
    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    /// Dimension `D` (one less than the number of bins).
    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Mass of the dropped bin, `θ₀ = 1 - Σ θᵢ`.
    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// `(θ₁..θ_D, θ₀)` as a density.
    pub fn to_density(&self) -> DiscreteDensity {
        to_density(self)
    }

    /// `(1 - a) self + a other`; interior because the simplex is convex.
    pub fn mix(&self, other: &NaturalParam, a: f64) -> Result<NaturalParam> {
        check_same_len(self.dim(), other.dim())?;
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameter("mixing weight must lie in [0, 1]"));
        }
        Ok(self.mix_unchecked(other, a))
    }

    pub(crate) fn mix_unchecked(&self, other: &NaturalParam, a: f64) -> NaturalParam {
        let theta = self
            .theta
            .iter()
            .zip(&other.theta)
            .map(|(&x, &y)| math::lerp(x, y, a))
            .collect();
        Self::from_parts(theta, math::lerp(self.theta0, other.theta0, a))
    }
}

/// Dual (expectation-side) coordinates `η = ∇F(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualParam {
    eta: Vec<f64>,
}

impl DualParam {
    /// Validates that every component is finite.
    pub fn new(eta: Vec<f64>) -> Result<Self> {
        if eta.is_empty() {
            return Err(Error::Empty);
        }
        if eta.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("dual coordinates must be finite"));
        }
        Ok(Self { eta })
    }

    /// Components `η₁..η_D`.
    pub fn as_slice(&self) -> &[f64] {
        &self.eta
    }

    /// Dimension `D`.
    pub fn dim(&self) -> usize {
        self.eta.len()
    }
}

/// Pulls a density with bins below `eps` into the interior by mixing it with
/// the uniform density: `p' = (1 - d·eps) p + eps`. Densities whose bins are
/// all at least `eps` are returned unchanged.
pub fn project_interior(p: &DiscreteDensity, eps: f64) -> DiscreteDensity {
    if p.bins().iter().all(|&b| b >= eps) {
        return p.clone();
    }
    let d = p.len() as f64;
    let shrink = 1.0 - d * eps;
    DiscreteDensity::from_bins_unchecked(p.bins().iter().map(|&b| shrink * b + eps).collect())
}

/// Drops the last bin. Boundary densities are first projected with
/// [`project_interior`] at [`INTERIOR_EPS`].
pub fn to_natural(p: &DiscreteDensity) -> Result<NaturalParam> {
    if p.len() < 2 {
        return Err(Error::InvalidParameter("need at least two bins"));
    }
    let p = project_interior(p, INTERIOR_EPS);
    let bins = p.bins();
    let (theta, last) = bins.split_at(bins.len() - 1);
    Ok(NaturalParam::from_parts(theta.to_vec(), last[0]))
}

/// Chart coordinates of density bins, projected only when some bin is not
/// strictly positive. Bins in `(0, ε)` are kept as they are.
pub(crate) fn natural_from_bins(bins: Vec<f64>) -> NaturalParam {
    if bins.iter().all(|&b| b > 0.0) {
        let mut theta = bins;
        let theta0 = theta.pop().expect("at least two bins");
        NaturalParam::from_parts(theta, theta0)
    } else {
        to_natural(&DiscreteDensity::from_bins_unchecked(bins)).expect("at least two bins")
    }
}

/// Appends `θ₀ = 1 - Σ θᵢ` as the last bin.
pub fn to_density(theta: &NaturalParam) -> DiscreteDensity {
    let mut bins = theta.theta.clone();
    bins.push(theta.theta0);
    DiscreteDensity::from_bins_unchecked(bins)
}

/// Shannon negentropy `F(θ) = Σ θᵢ log θᵢ + θ₀ log θ₀ = -h(m_θ)`.
pub fn negentropy(theta: &NaturalParam) -> f64 {
    let mut acc = KahanSum::new();
    for &t in &theta.theta {
        acc.add(xlogx(t));
    }
    acc.add(xlogx(theta.theta0));
    acc.value()
}

/// `∇F(θ)ᵢ = log(θᵢ / θ₀)`.
pub fn grad_negentropy(theta: &NaturalParam) -> DualParam {
    let log0 = ln(theta.theta0);
    DualParam {
        eta: theta.theta.iter().map(|&t| ln(t) - log0).collect(),
    }
}

/// `(∇F)⁻¹(η)ᵢ = exp(ηᵢ) / (1 + Σ exp(ηⱼ))`.
///
/// Exponentials are shifted by `max(0, max ηⱼ)` so large dual coordinates do
/// not overflow. A result that underflows onto the boundary is projected back
/// into the interior.
pub fn grad_negentropy_inverse(eta: &DualParam) -> NaturalParam {
    grad_negentropy_inverse_flagged(eta).0
}

/// [`grad_negentropy_inverse`] plus whether the result had to be projected.
pub(crate) fn grad_negentropy_inverse_flagged(eta: &DualParam) -> (NaturalParam, bool) {
    let shift = eta.eta.iter().copied().fold(0.0_f64, f64::max);
    let weights: Vec<f64> = eta.eta.iter().map(|&e| exp(e - shift)).collect();
    let base = exp(-shift);
    let mut acc = KahanSum::new();
    acc.add(base);
    for &w in &weights {
        acc.add(w);
    }
    let total = acc.value();
    let theta: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let theta0 = base / total;
    if theta0 > 0.0 && theta.iter().all(|&t| t > 0.0) {
        (NaturalParam::from_parts(theta, theta0), false)
    } else {
        let mut bins = theta;
        bins.push(theta0);
        (natural_from_bins(bins), true)
    }
}

/// Legendre conjugate `F*(η) = ⟨θ, η⟩ - F(θ)` at `θ = (∇F)⁻¹(η)`.
pub fn legendre_conjugate(eta: &DualParam) -> f64 {
    let theta = grad_negentropy_inverse(eta);
    dot(&theta.theta, &eta.eta) - negentropy(&theta)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    math::sum(a.iter().zip(b).map(|(x, y)| x * y))
}

fn diff_dot(a: &[f64], b: &[f64], g: &[f64]) -> f64 {
    math::sum(a.iter().zip(b).zip(g).map(|((x, y), z)| (x - y) * z))
}

/// Bregman divergence `B_F(θ₁:θ₂) = F(θ₁) - F(θ₂) - ⟨θ₁ - θ₂, ∇F(θ₂)⟩`,
/// which equals `KL(m_θ₁ : m_θ₂)`.
pub fn bregman(theta1: &NaturalParam, theta2: &NaturalParam) -> Result<f64> {
    check_same_len(theta1.dim(), theta2.dim())?;
    let grad = grad_negentropy(theta2);
    let mut acc = KahanSum::new();
    acc.add(negentropy(theta1));
    acc.add(-negentropy(theta2));
    acc.add(-diff_dot(&theta1.theta, &theta2.theta, &grad.eta));
    Ok(acc.value())
}

/// Skew Jensen divergence `(F(θ₁)F(θ₂))_α - F((θ₁θ₂)_α)`, `α ∈ (0, 1)`.
///
/// At `α = ½` this is the JS divergence of the two densities.
pub fn jensen_divergence(theta1: &NaturalParam, theta2: &NaturalParam, alpha: f64) -> Result<f64> {
    check_same_len(theta1.dim(), theta2.dim())?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter("skew must lie in (0, 1)"));
    }
    let mut acc = KahanSum::new();
    acc.add((1.0 - alpha) * negentropy(theta1));
    acc.add(alpha * negentropy(theta2));
    acc.add(-negentropy(&theta1.mix_unchecked(theta2, alpha)));
    Ok(acc.value())
}

/// Information term `I_F^α(θ) = (1 - α) F(θ)` of the skew Jensen divergence.
pub fn jensen_information(theta: &NaturalParam, alpha: f64) -> f64 {
    (1.0 - alpha) * negentropy(theta)
}

/// Cross-information `C_F^α(θ₁:θ₂) = F((θ₁θ₂)_α) - α F(θ₂)`; the skew Jensen
/// divergence is `I_F^α(θ₁) - C_F^α(θ₁:θ₂)`.
pub fn jensen_cross_information(theta1: &NaturalParam, theta2: &NaturalParam, alpha: f64) -> Result<f64> {
    let mixed = theta1.mix(theta2, alpha)?;
    Ok(negentropy(&mixed) - alpha * negentropy(theta2))
}

/// Jensen diversity `Σ wᵢ F((θ₁θ₂)_αᵢ) - F((θ₁θ₂)_ᾱ)`, equal to the
/// vector-skew JS divergence of the two densities.
pub fn jensen_diversity(theta1: &NaturalParam, theta2: &NaturalParam, profile: &SkewProfile) -> Result<f64> {
    check_same_len(theta1.dim(), theta2.dim())?;
    let alpha_bar = profile.interior_alpha_bar()?;
    let mut acc = KahanSum::new();
    for (&a, &w) in profile.alpha().iter().zip(profile.weights()) {
        acc.add(w * negentropy(&theta1.mix_unchecked(theta2, a)));
    }
    acc.add(-negentropy(&theta1.mix_unchecked(theta2, alpha_bar)));
    Ok(acc.value())
}

/// Closed-form cross-entropy `h×(m_θ₁ : m_θ₂) = -F(θ₂) - ⟨θ₁ - θ₂, ∇F(θ₂)⟩`.
pub fn mixture_cross_entropy(theta1: &NaturalParam, theta2: &NaturalParam) -> Result<f64> {
    check_same_len(theta1.dim(), theta2.dim())?;
    let grad = grad_negentropy(theta2);
    Ok(-negentropy(theta2) - diff_dot(&theta1.theta, &theta2.theta, &grad.eta))
}

/// Negentropy of a mixture whose `D + 1` components have pairwise disjoint
/// supports: `Σ θᵢ log θᵢ - Σ θᵢ h(pᵢ)`.
///
/// `component_entropies` is aligned with the density bins, so its last entry
/// belongs to the component weighted by `θ₀`.
pub fn disjoint_support_negentropy(theta: &NaturalParam, component_entropies: &[f64]) -> Result<f64> {
    check_same_len(theta.dim() + 1, component_entropies.len())?;
    let mut acc = KahanSum::new();
    acc.add(negentropy(theta));
    for (&t, &h) in theta.theta.iter().zip(component_entropies) {
        acc.add(-t * h);
    }
    acc.add(-theta.theta0 * component_entropies[theta.dim()]);
    Ok(acc.value())
}

/// Gradient of [`disjoint_support_negentropy`]:
/// `log(θᵢ/θ₀) - h(pᵢ) + h(p₀)`.
pub fn disjoint_support_gradient(theta: &NaturalParam, component_entropies: &[f64]) -> Result<DualParam> {
    check_same_len(theta.dim() + 1, component_entropies.len())?;
    let h0 = component_entropies[theta.dim()];
    let mut grad = grad_negentropy(theta);
    for (g, &h) in grad.eta.iter_mut().zip(component_entropies) {
        *g += h0 - h;
    }
    Ok(grad)
}

/// Bregman divergence generated by [`disjoint_support_negentropy`]. The
/// affine entropy term drops out, so this equals [`bregman`].
pub fn disjoint_support_bregman(
    theta1: &NaturalParam,
    theta2: &NaturalParam,
    component_entropies: &[f64],
) -> Result<f64> {
    check_same_len(theta1.dim(), theta2.dim())?;
    let grad = disjoint_support_gradient(theta2, component_entropies)?;
    let mut acc = KahanSum::new();
    acc.add(disjoint_support_negentropy(theta1, component_entropies)?);
    acc.add(-disjoint_support_negentropy(theta2, component_entropies)?);
    acc.add(-diff_dot(&theta1.theta, &theta2.theta, &grad.eta));
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence;
    use alloc::vec;
    use core::f64::consts::LN_2;

    fn np(theta: &[f64]) -> NaturalParam {
        NaturalParam::new(theta.to_vec()).unwrap()
    }

    #[test]
    fn natural_param_validation() {
        assert!(NaturalParam::new(vec![]).is_err());
        assert_eq!(NaturalParam::new(vec![0.0, 0.5]), Err(Error::NotInterior));
        assert_eq!(NaturalParam::new(vec![0.5, 0.5]), Err(Error::NotInterior));
        assert!(NaturalParam::new(vec![0.2, 0.3]).is_ok());
    }

    #[test]
    fn conversions() {
        let p = DiscreteDensity::new(vec![0.2, 0.3, 0.5]).unwrap();
        let theta = to_natural(&p).unwrap();
        assert_eq!(theta.as_slice(), &[0.2, 0.3]);
        assert_eq!(to_density(&theta), p);

        let boundary = DiscreteDensity::new(vec![1.0, 0.0]).unwrap();
        let theta = to_natural(&boundary).unwrap();
        assert!((theta.as_slice()[0] - (1.0 - INTERIOR_EPS)).abs() < 1e-16);
        assert!((theta.theta0() - INTERIOR_EPS).abs() < 1e-16);
        let back = to_density(&theta);
        assert!((back.bins()[1] - INTERIOR_EPS).abs() < 1e-16);

        assert!(to_natural(&DiscreteDensity::new(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn negentropy_examples() {
        assert!((negentropy(&np(&[0.5])) + LN_2).abs() < 1e-15);
        let uniform = np(&[0.25; 3]);
        assert!((negentropy(&uniform) + 4f64.ln()).abs() < 1e-15);
        let theta = np(&[0.1, 0.25, 0.3]);
        let h = divergence::entropy(&to_density(&theta));
        assert!((negentropy(&theta) + h).abs() < 1e-15);
    }

    #[test]
    fn gradient_examples() {
        assert_eq!(grad_negentropy(&np(&[0.5])).as_slice(), &[0.0]);
        let eta = grad_negentropy(&np(&[0.2, 0.3]));
        assert!((eta.as_slice()[0] - 0.4f64.ln()).abs() < 1e-15);
        assert!((eta.as_slice()[1] - 0.6f64.ln()).abs() < 1e-15);

        let theta = grad_negentropy_inverse(&DualParam::new(vec![0.0]).unwrap());
        assert_eq!(theta.as_slice(), &[0.5]);
        let theta = grad_negentropy_inverse(&DualParam::new(vec![LN_2]).unwrap());
        assert!((theta.as_slice()[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_gradient_survives_extreme_duals() {
        let theta = grad_negentropy_inverse(&DualParam::new(vec![800.0, 0.0]).unwrap());
        assert!(theta.as_slice().iter().all(|t| t.is_finite() && *t > 0.0));
        assert!(theta.theta0() > 0.0);
        let theta = grad_negentropy_inverse(&DualParam::new(vec![-800.0, -800.0]).unwrap());
        assert!(theta.as_slice().iter().all(|t| *t >= INTERIOR_EPS * 0.5));
    }

    #[test]
    fn legendre_conjugate_matches_log_partition() {
        let eta = DualParam::new(vec![0.3, -1.2, 2.0]).unwrap();
        let log_partition = (1.0 + 0.3f64.exp() + (-1.2f64).exp() + 2f64.exp()).ln();
        assert!((legendre_conjugate(&eta) - log_partition).abs() < 1e-14);
    }

    #[test]
    fn bregman_examples() {
        let theta = np(&[0.2, 0.3]);
        assert_eq!(bregman(&theta, &theta).unwrap(), 0.0);
        let oracle = 0.2 * (0.25f64).ln() + 0.8 * 4f64.ln();
        assert!((bregman(&np(&[0.2]), &np(&[0.8])).unwrap() - oracle).abs() < 1e-14);
        assert!(bregman(&np(&[0.2]), &np(&[0.2, 0.3])).is_err());
    }

    #[test]
    fn jensen_examples() {
        let a = np(&[0.2, 0.3]);
        let b = np(&[0.5, 0.1]);
        assert!(jensen_divergence(&a, &a, 0.3).unwrap().abs() < 1e-15);
        let js = divergence::js(&to_density(&a), &to_density(&b)).unwrap();
        assert!((jensen_divergence(&a, &b, 0.5).unwrap() - js).abs() < 1e-14);
        let alpha = 0.3;
        let decomposed = jensen_information(&a, alpha) - jensen_cross_information(&a, &b, alpha).unwrap();
        assert!((jensen_divergence(&a, &b, alpha).unwrap() - decomposed).abs() < 1e-13);
        assert!(jensen_divergence(&a, &b, 1.0).is_err());
    }

    #[test]
    fn diversity_examples() {
        let a = np(&[0.2, 0.3]);
        let b = np(&[0.5, 0.1]);
        let profile = SkewProfile::new(vec![0.0, 1.0, 0.25], vec![0.2, 0.3, 0.5]).unwrap();
        assert!(jensen_diversity(&a, &a, &profile).unwrap().abs() < 1e-15);
        let js = SkewProfile::jensen_shannon();
        let d = jensen_diversity(&a, &b, &js).unwrap();
        assert!((d - jensen_divergence(&a, &b, 0.5).unwrap()).abs() < 1e-15);
        let v = divergence::vector_skew_js(&to_density(&a), &to_density(&b), &profile).unwrap();
        assert!((jensen_diversity(&a, &b, &profile).unwrap() - v).abs() < 1e-13);
    }

    #[test]
    fn cross_entropy_examples() {
        let a = np(&[0.2, 0.3]);
        let b = np(&[0.5, 0.1]);
        assert!((mixture_cross_entropy(&a, &a).unwrap() + negentropy(&a)).abs() < 1e-15);
        let direct = divergence::cross_entropy(&to_density(&a), &to_density(&b)).unwrap();
        assert!((mixture_cross_entropy(&a, &b).unwrap() - direct).abs() < 1e-14);
        let eta2 = grad_negentropy(&b);
        let legendre = legendre_conjugate(&eta2) - dot(a.as_slice(), eta2.as_slice());
        assert!((mixture_cross_entropy(&a, &b).unwrap() - legendre).abs() < 1e-12);
    }

    #[test]
    fn disjoint_support_generator() {
        let theta = np(&[0.3]);
        assert_eq!(
            disjoint_support_negentropy(&theta, &[0.0, 0.0]).unwrap(),
            negentropy(&theta)
        );
        let shifted = disjoint_support_negentropy(&theta, &[1.0, 1.0]).unwrap();
        assert!((shifted - (negentropy(&theta) - 1.0)).abs() < 1e-15);

        let a = np(&[0.2, 0.3]);
        let b = np(&[0.5, 0.1]);
        let h = [0.7, 2.1, 0.4];
        let shifted = disjoint_support_bregman(&a, &b, &h).unwrap();
        assert!((shifted - bregman(&a, &b).unwrap()).abs() < 1e-12);
        assert!(disjoint_support_negentropy(&a, &[0.1, 0.2]).is_err());
    }
}
