//! k-means++ seeding and Lloyd-style clustering of histograms.
//!
//! Seeding samples each new seed with probability proportional to
//! `min_s D(p : s)` over the seeds chosen so far. Points at infinite
//! divergence from every seed take precedence and are drawn uniformly.
//!
//! Lloyd iterations are available for the JS-type kinds only, since those have
//! a CCCP centroid. Inputs are projected into the ε-interior once; the
//! objective, the assignments and the centroids all use the projected
//! histograms. Each centroid update is warm-started at the previous centroid,
//! so the objective never increases.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centroid::{solve_from, CentroidProblem, SolverSettings, UpdateRule};
use crate::divergence::DivergenceKind;
use crate::error::{check_same_len, Error, Result};
use crate::math;
use crate::mixture::{natural_from_bins, project_interior, INTERIOR_EPS};
use crate::simplex::DiscreteDensity;

/// Settings for [`kmeanspp_seed`] and [`lloyd_cluster`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringConfig {
    /// Number of clusters.
    pub k: usize,
    /// Divergence `D(point : center)`.
    pub divergence: DivergenceKind,
    /// Seed of the ChaCha8 generator.
    pub seed: u64,
    /// Maximum number of Lloyd rounds.
    pub max_rounds: usize,
    /// `false` stops after seeding and assigns every point to its nearest seed.
    pub use_centroid_updates: bool,
    /// Settings of the centroid solves.
    pub settings: SolverSettings,
}

impl ClusteringConfig {
    /// JS divergence, seed 0, at most 100 rounds with centroid updates.
    pub fn new(k: usize) -> Self {
        Self {
            k,
            divergence: DivergenceKind::Js,
            seed: 0,
            max_rounds: 100,
            use_centroid_updates: true,
            settings: SolverSettings::default(),
        }
    }
}

/// Result of [`lloyd_cluster`].
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster index of each point.
    pub assignment: Vec<usize>,
    /// Cluster centers.
    pub centroids: Vec<DiscreteDensity>,
    /// `Σᵢ D(pᵢ : c_{a(i)})` after seeding and after every round.
    pub objective_trace: Vec<f64>,
    /// Number of Lloyd rounds performed.
    pub rounds: usize,
    /// Indices of the points chosen as seeds.
    pub seeds: Vec<usize>,
    /// Whether the assignment stabilized within `max_rounds`.
    pub converged: bool,
}

fn check_inputs(histograms: &[DiscreteDensity], config: &ClusteringConfig) -> Result<()> {
    let first = histograms.first().ok_or(Error::Empty)?;
    for h in histograms {
        check_same_len(first.len(), h.len())?;
    }
    if config.k == 0 {
        return Err(Error::InvalidParameter("k must be positive"));
    }
    if config.k > histograms.len() {
        return Err(Error::TooFewPoints {
            points: histograms.len(),
            k: config.k,
        });
    }
    config.divergence.validate()
}

/// k-means++ seed indices, drawn from a ChaCha8 stream seeded by `config.seed`.
pub fn kmeanspp_seed(histograms: &[DiscreteDensity], config: &ClusteringConfig) -> Result<Vec<usize>> {
    check_inputs(histograms, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = histograms.len();
    let mut seeds = vec![rng.random_range(0..n)];
    let mut nearest = vec![f64::INFINITY; n];
    while seeds.len() < config.k {
        let last = &histograms[*seeds.last().expect("one seed")];
        let fresh = map_points(histograms, |p| config.divergence.evaluate(p, last))?;
        for (d, f) in nearest.iter_mut().zip(fresh) {
            *d = d.min(f);
        }
        for &s in &seeds {
            nearest[s] = 0.0;
        }
        seeds.push(draw(&nearest, &seeds, &mut rng));
    }
    Ok(seeds)
}

fn draw(weights: &[f64], taken: &[usize], rng: &mut ChaCha8Rng) -> usize {
    let infinite: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == f64::INFINITY).collect();
    if !infinite.is_empty() {
        return infinite[rng.random_range(0..infinite.len())];
    }
    let total = math::sum(weights.iter().copied());
    if total <= 0.0 || total.is_nan() {
        // every point coincides with a seed
        let free: Vec<usize> = (0..weights.len()).filter(|i| !taken.contains(i)).collect();
        return free[rng.random_range(0..free.len())];
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut fallback = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            fallback = i;
            if target < acc {
                return i;
            }
        }
    }
    fallback
}

/// Seeds with [`kmeanspp_seed`], then alternates assignments and CCCP centroid
/// updates until the assignment stops changing.
///
/// With `use_centroid_updates = false` any divergence kind is accepted and the
/// seeds themselves serve as centers. Otherwise the kind must be `Js` or
/// `VectorSkewJs`.
pub fn lloyd_cluster(histograms: &[DiscreteDensity], config: &ClusteringConfig) -> Result<Clustering> {
    check_inputs(histograms, config)?;
    let seeds = kmeanspp_seed(histograms, config)?;
    let kind = &config.divergence;

    if !config.use_centroid_updates {
        let centroids: Vec<DiscreteDensity> = seeds.iter().map(|&s| histograms[s].clone()).collect();
        let (assignment, distances) = assign(histograms, &centroids, kind)?;
        return Ok(Clustering {
            assignment,
            centroids,
            objective_trace: vec![math::sum(distances)],
            rounds: 0,
            seeds,
            converged: true,
        });
    }

    let profile = kind.centroid_profile().ok_or(Error::InvalidParameter(
        "centroid updates need the js or vskew divergence",
    ))?;
    if histograms[0].len() < 2 {
        return Err(Error::InvalidParameter("need at least two bins"));
    }
    let points: Vec<DiscreteDensity> = histograms.iter().map(|h| project_interior(h, INTERIOR_EPS)).collect();
    let mut centroids: Vec<DiscreteDensity> = seeds.iter().map(|&s| points[s].clone()).collect();
    let (mut assignment, mut distances) = assign(&points, &centroids, kind)?;
    reseed_empty(&points, &mut centroids, &mut assignment, &mut distances);
    let mut trace = vec![math::sum(distances.iter().copied())];
    let mut rounds = 0;
    let mut converged = false;

    while rounds < config.max_rounds {
        rounds += 1;
        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<DiscreteDensity> = assignment
                .iter()
                .zip(&points)
                .filter(|(&a, _)| a == c)
                .map(|(_, p)| p.clone())
                .collect();
            if members.is_empty() {
                continue;
            }
            let problem = CentroidProblem::from_densities(&members)?
                .with_profile(profile.clone())?
                .with_settings(config.settings);
            let init = natural_from_bins(centroid.bins().to_vec());
            *centroid = solve_from(&problem, &init, UpdateRule::Auto)?.density;
        }
        let (mut next, mut next_distances) = assign(&points, &centroids, kind)?;
        reseed_empty(&points, &mut centroids, &mut next, &mut next_distances);
        trace.push(math::sum(next_distances.iter().copied()));
        let stable = next == assignment;
        assignment = next;
        if stable {
            converged = true;
            break;
        }
    }
    Ok(Clustering {
        assignment,
        centroids,
        objective_trace: trace,
        rounds,
        seeds,
        converged,
    })
}

/// Nearest center of every point; ties go to the lowest center index.
fn assign(
    points: &[DiscreteDensity],
    centroids: &[DiscreteDensity],
    kind: &DivergenceKind,
) -> Result<(Vec<usize>, Vec<f64>)> {
    let nearest = map_points(points, |p| {
        let mut best = (0, f64::INFINITY);
        for (c, center) in centroids.iter().enumerate() {
            let d = kind.evaluate(p, center)?;
            if d < best.1 {
                best = (c, d);
            }
        }
        Ok(best)
    })?;
    Ok(nearest.into_iter().unzip())
}

/// Moves every empty center onto the worst-served point of a cluster that has
/// at least two members.
fn reseed_empty(
    points: &[DiscreteDensity],
    centroids: &mut [DiscreteDensity],
    assignment: &mut [usize],
    distances: &mut [f64],
) {
    for c in 0..centroids.len() {
        if assignment.contains(&c) {
            continue;
        }
        let mut sizes = vec![0usize; centroids.len()];
        for &a in assignment.iter() {
            sizes[a] += 1;
        }
        let farthest = (0..points.len())
            .filter(|&i| sizes[assignment[i]] > 1)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if distances[b] >= distances[i] => Some(b),
                _ => Some(i),
            });
        if let Some(i) = farthest {
            centroids[c] = points[i].clone();
            assignment[i] = c;
            distances[i] = 0.0;
        }
    }
}

#[cfg(feature = "rayon")]
fn map_points<T, F>(points: &[DiscreteDensity], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&DiscreteDensity) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    points.par_iter().map(f).collect()
}

#[cfg(not(feature = "rayon"))]
fn map_points<T, F>(points: &[DiscreteDensity], f: F) -> Result<Vec<T>>
where
    F: Fn(&DiscreteDensity) -> Result<T>,
{
    points.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(bins: &[f64]) -> DiscreteDensity {
        DiscreteDensity::new(bins.to_vec()).unwrap()
    }

    fn two_groups() -> Vec<DiscreteDensity> {
        vec![
            dd(&[0.8, 0.1, 0.1]),
            dd(&[0.7, 0.2, 0.1]),
            dd(&[0.75, 0.15, 0.1]),
            dd(&[0.1, 0.1, 0.8]),
            dd(&[0.1, 0.2, 0.7]),
            dd(&[0.05, 0.15, 0.8]),
        ]
    }

    #[test]
    fn validation() {
        let h = two_groups();
        assert_eq!(
            kmeanspp_seed(&h, &ClusteringConfig::new(7)),
            Err(Error::TooFewPoints { points: 6, k: 7 })
        );
        assert!(kmeanspp_seed(&h, &ClusteringConfig::new(0)).is_err());
        let mut config = ClusteringConfig::new(2);
        config.divergence = DivergenceKind::Kl;
        assert!(lloyd_cluster(&h, &config).is_err());
        config.use_centroid_updates = false;
        assert!(lloyd_cluster(&h, &config).is_ok());
    }

    #[test]
    fn seeds_are_distinct_and_reproducible() {
        let h = two_groups();
        let config = ClusteringConfig::new(4);
        let a = kmeanspp_seed(&h, &config).unwrap();
        assert_eq!(a, kmeanspp_seed(&h, &config).unwrap());
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn duplicates_do_not_repeat_seeds() {
        let h = vec![dd(&[0.5, 0.5]); 3];
        let seeds = kmeanspp_seed(&h, &ClusteringConfig::new(3)).unwrap();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn infinite_divergence_wins() {
        // under KL, only the point with disjoint support is at infinite distance
        let h = vec![dd(&[0.5, 0.5, 0.0]), dd(&[0.4, 0.6, 0.0]), dd(&[0.0, 0.0, 1.0])];
        let mut config = ClusteringConfig::new(2);
        config.divergence = DivergenceKind::Kl;
        for seed in 0..20 {
            config.seed = seed;
            let seeds = kmeanspp_seed(&h, &config).unwrap();
            if seeds[0] != 2 {
                assert_eq!(seeds[1], 2);
            }
        }
    }

    #[test]
    fn separates_two_groups() {
        let h = two_groups();
        let result = lloyd_cluster(&h, &ClusteringConfig::new(2)).unwrap();
        assert!(result.converged);
        let a = &result.assignment;
        assert!(a[0] == a[1] && a[1] == a[2]);
        assert!(a[3] == a[4] && a[4] == a[5]);
        assert_ne!(a[0], a[3]);
        for w in result.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }
}
