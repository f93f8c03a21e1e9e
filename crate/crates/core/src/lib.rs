//! # skewjs-core
//!
//! Weighted vector-skew Jensen-Shannon divergences on discrete densities and
//! Jensen-Shannon-type centroids of categorical distributions.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature for
//! `std::error::Error` interop, or `rayon` to parallelize per-point and
//! per-bin work; results stay bit-identical because reductions keep a fixed
//! order.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`simplex`] | [`DiscreteDensity`], [`PositiveDensity`], [`SkewProfile`], mixtures |
//! | [`divergence`] | KL, KL⁺, Jeffreys, JS, K_α, KL_{α,β}, JS^{α,w}, bi-vector-skew, mean symmetrizations |
//! | [`mixture`] | natural parameters of the categorical mixture family, negentropy F, ∇F, (∇F)⁻¹, Bregman/Jensen |
//! | [`centroid`] | CCCP solver for JS-type centroids and barycenters, positive relaxations |
//! | [`cluster`] | k-means++ seeding under an arbitrary divergence, Lloyd iterations |
//!
//! Conventions: natural logarithms throughout (nats), `0 log 0 = 0`,
//! `log(0/0) = 0`, and `p > 0, q = 0` yields `f64::INFINITY`, never NaN.
//!
//! ```
//! use skewjs_core::{divergence, DiscreteDensity, SkewProfile};
//!
//! let p = DiscreteDensity::new(vec![1.0, 0.0]).unwrap();
//! let q = DiscreteDensity::new(vec![0.0, 1.0]).unwrap();
//! let js = divergence::js(&p, &q).unwrap();
//! assert!((js - core::f64::consts::LN_2).abs() < 1e-15);
//!
//! let profile = SkewProfile::new(vec![0.0, 1.0, 1.0 / 3.0], vec![1.0 / 3.0; 3]).unwrap();
//! let v = divergence::vector_skew_js(&p, &q, &profile).unwrap();
//! assert!(v <= profile.divergence_bound());
//! ```

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod centroid;
pub mod cluster;
pub mod divergence;
mod error;
mod math;
pub mod mixture;
pub mod simplex;

pub use centroid::{CentroidProblem, CentroidResult, SolverSettings};
pub use cluster::{Clustering, ClusteringConfig};
pub use divergence::{DivergenceKind, KlMean};
pub use error::{Error, Result};
pub use mixture::{DualParam, NaturalParam};
pub use simplex::{DiscreteDensity, PositiveDensity, SkewProfile};
