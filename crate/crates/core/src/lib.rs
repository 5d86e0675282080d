//! bmlab: a numerical laboratory for transport-based stability of the
//! Brunn-Minkowski inequality.
//!
//! The crate is organized around six subsystems:
//!
//! - [`logconcave1d`]: 1D log-concave densities, monotone transport, exact W2,
//!   sup-convolutions, and the 1D lemma checks.
//! - [`bodies`]: convex bodies as membership oracles with exact metadata,
//!   inertia forms, isotropic normalization, and volumes.
//! - [`sampling`]: seeded hit-and-run sampling over membership oracles with
//!   batch moment estimation.
//! - [`supconv_nd`]: grid-based sup-convolutions in up to three dimensions and
//!   the associated closed forms and identities.
//! - [`transport_nd`]: empirical Wasserstein-2 (exact assignment and entropic
//!   scaling) and Knothe maps for unconditional bodies.
//! - [`stability_lab`]: the scenario/suite harness behind the `bmlab` CLI.

pub mod bodies;
pub mod logconcave1d;
pub mod num;
pub mod sampling;
pub mod stability_lab;
pub mod supconv_nd;
pub mod transport_nd;
