//! Simulation and optimization toolkit for an IRS-assisted MISO broadcast
//! channel operating under the random rotations scheme: the surface applies
//! fresh uniform random phase shifts every coherence interval and no channel
//! state information is needed at the surface.
//!
//! The crate is organized around the physical pipeline:
//!
//! - [`geometry`]: element placement for the BS uniform linear array and the
//!   IRS uniform rectangular array, and the deterministic spherical-wave
//!   line-of-sight channel between them.
//! - [`channel`]: per-coherence-interval random draws (phases, Rayleigh
//!   fading), channel composition and the closed-form channel covariance.
//! - [`beamforming`]: random/deterministic orthonormal beam sets, per-beam
//!   SINRs and the four schedulers (RBF, DBF, ZF with user selection,
//!   coherent exhaustive phase search).
//! - [`analysis`]: closed-form machinery — the SINR distribution for a fixed
//!   beam set, its extreme-value growth limit, and the large-user sum-rate
//!   scaling evaluators for DPC, RBF and DBF.
//! - [`ee`]: the energy-efficiency objective built from the DBF scaling law
//!   and a linear power model, with three solvers (exhaustive grid, exact
//!   alternating maximization, bound-based alternating maximization).
//!
//! All rates are natural-log units per channel use, matching the convention
//! the reference curves were produced with; energy efficiencies convert those
//! rates with the configured bandwidth.

pub mod analysis;
pub mod beamforming;
pub mod channel;
pub mod ee;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Cplx = num_complex::Complex64;

/// Complex dense matrix (BS antennas x IRS elements, covariances, beam sets).
pub type CMat = nalgebra::DMatrix<Cplx>;

/// Complex dense vector (per-user channels, beams).
pub type CVec = nalgebra::DVector<Cplx>;
