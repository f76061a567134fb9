//! Gravitational redshift of atomic and nuclear spectra.
//!
//! Two mechanisms can shift a spectral line between an emitter deep in a
//! potential and an observer higher up:
//!
//! * the emitter's effective mass drops to m(1 + φ/c²), and with it every
//!   level energy ([`spectra`]);
//! * a photon with energy-equivalent mass hν/c² exchanges energy with the
//!   field in flight, with light slowed to c/(1 − φ/c²) ([`photon`]).
//!
//! Each alone predicts Δν/ν = Δφ/c²; both together predict twice that.
//! [`experiments`] tests all three readings against tower and solar
//! measurements.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod data;
pub mod experiments;
pub mod gravity;
pub mod photon;
pub mod spectra;
pub mod units;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Units(#[from] units::UnitsError),
    #[error(transparent)]
    Gravity(#[from] gravity::GravityError),
    #[error(transparent)]
    Spectra(#[from] spectra::SpectraError),
    #[error(transparent)]
    Photon(#[from] photon::PhotonError),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
    #[error("{0}")]
    Usage(String),
    #[error("output: {0}")]
    Output(String),
}
