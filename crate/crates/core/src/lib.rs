//! Analysis of quantum annealing with inhomogeneous transverse driving for
//! the ferromagnetic p-spin model.
//!
//! * [`model`]: Hamiltonian parameters, annealing paths and drive schedules.
//! * [`meanfield`]: static-approximation free energies, their minimization,
//!   the first-order phase boundary and its critical endpoint.
//! * [`semiclassical`]: classical spin-coherent energy and quadratic
//!   fluctuation gaps around its minimum.
//! * [`exactdiag`]: sparse Hamiltonians in the maximal-spin sector, Lanczos
//!   spectra, gap scans and adiabatic run-time estimates.
//!
//! Every numerical type is generic over the scalar ([`Real`], implemented for
//! `f32` and `f64`); the `*64` aliases fix the common double-precision case.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exactdiag;
pub mod grid;
pub mod meanfield;
pub mod model;
mod num;
mod optimize;
pub mod semiclassical;

pub use error::{Error, Result};
pub use num::Real;

pub use model::{
    Block, BlockDecomposition, DisorderKind, DriveSchedule, Driving, FieldDisorder, ModelSpec,
    PathSpec, SchedulePoint, SiteOrder, Slope,
};

pub type ModelSpec64 = ModelSpec<f64>;
pub type PathSpec64 = PathSpec<f64>;
pub type SchedulePoint64 = SchedulePoint<f64>;
pub type DriveSchedule64 = DriveSchedule<f64>;
pub type FieldDisorder64 = FieldDisorder<f64>;
pub type FreeEnergy64 = meanfield::FreeEnergy<f64>;
pub type FieldAverage64 = meanfield::FieldAverage<f64>;
pub type MeanFieldPoint64 = meanfield::MeanFieldPoint<f64>;
pub type SparseHamiltonian64 = exactdiag::SparseHamiltonian<f64>;
