//! Exact intersection calculus, Chern-character bookkeeping and constraint
//! solving for rank-5 spectral bundles on the fiber product `X = B ×_{P¹} B′`
//! of two rational elliptic surfaces.
//!
//! Everything is exact rational arithmetic; nothing here uses floating point.

pub mod assembly;
pub mod error;
pub mod fm_chern;
pub mod hecke;
pub mod lattice;
pub mod linalg;
pub mod prym;
pub mod rational;
pub mod solver;

pub use assembly::{
    ch_component, ch_total, evaluate_constraints, ext_lower_bound, moduli_tally, BundleParams, ConstraintEntry,
    ConstraintName, ConstraintReport, HPrimePolicy, Slack,
};
pub use error::{Error, Result};
pub use fm_chern::{ChernB, SpectralParams};
pub use hecke::{ChernX, HeckeMultiplicities};
pub use lattice::{DivisorClass, Surface};
pub use rational::Rational;
pub use solver::{MClass, SearchBounds, SolutionCertificate, SolveOptions, Table1Row};
