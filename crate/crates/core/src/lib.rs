//! Exact state-vector simulation of a coherent energy-ladder reservoir that
//! is used repeatedly to put two-level systems into superposition, together
//! with closed-form oracles for everything the simulation produces.
//!
//! Every numerical type is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the common double-precision instantiations. The
//! binomial oracles run in exact integer/rational arithmetic.
//!
//! ```
//! use catalytic_core::{metrics, run_protocol, ShiftConvention, TwoLevelUnitary64};
//!
//! let joint = run_protocol(8, 0, 0.0, &TwoLevelUnitary64::hadamard(), 2, ShiftConvention::Standard)?;
//! let fk = metrics::collective_fidelity(&joint, 0.0);
//! assert!((fk - 0.90625).abs() < 1e-12);
//! # Ok::<(), catalytic_core::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod engine;
pub mod error;
pub mod exact;
pub mod ladder;
pub mod metrics;
pub mod scalar;
pub mod spectral;
pub mod systems;

pub use density::{
    dephase_total_number, fidelity_with_pure, reduce_reservoir, reduce_systems, trace_distance, von_neumann_entropy,
    DensityMatrix,
};
pub use engine::{run_protocol, JointState, ShiftConvention, TwoLevelUnitary};
pub use error::{Error, Result};
pub use ladder::{dirichlet_overlap, LadderState, ShiftDirection};
pub use metrics::FidelityReport;
pub use scalar::Real;
pub use systems::{collective_overlap_magnitude, crossover_k, psi_overlap, QubitState};

pub type LadderState64 = LadderState<f64>;
pub type QubitState64 = QubitState<f64>;
pub type JointState64 = JointState<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type TwoLevelUnitary64 = TwoLevelUnitary<f64>;
pub type FidelityReport64 = FidelityReport<f64>;

pub type LadderState32 = LadderState<f32>;
pub type QubitState32 = QubitState<f32>;
pub type JointState32 = JointState<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type TwoLevelUnitary32 = TwoLevelUnitary<f32>;
pub type FidelityReport32 = FidelityReport<f32>;
