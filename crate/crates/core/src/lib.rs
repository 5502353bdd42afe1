//! Complementarity and uncertainty for two-level quantum systems.
//!
//! The crate covers predictability and visibility of a qubit state, the
//! family of observables complementary to a reference observable, the
//! Robertson uncertainty relation and its intelligent states, and the
//! simultaneous (unsharp) measurement of two complementary observables
//! through an entangled meter. Each closed form is paired with an
//! independent numerical route (grid scans, 4-dimensional projections,
//! golden-section minimisation, Monte-Carlo sampling).

pub mod complementarity;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod optimize;
pub mod simultaneous;
pub mod state;
pub mod sweep;
pub mod uncertainty;
pub mod verify;

pub use complementarity::{
    duality, fringe_probability, predictability, predictability_of_b, visibility, visibility_of_b, visibility_oracle,
    DualityReport, FringeScan,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eig, kron, trace_norm, CMat2, CMat4, CVec2, CVec4, Eigen2, C64};
pub use montecarlo::{
    sample_fringe, sample_sharp, sample_simultaneous, FringeSample, SampleReport, SimultaneousSample,
};
pub use simultaneous::{
    distinguishability, entangle, entangled_visibility, estimate_a, estimate_b, meter_projectors,
    minimum_simultaneous_product, optimal_entanglement, simultaneous_product, EntangledState, Estimate,
    MeterProjectors, MinimumReport,
};
pub use state::{
    beam_splitter, complementary_observable, complementary_triplet, phase_difference_realization, phase_shift,
    ComplementaryFamily, DensityMatrix, Gauge, Handedness, Observable,
};
pub use sweep::{sweep, write_csv, Figure, SweepRow, CSV_HEADER};
pub use uncertainty::{
    intelligent_state, is_residual, mean_var, normalized_product_bounds, robertson, Branch, IntelligentState, IsFamily,
    Moments, RobertsonReport,
};
pub use verify::{Level, VerifyConfig, VerifyReport};
