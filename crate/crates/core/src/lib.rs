//! Exact-arithmetic toolkit for quantum code parameter bounds.
//!
//! The crate evaluates the quantum Hamming bound and its relatives with
//! big-integer arithmetic, builds CSS codes from nested classical codes over
//! GF(q), derives the two auxiliary classical codes every CSS code implies,
//! and classifies `[[n,k,d]]_q` parameter sets as Hamming-consistent,
//! provably impossible, or open.
//!
//! Real-valued quantities (the `2e/q²` threshold, entropy terms) are generic
//! over [`Real`]; [`Fixed`] gives 192-bit fixed-point evaluation with
//! conservative comparisons and `f64` is available for quick sweeps.

pub mod bounds;
pub mod codes;
pub mod css;
pub mod error;
pub mod galois;
pub mod quantity;
pub mod scan;
pub mod threshold;

pub use bounds::{BoundKind, BoundVerdict, CssFeasibility, QuantumParams};
pub use codes::{LinearCode, WorkBudget};
pub use css::{CssPair, DerivationReport, DerivedCodes};
pub use error::{Error, Result};
pub use galois::{CodeMatrix, FieldElement, FieldSpec, Rref};
pub use quantity::Quantity;
pub use scan::{Category, Classification, OracleConfig, OracleReport, ScanConfig, ScanReport};
pub use threshold::{Applicability, Certainty, Fixed, Real, ThresholdReport};

/// Threshold report evaluated with 192-bit fixed-point arithmetic.
pub type PreciseThresholdReport = ThresholdReport<Fixed>;
/// Threshold report evaluated in double precision.
pub type FastThresholdReport = ThresholdReport<f64>;
/// Field elements are shared immutably between matrices and codes.
pub type Field = std::sync::Arc<FieldSpec>;
