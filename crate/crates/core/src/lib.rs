//! Numerical toolkit for α-modulation spaces on a periodic lattice.
//!
//! Builds α-coverings with their partitions of unity, evaluates α-modulation norms
//! of functions and product norms of symbols, applies pseudo-differential operators
//! and commutators, and measures the constants in the associated boundedness
//! estimates.

pub mod cli;
pub mod covering;
pub mod error;
mod fft;
pub mod grid;
pub mod operators;
pub mod report;
pub mod spaces;
pub mod synth;
pub mod verify;
pub mod window;

pub use covering::{AdmissibilityReport, Covering, CoveringPiece};
pub use error::{Error, Result};
pub use grid::{BandSupport, Domain, Exponent, GridSpec, SampledFunction, SampledSymbol, SymbolDomain};
pub use operators::LipschitzFunction;
pub use report::{emit_report, Envelope, Format, Report, VerifySummary};
pub use spaces::{NormBreakdown, NormParams};
pub use synth::TestFamily;
pub use verify::{BoundReport, BoundRow, VerifyConfig};
