//! Scope-aware cognitive complexity for MiniC programs.
//!
//! The pipeline is: [`frontend`] parses source into a [`frontend::SyntaxTree`];
//! [`scope`] binds each identifier to a per-scope variable; [`sicn`] builds the
//! occurrence ledger with ICN/SICN counts; [`bcs`] splits each function into
//! its granule hierarchy; [`metrics`] combines granules, ledger and weights
//! into ESCIM. [`weyuker`] transforms and generates programs to check the
//! metric's conformance to the Weyuker properties.

pub mod analysis;
pub mod bcs;
pub mod corpus;
pub mod error;
pub mod frontend;
pub mod metrics;
pub mod report;
pub mod scope;
pub mod sicn;
pub mod weyuker;

pub use analysis::{analyze_source, Analysis};
pub use error::AnalysisError;
pub use metrics::WeightTable;
pub use sicn::SiMode;
