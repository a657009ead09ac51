//! Weyuker property checking: program transformations, a seeded program
//! generator and the property × mode verdict matrix.

pub mod generator;
pub mod transform;
pub mod validator;

pub use generator::{generate, generate_source, GeneratorConfig};
pub use transform::{compose, permute, relocate, rename, wrap_in_loop, ComposeOptions};
pub use validator::{check_property, run_matrix, PropertyId, PropertyVerdict, Sample, Status, VerdictTable};
