pub mod applications;
pub mod cli;
pub mod dualset;
pub mod error;
pub mod greedy;
pub mod linalg;
pub mod lowerbounds;
pub mod lowstretch;
pub mod randomized;
pub mod selection;
pub mod volume;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subset, ThinSvd};
pub use selection::SelectionResult;
