//! Numerical Orlicz-space harmonic analysis on the real line and the upper
//! half-plane.

pub mod conv;
pub mod error;
pub mod extension;
pub mod grid;
pub mod growth;
pub mod hilbert;
pub mod maximal;
pub mod norms;
pub mod quad;
pub mod tolerances;
pub mod verify;

pub use error::{OrlabError, Result};
pub use grid::{DecayClass, GridFunction, GridSpec, FUNCTION_HELP};
pub use growth::GrowthFunction;

/// Guide chapters, compiled as doc-tests.
pub mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/growth.md")]
    pub mod growth {}
    #[doc = include_str!("../../../book/src/norms.md")]
    pub mod norms {}
    #[doc = include_str!("../../../book/src/extension.md")]
    pub mod extension {}
    #[doc = include_str!("../../../book/src/hilbert.md")]
    pub mod hilbert {}
    #[doc = include_str!("../../../book/src/maximal.md")]
    pub mod maximal {}
    #[doc = include_str!("../../../book/src/verify.md")]
    pub mod verify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
