//! Numerical verification of Hermite–Hadamard and Jensen-type operator
//! inequalities: scalar refinements, their lifts to positive unital maps,
//! Kantorovich-type power bounds and Furuta-type ordered-pair bounds.

pub mod chains;
pub mod error;
pub mod funcat;
pub mod optimize;
pub mod posmap;
pub mod quad;
pub mod sample;
pub mod sweep;
pub mod symmat;

pub use chains::{AlphaChoice, ChainParams, ChainReport, Constants, PowerMode};
pub use error::{Error, Result};
pub use funcat::{FunctionDescriptor, FunctionKind, Interval, PowerTransform};
pub use posmap::MapDescriptor;
pub use quad::QuadratureConfig;
pub use symmat::{EigenDecomp, LoewnerVerdict, SymMatrix};
