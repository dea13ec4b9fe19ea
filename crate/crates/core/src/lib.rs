//! Slice Dirac analysis over the octonions.

pub mod builtins;
pub mod cauchy;
pub mod dirac;
pub mod error;
pub mod fd;
pub mod fueter;
pub mod harness;
pub mod geometry;
pub mod octonion;
pub mod poly;
pub mod quadrature;
pub mod quaternion;
pub mod scalar;
pub mod stem;

pub use error::{Error, Result};
pub use geometry::{decompose, sample_o3, BallSpec, Frame, OrthoAction, R4Point, ShellSpec};
pub use octonion::{cayley_dickson_mul, LeftMul, Octonion, QuaternionPair, StructureTable};
pub use quaternion::Quaternion;
pub use scalar::Real;
pub use stem::{check_intrinsic, represent, PolyStem, RepMatrix, SliceFunction, StemFunction};

pub type Octonion64 = Octonion<f64>;
pub type Frame64 = Frame<f64>;
pub type R4Point64 = R4Point<f64>;
pub type OrthoAction64 = OrthoAction<f64>;
pub type ShellSpec64 = ShellSpec<f64>;
