//! Library for 2-connected plane triangulations whose vertices all have
//! degree 3 or 6.
//!
//! Every such graph splits into three edge classes that cycle 0, 1, 2
//! counter-clockwise around each vertex. Each class, drawn on its own, is two
//! paths of equal length plus a stack of concentric cycles, and the whole map
//! is captured by an integer triple per class. This crate measures those
//! triples by direct graph walks, reproduces them by exact integer
//! arithmetic, constructs the layered drawing for any admissible triple, and
//! produces certified spanning partitions (Hamilton-bond end-trees, even
//! caterpillars, induced paths).

pub mod builder;
pub mod indexcalc;
pub mod planemap;
pub mod spanning;
pub mod trifactor;

pub use builder::{build, LayeredDrawing};
pub use indexcalc::{IndexVector, Orbit};
pub use planemap::{parse_rotation_system, RotationSystem, ValidationReport};
pub use trifactor::{factorize, ClassLabel, Factorization};
