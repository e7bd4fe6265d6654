//! Combinatorial analysis of singular foliations cut out by piecewise-linear
//! functions on compact polygonal surfaces.

pub mod atlas;
pub mod cellular;
pub mod complex;
pub mod decomposition;
pub mod dot;
pub mod fixtures;
pub mod foliation;
pub mod function;
pub mod generate;
pub mod io;
pub mod refine;
pub mod selftest;

pub use complex::{CellLists, ComplexError, Subsurface, SurfaceClass, SurfaceComplex};
pub use function::{PlFunction, Rational, Target, VertexKind};
