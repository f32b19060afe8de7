//! Exact models of smooth varieties with explicit Chow rings, the free
//! bivariant theory of proper maps with smooth composites over them, its
//! quotient by blow-up relations, and the motivic Chern and Hirzebruch
//! class transformations into a cohomological target.

pub mod bivariant;
pub mod exactalg;
pub mod genus;
pub mod harness;
pub mod motivic;
pub mod report;
pub mod transforms;
pub mod varmodel;

mod error;

pub use error::Error;
pub use exactalg::{GradedClass, Rational, YPolynomial};
