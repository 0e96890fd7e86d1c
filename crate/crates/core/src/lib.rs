//! Exact-arithmetic workbench for cyclic and dihedral (co)homology of
//! presented noncommutative *-algebras and Hopf *-algebras.
//!
//! Everything is computed over the field `Q[i]` with no rounding: presented
//! algebras are normalized by confluent rewriting, Hopf structure maps are
//! evaluated symbolically, complexes are assembled as exact sparse matrices,
//! and homology dimensions come from fraction-free elimination. The built-in
//! catalog covers group algebras, quantized enveloping algebras, the quantum
//! `SU(2)` coordinate ring with its Haar state, and the Podleś spheres.

pub mod catalog;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod monomial;
pub mod ncalg;
pub mod scalar;
pub mod tensor;

pub use error::Error;
pub use monomial::{GenId, Monomial};
pub use ncalg::{AlgElement, Algebra};
pub use scalar::{QParam, Rational, Scalar};
pub use tensor::TensorElement;
