//! Tensor types and a generic tensor-network evaluator.
//!
//! A tensor type supplies index metadata ("0-data"), payloads ("1-data") and
//! the operations on them: tensor product, slot permutation, contraction,
//! identities. [`network`] evaluates any network of atoms for any type,
//! [`axioms`] property-tests a type against the laws that make evaluation
//! order-independent, and [`mappings`] translates between types.
//!
//! Shipped types: dense [`array`]s over any [`scalars::Semiring`],
//! [`graded`] fermionic arrays, [`pairing`] tensors and [`schur`]
//! complement tensors.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod array;
pub mod axioms;
pub mod error;
pub mod fermion;
pub mod graded;
pub mod linalg;
pub mod mappings;
pub mod network;
pub mod pairing;
pub mod scalars;
pub mod schur;
pub mod tensor;

pub use error::Error;
pub use num_complex::Complex64;
pub use tensor::{Flags, TensorType};
