//! Pairs `(Q, L)` of a nondegenerate quadratic form and a nonzero linear form.
//!
//! The crate provides exact number-field arithmetic, canonical forms of pairs
//! with witness transformations, decision procedures for the density
//! hypotheses, reduction to lower dimension along rational hyperplanes, and a
//! primitive-vector search engine for density and gap experiments.

pub mod canonical;
pub mod catalog;
pub mod conditions;
pub mod error;
pub mod exact;
pub mod forms;
pub mod linalg;
pub mod reduction;
pub mod search;

pub use error::{Error, Result};
