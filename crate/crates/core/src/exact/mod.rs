//! Exact arithmetic in a real number field `Q[θ]/(p)` and the rational
//! membership test behind the pencil-irrationality hypothesis.

mod field;
pub(crate) mod poly;
mod scalar;
mod span;

pub use field::NumberField;
pub use scalar::{rational_nth_root, scalar_arith, ArithOp, FieldScalar};
pub use span::{rational_span_witness, SpanWitness};
