//! Cubic rings, binary cubic forms and the class-number identities that tie
//! cubic rings to 3-torsion in quadratic Picard groups.

pub mod arith;
pub mod bridge;
pub mod counting;
pub mod error;
pub mod forms;
pub mod quad;
pub mod report;
pub mod rings;

pub use arith::Rational;
pub use error::{Error, Result};
pub use forms::{BinaryCubicForm, Hessian, UnimodularMatrix};
