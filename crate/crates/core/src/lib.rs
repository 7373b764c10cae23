//! Exact computations with pure Anderson motives over finite fields,
//! with coefficient ring A = F_q[t].

pub mod algebra;
pub mod error;
pub mod factor_a;
pub mod ffactor;
pub mod field;
pub mod format;
pub mod linalg;
pub mod local;
pub mod morphisms;
pub mod motive;
pub mod newton;
pub mod poly;
pub mod ratfn;
pub mod ring;
pub mod tmatrix;
pub mod xpoly;

pub use error::{Error, Result};
pub use field::{build_field, embed, Fe, Field};
pub use poly::TPoly;
pub use tmatrix::TMatrix;
