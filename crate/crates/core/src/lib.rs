//! Exact k-th roots of matrices over local fields.
//!
//! Scalars live in `Q_p` ([`padic`]), in `F_q((t))` ([`laurent`]) or in `Q`.
//! Matrices over any of them are wrapped in [`local::LocalMatrix`]; the
//! decision procedures are in [`lab`], the compact group family in
//! [`cartan`] and the multi-prime analysis in [`global`].

pub mod arith;
pub mod cartan;
pub mod error;
pub mod gf;
pub mod global;
pub mod lab;
pub mod laurent;
pub mod local;
pub mod matrix;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod polyroots;
pub mod ring;

pub use error::{Error, Result};
