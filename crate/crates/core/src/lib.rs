//! Finite strict n-categories and the reflection of n-categories into
//! n-preorders.
//!
//! The crate covers the data model and its validator, functor search,
//! pullbacks and coproducts, the reflection itself, the two factorization
//! systems it induces, effective-descent covers, and the enriched-category
//! account of the reflection obtained by iterating one dimension at a time.
//!
//! Everything works on explicit finite tables, so every operation is a
//! decision procedure. The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

extern crate alloc;

pub mod descent;
pub mod enriched;
pub mod error;
pub mod factor;
pub mod functor;
pub mod library;
pub mod limits;
pub mod ncat;
pub mod reflect;
pub mod search;
mod validate;

pub use error::Error;
pub use functor::{FunctorError, NFunctor, RawNFunctor};
pub use ncat::{validate_ncat, CompTable, Law, NCat, NCatParts, RawNCat, ValidationError, Violation};
pub use search::{find_isomorphism, FunctorSearch, IsoWitness};
