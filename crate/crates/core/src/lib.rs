//! Exact computations with Weyl modules in positive characteristic: PBW and
//! induced PBW filtrations, essential monomial bases, and the finite checks
//! behind a Frobenius-splitting criterion for flag varieties.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod cache;
pub mod charzero;
pub mod criterion;
pub mod error;
pub mod field;
pub mod hnf;
pub mod linalg;
pub mod module;
pub mod multiindex;
pub mod pbw;
pub mod report;
pub mod rootsys;
pub mod tensorfilt;
pub mod weylmod;

pub use error::{Error, Result};
