//! Boolean matrix factorization toolkit.
//!
//! Factors a Boolean matrix `I` (n × m) into Boolean factors `A` (n × k) and
//! `B` (k × m) such that `I ≈ A ∘ B`, where `∘` is the Boolean (max–min)
//! matrix product. The main algorithm greedily picks the densest remaining
//! row or column fiber, extends it to a precision-thresholded rectangle, and
//! keeps the top-k rectangles by gain, replacing weak ones when the search
//! continues past rank k.
//!
//! Modules:
//! - [`boolmat`] — sparse Boolean matrices and the bulk operations everything
//!   else is built on
//! - [`topfiberm`] — the greedy top-fiber algorithm with backward correction
//! - [`baselines`] — the NaiveCol greedy column baseline
//! - [`harness`] — coverage metric, DBP/AFP experiment drivers, reports
//! - [`rdf`] — N-Triples ingestion into per-predicate Boolean slices
//! - [`io`] — Matrix Market and dense CSV readers/writers

pub mod baselines;
pub mod boolmat;
mod error;
pub mod harness;
pub mod io;
pub mod rdf;
pub mod topfiberm;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
