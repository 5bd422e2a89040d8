//! Secure nested (coset) codes for type II wiretap channels.
//!
//! The crate is organized bottom-up:
//!
//! * [`bitlinalg`]: dense GF(2) matrices (rank, RREF, nullspace, right inverse).
//! * [`codes`]: linear codes, LDPC ensembles, nested pairs, alist files.
//! * [`channels`]: seeded BEC / BSC / BI-AWGN simulators and the degraded
//!   constructions that embed an erasure channel in the AWGN and BSC channels.
//! * [`capacity`]: Q function, entropies, BI-AWGN capacity, secrecy rates and
//!   rate-equivocation regions.
//! * [`thresholds`]: BEC density evolution and empirical BP thresholds.
//! * [`secrecy`]: coset encoder/decoder and equivocation estimators.

pub mod bitlinalg;
pub mod capacity;
pub mod channels;
pub mod codes;
mod error;
pub mod secrecy;
pub mod seeding;
pub mod stats;
pub mod thresholds;

pub use error::{Error, Result};
