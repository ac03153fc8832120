//! Exact-arithmetic toolkit for two-color partition numbers and their
//! Ramanujan-type congruences.
//!
//! The crate is organized around five pieces:
//!
//! - [`series`]: truncated formal power series over arbitrary-precision
//!   integers and over residue rings, with eta-quotient-style product
//!   expansion and the signed theta series.
//! - [`partitions`]: partition counting by several independent methods
//!   (pentagonal recurrence, divisor-sum recursions, series expansion,
//!   convolution), divisor sums, and the theta-decomposition split used in
//!   the elementary mod-3 argument.
//! - [`radu_sellers`]: the finite-verification machinery for eta-quotient
//!   congruences: square-class orbits, representative matrices, the exact
//!   rational order bounds, and the hypothesis checks that make a finite
//!   coefficient scan conclusive.
//! - [`congruence`]: end-to-end verification of congruence claims on
//!   arithmetic progressions, identity checks, an empirical scanner, and
//!   machine-readable certificates.
//! - [`cli`]: the `cubic` command-line front end.
//!
//! All arithmetic is exact; there is no floating point anywhere in the
//! computation paths.

pub mod cli;
pub mod congruence;
pub mod partitions;
pub mod radu_sellers;
pub mod series;

pub use congruence::{CongruenceCertificate, CongruenceClaim, SeriesSource};
pub use partitions::{PartitionKind, PartitionTable};
pub use radu_sellers::{ExactRational, GammaMatrix, RsTuple};
pub use series::{EtaQuotientSpec, IntegerSeries, ResidueSeries, SeriesError};
