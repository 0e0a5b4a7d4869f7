//! Exact enumeration engine for Dowling lattices, partition-lattice families,
//! their Möbius functions, descent statistics and EL-labelings.

pub mod cache;
pub mod combinat;
pub mod el_shelling;
pub mod error;
pub mod exact_series;
pub mod exec;
pub mod mobius_identities;
pub mod perm_stats;
pub mod poset;
pub mod structures;
pub mod suites;

pub use error::{Error, Result};
pub use exact_series::{Rational, TruncatedSeries};
pub use poset::Poset;
