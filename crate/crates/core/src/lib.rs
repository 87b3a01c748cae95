//! Additive complexity of infinite words over integer alphabets.
//!
//! Words are lazy [`WordStream`]s; every analysis runs over a materialized
//! prefix ([`WordView`]) with exact integer and rational arithmetic.

pub mod complexity;
pub mod error;
pub mod generators;
pub mod morphism;
pub mod powers;
pub mod slope;
pub mod word;

pub use complexity::{ComplexityProfile, LatticeMap, Mode, ProfileRow};
pub use error::{Error, Result};
pub use generators::{ContinuedFraction, SeparatedIntervalSet, SpliceSchedule};
pub use morphism::{AnchorMatrix, AnchorReport, Morphism, Witness};
pub use powers::PowerWitness;
pub use slope::{ChiFactorization, DeviationStats, GreedyCuts, RationalSlope};
pub use word::{Alphabet, FiniteWord, Interval, Rational, Sum, Symbol, WordStream, WordView};
