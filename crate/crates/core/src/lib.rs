//! Banded affine-gap alignment with a difference-encoded, bounded-precision
//! recurrence, plus a read simulator and an analytical processing-in-memory
//! cost model.

pub mod band;
pub mod cli;
pub mod banded;
pub mod diffdp;
pub mod error;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod pimmodel;
pub mod readsim;
pub mod scoring;
pub mod seq;
pub mod types;

pub use band::{BandPolicy, Slope};
pub use error::{Error, Result};
pub use scoring::{score_cigar, ScoringScheme};
pub use seq::NucleotideSequence;
pub use types::{AlignmentOutcome, Cigar, Direction, EditOp};
