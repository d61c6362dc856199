use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid nucleotide {byte:?} at position {position}")]
    InvalidBase { byte: char, position: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid scoring scheme: {0}")]
    InvalidScheme(String),
    #[error("scheme not supported by the difference engine: {0}")]
    UnsupportedScheme(String),
    #[error("invalid band policy: {0}")]
    InvalidPolicy(String),
    #[error("cigar consumes {cigar_ref} reference / {cigar_query} query bases, sequences have {ref_len} / {query_len}")]
    CigarShapeMismatch {
        cigar_ref: usize,
        cigar_query: usize,
        ref_len: usize,
        query_len: usize,
    },
    #[error("primed value {value} at cell ({i}, {j}) outside [0, {max}]")]
    PrecisionOverflow { i: usize, j: usize, value: i64, max: i64 },
    #[error("end cell never entered the band (best edge score {best_edge_score:?})")]
    BandEscape { best_edge_score: Option<i64> },
    #[error("traceback left the recorded band at cell ({i}, {j})")]
    CorruptTraceback { i: usize, j: usize },
    #[error("genome of {genome_len} bp is shorter than requested window {window}")]
    GenomeTooShort { genome_len: usize, window: usize },
    #[error("invalid error profile: {0}")]
    InvalidProfile(String),
    #[error("unknown primitive {0:?}")]
    UnknownPrimitive(String),
    #[error("no sequence-level parallelism fits: length {length}, bandwidth {bandwidth}, {tbms} TBMs")]
    CapacityExceeded {
        length: usize,
        bandwidth: usize,
        tbms: usize,
    },
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{origin}:{line}: {message}")]
    Parse { origin: String, line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
