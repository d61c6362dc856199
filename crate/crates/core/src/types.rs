//! Alignment result types shared by the oracle and the banded engine.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One column of an alignment.
///
/// `Deletion` consumes a reference base only, `Insertion` a query base only.
/// Discriminants are the 2-bit traceback codes; `0b11` is reserved for
/// cells that produced no operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum EditOp {
    MatchOrMismatch = 0b00,
    Deletion = 0b01,
    Insertion = 0b10,
}

/// Traceback code for masked cells.
pub const NO_OP_CODE: u8 = 0b11;

impl EditOp {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code & 0b11 {
            0b00 => Some(EditOp::MatchOrMismatch),
            0b01 => Some(EditOp::Deletion),
            0b10 => Some(EditOp::Insertion),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EditOp::MatchOrMismatch => 'M',
            EditOp::Deletion => 'D',
            EditOp::Insertion => 'I',
        }
    }

    pub fn consumes_reference(self) -> bool {
        !matches!(self, EditOp::Insertion)
    }

    pub fn consumes_query(self) -> bool {
        !matches!(self, EditOp::Deletion)
    }
}

/// Run-length encoded edit path, ordered from the start of both sequences.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Cigar(Vec<(EditOp, u32)>);

impl Cigar {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn push(&mut self, op: EditOp, len: u32) {
        if len == 0 {
            return;
        }
        match self.0.last_mut() {
            Some((last, n)) if *last == op => *n += len,
            _ => self.0.push((op, len)),
        }
    }

    /// Builds a cigar from ops collected end-to-start, as a traceback walk emits them.
    pub fn from_reversed_ops(ops: impl IntoIterator<Item = EditOp>) -> Self {
        let mut rev = Cigar::new();
        for op in ops {
            rev.push(op, 1);
        }
        rev.0.reverse();
        rev
    }

    pub fn runs(&self) -> &[(EditOp, u32)] {
        &self.0
    }

    pub fn ops(&self) -> impl Iterator<Item = EditOp> + '_ {
        self.0
            .iter()
            .flat_map(|&(op, n)| std::iter::repeat_n(op, n as usize))
    }

    pub fn reference_len(&self) -> usize {
        self.0
            .iter()
            .filter(|(op, _)| op.consumes_reference())
            .map(|&(_, n)| n as usize)
            .sum()
    }

    pub fn query_len(&self) -> usize {
        self.0
            .iter()
            .filter(|(op, _)| op.consumes_query())
            .map(|&(_, n)| n as usize)
            .sum()
    }

    /// Total number of alignment columns.
    pub fn columns(&self) -> usize {
        self.0.iter().map(|&(_, n)| n as usize).sum()
    }
}

impl fmt::Display for Cigar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (op, n) in &self.0 {
            write!(f, "{}{}", n, op.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Cigar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut cigar = Cigar::new();
        let mut num = String::new();
        for ch in s.chars() {
            if ch.is_ascii_digit() {
                num.push(ch);
                continue;
            }
            let op = match ch {
                'M' => EditOp::MatchOrMismatch,
                'D' => EditOp::Deletion,
                'I' => EditOp::Insertion,
                other => return Err(format!("unknown cigar op {other:?}")),
            };
            let n: u32 = num.parse().map_err(|_| format!("missing run length before {ch}"))?;
            cigar.push(op, n);
            num.clear();
        }
        if !num.is_empty() {
            return Err("trailing run length".into());
        }
        Ok(cigar)
    }
}

/// Wavefront movement between consecutive anti-diagonals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Advance along the query axis.
    Right,
    /// Advance along the reference axis.
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentOutcome {
    pub score: i64,
    pub cigar: Cigar,
    pub band_used: usize,
    pub direction_log: Vec<Direction>,
    pub cells_computed: usize,
}
