//! Per-iteration traceback records and the walk that turns them into a cigar.

use super::wavefront::{FLAG_CODE_MASK, FLAG_E_EXTEND, FLAG_F_EXTEND};
use crate::error::{Error, Result};
use crate::types::{Cigar, Direction, EditOp};

/// Flags for every band cell of every anti-diagonal, plus the band origins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracebackStore {
    width: usize,
    capacity: usize,
    origins: Vec<isize>,
    directions: Vec<Direction>,
    flags: Vec<u8>,
}

impl TracebackStore {
    pub fn new(width: usize, iterations: usize) -> Self {
        Self {
            width,
            capacity: width * iterations,
            origins: Vec::with_capacity(iterations),
            directions: Vec::with_capacity(iterations.saturating_sub(1)),
            flags: Vec::with_capacity(width * iterations),
        }
    }

    /// Appends the record for the next anti-diagonal. `direction` is the move
    /// that produced it and is `None` only for the first record.
    pub fn push(&mut self, i0: isize, direction: Option<Direction>, flags: &[u8]) {
        assert_eq!(flags.len(), self.width);
        assert!(self.flags.len() + self.width <= self.capacity, "traceback store full");
        assert_eq!(direction.is_some(), !self.origins.is_empty());
        self.origins.push(i0);
        self.directions.extend(direction);
        self.flags.extend_from_slice(flags);
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn capacity(&self) -> usize {
        self.capacity
    }
    pub fn records(&self) -> usize {
        self.origins.len()
    }
    pub fn stored_cells(&self) -> usize {
        self.flags.len()
    }
    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Two-bit codes of record `d`.
    pub fn codes(&self, d: usize) -> impl Iterator<Item = u8> + '_ {
        self.flags[d * self.width..(d + 1) * self.width].iter().map(|f| f & FLAG_CODE_MASK)
    }

    fn flag(&self, i: usize, j: usize) -> Result<u8> {
        let d = i + j;
        let corrupt = Error::CorruptTraceback { i, j };
        let i0 = *self.origins.get(d).ok_or(corrupt.clone())?;
        let k = i as isize - i0;
        if k < 0 || k as usize >= self.width {
            return Err(corrupt);
        }
        Ok(self.flags[d * self.width + k as usize])
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    H,
    E,
    F,
}

/// Walks from `(m, n)` back to `(0, 0)`.
pub fn traceback(store: &TracebackStore, m: usize, n: usize) -> Result<Cigar> {
    let (mut i, mut j) = (m, n);
    let mut state = State::H;
    let mut ops = Vec::with_capacity(m + n);
    while i > 0 || j > 0 {
        match state {
            State::H => {
                let flag = store.flag(i, j)?;
                match EditOp::from_code(flag & FLAG_CODE_MASK) {
                    Some(EditOp::MatchOrMismatch) if i > 0 && j > 0 => {
                        ops.push(EditOp::MatchOrMismatch);
                        i -= 1;
                        j -= 1;
                    }
                    Some(EditOp::Deletion) if i > 0 => state = State::E,
                    Some(EditOp::Insertion) if j > 0 => state = State::F,
                    _ => return Err(Error::CorruptTraceback { i, j }),
                }
            }
            State::E => {
                ops.push(EditOp::Deletion);
                i -= 1;
                state = if i > 0 && store.flag(i, j)? & FLAG_E_EXTEND != 0 { State::E } else { State::H };
            }
            State::F => {
                ops.push(EditOp::Insertion);
                j -= 1;
                state = if j > 0 && store.flag(i, j)? & FLAG_F_EXTEND != 0 { State::F } else { State::H };
            }
        }
    }
    Ok(Cigar::from_reversed_ops(ops))
}
