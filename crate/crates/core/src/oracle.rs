//! Unbanded full-precision reference aligners.
//!
//! Rows index the reference (`i in 0..=m`), columns the query (`j in 0..=n`).
//! A vertical step is a deletion, a horizontal step an insertion. Every
//! approximate path in the crate is checked against these routines.

use crate::grid::Grid;
use crate::scoring::ScoringScheme;
use crate::seq::NucleotideSequence;
use crate::types::{AlignmentOutcome, Cigar, Direction, EditOp};

/// Stand-in for minus infinity; far enough from `i64::MIN` that subtracting penalties cannot wrap.
pub const NEG_INF: i64 = i64::MIN / 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpMatrices {
    /// Total score.
    pub h: Grid<i64>,
    /// Best score ending in a deletion (vertical gap).
    pub e: Grid<i64>,
    /// Best score ending in an insertion (horizontal gap).
    pub f: Grid<i64>,
}

/// `H` on row 0 / column 0 of a global alignment.
#[inline]
pub fn boundary_score(scheme: &ScoringScheme, len: usize) -> i64 {
    -scheme.gap_cost(len)
}

pub fn full_dp_matrices(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
) -> DpMatrices {
    let (r, q) = (reference.codes(), query.codes());
    let (m, n) = (r.len(), q.len());
    let oe = (scheme.gap_open() + scheme.gap_extend()) as i64;
    let e_ext = scheme.gap_extend() as i64;
    let mut h = Grid::new(m + 1, n + 1, 0i64);
    let mut e = Grid::new(m + 1, n + 1, NEG_INF);
    let mut f = Grid::new(m + 1, n + 1, NEG_INF);
    for i in 1..=m {
        h[(i, 0)] = boundary_score(scheme, i);
    }
    for j in 1..=n {
        h[(0, j)] = boundary_score(scheme, j);
    }
    for i in 1..=m {
        for j in 1..=n {
            let ev = (h[(i - 1, j)] - oe).max(e[(i - 1, j)] - e_ext);
            let fv = (h[(i, j - 1)] - oe).max(f[(i, j - 1)] - e_ext);
            let diag = h[(i - 1, j - 1)] + scheme.substitution(r[i - 1], q[j - 1]);
            e[(i, j)] = ev;
            f[(i, j)] = fv;
            h[(i, j)] = diag.max(ev).max(fv);
        }
    }
    DpMatrices { h, e, f }
}

/// Optimal global score in `O(n)` memory.
pub fn full_dp_score(reference: &NucleotideSequence, query: &NucleotideSequence, scheme: &ScoringScheme) -> i64 {
    let (r, q) = (reference.codes(), query.codes());
    let n = q.len();
    let oe = (scheme.gap_open() + scheme.gap_extend()) as i64;
    let e_ext = scheme.gap_extend() as i64;
    let mut h: Vec<i64> = (0..=n).map(|j| boundary_score(scheme, j)).collect();
    let mut e = vec![NEG_INF; n + 1];
    for (i, &rb) in r.iter().enumerate() {
        let mut diag = h[0];
        h[0] = boundary_score(scheme, i + 1);
        let mut f = NEG_INF;
        for j in 1..=n {
            let ev = (h[j] - oe).max(e[j] - e_ext);
            f = (h[j - 1] - oe).max(f - e_ext);
            let best = (diag + scheme.substitution(rb, q[j - 1])).max(ev).max(f);
            diag = h[j];
            e[j] = ev;
            h[j] = best;
        }
    }
    h[n]
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    H,
    E,
    F,
}

/// Walks the matrices from `(m, n)` with priority match > deletion > insertion;
/// gap states prefer opening over extending on ties.
fn traceback(mats: &DpMatrices, reference: &[u8], query: &[u8], scheme: &ScoringScheme) -> Cigar {
    let (mut i, mut j) = (reference.len(), query.len());
    let oe = (scheme.gap_open() + scheme.gap_extend()) as i64;
    let e_ext = scheme.gap_extend() as i64;
    let mut state = State::H;
    let mut ops = Vec::with_capacity(i + j);
    loop {
        if i == 0 {
            ops.extend(std::iter::repeat_n(EditOp::Insertion, j));
            break;
        }
        if j == 0 {
            ops.extend(std::iter::repeat_n(EditOp::Deletion, i));
            break;
        }
        match state {
            State::H => {
                let h = mats.h[(i, j)];
                if h == mats.h[(i - 1, j - 1)] + scheme.substitution(reference[i - 1], query[j - 1]) {
                    ops.push(EditOp::MatchOrMismatch);
                    i -= 1;
                    j -= 1;
                } else if h == mats.e[(i, j)] {
                    state = State::E;
                } else {
                    debug_assert_eq!(h, mats.f[(i, j)]);
                    state = State::F;
                }
            }
            State::E => {
                ops.push(EditOp::Deletion);
                let extends = mats.e[(i - 1, j)] - e_ext > mats.h[(i - 1, j)] - oe;
                i -= 1;
                state = if extends { State::E } else { State::H };
            }
            State::F => {
                ops.push(EditOp::Insertion);
                let extends = mats.f[(i, j - 1)] - e_ext > mats.h[(i, j - 1)] - oe;
                j -= 1;
                state = if extends { State::F } else { State::H };
            }
        }
    }
    Cigar::from_reversed_ops(ops)
}

pub fn full_dp_align(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
) -> AlignmentOutcome {
    let mats = full_dp_matrices(reference, query, scheme);
    let (m, n) = (reference.len(), query.len());
    let cigar = traceback(&mats, reference.codes(), query.codes(), scheme);
    AlignmentOutcome {
        score: mats.h[(m, n)],
        cigar,
        band_used: m.min(n) + 1,
        direction_log: Vec::<Direction>::new(),
        cells_computed: m * n,
    }
}

/// Levenshtein distance by unit-cost DP, with a traceback using the same priority.
pub fn edit_distance_full(reference: &NucleotideSequence, query: &NucleotideSequence) -> (u64, Cigar) {
    let (r, q) = (reference.codes(), query.codes());
    let (m, n) = (r.len(), q.len());
    let mut d = Grid::new(m + 1, n + 1, 0u64);
    for i in 0..=m {
        d[(i, 0)] = i as u64;
    }
    for j in 0..=n {
        d[(0, j)] = j as u64;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub = d[(i - 1, j - 1)] + u64::from(r[i - 1] != q[j - 1]);
            d[(i, j)] = sub.min(d[(i - 1, j)] + 1).min(d[(i, j - 1)] + 1);
        }
    }
    let (mut i, mut j) = (m, n);
    let mut ops = Vec::with_capacity(m + n);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && d[(i, j)] == d[(i - 1, j - 1)] + u64::from(r[i - 1] != q[j - 1]) {
            ops.push(EditOp::MatchOrMismatch);
            i -= 1;
            j -= 1;
        } else if i > 0 && d[(i, j)] == d[(i - 1, j)] + 1 {
            ops.push(EditOp::Deletion);
            i -= 1;
        } else {
            ops.push(EditOp::Insertion);
            j -= 1;
        }
    }
    (d[(m, n)], Cigar::from_reversed_ops(ops))
}

/// Levenshtein distance in `O(n)` memory.
pub fn edit_distance_score(reference: &NucleotideSequence, query: &NucleotideSequence) -> u64 {
    let q = query.codes();
    let mut row: Vec<u64> = (0..=q.len() as u64).collect();
    for (i, &rb) in reference.codes().iter().enumerate() {
        let mut diag = row[0];
        row[0] = i as u64 + 1;
        for j in 1..=q.len() {
            let best = (diag + u64::from(rb != q[j - 1])).min(row[j] + 1).min(row[j - 1] + 1);
            diag = row[j];
            row[j] = best;
        }
    }
    row[q.len()]
}

/// Number of substituted, inserted and deleted bases along `cigar`.
pub fn edit_count(reference: &NucleotideSequence, query: &NucleotideSequence, cigar: &Cigar) -> u64 {
    let (r, q) = (reference.codes(), query.codes());
    let (mut i, mut j, mut edits) = (0usize, 0usize, 0u64);
    for op in cigar.ops() {
        match op {
            EditOp::MatchOrMismatch => {
                edits += u64::from(r[i] != q[j]);
                i += 1;
                j += 1;
            }
            EditOp::Deletion => {
                edits += 1;
                i += 1;
            }
            EditOp::Insertion => {
                edits += 1;
                j += 1;
            }
        }
    }
    edits
}
