//! One anti-diagonal band of the primed recurrence and the rule that moves it.
//!
//! Band cell `k` on anti-diagonal `d` sits at grid cell `(i0 + k, j0 - k)` with
//! `i0 + j0 = d`. Moving Right increments `j0`, moving Down increments `i0`.

use crate::diffdp::{check_primed_scheme, open_extend, primed_boundary, shifted_substitution};
use crate::error::{Error, Result};
use crate::oracle::boundary_score;
use crate::scoring::ScoringScheme;
use crate::types::{Direction, EditOp, NO_OP_CODE};

/// Window entry for a cell whose reference or query base lies outside the sequence.
pub const NO_BASE: u8 = 0xFF;

/// Bit set in a traceback flag when the deletion gap through the cell below extends.
pub const FLAG_E_EXTEND: u8 = 0b0100;
/// Bit set in a traceback flag when the insertion gap through the cell to the right extends.
pub const FLAG_F_EXTEND: u8 = 0b1000;
pub const FLAG_CODE_MASK: u8 = 0b0011;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub i0: isize,
    pub j0: isize,
    pub a: Vec<u8>,
    pub dh: Vec<u8>,
    pub dv: Vec<u8>,
    pub de: Vec<u8>,
    pub df: Vec<u8>,
    pub valid: Vec<bool>,
    /// Absolute score of each valid cell.
    pub h: Vec<i64>,
    /// Traceback code in the low two bits plus the two gap-extension bits.
    pub flags: Vec<u8>,
}

impl Band {
    fn masked(width: usize, i0: isize, j0: isize) -> Self {
        Self {
            i0,
            j0,
            a: vec![0; width],
            dh: vec![0; width],
            dv: vec![0; width],
            de: vec![0; width],
            df: vec![0; width],
            valid: vec![false; width],
            h: vec![0; width],
            flags: vec![NO_OP_CODE; width],
        }
    }

    fn reset(&mut self, i0: isize, j0: isize) {
        self.i0 = i0;
        self.j0 = j0;
        self.valid.fill(false);
        self.flags.fill(NO_OP_CODE);
    }

    /// Band index of grid row `i`, if that cell is valid on this band.
    #[inline]
    fn slot(&self, i: isize) -> Option<usize> {
        let k = i - self.i0;
        (k >= 0 && (k as usize) < self.valid.len() && self.valid[k as usize]).then_some(k as usize)
    }

    pub fn width(&self) -> usize {
        self.valid.len()
    }

    pub fn diagonal(&self) -> isize {
        self.i0 + self.j0
    }
}

/// Rules consulted by [`decide_direction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionRule {
    /// Follow the larger edge score; otherwise track the main diagonal.
    pub adaptive: bool,
    /// Choice when both edge scores are equal.
    pub tie: Direction,
    /// Never pick a move that leaves fewer band cells inside the matrix than the alternative.
    pub coverage_guard: bool,
}

impl Default for DirectionRule {
    fn default() -> Self {
        Self {
            adaptive: true,
            tie: Direction::Down,
            coverage_guard: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WavefrontState {
    m: usize,
    n: usize,
    cur: Band,
    prev: Band,
    prev2: Band,
    direction_log: Vec<Direction>,
    max_value: i64,
}

impl WavefrontState {
    /// Band centred on `(0, 0)` at anti-diagonal 0.
    pub fn new(m: usize, n: usize, width: usize, scheme: &ScoringScheme) -> Result<Self> {
        check_primed_scheme(scheme)?;
        assert!(width >= 1, "band width must be positive");
        let half = ((width - 1) / 2) as isize;
        let mut cur = Band::masked(width, -half, half);
        let k = half as usize;
        cur.valid[k] = true;
        cur.h[k] = 0;
        Ok(Self {
            m,
            n,
            prev: Band::masked(width, -half - 1, half),
            prev2: Band::masked(width, -half - 2, half),
            cur,
            direction_log: Vec::new(),
            max_value: scheme.primed_max() as i64,
        })
    }

    pub fn band(&self) -> &Band {
        &self.cur
    }
    pub fn width(&self) -> usize {
        self.cur.width()
    }
    pub fn iteration(&self) -> usize {
        self.cur.diagonal() as usize
    }
    pub fn origin(&self) -> (isize, isize) {
        (self.cur.i0, self.cur.j0)
    }
    pub fn direction_log(&self) -> &[Direction] {
        &self.direction_log
    }
    pub fn into_direction_log(self) -> Vec<Direction> {
        self.direction_log
    }

    pub fn in_grid(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && i as usize <= self.m && j as usize <= self.n
    }

    /// Absolute scores at the rightmost (`k = 0`) and leftmost (`k = B-1`) cells.
    pub fn h_edges(&self) -> (Option<i64>, Option<i64>) {
        let last = self.width() - 1;
        let edge = |k: usize| self.cur.valid[k].then(|| self.cur.h[k]);
        (edge(0), edge(last))
    }

    /// Score of grid cell `(i, j)` if it lies on the current band.
    pub fn score_at(&self, i: usize, j: usize) -> Option<i64> {
        if (i + j) as isize != self.cur.diagonal() {
            return None;
        }
        self.cur.slot(i as isize).map(|k| self.cur.h[k])
    }

    pub fn best_score(&self) -> Option<i64> {
        (0..self.width()).filter(|&k| self.cur.valid[k]).map(|k| self.cur.h[k]).max()
    }

    /// Number of band cells inside the matrix on the current anti-diagonal.
    pub fn in_grid_cells(&self) -> usize {
        let d = self.cur.diagonal();
        let lo = (d - self.n as isize).max(0).max(self.cur.i0);
        let hi = d.min(self.m as isize).min(self.cur.i0 + self.width() as isize - 1);
        (hi - lo + 1).max(0) as usize
    }

    /// Reference and query bases under the band after moving in `direction`.
    pub fn windows(&self, direction: Direction, reference: &[u8], query: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let (i0, j0) = next_origin(self.cur.i0, self.cur.j0, direction);
        let base = |s: &[u8], pos: isize| {
            if pos >= 1 && pos as usize <= s.len() { s[pos as usize - 1] } else { NO_BASE }
        };
        let w = self.width() as isize;
        (
            (0..w).map(|k| base(reference, i0 + k)).collect(),
            (0..w).map(|k| base(query, j0 - k)).collect(),
        )
    }

    /// Advances the band one anti-diagonal and evaluates every cell on it.
    pub fn step(&mut self, direction: Direction, ref_window: &[u8], query_window: &[u8], scheme: &ScoringScheme) -> Result<()> {
        let width = self.width();
        debug_assert_eq!(ref_window.len(), width);
        debug_assert_eq!(query_window.len(), width);
        let (i0, j0) = next_origin(self.cur.i0, self.cur.j0, direction);
        std::mem::swap(&mut self.prev2, &mut self.prev);
        std::mem::swap(&mut self.prev, &mut self.cur);
        self.cur.reset(i0, j0);
        self.direction_log.push(direction);

        let open = scheme.gap_open() as i64;
        let oe = open_extend(scheme);
        for k in 0..width {
            let (i, j) = (i0 + k as isize, j0 - k as isize);
            if !self.in_grid(i, j) {
                continue;
            }
            let c = &mut self.cur;
            if i == 0 && j == 0 {
                c.valid[k] = true;
                c.h[k] = 0;
                continue;
            }
            if i == 0 {
                let v = primed_boundary(scheme, j as usize) as u8;
                (c.a[k], c.dh[k], c.dv[k], c.de[k], c.df[k]) = (0, 0, v, v, 0);
                c.h[k] = boundary_score(scheme, j as usize);
                c.flags[k] = EditOp::Insertion.code();
                c.valid[k] = true;
                continue;
            }
            if j == 0 {
                let v = primed_boundary(scheme, i as usize) as u8;
                (c.a[k], c.dh[k], c.dv[k], c.de[k], c.df[k]) = (0, v, 0, 0, v);
                c.h[k] = boundary_score(scheme, i as usize);
                c.flags[k] = EditOp::Deletion.code();
                c.valid[k] = true;
                continue;
            }
            let up = self.prev.slot(i - 1);
            let left = self.prev.slot(i);
            let diag = self.prev2.slot(i - 1).is_some();
            if up.is_none() && left.is_none() && !diag {
                continue;
            }
            let p = &self.prev;
            // Step 1: shifted substitution from the two bases under the cell.
            let s = diag.then(|| shifted_substitution(scheme, ref_window[k], query_window[k]));
            let e_cand = up.map(|u| p.de[u] as i64);
            let f_cand = left.map(|l| p.df[l] as i64);
            // Step 2: A' as the max over the present candidates.
            let a = [s, e_cand, f_cand].into_iter().flatten().max().expect("at least one neighbour");
            // Step 3/4: fan out A' and update the four differences. A missing
            // neighbour is replaced by the value that makes its difference zero.
            let dv_up = up.map_or(a, |u| p.dv[u] as i64);
            let dh_left = left.map_or(a, |l| p.dh[l] as i64);
            let dh = a - dv_up;
            let dv = a - dh_left;
            let de = a.max(e_cand.map_or(i64::MIN / 4, |e| e + open)) - dh_left;
            let df = a.max(f_cand.map_or(i64::MIN / 4, |f| f + open)) - dv_up;
            // Step 5: absolute score from a present neighbour.
            let h = match (left, up) {
                (Some(l), _) => p.h[l] + dv - oe,
                (None, Some(u)) => p.h[u] + dh - oe,
                (None, None) => self.prev2.h[self.prev2.slot(i - 1).unwrap()] + a - 2 * oe,
            };
            debug_assert!(up.is_none() || h == p.h[up.unwrap()] + dh - oe);

            let code = if s == Some(a) {
                EditOp::MatchOrMismatch
            } else if e_cand == Some(a) {
                EditOp::Deletion
            } else {
                EditOp::Insertion
            };
            let mut flag = code.code();
            if e_cand.is_some_and(|e| e + open > a) {
                flag |= FLAG_E_EXTEND;
            }
            if f_cand.is_some_and(|f| f + open > a) {
                flag |= FLAG_F_EXTEND;
            }

            let max = self.max_value;
            let fit = |value: i64| -> Result<u8> {
                if (0..=max).contains(&value) {
                    Ok(value as u8)
                } else {
                    Err(Error::PrecisionOverflow { i: i as usize, j: j as usize, value, max })
                }
            };
            let c = &mut self.cur;
            c.a[k] = fit(a)?;
            c.dh[k] = fit(dh)?;
            c.dv[k] = fit(dv)?;
            c.de[k] = fit(de)?;
            c.df[k] = fit(df)?;
            c.h[k] = h;
            c.flags[k] = flag;
            c.valid[k] = true;
        }
        Ok(())
    }
}

#[inline]
pub fn next_origin(i0: isize, j0: isize, direction: Direction) -> (isize, isize) {
    match direction {
        Direction::Right => (i0, j0 + 1),
        Direction::Down => (i0 + 1, j0),
    }
}

/// Picks the move from the current anti-diagonal to the next.
pub fn decide_direction(state: &WavefrontState, rule: &DirectionRule) -> Direction {
    if rule.coverage_guard {
        let right = coverage_after(state, Direction::Right);
        let down = coverage_after(state, Direction::Down);
        if right != down {
            return if right > down { Direction::Right } else { Direction::Down };
        }
    }
    if rule.adaptive {
        match state.h_edges() {
            (None, None) => {}
            (Some(_), None) => return Direction::Right,
            (None, Some(_)) => return Direction::Down,
            (Some(r), Some(l)) if r == l => return rule.tie,
            (Some(r), Some(l)) => return if r > l { Direction::Right } else { Direction::Down },
        }
    }
    main_diagonal_schedule(state)
}

/// Keeps the band centre on `i == j`.
fn main_diagonal_schedule(state: &WavefrontState) -> Direction {
    let half = ((state.width() - 1) / 2) as isize;
    let (i0, j0) = state.origin();
    if i0 + half < j0 - half { Direction::Down } else { Direction::Right }
}

fn coverage_after(state: &WavefrontState, direction: Direction) -> isize {
    let (i0, j0) = next_origin(state.cur.i0, state.cur.j0, direction);
    let d = i0 + j0;
    let lo = (d - state.n as isize).max(0).max(i0);
    let hi = d.min(state.m as isize).min(i0 + state.width() as isize - 1);
    (hi - lo + 1).max(0)
}
