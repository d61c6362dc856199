//! Adaptive banded aligner over the primed difference recurrence.

mod traceback;
mod wavefront;

pub use traceback::{traceback, TracebackStore};
pub use wavefront::{
    decide_direction, next_origin, Band, DirectionRule, WavefrontState, FLAG_CODE_MASK, FLAG_E_EXTEND, FLAG_F_EXTEND,
    NO_BASE,
};

use crate::band::BandPolicy;
use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;
use crate::seq::NucleotideSequence;
use crate::types::{AlignmentOutcome, Cigar, Direction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandedConfig {
    pub direction: DirectionRule,
    pub traceback: bool,
}

impl Default for BandedConfig {
    fn default() -> Self {
        Self {
            direction: DirectionRule::default(),
            traceback: true,
        }
    }
}

impl BandedConfig {
    pub fn with_adaptive(mut self, adaptive: bool) -> Self {
        self.direction.adaptive = adaptive;
        self
    }
    pub fn with_traceback(mut self, traceback: bool) -> Self {
        self.traceback = traceback;
        self
    }
}

/// Result of one banded run; `cigar` is absent when traceback was disabled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandedRun {
    pub score: i64,
    pub cigar: Option<Cigar>,
    pub band_used: usize,
    pub direction_log: Vec<Direction>,
    pub cells_computed: usize,
    /// Largest primed value seen in any band cell.
    pub max_primed_value: u8,
    /// Band cells written to the traceback store; zero when traceback is disabled.
    pub traceback_cells: usize,
}

impl BandedRun {
    fn into_outcome(self) -> AlignmentOutcome {
        AlignmentOutcome {
            score: self.score,
            cigar: self.cigar.expect("traceback enabled"),
            band_used: self.band_used,
            direction_log: self.direction_log,
            cells_computed: self.cells_computed,
        }
    }
}

/// Runs the banded engine with an explicit band width.
pub fn run_banded(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
    width: usize,
    config: &BandedConfig,
) -> Result<BandedRun> {
    let (r, q) = (reference.codes(), query.codes());
    let (m, n) = (r.len(), q.len());
    let mut state = WavefrontState::new(m, n, width, scheme)?;
    let mut store = config.traceback.then(|| TracebackStore::new(width, m + n + 1));
    if let Some(s) = store.as_mut() {
        s.push(state.origin().0, None, &state.band().flags);
    }
    let mut cells = 0usize;
    let mut max_primed = 0u8;
    let mut last_best = None;
    for _ in 1..=m + n {
        let direction = decide_direction(&state, &config.direction);
        let (rw, qw) = state.windows(direction, r, q);
        state.step(direction, &rw, &qw, scheme)?;
        cells += state.in_grid_cells();
        let band = state.band();
        for k in (0..width).filter(|&k| band.valid[k]) {
            max_primed = max_primed.max(band.a[k]).max(band.dh[k]).max(band.dv[k]).max(band.de[k]).max(band.df[k]);
        }
        if let Some(s) = store.as_mut() {
            s.push(band.i0, Some(direction), &band.flags);
        }
        last_best = state.best_score().or(last_best);
    }
    let score = state.score_at(m, n).ok_or(Error::BandEscape {
        best_edge_score: last_best,
    })?;
    let traceback_cells = store.as_ref().map_or(0, TracebackStore::stored_cells);
    let cigar = store.map(|s| traceback(&s, m, n)).transpose()?;
    Ok(BandedRun {
        score,
        cigar,
        band_used: width,
        direction_log: state.into_direction_log(),
        cells_computed: cells,
        max_primed_value: max_primed,
        traceback_cells,
    })
}

pub fn banded_align_with(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
    policy: &BandPolicy,
    config: &BandedConfig,
) -> Result<BandedRun> {
    let width = policy.effective_bandwidth(reference.len(), query.len());
    run_banded(reference, query, scheme, width, config)
}

pub fn banded_align(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
    policy: &BandPolicy,
) -> Result<AlignmentOutcome> {
    banded_align_with(reference, query, scheme, policy, &BandedConfig::default()).map(BandedRun::into_outcome)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditDistanceOutcome {
    /// Cost under the affine scheme (0, 1, 1, 1), where a gap of length g costs g + 1.
    pub affine_cost: u64,
    /// Unit-cost edit distance.
    pub levenshtein: u64,
    /// Unit-cost alignment path.
    pub cigar: Option<Cigar>,
    pub band_used: usize,
    pub cells_computed: usize,
    pub traceback_cells: usize,
}

/// Edit distance on the banded engine. The Levenshtein value comes from the
/// scheme (0, 1, 0, 1), which charges exactly one unit per gap base.
pub fn banded_edit_distance(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    policy: &BandPolicy,
    with_traceback: bool,
    config: &BandedConfig,
) -> Result<EditDistanceOutcome> {
    let affine_scheme = ScoringScheme::edit_affine();
    let affine = banded_align_with(reference, query, &affine_scheme, policy, &config.with_traceback(false))?;
    debug_assert!(u32::from(affine.max_primed_value) < 1 << affine_scheme.min_bit_width());
    let unit = banded_align_with(reference, query, &ScoringScheme::levenshtein(), policy, &config.with_traceback(with_traceback))?;
    Ok(EditDistanceOutcome {
        affine_cost: (-affine.score) as u64,
        levenshtein: (-unit.score) as u64,
        cigar: unit.cigar,
        band_used: unit.band_used,
        cells_computed: unit.cells_computed,
        traceback_cells: unit.traceback_cells,
    })
}
