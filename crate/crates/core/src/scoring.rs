//! Affine-gap scoring and independent cigar rescoring.
//!
//! Scores are maximized: a match adds `A`, a mismatch subtracts `B`, and a gap
//! of length `g` costs `o + g*e` (the first gap base pays `o + e`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::NucleotideSequence;
use crate::types::{Cigar, EditOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoringScheme {
    match_score: u32,
    mismatch_penalty: u32,
    gap_open: u32,
    gap_extend: u32,
}

impl ScoringScheme {
    pub fn new(match_score: u32, mismatch_penalty: u32, gap_open: u32, gap_extend: u32) -> Result<Self> {
        if gap_open + gap_extend == 0 {
            return Err(Error::InvalidScheme("gap_open + gap_extend must be positive".into()));
        }
        Ok(Self {
            match_score,
            mismatch_penalty,
            gap_open,
            gap_extend,
        })
    }

    /// Minimap2 defaults (A=2, B=4, o=4, e=2).
    pub fn minimap2() -> Self {
        Self::new(2, 4, 4, 2).unwrap()
    }

    /// BWA-MEM defaults (A=1, B=4, o=6, e=1).
    pub fn bwa_mem() -> Self {
        Self::new(1, 4, 6, 1).unwrap()
    }

    /// Edit-distance penalties expressed in the affine machinery (0, 1, 1, 1).
    pub fn edit_affine() -> Self {
        Self::new(0, 1, 1, 1).unwrap()
    }

    /// Unit-cost scheme (0, 1, 0, 1): every gap base costs exactly 1, so the
    /// optimal score is the negated Levenshtein distance.
    pub fn levenshtein() -> Self {
        Self::new(0, 1, 0, 1).unwrap()
    }

    pub fn match_score(&self) -> u32 {
        self.match_score
    }
    pub fn mismatch_penalty(&self) -> u32 {
        self.mismatch_penalty
    }
    pub fn gap_open(&self) -> u32 {
        self.gap_open
    }
    pub fn gap_extend(&self) -> u32 {
        self.gap_extend
    }

    /// `M`, the largest substitution magnitude.
    pub fn max_substitution(&self) -> u32 {
        self.match_score.max(self.mismatch_penalty)
    }

    /// Upper end of the shifted difference range, `M + 2o + 2e`.
    pub fn primed_max(&self) -> u32 {
        self.max_substitution() + 2 * (self.gap_open + self.gap_extend)
    }

    /// Bits needed for a value in `[0, M + 2o + 2e]`: `ceil(log2(M + 2o + 2e + 1))`.
    pub fn min_bit_width(&self) -> u32 {
        let range = self.primed_max() as u64 + 1;
        // ceil(log2(range)) for range >= 2
        64 - (range - 1).leading_zeros()
    }

    #[inline]
    pub fn substitution(&self, a: u8, b: u8) -> i64 {
        if a == b {
            self.match_score as i64
        } else {
            -(self.mismatch_penalty as i64)
        }
    }

    pub fn gap_cost(&self, len: usize) -> i64 {
        if len == 0 {
            0
        } else {
            self.gap_open as i64 + len as i64 * self.gap_extend as i64
        }
    }
}

impl Default for ScoringScheme {
    fn default() -> Self {
        Self::minimap2()
    }
}

/// Scores `cigar` against the two sequences without any DP.
pub fn score_cigar(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    cigar: &Cigar,
    scheme: &ScoringScheme,
) -> Result<i64> {
    let (cigar_ref, cigar_query) = (cigar.reference_len(), cigar.query_len());
    if cigar_ref != reference.len() || cigar_query != query.len() {
        return Err(Error::CigarShapeMismatch {
            cigar_ref,
            cigar_query,
            ref_len: reference.len(),
            query_len: query.len(),
        });
    }
    let (r, q) = (reference.codes(), query.codes());
    let (mut i, mut j) = (0usize, 0usize);
    let mut score = 0i64;
    for &(op, n) in cigar.runs() {
        let n = n as usize;
        match op {
            EditOp::MatchOrMismatch => {
                score += (0..n).map(|k| scheme.substitution(r[i + k], q[j + k])).sum::<i64>();
                i += n;
                j += n;
            }
            EditOp::Deletion => {
                score -= scheme.gap_cost(n);
                i += n;
            }
            EditOp::Insertion => {
                score -= scheme.gap_cost(n);
                j += n;
            }
        }
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> NucleotideSequence {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_free_gaps() {
        assert!(ScoringScheme::new(1, 1, 0, 0).is_err());
        assert!(ScoringScheme::new(0, 0, 1, 0).is_ok());
    }

    #[test]
    fn bit_widths() {
        assert_eq!(ScoringScheme::edit_affine().min_bit_width(), 3);
        assert_eq!(ScoringScheme::minimap2().min_bit_width(), 5);
        assert_eq!(ScoringScheme::bwa_mem().min_bit_width(), 5);
        assert_eq!(ScoringScheme::new(0, 0, 1, 0).unwrap().min_bit_width(), 2);
    }

    #[test]
    fn bit_width_bounded_for_named_tool_range() {
        for a in 0..=4 {
            for b in 0..=4 {
                for o in 0..=6 {
                    for e in 0..=2 {
                        if let Ok(s) = ScoringScheme::new(a, b, o, e) {
                            let bits = s.min_bit_width();
                            assert!(bits <= 5, "{s:?} needs {bits}");
                            assert!((1u64 << bits) > s.primed_max() as u64);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rescoring_examples() {
        let s = ScoringScheme::minimap2();
        let c: Cigar = "4M".parse().unwrap();
        assert_eq!(score_cigar(&seq("ACGT"), &seq("ACGT"), &c, &s), Ok(8));
        let c: Cigar = "1M1D".parse().unwrap();
        assert_eq!(score_cigar(&seq("AC"), &seq("A"), &c, &s), Ok(-4));
    }

    #[test]
    fn rescoring_rejects_wrong_shape() {
        let s = ScoringScheme::minimap2();
        let c: Cigar = "3M".parse().unwrap();
        assert!(matches!(
            score_cigar(&seq("ACGT"), &seq("ACGT"), &c, &s),
            Err(Error::CigarShapeMismatch { .. })
        ));
    }
}
