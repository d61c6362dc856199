//! Full-matrix difference recurrences.
//!
//! The signed form stores only differences between adjacent cells. The
//! primed form shifts every quantity into `[0, M + 2o + 2e]` so it fits in a
//! few unsigned bits. Both are checked cell-by-cell against [`crate::oracle`].
//!
//! Layout of the primed gap grids: `de[i][j]` holds the deletion candidate for
//! cell `(i+1, j)` measured against `H[i][j-1]` (that is `dE + dV` shifted),
//! and `df[i][j]` the insertion candidate for `(i, j+1)` measured against
//! `H[i-1][j]`. With this layout the cell update reads only its up and left
//! neighbours plus its own `A'`.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::oracle::boundary_score;
use crate::scoring::ScoringScheme;
use crate::seq::NucleotideSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffMatrices {
    /// `H[i][j] - H[i-1][j]`
    pub dh: Grid<i64>,
    /// `H[i][j] - H[i][j-1]`
    pub dv: Grid<i64>,
    /// `E[i+1][j] - H[i][j]`
    pub de: Grid<i64>,
    /// `F[i][j+1] - H[i][j]`
    pub df: Grid<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimedDiffMatrices {
    pub a: Grid<u8>,
    pub dh: Grid<u8>,
    pub dv: Grid<u8>,
    pub de: Grid<u8>,
    pub df: Grid<u8>,
}

/// Shifted substitution score: `s + 2o + 2e`.
#[inline]
pub fn shifted_substitution(scheme: &ScoringScheme, a: u8, b: u8) -> i64 {
    scheme.substitution(a, b) + 2 * open_extend(scheme)
}

#[inline]
pub(crate) fn open_extend(scheme: &ScoringScheme) -> i64 {
    (scheme.gap_open() + scheme.gap_extend()) as i64
}

/// Rejects schemes whose shifted values cannot be held in 8 unsigned bits
/// or whose mismatch pushes `s'` below zero.
pub fn check_primed_scheme(scheme: &ScoringScheme) -> Result<()> {
    let shift = 2 * (scheme.gap_open() + scheme.gap_extend());
    if scheme.mismatch_penalty() > shift {
        return Err(Error::UnsupportedScheme(format!(
            "mismatch penalty {} exceeds 2(o+e) = {shift}; shifted substitution would be negative",
            scheme.mismatch_penalty()
        )));
    }
    if scheme.primed_max() > u8::MAX as u32 {
        return Err(Error::UnsupportedScheme(format!(
            "shifted range 0..={} does not fit in 8 bits",
            scheme.primed_max()
        )));
    }
    Ok(())
}

/// Inputs of one primed cell update: values from the previous two anti-diagonals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellInputs {
    /// Shifted substitution score.
    pub s: i64,
    pub dv_up: i64,
    pub de_up: i64,
    pub dh_left: i64,
    pub df_left: i64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellOutputs {
    pub a: i64,
    pub dh: i64,
    pub dv: i64,
    pub de: i64,
    pub df: i64,
}

#[inline]
pub fn cell_a(x: &CellInputs) -> i64 {
    x.s.max(x.de_up).max(x.df_left)
}
#[inline]
pub fn cell_dh(a: i64, x: &CellInputs) -> i64 {
    a - x.dv_up
}
#[inline]
pub fn cell_dv(a: i64, x: &CellInputs) -> i64 {
    a - x.dh_left
}
#[inline]
pub fn cell_de(a: i64, x: &CellInputs, open: i64) -> i64 {
    a.max(x.de_up + open) - x.dh_left
}
#[inline]
pub fn cell_df(a: i64, x: &CellInputs, open: i64) -> i64 {
    a.max(x.df_left + open) - x.dv_up
}

/// One primed cell update; the four outputs after `A'` depend only on `A'` and the inputs.
#[inline]
pub fn primed_cell(x: &CellInputs, open: i64) -> CellOutputs {
    let a = cell_a(x);
    CellOutputs {
        a,
        dh: cell_dh(a, x),
        dv: cell_dv(a, x),
        de: cell_de(a, x, open),
        df: cell_df(a, x, open),
    }
}

pub fn diff_dp_matrices(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
) -> DiffMatrices {
    let (r, q) = (reference.codes(), query.codes());
    let (m, n) = (r.len(), q.len());
    let (o, e) = (scheme.gap_open() as i64, scheme.gap_extend() as i64);
    let mut dh = Grid::new(m + 1, n + 1, 0i64);
    let mut dv = Grid::new(m + 1, n + 1, 0i64);
    let mut de = Grid::new(m + 1, n + 1, 0i64);
    let mut df = Grid::new(m + 1, n + 1, 0i64);
    for j in 1..=n {
        dv[(0, j)] = if j == 1 { -o - e } else { -e };
        de[(0, j)] = -o - e;
    }
    for i in 1..=m {
        dh[(i, 0)] = if i == 1 { -o - e } else { -e };
        df[(i, 0)] = -o - e;
    }
    for i in 1..=m {
        for j in 1..=n {
            let s = scheme.substitution(r[i - 1], q[j - 1]);
            let a = s
                .max(de[(i - 1, j)] + dv[(i - 1, j)])
                .max(df[(i, j - 1)] + dh[(i, j - 1)]);
            let h = a - dv[(i - 1, j)];
            let v = a - dh[(i, j - 1)];
            dh[(i, j)] = h;
            dv[(i, j)] = v;
            de[(i, j)] = (-o).max(de[(i - 1, j)] - h) - e;
            df[(i, j)] = (-o).max(df[(i, j - 1)] - v) - e;
        }
    }
    DiffMatrices { dh, dv, de, df }
}

/// Primed boundary value on row 0 (`dV'`, column `j`) or column 0 (`dH'`, row `i`).
#[inline]
pub fn primed_boundary(scheme: &ScoringScheme, index: usize) -> i64 {
    if index == 1 { 0 } else { scheme.gap_open() as i64 }
}

pub fn parallel_diff_dp_matrices(
    reference: &NucleotideSequence,
    query: &NucleotideSequence,
    scheme: &ScoringScheme,
) -> Result<PrimedDiffMatrices> {
    check_primed_scheme(scheme)?;
    let (r, q) = (reference.codes(), query.codes());
    let (m, n) = (r.len(), q.len());
    let open = scheme.gap_open() as i64;
    let max = scheme.primed_max() as i64;
    let mut out = PrimedDiffMatrices {
        a: Grid::new(m + 1, n + 1, 0),
        dh: Grid::new(m + 1, n + 1, 0),
        dv: Grid::new(m + 1, n + 1, 0),
        de: Grid::new(m + 1, n + 1, 0),
        df: Grid::new(m + 1, n + 1, 0),
    };
    for j in 1..=n {
        let b = primed_boundary(scheme, j) as u8;
        out.dv[(0, j)] = b;
        out.de[(0, j)] = b;
    }
    for i in 1..=m {
        let b = primed_boundary(scheme, i) as u8;
        out.dh[(i, 0)] = b;
        out.df[(i, 0)] = b;
    }
    let fit = |i: usize, j: usize, value: i64| -> Result<u8> {
        if (0..=max).contains(&value) {
            Ok(value as u8)
        } else {
            Err(Error::PrecisionOverflow { i, j, value, max })
        }
    };
    for i in 1..=m {
        for j in 1..=n {
            let x = CellInputs {
                s: shifted_substitution(scheme, r[i - 1], q[j - 1]),
                dv_up: out.dv[(i - 1, j)] as i64,
                de_up: out.de[(i - 1, j)] as i64,
                dh_left: out.dh[(i, j - 1)] as i64,
                df_left: out.df[(i, j - 1)] as i64,
            };
            let y = primed_cell(&x, open);
            out.a[(i, j)] = fit(i, j, y.a)?;
            out.dh[(i, j)] = fit(i, j, y.dh)?;
            out.dv[(i, j)] = fit(i, j, y.dv)?;
            out.de[(i, j)] = fit(i, j, y.de)?;
            out.df[(i, j)] = fit(i, j, y.df)?;
        }
    }
    Ok(out)
}

/// Converts primed grids back to signed differences.
pub fn unprime(primed: &PrimedDiffMatrices, scheme: &ScoringScheme) -> DiffMatrices {
    let oe = open_extend(scheme);
    let (rows, cols) = (primed.dh.rows(), primed.dh.cols());
    let mut out = DiffMatrices {
        dh: Grid::new(rows, cols, 0),
        dv: Grid::new(rows, cols, 0),
        de: Grid::new(rows, cols, 0),
        df: Grid::new(rows, cols, 0),
    };
    for i in 0..rows {
        for j in 0..cols {
            if i > 0 {
                out.dh[(i, j)] = primed.dh[(i, j)] as i64 - oe;
                out.df[(i, j)] = primed.df[(i, j)] as i64 - primed.dh[(i, j)] as i64 - oe;
            }
            if j > 0 {
                out.dv[(i, j)] = primed.dv[(i, j)] as i64 - oe;
                out.de[(i, j)] = primed.de[(i, j)] as i64 - primed.dv[(i, j)] as i64 - oe;
            }
        }
    }
    out
}

/// Rebuilds absolute scores by accumulating `dH` down each column from the row-0 boundary.
pub fn reconstruct_scores(primed: &PrimedDiffMatrices, scheme: &ScoringScheme) -> Grid<i64> {
    let oe = open_extend(scheme);
    let (rows, cols) = (primed.dh.rows(), primed.dh.cols());
    let mut h = Grid::new(rows, cols, 0i64);
    for j in 0..cols {
        h[(0, j)] = boundary_score(scheme, j);
        for i in 1..rows {
            h[(i, j)] = h[(i - 1, j)] + primed.dh[(i, j)] as i64 - oe;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::full_dp_matrices;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seq(s: &str) -> NucleotideSequence {
        s.parse().unwrap()
    }

    fn random_seq(rng: &mut impl Rng, len: usize) -> NucleotideSequence {
        NucleotideSequence::from_codes((0..len).map(|_| rng.random_range(0..4u8)).collect()).unwrap()
    }

    /// Second sequence derived from the first by random edits, so alignments are non-trivial.
    fn mutate(rng: &mut impl Rng, s: &NucleotideSequence) -> NucleotideSequence {
        let mut out = Vec::new();
        for &c in s.codes() {
            match rng.random_range(0..10) {
                0 => out.push((c + 1) % 4),
                1 => {}
                2 => {
                    out.push(c);
                    out.push(rng.random_range(0..4));
                }
                _ => out.push(c),
            }
        }
        if out.is_empty() {
            out.push(0);
        }
        NucleotideSequence::from_codes(out).unwrap()
    }

    fn signed_h(d: &DiffMatrices, scheme: &ScoringScheme) -> Grid<i64> {
        let mut h = Grid::new(d.dh.rows(), d.dh.cols(), 0i64);
        for j in 0..d.dh.cols() {
            h[(0, j)] = boundary_score(scheme, j);
            for i in 1..d.dh.rows() {
                h[(i, j)] = h[(i - 1, j)] + d.dh[(i, j)];
            }
        }
        h
    }

    fn assert_equivalent(r: &NucleotideSequence, q: &NucleotideSequence, scheme: &ScoringScheme) {
        let oracle = full_dp_matrices(r, q, scheme);
        let diff = diff_dp_matrices(r, q, scheme);
        let primed = parallel_diff_dp_matrices(r, q, scheme).unwrap();
        assert_eq!(signed_h(&diff, scheme), oracle.h);
        assert_eq!(reconstruct_scores(&primed, scheme), oracle.h);
        assert_eq!(unprime(&primed, scheme), diff);
        let (m, n) = (r.len(), q.len());
        for i in 0..=m {
            for j in 0..=n {
                if i > 0 {
                    assert_eq!(diff.dh[(i, j)], oracle.h[(i, j)] - oracle.h[(i - 1, j)]);
                }
                if j > 0 {
                    assert_eq!(diff.dv[(i, j)], oracle.h[(i, j)] - oracle.h[(i, j - 1)]);
                }
                if i < m && j > 0 {
                    assert_eq!(diff.de[(i, j)], oracle.e[(i + 1, j)] - oracle.h[(i, j)]);
                }
                if j < n && i > 0 {
                    assert_eq!(diff.df[(i, j)], oracle.f[(i, j + 1)] - oracle.h[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn two_base_identity() {
        assert_equivalent(&seq("AC"), &seq("AC"), &ScoringScheme::minimap2());
    }

    #[test]
    fn identity_range_and_diagonal() {
        let s = ScoringScheme::minimap2();
        let r = seq("ACGT");
        let p = parallel_diff_dp_matrices(&r, &r, &s).unwrap();
        for g in [&p.a, &p.dh, &p.dv, &p.de, &p.df] {
            assert!(g.as_slice().iter().all(|&v| v <= 14));
        }
        let h = reconstruct_scores(&p, &s);
        assert_eq!((1..=4).map(|k| h[(k, k)]).collect::<Vec<_>>(), vec![2, 4, 6, 8]);
    }

    #[test]
    fn example_pair_final_score() {
        let s = ScoringScheme::minimap2();
        let (r, q) = (seq("ACGTCCG"), seq("AGTTATC"));
        let h = reconstruct_scores(&parallel_diff_dp_matrices(&r, &q, &s).unwrap(), &s);
        assert_eq!(h[(7, 7)], full_dp_matrices(&r, &q, &s).h[(7, 7)]);
    }

    #[test]
    fn random_pairs_are_cell_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for scheme in [ScoringScheme::minimap2(), ScoringScheme::bwa_mem(), ScoringScheme::edit_affine()] {
            for _ in 0..1000 {
                let len = rng.random_range(2..=300);
                let r = random_seq(&mut rng, len);
                let q = if rng.random_bool(0.5) {
                    mutate(&mut rng, &r)
                } else {
                    let qlen = rng.random_range(2..=300);
                    random_seq(&mut rng, qlen)
                };
                assert_equivalent(&r, &q, &scheme);
            }
        }
    }

    #[test]
    fn edit_scheme_fits_three_bits() {
        let s = ScoringScheme::edit_affine();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = random_seq(&mut rng, 60);
            let q = mutate(&mut rng, &r);
            let p = parallel_diff_dp_matrices(&r, &q, &s).unwrap();
            for g in [&p.a, &p.dh, &p.dv, &p.de, &p.df] {
                assert!(g.as_slice().iter().all(|&v| v <= 5));
            }
        }
        assert_eq!(s.min_bit_width(), 3);
    }

    #[test]
    fn oversized_mismatch_is_rejected() {
        let s = ScoringScheme::new(1, 9, 1, 1).unwrap();
        assert!(matches!(
            parallel_diff_dp_matrices(&seq("AC"), &seq("AG"), &s),
            Err(Error::UnsupportedScheme(_))
        ));
    }

    #[test]
    fn gap_updates_commute_given_a() {
        type Update = fn(i64, &CellInputs, i64, &mut CellOutputs);
        let updates: [Update; 4] = [
            |a, x, _, y| y.dh = cell_dh(a, x),
            |a, x, _, y| y.dv = cell_dv(a, x),
            |a, x, o, y| y.de = cell_de(a, x, o),
            |a, x, o, y| y.df = cell_df(a, x, o),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut orders = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let o = [a, b, c, d];
                        if (0..4).all(|k| o.contains(&k)) {
                            orders.push(o);
                        }
                    }
                }
            }
        }
        assert_eq!(orders.len(), 24);
        for _ in 0..500 {
            let x = CellInputs {
                s: rng.random_range(0..=16),
                dv_up: rng.random_range(0..=16),
                de_up: rng.random_range(0..=16),
                dh_left: rng.random_range(0..=16),
                df_left: rng.random_range(0..=16),
            };
            let expected = primed_cell(&x, 4);
            for order in &orders {
                let mut y = CellOutputs { a: cell_a(&x), ..Default::default() };
                for &k in order {
                    updates[k](y.a, &x, 4, &mut y);
                }
                assert_eq!(y, expected);
            }
        }
    }

    fn arb_seq(max: usize) -> impl Strategy<Value = NucleotideSequence> {
        prop::collection::vec(0u8..4, 1..=max).prop_map(|v| NucleotideSequence::from_codes(v).unwrap())
    }

    proptest! {
        #[test]
        fn primed_values_fit_scheme_width(r in arb_seq(48), q in arb_seq(48), a in 0u32..=4, b in 0u32..=4, o in 0u32..=6, e in 0u32..=2) {
            prop_assume!(o + e > 0 && b <= 2 * (o + e));
            let s = ScoringScheme::new(a, b, o, e).unwrap();
            let p = parallel_diff_dp_matrices(&r, &q, &s).unwrap();
            let limit = (1u32 << s.min_bit_width()) - 1;
            for g in [&p.a, &p.dh, &p.dv, &p.de, &p.df] {
                prop_assert!(g.as_slice().iter().all(|&v| (v as u32) <= s.primed_max() && (v as u32) <= limit));
            }
            prop_assert_eq!(reconstruct_scores(&p, &s), full_dp_matrices(&r, &q, &s).h);
        }
    }
}
