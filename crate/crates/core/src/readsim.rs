//! Deterministic synthetic reads with an i.i.d. per-base error model.
//!
//! Every read draws from its own ChaCha8 stream (master seed, stream = read
//! index), so reads can be produced in any order or in parallel and still be
//! byte-identical.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::NucleotideSequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub name: String,
    pub substitution_rate: f64,
    pub insertion_rate: f64,
    pub deletion_rate: f64,
}

impl ErrorProfile {
    pub fn new(name: impl Into<String>, substitution_rate: f64, insertion_rate: f64, deletion_rate: f64) -> Result<Self> {
        let name = name.into();
        let rates = [substitution_rate, insertion_rate, deletion_rate];
        if rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::InvalidProfile(format!("{name}: rates must lie in [0, 1]")));
        }
        if rates.iter().sum::<f64>() >= 1.0 {
            return Err(Error::InvalidProfile(format!("{name}: rates must sum to less than 1")));
        }
        Ok(Self {
            name,
            substitution_rate,
            insertion_rate,
            deletion_rate,
        })
    }

    pub fn pacbio() -> Self {
        Self::new("PacBio", 0.015, 0.090, 0.045).unwrap()
    }
    pub fn ont_2d() -> Self {
        Self::new("ONT_2D", 0.165, 0.050, 0.085).unwrap()
    }
    pub fn illumina() -> Self {
        Self::new("Illumina", 0.03, 0.01, 0.01).unwrap()
    }
    pub fn builtin() -> [Self; 3] {
        [Self::pacbio(), Self::ont_2d(), Self::illumina()]
    }

    /// Looks up a built-in profile by name, ignoring case and `_`/`-`.
    pub fn by_name(name: &str) -> Result<Self> {
        let key = |s: &str| s.to_ascii_lowercase().replace(['_', '-'], "");
        Self::builtin()
            .into_iter()
            .find(|p| key(&p.name) == key(name))
            .ok_or_else(|| Error::InvalidProfile(format!("unknown profile {name:?} (expected PacBio, ONT_2D or Illumina)")))
    }

    pub fn total_rate(&self) -> f64 {
        self.substitution_rate + self.insertion_rate + self.deletion_rate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "base")]
pub enum EditKind {
    /// Replace the window base by this code.
    Substitution(u8),
    Deletion,
    /// Insert this code after the window base.
    Insertion(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEdit {
    /// Position in the reference window.
    pub position: usize,
    #[serde(flatten)]
    pub kind: EditKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadPair {
    pub reference_window: NucleotideSequence,
    pub read: NucleotideSequence,
    /// Edits in window order; insertions after a position follow its substitution or deletion.
    pub truth_edits: Vec<TruthEdit>,
    /// Genome record and offset of the window.
    pub record: usize,
    pub offset: usize,
    pub seed: u64,
    pub stream: u64,
}

/// Rebuilds a read from its window and edit list.
pub fn apply_edits(window: &[u8], edits: &[TruthEdit]) -> Vec<u8> {
    let mut out = Vec::with_capacity(window.len() + edits.len());
    let mut e = edits.iter().peekable();
    for (pos, &base) in window.iter().enumerate() {
        let mut emitted = false;
        let mut kept = true;
        while let Some(edit) = e.next_if(|x| x.position == pos) {
            match edit.kind {
                EditKind::Substitution(b) => {
                    out.push(b);
                    emitted = true;
                }
                EditKind::Deletion => kept = false,
                EditKind::Insertion(b) => {
                    if kept && !emitted {
                        out.push(base);
                        emitted = true;
                    }
                    out.push(b);
                }
            }
        }
        if kept && !emitted {
            out.push(base);
        }
    }
    out
}

/// Chooses one of the `L`-bp windows of `genome` uniformly at random.
pub fn sample_reference(genome: &Genome, length: usize, rng: &mut impl Rng) -> Result<(NucleotideSequence, usize, usize)> {
    let windows: Vec<usize> = genome.records.iter().map(|r| (r.len() + 1).saturating_sub(length)).collect();
    let total: usize = windows.iter().sum();
    if total == 0 || length == 0 {
        return Err(Error::GenomeTooShort {
            genome_len: genome.records.iter().map(NucleotideSequence::len).max().unwrap_or(0),
            window: length,
        });
    }
    let mut pick = rng.random_range(0..total);
    for (record, &count) in windows.iter().enumerate() {
        if pick < count {
            return Ok((genome.records[record].window(pick, length)?, record, pick));
        }
        pick -= count;
    }
    unreachable!("pick below total")
}

/// Applies the profile base by base. A substitution or deletion is drawn first;
/// independently an insertion run may follow the base, opened with probability
/// `insertion_rate * (1 - c)` and extended with probability `c`, so the expected
/// number of inserted bases per position is `insertion_rate`.
pub fn mutate_edits(window: &[u8], profile: &ErrorProfile, continuation: f64, rng: &mut impl Rng) -> Vec<TruthEdit> {
    let open = profile.insertion_rate * (1.0 - continuation);
    let mut edits = Vec::new();
    for (position, &base) in window.iter().enumerate() {
        let u: f64 = rng.random();
        if u < profile.substitution_rate {
            let other = (base + rng.random_range(1..4u8)) % 4;
            edits.push(TruthEdit { position, kind: EditKind::Substitution(other) });
        } else if u < profile.substitution_rate + profile.deletion_rate {
            edits.push(TruthEdit { position, kind: EditKind::Deletion });
        }
        if rng.random::<f64>() < open {
            loop {
                edits.push(TruthEdit { position, kind: EditKind::Insertion(rng.random_range(0..4)) });
                if rng.random::<f64>() >= continuation {
                    break;
                }
            }
        }
    }
    edits
}

/// Mutates `window`; redraws in the rare case every base was deleted.
pub fn mutate_read(
    window: &NucleotideSequence,
    profile: &ErrorProfile,
    continuation: f64,
    rng: &mut impl Rng,
) -> (NucleotideSequence, Vec<TruthEdit>) {
    loop {
        let edits = mutate_edits(window.codes(), profile, continuation, rng);
        let read = apply_edits(window.codes(), &edits);
        if let Ok(read) = NucleotideSequence::from_codes(read) {
            return (read, edits);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genome {
    pub records: Vec<NucleotideSequence>,
}

impl Genome {
    /// Uniform random genome of `len` bases.
    pub fn synthetic(len: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let codes = (0..len).map(|_| rng.random_range(0..4u8)).collect();
        Ok(Self {
            records: vec![NucleotideSequence::from_codes(codes)?],
        })
    }

    pub fn total_len(&self) -> usize {
        self.records.iter().map(NucleotideSequence::len).sum()
    }
}

/// Where the genome comes from: `synthetic:<len>:<seed>` or a FASTA path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenomeSpec {
    Synthetic { len: usize, seed: u64 },
    Fasta(std::path::PathBuf),
}

impl FromStr for GenomeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let Some(rest) = s.strip_prefix("synthetic:") else {
            return Ok(Self::Fasta(s.into()));
        };
        let bad = || Error::InvalidProfile(format!("genome spec {s:?} must be synthetic:<len>:<seed>"));
        let (len, seed) = rest.split_once(':').ok_or_else(bad)?;
        Ok(Self::Synthetic {
            len: len.parse().map_err(|_| bad())?,
            seed: seed.parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for GenomeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Synthetic { len, seed } => write!(f, "synthetic:{len}:{seed}"),
            Self::Fasta(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Read length: a fixed value or an inclusive range drawn uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadLength {
    Fixed(usize),
    Range(usize, usize),
}

impl ReadLength {
    fn sample(self, rng: &mut impl Rng) -> usize {
        match self {
            Self::Fixed(n) => n,
            Self::Range(lo, hi) => rng.random_range(lo..=hi),
        }
    }
}

impl FromStr for ReadLength {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidProfile(format!("read length {s:?} must be N or LO-HI with 1 <= LO <= HI"));
        let parse = |x: &str| x.trim().parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(bad);
        match s.split_once('-') {
            None => Ok(Self::Fixed(parse(s)?)),
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi {
                    return Err(bad());
                }
                Ok(Self::Range(lo, hi))
            }
        }
    }
}

impl fmt::Display for ReadLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(n) => write!(f, "{n}"),
            Self::Range(lo, hi) => write!(f, "{lo}-{hi}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub profile: ErrorProfile,
    pub count: usize,
    pub length: ReadLength,
    pub seed: u64,
    /// Insertion-run continuation probability; defaults to the insertion rate.
    pub insertion_continuation: Option<f64>,
}

impl DatasetSpec {
    pub fn new(profile: ErrorProfile, count: usize, length: ReadLength, seed: u64) -> Self {
        Self {
            profile,
            count,
            length,
            seed,
            insertion_continuation: None,
        }
    }

    fn continuation(&self) -> f64 {
        self.insertion_continuation.unwrap_or(self.profile.insertion_rate)
    }
}

/// The read with stream index `index`, independent of every other read.
pub fn generate_read(genome: &Genome, spec: &DatasetSpec, index: u64) -> Result<ReadPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index);
    let length = spec.length.sample(&mut rng);
    let (window, record, offset) = sample_reference(genome, length, &mut rng)?;
    let (read, truth_edits) = mutate_read(&window, &spec.profile, spec.continuation(), &mut rng);
    Ok(ReadPair {
        reference_window: window,
        read,
        truth_edits,
        record,
        offset,
        seed: spec.seed,
        stream: index,
    })
}

pub fn generate_dataset<'a>(genome: &'a Genome, spec: &'a DatasetSpec) -> impl Iterator<Item = Result<ReadPair>> + 'a {
    (0..spec.count as u64).map(move |i| generate_read(genome, spec, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn builtin_profiles() {
        assert!((ErrorProfile::pacbio().total_rate() - 0.15).abs() < 1e-12);
        assert!((ErrorProfile::ont_2d().total_rate() - 0.30).abs() < 1e-12);
        assert_eq!(ErrorProfile::by_name("ont-2d").unwrap(), ErrorProfile::ont_2d());
        assert_eq!(ErrorProfile::by_name("ILLUMINA").unwrap().substitution_rate, 0.03);
        assert!(ErrorProfile::by_name("sanger").is_err());
        assert!(ErrorProfile::new("x", 0.5, 0.3, 0.2).is_err());
        assert!(ErrorProfile::new("x", -0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn whole_genome_window() {
        let g = Genome::synthetic(500, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (w, record, offset) = sample_reference(&g, 500, &mut rng).unwrap();
        assert_eq!((record, offset), (0, 0));
        assert_eq!(w, g.records[0]);
        assert_eq!(
            sample_reference(&g, 501, &mut rng).unwrap_err(),
            Error::GenomeTooShort { genome_len: 500, window: 501 }
        );
    }

    #[test]
    fn window_offsets_are_uniform() {
        let g = Genome::synthetic(1_000_000, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let len = 100;
        let span = 1_000_000 - len + 1;
        let mut bins = [0u32; 100];
        for _ in 0..10_000 {
            let (_, _, offset) = sample_reference(&g, len, &mut rng).unwrap();
            bins[offset * 100 / span] += 1;
        }
        let expected = 100.0;
        let chi2: f64 = bins.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        // upper 1% point of chi-square with 99 degrees of freedom
        assert!(chi2 < 134.642, "{chi2}");
    }

    #[test]
    fn zero_rate_profile_is_identity() {
        let g = Genome::synthetic(1000, 4).unwrap();
        let spec = DatasetSpec::new(ErrorProfile::new("clean", 0.0, 0.0, 0.0).unwrap(), 5, ReadLength::Fixed(200), 9);
        for pair in generate_dataset(&g, &spec) {
            let pair = pair.unwrap();
            assert_eq!(pair.read, pair.reference_window);
            assert!(pair.truth_edits.is_empty());
        }
    }

    #[test]
    fn realized_rates_match_profiles() {
        for profile in ErrorProfile::builtin() {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let window: Vec<u8> = (0..1_000_000).map(|_| rng.random_range(0..4)).collect();
            let edits = mutate_edits(&window, &profile, profile.insertion_rate, &mut rng);
            let count = |f: fn(&EditKind) -> bool| edits.iter().filter(|e| f(&e.kind)).count() as f64 / 1e6;
            let sub = count(|k| matches!(k, EditKind::Substitution(_)));
            let ins = count(|k| matches!(k, EditKind::Insertion(_)));
            let del = count(|k| matches!(k, EditKind::Deletion));
            assert!((sub - profile.substitution_rate).abs() < 0.005, "{} sub {sub}", profile.name);
            assert!((ins - profile.insertion_rate).abs() < 0.005, "{} ins {ins}", profile.name);
            assert!((del - profile.deletion_rate).abs() < 0.005, "{} del {del}", profile.name);
            assert!((sub + ins + del - profile.total_rate()).abs() < 0.005);
        }
    }

    #[test]
    fn dataset_is_reproducible_and_seed_sensitive() {
        let g = Genome::synthetic(1_000_000, 6).unwrap();
        let spec = DatasetSpec::new(ErrorProfile::illumina(), 1000, ReadLength::Fixed(100), 42);
        let a: Vec<_> = generate_dataset(&g, &spec).map(Result::unwrap).collect();
        let b: Vec<_> = generate_dataset(&g, &spec).map(Result::unwrap).collect();
        assert_eq!(a.len(), 1000);
        assert_eq!(a, b);
        // reads are independent of generation order
        assert_eq!(generate_read(&g, &spec, 999).unwrap(), a[999]);
        let other = DatasetSpec { seed: 43, ..spec };
        let c: Vec<_> = generate_dataset(&g, &other).map(Result::unwrap).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn ont_reads_carry_thirty_percent_edits() {
        let g = Genome::synthetic(1_000_000, 7).unwrap();
        let spec = DatasetSpec::new(ErrorProfile::ont_2d(), 1000, ReadLength::Fixed(2000), 8);
        let mean: f64 = generate_dataset(&g, &spec)
            .map(|p| p.unwrap().truth_edits.len() as f64 / 2000.0)
            .sum::<f64>()
            / 1000.0;
        assert!((mean - 0.30).abs() < 0.02, "{mean}");
    }

    #[test]
    fn length_and_genome_specs_parse() {
        assert_eq!("150".parse::<ReadLength>().unwrap(), ReadLength::Fixed(150));
        assert_eq!("1000-2000".parse::<ReadLength>().unwrap(), ReadLength::Range(1000, 2000));
        assert!("20-10".parse::<ReadLength>().is_err());
        assert!("0".parse::<ReadLength>().is_err());
        assert_eq!(
            "synthetic:1000000:7".parse::<GenomeSpec>().unwrap(),
            GenomeSpec::Synthetic { len: 1_000_000, seed: 7 }
        );
        assert!("synthetic:abc:1".parse::<GenomeSpec>().is_err());
        assert_eq!("ref.fa".parse::<GenomeSpec>().unwrap(), GenomeSpec::Fasta("ref.fa".into()));
    }

    proptest! {
        #[test]
        fn edits_replay_to_read(seed in any::<u64>(), len in 1usize..400, idx in 0usize..3) {
            let profile = ErrorProfile::builtin()[idx].clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let window = NucleotideSequence::from_codes((0..len).map(|_| rng.random_range(0..4)).collect()).unwrap();
            let (read, edits) = mutate_read(&window, &profile, 0.5, &mut rng);
            prop_assert_eq!(apply_edits(window.codes(), &edits), read.codes().to_vec());
            prop_assert!(edits.windows(2).all(|w| w[0].position <= w[1].position));
        }
    }
}
