//! FASTA input. Headers start with `>`; sequence lines are concatenated.
//! CRLF line endings and lowercase bases are accepted.

use std::io::BufRead;
use std::ops::Range;
use std::path::Path;

use super::{io_error, open};
use crate::error::{Error, Result};
use crate::seq::{encode_base, NucleotideSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    /// Header text up to the first whitespace.
    pub name: String,
    pub sequence: NucleotideSequence,
    /// Runs of `N` bases replaced by `A`, as half-open position ranges.
    pub masked: Vec<Range<usize>>,
}

impl FastaRecord {
    pub fn masked_bases(&self) -> usize {
        self.masked.iter().map(ExactSizeIterator::len).sum()
    }

    /// Masked bases inside `[offset, offset + len)`.
    pub fn masked_in(&self, offset: usize, len: usize) -> usize {
        let end = offset + len;
        self.masked
            .iter()
            .map(|r| r.end.min(end).saturating_sub(r.start.max(offset)))
            .sum()
    }
}

/// Parses FASTA text. With `mask_n`, each `N`/`n` becomes `A` and is counted in
/// [`FastaRecord::masked`]; without it, `N` is an error like any other non-ACGT byte.
pub fn parse_fasta(reader: impl BufRead, origin: &str, mask_n: bool) -> Result<Vec<FastaRecord>> {
    let err = |line: usize, message: String| Error::Parse {
        origin: origin.to_string(),
        line,
        message,
    };
    let mut records = Vec::new();
    // name, header line, codes, masked runs
    type Pending = (String, usize, Vec<u8>, Vec<Range<usize>>);
    let mut current: Option<Pending> = None;
    let finish = |rec: Pending, out: &mut Vec<FastaRecord>| -> Result<()> {
        let (name, header_line, codes, masked) = rec;
        let sequence = NucleotideSequence::from_codes(codes)
            .map_err(|_| err(header_line, format!("record {name:?} has no sequence")))?;
        out.push(FastaRecord { name, sequence, masked });
        Ok(())
    };
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| io_error(origin, e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if let Some(header) = line.strip_prefix('>') {
            if let Some(rec) = current.take() {
                finish(rec, &mut records)?;
            }
            let name = header.split_whitespace().next().unwrap_or("");
            if name.is_empty() {
                return Err(err(lineno, "header has no name".into()));
            }
            current = Some((name.to_string(), lineno, Vec::new(), Vec::new()));
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let Some((_, _, codes, masked)) = current.as_mut() else {
            return Err(err(lineno, "sequence data before the first '>' header".into()));
        };
        for (col, &b) in line.as_bytes().iter().enumerate() {
            match encode_base(b) {
                Some(c) => codes.push(c),
                None if mask_n && (b == b'N' || b == b'n') => {
                    let pos = codes.len();
                    match masked.last_mut() {
                        Some(run) if run.end == pos => run.end += 1,
                        _ => masked.push(pos..pos + 1),
                    }
                    codes.push(0);
                }
                None => {
                    return Err(err(lineno, format!("illegal character {:?} at column {}", b as char, col + 1)));
                }
            }
        }
    }
    if let Some(rec) = current.take() {
        finish(rec, &mut records)?;
    }
    if records.is_empty() {
        return Err(err(0, "no FASTA records".into()));
    }
    Ok(records)
}

pub fn read_fasta(path: &Path, mask_n: bool) -> Result<Vec<FastaRecord>> {
    parse_fasta(open(path)?, &path.display().to_string(), mask_n)
}
