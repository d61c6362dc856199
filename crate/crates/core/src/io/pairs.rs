//! Pair files: one `id <TAB> reference <TAB> query` record per line, with an
//! optional `id reference query` header. Blank lines and `#` comments are skipped.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use super::{io_error, open};
use crate::error::{Error, Result};
use crate::seq::NucleotideSequence;

pub const HEADER: &str = "id\treference\tquery";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub id: String,
    pub reference: NucleotideSequence,
    pub query: NucleotideSequence,
}

pub fn parse_pairs(reader: impl BufRead, origin: &str) -> Result<Vec<PairRecord>> {
    let err = |line: usize, message: String| Error::Parse {
        origin: origin.to_string(),
        line,
        message,
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut first = true;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| io_error(origin, e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if std::mem::take(&mut first) && fields.len() == 3 && fields[0].eq_ignore_ascii_case("id") {
            continue;
        }
        let [id, reference, query] = fields[..] else {
            return Err(err(lineno, format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        if id.is_empty() {
            return Err(err(lineno, "empty id".into()));
        }
        let parse_seq = |name: &str, s: &str| {
            NucleotideSequence::from_ascii(s.as_bytes()).map_err(|e| match e {
                Error::InvalidBase { byte, position } => {
                    err(lineno, format!("{name}: invalid base {byte:?} at position {}", position + 1))
                }
                other => err(lineno, format!("{name}: {other}")),
            })
        };
        let record = PairRecord {
            id: id.to_string(),
            reference: parse_seq("reference", reference)?,
            query: parse_seq("query", query)?,
        };
        if !seen.insert(record.id.clone()) {
            return Err(err(lineno, format!("duplicate id {id:?}")));
        }
        out.push(record);
    }
    Ok(out)
}

pub fn read_pairs(path: &Path) -> Result<Vec<PairRecord>> {
    parse_pairs(open(path)?, &path.display().to_string())
}

pub fn write_pair(out: &mut impl Write, id: &str, reference: &NucleotideSequence, query: &NucleotideSequence) -> std::io::Result<()> {
    writeln!(out, "{id}\t{reference}\t{query}")
}
