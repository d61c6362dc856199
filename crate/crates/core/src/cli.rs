//! Command-line front end. Every command writes to a caller-supplied sink so
//! the binary and the tests share one code path.
//!
//! Precedence for every setting is flags, then the config file, then defaults.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::band::BandPolicy;
use crate::banded::{banded_align_with, banded_edit_distance, BandedConfig};
use crate::error::{Error, Result};
use crate::io::config::RunConfig;
use crate::io::fasta::{read_fasta, FastaRecord};
use crate::io::pairs::{read_pairs, write_pair, PairRecord};
use crate::oracle::{edit_distance_score, full_dp_score};
use crate::pimmodel::{dse_sweep, estimate_run, estimate_write_traffic, DseAxis, Workload};
use crate::readsim::{generate_read, DatasetSpec, EditKind, ErrorProfile, Genome, GenomeSpec, ReadLength};
use crate::scoring::ScoringScheme;
use crate::seq::ALPHABET;

/// Version tag of the JSON-lines and CSV layouts described in the README.
pub const SCHEMA_VERSION: u32 = 1;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_GENOME: &str = "synthetic:1000000:1";

#[derive(Debug, Parser)]
#[command(name = "pimalign", version, about = "Banded difference-based alignment and PIM cost estimation")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn enabled(self) -> bool {
        self == Self::On
    }
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; output order does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also compute the full-matrix score and report whether it matches.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Skip the traceback store and cigar output.
    #[arg(long, global = true)]
    pub no_traceback: bool,
    #[arg(long, global = true, value_enum)]
    pub adaptive: Option<Switch>,
    /// Base bandwidth.
    #[arg(long, global = true)]
    pub w: Option<usize>,
    /// Error profile name (pacbio, ont_2d, illumina); comma-separated for validate.
    #[arg(long, global = true)]
    pub profile: Option<String>,
    /// Output path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Replace N in FASTA input with A instead of rejecting it.
    #[arg(long, global = true)]
    pub mask_n: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align every pair of a pairs file; one JSON line per pair.
    Align { pairs: PathBuf },
    /// Edit distance of every pair of a pairs file; one JSON line per pair.
    Editdist { pairs: PathBuf },
    /// Simulate reads into a pairs file plus a JSON-lines truth sidecar.
    Simreads {
        /// FASTA path or synthetic:<len>:<seed>.
        #[arg(long, default_value = DEFAULT_GENOME)]
        genome: GenomeSpec,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// N or LO-HI.
        #[arg(long, default_value = "150")]
        length: ReadLength,
        /// Truth sidecar path; defaults to <out>.truth.jsonl when --out is given.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Banded-versus-oracle score agreement table.
    Validate {
        #[arg(long, default_value = DEFAULT_GENOME)]
        genome: GenomeSpec,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value = "100-250")]
        length: ReadLength,
        /// Base bandwidths, one column each.
        #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
        ws: Vec<usize>,
    },
    /// Cost estimate for a batch of alignments.
    Pim {
        /// Reference lengths, one row each.
        #[arg(long, value_delimiter = ',', required = true)]
        length: Vec<usize>,
        /// Query length; defaults to the reference length.
        #[arg(long)]
        query_length: Option<usize>,
        #[arg(long, default_value_t = 1)]
        pairs: u64,
        /// Use the edit-distance scheme instead of the configured one.
        #[arg(long)]
        edit: bool,
    },
    /// Design-space sweep.
    Dse {
        /// tbms_per_tile or column_width.
        #[arg(long)]
        axis: DseAxis,
        /// LO-HI or a comma-separated list.
        #[arg(long)]
        range: String,
        #[arg(long, value_delimiter = ',', default_value = "2000,10000")]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        pairs: u64,
        #[arg(long)]
        edit: bool,
    },
}

/// Settings after merging flags over the config file.
#[derive(Debug, Clone)]
struct Settings {
    config: RunConfig,
    scheme: ScoringScheme,
    policy: BandPolicy,
    banded: BandedConfig,
    seed: u64,
    threads: Option<usize>,
}

impl Settings {
    fn resolve(common: &CommonArgs) -> Result<Self> {
        let config = match &common.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let mut policy = config.policy()?;
        if let Some(w) = common.w {
            policy = with_base(&policy, w)?;
        }
        let mut banded = config.banded_config()?;
        if let Some(a) = common.adaptive {
            banded.direction.adaptive = a.enabled();
        }
        banded.traceback = !common.no_traceback;
        Ok(Self {
            scheme: config.scheme()?,
            policy,
            banded,
            seed: common.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
            threads: common.threads.or(config.threads),
            config,
        })
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
    }

    /// Profiles named on the command line, else the configured one.
    fn profiles(&self, flag: Option<&str>) -> Result<Vec<(ErrorProfile, Option<f64>)>> {
        if let Some(names) = flag {
            return names.split(',').map(|n| Ok((ErrorProfile::by_name(n.trim())?, None))).collect();
        }
        match self.config.error_profile()? {
            Some(p) => Ok(vec![p]),
            None => Err(Error::InvalidProfile("no profile given (use --profile or a [profile] table)".into())),
        }
    }
}

fn with_base(policy: &BandPolicy, w: usize) -> Result<BandPolicy> {
    BandPolicy::new(w, policy.slope(), policy.cap().max(w), policy.round_to_multiple())
}

/// Parses arguments from the process and runs the command, writing to `stdout`
/// unless `--out` is given.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let settings = Settings::resolve(&cli.common)?;
    let mut file;
    let out: &mut dyn Write = match &cli.common.out {
        Some(path) => {
            file = BufWriter::new(create(path)?);
            &mut file
        }
        None => stdout,
    };
    match &cli.command {
        Command::Align { pairs } => cmd_align(&settings, cli.common.oracle, &read_pairs(pairs)?, out),
        Command::Editdist { pairs } => cmd_editdist(&settings, cli.common.oracle, &read_pairs(pairs)?, out),
        Command::Simreads {
            genome,
            count,
            length,
            truth,
        } => {
            let (profile, continuation) = single_profile(&settings, cli.common.profile.as_deref())?;
            let mut spec = DatasetSpec::new(profile, *count, *length, settings.seed);
            spec.insertion_continuation = continuation;
            let genome = load_genome(genome, cli.common.mask_n)?;
            let truth_path = truth
                .clone()
                .or_else(|| cli.common.out.as_ref().map(|o| sidecar_path(o)));
            let mut truth_file = truth_path.as_deref().map(create).transpose()?.map(BufWriter::new);
            cmd_simreads(&genome, &spec, out, truth_file.as_mut().map(|w| w as &mut dyn Write))?;
            if let Some(mut w) = truth_file {
                w.flush().map_err(|e| io_err("truth sidecar", e))?;
            }
            Ok(())
        }
        Command::Validate {
            genome,
            count,
            length,
            ws,
        } => {
            let genome = load_genome(genome, cli.common.mask_n)?;
            let adaptive = match cli.common.adaptive {
                Some(a) => vec![a.enabled()],
                None => vec![true, false],
            };
            let request = ValidateRequest {
                profiles: settings.profiles(cli.common.profile.as_deref())?,
                count: *count,
                length: *length,
                ws: ws.clone(),
                adaptive,
            };
            cmd_validate(&settings, &genome, &request, out)
        }
        Command::Pim {
            length,
            query_length,
            pairs,
            edit,
        } => {
            let scheme = if *edit { ScoringScheme::edit_affine() } else { settings.scheme };
            cmd_pim(&settings, scheme, length, *query_length, *pairs, out)
        }
        Command::Dse {
            axis,
            range,
            lengths,
            pairs,
            edit,
        } => {
            let scheme = if *edit { ScoringScheme::edit_affine() } else { settings.scheme };
            let workload = Workload {
                pairs: *pairs,
                reference_len: 0,
                query_len: 0,
                scheme,
            };
            cmd_dse(&settings, *axis, &parse_range(range)?, lengths, &workload, out)
        }
    }?;
    out.flush().map_err(|e| io_err("output", e))
}

fn single_profile(settings: &Settings, flag: Option<&str>) -> Result<(ErrorProfile, Option<f64>)> {
    let mut profiles = settings.profiles(flag)?;
    if profiles.len() != 1 {
        return Err(Error::InvalidProfile("simreads takes exactly one profile".into()));
    }
    Ok(profiles.remove(0))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| io_err(&path.display().to_string(), e))
}

fn io_err(what: &str, e: std::io::Error) -> Error {
    Error::Io(format!("{what}: {e}"))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".truth.jsonl");
    name.into()
}

fn write_line(out: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| io_err("output", e))
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("plain records serialize")
}

/// A genome with per-record names and masked-N runs.
pub struct LoadedGenome {
    pub genome: Genome,
    pub records: Vec<FastaRecord>,
}

pub fn load_genome(spec: &GenomeSpec, mask_n: bool) -> Result<LoadedGenome> {
    match spec {
        GenomeSpec::Synthetic { len, seed } => {
            let genome = Genome::synthetic(*len, *seed)?;
            let records = vec![FastaRecord {
                name: spec.to_string(),
                sequence: genome.records[0].clone(),
                masked: Vec::new(),
            }];
            Ok(LoadedGenome { genome, records })
        }
        GenomeSpec::Fasta(path) => {
            let records = read_fasta(path, mask_n)?;
            let genome = Genome {
                records: records.iter().map(|r| r.sequence.clone()).collect(),
            };
            Ok(LoadedGenome { genome, records })
        }
    }
}

/// Runs `f` on every item in the settings' pool and returns results in input order.
fn ordered_map<T: Sync, R: Send>(settings: &Settings, items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    settings.pool()?.install(|| items.par_iter().map(f).collect())
}

#[derive(Serialize)]
struct AlignRecord<'a> {
    id: &'a str,
    score: Option<i64>,
    cigar: Option<String>,
    band_used: usize,
    cells_computed: usize,
    traceback_cells: usize,
    band_escape: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_edge_score: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_score: Option<i64>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matched: Option<bool>,
}

fn align_record(settings: &Settings, oracle: bool, pair: &PairRecord) -> Result<String> {
    let (r, q) = (&pair.reference, &pair.query);
    let band_used = settings.policy.effective_bandwidth(r.len(), q.len());
    let mut rec = AlignRecord {
        id: &pair.id,
        score: None,
        cigar: None,
        band_used,
        cells_computed: 0,
        traceback_cells: 0,
        band_escape: false,
        best_edge_score: None,
        oracle_score: None,
        matched: None,
    };
    match banded_align_with(r, q, &settings.scheme, &settings.policy, &settings.banded) {
        Ok(run) => {
            rec.score = Some(run.score);
            rec.cigar = run.cigar.map(|c| c.to_string());
            rec.cells_computed = run.cells_computed;
            rec.traceback_cells = run.traceback_cells;
        }
        Err(Error::BandEscape { best_edge_score }) => {
            rec.band_escape = true;
            rec.best_edge_score = best_edge_score;
        }
        Err(e) => return Err(e),
    }
    if oracle {
        let o = full_dp_score(r, q, &settings.scheme);
        rec.oracle_score = Some(o);
        rec.matched = Some(rec.score == Some(o));
    }
    Ok(to_json(&rec))
}

fn cmd_align(settings: &Settings, oracle: bool, pairs: &[PairRecord], out: &mut dyn Write) -> Result<()> {
    for line in ordered_map(settings, pairs, |p| align_record(settings, oracle, p))? {
        write_line(out, &line)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EditRecord<'a> {
    id: &'a str,
    distance: Option<u64>,
    affine_cost: Option<u64>,
    cigar: Option<String>,
    band_used: usize,
    cells_computed: usize,
    traceback_cells: usize,
    band_escape: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_distance: Option<u64>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matched: Option<bool>,
}

fn edit_record(settings: &Settings, oracle: bool, pair: &PairRecord) -> Result<String> {
    let (r, q) = (&pair.reference, &pair.query);
    let mut rec = EditRecord {
        id: &pair.id,
        distance: None,
        affine_cost: None,
        cigar: None,
        band_used: settings.policy.effective_bandwidth(r.len(), q.len()),
        cells_computed: 0,
        traceback_cells: 0,
        band_escape: false,
        oracle_distance: None,
        matched: None,
    };
    match banded_edit_distance(r, q, &settings.policy, settings.banded.traceback, &settings.banded) {
        Ok(e) => {
            rec.distance = Some(e.levenshtein);
            rec.affine_cost = Some(e.affine_cost);
            rec.cigar = e.cigar.map(|c| c.to_string());
            rec.cells_computed = e.cells_computed;
            rec.traceback_cells = e.traceback_cells;
        }
        Err(Error::BandEscape { .. }) => rec.band_escape = true,
        Err(e) => return Err(e),
    }
    if oracle {
        let d = edit_distance_score(r, q);
        rec.oracle_distance = Some(d);
        rec.matched = Some(rec.distance == Some(d));
    }
    Ok(to_json(&rec))
}

fn cmd_editdist(settings: &Settings, oracle: bool, pairs: &[PairRecord], out: &mut dyn Write) -> Result<()> {
    for line in ordered_map(settings, pairs, |p| edit_record(settings, oracle, p))? {
        write_line(out, &line)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TruthEditRecord {
    position: usize,
    op: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<char>,
}

#[derive(Serialize)]
struct TruthRecord<'a> {
    id: String,
    record: &'a str,
    offset: usize,
    length: usize,
    seed: u64,
    stream: u64,
    masked_bases: usize,
    edits: Vec<TruthEditRecord>,
}

fn read_id(index: u64) -> String {
    format!("read{index}")
}

pub fn cmd_simreads(
    genome: &LoadedGenome,
    spec: &DatasetSpec,
    out: &mut dyn Write,
    mut truth: Option<&mut dyn Write>,
) -> Result<()> {
    for index in 0..spec.count as u64 {
        let pair = generate_read(&genome.genome, spec, index)?;
        let id = read_id(index);
        write_pair(&mut &mut *out, &id, &pair.reference_window, &pair.read).map_err(|e| io_err("output", e))?;
        let Some(t) = truth.as_deref_mut() else { continue };
        let source = &genome.records[pair.record];
        let rec = TruthRecord {
            id,
            record: &source.name,
            offset: pair.offset,
            length: pair.reference_window.len(),
            seed: pair.seed,
            stream: pair.stream,
            masked_bases: source.masked_in(pair.offset, pair.reference_window.len()),
            edits: pair
                .truth_edits
                .iter()
                .map(|e| {
                    let (op, base) = match e.kind {
                        EditKind::Substitution(b) => ("X", Some(b)),
                        EditKind::Deletion => ("D", None),
                        EditKind::Insertion(b) => ("I", Some(b)),
                    };
                    TruthEditRecord {
                        position: e.position,
                        op,
                        base: base.map(|b| ALPHABET[b as usize] as char),
                    }
                })
                .collect(),
        };
        write_line(t, &to_json(&rec))?;
    }
    Ok(())
}

pub struct ValidateRequest {
    pub profiles: Vec<(ErrorProfile, Option<f64>)>,
    pub count: usize,
    pub length: ReadLength,
    pub ws: Vec<usize>,
    pub adaptive: Vec<bool>,
}

fn cmd_validate(settings: &Settings, genome: &LoadedGenome, req: &ValidateRequest, out: &mut dyn Write) -> Result<()> {
    if req.count == 0 || req.ws.is_empty() {
        return Err(Error::InvalidConfig("validate needs count >= 1 and at least one w".into()));
    }
    let policies = req
        .ws
        .iter()
        .map(|&w| with_base(&settings.policy, w))
        .collect::<Result<Vec<_>>>()?;
    let columns: Vec<String> = req.ws.iter().map(|w| format!("w{w}")).collect();
    write_line(out, &format!("profile,adaptive,length,count,{}", columns.join(",")))?;
    for (profile, continuation) in &req.profiles {
        let mut spec = DatasetSpec::new(profile.clone(), req.count, req.length, settings.seed);
        spec.insertion_continuation = *continuation;
        let indices: Vec<u64> = (0..req.count as u64).collect();
        // per read: one flag per (adaptive, w), adaptive-major
        let hits = ordered_map(settings, &indices, |&i| {
            let pair = generate_read(&genome.genome, &spec, i)?;
            let (r, q) = (&pair.reference_window, &pair.read);
            let truth = full_dp_score(r, q, &settings.scheme);
            let mut flags = Vec::with_capacity(req.adaptive.len() * policies.len());
            for &adaptive in &req.adaptive {
                let mut config = settings.banded.with_traceback(false);
                config.direction.adaptive = adaptive;
                for policy in &policies {
                    let hit = match banded_align_with(r, q, &settings.scheme, policy, &config) {
                        Ok(run) => run.score == truth,
                        Err(Error::BandEscape { .. }) => false,
                        Err(e) => return Err(e),
                    };
                    flags.push(hit);
                }
            }
            Ok(flags)
        })?;
        for (a, &adaptive) in req.adaptive.iter().enumerate() {
            let cells: Vec<String> = (0..policies.len())
                .map(|c| {
                    let n = hits.iter().filter(|f| f[a * policies.len() + c]).count();
                    format!("{:.4}", n as f64 / req.count as f64)
                })
                .collect();
            let mode = if adaptive { "on" } else { "off" };
            write_line(
                out,
                &format!("{},{mode},{},{},{}", profile.name, req.length, req.count, cells.join(",")),
            )?;
        }
    }
    Ok(())
}

/// Column order of the `pim` CSV.
pub const PIM_COLUMNS: &str = "reference_len,query_len,pairs,bandwidth,bits,parallelism,iterations,cycles_per_read,\
latency_s,reads_per_s,energy_per_read,energy_total,cells_per_s,tbm_cells_used,tbm_capacity,batches,total_s,\
writes_per_cell,rows_per_iteration,lifetime_alignments,error";

fn cmd_pim(
    settings: &Settings,
    scheme: ScoringScheme,
    lengths: &[usize],
    query_len: Option<usize>,
    pairs: u64,
    out: &mut dyn Write,
) -> Result<()> {
    write_line(out, PIM_COLUMNS)?;
    for &reference_len in lengths {
        let workload = Workload {
            pairs,
            reference_len,
            query_len: query_len.unwrap_or(reference_len),
            scheme,
        };
        let prefix = format!("{},{},{}", workload.reference_len, workload.query_len, pairs);
        let arch = &settings.config.arch;
        let row = estimate_run(&workload, &settings.policy, arch)
            .and_then(|r| Ok((r, estimate_write_traffic(&workload, &settings.policy, arch)?)));
        let line = match row {
            Ok((r, t)) => format!(
                "{prefix},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},",
                r.bandwidth,
                r.bits,
                r.parallelism,
                r.iterations,
                r.cycles_per_read,
                r.latency_s,
                r.reads_per_s,
                r.energy_per_read,
                r.energy_total,
                r.cells_per_s,
                r.tbm_cells_used,
                r.tbm_capacity,
                r.batches,
                r.total_s,
                r.writes_per_cell,
                t.rows_per_iteration,
                t.lifetime_alignments.map(|v| v.to_string()).unwrap_or_default(),
            ),
            Err(e) => format!("{prefix}{},{}", ",".repeat(17), csv_field(&e.to_string())),
        };
        write_line(out, &line)?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `LO-HI` (inclusive) or a comma-separated list of values.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidConfig(format!("range {s:?} must be LO-HI or a comma-separated list"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    let values: Vec<usize> = match s.split_once('-') {
        Some((lo, hi)) => (num(lo)?..=num(hi)?).collect(),
        None => s.split(',').map(num).collect::<Result<_>>()?,
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

pub const DSE_COLUMNS: &str = "axis,value,length,bandwidth,parallelism,reads_per_s,peripheral_cost,reads_per_s_per_cost";

fn cmd_dse(
    settings: &Settings,
    axis: DseAxis,
    values: &[usize],
    lengths: &[usize],
    workload: &Workload,
    out: &mut dyn Write,
) -> Result<()> {
    write_line(out, DSE_COLUMNS)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for row in dse_sweep(axis, values, lengths, workload, &settings.policy, &settings.config.arch) {
        write_line(
            out,
            &format!(
                "{},{},{},{},{},{},{},{}",
                row.axis.name(),
                row.value,
                row.length,
                row.bandwidth,
                opt(row.parallelism.map(|v| v.to_string())),
                opt(row.reads_per_s.map(|v| v.to_string())),
                row.peripheral_cost,
                opt(row.reads_per_s_per_cost.map(|v| v.to_string())),
            ),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("pimalign").chain(args.iter().copied())).unwrap();
        let mut out = Vec::new();
        run(&cli, &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    fn pairs_file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn align_identical_pairs_score_twice_length() {
        let f = pairs_file("a\tACGTACGT\tACGTACGT\nb\tGGGG\tGGGG\n");
        let out = run_args(&["align", f.path().to_str().unwrap()]).unwrap();
        let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0]["score"], 16);
        assert_eq!(lines[0]["cigar"], "8M");
        assert_eq!(lines[1]["score"], 8);
        assert_eq!(lines[1]["band_escape"], false);
        assert!(lines[0].get("oracle_score").is_none());
    }

    #[test]
    fn oracle_flag_adds_match() {
        let f = pairs_file("a\tACGTACGTAC\tACGAACGTTAC\n");
        let out = run_args(&["align", "--oracle", f.path().to_str().unwrap()]).unwrap();
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["match"], v["score"] == v["oracle_score"]);
        assert_eq!(v["match"], true);
    }

    #[test]
    fn editdist_without_traceback_allocates_nothing() {
        let f = pairs_file("a\tACGTACGT\tACGTACGT\nb\tACGTTCGT\tACGTCGT\n");
        let path = f.path().to_str().unwrap();
        let with: Vec<serde_json::Value> = run_args(&["editdist", path])
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(with[0]["distance"], 0);
        assert!(with[0]["traceback_cells"].as_u64().unwrap() > 0);
        let without: Vec<serde_json::Value> = run_args(&["editdist", "--no-traceback", "--oracle", path])
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        for v in &without {
            assert_eq!(v["traceback_cells"], 0);
            assert!(v["cigar"].is_null());
            assert_eq!(v["match"], true);
        }
        assert_eq!(without[1]["distance"], 1);
    }

    #[test]
    fn parse_errors_surface() {
        let f = pairs_file("a\tACGT\tACGT\nb\tACXT\tACGT\n");
        let err = run_args(&["align", f.path().to_str().unwrap()]).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }

    #[test]
    fn flags_override_config() {
        let mut cfg = tempfile::NamedTempFile::new().unwrap();
        cfg.write_all(b"seed = 5\n[band]\nbase_bandwidth = 20\nadaptive = false\n").unwrap();
        let common = CommonArgs {
            config: Some(cfg.path().into()),
            ..Default::default()
        };
        let s = Settings::resolve(&common).unwrap();
        assert_eq!((s.seed, s.policy.base_bandwidth(), s.banded.direction.adaptive), (5, 20, false));
        let common = CommonArgs {
            config: Some(cfg.path().into()),
            seed: Some(9),
            w: Some(40),
            adaptive: Some(Switch::On),
            ..Default::default()
        };
        let s = Settings::resolve(&common).unwrap();
        assert_eq!((s.seed, s.policy.base_bandwidth(), s.banded.direction.adaptive), (9, 40, true));
        let s = Settings::resolve(&CommonArgs::default()).unwrap();
        assert_eq!(s.seed, DEFAULT_SEED);
        assert_eq!(s.policy, BandPolicy::default());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2-4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("32,64").unwrap(), vec![32, 64]);
        assert!(parse_range("4-2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn pim_reports_capacity_per_row() {
        let out = run_args(&["pim", "--length", "150,100000000"]).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], PIM_COLUMNS);
        let n = PIM_COLUMNS.split(',').count();
        assert_eq!(lines[1].split(',').count(), n);
        assert!(lines[1].ends_with(','));
        assert!(lines[2].contains("parallelism"), "{}", lines[2]);
    }

    #[test]
    fn dse_rows_per_value_and_length() {
        let out = run_args(&["dse", "--axis", "tbms_per_tile", "--range", "1-3", "--lengths", "2000"]).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], DSE_COLUMNS);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("tbms_per_tile,1,2000,"));
    }
}
