//! Sequence-level parallelism, whole-run throughput/energy and write wear.

use serde::Serialize;

use super::schedule::wavefront_step_cost;
use super::ArchConfig;
use crate::band::BandPolicy;
use crate::error::{Error, Result};
use crate::scoring::ScoringScheme;

/// Read pairs one compute subarray can hold at once: limited by one column
/// per band cell, and by traceback capacity `rows * cols * t >= 2 * length * B * k`.
pub fn max_parallelism(length: usize, bandwidth: usize, tbms: usize, config: &ArchConfig) -> Result<usize> {
    if bandwidth == 0 || tbms == 0 {
        return Err(Error::InvalidWorkload("bandwidth and TBM count must be positive".into()));
    }
    let by_columns = config.subarray_cols / bandwidth;
    let capacity = (config.subarray_rows * config.subarray_cols) as u128 * tbms as u128;
    let per_pair = 2 * length as u128 * bandwidth as u128;
    let by_traceback = capacity.checked_div(per_pair).unwrap_or(u128::MAX);
    let k = (by_columns as u128).min(by_traceback) as usize;
    if k == 0 {
        return Err(Error::CapacityExceeded { length, bandwidth, tbms });
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workload {
    pub pairs: u64,
    pub reference_len: usize,
    pub query_len: usize,
    pub scheme: ScoringScheme,
}

impl Workload {
    pub fn iterations(&self) -> usize {
        self.reference_len + self.query_len
    }
    /// Length used in the capacity bound: half the iteration count, rounded up.
    pub fn capacity_length(&self) -> usize {
        self.iterations().div_ceil(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub bandwidth: usize,
    pub bits: u32,
    pub parallelism: usize,
    pub iterations: usize,
    pub cycles_per_read: u64,
    pub latency_s: f64,
    pub reads_per_s: f64,
    pub energy_per_read: f64,
    pub energy_total: f64,
    pub cells_per_s: f64,
    pub tbm_cells_used: u64,
    pub tbm_capacity: u64,
    pub batches: u64,
    pub total_s: f64,
    pub writes_per_cell: f64,
}

pub fn estimate_run(workload: &Workload, policy: &BandPolicy, config: &ArchConfig) -> Result<CostReport> {
    config.validate()?;
    if workload.reference_len == 0 || workload.query_len == 0 {
        return Err(Error::InvalidWorkload("sequence lengths must be positive".into()));
    }
    let bandwidth = policy.effective_bandwidth(workload.reference_len, workload.query_len);
    let bits = workload.scheme.min_bit_width();
    let k = max_parallelism(workload.capacity_length(), bandwidth, config.tbms_per_tile, config)?;
    let iterations = workload.iterations();
    let step = wavefront_step_cost(bits, config);
    let cycles_per_read = iterations as u64 * step.cycles();
    let latency_s = cycles_per_read as f64 / config.clock_hz;
    let reads_per_s = (config.tiles * k) as f64 / latency_s;
    let energy_per_read = iterations as f64 * step.energy();
    let batches = workload.pairs.div_ceil((config.tiles * k) as u64);
    let traffic = per_batch_writes(workload, bits, config);
    Ok(CostReport {
        bandwidth,
        bits,
        parallelism: k,
        iterations,
        cycles_per_read,
        latency_s,
        reads_per_s,
        energy_per_read,
        energy_total: energy_per_read * workload.pairs as f64,
        cells_per_s: reads_per_s * (iterations * bandwidth) as f64,
        tbm_cells_used: (iterations * bandwidth * k) as u64,
        tbm_capacity: (config.subarray_rows * config.subarray_cols * config.tbms_per_tile) as u64,
        batches,
        total_s: batches as f64 * latency_s,
        writes_per_cell: batches as f64 * traffic,
    })
}

/// Compute-subarray rows rewritten by one iteration: two 2-bit base rows
/// plus nine `bits`-wide values (A', the four differences, s', and three
/// intermediates of the gap updates).
pub fn rows_written_per_iteration(bits: u32) -> u64 {
    4 + 9 * bits as u64
}

/// Writes per compute-subarray cell for one batch, with writes spread evenly over all rows.
fn per_batch_writes(workload: &Workload, bits: u32, config: &ArchConfig) -> f64 {
    (workload.iterations() as u64 * rows_written_per_iteration(bits)) as f64 / config.subarray_rows as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WriteTraffic {
    pub rows_per_iteration: u64,
    /// Writes each compute-subarray cell takes per batch of `tiles * k` alignments.
    pub writes_per_cell_per_batch: f64,
    /// Alignments before the endurance limit; `None` when nothing is written.
    pub lifetime_alignments: Option<f64>,
}

pub fn estimate_write_traffic(workload: &Workload, policy: &BandPolicy, config: &ArchConfig) -> Result<WriteTraffic> {
    config.validate()?;
    let bits = workload.scheme.min_bit_width();
    let rows_per_iteration = rows_written_per_iteration(bits);
    if workload.iterations() == 0 {
        return Ok(WriteTraffic {
            rows_per_iteration,
            writes_per_cell_per_batch: 0.0,
            lifetime_alignments: None,
        });
    }
    let bandwidth = policy.effective_bandwidth(workload.reference_len.max(1), workload.query_len.max(1));
    let k = max_parallelism(workload.capacity_length(), bandwidth, config.tbms_per_tile, config)?;
    let writes = per_batch_writes(workload, bits, config);
    Ok(WriteTraffic {
        rows_per_iteration,
        writes_per_cell_per_batch: writes,
        lifetime_alignments: Some(config.write_endurance / writes * (k * config.tiles) as f64),
    })
}
