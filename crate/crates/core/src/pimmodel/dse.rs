//! Design-space sweeps over traceback subarrays per tile and column width.

use std::str::FromStr;

use serde::Serialize;

use super::estimate::{estimate_run, max_parallelism, Workload};
use super::ArchConfig;
use crate::band::BandPolicy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DseAxis {
    TbmsPerTile,
    ColumnWidth,
}

impl DseAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::TbmsPerTile => "tbms_per_tile",
            Self::ColumnWidth => "column_width",
        }
    }
}

impl FromStr for DseAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "tbms" | "tbms_per_tile" => Ok(Self::TbmsPerTile),
            "width" | "column_width" => Ok(Self::ColumnWidth),
            _ => Err(Error::InvalidConfig(format!("unknown sweep axis {s:?} (expected tbms_per_tile or column_width)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DseRow {
    pub axis: DseAxis,
    pub value: usize,
    pub length: usize,
    pub bandwidth: usize,
    /// Pairs per compute subarray; `None` when the traceback does not fit.
    pub parallelism: Option<usize>,
    pub reads_per_s: Option<f64>,
    pub peripheral_cost: f64,
    pub reads_per_s_per_cost: Option<f64>,
}

/// One row per (length, axis value). Each length is a square workload of
/// `length`-bp reference and query.
pub fn dse_sweep(
    axis: DseAxis,
    values: &[usize],
    lengths: &[usize],
    workload: &Workload,
    policy: &BandPolicy,
    config: &ArchConfig,
) -> Vec<DseRow> {
    let mut rows = Vec::with_capacity(values.len() * lengths.len());
    for &length in lengths {
        let w = Workload {
            reference_len: length,
            query_len: length,
            ..*workload
        };
        let bandwidth = policy.effective_bandwidth(length, length);
        for &value in values {
            let mut c = config.clone();
            match axis {
                DseAxis::TbmsPerTile => c.tbms_per_tile = value,
                DseAxis::ColumnWidth => c.column_width = value,
            }
            let parallelism = max_parallelism(length, bandwidth, c.tbms_per_tile, &c).ok();
            let reads_per_s = estimate_run(&w, policy, &c).ok().map(|r| r.reads_per_s);
            let peripheral_cost = c.column_width as f64 * c.peripheral_cost_per_bit;
            rows.push(DseRow {
                axis,
                value,
                length,
                bandwidth,
                parallelism,
                reads_per_s,
                peripheral_cost,
                reads_per_s_per_cost: reads_per_s.map(|r| r / peripheral_cost),
            });
        }
    }
    rows
}
