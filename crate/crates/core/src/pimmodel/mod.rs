//! Analytical cost model of a processing-in-memory aligner.
//!
//! Each tile holds one compute subarray that runs the banded recurrence
//! bit-serially on `k` read pairs side by side, and `t` traceback subarrays
//! that store the per-iteration flags.

pub mod dse;
pub mod estimate;
pub mod ops;
pub mod schedule;

pub use dse::{dse_sweep, DseAxis, DseRow};
pub use estimate::{
    estimate_run, estimate_write_traffic, max_parallelism, rows_written_per_iteration, CostReport, Workload,
    WriteTraffic,
};
pub use ops::{nor_full_adder, OpCost, OpCosts, Primitive};
pub use schedule::{step_cost, wavefront_step_cost, Schedule, StepCost};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArchConfig {
    pub tiles: usize,
    pub subarray_rows: usize,
    pub subarray_cols: usize,
    pub tbms_per_tile: usize,
    /// Column multiplexer output width in bits.
    pub column_width: usize,
    pub clock_hz: f64,
    pub op_costs: OpCosts,
    /// Writes a cell survives.
    pub write_endurance: f64,
    /// Fixed cycles of the traceback encoder after each column readout.
    pub encoder_cycles: u64,
    pub readout_energy_per_cycle: f64,
    /// Relative peripheral cost per multiplexer output bit, used by the width sweep.
    pub peripheral_cost_per_bit: f64,
}

impl Default for ArchConfig {
    fn default() -> Self {
        Self {
            tiles: 64,
            subarray_rows: 1024,
            subarray_cols: 1024,
            tbms_per_tile: 15,
            column_width: 128,
            clock_hz: 5e8,
            op_costs: OpCosts::default(),
            write_endurance: 1e12,
            encoder_cycles: 1,
            readout_energy_per_cycle: 1.0,
            peripheral_cost_per_bit: 1.0,
        }
    }
}

impl ArchConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("tiles", self.tiles),
            ("subarray_rows", self.subarray_rows),
            ("subarray_cols", self.subarray_cols),
            ("tbms_per_tile", self.tbms_per_tile),
            ("column_width", self.column_width),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidConfig(format!("{name} must be positive")));
        }
        if !(self.clock_hz > 0.0 && self.write_endurance > 0.0) {
            return Err(Error::InvalidConfig("clock_hz and write_endurance must be positive".into()));
        }
        Ok(())
    }
}
