//! Per-iteration operation schedules.
//!
//! A schedule is a list of stages run one after another. A stage holds
//! branches that run side by side in different rows of the array; its latency
//! is the slowest branch and its energy the sum over every operation. All band
//! cells sit in different columns and update at once, so no cost depends on
//! the bandwidth.

use serde::Serialize;

use super::ops::Primitive::{self, Add, Copy, Max, Sub, Xor};
use super::ArchConfig;

/// Operand width of absolute scores.
pub const FULL_PRECISION_BITS: u32 = 32;
/// Width of a 2-bit base code.
const BASE_BITS: u32 = 2;
/// Traceback flag bits stored per cell (2-bit op code plus two gap-extension bits).
pub const FLAG_BITS: u64 = 4;

pub type Branch = Vec<(Primitive, u32)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub branches: Vec<Branch>,
}

impl Stage {
    fn serial(name: &'static str, ops: Branch) -> Self {
        Self { name, branches: vec![ops] }
    }

    pub fn cost(&self, config: &ArchConfig) -> (u64, f64) {
        let branch_cost = |b: &Branch| -> (u64, f64) {
            b.iter().fold((0, 0.0), |(c, e), &(p, bits)| {
                let (dc, de) = config.op_costs.op_cost(p, bits);
                (c + dc, e + de)
            })
        };
        let costs: Vec<_> = self.branches.iter().map(branch_cost).collect();
        let cycles = costs.iter().map(|c| c.0).max().unwrap_or(0);
        (cycles, costs.iter().map(|c| c.1).sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Absolute 32-bit scores, one operation at a time.
    Original,
    /// Shifted differences of the given width, with independent updates side by side.
    Parallel { bits: u32 },
}

fn repeat(p: Primitive, bits: u32, times: usize) -> Branch {
    vec![(p, bits); times]
}

impl Schedule {
    pub fn forward_stages(self) -> Vec<Stage> {
        match self {
            Self::Original => {
                let w = FULL_PRECISION_BITS;
                let mut ops = vec![(Xor, BASE_BITS)];
                ops.extend(repeat(Sub, w, 4));
                ops.extend(repeat(Max, w, 4));
                ops.push((Add, w));
                vec![Stage::serial("update", ops)]
            }
            Self::Parallel { bits: b } => vec![
                Stage::serial("substitution", vec![(Xor, BASE_BITS), (Add, b)]),
                Stage::serial("candidate_max", repeat(Max, b, 2)),
                Stage::serial("fan_out", repeat(Copy, b, 4)),
                Stage {
                    name: "differences",
                    branches: vec![
                        vec![(Sub, b)],
                        vec![(Sub, b)],
                        vec![(Add, b), (Max, b), (Sub, b)],
                        vec![(Add, b), (Max, b), (Sub, b)],
                    ],
                },
                Stage::serial("edge_score", vec![(Sub, b), (Add, FULL_PRECISION_BITS)]),
            ],
        }
    }

    /// Flag generation; the column readout is added by [`step_cost`].
    pub fn traceback_stages(self) -> Vec<Stage> {
        match self {
            Self::Original => vec![Stage::serial("flags", repeat(Xor, FULL_PRECISION_BITS, 3))],
            Self::Parallel { bits: b } => {
                let mut ops = repeat(Sub, b, 2);
                ops.extend(repeat(Xor, b, 4));
                vec![Stage::serial("flags", ops)]
            }
        }
    }

    /// Dependent chain from one cell's inputs to the values its neighbours need next.
    pub fn critical_path(self) -> Branch {
        match self {
            Self::Original => {
                let w = FULL_PRECISION_BITS;
                vec![(Sub, w), (Sub, w), (Max, w), (Max, w), (Max, w)]
            }
            Self::Parallel { bits: b } => vec![(Max, b), (Max, b), (Max, b), (Sub, b)],
        }
    }

    pub fn critical_path_bits(self) -> u32 {
        self.critical_path().iter().map(|&(_, bits)| bits).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepCost {
    pub forward_cycles: u64,
    pub forward_energy: f64,
    pub traceback_cycles: u64,
    pub traceback_energy: f64,
}

impl StepCost {
    pub fn cycles(&self) -> u64 {
        self.forward_cycles + self.traceback_cycles
    }
    pub fn energy(&self) -> f64 {
        self.forward_energy + self.traceback_energy
    }
}

/// Cycles to stream one iteration's flags out through the column multiplexer, plus the encoder.
pub fn readout_cycles(config: &ArchConfig) -> u64 {
    (FLAG_BITS * config.subarray_cols as u64).div_ceil(config.column_width as u64) + config.encoder_cycles
}

pub fn step_cost(schedule: Schedule, config: &ArchConfig) -> StepCost {
    let sum = |stages: Vec<Stage>| {
        stages.iter().map(|s| s.cost(config)).fold((0, 0.0), |(c, e), (dc, de)| (c + dc, e + de))
    };
    let (fc, fe) = sum(schedule.forward_stages());
    let (tc, te) = sum(schedule.traceback_stages());
    let readout = readout_cycles(config);
    StepCost {
        forward_cycles: fc,
        forward_energy: fe,
        traceback_cycles: tc + readout,
        traceback_energy: te + readout as f64 * config.readout_energy_per_cycle,
    }
}

/// Cost of one banded iteration at operand width `bits`.
pub fn wavefront_step_cost(bits: u32, config: &ArchConfig) -> StepCost {
    step_cost(Schedule::Parallel { bits }, config)
}
