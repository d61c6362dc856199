//! NOR-composed logic and the per-primitive cost table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-input NOR, the only gate the memory array evaluates natively.
#[inline]
pub fn nor(inputs: &[bool]) -> bool {
    !inputs.iter().any(|&x| x)
}

/// One-bit full adder built only from NOR gates. Returns `(sum, carry)`.
pub fn nor_full_adder(a: bool, b: bool, c: bool) -> (bool, bool) {
    let carry = nor(&[nor(&[a, b]), nor(&[b, c]), nor(&[c, a])]);
    let (na, nb, nc) = (nor(&[a]), nor(&[b]), nor(&[c]));
    let all_set = nor(&[na, nb, nc]);
    let exactly_one = nor(&[nor(&[a, b, c]), carry]);
    let sum = nor(&[nor(&[all_set, exactly_one])]);
    (sum, carry)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Xor,
    Add,
    Sub,
    Max,
    Copy,
    WriteRow,
}

impl Primitive {
    pub const ALL: [Primitive; 6] = [Self::Xor, Self::Add, Self::Sub, Self::Max, Self::Copy, Self::WriteRow];

    pub fn name(self) -> &'static str {
        match self {
            Self::Xor => "XOR",
            Self::Add => "ADD",
            Self::Sub => "SUB",
            Self::Max => "MAX",
            Self::Copy => "COPY",
            Self::WriteRow => "WRITE_ROW",
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Primitive {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownPrimitive(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpCost {
    pub cycles_per_bit: u64,
    pub energy_per_bit: f64,
}

impl OpCost {
    /// Energy proportional to cycles with unit coefficient.
    pub const fn unit(cycles_per_bit: u64) -> Self {
        Self {
            cycles_per_bit,
            energy_per_bit: cycles_per_bit as f64,
        }
    }
}

/// Cycle and energy cost of each primitive, per bit of operand width.
///
/// Defaults: XOR 2 cycles, ADD 6 (one ripple stage per bit), SUB = ADD plus
/// 2 for the inversion, MAX = SUB plus 1 for the select, COPY and WRITE_ROW 1
/// per row written.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpCosts {
    pub xor: OpCost,
    pub add: OpCost,
    pub sub: OpCost,
    pub max: OpCost,
    pub copy: OpCost,
    pub write_row: OpCost,
}

impl Default for OpCosts {
    fn default() -> Self {
        Self {
            xor: OpCost::unit(2),
            add: OpCost::unit(6),
            sub: OpCost::unit(8),
            max: OpCost::unit(9),
            copy: OpCost::unit(1),
            write_row: OpCost::unit(1),
        }
    }
}

impl OpCosts {
    pub fn get(&self, primitive: Primitive) -> OpCost {
        match primitive {
            Primitive::Xor => self.xor,
            Primitive::Add => self.add,
            Primitive::Sub => self.sub,
            Primitive::Max => self.max,
            Primitive::Copy => self.copy,
            Primitive::WriteRow => self.write_row,
        }
    }

    /// `(cycles, energy)` of one `bits`-wide operation.
    pub fn op_cost(&self, primitive: Primitive, bits: u32) -> (u64, f64) {
        let c = self.get(primitive);
        (c.cycles_per_bit * bits as u64, c.energy_per_bit * bits as f64)
    }

    /// Looks a primitive up by name.
    pub fn op_cost_by_name(&self, primitive: &str, bits: u32) -> Result<(u64, f64)> {
        Ok(self.op_cost(primitive.parse()?, bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nor_adder_matches_arithmetic() {
        for x in 0..8u8 {
            let (a, b, c) = (x & 1 != 0, x & 2 != 0, x & 4 != 0);
            let total = a as u8 + b as u8 + c as u8;
            assert_eq!(nor_full_adder(a, b, c), (total & 1 != 0, total >= 2), "inputs {a} {b} {c}");
        }
        assert_eq!(nor_full_adder(false, false, false), (false, false));
        assert_eq!(nor_full_adder(true, true, false), (false, true));
    }

    #[test]
    fn default_costs() {
        let costs = OpCosts::default();
        assert_eq!(costs.op_cost(Primitive::Xor, 1).0, 2);
        assert_eq!(costs.op_cost(Primitive::Add, 1).0, 6);
        assert_eq!(costs.op_cost(Primitive::Add, 5).0, 30);
        assert_eq!(costs.op_cost(Primitive::Sub, 5).0, 40);
        assert_eq!(costs.op_cost(Primitive::Max, 5), (45, 45.0));
        assert_eq!(costs.op_cost_by_name("write_row", 3).unwrap().0, 3);
        assert_eq!(costs.op_cost_by_name("MUL", 3), Err(Error::UnknownPrimitive("MUL".into())));
    }
}
