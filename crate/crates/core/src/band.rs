//! Length-adaptive bandwidth.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact non-negative rational, parsed from decimals such as `0.01` or fractions such as `1/100`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Slope {
    num: u64,
    den: u64,
}

impl Slope {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidPolicy("slope denominator is zero".into()));
        }
        Ok(Self { num, den })
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for Slope {
    fn default() -> Self {
        Self { num: 1, den: 100 }
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPolicy(format!("cannot parse slope {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            return Slope::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Slope::new(int * den + frac_v, den)
    }
}

impl TryFrom<String> for Slope {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Slope> for String {
    fn from(s: Slope) -> String {
        s.to_string()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `B = min(w + slope * L, cap)`, optionally rounded up to a multiple of `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandPolicy {
    base_bandwidth: usize,
    slope: Slope,
    cap: usize,
    round_to_multiple: bool,
}

impl BandPolicy {
    pub fn new(base_bandwidth: usize, slope: Slope, cap: usize, round_to_multiple: bool) -> Result<Self> {
        if base_bandwidth == 0 {
            return Err(Error::InvalidPolicy("base bandwidth must be >= 1".into()));
        }
        if cap < base_bandwidth {
            return Err(Error::InvalidPolicy(format!(
                "cap {cap} is below base bandwidth {base_bandwidth}"
            )));
        }
        Ok(Self {
            base_bandwidth,
            slope,
            cap,
            round_to_multiple,
        })
    }

    /// Default slope 0.01 and cap 100 with rounding.
    pub fn with_base(base_bandwidth: usize) -> Result<Self> {
        Self::new(base_bandwidth, Slope::default(), 100, true)
    }

    /// A policy that always yields exactly `bandwidth`.
    pub fn fixed(bandwidth: usize) -> Result<Self> {
        Self::new(bandwidth, Slope::new(0, 1)?, bandwidth, false)
    }

    pub fn base_bandwidth(&self) -> usize {
        self.base_bandwidth
    }
    pub fn slope(&self) -> Slope {
        self.slope
    }
    pub fn cap(&self) -> usize {
        self.cap
    }
    pub fn round_to_multiple(&self) -> bool {
        self.round_to_multiple
    }

    pub fn compute_bandwidth(&self, length: usize) -> usize {
        let w = self.base_bandwidth as u128;
        let den = self.slope.den as u128;
        // raw = min(w + slope*L, cap) as the fraction raw_num / den
        let raw_num = (w * den + self.slope.num as u128 * length as u128).min(self.cap as u128 * den);
        let b = if self.round_to_multiple {
            raw_num.div_ceil(w * den) * w
        } else {
            raw_num.div_ceil(den)
        };
        (b as usize).clamp(self.base_bandwidth, self.cap)
    }

    /// Bandwidth actually used for an `m x n` alignment: the policy value at
    /// `max(m, n)`, clamped to the longest anti-diagonal `min(m, n) + 1`.
    pub fn effective_bandwidth(&self, m: usize, n: usize) -> usize {
        self.compute_bandwidth(m.max(n)).min(m.min(n) + 1)
    }
}

impl Default for BandPolicy {
    fn default() -> Self {
        Self::with_base(10).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(BandPolicy::with_base(30).unwrap().compute_bandwidth(10_000), 100);
        assert_eq!(BandPolicy::with_base(10).unwrap().compute_bandwidth(1), 20);
        assert_eq!(BandPolicy::with_base(100).unwrap().compute_bandwidth(1), 100);
        let unrounded = BandPolicy::new(10, Slope::default(), 100, false).unwrap();
        assert_eq!(unrounded.compute_bandwidth(1), 11);
        assert_eq!(unrounded.compute_bandwidth(700), 17);
        assert_eq!(BandPolicy::with_base(10).unwrap().compute_bandwidth(2000), 30);
        assert_eq!(BandPolicy::with_base(30).unwrap().compute_bandwidth(2000), 60);
        assert_eq!(BandPolicy::with_base(50).unwrap().compute_bandwidth(2000), 100);
    }

    #[test]
    fn slope_parsing() {
        assert_eq!("0.01".parse::<Slope>().unwrap(), Slope::new(1, 100).unwrap());
        assert_eq!("1/100".parse::<Slope>().unwrap(), Slope::new(1, 100).unwrap());
        assert_eq!("2".parse::<Slope>().unwrap(), Slope::new(2, 1).unwrap());
        assert!("x".parse::<Slope>().is_err());
        assert!("1/0".parse::<Slope>().is_err());
    }

    #[test]
    fn rejects_bad_policies() {
        assert!(BandPolicy::with_base(0).is_err());
        assert!(BandPolicy::new(20, Slope::default(), 10, true).is_err());
    }

    #[test]
    fn effective_bandwidth_clamps_to_short_axis() {
        let p = BandPolicy::with_base(50).unwrap();
        assert_eq!(p.effective_bandwidth(10, 30), 11);
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(w in 1usize..120, extra in 0usize..200, l in 1usize..50_000, dl in 0usize..5000, round: bool) {
            let p = BandPolicy::new(w, Slope::default(), w + extra, round).unwrap();
            let a = p.compute_bandwidth(l);
            let b = p.compute_bandwidth(l + dl);
            prop_assert!(a <= b);
            prop_assert!(w <= a && b <= p.cap());
        }
    }
}
