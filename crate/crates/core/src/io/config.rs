//! TOML run configuration. Every table rejects unknown keys.
//!
//! ```toml
//! seed = 42
//! threads = 4
//!
//! [scoring]
//! match_score = 2
//! mismatch_penalty = 4
//! gap_open = 4
//! gap_extend = 2
//!
//! [band]
//! base_bandwidth = 10
//! slope = "1/100"
//! cap = 100
//! round_to_multiple = true
//! adaptive = true
//! tie = "down"
//! coverage_guard = true
//!
//! [profile]
//! name = "ONT_2D"          # or give all three rates for a custom profile
//!
//! [arch]
//! tiles = 64
//! tbms_per_tile = 15
//! ```

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use super::open;
use crate::band::{BandPolicy, Slope};
use crate::banded::{BandedConfig, DirectionRule};
use crate::error::{Error, Result};
use crate::pimmodel::ArchConfig;
use crate::readsim::ErrorProfile;
use crate::scoring::ScoringScheme;
use crate::types::Direction;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub scoring: ScoringSection,
    pub band: BandSection,
    pub profile: Option<ProfileSection>,
    pub arch: ArchConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringSection {
    pub match_score: u32,
    pub mismatch_penalty: u32,
    pub gap_open: u32,
    pub gap_extend: u32,
}

impl Default for ScoringSection {
    fn default() -> Self {
        let s = ScoringScheme::default();
        Self {
            match_score: s.match_score(),
            mismatch_penalty: s.mismatch_penalty(),
            gap_open: s.gap_open(),
            gap_extend: s.gap_extend(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandSection {
    pub base_bandwidth: usize,
    pub slope: Slope,
    pub cap: usize,
    pub round_to_multiple: bool,
    pub adaptive: bool,
    /// `"down"` or `"right"`: move taken when both band edges score the same.
    pub tie: String,
    pub coverage_guard: bool,
}

impl Default for BandSection {
    fn default() -> Self {
        let p = BandPolicy::default();
        let rule = DirectionRule::default();
        Self {
            base_bandwidth: p.base_bandwidth(),
            slope: p.slope(),
            cap: p.cap(),
            round_to_multiple: p.round_to_multiple(),
            adaptive: rule.adaptive,
            tie: "down".into(),
            coverage_guard: rule.coverage_guard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub name: String,
    pub substitution_rate: Option<f64>,
    pub insertion_rate: Option<f64>,
    pub deletion_rate: Option<f64>,
    /// Probability that an insertion run continues; defaults to the insertion rate.
    pub insertion_continuation: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("{origin}: {}", e.message())))?;
        config.arch.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut text = String::new();
        open(path)?
            .read_to_string(&mut text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn scheme(&self) -> Result<ScoringScheme> {
        let s = &self.scoring;
        ScoringScheme::new(s.match_score, s.mismatch_penalty, s.gap_open, s.gap_extend)
    }

    pub fn policy(&self) -> Result<BandPolicy> {
        let b = &self.band;
        BandPolicy::new(b.base_bandwidth, b.slope, b.cap, b.round_to_multiple)
    }

    pub fn banded_config(&self) -> Result<BandedConfig> {
        let tie = match self.band.tie.to_ascii_lowercase().as_str() {
            "down" => Direction::Down,
            "right" => Direction::Right,
            other => return Err(Error::InvalidConfig(format!("band.tie must be \"down\" or \"right\", got {other:?}"))),
        };
        Ok(BandedConfig {
            direction: DirectionRule {
                adaptive: self.band.adaptive,
                tie,
                coverage_guard: self.band.coverage_guard,
            },
            traceback: true,
        })
    }

    /// The configured error profile, if any, plus its insertion continuation override.
    pub fn error_profile(&self) -> Result<Option<(ErrorProfile, Option<f64>)>> {
        let Some(p) = &self.profile else { return Ok(None) };
        let profile = match (p.substitution_rate, p.insertion_rate, p.deletion_rate) {
            (None, None, None) => ErrorProfile::by_name(&p.name)?,
            (Some(s), Some(i), Some(d)) => ErrorProfile::new(p.name.clone(), s, i, d)?,
            _ => return Err(Error::InvalidProfile("give all three rates or none".into())),
        };
        if let Some(c) = p.insertion_continuation {
            if !(0.0..1.0).contains(&c) {
                return Err(Error::InvalidProfile("insertion_continuation must lie in [0, 1)".into()));
            }
        }
        Ok(Some((profile, p.insertion_continuation)))
    }
}
