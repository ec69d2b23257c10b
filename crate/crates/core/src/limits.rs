use std::str::FromStr;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};

/// Caps on every exhaustive search in the workbench.
///
/// Overridable through the `WB_LIMITS` environment variable, e.g.
/// `WB_LIMITS=max_maps=1000000,max_terms=800`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Upper bound on `|Y|^|X|` when enumerating morphisms `X → Y`.
    pub max_maps: u128,
    /// Upper bound on the size of a depth-bounded term universe that is
    /// run through the deduction engine.
    pub max_terms: usize,
    /// Upper bound on the number of terms merely enumerated (no deduction).
    pub max_enumerated_terms: usize,
    /// Largest carrier considered when building products and cotensors.
    pub max_carrier: usize,
    /// Size of the test objects used by the bound-relative graph injection check.
    pub gra_injection_bound: usize,
    /// Distances used when enumerating metric test objects.
    pub met_grid: Vec<Dist>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_maps: 1 << 24,
            max_terms: 1200,
            max_enumerated_terms: 200_000,
            max_carrier: 64,
            gra_injection_bound: 2,
            met_grid: vec![Dist::int(1), Dist::int(2), Dist::Inf],
        }
    }
}

impl Limits {
    /// Defaults, overridden by `WB_LIMITS` when it is set.
    pub fn from_env() -> Result<Limits> {
        match std::env::var("WB_LIMITS") {
            Ok(s) => s.parse(),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn check_maps(&self, what: &'static str, dom: usize, cod: usize) -> Result<()> {
        let requested = (cod as u128).checked_pow(dom as u32).unwrap_or(u128::MAX);
        if requested > self.max_maps {
            return Err(Error::SizeLimitExceeded {
                what,
                requested,
                cap: self.max_maps,
            });
        }
        Ok(())
    }

    pub fn check_carrier(&self, what: &'static str, size: usize) -> Result<()> {
        if size > self.max_carrier {
            return Err(Error::SizeLimitExceeded {
                what,
                requested: size as u128,
                cap: self.max_carrier as u128,
            });
        }
        Ok(())
    }
}

impl FromStr for Limits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Limits> {
        let mut limits = Limits::default();
        for item in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Unsupported(format!("WB_LIMITS entry `{item}`")))?;
            let bad = || Error::Unsupported(format!("WB_LIMITS value `{item}`"));
            match key.trim() {
                "max_maps" => limits.max_maps = value.parse().map_err(|_| bad())?,
                "max_terms" => limits.max_terms = value.parse().map_err(|_| bad())?,
                "max_enumerated_terms" => {
                    limits.max_enumerated_terms = value.parse().map_err(|_| bad())?
                }
                "max_carrier" => limits.max_carrier = value.parse().map_err(|_| bad())?,
                "gra_injection_bound" => {
                    limits.gra_injection_bound = value.parse().map_err(|_| bad())?
                }
                "met_grid" => {
                    limits.met_grid = value
                        .split(';')
                        .map(|d| d.parse::<Dist>().map_err(|_| bad()))
                        .collect::<Result<_>>()?
                }
                _ => return Err(bad()),
            }
        }
        Ok(limits)
    }
}
