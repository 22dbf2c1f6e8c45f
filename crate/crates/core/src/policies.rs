//! Spectrum allocation policies: pick a concrete slot out of a usable slice set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::spectrum::{Fragment, SliceSet, Slot, SpectrumError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllocationPolicy {
    /// Lowest-numbered fragment that fits.
    First,
    /// Smallest fragment that fits, lowest start on ties.
    Fittest,
}

impl AllocationPolicy {
    pub const ALL: [AllocationPolicy; 2] = [AllocationPolicy::First, AllocationPolicy::Fittest];

    pub fn name(self) -> &'static str {
        match self {
            AllocationPolicy::First => "first",
            AllocationPolicy::Fittest => "fittest",
        }
    }

    pub fn allocate(self, sigma: &SliceSet, slices: usize) -> Result<Slot, SpectrumError> {
        match self {
            AllocationPolicy::First => alloc_first(sigma, slices),
            AllocationPolicy::Fittest => alloc_fittest(sigma, slices),
        }
    }
}

impl fmt::Display for AllocationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AllocationPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(AllocationPolicy::First),
            "fittest" => Ok(AllocationPolicy::Fittest),
            other => Err(format!(
                "unknown policy {other:?} (expected first or fittest)"
            )),
        }
    }
}

fn unsupported(sigma: &SliceSet, slices: usize) -> SpectrumError {
    SpectrumError::Unsupported {
        set: sigma.clone(),
        slices,
    }
}

fn anchored(fragment: Fragment, slices: usize) -> Slot {
    Slot::new(fragment.start, slices)
}

pub fn alloc_first(sigma: &SliceSet, slices: usize) -> Result<Slot, SpectrumError> {
    if slices == 0 {
        return Err(unsupported(sigma, slices));
    }
    sigma
        .fragments()
        .find(|f| f.len >= slices)
        .map(|f| anchored(f, slices))
        .ok_or_else(|| unsupported(sigma, slices))
}

pub fn alloc_fittest(sigma: &SliceSet, slices: usize) -> Result<Slot, SpectrumError> {
    if slices == 0 {
        return Err(unsupported(sigma, slices));
    }
    sigma
        .fragments()
        .filter(|f| f.len >= slices)
        // fragments arrive in ascending start, so min_by_key keeps the lowest on ties
        .min_by_key(|f| f.len)
        .map(|f| anchored(f, slices))
        .ok_or_else(|| unsupported(sigma, slices))
}
