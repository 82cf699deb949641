use std::collections::BTreeMap;

use serde::Serialize;

/// Version of the JSON/CSV report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Reproducibility header attached to every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunHeader {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub elapsed_seconds: f64,
    pub paper_anchor: String,
}

/// Why a prime was left out of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// `p = 2` (or `p = 3` for the Newton map), excluded up front.
    ExcludedPrime,
    /// The basepoint has a denominator divisible by `p`.
    NonIntegral,
    /// The reduction of `f^n(z) - x` has a repeated factor.
    NotSquarefree,
    /// The basepoints of the two scans are not related integrally at `p`.
    ConjugacyExcluded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub prime: u64,
    pub reason: SkipReason,
}
