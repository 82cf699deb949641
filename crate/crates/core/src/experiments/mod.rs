//! Arithmetic experiments over primes `p <= B`: Frobenius factorization
//! statistics against `E_n` cycle types, orbit and Newton-iteration density
//! scans, and the conjugacy linking the two scans.
//!
//! Per-prime work runs on a dedicated rayon pool and is collected in
//! ascending prime order, so reports do not depend on the worker count.

mod chebotarev;
mod conjugacy;
mod orbits;
mod report;

pub use chebotarev::{chebotarev_scan, ChebotarevConfig, ChebotarevRecord, ChebotarevReport};
pub use conjugacy::{conjugacy_check, conjugacy_check_with, ConjugacyReport, Mobius};
pub use orbits::{
    brent_orbit, hash_orbit, newton_density_scan, newton_orbit_agreement, orbit_density_scan, AgreementReport,
    DensityConfig, DensityReport, OrbitKind, OrbitRecord, OrbitResult, RangeDensity, RangeSpec,
};
pub use report::{RunHeader, Skip, SkipReason, SCHEMA_VERSION};

pub use crate::stats::tv_distance;

use crate::error::{usage, Error, Result};

/// Runs `f` on a fresh pool with `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return usage("worker count must be positive");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Default worker count: the machine's available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}
