use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{Skip, SkipReason};
use crate::counting::{fix_ratio, FixRatio, RatioMode};
use crate::error::{capability, usage, Error, Result};
use crate::groups::{cycle_type_distribution, DistributionMode, GroupId, GroupKind};
use crate::modp::{count_roots, f_iterate_mod_p, factor_pattern, reduce_rational, PolyModP, Residue};
use crate::poly::{dagger_check, ser_rational, DaggerCertificate};
use crate::stats::{keyed_by_string, tv_distance, CycleTypeCounts};
use crate::tree::CycleType;

/// Depth limit for the scan (the group side is sampled at depth 3).
pub const CHEBOTAREV_MAX_DEPTH: u32 = 3;
/// Smallest accepted prime bound.
pub const CHEBOTAREV_MIN_BOUND: u64 = 1000;

#[derive(Clone, Debug)]
pub struct ChebotarevConfig {
    pub n: u32,
    pub x: BigRational,
    pub bound: u64,
    /// Monte-Carlo samples of `E_n` when it is too large to enumerate.
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ChebotarevRecord {
    Retained { prime: u64, pattern: CycleType, roots: usize },
    Skipped(Skip),
}

impl ChebotarevRecord {
    pub fn prime(&self) -> u64 {
        match self {
            ChebotarevRecord::Retained { prime, .. } => *prime,
            ChebotarevRecord::Skipped(s) => s.prime,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChebotarevReport {
    pub n: u32,
    #[serde(serialize_with = "ser_rational")]
    pub x: BigRational,
    pub bound: u64,
    pub retained_prime_count: usize,
    pub empirical: BTreeMap<String, f64>,
    pub group_dist: BTreeMap<String, f64>,
    /// "exact" or "monte-carlo".
    pub group_source: String,
    pub group_samples: u64,
    pub tv_distance: f64,
    /// Fraction of retained primes where `f^n(z) - x` has a root mod `p`.
    pub root_frequency: f64,
    /// Exact proportion of elements of `E_n` fixing a leaf.
    pub expected_root_frequency: String,
    pub expected_root_frequency_f64: f64,
    pub group_fixed_point_mass: f64,
    pub skipped_primes: Vec<Skip>,
    pub dagger: DaggerCertificate,
    pub warning: Option<String>,
    #[serde(skip)]
    pub records: Vec<ChebotarevRecord>,
}

fn scan_prime(n: u32, x: &BigRational, p: u64) -> Result<ChebotarevRecord> {
    let skip = |reason| Ok(ChebotarevRecord::Skipped(Skip { prime: p, reason }));
    if p == 2 {
        return skip(SkipReason::ExcludedPrime);
    }
    let Residue::Finite(xr) = reduce_rational(x, p) else {
        return skip(SkipReason::NonIntegral);
    };
    let q = f_iterate_mod_p(n, p)?.sub(&PolyModP::new(p, vec![xr]));
    let pattern = factor_pattern(&q)?;
    let Some(ct) = pattern.cycle_type() else {
        return skip(SkipReason::NotSquarefree);
    };
    let roots = count_roots(&q)?;
    if roots != pattern.linear_factors() as usize {
        return Err(Error::Invariant(format!("root count disagrees with factor pattern at p={p}")));
    }
    Ok(ChebotarevRecord::Retained { prime: p, pattern: ct, roots })
}

/// Frobenius factorization types of `f^n(z) - x` over odd primes `p <= B`,
/// compared with the cycle-type distribution of `E_n`. Runs on the current
/// rayon pool.
pub fn chebotarev_scan(cfg: &ChebotarevConfig) -> Result<ChebotarevReport> {
    let n = cfg.n;
    if n == 0 {
        return usage("depth must be at least 1");
    }
    if n > CHEBOTAREV_MAX_DEPTH {
        return capability(format!("chebotarev scan supports depth <= {CHEBOTAREV_MAX_DEPTH}, got {n}"));
    }
    if cfg.bound < CHEBOTAREV_MIN_BOUND {
        return usage(format!("bound must be at least {CHEBOTAREV_MIN_BOUND}"));
    }
    let dagger = dagger_check(&cfg.x)?;
    let warning = (!dagger.holds)
        .then(|| format!("basepoint {} fails the local (2,3) condition; E_{n} is not guaranteed", cfg.x));

    let sieve = crate::modp::sieve(cfg.bound)?;
    let records: Vec<ChebotarevRecord> = sieve
        .primes()
        .par_iter()
        .map(|&p| scan_prime(n, &cfg.x, p))
        .collect::<Result<_>>()?;

    let mut counts = CycleTypeCounts::default();
    let mut with_root = 0usize;
    let mut skipped = Vec::new();
    for r in &records {
        match r {
            ChebotarevRecord::Retained { pattern, roots, .. } => {
                counts.add(pattern.clone());
                with_root += (*roots > 0) as usize;
            }
            ChebotarevRecord::Skipped(s) => skipped.push(*s),
        }
    }
    if counts.total == 0 {
        return Err(Error::Validation("no prime retained".into()));
    }

    let id = GroupId::new(GroupKind::E, n as usize)?;
    let (mode, source) = if n <= 2 {
        (DistributionMode::Exact, "exact")
    } else {
        (DistributionMode::MonteCarlo { samples: cfg.samples, seed: cfg.seed }, "monte-carlo")
    };
    let group = cycle_type_distribution(id, mode)?;
    let empirical = counts.probabilities();
    let group_p = group.probabilities();
    let expected = match fix_ratio(n as usize, RatioMode::Exact)? {
        FixRatio::Exact(r) => r,
        FixRatio::Float(_) => unreachable!("exact mode"),
    };

    Ok(ChebotarevReport {
        n,
        x: cfg.x.clone(),
        bound: cfg.bound,
        retained_prime_count: counts.total as usize,
        tv_distance: tv_distance(&empirical, &group_p),
        empirical: keyed_by_string(&empirical),
        group_dist: keyed_by_string(&group_p),
        group_source: source.into(),
        group_samples: group.total,
        root_frequency: with_root as f64 / counts.total as f64,
        expected_root_frequency: expected.to_string(),
        expected_root_frequency_f64: crate::scalar::ratio_to_f64(&expected),
        group_fixed_point_mass: group.fixed_point_mass(),
        skipped_primes: skipped,
        dagger,
        warning,
        records,
    })
}
