use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::report::{Skip, SkipReason};
use crate::error::{usage, Error, Result};
use crate::modp::{f_p1, newton_p1, reduce_rational, sieve, Residue, P1};
use crate::poly::ser_rational;
use crate::scalar::{rational, Scalar};

/// Outcome of following one orbit mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrbitResult {
    /// The orbit meets the target set first at this step.
    Hit { step: u64 },
    /// The orbit closed into a cycle of this length without meeting it.
    NoHit { cycle_length: u64 },
    Skipped { reason: SkipReason },
}

impl OrbitResult {
    pub fn is_hit(&self) -> bool {
        matches!(self, OrbitResult::Hit { .. })
    }

    pub fn is_retained(&self) -> bool {
        !matches!(self, OrbitResult::Skipped { .. })
    }
}

/// Brent cycle detection on an orbit in a finite set of `states` points,
/// testing `target` at every point the fast pointer visits.
pub fn brent_orbit(
    start: P1,
    states: u64,
    step: impl Fn(P1) -> P1,
    target: impl Fn(P1) -> bool,
) -> Result<OrbitResult> {
    if target(start) {
        return Ok(OrbitResult::Hit { step: 0 });
    }
    let limit = 4 * (states + 1);
    let (mut power, mut lam) = (1u64, 1u64);
    let mut tortoise = start;
    let mut hare = step(start);
    let mut idx = 1u64;
    loop {
        if target(hare) {
            if idx > states {
                return Err(Error::Invariant(format!("hit at step {idx} in a set of {states} states")));
            }
            return Ok(OrbitResult::Hit { step: idx });
        }
        if tortoise == hare {
            return Ok(OrbitResult::NoHit { cycle_length: lam });
        }
        if idx > limit {
            return Err(Error::Invariant(format!("no cycle after {idx} steps in {states} states")));
        }
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(hare);
        lam += 1;
        idx += 1;
    }
}

/// Same contract as [`brent_orbit`], recording every visited point.
pub fn hash_orbit(start: P1, step: impl Fn(P1) -> P1, target: impl Fn(P1) -> bool) -> OrbitResult {
    let mut seen = HashMap::new();
    let mut cur = start;
    let mut idx = 0u64;
    loop {
        if target(cur) {
            return OrbitResult::Hit { step: idx };
        }
        if let Some(first) = seen.insert(cur, idx) {
            return OrbitResult::NoHit { cycle_length: idx - first };
        }
        cur = step(cur);
        idx += 1;
    }
}

/// Which dynamical system a scan follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    /// `y <- f(y)`, target `{0, 1}`.
    Orbit,
    /// `y <- 2y^3 / (3y^2 - 1)`, target the roots `{0, 1, -1}` of `z^3 - z`.
    Newton,
}

impl OrbitKind {
    fn step(self, p: u64) -> impl Fn(P1) -> P1 {
        move |y| match self {
            OrbitKind::Orbit => f_p1(y, p),
            OrbitKind::Newton => newton_p1(y, p),
        }
    }

    fn target(self, p: u64) -> impl Fn(P1) -> bool {
        move |y| match (self, y) {
            (_, P1::Infinity) => false,
            (OrbitKind::Orbit, P1::Finite(v)) => v == 0 || v == 1,
            (OrbitKind::Newton, P1::Finite(v)) => v == 0 || v == 1 || v == p - 1,
        }
    }

    fn excluded_prime(self, p: u64) -> bool {
        match self {
            OrbitKind::Orbit => p == 2,
            OrbitKind::Newton => p == 2 || p == 3,
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            OrbitKind::Orbit => "primes dividing some y_i or 1 - y_i along the orbit of y0 under f have density zero",
            OrbitKind::Newton => "primes where the Newton iteration for z^3 - z from y0 converges to a root have density zero",
        }
    }
}

/// Orbit of `y0` mod `p` for one scan kind.
pub fn orbit_outcome(kind: OrbitKind, y0: &BigRational, p: u64) -> Result<OrbitResult> {
    if kind.excluded_prime(p) {
        return Ok(OrbitResult::Skipped { reason: SkipReason::ExcludedPrime });
    }
    let Residue::Finite(y) = reduce_rational(y0, p) else {
        return Ok(OrbitResult::Skipped { reason: SkipReason::NonIntegral });
    };
    brent_orbit(P1::Finite(y), p + 1, kind.step(p), kind.target(p))
}

fn audit_outcome(kind: OrbitKind, y0: &BigRational, p: u64) -> Option<OrbitResult> {
    let y = reduce_rational(y0, p).finite()?;
    Some(hash_orbit(P1::Finite(y), kind.step(p), kind.target(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RangeSpec {
    /// `(2^k, 2^(k+1)]`, clipped to the bound.
    Dyadic,
    /// Explicit half-open ranges `(lo, hi]`.
    Explicit(Vec<(u64, u64)>),
}

#[derive(Clone, Debug)]
pub struct DensityConfig {
    pub y0: BigRational,
    pub bound: u64,
    pub ranges: RangeSpec,
    /// Re-run every orbit with a hash set and compare.
    pub audit: bool,
}

impl DensityConfig {
    pub fn new(y0: BigRational, bound: u64) -> Self {
        DensityConfig { y0, bound, ranges: RangeSpec::Dyadic, audit: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RangeDensity {
    pub lo: u64,
    pub hi: u64,
    pub primes: usize,
    pub hits: usize,
    pub density: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub prime: u64,
    #[serde(flatten)]
    pub outcome: OrbitResult,
}

/// Ranges with fewer retained primes are left out of the trend summary.
pub const TREND_MIN_PRIMES: usize = 50;

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub kind: OrbitKind,
    #[serde(serialize_with = "ser_rational")]
    pub y0: BigRational,
    pub bound: u64,
    pub hit_count: usize,
    pub retained_prime_count: usize,
    pub density: f64,
    pub per_range: Vec<RangeDensity>,
    /// Least-squares slope of range density against range index, over
    /// ranges with at least [`TREND_MIN_PRIMES`] primes.
    pub trend_slope: Option<f64>,
    /// Whether those range densities are non-increasing.
    pub trend_non_increasing: bool,
    pub skipped_primes: Vec<Skip>,
    pub max_iterations_policy: String,
    #[serde(skip)]
    pub records: Vec<OrbitRecord>,
}

impl DensityReport {
    pub fn outcome(&self, p: u64) -> Option<OrbitResult> {
        self.records.binary_search_by_key(&p, |r| r.prime).ok().map(|i| self.records[i].outcome)
    }
}

fn ranges_for(ranges: &RangeSpec, bound: u64) -> Vec<(u64, u64)> {
    match ranges {
        RangeSpec::Explicit(v) => v.clone(),
        RangeSpec::Dyadic => {
            let mut out = Vec::new();
            let mut lo = 1u64;
            while lo < bound {
                let hi = (2 * lo).min(bound);
                out.push((lo, hi));
                lo *= 2;
            }
            out
        }
    }
}

fn trend(per_range: &[RangeDensity]) -> (Option<f64>, bool) {
    let pts: Vec<f64> =
        per_range.iter().filter(|r| r.primes >= TREND_MIN_PRIMES).filter_map(|r| r.density).collect();
    let non_increasing = pts.windows(2).all(|w| w[1] <= w[0]);
    if pts.len() < 2 {
        return (None, non_increasing);
    }
    let n = pts.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = pts.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in pts.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    (Some(sxy / sxx), non_increasing)
}

fn density_scan(kind: OrbitKind, cfg: &DensityConfig) -> Result<DensityReport> {
    let primes = sieve(cfg.bound)?;
    let records: Vec<OrbitRecord> = primes
        .primes()
        .par_iter()
        .map(|&p| {
            let outcome = orbit_outcome(kind, &cfg.y0, p)?;
            if cfg.audit && outcome.is_retained() && audit_outcome(kind, &cfg.y0, p) != Some(outcome) {
                return Err(Error::Invariant(format!("cycle detection audit failed at p={p}")));
            }
            Ok(OrbitRecord { prime: p, outcome })
        })
        .collect::<Result<_>>()?;

    let mut skipped = Vec::new();
    let (mut hits, mut retained) = (0usize, 0usize);
    for r in &records {
        match r.outcome {
            OrbitResult::Skipped { reason } => skipped.push(Skip { prime: r.prime, reason }),
            o => {
                retained += 1;
                hits += o.is_hit() as usize;
            }
        }
    }
    let per_range: Vec<RangeDensity> = ranges_for(&cfg.ranges, cfg.bound)
        .into_iter()
        .map(|(lo, hi)| {
            let inside = records.iter().filter(|r| r.prime > lo && r.prime <= hi && r.outcome.is_retained());
            let (n, h) = inside.fold((0, 0), |(n, h), r| (n + 1, h + r.outcome.is_hit() as usize));
            RangeDensity { lo, hi, primes: n, hits: h, density: (n > 0).then(|| h as f64 / n as f64) }
        })
        .collect();
    let (trend_slope, trend_non_increasing) = trend(&per_range);
    Ok(DensityReport {
        kind,
        y0: cfg.y0.clone(),
        bound: cfg.bound,
        hit_count: hits,
        retained_prime_count: retained,
        density: if retained == 0 { 0.0 } else { hits as f64 / retained as f64 },
        per_range,
        trend_slope,
        trend_non_increasing,
        skipped_primes: skipped,
        max_iterations_policy: "Brent cycle detection on the projective line mod p; \
            at most 4(p+2) map evaluations per prime, hits occur by step p"
            .into(),
        records,
    })
}

fn orbit_excluded(y0: &BigRational) -> bool {
    [rational(0, 1), rational(1, 1), rational(3, 2), rational(-1, 2)].contains(y0)
}

/// Orbit of `y0` under `f` mod every prime `p <= B`; a hit is a visit to 0
/// or 1. Runs on the current rayon pool.
pub fn orbit_density_scan(cfg: &DensityConfig) -> Result<DensityReport> {
    if orbit_excluded(&cfg.y0) {
        return usage(format!("basepoint {} is excluded (0, 1, 3/2, -1/2)", cfg.y0));
    }
    density_scan(OrbitKind::Orbit, cfg)
}

fn newton_q(y: &BigRational) -> Option<BigRational> {
    let den = rational(3, 1) * y * y - BigRational::one();
    (!den.is_zero()).then(|| rational(2, 1) * y * y * y / den)
}

/// Newton iteration for `z^3 - z` from `y0` mod every prime `5 <= p <= B`;
/// a hit is a visit to a root `0, 1, -1`.
pub fn newton_density_scan(cfg: &DensityConfig) -> Result<DensityReport> {
    let roots = [rational(0, 1), rational(1, 1), rational(-1, 1)];
    let mut y = cfg.y0.clone();
    for _ in 0..4 {
        if roots.contains(&y) {
            return usage(format!("the Newton orbit of {} reaches a root of z^3 - z exactly", cfg.y0));
        }
        match newton_q(&y) {
            Some(next) if next.size_bits() < 4096 => y = next,
            _ => break,
        }
    }
    density_scan(OrbitKind::Newton, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    #[serde(serialize_with = "ser_rational")]
    pub y0: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub w0: BigRational,
    pub bound: u64,
    pub compared: usize,
    pub agreements: usize,
    pub disagreements: Vec<u64>,
    /// Primes left out of the comparison: skipped by either scan, or where
    /// `w0` and `y0` are not both integral.
    pub excluded: Vec<Skip>,
    pub holds: bool,
}

/// Compares the Newton scan from `y0` with the `f`-orbit scan from
/// `w0 = (y0 - 1) / (2 y0)` prime by prime. Returns both scans too.
pub fn newton_orbit_agreement(cfg: &DensityConfig) -> Result<(AgreementReport, DensityReport, DensityReport)> {
    if cfg.y0.is_zero() {
        return usage("y0 = 0 is a root of z^3 - z");
    }
    let w0 = (&cfg.y0 - BigRational::one()) / (rational(2, 1) * &cfg.y0);
    let newton = newton_density_scan(cfg)?;
    let orbit = orbit_density_scan(&DensityConfig { y0: w0.clone(), ..cfg.clone() })?;
    let mut excluded = Vec::new();
    let mut disagreements = Vec::new();
    let mut compared = 0;
    for (a, b) in newton.records.iter().zip(&orbit.records) {
        debug_assert_eq!(a.prime, b.prime);
        match (a.outcome, b.outcome) {
            (OrbitResult::Skipped { reason }, _) | (_, OrbitResult::Skipped { reason }) => {
                excluded.push(Skip { prime: a.prime, reason })
            }
            (x, y) => {
                compared += 1;
                if x != y {
                    disagreements.push(a.prime);
                }
            }
        }
    }
    let report = AgreementReport {
        y0: cfg.y0.clone(),
        w0,
        bound: cfg.bound,
        compared,
        agreements: compared - disagreements.len(),
        holds: disagreements.is_empty(),
        disagreements,
        excluded,
    };
    Ok((report, newton, orbit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_orbits() {
        assert_eq!(orbit_outcome(OrbitKind::Orbit, &rational(2, 1), 5).unwrap(), OrbitResult::Hit { step: 1 });
        // N(2) = 16/11 = 1 mod 5
        assert_eq!(orbit_outcome(OrbitKind::Newton, &rational(2, 1), 5).unwrap(), OrbitResult::Hit { step: 1 });
        // a few more primes, against the hash-set audit
        for p in [7u64, 11, 13, 17, 19, 23] {
            for kind in [OrbitKind::Orbit, OrbitKind::Newton] {
                assert_eq!(
                    Some(orbit_outcome(kind, &rational(2, 1), p).unwrap()),
                    audit_outcome(kind, &rational(2, 1), p)
                );
            }
        }
        assert_eq!(
            orbit_outcome(OrbitKind::Newton, &rational(2, 1), 3).unwrap(),
            OrbitResult::Skipped { reason: SkipReason::ExcludedPrime }
        );
        assert_eq!(
            orbit_outcome(OrbitKind::Orbit, &rational(1, 4), 2).unwrap(),
            OrbitResult::Skipped { reason: SkipReason::ExcludedPrime }
        );
        assert_eq!(
            orbit_outcome(OrbitKind::Orbit, &rational(1, 7), 7).unwrap(),
            OrbitResult::Skipped { reason: SkipReason::NonIntegral }
        );
    }

    #[test]
    fn excluded_basepoints() {
        for y in [rational(0, 1), rational(1, 1), rational(3, 2), rational(-1, 2)] {
            assert_eq!(orbit_density_scan(&DensityConfig::new(y, 100)).unwrap_err().exit_code(), 2);
        }
        for y in [rational(0, 1), rational(1, 1), rational(-1, 1), rational(1, 2), rational(-1, 2)] {
            assert_eq!(newton_density_scan(&DensityConfig::new(y, 100)).unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn scan_with_audit() {
        let mut cfg = DensityConfig::new(rational(2, 1), 20_000);
        cfg.audit = true;
        let r = orbit_density_scan(&cfg).unwrap();
        assert_eq!(r.retained_prime_count + r.skipped_primes.len(), 2262);
        assert!((0.0..=1.0).contains(&r.density));
        let sum: usize = r.per_range.iter().map(|x| x.primes).sum();
        assert_eq!(sum, r.retained_prime_count);
        newton_density_scan(&cfg).unwrap();
    }

    #[test]
    fn agreement_small() {
        for y0 in [rational(2, 1), rational(5, 3), rational(-7, 2)] {
            let (a, _, _) = newton_orbit_agreement(&DensityConfig::new(y0.clone(), 5000)).unwrap();
            assert!(a.holds, "{y0}: {:?}", a.disagreements);
            assert!(a.compared > 600);
        }
    }

    #[test]
    fn explicit_ranges() {
        let mut cfg = DensityConfig::new(rational(2, 1), 1000);
        cfg.ranges = RangeSpec::Explicit(vec![(0, 100), (100, 1000)]);
        let r = orbit_density_scan(&cfg).unwrap();
        assert_eq!(r.per_range.len(), 2);
        assert_eq!(r.per_range[0].primes + r.per_range[1].primes, r.retained_prime_count);
    }

    proptest! {
        #[test]
        fn brent_matches_hash(p_idx in 0usize..8, y in 0u64..1000, newton in any::<bool>()) {
            let p = [5u64, 7, 101, 103, 997, 7919, 65537, 1_000_003][p_idx];
            let kind = if newton { OrbitKind::Newton } else { OrbitKind::Orbit };
            let start = P1::Finite(y % p);
            let b = brent_orbit(start, p + 1, kind.step(p), kind.target(p)).unwrap();
            prop_assert_eq!(b, hash_orbit(start, kind.step(p), kind.target(p)));
            if let OrbitResult::Hit { step } = b { prop_assert!(step <= p); }
        }
    }
}
