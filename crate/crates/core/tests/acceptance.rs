//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`) so the lines are
//! always shown.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use arboreal_core::counting::{
    a_table, brute_force_fix_count, fix_ratio, psi, ratio_step, sandwich_check, FixRatio, RatioMode,
};
use arboreal_core::experiments::{
    chebotarev_scan, newton_orbit_agreement, with_workers, ChebotarevConfig, ChebotarevReport, DensityConfig,
};
use arboreal_core::groups::{
    cycle_type_distribution, enumerate, enumerate_e, hausdorff_limit, hausdorff_ratio, is_normal_exhaustive,
    normality_witness, order, DistributionMode, GroupId, GroupKind, NormalityMode,
};
use arboreal_core::poly::{
    disc_f2_identity, eisenstein_check, f_iterate, local_polygon_at_two, shift, LocalCase,
};
use arboreal_core::scalar::{rational, ratio_to_f64};
use arboreal_core::tree::{Portrait, Sign};
use arboreal_core::ExactRatioState;
use num_bigint::BigUint;
use num_rational::Ratio;
use rand::SeedableRng;

type Outcome = Result<String, String>;

const SEED: u64 = 20240611;
const CHEB_BOUND: u64 = 100_000;
const DENSITY_BOUND: u64 = 1_000_000;
const E3_SAMPLES: u64 = 1_000_000;
const WORKERS: usize = 8;
const ALT_WORKERS: usize = 3;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn id(kind: GroupKind, n: usize) -> GroupId {
    GroupId::new(kind, n).unwrap()
}

fn exact_x(n: usize) -> num_rational::BigRational {
    match fix_ratio(n, RatioMode::Exact).unwrap() {
        FixRatio::Exact(r) => r,
        FixRatio::Float(_) => unreachable!(),
    }
}

fn orders() -> Outcome {
    let expect = [(GroupKind::E, 1, 6u32), (GroupKind::E, 2, 648), (GroupKind::Aut, 2, 1296), (GroupKind::H, 2, 81)];
    for (k, n, v) in expect {
        let got = order(id(k, n));
        ensure(got == BigUint::from(v), format!("|{k}_{n}| = {got}, want {v}"))?;
    }
    let e2: Vec<Portrait> = enumerate_e(2).map_err(e)?.collect();
    let distinct: HashSet<_> = e2.iter().cloned().collect();
    ensure(e2.len() == 648 && distinct.len() == 648, "E_2 enumeration is not 648 distinct portraits")?;
    ensure(e2.iter().all(|g| g.sign_leaves() == Sign::Plus), "sign -1 element in E_2")?;
    let plus: HashSet<Portrait> = enumerate(id(GroupKind::Aut, 2))
        .map_err(e)?
        .filter(|g| g.sign_leaves() == Sign::Plus)
        .collect();
    ensure(plus == distinct, "E_2 differs from the sign +1 part of Aut(T_2)")?;
    Ok("6, 648, 1296, 81; E_2 = sign +1 part of 1296".into())
}

fn sign_lemma() -> Outcome {
    let mut n = 0;
    for g in enumerate(id(GroupKind::Aut, 2)).map_err(e)? {
        ensure(g.sign_leaves() == g.sign_recursive(), format!("mismatch at {g}"))?;
        n += 1;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..10_000 {
        let g = Portrait::random(3 + i % 3, &mut rng).map_err(e)?;
        ensure(g.sign_leaves() == g.sign_recursive(), format!("mismatch at {g}"))?;
        n += 1;
    }
    Ok(format!("{n} portraits"))
}

fn normality() -> Outcome {
    ensure(is_normal_exhaustive(NormalityMode::EInAut, 2).map_err(e)?, "E_2 not normal in Aut(T_2)")?;
    let w = normality_witness(NormalityMode::EInAut, 3).map_err(e)?.ok_or("no witness for E_3")?;
    ensure(!arboreal_core::groups::is_in_e(&w.conjugate), "E_3 witness conjugate lies in E_3")?;
    let h = normality_witness(NormalityMode::HInE, 2).map_err(e)?.ok_or("no witness for H_2")?;
    ensure(!arboreal_core::groups::is_in_h(&h.conjugate), "H_2 witness conjugate lies in H_2")?;
    Ok(format!("E_2 normal; E_3 witness {} ; H_2 witness {}", w.conjugate, h.conjugate))
}

fn fix_counting() -> Outcome {
    let brute = brute_force_fix_count(id(GroupKind::E, 2)).map_err(e)?;
    let table = a_table(2).map_err(e)?.fixers();
    let x2 = ratio_step(&ExactRatioState::initial()).map_err(e)?.fix_proportion();
    ensure(x2 == rational(79, 162), format!("x_2 = {x2}"))?;
    let via_ratio = rational(648, 1) * &x2;
    ensure(
        brute == 316 && table == BigUint::from(316u32) && via_ratio == rational(316, 1),
        format!("fixers: brute {brute}, table {table}, 648 x_2 = {via_ratio}"),
    )?;
    let x3 = ratio_to_f64(&exact_x(3));
    let mc = with_workers(WORKERS, || {
        cycle_type_distribution(id(GroupKind::E, 3), DistributionMode::MonteCarlo { samples: E3_SAMPLES, seed: SEED })
    })
    .map_err(e)?
    .map_err(e)?;
    let mass = mc.fixed_point_mass();
    ensure((mass - x3).abs() < 0.003, format!("Monte-Carlo {mass} vs x_3 {x3}"))?;
    Ok(format!("316 fixers, x_2 = 79/162, E_3 sample {mass:.5} vs x_3 {x3:.5}"))
}

fn asymptotics() -> Outcome {
    let report = sandwich_check(10_000).map_err(e)?;
    ensure(report.exact_through >= 8, format!("exact only through {}", report.exact_through))?;
    let nx = |n: usize| fix_ratio(n, RatioMode::Float).map(|x| n as f64 * x.to_f64()).map_err(e);
    let (a, b, c) = (nx(100)?, nx(1000)?, nx(10_000)?);
    let (da, db, dc) = ((a - 2.0).abs(), (b - 2.0).abs(), (c - 2.0).abs());
    ensure(dc < 0.1, format!("|n x_n - 2| = {dc} at n = 10^4"))?;
    ensure(da > db && db > dc, format!("|n x_n - 2| not decreasing: {da}, {db}, {dc}"))?;
    let mut z = 1.0f64;
    for n in 1..=10_000usize {
        z = psi(&z);
        ensure(z >= (n as f64 + 5.0) / 5.0, format!("psi^{n}(1) = {z} < (n+5)/5"))?;
    }
    Ok(format!("sandwich ok to 10^4; n x_n = {a:.4}, {b:.4}, {c:.4}; psi bound ok"))
}

fn hausdorff() -> Outcome {
    let le = hausdorff_limit(GroupKind::E);
    let lh = hausdorff_limit(GroupKind::H);
    ensure((le - (1.0 - (2f64.ln() / 6f64.ln()) / 3.0)).abs() < 1e-15, "E limit")?;
    ensure((le - 0.87074).abs() < 5e-4, format!("E limit {le} far from 0.87074"))?;
    ensure((lh - 0.61315).abs() < 1e-5, format!("H limit {lh}"))?;
    for (kind, lim, tol) in [(GroupKind::E, le, 1.5e-3), (GroupKind::H, lh, 2e-3)] {
        let gaps: Vec<f64> = (1..=5).map(|n| (hausdorff_ratio(kind, n).unwrap() - lim).abs()).collect();
        ensure(gaps[4] < tol, format!("{kind} ratio at n=5 is {} from the limit", gaps[4]))?;
        ensure(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12), format!("{kind} ratios not monotone: {gaps:?}"))?;
    }
    Ok(format!("limits {le:.6} and {lh:.6}; n=5 ratio {:.6}", hausdorff_ratio(GroupKind::E, 5).unwrap()))
}

fn discriminant() -> Outcome {
    let id = disc_f2_identity().map_err(e)?;
    ensure(id.holds, format!("Disc(f^2(z) - x) = {}", id.computed))?;
    Ok("Disc(f^2(z) - x) = (2^16 3^9)^2 x^4 (x-1)^4".into())
}

fn local_criteria() -> Outcome {
    for n in 1..=6 {
        let p = f_iterate(n).map_err(e)?;
        for x in [rational(3, 2), rational(3, 1)] {
            ensure(eisenstein_check(&shift(&p, &x), 3), format!("f^{n}(z) - {x} not Eisenstein at 3"))?;
        }
    }
    let cases = [
        (rational(2, 1), LocalCase::UnitShift, -1),
        (rational(1, 2), LocalCase::PoleShift, 1),
        (rational(3, 1), LocalCase::Reflected, -1),
    ];
    for (y, case, height) in cases {
        let lp = local_polygon_at_two(&y).map_err(e)?;
        ensure(lp.case == case, format!("{y}: case {:?}", lp.case))?;
        let seg = lp.polygon.segments.iter().find(|s| s.length == 2).ok_or(format!("{y}: no length-2 segment"))?;
        ensure(seg.height() == Ratio::from_integer(height), format!("{y}: height {}", seg.height()))?;
    }
    Ok("Eisenstein at 3 for n <= 6; three polygon cases at 2".into())
}

struct ChebRuns {
    reports: Vec<ChebotarevReport>,
}

fn run_chebotarev(workers: usize) -> Result<ChebRuns, String> {
    let mut reports = Vec::new();
    for n in 1..=3 {
        let cfg = ChebotarevConfig { n, x: rational(3, 2), bound: CHEB_BOUND, samples: E3_SAMPLES, seed: SEED };
        reports.push(with_workers(workers, || chebotarev_scan(&cfg)).map_err(e)?.map_err(e)?);
    }
    Ok(ChebRuns { reports })
}

fn chebotarev(runs: &ChebRuns) -> Outcome {
    let r = &runs.reports;
    ensure(r[0].tv_distance < 0.02, format!("n=1 tv {}", r[0].tv_distance))?;
    ensure(r[1].tv_distance < 0.05, format!("n=2 tv {}", r[1].tv_distance))?;
    let x2 = 79.0 / 162.0;
    ensure((r[1].root_frequency - x2).abs() < 0.02, format!("n=2 root frequency {}", r[1].root_frequency))?;
    let x3 = r[2].expected_root_frequency_f64;
    ensure((r[2].root_frequency - x3).abs() < 0.02, format!("n=3 root frequency {} vs {x3}", r[2].root_frequency))?;
    Ok(format!(
        "tv {:.4} / {:.4} (n=3: {:.4}); roots {:.4} vs {x2:.4}, {:.4} vs {x3:.4}; {} primes",
        r[0].tv_distance, r[1].tv_distance, r[2].tv_distance, r[1].root_frequency, r[2].root_frequency,
        r[0].retained_prime_count
    ))
}

struct DensityRuns {
    agreement: arboreal_core::experiments::AgreementReport,
    newton: arboreal_core::experiments::DensityReport,
    orbit: arboreal_core::experiments::DensityReport,
}

fn run_density(workers: usize) -> Result<DensityRuns, String> {
    // eta(2) = -1/3, so Newton from -1/3 pairs with the f-orbit of 2
    let cfg = DensityConfig::new(rational(-1, 3), DENSITY_BOUND);
    let (agreement, newton, orbit) = with_workers(workers, || newton_orbit_agreement(&cfg)).map_err(e)?.map_err(e)?;
    Ok(DensityRuns { agreement, newton, orbit })
}

fn density(runs: &DensityRuns) -> Outcome {
    let o = &runs.orbit;
    ensure(o.y0 == rational(2, 1), "orbit basepoint is not 2")?;
    let x3 = ratio_to_f64(&exact_x(3));
    ensure(o.density <= x3 + 0.05, format!("orbit density {} > x_3 + 0.05", o.density))?;
    let a = &runs.agreement;
    ensure(a.holds, format!("{} disagreements, first {:?}", a.disagreements.len(), a.disagreements.first()))?;
    let trend: Vec<String> = o
        .per_range
        .iter()
        .filter(|r| r.primes >= 50)
        .map(|r| format!("{:.3}", r.density.unwrap_or(0.0)))
        .collect();
    Ok(format!(
        "orbit density {:.4} (<= {:.4}); dyadic trend [{}] non-increasing={}; newton density {:.4}; {} primes agree, {} excluded",
        o.density,
        x3 + 0.05,
        trend.join(" "),
        o.trend_non_increasing,
        runs.newton.density,
        a.compared,
        a.excluded.len()
    ))
}

fn cheb_fingerprint(r: &ChebRuns) -> String {
    r.reports
        .iter()
        .map(|x| format!("{}|{:?}", serde_json::to_string(x).unwrap(), x.records))
        .collect()
}

fn density_fingerprint(r: &DensityRuns) -> String {
    format!(
        "{}|{}|{}|{:?}|{:?}",
        serde_json::to_string(&r.agreement).unwrap(),
        serde_json::to_string(&r.newton).unwrap(),
        serde_json::to_string(&r.orbit).unwrap(),
        r.newton.records,
        r.orbit.records
    )
}

fn report(num: usize, name: &str, limit: Duration, started: Instant, out: Outcome) -> bool {
    let took = started.elapsed();
    let (ok, detail) = match out {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {took:.1?}, limit {limit:?}")),
        Err(d) => (false, d),
    };
    println!("{} [{num:>2}] {name} ({took:.2?}): {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let mut all = true;
    let secs = Duration::from_secs;
    type Plain = (usize, &'static str, u64, fn() -> Outcome);
    let simple: [Plain; 8] = [
        (1, "orders and enumeration", 1, orders),
        (2, "sign lemma", 5, sign_lemma),
        (3, "normality", 5, normality),
        (4, "fixed-point counting", 60, fix_counting),
        (5, "asymptotics", 10, asymptotics),
        (6, "hausdorff dimension", 1, hausdorff),
        (7, "discriminant identity", 5, discriminant),
        (8, "local criteria", 30, local_criteria),
    ];
    for (num, name, limit, f) in simple {
        let t = Instant::now();
        all &= report(num, name, secs(limit), t, f());
    }

    let t = Instant::now();
    let cheb = run_chebotarev(WORKERS);
    let cheb_ok = cheb.as_ref().map_err(Clone::clone).and_then(chebotarev);
    all &= report(9, "frobenius statistics", secs(600), t, cheb_ok);

    let t = Instant::now();
    let dens = run_density(WORKERS);
    let dens_ok = dens.as_ref().map_err(Clone::clone).and_then(density);
    all &= report(10, "density applications", secs(900), t, dens_ok);

    let t = Instant::now();
    let det = (|| -> Outcome {
        let (c1, d1) = (cheb?, dens?);
        let c2 = run_chebotarev(ALT_WORKERS)?;
        ensure(cheb_fingerprint(&c1) == cheb_fingerprint(&c2), "frobenius reports differ across worker counts")?;
        let d2 = run_density(ALT_WORKERS)?;
        ensure(density_fingerprint(&d1) == density_fingerprint(&d2), "density reports differ across worker counts")?;
        Ok(format!("identical reports with {WORKERS} and {ALT_WORKERS} workers"))
    })();
    all &= report(11, "determinism", secs(1500), t, det);

    if !all {
        std::process::exit(1);
    }
}
