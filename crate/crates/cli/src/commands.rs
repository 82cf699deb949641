use arboreal_core::counting::{fix_ratio, fix_ratio_table, sandwich_check, FixRatio, RatioMode};
use arboreal_core::experiments::{
    chebotarev_scan, conjugacy_check, newton_orbit_agreement, orbit_density_scan, ChebotarevConfig,
    ChebotarevRecord, DensityConfig, DensityReport, OrbitResult,
};
use arboreal_core::groups::{
    chunk_rng, enumerate, hausdorff_limit, hausdorff_ratio, is_normal_exhaustive, normality_witness, order,
    sample_uniform, GroupId, GroupKind, NormalityMode, ENUMERATION_CAP,
};
use arboreal_core::poly::{
    dagger_check, disc_f2_identity, eisenstein_check, f_iterate, local_polygon_at_two, newton_polygon, shift,
    NewtonPolygon,
};
use arboreal_core::tree::Portrait;
use arboreal_core::{Error, Result};
use clap::{Args, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::output::{Rendered, Table};

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|e| format!("expected a rational a/b: {e}"))
}

fn parse_group(s: &str) -> std::result::Result<GroupKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// Group: E, H or AUT
    #[arg(long, value_parser = parse_group, default_value = "E")]
    group: GroupKind,
    /// Tree depth
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    g: GroupArgs,
    /// Number of elements to draw
    #[arg(long, default_value_t = 10)]
    samples: u64,
}

#[derive(Args, Debug)]
pub struct DepthArgs {
    /// Depth (or largest depth for tables)
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
pub struct FixRatioArgs {
    /// Depth
    #[arg(long)]
    n: usize,
    /// Exact rational recursion (fails above the exact cap)
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Double-precision recursion
    #[arg(long)]
    float: bool,
}

#[derive(Args, Debug)]
pub struct BasepointArgs {
    /// Iterate depth
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Basepoint, a rational a/b
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "3/2")]
    x: BigRational,
}

#[derive(Args, Debug)]
pub struct DaggerArgs {
    /// Basepoint, a rational a/b
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
    x: BigRational,
}

#[derive(Args, Debug)]
pub struct ChebotarevArgs {
    /// Iterate depth (1 to 3)
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Basepoint, a rational a/b
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "3/2")]
    x: BigRational,
    /// Largest prime scanned
    #[arg(long, default_value_t = 100_000)]
    bound: u64,
    /// Group samples when E_n is not enumerated (depth 3)
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// Starting point, a rational a/b
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "2")]
    y0: BigRational,
    /// Largest prime scanned
    #[arg(long, default_value_t = 1_000_000)]
    bound: u64,
}

#[derive(Args, Debug)]
pub struct ConjugacyArgs {
    /// Random points checked mod 1000003
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order of E_n, H_n or Aut(T_n) (|E_2| = 648, |Aut(T_2)| = 1296, |H_2| = 81)
    Order(GroupArgs),
    /// List every element (depth <= 2); E_2 is the sign +1 half of Aut(T_2)
    Enumerate(GroupArgs),
    /// Uniform random elements, seeded
    Sample(SampleArgs),
    /// Hausdorff ratio log|G_n| / log|Aut(T_n)| up to depth n and its limit
    /// (1 - log2/(3 log6) for E, log3/log6 for H)
    Dimension(GroupArgs),
    /// Normality: E_n in Aut(T_n) (normal only for n <= 2) or H_n in E_n
    /// (not normal from n = 2), with an explicit conjugation witness
    Normality(GroupArgs),
    /// Proportion x_n of E_n fixing a leaf (x_2 = 79/162), via the ratio recursion
    Fixratio(FixRatioArgs),
    /// Bounds rho^n(2/3) <= x_(n+1) <= phi^n(1) for 1 <= n <= N, so n x_n -> 2
    Sandwich(DepthArgs),
    /// Disc(f^2(z) - x) = [2^16 3^9 x^2 (x-1)^2]^2 as a polynomial identity in x
    DiscCheck,
    /// f^n(z) - x is Eisenstein at 3 when v_3(x) = 1
    Eisenstein(BasepointArgs),
    /// Newton polygons of f^n(z) - x at 2 and 3; at depth 1 also the local case
    /// giving a length-2 segment of height +-1
    NewtonPolygon(BasepointArgs),
    /// Local condition at (2, 3): v_3(x) = 1 and (v_2(x) = +-1 or v_2(1-x) = 1)
    Dagger(DaggerArgs),
    /// Factorization types of f^n(z) - x mod p against the cycle types of E_n
    Chebotarev(ChebotarevArgs),
    /// Density of primes where the orbit of y0 under f meets 0 or 1; it tends to zero
    OrbitDensity(DensityArgs),
    /// Density of primes where Newton's method for z^3 - z from y0 hits a root,
    /// checked prime by prime against the f-orbit of (y0 - 1)/(2 y0)
    NewtonDensity(DensityArgs),
    /// eta^-1 o N o eta = f for eta(z) = 1/(1 - 2z) and N(z) = 2z^3/(3z^2 - 1)
    ConjugacyCheck(ConjugacyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Order(_) => "order",
            Command::Enumerate(_) => "enumerate",
            Command::Sample(_) => "sample",
            Command::Dimension(_) => "dimension",
            Command::Normality(_) => "normality",
            Command::Fixratio(_) => "fixratio",
            Command::Sandwich(_) => "sandwich",
            Command::DiscCheck => "disc-check",
            Command::Eisenstein(_) => "eisenstein",
            Command::NewtonPolygon(_) => "newton-polygon",
            Command::Dagger(_) => "dagger",
            Command::Chebotarev(_) => "chebotarev",
            Command::OrbitDensity(_) => "orbit-density",
            Command::NewtonDensity(_) => "newton-density",
            Command::ConjugacyCheck(_) => "conjugacy-check",
        }
    }

    pub fn uses_seed(&self) -> bool {
        matches!(self, Command::Sample(_) | Command::Chebotarev(_) | Command::ConjugacyCheck(_))
    }
}

pub fn run(cmd: &Command, seed: u64) -> Result<Rendered> {
    match cmd {
        Command::Order(a) => cmd_order(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Sample(a) => cmd_sample(a, seed),
        Command::Dimension(a) => cmd_dimension(a),
        Command::Normality(a) => cmd_normality(a),
        Command::Fixratio(a) => cmd_fixratio(a),
        Command::Sandwich(a) => cmd_sandwich(a),
        Command::DiscCheck => cmd_disc(),
        Command::Eisenstein(a) => cmd_eisenstein(a),
        Command::NewtonPolygon(a) => cmd_newton_polygon(a),
        Command::Dagger(a) => cmd_dagger(a),
        Command::Chebotarev(a) => cmd_chebotarev(a, seed),
        Command::OrbitDensity(a) => cmd_orbit_density(a),
        Command::NewtonDensity(a) => cmd_newton_density(a),
        Command::ConjugacyCheck(a) => cmd_conjugacy(a, seed),
    }
}

fn to_json(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn cmd_order(a: &GroupArgs) -> Result<Rendered> {
    let id = GroupId::new(a.group, a.n)?;
    let ord = order(id).to_string();
    let mut table = Table::new(&["group", "n", "order"]);
    table.push(vec![a.group.to_string(), a.n.to_string(), ord.clone()]);
    Ok(Rendered {
        text: ord.clone(),
        json: json!({ "group": a.group, "n": a.n, "order": ord }),
        table,
        anchor: "closed-form group orders: |E_n| = |Aut(T_n)| / 2^((3^(n-1)-1)/2), |H_n| = 3^((3^n-1)/2)",
    })
}

fn portrait_rows(items: &[Portrait]) -> (String, Value, Table) {
    let mut table = Table::new(&["index", "portrait", "sign", "cycle_type"]);
    let mut text = String::new();
    let mut js = Vec::new();
    for (i, g) in items.iter().enumerate() {
        let (s, ct) = (g.sign_leaves().to_string(), g.cycle_type().to_string());
        text.push_str(&format!("{g}\n"));
        table.push(vec![i.to_string(), g.to_string(), s.clone(), ct.clone()]);
        js.push(json!({ "portrait": g.to_string(), "sign": s, "cycle_type": ct }));
    }
    (text, Value::Array(js), table)
}

fn cmd_enumerate(a: &GroupArgs) -> Result<Rendered> {
    if a.n > ENUMERATION_CAP {
        return Err(Error::Capability(format!("enumeration is limited to depth {ENUMERATION_CAP}")));
    }
    let items: Vec<Portrait> = enumerate(GroupId::new(a.group, a.n)?)?.collect();
    let (text, elements, table) = portrait_rows(&items);
    Ok(Rendered {
        text,
        json: json!({ "group": a.group, "n": a.n, "count": items.len(), "elements": elements }),
        table,
        anchor: "E_n is the set of portraits with product of signs +1 below every vertex; E_2 has 648 elements",
    })
}

fn cmd_sample(a: &SampleArgs, seed: u64) -> Result<Rendered> {
    let id = GroupId::new(a.g.group, a.g.n)?;
    let mut rng = chunk_rng(seed, 0);
    let items = (0..a.samples).map(|_| sample_uniform(id, &mut rng)).collect::<Result<Vec<_>>>()?;
    let (text, elements, table) = portrait_rows(&items);
    Ok(Rendered {
        text,
        json: json!({ "group": a.g.group, "n": a.g.n, "samples": a.samples, "elements": elements }),
        table,
        anchor: "uniform elements of E_n: free labels at the bottom level, sign-constrained labels above",
    })
}

fn cmd_dimension(a: &GroupArgs) -> Result<Rendered> {
    let limit = hausdorff_limit(a.group);
    let mut table = Table::new(&["n", "ratio", "gap_to_limit"]);
    let mut rows = Vec::new();
    let mut text = String::new();
    for n in 1..=a.n {
        let r = hausdorff_ratio(a.group, n)?;
        text.push_str(&format!("{n} {r:.9}\n"));
        table.push(vec![n.to_string(), r.to_string(), (r - limit).abs().to_string()]);
        rows.push(json!({ "n": n, "ratio": r }));
    }
    text.push_str(&format!("limit {limit:.9}\n"));
    table.push(vec!["limit".into(), limit.to_string(), "0".into()]);
    Ok(Rendered {
        text,
        json: json!({ "group": a.group, "ratios": rows, "limit": limit }),
        table,
        anchor: "Hausdorff dimension of E in Aut(T) is 1 - log2/(3 log6); of H it is log3/log6",
    })
}

fn cmd_normality(a: &GroupArgs) -> Result<Rendered> {
    let mode = match a.group {
        GroupKind::E => NormalityMode::EInAut,
        GroupKind::H => NormalityMode::HInE,
        GroupKind::Aut => return Err(Error::Usage("normality takes --group E or H".into())),
    };
    let exhaustive = if a.n <= ENUMERATION_CAP { Some(is_normal_exhaustive(mode, a.n)?) } else { None };
    let witness = normality_witness(mode, a.n)?;
    let normal = witness.is_none();
    if exhaustive.is_some_and(|e| e != normal) {
        return Err(Error::Invariant("exhaustive check disagrees with witness search".into()));
    }
    let mut table = Table::new(&["mode", "n", "normal", "exhaustive", "conjugator", "element", "conjugate"]);
    let w = witness.as_ref().map(|w| (w.conjugator.to_string(), w.element.to_string(), w.conjugate.to_string()));
    let (c, e, k) = w.clone().unwrap_or_default();
    table.push(vec![format!("{mode:?}"), a.n.to_string(), normal.to_string(), format!("{exhaustive:?}"), c, e, k]);
    let text = match &w {
        None => "normal".to_string(),
        Some((c, e, k)) => format!("not normal\nconjugator {c}\nelement {e}\nconjugate {k}"),
    };
    Ok(Rendered {
        text,
        json: json!({
            "mode": mode, "n": a.n, "normal": normal, "exhaustive": exhaustive,
            "witness": w.map(|(c, e, k)| json!({ "conjugator": c, "element": e, "conjugate": k })),
        }),
        table,
        anchor: "E_n is normal in Aut(T_n) exactly for n <= 2; H_n is not normal in E_n for n >= 2",
    })
}

fn cmd_fixratio(a: &FixRatioArgs) -> Result<Rendered> {
    let mode = match (a.exact, a.float) {
        (true, _) => RatioMode::Exact,
        (_, true) => RatioMode::Float,
        _ => RatioMode::Auto,
    };
    let x = fix_ratio(a.n, mode)?;
    let rows = fix_ratio_table(a.n, mode)?;
    let mut table = Table::new(&["n", "x_n", "x_n_f64", "rho_lower", "phi_upper", "n_times_x", "exact"]);
    for r in &rows {
        table.push(vec![
            r.n.to_string(),
            r.x_n.clone(),
            r.x_n_f64.to_string(),
            r.rho_lower.to_string(),
            r.phi_upper.to_string(),
            r.n_times_x.to_string(),
            r.exact.to_string(),
        ]);
    }
    let exact = matches!(x, FixRatio::Exact(_));
    Ok(Rendered {
        text: x.to_string(),
        json: json!({ "n": a.n, "x_n": x.to_string(), "x_n_f64": x.to_f64(), "exact": exact, "rows": to_json(&rows) }),
        table,
        anchor: "proportion of E_n fixing a leaf, from the normalized counting recursion; x_2 = 79/162",
    })
}

fn cmd_sandwich(a: &DepthArgs) -> Result<Rendered> {
    let r = sandwich_check(a.n)?;
    let mut table = Table::new(&["n", "lower", "x_next", "upper", "exact", "strict"]);
    for row in &r.rows {
        table.push(vec![
            row.n.to_string(),
            row.lower.to_string(),
            row.x_next.to_string(),
            row.upper.to_string(),
            row.exact.to_string(),
            row.strict.to_string(),
        ]);
    }
    let last = r.rows.last();
    let text = format!(
        "sandwich holds for 1 <= n <= {} (exact through {}, float slack {:e}){}",
        r.n_max,
        r.exact_through,
        r.float_slack,
        last.map(|l| format!("\nn = {}: {} <= {} <= {}", l.n, l.lower, l.x_next, l.upper)).unwrap_or_default()
    );
    Ok(Rendered {
        text,
        json: to_json(&r),
        table,
        anchor: "rho^n(2/3) <= x_(n+1) <= phi^n(1), hence x_n ~ 2/n",
    })
}

fn cmd_disc() -> Result<Rendered> {
    let id = disc_f2_identity()?;
    if !id.holds {
        return Err(Error::Invariant(format!("Disc(f^2(z) - x) = {} differs from the expected polynomial", id.computed.render("x"))));
    }
    let mut table = Table::new(&["degree_in_x", "coefficient"]);
    for (i, c) in id.computed.coeffs().iter().enumerate() {
        table.push(vec![i.to_string(), c.to_string()]);
    }
    Ok(Rendered {
        text: format!(
            "Disc(f^2(z) - x) = (2^16 * 3^9)^2 * x^4 * (x - 1)^4  [verified]\ncomputed: {}",
            id.computed.render("x")
        ),
        json: json!({
            "holds": true,
            "computed": id.computed.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "expected": id.expected.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        table,
        anchor: "Disc(f^2(z) - x) = [2^16 3^9 x^2 (x-1)^2]^2",
    })
}

fn cmd_eisenstein(a: &BasepointArgs) -> Result<Rendered> {
    let p = shift(&f_iterate(a.n)?, &a.x);
    let holds = eisenstein_check(&p, 3);
    let mut table = Table::new(&["n", "x", "q", "eisenstein"]);
    table.push(vec![a.n.to_string(), a.x.to_string(), "3".into(), holds.to_string()]);
    Ok(Rendered {
        text: holds.to_string(),
        json: json!({ "n": a.n, "x": a.x.to_string(), "q": 3, "eisenstein": holds }),
        table,
        anchor: "f^n(z) - x is Eisenstein at q when v_q(x) = 1, since f^n(z) = z^(3^n) mod 3",
    })
}

fn polygon_json(np: &NewtonPolygon) -> Value {
    to_json(np)
}

fn polygon_text(np: &NewtonPolygon) -> String {
    let segs: Vec<String> = np.segments.iter().map(|s| format!("slope {} length {}", s.slope, s.length)).collect();
    format!("p={}: {}", np.prime, segs.join(", "))
}

fn cmd_newton_polygon(a: &BasepointArgs) -> Result<Rendered> {
    let p = shift(&f_iterate(a.n)?, &a.x);
    let polys = [newton_polygon(&p, 2), newton_polygon(&p, 3)];
    let local = if a.n == 1 { local_polygon_at_two(&a.x).ok() } else { None };
    let mut table = Table::new(&["polynomial", "prime", "slope", "length", "height"]);
    let mut text = Vec::new();
    for np in &polys {
        text.push(polygon_text(np));
        for s in &np.segments {
            let h = s.height().to_string();
            table.push(vec![format!("f^{}(z) - {}", a.n, a.x), np.prime.to_string(), s.slope.to_string(), s.length.to_string(), h]);
        }
    }
    if let Some(l) = &local {
        text.push(format!("local case at 2: {:?}, polygon of f(z) - {}: {}", l.case, l.shifted_by, polygon_text(&l.polygon)));
        for s in &l.polygon.segments {
            let h = s.height().to_string();
            table.push(vec![format!("f(z) - {}", l.shifted_by), "2".into(), s.slope.to_string(), s.length.to_string(), h]);
        }
    }
    Ok(Rendered {
        text: text.join("\n"),
        json: json!({
            "n": a.n, "x": a.x.to_string(),
            "polygons": polys.iter().map(polygon_json).collect::<Vec<_>>(),
            "local_case": local.as_ref().map(to_json),
        }),
        table,
        anchor: "at the prime 2 the polygon of f(z) - y has a segment of length 2 and height +-1 in each local case",
    })
}

fn cmd_dagger(a: &DaggerArgs) -> Result<Rendered> {
    let c = dagger_check(&a.x)?;
    let mut table = Table::new(&["x", "v3_x", "v2_x", "v2_one_minus_x", "holds"]);
    table.push(vec![
        a.x.to_string(),
        c.v3_x.to_string(),
        c.v2_x.to_string(),
        c.v2_one_minus_x.to_string(),
        c.holds.to_string(),
    ]);
    Ok(Rendered {
        text: c.holds.to_string(),
        json: to_json(&c),
        table,
        anchor: "local condition at (p, q) = (2, 3) under which the arboreal Galois group is all of E_n",
    })
}

fn cmd_chebotarev(a: &ChebotarevArgs, seed: u64) -> Result<Rendered> {
    let cfg = ChebotarevConfig { n: a.n, x: a.x.clone(), bound: a.bound, samples: a.samples, seed };
    let r = chebotarev_scan(&cfg)?;
    let mut table = Table::new(&["prime", "outcome", "pattern", "roots"]);
    for rec in &r.records {
        match rec {
            ChebotarevRecord::Retained { prime, pattern, roots } => {
                table.push(vec![prime.to_string(), "retained".into(), pattern.to_string(), roots.to_string()])
            }
            ChebotarevRecord::Skipped(s) => {
                table.push(vec![s.prime.to_string(), format!("skipped:{}", to_json(&s.reason).as_str().unwrap_or("")), String::new(), String::new()])
            }
        }
    }
    let mut text = format!(
        "n={} x={} B={} retained={} skipped={}\ntv_distance {:.6}\nroot_frequency {:.6} (expected {} = {:.6})",
        r.n,
        r.x,
        r.bound,
        r.retained_prime_count,
        r.skipped_primes.len(),
        r.tv_distance,
        r.root_frequency,
        r.expected_root_frequency,
        r.expected_root_frequency_f64
    );
    if let Some(w) = &r.warning {
        text.push_str(&format!("\nwarning: {w}"));
    }
    Ok(Rendered {
        text,
        json: to_json(&r),
        table,
        anchor: "Frobenius factorization types of f^n(z) - x follow the cycle types of E_n, the arboreal Galois group",
    })
}

fn density_table(r: &DensityReport) -> Table {
    let mut table = Table::new(&["prime", "outcome", "step", "cycle_length"]);
    for rec in &r.records {
        let row = match rec.outcome {
            OrbitResult::Hit { step } => vec!["hit".into(), step.to_string(), String::new()],
            OrbitResult::NoHit { cycle_length } => vec!["no_hit".into(), String::new(), cycle_length.to_string()],
            OrbitResult::Skipped { reason } => {
                vec![format!("skipped:{}", to_json(&reason).as_str().unwrap_or("")), String::new(), String::new()]
            }
        };
        table.push(std::iter::once(rec.prime.to_string()).chain(row).collect());
    }
    table
}

fn density_text(r: &DensityReport) -> String {
    let mut s = format!(
        "y0={} B={} hits={} retained={} density={:.6}\n",
        r.y0, r.bound, r.hit_count, r.retained_prime_count, r.density
    );
    for range in &r.per_range {
        if let Some(d) = range.density {
            s.push_str(&format!("({}, {}] primes={} density={:.6}\n", range.lo, range.hi, range.primes, d));
        }
    }
    s.push_str(&format!(
        "trend slope {} non-increasing={}",
        r.trend_slope.map(|v| format!("{v:.6}")).unwrap_or_else(|| "n/a".into()),
        r.trend_non_increasing
    ));
    s
}

fn cmd_orbit_density(a: &DensityArgs) -> Result<Rendered> {
    let r = orbit_density_scan(&DensityConfig::new(a.y0.clone(), a.bound))?;
    Ok(Rendered {
        text: density_text(&r),
        table: density_table(&r),
        json: to_json(&r),
        anchor: "primes P with y_i = 0 or 1 mod P for some i have natural density zero",
    })
}

fn cmd_newton_density(a: &DensityArgs) -> Result<Rendered> {
    let (agreement, newton, _orbit) = newton_orbit_agreement(&DensityConfig::new(a.y0.clone(), a.bound))?;
    if !agreement.holds {
        return Err(Error::Invariant(format!("Newton and f-orbit scans disagree at {:?}", agreement.disagreements)));
    }
    let text = format!(
        "{}\nagreement with the f-orbit of {}: {} primes compared, {} excluded",
        density_text(&newton),
        agreement.w0,
        agreement.compared,
        agreement.excluded.len()
    );
    let mut json = to_json(&newton);
    json["agreement"] = to_json(&agreement);
    Ok(Rendered {
        text,
        table: density_table(&newton),
        json,
        anchor: "primes where the Newton iteration for z^3 - z converges to a root have natural density zero",
    })
}

fn cmd_conjugacy(a: &ConjugacyArgs, seed: u64) -> Result<Rendered> {
    let r = conjugacy_check(a.samples, seed);
    let mut table = Table::new(&["symbolic", "prime", "points_checked", "pointwise", "holds"]);
    table.push(vec![
        r.symbolic.to_string(),
        r.prime.to_string(),
        r.points_checked.to_string(),
        r.pointwise.to_string(),
        r.holds.to_string(),
    ]);
    Ok(Rendered {
        text: r.holds.to_string(),
        json: to_json(&r),
        table,
        anchor: "eta^-1 o N_g o eta = -2z^3 + 3z^2 for eta(z) = 1/(1 - 2z)",
    })
}
