//! The subgroups `H_n ⊂ E_n ⊂ Aut(T_n)`.
//!
//! `E_1 = Aut(T_1)` and, for `n ≥ 2`, `((a1,a2,a3), b) ∈ E_n` iff every
//! `a_i ∈ E_{n-1}` and the restriction to `T_2` is even. Unrolled, this says
//! that for every vertex `v` at level `≤ n-2` the product of the sign of the
//! label at `v` and the signs of its three children's labels is `+1`; that is
//! the linear scan used by [`is_in_e`].
//!
//! `H_n = [C_3]^n` consists of the portraits whose labels all lie in `C_3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capability, usage, Error, Result};
use crate::stats::CycleTypeCounts;
use crate::tree::{all_portraits, label_count, level_offset, pow3, Perm3, Portrait, Sign};

/// Depth cap for exhaustive enumeration (`|E_3|` is already 816,293,376).
pub const ENUMERATION_CAP: usize = 2;

/// Samples per Monte-Carlo work unit. Fixed so results do not depend on the
/// number of worker threads.
pub const SAMPLE_CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    #[serde(rename = "AUT")]
    Aut,
    E,
    H,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Aut => "AUT",
            GroupKind::E => "E",
            GroupKind::H => "H",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupKind> {
        match s.to_ascii_uppercase().as_str() {
            "AUT" => Ok(GroupKind::Aut),
            "E" => Ok(GroupKind::E),
            "H" => Ok(GroupKind::H),
            _ => usage(format!("unknown group {s:?} (expected E, H or AUT)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroupId {
    pub kind: GroupKind,
    pub depth: usize,
}

impl GroupId {
    pub fn new(kind: GroupKind, depth: usize) -> Result<GroupId> {
        if depth == 0 {
            return usage("group depth must be at least 1");
        }
        Ok(GroupId { kind, depth })
    }

    pub fn contains(&self, g: &Portrait) -> bool {
        g.depth() == self.depth
            && match self.kind {
                GroupKind::Aut => true,
                GroupKind::E => is_in_e(g),
                GroupKind::H => is_in_h(g),
            }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.depth)
    }
}

pub fn is_in_e(g: &Portrait) -> bool {
    let depth = g.depth();
    let labels = g.labels();
    for level in 0..depth.saturating_sub(1) {
        let off = level_offset(level);
        let child_off = level_offset(level + 1);
        for j in 0..pow3(level) {
            let c = child_off + 3 * j;
            let s = labels[off + j].sign()
                * labels[c].sign()
                * labels[c + 1].sign()
                * labels[c + 2].sign();
            if s != Sign::Plus {
                return false;
            }
        }
    }
    true
}

pub fn is_in_h(g: &Portrait) -> bool {
    g.labels().iter().all(|p| p.in_cyclic())
}

/// Exact group order from the closed forms
/// `|Aut(T_n)| = 6^((3^n-1)/2)`, `|E_n| = 2^(3^(n-1)) 3^((3^n-1)/2)`,
/// `|H_n| = 3^((3^n-1)/2)`.
pub fn order(id: GroupId) -> BigUint {
    let half = BigUint::from(3u32).pow(id.depth as u32) - 1u32;
    let half: BigUint = half / 2u32;
    let exp = u32::try_from(&half).expect("exponent fits in u32 for supported depths");
    match id.kind {
        GroupKind::Aut => BigUint::from(6u32).pow(exp),
        GroupKind::H => BigUint::from(3u32).pow(exp),
        GroupKind::E => {
            let two_exp = 3u32.pow(id.depth as u32 - 1);
            BigUint::from(2u32).pow(two_exp) * BigUint::from(3u32).pow(exp)
        }
    }
}

/// Natural log of the group order, from the same closed forms.
pub fn log_order(id: GroupId) -> f64 {
    let n = id.depth as i32;
    let half = (3f64.powi(n) - 1.0) / 2.0;
    match id.kind {
        GroupKind::Aut => half * 6f64.ln(),
        GroupKind::H => half * 3f64.ln(),
        GroupKind::E => 3f64.powi(n - 1) * 2f64.ln() + half * 3f64.ln(),
    }
}

/// Streams every element of the group exactly once. Depth at most 2.
pub fn enumerate(id: GroupId) -> Result<Box<dyn Iterator<Item = Portrait>>> {
    if id.depth > ENUMERATION_CAP {
        return capability(format!(
            "enumeration is limited to depth <= {ENUMERATION_CAP} (|{id}| = {})",
            order(id)
        ));
    }
    let all = all_portraits(id.depth);
    Ok(match id.kind {
        GroupKind::Aut => Box::new(all),
        GroupKind::E => Box::new(all.filter(is_in_e)),
        GroupKind::H => Box::new(all.filter(is_in_h)),
    })
}

pub fn enumerate_e(n: usize) -> Result<Box<dyn Iterator<Item = Portrait>>> {
    enumerate(GroupId::new(GroupKind::E, n)?)
}

/// Exactly uniform element of `E_n` without rejection.
///
/// Equivalent to the recursive recipe "draw `a1,a2,a3` uniformly from
/// `E_{n-1}`, then draw `b` among the three elements of `S_3` whose sign is
/// `∏ sgn(π_1(a_i))`", unrolled bottom-up: deepest labels are free and every
/// label above them is uniform over the coset of the forced sign.
pub fn sample_e_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Portrait> {
    let mut labels = vec![Perm3::E; label_count(n)];
    if n == 0 || n > crate::tree::MAX_DEPTH {
        return usage(format!("depth {n} unsupported"));
    }
    let bottom = level_offset(n - 1);
    for slot in labels[bottom..].iter_mut() {
        *slot = Perm3::ALL[rng.gen_range(0..6)];
    }
    for level in (0..n - 1).rev() {
        let off = level_offset(level);
        let child_off = level_offset(level + 1);
        for j in 0..pow3(level) {
            let c = child_off + 3 * j;
            let need = labels[c].sign() * labels[c + 1].sign() * labels[c + 2].sign();
            let coset = match need {
                Sign::Plus => &Perm3::EVEN,
                Sign::Minus => &Perm3::ODD,
            };
            labels[off + j] = coset[rng.gen_range(0..3)];
        }
    }
    Portrait::from_labels(n, labels)
}

/// Uniform element of `E_n` by recursion with rejection on the root label:
/// recurse for `a1,a2,a3`, then redraw `b ∈ S_3` until `sgn_2 = 1`
/// (acceptance probability 1/2 per vertex).
pub fn sample_e_rejection<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Portrait> {
    if n == 0 {
        return usage("depth must be at least 1");
    }
    if n == 1 {
        return Ok(Portrait::single(Perm3::ALL[rng.gen_range(0..6)]));
    }
    let a = [
        sample_e_rejection(n - 1, rng)?,
        sample_e_rejection(n - 1, rng)?,
        sample_e_rejection(n - 1, rng)?,
    ];
    loop {
        let b = Perm3::ALL[rng.gen_range(0..6)];
        let g = Portrait::wreath_build([&a[0], &a[1], &a[2]], b)?;
        if g.sgn_m(2)? == Sign::Plus {
            return Ok(g);
        }
    }
}

/// Uniform element of the given group.
pub fn sample_uniform<R: Rng + ?Sized>(id: GroupId, rng: &mut R) -> Result<Portrait> {
    match id.kind {
        GroupKind::Aut => Portrait::random(id.depth, rng),
        GroupKind::E => sample_e_uniform(id.depth, rng),
        GroupKind::H => {
            let labels = (0..label_count(id.depth))
                .map(|_| Perm3::CYCLIC[rng.gen_range(0..3)])
                .collect();
            Portrait::from_labels(id.depth, labels)
        }
    }
}

/// `ν_1 = (12)`, `ν_n = ((ν_{n-1},1,1),1)`: swaps two leaves at the bottom.
pub fn build_nu(n: usize) -> Result<Portrait> {
    build_chain(n, Perm3::E)
}

/// `τ_1 = (12)`, `τ_n = ((τ_{n-1},1,1),(12))`.
pub fn build_tau(n: usize) -> Result<Portrait> {
    build_chain(n, Perm3::T12)
}

fn build_chain(n: usize, top: Perm3) -> Result<Portrait> {
    if n == 0 {
        return usage("depth must be at least 1");
    }
    let mut g = Portrait::single(Perm3::T12);
    for d in 2..=n {
        let id = Portrait::identity(d - 1)?;
        g = Portrait::wreath_build([&g, &id, &id], top)?;
    }
    Ok(g)
}

/// `((1,1,1),(123))` at depth `n`.
pub fn top_rotation(n: usize) -> Result<Portrait> {
    if n == 1 {
        return Ok(Portrait::single(Perm3::C123));
    }
    let id = Portrait::identity(n.saturating_sub(1).max(1))?;
    Portrait::wreath_build([&id, &id, &id], Perm3::C123)
}

/// An element that is the identity on `T_{n-1}` and acts on each `T_2`
/// rooted at level `n-2` through the given bottom labels.
///
/// `bottom[j]` holds the three labels below level-`(n-2)` vertex `j`; each
/// triple must have sign product `+1`, which makes the action on the nine
/// leaves of that `T_2` even.
pub fn build_special(n: usize, bottom: &[[Perm3; 3]]) -> Result<Portrait> {
    if n < 2 {
        return usage("special elements need depth >= 2");
    }
    if bottom.len() != pow3(n - 2) {
        return usage(format!("depth {n} needs {} bottom triples, got {}", pow3(n - 2), bottom.len()));
    }
    let mut labels = vec![Perm3::E; label_count(n)];
    let off = level_offset(n - 1);
    for (j, triple) in bottom.iter().enumerate() {
        let s = triple[0].sign() * triple[1].sign() * triple[2].sign();
        if s != Sign::Plus {
            return Err(Error::Validation(format!("bottom triple {j} {triple:?} has odd sign product")));
        }
        labels[off + 3 * j..off + 3 * j + 3].copy_from_slice(triple);
    }
    let g = Portrait::from_labels(n, labels)?;
    if !is_in_e(&g) {
        return Err(Error::Invariant("special element not in E_n".into()));
    }
    Ok(g)
}

/// `log|G_n| / log|Aut(T_n)|`.
pub fn hausdorff_ratio(kind: GroupKind, n: usize) -> Result<f64> {
    let id = GroupId::new(kind, n)?;
    Ok(log_order(id) / log_order(GroupId { kind: GroupKind::Aut, depth: n }))
}

/// Limit of [`hausdorff_ratio`] as `n → ∞`.
pub fn hausdorff_limit(kind: GroupKind) -> f64 {
    match kind {
        GroupKind::Aut => 1.0,
        GroupKind::E => 1.0 - (2f64.ln() / 6f64.ln()) / 3.0,
        GroupKind::H => 3f64.ln() / 6f64.ln(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormalityMode {
    /// `E_n` inside `Aut(T_n)`.
    EInAut,
    /// `H_n` inside `E_n`.
    HInE,
}

impl NormalityMode {
    fn groups(self, n: usize) -> (GroupId, GroupId) {
        match self {
            NormalityMode::EInAut => (GroupId { kind: GroupKind::E, depth: n }, GroupId { kind: GroupKind::Aut, depth: n }),
            NormalityMode::HInE => (GroupId { kind: GroupKind::H, depth: n }, GroupId { kind: GroupKind::E, depth: n }),
        }
    }

    /// Depths at which the subgroup is normal.
    pub fn is_normal_depth(self, n: usize) -> bool {
        match self {
            NormalityMode::EInAut => n <= 2,
            NormalityMode::HInE => n == 1,
        }
    }
}

/// `conjugator · element · conjugator⁻¹ = conjugate` with `element` in the
/// subgroup, `conjugator` in the ambient group and `conjugate` outside the
/// subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalityWitness {
    pub conjugator: Portrait,
    pub element: Portrait,
    pub conjugate: Portrait,
}

/// Checks `g s g⁻¹ ∈ sub` for all `g` in the ambient group and `s` in `sub`.
pub fn is_normal_exhaustive(mode: NormalityMode, n: usize) -> Result<bool> {
    if n > ENUMERATION_CAP {
        return capability(format!("exhaustive normality check limited to depth <= {ENUMERATION_CAP}"));
    }
    let (sub, ambient) = mode.groups(n);
    let subgroup: Vec<Portrait> = enumerate(sub)?.collect();
    for g in enumerate(ambient)? {
        let g_inv = g.inverse();
        for s in &subgroup {
            if !sub.contains(&g.compose(s)?.compose(&g_inv)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `None` for the normal cases (after an exhaustive check), otherwise the
/// explicit witness: `(ν_n, ((1,1,1),(123)))` for `E_n ⊄ Aut(T_n)` normal,
/// `(τ_n, ((1,1,1),(123)))` for `H_n` in `E_n`.
pub fn normality_witness(mode: NormalityMode, n: usize) -> Result<Option<NormalityWitness>> {
    if n == 0 {
        return usage("depth must be at least 1");
    }
    if mode.is_normal_depth(n) {
        return if is_normal_exhaustive(mode, n)? {
            Ok(None)
        } else {
            Err(Error::Invariant(format!("{mode:?} at depth {n} expected normal")))
        };
    }
    let conjugator = match mode {
        NormalityMode::EInAut => build_nu(n)?,
        NormalityMode::HInE => build_tau(n)?,
    };
    let element = top_rotation(n)?;
    let conjugate = conjugator.conjugate(&element)?;
    let (sub, ambient) = mode.groups(n);
    if !ambient.contains(&conjugator) || !sub.contains(&element) || sub.contains(&conjugate) {
        return Err(Error::Invariant(format!("witness construction failed for {mode:?} at depth {n}")));
    }
    Ok(Some(NormalityWitness { conjugator, element, conjugate }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Seeded generator for Monte-Carlo work unit `chunk`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Cycle-type tally of the leaf action of a group, exactly (depth ≤ 2) or by
/// uniform sampling. Monte-Carlo work is split into fixed-size seeded chunks
/// and runs on the current rayon pool.
pub fn cycle_type_distribution(id: GroupId, mode: DistributionMode) -> Result<CycleTypeCounts> {
    match mode {
        DistributionMode::Exact => {
            let mut counts = CycleTypeCounts::default();
            for g in enumerate(id)? {
                counts.add(g.cycle_type());
            }
            Ok(counts)
        }
        DistributionMode::MonteCarlo { samples, seed } => {
            monte_carlo(id, samples, seed, |g, counts| counts.add(g.cycle_type()))
        }
    }
}

/// Runs `visit` on `samples` uniform elements of `id`, chunked deterministically.
pub(crate) fn monte_carlo<F>(id: GroupId, samples: u64, seed: u64, visit: F) -> Result<CycleTypeCounts>
where
    F: Fn(&Portrait, &mut CycleTypeCounts) + Sync,
{
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Result<CycleTypeCounts>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let len = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            let mut counts = CycleTypeCounts::default();
            for _ in 0..len {
                let g = sample_uniform(id, &mut rng)?;
                visit(&g, &mut counts);
            }
            Ok(counts)
        })
        .collect();
    let mut total = CycleTypeCounts::default();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}
