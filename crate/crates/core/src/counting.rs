//! Counting elements of `E_n` that fix a leaf.
//!
//! Raw counts: `A_{n,i}` is the number of elements of `E_n` acting with order
//! `i` on `T_1`, and `A'_{n,i}` those among them that also fix a leaf. With
//! `S = A'_{n,1} + A'_{n,2}`,
//!
//! ```text
//! A'_{n+1,1} = 54 A_{n,1}^2 S - 9 A_{n,1} S^2 + 3 A'_{n,1} (A'_{n,2})^2 + (A'_{n,1})^3
//! A'_{n+1,2} = 54 A_{n,1}^2 S
//! ```
//!
//! and `A'_{n,3} = 0`, `A_{n,2} = 3A_{n,1}`, `A_{n,3} = 2A_{n,1}`,
//! `|E_n| = 6A_{n,1}`, `|E_{n+1}| = 3|E_n|^3`.
//!
//! # Normalized recursion
//!
//! Put `α = A'_{n,1}/A_{n,1}` and `β = A'_{n,2}/A_{n,1}`. Since
//! `A_{n+1,1} = |E_{n+1}|/6 = 3(6A_{n,1})^3/6 = 108 A_{n,1}^3`, dividing the two
//! recursions by `108 A_{n,1}^3` gives
//!
//! ```text
//! α' = (54(α+β) - 9(α+β)^2 + 3αβ^2 + α^3) / 108
//! β' = (α+β) / 2
//! ```
//!
//! and the fixing proportion is `x_n = |E_{n,fix}|/|E_n| = (α+β)/6`. Starting
//! from `(α, β) = (1, 3)` at `n = 1` this gives `x_2 = 79/162 = 316/648`, the
//! brute-force count over all of `E_2`. The same recursion runs over any
//! [`Scalar`]: exact rationals or `f64`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{capability, usage, Error, Result};
use crate::groups::{self, GroupId, GroupKind};
use crate::scalar::Scalar;

/// Default depth cap for exact big-integer tables and exact ratios.
pub const EXACT_CAP: usize = 8;

/// Exact ratio states larger than this (numerator + denominator bits) are refused.
pub const EXACT_BIT_BUDGET: u64 = 1 << 24;

/// Slack allowed on float sandwich comparisons.
pub const FLOAT_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATable {
    pub n: usize,
    /// `A_{n,1}, A_{n,2}, A_{n,3}`.
    pub a: [BigUint; 3],
    /// `A'_{n,1}, A'_{n,2}, A'_{n,3}`.
    pub a_prime: [BigUint; 3],
}

impl ATable {
    pub fn base() -> ATable {
        let u = |v: u32| BigUint::from(v);
        ATable { n: 1, a: [u(1), u(3), u(2)], a_prime: [u(1), u(3), u(0)] }
    }

    /// `|E_{n,fix}| = A'_{n,1} + A'_{n,2}`.
    pub fn fixers(&self) -> BigUint {
        &self.a_prime[0] + &self.a_prime[1]
    }

    pub fn group_order(&self) -> BigUint {
        &self.a[0] + &self.a[1] + &self.a[2]
    }

    pub fn step(&self) -> ATable {
        let a1 = BigInt::from(self.a[0].clone());
        let p1 = BigInt::from(self.a_prime[0].clone());
        let p2 = BigInt::from(self.a_prime[1].clone());
        let s = &p1 + &p2;
        let lead = BigInt::from(54) * &a1 * &a1 * &s;
        let next_p1 = &lead - BigInt::from(9) * &a1 * &s * &s + BigInt::from(3) * &p1 * &p2 * &p2 + &p1 * &p1 * &p1;
        let next_p2 = lead;
        let next_a1 = BigInt::from(108) * &a1 * &a1 * &a1;
        let to_u = |v: BigInt| v.to_biguint().expect("counts are non-negative");
        let a1u = to_u(next_a1);
        ATable {
            n: self.n + 1,
            a: [a1u.clone(), &a1u * 3u32, &a1u * 2u32],
            a_prime: [to_u(next_p1), to_u(next_p2), BigUint::zero()],
        }
    }

    /// `(α, β)` read off the table.
    pub fn ratios(&self) -> (BigRational, BigRational) {
        let den = BigInt::from(self.a[0].clone());
        (
            BigRational::new(BigInt::from(self.a_prime[0].clone()), den.clone()),
            BigRational::new(BigInt::from(self.a_prime[1].clone()), den),
        )
    }
}

/// Exact `A`/`A'` table at depth `n` (capped at [`EXACT_CAP`]).
pub fn a_table(n: usize) -> Result<ATable> {
    a_table_capped(n, EXACT_CAP)
}

pub fn a_table_capped(n: usize, cap: usize) -> Result<ATable> {
    if n == 0 {
        return usage("depth must be at least 1");
    }
    if n > cap {
        return capability(format!(
            "exact A-table limited to n <= {cap}; use the normalized ratio recursion for larger n"
        ));
    }
    let mut t = ATable::base();
    while t.n < n {
        t = t.step();
    }
    Ok(t)
}

/// Counts elements of the group that fix a leaf by enumeration (depth ≤ 2).
pub fn brute_force_fix_count(id: GroupId) -> Result<u64> {
    Ok(groups::enumerate(id)?.filter(|g| g.fixes_a_leaf()).count() as u64)
}

/// Normalized counters `α = A'_{n,1}/A_{n,1}`, `β = A'_{n,2}/A_{n,1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioState<T> {
    pub n: usize,
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> RatioState<T> {
    /// `n = 1`: `(α, β) = (1, 3)`.
    pub fn initial() -> Self {
        RatioState { n: 1, alpha: T::from_int(1), beta: T::from_int(3) }
    }

    /// `x_n = (α + β)/6`.
    pub fn fix_proportion(&self) -> T {
        (self.alpha.clone() + self.beta.clone()) / T::from_int(6)
    }

    pub fn step(&self) -> Result<Self> {
        let (a, b) = (&self.alpha, &self.beta);
        let s = a.clone() + b.clone();
        let c = |v| T::from_int(v);
        let alpha = (c(54) * s.clone() - c(9) * s.clone() * s.clone()
            + c(3) * a.clone() * b.clone() * b.clone()
            + a.clone() * a.clone() * a.clone())
            / c(108);
        let beta = s / c(2);
        if alpha.size_bits() + beta.size_bits() > EXACT_BIT_BUDGET {
            return capability(format!(
                "exact ratio state at n = {} exceeds {EXACT_BIT_BUDGET} bits; switch to float mode",
                self.n + 1
            ));
        }
        Ok(RatioState { n: self.n + 1, alpha, beta })
    }

    /// State at depth `n` obtained by iterating from [`RatioState::initial`].
    pub fn at(n: usize) -> Result<Self> {
        if n == 0 {
            return usage("depth must be at least 1");
        }
        let mut s = Self::initial();
        while s.n < n {
            s = s.step()?;
        }
        Ok(s)
    }
}

/// Single step of the normalized recursion.
pub fn ratio_step<T: Scalar>(s: &RatioState<T>) -> Result<RatioState<T>> {
    s.step()
}

/// `x_n` in the scalar type of choice.
pub fn fix_ratio_in<T: Scalar>(n: usize) -> Result<T> {
    Ok(RatioState::<T>::at(n)?.fix_proportion())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioMode {
    Exact,
    Float,
    /// Exact up to [`EXACT_CAP`], float beyond.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixRatio {
    Exact(BigRational),
    Float(f64),
}

impl FixRatio {
    pub fn to_f64(&self) -> f64 {
        match self {
            FixRatio::Exact(r) => r.as_f64(),
            FixRatio::Float(v) => *v,
        }
    }
}

impl std::fmt::Display for FixRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixRatio::Exact(r) => write!(f, "{r}"),
            FixRatio::Float(v) => write!(f, "{v:.17e}"),
        }
    }
}

pub fn fix_ratio(n: usize, mode: RatioMode) -> Result<FixRatio> {
    match mode {
        RatioMode::Exact if n > EXACT_CAP => capability(format!(
            "exact ratio limited to n <= {EXACT_CAP}; use float mode"
        )),
        RatioMode::Exact => Ok(FixRatio::Exact(fix_ratio_in(n)?)),
        RatioMode::Float => Ok(FixRatio::Float(fix_ratio_in(n)?)),
        RatioMode::Auto if n <= EXACT_CAP => Ok(FixRatio::Exact(fix_ratio_in(n)?)),
        RatioMode::Auto => Ok(FixRatio::Float(fix_ratio_in(n)?)),
    }
}

/// `φ(t) = t - t²/2 + t³/3`.
pub fn phi<T: Scalar>(t: &T) -> T {
    t.clone() - t.clone() * t.clone() / T::from_int(2) + t.clone() * t.clone() * t.clone() / T::from_int(3)
}

/// `ρ(t) = t - t²/2`.
pub fn rho<T: Scalar>(t: &T) -> T {
    t.clone() - t.clone() * t.clone() / T::from_int(2)
}

/// `R(z) = (z + 2) / (2(6z² - 3z + 2))`.
pub fn r_term<T: Scalar>(z: &T) -> T {
    let c = |v| T::from_int(v);
    (z.clone() + c(2)) / (c(2) * (c(6) * z.clone() * z.clone() - c(3) * z.clone() + c(2)))
}

/// `ψ(z) = 1/φ(1/z) = z + 1/2 - R(z)`.
pub fn psi<T: Scalar>(z: &T) -> T {
    z.clone() + T::from_ratio(1, 2) - r_term(z)
}

pub fn iterate<T: Clone>(map: impl Fn(&T) -> T, n: usize, start: T) -> T {
    (0..n).fold(start, |acc, _| map(&acc))
}

/// `φⁿ(1)`.
pub fn phi_iter(n: usize) -> f64 {
    iterate(phi::<f64>, n, 1.0)
}

/// `ρⁿ(2/3)`.
pub fn rho_iter(n: usize) -> f64 {
    iterate(rho::<f64>, n, 2.0 / 3.0)
}

/// `ψⁿ(1)`.
pub fn psi_iter(n: usize) -> f64 {
    iterate(psi::<f64>, n, 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    pub n: usize,
    /// `ρⁿ(2/3)`.
    pub lower: f64,
    /// `x_{n+1}`.
    pub x_next: f64,
    /// `φⁿ(1)`.
    pub upper: f64,
    pub exact: bool,
    /// Both inequalities strict (exact rows only; float rows report `false`).
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub n_max: usize,
    pub exact_through: usize,
    pub float_slack: f64,
    pub rows: Vec<SandwichRow>,
}

/// Verifies `ρⁿ(2/3) ≤ x_{n+1} ≤ φⁿ(1)` for `1 ≤ n ≤ n_max`: exact rationals
/// for `n ≤` [`EXACT_CAP`], floats with [`FLOAT_SLACK`] beyond. A violation is
/// an [`Error::Invariant`].
pub fn sandwich_check(n_max: usize) -> Result<SandwichReport> {
    if n_max == 0 {
        return usage("n_max must be at least 1");
    }
    let exact_through = n_max.min(EXACT_CAP);
    let mut rows = Vec::with_capacity(n_max);

    let mut state = RatioState::<BigRational>::initial();
    let mut lo = BigRational::from_ratio(2, 3);
    let mut hi = BigRational::from_int(1);
    for n in 1..=exact_through {
        state = state.step()?;
        lo = rho(&lo);
        hi = phi(&hi);
        let x = state.fix_proportion();
        if !(lo <= x && x <= hi) {
            return Err(Error::Invariant(format!("exact sandwich fails at n = {n}")));
        }
        rows.push(SandwichRow {
            n,
            lower: lo.as_f64(),
            x_next: x.as_f64(),
            upper: hi.as_f64(),
            exact: true,
            strict: lo < x && x < hi,
        });
    }

    let mut fstate = RatioState::<f64>::at(exact_through + 1)?;
    let mut flo = rho_iter(exact_through);
    let mut fhi = phi_iter(exact_through);
    for n in exact_through + 1..=n_max {
        fstate = fstate.step()?;
        flo = rho(&flo);
        fhi = phi(&fhi);
        let x = fstate.fix_proportion();
        if x < flo - FLOAT_SLACK || x > fhi + FLOAT_SLACK {
            return Err(Error::Invariant(format!("float sandwich fails at n = {n}: {flo} <= {x} <= {fhi}")));
        }
        rows.push(SandwichRow { n, lower: flo, x_next: x, upper: fhi, exact: false, strict: false });
    }
    Ok(SandwichReport { n_max, exact_through, float_slack: FLOAT_SLACK, rows })
}

/// One line of the `fixratio` table: `x_n` with its bounds `ρ^{n-1}(2/3)` and
/// `φ^{n-1}(1)`.
#[derive(Debug, Clone, Serialize)]
pub struct FixRatioRow {
    pub n: usize,
    /// Exact `num/den` when computed exactly, otherwise a float rendering.
    pub x_n: String,
    pub x_n_f64: f64,
    pub rho_lower: f64,
    pub phi_upper: f64,
    pub n_times_x: f64,
    pub exact: bool,
}

pub fn fix_ratio_table(n_max: usize, mode: RatioMode) -> Result<Vec<FixRatioRow>> {
    if n_max == 0 {
        return usage("n must be at least 1");
    }
    if mode == RatioMode::Exact && n_max > EXACT_CAP {
        return capability(format!("exact ratio limited to n <= {EXACT_CAP}; use float mode"));
    }
    let exact_upto = match mode {
        RatioMode::Float => 0,
        _ => n_max.min(EXACT_CAP),
    };
    let mut rows = Vec::with_capacity(n_max);
    let mut exact = RatioState::<BigRational>::initial();
    let mut float = RatioState::<f64>::initial();
    let (mut lo, mut hi) = (2.0 / 3.0, 1.0);
    for n in 1..=n_max {
        if n > 1 {
            if n <= exact_upto {
                exact = exact.step()?;
            }
            float = float.step()?;
            lo = rho(&lo);
            hi = phi(&hi);
        }
        let (text, value, is_exact) = if n <= exact_upto {
            let x = exact.fix_proportion();
            (x.to_string(), x.as_f64(), true)
        } else {
            let x = float.fix_proportion();
            (format!("{x:.17e}"), x, false)
        };
        rows.push(FixRatioRow {
            n,
            x_n: text,
            x_n_f64: value,
            rho_lower: lo,
            phi_upper: hi,
            n_times_x: n as f64 * value,
            exact: is_exact,
        });
    }
    Ok(rows)
}

/// Brute-force fixer counts at depth 2 for `E_2` and `H_2`.
pub fn small_depth_fixers() -> Result<[(GroupKind, u64, BigUint); 2]> {
    let e = GroupId::new(GroupKind::E, 2)?;
    let h = GroupId::new(GroupKind::H, 2)?;
    Ok([
        (GroupKind::E, brute_force_fix_count(e)?, groups::order(e)),
        (GroupKind::H, brute_force_fix_count(h)?, groups::order(h)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn base_and_second_tables() {
        let t1 = a_table(1).unwrap();
        assert_eq!(t1, ATable::base());
        let t2 = a_table(2).unwrap();
        assert_eq!(t2.a_prime[0], BigUint::from(100u32));
        assert_eq!(t2.a_prime[1], BigUint::from(216u32));
        assert_eq!(t2.fixers(), BigUint::from(316u32));
        assert_eq!(t2.a[0], BigUint::from(108u32));
        assert!(matches!(a_table(9), Err(Error::Capability(_))));
    }

    #[test]
    fn table_invariants_and_ratio_agreement() {
        let mut state = RatioState::<BigRational>::initial();
        for n in 1..=EXACT_CAP {
            let t = a_table(n).unwrap();
            assert_eq!(t.group_order(), groups::order(GroupId::new(GroupKind::E, n).unwrap()));
            assert!(t.a_prime[2].is_zero());
            for i in 0..3 {
                assert!(t.a_prime[i] <= t.a[i]);
            }
            let (alpha, beta) = t.ratios();
            assert_eq!(state.alpha, alpha);
            assert_eq!(state.beta, beta);
            if n < EXACT_CAP {
                state = state.step().unwrap();
            }
        }
    }

    #[test]
    fn brute_force_counts() {
        let e1 = GroupId::new(GroupKind::E, 1).unwrap();
        assert_eq!(brute_force_fix_count(e1).unwrap(), 4);
        let e2 = GroupId::new(GroupKind::E, 2).unwrap();
        assert_eq!(brute_force_fix_count(e2).unwrap(), 316);
        let [_, (_, h_fix, h_order)] = small_depth_fixers().unwrap();
        assert_eq!(h_order, BigUint::from(81u32));
        // C_3 ≀ C_3: fixers need identity at the root, then some child label trivial.
        assert_eq!(h_fix, 27 - 8);
        assert!(brute_force_fix_count(GroupId::new(GroupKind::E, 3).unwrap()).is_err());
    }

    #[test]
    fn ratio_steps() {
        let s2 = RatioState::<BigRational>::initial().step().unwrap();
        assert_eq!(s2.alpha, rational(25, 27));
        assert_eq!(s2.beta, rational(2, 1));
        assert_eq!(s2.fix_proportion(), rational(79, 162));
        let s3 = s2.step().unwrap();
        assert_eq!(s3.beta, rational(79, 54));
        assert_eq!(s3.fix_proportion(), rational(2_468_795, 6_377_292));
        let zero = RatioState::<BigRational> { n: 5, alpha: rational(0, 1), beta: rational(0, 1) };
        let next = zero.step().unwrap();
        assert_eq!((next.alpha, next.beta), (rational(0, 1), rational(0, 1)));
    }

    #[test]
    fn exact_and_float_routes_agree() {
        for n in 1..=EXACT_CAP {
            let e = fix_ratio_in::<BigRational>(n).unwrap().as_f64();
            let f = fix_ratio_in::<f64>(n).unwrap();
            let g = fix_ratio_in::<f32>(n).unwrap() as f64;
            assert!((e - f).abs() < 1e-14 * e.max(1e-300));
            assert!((e - g).abs() < 1e-5);
        }
    }

    #[test]
    fn fix_ratio_examples() {
        assert_eq!(fix_ratio(1, RatioMode::Exact).unwrap(), FixRatio::Exact(rational(2, 3)));
        assert_eq!(fix_ratio(2, RatioMode::Exact).unwrap().to_string(), "79/162");
        let v = fix_ratio(1000, RatioMode::Auto).unwrap().to_f64();
        assert!((1000.0 * v - 2.0).abs() < 0.1);
        assert!(fix_ratio(20, RatioMode::Exact).is_err());
    }

    #[test]
    fn maps_and_iterates() {
        assert_eq!(phi_iter(0), 1.0);
        assert!((phi_iter(1) - 5.0 / 6.0).abs() < 1e-15);
        assert!((psi_iter(1) - 1.2).abs() < 1e-15);
        assert_eq!(psi(&BigRational::from_int(1)), rational(6, 5));
        assert_eq!(rho(&rational(2, 3)), rational(4, 9));
        let mut worst: f64 = 0.0;
        let (mut phi_v, mut psi_v) = (1.0f64, 1.0f64);
        for n in 1..=10_000usize {
            phi_v = phi(&phi_v);
            psi_v = psi(&psi_v);
            assert!(psi_v >= (n as f64 + 5.0) / 5.0);
            worst = worst.max((psi_v * phi_v - 1.0).abs());
        }
        assert!(worst < 1e-12, "worst relative error {worst}");
    }

    #[test]
    fn r_bound_holds() {
        for k in 1..2000 {
            let z = k as f64 / 100.0;
            assert!(r_term(&z) <= 1.0 / (3.0 * z) + 1e-15);
        }
    }

    #[test]
    fn sandwich() {
        let report = sandwich_check(8).unwrap();
        let first = &report.rows[0];
        assert!((first.lower - 4.0 / 9.0).abs() < 1e-15);
        assert!((first.x_next - 79.0 / 162.0).abs() < 1e-15);
        assert!((first.upper - 5.0 / 6.0).abs() < 1e-15);
        assert!(report.rows.iter().all(|r| r.exact && r.strict));
        let long = sandwich_check(2000).unwrap();
        assert_eq!(long.rows.len(), 2000);
    }

    #[test]
    fn table_rows() {
        let rows = fix_ratio_table(3, RatioMode::Auto).unwrap();
        assert_eq!(rows[0].x_n, "2/3");
        assert_eq!(rows[1].x_n, "79/162");
        assert_eq!(rows[1].rho_lower, 4.0 / 9.0);
        let float_rows = fix_ratio_table(12, RatioMode::Float).unwrap();
        assert!(!float_rows[11].exact);
        assert!((float_rows[1].x_n_f64 - 79.0 / 162.0).abs() < 1e-15);
    }
}
