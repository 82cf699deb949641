use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::field::*;
use crate::error::{capability, usage, Result};
use crate::poly::RatPoly;
use crate::tree::CycleType;

/// Dense polynomial over `F_p`; residues in `[0, p)`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut q = PolyModP { p, coeffs };
        q.trim();
        q
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Self {
        PolyModP::new(p, coeffs.iter().map(|&c| from_i64(c, p)).collect())
    }

    /// `None` if some coefficient has a denominator divisible by `p`.
    pub fn reduce(poly: &RatPoly, p: u64) -> Option<Self> {
        let coeffs = poly
            .coeffs()
            .iter()
            .map(|c| reduce_rational(c, p).finite())
            .collect::<Option<Vec<_>>>()?;
        Some(PolyModP::new(p, coeffs))
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyModP::new(p, vec![1])
    }

    pub fn var(p: u64) -> Self {
        PolyModP::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, z, self.p), c, self.p))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyModP::new(self.p, (0..n).map(|i| add_mod(self.coeff(i), o.coeff(i), self.p)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyModP::new(self.p, (0..n).map(|i| sub_mod(self.coeff(i), o.coeff(i), self.p)).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        PolyModP::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return PolyModP::zero(self.p);
        }
        let p = self.p;
        let small = p <= u32::MAX as u64;
        let mut acc = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &mut acc[i..i + o.coeffs.len()];
            if small {
                for (slot, &b) in row.iter_mut().zip(&o.coeffs) {
                    *slot += a as u128 * b as u128;
                }
            } else {
                for (slot, &b) in row.iter_mut().zip(&o.coeffs) {
                    *slot += mul_mod(a, b, p) as u128;
                }
            }
        }
        PolyModP::new(p, acc.into_iter().map(|c| (c % p as u128) as u64).collect())
    }

    pub fn derivative(&self) -> Self {
        PolyModP::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(i as u64 % self.p, c, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => self.scale(inv_mod(l, self.p).unwrap()),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = inv_mod(*d.coeffs.last().unwrap(), p).unwrap();
        let Some(sd) = self.degree().filter(|&s| s >= dd) else {
            return (PolyModP::zero(p), self.clone());
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = rem[k + dd];
            if top == 0 {
                continue;
            }
            let q = mul_mod(top, inv, p);
            for (i, &c) in d.coeffs.iter().enumerate() {
                rem[k + i] = sub_mod(rem[k + i], mul_mod(q, c, p), p);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (PolyModP::new(p, quot), PolyModP::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = PolyModP::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

impl fmt::Debug for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyModP(p={}, {:?})", self.p, self.coeffs)
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

/// The `F_p`-linear map `h -> h^p mod q`, stored as the images of `z^i`.
pub struct Frobenius {
    modulus: PolyModP,
    rows: Vec<PolyModP>,
}

impl Frobenius {
    pub fn new(q: &PolyModP) -> Self {
        let p = q.p;
        let d = q.degree().expect("nonzero modulus");
        let zp = PolyModP::var(p).pow_mod(p, q);
        let mut rows = Vec::with_capacity(d);
        let mut cur = PolyModP::one(p).rem(q);
        for _ in 0..d {
            rows.push(cur.clone());
            cur = cur.mul(&zp).rem(q);
        }
        Frobenius { modulus: q.clone(), rows }
    }

    /// `z^p mod q`.
    pub fn z_to_p(&self) -> PolyModP {
        self.apply(&PolyModP::var(self.modulus.p).rem(&self.modulus))
    }

    pub fn apply(&self, h: &PolyModP) -> PolyModP {
        let p = self.modulus.p;
        let d = self.rows.len();
        let mut acc = vec![0u128; d];
        for (i, &c) in h.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &r) in acc.iter_mut().zip(&self.rows[i].coeffs) {
                *slot += mul_mod(c, r, p) as u128;
            }
        }
        PolyModP::new(p, acc.into_iter().map(|c| (c % p as u128) as u64).collect())
    }
}

/// Degrees of the irreducible factors, as `degree -> count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorPattern {
    pub degrees: BTreeMap<u32, u32>,
    pub squarefree: bool,
}

impl FactorPattern {
    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().map(|(d, c)| d * c).sum()
    }

    pub fn linear_factors(&self) -> u32 {
        self.degrees.get(&1).copied().unwrap_or(0)
    }

    /// The pattern as a partition; `None` if not squarefree or constant.
    pub fn cycle_type(&self) -> Option<CycleType> {
        if !self.squarefree {
            return None;
        }
        let parts = self.degrees.iter().flat_map(|(&d, &c)| std::iter::repeat_n(d, c as usize)).collect();
        CycleType::from_parts(parts).ok()
    }
}

/// Distinct-degree factorization. Only counts per degree are produced; no
/// equal-degree splitting. Non-squarefree input gets an empty pattern with
/// `squarefree = false`.
pub fn factor_pattern(q: &PolyModP) -> Result<FactorPattern> {
    if q.p == 2 {
        return usage("factor_pattern needs an odd prime");
    }
    let Some(deg) = q.degree() else {
        return usage("factor_pattern of the zero polynomial");
    };
    let q = q.monic();
    let mut degrees = BTreeMap::new();
    if deg == 0 {
        return Ok(FactorPattern { degrees, squarefree: true });
    }
    let dq = q.derivative();
    let squarefree = !dq.is_zero() && q.gcd(&dq).degree() == Some(0);
    if !squarefree {
        return Ok(FactorPattern { degrees, squarefree: false });
    }
    let frob = Frobenius::new(&q);
    let z = PolyModP::var(q.p).rem(&q);
    let mut rest = q.clone();
    let mut h = z.clone();
    let mut d = 1usize;
    while let Some(rd) = rest.degree().filter(|&r| r > 0) {
        if rd < 2 * d {
            *degrees.entry(rd as u32).or_insert(0) += 1;
            break;
        }
        h = frob.apply(&h);
        let g = h.sub(&z).gcd(&rest);
        let gd = g.degree().unwrap();
        if gd > 0 {
            degrees.insert(d as u32, (gd / d) as u32);
            rest = rest.div_rem(&g).0;
        }
        d += 1;
    }
    Ok(FactorPattern { degrees, squarefree: true })
}

/// Number of distinct roots in `F_p`: `deg gcd(z^p - z, q)`.
pub fn count_roots(q: &PolyModP) -> Result<usize> {
    if q.p == 2 {
        return usage("count_roots needs an odd prime");
    }
    if q.is_zero() {
        return usage("count_roots of the zero polynomial");
    }
    if q.degree() == Some(0) {
        return Ok(0);
    }
    let q = q.monic();
    let zp = PolyModP::var(q.p).pow_mod(q.p, &q);
    let g = zp.sub(&PolyModP::var(q.p)).gcd(&q);
    Ok(g.degree().unwrap_or(0))
}

/// Default cap on the mod-p iterate depth (degree `3^10`).
pub const MODP_ITERATE_CAP: u32 = 10;

pub fn f_iterate_mod_p_capped(n: u32, p: u64, cap: u32) -> Result<PolyModP> {
    if n > cap {
        return capability(format!("mod-p iterate depth {n} exceeds cap {cap}"));
    }
    let three = PolyModP::from_i64s(p, &[3]);
    let mut g = PolyModP::var(p);
    for _ in 0..n {
        let sq = g.mul(&g);
        g = sq.mul(&three.sub(&g.scale(2 % p)));
    }
    Ok(g)
}

/// `f^n` reduced mod `p`, computed entirely in `F_p`.
pub fn f_iterate_mod_p(n: u32, p: u64) -> Result<PolyModP> {
    f_iterate_mod_p_capped(n, p, MODP_ITERATE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::f_iterate;
    use rand::{Rng, SeedableRng};

    fn pm(p: u64, c: &[i64]) -> PolyModP {
        PolyModP::from_i64s(p, c)
    }

    fn pattern(pairs: &[(u32, u32)]) -> BTreeMap<u32, u32> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn iterate_examples() {
        let mut z9 = vec![0i64; 10];
        z9[9] = 1;
        assert_eq!(f_iterate_mod_p(2, 3).unwrap(), pm(3, &z9));
        assert_eq!(f_iterate_mod_p(1, 5).unwrap(), pm(5, &[0, 0, 3, 3]));
        let q = f_iterate_mod_p(3, 7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let z = rng.gen_range(0..7);
            let mut y = z;
            for _ in 0..3 {
                y = f_mod(y, 7);
            }
            assert_eq!(q.eval(z), y);
        }
        assert_eq!(f_iterate_mod_p(11, 7).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn iterate_matches_reduction() {
        let primes = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 101, 257, 65537, 1_000_003, 998244353,
            4294967311, 1_000_000_007, 18446744073709551557];
        for n in 0..=6 {
            let exact = f_iterate(n).unwrap();
            for &p in &primes {
                assert_eq!(f_iterate_mod_p(n, p).unwrap(), PolyModP::reduce(&exact, p).unwrap(), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn pow_mod_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let m = PolyModP::new(p, (0..5).map(|_| rng.gen_range(0..p)).chain([1]).collect());
            let b = PolyModP::new(p, (0..4).map(|_| rng.gen_range(0..p)).collect());
            let mut slow = PolyModP::one(p).rem(&m);
            for _ in 0..p {
                slow = slow.mul(&b).rem(&m);
            }
            assert_eq!(b.pow_mod(p, &m), slow);
            let frob = Frobenius::new(&m);
            assert_eq!(frob.apply(&b.rem(&m)), slow);
        }
    }

    #[test]
    fn factor_examples() {
        let a = factor_pattern(&pm(5, &[1, 0, 1])).unwrap();
        assert!(a.squarefree);
        assert_eq!(a.degrees, pattern(&[(1, 2)]));
        assert_eq!(factor_pattern(&pm(7, &[1, 0, 1])).unwrap().degrees, pattern(&[(2, 1)]));
        assert_eq!(count_roots(&pm(5, &[1, 0, 1])).unwrap(), 2);
        assert_eq!(count_roots(&pm(7, &[1, 0, 1])).unwrap(), 0);
        // (z-1)^2 (z+1)
        assert!(!factor_pattern(&pm(7, &[1, -1, -1, 1])).unwrap().squarefree);
        // (z^2+1)(z^3+z+1)(z-3) mod 7: z^3+z+1 has no roots mod 7
        let q = pm(7, &[1, 0, 1]).mul(&pm(7, &[1, 1, 0, 1])).mul(&pm(7, &[-3, 1]));
        assert_eq!(factor_pattern(&q).unwrap().degrees, pattern(&[(1, 1), (2, 1), (3, 1)]));
        assert!(factor_pattern(&pm(2, &[1, 1])).is_err());
    }

    #[test]
    fn cubic_patterns_are_partitions() {
        let primes = super::super::sieve(400).unwrap();
        let mut seen = 0;
        for &p in primes.primes().iter().filter(|&&p| p > 3).take(50) {
            let q = f_iterate_mod_p(1, p).unwrap().sub(&pm(p, &[3]));
            let pat = factor_pattern(&q).unwrap();
            if !pat.squarefree {
                continue;
            }
            seen += 1;
            assert_eq!(pat.total_degree(), 3);
            assert_eq!(pat.linear_factors() as usize, count_roots(&q).unwrap());
        }
        assert!(seen >= 48);
    }

    #[test]
    fn roots_by_evaluation() {
        for &p in &[11u64, 13, 101, 211] {
            for n in 1..=3 {
                let q = f_iterate_mod_p(n, p).unwrap().sub(&pm(p, &[3]));
                let brute = (0..p).filter(|&z| q.eval(z) == 0).count();
                assert_eq!(count_roots(&q).unwrap(), brute);
                let pat = factor_pattern(&q).unwrap();
                if pat.squarefree {
                    assert_eq!(pat.linear_factors() as usize, brute);
                    assert_eq!(pat.total_degree(), 3u32.pow(n));
                }
            }
        }
    }
}
