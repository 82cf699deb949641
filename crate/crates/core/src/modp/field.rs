use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (if s >= p as u128 { s - p as u128 } else { s }) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        (a as u128 + p as u128 - b as u128) as u64
    }
}

#[inline]
pub fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo `p`; `None` when `a = 0 mod p`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p as i128) as u64)
}

/// Signed integer to residue.
pub fn from_i64(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64")
}

/// Reduction of a rational number modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Residue {
    Finite(u64),
    /// The denominator is divisible by `p`.
    NonIntegral,
}

impl Residue {
    pub fn finite(self) -> Option<u64> {
        match self {
            Residue::Finite(r) => Some(r),
            Residue::NonIntegral => None,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Finite(r) => write!(f, "{r}"),
            Residue::NonIntegral => f.write_str("inf"),
        }
    }
}

pub fn reduce_rational(x: &BigRational, p: u64) -> Residue {
    let den = bigint_mod(x.denom(), p);
    match inv_mod(den, p) {
        Some(inv) => Residue::Finite(mul_mod(bigint_mod(x.numer(), p), inv, p)),
        None => Residue::NonIntegral,
    }
}

/// A point of the projective line over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum P1 {
    Finite(u64),
    Infinity,
}

impl From<Residue> for P1 {
    fn from(r: Residue) -> P1 {
        match r {
            Residue::Finite(v) => P1::Finite(v),
            Residue::NonIntegral => P1::Infinity,
        }
    }
}

impl fmt::Display for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Finite(r) => write!(f, "{r}"),
            P1::Infinity => f.write_str("inf"),
        }
    }
}

/// `f(y) = -2y^3 + 3y^2 = y^2 (3 - 2y)` mod `p`.
pub fn f_mod(y: u64, p: u64) -> u64 {
    let y2 = mul_mod(y, y, p);
    mul_mod(y2, sub_mod(3 % p, mul_mod(2 % p, y, p), p), p)
}

/// `f` on the projective line; infinity is fixed.
pub fn f_p1(y: P1, p: u64) -> P1 {
    match y {
        P1::Finite(v) => P1::Finite(f_mod(v, p)),
        P1::Infinity => P1::Infinity,
    }
}

/// Newton map of `g(z) = z^3 - z`, `N(y) = 2y^3 / (3y^2 - 1)`, on the
/// projective line. Poles go to infinity, which is fixed. Needs `p` odd and
/// `p != 3` so that numerator and denominator share no root.
pub fn newton_p1(y: P1, p: u64) -> P1 {
    match y {
        P1::Infinity => P1::Infinity,
        P1::Finite(v) => {
            let v2 = mul_mod(v, v, p);
            let num = mul_mod(2 % p, mul_mod(v2, v, p), p);
            let den = sub_mod(mul_mod(3 % p, v2, p), 1 % p, p);
            match inv_mod(den, p) {
                Some(inv) => P1::Finite(mul_mod(num, inv, p)),
                None => P1::Infinity,
            }
        }
    }
}

/// `eta(z) = 1 / (1 - 2z)` on the projective line (`p` odd).
pub fn eta_p1(z: P1, p: u64) -> P1 {
    match z {
        P1::Infinity => P1::Finite(0),
        P1::Finite(v) => {
            let den = sub_mod(1 % p, mul_mod(2 % p, v, p), p);
            match inv_mod(den, p) {
                Some(inv) => P1::Finite(inv),
                None => P1::Infinity,
            }
        }
    }
}

/// `eta^{-1}(y) = (y - 1) / (2y)` on the projective line (`p` odd).
pub fn eta_inv_p1(y: P1, p: u64) -> P1 {
    match y {
        P1::Infinity => P1::Finite(inv_mod(2, p).expect("p odd")),
        P1::Finite(0) => P1::Infinity,
        P1::Finite(v) => {
            let inv = inv_mod(mul_mod(2 % p, v, p), p).unwrap();
            P1::Finite(mul_mod(sub_mod(v, 1 % p, p), inv, p))
        }
    }
}

impl P1 {
    pub fn is_zero_or_one(self, p: u64) -> bool {
        matches!(self, P1::Finite(v) if v == 0 || v == 1 % p)
    }
}
