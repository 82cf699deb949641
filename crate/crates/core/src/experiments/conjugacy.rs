use rand::Rng;
use serde::Serialize;

use crate::groups::chunk_rng;
use crate::modp::{add_mod, f_mod, inv_mod, mul_mod, newton_p1, P1};
use crate::poly::{f_poly, RatPoly};
use crate::scalar::rational;

/// Prime used for the pointwise comparison.
pub const CONJUGACY_PRIME: u64 = 1_000_003;

/// `z -> (a z + b) / (c z + d)` with integer entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mobius {
    /// `eta(z) = 1 / (1 - 2z)`.
    pub const ETA: Mobius = Mobius { a: 0, b: 1, c: -2, d: 1 };
    /// `z + 1`, a control that does not conjugate.
    pub const SHIFT: Mobius = Mobius { a: 1, b: 1, c: 0, d: 1 };

    fn apply_mod(self, z: P1, p: u64) -> P1 {
        let r = |v: i64| crate::modp::from_i64(v, p);
        let (a, b, c, d) = (r(self.a), r(self.b), r(self.c), r(self.d));
        let (num, den) = match z {
            P1::Infinity => (a, c),
            P1::Finite(v) => (add_mod(mul_mod(a, v, p), b, p), add_mod(mul_mod(c, v, p), d, p)),
        };
        match inv_mod(den, p) {
            Some(inv) => P1::Finite(mul_mod(num, inv, p)),
            None => P1::Infinity,
        }
    }

    fn inverse(self) -> Mobius {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub map: Mobius,
    /// `m^{-1} o N o m = f` as rational functions, cross-multiplied.
    pub symbolic: bool,
    pub prime: u64,
    pub points_checked: usize,
    pub pointwise: bool,
    pub holds: bool,
}

/// Cross-multiplied check of `m^{-1}(N(m(z))) = f(z)` where
/// `N(y) = 2y^3 / (3y^2 - 1)`.
fn symbolic(m: Mobius) -> bool {
    let lin = |s: i64, t: i64| RatPoly::from_i64s(&[t, s]);
    let p = lin(m.a, m.b); // m = p / q
    let q = lin(m.c, m.d);
    let p2 = &p * &p;
    let u = &(&p2 * &p).scale(&rational(2, 1));
    let v = &q * &(&p2.scale(&rational(3, 1)) - &(&q * &q));
    let inv = m.inverse();
    let num = &u.scale(&rational(inv.a, 1)) + &v.scale(&rational(inv.b, 1));
    let den = &u.scale(&rational(inv.c, 1)) + &v.scale(&rational(inv.d, 1));
    den.degree().is_some() && num == &f_poly() * &den
}

pub fn conjugacy_check_with(m: Mobius, samples: usize, seed: u64) -> ConjugacyReport {
    let p = CONJUGACY_PRIME;
    let inv = m.inverse();
    let mut rng = chunk_rng(seed, 0);
    let mut checked = 0;
    let mut pointwise = true;
    let mut attempts = 0;
    while checked < samples && attempts < 100 * samples.max(1) {
        attempts += 1;
        let z = rng.gen_range(0..p);
        let y = m.apply_mod(P1::Finite(z), p);
        let ny = match y {
            P1::Finite(_) => newton_p1(y, p),
            P1::Infinity => continue,
        };
        let P1::Finite(w) = (match ny {
            P1::Finite(_) => inv.apply_mod(ny, p),
            P1::Infinity => continue,
        }) else {
            continue;
        };
        checked += 1;
        if w != f_mod(z, p) {
            pointwise = false;
        }
    }
    let symbolic = symbolic(m);
    ConjugacyReport { map: m, symbolic, prime: p, points_checked: checked, pointwise, holds: symbolic && pointwise }
}

/// The conjugacy `eta^{-1} o N o eta = f` for `eta(z) = 1 / (1 - 2z)`.
pub fn conjugacy_check(samples: usize, seed: u64) -> ConjugacyReport {
    conjugacy_check_with(Mobius::ETA, samples, seed)
}
