//! Exact polynomials over `Q` (and over `Q[x]` for the symbolic basepoint),
//! with the local criteria used for `f(z) = -2z^3 + 3z^2`.

mod dense;
mod newton;
mod resultant;
mod valuation;

pub use dense::Poly;
pub use newton::{newton_polygon, NewtonPolygon, Segment};
pub use resultant::{
    bareiss_determinant, discriminant, resultant, resultant_euclidean, sylvester_matrix,
};
pub use valuation::{valuation, Valuation};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{capability, usage, Result};
use crate::scalar::rational;

pub type RatPoly = Poly<BigRational>;
pub type IntPoly = Poly<BigInt>;
/// Polynomials in `z` whose coefficients are polynomials in `x`.
pub type BivPoly = Poly<RatPoly>;

/// Default cap on the iterate depth (degree `3^8 = 6561`).
pub const ITERATE_CAP: u32 = 8;

/// `f(z) = -2z^3 + 3z^2`.
pub fn f_poly() -> RatPoly {
    RatPoly::from_i64s(&[0, 0, 3, -2])
}

/// `g(z) = z^3 - z`.
pub fn g_poly() -> RatPoly {
    RatPoly::from_i64s(&[0, -1, 0, 1])
}

/// `f^n` over `Z`, built as `g <- g^2 (3 - 2g)`.
pub fn f_iterate_int(n: u32, cap: u32) -> Result<IntPoly> {
    if n > cap {
        return capability(format!("iterate depth {n} exceeds cap {cap}"));
    }
    let three = IntPoly::from_i64s(&[3]);
    let two = BigInt::from(2);
    let mut g = IntPoly::var();
    for _ in 0..n {
        let sq = &g * &g;
        g = &sq * &(&three - &g.scale(&two));
    }
    Ok(g)
}

pub fn f_iterate_capped(n: u32, cap: u32) -> Result<RatPoly> {
    Ok(f_iterate_int(n, cap)?.map(|c| BigRational::from_integer(c.clone())))
}

pub fn f_iterate(n: u32) -> Result<RatPoly> {
    f_iterate_capped(n, ITERATE_CAP)
}

/// `p(z) - x`.
pub fn shift(p: &RatPoly, x: &BigRational) -> RatPoly {
    p - &RatPoly::constant(x.clone())
}

/// Eisenstein shape at `q`: unit leading coefficient, every lower coefficient
/// divisible by `q`, constant term of valuation exactly one. Used only as a
/// certificate; no irreducibility claim is made here.
pub fn eisenstein_check(p: &RatPoly, q: u64) -> bool {
    let Some(d) = p.degree() else { return false };
    if d == 0 || valuation(p.lead().unwrap(), q) != Valuation::Finite(0) {
        return false;
    }
    if valuation(&p.coeff(0), q) != Valuation::Finite(1) {
        return false;
    }
    p.coeffs()[1..d].iter().all(|c| valuation(c, q) >= Valuation::Finite(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaggerCertificate {
    #[serde(serialize_with = "crate::poly::ser_rational")]
    pub x: BigRational,
    pub v3_x: Valuation,
    pub v2_x: Valuation,
    pub v2_one_minus_x: Valuation,
    pub holds: bool,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Local condition at `(p, q) = (2, 3)` over `Q`: `v_3(x) = 1`, and
/// `v_2(x) = +-1` or `v_2(1 - x) = 1`.
pub fn dagger_check(x: &BigRational) -> Result<DaggerCertificate> {
    if x.is_zero() || x.is_one() {
        return usage(format!("basepoint {x} is a critical value"));
    }
    let v3_x = valuation(x, 3);
    let v2_x = valuation(x, 2);
    let v2_one_minus_x = valuation(&(BigRational::one() - x), 2);
    let holds = v3_x == Valuation::Finite(1)
        && (matches!(v2_x, Valuation::Finite(1) | Valuation::Finite(-1))
            || v2_one_minus_x == Valuation::Finite(1));
    Ok(DaggerCertificate { x: x.clone(), v3_x, v2_x, v2_one_minus_x, holds })
}

/// Does `1 - p(1 - z) = p(z)` hold coefficientwise?
pub fn self_conjugate(p: &RatPoly) -> bool {
    let one = RatPoly::one();
    let flipped = p.compose(&(&one - &RatPoly::var()));
    &one - &flipped == *p
}

pub fn self_conjugacy_check() -> bool {
    self_conjugate(&f_poly())
}

/// Which of the three local situations at 2 a basepoint falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalCase {
    /// `v_2(y) = 1`
    UnitShift,
    /// `v_2(y) = -1`
    PoleShift,
    /// `v_2(1 - y) = 1`, reduced to the first case by `z -> 1 - z`
    Reflected,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalPolygon {
    pub case: LocalCase,
    #[serde(serialize_with = "crate::poly::ser_rational")]
    pub y: BigRational,
    /// The constant `c` whose polygon `f(z) - c` is reported.
    #[serde(serialize_with = "crate::poly::ser_rational")]
    pub shifted_by: BigRational,
    pub polygon: NewtonPolygon,
}

/// Newton polygon of `f(z) - y` at 2, or of `f(z) - (1 - y)` in the
/// reflected case. Errors if none of the three cases applies.
pub fn local_polygon_at_two(y: &BigRational) -> Result<LocalPolygon> {
    let (case, c) = match valuation(y, 2) {
        Valuation::Finite(1) => (LocalCase::UnitShift, y.clone()),
        Valuation::Finite(-1) => (LocalCase::PoleShift, y.clone()),
        _ if valuation(&(BigRational::one() - y), 2) == Valuation::Finite(1) => {
            (LocalCase::Reflected, BigRational::one() - y)
        }
        _ => return usage(format!("{y}: none of v2(y) = 1, v2(y) = -1, v2(1-y) = 1 holds")),
    };
    let polygon = newton_polygon(&shift(&f_poly(), &c), 2);
    Ok(LocalPolygon { case, y: y.clone(), shifted_by: c, polygon })
}

/// `f^2(z) - x` with `x` symbolic.
pub fn f2_minus_x_symbolic() -> Result<BivPoly> {
    let f2 = f_iterate(2)?;
    let mut coeffs: Vec<RatPoly> = f2.coeffs().iter().map(|c| RatPoly::constant(c.clone())).collect();
    coeffs[0] = &coeffs[0] - &RatPoly::var();
    Ok(BivPoly::new(coeffs))
}

/// `[2^16 3^9 x^2 (x-1)^2]^2` as a polynomial in `x`.
pub fn disc_f2_expected() -> RatPoly {
    let k = BigInt::from(2).pow(16u32) * BigInt::from(3).pow(9u32);
    let base = RatPoly::from_i64s(&[0, -1, 1]).pow(2); // x^2 (x-1)^2 = (x^2 - x)^2
    base.pow(2).scale(&BigRational::from_integer(&k * &k))
}

#[derive(Clone, Debug)]
pub struct DiscIdentity {
    /// `Disc_z(f^2(z) - x)` computed over `Q[x]`.
    pub computed: RatPoly,
    pub expected: RatPoly,
    pub holds: bool,
}

pub fn disc_f2_identity() -> Result<DiscIdentity> {
    let computed = discriminant(&f2_minus_x_symbolic()?)?;
    let expected = disc_f2_expected();
    let holds = computed == expected;
    Ok(DiscIdentity { computed, expected, holds })
}

/// `Disc(f^2(z) - x)` for a concrete `x`.
pub fn disc_f2_at(x: &BigRational) -> Result<BigRational> {
    discriminant(&shift(&f_iterate(2)?, x))
}

/// `Disc(f^n(z) - x)` for a concrete `x`, small `n`.
pub fn disc_fn_at(n: u32, x: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return usage("depth must be at least 1");
    }
    discriminant(&shift(&f_iterate(n)?, x))
}

/// Convenience for tests and the CLI: `a/b` as a rational constant polynomial.
pub fn rat_const(a: i64, b: i64) -> RatPoly {
    RatPoly::constant(rational(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_apply(mut z: BigRational, n: u32) -> BigRational {
        let f = f_poly();
        for _ in 0..n {
            z = f.eval(&z);
        }
        z
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(f_iterate(0).unwrap(), RatPoly::var());
        assert_eq!(f_iterate(1).unwrap(), f_poly());
        for n in 1..=5 {
            let p = f_iterate(n).unwrap();
            assert_eq!(p.degree(), Some(3usize.pow(n)));
            assert!(p.coeff(0).is_zero());
            assert!(p.eval(&rational(0, 1)).is_zero());
            assert!(p.eval(&rational(1, 1)).is_one());
            let h = rational(3, 2);
            assert_eq!(p.eval(&h), f_apply(h.clone(), n));
            let t = rational(-2, 7);
            assert_eq!(p.eval(&t), f_apply(t.clone(), n));
        }
        assert!(f_iterate(9).is_err());
        assert_eq!(f_iterate_capped(2, 1).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn disc_identity_symbolic() {
        let id = disc_f2_identity().unwrap();
        assert!(id.holds, "computed {}", id.computed);
        assert_eq!(id.computed.degree(), Some(8));
    }

    #[test]
    fn disc_substitution_commutes() {
        let id = disc_f2_identity().unwrap();
        for x in [rational(3, 1), rational(3, 2), rational(-5, 7)] {
            assert_eq!(disc_f2_at(&x).unwrap(), id.computed.eval(&x));
        }
        let at3 = disc_f2_at(&rational(3, 1)).unwrap();
        let k = BigInt::from(2).pow(16u32) * BigInt::from(3).pow(9u32) * BigInt::from(9 * 4);
        assert_eq!(at3, BigRational::from_integer(&k * &k));
    }

    #[test]
    fn disc_of_f_minus_x() {
        // Disc(-2z^3 + 3z^2 - x) = 108 x (1 - x) by hand.
        for x in [rational(3, 1), rational(2, 5)] {
            let expect = rational(108, 1) * &x * (BigRational::one() - &x);
            assert_eq!(disc_fn_at(1, &x).unwrap(), expect);
        }
    }

    #[test]
    fn eisenstein_examples() {
        for n in 1..=6 {
            let p = f_iterate(n).unwrap();
            assert!(eisenstein_check(&shift(&p, &rational(3, 2)), 3), "3/2 n={n}");
            assert!(eisenstein_check(&shift(&p, &rational(3, 1)), 3), "3 n={n}");
        }
        assert!(!eisenstein_check(&shift(&f_poly(), &rational(9, 1)), 3));
        assert!(!eisenstein_check(&shift(&f_poly(), &rational(3, 1)), 2));
    }

    #[test]
    fn eisenstein_polygon_shape() {
        for n in 1..=6 {
            let p = shift(&f_iterate(n).unwrap(), &rational(3, 2));
            let np = newton_polygon(&p, 3);
            let deg = 3u64.pow(n);
            assert_eq!(np.segments.len(), 1, "n={n}");
            assert_eq!(np.segments[0].length, deg);
            assert_eq!(np.segments[0].slope, num_rational::Ratio::new(-1, deg as i64));
        }
    }

    #[test]
    fn local_polygons() {
        use num_rational::Ratio;
        let a = local_polygon_at_two(&rational(2, 1)).unwrap();
        assert_eq!(a.case, LocalCase::UnitShift);
        assert_eq!(a.polygon.vertices, vec![(0, 1), (2, 0), (3, 1)]);
        assert_eq!(
            a.polygon.segments,
            vec![Segment { slope: Ratio::new(-1, 2), length: 2 }, Segment { slope: Ratio::new(1, 1), length: 1 }]
        );
        let b = local_polygon_at_two(&rational(1, 2)).unwrap();
        assert_eq!(b.case, LocalCase::PoleShift);
        assert_eq!(b.polygon.segments[0], Segment { slope: Ratio::new(1, 2), length: 2 });
        assert_eq!(b.polygon.segments[0].height(), Ratio::from_integer(1));
        assert_eq!(b.polygon.vertices[0], (0, -1));
        let c = local_polygon_at_two(&rational(3, 1)).unwrap();
        assert_eq!(c.case, LocalCase::Reflected);
        assert_eq!(c.polygon.segments, a.polygon.segments);
        assert!(local_polygon_at_two(&rational(4, 1)).is_err());
    }

    #[test]
    fn dagger_examples() {
        assert!(dagger_check(&rational(3, 1)).unwrap().holds);
        assert!(dagger_check(&rational(3, 2)).unwrap().holds);
        let nine = dagger_check(&rational(9, 1)).unwrap();
        assert!(!nine.holds);
        assert_eq!(nine.v3_x, Valuation::Finite(2));
        assert!(!dagger_check(&rational(5, 1)).unwrap().holds);
        assert!(dagger_check(&rational(0, 1)).is_err());
        assert!(dagger_check(&rational(1, 1)).is_err());
    }

    #[test]
    fn self_conjugacy() {
        assert!(self_conjugacy_check());
        assert!(!self_conjugate(&RatPoly::from_i64s(&[0, 0, 0, 1])));
        for n in 0..=4 {
            assert!(self_conjugate(&f_iterate(n).unwrap()), "n={n}");
        }
    }
}
