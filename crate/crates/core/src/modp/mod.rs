//! Arithmetic over prime fields: reduction of rationals, the projective
//! line, polynomials mod `p` with distinct-degree factorization, and sieves.

mod field;
mod poly;
mod sieve;

pub use field::{
    add_mod, eta_inv_p1, eta_p1, f_mod, f_p1, from_i64, inv_mod, mul_mod, neg_mod, newton_p1, pow_mod,
    reduce_rational, sub_mod, Residue, P1,
};
pub use poly::{
    count_roots, f_iterate_mod_p, f_iterate_mod_p_capped, factor_pattern, FactorPattern, Frobenius, PolyModP,
    MODP_ITERATE_CAP,
};
pub use sieve::{segmented_sieve, sieve, PrimeSieve, SIEVE_CAP};
