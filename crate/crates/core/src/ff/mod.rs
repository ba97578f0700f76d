//! Finite fields `F_{p^e}` given by an explicit modulus, polynomials over
//! them, and exhaustive root finding in small extensions.

mod field;
pub mod parse;
mod poly;
pub(crate) mod prime_poly;

use thiserror::Error;

pub use field::{
    build_field, build_field_with_limit, field_with_modulus, FieldElement, FieldHandle, FqContext, DEFAULT_SCAN_LIMIT,
};
pub use parse::PolyParseError;
pub use poly::{extend_field, BiPoly, Embedding, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    DegreeZero,
    #[error("field of size {needed} exceeds the scan limit {limit}")]
    ScanLimitExceeded { needed: String, limit: u64 },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is not irreducible")]
    NotIrreducible,
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("polynomial does not split in any extension of degree <= {0}")]
    NotSplitWithinBound(usize),
    #[error("polynomial syntax: {0}")]
    Parse(#[from] PolyParseError),
}

/// Parses a polynomial in `t` with integer coefficients, reduced mod `p`
/// (low-to-high residues). Used for explicit moduli.
pub fn parse_prime_poly(text: &str, p: u64) -> Result<Vec<u64>, FfError> {
    if !field::is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    let monomials = parse::parse_monomials(text, &['t'])?;
    let modulus = num_bigint::BigInt::from(p);
    let mut out: Vec<u64> = Vec::new();
    for m in monomials {
        if out.len() <= m.t {
            out.resize(m.t + 1, 0);
        }
        let r: u64 = ((&m.coeff % &modulus + &modulus) % &modulus).try_into().expect("residue below p");
        out[m.t] = (out[m.t] + r) % p;
    }
    Ok(prime_poly::normalize(out))
}
