use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::prime_poly;
use super::FfError;

/// Default bound on the number of field elements any exhaustive scan may touch.
pub const DEFAULT_SCAN_LIMIT: u64 = 1 << 20;

const MAX_DEGREE: usize = 63;

/// An explicit finite field `F_{p^e} = F_p[t] / (modulus)`.
///
/// Elements are encoded as base-`p` integers ("codes") whose most significant
/// digit is the constant coefficient. Numeric order on codes is therefore the
/// canonical element order: lexicographic on coefficient tuples, constant
/// term first.
#[derive(Debug, Clone)]
pub struct FqContext {
    p: u64,
    e: usize,
    modulus: Vec<u64>,
    q: u64,
    scan_limit: u64,
    // place value of coefficient i, i.e. p^(e-1-i)
    weights: Vec<u64>,
}

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FqContext {}

impl Hash for FqContext {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.modulus.hash(state);
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_power(p: u64, e: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Builds `F_{p^e}` with the lexicographically smallest monic irreducible
/// modulus of degree `e` and the default scan limit.
pub fn build_field(p: u64, e: usize) -> Result<Arc<FqContext>, FfError> {
    build_field_with_limit(p, e, DEFAULT_SCAN_LIMIT)
}

pub fn build_field_with_limit(p: u64, e: usize, scan_limit: u64) -> Result<Arc<FqContext>, FfError> {
    check_parameters(p, e, scan_limit)?;
    let count = checked_power(p, e).expect("checked by check_parameters");
    // monic candidates t^e + c_{e-1} t^{e-1} + ... + c_0, enumerated with c_0 most significant
    for index in 0..count {
        let mut modulus = vec![0u64; e + 1];
        let mut rest = index;
        for i in (0..e).rev() {
            modulus[i] = rest % p;
            rest /= p;
        }
        modulus[e] = 1;
        if prime_poly::is_irreducible(&modulus, p) {
            return Ok(Arc::new(FqContext::from_parts(p, modulus, scan_limit)));
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

/// Builds `F_{p^e}` from a caller-supplied modulus (low-to-high residues).
pub fn field_with_modulus(p: u64, modulus: &[u64], scan_limit: u64) -> Result<Arc<FqContext>, FfError> {
    let modulus = prime_poly::normalize(modulus.iter().map(|&c| c % p.max(1)).collect());
    if modulus.is_empty() || modulus.len() == 1 {
        return Err(FfError::DegreeZero);
    }
    let e = modulus.len() - 1;
    check_parameters(p, e, scan_limit)?;
    if modulus[e] != 1 {
        return Err(FfError::NotMonic);
    }
    if !prime_poly::is_irreducible(&modulus, p) {
        return Err(FfError::NotIrreducible);
    }
    Ok(Arc::new(FqContext::from_parts(p, modulus, scan_limit)))
}

fn check_parameters(p: u64, e: usize, scan_limit: u64) -> Result<(), FfError> {
    if !is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    if p > u32::MAX as u64 {
        return Err(FfError::ScanLimitExceeded { needed: p.to_string(), limit: scan_limit });
    }
    if e == 0 {
        return Err(FfError::DegreeZero);
    }
    match checked_power(p, e) {
        Some(q) if q <= scan_limit && e <= MAX_DEGREE => Ok(()),
        _ => Err(FfError::ScanLimitExceeded { needed: format!("{p}^{e}"), limit: scan_limit }),
    }
}

impl FqContext {
    fn from_parts(p: u64, modulus: Vec<u64>, scan_limit: u64) -> Self {
        let e = modulus.len() - 1;
        let q = checked_power(p, e).expect("validated");
        let mut weights = vec![1u64; e];
        for i in (0..e.saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * p;
        }
        FqContext { p, e, modulus, q, scan_limit, weights }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Extension degree over the prime field.
    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus, low-to-high.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn scan_limit(&self) -> u64 {
        self.scan_limit
    }

    pub(crate) fn digits(&self, code: u64) -> [u64; MAX_DEGREE + 1] {
        let mut out = [0u64; MAX_DEGREE + 1];
        let mut rest = code;
        for i in (0..self.e).rev() {
            out[i] = rest % self.p;
            rest /= self.p;
        }
        out
    }

    pub(crate) fn pack(&self, digits: &[u64]) -> u64 {
        digits[..self.e].iter().zip(&self.weights).map(|(d, w)| d * w).sum()
    }

    pub(crate) fn constant_code(&self, c: u64) -> u64 {
        (c % self.p) * self.weights[0]
    }

    pub(crate) fn add_codes(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let mut out = [0u64; MAX_DEGREE + 1];
        for i in 0..self.e {
            out[i] = (x[i] + y[i]) % self.p;
        }
        self.pack(&out)
    }

    pub(crate) fn neg_code(&self, a: u64) -> u64 {
        let x = self.digits(a);
        let mut out = [0u64; MAX_DEGREE + 1];
        for i in 0..self.e {
            out[i] = (self.p - x[i]) % self.p;
        }
        self.pack(&out)
    }

    pub(crate) fn sub_codes(&self, a: u64, b: u64) -> u64 {
        self.add_codes(a, self.neg_code(b))
    }

    pub(crate) fn mul_codes(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        if self.e == 1 {
            return a * b % p;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let e = self.e;
        let mut prod = [0u64; 2 * MAX_DEGREE + 2];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                let sub = c * self.modulus[i] % p;
                prod[k - e + i] = (prod[k - e + i] + p - sub) % p;
            }
        }
        self.pack(&prod[..e])
    }

    pub(crate) fn pow_code(&self, a: u64, mut exp: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one_code();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_codes(acc, base);
            }
            base = self.mul_codes(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn inv_code(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow_code(a, self.q - 2))
        }
    }

    pub(crate) fn one_code(&self) -> u64 {
        self.weights[0]
    }

    /// Code of `a^(p^k)`, reducing `k` modulo the absolute degree.
    pub(crate) fn frobenius_code(&self, a: u64, k: u64) -> u64 {
        let steps = k % self.e as u64;
        let mut out = a;
        for _ in 0..steps {
            out = self.pow_code(out, self.p);
        }
        out
    }

    /// Reduces an integer polynomial in `t` (low-to-high) to an element code.
    pub(crate) fn code_from_t_poly(&self, coeffs: &[u64]) -> u64 {
        let reduced = prime_poly::rem(&prime_poly::normalize(coeffs.iter().map(|c| c % self.p).collect()), &self.modulus, self.p);
        let mut digits = [0u64; MAX_DEGREE + 1];
        for (i, c) in reduced.iter().enumerate() {
            digits[i] = *c;
        }
        self.pack(&digits)
    }
}

impl fmt::Display for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p={}, modulus {})", self.q, self.p, prime_poly::render(&self.modulus, "t"))
    }
}

/// Convenience constructors that need the shared handle.
pub trait FieldHandle {
    fn element(&self, t_coeffs: &[i64]) -> FieldElement;
    fn from_int(&self, c: i64) -> FieldElement;
    fn zero(&self) -> FieldElement;
    fn one(&self) -> FieldElement;
    fn generator(&self) -> FieldElement;
    /// All elements in canonical order.
    fn elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_>;
    fn element_from_code(&self, code: u64) -> FieldElement;
}

impl FieldHandle for Arc<FqContext> {
    fn element(&self, t_coeffs: &[i64]) -> FieldElement {
        let p = self.p as i64;
        let coeffs: Vec<u64> = t_coeffs.iter().map(|c| c.rem_euclid(p) as u64).collect();
        let code = self.code_from_t_poly(&coeffs);
        FieldElement { ctx: Arc::clone(self), code }
    }

    fn from_int(&self, c: i64) -> FieldElement {
        self.element(&[c])
    }

    fn zero(&self) -> FieldElement {
        FieldElement { ctx: Arc::clone(self), code: 0 }
    }

    fn one(&self) -> FieldElement {
        FieldElement { ctx: Arc::clone(self), code: self.one_code() }
    }

    fn generator(&self) -> FieldElement {
        self.element(&[0, 1])
    }

    fn elements(&self) -> Box<dyn Iterator<Item = FieldElement> + '_> {
        Box::new((0..self.q).map(move |code| FieldElement { ctx: Arc::clone(self), code }))
    }

    fn element_from_code(&self, code: u64) -> FieldElement {
        assert!(code < self.q, "element code {code} out of range for {}", self);
        FieldElement { ctx: Arc::clone(self), code }
    }
}

/// An element of an explicit finite field. Arithmetic between elements of
/// different contexts is rejected.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FqContext>,
    code: u64,
}

impl FieldElement {
    pub(crate) fn from_code(ctx: &Arc<FqContext>, code: u64) -> Self {
        FieldElement { ctx: Arc::clone(ctx), code }
    }

    pub fn context(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    /// Position in the canonical element order.
    pub fn code(&self) -> u64 {
        self.code
    }

    /// Residues of the coefficients of `1, t, ..., t^(e-1)`.
    pub fn coeffs(&self) -> Vec<u64> {
        self.ctx.digits(self.code)[..self.ctx.e].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn is_one(&self) -> bool {
        self.code == self.ctx.one_code()
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FfError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(FfError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, FfError> {
        self.same_field(other)?;
        Ok(FieldElement { ctx: Arc::clone(&self.ctx), code: self.ctx.add_codes(self.code, other.code) })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement, FfError> {
        self.same_field(other)?;
        Ok(FieldElement { ctx: Arc::clone(&self.ctx), code: self.ctx.sub_codes(self.code, other.code) })
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, FfError> {
        self.same_field(other)?;
        Ok(FieldElement { ctx: Arc::clone(&self.ctx), code: self.ctx.mul_codes(self.code, other.code) })
    }

    pub fn inverse(&self) -> Result<FieldElement, FfError> {
        let code = self.ctx.inv_code(self.code).ok_or(FfError::DivisionByZero)?;
        Ok(FieldElement { ctx: Arc::clone(&self.ctx), code })
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        FieldElement { ctx: Arc::clone(&self.ctx), code: self.ctx.pow_code(self.code, exp) }
    }

    /// Absolute Frobenius iterate `a^(p^k)`.
    pub fn frobenius(&self, k: u64) -> FieldElement {
        FieldElement { ctx: Arc::clone(&self.ctx), code: self.ctx.frobenius_code(self.code, k) }
    }

    /// Frobenius relative to the subfield of degree `base_degree`: `a^(q^k)`
    /// with `q = p^base_degree`.
    pub fn frobenius_over(&self, base_degree: usize, k: u64) -> FieldElement {
        let e = self.ctx.e as u64;
        let steps = (base_degree as u64 % e) * (k % e) % e;
        self.frobenius(steps)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code.cmp(&other.code)
    }
}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("arithmetic between elements of different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { ctx: Arc::clone(&self.ctx), code: self.ctx.neg_code(self.code) }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        f.write_str(&prime_poly::render(&prime_poly::normalize(coeffs), "t"))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in F_{}", self, self.ctx.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_t() {
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.order(), 5);
        assert_eq!(f5.modulus(), &[0, 1]);
    }

    #[test]
    fn f4_modulus_is_smallest_irreducible() {
        // t^2, t^2+t, t^2+1 = (t+1)^2 are reducible over F_2
        for reducible in [[0u64, 0, 1], [0, 1, 1], [1, 0, 1]] {
            assert!(!prime_poly::is_irreducible(&reducible, 2));
        }
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn errors() {
        assert_eq!(build_field(4, 1).unwrap_err(), FfError::NotPrime(4));
        assert_eq!(build_field(2, 0).unwrap_err(), FfError::DegreeZero);
        assert!(matches!(build_field(2, 21), Err(FfError::ScanLimitExceeded { .. })));
        assert!(build_field_with_limit(2, 21, 1 << 21).is_ok());
    }

    #[test]
    fn frobenius_examples() {
        let f4 = build_field(2, 2).unwrap();
        let t = f4.generator();
        assert_eq!(t.frobenius(1), f4.element(&[1, 1]));
        assert_eq!(t.frobenius(0), t);
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.from_int(2).frobenius(3), f5.from_int(2));
    }

    #[test]
    fn frobenius_has_order_dividing_degree() {
        let f27 = build_field(3, 3).unwrap();
        for a in f27.elements() {
            assert_eq!(a.frobenius(3), a);
            assert_eq!(a.pow(27), a);
            assert_eq!(a.frobenius_over(1, 1), a.pow(3));
        }
    }

    #[test]
    fn canonical_order_is_constant_first() {
        let f4 = build_field(2, 2).unwrap();
        let shown: Vec<String> = f4.elements().map(|a| a.to_string()).collect();
        assert_eq!(shown, ["0", "t", "1", "t+1"]);
    }

    #[test]
    fn inverses() {
        let f9 = build_field(3, 2).unwrap();
        for a in f9.elements().filter(|a| !a.is_zero()) {
            assert!((&a * &a.inverse().unwrap()).is_one());
        }
        assert_eq!(f9.zero().inverse().unwrap_err(), FfError::DivisionByZero);
    }

    #[test]
    fn cross_context_is_an_error() {
        let f2 = build_field(2, 1).unwrap();
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f2.one().checked_add(&f3.one()).unwrap_err(), FfError::ContextMismatch);
    }

    #[test]
    fn custom_modulus() {
        let f9 = field_with_modulus(3, &[1, 0, 1], DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(f9.order(), 9);
        assert_eq!(field_with_modulus(3, &[2, 0, 1], DEFAULT_SCAN_LIMIT).unwrap_err(), FfError::NotIrreducible);
        assert_eq!(field_with_modulus(3, &[1, 0, 2], DEFAULT_SCAN_LIMIT).unwrap_err(), FfError::NotMonic);
    }
}
