use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{PowerSeries, ZetaError};

/// Integer polynomial in `t`, low-to-high, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `1 - t^d`.
    pub fn one_minus_power(d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[0] = BigInt::one();
        coeffs[d] -= BigInt::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + BigRational::from_integer(c.clone()))
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn scale_down(&self, by: &BigInt) -> IntPoly {
        Self::new(self.coeffs.iter().map(|c| c / by).collect())
    }

    fn neg(&self) -> IntPoly {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// Primitive integer polynomial proportional to a rational one.
    fn from_rational(coeffs: &[BigRational]) -> IntPoly {
        let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = IntPoly::new(coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect());
        let content = ints.content();
        if content.is_zero() {
            ints
        } else {
            ints.scale_down(&content)
        }
    }

    /// Primitive gcd over the rationals, positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.to_rational(), other.to_rational());
        while !b.is_empty() {
            let r = rational_rem(&a, &b);
            a = b;
            b = r;
        }
        let g = Self::from_rational(&a);
        if g.coeffs.last().is_some_and(Signed::is_negative) {
            g.neg()
        } else {
            g
        }
    }

    /// Exact quotient; `None` if `divisor` does not divide over the integers.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = rational_div_rem(&self.to_rational(), &divisor.to_rational());
        if !r.is_empty() || !q.iter().all(BigRational::is_integer) {
            return None;
        }
        Some(IntPoly::new(q.into_iter().map(|c| c.to_integer()).collect()))
    }
}

fn strip_rational(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn rational_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = strip_rational(b.to_vec());
    let db = b.len() - 1;
    let mut r = strip_rational(a.to_vec());
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let k = r.len() - 1;
        let c = &r[k] / &b[db];
        for (i, bi) in b.iter().enumerate() {
            let sub = &c * bi;
            r[k - db + i] -= sub;
        }
        q[k - db] = c;
        r.pop();
        r = strip_rational(r);
    }
    (strip_rational(q), r)
}

fn rational_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    rational_div_rem(a, b).1
}

impl fmt::Display for IntPoly {
    /// `1 - t - t^2` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            match (magnitude.is_one(), var.is_empty()) {
                (_, true) => write!(f, "{magnitude}")?,
                (true, false) => f.write_str(&var)?,
                (false, false) => write!(f, "{magnitude}*{var}")?,
            }
        }
        Ok(())
    }
}

/// A reduced quotient of integer polynomials.
///
/// Numerator and denominator are coprime with no common integer content. The
/// sign is fixed by making the denominator's constant term positive (or its
/// leading coefficient, if the constant term vanishes).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: IntPoly,
    denominator: IntPoly,
}

impl RationalFunction {
    pub fn new(numerator: IntPoly, denominator: IntPoly) -> Result<Self, ZetaError> {
        if denominator.is_zero() {
            return Err(ZetaError::ZeroDenominator);
        }
        if numerator.is_zero() {
            return Ok(RationalFunction { numerator, denominator: IntPoly::one() });
        }
        let g = numerator.gcd(&denominator);
        let mut num = numerator.div_exact(&g).expect("gcd divides numerator");
        let mut den = denominator.div_exact(&g).expect("gcd divides denominator");
        let content = num.content().gcd(&den.content());
        if !content.is_one() {
            num = num.scale_down(&content);
            den = den.scale_down(&content);
        }
        let sign_ref = if den.coeff(0).is_zero() { den.coeffs.last().cloned().unwrap_or_default() } else { den.coeff(0) };
        if sign_ref.is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunction { numerator: num, denominator: den })
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.denominator
    }

    /// Taylor expansion at `t = 0` through `t^m`.
    pub fn series(&self, m: usize) -> Result<PowerSeries, ZetaError> {
        let d0 = BigRational::from_integer(self.denominator.coeff(0));
        if d0.is_zero() {
            return Err(ZetaError::PoleAtZero);
        }
        let mut c: Vec<BigRational> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut acc = BigRational::from_integer(self.numerator.coeff(k));
            for i in 1..=k.min(self.denominator.coeffs.len().saturating_sub(1)) {
                acc -= BigRational::from_integer(self.denominator.coeff(i)) * &c[k - i];
            }
            c.push(acc / &d0);
        }
        Ok(PowerSeries::new(c))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &IntPoly| {
            let terms = p.coeffs.iter().filter(|c| !c.is_zero()).count();
            if terms > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{} / {}", wrap(&self.numerator), wrap(&self.denominator))
    }
}
