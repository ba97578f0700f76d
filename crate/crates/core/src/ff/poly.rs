use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::{build_field_with_limit, FieldElement, FqContext};
use super::parse::{parse_monomials, Monomial};
use super::FfError;

fn strip(mut coeffs: Vec<u64>) -> Vec<u64> {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

fn same(a: &Arc<FqContext>, b: &Arc<FqContext>) -> Result<(), FfError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(FfError::ContextMismatch)
    }
}

/// Univariate polynomial in `x` over an explicit finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: Arc<FqContext>,
    // element codes, low-to-high
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(ctx: &Arc<FqContext>, coeffs: &[FieldElement]) -> Result<Self, FfError> {
        for c in coeffs {
            same(ctx, c.context())?;
        }
        Ok(Self::from_codes(ctx, coeffs.iter().map(FieldElement::code).collect()))
    }

    pub(crate) fn from_codes(ctx: &Arc<FqContext>, coeffs: Vec<u64>) -> Self {
        Poly { ctx: Arc::clone(ctx), coeffs: strip(coeffs) }
    }

    pub fn zero(ctx: &Arc<FqContext>) -> Self {
        Self::from_codes(ctx, Vec::new())
    }

    pub fn constant(c: &FieldElement) -> Self {
        Self::from_codes(c.context(), vec![c.code()])
    }

    /// The monic linear polynomial `x - a`.
    pub fn linear(a: &FieldElement) -> Self {
        let ctx = a.context();
        Self::from_codes(ctx, vec![ctx.neg_code(a.code()), ctx.one_code()])
    }

    /// Parses the text syntax (`x^2+t*x+1`, integers reduced mod p).
    pub fn parse(ctx: &Arc<FqContext>, text: &str) -> Result<Self, FfError> {
        let monomials = parse_monomials(text, &['t', 'x'])?;
        let mut coeffs: Vec<u64> = Vec::new();
        for m in &monomials {
            let code = monomial_coefficient(ctx, m);
            if coeffs.len() <= m.x {
                coeffs.resize(m.x + 1, 0);
            }
            coeffs[m.x] = ctx.add_codes(coeffs[m.x], code);
        }
        Ok(Self::from_codes(ctx, coeffs))
    }

    pub fn context(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        FieldElement::from_code(&self.ctx, self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|&c| FieldElement::from_code(&self.ctx, c)).collect()
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, FfError> {
        same(&self.ctx, &other.ctx)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                self.ctx.add_codes(a, b)
            })
            .collect();
        Ok(Self::from_codes(&self.ctx, out))
    }

    pub fn neg(&self) -> Poly {
        Self::from_codes(&self.ctx, self.coeffs.iter().map(|&c| self.ctx.neg_code(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, FfError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, FfError> {
        same(&self.ctx, &other.ctx)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = self.ctx.mul_codes(a, b);
                out[i + j] = self.ctx.add_codes(out[i + j], prod);
            }
        }
        Ok(Self::from_codes(&self.ctx, out))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Poly, FfError> {
        same(&self.ctx, c.context())?;
        Ok(Self::from_codes(&self.ctx, self.coeffs.iter().map(|&a| self.ctx.mul_codes(a, c.code())).collect()))
    }

    /// Euclidean division: `self = quotient * divisor + remainder`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), FfError> {
        same(&self.ctx, &divisor.ctx)?;
        let db = divisor.degree().ok_or(FfError::DivisionByZero)?;
        let ctx = &self.ctx;
        let lead_inv = ctx.inv_code(divisor.coeffs[db]).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(db).max(1)];
        while rem.len() > db {
            let k = rem.len() - 1;
            let c = ctx.mul_codes(rem[k], lead_inv);
            let shift = k - db;
            quot[shift] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = ctx.sub_codes(rem[shift + i], ctx.mul_codes(c, b));
            }
            rem = strip(rem);
        }
        Ok((Self::from_codes(ctx, quot), Self::from_codes(ctx, rem)))
    }

    /// Scaled to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = self.ctx.inv_code(lead).expect("nonzero");
                Self::from_codes(&self.ctx, self.coeffs.iter().map(|&c| self.ctx.mul_codes(c, inv)).collect())
            }
        }
    }

    /// Monic greatest common divisor; `gcd(g, 0) = monic(g)`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, FfError> {
        same(&self.ctx, &other.ctx)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Poly {
        let ctx = &self.ctx;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ctx.mul_codes(ctx.constant_code(i as u64), c))
            .collect();
        Self::from_codes(ctx, out)
    }

    pub(crate) fn eval_code(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| self.ctx.add_codes(self.ctx.mul_codes(acc, x), c))
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement, FfError> {
        same(&self.ctx, x.context())?;
        Ok(FieldElement::from_code(&self.ctx, self.eval_code(x.code())))
    }

    /// Squarefree test: `gcd(g, g')` is constant. A vanishing derivative makes
    /// the gcd equal to `g` itself, so inseparable inputs are rejected.
    pub fn is_separable(&self) -> Result<bool, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        Ok(self.gcd(&self.derivative())?.degree() == Some(0))
    }

    /// Image of this polynomial under a field embedding.
    pub fn embed(&self, embedding: &Embedding) -> Result<Poly, FfError> {
        same(&self.ctx, &embedding.source)?;
        Ok(Self::from_codes(&embedding.target, self.coeffs.iter().map(|&c| embedding.apply_code(c)).collect()))
    }

    /// All roots in `F_{q^m}`, in canonical element order, found by scanning.
    pub fn roots_in(&self, m: usize) -> Result<Vec<FieldElement>, FfError> {
        if self.is_zero() {
            return Err(FfError::ZeroPolynomial);
        }
        let (ext, embedding) = extend_field(&self.ctx, m)?;
        let lifted = self.embed(&embedding)?;
        Ok((0..ext.order())
            .filter(|&code| lifted.eval_code(code) == 0)
            .map(|code| FieldElement::from_code(&ext, code))
            .collect())
    }

    /// Least `m <= m_max` such that all roots of a separable polynomial lie in `F_{q^m}`.
    pub fn splitting_degree(&self, m_max: usize) -> Result<usize, FfError> {
        if !self.is_separable()? {
            return Err(FfError::NotSeparable);
        }
        let deg = self.degree().unwrap_or(0);
        for m in 1..=m_max {
            if self.roots_in(m)?.len() == deg {
                return Ok(m);
            }
        }
        Err(FfError::NotSplitWithinBound(m_max))
    }
}

fn monomial_coefficient(ctx: &Arc<FqContext>, m: &Monomial) -> u64 {
    let p = num_bigint::BigInt::from(ctx.characteristic());
    let residue: u64 = ((&m.coeff % &p + &p) % &p).try_into().expect("residue below p");
    let mut t_poly = vec![0u64; m.t + 1];
    t_poly[m.t] = residue;
    ctx.code_from_t_poly(&t_poly)
}

/// Writes `coefficient * x^i * y^j` as a sum of monomials in `t`, `x`, `y`.
fn render_terms(ctx: &FqContext, terms: &mut Vec<String>, code: u64, vars: &[(&str, usize)]) {
    let digits = ctx.digits(code);
    for ti in (0..ctx.degree()).rev() {
        let c = digits[ti];
        if c == 0 {
            continue;
        }
        let mut factors: Vec<String> = Vec::new();
        let mut pushes = vec![("t", if ctx.degree() > 1 { ti } else { 0 })];
        pushes.extend_from_slice(vars);
        for (name, exp) in pushes {
            match exp {
                0 => {}
                1 => factors.push(name.to_string()),
                k => factors.push(format!("{name}^{k}")),
            }
        }
        if c != 1 || factors.is_empty() {
            factors.insert(0, c.to_string());
        }
        terms.push(factors.join("*"));
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            render_terms(&self.ctx, &mut terms, c, &[("x", i)]);
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self}) over F_{}", self.ctx.order())
    }
}

/// Bivariate polynomial in `(x, y)`; `y` stands for the shifted variable.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    ctx: Arc<FqContext>,
    terms: BTreeMap<(usize, usize), u64>,
}

impl BiPoly {
    pub fn zero(ctx: &Arc<FqContext>) -> Self {
        BiPoly { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn from_terms(ctx: &Arc<FqContext>, terms: impl IntoIterator<Item = ((usize, usize), FieldElement)>) -> Result<Self, FfError> {
        let mut out = Self::zero(ctx);
        for (key, c) in terms {
            same(ctx, c.context())?;
            out.add_term(key, c.code());
        }
        Ok(out)
    }

    fn add_term(&mut self, key: (usize, usize), code: u64) {
        let entry = self.terms.entry(key).or_insert(0);
        *entry = self.ctx.add_codes(*entry, code);
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn parse(ctx: &Arc<FqContext>, text: &str) -> Result<Self, FfError> {
        let monomials = parse_monomials(text, &['t', 'x', 'y'])?;
        let mut out = Self::zero(ctx);
        for m in &monomials {
            out.add_term((m.x, m.y), monomial_coefficient(ctx, m));
        }
        Ok(out)
    }

    /// `a(x) * b(y)`.
    pub fn from_product(a: &Poly, b: &Poly) -> Result<Self, FfError> {
        same(&a.ctx, &b.ctx)?;
        let mut out = Self::zero(&a.ctx);
        for (i, &ca) in a.coeffs.iter().enumerate() {
            for (j, &cb) in b.coeffs.iter().enumerate() {
                out.add_term((i, j), a.ctx.mul_codes(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BiPoly) -> Result<BiPoly, FfError> {
        same(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (&key, &code) in &other.terms {
            out.add_term(key, code);
        }
        Ok(out)
    }

    pub fn context(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms keyed by `(x-degree, y-degree)`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), FieldElement)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, FieldElement::from_code(&self.ctx, c)))
    }

    pub(crate) fn eval_codes(&self, x: u64, y: u64) -> u64 {
        let ctx = &self.ctx;
        self.terms.iter().fold(0, |acc, (&(i, j), &c)| {
            let term = ctx.mul_codes(c, ctx.mul_codes(ctx.pow_code(x, i as u64), ctx.pow_code(y, j as u64)));
            ctx.add_codes(acc, term)
        })
    }

    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FfError> {
        same(&self.ctx, x.context())?;
        same(&self.ctx, y.context())?;
        Ok(FieldElement::from_code(&self.ctx, self.eval_codes(x.code(), y.code())))
    }

    pub fn embed(&self, embedding: &Embedding) -> Result<BiPoly, FfError> {
        same(&self.ctx, &embedding.source)?;
        let mut out = Self::zero(&embedding.target);
        for (&key, &code) in &self.terms {
            out.add_term(key, embedding.apply_code(code));
        }
        Ok(out)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (&(i, j), &c) in self.terms.iter().rev() {
            render_terms(&self.ctx, &mut terms, c, &[("x", i), ("y", j)]);
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self}) over F_{}", self.ctx.order())
    }
}

/// A field homomorphism `F_q -> F_{q^m}` determined by the image of the
/// generator `t`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<FqContext>,
    target: Arc<FqContext>,
    // image of t^i for i < e
    powers: Vec<u64>,
}

impl Embedding {
    pub fn source(&self) -> &Arc<FqContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FqContext> {
        &self.target
    }

    pub fn generator_image(&self) -> FieldElement {
        let code = if self.source.degree() == 1 { 0 } else { self.powers[1] };
        FieldElement::from_code(&self.target, code)
    }

    pub(crate) fn apply_code(&self, code: u64) -> u64 {
        let digits = self.source.digits(code);
        self.powers.iter().enumerate().fold(0, |acc, (i, &pw)| {
            let scaled = self.target.mul_codes(self.target.constant_code(digits[i]), pw);
            self.target.add_codes(acc, scaled)
        })
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement, FfError> {
        same(&self.source, a.context())?;
        Ok(FieldElement::from_code(&self.target, self.apply_code(a.code())))
    }

    fn check_homomorphism(&self) -> bool {
        let src = &self.source;
        let tgt = &self.target;
        let q = src.order();
        let probes: Vec<u64> = if q <= 64 { (0..q).collect() } else { vec![0, src.one_code(), src.code_from_t_poly(&[0, 1]), q - 1] };
        if self.apply_code(src.one_code()) != tgt.one_code() {
            return false;
        }
        (0..q).all(|a| {
            probes.iter().all(|&b| {
                self.apply_code(src.add_codes(a, b)) == tgt.add_codes(self.apply_code(a), self.apply_code(b))
                    && self.apply_code(src.mul_codes(a, b)) == tgt.mul_codes(self.apply_code(a), self.apply_code(b))
            })
        })
    }
}

/// Builds `F_{q^m}` (with its own lexicographically smallest modulus) and the
/// embedding sending `t` to the smallest root of the base modulus.
pub fn extend_field(ctx: &Arc<FqContext>, m: usize) -> Result<(Arc<FqContext>, Embedding), FfError> {
    if m == 0 {
        return Err(FfError::DegreeZero);
    }
    let e = ctx.degree();
    if m == 1 {
        let powers = (0..e).map(|i| ctx.code_from_t_poly(&unit(i))).collect();
        return Ok((Arc::clone(ctx), Embedding { source: Arc::clone(ctx), target: Arc::clone(ctx), powers }));
    }
    let ext = build_field_with_limit(ctx.characteristic(), e * m, ctx.scan_limit())?;
    let base_modulus = Poly::from_codes(&ext, ctx.modulus().iter().map(|&c| ext.constant_code(c)).collect());
    let root = (0..ext.order())
        .find(|&code| base_modulus.eval_code(code) == 0)
        .expect("the base modulus splits in every extension of degree divisible by e");
    let mut powers = Vec::with_capacity(e);
    let mut acc = ext.one_code();
    for _ in 0..e {
        powers.push(acc);
        acc = ext.mul_codes(acc, root);
    }
    let embedding = Embedding { source: Arc::clone(ctx), target: Arc::clone(&ext), powers };
    assert!(embedding.check_homomorphism(), "embedding of {ctx} into {ext} is not a homomorphism");
    Ok((ext, embedding))
}

fn unit(i: usize) -> Vec<u64> {
    let mut v = vec![0u64; i + 1];
    v[i] = 1;
    v
}
