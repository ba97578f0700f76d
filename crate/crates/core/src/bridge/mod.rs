//! Order-1 separable difference systems over a finite field with trivial
//! difference structure, and the subshift of finite type they define.
//!
//! A system is a vertex polynomial `g(x)` and edge constraints `f_j(x, y)`,
//! with `y` standing for `σx`. Its solutions in `(F̄_q, Frob^n)` are the roots
//! `α` of `g` with `f_j(α, α^(q^n)) = 0`; the associated shift has the roots
//! as states and an edge `a -> b` whenever every `f_j(a, b)` vanishes.

mod dsys;

use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::decomp::{communicating_classes, sigma_components, strong_core};
use crate::ff::{extend_field, BiPoly, FfError, FieldElement, FieldHandle, FqContext, Poly};
use crate::sft::{prune, Sft, SftError};
use crate::spectral::{entropy_bounds, limit_degree, EntropyBracket, LimitDegreeResult, SpectralError};
use crate::zeta::{make_twist, twisted_count, twisted_log_derivative, twisted_zeta_series, PowerSeries, RationalFunction, TwistData, ZetaError};

pub use dsys::{emit_dsys, parse_dsys, parse_dsys_with_limit, DsysError};

/// Upper bound on the splitting degree tried before giving up; the field
/// scan limit usually binds first.
pub const DEFAULT_M_MAX: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("vertex polynomial must be nonconstant")]
    ConstantVertex,
    #[error("Frobenius does not preserve the edge relation ({0})")]
    FrobeniusNotAutomorphism(String),
    #[error("{states} states need at least {states} base-field elements, but q = {q}")]
    AlphabetTooLarge { q: u64, states: usize },
    #[error("the shift is empty")]
    EmptyShift,
    #[error("the system has no infinite solutions")]
    NoCycle,
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `g(x) = 0` together with `f_j(x, σx) = 0`, coefficients in the base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSystem {
    ctx: Arc<FqContext>,
    vertex: Poly,
    constraints: Vec<BiPoly>,
}

impl DifferenceSystem {
    pub fn new(vertex: Poly, constraints: Vec<BiPoly>) -> Result<Self, BridgeError> {
        let ctx = Arc::clone(vertex.context());
        if constraints.iter().any(|f| f.context() != &ctx) {
            return Err(FfError::ContextMismatch.into());
        }
        if vertex.degree().unwrap_or(0) == 0 {
            return Err(BridgeError::ConstantVertex);
        }
        if !vertex.is_separable()? {
            return Err(FfError::NotSeparable.into());
        }
        Ok(DifferenceSystem { ctx, vertex, constraints })
    }

    pub fn context(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    pub fn vertex(&self) -> &Poly {
        &self.vertex
    }

    pub fn constraints(&self) -> &[BiPoly] {
        &self.constraints
    }

    pub fn splitting_degree(&self) -> Result<usize, BridgeError> {
        Ok(self.vertex.splitting_degree(DEFAULT_M_MAX)?)
    }
}

/// The shift of a system, its alphabet of roots, and the Frobenius twist
/// `a -> a^q`.
#[derive(Debug, Clone)]
pub struct SftWithFrobenius {
    pub sft: Sft,
    /// Root labelling state `i`, in canonical element order.
    pub alphabet: Vec<FieldElement>,
    pub twist: TwistData,
    /// Splitting degree: the alphabet lives in `F_(q^m)`.
    pub m: usize,
}

/// Builds the (unpruned) shift of a system.
pub fn build_sft(sys: &DifferenceSystem, m_max: usize) -> Result<SftWithFrobenius, BridgeError> {
    let m = sys.vertex.splitting_degree(m_max)?;
    let (ext, embedding) = extend_field(&sys.ctx, m)?;
    let g = sys.vertex.embed(&embedding)?;
    let constraints: Vec<BiPoly> = sys.constraints.iter().map(|f| f.embed(&embedding)).collect::<Result<_, _>>()?;
    let zero = ext.zero();
    let mut alphabet = Vec::new();
    for a in ext.elements() {
        if g.eval(&a)? == zero {
            alphabet.push(a);
        }
    }
    let n = alphabet.len();
    let mut matrix = vec![vec![0i64; n]; n];
    for (i, a) in alphabet.iter().enumerate() {
        for (j, b) in alphabet.iter().enumerate() {
            let mut on_edge = true;
            for f in &constraints {
                if f.eval(a, b)? != zero {
                    on_edge = false;
                    break;
                }
            }
            matrix[i][j] = i64::from(on_edge);
        }
    }
    let labels = alphabet.iter().map(ToString::to_string).collect();
    let sft = Sft::from_matrix(labels, matrix)?;
    let e = sys.ctx.degree();
    let perm: Vec<usize> = alphabet
        .iter()
        .map(|a| {
            let image = a.frobenius_over(e, 1);
            alphabet.binary_search(&image).map_err(|_| BridgeError::FrobeniusNotAutomorphism(format!("{image} is not a root")))
        })
        .collect::<Result<_, _>>()?;
    let twist = make_twist(&sft, &perm).map_err(|err| match err {
        ZetaError::NotAutomorphism { x, y } => BridgeError::FrobeniusNotAutomorphism(format!("witness {x} -> {y}")),
        other => BridgeError::FrobeniusNotAutomorphism(other.to_string()),
    })?;
    Ok(SftWithFrobenius { sft, alphabet, twist, m })
}

/// Number of solutions in `(F̄_q, Frob^n)`, by scanning the whole splitting
/// field and testing `g(α) = 0` and `f_j(α, α^(q^n)) = 0` directly.
pub fn point_count_direct(sys: &DifferenceSystem, n: usize) -> Result<usize, BridgeError> {
    let m = sys.splitting_degree()?;
    let (ext, embedding) = extend_field(&sys.ctx, m)?;
    let g = sys.vertex.embed(&embedding)?;
    let constraints: Vec<BiPoly> = sys.constraints.iter().map(|f| f.embed(&embedding)).collect::<Result<_, _>>()?;
    let q = sys.ctx.order();
    let zero = ext.zero();
    let mut count = 0;
    for alpha in ext.elements() {
        if g.eval(&alpha)? != zero {
            continue;
        }
        // α^(q^m) = α on F_(q^m)
        let image = (0..n % m).fold(alpha.clone(), |acc, _| acc.pow(q));
        let mut solves = true;
        for f in &constraints {
            if f.eval(&alpha, &image)? != zero {
                solves = false;
                break;
            }
        }
        count += usize::from(solves);
    }
    Ok(count)
}

/// The same count as the twisted trace `Tr(T F^n)` of the built shift.
pub fn point_count_matrix(sys: &DifferenceSystem, n: usize) -> Result<usize, BridgeError> {
    let built = build_sft(sys, DEFAULT_M_MAX)?;
    Ok(usize::try_from(twisted_count(&built.twist, n)).expect("bounded by the alphabet size"))
}

/// Truncated difference zeta series and its rational logarithmic derivative.
pub fn difference_zeta(sys: &DifferenceSystem, m: usize) -> Result<(PowerSeries, RationalFunction), BridgeError> {
    let built = build_sft(sys, DEFAULT_M_MAX)?;
    Ok((twisted_zeta_series(&built.twist, m), twisted_log_derivative(&built.twist)))
}

/// Entropy bracket of the essential part of the system's shift.
pub fn system_entropy(sys: &DifferenceSystem, tol: &BigRational, max_iter: usize) -> Result<EntropyBracket, BridgeError> {
    let essential = prune(&build_sft(sys, DEFAULT_M_MAX)?.sft);
    if essential.is_empty() {
        return Err(BridgeError::NoCycle);
    }
    Ok(entropy_bounds(&essential, tol, max_iter)?)
}

/// Orbits of the Frobenius on the σ-components of the essential part, as
/// lists of component indices (in [`sigma_components`] order).
///
/// Also checks that Frobenius maps σ-components and communicating classes
/// onto σ-components and communicating classes, and that the strong-core
/// modulus is constant along each orbit.
pub fn frobenius_component_orbits(built: &SftWithFrobenius) -> Vec<Vec<usize>> {
    let perm = built.twist.permutation();
    let components = sigma_components(&built.sft);
    let mut component_of = vec![usize::MAX; built.sft.len()];
    for (c, comp) in components.iter().enumerate() {
        for &s in &comp.states {
            component_of[s] = c;
        }
    }
    let image: Vec<usize> = components
        .iter()
        .map(|comp| {
            let target = component_of[perm[comp.states[0]]];
            assert!(
                comp.states.iter().all(|&s| component_of[perm[s]] == target),
                "Frobenius splits a σ-component"
            );
            target
        })
        .collect();
    let classes = communicating_classes(&built.sft);
    for class in &classes.classes {
        let target = classes.class_of[perm[class[0]]];
        assert!(class.iter().all(|&s| classes.class_of[perm[s]] == target), "Frobenius splits a communicating class");
    }
    let moduli = strong_core(&built.sft).moduli();
    let mut seen = vec![false; components.len()];
    let mut orbits = Vec::new();
    for start in 0..components.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            orbit.push(c);
            c = image[c];
        }
        assert!(orbit.iter().all(|&c| moduli[c] == moduli[start]), "strong-core modulus varies along a Frobenius orbit");
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Number of connected components of the spectrum: Frobenius orbits of the
/// σ-components.
pub fn spec_sigma_component_count(sys: &DifferenceSystem) -> Result<usize, BridgeError> {
    Ok(frobenius_component_orbits(&build_sft(sys, DEFAULT_M_MAX)?).len())
}

/// Growth-ratio stabilisation for the essential part of the system's shift.
/// When the ratio stabilises at `d` on an out-regular graph the entropy
/// bracket is checked to contain `d`.
pub fn limit_degree_system(sys: &DifferenceSystem, l_max: usize, window: usize) -> Result<LimitDegreeResult, BridgeError> {
    let essential = prune(&build_sft(sys, DEFAULT_M_MAX)?.sft);
    let result = limit_degree(&essential, l_max, window)?;
    if let LimitDegreeResult::Stabilized { degree, .. } = &result {
        if essential.regular_out_degree().is_some() {
            let tol = BigRational::new(1.into(), 1_000_000.into());
            let bracket = entropy_bounds(&essential, &tol, crate::spectral::DEFAULT_MAX_ITER)?;
            assert!(bracket.contains(&BigRational::from_integer((*degree).into())), "stabilised degree outside entropy bracket");
        }
    }
    Ok(result)
}

/// The system whose shift is `x`: states become the first `|states|`
/// elements of the base field, `g = Π(x - a_i)`, and a single constraint
/// `Σ_{(i, j) not an edge} e_i(x) e_j(y)` in the Lagrange basis.
pub fn sft_to_system(x: &Sft, ctx: &Arc<FqContext>) -> Result<DifferenceSystem, BridgeError> {
    let n = x.len();
    if n == 0 {
        return Err(BridgeError::EmptyShift);
    }
    if (n as u64) > ctx.order() {
        return Err(BridgeError::AlphabetTooLarge { q: ctx.order(), states: n });
    }
    let points: Vec<FieldElement> = (0..n as u64).map(|code| ctx.element_from_code(code)).collect();
    let mut g = Poly::constant(&ctx.one());
    for a in &points {
        g = g.mul(&Poly::linear(a))?;
    }
    let basis: Vec<Poly> = points
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            let mut num = Poly::constant(&ctx.one());
            let mut den = ctx.one();
            for (j, aj) in points.iter().enumerate() {
                if i != j {
                    num = num.mul(&Poly::linear(aj))?;
                    den = &den * &(ai - aj);
                }
            }
            num.scale(&den.inverse()?)
        })
        .collect::<Result<_, FfError>>()?;
    let mut f = BiPoly::zero(ctx);
    for i in 0..n {
        for j in 0..n {
            if !x.has_edge(i, j) {
                f = f.add(&BiPoly::from_product(&basis[i], &basis[j])?)?;
            }
        }
    }
    DifferenceSystem::new(g, vec![f])
}
