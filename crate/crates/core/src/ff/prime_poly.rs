//! Dense polynomials over the prime field `Z/p`, used for modulus selection.
//! Coefficients are low-to-high with trailing zeros stripped.

pub(crate) fn normalize(mut coeffs: Vec<u64>) -> Vec<u64> {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        let shift = k - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = normalize(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&normalize(prod), m, p)
}

fn pow_mod(a: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = rem(a, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        exp >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (normalize(a.to_vec()), normalize(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `f` of degree `e` is irreducible iff it has no common factor
/// with `t^(p^i) - t` for `1 <= i <= e/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let t = vec![0u64, 1];
    let mut h = t.clone();
    for _ in 1..=e / 2 {
        h = pow_mod(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f, &normalize(diff), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Renders `c_0 + c_1 v + ...` high-to-low in the crate's polynomial syntax.
pub(crate) fn render(coeffs: &[u64], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}*{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}*{var}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
