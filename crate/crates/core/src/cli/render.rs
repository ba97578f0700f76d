//! Report payloads: a JSON value and the matching plain-text rendering.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::bridge::{frobenius_component_orbits, SftWithFrobenius};
use crate::decomp::{communicating_classes, sigma_components, strong_core};
use crate::sft::Sft;
use crate::spectral::{EntropyBracket, LimitDegreeResult};
use crate::zeta::{IntPoly, PowerSeries, RationalFunction, TwistData};

fn labels(x: &Sft, states: &[usize]) -> Vec<String> {
    states.iter().map(|&s| x.label(s).to_string()).collect()
}

fn coefficient_list(p: &IntPoly) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn series_list(s: &PowerSeries) -> Vec<String> {
    s.coeffs().iter().map(ToString::to_string).collect()
}

/// `floor` (or `ceil`) of `r` to `digits` decimal places.
pub(super) fn decimal(r: &BigRational, digits: usize, round_up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let n = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (q, rem) = n.abs().div_rem(&scale);
    let sign = if n.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{q}");
    }
    format!("{sign}{q}.{:0>width$}", rem.to_string(), width = digits)
}

pub(super) fn decomposition(x: &Sft, built: Option<&SftWithFrobenius>) -> (Value, String) {
    let dec = communicating_classes(x);
    let classes: Vec<Vec<String>> = dec.classes.iter().map(|c| labels(x, c)).collect();
    let irreducible: Vec<Vec<String>> =
        dec.classes.iter().zip(&dec.has_edge).filter(|(_, &e)| e).map(|(c, _)| labels(x, c)).collect();
    let edges: Vec<[usize; 2]> = dec.condensation_edges.iter().map(|&(a, b)| [a, b]).collect();
    let components: Vec<Vec<String>> = sigma_components(x).iter().map(|c| labels(x, &c.states)).collect();
    let (core_value, core_text) = strong_core_value(x);
    let mut value = json!({
        "states": x.states(),
        "classes": classes,
        "condensation_edges": edges,
        "irreducible": irreducible,
        "sigma_components": components,
        "strong_core": core_value,
    });
    let mut text = String::new();
    writeln!(text, "states: {}", x.states().join(" ")).unwrap();
    writeln!(text, "communicating classes (edges run from higher to lower index):").unwrap();
    for (i, c) in classes.iter().enumerate() {
        let kind = if dec.has_edge[i] { "irreducible" } else { "transient" };
        writeln!(text, "  [{i}] {{{}}} {kind}", c.join(" ")).unwrap();
    }
    let edge_text: Vec<String> = edges.iter().map(|[a, b]| format!("{a}->{b}")).collect();
    writeln!(text, "condensation edges: {}", if edge_text.is_empty() { "none".into() } else { edge_text.join(" ") }).unwrap();
    writeln!(text, "σ-components: {}", components.len()).unwrap();
    for c in &components {
        writeln!(text, "  {{{}}}", c.join(" ")).unwrap();
    }
    text.push_str(&core_text);
    if let Some(built) = built {
        let orbits = frobenius_component_orbits(built);
        value["frobenius_component_orbits"] = json!(orbits);
        writeln!(text, "Frobenius orbits on σ-components: {}", orbits.len()).unwrap();
    }
    (value, text)
}

fn strong_core_value(x: &Sft) -> (Value, String) {
    let core = strong_core(x);
    let mut text = String::from("strong core:\n");
    let value: Vec<Value> = core
        .components
        .iter()
        .map(|c| {
            let names = labels(x, &c.states);
            let pairs: Vec<String> = names.iter().zip(&c.labels).map(|(n, l)| format!("{n}:{l}")).collect();
            writeln!(text, "  modulus {}: {}", c.modulus, pairs.join(" ")).unwrap();
            json!({ "states": names, "modulus": c.modulus, "labels": c.labels })
        })
        .collect();
    (Value::from(value), text)
}

pub(super) fn strong_core_report(x: &Sft, built: Option<&SftWithFrobenius>) -> (Value, String) {
    let (components, mut text) = strong_core_value(x);
    let moduli = strong_core(x).moduli();
    let mut value = json!({ "components": components, "moduli": moduli });
    if let Some(built) = built {
        let orbits = frobenius_component_orbits(built);
        writeln!(text, "connected components of the spectrum (Frobenius orbits): {}", orbits.len()).unwrap();
        value["frobenius_component_orbits"] = json!(orbits);
        value["spec_sigma_component_count"] = json!(orbits.len());
    }
    (value, text)
}

pub(super) fn bracket(b: &EntropyBracket, tol: &BigRational) -> (Value, String) {
    let mut digits = 6;
    while b.lambda_lo != b.lambda_hi && decimal(&b.lambda_lo, digits, false) == decimal(&b.lambda_hi, digits, true) && digits < 60 {
        digits += 1;
    }
    let lo = decimal(&b.lambda_lo, digits, false);
    let hi = decimal(&b.lambda_hi, digits, true);
    let (log_lo, log_hi) = b.log_bounds();
    let value = json!({
        "lambda_lo": b.lambda_lo.to_string(),
        "lambda_hi": b.lambda_hi.to_string(),
        "lambda_lo_decimal": lo,
        "lambda_hi_decimal": hi,
        "log_lo": format!("{log_lo:.12}"),
        "log_hi": format!("{log_hi:.12}"),
        "iterations": b.iterations,
        "tol": tol.to_string(),
    });
    let mid = (log_lo + log_hi) / 2.0;
    let half = (log_hi - log_lo) / 2.0;
    let mut text = String::new();
    writeln!(text, "lambda in [{lo}, {hi}]").unwrap();
    writeln!(text, "  exact: [{}, {}]", b.lambda_lo, b.lambda_hi).unwrap();
    writeln!(text, "entropy h = log(lambda) ≈ {mid:.9} ± {half:.2e} (floating-point presentation of the bracket)").unwrap();
    writeln!(text, "iterations: {}", b.iterations).unwrap();
    (value, text)
}

pub(super) fn limit(result: &LimitDegreeResult, counts: &[String]) -> (Value, String) {
    let mut text = String::new();
    writeln!(text, "word counts: {}", counts.join(", ")).unwrap();
    let value = match result {
        LimitDegreeResult::Stabilized { degree, since_l } => {
            writeln!(text, "stabilised: ratio {degree} from length {since_l}").unwrap();
            json!({ "stabilized": true, "degree": degree, "since_l": since_l, "word_counts": counts })
        }
        LimitDegreeResult::NotStabilized { ratios } => {
            let ratios: Vec<String> = ratios.iter().map(ToString::to_string).collect();
            writeln!(text, "not stabilised; ratios: {}", ratios.join(", ")).unwrap();
            json!({ "stabilized": false, "ratios": ratios, "word_counts": counts })
        }
    };
    (value, text)
}

pub(super) fn zeta(det: &IntPoly, zeta: &RationalFunction, series: &PowerSeries, counts: &[String]) -> (Value, String) {
    let value = json!({
        "char_poly_reversed": coefficient_list(det),
        "rational_function": zeta.to_string(),
        "numerator": coefficient_list(zeta.numerator()),
        "denominator": coefficient_list(zeta.denominator()),
        "series": series_list(series),
        "periodic_counts": counts,
    });
    let mut text = String::new();
    writeln!(text, "Z(t) = {zeta}").unwrap();
    writeln!(text, "  numerator coefficients: [{}]", coefficient_list(zeta.numerator()).join(", ")).unwrap();
    writeln!(text, "  denominator coefficients: [{}]", coefficient_list(zeta.denominator()).join(", ")).unwrap();
    writeln!(text, "series: {series}").unwrap();
    (value, text)
}

pub(super) fn twisted(twist: &TwistData, counts: &[BigUint], log_derivative: &RationalFunction, series: &PowerSeries) -> (Value, String) {
    let counts: Vec<String> = counts.iter().map(ToString::to_string).collect();
    let value = json!({
        "permutation": twist.permutation(),
        "order": twist.order(),
        "counts": counts,
        "log_derivative": log_derivative.to_string(),
        "numerator": coefficient_list(log_derivative.numerator()),
        "denominator": coefficient_list(log_derivative.denominator()),
        "series": series_list(series),
    });
    let mut text = String::new();
    writeln!(text, "twist order d = {}", twist.order()).unwrap();
    writeln!(text, "N_1..N_d: {}", counts.join(", ")).unwrap();
    writeln!(text, "Z'/Z = {log_derivative}").unwrap();
    writeln!(text, "series: {series}").unwrap();
    (value, text)
}

pub(super) fn points(built: &SftWithFrobenius, rows: &[(usize, usize, usize)]) -> (Value, String) {
    let table: Vec<Value> =
        rows.iter().map(|&(n, d, m)| json!({ "n": n, "direct": d, "matrix": m, "match": d == m })).collect();
    let value = json!({
        "splitting_degree": built.m,
        "frobenius_order": built.twist.order(),
        "alphabet": built.sft.states(),
        "rows": table,
    });
    let mut text = String::new();
    writeln!(text, "splitting degree m = {}, Frobenius order d = {}", built.m, built.twist.order()).unwrap();
    writeln!(text, "{:>4} {:>8} {:>8} {:>6}", "n", "direct", "matrix", "match").unwrap();
    for &(n, d, m) in rows {
        writeln!(text, "{n:>4} {d:>8} {m:>8} {:>6}", if d == m { "ok" } else { "FAIL" }).unwrap();
    }
    (value, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn decimals_round_outward() {
        let r = BigRational::new(2.into(), 3.into());
        assert_eq!(decimal(&r, 4, false), "0.6666");
        assert_eq!(decimal(&r, 4, true), "0.6667");
        assert_eq!(decimal(&BigRational::from_integer(2.into()), 3, true), "2.000");
        assert_eq!(decimal(&BigRational::new((-3).into(), 2.into()), 1, false), "-1.5");
        assert_eq!(decimal(&BigRational::zero(), 0, false), "0");
    }
}
