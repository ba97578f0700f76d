//! The `.dsys` text format:
//!
//! ```text
//! # comment
//! p 2
//! e 2
//! modulus t^2+t+1      (optional)
//! vertex x^2+x+1
//! edge y+x^2           (one or more)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{BridgeError, DifferenceSystem};
use crate::ff::{build_field_with_limit, field_with_modulus, parse_prime_poly, BiPoly, Poly, DEFAULT_SCAN_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DsysError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: BridgeError },
}

fn syntax(line: usize, message: impl Into<String>) -> DsysError {
    DsysError::Syntax { line, message: message.into() }
}

pub fn parse_dsys(text: &str) -> Result<DifferenceSystem, DsysError> {
    parse_dsys_with_limit(text, DEFAULT_SCAN_LIMIT)
}

pub fn parse_dsys_with_limit(text: &str, scan_limit: u64) -> Result<DifferenceSystem, DsysError> {
    let mut p: Option<(usize, u64)> = None;
    let mut e: Option<(usize, usize)> = None;
    let mut modulus: Option<(usize, String)> = None;
    let mut vertex: Option<(usize, String)> = None;
    let mut edges: Vec<(usize, String)> = Vec::new();
    let mut last_line = 0;
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        if rest.is_empty() {
            return Err(syntax(line, format!("`{key}` needs a value")));
        }
        let duplicate = |seen: bool| if seen { Err(syntax(line, format!("duplicate `{key}` line"))) } else { Ok(()) };
        match key {
            "p" => {
                duplicate(p.is_some())?;
                p = Some((line, rest.parse().map_err(|_| syntax(line, format!("invalid prime `{rest}`")))?));
            }
            "e" => {
                duplicate(e.is_some())?;
                e = Some((line, rest.parse().map_err(|_| syntax(line, format!("invalid degree `{rest}`")))?));
            }
            "modulus" => {
                duplicate(modulus.is_some())?;
                modulus = Some((line, rest.to_string()));
            }
            "vertex" => {
                duplicate(vertex.is_some())?;
                vertex = Some((line, rest.to_string()));
            }
            "edge" => edges.push((line, rest.to_string())),
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let end = last_line.max(1);
    let (p_line, p) = p.ok_or_else(|| syntax(end, "missing `p` line"))?;
    let (e_line, e) = e.unwrap_or((p_line, 1));
    let semantic = |line: usize| move |source: crate::ff::FfError| DsysError::Semantic { line, source: source.into() };
    let ctx = match &modulus {
        Some((line, text)) => {
            let coeffs = parse_prime_poly(text, p).map_err(semantic(*line))?;
            if coeffs.len() != e + 1 {
                return Err(syntax(*line, format!("modulus degree {} does not match e = {e}", coeffs.len().saturating_sub(1))));
            }
            field_with_modulus(p, &coeffs, scan_limit).map_err(semantic(*line))?
        }
        None => build_field_with_limit(p, e, scan_limit).map_err(semantic(e_line))?,
    };
    let (v_line, v_text) = vertex.ok_or_else(|| syntax(end, "missing `vertex` line"))?;
    if edges.is_empty() {
        return Err(syntax(end, "at least one `edge` line is required"));
    }
    let g = Poly::parse(&ctx, &v_text).map_err(semantic(v_line))?;
    let constraints = edges
        .iter()
        .map(|(line, text)| BiPoly::parse(&ctx, text).map_err(semantic(*line)))
        .collect::<Result<Vec<_>, _>>()?;
    DifferenceSystem::new(g, constraints).map_err(|source| DsysError::Semantic { line: v_line, source })
}

/// Text form accepted by [`parse_dsys`]; the modulus is written out for
/// proper extensions.
pub fn emit_dsys(sys: &DifferenceSystem) -> String {
    let ctx = sys.context();
    let mut out = String::new();
    writeln!(out, "p {}", ctx.characteristic()).unwrap();
    writeln!(out, "e {}", ctx.degree()).unwrap();
    if ctx.degree() > 1 {
        let modulus = ctx.modulus();
        let mut terms = Vec::new();
        for (i, &c) in modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            terms.push(match (c, var.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => var,
                (_, false) => format!("{c}*{var}"),
            });
        }
        writeln!(out, "modulus {}", terms.join("+")).unwrap();
    }
    writeln!(out, "vertex {}", sys.vertex()).unwrap();
    for f in sys.constraints() {
        writeln!(out, "edge {f}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::{build_sft, sft_to_system};
    use crate::ff::{build_field, FfError};
    use crate::sft::fixtures::*;

    #[test]
    fn parses_the_f4_example() {
        let sys = parse_dsys("# the F4 example\np 2\ne 1\nvertex x^2+x+1\nedge y+x^2\n").unwrap();
        assert_eq!(sys.context().order(), 2);
        assert_eq!(sys.vertex().to_string(), "x^2+x+1");
        assert_eq!(sys.constraints().len(), 1);
        assert_eq!(build_sft(&sys, 4).unwrap().sft.matrix(), [vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn explicit_modulus() {
        let sys = parse_dsys("p 3\ne 2\nmodulus t^2+1\nvertex x^2-t\nedge y-x").unwrap();
        assert_eq!(sys.context().modulus(), [1, 0, 1]);
        let err = parse_dsys("p 3\ne 2\nmodulus t^2+t+1\nvertex x\nedge y").unwrap_err();
        assert!(matches!(err, DsysError::Semantic { line: 3, source: BridgeError::Field(FfError::NotIrreducible) }));
        let err = parse_dsys("p 3\ne 2\nmodulus t^3+t+1\nvertex x\nedge y").unwrap_err();
        assert!(matches!(err, DsysError::Syntax { line: 3, .. }));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_dsys("p 2\nvertex x\n").unwrap_err(), syntax(2, "at least one `edge` line is required"));
        assert!(matches!(parse_dsys("p 2\nq 3\n").unwrap_err(), DsysError::Syntax { line: 2, .. }));
        assert!(matches!(parse_dsys("p 4\nvertex x\nedge y").unwrap_err(), DsysError::Semantic { line: 1, .. }));
        assert!(matches!(parse_dsys("p 2\nvertex x^2\nedge y").unwrap_err(), DsysError::Semantic { line: 2, .. }));
        assert!(matches!(parse_dsys("p 2\nvertex x\nedge y+").unwrap_err(), DsysError::Semantic { line: 3, .. }));
        assert!(matches!(parse_dsys("p 2\np 3\n").unwrap_err(), DsysError::Syntax { line: 2, .. }));
        assert!(matches!(parse_dsys("vertex x\n").unwrap_err(), DsysError::Syntax { line: 1, .. }));
    }

    #[test]
    fn emit_round_trips() {
        let f9 = build_field(3, 2).unwrap();
        for x in [golden_mean(), cycle(3), full_shift(2)] {
            let sys = sft_to_system(&x, &f9).unwrap();
            let text = emit_dsys(&sys);
            let back = parse_dsys(&text).unwrap();
            assert_eq!(back, sys, "{text}");
        }
    }
}
