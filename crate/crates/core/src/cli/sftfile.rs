//! The `.sft` text format.
//!
//! ```text
//! sft matrix          sft edges
//! 2                   states: a b
//! 1 1                 a b
//! 1 0                 b a
//! states: a b         b a second   (optional edge label)
//! perm: 0 1           perm: 0 1
//! ```
//!
//! Repeated `src dst` pairs make a multigraph, which is recoded as the vertex
//! shift on its edges.

use thiserror::Error;

use crate::sft::{edge_to_vertex, MultiGraph, Sft, SftError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

/// A parsed `.sft` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftFile {
    pub sft: Sft,
    /// Image of each state under a 1-block automorphism, from a `perm:` line.
    pub perm: Option<Vec<usize>>,
    /// True when parallel edges forced the edge-to-vertex recoding.
    pub recoded: bool,
}

fn syntax(line: usize, message: impl Into<String>) -> SftFileError {
    SftFileError::Syntax { line, message: message.into() }
}

fn semantic(line: usize, err: impl ToString) -> SftFileError {
    SftFileError::Semantic { line, message: err.to_string() }
}

pub fn parse_sft_file(text: &str) -> Result<SftFile, SftFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count().max(1);
    let (header_line, header) = lines.next().ok_or_else(|| syntax(last_line, "empty file: expected `sft matrix` or `sft edges`"))?;
    let rest: Vec<(usize, &str)> = lines.collect();
    match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["sft", "matrix"] => parse_matrix(&rest, header_line),
        ["sft", "edges"] => parse_edges(&rest, header_line),
        _ => Err(syntax(header_line, "expected `sft matrix` or `sft edges`")),
    }
}

fn keyword<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key).and_then(|r| r.strip_prefix(':')).map(str::trim)
}

fn parse_perm(line: usize, body: &str) -> Result<Vec<usize>, SftFileError> {
    body.split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| syntax(line, format!("invalid permutation entry `{tok}`"))))
        .collect()
}

fn finish(sft: Sft, perm: Option<(usize, Vec<usize>)>, recoded: bool) -> Result<SftFile, SftFileError> {
    let perm = match perm {
        None => None,
        Some((line, _)) if recoded => {
            return Err(semantic(line, "`perm:` cannot be combined with parallel edges"));
        }
        Some((line, p)) => {
            if p.len() != sft.len() {
                return Err(semantic(line, format!("permutation has {} entries for {} states", p.len(), sft.len())));
            }
            Some(p)
        }
    };
    Ok(SftFile { sft, perm, recoded })
}

fn parse_matrix(rest: &[(usize, &str)], header_line: usize) -> Result<SftFile, SftFileError> {
    let mut iter = rest.iter().copied();
    let (size_line, size_text) = iter.next().ok_or_else(|| syntax(header_line, "missing state count"))?;
    let n: usize = size_text.parse().map_err(|_| syntax(size_line, format!("invalid state count `{size_text}`")))?;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut perm: Option<(usize, Vec<usize>)> = None;
    let mut last = size_line;
    for (line, content) in iter {
        last = line;
        if let Some(body) = keyword(content, "states") {
            if states.is_some() {
                return Err(syntax(line, "duplicate `states:` line"));
            }
            states = Some((line, body.split_whitespace().map(str::to_string).collect()));
        } else if let Some(body) = keyword(content, "perm") {
            if perm.is_some() {
                return Err(syntax(line, "duplicate `perm:` line"));
            }
            perm = Some((line, parse_perm(line, body)?));
        } else {
            if rows.len() == n {
                return Err(syntax(line, format!("more than {n} matrix rows")));
            }
            let row: Vec<i64> = content
                .split_whitespace()
                .map(|tok| tok.parse::<i64>().map_err(|_| syntax(line, format!("invalid matrix entry `{tok}`"))))
                .collect::<Result<_, _>>()?;
            if row.len() != n {
                return Err(syntax(line, format!("row has {} entries, expected {n}", row.len())));
            }
            if let Some(col) = row.iter().position(|&v| v != 0 && v != 1) {
                return Err(semantic(line, SftError::EntryOutOfRange { row: rows.len(), col, value: row[col] }));
            }
            rows.push(row);
        }
    }
    if rows.len() != n {
        return Err(syntax(last, format!("expected {n} matrix rows, found {}", rows.len())));
    }
    let sft = match states {
        Some((line, labels)) => Sft::from_matrix(labels, rows).map_err(|e| semantic(line, e))?,
        None => Sft::from_unlabelled(rows).map_err(|e| semantic(size_line, e))?,
    };
    finish(sft, perm, false)
}

fn parse_edges(rest: &[(usize, &str)], header_line: usize) -> Result<SftFile, SftFileError> {
    let mut iter = rest.iter().copied();
    let (states_line, first) = iter.next().ok_or_else(|| syntax(header_line, "missing `states:` line"))?;
    let labels: Vec<String> = keyword(first, "states")
        .ok_or_else(|| syntax(states_line, "expected `states:` line"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let index_of = |line: usize, name: &str| {
        labels.iter().position(|l| l == name).ok_or_else(|| semantic(line, format!("unknown state `{name}`")))
    };
    let mut edges = Vec::new();
    let mut perm: Option<(usize, Vec<usize>)> = None;
    for (line, content) in iter {
        if let Some(body) = keyword(content, "perm") {
            if perm.is_some() {
                return Err(syntax(line, "duplicate `perm:` line"));
            }
            perm = Some((line, parse_perm(line, body)?));
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let (src, dst, label) = match tokens.as_slice() {
            [s, d] => (*s, *d, None),
            [s, d, l] => (*s, *d, Some(l.to_string())),
            _ => return Err(syntax(line, "expected `src dst` or `src dst label`")),
        };
        edges.push((index_of(line, src)?, index_of(line, dst)?, label));
    }
    let graph = MultiGraph::new(labels, edges).map_err(|e| semantic(states_line, e))?;
    if graph.has_parallel_edges() {
        let sft = edge_to_vertex(&graph).map_err(|e| semantic(states_line, e))?;
        finish(sft, perm, true)
    } else {
        let pairs: Vec<(usize, usize)> = graph.edges().iter().map(|&(s, t, _)| (s, t)).collect();
        let sft = Sft::from_edges(graph.states().to_vec(), &pairs).map_err(|e| semantic(states_line, e))?;
        finish(sft, perm, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn matrix_examples() {
        let f = parse_sft_file("sft matrix\n2\n1 1\n1 0").unwrap();
        assert_eq!(f.sft.matrix(), golden_mean().matrix());
        assert_eq!(f.sft.states(), ["0", "1"]);
        assert_eq!(f.perm, None);
        let f = parse_sft_file("# golden mean\nsft matrix\n2\n1 1 # a row\n1 0\nstates: a b\nperm: 0 1\n").unwrap();
        assert_eq!(f.sft, golden_mean());
        assert_eq!(f.perm, Some(vec![0, 1]));
        assert_eq!(parse_sft_file("sft matrix\n2\n1 1").unwrap_err(), syntax(3, "expected 2 matrix rows, found 1"));
    }

    #[test]
    fn edge_examples() {
        let f = parse_sft_file("sft edges\nstates: a b\na b\nb a").unwrap();
        assert_eq!(f.sft.matrix(), cycle(2).matrix());
        assert!(!f.recoded);
        let f = parse_sft_file("sft edges\nstates: a\na a\na a").unwrap();
        assert!(f.recoded);
        assert_eq!(f.sft.matrix(), full_shift(2).matrix());
        assert_eq!(f.sft.states(), ["a→a#0", "a→a#1"]);
    }

    #[test]
    fn errors() {
        let err = |text: &str| parse_sft_file(text).unwrap_err();
        assert!(matches!(err(""), SftFileError::Syntax { line: 1, .. }));
        assert!(matches!(err("sft graph"), SftFileError::Syntax { line: 1, .. }));
        assert!(matches!(err("sft matrix\n2\n1 2\n1 0"), SftFileError::Semantic { line: 3, .. }));
        assert!(matches!(err("sft matrix\n2\n1 1 1\n1 0"), SftFileError::Syntax { line: 3, .. }));
        assert!(matches!(err("sft matrix\n1\n1\nperm: 0 1"), SftFileError::Semantic { line: 4, .. }));
        assert!(matches!(err("sft matrix\n1\n1\nstates: a b"), SftFileError::Semantic { line: 4, .. }));
        assert!(matches!(err("sft edges\nstates: a\na b"), SftFileError::Semantic { line: 3, .. }));
        assert!(matches!(err("sft edges\na a"), SftFileError::Syntax { line: 2, .. }));
        assert!(matches!(err("sft edges\nstates: a\na a\na a\nperm: 0"), SftFileError::Semantic { line: 5, .. }));
    }

    proptest! {
        #[test]
        fn never_panics(text in "\\PC{0,80}") {
            let _ = parse_sft_file(&text);
        }

        #[test]
        fn never_panics_on_near_misses(body in "[0-9a-c :#\n-]{0,60}", header in prop::sample::select(vec!["sft matrix\n", "sft edges\n"])) {
            let _ = parse_sft_file(&format!("{header}{body}"));
        }
    }
}
