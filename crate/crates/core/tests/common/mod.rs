#![allow(dead_code)]

use std::path::PathBuf;

use shiftzeta::cli::dispatch;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Corpus files with the given extension, sorted by name.
pub fn corpus(extension: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(data_dir())
        .expect("test corpus directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == extension))
        .collect();
    files.sort();
    files
}

/// `(golden file name, argv)` for every structured-output command over the corpus.
pub fn command_matrix() -> Vec<(String, Vec<String>)> {
    let mut cases = Vec::new();
    let mut push = |file: &PathBuf, command: &str, extra: &[&str]| {
        let stem = file.file_stem().unwrap().to_string_lossy().into_owned();
        let mut args = vec!["shiftzeta".to_string(), command.to_string(), file.to_string_lossy().into_owned(), "--json".into()];
        args.extend(extra.iter().map(|s| s.to_string()));
        cases.push((format!("{command}__{stem}.json"), args));
    };
    for file in corpus("sft") {
        for command in ["analyze", "decompose", "entropy", "limit-degree", "zeta", "twisted-zeta", "strong-core"] {
            push(&file, command, &[]);
        }
        push(&file, "from-sft", &["--p", "7"]);
    }
    for file in corpus("dsys") {
        for command in ["analyze", "decompose", "entropy", "limit-degree", "zeta", "twisted-zeta", "points", "strong-core"] {
            push(&file, command, &[]);
        }
    }
    cases
}

/// Exit code and both streams, as stored in a golden file.
pub fn run_case(args: &[String]) -> String {
    let out = dispatch(args.iter().cloned());
    format!("exit {}\n{}{}", out.code, out.stdout, out.stderr)
}
