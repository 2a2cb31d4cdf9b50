//! Built-in presentations and the `builtin:` source scheme.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::format::{parse, ParseError};
use crate::presentation::Presentation;

const FILES: &[(&str, &str)] = &[
    ("assoc-ns", include_str!("../corpus/assoc-ns.operad")),
    ("assoc", include_str!("../corpus/assoc.operad")),
    ("com", include_str!("../corpus/com.operad")),
    ("lie", include_str!("../corpus/lie.operad")),
    ("poisson", include_str!("../corpus/poisson.operad")),
    ("perm", include_str!("../corpus/perm.operad")),
    ("prelie", include_str!("../corpus/prelie.operad")),
    ("tot-assoc-3", include_str!("../corpus/tot-assoc-3.operad")),
    ("part-assoc-3", include_str!("../corpus/part-assoc-3.operad")),
];

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("m-dend needs m >= 2, got {0}")]
    DendArity(usize),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{origin}: {source}")]
    Parse { origin: String, source: ParseError },
}

/// Names accepted by [`builtin`]; `m-dend` also takes `m-dend(m)`.
pub fn builtin_names() -> Vec<&'static str> {
    let mut v: Vec<&str> = FILES.iter().map(|f| f.0).collect();
    v.push("m-dend");
    v
}

/// The source text of a builtin.
pub fn builtin_text(name: &str) -> Result<String, SourceError> {
    if let Some((_, text)) = FILES.iter().find(|f| f.0 == name) {
        return Ok(text.to_string());
    }
    if name == "m-dend" {
        return Ok(dend_text(3));
    }
    if let Some(m) = name.strip_prefix("m-dend(").and_then(|r| r.strip_suffix(')')) {
        let m: usize = m.trim().parse().map_err(|_| SourceError::UnknownBuiltin(name.to_string()))?;
        if m < 2 {
            return Err(SourceError::DendArity(m));
        }
        return Ok(dend_text(m));
    }
    Err(SourceError::UnknownBuiltin(name.to_string()))
}

pub fn builtin(name: &str) -> Result<Presentation, SourceError> {
    let text = builtin_text(name)?;
    parse(&text).map_err(|source| SourceError::Parse { origin: format!("builtin:{name}"), source })
}

/// The m-dendriform operad with `d1 = ≻`, `dm = ≺` and `d1 < … < dm`.
/// The sum `⋆` is expanded as `≺ + ≻` in each axiom.
pub fn m_dend(m: usize) -> Result<Presentation, SourceError> {
    builtin(&format!("m-dend({m})"))
}

fn dend_text(m: usize) -> String {
    let mut s = String::new();
    writeln!(s, "# {m}-dendriform operad: d1 is the right operation, d{m} the left one.").unwrap();
    writeln!(s, "operad m-dend-{m}\nflavor nonsymmetric\nfield Q").unwrap();
    for i in 1..=m {
        writeln!(s, "generator d{i} arity 2").unwrap();
    }
    writeln!(s, "order lex").unwrap();
    let left = |a: usize, b: usize| format!("d{a}(d{b}(1,2),3)");
    let right = |a: usize, b: usize| format!("d{a}(1,d{b}(2,3))");
    let mut rel = |comment: &str, lhs: Vec<String>, rhs: Vec<String>| {
        writeln!(s, "# {comment}").unwrap();
        let mut line = lhs.join(" + ");
        for r in rhs {
            line.push_str(" - ");
            line.push_str(&r);
        }
        writeln!(s, "relation {line} = 0").unwrap();
    };
    rel("(x<y)<z = x<(y*z)", vec![left(m, m)], vec![right(m, m), right(m, 1)]);
    for i in 2..m {
        rel(&format!("(x<y)d{i}z = xd{i}(y>z)"), vec![left(i, m)], vec![right(i, 1)]);
    }
    rel("(x>y)<z = x>(y<z)", vec![left(m, 1)], vec![right(1, m)]);
    for i in 2..m {
        rel(&format!("(x>y)d{i}z = x>(yd{i}z)"), vec![left(i, 1)], vec![right(1, i)]);
    }
    rel("(x*y)>z = x>(y>z)", vec![left(1, m), left(1, 1)], vec![right(1, 1)]);
    for i in 2..m {
        rel(&format!("(xd{i}y)<z = xd{i}(y<z)"), vec![left(m, i)], vec![right(i, m)]);
    }
    for i in 2..m {
        for j in i + 1..m {
            rel(&format!("(xd{i}y)d{j}z = xd{i}(yd{j}z)"), vec![left(j, i)], vec![right(i, j)]);
        }
    }
    s
}

/// Reads a presentation from a path or a `builtin:<name>` source.
pub fn load(source: &str) -> Result<Presentation, SourceError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin(name);
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| SourceError::Io { path: source.to_string(), source: e })?;
    parse(&text).map_err(|e| SourceError::Parse { origin: source.to_string(), source: e })
}
