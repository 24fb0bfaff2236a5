//! Knot corpus files: one `name: code` entry per line, `#` comments, and
//! optional `; key=value` expected values after the code.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{BasedKnotDiagram, DiagramError};
use crate::poly::Rational;

/// The built-in corpus.
pub const DEFAULT_CORPUS: &str = include_str!("../data/corpus.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Diagram { line: usize, source: DiagramError },
    #[error("duplicate entry `{0}`")]
    Duplicate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub code: String,
    pub diagram: BasedKnotDiagram,
    pub expected: BTreeMap<String, String>,
}

impl CorpusEntry {
    pub fn new(name: &str, code: &str) -> Result<Self, DiagramError> {
        Ok(Self { name: name.to_string(), code: code.trim().to_string(), diagram: code.parse()?, expected: BTreeMap::new() })
    }

    /// Expected `p_{k,l}` values, from keys of the form `pK_L`.
    pub fn expected_p(&self) -> BTreeMap<(u32, u32), Rational> {
        self.expected
            .iter()
            .filter_map(|(key, value)| {
                let (k, l) = key.strip_prefix('p')?.split_once('_')?;
                Some(((k.parse().ok()?, l.parse().ok()?), value.parse().ok()?))
            })
            .collect()
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out: Vec<CorpusEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (name, rest) = content
            .split_once(':')
            .ok_or_else(|| CorpusError::Syntax { line, message: "expected `name: code`".into() })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(CorpusError::Syntax { line, message: "empty name".into() });
        }
        let mut fields = rest.split(';');
        let code = fields.next().unwrap_or("");
        let mut entry = CorpusEntry::new(name, code).map_err(|source| CorpusError::Diagram { line, source })?;
        for field in fields {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| CorpusError::Syntax { line, message: format!("expected key=value, got `{}`", field.trim()) })?;
            entry.expected.insert(k.trim().to_string(), v.trim().to_string());
        }
        if out.iter().any(|e| e.name == entry.name) {
            return Err(CorpusError::Duplicate(entry.name));
        }
        out.push(entry);
    }
    Ok(out)
}

/// Reads either a corpus file or a bare Gauss code (a single line without `:`).
pub fn parse_input(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let meaningful: Vec<&str> =
        text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
    if meaningful.len() == 1 && !meaningful[0].contains(':') {
        let entry = CorpusEntry::new("input", meaningful[0]).map_err(|source| CorpusError::Diagram { line: 1, source })?;
        return Ok(vec![entry]);
    }
    if meaningful.is_empty() && !text.contains(':') {
        return Ok(vec![CorpusEntry::new("input", "").expect("empty code parses")]);
    }
    parse_corpus(text)
}

pub fn default_corpus() -> Vec<CorpusEntry> {
    parse_corpus(DEFAULT_CORPUS).expect("built-in corpus parses")
}
