//! Regression formulas with known verdicts.

use crate::formula::{parse, Formula};

const CORPUS: &str = include_str!("../data/corpus.txt");

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Expected {
    Proved,
    Refuted,
}

impl Expected {
    pub fn is_proved(self) -> bool {
        self == Expected::Proved
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: Formula,
    pub expected: Expected,
    pub provenance: String,
}

/// Parses the bundled corpus. Panics on a malformed line, since the file is
/// compiled in.
pub fn load_corpus() -> Vec<CorpusEntry> {
    parse_corpus(CORPUS).unwrap_or_else(|e| panic!("bundled corpus: {e}"))
}

/// Parses corpus text: `name ; formula ; expected [; provenance]` per line.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(format!("line {}: expected 3 or 4 fields", n + 1));
        }
        let formula = parse(fields[1]).map_err(|e| format!("line {}: {e}", n + 1))?;
        let expected = match fields[2] {
            "proved" => Expected::Proved,
            "refuted" => Expected::Refuted,
            other => return Err(format!("line {}: unknown verdict {other:?}", n + 1)),
        };
        out.push(CorpusEntry {
            name: fields[0].to_string(),
            formula,
            expected,
            provenance: fields.get(3).unwrap_or(&"").to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::oracle_valid;
    use std::collections::BTreeSet;

    #[test]
    fn bundled_corpus_matches_oracle() {
        let corpus = load_corpus();
        assert!(corpus.len() >= 40);
        let names: BTreeSet<&str> = corpus.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), corpus.len(), "duplicate names");
        for e in &corpus {
            assert_eq!(oracle_valid(&e.formula).is_valid(), e.expected.is_proved(), "{}", e.name);
        }
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(parse_corpus("a ; p").is_err());
        assert!(parse_corpus("a ; p & ; proved").is_err());
        assert!(parse_corpus("a ; p ; maybe").is_err());
        assert_eq!(parse_corpus("# c\n\nx ; p -> p ; proved\n").unwrap().len(), 1);
    }
}
