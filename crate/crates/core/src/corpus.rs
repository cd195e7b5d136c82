//! Named example terms.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lambda::{parse_lambda_with, LambdaSum};

const SOURCE: &str = include_str!("corpus.txt");

pub struct Corpus {
    entries: Vec<(String, LambdaSum)>,
    by_name: BTreeMap<String, LambdaSum>,
}

impl Corpus {
    fn load() -> Result<Self> {
        let mut entries = Vec::new();
        let mut by_name = BTreeMap::new();
        for line in SOURCE.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, body) = line
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("corpus line without '=': {line}")))?;
            let term = parse_lambda_with(body.trim(), &by_name)?;
            by_name.insert(name.trim().to_string(), term.clone());
            entries.push((name.trim().to_string(), term));
        }
        Ok(Corpus { entries, by_name })
    }

    pub fn get(&self, name: &str) -> Option<&LambdaSum> {
        self.by_name.get(name)
    }

    pub fn entries(&self) -> &[(String, LambdaSum)] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    /// The first corpus name bound to exactly `m`.
    pub fn name_of(&self, m: &LambdaSum) -> Option<&str> {
        self.entries.iter().find(|(_, t)| t == m).map(|(n, _)| n.as_str())
    }

    pub fn definitions(&self) -> &BTreeMap<String, LambdaSum> {
        &self.by_name
    }
}

pub fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| Corpus::load().expect("embedded corpus parses"))
}

/// Looks up a corpus term, panicking on unknown names.
pub fn term(name: &str) -> LambdaSum {
    corpus()
        .get(name)
        .cloned()
        .unwrap_or_else(|| panic!("unknown corpus term {name}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_lambda;

    #[test]
    fn all_names_present() {
        let names: Vec<&str> = corpus().names().collect();
        assert_eq!(
            names,
            ["I", "K", "Delta", "Omega", "Delta3", "Omega3", "Theta", "ThetaSum", "DeltaI", "Remark1"]
        );
    }

    #[test]
    fn definitions_expand() {
        assert_eq!(term("Omega"), parse_lambda("(\\x. x x) (\\x. x x)").unwrap());
        assert_eq!(term("Remark1"), parse_lambda("x z + y z").unwrap());
        assert_eq!(corpus().name_of(&term("Omega")), Some("Omega"));
    }
}
