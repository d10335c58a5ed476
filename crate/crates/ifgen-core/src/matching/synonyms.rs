//! The synonym table: groups of tokens treated as one concept when
//! comparing function and parameter names across naming conventions.
//!
//! The same table serves three consumers: the matching agent (normalising
//! requirement names against capability names), the codegen side (mapping
//! CFR parameter names onto vendor-internal ones), and the NF simulator's
//! vendor-variant generator (which deliberately renames its internal API by
//! picking alternative members of these groups). Keeping them on one table
//! is what makes the simulated vendor diversity solvable in principle.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Deserialize;

/// The checked-in table, embedded at compile time so library users get a
/// working default without carrying config files around.
const BUILTIN_JSON: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../config/synonyms.json"));

#[derive(Debug, Deserialize)]
struct TableFile {
    groups: Vec<Vec<String>>,
    #[serde(default)]
    bigrams: Vec<(String, String, String)>,
    #[serde(default)]
    extra_vocabulary: Vec<String>,
}

/// Token-level synonym lookup. The first member of each group is its
/// canonical form.
#[derive(Debug, Clone)]
pub struct SynonymTable {
    canonical: BTreeMap<String, String>,
    /// (first, second) → replacement token, applied before per-token lookup
    /// so that multi-word concepts ("access point") can collapse to one
    /// token ("ap").
    bigrams: BTreeMap<(String, String), String>,
    /// Every token the table knows, canonical or not — the dictionary used
    /// when segmenting run-together names like `settxpwr`.
    vocabulary: BTreeSet<String>,
}

impl SynonymTable {
    pub fn parse(json: &str) -> Result<SynonymTable, String> {
        let file: TableFile = serde_json::from_str(json).map_err(|e| e.to_string())?;
        let mut canonical = BTreeMap::new();
        let mut vocabulary = BTreeSet::new();
        for group in &file.groups {
            let Some(canon) = group.first() else {
                return Err("empty synonym group".to_string());
            };
            for member in group {
                if member.is_empty() || !member.chars().all(|c| c.is_ascii_lowercase()) {
                    return Err(format!(
                        "synonym token `{member}` must be nonempty lowercase ascii"
                    ));
                }
                if let Some(prev) = canonical.insert(member.clone(), canon.clone()) {
                    if prev != *canon {
                        return Err(format!("token `{member}` appears in two groups"));
                    }
                }
                vocabulary.insert(member.clone());
            }
        }
        let mut bigrams = BTreeMap::new();
        for (a, b, repl) in file.bigrams {
            vocabulary.insert(a.clone());
            vocabulary.insert(b.clone());
            bigrams.insert((a, b), repl);
        }
        for word in file.extra_vocabulary {
            vocabulary.insert(word);
        }
        Ok(SynonymTable {
            canonical,
            bigrams,
            vocabulary,
        })
    }

    /// The compiled-in default table.
    pub fn builtin() -> &'static SynonymTable {
        static TABLE: OnceLock<SynonymTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            SynonymTable::parse(BUILTIN_JSON).expect("embedded synonym table is valid")
        })
    }

    /// Canonical form of a token (the token itself when unknown).
    pub fn canonical<'a>(&'a self, token: &'a str) -> &'a str {
        self.canonical.get(token).map_or(token, |c| c.as_str())
    }

    pub fn knows(&self, token: &str) -> bool {
        self.vocabulary.contains(token)
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub(crate) fn bigram(&self, a: &str, b: &str) -> Option<&str> {
        self.bigrams
            .get(&(a.to_string(), b.to_string()))
            .map(|s| s.as_str())
    }

    /// All members of the group containing `token` (including itself),
    /// canonical first. A token outside any group yields just itself.
    /// The vendor-variant generator draws alternative spellings from here.
    pub fn group_of<'a>(&'a self, token: &'a str) -> Vec<&'a str> {
        let canon = self.canonical(token);
        let mut members: Vec<&str> = self
            .canonical
            .iter()
            .filter(|(_, c)| c.as_str() == canon)
            .map(|(m, _)| m.as_str())
            .collect();
        if members.is_empty() {
            return vec![token];
        }
        // Canonical first, then the rest in stable (sorted) order.
        members.sort_by_key(|m| (*m != canon, m.to_string()));
        members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_parses_and_maps() {
        let t = SynonymTable::builtin();
        assert_eq!(t.canonical("pwr"), "power");
        assert_eq!(t.canonical("pow"), "power");
        assert_eq!(t.canonical("chn"), "channel");
        assert_eq!(t.canonical("sta"), "station");
        assert_eq!(t.canonical("cfg"), "set");
        assert_eq!(t.canonical("unknowntoken"), "unknowntoken");
    }

    #[test]
    fn groups_are_disjoint_by_construction() {
        let err = SynonymTable::parse(
            r#"{"groups": [["a", "b"], ["c", "b"]], "bigrams": [], "extra_vocabulary": []}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn group_lookup_returns_canonical_first() {
        let t = SynonymTable::builtin();
        let g = t.group_of("pwr");
        assert_eq!(g[0], "power");
        assert!(g.contains(&"pow"));
        assert_eq!(t.group_of("zzz"), vec!["zzz"]);
    }

    #[test]
    fn bigrams_collapse_multiword_concepts() {
        let t = SynonymTable::builtin();
        assert_eq!(t.bigram("access", "point"), Some("ap"));
        assert_eq!(t.bigram("point", "access"), None);
    }

    #[test]
    fn vocabulary_contains_group_members_and_extras() {
        let t = SynonymTable::builtin();
        assert!(t.knows("pwr"));
        assert!(t.knows("traffic"));
        assert!(!t.knows("pwrx"));
    }
}
