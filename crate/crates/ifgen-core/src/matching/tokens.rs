//! Name tokenization across naming conventions.
//!
//! Vendor and user naming styles differ in three independent ways: word
//! separation (snake_case, camelCase, PascalCase, or run-together
//! `flatcase`), vocabulary (`pwr` vs `power`), and number (`stas` vs
//! `sta`). Tokenization undoes the first and third here; the synonym table
//! undoes the second. `setchn` and `set_channel` normalise to the same
//! token set.

use super::synonyms::SynonymTable;

/// Split a name on underscores, case boundaries, and letter/digit
/// boundaries. `getRateStats` → `[get, rate, stats]`, `radioID` →
/// `[radio, id]`, `UEList` → `[ue, list]`.
pub fn split_words(name: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let chars: Vec<char> = name.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if c == '_' || c == '-' {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            continue;
        }
        if !current.is_empty() {
            let prev = chars[i - 1];
            let boundary =
                // aB — new word starts at B
                (c.is_ascii_uppercase() && prev.is_ascii_lowercase())
                // ABc — the run "AB" ends before "Bc"; split before B
                || (c.is_ascii_lowercase()
                    && prev.is_ascii_uppercase()
                    && current.len() >= 2)
                // letter↔digit transitions
                || (c.is_ascii_digit() != prev.is_ascii_digit() && prev != '_');
            if boundary {
                if c.is_ascii_lowercase() && prev.is_ascii_uppercase() && current.len() >= 2 {
                    // Move the last uppercase letter into the new word.
                    let moved = current.pop().unwrap();
                    words.push(std::mem::take(&mut current));
                    current.push(moved);
                } else {
                    words.push(std::mem::take(&mut current));
                }
            }
        }
        current.push(c);
    }
    if !current.is_empty() {
        words.push(current);
    }
    words.into_iter().map(|w| w.to_ascii_lowercase()).collect()
}

/// Strip a crude English plural: a trailing `s` unless the word ends in
/// `ss`, `us`, or `is` (status, analysis), or is too short to matter.
fn singular(word: &str) -> &str {
    if word.len() > 3
        && word.ends_with('s')
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
    {
        &word[..word.len() - 1]
    } else {
        word
    }
}

/// Segment a run-together word into dictionary tokens, maximising the sum
/// of squared segment lengths (prefers fewer, longer words). Returns None
/// when no full segmentation into known tokens exists.
fn segment(word: &str, table: &SynonymTable) -> Option<Vec<String>> {
    let n = word.len();
    if n == 0 || !word.is_ascii() {
        return None;
    }
    // best[i] = (score, split point) for the prefix of length i.
    let mut best: Vec<Option<(u64, usize)>> = vec![None; n + 1];
    best[0] = Some((0, 0));
    for end in 1..=n {
        for start in 0..end {
            let Some((prefix_score, _)) = best[start] else {
                continue;
            };
            let piece = &word[start..end];
            if table.knows(piece) || table.knows(singular(piece)) {
                let score = prefix_score + ((end - start) as u64).pow(2);
                if best[end].is_none_or(|(s, _)| score > s) {
                    best[end] = Some((score, start));
                }
            }
        }
    }
    best[n]?;
    let mut cuts = Vec::new();
    let mut at = n;
    while at > 0 {
        let (_, start) = best[at].unwrap();
        cuts.push((start, at));
        at = start;
    }
    cuts.reverse();
    Some(cuts.into_iter().map(|(s, e)| word[s..e].to_string()).collect())
}

/// Full normalization: split, segment unknown run-together words, collapse
/// known bigrams, strip plurals, and map every token to its canonical form.
/// The result preserves order and keeps duplicates (set semantics are the
/// caller's choice).
pub fn normalize_name(name: &str, table: &SynonymTable) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in split_words(name) {
        if table.knows(&word) || table.knows(singular(&word)) || word.len() <= 2 {
            tokens.push(word);
        } else if let Some(parts) = segment(&word, table) {
            tokens.extend(parts);
        } else {
            tokens.push(word);
        }
    }
    // Collapse bigrams like ("access", "point") → "ap".
    let mut collapsed: Vec<String> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() {
            if let Some(repl) = table.bigram(&tokens[i], &tokens[i + 1]) {
                collapsed.push(repl.to_string());
                i += 2;
                continue;
            }
        }
        collapsed.push(tokens[i].clone());
        i += 1;
    }
    collapsed
        .into_iter()
        .map(|t| table.canonical(singular(&t)).to_string())
        .collect()
}

/// Jaccard similarity of the canonical token sets of two names.
pub fn name_similarity(a: &str, b: &str, table: &SynonymTable) -> f64 {
    use std::collections::BTreeSet;
    let sa: BTreeSet<String> = normalize_name(a, table).into_iter().collect();
    let sb: BTreeSet<String> = normalize_name(b, table).into_iter().collect();
    if sa.is_empty() && sb.is_empty() {
        return 0.0;
    }
    let inter = sa.intersection(&sb).count() as f64;
    let union = sa.union(&sb).count() as f64;
    inter / union
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> &'static SynonymTable {
        SynonymTable::builtin()
    }

    #[test]
    fn splits_every_casing_style() {
        assert_eq!(split_words("set_tx_power"), vec!["set", "tx", "power"]);
        assert_eq!(split_words("getRateStats"), vec!["get", "rate", "stats"]);
        assert_eq!(split_words("SetTxPower"), vec!["set", "tx", "power"]);
        assert_eq!(split_words("radioID"), vec!["radio", "id"]);
        assert_eq!(split_words("UEList"), vec!["ue", "list"]);
        assert_eq!(split_words("releaseUE"), vec!["release", "ue"]);
        assert_eq!(split_words("cell0"), vec!["cell", "0"]);
    }

    #[test]
    fn segments_flatcase_via_dictionary() {
        assert_eq!(normalize_name("setchn", table()), vec!["set", "channel"]);
        assert_eq!(normalize_name("settxpwr", table()), vec!["set", "transmission", "power"]);
        assert_eq!(normalize_name("rebootap", table()), vec!["reboot", "ap"]);
    }

    #[test]
    fn canonicalises_synonyms_and_plurals() {
        assert_eq!(normalize_name("getRateStats", table()), vec!["get", "rate", "statistic"]);
        assert_eq!(
            normalize_name("list_associated_stas", table()),
            vec!["list", "connected", "station"]
        );
    }

    #[test]
    fn bigram_collapse_matches_abbreviation() {
        assert_eq!(
            normalize_name("restart_access_point", table()),
            vec!["reboot", "ap"]
        );
        assert_eq!(normalize_name("reboot_ap", table()), vec!["reboot", "ap"]);
    }

    #[test]
    fn equivalent_names_reach_similarity_one() {
        for (a, b) in [
            ("set_channel", "setchn"),
            ("set_channel", "setChannel"),
            ("releaseUE", "drop_user"),
            ("restart_access_point", "rebootap"),
            ("get_sta_rate_stats", "fetchClientRateMetrics"),
        ] {
            let s = name_similarity(a, b, table());
            assert!((s - 1.0).abs() < 1e-12, "{a} vs {b} similarity {s}");
        }
    }

    #[test]
    fn unrelated_names_score_low() {
        let s = name_similarity("set_channel", "list_blocked_stas", table());
        assert!(s < 0.2, "got {s}");
    }

    #[test]
    fn unknown_words_survive_whole() {
        assert_eq!(normalize_name("frobnicate_xyzzy", table()), vec!["frobnicate", "xyzzy"]);
    }
}
