//! Structural validation for each document class. Validators collect every
//! violation instead of stopping at the first one, so a user fixing a
//! hand-written document sees the whole picture at once.

use std::collections::BTreeSet;

use super::types::{
    check_schema_version, CapabilityDocument, CfrDocument, ControlCapability, ControlRequirement,
    MatchKind, ParamSpec, RequirementSet,
};
use super::DocError;

fn check_fields(issues: &mut Vec<String>, owner: &str, role: &str, fields: &[ParamSpec]) {
    let mut seen = BTreeSet::new();
    for f in fields {
        if !seen.insert(f.name.as_str().to_string()) {
            issues.push(format!("{owner}: duplicate {role} name `{}`", f.name));
        }
        if f.unit.is_some() && !f.semantic_type.accepts_unit() {
            issues.push(format!(
                "{owner}: {role} `{}` has type {} which cannot carry a unit",
                f.name, f.semantic_type
            ));
        }
    }
}

fn check_capability(issues: &mut Vec<String>, cap: &ControlCapability) {
    let owner = format!("capability `{}`", cap.name);
    if cap.description.trim().is_empty() {
        issues.push(format!("{owner}: empty description"));
    }
    check_fields(issues, &owner, "param", &cap.params);
    check_fields(issues, &owner, "return", &cap.returns);
}

fn check_requirement(issues: &mut Vec<String>, req: &ControlRequirement) {
    let owner = format!("requirement `{}`", req.name);
    if req.description.trim().is_empty() {
        issues.push(format!("{owner}: empty description"));
    }
    check_fields(issues, &owner, "param", &req.params);
    check_fields(issues, &owner, "return", &req.returns);
    if let Some(hint) = &req.augmentation_hint {
        if hint.kind.trim().is_empty() {
            issues.push(format!("{owner}: augmentation hint with empty kind"));
        }
        if let Some(param) = &hint.param {
            if !req.params.iter().any(|p| &p.name == param) {
                issues.push(format!(
                    "{owner}: augmentation hint references unknown param `{param}`"
                ));
            }
        }
    }
}

/// Validate a capability document; returns every violation found.
pub fn validate_capability_doc(doc: &CapabilityDocument) -> Vec<String> {
    let mut issues = Vec::new();
    if doc.nf_id.trim().is_empty() {
        issues.push("empty nf_id".to_string());
    }
    if doc.capabilities.is_empty() {
        issues.push("capability document advertises no capabilities".to_string());
    }
    if doc.supported_encodings.is_empty() {
        issues.push("capability document advertises no encodings".to_string());
    }
    let mut seen = BTreeSet::new();
    for cap in &doc.capabilities {
        if !seen.insert(cap.name.as_str().to_string()) {
            issues.push(format!("duplicate capability name `{}`", cap.name));
        }
        check_capability(&mut issues, cap);
    }
    issues
}

/// Validate a requirement set; returns every violation found.
pub fn validate_requirement_set(set: &RequirementSet) -> Vec<String> {
    let mut issues = Vec::new();
    if set.requirements.is_empty() {
        issues.push("requirement set is empty".to_string());
    }
    let mut seen = BTreeSet::new();
    for req in &set.requirements {
        if !seen.insert(req.name.as_str().to_string()) {
            issues.push(format!("duplicate requirement name `{}`", req.name));
        }
        check_requirement(&mut issues, req);
    }
    issues
}

/// Validate a CFR document; returns every violation found.
pub fn validate_cfr(doc: &CfrDocument) -> Vec<String> {
    let mut issues = Vec::new();
    if let Err(e) = check_schema_version(&doc.schema_version) {
        issues.push(e.to_string());
    }
    if doc.source_nf.trim().is_empty() {
        issues.push("empty source_nf".to_string());
    }
    if doc.dest_nf.trim().is_empty() {
        issues.push("empty dest_nf".to_string());
    }
    if !super::types::is_valid_identifier(&doc.encoding_scheme) {
        issues.push(format!(
            "encoding scheme `{}` is not a valid identifier",
            doc.encoding_scheme
        ));
    }
    if doc.entries.is_empty() {
        issues.push("CFR carries no entries".to_string());
    }
    let mut seen = BTreeSet::new();
    for entry in &doc.entries {
        let name = entry.requirement.name.as_str();
        if !seen.insert(name.to_string()) {
            issues.push(format!("duplicate CFR entry for requirement `{name}`"));
        }
        check_requirement(&mut issues, &entry.requirement);
        check_capability(&mut issues, &entry.capability);
        if !(entry.score > 0.0 && entry.score <= 1.0) {
            issues.push(format!(
                "entry `{name}`: score {} outside (0, 1]",
                entry.score
            ));
        }
        match entry.match_kind {
            MatchKind::Exact => {
                if entry.score != 1.0 {
                    issues.push(format!(
                        "entry `{name}`: exact match must carry score 1.0, got {}",
                        entry.score
                    ));
                }
            }
            MatchKind::Augmented => {
                if entry.requirement.augmentation_hint.is_none() {
                    issues.push(format!(
                        "entry `{name}`: augmented match without an augmentation hint"
                    ));
                }
            }
            MatchKind::Closest => {}
        }
    }
    issues
}

fn into_result(issues: Vec<String>) -> Result<(), DocError> {
    if issues.is_empty() {
        Ok(())
    } else {
        Err(DocError::Invalid { issues })
    }
}

pub fn ensure_valid_capability_doc(doc: &CapabilityDocument) -> Result<(), DocError> {
    into_result(validate_capability_doc(doc))
}

pub fn ensure_valid_requirement_set(set: &RequirementSet) -> Result<(), DocError> {
    into_result(validate_requirement_set(set))
}

pub fn ensure_valid_cfr(doc: &CfrDocument) -> Result<(), DocError> {
    into_result(validate_cfr(doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::types::*;

    fn req(name: &str) -> ControlRequirement {
        ControlRequirement {
            name: Identifier::new(name).unwrap(),
            description: "Does a thing.".to_string(),
            params: vec![ParamSpec::new("x", SemanticType::Integer)],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        }
    }

    #[test]
    fn duplicate_param_names_are_reported() {
        let mut r = req("f");
        r.params.push(ParamSpec::new("x", SemanticType::Text));
        let issues = validate_requirement_set(&RequirementSet {
            requirements: vec![r],
        });
        assert!(issues.iter().any(|i| i.contains("duplicate param name `x`")));
    }

    #[test]
    fn unit_on_boolean_is_rejected() {
        let mut r = req("f");
        r.returns[0].unit = Some(Unit::Ms);
        let issues = validate_requirement_set(&RequirementSet {
            requirements: vec![r],
        });
        assert!(issues.iter().any(|i| i.contains("cannot carry a unit")));
    }

    #[test]
    fn unit_on_text_is_allowed() {
        // Some vendors pass numeric quantities as decimal strings, so a
        // text param may legitimately carry a unit tag.
        let mut r = req("f");
        r.params[0] = ParamSpec::new("pow", SemanticType::Text).with_unit(Unit::Dbm);
        let issues = validate_requirement_set(&RequirementSet {
            requirements: vec![r],
        });
        assert!(issues.is_empty(), "unexpected issues: {issues:?}");
    }

    #[test]
    fn hint_param_must_exist() {
        let mut r = req("f");
        r.augmentation_hint = Some(AugmentationHint {
            kind: "guard_on_timestamp".to_string(),
            param: Some(Identifier::new("deadline").unwrap()),
        });
        let issues = validate_requirement_set(&RequirementSet {
            requirements: vec![r],
        });
        assert!(issues.iter().any(|i| i.contains("unknown param `deadline`")));
    }

    #[test]
    fn cfr_exact_entries_must_score_one() {
        let cap = ControlCapability {
            name: Identifier::new("f_cap").unwrap(),
            description: "Does a thing.".to_string(),
            params: vec![ParamSpec::new("x", SemanticType::Integer)],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            tags: vec![],
        };
        let mut doc = CfrDocument {
            source_nf: "s".to_string(),
            dest_nf: "d".to_string(),
            schema_version: SCHEMA_VERSION.to_string(),
            encoding_scheme: "json".to_string(),
            entries: vec![CfrEntry {
                requirement: req("f"),
                capability: cap,
                match_kind: MatchKind::Exact,
                score: 0.97,
                notes: String::new(),
            }],
        };
        let issues = validate_cfr(&doc);
        assert!(issues.iter().any(|i| i.contains("score 1.0")));
        doc.entries[0].score = 1.0;
        assert!(validate_cfr(&doc).is_empty());
    }

    #[test]
    fn cfr_rejects_foreign_major_version() {
        let doc = CfrDocument {
            source_nf: "s".to_string(),
            dest_nf: "d".to_string(),
            schema_version: "2.0.0".to_string(),
            encoding_scheme: "json".to_string(),
            entries: vec![],
        };
        let issues = validate_cfr(&doc);
        assert!(issues.iter().any(|i| i.contains("incompatible major")));
    }
}
