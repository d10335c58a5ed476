//! Canonical serialization and content-based document detection.

use serde::Serialize;

use super::types::{CapabilityDocument, CfrDocument, RequirementSet};
use super::DocError;

/// A parsed document of any class.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Capability(CapabilityDocument),
    Requirements(RequirementSet),
    Cfr(CfrDocument),
}

impl Document {
    pub fn class_name(&self) -> &'static str {
        match self {
            Document::Capability(_) => "capability",
            Document::Requirements(_) => "requirement-set",
            Document::Cfr(_) => "cfr",
        }
    }
}

/// Serialize anything to the canonical textual form: JSON with sorted object
/// keys, two-space indentation, and a trailing newline. Equal values always
/// produce byte-identical output, which the benchmark records and the wire
/// protocol both rely on.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's default Map is backed by a BTreeMap, so object keys come
    // out sorted without extra work. Converting through Value first makes
    // that hold for struct fields too (which would otherwise serialize in
    // declaration order).
    let v = serde_json::to_value(value).expect("document types serialize infallibly");
    let mut s = serde_json::to_string_pretty(&v).expect("serde_json::Value never fails to render");
    s.push('\n');
    s
}

/// Identify which document class a JSON object is, by its distinguishing
/// top-level keys.
pub fn detect_document(json: &serde_json::Value) -> Result<&'static str, DocError> {
    let obj = json.as_object().ok_or(DocError::UnknownShape)?;
    if obj.contains_key("capabilities") && obj.contains_key("nf_class") {
        Ok("capability")
    } else if obj.contains_key("requirements") {
        Ok("requirement-set")
    } else if obj.contains_key("entries") && obj.contains_key("encoding_scheme") {
        Ok("cfr")
    } else {
        Err(DocError::UnknownShape)
    }
}

/// Parse a document of any class from its textual form, detecting the class
/// from content, and validate its structural invariants.
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let json: serde_json::Value = serde_json::from_str(text)?;
    let doc = match detect_document(&json)? {
        "capability" => {
            let d: CapabilityDocument = serde_json::from_value(json)?;
            super::validate::ensure_valid_capability_doc(&d)?;
            Document::Capability(d)
        }
        "requirement-set" => {
            let d: RequirementSet = serde_json::from_value(json)?;
            super::validate::ensure_valid_requirement_set(&d)?;
            Document::Requirements(d)
        }
        _ => {
            let d: CfrDocument = serde_json::from_value(json)?;
            super::validate::ensure_valid_cfr(&d)?;
            Document::Cfr(d)
        }
    };
    Ok(doc)
}
