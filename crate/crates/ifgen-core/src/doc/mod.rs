//! Document model and canonical serialization.
//!
//! Three document classes travel between network functions: capability
//! documents (what an NF can do), requirement sets (what a consumer wants),
//! and CFR documents (the agreed mapping between the two). All of them
//! serialize to a single canonical JSON form — sorted keys, two-space
//! indentation, trailing newline — so that equal documents always produce
//! byte-identical output.

mod parse;
mod signature;
mod types;
mod validate;

pub use parse::{canonical_json, detect_document, parse_document, Document};
pub use signature::render_signature;
pub use types::{
    AugmentationHint, CapabilityDocument, CfrDocument, CfrEntry, ControlCapability,
    ControlRequirement, Identifier, MatchKind, NfClass, ParamSpec, RequirementSet, SemanticType,
    Unit, SCHEMA_VERSION,
};
pub use validate::{
    ensure_valid_capability_doc, ensure_valid_cfr, ensure_valid_requirement_set,
    validate_capability_doc, validate_cfr, validate_requirement_set,
};

use thiserror::Error;

/// Errors raised while parsing or validating documents.
#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognized document shape: expected capability, requirement-set, or CFR keys")]
    UnknownShape,
    #[error("invalid identifier `{0}`: expected [a-zA-Z_][a-zA-Z0-9_]*")]
    InvalidIdentifier(String),
    #[error("unsupported schema version `{version}`: {reason}")]
    SchemaVersion { version: String, reason: String },
    #[error("invalid document:\n{}", issues.join("\n"))]
    Invalid { issues: Vec<String> },
}
