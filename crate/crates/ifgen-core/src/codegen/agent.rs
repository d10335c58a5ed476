//! The code-generation agent: for one CFR entry, retrieve the most
//! relevant vendor API documentation, ask the text backend to synthesize
//! a binding entry, and parse the response.
//!
//! Retrieval is embedding-based: the vendor's prose API documentation is
//! chunked once per session, and each CFR entry queries the index with
//! its requirement text. The functions documented in the top chunks
//! become the candidate targets, scored against the requirement with the
//! same blended similarity the matching agent uses, and the backend is
//! asked to bind against them — it never sees (and may never name) a
//! function outside the retrieved set.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{render_signature, CfrEntry, ControlCapability};
use crate::gen::{
    embed_task, BindingGenTask, GenError, GenerationRequest, RetrievalIndex, ScoredInternal,
    TaskEnvelope, TextBackend, TokenUsage,
};
use crate::matching::score::score_pair;
use crate::matching::synonyms::SynonymTable;

use super::api_doc::VendorApiDoc;
use super::augment::{hint_is_known, AugmentError};
use super::spec::BindingEntry;

/// How many chunks a retrieval query returns.
pub const RETRIEVAL_K: usize = 3;
/// Token budget per documentation chunk.
pub const CHUNK_TARGET_TOKENS: u64 = 64;

#[derive(Debug, Error)]
pub enum CodegenError {
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error("retrieval found no internal functions for `{requirement}`")]
    NoCandidates { requirement: String },
    #[error(transparent)]
    Backend(#[from] GenError),
    #[error("backend declined to bind `{requirement}`: {reason}")]
    Declined { requirement: String, reason: String },
    #[error("backend response carries no binding entry: {0}")]
    Unparseable(String),
    #[error("binding for `{requirement}` did not validate after {attempts} attempts; last issues: {last_feedback}")]
    Exhausted {
        requirement: String,
        attempts: u32,
        last_feedback: String,
    },
}

/// One generated candidate binding, with the retrieval context and cost
/// that produced it.
#[derive(Debug, Clone)]
pub struct EntryGeneration {
    pub binding: BindingEntry,
    /// Retrieved internal candidates, best first — the allowed targets.
    pub candidates: Vec<ScoredInternal>,
    pub usage: TokenUsage,
    pub wall_ms: u64,
}

/// Build the session retrieval index over a vendor's API documentation.
pub fn build_doc_index(api: &VendorApiDoc) -> RetrievalIndex {
    RetrievalIndex::build(crate::gen::chunk_document(&api.prose(), CHUNK_TARGET_TOKENS))
}

/// Retrieve and score candidate internal functions for one CFR entry.
///
/// The top [`RETRIEVAL_K`] chunks are mapped back to the functions they
/// document (order-preserving, deduplicated), then ranked by the blended
/// requirement similarity.
pub fn retrieve_candidates(
    entry: &CfrEntry,
    api: &VendorApiDoc,
    index: &RetrievalIndex,
    table: &SynonymTable,
) -> Vec<ScoredInternal> {
    let req = &entry.requirement;
    let query = format!(
        "{} {} {} {}",
        req.name.as_str(),
        req.description,
        entry.capability.name.as_str(),
        entry.capability.description,
    );
    let mut seen = std::collections::BTreeSet::new();
    let mut candidates = Vec::new();
    for hit in index.retrieve_top_k(&query, RETRIEVAL_K) {
        for f in api.functions_in_chunk(&hit.text) {
            if seen.insert(f.name.as_str().to_string()) {
                // Score the internal function as if it were a capability;
                // same blended rule the matching agent ranks with.
                let view = ControlCapability {
                    name: f.name.clone(),
                    description: f.description.clone(),
                    params: f.params.clone(),
                    returns: f.returns.clone(),
                    tags: vec![],
                };
                let score = score_pair(req, &view, table).total;
                candidates.push(ScoredInternal {
                    function: f.clone(),
                    score,
                });
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("similarity scores are never NaN")
            .then_with(|| a.function.name.as_str().cmp(b.function.name.as_str()))
    });
    candidates
}

const BINDING_SYSTEM: &str = "You generate interface bindings on a network function. Given one \
confirmed control-function requirement and excerpts of this NF's internal API documentation, \
emit a single JSON binding entry that adapts the requirement's signature onto exactly one of \
the documented internal functions: rename fields, convert units, cast types, and synthesize \
any requested guard or enrichment steps. Target only functions shown to you. Output the JSON \
object and nothing else.";

fn binding_prompt(task: &BindingGenTask) -> GenerationRequest {
    let entry = &task.entry;
    let mut body = String::new();
    body.push_str("Requirement to provision:\n");
    body.push_str(&render_signature(
        &entry.requirement,
        Some(entry.capability.name.as_str()),
    ));
    body.push_str(&format!("\nMatch kind: {}\n", entry.match_kind));
    if let Some(hint) = &entry.requirement.augmentation_hint {
        body.push_str(&format!(
            "Augmentation hint: {}{}\n",
            hint.kind,
            hint.param
                .as_ref()
                .map(|p| format!(" on parameter `{p}`"))
                .unwrap_or_default()
        ));
    }
    body.push_str("\nRetrieved internal API documentation:\n\n");
    for c in &task.candidates {
        body.push_str(&c.function.doc_block());
        body.push('\n');
    }
    if let Some(feedback) = &task.feedback {
        body.push_str(&format!(
            "\nYour previous binding (attempt {}) failed validation. Fix these findings and \
             emit the corrected entry:\n{}\n",
            task.attempt - 1,
            feedback
        ));
    }
    body.push_str(
        "\nEmit the binding entry as one JSON object with keys: function, target, \
         param_pipeline, args, return_pipeline, reply, and optionally augmentation.",
    );
    let envelope = TaskEnvelope::BindingGen(Box::new(task.clone()));
    GenerationRequest::new(BINDING_SYSTEM, embed_task(&body, &envelope))
}

/// Pull the first well-formed JSON object out of a response, tolerating
/// surrounding prose and markdown fences.
pub(crate) fn extract_json_object(text: &str) -> Option<&str> {
    let bytes = text.as_bytes();
    let start = text.find('{')?;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&text[start..=i]);
                }
            }
            _ => {}
        }
    }
    None
}

/// Response shapes a backend may answer a binding task with.
#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum BindingResponse {
    Declined { error: String },
    Entry(Box<BindingEntry>),
}

fn parse_binding_response(text: &str, requirement: &str) -> Result<BindingEntry, CodegenError> {
    let json = extract_json_object(text)
        .ok_or_else(|| CodegenError::Unparseable(format!("no JSON object in: {text:.120}")))?;
    match serde_json::from_str::<BindingResponse>(json) {
        Ok(BindingResponse::Entry(entry)) => Ok(*entry),
        Ok(BindingResponse::Declined { error }) => Err(CodegenError::Declined {
            requirement: requirement.to_string(),
            reason: error,
        }),
        Err(e) => Err(CodegenError::Unparseable(e.to_string())),
    }
}

/// Ask the backend for one binding entry.
///
/// `attempt` is 1-based; repair attempts pass the previous validation
/// feedback. Unknown augmentation hints fail here, before any backend
/// call — intent this implementation cannot synthesize must not reach
/// generation.
pub fn generate_entry_binding(
    entry: &CfrEntry,
    api: &VendorApiDoc,
    index: &RetrievalIndex,
    backend: &dyn TextBackend,
    attempt: u32,
    feedback: Option<String>,
) -> Result<EntryGeneration, CodegenError> {
    if let Some(hint) = &entry.requirement.augmentation_hint {
        if !hint_is_known(&hint.kind) {
            return Err(AugmentError::UnrecognizedHint(hint.kind.clone()).into());
        }
    }
    let candidates = retrieve_candidates(entry, api, index, SynonymTable::builtin());
    if candidates.is_empty() {
        return Err(CodegenError::NoCandidates {
            requirement: entry.requirement.name.as_str().to_string(),
        });
    }
    let task = BindingGenTask {
        entry: entry.clone(),
        candidates: candidates.clone(),
        attempt,
        feedback,
    };
    let prompt = binding_prompt(&task);
    let res = backend.generate(&prompt)?;
    let binding = parse_binding_response(&res.text, entry.requirement.name.as_str())?;
    Ok(EntryGeneration {
        binding,
        candidates,
        usage: res.usage,
        wall_ms: res.latency_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{Identifier, MatchKind, ParamSpec, SemanticType, Unit};
    use crate::doc::NfClass;
    use crate::gen::MockBackend;
    use crate::nfsim::derive_vendor_variant;

    fn ident(s: &str) -> Identifier {
        Identifier::new(s).unwrap()
    }

    fn power_entry() -> CfrEntry {
        let requirement = crate::doc::ControlRequirement {
            name: ident("set_tx_power"),
            description: "Set the transmission power of the given radio in dBm.".to_string(),
            params: vec![
                ParamSpec::new("radio_id", SemanticType::Text),
                ParamSpec::new("power", SemanticType::Real).with_unit(Unit::Dbm),
            ],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        };
        let profile = derive_vendor_variant(NfClass::WlanAp, 0);
        let capability = profile
            .capability_doc
            .capability("set_tx_power")
            .unwrap()
            .clone();
        CfrEntry {
            requirement,
            capability,
            match_kind: MatchKind::Exact,
            score: 1.0,
            notes: String::new(),
        }
    }

    #[test]
    fn retrieval_surfaces_the_true_target_among_candidates() {
        for seed in [0, 1, 3] {
            let profile = derive_vendor_variant(NfClass::WlanAp, seed);
            let index = build_doc_index(&profile.api_doc);
            let entry = power_entry();
            let candidates =
                retrieve_candidates(&entry, &profile.api_doc, &index, SynonymTable::builtin());
            assert!(!candidates.is_empty(), "seed {seed} retrieved nothing");
            let truth = profile.truth("set_tx_power").unwrap();
            assert!(
                candidates
                    .iter()
                    .any(|c| c.function.name == truth.internal_name),
                "seed {seed}: true target {} not among {:?}",
                truth.internal_name,
                candidates
                    .iter()
                    .map(|c| c.function.name.as_str())
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn mock_backend_round_trip_yields_a_binding_on_the_true_target() {
        let profile = derive_vendor_variant(NfClass::WlanAp, 2);
        let index = build_doc_index(&profile.api_doc);
        let entry = power_entry();
        let backend = MockBackend::new(0, 0.0);
        let generated =
            generate_entry_binding(&entry, &profile.api_doc, &index, &backend, 1, None).unwrap();
        assert_eq!(generated.binding.function, entry.requirement.name);
        let truth = profile.truth("set_tx_power").unwrap();
        assert_eq!(generated.binding.target, truth.internal_name);
        assert!(generated.usage.total() > 0);
    }

    #[test]
    fn unknown_hint_is_rejected_before_any_backend_call() {
        struct Panicking;
        impl TextBackend for Panicking {
            fn name(&self) -> &str {
                "panicking"
            }
            fn generate(
                &self,
                _req: &GenerationRequest,
            ) -> Result<crate::gen::GenerationResponse, GenError> {
                panic!("backend must not be called for an unknown hint");
            }
        }
        let profile = derive_vendor_variant(NfClass::WlanAp, 1);
        let index = build_doc_index(&profile.api_doc);
        let mut entry = power_entry();
        entry.requirement.augmentation_hint = Some(crate::doc::AugmentationHint {
            kind: "quantum_acceleration".to_string(),
            param: None,
        });
        let err = generate_entry_binding(&entry, &profile.api_doc, &index, &Panicking, 1, None)
            .unwrap_err();
        assert!(matches!(
            err,
            CodegenError::Augment(AugmentError::UnrecognizedHint(_))
        ));
    }

    #[test]
    fn json_extraction_handles_prose_fences_and_nesting() {
        assert_eq!(extract_json_object(r#"{"a":1}"#), Some(r#"{"a":1}"#));
        assert_eq!(
            extract_json_object("Here you go:\n```json\n{\"a\":{\"b\":\"}\"}}\n```\ndone"),
            Some(r#"{"a":{"b":"}"}}"#)
        );
        assert_eq!(extract_json_object("no json here"), None);
        assert_eq!(extract_json_object(r#"{"unterminated": true"#), None);
    }

    #[test]
    fn declined_and_garbage_responses_map_to_distinct_errors() {
        let declined = parse_binding_response(
            r#"{"error": "no candidate internal functions were retrieved"}"#,
            "f",
        )
        .unwrap_err();
        assert!(matches!(declined, CodegenError::Declined { .. }));

        let garbage = parse_binding_response("I would rather write a poem.", "f").unwrap_err();
        assert!(matches!(garbage, CodegenError::Unparseable(_)));
    }
}
