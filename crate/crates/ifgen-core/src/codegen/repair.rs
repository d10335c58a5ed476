//! The generate → validate → repair loop, and the session driver that
//! provisions every entry of a received CFR.
//!
//! Each entry is provisioned independently: a binding that has passed
//! validation is committed and never touched again, and one entry
//! exhausting its repair budget does not stop the others — the session
//! output records exactly which entries hold and which do not, so the
//! NF can report a precise terminal state.

use std::collections::BTreeSet;

use crate::doc::{ensure_valid_cfr, CfrDocument, CfrEntry, DocError};
use crate::gen::{cost_of, PriceTable, RetrievalIndex, TextBackend, TokenUsage};
use crate::metrics::{BenchTask, MetricsRecord};
use crate::nfsim::VendorProfile;
use crate::protocol::encoding::Encoding;

use super::agent::{build_doc_index, generate_entry_binding, CodegenError};
use super::spec::{BindingEntry, BindingSpec};
use super::validate::{validate_entry, TestReport};
use super::vectors::generate_vectors;

/// Repair budget per entry: the first attempt plus up to four repairs.
pub const MAX_REPAIR_ATTEMPTS: u32 = 5;

/// A binding that survived static checks and every test vector.
#[derive(Debug, Clone)]
pub struct ProvisionedBinding {
    pub binding: BindingEntry,
    pub report: TestReport,
}

/// What provisioning one entry took, however it ended.
#[derive(Debug)]
pub struct EntryProvision {
    pub requirement: String,
    pub attempts: u32,
    pub usage: TokenUsage,
    pub wall_ms: u64,
    pub outcome: Result<ProvisionedBinding, CodegenError>,
}

/// A CFR the session driver refuses to work on at all.
#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("invalid CFR: {0}")]
    Doc(#[from] DocError),
    #[error("CFR names encoding `{offered}` but the session negotiated `{negotiated}`")]
    EncodingMismatch { offered: String, negotiated: String },
    #[error("entry `{requirement}` claims capability `{capability}`, which this NF does not provide")]
    UnknownCapability {
        requirement: String,
        capability: String,
    },
}

/// Everything a completed codegen session produced.
#[derive(Debug)]
pub struct CodegenSessionOutput {
    /// Bindings of the entries that passed, in CFR order.
    pub spec: BindingSpec,
    /// One element per CFR entry, in CFR order.
    pub entries: Vec<EntryProvision>,
    /// One metrics row per CFR entry, in CFR order.
    pub records: Vec<MetricsRecord>,
}

impl CodegenSessionOutput {
    pub fn all_provisioned(&self) -> bool {
        self.entries.iter().all(|e| e.outcome.is_ok())
    }

    /// Human-readable findings for the entries that did not hold.
    pub fn failure_details(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter_map(|e| {
                e.outcome
                    .as_ref()
                    .err()
                    .map(|err| format!("{}: {err}", e.requirement))
            })
            .collect()
    }
}

fn clip(text: &str, max: usize) -> String {
    if text.len() <= max {
        return text.to_string();
    }
    let mut cut = max;
    while !text.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{}…", &text[..cut])
}

/// Generate, validate, and repair one entry within the attempt budget.
#[allow(clippy::too_many_arguments)]
pub fn provision_entry(
    entry: &CfrEntry,
    cfr: &CfrDocument,
    profile: &VendorProfile,
    index: &RetrievalIndex,
    encoding: &dyn Encoding,
    backend: &dyn TextBackend,
    now_ms: i64,
    seed: u64,
) -> EntryProvision {
    let requirement = entry.requirement.name.as_str().to_string();
    let vectors = generate_vectors(entry, profile.nf_class, now_ms, seed);
    let mut usage = TokenUsage::default();
    let mut wall_ms = 0u64;
    let mut feedback: Option<String> = None;

    for attempt in 1..=MAX_REPAIR_ATTEMPTS {
        let generated = generate_entry_binding(
            entry,
            &profile.api_doc,
            index,
            backend,
            attempt,
            feedback.clone(),
        );
        let generation = match generated {
            Ok(g) => g,
            // The backend answered, just not with a usable binding; that
            // costs an attempt and the verbatim complaint becomes the
            // repair feedback.
            Err(CodegenError::Unparseable(raw)) => {
                feedback = Some(format!(
                    "the previous response was not a single JSON binding object: {}",
                    clip(&raw, 240)
                ));
                continue;
            }
            Err(CodegenError::Declined {
                reason, ..
            }) => {
                feedback = Some(format!(
                    "the previous attempt declined with `{}`; the target is among the listed functions",
                    clip(&reason, 240)
                ));
                continue;
            }
            // Nothing a repair prompt could change.
            Err(fatal) => {
                return EntryProvision {
                    requirement,
                    attempts: attempt,
                    usage,
                    wall_ms,
                    outcome: Err(fatal),
                }
            }
        };
        usage.add(generation.usage);
        wall_ms += generation.wall_ms;

        let validation = validate_entry(
            &generation.binding,
            entry,
            cfr,
            &profile.api_doc,
            profile,
            &vectors,
            encoding,
            now_ms,
        );
        match validation.feedback() {
            None => {
                return EntryProvision {
                    requirement,
                    attempts: attempt,
                    usage,
                    wall_ms,
                    outcome: Ok(ProvisionedBinding {
                        binding: generation.binding,
                        report: validation.report,
                    }),
                }
            }
            Some(findings) => feedback = Some(findings),
        }
    }

    EntryProvision {
        requirement: requirement.clone(),
        attempts: MAX_REPAIR_ATTEMPTS,
        usage,
        wall_ms,
        outcome: Err(CodegenError::Exhausted {
            requirement,
            attempts: MAX_REPAIR_ATTEMPTS,
            last_feedback: feedback.unwrap_or_default(),
        }),
    }
}

/// Provision every entry of a received CFR against this NF.
pub fn run_codegen_session(
    cfr: &CfrDocument,
    profile: &VendorProfile,
    encoding: &dyn Encoding,
    backend: &dyn TextBackend,
    prices: &PriceTable,
    now_ms: i64,
    seed: u64,
) -> Result<CodegenSessionOutput, SessionError> {
    ensure_valid_cfr(cfr)?;
    if cfr.encoding_scheme != encoding.name() {
        return Err(SessionError::EncodingMismatch {
            offered: cfr.encoding_scheme.clone(),
            negotiated: encoding.name().to_string(),
        });
    }
    // Every claimed capability must be one this NF actually documents,
    // with exactly the documented signature.
    for entry in &cfr.entries {
        let name = entry.capability.name.as_str();
        if profile.capability_doc.capability(name) != Some(&entry.capability) {
            return Err(SessionError::UnknownCapability {
                requirement: entry.requirement.name.as_str().to_string(),
                capability: name.to_string(),
            });
        }
    }

    let index = build_doc_index(&profile.api_doc);
    let price = prices
        .price_for(backend.name())
        .cloned()
        .unwrap_or(crate::gen::ModelPrice {
            input_per_mtok: rust_decimal::Decimal::ZERO,
            output_per_mtok: rust_decimal::Decimal::ZERO,
        });

    let mut entries = Vec::with_capacity(cfr.entries.len());
    let mut records = Vec::with_capacity(cfr.entries.len());
    for entry in &cfr.entries {
        let provision =
            provision_entry(entry, cfr, profile, &index, encoding, backend, now_ms, seed);
        records.push(MetricsRecord {
            task: BenchTask::Codegen,
            subject: provision.requirement.clone(),
            backend: backend.name().to_string(),
            attempts: provision.attempts,
            wall_ms: provision.wall_ms,
            usage: provision.usage,
            cost: cost_of(&provision.usage, &price),
            success: provision.outcome.is_ok(),
        });
        entries.push(provision);
    }

    let spec = BindingSpec {
        source_nf: cfr.source_nf.clone(),
        dest_nf: cfr.dest_nf.clone(),
        schema_version: cfr.schema_version.clone(),
        encoding_scheme: cfr.encoding_scheme.clone(),
        bindings: entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().ok().map(|p| p.binding.clone()))
            .collect(),
    };
    Ok(CodegenSessionOutput {
        spec,
        entries,
        records,
    })
}

/// Attempt counts per entry, the shape the benchmarks aggregate.
pub fn attempts_histogram(entries: &[EntryProvision]) -> Vec<(String, u32)> {
    entries
        .iter()
        .map(|e| (e.requirement.clone(), e.attempts))
        .collect()
}

/// Deduplicated requirement names that failed to provision.
pub fn failed_requirements(entries: &[EntryProvision]) -> BTreeSet<String> {
    entries
        .iter()
        .filter(|e| e.outcome.is_err())
        .map(|e| e.requirement.clone())
        .collect()
}
