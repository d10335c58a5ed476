//! NF-side validation of a generated binding: static checks first, then
//! every test vector executed through the full wire path and compared
//! against an independent reference run.
//!
//! The reference (oracle) path never touches the binding under test. It
//! maps the requirement-shaped vector straight onto the catalog behavior
//! using the vendor's own ground truth — the NF knows its own API — and
//! records the reply it expects, the observable state it expects to end
//! in, and how many invocations it expects logged. The binding path runs
//! the generated pipelines on a pristine twin of the NF, through encode
//! and decode legs of the negotiated encoding. A vector passes only when
//! the two runs agree on all three counts (or both raise the same domain
//! error, or the guard rejects exactly when it must, leaving no trace).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::doc::{CfrDocument, CfrEntry, ControlRequirement, NfClass, ParamSpec, SCHEMA_VERSION};
use crate::matching::synonyms::SynonymTable;
use crate::nfsim::catalog::{base_catalog, Behavior};
use crate::nfsim::clock::SimClock;
use crate::nfsim::executor::shift;
use crate::nfsim::state::NfState;
use crate::nfsim::{run_binding, NfExecutor, RuntimeError};
use crate::protocol::encoding::{CodecError, Encoding};
use crate::protocol::messages::{ControlCall, ControlReply};
use crate::value::Value;

use super::api_doc::VendorApiDoc;
use super::augment::{HINT_GUARD_ON_TIMESTAMP, HINT_TIMESTAMP_RETURNS};
use super::check::static_check;
use super::infer::assign_sources;
use super::spec::{BindingEntry, BindingSpec};
use super::vectors::{TestVector, VectorExpectation};

/// How one vector's execution ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorOutcome {
    Pass,
    /// The call could not be decoded from the wire.
    DecodeError,
    /// An adaptation step failed to evaluate.
    AdaptationError,
    /// The internal function could not be invoked as bound.
    InvokeError,
    /// The reply violated the declared signature or would not encode.
    EncodeError,
    /// Everything executed, but not the way the reference path does.
    WrongResult,
}

impl VectorOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            VectorOutcome::Pass => "pass",
            VectorOutcome::DecodeError => "decode_error",
            VectorOutcome::AdaptationError => "adaptation_error",
            VectorOutcome::InvokeError => "invoke_error",
            VectorOutcome::EncodeError => "encode_error",
            VectorOutcome::WrongResult => "wrong_result",
        }
    }
}

impl std::fmt::Display for VectorOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One (function, vector) verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorResult {
    /// Requirement name the vector exercised.
    pub function: String,
    pub label: String,
    pub outcome: VectorOutcome,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// All vector verdicts for a validation run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub results: Vec<VectorResult>,
}

impl TestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.outcome == VectorOutcome::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VectorResult> {
        self.results.iter().filter(|r| r.outcome != VectorOutcome::Pass)
    }

    /// Failure findings in the form fed back to the generating backend.
    pub fn failure_lines(&self) -> Vec<String> {
        self.failures()
            .map(|r| format!("vector `{}`: {} — {}", r.label, r.outcome, r.detail))
            .collect()
    }
}

/// Result of validating one binding entry.
#[derive(Debug, Clone, Default)]
pub struct EntryValidation {
    /// Structural findings; when non-empty, vectors were not run.
    pub static_issues: Vec<String>,
    pub report: TestReport,
}

impl EntryValidation {
    pub fn passed(&self) -> bool {
        self.static_issues.is_empty() && self.report.all_passed()
    }

    /// Repair feedback, None when everything passed.
    pub fn feedback(&self) -> Option<String> {
        if self.passed() {
            return None;
        }
        let mut lines = self.static_issues.clone();
        lines.extend(self.report.failure_lines());
        Some(lines.join("\n"))
    }
}

// ---- reference (oracle) path ----

/// What the reference run says must happen.
struct OracleRun {
    /// Requirement-shaped reply, or the domain error's message.
    reply: Result<BTreeMap<String, Value>, String>,
    /// Observable state after the run.
    state: NfState,
    /// Invocations that must appear in the event log.
    events: usize,
    /// The guard must fire instead of any invocation.
    guard_rejects: bool,
}

/// The reference path could not even be constructed — the entry or the
/// vector itself is unusable, which validation reports as a failure.
struct OracleFault(String);

fn guard_param_of(req: &ControlRequirement) -> Option<&str> {
    req.augmentation_hint.as_ref().and_then(|h| {
        (h.kind == HINT_GUARD_ON_TIMESTAMP)
            .then(|| h.param.as_ref().map(|p| p.as_str()))
            .flatten()
    })
}

fn catalog_behavior(class: NfClass, capability: &str) -> Option<Behavior> {
    base_catalog(class)
        .into_iter()
        .find(|e| e.capability.name.as_str() == capability)
        .map(|e| e.behavior)
}

/// Execute the reference path for one Mirror/guard vector.
fn oracle_execute(
    entry: &CfrEntry,
    class: NfClass,
    params: &BTreeMap<String, Value>,
    now_ms: i64,
    table: &SynonymTable,
) -> Result<OracleRun, OracleFault> {
    let req = &entry.requirement;
    let cap = &entry.capability;
    let behavior = catalog_behavior(class, cap.name.as_str()).ok_or_else(|| {
        OracleFault(format!(
            "capability `{}` is not in this NF's catalog",
            cap.name
        ))
    })?;

    let mut state = NfState::initial(class);
    let clock = SimClock::manual(now_ms);
    let baseline = state.observable();

    // Freshness guard: an elapsed deadline must reject before anything runs.
    let guard_param = guard_param_of(req);
    if let Some(p) = guard_param {
        let deadline = match params.get(p) {
            Some(Value::Timestamp(ms)) => *ms,
            other => {
                return Err(OracleFault(format!(
                    "guard parameter `{p}` is {other:?}, expected a timestamp"
                )))
            }
        };
        if deadline < now_ms {
            return Ok(OracleRun {
                reply: Err("freshness guard rejected the call".to_string()),
                state: baseline,
                events: 0,
                guard_rejects: true,
            });
        }
    }

    // Requirement params → capability params, by the documented rule:
    // most name-similar compatible source, guard deadline reserved.
    let mut reserved = BTreeSet::new();
    if let Some(p) = guard_param {
        reserved.insert(p.to_string());
    }
    let assignment = assign_sources(&cap.params, &req.params, &reserved, table);
    let mut base_args = BTreeMap::new();
    for (cap_spec, source_idx) in cap.params.iter().zip(&assignment) {
        let req_spec = source_idx.map(|i| &req.params[i]).ok_or_else(|| {
            OracleFault(format!(
                "no requirement parameter can feed capability param `{}`",
                cap_spec.name
            ))
        })?;
        let v = params.get(req_spec.name.as_str()).ok_or_else(|| {
            OracleFault(format!("vector is missing parameter `{}`", req_spec.name))
        })?;
        let shifted = shift(v, req_spec, cap_spec)
            .map_err(|e| OracleFault(format!("cannot adapt `{}`: {e}", req_spec.name)))?;
        base_args.insert(cap_spec.name.as_str().to_string(), shifted);
    }

    let behavior_result = behavior(&mut state, &clock, &base_args);
    let (reply, events) = match behavior_result {
        Err(domain) => (Err(domain.to_string()), 0),
        Ok(results) => {
            // Capability returns → requirement returns; enrichment fills
            // timestamp returns from the clock.
            let enrich_all_timestamps = req
                .augmentation_hint
                .as_ref()
                .is_some_and(|h| h.kind == HINT_TIMESTAMP_RETURNS);
            let pending: Vec<ParamSpec> = req
                .returns
                .iter()
                .filter(|r| {
                    !(enrich_all_timestamps
                        && r.semantic_type == crate::doc::SemanticType::Timestamp)
                })
                .cloned()
                .collect();
            let ret_assignment =
                assign_sources(&pending, &cap.returns, &BTreeSet::new(), table);
            let mut reply = BTreeMap::new();
            for (req_ret, source_idx) in pending.iter().zip(&ret_assignment) {
                let cap_ret = source_idx.map(|i| &cap.returns[i]).ok_or_else(|| {
                    OracleFault(format!(
                        "no capability return can feed declared return `{}`",
                        req_ret.name
                    ))
                })?;
                let v = results.get(cap_ret.name.as_str()).ok_or_else(|| {
                    OracleFault(format!(
                        "behavior produced no result `{}`",
                        cap_ret.name
                    ))
                })?;
                let shifted = shift(v, cap_ret, req_ret).map_err(|e| {
                    OracleFault(format!("cannot adapt return `{}`: {e}", req_ret.name))
                })?;
                reply.insert(req_ret.name.as_str().to_string(), shifted);
            }
            if enrich_all_timestamps {
                for r in &req.returns {
                    if r.semantic_type == crate::doc::SemanticType::Timestamp {
                        reply.insert(r.name.as_str().to_string(), Value::Timestamp(now_ms));
                    }
                }
            }
            (Ok(reply), 1)
        }
    };

    Ok(OracleRun {
        reply,
        state: state.observable(),
        events,
        guard_rejects: false,
    })
}

// ---- binding-under-test path ----

fn fail(function: &str, label: &str, outcome: VectorOutcome, detail: String) -> VectorResult {
    VectorResult {
        function: function.to_string(),
        label: label.to_string(),
        outcome,
        detail,
    }
}

fn pass(function: &str, label: &str) -> VectorResult {
    VectorResult {
        function: function.to_string(),
        label: label.to_string(),
        outcome: VectorOutcome::Pass,
        detail: String::new(),
    }
}

fn codec_outcome(e: &CodecError) -> VectorOutcome {
    match e.kind() {
        "decode_error" => VectorOutcome::DecodeError,
        _ => VectorOutcome::EncodeError,
    }
}

/// Push one vector through wire-in → binding → wire-out and compare with
/// the reference run.
pub fn run_vector(
    binding: &BindingEntry,
    entry: &CfrEntry,
    profile: &crate::nfsim::VendorProfile,
    vector: &TestVector,
    encoding: &dyn Encoding,
    now_ms: i64,
) -> VectorResult {
    let req = &entry.requirement;
    let fn_name = req.name.as_str();
    let label = vector.label.as_str();
    let table = SynonymTable::builtin();

    // Wire leg in: the vector is the caller.
    let call = ControlCall {
        correlation_id: 1,
        function: fn_name.to_string(),
        params: vector.params.clone(),
    };
    let encoded = match encoding.encode_call(&call) {
        Ok(b) => b,
        Err(e) => return fail(fn_name, label, codec_outcome(&e), e.to_string()),
    };
    let decoded = encoding
        .decode_call(&encoded)
        .and_then(|incoming| incoming.resolve(&req.params));
    let params = match decoded {
        Ok(call) => call.params,
        Err(e) => return fail(fn_name, label, codec_outcome(&e), e.to_string()),
    };

    // Reference run on its own pristine state.
    let oracle = match oracle_execute(entry, profile.nf_class, &params, now_ms, table) {
        Ok(o) => o,
        Err(OracleFault(detail)) => {
            return fail(
                fn_name,
                label,
                VectorOutcome::WrongResult,
                format!("reference path failed: {detail}"),
            )
        }
    };

    // Binding run on a second pristine twin.
    let mut exec = NfExecutor::new(profile.clone(), SimClock::manual(now_ms));
    let baseline = exec.state().observable();
    let run = run_binding(binding, &params, &mut exec);

    let expect_guard = vector.expect == VectorExpectation::GuardRejected || oracle.guard_rejects;

    let results = match run {
        Err(RuntimeError::Adaptation(d)) => {
            return fail(fn_name, label, VectorOutcome::AdaptationError, d)
        }
        Err(RuntimeError::Invoke(d)) => {
            return fail(fn_name, label, VectorOutcome::InvokeError, d)
        }
        Err(RuntimeError::GuardRejected) => {
            if !expect_guard {
                return fail(
                    fn_name,
                    label,
                    VectorOutcome::WrongResult,
                    "guard rejected a fresh call".to_string(),
                );
            }
            if exec.state().observable() != baseline || !exec.state().event_log.is_empty() {
                return fail(
                    fn_name,
                    label,
                    VectorOutcome::WrongResult,
                    "guard rejected but the call left a trace on NF state".to_string(),
                );
            }
            return pass(fn_name, label);
        }
        Err(RuntimeError::Domain(d)) => {
            return match &oracle.reply {
                Err(expected) if *expected == d && !oracle.guard_rejects => {
                    // Same domain error; state must also agree (both
                    // untouched or both identically touched).
                    if exec.state().observable() == oracle.state
                        && exec.state().event_log.len() == oracle.events
                    {
                        pass(fn_name, label)
                    } else {
                        fail(
                            fn_name,
                            label,
                            VectorOutcome::WrongResult,
                            "domain error agreed but state diverged".to_string(),
                        )
                    }
                }
                Err(expected) => fail(
                    fn_name,
                    label,
                    VectorOutcome::WrongResult,
                    format!("raised `{d}`, reference raises `{expected}`"),
                ),
                Ok(_) => fail(
                    fn_name,
                    label,
                    VectorOutcome::WrongResult,
                    format!("raised `{d}` where the reference call succeeds"),
                ),
            };
        }
        Ok(results) => results,
    };

    if expect_guard {
        return fail(
            fn_name,
            label,
            VectorOutcome::WrongResult,
            "call succeeded although the freshness deadline had elapsed".to_string(),
        );
    }

    // The reply must honor the declared signature before it can encode.
    for ret in &req.returns {
        match results.get(ret.name.as_str()) {
            None => {
                return fail(
                    fn_name,
                    label,
                    VectorOutcome::EncodeError,
                    format!("reply is missing declared return `{}`", ret.name),
                )
            }
            Some(v) if v.semantic_type() != ret.semantic_type => {
                return fail(
                    fn_name,
                    label,
                    VectorOutcome::EncodeError,
                    format!(
                        "reply field `{}` is {}, declared {}",
                        ret.name,
                        v.semantic_type(),
                        ret.semantic_type
                    ),
                )
            }
            Some(_) => {}
        }
    }

    // Wire leg out: what the caller would actually receive.
    let reply = ControlReply {
        correlation_id: 1,
        outcome: Ok(results),
    };
    let received = encoding
        .encode_reply(&reply)
        .and_then(|bytes| encoding.decode_reply(&bytes))
        .and_then(|incoming| incoming.resolve(&req.returns));
    let received = match received {
        Ok(r) => r.outcome.expect("encoded as ok"),
        Err(e) => return fail(fn_name, label, codec_outcome(&e), e.to_string()),
    };

    // Three-way agreement with the reference: reply values, observable
    // state, logged invocations.
    let expected = match &oracle.reply {
        Ok(values) => values,
        Err(d) => {
            return fail(
                fn_name,
                label,
                VectorOutcome::WrongResult,
                format!("succeeded where the reference raises `{d}`"),
            )
        }
    };
    for ret in &req.returns {
        let got = &received[ret.name.as_str()];
        let want = match expected.get(ret.name.as_str()) {
            Some(w) => w,
            None => {
                return fail(
                    fn_name,
                    label,
                    VectorOutcome::WrongResult,
                    format!("reference produces no value for `{}`", ret.name),
                )
            }
        };
        if !got.approx_eq(want) {
            return fail(
                fn_name,
                label,
                VectorOutcome::WrongResult,
                format!("return `{}` is {got}, reference says {want}", ret.name),
            );
        }
    }
    if exec.state().observable() != oracle.state {
        return fail(
            fn_name,
            label,
            VectorOutcome::WrongResult,
            "reply values agree but the NF ended in a different state".to_string(),
        );
    }
    if exec.state().event_log.len() != oracle.events {
        return fail(
            fn_name,
            label,
            VectorOutcome::WrongResult,
            format!(
                "{} invocation(s) logged, reference logs {}",
                exec.state().event_log.len(),
                oracle.events
            ),
        );
    }
    pass(fn_name, label)
}

/// Validate one binding entry: static checks, then every vector.
#[allow(clippy::too_many_arguments)]
pub fn validate_entry(
    binding: &BindingEntry,
    entry: &CfrEntry,
    cfr: &CfrDocument,
    api: &VendorApiDoc,
    profile: &crate::nfsim::VendorProfile,
    vectors: &[TestVector],
    encoding: &dyn Encoding,
    now_ms: i64,
) -> EntryValidation {
    let single_cfr = CfrDocument {
        source_nf: cfr.source_nf.clone(),
        dest_nf: cfr.dest_nf.clone(),
        schema_version: cfr.schema_version.clone(),
        encoding_scheme: cfr.encoding_scheme.clone(),
        entries: vec![entry.clone()],
    };
    let single_spec = BindingSpec {
        source_nf: cfr.source_nf.clone(),
        dest_nf: cfr.dest_nf.clone(),
        schema_version: SCHEMA_VERSION.to_string(),
        encoding_scheme: cfr.encoding_scheme.clone(),
        bindings: vec![binding.clone()],
    };
    let static_issues = static_check(&single_spec, &single_cfr, api);
    if !static_issues.is_empty() {
        return EntryValidation {
            static_issues,
            report: TestReport::default(),
        };
    }
    let results = vectors
        .iter()
        .map(|v| run_vector(binding, entry, profile, v, encoding, now_ms))
        .collect();
    EntryValidation {
        static_issues,
        report: TestReport { results },
    }
}
