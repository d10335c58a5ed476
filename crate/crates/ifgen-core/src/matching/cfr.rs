//! CFR assembly: turn per-requirement classifications into the document
//! sent to the destination NF, negotiate the encoding, derive the client
//! view, and drive a whole matching session.

use serde::{Deserialize, Serialize};

use crate::doc::{
    render_signature, CapabilityDocument, CfrDocument, CfrEntry, ControlRequirement, Identifier,
    MatchKind, ParamSpec, RequirementSet, SCHEMA_VERSION,
};
use crate::gen::{PriceTable, TextBackend};
use crate::metrics::{BenchTask, MetricsRecord};

use super::classify::{
    classify_with_table, MatchDecision, MatchError, MatchOutcome, MatchingThresholds,
};
use super::synonyms::SynonymTable;

/// Pick the first encoding the source prefers that the destination
/// supports.
pub fn negotiate_encoding(
    source_pref: &[String],
    dest_supported: &[String],
) -> Result<String, MatchError> {
    source_pref
        .iter()
        .find(|e| dest_supported.contains(e))
        .cloned()
        .ok_or_else(|| MatchError::NoCommonEncoding {
            source_pref: source_pref.to_vec(),
            dest_supported: dest_supported.to_vec(),
        })
}

/// Assemble the CFR document from classification outcomes.
///
/// One entry per supported outcome, in requirement order. A closest match
/// whose requirement carries an augmentation hint becomes an augmented
/// entry. Errors when nothing is supported or no encoding is shared.
pub fn build_cfr(
    source_nf: &str,
    dest: &CapabilityDocument,
    reqs: &[ControlRequirement],
    outcomes: &[MatchOutcome],
    source_encoding_pref: &[String],
) -> Result<CfrDocument, MatchError> {
    assert_eq!(
        reqs.len(),
        outcomes.len(),
        "one outcome per requirement, in order"
    );
    let encoding_scheme = negotiate_encoding(source_encoding_pref, &dest.supported_encodings)?;
    let mut entries = Vec::new();
    for (req, outcome) in reqs.iter().zip(outcomes) {
        let Some(cap_name) = &outcome.capability_name else {
            continue;
        };
        let capability = dest
            .capability(cap_name.as_str())
            .expect("outcome names a capability of the destination")
            .clone();
        let match_kind = match outcome.decision {
            MatchDecision::Exact => MatchKind::Exact,
            MatchDecision::Closest if req.augmentation_hint.is_some() => MatchKind::Augmented,
            MatchDecision::Closest => MatchKind::Closest,
            MatchDecision::Unsupported => unreachable!("unsupported has no capability"),
        };
        entries.push(CfrEntry {
            requirement: req.clone(),
            capability,
            match_kind,
            score: outcome.score,
            notes: outcome.rationale.clone(),
        });
    }
    if entries.is_empty() {
        return Err(MatchError::AllUnsupported);
    }
    let cfr = CfrDocument {
        source_nf: source_nf.to_string(),
        dest_nf: dest.nf_id.clone(),
        schema_version: SCHEMA_VERSION.to_string(),
        encoding_scheme,
        entries,
    };
    crate::doc::ensure_valid_cfr(&cfr)?;
    Ok(cfr)
}

/// One callable function on the generated client.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientFunction {
    pub name: Identifier,
    pub params: Vec<ParamSpec>,
    pub returns: Vec<ParamSpec>,
}

/// What the source side needs to drive the generated interface: where to
/// connect, how to encode, and the callable surface (one function per CFR
/// entry, under the requirement's own name and signature).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientSpec {
    pub dest_endpoint: String,
    pub encoding_scheme: String,
    pub functions: Vec<ClientFunction>,
}

pub fn derive_client_spec(cfr: &CfrDocument, dest_endpoint: &str) -> ClientSpec {
    ClientSpec {
        dest_endpoint: dest_endpoint.to_string(),
        encoding_scheme: cfr.encoding_scheme.clone(),
        functions: cfr
            .entries
            .iter()
            .map(|e| ClientFunction {
                name: e.requirement.name.clone(),
                params: e.requirement.params.clone(),
                returns: e.requirement.returns.clone(),
            })
            .collect(),
    }
}

/// Human-readable session report: one signature line per requirement with
/// the matched capability (or `none`), plus the decision.
pub fn render_match_report(reqs: &[ControlRequirement], outcomes: &[MatchOutcome]) -> String {
    let mut out = String::new();
    for (req, outcome) in reqs.iter().zip(outcomes) {
        let matched = outcome.capability_name.as_ref().map(|n| n.as_str());
        out.push_str(&render_signature(req, matched));
        out.push_str(&format!(
            "\n    [{} score {:.3} attempts {}]\n",
            outcome.decision, outcome.score, outcome.attempts
        ));
    }
    out
}

/// Everything a completed matching session produces.
#[derive(Debug, Clone)]
pub struct MatchingSessionOutput {
    pub cfr: CfrDocument,
    pub outcomes: Vec<MatchOutcome>,
    pub records: Vec<MetricsRecord>,
}

/// Classify every requirement in order against the destination's
/// capability document and assemble the CFR. Metrics carry one record per
/// requirement.
pub fn run_matching_session(
    source_nf: &str,
    reqs: &RequirementSet,
    dest: &CapabilityDocument,
    source_encoding_pref: &[String],
    thresholds: &MatchingThresholds,
    backend: &dyn TextBackend,
    prices: &PriceTable,
) -> Result<MatchingSessionOutput, MatchError> {
    if reqs.requirements.is_empty() {
        return Err(MatchError::EmptyRequirements);
    }
    crate::doc::ensure_valid_capability_doc(dest)?;
    crate::doc::ensure_valid_requirement_set(reqs)?;

    let table = SynonymTable::builtin();
    let price = prices
        .price_for(backend.name())
        .cloned()
        .unwrap_or(crate::gen::ModelPrice {
            input_per_mtok: rust_decimal::Decimal::ZERO,
            output_per_mtok: rust_decimal::Decimal::ZERO,
        });
    let mut outcomes = Vec::with_capacity(reqs.requirements.len());
    let mut records = Vec::with_capacity(reqs.requirements.len());
    for req in &reqs.requirements {
        let classified = classify_with_table(req, &dest.capabilities, thresholds, backend, table)?;
        records.push(MetricsRecord {
            task: BenchTask::Matching,
            subject: req.name.as_str().to_string(),
            backend: backend.name().to_string(),
            attempts: classified.outcome.attempts,
            wall_ms: classified.wall_ms,
            usage: classified.usage,
            cost: crate::gen::cost_of(&classified.usage, &price),
            success: true,
        });
        outcomes.push(classified.outcome);
    }

    let cfr = build_cfr(source_nf, dest, &reqs.requirements, &outcomes, source_encoding_pref)?;
    Ok(MatchingSessionOutput {
        cfr,
        outcomes,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{AugmentationHint, ControlCapability, NfClass, SemanticType, Unit};
    use crate::gen::MockBackend;

    fn cap(name: &str, desc: &str, params: Vec<ParamSpec>, returns: Vec<ParamSpec>) -> ControlCapability {
        ControlCapability {
            name: Identifier::new(name).unwrap(),
            description: desc.to_string(),
            params,
            returns,
            tags: vec![],
        }
    }

    fn dest() -> CapabilityDocument {
        CapabilityDocument {
            nf_id: "ap-vendor-a-1".to_string(),
            nf_class: NfClass::WlanAp,
            vendor: "vendor_a".to_string(),
            capabilities: vec![
                cap(
                    "set_channel",
                    "Sets the wireless channel of the given radio.",
                    vec![
                        ParamSpec::new("radio_id", SemanticType::Text),
                        ParamSpec::new("channel", SemanticType::Integer),
                    ],
                    vec![ParamSpec::new("ok", SemanticType::Boolean)],
                ),
                cap(
                    "set_rate",
                    "Sets the data rate limit for a station.",
                    vec![
                        ParamSpec::new("sta_id", SemanticType::Text),
                        ParamSpec::new("rate", SemanticType::Real).with_unit(Unit::Mbps),
                    ],
                    vec![ParamSpec::new("ok", SemanticType::Boolean)],
                ),
            ],
            supported_encodings: vec!["json".to_string(), "flatbin".to_string()],
        }
    }

    fn exact_req() -> ControlRequirement {
        ControlRequirement {
            name: Identifier::new("set_channel").unwrap(),
            description: "Sets the wireless channel of the given radio.".to_string(),
            params: vec![
                ParamSpec::new("radio_id", SemanticType::Text),
                ParamSpec::new("channel", SemanticType::Integer),
            ],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        }
    }

    fn aoi_req() -> ControlRequirement {
        ControlRequirement {
            name: Identifier::new("aoi_set_rate").unwrap(),
            description: "Sets the data rate limit for a station only while the \
                          request is still fresh."
                .to_string(),
            params: vec![
                ParamSpec::new("sta_id", SemanticType::Text),
                ParamSpec::new("rate", SemanticType::Real).with_unit(Unit::Mbps),
                ParamSpec::new("deadline", SemanticType::Timestamp),
            ],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: Some(AugmentationHint {
                kind: "guard_on_timestamp".to_string(),
                param: Some(Identifier::new("deadline").unwrap()),
            }),
        }
    }

    fn session(reqs: Vec<ControlRequirement>) -> Result<MatchingSessionOutput, MatchError> {
        run_matching_session(
            "controller-1",
            &RequirementSet { requirements: reqs },
            &dest(),
            &[
                "flatbin".to_string(),
                "json".to_string(),
            ],
            &MatchingThresholds::default(),
            &MockBackend::new(0, 0.0),
            &PriceTable::builtin(),
        )
    }

    #[test]
    fn exact_and_augmented_entries_assemble() {
        let out = session(vec![exact_req(), aoi_req()]).unwrap();
        assert_eq!(out.cfr.entries.len(), 2);
        assert_eq!(out.cfr.entries[0].match_kind, MatchKind::Exact);
        assert_eq!(out.cfr.entries[0].score, 1.0);
        assert_eq!(out.cfr.entries[1].match_kind, MatchKind::Augmented);
        assert_eq!(out.cfr.entries[1].capability.name.as_str(), "set_rate");
        assert_eq!(out.cfr.encoding_scheme, "flatbin");
        assert_eq!(out.records.len(), 2);
        assert!(out.records.iter().all(|r| r.attempts == 1 && r.success));
        assert!(out.records.iter().all(|r| r.cost > rust_decimal::Decimal::ZERO));
    }

    #[test]
    fn unsupported_requirements_are_skipped_but_reported() {
        let mut weird = exact_req();
        weird.name = Identifier::new("quantum_entangle_ue").unwrap();
        weird.description = "Entangle the user terminal with the paired photon sink.".to_string();
        weird.params = vec![ParamSpec::new("photon_sink", SemanticType::Text)];
        let out = session(vec![exact_req(), weird]).unwrap();
        assert_eq!(out.cfr.entries.len(), 1);
        assert_eq!(out.outcomes.len(), 2);
        assert_eq!(out.outcomes[1].decision, MatchDecision::Unsupported);
        let report = render_match_report(
            &[exact_req()],
            &out.outcomes[..1],
        );
        assert!(report.contains("func set_channel"));
        assert!(report.contains(": set_channel"));
    }

    #[test]
    fn all_unsupported_is_the_documented_error() {
        let mut weird = exact_req();
        weird.name = Identifier::new("quantum_entangle_ue").unwrap();
        weird.description = "Entangle the user terminal with the paired photon sink.".to_string();
        weird.params = vec![ParamSpec::new("photon_sink", SemanticType::Text)];
        let err = session(vec![weird]).unwrap_err();
        assert_eq!(
            err.to_string(),
            "unable to support required control functions"
        );
    }

    #[test]
    fn encoding_negotiation_follows_source_preference() {
        assert_eq!(
            negotiate_encoding(
                &["flatbin".to_string(), "json".to_string()],
                &["json".to_string(), "flatbin".to_string()]
            )
            .unwrap(),
            "flatbin"
        );
        assert_eq!(
            negotiate_encoding(&["flatbin".to_string(), "json".to_string()], &["json".to_string()])
                .unwrap(),
            "json"
        );
        assert!(negotiate_encoding(&["flatbin".to_string()], &["json".to_string()]).is_err());
    }

    #[test]
    fn client_spec_mirrors_cfr_entries() {
        let out = session(vec![exact_req(), aoi_req()]).unwrap();
        let spec = derive_client_spec(&out.cfr, "127.0.0.1:7800");
        assert_eq!(spec.functions.len(), out.cfr.entries.len());
        assert_eq!(spec.functions[0].name.as_str(), "set_channel");
        assert_eq!(spec.functions[1].name.as_str(), "aoi_set_rate");
        assert_eq!(spec.functions[1].params.len(), 3);
        assert_eq!(spec.encoding_scheme, out.cfr.encoding_scheme);
    }

    #[test]
    fn two_runs_produce_identical_cfr_bytes() {
        let a = session(vec![exact_req(), aoi_req()]).unwrap();
        let b = session(vec![exact_req(), aoi_req()]).unwrap();
        assert_eq!(
            crate::doc::canonical_json(&a.cfr),
            crate::doc::canonical_json(&b.cfr)
        );
        assert_eq!(a.records, b.records);
    }
}
