//! Synthesis of augmentation logic from structured hints.
//!
//! A hint names the *intent* ("guard this call on a freshness deadline",
//! "timestamp whatever you return"); this module translates intent into
//! concrete pipeline steps. Hint kinds outside the known set are a hard
//! error surfaced to the user — silently guessing at unfamiliar intent is
//! exactly what a generated control interface must never do.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::doc::{ControlRequirement, Identifier, SemanticType};

use super::spec::{AdaptStep, Augmentation, GuardFailPolicy};

pub const HINT_GUARD_ON_TIMESTAMP: &str = "guard_on_timestamp";
pub const HINT_TIMESTAMP_RETURNS: &str = "timestamp_returns";

#[derive(Debug, Error, PartialEq)]
pub enum AugmentError {
    #[error("unrecognized augmentation hint kind `{0}`")]
    UnrecognizedHint(String),
    #[error("malformed augmentation hint: {0}")]
    MalformedHint(String),
}

/// The synthesized augmentation plus the response-environment names it
/// binds for declared returns (relevant for enrichment: the reply map must
/// point at these).
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesizedAugmentation {
    pub augmentation: Augmentation,
    /// declared return name → response-env name bound by enrichment steps.
    pub enrich_bindings: BTreeMap<String, Identifier>,
}

/// Pick a name not yet in `taken`, register it, and return it.
fn fresh(taken: &mut BTreeSet<String>, base: &str) -> Identifier {
    let mut candidate = base.to_string();
    let mut n = 2;
    while taken.contains(&candidate) {
        candidate = format!("{base}_{n}");
        n += 1;
    }
    taken.insert(candidate.clone());
    Identifier::new(candidate).expect("generated names are valid identifiers")
}

/// Synthesize the augmentation demanded by a requirement's hint.
///
/// `call_names` / `resp_names` are the names already bound in the two
/// environments; synthesized steps register their outputs there so later
/// pipeline construction cannot collide with them. Returns None when the
/// requirement carries no hint.
pub fn synthesize_augmentation(
    req: &ControlRequirement,
    call_names: &mut BTreeSet<String>,
    resp_names: &mut BTreeSet<String>,
) -> Result<Option<SynthesizedAugmentation>, AugmentError> {
    let Some(hint) = &req.augmentation_hint else {
        return Ok(None);
    };
    match hint.kind.as_str() {
        HINT_GUARD_ON_TIMESTAMP => {
            let Some(param) = &hint.param else {
                return Err(AugmentError::MalformedHint(
                    "guard_on_timestamp needs a param".to_string(),
                ));
            };
            let spec = req.params.iter().find(|p| &p.name == param).ok_or_else(|| {
                AugmentError::MalformedHint(format!("guard param `{param}` is not a parameter"))
            })?;
            if spec.semantic_type != SemanticType::Timestamp {
                return Err(AugmentError::MalformedHint(format!(
                    "guard param `{param}` is {}, expected timestamp",
                    spec.semantic_type
                )));
            }
            let now = fresh(call_names, "guard_now");
            let ok = fresh(call_names, "guard_fresh");
            let augmentation = Augmentation::GuardBeforeInvoke {
                steps: vec![
                    AdaptStep::ClockRead { output: now.clone() },
                    AdaptStep::CompareTimestamps {
                        // Proceed while the deadline has not yet passed:
                        // deadline >= now.
                        inputs: [param.clone(), now],
                        output: ok.clone(),
                    },
                ],
                condition: ok,
                on_fail: GuardFailPolicy::RejectWithError,
            };
            Ok(Some(SynthesizedAugmentation {
                augmentation,
                enrich_bindings: BTreeMap::new(),
            }))
        }
        HINT_TIMESTAMP_RETURNS => {
            let stamped: Vec<_> = req
                .returns
                .iter()
                .filter(|r| r.semantic_type == SemanticType::Timestamp)
                .collect();
            if stamped.is_empty() {
                return Err(AugmentError::MalformedHint(
                    "timestamp_returns on a requirement with no timestamp returns".to_string(),
                ));
            }
            let mut steps = Vec::new();
            let mut enrich_bindings = BTreeMap::new();
            for r in stamped {
                let out = fresh(resp_names, &format!("{}_enriched", r.name));
                steps.push(AdaptStep::ClockRead { output: out.clone() });
                enrich_bindings.insert(r.name.as_str().to_string(), out);
            }
            Ok(Some(SynthesizedAugmentation {
                augmentation: Augmentation::EnrichResponse { steps },
                enrich_bindings,
            }))
        }
        other => Err(AugmentError::UnrecognizedHint(other.to_string())),
    }
}

/// Whether a hint kind is one this implementation can synthesize.
pub fn hint_is_known(kind: &str) -> bool {
    matches!(kind, HINT_GUARD_ON_TIMESTAMP | HINT_TIMESTAMP_RETURNS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{AugmentationHint, ParamSpec};

    fn guard_req() -> ControlRequirement {
        ControlRequirement {
            name: Identifier::new("aoi_rate").unwrap(),
            description: "Set rate unless the deadline passed.".to_string(),
            params: vec![
                ParamSpec::new("radio_id", SemanticType::Text),
                ParamSpec::new("rate", SemanticType::Real),
                ParamSpec::new("deadline", SemanticType::Timestamp),
            ],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: Some(AugmentationHint {
                kind: HINT_GUARD_ON_TIMESTAMP.to_string(),
                param: Some(Identifier::new("deadline").unwrap()),
            }),
        }
    }

    fn names(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn guard_hint_builds_clock_compare_guard() {
        let req = guard_req();
        let mut call = names(&["radio_id", "rate", "deadline"]);
        let mut resp = names(&["ok"]);
        let synth = synthesize_augmentation(&req, &mut call, &mut resp)
            .unwrap()
            .unwrap();
        match synth.augmentation {
            Augmentation::GuardBeforeInvoke { steps, condition, .. } => {
                assert_eq!(steps.len(), 2);
                assert!(matches!(steps[0], AdaptStep::ClockRead { .. }));
                match &steps[1] {
                    AdaptStep::CompareTimestamps { inputs, output } => {
                        assert_eq!(inputs[0].as_str(), "deadline");
                        assert_eq!(output, &condition);
                    }
                    other => panic!("unexpected step {other:?}"),
                }
            }
            other => panic!("unexpected augmentation {other:?}"),
        }
        assert!(synth.enrich_bindings.is_empty());
        // The synthesized names were registered.
        assert!(call.contains("guard_now"));
        assert!(call.contains("guard_fresh"));
    }

    #[test]
    fn guard_fresh_names_dodge_collisions() {
        let mut req = guard_req();
        req.params.push(ParamSpec::new("guard_now", SemanticType::Text));
        let mut call = names(&["radio_id", "rate", "deadline", "guard_now"]);
        let mut resp = BTreeSet::new();
        let synth = synthesize_augmentation(&req, &mut call, &mut resp)
            .unwrap()
            .unwrap();
        match synth.augmentation {
            Augmentation::GuardBeforeInvoke { steps, .. } => match &steps[0] {
                AdaptStep::ClockRead { output } => assert_eq!(output.as_str(), "guard_now_2"),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn timestamp_returns_hint_binds_enrichment() {
        let req = ControlRequirement {
            name: Identifier::new("stamped_stats").unwrap(),
            description: "Stats with a timestamp.".to_string(),
            params: vec![ParamSpec::new("ue_id", SemanticType::Text)],
            returns: vec![
                ParamSpec::new("dl_rate", SemanticType::Real),
                ParamSpec::new("timestamp", SemanticType::Timestamp),
            ],
            augmentation_hint: Some(AugmentationHint {
                kind: HINT_TIMESTAMP_RETURNS.to_string(),
                param: None,
            }),
        };
        let mut call = names(&["ue_id"]);
        let mut resp = names(&["dl", "ul"]);
        let synth = synthesize_augmentation(&req, &mut call, &mut resp)
            .unwrap()
            .unwrap();
        assert_eq!(synth.enrich_bindings.len(), 1);
        let bound = synth.enrich_bindings.get("timestamp").unwrap();
        assert_eq!(bound.as_str(), "timestamp_enriched");
        match synth.augmentation {
            Augmentation::EnrichResponse { steps } => assert_eq!(steps.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_hint_kind_is_an_error() {
        let mut req = guard_req();
        req.augmentation_hint = Some(AugmentationHint {
            kind: "multi_threaded_polling".to_string(),
            param: None,
        });
        let err = synthesize_augmentation(&req, &mut BTreeSet::new(), &mut BTreeSet::new())
            .unwrap_err();
        assert_eq!(
            err,
            AugmentError::UnrecognizedHint("multi_threaded_polling".to_string())
        );
        assert!(!hint_is_known("multi_threaded_polling"));
        assert!(hint_is_known(HINT_GUARD_ON_TIMESTAMP));
    }

    #[test]
    fn guard_on_non_timestamp_param_is_malformed() {
        let mut req = guard_req();
        req.augmentation_hint = Some(AugmentationHint {
            kind: HINT_GUARD_ON_TIMESTAMP.to_string(),
            param: Some(Identifier::new("rate").unwrap()),
        });
        let err = synthesize_augmentation(&req, &mut BTreeSet::new(), &mut BTreeSet::new())
            .unwrap_err();
        assert!(matches!(err, AugmentError::MalformedHint(_)));
    }
}
