//! Requirement classification: rank capabilities, let the text backend
//! confirm (or override) the top pick, and decide exact / closest /
//! unsupported against the thresholds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{ControlCapability, ControlRequirement, Identifier};
use crate::gen::{
    embed_task, GenError, GenerationRequest, MatchConfirmTask, ScoredName, TaskEnvelope,
    TextBackend, TokenUsage,
};

use super::score::rank_candidates;
use super::synonyms::SynonymTable;

/// How many ranked candidates the backend sees.
pub const RETRIEVE_K: usize = 3;
/// Bound on confirmation calls per requirement.
pub const MAX_CLASSIFY_ATTEMPTS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingThresholds {
    /// At or above this (with a fully compatible signature) a match is exact.
    pub exact_floor: f64,
    /// Below this no capability is offered at all.
    pub closest_floor: f64,
}

impl Default for MatchingThresholds {
    fn default() -> Self {
        MatchingThresholds {
            exact_floor: 0.90,
            closest_floor: 0.55,
        }
    }
}

impl MatchingThresholds {
    pub fn validate(&self) -> Result<(), MatchError> {
        if self.closest_floor > 0.0
            && self.closest_floor < self.exact_floor
            && self.exact_floor <= 1.0
        {
            Ok(())
        } else {
            Err(MatchError::BadThresholds {
                exact_floor: self.exact_floor,
                closest_floor: self.closest_floor,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchDecision {
    Exact,
    Closest,
    Unsupported,
}

impl std::fmt::Display for MatchDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatchDecision::Exact => "exact",
            MatchDecision::Closest => "closest",
            MatchDecision::Unsupported => "unsupported",
        })
    }
}

/// The classification verdict for one requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub requirement_name: Identifier,
    pub decision: MatchDecision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capability_name: Option<Identifier>,
    pub score: f64,
    pub rationale: String,
    /// Confirmation calls made; at least 1.
    pub attempts: u32,
}

/// A classification plus what it cost to produce.
#[derive(Debug, Clone, PartialEq)]
pub struct Classified {
    pub outcome: MatchOutcome,
    pub usage: TokenUsage,
    pub wall_ms: u64,
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("capability document has no capabilities")]
    EmptyCapabilities,
    #[error("requirement set is empty")]
    EmptyRequirements,
    #[error(
        "invalid thresholds: need 0 < closest_floor ({closest_floor}) < exact_floor \
         ({exact_floor}) <= 1"
    )]
    BadThresholds { exact_floor: f64, closest_floor: f64 },
    #[error("unable to support required control functions")]
    AllUnsupported,
    #[error(
        "no common encoding between source preference {source_pref:?} and destination \
         {dest_supported:?}"
    )]
    NoCommonEncoding {
        source_pref: Vec<String>,
        dest_supported: Vec<String>,
    },
    #[error(transparent)]
    Backend(#[from] GenError),
    #[error("invalid document: {0}")]
    Document(#[from] crate::doc::DocError),
}

const CONFIRM_SYSTEM: &str = "You match control-function requirements against the capabilities \
of a network function. Given one requirement and a ranked list of candidate capabilities, \
answer with a single JSON object {\"match\": \"<capability-name>\"} naming the best candidate, \
or {\"match\": \"none\"} if no candidate provides the required control function. Output the \
JSON object and nothing else.";

fn confirm_prompt(
    req: &ControlRequirement,
    candidates: &[&ControlCapability],
    scores: &[f64],
    closest_floor: f64,
) -> GenerationRequest {
    let mut body = String::new();
    body.push_str("Requirement:\n");
    body.push_str(&crate::doc::render_signature(req, None));
    body.push_str("\n\nCandidate capabilities, best first:\n");
    for (cap, score) in candidates.iter().zip(scores) {
        body.push_str(&format!(
            "- {} (score {:.3}): {}\n",
            cap.name.as_str(),
            score,
            cap.description
        ));
    }
    body.push_str(&format!(
        "\nAnswer {{\"match\": \"<name>\"}} using one of the names above, or \
         {{\"match\": \"none\"}} if none reaches usefulness (guide: scores under {:.2} \
         rarely do).",
        closest_floor
    ));
    let envelope = TaskEnvelope::MatchConfirm(MatchConfirmTask {
        requirement: req.name.as_str().to_string(),
        candidates: candidates
            .iter()
            .zip(scores)
            .map(|(cap, score)| ScoredName {
                name: cap.name.as_str().to_string(),
                score: *score,
            })
            .collect(),
        closest_floor,
    });
    GenerationRequest::new(CONFIRM_SYSTEM, embed_task(&body, &envelope))
}

/// Pull a confirmed name out of a backend response. Accepts the requested
/// JSON shape anywhere in the text, or (leniently) a bare candidate name /
/// "none". Returns None when the response names nothing in the allowed set.
fn parse_confirmation(text: &str, allowed: &[&str]) -> Option<ConfirmedPick> {
    // Preferred shape: a JSON object with a "match" key, possibly embedded
    // in surrounding prose.
    for (idx, _) in text.match_indices('{') {
        let tail = &text[idx..];
        let Some(end) = tail.find('}') else { break };
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(&tail[..=end]) {
            if let Some(name) = v.get("match").and_then(|m| m.as_str()) {
                return lookup_pick(name, allowed);
            }
        }
    }
    // Fallback: a bare name on its own.
    lookup_pick(text.trim().trim_matches('"'), allowed)
}

enum ConfirmedPick {
    Name(String),
    None,
}

fn lookup_pick(name: &str, allowed: &[&str]) -> Option<ConfirmedPick> {
    if name.eq_ignore_ascii_case("none") {
        return Some(ConfirmedPick::None);
    }
    allowed
        .iter()
        .find(|a| **a == name)
        .map(|a| ConfirmedPick::Name((*a).to_string()))
}

/// Classify one requirement against a capability document.
///
/// The top [`RETRIEVE_K`] candidates by blended score go to the backend
/// for confirmation. A response outside the candidate set triggers a
/// retry, up to [`MAX_CLASSIFY_ATTEMPTS`]; after that the score ranking
/// alone decides. The confirmed pick is then classified: fully compatible
/// signature at or above `exact_floor` is exact (score reported as 1.0),
/// at or above `closest_floor` is closest, below is unsupported.
pub fn classify(
    req: &ControlRequirement,
    capabilities: &[ControlCapability],
    thresholds: &MatchingThresholds,
    backend: &dyn TextBackend,
) -> Result<Classified, MatchError> {
    classify_with_table(req, capabilities, thresholds, backend, SynonymTable::builtin())
}

pub fn classify_with_table(
    req: &ControlRequirement,
    capabilities: &[ControlCapability],
    thresholds: &MatchingThresholds,
    backend: &dyn TextBackend,
    table: &SynonymTable,
) -> Result<Classified, MatchError> {
    thresholds.validate()?;
    if capabilities.is_empty() {
        return Err(MatchError::EmptyCapabilities);
    }

    let ranked = rank_candidates(req, capabilities, table);
    let top = &ranked[..ranked.len().min(RETRIEVE_K)];
    let candidates: Vec<&ControlCapability> = top.iter().map(|c| c.capability).collect();
    let scores: Vec<f64> = top.iter().map(|c| c.breakdown.total).collect();
    let allowed: Vec<&str> = candidates.iter().map(|c| c.name.as_str()).collect();

    let prompt = confirm_prompt(req, &candidates, &scores, thresholds.closest_floor);
    let mut usage = TokenUsage::default();
    let mut wall_ms = 0u64;
    let mut attempts = 0u32;
    let mut pick: Option<ConfirmedPick> = None;
    let mut last_error: Option<GenError> = None;
    while attempts < MAX_CLASSIFY_ATTEMPTS {
        attempts += 1;
        match backend.generate(&prompt) {
            Ok(res) => {
                usage.add(res.usage);
                wall_ms += res.latency_ms;
                last_error = None;
                if let Some(p) = parse_confirmation(&res.text, &allowed) {
                    pick = Some(p);
                    break;
                }
            }
            Err(e) => last_error = Some(e),
        }
    }
    if let Some(e) = last_error {
        return Err(MatchError::Backend(e));
    }
    // Out of retries with no usable confirmation: fall back to the score
    // ranking alone.
    let pick = pick.unwrap_or_else(|| {
        if scores[0] >= thresholds.closest_floor {
            ConfirmedPick::Name(allowed[0].to_string())
        } else {
            ConfirmedPick::None
        }
    });

    let outcome = match pick {
        ConfirmedPick::None => MatchOutcome {
            requirement_name: req.name.clone(),
            decision: MatchDecision::Unsupported,
            capability_name: None,
            score: scores[0],
            rationale: format!(
                "no candidate confirmed; best was {} at {:.3}",
                allowed[0], scores[0]
            ),
            attempts,
        },
        ConfirmedPick::Name(name) => {
            let idx = allowed.iter().position(|a| *a == name).expect("validated");
            let chosen = &top[idx];
            let score = chosen.breakdown.total;
            if chosen.exact && score >= thresholds.exact_floor {
                MatchOutcome {
                    requirement_name: req.name.clone(),
                    decision: MatchDecision::Exact,
                    capability_name: Some(chosen.capability.name.clone()),
                    score: 1.0,
                    rationale: format!("signature-compatible at {score:.3}"),
                    attempts,
                }
            } else if score >= thresholds.closest_floor {
                MatchOutcome {
                    requirement_name: req.name.clone(),
                    decision: MatchDecision::Closest,
                    capability_name: Some(chosen.capability.name.clone()),
                    score,
                    rationale: format!("closest capability at {score:.3}"),
                    attempts,
                }
            } else {
                MatchOutcome {
                    requirement_name: req.name.clone(),
                    decision: MatchDecision::Unsupported,
                    capability_name: None,
                    score,
                    rationale: format!(
                        "confirmed {} scores {score:.3}, below the usefulness floor",
                        chosen.capability.name.as_str()
                    ),
                    attempts,
                }
            }
        }
    };

    Ok(Classified {
        outcome,
        usage,
        wall_ms,
    })
}
