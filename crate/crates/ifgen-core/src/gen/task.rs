//! The machine-readable task envelope embedded in agent prompts.
//!
//! Every prompt an agent builds carries, below its human-readable body, a
//! fenced canonical-JSON envelope stating the decision being asked for and
//! the structured inputs to it. A remote model reads the body; the
//! deterministic mock backend parses the envelope and applies the reference
//! rules to the same inputs. One prompt, two kinds of reader — which is
//! what lets benchmarks run identically against either backend.

use serde::{Deserialize, Serialize};

use crate::codegen::api_doc::InternalFunction;
use crate::doc::CfrEntry;

use super::backend::GenError;

pub const TASK_BEGIN: &str = "-----BEGIN TASK-----";
pub const TASK_END: &str = "-----END TASK-----";

/// A capability or function name with its blended match score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredName {
    pub name: String,
    pub score: f64,
}

/// Confirmation task for the matching agent: given ranked candidates for
/// one requirement, answer with the confirmed capability name or "none".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchConfirmTask {
    pub requirement: String,
    /// Descending by score; ties already broken.
    pub candidates: Vec<ScoredName>,
    pub closest_floor: f64,
}

/// An internal function candidate with its score against the CFR entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredInternal {
    pub function: InternalFunction,
    pub score: f64,
}

/// Generation task for the codegen agent: emit the binding entry for one
/// CFR entry against the retrieved internal candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingGenTask {
    pub entry: CfrEntry,
    /// Descending by score; drawn from retrieved documentation chunks.
    pub candidates: Vec<ScoredInternal>,
    /// 1-based attempt counter; repair attempts increment it.
    pub attempt: u32,
    /// Failure report from the previous attempt, when repairing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum TaskEnvelope {
    MatchConfirm(MatchConfirmTask),
    BindingGen(Box<BindingGenTask>),
}

/// Append the fenced envelope to a prompt body.
pub fn embed_task(body: &str, envelope: &TaskEnvelope) -> String {
    let json = crate::doc::canonical_json(envelope);
    format!("{body}\n\n{TASK_BEGIN}\n{json}{TASK_END}\n")
}

/// Extract the envelope from a prompt.
pub fn extract_task(prompt: &str) -> Result<TaskEnvelope, GenError> {
    let start = prompt
        .find(TASK_BEGIN)
        .ok_or_else(|| GenError::Task("prompt carries no task envelope".to_string()))?;
    let after = &prompt[start + TASK_BEGIN.len()..];
    let end = after
        .find(TASK_END)
        .ok_or_else(|| GenError::Task("unterminated task envelope".to_string()))?;
    serde_json::from_str(&after[..end])
        .map_err(|e| GenError::Task(format!("malformed task envelope: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn confirm_task() -> TaskEnvelope {
        TaskEnvelope::MatchConfirm(MatchConfirmTask {
            requirement: "setpower".to_string(),
            candidates: vec![
                ScoredName {
                    name: "set_tx_power".to_string(),
                    score: 0.87,
                },
                ScoredName {
                    name: "get_tx_power".to_string(),
                    score: 0.61,
                },
            ],
            closest_floor: 0.55,
        })
    }

    #[test]
    fn embed_then_extract_round_trips() {
        let env = confirm_task();
        let prompt = embed_task("Confirm the best match for this requirement.", &env);
        assert!(prompt.contains(TASK_BEGIN));
        assert!(prompt.ends_with(&format!("{TASK_END}\n")));
        let back = extract_task(&prompt).unwrap();
        assert_eq!(env, back);
    }

    #[test]
    fn missing_envelope_is_a_task_error() {
        let err = extract_task("just a prompt").unwrap_err();
        assert!(matches!(err, GenError::Task(_)));
    }

    #[test]
    fn garbage_between_fences_is_a_task_error() {
        let prompt = format!("body\n{TASK_BEGIN}\nnot json\n{TASK_END}\n");
        assert!(matches!(extract_task(&prompt), Err(GenError::Task(_))));
    }
}
