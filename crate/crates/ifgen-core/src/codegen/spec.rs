//! The binding specification: a small declarative language describing how
//! one generated control function adapts between the agreed CFR signature
//! and a vendor's internal API.
//!
//! A binding is data, not code — the interface-server runtime interprets
//! it. That keeps generated artifacts auditable, diffable, and statically
//! checkable before anything executes.
//!
//! Execution model: two single-assignment environments of typed values.
//! The *call environment* starts with the decoded CFR parameters; guard and
//! param-pipeline steps extend it. The *response environment* starts with
//! the internal function's returns; return-pipeline and enrichment steps
//! extend it. Pipelines only compute; selection is explicit: the `args` map
//! picks each internal argument out of the call environment, and the
//! `reply` map picks each declared return out of the response environment.
//! Explicit selection avoids any need to rebind an already-taken name when
//! a value merely changes representation (`pow` in dBm to `pow` in mW).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::doc::{Identifier, SemanticType, Unit};
use crate::value::Value;

/// One adaptation step. `output` names must be fresh in their environment
/// (single assignment); `input` names must already be bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdaptStep {
    /// Bind `output` to the value of `input` unchanged.
    Rename { input: Identifier, output: Identifier },
    /// Convert a real-valued quantity between units.
    UnitConvert {
        input: Identifier,
        output: Identifier,
        from: Unit,
        to: Unit,
    },
    /// Cast between semantic types (text↔integer, text↔real, integer↔real).
    TypeCast {
        input: Identifier,
        output: Identifier,
        from: SemanticType,
        to: SemanticType,
    },
    /// Bind `output` to a literal value.
    Constant {
        output: Identifier,
        value: Value,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<Unit>,
    },
    /// Bind `output` to the current time as a timestamp.
    ClockRead { output: Identifier },
    /// Bind `output` to the boolean `inputs[0] >= inputs[1]`, both
    /// timestamps.
    CompareTimestamps {
        inputs: [Identifier; 2],
        output: Identifier,
    },
}

impl AdaptStep {
    /// The name this step binds.
    pub fn output(&self) -> &Identifier {
        match self {
            AdaptStep::Rename { output, .. }
            | AdaptStep::UnitConvert { output, .. }
            | AdaptStep::TypeCast { output, .. }
            | AdaptStep::Constant { output, .. }
            | AdaptStep::ClockRead { output }
            | AdaptStep::CompareTimestamps { output, .. } => output,
        }
    }

    /// The names this step reads.
    pub fn inputs(&self) -> Vec<&Identifier> {
        match self {
            AdaptStep::Rename { input, .. }
            | AdaptStep::UnitConvert { input, .. }
            | AdaptStep::TypeCast { input, .. } => vec![input],
            AdaptStep::Constant { .. } | AdaptStep::ClockRead { .. } => vec![],
            AdaptStep::CompareTimestamps { inputs, .. } => inputs.iter().collect(),
        }
    }
}

/// What happens when a guard condition evaluates to false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuardFailPolicy {
    /// Reply with a structured guard-rejection error; the internal function
    /// is never invoked.
    RejectWithError,
}

/// Generated logic beyond plain signature adaptation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Augmentation {
    /// Evaluate `steps` in the call environment before anything else; only
    /// proceed when `condition` (a boolean bound by the steps) holds.
    GuardBeforeInvoke {
        steps: Vec<AdaptStep>,
        condition: Identifier,
        on_fail: GuardFailPolicy,
    },
    /// Evaluate `steps` in the response environment after the return
    /// pipeline, typically to bind enrichment fields such as timestamps.
    EnrichResponse { steps: Vec<AdaptStep> },
}

/// The binding for one CFR entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingEntry {
    /// The exposed function name (equals the CFR requirement name).
    pub function: Identifier,
    /// The vendor-internal function this binding invokes.
    pub target: Identifier,
    /// Steps computing derived values in the call environment.
    pub param_pipeline: Vec<AdaptStep>,
    /// internal parameter name → call-environment name to pass.
    pub args: BTreeMap<String, Identifier>,
    /// Steps computing derived values in the response environment.
    pub return_pipeline: Vec<AdaptStep>,
    /// declared return name → response-environment name to reply with.
    pub reply: BTreeMap<String, Identifier>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<Augmentation>,
}

/// The complete generated binding for one provisioning exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingSpec {
    pub source_nf: String,
    pub dest_nf: String,
    pub schema_version: String,
    pub encoding_scheme: String,
    pub bindings: Vec<BindingEntry>,
}

impl BindingSpec {
    pub fn binding(&self, function: &str) -> Option<&BindingEntry> {
        self.bindings.iter().find(|b| b.function.as_str() == function)
    }
}
