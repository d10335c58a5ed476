//! The deterministic mock backend.
//!
//! Responses are a pure function of (request, seed): the mock parses the
//! task envelope out of the prompt and applies the reference rules — top
//! candidate confirmation for matching, reference binding inference for
//! code generation. Fault injection sabotages binding responses with
//! probability `fault_rate^attempt`, drawing from a generator keyed on
//! (seed, function, attempt) so a repaired retry of the same entry sees an
//! independent draw while a rerun of the whole benchmark sees identical
//! ones. The exponent models repair feedback actually helping: retries get
//! cleaner, except at `fault_rate` 1.0 where every attempt stays broken and
//! the repair loop must exhaust.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codegen::infer::infer_entry_binding;
use crate::codegen::spec::{AdaptStep, BindingEntry};
use crate::doc::{ControlCapability, ControlRequirement, Identifier};
use crate::matching::score::score_pair;
use crate::matching::synonyms::SynonymTable;
use crate::value::Value;

use super::backend::{
    estimate_tokens, GenError, GenerationRequest, GenerationResponse, TextBackend, TokenUsage,
};
use super::task::{BindingGenTask, TaskEnvelope};

pub struct MockBackend {
    seed: u64,
    fault_rate: f64,
}

impl MockBackend {
    pub fn new(seed: u64, fault_rate: f64) -> Self {
        MockBackend { seed, fault_rate }
    }

    fn respond(&self, envelope: &TaskEnvelope) -> String {
        match envelope {
            TaskEnvelope::MatchConfirm(task) => {
                let pick = task
                    .candidates
                    .first()
                    .filter(|c| c.score >= task.closest_floor)
                    .map_or("none", |c| c.name.as_str());
                serde_json::json!({ "match": pick }).to_string()
            }
            TaskEnvelope::BindingGen(task) => self.respond_binding(task),
        }
    }

    fn respond_binding(&self, task: &BindingGenTask) -> String {
        // Bind whichever candidate best implements the confirmed
        // capability's contract. Retrieval ranks by the *requirement*
        // phrasing, which near-synonym siblings (rate vs. rate limit) can
        // win; the capability named in the prompt is the authority on
        // semantics, and reading it is what separates a competent
        // generator from a lexical one.
        let Some(best) = implementing_candidate(task) else {
            return serde_json::json!({
                "error": "no candidate internal functions were retrieved"
            })
            .to_string();
        };
        let mut binding =
            match infer_entry_binding(&task.entry, &best.function, SynonymTable::builtin()) {
                Ok(b) => b,
                Err(e) => {
                    return serde_json::json!({
                        "error": format!("cannot construct a binding: {e}")
                    })
                    .to_string()
                }
            };

        let mut rng = self.fault_rng(task);
        let p = self.fault_rate.powi(task.attempt.max(1) as i32);
        if rng.random::<f64>() < p {
            self.sabotage(&mut binding, task, &best.function, &mut rng);
        }
        crate::doc::canonical_json(&binding)
    }

    /// Generator keyed on (seed, function name, attempt).
    fn fault_rng(&self, task: &BindingGenTask) -> ChaCha8Rng {
        let key = format!(
            "{}:{}:{}",
            self.seed,
            task.entry.requirement.name.as_str(),
            task.attempt
        );
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in key.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(h)
    }

    /// Deliberately break a correct binding the way a model plausibly
    /// would. Preferred mode: silently omit one value-changing adaptation
    /// step (a unit conversion or a type cast) and rebind every reference
    /// to its output back onto the unconverted input — the classic
    /// "forgot to convert dBm to mW" slip. Bindings that need no such
    /// step fall back to hallucinated constants, dangling names, or a
    /// wrong target function.
    fn sabotage(
        &self,
        binding: &mut BindingEntry,
        task: &BindingGenTask,
        chosen: &crate::codegen::InternalFunction,
        rng: &mut ChaCha8Rng,
    ) {
        let is_value_changing =
            |s: &AdaptStep| matches!(s, AdaptStep::UnitConvert { .. } | AdaptStep::TypeCast { .. });
        let mut sites: Vec<(bool, usize)> = Vec::new();
        for (i, step) in binding.param_pipeline.iter().enumerate() {
            if is_value_changing(step) {
                sites.push((true, i));
            }
        }
        for (i, step) in binding.return_pipeline.iter().enumerate() {
            if is_value_changing(step) {
                sites.push((false, i));
            }
        }
        if !sites.is_empty() {
            let (in_params, idx) = sites[rng.random_range(0..sites.len())];
            let pipeline = if in_params {
                &mut binding.param_pipeline
            } else {
                &mut binding.return_pipeline
            };
            let removed = pipeline.remove(idx);
            let (from, to) = match &removed {
                AdaptStep::UnitConvert { input, output, .. }
                | AdaptStep::TypeCast { input, output, .. } => (output.clone(), input.clone()),
                _ => unreachable!("sites only hold value-changing steps"),
            };
            for step in pipeline.iter_mut().skip(idx) {
                rewrite_inputs(step, &from, &to);
            }
            let selections = if in_params {
                &mut binding.args
            } else {
                &mut binding.reply
            };
            for v in selections.values_mut() {
                if *v == from {
                    *v = to.clone();
                }
            }
            return;
        }
        self.sabotage_fallback(binding, task, chosen, rng);
    }

    fn sabotage_fallback(
        &self,
        binding: &mut BindingEntry,
        task: &BindingGenTask,
        chosen: &crate::codegen::InternalFunction,
        rng: &mut ChaCha8Rng,
    ) {
        let target = chosen;
        match rng.random_range(0..3u32) {
            0 if !target.params.is_empty() => {
                // Replace one argument with a plausible-looking constant.
                let idx = rng.random_range(0..target.params.len());
                let param = &target.params[idx];
                let value = match param.semantic_type {
                    crate::doc::SemanticType::Text => Value::Text("default0".to_string()),
                    crate::doc::SemanticType::Integer => Value::Integer(7777),
                    crate::doc::SemanticType::Real => Value::Real(777.5),
                    crate::doc::SemanticType::Boolean => Value::Boolean(false),
                    crate::doc::SemanticType::Timestamp => Value::Timestamp(0),
                    crate::doc::SemanticType::ListOfText => {
                        Value::TextList(vec!["default0".to_string()])
                    }
                };
                let fabricated = Identifier::new("fabricated_arg").unwrap();
                binding.param_pipeline.push(AdaptStep::Constant {
                    output: fabricated.clone(),
                    value,
                    unit: param.unit,
                });
                binding
                    .args
                    .insert(param.name.as_str().to_string(), fabricated);
            }
            1 => {
                // Point some argument (or reply) at a name nobody bound.
                let ghost = Identifier::new("hallucinated_name").unwrap();
                if let Some(key) = binding.args.keys().next().cloned() {
                    binding.args.insert(key, ghost);
                } else if let Some(key) = binding.reply.keys().next().cloned() {
                    binding.reply.insert(key, ghost);
                } else {
                    binding.target = ghost;
                }
            }
            _ => {
                // Target some other retrieved function, or a
                // fabrication when there is no other.
                let other = task
                    .candidates
                    .iter()
                    .find(|c| c.function.name != chosen.name);
                binding.target = match other {
                    Some(c) => c.function.name.clone(),
                    None => Identifier::new("no_such_function").unwrap(),
                };
            }
        }
    }
}

/// The candidate whose name, signature, and description sit closest to
/// the capability the CFR entry confirmed — scored with the same blended
/// rule the matching agent uses, tie broken by candidate order.
fn implementing_candidate(task: &BindingGenTask) -> Option<&super::task::ScoredInternal> {
    let cap = &task.entry.capability;
    let contract = ControlRequirement {
        name: cap.name.clone(),
        description: cap.description.clone(),
        params: cap.params.clone(),
        returns: cap.returns.clone(),
        augmentation_hint: None,
    };
    let table = SynonymTable::builtin();
    let mut best: Option<(f64, &super::task::ScoredInternal)> = None;
    for c in &task.candidates {
        let view = ControlCapability {
            name: c.function.name.clone(),
            description: c.function.description.clone(),
            params: c.function.params.clone(),
            returns: c.function.returns.clone(),
            tags: vec![],
        };
        let score = score_pair(&contract, &view, table).total;
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, c));
        }
    }
    best.map(|(_, c)| c)
}

fn rewrite_inputs(step: &mut AdaptStep, from: &Identifier, to: &Identifier) {
    match step {
        AdaptStep::Rename { input, .. }
        | AdaptStep::UnitConvert { input, .. }
        | AdaptStep::TypeCast { input, .. } => {
            if input == from {
                *input = to.clone();
            }
        }
        AdaptStep::CompareTimestamps { inputs, .. } => {
            for i in inputs.iter_mut() {
                if i == from {
                    *i = to.clone();
                }
            }
        }
        AdaptStep::Constant { .. } | AdaptStep::ClockRead { .. } => {}
    }
}

impl TextBackend for MockBackend {
    fn name(&self) -> &str {
        "mock"
    }

    fn generate(&self, req: &GenerationRequest) -> Result<GenerationResponse, GenError> {
        let envelope = super::task::extract_task(&req.user)?;
        let text = self.respond(&envelope);
        let usage = TokenUsage {
            input_tokens: estimate_tokens(&req.system) + estimate_tokens(&req.user),
            output_tokens: estimate_tokens(&text),
        };
        // Synthetic but deterministic: proportional to work a real model
        // would do, so benchmark timings are stable run to run.
        let latency_ms = 10 + usage.input_tokens / 40 + usage.output_tokens / 4;
        Ok(GenerationResponse {
            text,
            usage,
            latency_ms,
        })
    }
}
