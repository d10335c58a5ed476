//! Deterministic construction of a binding entry for a CFR entry against a
//! chosen internal function.
//!
//! This is the reference adaptation rule: given the two signatures and the
//! synonym table, assign each internal parameter the most name-similar
//! compatible CFR parameter, build the cast/convert chain between their
//! representations, and mirror the process for returns. The deterministic
//! mock backend emits exactly this construction (optionally sabotaged for
//! fault injection), which is what makes benchmark runs reproducible.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::doc::{CfrEntry, Identifier, ParamSpec, SemanticType, Unit};
use crate::matching::score::params_compatible;
use crate::matching::synonyms::SynonymTable;
use crate::matching::tokens::name_similarity;

use super::api_doc::InternalFunction;
use super::augment::{synthesize_augmentation, AugmentError, HINT_GUARD_ON_TIMESTAMP};
use super::spec::{AdaptStep, BindingEntry};

#[derive(Debug, Error, PartialEq)]
pub enum InferError {
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error("no CFR parameter can satisfy internal param `{internal}` of `{target}`")]
    NoParamPath { target: String, internal: String },
    #[error("no internal return can satisfy declared return `{ret}`")]
    NoReturnPath { ret: String },
}

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

fn unit_suffix(unit: Unit) -> &'static str {
    match unit {
        Unit::Dbm => "dbm",
        Unit::Mw => "mw",
        Unit::Mbps => "mbps",
        Unit::Kbps => "kbps",
        Unit::Ms => "ms",
        Unit::S => "s",
        Unit::Unitless => "unitless",
    }
}

fn type_suffix(t: SemanticType) -> &'static str {
    match t {
        SemanticType::Text => "text",
        SemanticType::Integer => "int",
        SemanticType::Real => "real",
        SemanticType::Boolean => "bool",
        SemanticType::Timestamp => "ts",
        SemanticType::ListOfText => "list",
    }
}

/// Build the cast/convert chain carrying `source` (already bound in the
/// environment) to the wanted type and unit. Returns the environment name
/// holding the adapted value; steps are appended in evaluation order.
/// Returns None when no legal chain exists.
fn adapt_chain(
    source: &ParamSpec,
    want_type: SemanticType,
    want_unit: Option<Unit>,
    taken: &mut BTreeSet<String>,
    steps: &mut Vec<AdaptStep>,
) -> Option<Identifier> {
    let mut cur_name = source.name.clone();
    let mut cur_type = source.semantic_type;
    let cur_unit = source.unit;

    if cur_unit != want_unit {
        // Only real-typed values convert; cast into real first if needed.
        let (Some(from), Some(to)) = (cur_unit, want_unit) else {
            return None;
        };
        if !crate::nfsim::units::convertible(from, to) {
            return None;
        }
        if cur_type != SemanticType::Real {
            if !super::check::cast_allowed(cur_type, SemanticType::Real) {
                return None;
            }
            let out = fresh(taken, &format!("{cur_name}_real"));
            steps.push(AdaptStep::TypeCast {
                input: cur_name,
                output: out.clone(),
                from: cur_type,
                to: SemanticType::Real,
            });
            cur_name = out;
            cur_type = SemanticType::Real;
        }
        let out = fresh(taken, &format!("{}_{}", cur_name, unit_suffix(to)));
        steps.push(AdaptStep::UnitConvert {
            input: cur_name,
            output: out.clone(),
            from,
            to,
        });
        cur_name = out;
    }

    if cur_type != want_type {
        if !super::check::cast_allowed(cur_type, want_type) {
            return None;
        }
        let out = fresh(taken, &format!("{}_{}", cur_name, type_suffix(want_type)));
        steps.push(AdaptStep::TypeCast {
            input: cur_name,
            output: out.clone(),
            from: cur_type,
            to: want_type,
        });
        cur_name = out;
    }
    Some(cur_name)
}

/// Greedily pick, for each wanted field, the most name-similar compatible
/// source field; returns indices into `sources`.
pub(crate) fn assign_sources(
    wanted: &[ParamSpec],
    sources: &[ParamSpec],
    reserved: &BTreeSet<String>,
    table: &SynonymTable,
) -> Vec<Option<usize>> {
    let mut used = vec![false; sources.len()];
    wanted
        .iter()
        .map(|w| {
            let mut best: Option<(usize, f64)> = None;
            for (i, s) in sources.iter().enumerate() {
                if used[i] || reserved.contains(s.name.as_str()) {
                    continue;
                }
                if !params_compatible(s, w) {
                    continue;
                }
                let sim = name_similarity(s.name.as_str(), w.name.as_str(), table);
                if best.is_none_or(|(_, score)| sim > score) {
                    best = Some((i, sim));
                }
            }
            best.map(|(i, _)| {
                used[i] = true;
                i
            })
        })
        .collect()
}

/// Construct the binding for one CFR entry targeting `target`.
pub fn infer_entry_binding(
    entry: &CfrEntry,
    target: &InternalFunction,
    table: &SynonymTable,
) -> Result<BindingEntry, InferError> {
    let req = &entry.requirement;
    let mut call_names: BTreeSet<String> =
        req.params.iter().map(|p| p.name.as_str().to_string()).collect();
    let mut resp_names: BTreeSet<String> = target
        .returns
        .iter()
        .map(|r| r.name.as_str().to_string())
        .collect();

    let synth = synthesize_augmentation(req, &mut call_names, &mut resp_names)?;

    // A guarded timestamp param belongs to the guard, not the invocation.
    let mut reserved = BTreeSet::new();
    if let Some(hint) = &req.augmentation_hint {
        if hint.kind == HINT_GUARD_ON_TIMESTAMP {
            if let Some(p) = &hint.param {
                reserved.insert(p.as_str().to_string());
            }
        }
    }

    let mut param_pipeline = Vec::new();
    let mut args = BTreeMap::new();
    let assignment = assign_sources(&target.params, &req.params, &reserved, table);
    for (ip, source_idx) in target.params.iter().zip(&assignment) {
        let source = source_idx.map(|i| &req.params[i]).ok_or_else(|| {
            InferError::NoParamPath {
                target: target.name.as_str().to_string(),
                internal: ip.name.as_str().to_string(),
            }
        })?;
        let env_name = adapt_chain(
            source,
            ip.semantic_type,
            ip.unit,
            &mut call_names,
            &mut param_pipeline,
        )
        .ok_or_else(|| InferError::NoParamPath {
            target: target.name.as_str().to_string(),
            internal: ip.name.as_str().to_string(),
        })?;
        args.insert(ip.name.as_str().to_string(), env_name);
    }

    let mut return_pipeline = Vec::new();
    let mut reply = BTreeMap::new();
    let enrich_bindings = synth
        .as_ref()
        .map(|s| s.enrich_bindings.clone())
        .unwrap_or_default();
    // Returns covered by enrichment come from the augmentation steps; the
    // rest map from the internal function's returns.
    let pending: Vec<&ParamSpec> = req
        .returns
        .iter()
        .filter(|r| !enrich_bindings.contains_key(r.name.as_str()))
        .collect();
    let pending_specs: Vec<ParamSpec> = pending.iter().map(|r| (*r).clone()).collect();
    let ret_assignment = assign_sources(&pending_specs, &target.returns, &BTreeSet::new(), table);
    for (rr, source_idx) in pending.iter().zip(&ret_assignment) {
        let source = source_idx.map(|i| &target.returns[i]).ok_or_else(|| {
            InferError::NoReturnPath {
                ret: rr.name.as_str().to_string(),
            }
        })?;
        let env_name = adapt_chain(
            source,
            rr.semantic_type,
            rr.unit,
            &mut resp_names,
            &mut return_pipeline,
        )
        .ok_or_else(|| InferError::NoReturnPath {
            ret: rr.name.as_str().to_string(),
        })?;
        reply.insert(rr.name.as_str().to_string(), env_name);
    }
    for (ret_name, env_name) in enrich_bindings {
        reply.insert(ret_name, env_name);
    }

    Ok(BindingEntry {
        function: req.name.clone(),
        target: target.name.clone(),
        param_pipeline,
        args,
        return_pipeline,
        reply,
        augmentation: synth.map(|s| s.augmentation),
    })
}
