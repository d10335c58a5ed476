//! Static checking of a binding spec against the CFR it claims to satisfy
//! and the internal API it targets.
//!
//! The checker symbolically executes every pipeline over a typed
//! environment — names to (semantic type, unit) — enforcing single
//! assignment, definedness of references, cast/conversion legality, and
//! type agreement through the `args` and `reply` selection maps.
//! A binding that passes here can still compute the wrong value (that is
//! what test vectors are for): in particular, selections check semantic
//! type but deliberately not unit, because a missing unit conversion is a
//! value bug, not a shape bug — a dBm number fed where milliwatts belong
//! is still a real number. Static checking cannot tell a forgotten
//! conversion from a deliberately absent one; executing test vectors can.

use std::collections::BTreeMap;

use crate::doc::{CfrDocument, ParamSpec, SemanticType, Unit};
use crate::nfsim::units::convertible;

use super::api_doc::VendorApiDoc;
use super::spec::{AdaptStep, Augmentation, BindingEntry, BindingSpec};

type TypeEnv = BTreeMap<String, (SemanticType, Option<Unit>)>;

fn seed_env(fields: &[ParamSpec]) -> TypeEnv {
    fields
        .iter()
        .map(|p| (p.name.as_str().to_string(), (p.semantic_type, p.unit)))
        .collect()
}

pub(crate) fn cast_allowed(from: SemanticType, to: SemanticType) -> bool {
    use SemanticType::*;
    matches!(
        (from, to),
        (Text, Integer) | (Integer, Text) | (Text, Real) | (Real, Text) | (Integer, Real) | (Real, Integer)
    )
}

/// Symbolically apply one step, extending the environment or reporting
/// issues. `at` prefixes messages with the pipeline location.
fn walk_step(env: &mut TypeEnv, step: &AdaptStep, at: &str, issues: &mut Vec<String>) {
    // Check reads first so a broken step reports all its problems at once.
    let mut input_entry = None;
    for input in step.inputs() {
        match env.get(input.as_str()) {
            Some(e) => input_entry = Some(*e),
            None => issues.push(format!("{at}: reference to undefined name `{input}`")),
        }
    }
    let output = step.output();
    if env.contains_key(output.as_str()) {
        issues.push(format!("{at}: `{output}` is already bound (single assignment)"));
        return;
    }

    let bound: Option<(SemanticType, Option<Unit>)> = match step {
        AdaptStep::Rename { .. } => input_entry,
        AdaptStep::UnitConvert { from, to, input, .. } => {
            if !convertible(*from, *to) || *from == *to {
                issues.push(format!("{at}: no conversion from {from} to {to}"));
            }
            match input_entry {
                Some((SemanticType::Real, unit)) => {
                    if unit != Some(*from) {
                        issues.push(format!(
                            "{at}: `{input}` carries unit {}, conversion expects {from}",
                            unit.map_or("none".to_string(), |u| u.to_string())
                        ));
                    }
                    Some((SemanticType::Real, Some(*to)))
                }
                Some((other, _)) => {
                    issues.push(format!(
                        "{at}: unit conversion needs a real input, `{input}` is {other}"
                    ));
                    Some((SemanticType::Real, Some(*to)))
                }
                None => None,
            }
        }
        AdaptStep::TypeCast { from, to, input, .. } => {
            if !cast_allowed(*from, *to) {
                issues.push(format!("{at}: cast {from} -> {to} is not supported"));
            }
            match input_entry {
                Some((actual, unit)) => {
                    if actual != *from {
                        issues.push(format!(
                            "{at}: `{input}` is {actual}, cast declares from {from}"
                        ));
                    }
                    Some((*to, unit))
                }
                None => None,
            }
        }
        AdaptStep::Constant { value, unit, .. } => Some((value.semantic_type(), *unit)),
        AdaptStep::ClockRead { .. } => Some((SemanticType::Timestamp, None)),
        AdaptStep::CompareTimestamps { inputs, .. } => {
            for input in inputs {
                if let Some((t, _)) = env.get(input.as_str()) {
                    if *t != SemanticType::Timestamp {
                        issues.push(format!(
                            "{at}: `{input}` is {t}, timestamp comparison needs timestamps"
                        ));
                    }
                }
            }
            Some((SemanticType::Boolean, None))
        }
    };
    if let Some(entry) = bound {
        env.insert(output.as_str().to_string(), entry);
    }
}

/// Check a selection map: every expected field must select a bound,
/// correctly-typed environment name, and nothing else may be selected.
/// Units are deliberately not compared here — see the module docs.
fn check_selection(
    env: &TypeEnv,
    selection: &BTreeMap<String, crate::doc::Identifier>,
    expected: &[ParamSpec],
    role: &str,
    at: &str,
    issues: &mut Vec<String>,
) {
    for p in expected {
        let Some(source) = selection.get(p.name.as_str()) else {
            issues.push(format!("{at}: no selection for {role} `{}`", p.name));
            continue;
        };
        match env.get(source.as_str()) {
            None => issues.push(format!(
                "{at}: {role} `{}` selects undefined name `{source}`",
                p.name
            )),
            Some((t, _)) => {
                if *t != p.semantic_type {
                    issues.push(format!(
                        "{at}: {role} `{}` selects `{source}` of type {t}, expected {}",
                        p.name, p.semantic_type
                    ));
                }
            }
        }
    }
    for key in selection.keys() {
        if !expected.iter().any(|p| p.name.as_str() == key) {
            issues.push(format!("{at}: selection for unknown {role} `{key}`"));
        }
    }
}

fn check_entry(
    binding: &BindingEntry,
    cfr: &CfrDocument,
    api: &VendorApiDoc,
    issues: &mut Vec<String>,
) {
    let fname = binding.function.as_str();
    let entry = match cfr.entries.iter().find(|e| e.requirement.name.as_str() == fname) {
        Some(e) => e,
        None => {
            issues.push(format!("binding `{fname}` has no matching CFR entry"));
            return;
        }
    };
    let target = match api.function(binding.target.as_str()) {
        Some(f) => f,
        None => {
            issues.push(format!(
                "binding `{fname}`: target `{}` is not an internal function",
                binding.target
            ));
            return;
        }
    };

    // Augmentation must appear exactly on augmented entries.
    match (&entry.match_kind, &binding.augmentation) {
        (crate::doc::MatchKind::Augmented, None) => {
            issues.push(format!("binding `{fname}`: augmented entry without augmentation"));
        }
        (crate::doc::MatchKind::Exact | crate::doc::MatchKind::Closest, Some(_)) => {
            issues.push(format!(
                "binding `{fname}`: augmentation on a non-augmented entry"
            ));
        }
        _ => {}
    }

    // Call side: guard steps run first, then the param pipeline, over one
    // environment seeded with the requirement's params.
    let mut call_env = seed_env(&entry.requirement.params);
    if let Some(Augmentation::GuardBeforeInvoke { steps, condition, .. }) = &binding.augmentation {
        let at = format!("binding `{fname}` guard");
        for step in steps {
            walk_step(&mut call_env, step, &at, issues);
        }
        match call_env.get(condition.as_str()) {
            None => issues.push(format!("{at}: condition `{condition}` is never bound")),
            Some((SemanticType::Boolean, _)) => {}
            Some((t, _)) => issues.push(format!("{at}: condition `{condition}` is {t}, not boolean")),
        }
    }
    let at = format!("binding `{fname}` param pipeline");
    for step in &binding.param_pipeline {
        walk_step(&mut call_env, step, &at, issues);
    }
    check_selection(&call_env, &binding.args, &target.params, "internal param", &at, issues);

    // Response side: return pipeline, then enrichment, seeded with the
    // internal function's returns.
    let mut resp_env = seed_env(&target.returns);
    let at = format!("binding `{fname}` return pipeline");
    for step in &binding.return_pipeline {
        walk_step(&mut resp_env, step, &at, issues);
    }
    if let Some(Augmentation::EnrichResponse { steps }) = &binding.augmentation {
        let at = format!("binding `{fname}` enrichment");
        for step in steps {
            walk_step(&mut resp_env, step, &at, issues);
        }
    }
    check_selection(
        &resp_env,
        &binding.reply,
        &entry.requirement.returns,
        "return",
        &at,
        issues,
    );
}

/// Check a complete binding spec. Returns every violation found; an empty
/// vector means the spec is structurally sound.
pub fn static_check(spec: &BindingSpec, cfr: &CfrDocument, api: &VendorApiDoc) -> Vec<String> {
    let mut issues = Vec::new();

    if spec.encoding_scheme != cfr.encoding_scheme {
        issues.push(format!(
            "binding encodes `{}`, CFR agreed `{}`",
            spec.encoding_scheme, cfr.encoding_scheme
        ));
    }
    if let Err(e) = crate::doc::ensure_valid_cfr(cfr) {
        issues.push(format!("CFR itself is invalid: {e}"));
    }

    // Bindings and CFR entries must correspond one-to-one.
    let mut seen = std::collections::BTreeSet::new();
    for b in &spec.bindings {
        if !seen.insert(b.function.as_str().to_string()) {
            issues.push(format!("duplicate binding for `{}`", b.function));
        }
    }
    for e in &cfr.entries {
        if !seen.contains(e.requirement.name.as_str()) {
            issues.push(format!(
                "CFR entry `{}` has no binding",
                e.requirement.name
            ));
        }
    }

    for b in &spec.bindings {
        check_entry(b, cfr, api, &mut issues);
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegen::api_doc::InternalFunction;
    use crate::doc::{
        CfrEntry, ControlCapability, ControlRequirement, Identifier, MatchKind, SCHEMA_VERSION,
    };

    fn ident(s: &str) -> Identifier {
        Identifier::new(s).unwrap()
    }

    /// A minimal world: requirement `setpower(radioID text, pow real dBm)`,
    /// internal `cfgTxPwr(rid text, pwr real mW) -> status boolean`.
    fn world() -> (CfrDocument, VendorApiDoc, BindingSpec) {
        let requirement = ControlRequirement {
            name: ident("setpower"),
            description: "Set the transmission power of a radio.".to_string(),
            params: vec![
                ParamSpec::new("radioID", SemanticType::Text),
                ParamSpec::new("pow", SemanticType::Real).with_unit(Unit::Dbm),
            ],
            returns: vec![ParamSpec::new("response", SemanticType::Boolean)],
            augmentation_hint: None,
        };
        let capability = ControlCapability {
            name: ident("set_tx_power"),
            description: "Sets the transmission power of the given radio.".to_string(),
            params: requirement.params.clone(),
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            tags: vec![],
        };
        let cfr = CfrDocument {
            source_nf: "ric-0".to_string(),
            dest_nf: "ap-x".to_string(),
            schema_version: SCHEMA_VERSION.to_string(),
            encoding_scheme: "json".to_string(),
            entries: vec![CfrEntry {
                requirement,
                capability,
                match_kind: MatchKind::Closest,
                score: 0.8,
                notes: String::new(),
            }],
        };
        let api = VendorApiDoc {
            nf_id: "ap-x".to_string(),
            vendor: "x".to_string(),
            functions: vec![InternalFunction {
                name: ident("cfgTxPwr"),
                description: "Configures transmit power.".to_string(),
                params: vec![
                    ParamSpec::new("rid", SemanticType::Text),
                    ParamSpec::new("pwr", SemanticType::Real).with_unit(Unit::Mw),
                ],
                returns: vec![ParamSpec::new("status", SemanticType::Boolean)],
            }],
        };
        let spec = BindingSpec {
            source_nf: "ric-0".to_string(),
            dest_nf: "ap-x".to_string(),
            schema_version: SCHEMA_VERSION.to_string(),
            encoding_scheme: "json".to_string(),
            bindings: vec![BindingEntry {
                function: ident("setpower"),
                target: ident("cfgTxPwr"),
                param_pipeline: vec![AdaptStep::UnitConvert {
                    input: ident("pow"),
                    output: ident("pow_mw"),
                    from: Unit::Dbm,
                    to: Unit::Mw,
                }],
                args: BTreeMap::from([
                    ("rid".to_string(), ident("radioID")),
                    ("pwr".to_string(), ident("pow_mw")),
                ]),
                return_pipeline: vec![],
                reply: BTreeMap::from([("response".to_string(), ident("status"))]),
                augmentation: None,
            }],
        };
        (cfr, api, spec)
    }

    #[test]
    fn sound_binding_passes() {
        let (cfr, api, spec) = world();
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.is_empty(), "unexpected issues: {issues:?}");
    }

    #[test]
    fn undefined_reference_is_caught() {
        let (cfr, api, mut spec) = world();
        spec.bindings[0].param_pipeline[0] = AdaptStep::UnitConvert {
            input: ident("powXX"),
            output: ident("pow_mw"),
            from: Unit::Dbm,
            to: Unit::Mw,
        };
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.iter().any(|i| i.contains("undefined name `powXX`")));
    }

    #[test]
    fn double_binding_is_caught() {
        let (cfr, api, mut spec) = world();
        spec.bindings[0].param_pipeline.push(AdaptStep::Rename {
            input: ident("radioID"),
            output: ident("pow_mw"),
        });
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.iter().any(|i| i.contains("single assignment")));
    }

    #[test]
    fn missing_arg_selection_is_caught() {
        let (cfr, api, mut spec) = world();
        spec.bindings[0].args.remove("pwr");
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.iter().any(|i| i.contains("no selection for internal param `pwr`")));
    }

    #[test]
    fn wrong_unit_delivery_is_statically_clean() {
        let (cfr, api, mut spec) = world();
        // Select the raw dBm value instead of the converted one: still a
        // real number, so the checker accepts it. Test-vector execution is
        // what exposes the wrong result.
        spec.bindings[0].param_pipeline.clear();
        spec.bindings[0]
            .args
            .insert("pwr".to_string(), ident("pow"));
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.is_empty(), "got: {issues:?}");
    }

    #[test]
    fn wrong_type_delivery_is_caught() {
        let (cfr, api, mut spec) = world();
        // Select the text radio id where a real number is expected.
        spec.bindings[0].param_pipeline.clear();
        spec.bindings[0]
            .args
            .insert("pwr".to_string(), ident("radioID"));
        let issues = static_check(&spec, &cfr, &api);
        assert!(
            issues.iter().any(|i| i.contains("of type text, expected real")),
            "got: {issues:?}"
        );
    }

    #[test]
    fn unknown_target_is_caught() {
        let (cfr, api, mut spec) = world();
        spec.bindings[0].target = ident("noSuchFn");
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.iter().any(|i| i.contains("not an internal function")));
    }

    #[test]
    fn missing_and_extra_bindings_are_caught() {
        let (cfr, api, mut spec) = world();
        spec.bindings[0].function = ident("somethingElse");
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.iter().any(|i| i.contains("no matching CFR entry")));
        assert!(issues.iter().any(|i| i.contains("has no binding")));
    }

    #[test]
    fn augmentation_on_plain_entry_is_caught() {
        let (cfr, api, mut spec) = world();
        spec.bindings[0].augmentation = Some(Augmentation::EnrichResponse { steps: vec![] });
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues
            .iter()
            .any(|i| i.contains("augmentation on a non-augmented entry")));
    }

    #[test]
    fn guard_condition_must_be_boolean() {
        let (mut cfr, api, mut spec) = world();
        cfr.entries[0].match_kind = MatchKind::Augmented;
        cfr.entries[0]
            .requirement
            .params
            .push(ParamSpec::new("deadline", SemanticType::Timestamp));
        cfr.entries[0].requirement.augmentation_hint = Some(crate::doc::AugmentationHint {
            kind: "guard_on_timestamp".to_string(),
            param: Some(ident("deadline")),
        });
        spec.bindings[0].augmentation = Some(Augmentation::GuardBeforeInvoke {
            steps: vec![AdaptStep::ClockRead { output: ident("now") }],
            condition: ident("now"), // a timestamp, not a boolean
            on_fail: super::super::spec::GuardFailPolicy::RejectWithError,
        });
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.iter().any(|i| i.contains("not boolean")), "got {issues:?}");
    }

    #[test]
    fn constant_with_matching_type_and_unit_is_statically_fine() {
        // A constant can satisfy the checker while computing garbage — the
        // checker's contract is types, not values.
        let (cfr, api, mut spec) = world();
        spec.bindings[0].param_pipeline = vec![AdaptStep::Constant {
            output: ident("fixed_pwr"),
            value: crate::value::Value::Real(100.0),
            unit: Some(Unit::Mw),
        }];
        spec.bindings[0]
            .args
            .insert("pwr".to_string(), ident("fixed_pwr"));
        let issues = static_check(&spec, &cfr, &api);
        assert!(issues.is_empty(), "unexpected issues: {issues:?}");
    }
}
