//! Invocation of vendor-shaped calls against the shared behaviors.
//!
//! The executor owns one NF's state and clock. Calls arrive in the
//! vendor's internal shape — internal function name, internal parameter
//! names, the vendor's units and types. The executor checks them strictly
//! against the variant signature, translates values into base shape using
//! the profile's recorded ground truth, runs the shared behavior, logs the
//! event, and translates results back out into vendor shape.
//!
//! Recording events in *base* shape is deliberate: a log replayed through
//! [`replay_events`] reproduces the final state without knowing anything
//! about the vendor's spelling, which is what makes replay usable as an
//! independent oracle.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::doc::{ParamSpec, SemanticType, Unit};
use crate::value::Value;

use super::catalog::{base_catalog, Behavior};
use super::clock::SimClock;
use super::state::{DomainError, EventRecord, NfState};
use super::units;
use super::variant::{FunctionTruth, VendorProfile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExecError {
    #[error("unknown internal function `{0}`")]
    UnknownFunction(String),
    #[error("bad arguments: {0}")]
    BadArguments(String),
    #[error("cannot translate `{field}`: {detail}")]
    Translate { field: String, detail: String },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// One simulated NF: profile, state, clock, and the dispatch table from
/// internal function names to shared behaviors.
pub struct NfExecutor {
    profile: VendorProfile,
    rows: Vec<(FunctionTruth, Behavior)>,
    by_internal: BTreeMap<String, usize>,
    state: NfState,
    clock: SimClock,
}

impl NfExecutor {
    pub fn new(profile: VendorProfile, clock: SimClock) -> Self {
        let state = NfState::initial(profile.nf_class);
        NfExecutor::with_state(profile, clock, state)
    }

    pub fn with_state(profile: VendorProfile, clock: SimClock, state: NfState) -> Self {
        let mut rows = Vec::new();
        let mut by_internal = BTreeMap::new();
        for entry in base_catalog(profile.nf_class) {
            let truth = profile
                .truth(entry.capability.name.as_str())
                .expect("a derived profile covers its whole catalog")
                .clone();
            by_internal.insert(truth.internal_name.as_str().to_string(), rows.len());
            rows.push((truth, entry.behavior));
        }
        NfExecutor {
            profile,
            rows,
            by_internal,
            state,
            clock,
        }
    }

    pub fn profile(&self) -> &VendorProfile {
        &self.profile
    }

    pub fn state(&self) -> &NfState {
        &self.state
    }

    pub fn clock(&self) -> &SimClock {
        &self.clock
    }

    /// A pristine twin of this NF on its own clock. Oracles run expected
    /// computations here so the executor under test is never consulted
    /// about its own correctness.
    pub fn fork_initial(&self, clock: SimClock) -> NfExecutor {
        NfExecutor::new(self.profile.clone(), clock)
    }

    /// Invoke an internal function with vendor-shaped arguments.
    pub fn invoke(
        &mut self,
        function: &str,
        args: &BTreeMap<String, Value>,
    ) -> Result<BTreeMap<String, Value>, ExecError> {
        let &idx = self
            .by_internal
            .get(function)
            .ok_or_else(|| ExecError::UnknownFunction(function.to_string()))?;
        let (truth, behavior) = &self.rows[idx];

        if args.len() != truth.params.len() {
            return Err(ExecError::BadArguments(format!(
                "`{function}` takes {} arguments, got {}",
                truth.params.len(),
                args.len()
            )));
        }
        let mut base_args = BTreeMap::new();
        for f in &truth.params {
            let v = args.get(f.internal.name.as_str()).ok_or_else(|| {
                ExecError::BadArguments(format!(
                    "`{function}` missing argument `{}`",
                    f.internal.name
                ))
            })?;
            if v.semantic_type() != f.internal.semantic_type {
                return Err(ExecError::BadArguments(format!(
                    "`{function}` argument `{}` is {}, expected {}",
                    f.internal.name,
                    v.semantic_type(),
                    f.internal.semantic_type
                )));
            }
            base_args.insert(f.base.name.as_str().to_string(), shift(v, &f.internal, &f.base)?);
        }

        let results = behavior(&mut self.state, &self.clock, &base_args)?;

        let seq = self.state.event_log.len() as u64;
        self.state.event_log.push(EventRecord {
            seq,
            at_ms: self.clock.now_ms(),
            function: function.to_string(),
            args: base_args,
        });

        let mut out = BTreeMap::new();
        for f in &truth.returns {
            let v = results.get(f.base.name.as_str()).ok_or_else(|| ExecError::Translate {
                field: f.base.name.as_str().to_string(),
                detail: "behavior produced no such result".to_string(),
            })?;
            out.insert(f.internal.name.as_str().to_string(), shift(v, &f.base, &f.internal)?);
        }
        Ok(out)
    }
}

fn convert_units(
    x: f64,
    from: Option<Unit>,
    to: Option<Unit>,
    field: &ParamSpec,
) -> Result<f64, ExecError> {
    match (from, to) {
        (a, b) if a == b => Ok(x),
        (Some(a), Some(b)) => units::convert(x, a, b).map_err(|e| ExecError::Translate {
            field: field.name.as_str().to_string(),
            detail: e.to_string(),
        }),
        _ => Err(ExecError::Translate {
            field: field.name.as_str().to_string(),
            detail: "unit present on only one side".to_string(),
        }),
    }
}

/// Translate one value between the two spellings of a field. Works in
/// both directions; `from` describes the value as it is, `to` what it
/// must become.
pub(crate) fn shift(v: &Value, from: &ParamSpec, to: &ParamSpec) -> Result<Value, ExecError> {
    use SemanticType::*;
    let fail = |detail: &str| ExecError::Translate {
        field: from.name.as_str().to_string(),
        detail: detail.to_string(),
    };
    match (from.semantic_type, to.semantic_type) {
        (a, b) if a == b && from.unit == to.unit => Ok(v.clone()),
        (Real, Real) => {
            let Value::Real(x) = v else {
                return Err(fail("expected a real value"));
            };
            Ok(Value::Real(convert_units(*x, from.unit, to.unit, from)?))
        }
        (Text, Real) => {
            let Value::Text(s) = v else {
                return Err(fail("expected a text value"));
            };
            let x: f64 = s
                .trim()
                .parse()
                .map_err(|_| fail(&format!("`{s}` is not a number")))?;
            Ok(Value::Real(convert_units(x, from.unit, to.unit, from)?))
        }
        (Real, Text) => {
            let Value::Real(x) = v else {
                return Err(fail("expected a real value"));
            };
            let converted = convert_units(*x, from.unit, to.unit, from)?;
            Ok(Value::Text(converted.to_string()))
        }
        (Real, Integer) => {
            let Value::Real(x) = v else {
                return Err(fail("expected a real value"));
            };
            // Half away from zero, matching the runtime's cast rule.
            Ok(Value::Integer(x.round() as i64))
        }
        (Integer, Real) => {
            let Value::Integer(x) = v else {
                return Err(fail("expected an integer value"));
            };
            Ok(Value::Real(*x as f64))
        }
        (a, b) => Err(fail(&format!("no translation from {a} to {b}"))),
    }
}

/// Rebuild final state by replaying a recorded event log against a fresh
/// initial state, at the original timestamps. Independent of vendor
/// spelling because events carry base-shaped arguments.
pub fn replay_events(
    profile: &VendorProfile,
    events: &[EventRecord],
) -> Result<NfState, ExecError> {
    let clock = SimClock::manual(0);
    let mut state = NfState::initial(profile.nf_class);
    let mut behaviors: BTreeMap<String, Behavior> = BTreeMap::new();
    for entry in base_catalog(profile.nf_class) {
        let truth = profile
            .truth(entry.capability.name.as_str())
            .expect("a derived profile covers its whole catalog");
        behaviors.insert(truth.internal_name.as_str().to_string(), entry.behavior);
    }
    for ev in events {
        clock.set_ms(ev.at_ms);
        let behavior = behaviors
            .get(&ev.function)
            .ok_or_else(|| ExecError::UnknownFunction(ev.function.clone()))?;
        behavior(&mut state, &clock, &ev.args)?;
        let seq = state.event_log.len() as u64;
        state.event_log.push(EventRecord {
            seq,
            at_ms: ev.at_ms,
            function: ev.function.clone(),
            args: ev.args.clone(),
        });
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::NfClass;
    use crate::nfsim::variant::derive_vendor_variant;

    fn args(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn reference_vendor_invokes_in_base_shape() {
        let profile = derive_vendor_variant(NfClass::WlanAp, 0);
        let mut exec = NfExecutor::new(profile, SimClock::manual(1_000));
        let out = exec
            .invoke(
                "set_channel",
                &args(&[
                    ("radio_id", Value::Text("r0".into())),
                    ("channel", Value::Integer(11)),
                ]),
            )
            .unwrap();
        assert_eq!(out["ok"], Value::Boolean(true));
        assert_eq!(exec.state().radios["r0"].channel, 11);
        assert_eq!(exec.state().event_log.len(), 1);
        assert_eq!(exec.state().event_log[0].function, "set_channel");
    }

    #[test]
    fn strictness_of_the_variant_signature() {
        let profile = derive_vendor_variant(NfClass::WlanAp, 0);
        let mut exec = NfExecutor::new(profile, SimClock::manual(0));

        let err = exec.invoke("no_such_fn", &args(&[])).unwrap_err();
        assert!(matches!(err, ExecError::UnknownFunction(_)));

        // Wrong type.
        let err = exec
            .invoke(
                "set_channel",
                &args(&[
                    ("radio_id", Value::Text("r0".into())),
                    ("channel", Value::Text("11".into())),
                ]),
            )
            .unwrap_err();
        assert!(matches!(err, ExecError::BadArguments(_)));

        // Missing and extra arguments.
        let err = exec
            .invoke("set_channel", &args(&[("radio_id", Value::Text("r0".into()))]))
            .unwrap_err();
        assert!(matches!(err, ExecError::BadArguments(_)));
        let err = exec
            .invoke(
                "set_channel",
                &args(&[
                    ("radio_id", Value::Text("r0".into())),
                    ("channel", Value::Integer(11)),
                    ("bogus", Value::Boolean(true)),
                ]),
            )
            .unwrap_err();
        assert!(matches!(err, ExecError::BadArguments(_)));

        // Nothing got logged along the way.
        assert!(exec.state().event_log.is_empty());
    }

    #[test]
    fn failed_domain_calls_do_not_reach_the_log() {
        let profile = derive_vendor_variant(NfClass::WlanAp, 0);
        let mut exec = NfExecutor::new(profile, SimClock::manual(0));
        let err = exec
            .invoke(
                "set_channel",
                &args(&[
                    ("radio_id", Value::Text("r0".into())),
                    ("channel", Value::Integer(14)), // outside the class set
                ]),
            )
            .unwrap_err();
        assert!(matches!(err, ExecError::Domain(DomainError::BadChannel(14))));
        assert!(exec.state().event_log.is_empty());
    }

    use super::super::variant::FieldTruth;

    /// Find a (seed, capability) whose internal spelling drifted in the
    /// given way; the derivation is random but spread over enough fields
    /// that every drift kind occurs somewhere in seeds 1..=5.
    fn find_drift(
        class: NfClass,
        pred: impl Fn(&FieldTruth) -> bool,
    ) -> (VendorProfile, FunctionTruth) {
        for seed in 1..=5 {
            let profile = derive_vendor_variant(class, seed);
            let found = profile
                .truths()
                .find(|t| t.params.iter().any(&pred))
                .cloned();
            if let Some(truth) = found {
                return (profile, truth);
            }
        }
        panic!("no drift found in seeds 1..=5");
    }

    #[test]
    fn unit_flipped_calls_are_behaviorally_equivalent() {
        // Find a vendor whose set_tx_power-family function takes mW.
        let (profile, truth) = find_drift(NfClass::WlanAp, |f| {
            f.base.unit == Some(Unit::Dbm) && f.internal.unit == Some(Unit::Mw)
                && f.internal.semantic_type == SemanticType::Real
        });
        let radio_field = &truth.params[0];
        let power_field = truth
            .params
            .iter()
            .find(|f| f.internal.unit == Some(Unit::Mw))
            .unwrap();

        // Variant path: pass 100 mW.
        let mut variant_exec = NfExecutor::new(profile, SimClock::manual(0));
        variant_exec
            .invoke(
                truth.internal_name.as_str(),
                &args(&[
                    (radio_field.internal.name.as_str(), Value::Text("r0".into())),
                    (power_field.internal.name.as_str(), Value::Real(100.0)),
                ]),
            )
            .unwrap();

        // Reference path: the equivalent 20 dBm.
        let reference = derive_vendor_variant(NfClass::WlanAp, 0);
        let mut base_exec = NfExecutor::new(reference, SimClock::manual(0));
        base_exec
            .invoke(
                truth.capability_name.as_str(),
                &args(&[
                    (radio_field.base.name.as_str(), Value::Text("r0".into())),
                    (power_field.base.name.as_str(), Value::Real(20.0)),
                ]),
            )
            .unwrap();

        assert_eq!(
            variant_exec.state().observable(),
            base_exec.state().observable()
        );
    }

    #[test]
    fn text_typed_numerics_parse_and_convert() {
        let (profile, truth) = find_drift(NfClass::Gnb, |f| {
            f.internal.semantic_type == SemanticType::Text
                && f.base.semantic_type == SemanticType::Real
        });
        let mut exec = NfExecutor::new(profile, SimClock::manual(0));
        let text_filler = |base: &str| match base {
            "radio_id" => "r0",
            "cell_id" => "c0",
            "target_cell" => "c1",
            "sta_id" => "sta1",
            "ue_id" => "ue1",
            "country" => "DE",
            _ => "x",
        };
        let int_filler = |base: &str| match base {
            "arfcn" => 640_000,
            "channel" => 36,
            "mhz" => 20,
            _ => 50,
        };
        let call_args: BTreeMap<String, Value> = truth
            .params
            .iter()
            .map(|f| {
                let v = match f.internal.semantic_type {
                    SemanticType::Text if f.base.semantic_type == SemanticType::Real => {
                        Value::Text("12.5".into())
                    }
                    SemanticType::Text => Value::Text(text_filler(f.base.name.as_str()).into()),
                    SemanticType::Real => Value::Real(12.5),
                    SemanticType::Integer => Value::Integer(int_filler(f.base.name.as_str())),
                    SemanticType::Boolean => Value::Boolean(true),
                    SemanticType::Timestamp => Value::Timestamp(0),
                    SemanticType::ListOfText => Value::TextList(vec![]),
                };
                (f.internal.name.as_str().to_string(), v)
            })
            .collect();
        exec.invoke(truth.internal_name.as_str(), &call_args).unwrap();
        assert_eq!(exec.state().event_log.len(), 1);
        // The logged base-shaped argument is a real, not text.
        let logged = &exec.state().event_log[0].args;
        let base_name = truth
            .params
            .iter()
            .find(|f| f.internal.semantic_type == SemanticType::Text
                && f.base.semantic_type == SemanticType::Real)
            .map(|f| f.base.name.as_str())
            .unwrap();
        assert!(matches!(logged[base_name], Value::Real(_)));
    }

    #[test]
    fn replayed_logs_rebuild_identical_state() {
        for seed in [0, 2, 4] {
            let profile = derive_vendor_variant(NfClass::Gnb, seed);
            let clock = SimClock::manual(5_000);
            let mut exec = NfExecutor::new(profile.clone(), clock.clone());

            // A short scripted session in base terms, translated to the
            // vendor's shape through the ground truth.
            let script: Vec<(&str, Vec<(&str, Value)>)> = vec![
                ("releaseUE", vec![("ue_id", Value::Text("ue2".into()))]),
                (
                    "set_scheduling_weight",
                    vec![("weight", Value::Integer(75))],
                ),
                ("restart_gnb", vec![]),
                ("get_gnb_uptime", vec![]),
            ];
            for (cap_name, base_pairs) in script {
                let truth = profile.truth(cap_name).unwrap();
                let mut call = BTreeMap::new();
                for (base_name, v) in base_pairs {
                    let f = truth
                        .params
                        .iter()
                        .find(|f| f.base.name.as_str() == base_name)
                        .unwrap();
                    let shifted = super::shift(&v, &f.base, &f.internal).unwrap();
                    call.insert(f.internal.name.as_str().to_string(), shifted);
                }
                exec.invoke(truth.internal_name.as_str(), &call).unwrap();
                clock.advance_ms(1_000);
            }

            let replayed = replay_events(&profile, &exec.state().event_log).unwrap();
            assert_eq!(&replayed, exec.state(), "seed {seed}");
        }
    }
}
