//! Execution of one binding against a live NF: the engine inside every
//! generated interface server.
//!
//! A call arrives in requirement shape (the caller's view, as agreed in
//! the CFR). The runtime seeds a value environment with those parameters,
//! runs the freshness guard if the binding carries one, runs the parameter
//! pipeline, selects the internal function's arguments, invokes it through
//! the executor, then runs the return pipeline and enrichment over a
//! second environment and selects the declared reply fields.
//!
//! Guard rejections happen strictly before invocation, so a rejected call
//! leaves no trace in the NF's event log.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::codegen::spec::{AdaptStep, Augmentation, BindingEntry};
use crate::doc::SemanticType;
use crate::value::Value;

use super::clock::SimClock;
use super::executor::{ExecError, NfExecutor};
use super::units;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuntimeError {
    #[error("adaptation failed: {0}")]
    Adaptation(String),
    #[error("freshness guard rejected the call")]
    GuardRejected,
    #[error("invocation failed: {0}")]
    Invoke(String),
    #[error("{0}")]
    Domain(String),
}

impl RuntimeError {
    /// The wire-protocol error kind for this failure.
    pub fn kind(&self) -> &'static str {
        match self {
            RuntimeError::Adaptation(_) => "adaptation_error",
            RuntimeError::GuardRejected => "guard_rejected",
            RuntimeError::Invoke(_) => "invoke_error",
            RuntimeError::Domain(_) => "domain_error",
        }
    }
}

impl From<ExecError> for RuntimeError {
    fn from(e: ExecError) -> Self {
        match e {
            ExecError::Domain(d) => RuntimeError::Domain(d.to_string()),
            other => RuntimeError::Invoke(other.to_string()),
        }
    }
}

type Env = BTreeMap<String, Value>;

fn bind(env: &mut Env, name: &str, value: Value) -> Result<(), RuntimeError> {
    if env.contains_key(name) {
        return Err(RuntimeError::Adaptation(format!(
            "`{name}` is already bound (single assignment)"
        )));
    }
    env.insert(name.to_string(), value);
    Ok(())
}

fn fetch<'a>(env: &'a Env, name: &str) -> Result<&'a Value, RuntimeError> {
    env.get(name)
        .ok_or_else(|| RuntimeError::Adaptation(format!("reference to undefined name `{name}`")))
}

/// Apply one adaptation step to the environment.
fn apply_step(env: &mut Env, step: &AdaptStep, clock: &SimClock) -> Result<(), RuntimeError> {
    match step {
        AdaptStep::Rename { input, output } => {
            let v = fetch(env, input.as_str())?.clone();
            bind(env, output.as_str(), v)
        }
        AdaptStep::UnitConvert {
            input,
            output,
            from,
            to,
        } => {
            let v = fetch(env, input.as_str())?;
            let Value::Real(x) = v else {
                return Err(RuntimeError::Adaptation(format!(
                    "`{input}` is {}, unit conversion needs a real",
                    v.semantic_type()
                )));
            };
            let converted = units::convert(*x, *from, *to)
                .map_err(|e| RuntimeError::Adaptation(e.to_string()))?;
            bind(env, output.as_str(), Value::Real(converted))
        }
        AdaptStep::TypeCast {
            input,
            output,
            from,
            to,
        } => {
            let v = fetch(env, input.as_str())?;
            if v.semantic_type() != *from {
                return Err(RuntimeError::Adaptation(format!(
                    "`{input}` is {}, cast declares from {from}",
                    v.semantic_type()
                )));
            }
            let cast = cast_value(v, *to).map_err(RuntimeError::Adaptation)?;
            bind(env, output.as_str(), cast)
        }
        AdaptStep::Constant {
            output,
            value,
            unit: _,
        } => bind(env, output.as_str(), value.clone()),
        AdaptStep::ClockRead { output } => {
            bind(env, output.as_str(), Value::Timestamp(clock.now_ms()))
        }
        AdaptStep::CompareTimestamps { inputs, output } => {
            let a = fetch(env, inputs[0].as_str())?;
            let b = fetch(env, inputs[1].as_str())?;
            let (Value::Timestamp(a), Value::Timestamp(b)) = (a, b) else {
                return Err(RuntimeError::Adaptation(
                    "timestamp comparison over non-timestamps".to_string(),
                ));
            };
            let verdict = Value::Boolean(a >= b);
            bind(env, output.as_str(), verdict)
        }
    }
}

/// Value-level cast rules shared with the executor's narrowing: reals
/// round half away from zero, text parses leniently of whitespace.
pub fn cast_value(v: &Value, to: SemanticType) -> Result<Value, String> {
    use SemanticType::*;
    match (v, to) {
        (Value::Integer(x), Real) => Ok(Value::Real(*x as f64)),
        (Value::Real(x), Integer) => Ok(Value::Integer(x.round() as i64)),
        (Value::Integer(x), Text) => Ok(Value::Text(x.to_string())),
        (Value::Real(x), Text) => Ok(Value::Text(x.to_string())),
        (Value::Text(s), Integer) => s
            .trim()
            .parse::<i64>()
            .map(Value::Integer)
            .map_err(|_| format!("`{s}` is not an integer")),
        (Value::Text(s), Real) => s
            .trim()
            .parse::<f64>()
            .map(Value::Real)
            .map_err(|_| format!("`{s}` is not a number")),
        (v, to) => Err(format!("no cast from {} to {to}", v.semantic_type())),
    }
}

fn select(
    env: &Env,
    selection: &BTreeMap<String, crate::doc::Identifier>,
) -> Result<BTreeMap<String, Value>, RuntimeError> {
    let mut out = BTreeMap::new();
    for (field, source) in selection {
        out.insert(field.clone(), fetch(env, source.as_str())?.clone());
    }
    Ok(out)
}

/// Run one bound control function. `params` is the requirement-shaped
/// argument map the caller sent; the result is the requirement-shaped
/// reply map.
pub fn run_binding(
    binding: &BindingEntry,
    params: &BTreeMap<String, Value>,
    exec: &mut NfExecutor,
) -> Result<BTreeMap<String, Value>, RuntimeError> {
    let clock = exec.clock().clone();

    // Call-side environment: declared params, then guard, then pipeline.
    let mut call_env: Env = params.clone();
    if let Some(Augmentation::GuardBeforeInvoke {
        steps, condition, ..
    }) = &binding.augmentation
    {
        for step in steps {
            apply_step(&mut call_env, step, &clock)?;
        }
        match fetch(&call_env, condition.as_str())? {
            Value::Boolean(true) => {}
            Value::Boolean(false) => return Err(RuntimeError::GuardRejected),
            other => {
                return Err(RuntimeError::Adaptation(format!(
                    "guard condition `{condition}` is {}, not boolean",
                    other.semantic_type()
                )))
            }
        }
    }
    for step in &binding.param_pipeline {
        apply_step(&mut call_env, step, &clock)?;
    }
    let args = select(&call_env, &binding.args)?;

    let results = exec.invoke(binding.target.as_str(), &args)?;

    // Response-side environment: internal returns, pipeline, enrichment.
    let mut resp_env: Env = results;
    for step in &binding.return_pipeline {
        apply_step(&mut resp_env, step, &clock)?;
    }
    if let Some(Augmentation::EnrichResponse { steps }) = &binding.augmentation {
        for step in steps {
            apply_step(&mut resp_env, step, &clock)?;
        }
    }
    select(&resp_env, &binding.reply)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegen::spec::GuardFailPolicy;
    use crate::doc::{Identifier, NfClass, Unit};
    use crate::nfsim::variant::derive_vendor_variant;

    fn ident(s: &str) -> Identifier {
        Identifier::new(s).unwrap()
    }

    fn exec() -> NfExecutor {
        NfExecutor::new(
            derive_vendor_variant(NfClass::WlanAp, 0),
            SimClock::manual(100_000),
        )
    }

    fn vals(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    /// Requirement `setpower(radioID text, pow real dBm) -> (response
    /// boolean)` bound onto the reference `set_tx_power`.
    fn power_binding() -> BindingEntry {
        BindingEntry {
            function: ident("setpower"),
            target: ident("set_tx_power"),
            param_pipeline: vec![],
            args: BTreeMap::from([
                ("radio_id".to_string(), ident("radioID")),
                ("power".to_string(), ident("pow")),
            ]),
            return_pipeline: vec![],
            reply: BTreeMap::from([("response".to_string(), ident("ok"))]),
            augmentation: None,
        }
    }

    #[test]
    fn plain_binding_runs_end_to_end() {
        let mut exec = exec();
        let reply = run_binding(
            &power_binding(),
            &vals(&[
                ("radioID", Value::Text("r1".into())),
                ("pow", Value::Real(23.0)),
            ]),
            &mut exec,
        )
        .unwrap();
        assert_eq!(reply["response"], Value::Boolean(true));
        let expected_mw = 10f64.powf(2.3);
        assert_eq!(exec.state().radios["r1"].tx_power_mw, expected_mw);
        assert_eq!(exec.state().event_log.len(), 1);
    }

    #[test]
    fn pipelines_convert_and_cast() {
        // Requirement passes the power as text kbps-style — exercise
        // cast text->real then a unit conversion mW -> dBm is not valid
        // here; instead use rate Mbps -> internal set_rate.
        let binding = BindingEntry {
            function: ident("setrate"),
            target: ident("set_rate"),
            param_pipeline: vec![
                AdaptStep::TypeCast {
                    input: ident("rate_text"),
                    output: ident("rate_kbps"),
                    from: SemanticType::Text,
                    to: SemanticType::Real,
                },
                AdaptStep::UnitConvert {
                    input: ident("rate_kbps"),
                    output: ident("rate_mbps"),
                    from: Unit::Kbps,
                    to: Unit::Mbps,
                },
            ],
            args: BTreeMap::from([
                ("sta_id".to_string(), ident("station")),
                ("rate".to_string(), ident("rate_mbps")),
            ]),
            return_pipeline: vec![],
            reply: BTreeMap::from([("done".to_string(), ident("ok"))]),
            augmentation: None,
        };
        let mut exec = exec();
        let reply = run_binding(
            &binding,
            &vals(&[
                ("station", Value::Text("sta2".into())),
                ("rate_text", Value::Text("2500".into())),
            ]),
            &mut exec,
        )
        .unwrap();
        assert_eq!(reply["done"], Value::Boolean(true));
        assert_eq!(exec.state().sessions["sta2"].rate_kbps, 2_500.0);
    }

    fn guarded_binding() -> BindingEntry {
        let mut b = power_binding();
        b.augmentation = Some(Augmentation::GuardBeforeInvoke {
            steps: vec![
                AdaptStep::ClockRead {
                    output: ident("guard_now"),
                },
                AdaptStep::CompareTimestamps {
                    inputs: [ident("deadline"), ident("guard_now")],
                    output: ident("guard_fresh"),
                },
            ],
            condition: ident("guard_fresh"),
            on_fail: GuardFailPolicy::RejectWithError,
        });
        b
    }

    #[test]
    fn fresh_deadline_passes_the_guard() {
        let mut exec = exec();
        let reply = run_binding(
            &guarded_binding(),
            &vals(&[
                ("radioID", Value::Text("r0".into())),
                ("pow", Value::Real(17.0)),
                ("deadline", Value::Timestamp(100_001)),
            ]),
            &mut exec,
        )
        .unwrap();
        assert_eq!(reply["response"], Value::Boolean(true));
        assert_eq!(exec.state().event_log.len(), 1);
    }

    #[test]
    fn elapsed_deadline_is_rejected_without_invoking() {
        let mut exec = exec();
        let before = exec.state().clone();
        let err = run_binding(
            &guarded_binding(),
            &vals(&[
                ("radioID", Value::Text("r0".into())),
                ("pow", Value::Real(17.0)),
                ("deadline", Value::Timestamp(99_999)),
            ]),
            &mut exec,
        )
        .unwrap_err();
        assert_eq!(err, RuntimeError::GuardRejected);
        assert_eq!(err.kind(), "guard_rejected");
        // The NF was never touched: state identical, log still empty.
        assert_eq!(exec.state(), &before);
    }

    #[test]
    fn deadline_equal_to_now_still_passes() {
        let mut exec = exec();
        let reply = run_binding(
            &guarded_binding(),
            &vals(&[
                ("radioID", Value::Text("r0".into())),
                ("pow", Value::Real(17.0)),
                ("deadline", Value::Timestamp(100_000)),
            ]),
            &mut exec,
        );
        assert!(reply.is_ok());
    }

    #[test]
    fn enrichment_stamps_the_exact_clock() {
        let mut b = BindingEntry {
            function: ident("getstats"),
            target: ident("get_sta_rate_stats"),
            param_pipeline: vec![],
            args: BTreeMap::from([("sta_id".to_string(), ident("station"))]),
            return_pipeline: vec![],
            reply: BTreeMap::from([
                ("rate".to_string(), ident("rate")),
                ("updates".to_string(), ident("updates")),
                ("asof".to_string(), ident("stamp")),
            ]),
            augmentation: None,
        };
        b.augmentation = Some(Augmentation::EnrichResponse {
            steps: vec![AdaptStep::ClockRead {
                output: ident("stamp"),
            }],
        });
        let mut exec = exec();
        let reply = run_binding(
            &b,
            &vals(&[("station", Value::Text("sta1".into()))]),
            &mut exec,
        )
        .unwrap();
        assert_eq!(reply["asof"], Value::Timestamp(100_000));
    }

    #[test]
    fn adaptation_failures_carry_the_right_kind() {
        let mut b = power_binding();
        b.args.insert("power".to_string(), ident("nonexistent"));
        let err = run_binding(
            &b,
            &vals(&[
                ("radioID", Value::Text("r0".into())),
                ("pow", Value::Real(17.0)),
            ]),
            &mut exec(),
        )
        .unwrap_err();
        assert_eq!(err.kind(), "adaptation_error");
    }

    #[test]
    fn domain_rejections_carry_the_right_kind() {
        let binding = BindingEntry {
            function: ident("setchan"),
            target: ident("set_channel"),
            param_pipeline: vec![],
            args: BTreeMap::from([
                ("radio_id".to_string(), ident("radio")),
                ("channel".to_string(), ident("chan")),
            ]),
            return_pipeline: vec![],
            reply: BTreeMap::from([("ok".to_string(), ident("ok"))]),
            augmentation: None,
        };
        let err = run_binding(
            &binding,
            &vals(&[
                ("radio", Value::Text("r0".into())),
                ("chan", Value::Integer(14)),
            ]),
            &mut exec(),
        )
        .unwrap_err();
        assert_eq!(err.kind(), "domain_error");
    }

    #[test]
    fn wrong_target_is_an_invoke_error() {
        let mut b = power_binding();
        b.target = ident("no_such_function");
        let err = run_binding(
            &b,
            &vals(&[
                ("radioID", Value::Text("r0".into())),
                ("pow", Value::Real(17.0)),
            ]),
            &mut exec(),
        )
        .unwrap_err();
        assert_eq!(err.kind(), "invoke_error");
    }
}
