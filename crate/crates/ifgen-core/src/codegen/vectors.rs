//! Test-vector generation for binding validation.
//!
//! Every provisioned function gets at least three vectors: a nominal
//! call, a boundary call (zeros and empty strings in the free fields),
//! and a varied call with seeded random values — three different values
//! per free field, so a binding that hardwires a constant cannot pass
//! them all. Guarded functions additionally get an elapsed-deadline
//! vector that must be rejected without touching NF state.
//!
//! Values are domain-aware: identifier-like parameters (radio, session,
//! cell ids, country codes) and discrete tuning knobs (channels, ARFCNs,
//! bandwidths) stay pinned to known-good values in every vector, because
//! exercising the adaptation logic — not the NF's input validation — is
//! the point. Free numerics do hit validation edges at the boundary;
//! that is deliberate, since a correct binding must surface the same
//! domain error the reference path produces.
//!
//! A CFR entry may also carry source-supplied vectors in its notes field
//! (a JSON object with a `test_vectors` array); those run first.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codegen::augment::HINT_GUARD_ON_TIMESTAMP;
use crate::doc::{CfrEntry, NfClass, ParamSpec, SemanticType, Unit};
use crate::value::Value;

/// Every function is exercised by at least this many vectors.
pub const MIN_VECTORS_PER_FUNCTION: usize = 3;
/// Nominal timestamp offset: one minute into the future.
const FRESH_OFFSET_MS: i64 = 60_000;
/// Elapsed-deadline offset: one minute into the past.
const ELAPSED_OFFSET_MS: i64 = -60_000;

/// What a vector's execution is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VectorExpectation {
    /// The binding must behave exactly like the reference path: same
    /// results, same final state, same domain error if one fires.
    #[default]
    Mirror,
    /// The freshness guard must reject the call and leave no trace.
    GuardRejected,
}

/// One test call against a provisioned function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVector {
    pub label: String,
    /// Keyed by the requirement's parameter names.
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub expect: VectorExpectation,
}

/// Optional payload a source NF may embed in a CFR entry's notes.
#[derive(Debug, Deserialize)]
struct NotesPayload {
    test_vectors: Vec<TestVector>,
}

/// Vectors supplied by the source side, if the notes carry any.
pub fn vectors_from_notes(notes: &str) -> Vec<TestVector> {
    serde_json::from_str::<NotesPayload>(notes)
        .map(|p| p.test_vectors)
        .unwrap_or_default()
}

fn tokens(name: &str) -> Vec<String> {
    crate::matching::tokens::split_words(name)
}

fn has_token(toks: &[String], wanted: &[&str]) -> bool {
    toks.iter().any(|t| wanted.contains(&t.as_str()))
}

/// How a parameter is treated across vectors.
#[derive(PartialEq)]
enum FieldRole {
    /// Must stay a known-good value in every vector.
    Pinned,
    /// Gets nominal / boundary / varied treatment.
    Free,
    /// The freshness deadline named by a guard hint.
    GuardDeadline,
}

fn role_of(spec: &ParamSpec, guard_param: Option<&str>) -> FieldRole {
    if Some(spec.name.as_str()) == guard_param {
        return FieldRole::GuardDeadline;
    }
    let toks = tokens(spec.name.as_str());
    let pinned = match spec.semantic_type {
        SemanticType::Text => has_token(
            &toks,
            &["radio", "cell", "sta", "ue", "station", "client", "country", "target"],
        ),
        SemanticType::Integer => has_token(
            &toks,
            &["channel", "arfcn", "bandwidth", "mhz"],
        ),
        _ => false,
    };
    if pinned { FieldRole::Pinned } else { FieldRole::Free }
}

/// Known-good value for a pinned or nominal field.
fn nominal_value(spec: &ParamSpec, class: NfClass, now_ms: i64) -> Value {
    let toks = tokens(spec.name.as_str());
    match spec.semantic_type {
        SemanticType::Text => {
            let s = if has_token(&toks, &["target"]) {
                match class {
                    NfClass::WlanAp => "r1",
                    NfClass::Gnb => "c1",
                }
            } else if has_token(&toks, &["radio"]) {
                match class {
                    NfClass::WlanAp => "r0",
                    NfClass::Gnb => "c0",
                }
            } else if has_token(&toks, &["cell"]) {
                "c0"
            } else if has_token(&toks, &["sta", "station", "client"]) {
                "sta1"
            } else if has_token(&toks, &["ue"]) {
                "ue1"
            } else if has_token(&toks, &["country"]) {
                "DE"
            } else if has_token(&toks, &["ssid", "name"]) {
                "lab-net"
            } else {
                "t0"
            };
            Value::Text(s.to_string())
        }
        SemanticType::Integer => {
            let n = if has_token(&toks, &["arfcn"]) {
                640_000
            } else if has_token(&toks, &["channel"]) {
                match class {
                    NfClass::WlanAp => 36,
                    NfClass::Gnb => 640_000,
                }
            } else if has_token(&toks, &["bandwidth", "mhz"]) {
                20
            } else if has_token(&toks, &["clients", "max"]) {
                16
            } else if has_token(&toks, &["weight", "threshold", "priority"]) {
                50
            } else {
                7
            };
            Value::Integer(n)
        }
        SemanticType::Real => Value::Real(match spec.unit {
            Some(Unit::Dbm) => 17.5,
            Some(Unit::Mw) => 56.0,
            Some(Unit::Mbps) => 25.0,
            Some(Unit::Kbps) => 25_000.0,
            Some(Unit::Ms) => 100.0,
            Some(Unit::S) => 1.5,
            _ => 1.5,
        }),
        SemanticType::Boolean => Value::Boolean(true),
        SemanticType::Timestamp => Value::Timestamp(now_ms + FRESH_OFFSET_MS),
        SemanticType::ListOfText => {
            Value::TextList(vec!["t0".to_string(), "t1".to_string()])
        }
    }
}

/// Boundary value for a free field: zero / empty / false.
fn boundary_value(spec: &ParamSpec, now_ms: i64) -> Value {
    match spec.semantic_type {
        SemanticType::Text => Value::Text(String::new()),
        SemanticType::Integer => Value::Integer(0),
        SemanticType::Real => Value::Real(0.0),
        SemanticType::Boolean => Value::Boolean(false),
        SemanticType::Timestamp => Value::Timestamp(now_ms + FRESH_OFFSET_MS),
        SemanticType::ListOfText => Value::TextList(Vec::new()),
    }
}

/// Seeded random value that stays inside the NF's accepted domain.
fn varied_value(spec: &ParamSpec, now_ms: i64, rng: &mut ChaCha8Rng) -> Value {
    let toks = tokens(spec.name.as_str());
    match spec.semantic_type {
        SemanticType::Text => Value::Text(format!("v{}", rng.random_range(1..100))),
        SemanticType::Integer => {
            let n = if has_token(&toks, &["weight", "threshold", "priority"]) {
                rng.random_range(0..=100)
            } else if has_token(&toks, &["clients", "max"]) {
                rng.random_range(1..=64)
            } else {
                rng.random_range(1..=100)
            };
            Value::Integer(n)
        }
        SemanticType::Real => {
            let u: f64 = rng.random();
            Value::Real(match spec.unit {
                Some(Unit::Dbm) => 10.0 + u * 10.0,
                Some(Unit::Mw) => 10.0 + u * 90.0,
                Some(Unit::Mbps) => 10.0 + u * 80.0,
                Some(Unit::Kbps) => 10_000.0 + u * 80_000.0,
                Some(Unit::Ms) => 50.0 + u * 350.0,
                Some(Unit::S) => 0.5 + u * 3.5,
                _ => 0.5 + u * 9.5,
            })
        }
        SemanticType::Boolean => Value::Boolean(rng.random()),
        SemanticType::Timestamp => {
            Value::Timestamp(now_ms + rng.random_range(30_000..120_000))
        }
        SemanticType::ListOfText => Value::TextList(vec![
            format!("v{}", rng.random_range(1..100)),
            format!("v{}", rng.random_range(1..100)),
        ]),
    }
}

/// Generate the validation vectors for one CFR entry.
///
/// Deterministic in `(seed, requirement name)`; `now_ms` is the manual
/// clock the validation run will execute under, so timestamp fields can
/// be planted relative to it.
pub fn generate_vectors(
    entry: &CfrEntry,
    class: NfClass,
    now_ms: i64,
    seed: u64,
) -> Vec<TestVector> {
    let req = &entry.requirement;
    let guard_param = entry.requirement.augmentation_hint.as_ref().and_then(|h| {
        (h.kind == HINT_GUARD_ON_TIMESTAMP)
            .then(|| h.param.as_ref().map(|p| p.as_str()))
            .flatten()
    });

    let mut rng = rng_for(seed, req.name.as_str());
    let mut vectors = vectors_from_notes(&entry.notes);

    let fill = |pick: &dyn Fn(&ParamSpec, &mut ChaCha8Rng) -> Value, rng: &mut ChaCha8Rng| {
        req.params
            .iter()
            .map(|p| {
                let v = match role_of(p, guard_param) {
                    FieldRole::GuardDeadline => Value::Timestamp(now_ms + FRESH_OFFSET_MS),
                    FieldRole::Pinned => nominal_value(p, class, now_ms),
                    FieldRole::Free => pick(p, rng),
                };
                (p.name.as_str().to_string(), v)
            })
            .collect::<BTreeMap<_, _>>()
    };

    let all_boolean = !req.params.is_empty()
        && req.params.iter().all(|p| p.semantic_type == SemanticType::Boolean);

    vectors.push(TestVector {
        label: "nominal".to_string(),
        params: fill(&|p, _| nominal_value(p, class, now_ms), &mut rng),
        expect: VectorExpectation::Mirror,
    });
    if all_boolean {
        // Both truth values must round-trip; the nominal vector already
        // covers all-true.
        vectors.push(TestVector {
            label: "all_false".to_string(),
            params: fill(&|_, _| Value::Boolean(false), &mut rng),
            expect: VectorExpectation::Mirror,
        });
    } else {
        vectors.push(TestVector {
            label: "boundary".to_string(),
            params: fill(&|p, _| boundary_value(p, now_ms), &mut rng),
            expect: VectorExpectation::Mirror,
        });
    }
    vectors.push(TestVector {
        label: "varied".to_string(),
        params: fill(&|p, rng| varied_value(p, now_ms, rng), &mut rng),
        expect: VectorExpectation::Mirror,
    });

    if guard_param.is_some() {
        let mut params = fill(&|p, _| nominal_value(p, class, now_ms), &mut rng);
        params.insert(
            guard_param.unwrap().to_string(),
            Value::Timestamp(now_ms + ELAPSED_OFFSET_MS),
        );
        vectors.push(TestVector {
            label: "guard_elapsed".to_string(),
            params,
            expect: VectorExpectation::GuardRejected,
        });
    }

    vectors
}

fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    let key = format!("vectors:{seed}:{name}");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{
        AugmentationHint, ControlCapability, ControlRequirement, Identifier, MatchKind,
    };

    fn ident(s: &str) -> Identifier {
        Identifier::new(s).unwrap()
    }

    fn entry(req: ControlRequirement) -> CfrEntry {
        let capability = ControlCapability {
            name: req.name.clone(),
            description: req.description.clone(),
            params: req.params.clone(),
            returns: req.returns.clone(),
            tags: vec![],
        };
        CfrEntry {
            requirement: req,
            capability,
            match_kind: MatchKind::Exact,
            score: 1.0,
            notes: String::new(),
        }
    }

    fn rate_req() -> ControlRequirement {
        ControlRequirement {
            name: ident("set_rate"),
            description: "Set the data rate.".to_string(),
            params: vec![
                ParamSpec::new("radio_id", SemanticType::Text),
                ParamSpec::new("rate", SemanticType::Real).with_unit(Unit::Mbps),
            ],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        }
    }

    #[test]
    fn every_function_gets_at_least_three_distinct_vectors() {
        let vectors = generate_vectors(&entry(rate_req()), NfClass::WlanAp, 1_000, 42);
        assert!(vectors.len() >= MIN_VECTORS_PER_FUNCTION);
        // The free rate field takes three different values, so a constant
        // can satisfy at most one vector.
        let rates: Vec<&Value> = vectors.iter().map(|v| &v.params["rate"]).collect();
        assert_ne!(rates[0], rates[1]);
        assert_ne!(rates[0], rates[2]);
        assert_ne!(rates[1], rates[2]);
        // The pinned radio id stays known-good throughout.
        for v in &vectors {
            assert_eq!(v.params["radio_id"], Value::Text("r0".to_string()));
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = generate_vectors(&entry(rate_req()), NfClass::WlanAp, 1_000, 7);
        let b = generate_vectors(&entry(rate_req()), NfClass::WlanAp, 1_000, 7);
        let c = generate_vectors(&entry(rate_req()), NfClass::WlanAp, 1_000, 8);
        assert_eq!(a, b);
        assert_ne!(a, c, "different seeds vary the varied vector");
    }

    #[test]
    fn guarded_requirements_get_an_elapsed_deadline_vector() {
        let mut req = rate_req();
        req.name = ident("aoi_set_rate");
        req.params.push(ParamSpec::new("deadline", SemanticType::Timestamp));
        req.augmentation_hint = Some(AugmentationHint {
            kind: HINT_GUARD_ON_TIMESTAMP.to_string(),
            param: Some(ident("deadline")),
        });
        let now = 5_000_000;
        let vectors = generate_vectors(&entry(req), NfClass::WlanAp, now, 1);
        let elapsed: Vec<&TestVector> = vectors
            .iter()
            .filter(|v| v.expect == VectorExpectation::GuardRejected)
            .collect();
        assert_eq!(elapsed.len(), 1);
        assert_eq!(elapsed[0].params["deadline"], Value::Timestamp(now - 60_000));
        // Every other vector keeps the deadline fresh.
        for v in &vectors {
            if v.expect == VectorExpectation::Mirror {
                assert_eq!(v.params["deadline"], Value::Timestamp(now + 60_000));
            }
        }
    }

    #[test]
    fn boolean_only_functions_cover_both_truth_values() {
        let req = ControlRequirement {
            name: ident("set_led"),
            description: "Switch the status LED.".to_string(),
            params: vec![ParamSpec::new("on", SemanticType::Boolean)],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        };
        let vectors = generate_vectors(&entry(req), NfClass::WlanAp, 0, 3);
        assert!(vectors.len() >= MIN_VECTORS_PER_FUNCTION);
        let values: Vec<&Value> = vectors.iter().map(|v| &v.params["on"]).collect();
        assert!(values.contains(&&Value::Boolean(true)));
        assert!(values.contains(&&Value::Boolean(false)));
    }

    #[test]
    fn domain_ids_stay_valid_for_gnb_class_too() {
        let req = ControlRequirement {
            name: ident("handover"),
            description: "Hand a UE over to a neighbour cell.".to_string(),
            params: vec![
                ParamSpec::new("ue_id", SemanticType::Text),
                ParamSpec::new("target_cell", SemanticType::Text),
            ],
            returns: vec![ParamSpec::new("ok", SemanticType::Boolean)],
            augmentation_hint: None,
        };
        let vectors = generate_vectors(&entry(req), NfClass::Gnb, 0, 9);
        for v in &vectors {
            assert_eq!(v.params["ue_id"], Value::Text("ue1".to_string()));
            assert_eq!(v.params["target_cell"], Value::Text("c1".to_string()));
        }
    }

    #[test]
    fn notes_vectors_run_first_and_garbage_notes_are_ignored() {
        let mut e = entry(rate_req());
        e.notes = serde_json::json!({
            "test_vectors": [{
                "label": "from_source",
                "params": {
                    "radio_id": {"type": "text", "value": "r1"},
                    "rate": {"type": "real", "value": 40.0}
                }
            }]
        })
        .to_string();
        let vectors = generate_vectors(&e, NfClass::WlanAp, 0, 1);
        assert_eq!(vectors[0].label, "from_source");
        assert_eq!(vectors[0].expect, VectorExpectation::Mirror);
        assert_eq!(vectors[0].params["radio_id"], Value::Text("r1".to_string()));

        e.notes = "plain rationale prose, matched on wording".to_string();
        let plain = generate_vectors(&e, NfClass::WlanAp, 0, 1);
        assert_eq!(plain[0].label, "nominal");
    }
}
