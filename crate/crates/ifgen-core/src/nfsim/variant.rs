//! Seeded vendor variants of the base catalogs.
//!
//! A variant leaves the *advertised* capability document structurally
//! identical to the base catalog (same names, params, units — only the
//! prose descriptions pick up vendor flavour) but rewrites the *internal*
//! API the way real vendors do: different identifier vocabulary and casing,
//! different units on the wire, integers widened to reals, numbers passed
//! as strings. Every rewrite draws from the shared synonym table, which is
//! what keeps the diversity solvable: a renamed identifier still
//! canonicalises to the same token set as its base form.
//!
//! Each derivation also records the exact base↔internal correspondence it
//! applied ([`FunctionTruth`]). The simulator's executor uses it to
//! translate variant-shaped calls onto the shared behaviours, and test
//! oracles use it to compute expected outcomes without consulting the
//! artifact under test.

use std::collections::{BTreeMap, BTreeSet};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codegen::api_doc::{InternalFunction, VendorApiDoc};
use crate::doc::{
    CapabilityDocument, ControlCapability, Identifier, NfClass, ParamSpec, SemanticType, Unit,
};
use crate::matching::synonyms::SynonymTable;
use crate::matching::tokens::split_words;

use super::catalog::base_catalog;

/// How a vendor spells multi-word identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CasingStyle {
    Snake,
    Camel,
    Pascal,
}

/// One field's correspondence: the capability-document spelling and the
/// internal-API spelling, with whatever unit/type drift the vendor applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldTruth {
    pub base: ParamSpec,
    pub internal: ParamSpec,
}

/// Ground truth for one function: how the vendor's internal function maps
/// onto the advertised capability, field by field, in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionTruth {
    pub capability_name: Identifier,
    pub internal_name: Identifier,
    pub params: Vec<FieldTruth>,
    pub returns: Vec<FieldTruth>,
}

/// A fully derived vendor: public capability document, internal API
/// documentation, and the recorded correspondence between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VendorProfile {
    pub nf_class: NfClass,
    pub seed: u64,
    pub nf_id: String,
    pub vendor: String,
    pub casing: CasingStyle,
    pub capability_doc: CapabilityDocument,
    pub api_doc: VendorApiDoc,
    truths: BTreeMap<String, FunctionTruth>,
}

impl VendorProfile {
    /// Ground truth for one capability, by capability name.
    pub fn truth(&self, capability: &str) -> Option<&FunctionTruth> {
        self.truths.get(capability)
    }

    pub fn truths(&self) -> impl Iterator<Item = &FunctionTruth> {
        self.truths.values()
    }
}

pub const AP_VENDORS: [&str; 5] = ["acme", "bluewave", "cirrus", "deltalink", "evergrid"];
pub const GNB_VENDORS: [&str; 5] = ["nordix", "oryx", "polarcom", "quanta", "ritek"];

fn vendor_name(class: NfClass, seed: u64) -> String {
    if seed == 0 {
        return "reference".to_string();
    }
    let names = match class {
        NfClass::WlanAp => AP_VENDORS,
        NfClass::Gnb => GNB_VENDORS,
    };
    names
        .get((seed - 1) as usize)
        .map_or_else(|| format!("vendor{seed}"), |n| n.to_string())
}

fn class_prefix(class: NfClass) -> &'static str {
    match class {
        NfClass::WlanAp => "ap",
        NfClass::Gnb => "gnb",
    }
}

fn rng_for(tag: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

fn join_style(tokens: &[String], style: CasingStyle) -> String {
    match style {
        CasingStyle::Snake => tokens.join("_"),
        CasingStyle::Camel => {
            let mut out = String::new();
            for (i, t) in tokens.iter().enumerate() {
                if i == 0 {
                    out.push_str(t);
                } else {
                    out.push_str(&capitalize(t));
                }
            }
            out
        }
        CasingStyle::Pascal => tokens.iter().map(|t| capitalize(t)).collect(),
    }
}

/// Rewrite one identifier: per token, half the time swap in another member
/// of its synonym group, then re-join in the vendor's casing. Retries on
/// the rare collision with an already-used name.
fn rewrite_name(
    name: &str,
    style: CasingStyle,
    table: &SynonymTable,
    rng: &mut ChaCha8Rng,
    used: &mut BTreeSet<String>,
) -> Identifier {
    let tokens = split_words(name);
    for _ in 0..8 {
        let swapped: Vec<String> = tokens
            .iter()
            .map(|t| {
                let group = table.group_of(t);
                if group.len() > 1 && rng.random::<f64>() < 0.5 {
                    group[rng.random_range(0..group.len())].to_string()
                } else {
                    t.clone()
                }
            })
            .collect();
        let joined = join_style(&swapped, style);
        if used.insert(joined.clone()) {
            return Identifier::new(&joined).expect("rewritten names stay valid identifiers");
        }
    }
    // Pathological table; fall back to the cased original.
    let joined = join_style(&tokens, style);
    used.insert(joined.clone());
    Identifier::new(&joined).expect("cased original stays a valid identifier")
}

fn unit_partner(u: Unit) -> Option<Unit> {
    match u {
        Unit::Dbm => Some(Unit::Mw),
        Unit::Mw => Some(Unit::Dbm),
        Unit::Mbps => Some(Unit::Kbps),
        Unit::Kbps => Some(Unit::Mbps),
        Unit::Ms => Some(Unit::S),
        Unit::S => Some(Unit::Ms),
        Unit::Unitless => None,
    }
}

/// Derive one internal field from its base: rename, maybe flip the unit,
/// maybe widen an integer, maybe take a number as text.
fn derive_field(
    base: &ParamSpec,
    style: CasingStyle,
    table: &SynonymTable,
    rng: &mut ChaCha8Rng,
    used: &mut BTreeSet<String>,
) -> FieldTruth {
    let name = rewrite_name(base.name.as_str(), style, table, rng, used);
    let mut ty = base.semantic_type;
    let mut unit = base.unit;
    match ty {
        SemanticType::Real => {
            if let Some(partner) = unit.and_then(unit_partner) {
                if rng.random::<f64>() < 0.5 {
                    unit = Some(partner);
                }
            }
            // Some vendors pass dimensioned numbers as strings.
            if unit.is_some() && rng.random::<f64>() < 0.15 {
                ty = SemanticType::Text;
            }
        }
        SemanticType::Integer => {
            if rng.random::<f64>() < 0.2 {
                ty = SemanticType::Real;
            }
        }
        _ => {}
    }
    let mut internal = ParamSpec::new(name.as_str(), ty);
    if let Some(u) = unit {
        internal = internal.with_unit(u);
    }
    FieldTruth {
        base: base.clone(),
        internal,
    }
}

/// Word-level paraphrase: swap words that belong to a synonym group with
/// probability `p`, preserving leading capitalisation and all punctuation.
fn paraphrase(text: &str, p: f64, table: &SynonymTable, rng: &mut ChaCha8Rng) -> String {
    let mut out = String::with_capacity(text.len());
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String, rng: &mut ChaCha8Rng| {
        if word.is_empty() {
            return;
        }
        let lower = word.to_ascii_lowercase();
        let group = table.group_of(&lower);
        if group.len() > 1 && rng.random::<f64>() < p {
            let pick = group[rng.random_range(0..group.len())];
            if word.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                out.push_str(&capitalize(pick));
            } else {
                out.push_str(pick);
            }
        } else {
            out.push_str(word);
        }
        word.clear();
    };
    for c in text.chars() {
        if c.is_ascii_alphabetic() {
            word.push(c);
        } else {
            flush(&mut word, &mut out, rng);
            out.push(c);
        }
    }
    flush(&mut word, &mut out, rng);
    out
}

fn identity_truth(cap: &ControlCapability) -> FunctionTruth {
    FunctionTruth {
        capability_name: cap.name.clone(),
        internal_name: cap.name.clone(),
        params: cap
            .params
            .iter()
            .map(|p| FieldTruth {
                base: p.clone(),
                internal: p.clone(),
            })
            .collect(),
        returns: cap
            .returns
            .iter()
            .map(|p| FieldTruth {
                base: p.clone(),
                internal: p.clone(),
            })
            .collect(),
    }
}

/// Derive the vendor profile for `(class, seed)` using the built-in
/// synonym table. Seed 0 is the reference vendor: its internal API is the
/// base catalog verbatim.
pub fn derive_vendor_variant(class: NfClass, seed: u64) -> VendorProfile {
    derive_vendor_variant_with_table(class, seed, SynonymTable::builtin())
}

pub fn derive_vendor_variant_with_table(
    class: NfClass,
    seed: u64,
    table: &SynonymTable,
) -> VendorProfile {
    let vendor = vendor_name(class, seed);
    let prefix = class_prefix(class);
    let nf_id = format!("{prefix}-{vendor}");
    let casing = if seed == 0 {
        CasingStyle::Snake
    } else {
        let mut rng = rng_for(&format!("casing:{seed}:{prefix}"));
        [CasingStyle::Snake, CasingStyle::Camel, CasingStyle::Pascal]
            [rng.random_range(0..3usize)]
    };

    let mut used_names: BTreeSet<String> = BTreeSet::new();
    let mut capabilities = Vec::new();
    let mut functions = Vec::new();
    let mut truths = BTreeMap::new();

    for entry in base_catalog(class) {
        let cap = entry.capability;
        let (truth, public_desc, internal_desc) = if seed == 0 {
            (identity_truth(&cap), cap.description.clone(), cap.description.clone())
        } else {
            let mut rng = rng_for(&format!("fn:{seed}:{prefix}:{}", cap.name));
            let internal_name =
                rewrite_name(cap.name.as_str(), casing, table, &mut rng, &mut used_names);
            let mut used_params = BTreeSet::new();
            let params: Vec<FieldTruth> = cap
                .params
                .iter()
                .map(|p| derive_field(p, casing, table, &mut rng, &mut used_params))
                .collect();
            let mut used_returns = BTreeSet::new();
            let returns: Vec<FieldTruth> = cap
                .returns
                .iter()
                .map(|p| derive_field(p, casing, table, &mut rng, &mut used_returns))
                .collect();
            let internal_desc = paraphrase(&cap.description, 0.35, table, &mut rng);
            let mut cap_rng = rng_for(&format!("capdesc:{seed}:{prefix}:{}", cap.name));
            let public_desc = paraphrase(&cap.description, 0.2, table, &mut cap_rng);
            (
                FunctionTruth {
                    capability_name: cap.name.clone(),
                    internal_name,
                    params,
                    returns,
                },
                public_desc,
                internal_desc,
            )
        };

        capabilities.push(ControlCapability {
            description: public_desc,
            ..cap.clone()
        });
        functions.push(InternalFunction {
            name: truth.internal_name.clone(),
            description: internal_desc,
            params: truth.params.iter().map(|f| f.internal.clone()).collect(),
            returns: truth.returns.iter().map(|f| f.internal.clone()).collect(),
        });
        truths.insert(cap.name.as_str().to_string(), truth);
    }

    let supported_encodings = if seed % 2 == 0 && seed != 0 {
        vec!["flatbin".to_string(), "json".to_string()]
    } else {
        vec!["json".to_string(), "flatbin".to_string()]
    };

    VendorProfile {
        nf_class: class,
        seed,
        nf_id: nf_id.clone(),
        vendor: vendor.clone(),
        casing,
        capability_doc: CapabilityDocument {
            nf_id: nf_id.clone(),
            nf_class: class,
            vendor: vendor.clone(),
            capabilities,
            supported_encodings,
        },
        api_doc: VendorApiDoc {
            nf_id,
            vendor,
            functions,
        },
        truths,
    }
}
