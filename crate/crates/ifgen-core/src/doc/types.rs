//! Shared vocabulary: identifiers, semantic types, units, and the three
//! document classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::DocError;

/// Current document schema version. Consumers reject a different major.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// A validated identifier: `[a-zA-Z_][a-zA-Z0-9_]*`.
///
/// Function and parameter names in every document class are identifiers;
/// NF ids are free-form strings and deliberately not covered by this type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identifier(String);

impl Identifier {
    pub fn new(s: impl Into<String>) -> Result<Self, DocError> {
        let s = s.into();
        if is_valid_identifier(&s) {
            Ok(Identifier(s))
        } else {
            Err(DocError::InvalidIdentifier(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Identifier {
    type Err = DocError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identifier::new(s)
    }
}

impl AsRef<str> for Identifier {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for Identifier {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Identifier {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Identifier::new(s).map_err(serde::de::Error::custom)
    }
}

/// The closed set of semantic types parameters and returns may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemanticType {
    #[serde(rename = "text")]
    Text,
    #[serde(rename = "integer")]
    Integer,
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "boolean")]
    Boolean,
    #[serde(rename = "timestamp")]
    Timestamp,
    #[serde(rename = "list-of-text")]
    ListOfText,
}

impl SemanticType {
    pub const ALL: [SemanticType; 6] = [
        SemanticType::Text,
        SemanticType::Integer,
        SemanticType::Real,
        SemanticType::Boolean,
        SemanticType::Timestamp,
        SemanticType::ListOfText,
    ];

    /// Whether a unit tag is meaningful for this type. Units quantify
    /// numeric values; text is included because some vendors pass numeric
    /// quantities as decimal strings with a declared unit.
    pub fn accepts_unit(self) -> bool {
        matches!(
            self,
            SemanticType::Integer | SemanticType::Real | SemanticType::Text
        )
    }

    /// Name used in rendered signatures (`text` renders as `string` by
    /// convention).
    pub fn signature_name(self) -> &'static str {
        match self {
            SemanticType::Text => "string",
            SemanticType::Integer => "integer",
            SemanticType::Real => "real",
            SemanticType::Boolean => "boolean",
            SemanticType::Timestamp => "timestamp",
            SemanticType::ListOfText => "list-of-text",
        }
    }
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SemanticType::Text => "text",
            SemanticType::Integer => "integer",
            SemanticType::Real => "real",
            SemanticType::Boolean => "boolean",
            SemanticType::Timestamp => "timestamp",
            SemanticType::ListOfText => "list-of-text",
        };
        f.write_str(s)
    }
}

/// The closed set of unit tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "dBm")]
    Dbm,
    #[serde(rename = "mW")]
    Mw,
    #[serde(rename = "Mbps")]
    Mbps,
    #[serde(rename = "kbps")]
    Kbps,
    #[serde(rename = "ms")]
    Ms,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "unitless")]
    Unitless,
}

impl Unit {
    pub const ALL: [Unit; 7] = [
        Unit::Dbm,
        Unit::Mw,
        Unit::Mbps,
        Unit::Kbps,
        Unit::Ms,
        Unit::S,
        Unit::Unitless,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Dbm => "dBm",
            Unit::Mw => "mW",
            Unit::Mbps => "Mbps",
            Unit::Kbps => "kbps",
            Unit::Ms => "ms",
            Unit::S => "s",
            Unit::Unitless => "unitless",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One typed parameter or return field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: Identifier,
    #[serde(rename = "type")]
    pub semantic_type: SemanticType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Unit>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

impl ParamSpec {
    pub fn new(name: &str, semantic_type: SemanticType) -> Self {
        ParamSpec {
            name: Identifier::new(name).expect("valid identifier"),
            semantic_type,
            unit: None,
            description: String::new(),
        }
    }

    pub fn with_unit(mut self, unit: Unit) -> Self {
        self.unit = Some(unit);
        self
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }
}

/// NF classes the simulator knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NfClass {
    #[serde(rename = "WLAN-AP")]
    WlanAp,
    #[serde(rename = "gNB")]
    Gnb,
}

impl NfClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NfClass::WlanAp => "WLAN-AP",
            NfClass::Gnb => "gNB",
        }
    }
}

impl fmt::Display for NfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NfClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "WLAN-AP" => Ok(NfClass::WlanAp),
            "gNB" => Ok(NfClass::Gnb),
            other => Err(format!("unknown NF class `{other}`")),
        }
    }
}

/// One externally-publishable control function of an NF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlCapability {
    pub name: Identifier,
    pub description: String,
    pub params: Vec<ParamSpec>,
    pub returns: Vec<ParamSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

/// The capability document an NF publishes about itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapabilityDocument {
    pub nf_id: String,
    pub nf_class: NfClass,
    pub vendor: String,
    pub capabilities: Vec<ControlCapability>,
    pub supported_encodings: Vec<String>,
}

impl CapabilityDocument {
    pub fn capability(&self, name: &str) -> Option<&ControlCapability> {
        self.capabilities.iter().find(|c| c.name.as_str() == name)
    }
}

/// An optional structured hint telling the destination how a requirement
/// goes beyond any single advertised capability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationHint {
    /// Hint kind, e.g. `guard_on_timestamp` or `timestamp_returns`.
    /// Unrecognized kinds are surfaced as errors during code generation.
    pub kind: String,
    /// Parameter the hint refers to, when relevant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<Identifier>,
}

/// One desired control function, as expressed by the consumer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlRequirement {
    pub name: Identifier,
    pub description: String,
    pub params: Vec<ParamSpec>,
    pub returns: Vec<ParamSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation_hint: Option<AugmentationHint>,
}

/// A set of control requirements presented to the matching agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementSet {
    pub requirements: Vec<ControlRequirement>,
}

/// How a requirement was matched against the capability document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    /// Full signature compatibility with one capability.
    Exact,
    /// Same intent, adaptable signature differences.
    Closest,
    /// Requires composing a capability with extra generated logic.
    Augmented,
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatchKind::Exact => "exact",
            MatchKind::Closest => "closest",
            MatchKind::Augmented => "augmented",
        };
        f.write_str(s)
    }
}

/// One agreed requirement→capability mapping inside a CFR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfrEntry {
    pub requirement: ControlRequirement,
    /// The matched capability, embedded so the CFR is self-contained.
    pub capability: ControlCapability,
    pub match_kind: MatchKind,
    /// Match confidence in (0, 1]; exact matches always carry 1.0.
    pub score: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

/// The control-function-requirement document sent to the destination NF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfrDocument {
    pub source_nf: String,
    pub dest_nf: String,
    pub schema_version: String,
    pub encoding_scheme: String,
    pub entries: Vec<CfrEntry>,
}

/// Minimal semver handling for `schema_version`: accept any version whose
/// major component equals ours, reject everything else.
pub(crate) fn check_schema_version(version: &str) -> Result<(), DocError> {
    let parts: Vec<&str> = version.split('.').collect();
    let bad = |reason: &str| DocError::SchemaVersion {
        version: version.to_string(),
        reason: reason.to_string(),
    };
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty() || !p.chars().all(|c| c.is_ascii_digit())) {
        return Err(bad("expected MAJOR.MINOR.PATCH"));
    }
    let major: u64 = parts[0].parse().map_err(|_| bad("major out of range"))?;
    let ours: u64 = SCHEMA_VERSION
        .split('.')
        .next()
        .unwrap()
        .parse()
        .expect("our own schema version parses");
    if major != ours {
        return Err(bad(&format!("incompatible major, this build speaks {SCHEMA_VERSION}")));
    }
    Ok(())
}
