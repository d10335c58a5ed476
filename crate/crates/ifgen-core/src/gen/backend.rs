//! The text-generation backend abstraction and its registry.
//!
//! Agents never talk to a model directly; they build a [`GenerationRequest`]
//! and hand it to whichever [`TextBackend`] the run was configured with.
//! Backends are registered by name so a run can switch between the
//! deterministic mock and a remote model with a flag.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("unknown backend `{0}`")]
    UnknownBackend(String),
    #[error("backend configuration error: {0}")]
    Config(String),
    #[error("transport failure talking to backend: {0}")]
    Transport(String),
    #[error("backend returned an unusable response: {0}")]
    BadResponse(String),
    #[error("mock backend cannot interpret the task: {0}")]
    Task(String),
}

/// One request to a text backend. Temperature is carried explicitly even
/// though every caller pins it to 0.0 — reproducibility is the product here,
/// and making it visible keeps that decision auditable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub system: String,
    pub user: String,
    pub temperature: f64,
}

impl GenerationRequest {
    pub fn new(system: impl Into<String>, user: impl Into<String>) -> Self {
        GenerationRequest {
            system: system.into(),
            user: user.into(),
            temperature: 0.0,
        }
    }
}

/// Token counts for one generation call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub input_tokens: u64,
    pub output_tokens: u64,
}

impl TokenUsage {
    pub fn add(&mut self, other: TokenUsage) {
        self.input_tokens += other.input_tokens;
        self.output_tokens += other.output_tokens;
    }

    pub fn total(&self) -> u64 {
        self.input_tokens + self.output_tokens
    }
}

#[derive(Debug, Clone)]
pub struct GenerationResponse {
    pub text: String,
    pub usage: TokenUsage,
    /// Wall time of the call. The mock backend reports a synthetic,
    /// deterministic latency derived from token counts, so benchmark
    /// records stay byte-identical across runs.
    pub latency_ms: u64,
}

/// Estimated token count of a text: `ceil(utf8_bytes / 4)`. Used wherever a
/// real tokenizer is unavailable — mock usage accounting and chunk sizing.
pub fn estimate_tokens(text: &str) -> u64 {
    (text.len() as u64).div_ceil(4)
}

/// A text-generation backend. Implementations must be safe to share across
/// the NF actor threads.
pub trait TextBackend: Send + Sync {
    fn name(&self) -> &str;
    fn generate(&self, req: &GenerationRequest) -> Result<GenerationResponse, GenError>;
}

/// Settings a backend constructor may draw from.
#[derive(Debug, Clone)]
pub struct BackendSettings {
    /// Seed for the mock backend's deterministic choices and fault draws.
    pub seed: u64,
    /// Probability in [0, 1] that the mock sabotages a code-generation
    /// response, exercising the repair loop.
    pub fault_rate: f64,
    /// Remote endpoint settings; required by the `remote` backend only.
    pub remote: Option<RemoteSettings>,
}

impl Default for BackendSettings {
    fn default() -> Self {
        BackendSettings {
            seed: 0,
            fault_rate: 0.0,
            remote: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RemoteSettings {
    pub url: String,
    pub model: String,
    pub api_key: String,
}

impl RemoteSettings {
    /// Read endpoint settings from `IFGEN_LLM_URL`, `IFGEN_LLM_MODEL`, and
    /// `IFGEN_LLM_KEY`. Returns None when the URL is unset.
    pub fn from_env() -> Option<RemoteSettings> {
        let url = std::env::var("IFGEN_LLM_URL").ok()?;
        Some(RemoteSettings {
            url,
            model: std::env::var("IFGEN_LLM_MODEL").unwrap_or_else(|_| "default".to_string()),
            api_key: std::env::var("IFGEN_LLM_KEY").unwrap_or_default(),
        })
    }
}

type Constructor = Box<dyn Fn(&BackendSettings) -> Result<Box<dyn TextBackend>, GenError> + Send + Sync>;

/// Name-keyed registry of backend constructors.
pub struct BackendRegistry {
    constructors: BTreeMap<String, Constructor>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        BackendRegistry {
            constructors: BTreeMap::new(),
        }
    }

    /// Registry with the built-in backends: `mock` and `remote`.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("mock", |settings| {
            Ok(Box::new(super::mock::MockBackend::new(
                settings.seed,
                settings.fault_rate,
            )))
        });
        reg.register("remote", |settings| {
            let remote = settings
                .remote
                .clone()
                .or_else(RemoteSettings::from_env)
                .ok_or_else(|| {
                    GenError::Config(
                        "remote backend needs IFGEN_LLM_URL (and optionally IFGEN_LLM_MODEL, \
                         IFGEN_LLM_KEY)"
                            .to_string(),
                    )
                })?;
            Ok(Box::new(super::remote::RemoteBackend::new(remote)))
        });
        reg
    }

    pub fn register(
        &mut self,
        name: &str,
        ctor: impl Fn(&BackendSettings) -> Result<Box<dyn TextBackend>, GenError> + Send + Sync + 'static,
    ) {
        self.constructors.insert(name.to_string(), Box::new(ctor));
    }

    pub fn create(
        &self,
        name: &str,
        settings: &BackendSettings,
    ) -> Result<Box<dyn TextBackend>, GenError> {
        match self.constructors.get(name) {
            Some(ctor) => ctor(settings),
            None => Err(GenError::UnknownBackend(name.to_string())),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.constructors.keys().map(|s| s.as_str()).collect()
    }
}
