//! Remote text-generation backend speaking the common chat-completions
//! wire shape: POST a JSON body with `model`, `messages`, and
//! `temperature`, read `choices[0].message.content` and `usage` back.
//!
//! Transport failures and retryable statuses (429 and 5xx) are retried
//! up to [`MAX_ATTEMPTS`] times with a doubling backoff starting at
//! [`BACKOFF_START`]. Other non-success statuses fail immediately —
//! a 401 will not fix itself.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::backend::{
    GenError, GenerationRequest, GenerationResponse, RemoteSettings, TextBackend, TokenUsage,
};

pub const MAX_ATTEMPTS: u32 = 3;
pub const BACKOFF_START: Duration = Duration::from_millis(500);
const REQUEST_TIMEOUT: Duration = Duration::from_secs(120);

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: Vec<ChatMessage<'a>>,
    temperature: f64,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatReplyMessage,
}

#[derive(Deserialize)]
struct ChatReplyMessage {
    content: String,
}

#[derive(Deserialize, Default)]
struct ChatUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
    #[serde(default)]
    usage: ChatUsage,
}

pub struct RemoteBackend {
    settings: RemoteSettings,
    agent: ureq::Agent,
}

impl RemoteBackend {
    pub fn new(settings: RemoteSettings) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(REQUEST_TIMEOUT))
            .http_status_as_error(false)
            .build()
            .into();
        RemoteBackend { settings, agent }
    }

    fn post_once(&self, body: &str) -> Result<(u16, String), GenError> {
        let mut req = self
            .agent
            .post(&self.settings.url)
            .header("content-type", "application/json");
        if !self.settings.api_key.is_empty() {
            req = req.header("authorization", &format!("Bearer {}", self.settings.api_key));
        }
        let mut res = req
            .send(body)
            .map_err(|e| GenError::Transport(e.to_string()))?;
        let status = res.status().as_u16();
        let text = res
            .body_mut()
            .read_to_string()
            .map_err(|e| GenError::Transport(e.to_string()))?;
        Ok((status, text))
    }
}

impl TextBackend for RemoteBackend {
    fn name(&self) -> &str {
        "remote"
    }

    fn generate(&self, req: &GenerationRequest) -> Result<GenerationResponse, GenError> {
        let body = serde_json::to_string(&ChatRequest {
            model: &self.settings.model,
            messages: vec![
                ChatMessage {
                    role: "system",
                    content: &req.system,
                },
                ChatMessage {
                    role: "user",
                    content: &req.user,
                },
            ],
            temperature: req.temperature,
        })
        .expect("chat request serializes");

        let started = Instant::now();
        let mut backoff = BACKOFF_START;
        let mut last_failure = String::new();
        for attempt in 1..=MAX_ATTEMPTS {
            if attempt > 1 {
                std::thread::sleep(backoff);
                backoff *= 2;
            }
            match self.post_once(&body) {
                Ok((status, text)) if status == 200 => {
                    let parsed: ChatResponse = serde_json::from_str(&text).map_err(|e| {
                        GenError::BadResponse(format!("invalid completion payload: {e}"))
                    })?;
                    let choice = parsed.choices.into_iter().next().ok_or_else(|| {
                        GenError::BadResponse("completion has no choices".to_string())
                    })?;
                    return Ok(GenerationResponse {
                        text: choice.message.content,
                        usage: TokenUsage {
                            input_tokens: parsed.usage.prompt_tokens,
                            output_tokens: parsed.usage.completion_tokens,
                        },
                        latency_ms: started.elapsed().as_millis() as u64,
                    });
                }
                Ok((status, text)) if status == 429 || status >= 500 => {
                    last_failure = format!("status {status}: {}", truncate(&text, 200));
                }
                Ok((status, text)) => {
                    return Err(GenError::Transport(format!(
                        "status {status}: {}",
                        truncate(&text, 200)
                    )));
                }
                Err(GenError::Transport(detail)) => last_failure = detail,
                Err(other) => return Err(other),
            }
        }
        Err(GenError::Transport(format!(
            "gave up after {MAX_ATTEMPTS} attempts; last failure: {last_failure}"
        )))
    }
}

fn truncate(text: &str, max: usize) -> &str {
    match text.char_indices().nth(max) {
        Some((idx, _)) => &text[..idx],
        None => text,
    }
}
