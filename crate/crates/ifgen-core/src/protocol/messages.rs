//! Message shapes for the two channels: provisioning (HTTP/JSON) and
//! control (framed TCP in the negotiated encoding).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::doc::CfrDocument;
use crate::value::Value;

/// One invocation on the control channel. Correlation ids let a client
/// pipeline calls over a single connection; replies may return in any
/// order and are matched back by id.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlCall {
    pub correlation_id: u64,
    pub function: String,
    pub params: BTreeMap<String, Value>,
}

/// A structured control-channel error: a machine-readable kind from the
/// fixed vocabulary plus a human-readable detail line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireError {
    pub kind: String,
    pub detail: String,
}

impl WireError {
    pub fn new(kind: &str, detail: impl Into<String>) -> Self {
        WireError {
            kind: kind.to_string(),
            detail: detail.into(),
        }
    }
}

/// The reply to one control call.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlReply {
    pub correlation_id: u64,
    pub outcome: Result<BTreeMap<String, Value>, WireError>,
}

// ---- provisioning channel (always JSON over HTTP) ----

/// Body of `POST /trust`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrustRequest {
    pub nf_id: String,
}

/// Reply to `POST /trust`: an opaque session-scoped token the source must
/// echo when submitting a CFR.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrustGrant {
    pub token: String,
}

/// Body of `POST /provision/cfr`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CfrSubmission {
    pub token: String,
    pub cfr: CfrDocument,
}

/// Reply to `POST /provision/cfr`: the session to poll.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvisionAccepted {
    pub session_id: String,
}

/// Lifecycle of one provisioning session. Exactly one of the three
/// terminal states is ever reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    Received,
    Generating,
    Validating,
    Complete,
    Failed,
    Timeout,
}

impl SessionState {
    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            SessionState::Complete | SessionState::Failed | SessionState::Timeout
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SessionState::Received => "received",
            SessionState::Generating => "generating",
            SessionState::Validating => "validating",
            SessionState::Complete => "complete",
            SessionState::Failed => "failed",
            SessionState::Timeout => "timeout",
        }
    }
}

impl std::fmt::Display for SessionState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reply to `GET /provision/status/{session_id}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvisionStatus {
    pub session_id: String,
    pub state: SessionState,
    /// Failure reason or progress note.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    /// On `complete`: the signature lines of every provisioned function,
    /// in CFR order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<String>,
    /// On `complete`: repair attempts each function needed (1 = first
    /// shot), keyed by requirement name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attempts: BTreeMap<String, u32>,
}
