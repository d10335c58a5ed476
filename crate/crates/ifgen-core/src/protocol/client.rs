//! Source-side clients for the two channels.
//!
//! [`ProvisioningClient`] drives the HTTP flow: trust establishment,
//! capability fetch, CFR submission, and status polling until the
//! session reaches a terminal state. [`ControlClient`] holds the
//! persistent TCP connection afterwards and pipelines correlation-id
//! tagged calls in the negotiated encoding.

use std::collections::BTreeMap;
use std::io;
use std::net::{TcpStream, ToSocketAddrs};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::doc::{CapabilityDocument, CfrDocument, ParamSpec};
use crate::protocol::encoding::{CodecError, Encoding};
use crate::protocol::frame::{read_frame, write_frame};
use crate::protocol::messages::{
    CfrSubmission, ControlCall, ControlReply, ProvisionAccepted, ProvisionStatus, TrustGrant,
    TrustRequest,
};
use crate::value::Value;

/// How long [`await_completion`] keeps polling before giving up.
pub const COMPLETION_TIMEOUT: Duration = Duration::from_secs(120);
/// Delay between status polls.
pub const POLL_INTERVAL: Duration = Duration::from_millis(100);
/// Per-request timeout for provisioning HTTP calls.
const HTTP_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Error)]
pub enum ProvisionError {
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("provisioning endpoint returned {status}: {body}")]
    Http { status: u16, body: String },
    #[error("invalid provisioning response: {0}")]
    BadResponse(String),
    #[error("session {session_id} not terminal after {waited_ms} ms")]
    Timeout { session_id: String, waited_ms: u64 },
}

/// HTTP client for one NF's provisioning endpoint.
pub struct ProvisioningClient {
    base_url: String,
    agent: ureq::Agent,
}

impl ProvisioningClient {
    pub fn new(base_url: &str) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(HTTP_TIMEOUT))
            .http_status_as_error(false)
            .build()
            .into();
        ProvisioningClient {
            base_url: base_url.trim_end_matches('/').to_string(),
            agent,
        }
    }

    fn post_json(&self, path: &str, body: &str) -> Result<String, ProvisionError> {
        let url = format!("{}{}", self.base_url, path);
        let mut res = self
            .agent
            .post(&url)
            .header("content-type", "application/json")
            .send(body)
            .map_err(|e| ProvisionError::Transport(e.to_string()))?;
        let status = res.status().as_u16();
        let text = res
            .body_mut()
            .read_to_string()
            .map_err(|e| ProvisionError::Transport(e.to_string()))?;
        if status != 200 {
            return Err(ProvisionError::Http { status, body: text });
        }
        Ok(text)
    }

    fn get_json(&self, path: &str) -> Result<String, ProvisionError> {
        let url = format!("{}{}", self.base_url, path);
        let mut res = self
            .agent
            .get(&url)
            .call()
            .map_err(|e| ProvisionError::Transport(e.to_string()))?;
        let status = res.status().as_u16();
        let text = res
            .body_mut()
            .read_to_string()
            .map_err(|e| ProvisionError::Transport(e.to_string()))?;
        if status != 200 {
            return Err(ProvisionError::Http { status, body: text });
        }
        Ok(text)
    }

    /// Establish trust: announce who we are, receive a session token
    /// that must accompany the CFR.
    pub fn trust(&self, nf_id: &str) -> Result<String, ProvisionError> {
        let body = serde_json::to_string(&TrustRequest { nf_id: nf_id.to_string() })
            .expect("trust request serializes");
        let text = self.post_json("/trust", &body)?;
        let grant: TrustGrant = serde_json::from_str(&text)
            .map_err(|e| ProvisionError::BadResponse(e.to_string()))?;
        Ok(grant.token)
    }

    /// Fetch the NF's capability document.
    pub fn capability(&self) -> Result<CapabilityDocument, ProvisionError> {
        let text = self.get_json("/capability")?;
        serde_json::from_str(&text).map_err(|e| ProvisionError::BadResponse(e.to_string()))
    }

    /// Submit a CFR; returns the session id to poll.
    pub fn submit_cfr(&self, token: &str, cfr: &CfrDocument) -> Result<String, ProvisionError> {
        let body = serde_json::to_string(&CfrSubmission {
            token: token.to_string(),
            cfr: cfr.clone(),
        })
        .expect("cfr submission serializes");
        let text = self.post_json("/provision/cfr", &body)?;
        let accepted: ProvisionAccepted = serde_json::from_str(&text)
            .map_err(|e| ProvisionError::BadResponse(e.to_string()))?;
        Ok(accepted.session_id)
    }

    /// One status poll.
    pub fn status(&self, session_id: &str) -> Result<ProvisionStatus, ProvisionError> {
        let text = self.get_json(&format!("/provision/status/{session_id}"))?;
        serde_json::from_str(&text).map_err(|e| ProvisionError::BadResponse(e.to_string()))
    }

    /// Poll until the session reaches a terminal state or the timeout
    /// elapses.
    pub fn await_completion_with(
        &self,
        session_id: &str,
        timeout: Duration,
        poll: Duration,
    ) -> Result<ProvisionStatus, ProvisionError> {
        let started = Instant::now();
        loop {
            let status = self.status(session_id)?;
            if status.state.is_terminal() {
                return Ok(status);
            }
            if started.elapsed() >= timeout {
                return Err(ProvisionError::Timeout {
                    session_id: session_id.to_string(),
                    waited_ms: started.elapsed().as_millis() as u64,
                });
            }
            std::thread::sleep(poll);
        }
    }
}

/// Poll a session with the standard 120-second budget.
pub fn await_completion(
    client: &ProvisioningClient,
    session_id: &str,
) -> Result<ProvisionStatus, ProvisionError> {
    client.await_completion_with(session_id, COMPLETION_TIMEOUT, POLL_INTERVAL)
}

#[derive(Debug, Error)]
pub enum ControlError {
    #[error("control channel i/o: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("connection closed with {pending} call(s) outstanding")]
    Closed { pending: usize },
    #[error("reply for unknown correlation id {0}")]
    UnknownCorrelation(u64),
}

/// Persistent control connection. Calls are tagged with correlation
/// ids, so several can be in flight at once: `submit` sends without
/// blocking on the reply, `wait` reads until the given id's reply
/// arrives, buffering any replies that surface out of order.
pub struct ControlClient {
    stream: TcpStream,
    encoding: Box<dyn Encoding>,
    next_id: u64,
    /// Declared returns of each in-flight call, needed to resolve its
    /// reply when it arrives.
    pending: BTreeMap<u64, Vec<ParamSpec>>,
    /// Replies read while waiting for a different correlation id.
    ready: BTreeMap<u64, ControlReply>,
}

impl ControlClient {
    pub fn connect(addr: impl ToSocketAddrs, encoding: Box<dyn Encoding>) -> io::Result<Self> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(ControlClient {
            stream,
            encoding,
            next_id: 1,
            pending: BTreeMap::new(),
            ready: BTreeMap::new(),
        })
    }

    pub fn encoding_name(&self) -> &str {
        self.encoding.name()
    }

    /// Abort `wait` calls that exceed this duration instead of blocking
    /// forever.
    pub fn set_read_timeout(&self, timeout: Option<Duration>) -> io::Result<()> {
        self.stream.set_read_timeout(timeout)
    }

    /// Send one call and return its correlation id without waiting for
    /// the reply. `returns` are the declared return specs the reply
    /// will be decoded against.
    pub fn submit(
        &mut self,
        function: &str,
        params: BTreeMap<String, Value>,
        returns: &[ParamSpec],
    ) -> Result<u64, ControlError> {
        let correlation_id = self.next_id;
        self.next_id += 1;
        let call = ControlCall {
            correlation_id,
            function: function.to_string(),
            params,
        };
        let payload = self.encoding.encode_call(&call)?;
        write_frame(&mut self.stream, &payload)?;
        self.pending.insert(correlation_id, returns.to_vec());
        Ok(correlation_id)
    }

    /// Block until the reply for `correlation_id` arrives.
    pub fn wait(&mut self, correlation_id: u64) -> Result<ControlReply, ControlError> {
        if let Some(reply) = self.ready.remove(&correlation_id) {
            return Ok(reply);
        }
        if !self.pending.contains_key(&correlation_id) {
            return Err(ControlError::UnknownCorrelation(correlation_id));
        }
        loop {
            let payload = read_frame(&mut self.stream)?.ok_or(ControlError::Closed {
                pending: self.pending.len(),
            })?;
            let incoming = self.encoding.decode_reply(&payload)?;
            let returns = self
                .pending
                .remove(&incoming.correlation_id)
                .ok_or(ControlError::UnknownCorrelation(incoming.correlation_id))?;
            let reply = incoming.resolve(&returns)?;
            if reply.correlation_id == correlation_id {
                return Ok(reply);
            }
            self.ready.insert(reply.correlation_id, reply);
        }
    }

    /// Convenience: submit one call and wait for its reply.
    pub fn call(
        &mut self,
        function: &str,
        params: BTreeMap<String, Value>,
        returns: &[ParamSpec],
    ) -> Result<ControlReply, ControlError> {
        let id = self.submit(function, params, returns)?;
        self.wait(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::SemanticType;
    use crate::protocol::encoding::{FlatbinEncoding, JsonEncoding};
    use crate::protocol::messages::{SessionState, WireError};
    use std::net::TcpListener;

    /// Fake control server: answers `double(n integer) -> (n integer)`
    /// with n*2, deliberately replying to batches in reverse order so
    /// the client's pipelining has to reorder.
    fn spawn_reversing_server(encoding: &'static dyn Encoding) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        std::thread::spawn(move || {
            let (mut conn, _) = listener.accept().unwrap();
            let spec = [ParamSpec::new("n", SemanticType::Integer)];
            loop {
                // Drain two calls, then answer second-first.
                let mut batch = Vec::new();
                for _ in 0..2 {
                    match read_frame(&mut conn) {
                        Ok(Some(payload)) => {
                            let call = encoding
                                .decode_call(&payload)
                                .unwrap()
                                .resolve(&spec)
                                .unwrap();
                            batch.push(call);
                        }
                        _ => return,
                    }
                }
                batch.reverse();
                for call in batch {
                    let n = match call.params["n"] {
                        Value::Integer(n) => n,
                        _ => unreachable!(),
                    };
                    let reply = ControlReply {
                        correlation_id: call.correlation_id,
                        outcome: if n < 0 {
                            Err(WireError::new("domain_error", "negative input"))
                        } else {
                            Ok(BTreeMap::from([("n".to_string(), Value::Integer(n * 2))]))
                        },
                    };
                    let payload = encoding.encode_reply(&reply).unwrap();
                    write_frame(&mut conn, &payload).unwrap();
                }
            }
        });
        addr
    }

    fn int_params(n: i64) -> BTreeMap<String, Value> {
        BTreeMap::from([("n".to_string(), Value::Integer(n))])
    }

    #[test]
    fn pipelined_calls_reorder_by_correlation_id() {
        for encoding in [&JsonEncoding as &'static dyn Encoding, &FlatbinEncoding] {
            let addr = spawn_reversing_server(encoding);
            let boxed: Box<dyn Encoding> = if encoding.name() == "json" {
                Box::new(JsonEncoding)
            } else {
                Box::new(FlatbinEncoding)
            };
            let mut client = ControlClient::connect(&addr, boxed).unwrap();
            let spec = [ParamSpec::new("n", SemanticType::Integer)];

            let a = client.submit("double", int_params(10), &spec).unwrap();
            let b = client.submit("double", int_params(20), &spec).unwrap();
            assert_ne!(a, b);

            // Waiting for the first-submitted call forces the client to
            // buffer the reply the server sent first (which is b's).
            let ra = client.wait(a).unwrap();
            assert_eq!(ra.outcome.unwrap()["n"], Value::Integer(20));
            let rb = client.wait(b).unwrap();
            assert_eq!(rb.outcome.unwrap()["n"], Value::Integer(40));
        }
    }

    #[test]
    fn error_replies_surface_as_wire_errors() {
        let addr = spawn_reversing_server(&JsonEncoding);
        let mut client = ControlClient::connect(&addr, Box::new(JsonEncoding)).unwrap();
        let spec = [ParamSpec::new("n", SemanticType::Integer)];
        let a = client.submit("double", int_params(-1), &spec).unwrap();
        let b = client.submit("double", int_params(3), &spec).unwrap();
        let ra = client.wait(a).unwrap();
        let err = ra.outcome.unwrap_err();
        assert_eq!(err.kind, "domain_error");
        let rb = client.wait(b).unwrap();
        assert_eq!(rb.outcome.unwrap()["n"], Value::Integer(6));
    }

    #[test]
    fn waiting_on_unknown_id_fails_fast() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let mut client = ControlClient::connect(&addr, Box::new(JsonEncoding)).unwrap();
        match client.wait(99) {
            Err(ControlError::UnknownCorrelation(99)) => {}
            other => panic!("expected UnknownCorrelation, got {other:?}"),
        }
    }

    #[test]
    fn closed_connection_reports_outstanding_calls() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let server = std::thread::spawn(move || {
            // Accept, read one frame, close without replying.
            let (mut conn, _) = listener.accept().unwrap();
            let _ = read_frame(&mut conn);
        });
        let mut client = ControlClient::connect(&addr, Box::new(JsonEncoding)).unwrap();
        let spec = [ParamSpec::new("n", SemanticType::Integer)];
        let id = client.submit("double", int_params(1), &spec).unwrap();
        server.join().unwrap();
        match client.wait(id) {
            Err(ControlError::Closed { pending: 1 }) => {}
            other => panic!("expected Closed, got {other:?}"),
        }
    }

    #[test]
    fn provisioning_flow_against_fake_endpoint() {
        // Minimal fake provisioning server: trust, then a status that
        // needs two polls to turn terminal.
        let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
        let base = format!("http://{}", server.server_addr());
        let handle = std::thread::spawn(move || {
            let mut polls = 0;
            loop {
                let mut req = match server.recv() {
                    Ok(r) => r,
                    Err(_) => return,
                };
                let url = req.url().to_string();
                let respond = |req: tiny_http::Request, body: String| {
                    let res = tiny_http::Response::from_string(body).with_header(
                        tiny_http::Header::from_bytes(
                            &b"Content-Type"[..],
                            &b"application/json"[..],
                        )
                        .unwrap(),
                    );
                    req.respond(res).unwrap();
                };
                if url == "/trust" {
                    let mut body = String::new();
                    req.as_reader().read_to_string(&mut body).unwrap();
                    let trust: TrustRequest = serde_json::from_str(&body).unwrap();
                    assert_eq!(trust.nf_id, "src-1");
                    respond(req, r#"{"token":"00112233445566778899aabbccddeeff"}"#.to_string());
                } else if url == "/provision/status/sess-1" {
                    polls += 1;
                    let state = if polls >= 2 { "complete" } else { "generating" };
                    respond(
                        req,
                        format!(r#"{{"session_id":"sess-1","state":"{state}"}}"#),
                    );
                    if polls >= 2 {
                        return;
                    }
                } else {
                    let res = tiny_http::Response::from_string("{\"error\":\"not found\"}")
                        .with_status_code(404);
                    req.respond(res).unwrap();
                }
            }
        });

        let client = ProvisioningClient::new(&base);
        let token = client.trust("src-1").unwrap();
        assert_eq!(token.len(), 32);
        let status = client
            .await_completion_with("sess-1", Duration::from_secs(5), Duration::from_millis(10))
            .unwrap();
        assert_eq!(status.state, SessionState::Complete);
        handle.join().unwrap();
    }

    #[test]
    fn http_errors_carry_status_and_body() {
        let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
        let base = format!("http://{}", server.server_addr());
        let handle = std::thread::spawn(move || {
            let req = server.recv().unwrap();
            let res = tiny_http::Response::from_string("{\"error\":\"bad token\"}")
                .with_status_code(403);
            req.respond(res).unwrap();
        });
        let client = ProvisioningClient::new(&base);
        let err = client.status("nope").unwrap_err();
        match err {
            ProvisionError::Http { status: 403, body } => assert!(body.contains("bad token")),
            other => panic!("expected Http error, got {other:?}"),
        }
        handle.join().unwrap();
    }
}
