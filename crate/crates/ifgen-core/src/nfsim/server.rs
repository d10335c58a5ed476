//! The NF actor: one simulated network function serving its provisioning
//! endpoint over HTTP and its control interface over framed TCP.
//!
//! Provisioning follows the session lifecycle `received → generating →
//! validating → complete | failed | timeout`, with exactly one terminal
//! state per session: the first writer of a terminal state wins and every
//! later transition is a no-op. Trust tokens are single-use — submitting
//! a CFR consumes the token it rode in on, so concurrent sessions need
//! their own grants and a tampered or replayed token is refused before a
//! session is ever created.
//!
//! The control channel speaks length-prefixed frames in the encoding the
//! accepted CFR negotiated. Until a session completes, every call is
//! answered with `not_provisioned` (encoded as JSON, the default scheme,
//! since no negotiation has happened yet).

use std::collections::BTreeMap;
use std::io::Read;
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codegen::{run_codegen_session, static_check, BindingEntry};
use crate::doc::{render_signature, CfrDocument, ParamSpec};
use crate::gen::{PriceTable, TextBackend};
use crate::metrics::MetricsRecord;
use crate::protocol::{
    read_frame, write_frame, CfrSubmission, ControlReply, Encoding, EncodingRegistry,
    ProvisionStatus, SessionState, TrustGrant, TrustRequest, WireError,
};

use super::clock::SimClock;
use super::executor::NfExecutor;
use super::runtime::run_binding;
use super::variant::VendorProfile;

/// How long a provisioning session may stay non-terminal.
pub const GENERATION_DEADLINE: Duration = Duration::from_secs(120);

/// Everything needed to start one NF actor.
pub struct NfServerConfig {
    pub profile: VendorProfile,
    pub backend: Arc<dyn TextBackend>,
    pub prices: PriceTable,
    /// Seed for the server's token/session-id draws and test vectors.
    pub seed: u64,
    pub clock: SimClock,
    pub generation_deadline: Duration,
    /// 0 picks an ephemeral port.
    pub provisioning_port: u16,
    pub control_port: u16,
}

impl NfServerConfig {
    /// Ephemeral ports, real clock, default deadline.
    pub fn local(profile: VendorProfile, backend: Arc<dyn TextBackend>) -> Self {
        NfServerConfig {
            seed: profile.seed,
            profile,
            backend,
            prices: PriceTable::builtin(),
            clock: SimClock::real(),
            generation_deadline: GENERATION_DEADLINE,
            provisioning_port: 0,
            control_port: 0,
        }
    }
}

struct CommittedFunction {
    binding: BindingEntry,
    params: Vec<ParamSpec>,
    returns: Vec<ParamSpec>,
}

#[derive(Default)]
struct CommitTable {
    /// Encoding scheme of the accepted CFR; None until a session completes.
    encoding: Option<String>,
    functions: BTreeMap<String, CommittedFunction>,
}

struct SessionEntry {
    state: SessionState,
    detail: String,
    functions: Vec<String>,
    attempts: BTreeMap<String, u32>,
    started: Instant,
    records: Vec<MetricsRecord>,
}

struct Shared {
    profile: VendorProfile,
    backend: Arc<dyn TextBackend>,
    prices: PriceTable,
    seed: u64,
    clock: SimClock,
    deadline: Duration,
    encodings: EncodingRegistry,
    counter: AtomicU64,
    /// token → requesting nf_id; entries are removed when spent.
    tokens: Mutex<BTreeMap<String, String>>,
    sessions: Mutex<BTreeMap<String, SessionEntry>>,
    committed: Mutex<CommitTable>,
    executor: Mutex<NfExecutor>,
    shutdown: AtomicBool,
    conns: Mutex<Vec<TcpStream>>,
}

/// A running NF actor; dropping it stops both listeners.
pub struct NfServer {
    shared: Arc<Shared>,
    http: Arc<tiny_http::Server>,
    provisioning_addr: SocketAddr,
    control_addr: SocketAddr,
    handles: Vec<JoinHandle<()>>,
}

fn fnv64(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Shared {
    /// Fresh 16 random bytes as 32 hex chars, keyed on (seed, counter) so
    /// a rerun of the same scenario mints the same tokens while every
    /// draw within a run is distinct.
    fn mint(&self, label: &str) -> String {
        let n = self.counter.fetch_add(1, Ordering::SeqCst);
        let mut rng = ChaCha8Rng::seed_from_u64(fnv64(&format!("{label}:{}:{n}", self.seed)));
        let mut bytes = [0u8; 16];
        rng.fill_bytes(&mut bytes);
        hex(&bytes)
    }

    /// Set a session's state unless it already reached a terminal one.
    fn set_state(&self, session_id: &str, state: SessionState, detail: &str) {
        let mut sessions = self.sessions.lock().unwrap();
        if let Some(s) = sessions.get_mut(session_id) {
            if !s.state.is_terminal() {
                s.state = state;
                s.detail = detail.to_string();
            }
        }
    }

    /// Flip an overdue non-terminal session to `timeout`.
    fn enforce_deadline(&self, s: &mut SessionEntry) {
        if !s.state.is_terminal() && s.started.elapsed() > self.deadline {
            s.state = SessionState::Timeout;
            s.detail = format!(
                "no terminal state within {} ms",
                self.deadline.as_millis()
            );
        }
    }
}

// ---- provisioning worker ----

fn provision_worker(shared: Arc<Shared>, session_id: String, cfr: CfrDocument) {
    shared.set_state(&session_id, SessionState::Generating, "");

    let Some(encoding) = shared.encodings.get(&cfr.encoding_scheme) else {
        shared.set_state(
            &session_id,
            SessionState::Failed,
            &format!("unsupported encoding scheme `{}`", cfr.encoding_scheme),
        );
        return;
    };

    let now_ms = shared.clock.now_ms();
    let out = match run_codegen_session(
        &cfr,
        &shared.profile,
        encoding,
        shared.backend.as_ref(),
        &shared.prices,
        now_ms,
        shared.seed,
    ) {
        Ok(out) => out,
        Err(e) => {
            shared.set_state(&session_id, SessionState::Failed, &e.to_string());
            return;
        }
    };

    {
        let mut sessions = shared.sessions.lock().unwrap();
        if let Some(s) = sessions.get_mut(&session_id) {
            s.attempts = out
                .entries
                .iter()
                .map(|e| (e.requirement.clone(), e.attempts))
                .collect();
            s.functions = cfr
                .entries
                .iter()
                .map(|entry| {
                    let target = out
                        .spec
                        .binding(entry.requirement.name.as_str())
                        .map(|b| b.target.as_str());
                    render_signature(&entry.requirement, target)
                })
                .collect();
            s.records = out.records.clone();
        }
    }

    // Final document-level sweep over the assembled spec: any entry that
    // failed to provision is missing here and gets named.
    shared.set_state(&session_id, SessionState::Validating, "");
    let issues = static_check(&out.spec, &cfr, &shared.profile.api_doc);
    if out.all_provisioned() && issues.is_empty() {
        let mut committed = shared.committed.lock().unwrap();
        committed.encoding = Some(cfr.encoding_scheme.clone());
        for (entry, provision) in cfr.entries.iter().zip(&out.entries) {
            let binding = provision
                .outcome
                .as_ref()
                .expect("all_provisioned checked")
                .binding
                .clone();
            committed.functions.insert(
                entry.requirement.name.as_str().to_string(),
                CommittedFunction {
                    binding,
                    params: entry.requirement.params.clone(),
                    returns: entry.requirement.returns.clone(),
                },
            );
        }
        drop(committed);
        shared.set_state(&session_id, SessionState::Complete, "");
    } else {
        let mut details = out.failure_details();
        details.extend(issues);
        shared.set_state(&session_id, SessionState::Failed, &details.join("; "));
    }
}

// ---- provisioning endpoint ----

fn json_response(status: u16, body: &impl serde::Serialize) -> tiny_http::Response<std::io::Cursor<Vec<u8>>> {
    let body = serde_json::to_vec(body).expect("response types serialize");
    tiny_http::Response::from_data(body)
        .with_status_code(status)
        .with_header(
            tiny_http::Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..])
                .expect("static header"),
        )
}

fn error_response(status: u16, detail: &str) -> tiny_http::Response<std::io::Cursor<Vec<u8>>> {
    json_response(status, &serde_json::json!({ "error": detail }))
}

fn handle_http(shared: &Arc<Shared>, mut req: tiny_http::Request) {
    let method = req.method().clone();
    let url = req.url().to_string();

    let mut body = String::new();
    if req.as_reader().read_to_string(&mut body).is_err() {
        let _ = req.respond(error_response(400, "unreadable request body"));
        return;
    }

    let response = match (method, url.as_str()) {
        (tiny_http::Method::Post, "/trust") => match serde_json::from_str::<TrustRequest>(&body) {
            Ok(trust) => {
                let token = shared.mint("token");
                shared
                    .tokens
                    .lock()
                    .unwrap()
                    .insert(token.clone(), trust.nf_id);
                json_response(200, &TrustGrant { token })
            }
            Err(e) => error_response(400, &format!("bad trust request: {e}")),
        },
        (tiny_http::Method::Get, "/capability") => {
            json_response(200, &shared.profile.capability_doc)
        }
        (tiny_http::Method::Post, "/provision/cfr") => {
            match serde_json::from_str::<CfrSubmission>(&body) {
                Ok(submission) => {
                    let known = shared
                        .tokens
                        .lock()
                        .unwrap()
                        .remove(&submission.token)
                        .is_some();
                    if !known {
                        error_response(403, "invalid or expired trust token")
                    } else {
                        let session_id = format!("s{}", shared.mint("session"));
                        let functions = submission
                            .cfr
                            .entries
                            .iter()
                            .map(|e| render_signature(&e.requirement, None))
                            .collect();
                        shared.sessions.lock().unwrap().insert(
                            session_id.clone(),
                            SessionEntry {
                                state: SessionState::Received,
                                detail: String::new(),
                                functions,
                                attempts: BTreeMap::new(),
                                started: Instant::now(),
                                records: Vec::new(),
                            },
                        );
                        let worker_shared = Arc::clone(shared);
                        let worker_id = session_id.clone();
                        std::thread::spawn(move || {
                            provision_worker(worker_shared, worker_id, submission.cfr)
                        });
                        json_response(
                            200,
                            &crate::protocol::ProvisionAccepted { session_id },
                        )
                    }
                }
                Err(e) => error_response(400, &format!("bad CFR submission: {e}")),
            }
        }
        (tiny_http::Method::Get, path) if path.starts_with("/provision/status/") => {
            let id = &path["/provision/status/".len()..];
            let mut sessions = shared.sessions.lock().unwrap();
            match sessions.get_mut(id) {
                None => error_response(404, "unknown session"),
                Some(s) => {
                    shared.enforce_deadline(s);
                    json_response(
                        200,
                        &ProvisionStatus {
                            session_id: id.to_string(),
                            state: s.state,
                            detail: s.detail.clone(),
                            functions: s.functions.clone(),
                            attempts: s.attempts.clone(),
                        },
                    )
                }
            }
        }
        _ => error_response(404, "no such endpoint"),
    };
    let _ = req.respond(response);
}

// ---- control endpoint ----

fn error_reply(
    enc: &dyn Encoding,
    correlation_id: u64,
    kind: &str,
    detail: &str,
) -> Option<Vec<u8>> {
    let reply = ControlReply {
        correlation_id,
        outcome: Err(WireError::new(kind, detail)),
    };
    enc.encode_reply(&reply).ok()
}

/// Process one control frame, producing the reply frame body.
fn handle_frame(shared: &Arc<Shared>, frame: &[u8]) -> Option<Vec<u8>> {
    // Snapshot the committed view first; it decides the decoding scheme.
    let (enc_name, provisioned) = {
        let committed = shared.committed.lock().unwrap();
        (
            committed.encoding.clone().unwrap_or_else(|| "json".to_string()),
            !committed.functions.is_empty(),
        )
    };
    let enc = shared
        .encodings
        .get(&enc_name)
        .expect("committed encoding is always registered");

    let incoming = match enc.decode_call(frame) {
        Ok(call) => call,
        Err(e) => return error_reply(enc, 0, "decode_error", &e.to_string()),
    };
    let correlation_id = incoming.correlation_id;

    if !provisioned {
        return error_reply(
            enc,
            correlation_id,
            "not_provisioned",
            "no provisioning session has completed on this NF",
        );
    }

    let looked_up = {
        let committed = shared.committed.lock().unwrap();
        committed.functions.get(&incoming.function).map(|f| {
            (f.binding.clone(), f.params.clone(), f.returns.clone())
        })
    };
    let Some((binding, params, _returns)) = looked_up else {
        return error_reply(
            enc,
            correlation_id,
            "unknown_function",
            &format!("`{}` is not a provisioned function", incoming.function),
        );
    };

    let call = match incoming.resolve(&params) {
        Ok(call) => call,
        Err(e) => return error_reply(enc, correlation_id, "decode_error", &e.to_string()),
    };

    let run = {
        let mut exec = shared.executor.lock().unwrap();
        run_binding(&binding, &call.params, &mut exec)
    };
    match run {
        Ok(results) => {
            let reply = ControlReply {
                correlation_id,
                outcome: Ok(results),
            };
            match enc.encode_reply(&reply) {
                Ok(bytes) => Some(bytes),
                Err(e) => error_reply(enc, correlation_id, "encode_error", &e.to_string()),
            }
        }
        Err(e) => error_reply(enc, correlation_id, e.kind(), &e.to_string()),
    }
}

fn connection_loop(shared: Arc<Shared>, mut stream: TcpStream) {
    loop {
        if shared.shutdown.load(Ordering::SeqCst) {
            return;
        }
        match read_frame(&mut stream) {
            Ok(Some(frame)) => {
                if let Some(reply) = handle_frame(&shared, &frame) {
                    if write_frame(&mut stream, &reply).is_err() {
                        return;
                    }
                }
            }
            Ok(None) | Err(_) => return,
        }
    }
}

impl NfServer {
    pub fn start(config: NfServerConfig) -> std::io::Result<NfServer> {
        let http = Arc::new(
            tiny_http::Server::http(("127.0.0.1", config.provisioning_port))
                .map_err(std::io::Error::other)?,
        );
        let provisioning_addr: SocketAddr = http
            .server_addr()
            .to_string()
            .parse()
            .expect("tiny_http reports an IP listen address");
        let listener = TcpListener::bind(("127.0.0.1", config.control_port))?;
        listener.set_nonblocking(true)?;
        let control_addr = listener.local_addr()?;

        let executor = NfExecutor::new(config.profile.clone(), config.clock.clone());
        let shared = Arc::new(Shared {
            profile: config.profile,
            backend: config.backend,
            prices: config.prices,
            seed: config.seed,
            clock: config.clock,
            deadline: config.generation_deadline,
            encodings: EncodingRegistry::builtin(),
            counter: AtomicU64::new(0),
            tokens: Mutex::new(BTreeMap::new()),
            sessions: Mutex::new(BTreeMap::new()),
            committed: Mutex::new(CommitTable::default()),
            executor: Mutex::new(executor),
            shutdown: AtomicBool::new(false),
            conns: Mutex::new(Vec::new()),
        });

        let mut handles = Vec::new();
        for _ in 0..2 {
            let http = Arc::clone(&http);
            let shared = Arc::clone(&shared);
            handles.push(std::thread::spawn(move || loop {
                match http.recv() {
                    Ok(req) => handle_http(&shared, req),
                    Err(_) => return,
                }
            }));
        }

        {
            let shared = Arc::clone(&shared);
            handles.push(std::thread::spawn(move || loop {
                if shared.shutdown.load(Ordering::SeqCst) {
                    return;
                }
                match listener.accept() {
                    Ok((stream, _)) => {
                        let _ = stream.set_nodelay(true);
                        if let Ok(clone) = stream.try_clone() {
                            shared.conns.lock().unwrap().push(clone);
                        }
                        let conn_shared = Arc::clone(&shared);
                        std::thread::spawn(move || connection_loop(conn_shared, stream));
                    }
                    Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                        std::thread::sleep(Duration::from_millis(2));
                    }
                    Err(_) => return,
                }
            }));
        }

        Ok(NfServer {
            shared,
            http,
            provisioning_addr,
            control_addr,
            handles,
        })
    }

    pub fn provisioning_url(&self) -> String {
        format!("http://{}", self.provisioning_addr)
    }

    pub fn control_addr(&self) -> SocketAddr {
        self.control_addr
    }

    pub fn nf_id(&self) -> &str {
        &self.shared.profile.nf_id
    }

    /// Metrics rows collected by a provisioning session, if it exists.
    pub fn session_records(&self, session_id: &str) -> Option<Vec<MetricsRecord>> {
        self.shared
            .sessions
            .lock()
            .unwrap()
            .get(session_id)
            .map(|s| s.records.clone())
    }

    /// Stop both listeners and join every server thread.
    pub fn shutdown(&mut self) {
        self.shared.shutdown.store(true, Ordering::SeqCst);
        for conn in self.shared.conns.lock().unwrap().iter() {
            let _ = conn.shutdown(std::net::Shutdown::Both);
        }
        for handle in self.handles.drain(..) {
            // unblock() wakes at most one thread stuck in recv(), so it
            // has to be repeated for every worker being joined.
            self.http.unblock();
            let _ = handle.join();
        }
    }
}

impl Drop for NfServer {
    fn drop(&mut self) {
        self.shutdown();
    }
}
