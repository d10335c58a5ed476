//! The provisioning and control protocols between a source NF (the one
//! that needs control functions) and a destination NF (the one that
//! serves them).
//!
//! Provisioning rides plain HTTP/JSON: establish trust, fetch the
//! capability document, submit a CFR, poll the session until it reaches
//! a terminal state. Control is a persistent TCP connection carrying
//! length-prefixed frames in the encoding the CFR negotiated; calls are
//! correlation-id tagged so they can be pipelined.

pub mod client;
pub mod encoding;
pub mod frame;
pub mod messages;
pub mod registry;

pub use client::{await_completion, ControlClient, ControlError, ProvisionError, ProvisioningClient};
pub use encoding::{
    CodecError, Encoding, EncodingRegistry, FlatbinEncoding, IncomingCall, IncomingReply,
    JsonEncoding,
};
pub use frame::{read_frame, write_frame, MAX_FRAME_LEN};
pub use messages::{
    CfrSubmission, ControlCall, ControlReply, ProvisionAccepted, ProvisionStatus, SessionState,
    TrustGrant, TrustRequest, WireError,
};
pub use registry::{NfEndpoint, NfRegistry};
