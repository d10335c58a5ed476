//! On-demand control-interface generation between network functions.
//!
//! The library is organised around the lifecycle of a generated interface:
//!
//! * [`doc`] — the shared document model: capability documents, requirement
//!   sets, and the control-function-requirement (CFR) document, with one
//!   canonical byte representation used everywhere.
//! * [`gen`] — text-generation backends (deterministic mock and remote HTTP),
//!   embeddings, retrieval, and cost accounting.
//! * [`matching`] — the source-side agent that classifies requirements
//!   against an NF's capability document and assembles the CFR.
//! * [`codegen`] — the NF-side agent that synthesises a binding from the CFR
//!   and the vendor's internal API doc, then validates it against test
//!   vectors with a bounded repair loop.
//! * [`nfsim`] — simulated multi-vendor NFs (WLAN APs and gNBs): catalogs,
//!   vendor variants, deterministic state machines, and the runtime that
//!   serves a validated binding.
//! * [`protocol`] — the provisioning exchange and the post-provisioning
//!   control channel, including both wire encodings.
//! * [`bench`] — the benchmark corpus and harnesses with CSV/SVG reporting.

pub mod bench;
pub mod codegen;
pub mod config;
pub mod demo;
pub mod doc;
pub mod gen;
pub mod matching;
pub mod metrics;
pub mod nfsim;
pub mod protocol;
pub mod value;
