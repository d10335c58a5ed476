//! Simulated network functions: deterministic state machines behind
//! vendor-varied internal APIs, with a manual clock for tests.

pub mod catalog;
pub mod clock;
pub mod executor;
pub mod runtime;
pub mod server;
pub mod state;
pub mod units;
pub mod variant;

pub use catalog::{base_catalog, Behavior, CatalogEntry, AP_NAMES, GNB_NAMES};
pub use clock::SimClock;
pub use executor::{replay_events, ExecError, NfExecutor};
pub use runtime::{cast_value, run_binding, RuntimeError};
pub use server::{NfServer, NfServerConfig, GENERATION_DEADLINE};
pub use state::{channel_valid, DomainError, EventRecord, NfState, RadioState, SessionState};
pub use variant::{derive_vendor_variant, FieldTruth, FunctionTruth, VendorProfile};
