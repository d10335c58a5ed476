//! Simulated NF state and the behavior calling convention.
//!
//! One `NfState` per simulated NF, owned by a single executor. Behaviors
//! are plain functions over the state: deterministic transitions and
//! queries, no background activity — every observable change traces back
//! to exactly one logged invocation, which is what makes event-log replay
//! a usable oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::NfClass;
use crate::value::Value;

/// Per-radio (AP) or per-cell (gNB) settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioState {
    pub channel: i64,
    /// Transmission power, stored canonically in mW. Always > 0.
    pub tx_power_mw: f64,
    /// Default rate limit, stored canonically in kbps.
    pub rate_kbps: f64,
    pub enabled: bool,
}

/// Per-station (AP) or per-UE (gNB) session entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub connected: bool,
    /// Current data rate in kbps.
    pub rate_kbps: f64,
    /// Downlink rate limit in kbps; 0 means unlimited.
    pub dl_rate_limit_kbps: f64,
    /// Uplink rate limit in kbps; 0 means unlimited.
    pub ul_rate_limit_kbps: f64,
    /// Signal strength seen for this session, in dBm.
    pub signal_dbm: f64,
    /// How many times any rate field of this session was changed.
    pub rate_updates: u64,
    pub rx_bytes: i64,
    pub tx_bytes: i64,
}

/// One appended entry per successful internal invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub seq: u64,
    pub at_ms: i64,
    /// Internal function name as invoked (vendor spelling).
    pub function: String,
    /// Arguments in canonical base shape (base param names and units), so
    /// replay does not depend on vendor spelling.
    pub args: BTreeMap<String, Value>,
}

/// The whole mutable state of one simulated NF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NfState {
    pub nf_class: NfClass,
    pub radios: BTreeMap<String, RadioState>,
    pub sessions: BTreeMap<String, SessionState>,
    pub blocked: BTreeSet<String>,
    /// Named scalar settings (ssid, country code, beacon interval, ...).
    pub attrs: BTreeMap<String, Value>,
    /// Named monotonic counters (traffic bytes, handovers, ...).
    pub counters: BTreeMap<String, i64>,
    pub event_log: Vec<EventRecord>,
    pub boot_count: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("unknown radio `{0}`")]
    UnknownRadio(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("channel {0} is not valid for this NF class")]
    BadChannel(i64),
    #[error("transmission power must be positive, got {0} mW")]
    BadPower(f64),
    #[error("rate must be non-negative, got {0} kbps")]
    BadRate(f64),
    #[error("{0}")]
    Other(String),
}

/// Valid channel numbers per class. APs use 2.4/5 GHz channel numbers;
/// gNBs use a compact NR-ARFCN-style range.
pub fn channel_valid(class: NfClass, channel: i64) -> bool {
    match class {
        NfClass::WlanAp => {
            (1..=13).contains(&channel)
                || [36, 40, 44, 48, 149, 153, 157, 161].contains(&channel)
        }
        NfClass::Gnb => (620_000..=680_000).contains(&channel),
    }
}

impl NfState {
    /// Deterministic initial state: two radios/cells, four sessions,
    /// zeroed counters.
    pub fn initial(class: NfClass) -> NfState {
        let radio = |channel: i64| RadioState {
            channel,
            tx_power_mw: 100.0,
            rate_kbps: 54_000.0,
            enabled: true,
        };
        let session = |i: i64| SessionState {
            connected: true,
            rate_kbps: 10_000.0,
            dl_rate_limit_kbps: 0.0,
            ul_rate_limit_kbps: 0.0,
            signal_dbm: -50.0 - 5.0 * i as f64,
            rate_updates: 0,
            rx_bytes: i * 10_000,
            tx_bytes: i * 20_000,
        };
        let (radio_prefix, session_prefix, channels) = match class {
            NfClass::WlanAp => ("r", "sta", [6, 36]),
            NfClass::Gnb => ("c", "ue", [628_000, 640_000]),
        };
        let radios = channels
            .iter()
            .enumerate()
            .map(|(i, ch)| (format!("{radio_prefix}{i}"), radio(*ch)))
            .collect();
        let sessions = (1..=4)
            .map(|i| (format!("{session_prefix}{i}"), session(i)))
            .collect();
        let mut attrs = BTreeMap::new();
        attrs.insert("last_boot_ms".to_string(), Value::Timestamp(0));
        match class {
            NfClass::WlanAp => {
                attrs.insert("ssid".to_string(), Value::Text("lab-net".to_string()));
                attrs.insert("country".to_string(), Value::Text("DE".to_string()));
                attrs.insert("beacon_interval_ms".to_string(), Value::Real(100.0));
                attrs.insert("max_clients".to_string(), Value::Integer(32));
                attrs.insert("led_on".to_string(), Value::Boolean(true));
            }
            NfClass::Gnb => {
                attrs.insert("bandwidth_mhz".to_string(), Value::Integer(100));
                attrs.insert("paging_cycle_ms".to_string(), Value::Real(1280.0));
                attrs.insert("admission_threshold".to_string(), Value::Integer(80));
                attrs.insert("scheduling_weight".to_string(), Value::Integer(50));
            }
        }
        NfState {
            nf_class: class,
            radios,
            sessions,
            blocked: BTreeSet::new(),
            attrs,
            counters: BTreeMap::new(),
            event_log: Vec::new(),
            boot_count: 0,
        }
    }

    pub fn radio(&self, id: &str) -> Result<&RadioState, DomainError> {
        self.radios
            .get(id)
            .ok_or_else(|| DomainError::UnknownRadio(id.to_string()))
    }

    pub fn radio_mut(&mut self, id: &str) -> Result<&mut RadioState, DomainError> {
        self.radios
            .get_mut(id)
            .ok_or_else(|| DomainError::UnknownRadio(id.to_string()))
    }

    pub fn session(&self, id: &str) -> Result<&SessionState, DomainError> {
        self.sessions
            .get(id)
            .ok_or_else(|| DomainError::UnknownSession(id.to_string()))
    }

    pub fn session_mut(&mut self, id: &str) -> Result<&mut SessionState, DomainError> {
        self.sessions
            .get_mut(id)
            .ok_or_else(|| DomainError::UnknownSession(id.to_string()))
    }

    pub fn counter(&self, name: &str) -> i64 {
        self.counters.get(name).copied().unwrap_or(0)
    }

    pub fn bump_counter(&mut self, name: &str, by: i64) {
        *self.counters.entry(name.to_string()).or_insert(0) += by;
    }

    /// Snapshot without the event log — what behavioral-equivalence
    /// comparisons look at (logs differ in vendor spelling).
    pub fn observable(&self) -> NfState {
        let mut s = self.clone();
        s.event_log.clear();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_is_deterministic_and_valid() {
        let a = NfState::initial(NfClass::WlanAp);
        let b = NfState::initial(NfClass::WlanAp);
        assert_eq!(a, b);
        assert_eq!(a.radios.len(), 2);
        assert_eq!(a.sessions.len(), 4);
        assert!(a.radios.values().all(|r| r.tx_power_mw > 0.0));
        assert!(a
            .radios
            .values()
            .all(|r| channel_valid(NfClass::WlanAp, r.channel)));
        let g = NfState::initial(NfClass::Gnb);
        assert!(g
            .radios
            .values()
            .all(|r| channel_valid(NfClass::Gnb, r.channel)));
    }

    #[test]
    fn channel_sets_are_class_specific() {
        assert!(channel_valid(NfClass::WlanAp, 6));
        assert!(channel_valid(NfClass::WlanAp, 161));
        assert!(!channel_valid(NfClass::WlanAp, 14));
        assert!(!channel_valid(NfClass::WlanAp, 628_000));
        assert!(channel_valid(NfClass::Gnb, 628_000));
        assert!(!channel_valid(NfClass::Gnb, 6));
    }
}
