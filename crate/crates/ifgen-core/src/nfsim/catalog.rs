//! Base control-function catalogs: 30 authored actions per NF class,
//! each pairing an advertised capability with a deterministic behavior
//! over [`NfState`].
//!
//! Behaviors receive arguments in *base shape* — base parameter names,
//! base units, base types. Vendor variants change the internal API's
//! surface; the executor translates variant-shaped calls back to base
//! shape before the behavior runs, so one behavior serves every vendor.

use std::collections::BTreeMap;

use crate::doc::{ControlCapability, Identifier, NfClass, ParamSpec, SemanticType, Unit};
use crate::value::Value;

use super::clock::SimClock;
use super::state::{channel_valid, DomainError, NfState};

pub type BehaviorResult = Result<BTreeMap<String, Value>, DomainError>;
pub type Behavior = fn(&mut NfState, &SimClock, &BTreeMap<String, Value>) -> BehaviorResult;

/// One catalog row: the advertised capability and the state transition
/// implementing it. The base internal function mirrors the capability
/// exactly; vendor variants diverge from there.
#[derive(Clone)]
pub struct CatalogEntry {
    pub capability: ControlCapability,
    pub behavior: Behavior,
}

// ---- argument access (executor has already type-checked) ----

fn arg_text<'a>(args: &'a BTreeMap<String, Value>, name: &str) -> Result<&'a str, DomainError> {
    match args.get(name) {
        Some(Value::Text(s)) => Ok(s),
        other => Err(DomainError::Other(format!(
            "expected text argument `{name}`, got {other:?}"
        ))),
    }
}

fn arg_int(args: &BTreeMap<String, Value>, name: &str) -> Result<i64, DomainError> {
    match args.get(name) {
        Some(Value::Integer(v)) => Ok(*v),
        other => Err(DomainError::Other(format!(
            "expected integer argument `{name}`, got {other:?}"
        ))),
    }
}

fn arg_real(args: &BTreeMap<String, Value>, name: &str) -> Result<f64, DomainError> {
    match args.get(name) {
        Some(Value::Real(v)) => Ok(*v),
        other => Err(DomainError::Other(format!(
            "expected real argument `{name}`, got {other:?}"
        ))),
    }
}

fn arg_bool(args: &BTreeMap<String, Value>, name: &str) -> Result<bool, DomainError> {
    match args.get(name) {
        Some(Value::Boolean(v)) => Ok(*v),
        other => Err(DomainError::Other(format!(
            "expected boolean argument `{name}`, got {other:?}"
        ))),
    }
}

// Shared behaviors serve both classes, so some look an argument up under
// whichever of the class-specific base spellings is present.

fn arg_text_any<'a>(
    args: &'a BTreeMap<String, Value>,
    names: &[&str],
) -> Result<&'a str, DomainError> {
    names
        .iter()
        .find_map(|n| match args.get(*n) {
            Some(Value::Text(s)) => Some(s.as_str()),
            _ => None,
        })
        .ok_or_else(|| {
            DomainError::Other(format!("expected a text argument named one of {names:?}"))
        })
}

fn arg_int_any(args: &BTreeMap<String, Value>, names: &[&str]) -> Result<i64, DomainError> {
    names
        .iter()
        .find_map(|n| match args.get(*n) {
            Some(Value::Integer(v)) => Some(*v),
            _ => None,
        })
        .ok_or_else(|| {
            DomainError::Other(format!("expected an integer argument named one of {names:?}"))
        })
}

fn arg_real_any(args: &BTreeMap<String, Value>, names: &[&str]) -> Result<f64, DomainError> {
    names
        .iter()
        .find_map(|n| match args.get(*n) {
            Some(Value::Real(v)) => Some(*v),
            _ => None,
        })
        .ok_or_else(|| {
            DomainError::Other(format!("expected a real argument named one of {names:?}"))
        })
}

const SESSION_KEYS: &[&str] = &["sta_id", "ue_id"];
const RADIO_KEYS: &[&str] = &["radio_id", "cell_id"];

fn ok_result() -> BTreeMap<String, Value> {
    BTreeMap::from([("ok".to_string(), Value::Boolean(true))])
}

fn one(name: &str, value: Value) -> BTreeMap<String, Value> {
    BTreeMap::from([(name.to_string(), value)])
}

// ---- spec-building shorthand ----

fn p(name: &str, ty: SemanticType) -> ParamSpec {
    ParamSpec::new(name, ty)
}

fn pu(name: &str, ty: SemanticType, unit: Unit) -> ParamSpec {
    ParamSpec::new(name, ty).with_unit(unit)
}

fn cap(
    name: &str,
    description: &str,
    params: Vec<ParamSpec>,
    returns: Vec<ParamSpec>,
    tag: &str,
    behavior: Behavior,
) -> CatalogEntry {
    CatalogEntry {
        capability: ControlCapability {
            name: Identifier::new(name).expect("catalog names are valid identifiers"),
            description: description.to_string(),
            params,
            returns,
            tags: vec![tag.to_string()],
        },
        behavior,
    }
}

// ---- shared behaviors ----

fn b_set_channel(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let radio = arg_text_any(a, RADIO_KEYS)?.to_string();
    let channel = arg_int_any(a, &["channel", "arfcn"])?;
    if !channel_valid(s.nf_class, channel) {
        return Err(DomainError::BadChannel(channel));
    }
    s.radio_mut(&radio)?.channel = channel;
    Ok(ok_result())
}

fn b_get_channel(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let radio = arg_text_any(a, RADIO_KEYS)?;
    Ok(one("channel", Value::Integer(s.radio(radio)?.channel)))
}

fn b_set_tx_power(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let radio = arg_text_any(a, RADIO_KEYS)?.to_string();
    let dbm = arg_real(a, "power")?;
    let mw = crate::nfsim::units::convert(dbm, Unit::Dbm, Unit::Mw)
        .map_err(|e| DomainError::Other(e.to_string()))?;
    if mw <= 0.0 {
        return Err(DomainError::BadPower(mw));
    }
    s.radio_mut(&radio)?.tx_power_mw = mw;
    Ok(ok_result())
}

fn b_get_tx_power(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let radio = arg_text_any(a, RADIO_KEYS)?;
    let dbm = crate::nfsim::units::convert(s.radio(radio)?.tx_power_mw, Unit::Mw, Unit::Dbm)
        .map_err(|e| DomainError::Other(e.to_string()))?;
    Ok(one("power", Value::Real(dbm)))
}

fn b_set_session_rate(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?.to_string();
    let mbps = arg_real(a, "rate")?;
    if mbps < 0.0 {
        return Err(DomainError::BadRate(mbps * 1000.0));
    }
    let session = s.session_mut(&id)?;
    session.rate_kbps = mbps * 1000.0;
    session.rate_updates += 1;
    Ok(ok_result())
}

fn b_get_session_rate(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?;
    Ok(one("rate", Value::Real(s.session(id)?.rate_kbps / 1000.0)))
}

fn b_rate_stats(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?;
    let session = s.session(id)?;
    Ok(BTreeMap::from([
        ("rate".to_string(), Value::Real(session.rate_kbps / 1000.0)),
        (
            "updates".to_string(),
            Value::Integer(session.rate_updates as i64),
        ),
    ]))
}

fn b_set_dl_limit(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?.to_string();
    let mbps = arg_real_any(a, &["rate", "limit"])?;
    if mbps < 0.0 {
        return Err(DomainError::BadRate(mbps * 1000.0));
    }
    let session = s.session_mut(&id)?;
    session.dl_rate_limit_kbps = mbps * 1000.0;
    session.rate_updates += 1;
    Ok(ok_result())
}

fn b_set_ul_limit(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?.to_string();
    let mbps = arg_real_any(a, &["rate", "limit"])?;
    if mbps < 0.0 {
        return Err(DomainError::BadRate(mbps * 1000.0));
    }
    let session = s.session_mut(&id)?;
    session.ul_rate_limit_kbps = mbps * 1000.0;
    session.rate_updates += 1;
    Ok(ok_result())
}

fn b_disconnect(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?.to_string();
    s.session_mut(&id)?.connected = false;
    Ok(ok_result())
}

fn b_list_connected(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    let list: Vec<String> = s
        .sessions
        .iter()
        .filter(|(_, v)| v.connected)
        .map(|(k, _)| k.clone())
        .collect();
    Ok(one("sessions", Value::TextList(list)))
}

fn b_get_signal(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?;
    Ok(one("signal", Value::Real(s.session(id)?.signal_dbm)))
}

fn b_get_bytes(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?;
    let session = s.session(id)?;
    Ok(BTreeMap::from([
        ("rx_bytes".to_string(), Value::Integer(session.rx_bytes)),
        ("tx_bytes".to_string(), Value::Integer(session.tx_bytes)),
    ]))
}

fn b_reset_bytes(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, SESSION_KEYS)?.to_string();
    let session = s.session_mut(&id)?;
    session.rx_bytes = 0;
    session.tx_bytes = 0;
    Ok(ok_result())
}

fn b_set_radio_enabled(
    s: &mut NfState,
    enabled: bool,
    a: &BTreeMap<String, Value>,
) -> BehaviorResult {
    let radio = arg_text_any(a, RADIO_KEYS)?.to_string();
    s.radio_mut(&radio)?.enabled = enabled;
    Ok(ok_result())
}

fn b_enable_radio(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    b_set_radio_enabled(s, true, a)
}

fn b_disable_radio(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    b_set_radio_enabled(s, false, a)
}

fn b_block(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, &["sta_id", "cell_id"])?.to_string();
    if let Some(session) = s.sessions.get_mut(&id) {
        session.connected = false;
    }
    s.blocked.insert(id);
    Ok(ok_result())
}

fn b_unblock(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let id = arg_text_any(a, &["sta_id", "cell_id"])?.to_string();
    s.blocked.remove(&id);
    Ok(ok_result())
}

fn b_list_blocked(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    let list: Vec<String> = s.blocked.iter().cloned().collect();
    Ok(one("sessions", Value::TextList(list)))
}

fn b_reboot(s: &mut NfState, c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    s.boot_count += 1;
    s.attrs
        .insert("last_boot_ms".to_string(), Value::Timestamp(c.now_ms()));
    Ok(ok_result())
}

fn b_uptime(s: &mut NfState, c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    let last = match s.attrs.get("last_boot_ms") {
        Some(Value::Timestamp(t)) => *t,
        _ => 0,
    };
    Ok(one("uptime", Value::Real((c.now_ms() - last) as f64 / 1000.0)))
}

fn set_attr_real(
    s: &mut NfState,
    key: &str,
    value: f64,
    positive: bool,
) -> Result<(), DomainError> {
    if positive && value <= 0.0 {
        return Err(DomainError::Other(format!("{key} must be positive, got {value}")));
    }
    s.attrs.insert(key.to_string(), Value::Real(value));
    Ok(())
}

fn get_attr(s: &NfState, key: &str) -> Value {
    s.attrs.get(key).cloned().unwrap_or(Value::Integer(0))
}

// ---- AP-specific behaviors ----

fn b_set_beacon(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    set_attr_real(s, "beacon_interval_ms", arg_real(a, "interval")?, true)?;
    Ok(ok_result())
}

fn b_get_beacon(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("interval", get_attr(s, "beacon_interval_ms")))
}

fn b_set_ssid(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let ssid = arg_text(a, "ssid")?;
    if ssid.is_empty() || ssid.len() > 32 {
        return Err(DomainError::Other(format!(
            "ssid must be 1..=32 bytes, got {} bytes",
            ssid.len()
        )));
    }
    s.attrs
        .insert("ssid".to_string(), Value::Text(ssid.to_string()));
    Ok(ok_result())
}

fn b_get_ssid(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("ssid", get_attr(s, "ssid")))
}

fn b_set_country(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let country = arg_text(a, "country")?;
    if country.len() != 2 || !country.chars().all(|c| c.is_ascii_uppercase()) {
        return Err(DomainError::Other(format!(
            "country must be a two-letter uppercase code, got `{country}`"
        )));
    }
    s.attrs
        .insert("country".to_string(), Value::Text(country.to_string()));
    Ok(ok_result())
}

fn b_get_country(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("country", get_attr(s, "country")))
}

fn b_set_max_clients(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let limit = arg_int(a, "limit")?;
    if !(1..=1024).contains(&limit) {
        return Err(DomainError::Other(format!(
            "client limit must be in 1..=1024, got {limit}"
        )));
    }
    s.attrs.insert("max_clients".to_string(), Value::Integer(limit));
    Ok(ok_result())
}

fn b_get_max_clients(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("limit", get_attr(s, "max_clients")))
}

fn b_set_led(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let on = arg_bool(a, "on")?;
    s.attrs.insert("led_on".to_string(), Value::Boolean(on));
    Ok(ok_result())
}

fn b_report_ap_caps(_s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    let names = AP_NAMES.iter().map(|n| n.to_string()).collect();
    Ok(one("functions", Value::TextList(names)))
}

// ---- gNB-specific behaviors ----

fn b_handover(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let ue = arg_text(a, "ue_id")?.to_string();
    let cell = arg_text(a, "target_cell")?.to_string();
    s.session(&ue)?;
    s.radio(&cell)?;
    s.bump_counter("handovers", 1);
    Ok(ok_result())
}

fn b_cell_load(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let cell = arg_text_any(a, RADIO_KEYS)?;
    s.radio(cell)?;
    let connected = s.sessions.values().filter(|v| v.connected).count();
    Ok(one("load", Value::Real(connected as f64 / 8.0)))
}

fn b_cell_throughput(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let cell = arg_text_any(a, RADIO_KEYS)?;
    let radio = s.radio(cell)?;
    let mbps = if radio.enabled {
        radio.rate_kbps / 1000.0
    } else {
        0.0
    };
    Ok(one("throughput", Value::Real(mbps)))
}

fn b_set_bandwidth(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let mhz = arg_int(a, "mhz")?;
    if ![5, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100].contains(&mhz) {
        return Err(DomainError::Other(format!("unsupported bandwidth {mhz} MHz")));
    }
    s.attrs.insert("bandwidth_mhz".to_string(), Value::Integer(mhz));
    Ok(ok_result())
}

fn b_get_bandwidth(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("mhz", get_attr(s, "bandwidth_mhz")))
}

fn b_set_paging(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    set_attr_real(s, "paging_cycle_ms", arg_real(a, "cycle")?, true)?;
    Ok(ok_result())
}

fn b_get_paging(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("cycle", get_attr(s, "paging_cycle_ms")))
}

fn b_set_admission(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let threshold = arg_int(a, "threshold")?;
    if !(0..=100).contains(&threshold) {
        return Err(DomainError::Other(format!(
            "admission threshold must be in 0..=100, got {threshold}"
        )));
    }
    s.attrs
        .insert("admission_threshold".to_string(), Value::Integer(threshold));
    Ok(ok_result())
}

fn b_get_admission(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("threshold", get_attr(s, "admission_threshold")))
}

fn b_set_weight(s: &mut NfState, _c: &SimClock, a: &BTreeMap<String, Value>) -> BehaviorResult {
    let weight = arg_int(a, "weight")?;
    if !(0..=100).contains(&weight) {
        return Err(DomainError::Other(format!(
            "scheduling weight must be in 0..=100, got {weight}"
        )));
    }
    s.attrs
        .insert("scheduling_weight".to_string(), Value::Integer(weight));
    Ok(ok_result())
}

fn b_get_weight(s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    Ok(one("weight", get_attr(s, "scheduling_weight")))
}

fn b_report_gnb_caps(_s: &mut NfState, _c: &SimClock, _a: &BTreeMap<String, Value>) -> BehaviorResult {
    let names = GNB_NAMES.iter().map(|n| n.to_string()).collect();
    Ok(one("functions", Value::TextList(names)))
}

/// The 30 AP capability names, in catalog order.
pub const AP_NAMES: [&str; 30] = [
    "set_channel",
    "get_channel",
    "set_tx_power",
    "get_tx_power",
    "set_rate",
    "get_rate",
    "disassociate_sta",
    "list_associated_stas",
    "get_sta_rate_stats",
    "set_sta_rate_limit",
    "get_sta_signal",
    "set_beacon_interval",
    "get_beacon_interval",
    "set_ssid",
    "get_ssid",
    "enable_radio",
    "disable_radio",
    "set_country_code",
    "get_country_code",
    "get_traffic_counters",
    "reset_traffic_counters",
    "set_max_clients",
    "get_max_clients",
    "block_sta",
    "unblock_sta",
    "list_blocked_stas",
    "reboot_ap",
    "get_ap_uptime",
    "set_led_state",
    "report_ap_capabilities",
];

/// The 30 gNB capability names, in catalog order.
pub const GNB_NAMES: [&str; 30] = [
    "set_cell_tx_power",
    "get_cell_tx_power",
    "set_dl_rate_limit",
    "set_ul_rate_limit",
    "getRateStats",
    "releaseUE",
    "list_connected_ues",
    "handover_ue",
    "set_carrier_frequency",
    "get_carrier_frequency",
    "set_bandwidth",
    "get_bandwidth",
    "get_cell_load",
    "set_scheduling_weight",
    "get_scheduling_weight",
    "get_ue_signal_quality",
    "get_cell_throughput",
    "activate_cell",
    "deactivate_cell",
    "set_paging_cycle",
    "get_paging_cycle",
    "set_admission_threshold",
    "get_admission_threshold",
    "bar_cell",
    "unbar_cell",
    "get_ue_throughput_counters",
    "reset_ue_counters",
    "restart_gnb",
    "get_gnb_uptime",
    "report_gnb_capabilities",
];

fn ap_catalog() -> Vec<CatalogEntry> {
    use SemanticType::*;
    vec![
        cap(
            "set_channel",
            "Sets the wireless channel of the given radio.",
            vec![p("radio_id", Text), p("channel", Integer)],
            vec![p("ok", Boolean)],
            "radio",
            b_set_channel,
        ),
        cap(
            "get_channel",
            "Returns the wireless channel the given radio currently operates on.",
            vec![p("radio_id", Text)],
            vec![p("channel", Integer)],
            "radio",
            b_get_channel,
        ),
        cap(
            "set_tx_power",
            "Sets the transmission power of the given radio.",
            vec![p("radio_id", Text), pu("power", Real, Unit::Dbm)],
            vec![p("ok", Boolean)],
            "radio",
            b_set_tx_power,
        ),
        cap(
            "get_tx_power",
            "Returns the current transmission power of the given radio.",
            vec![p("radio_id", Text)],
            vec![pu("power", Real, Unit::Dbm)],
            "radio",
            b_get_tx_power,
        ),
        cap(
            "set_rate",
            "Sets the data rate of the given station.",
            vec![p("sta_id", Text), pu("rate", Real, Unit::Mbps)],
            vec![p("ok", Boolean)],
            "session",
            b_set_session_rate,
        ),
        cap(
            "get_rate",
            "Returns the current data rate of the given station.",
            vec![p("sta_id", Text)],
            vec![pu("rate", Real, Unit::Mbps)],
            "session",
            b_get_session_rate,
        ),
        cap(
            "disassociate_sta",
            "Disconnects the given station from the access point.",
            vec![p("sta_id", Text)],
            vec![p("ok", Boolean)],
            "session",
            b_disconnect,
        ),
        cap(
            "list_associated_stas",
            "Lists the stations currently associated with the access point.",
            vec![],
            vec![p("stas", ListOfText)],
            "session",
            b_list_connected,
        ),
        cap(
            "get_sta_rate_stats",
            "Returns rate statistics for the given station: the current data rate and \
             how many times it was updated.",
            vec![p("sta_id", Text)],
            vec![pu("rate", Real, Unit::Mbps), p("updates", Integer)],
            "telemetry",
            b_rate_stats,
        ),
        cap(
            "set_sta_rate_limit",
            "Caps the downlink rate limit enforced for the given station.",
            vec![p("sta_id", Text), pu("limit", Real, Unit::Mbps)],
            vec![p("ok", Boolean)],
            "session",
            b_set_dl_limit,
        ),
        cap(
            "get_sta_signal",
            "Returns the received signal strength measured for the given station.",
            vec![p("sta_id", Text)],
            vec![pu("signal", Real, Unit::Dbm)],
            "telemetry",
            b_get_signal,
        ),
        cap(
            "set_beacon_interval",
            "Sets the beacon transmission interval of the access point.",
            vec![pu("interval", Real, Unit::Ms)],
            vec![p("ok", Boolean)],
            "radio",
            b_set_beacon,
        ),
        cap(
            "get_beacon_interval",
            "Returns the beacon transmission interval of the access point.",
            vec![],
            vec![pu("interval", Real, Unit::Ms)],
            "radio",
            b_get_beacon,
        ),
        cap(
            "set_ssid",
            "Sets the network name broadcast by the access point.",
            vec![p("ssid", Text)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_ssid,
        ),
        cap(
            "get_ssid",
            "Returns the network name broadcast by the access point.",
            vec![],
            vec![p("ssid", Text)],
            "admin",
            b_get_ssid,
        ),
        cap(
            "enable_radio",
            "Turns the given radio on.",
            vec![p("radio_id", Text)],
            vec![p("ok", Boolean)],
            "radio",
            b_enable_radio,
        ),
        cap(
            "disable_radio",
            "Turns the given radio off.",
            vec![p("radio_id", Text)],
            vec![p("ok", Boolean)],
            "radio",
            b_disable_radio,
        ),
        cap(
            "set_country_code",
            "Sets the regulatory country code of the access point.",
            vec![p("country", Text)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_country,
        ),
        cap(
            "get_country_code",
            "Returns the regulatory country code of the access point.",
            vec![],
            vec![p("country", Text)],
            "admin",
            b_get_country,
        ),
        cap(
            "get_traffic_counters",
            "Returns the received and transmitted byte counters of the given station.",
            vec![p("sta_id", Text)],
            vec![p("rx_bytes", Integer), p("tx_bytes", Integer)],
            "telemetry",
            b_get_bytes,
        ),
        cap(
            "reset_traffic_counters",
            "Zeroes the traffic byte counters of the given station.",
            vec![p("sta_id", Text)],
            vec![p("ok", Boolean)],
            "telemetry",
            b_reset_bytes,
        ),
        cap(
            "set_max_clients",
            "Sets the maximum number of client stations the access point accepts.",
            vec![p("limit", Integer)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_max_clients,
        ),
        cap(
            "get_max_clients",
            "Returns the maximum number of client stations the access point accepts.",
            vec![],
            vec![p("limit", Integer)],
            "admin",
            b_get_max_clients,
        ),
        cap(
            "block_sta",
            "Adds the given station to the deny list and disconnects it.",
            vec![p("sta_id", Text)],
            vec![p("ok", Boolean)],
            "session",
            b_block,
        ),
        cap(
            "unblock_sta",
            "Removes the given station from the deny list.",
            vec![p("sta_id", Text)],
            vec![p("ok", Boolean)],
            "session",
            b_unblock,
        ),
        cap(
            "list_blocked_stas",
            "Lists the stations currently on the deny list.",
            vec![],
            vec![p("stas", ListOfText)],
            "session",
            b_list_blocked,
        ),
        cap(
            "reboot_ap",
            "Reboots the access point immediately.",
            vec![],
            vec![p("ok", Boolean)],
            "admin",
            b_reboot,
        ),
        cap(
            "get_ap_uptime",
            "Returns the time elapsed since the access point last booted.",
            vec![],
            vec![pu("uptime", Real, Unit::S)],
            "admin",
            b_uptime,
        ),
        cap(
            "set_led_state",
            "Turns the status LED of the access point on or off.",
            vec![p("on", Boolean)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_led,
        ),
        cap(
            "report_ap_capabilities",
            "Reports the names of all control functions this access point supports.",
            vec![],
            vec![p("functions", ListOfText)],
            "admin",
            b_report_ap_caps,
        ),
    ]
}

fn gnb_catalog() -> Vec<CatalogEntry> {
    use SemanticType::*;
    vec![
        cap(
            "set_cell_tx_power",
            "Sets the transmission power of the given cell.",
            vec![p("cell_id", Text), pu("power", Real, Unit::Dbm)],
            vec![p("ok", Boolean)],
            "radio",
            b_set_tx_power,
        ),
        cap(
            "get_cell_tx_power",
            "Returns the current transmission power of the given cell.",
            vec![p("cell_id", Text)],
            vec![pu("power", Real, Unit::Dbm)],
            "radio",
            b_get_tx_power,
        ),
        cap(
            "set_dl_rate_limit",
            "Caps the downlink data rate of the given user equipment.",
            vec![p("ue_id", Text), pu("rate", Real, Unit::Mbps)],
            vec![p("ok", Boolean)],
            "session",
            b_set_dl_limit,
        ),
        cap(
            "set_ul_rate_limit",
            "Caps the uplink data rate of the given user equipment.",
            vec![p("ue_id", Text), pu("rate", Real, Unit::Mbps)],
            vec![p("ok", Boolean)],
            "session",
            b_set_ul_limit,
        ),
        cap(
            "getRateStats",
            "Returns rate statistics for the given user equipment: the current data \
             rate and how many times it was updated.",
            vec![p("ue_id", Text)],
            vec![pu("rate", Real, Unit::Mbps), p("updates", Integer)],
            "telemetry",
            b_rate_stats,
        ),
        cap(
            "releaseUE",
            "Releases the given user equipment from the cell.",
            vec![p("ue_id", Text)],
            vec![p("ok", Boolean)],
            "session",
            b_disconnect,
        ),
        cap(
            "list_connected_ues",
            "Lists the user equipments currently connected to the cell.",
            vec![],
            vec![p("ues", ListOfText)],
            "session",
            b_list_connected,
        ),
        cap(
            "handover_ue",
            "Hands the given user equipment over to the target cell.",
            vec![p("ue_id", Text), p("target_cell", Text)],
            vec![p("ok", Boolean)],
            "session",
            b_handover,
        ),
        cap(
            "set_carrier_frequency",
            "Tunes the given cell to the specified carrier frequency point.",
            vec![p("cell_id", Text), p("arfcn", Integer)],
            vec![p("ok", Boolean)],
            "radio",
            b_set_channel,
        ),
        cap(
            "get_carrier_frequency",
            "Returns the carrier frequency point the given cell is tuned to.",
            vec![p("cell_id", Text)],
            vec![p("arfcn", Integer)],
            "radio",
            b_get_channel,
        ),
        cap(
            "set_bandwidth",
            "Sets the channel bandwidth of the cell in megahertz.",
            vec![p("mhz", Integer)],
            vec![p("ok", Boolean)],
            "radio",
            b_set_bandwidth,
        ),
        cap(
            "get_bandwidth",
            "Returns the channel bandwidth of the cell in megahertz.",
            vec![],
            vec![p("mhz", Integer)],
            "radio",
            b_get_bandwidth,
        ),
        cap(
            "get_cell_load",
            "Returns the current load of the given cell as a fraction.",
            vec![p("cell_id", Text)],
            vec![pu("load", Real, Unit::Unitless)],
            "telemetry",
            b_cell_load,
        ),
        cap(
            "set_scheduling_weight",
            "Sets the scheduler priority weight of the cell.",
            vec![p("weight", Integer)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_weight,
        ),
        cap(
            "get_scheduling_weight",
            "Returns the scheduler priority weight of the cell.",
            vec![],
            vec![p("weight", Integer)],
            "admin",
            b_get_weight,
        ),
        cap(
            "get_ue_signal_quality",
            "Returns the reference signal power measured for the given user equipment.",
            vec![p("ue_id", Text)],
            vec![pu("rsrp", Real, Unit::Dbm)],
            "telemetry",
            b_get_signal,
        ),
        cap(
            "get_cell_throughput",
            "Returns the aggregate throughput currently served by the given cell.",
            vec![p("cell_id", Text)],
            vec![pu("throughput", Real, Unit::Mbps)],
            "telemetry",
            b_cell_throughput,
        ),
        cap(
            "activate_cell",
            "Brings the given cell into service.",
            vec![p("cell_id", Text)],
            vec![p("ok", Boolean)],
            "radio",
            b_enable_radio,
        ),
        cap(
            "deactivate_cell",
            "Takes the given cell out of service.",
            vec![p("cell_id", Text)],
            vec![p("ok", Boolean)],
            "radio",
            b_disable_radio,
        ),
        cap(
            "set_paging_cycle",
            "Sets the paging cycle duration of the cell.",
            vec![pu("cycle", Real, Unit::Ms)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_paging,
        ),
        cap(
            "get_paging_cycle",
            "Returns the paging cycle duration of the cell.",
            vec![],
            vec![pu("cycle", Real, Unit::Ms)],
            "admin",
            b_get_paging,
        ),
        cap(
            "set_admission_threshold",
            "Sets the admission control load threshold of the cell.",
            vec![p("threshold", Integer)],
            vec![p("ok", Boolean)],
            "admin",
            b_set_admission,
        ),
        cap(
            "get_admission_threshold",
            "Returns the admission control load threshold of the cell.",
            vec![],
            vec![p("threshold", Integer)],
            "admin",
            b_get_admission,
        ),
        cap(
            "bar_cell",
            "Bars the given cell so new connections are rejected.",
            vec![p("cell_id", Text)],
            vec![p("ok", Boolean)],
            "admin",
            b_block,
        ),
        cap(
            "unbar_cell",
            "Unbars the given cell so new connections are accepted again.",
            vec![p("cell_id", Text)],
            vec![p("ok", Boolean)],
            "admin",
            b_unblock,
        ),
        cap(
            "get_ue_throughput_counters",
            "Returns the received and transmitted byte counters of the given user equipment.",
            vec![p("ue_id", Text)],
            vec![p("rx_bytes", Integer), p("tx_bytes", Integer)],
            "telemetry",
            b_get_bytes,
        ),
        cap(
            "reset_ue_counters",
            "Zeroes the traffic byte counters of the given user equipment.",
            vec![p("ue_id", Text)],
            vec![p("ok", Boolean)],
            "telemetry",
            b_reset_bytes,
        ),
        cap(
            "restart_gnb",
            "Restarts the base station immediately.",
            vec![],
            vec![p("ok", Boolean)],
            "admin",
            b_reboot,
        ),
        cap(
            "get_gnb_uptime",
            "Returns the time elapsed since the base station last restarted.",
            vec![],
            vec![pu("uptime", Real, Unit::S)],
            "admin",
            b_uptime,
        ),
        cap(
            "report_gnb_capabilities",
            "Reports the names of all control functions this base station supports.",
            vec![],
            vec![p("functions", ListOfText)],
            "admin",
            b_report_gnb_caps,
        ),
    ]
}

/// The authored base catalog for one NF class: exactly 30 entries.
pub fn base_catalog(class: NfClass) -> Vec<CatalogEntry> {
    match class {
        NfClass::WlanAp => ap_catalog(),
        NfClass::Gnb => gnb_catalog(),
    }
}
