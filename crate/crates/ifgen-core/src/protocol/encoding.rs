//! Payload encodings for the control channel.
//!
//! Two encodings ship by default and both sides negotiate one per CFR:
//!
//! * `json` — human-readable JSON. Parameter and result values travel
//!   untagged (`17` not `{"type":"integer","value":17}`), so decoding
//!   them requires the declared signature of the function being called.
//! * `flatbin` — a compact binary form with explicit type tags, so
//!   payloads decode without signature context.
//!
//! The signature dependency of `json` forces a two-phase decode: the
//! envelope (correlation id, function name, raw payload) first, then
//! [`IncomingCall::resolve`] / [`IncomingReply::resolve`] once the caller
//! has looked up the expected parameter or return specs. `flatbin` goes
//! through the same interface and simply verifies its already-typed
//! values against the specs at resolve time.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::doc::ParamSpec;
use crate::protocol::messages::{ControlCall, ControlReply, WireError};
use crate::value::Value;

/// Failure while encoding or decoding a control payload.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("malformed {encoding} payload: {detail}")]
    Malformed { encoding: &'static str, detail: String },
    #[error("cannot encode {encoding} payload: {detail}")]
    Unencodable { encoding: &'static str, detail: String },
}

impl CodecError {
    fn malformed(encoding: &'static str, detail: impl Into<String>) -> Self {
        CodecError::Malformed { encoding, detail: detail.into() }
    }

    /// The control-channel error kind this failure maps to.
    pub fn kind(&self) -> &'static str {
        match self {
            CodecError::Malformed { .. } => "decode_error",
            CodecError::Unencodable { .. } => "encode_error",
        }
    }
}

/// Raw field values pulled off the wire before signature resolution.
#[derive(Debug, Clone)]
enum RawFields {
    /// Untagged JSON: types are ambiguous until matched against specs.
    Json(serde_json::Map<String, serde_json::Value>),
    /// Self-describing binary: already typed, specs only verify.
    Typed(BTreeMap<String, Value>),
}

impl RawFields {
    /// Match the raw fields against declared specs, strictly: every
    /// declared field must be present, no extras tolerated.
    fn resolve(&self, encoding: &'static str, specs: &[ParamSpec]) -> Result<BTreeMap<String, Value>, CodecError> {
        let mut out = BTreeMap::new();
        match self {
            RawFields::Json(map) => {
                for spec in specs {
                    let name = spec.name.as_str();
                    let raw = map.get(name).ok_or_else(|| {
                        CodecError::malformed(encoding, format!("missing field `{name}`"))
                    })?;
                    let value = Value::from_wire_json(raw, spec.semantic_type).map_err(|e| {
                        CodecError::malformed(encoding, format!("field `{name}`: {e}"))
                    })?;
                    out.insert(name.to_string(), value);
                }
                if map.len() != specs.len() {
                    let extra = map
                        .keys()
                        .find(|k| !specs.iter().any(|s| s.name.as_str() == k.as_str()))
                        .cloned()
                        .unwrap_or_default();
                    return Err(CodecError::malformed(encoding, format!("unexpected field `{extra}`")));
                }
            }
            RawFields::Typed(map) => {
                for spec in specs {
                    let name = spec.name.as_str();
                    let value = map.get(name).ok_or_else(|| {
                        CodecError::malformed(encoding, format!("missing field `{name}`"))
                    })?;
                    if value.semantic_type() != spec.semantic_type {
                        return Err(CodecError::malformed(
                            encoding,
                            format!(
                                "field `{name}` is {}, expected {}",
                                value.semantic_type(),
                                spec.semantic_type
                            ),
                        ));
                    }
                    out.insert(name.to_string(), value.clone());
                }
                if map.len() != specs.len() {
                    let extra = map
                        .keys()
                        .find(|k| !specs.iter().any(|s| s.name.as_str() == k.as_str()))
                        .cloned()
                        .unwrap_or_default();
                    return Err(CodecError::malformed(encoding, format!("unexpected field `{extra}`")));
                }
            }
        }
        Ok(out)
    }
}

/// A decoded call envelope whose parameters still need signature
/// resolution. The server peeks `function` to find the binding, then
/// calls [`IncomingCall::resolve`] with the declared parameter specs.
#[derive(Debug, Clone)]
pub struct IncomingCall {
    pub correlation_id: u64,
    pub function: String,
    encoding: &'static str,
    params: RawFields,
}

impl IncomingCall {
    pub fn resolve(&self, params: &[ParamSpec]) -> Result<ControlCall, CodecError> {
        Ok(ControlCall {
            correlation_id: self.correlation_id,
            function: self.function.clone(),
            params: self.params.resolve(self.encoding, params)?,
        })
    }
}

/// A decoded reply envelope. The client matches `correlation_id` to the
/// call it has in flight, then resolves results against that function's
/// declared returns. Error replies carry no typed fields and resolve
/// without specs.
#[derive(Debug, Clone)]
pub struct IncomingReply {
    pub correlation_id: u64,
    encoding: &'static str,
    outcome: Result<RawFields, WireError>,
}

impl IncomingReply {
    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn resolve(&self, returns: &[ParamSpec]) -> Result<ControlReply, CodecError> {
        let outcome = match &self.outcome {
            Ok(fields) => Ok(fields.resolve(self.encoding, returns)?),
            Err(e) => Err(e.clone()),
        };
        Ok(ControlReply { correlation_id: self.correlation_id, outcome })
    }
}

/// One payload encoding. Implementations must be pure: the same message
/// always encodes to the same bytes.
pub trait Encoding: Send + Sync {
    fn name(&self) -> &'static str;
    fn encode_call(&self, call: &ControlCall) -> Result<Vec<u8>, CodecError>;
    fn decode_call(&self, bytes: &[u8]) -> Result<IncomingCall, CodecError>;
    fn encode_reply(&self, reply: &ControlReply) -> Result<Vec<u8>, CodecError>;
    fn decode_reply(&self, bytes: &[u8]) -> Result<IncomingReply, CodecError>;
}

// ---- json ----

/// JSON encoding. Calls look like
/// `{"correlation_id":7,"function":"setpower","params":{"pow":17.5}}`,
/// replies like `{"correlation_id":7,"ok":true,"results":{...}}` or
/// `{"correlation_id":7,"ok":false,"error":{"kind":...,"detail":...}}`.
/// Keys are emitted in sorted order so encoding is byte-stable.
pub struct JsonEncoding;

const JSON: &'static str = "json";

fn json_object(
    v: serde_json::Value,
) -> Result<serde_json::Map<String, serde_json::Value>, String> {
    match v {
        serde_json::Value::Object(m) => Ok(m),
        other => Err(format!("expected object, got {other}")),
    }
}

fn get_u64(map: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<u64, String> {
    map.get(key)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| format!("missing or non-integer `{key}`"))
}

impl Encoding for JsonEncoding {
    fn name(&self) -> &'static str {
        JSON
    }

    fn encode_call(&self, call: &ControlCall) -> Result<Vec<u8>, CodecError> {
        let params: serde_json::Map<String, serde_json::Value> = call
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.to_wire_json()))
            .collect();
        let body = json!({
            "correlation_id": call.correlation_id,
            "function": call.function,
            "params": params,
        });
        Ok(serde_json::to_vec(&body).expect("json value serializes"))
    }

    fn decode_call(&self, bytes: &[u8]) -> Result<IncomingCall, CodecError> {
        let root: serde_json::Value = serde_json::from_slice(bytes)
            .map_err(|e| CodecError::malformed(JSON, e.to_string()))?;
        let map = json_object(root).map_err(|e| CodecError::malformed(JSON, e))?;
        let correlation_id =
            get_u64(&map, "correlation_id").map_err(|e| CodecError::malformed(JSON, e))?;
        let function = map
            .get("function")
            .and_then(|v| v.as_str())
            .ok_or_else(|| CodecError::malformed(JSON, "missing or non-string `function`"))?
            .to_string();
        let params = map
            .get("params")
            .cloned()
            .ok_or_else(|| CodecError::malformed(JSON, "missing `params`"))?;
        let params = json_object(params)
            .map_err(|e| CodecError::malformed(JSON, format!("params: {e}")))?;
        Ok(IncomingCall {
            correlation_id,
            function,
            encoding: JSON,
            params: RawFields::Json(params),
        })
    }

    fn encode_reply(&self, reply: &ControlReply) -> Result<Vec<u8>, CodecError> {
        let body = match &reply.outcome {
            Ok(results) => {
                let results: serde_json::Map<String, serde_json::Value> = results
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_wire_json()))
                    .collect();
                json!({
                    "correlation_id": reply.correlation_id,
                    "ok": true,
                    "results": results,
                })
            }
            Err(e) => json!({
                "correlation_id": reply.correlation_id,
                "ok": false,
                "error": {"kind": e.kind, "detail": e.detail},
            }),
        };
        Ok(serde_json::to_vec(&body).expect("json value serializes"))
    }

    fn decode_reply(&self, bytes: &[u8]) -> Result<IncomingReply, CodecError> {
        let root: serde_json::Value = serde_json::from_slice(bytes)
            .map_err(|e| CodecError::malformed(JSON, e.to_string()))?;
        let map = json_object(root).map_err(|e| CodecError::malformed(JSON, e))?;
        let correlation_id =
            get_u64(&map, "correlation_id").map_err(|e| CodecError::malformed(JSON, e))?;
        let ok = map
            .get("ok")
            .and_then(|v| v.as_bool())
            .ok_or_else(|| CodecError::malformed(JSON, "missing or non-boolean `ok`"))?;
        let outcome = if ok {
            let results = map
                .get("results")
                .cloned()
                .ok_or_else(|| CodecError::malformed(JSON, "ok reply missing `results`"))?;
            let results = json_object(results)
                .map_err(|e| CodecError::malformed(JSON, format!("results: {e}")))?;
            Ok(RawFields::Json(results))
        } else {
            let err = map
                .get("error")
                .cloned()
                .ok_or_else(|| CodecError::malformed(JSON, "error reply missing `error`"))?;
            let err: WireError = serde_json::from_value(err)
                .map_err(|e| CodecError::malformed(JSON, format!("error: {e}")))?;
            Err(err)
        };
        Ok(IncomingReply { correlation_id, encoding: JSON, outcome })
    }
}

// ---- flatbin ----

/// Compact binary encoding. All integers are big-endian. Layout:
///
/// ```text
/// call  := 0x01 corr:u64 fname:str16 count:u16 (name:str16 value)*
/// reply := 0x02 corr:u64 0x01 count:u16 (name:str16 value)*      -- ok
///        | 0x02 corr:u64 0x00 kind:str16 detail:str32            -- error
/// value := 0x00 str32            -- text
///        | 0x01 i64               -- integer
///        | 0x02 f64-bits          -- real
///        | 0x03 u8                -- boolean (0|1)
///        | 0x04 i64               -- timestamp (ms)
///        | 0x05 count:u16 str32*  -- list-of-text
/// str16 := len:u16 utf8-bytes; str32 := len:u32 utf8-bytes
/// ```
///
/// Decoding consumes the whole buffer; trailing bytes are an error.
pub struct FlatbinEncoding;

const FLATBIN: &'static str = "flatbin";

const KIND_CALL: u8 = 0x01;
const KIND_REPLY: u8 = 0x02;

const TAG_TEXT: u8 = 0x00;
const TAG_INTEGER: u8 = 0x01;
const TAG_REAL: u8 = 0x02;
const TAG_BOOLEAN: u8 = 0x03;
const TAG_TIMESTAMP: u8 = 0x04;
const TAG_LIST: u8 = 0x05;

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        if self.buf.len() - self.pos < n {
            return Err(CodecError::malformed(
                FLATBIN,
                format!("truncated: wanted {n} bytes at offset {}", self.pos),
            ));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, CodecError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, CodecError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CodecError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64, CodecError> {
        Ok(i64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, CodecError> {
        Ok(f64::from_bits(self.u64()?))
    }

    fn str16(&mut self) -> Result<String, CodecError> {
        let len = self.u16()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| CodecError::malformed(FLATBIN, "invalid utf-8 in string"))
    }

    fn str32(&mut self) -> Result<String, CodecError> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| CodecError::malformed(FLATBIN, "invalid utf-8 in string"))
    }

    fn finish(&self) -> Result<(), CodecError> {
        if self.pos != self.buf.len() {
            return Err(CodecError::malformed(
                FLATBIN,
                format!("{} trailing bytes after message", self.buf.len() - self.pos),
            ));
        }
        Ok(())
    }
}

fn put_str16(out: &mut Vec<u8>, s: &str) -> Result<(), CodecError> {
    let len: u16 = s
        .len()
        .try_into()
        .map_err(|_| CodecError::Unencodable { encoding: FLATBIN, detail: format!("string of {} bytes exceeds u16 length", s.len()) })?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

fn put_str32(out: &mut Vec<u8>, s: &str) -> Result<(), CodecError> {
    let len: u32 = s
        .len()
        .try_into()
        .map_err(|_| CodecError::Unencodable { encoding: FLATBIN, detail: format!("string of {} bytes exceeds u32 length", s.len()) })?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

fn put_value(out: &mut Vec<u8>, v: &Value) -> Result<(), CodecError> {
    match v {
        Value::Text(s) => {
            out.push(TAG_TEXT);
            put_str32(out, s)?;
        }
        Value::Integer(i) => {
            out.push(TAG_INTEGER);
            out.extend_from_slice(&i.to_be_bytes());
        }
        Value::Real(x) => {
            out.push(TAG_REAL);
            out.extend_from_slice(&x.to_bits().to_be_bytes());
        }
        Value::Boolean(b) => {
            out.push(TAG_BOOLEAN);
            out.push(u8::from(*b));
        }
        Value::Timestamp(ms) => {
            out.push(TAG_TIMESTAMP);
            out.extend_from_slice(&ms.to_be_bytes());
        }
        Value::TextList(items) => {
            out.push(TAG_LIST);
            let count: u16 = items.len().try_into().map_err(|_| CodecError::Unencodable {
                encoding: FLATBIN,
                detail: format!("list of {} items exceeds u16 count", items.len()),
            })?;
            out.extend_from_slice(&count.to_be_bytes());
            for item in items {
                put_str32(out, item)?;
            }
        }
    }
    Ok(())
}

fn read_value(r: &mut Reader<'_>) -> Result<Value, CodecError> {
    let tag = r.u8()?;
    Ok(match tag {
        TAG_TEXT => Value::Text(r.str32()?),
        TAG_INTEGER => Value::Integer(r.i64()?),
        TAG_REAL => Value::Real(r.f64()?),
        TAG_BOOLEAN => match r.u8()? {
            0 => Value::Boolean(false),
            1 => Value::Boolean(true),
            other => {
                return Err(CodecError::malformed(FLATBIN, format!("boolean byte {other:#04x}")))
            }
        },
        TAG_TIMESTAMP => Value::Timestamp(r.i64()?),
        TAG_LIST => {
            let count = r.u16()? as usize;
            let mut items = Vec::with_capacity(count.min(1024));
            for _ in 0..count {
                items.push(r.str32()?);
            }
            Value::TextList(items)
        }
        other => return Err(CodecError::malformed(FLATBIN, format!("unknown value tag {other:#04x}"))),
    })
}

fn put_fields(out: &mut Vec<u8>, fields: &BTreeMap<String, Value>) -> Result<(), CodecError> {
    let count: u16 = fields.len().try_into().map_err(|_| CodecError::Unencodable {
        encoding: FLATBIN,
        detail: format!("{} fields exceed u16 count", fields.len()),
    })?;
    out.extend_from_slice(&count.to_be_bytes());
    for (name, value) in fields {
        put_str16(out, name)?;
        put_value(out, value)?;
    }
    Ok(())
}

fn read_fields(r: &mut Reader<'_>) -> Result<BTreeMap<String, Value>, CodecError> {
    let count = r.u16()?;
    let mut fields = BTreeMap::new();
    for _ in 0..count {
        let name = r.str16()?;
        let value = read_value(r)?;
        if fields.insert(name.clone(), value).is_some() {
            return Err(CodecError::malformed(FLATBIN, format!("duplicate field `{name}`")));
        }
    }
    Ok(fields)
}

impl Encoding for FlatbinEncoding {
    fn name(&self) -> &'static str {
        FLATBIN
    }

    fn encode_call(&self, call: &ControlCall) -> Result<Vec<u8>, CodecError> {
        let mut out = Vec::with_capacity(64);
        out.push(KIND_CALL);
        out.extend_from_slice(&call.correlation_id.to_be_bytes());
        put_str16(&mut out, &call.function)?;
        put_fields(&mut out, &call.params)?;
        Ok(out)
    }

    fn decode_call(&self, bytes: &[u8]) -> Result<IncomingCall, CodecError> {
        let mut r = Reader::new(bytes);
        let kind = r.u8()?;
        if kind != KIND_CALL {
            return Err(CodecError::malformed(FLATBIN, format!("expected call kind 0x01, got {kind:#04x}")));
        }
        let correlation_id = r.u64()?;
        let function = r.str16()?;
        let params = read_fields(&mut r)?;
        r.finish()?;
        Ok(IncomingCall {
            correlation_id,
            function,
            encoding: FLATBIN,
            params: RawFields::Typed(params),
        })
    }

    fn encode_reply(&self, reply: &ControlReply) -> Result<Vec<u8>, CodecError> {
        let mut out = Vec::with_capacity(64);
        out.push(KIND_REPLY);
        out.extend_from_slice(&reply.correlation_id.to_be_bytes());
        match &reply.outcome {
            Ok(results) => {
                out.push(1);
                put_fields(&mut out, results)?;
            }
            Err(e) => {
                out.push(0);
                put_str16(&mut out, &e.kind)?;
                put_str32(&mut out, &e.detail)?;
            }
        }
        Ok(out)
    }

    fn decode_reply(&self, bytes: &[u8]) -> Result<IncomingReply, CodecError> {
        let mut r = Reader::new(bytes);
        let kind = r.u8()?;
        if kind != KIND_REPLY {
            return Err(CodecError::malformed(FLATBIN, format!("expected reply kind 0x02, got {kind:#04x}")));
        }
        let correlation_id = r.u64()?;
        let outcome = match r.u8()? {
            1 => Ok(RawFields::Typed(read_fields(&mut r)?)),
            0 => {
                let kind = r.str16()?;
                let detail = r.str32()?;
                Err(WireError { kind, detail })
            }
            other => return Err(CodecError::malformed(FLATBIN, format!("ok byte {other:#04x}"))),
        };
        r.finish()?;
        Ok(IncomingReply { correlation_id, encoding: FLATBIN, outcome })
    }
}

// ---- registry ----

/// Negotiable encodings, keyed by wire name. Custom encodings register
/// alongside the built-in pair.
pub struct EncodingRegistry {
    entries: BTreeMap<String, Box<dyn Encoding>>,
}

impl EncodingRegistry {
    /// Registry with the two standard encodings, `json` and `flatbin`.
    pub fn builtin() -> Self {
        let mut reg = EncodingRegistry { entries: BTreeMap::new() };
        reg.register(Box::new(JsonEncoding));
        reg.register(Box::new(FlatbinEncoding));
        reg
    }

    pub fn register(&mut self, encoding: Box<dyn Encoding>) {
        self.entries.insert(encoding.name().to_string(), encoding);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Encoding> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(|k| k.as_str()).collect()
    }

    /// Remove and return one encoding, consuming the registry — the shape
    /// a client wants when it keeps a single negotiated scheme.
    pub fn take(mut self, name: &str) -> Option<Box<dyn Encoding>> {
        self.entries.remove(name)
    }
}

impl Default for EncodingRegistry {
    fn default() -> Self {
        EncodingRegistry::builtin()
    }
}
