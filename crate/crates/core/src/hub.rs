// SPDX-License-Identifier: Apache-2.0

//! Pre-populating AIBOM documents from model-hub metadata.
//!
//! Hub responses are first flattened into a neutral intake record of dotted key
//! paths. Ingestion rules then map individual keys onto catalog fields. Keys
//! without a rule are reported, never guessed. Every populated field carries a
//! provenance note.
//!
//! ```text
//! source: https://hub.example/api/models/acme/sentiment
//! retrievedAt: 2024-05-01T12:00:00Z
//! entries:
//!   modelName: sentiment
//!   cardData.datasets:
//!     - imdb
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use thiserror::Error;

use crate::catalog::{Cardinality, Catalog, FieldRef, Profile, ValueKind};
use crate::datafile::{data_err, parse_data, text_of, DataFileError};
use crate::findings::{element_path, Code, Finding};
use crate::license::{LicenseExpression, LicenseSnapshot};
use crate::model::{
    Agent, AgentKind, AiPackage, CreationInfo, DatasetPackage, Document, Element, ElementId, FieldState, Relationship,
    RelationshipType, Timestamp,
};
use crate::rate::Rate;
use crate::syntax::{self, Value};

/// Agent recorded as the creator of ingested documents.
pub const INGESTION_AGENT: &str = "urn:aibom:agent:hub-ingestion";
/// Id given to the model when no rule supplies one.
pub const DEFAULT_MODEL_ID: &str = "urn:aibom:hub:model";
const DATASET_ID_PREFIX: &str = "urn:aibom:hub:dataset:";
const SPEC_VERSION: &str = "3.0.0";

const RECORD: &str = "hub record";
const RULES: &str = "rules";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HubValue {
    Text(String),
    List(Vec<String>),
}

impl HubValue {
    fn to_value(&self) -> Value {
        match self {
            HubValue::Text(t) => Value::scalar(t),
            HubValue::List(items) => Value::List(items.iter().map(Value::scalar).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubRecord {
    pub source: String,
    pub retrieved_at: Timestamp,
    /// Flattened key paths in response order. Keys are unique.
    pub entries: Vec<(String, HubValue)>,
}

impl HubRecord {
    pub fn get(&self, key: &str) -> Option<&HubValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// The intake text for this record; `parse_hub_record` reads it back.
    pub fn to_intake(&self) -> String {
        let entries = self.entries.iter().map(|(k, v)| (k.clone(), v.to_value())).collect();
        syntax::render(&Value::Map(vec![
            ("source".into(), Value::scalar(&self.source)),
            ("retrievedAt".into(), Value::scalar(self.retrieved_at.to_string())),
            ("entries".into(), Value::Map(entries)),
        ]))
    }
}

pub fn parse_hub_record(bytes: &[u8]) -> Result<HubRecord, DataFileError> {
    let root = parse_data(bytes, RECORD)?;
    let mut source = None;
    let mut retrieved_at = None;
    let mut entries: Option<Vec<(String, HubValue)>> = None;
    for entry in root.as_map().unwrap_or_default() {
        let duplicate = || data_err(RECORD, entry.key_location, format!("duplicate key '{}'", entry.key));
        match entry.key.as_str() {
            "source" => {
                if source.replace(text_of(entry, RECORD)?).is_some() {
                    return Err(duplicate());
                }
            }
            "retrievedAt" => {
                let t = Timestamp::parse(&text_of(entry, RECORD)?)
                    .map_err(|e| data_err(RECORD, entry.value.location, e.to_string()))?;
                if retrieved_at.replace(t).is_some() {
                    return Err(duplicate());
                }
            }
            "entries" => {
                if entries.is_some() {
                    return Err(duplicate());
                }
                let items = entry
                    .value
                    .as_map()
                    .or_else(|| entry.value.as_list().filter(|l| l.is_empty()).map(|_| &[][..]))
                    .ok_or_else(|| data_err(RECORD, entry.value.location, "'entries' must be a block of keys"))?;
                let mut out: Vec<(String, HubValue)> = Vec::new();
                for e in items {
                    if out.iter().any(|(k, _)| *k == e.key) {
                        return Err(data_err(RECORD, e.key_location, format!("duplicate key '{}'", e.key)));
                    }
                    let value = if let Some(text) = e.value.as_scalar() {
                        HubValue::Text(text.to_string())
                    } else if let Some(list) = e.value.as_list() {
                        let items = list
                            .iter()
                            .map(|n| n.as_scalar().map(str::to_string))
                            .collect::<Option<Vec<_>>>()
                            .ok_or_else(|| data_err(RECORD, e.value.location, "list items must be text"))?;
                        HubValue::List(items)
                    } else {
                        return Err(data_err(
                            RECORD,
                            e.value.location,
                            "entry values must be text or a list of text (flatten nested keys with '.')",
                        ));
                    };
                    out.push((e.key.clone(), value));
                }
                entries = Some(out);
            }
            other => return Err(data_err(RECORD, entry.key_location, format!("unknown key '{other}'"))),
        }
    }
    Ok(HubRecord {
        source: source.ok_or_else(|| data_err(RECORD, root.location, "missing 'source'"))?,
        retrieved_at: retrieved_at.ok_or_else(|| data_err(RECORD, root.location, "missing 'retrievedAt'"))?,
        entries: entries.unwrap_or_default(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("hub response: {0}")]
pub struct JsonError(String);

/// Flattens a JSON hub response into an intake record. Object keys are joined
/// with `.`, arrays of scalars become lists, other arrays are indexed and nulls
/// are dropped.
pub fn hub_record_from_json(source: &str, retrieved_at: Timestamp, json: &[u8]) -> Result<HubRecord, JsonError> {
    let value: serde_json::Value = serde_json::from_slice(json).map_err(|e| JsonError(e.to_string()))?;
    if !value.is_object() {
        return Err(JsonError("expected a JSON object at the top level".into()));
    }
    let mut entries = Vec::new();
    flatten(String::new(), &value, &mut entries);
    Ok(HubRecord { source: source.to_string(), retrieved_at, entries })
}

fn json_scalar(value: &serde_json::Value) -> Option<String> {
    match value {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn flatten(prefix: String, value: &serde_json::Value, out: &mut Vec<(String, HubValue)>) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match value {
        serde_json::Value::Null => {}
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                flatten(join(k), v, out);
            }
        }
        serde_json::Value::Array(items) => {
            if let Some(texts) = items.iter().map(json_scalar).collect::<Option<Vec<_>>>() {
                out.push((prefix, HubValue::List(texts)));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(join(&i.to_string()), item, out);
                }
            }
        }
        scalar => out.push((prefix, HubValue::Text(json_scalar(scalar).unwrap_or_default()))),
    }
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid hub URL: {0}")]
    InvalidUrl(String),
    #[error("hub returned HTTP status {status} for {url}")]
    Status { url: String, status: u16 },
    #[error("request to {url} timed out")]
    Timeout { url: String },
    #[error("request to {url} failed: {cause}")]
    Transport { url: String, cause: String },
}

/// Fetches `<baseUrl>/<modelId>` and returns the response body unchanged.
/// Proxies are taken from the usual environment variables.
pub fn fetch_hub_record(base_url: &str, model_id: &str, timeout: Duration) -> Result<Vec<u8>, FetchError> {
    let mut base = url::Url::parse(base_url).map_err(|e| FetchError::InvalidUrl(format!("{base_url}: {e}")))?;
    if !matches!(base.scheme(), "http" | "https") {
        return Err(FetchError::InvalidUrl(format!("{base_url}: only http and https are supported")));
    }
    if model_id.is_empty() {
        return Err(FetchError::InvalidUrl("model id must not be empty".into()));
    }
    if !base.path().ends_with('/') {
        base.set_path(&format!("{}/", base.path()));
    }
    let url = base
        .join(model_id.trim_start_matches('/'))
        .map_err(|e| FetchError::InvalidUrl(format!("{model_id}: {e}")))?
        .to_string();
    let agent: ureq::Agent =
        ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
    let transport = |e: ureq::Error, url: &str| match e {
        ureq::Error::Timeout(_) => FetchError::Timeout { url: url.to_string() },
        other => FetchError::Transport { url: url.to_string(), cause: other.to_string() },
    };
    let mut response = agent.get(&url).call().map_err(|e| transport(e, &url))?;
    let status = response.status().as_u16();
    if !(200..300).contains(&status) {
        return Err(FetchError::Status { url, status });
    }
    response.body_mut().read_to_vec().map_err(|e| transport(e, &url))
}

string_enum! {
    pub enum HubTransform {
        Copy => "copy",
        SplitList => "split-list",
        ParseSize => "parse-size",
        ParseLicense => "parse-license",
        ToPresence => "to-presence",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestionRule {
    /// An exact key path, or a prefix ending in `.*` for mapping fields.
    pub hub_key: String,
    pub target: FieldRef,
    pub transform: HubTransform,
}

impl IngestionRule {
    fn prefix(&self) -> Option<&str> {
        self.hub_key.strip_suffix(".*")
    }

    fn matches(&self, key: &str) -> Option<Option<String>> {
        match self.prefix() {
            None => (self.hub_key == key).then_some(None),
            Some(p) => key
                .strip_prefix(p)
                .and_then(|rest| rest.strip_prefix('.'))
                .filter(|rest| !rest.is_empty())
                .map(|rest| Some(rest.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestionRules {
    pub name: String,
    pub rules: Vec<IngestionRule>,
}

/// Never filled in from a hub: risk grading needs a human.
pub const NEVER_AUTOMATED: &[&str] = &["safetyRiskAssessment"];

pub fn default_rules() -> IngestionRules {
    load_rules(include_str!("../data/hub.rules").as_bytes()).unwrap_or_else(|e| panic!("bundled hub rules: {e}"))
}

pub fn load_rules(bytes: &[u8]) -> Result<IngestionRules, DataFileError> {
    let root = parse_data(bytes, RULES)?;
    let catalog = Catalog::bundled();
    let mut name = None;
    let mut rules: Vec<IngestionRule> = Vec::new();
    for entry in root.as_map().unwrap_or_default() {
        match entry.key.as_str() {
            "name" => name = Some(text_of(entry, RULES)?),
            "rule" => {
                let entries = entry
                    .value
                    .as_map()
                    .ok_or_else(|| data_err(RULES, entry.value.location, "a rule must be a block of keys"))?;
                let (mut hub_key, mut target, mut transform) = (None, None, None);
                for e in entries {
                    match e.key.as_str() {
                        "hubKey" => hub_key = Some(text_of(e, RULES)?),
                        "target" => {
                            let t = FieldRef::parse(&text_of(e, RULES)?, catalog)
                                .map_err(|m| data_err(RULES, e.value.location, m))?;
                            target = Some(t);
                        }
                        "transform" => {
                            let t = text_of(e, RULES)?
                                .parse::<HubTransform>()
                                .map_err(|err| data_err(RULES, e.value.location, err.to_string()))?;
                            transform = Some(t);
                        }
                        other => return Err(data_err(RULES, e.key_location, format!("unknown rule key '{other}'"))),
                    }
                }
                let missing = |k: &str| data_err(RULES, entry.key_location, format!("rule is missing '{k}'"));
                let rule = IngestionRule {
                    hub_key: hub_key.ok_or_else(|| missing("hubKey"))?,
                    target: target.ok_or_else(|| missing("target"))?,
                    transform: transform.unwrap_or(HubTransform::Copy),
                };
                check_rule(&rule, catalog).map_err(|m| data_err(RULES, entry.key_location, m))?;
                if let Some(other) = rules.iter().find(|r| r.target == rule.target) {
                    return Err(data_err(
                        RULES,
                        entry.key_location,
                        format!("'{}' is already the target of hub key '{}'", rule.target, other.hub_key),
                    ));
                }
                rules.push(rule);
            }
            other => return Err(data_err(RULES, entry.key_location, format!("unknown key '{other}'"))),
        }
    }
    Ok(IngestionRules { name: name.unwrap_or_else(|| "custom".into()), rules })
}

fn check_rule(rule: &IngestionRule, catalog: &Catalog) -> Result<(), String> {
    let field = rule.target.field.as_str();
    let target = &rule.target;
    if NEVER_AUTOMATED.contains(&field) {
        return Err(format!("'{target}' must be curated by hand and cannot be a hub target"));
    }
    if field == "contains" || (field == "spdxId" && target.profile != Profile::Ai) {
        return Err(format!("'{target}' cannot be a hub target"));
    }
    if target.profile == Profile::Base {
        return Err(format!("'{target}' must name the ai or dataset profile"));
    }
    if rule.hub_key.is_empty() || rule.hub_key == ".*" {
        return Err("hubKey must not be empty".into());
    }
    let descriptor = catalog.descriptor(field).expect("checked by FieldRef::parse");
    let keyed = matches!(descriptor.value_kind, ValueKind::Mapping | ValueKind::MetricList);
    if keyed != rule.prefix().is_some() {
        return Err(format!(
            "'{target}' {} a hubKey prefix ending in '.*'",
            if keyed { "needs" } else { "cannot take" }
        ));
    }
    let stubs = target.profile == Profile::Dataset && field == "name";
    let list = descriptor.cardinality == Cardinality::ZeroOrMore || stubs;
    let fits = match rule.transform {
        HubTransform::Copy => !matches!(descriptor.value_kind, ValueKind::EnergyList),
        HubTransform::SplitList => list && !keyed && descriptor.value_kind != ValueKind::EnergyList,
        HubTransform::ParseSize => descriptor.value_kind == ValueKind::Integer,
        HubTransform::ParseLicense => descriptor.value_kind == ValueKind::LicenseExpression,
        HubTransform::ToPresence => descriptor.value_kind == ValueKind::Presence,
    };
    if !fits {
        return Err(format!("transform {} does not fit '{target}'", rule.transform));
    }
    if stubs && rule.transform != HubTransform::SplitList {
        return Err("'dataset:name' declares training datasets and must use split-list".into());
    }
    Ok(())
}

/// Parses sizes such as `1.5 GB`, `20MiB` or `1024` into bytes.
pub fn parse_size(text: &str) -> Result<u64, String> {
    let t = text.trim();
    let split = t.find(|c: char| !(c.is_ascii_digit() || c == '.')).unwrap_or(t.len());
    let (number, unit) = (&t[..split], t[split..].trim());
    let multiplier: u128 = match unit.to_ascii_lowercase().as_str() {
        "" | "b" => 1,
        "kb" => 1_000,
        "mb" => 1_000_000,
        "gb" => 1_000_000_000,
        "tb" => 1_000_000_000_000,
        "kib" => 1 << 10,
        "mib" => 1 << 20,
        "gib" => 1 << 30,
        "tib" => 1 << 40,
        _ => return Err(format!("unknown size unit '{unit}'")),
    };
    let (whole, frac) = number.split_once('.').unwrap_or((number, ""));
    let bad = || format!("'{text}' is not a size");
    if whole.is_empty() || frac.contains('.') || frac.len() > 12 {
        return Err(bad());
    }
    let whole: u128 = whole.parse().map_err(|_| bad())?;
    let frac_value: u128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let scale = 10u128.pow(frac.len() as u32);
    let total = (whole * scale + frac_value) * multiplier;
    if !total.is_multiple_of(scale) {
        return Err(format!("'{text}' is not a whole number of bytes"));
    }
    u64::try_from(total / scale).map_err(|_| format!("'{text}' is too large"))
}

fn to_presence(text: &str) -> Result<&'static str, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "yes" | "true" | "1" => Ok("yes"),
        "no" | "false" | "0" => Ok("no"),
        "noassertion" | "no-assertion" => Ok("no-assertion"),
        _ => Err(format!("'{text}' is not a yes/no value")),
    }
}

fn apply(rule: &IngestionRule, value: &HubValue) -> Result<Value, String> {
    let list = rule.prefix().is_none()
        && Catalog::bundled().descriptor(&rule.target.field).is_some_and(|d| d.cardinality == Cardinality::ZeroOrMore);
    let text = || match value {
        HubValue::Text(t) => Ok(t.trim().to_string()),
        HubValue::List(_) => Err(format!("{} expects a single value, found a list", rule.transform)),
    };
    Ok(match rule.transform {
        HubTransform::Copy => match value {
            HubValue::Text(t) if list => Value::List(vec![Value::scalar(t.trim())]),
            HubValue::List(items) if list => Value::List(items.iter().map(|s| Value::scalar(s.trim())).collect()),
            _ => Value::scalar(text()?),
        },
        HubTransform::SplitList => {
            let items: Vec<String> = match value {
                HubValue::Text(t) => t.split(',').map(|s| s.trim().to_string()).collect(),
                HubValue::List(items) => items.iter().map(|s| s.trim().to_string()).collect(),
            };
            let mut seen = BTreeSet::new();
            let items: Vec<Value> =
                items.into_iter().filter(|s| !s.is_empty() && seen.insert(s.clone())).map(Value::Scalar).collect();
            if items.is_empty() {
                return Err("no list items".into());
            }
            Value::List(items)
        }
        HubTransform::ParseSize => Value::scalar(parse_size(&text()?)?.to_string()),
        HubTransform::ParseLicense => {
            let snapshot = LicenseSnapshot::bundled();
            let ast = LicenseExpression::parse(&text()?).map_err(|e| e.to_string())?;
            Value::scalar(snapshot.normalize_case(&ast).to_string())
        }
        HubTransform::ToPresence => Value::scalar(to_presence(&text()?)?),
    })
}

string_enum! {
    pub enum Origin {
        HubAutomated => "hub-automated",
        Manual => "manual",
        Derived => "derived",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceNote {
    pub field_path: String,
    pub origin: Origin,
    pub source: String,
    pub retrieved_at: Timestamp,
    /// The hub key the value came from, when there is one.
    pub hub_key: Option<String>,
}

impl ProvenanceNote {
    pub fn to_value(&self) -> Value {
        let mut entries = vec![
            ("field".to_string(), Value::scalar(&self.field_path)),
            ("origin".to_string(), Value::scalar(self.origin.as_str())),
            ("source".to_string(), Value::scalar(&self.source)),
            ("retrievedAt".to_string(), Value::scalar(self.retrieved_at.to_string())),
        ];
        if let Some(k) = &self.hub_key {
            entries.push(("hubKey".into(), Value::scalar(k)));
        }
        Value::Map(entries)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubMapping {
    pub document: Document,
    /// One note per populated field, in element and catalog order.
    pub notes: Vec<ProvenanceNote>,
    /// Keys with no rule or whose conversion failed, in record order.
    pub unmapped_keys: Vec<String>,
    pub findings: Vec<Finding>,
}

impl HubMapping {
    pub fn notes_value(&self) -> Value {
        Value::Map(self.notes.iter().map(|n| ("note".to_string(), n.to_value())).collect())
    }
}

/// A value bound for one target field, with the keys it came from.
#[derive(Default)]
struct Staged {
    value: Option<Value>,
    keys: Vec<String>,
}

fn scratch(profile: Profile) -> Element {
    let id = ElementId::new("scratch").expect("valid id");
    match profile {
        Profile::Dataset => DatasetPackage::new(id).into(),
        _ => AiPackage::new(id).into(),
    }
}

pub fn map_hub_record(record: &HubRecord, rules: &IngestionRules) -> HubMapping {
    let mut staged: BTreeMap<FieldRef, Staged> = BTreeMap::new();
    let mut unmapped_keys = Vec::new();
    let mut findings = Vec::new();

    for (key, value) in &record.entries {
        let exact: Vec<&IngestionRule> = rules.rules.iter().filter(|r| r.hub_key == *key).collect();
        let matched: Vec<(&IngestionRule, Option<String>)> = if exact.is_empty() {
            rules.rules.iter().filter_map(|r| r.matches(key).map(|sub| (r, sub))).collect()
        } else {
            exact.into_iter().map(|r| (r, None)).collect()
        };
        if matched.is_empty() {
            unmapped_keys.push(key.clone());
            continue;
        }
        let mut converted = Vec::new();
        let mut failure = None;
        for (rule, sub_key) in matched {
            let result = apply(rule, value).and_then(|v| {
                let v = match sub_key {
                    Some(k) => Value::Map(vec![(k, v)]),
                    None => v,
                };
                let mut probe = scratch(rule.target.profile);
                let stubs = rule.target == FieldRef::new(Profile::Dataset, "name");
                if rule.target.field == "spdxId" {
                    ElementId::new(v.as_scalar().unwrap_or_default()).map_err(|e| e.to_string())?;
                } else if !stubs {
                    let slot = probe.field_mut(&rule.target.field).expect("rule targets are checked on load");
                    slot.set(&v).map_err(|e| e.to_string())?;
                }
                Ok(v)
            });
            match result {
                Ok(v) => converted.push((rule, v)),
                Err(message) => {
                    failure = Some(format!("{} for '{}': {message}", rule.transform, rule.target));
                    break;
                }
            }
        }
        if let Some(message) = failure {
            findings.push(Finding::new(Code::TransformFailed, format!("hub[{key}]"), message));
            unmapped_keys.push(key.clone());
            continue;
        }
        for (rule, v) in converted {
            let slot = staged.entry(rule.target.clone()).or_default();
            slot.keys.push(key.clone());
            slot.value = Some(match (slot.value.take(), v) {
                (Some(Value::Map(mut acc)), Value::Map(more)) => {
                    for (k, item) in more {
                        if !acc.iter().any(|(existing, _)| *existing == k) {
                            acc.push((k, item));
                        }
                    }
                    acc.sort_by(|a, b| a.0.cmp(&b.0));
                    Value::Map(acc)
                }
                (_, v) => v,
            });
        }
    }

    build(record, staged, unmapped_keys, findings)
}

fn build(
    record: &HubRecord,
    staged: BTreeMap<FieldRef, Staged>,
    unmapped_keys: Vec<String>,
    findings: Vec<Finding>,
) -> HubMapping {
    let tool = ElementId::new(INGESTION_AGENT).expect("valid id");
    let info = CreationInfo::new(record.retrieved_at, vec![tool.clone()], SPEC_VERSION).expect("valid creation info");
    let mut document = Document::new(info);
    let mut notes = Vec::new();
    let note = |path: String, origin: Origin, hub_key: Option<String>| ProvenanceNote {
        field_path: path,
        origin,
        source: record.source.clone(),
        retrieved_at: record.retrieved_at,
        hub_key,
    };
    document.add_element(Agent::new(tool.clone(), "hub ingestion", AgentKind::SoftwareAgent)).expect("fresh document");
    notes.push(note(element_path(INGESTION_AGENT, Some("name")), Origin::Derived, None));
    notes.push(note(element_path(INGESTION_AGENT, Some("agentKind")), Origin::Derived, None));

    let by_profile = |p: Profile| staged.iter().filter(move |(t, _)| t.profile == p);
    let mut model_id = None;
    if by_profile(Profile::Ai).next().is_some() {
        let id_value = staged
            .get(&FieldRef::new(Profile::Ai, "spdxId"))
            .and_then(|s| s.value.as_ref())
            .and_then(Value::as_scalar)
            .unwrap_or(DEFAULT_MODEL_ID);
        let id = ElementId::new(id_value).expect("checked during conversion");
        let mut element: Element = AiPackage::new(id.clone()).into();
        fill(&mut element, by_profile(Profile::Ai));
        document.add_element(element).expect("fresh id");
        model_id = Some(id);
    }

    let mut datasets = Vec::new();
    if let Some(Value::List(names)) = staged.get(&FieldRef::new(Profile::Dataset, "name")).and_then(|s| s.value.clone())
    {
        for name in names.iter().filter_map(Value::as_scalar) {
            let slug: String = name.chars().map(|c| if c.is_whitespace() { '-' } else { c }).collect();
            let id = ElementId::new(format!("{DATASET_ID_PREFIX}{slug}")).expect("non-empty id");
            if document.resolve_reference(id.as_str()).is_some() {
                continue;
            }
            let mut element: Element = DatasetPackage::new(id.clone()).into();
            fill(&mut element, by_profile(Profile::Dataset).filter(|(t, _)| t.field != "name"));
            element.base_mut().expect("package").name = Some(name.to_string());
            document.add_element(element).expect("checked above");
            datasets.push(id);
        }
    }
    if let (Some(model), false) = (&model_id, datasets.is_empty()) {
        document.add_relationship(Relationship::new(model.clone(), RelationshipType::TrainedOn, datasets.clone()));
    }

    let catalog = Catalog::bundled();
    for element in document.elements() {
        let Some(profile) = element.profile() else { continue };
        let id = element.id().as_str();
        for descriptor in catalog.applicable(profile) {
            let field = descriptor.name.as_str();
            if document.field_state(id, field) != Some(FieldState::Populated) {
                continue;
            }
            let origin_key = if field == "spdxId" && profile == Profile::Dataset {
                FieldRef::new(Profile::Dataset, "name")
            } else {
                FieldRef::new(profile, field)
            };
            // A stub id is computed from its hub name, so it counts as automated.
            let note_value = match staged.get(&origin_key) {
                Some(s) => note(element_path(id, Some(field)), Origin::HubAutomated, Some(s.keys.join(","))),
                None => note(element_path(id, Some(field)), Origin::Derived, None),
            };
            notes.push(note_value);
        }
    }

    HubMapping { document, notes, unmapped_keys, findings }
}

fn fill<'a>(element: &mut Element, targets: impl Iterator<Item = (&'a FieldRef, &'a Staged)>) {
    for (target, staged) in targets {
        if target.field == "spdxId" {
            continue;
        }
        if let (Some(slot), Some(value)) = (element.field_mut(&target.field), &staged.value) {
            slot.set(value).expect("checked during conversion");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomationError {
    #[error("automation rate is measured for the ai or dataset profile, not {0}")]
    Profile(Profile),
    #[error("the document has no {0} package")]
    NoPackage(Profile),
}

/// Catalog fields of `profile` plus base that are populated on some package of
/// that profile, over the number of such fields.
pub fn automation_rate(partial: &Document, profile: Profile) -> Result<Rate, AutomationError> {
    if profile == Profile::Base {
        return Err(AutomationError::Profile(profile));
    }
    let packages: Vec<&Element> = partial.elements().filter(|e| e.profile() == Some(profile)).collect();
    if packages.is_empty() {
        return Err(AutomationError::NoPackage(profile));
    }
    let fields: Vec<&str> = Catalog::bundled().applicable(profile).map(|d| d.name.as_str()).collect();
    let populated = fields
        .iter()
        .filter(|f| packages.iter().any(|p| partial.field_state(p.id().as_str(), f) == Some(FieldState::Populated)))
        .count();
    Ok(Rate::new(populated as u64, fields.len() as u64).expect("populated fields are a subset"))
}
