// SPDX-License-Identifier: Apache-2.0

//! Generated valid documents for the serialization properties.
//!
//! A `DocSpec` is plain data drawn by proptest; `build` turns it into a
//! document by setting catalog fields through their generic slots, so every
//! value kind in the catalog gets exercised.

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;

use aibom_core::catalog::{Cardinality, Catalog, Profile, ValueKind};
use aibom_core::model::*;
use aibom_core::syntax::Value;

const TEXTS: &[&str] = &[
    "plain",
    "two words",
    "colon: inside",
    "# not a comment",
    "\"quoted\"",
    "trailing space ",
    "  leading",
    "ünïcödé ✓",
    "[]",
    "{}",
    "- dash",
    "line\nbreak",
    "tab\there",
    "true",
    "123",
    "NOASSERTION",
    "key: value",
];

const KEYS: &[&str] = &["epochs", "learning_rate", "batch size", "layers.count", "dropout"];

const LICENSES: &[&str] = &[
    "MIT",
    "Apache-2.0 OR MIT",
    "GPL-2.0-or-later WITH Classpath-exception-2.0",
    "(MIT OR BSD-3-Clause) AND Apache-2.0",
    "LicenseRef-acme-internal",
    "GPL-2.0+",
];

const URIS: &[&str] = &["https://example.com/a.bin", "https://example.com/x%20y?q=1#f", "NOASSERTION"];

const NUMBERS: &[&str] = &["0", "0.5", "1", "-3.25", "1e-7", "12345.678"];

#[derive(Debug, Clone)]
pub struct PackageSpec {
    pub kind: u8,
    /// One optional pick per catalog field, in catalog order.
    pub picks: Vec<Option<u32>>,
    pub extensions: Vec<(u8, u32)>,
}

#[derive(Debug, Clone)]
pub struct DocSpec {
    pub created: i64,
    pub agents: Vec<u32>,
    pub packages: Vec<PackageSpec>,
    pub relationships: Vec<(u32, u32, u32, Option<u8>)>,
    pub doc_extensions: Vec<(u8, u32)>,
}

pub fn doc_spec() -> impl Strategy<Value = DocSpec> {
    let field_count = Catalog::bundled().all().len();
    let package = (0u8..3, vec(option::weighted(0.6, any::<u32>()), field_count), vec((0u8..4, any::<u32>()), 0..3))
        .prop_map(|(kind, picks, extensions)| PackageSpec { kind, picks, extensions });
    (
        0i64..2_000_000_000,
        vec(any::<u32>(), 1..4),
        vec(package, 1..5),
        vec((any::<u32>(), any::<u32>(), any::<u32>(), option::of(0u8..3)), 0..5),
        vec((0u8..4, any::<u32>()), 0..2),
    )
        .prop_map(|(created, agents, packages, relationships, doc_extensions)| DocSpec {
            created,
            agents,
            packages,
            relationships,
            doc_extensions,
        })
}

fn pick<T>(items: &[T], n: u32) -> &T {
    &items[n as usize % items.len()]
}

fn text(n: u32) -> Value {
    Value::scalar(*pick(TEXTS, n))
}

/// Up to three distinct items starting at an offset into `pool`.
fn distinct<T: Clone>(pool: &[T], n: u32) -> Vec<T> {
    let len = (n as usize % 3 + 1).min(pool.len());
    (0..len).map(|i| pool[(n as usize / 3 + i) % pool.len()].clone()).collect()
}

fn timestamp(seconds: i64) -> Timestamp {
    Timestamp::from_datetime(chrono::DateTime::from_timestamp(seconds, 0).unwrap())
}

fn enum_values(field: &str) -> Vec<String> {
    fn names<T: ToString>(all: &[T]) -> Vec<String> {
        all.iter().map(T::to_string).collect()
    }
    match field {
        "safetyRiskAssessment" => names(SafetyRiskAssessment::ALL),
        "datasetType" => names(DatasetType::ALL),
        "confidentialityLevel" => names(ConfidentialityLevel::ALL),
        "datasetAvailability" => names(DatasetAvailability::ALL),
        other => panic!("no enum pool for {other}"),
    }
}

fn list(values: Vec<Value>) -> Value {
    Value::List(values)
}

fn value_for(field: &str, kind: ValueKind, cardinality: Cardinality, n: u32, agents: &[ElementId]) -> Value {
    let many = cardinality == Cardinality::ZeroOrMore;
    match (field, kind) {
        ("originatedBy", _) => list(distinct(agents, n).into_iter().map(|a| Value::scalar(a.as_str())).collect()),
        ("suppliedBy", _) => Value::scalar(pick(agents, n).as_str()),
        ("downloadLocation", _) => Value::scalar(*pick(URIS, n)),
        ("metricDecisionThreshold", _) => Value::Map(
            distinct(KEYS, n)
                .into_iter()
                .enumerate()
                .map(|(i, k)| (k.to_string(), Value::scalar(*pick(NUMBERS, n + i as u32))))
                .collect(),
        ),
        (_, ValueKind::Text) => text(n),
        (_, ValueKind::TextList) => list(distinct(TEXTS, n).into_iter().map(Value::scalar).collect()),
        (_, ValueKind::Mapping) => Value::Map(
            distinct(KEYS, n).into_iter().enumerate().map(|(i, k)| (k.to_string(), text(n / 7 + i as u32))).collect(),
        ),
        (_, ValueKind::MetricList) => Value::Map(
            distinct(KEYS, n)
                .into_iter()
                .enumerate()
                .map(|(i, k)| {
                    let v = if (n + i as u32).is_multiple_of(2) {
                        Value::scalar(*pick(NUMBERS, n / 5 + i as u32))
                    } else {
                        text(n / 5 + i as u32)
                    };
                    (k.to_string(), v)
                })
                .collect(),
        ),
        (_, ValueKind::Presence) => Value::scalar(*pick(&["yes", "no", "no-assertion"], n)),
        (_, ValueKind::Enum) if many => list(distinct(&enum_values(field), n).into_iter().map(Value::scalar).collect()),
        (_, ValueKind::Enum) => Value::scalar(pick(&enum_values(field), n).clone()),
        (_, ValueKind::EnergyList) => list(
            (0..n % 2 + 1)
                .map(|i| {
                    Value::Map(vec![
                        ("quantity".into(), Value::scalar(pick(NUMBERS, n + i).trim_start_matches('-'))),
                        ("unit".into(), Value::scalar("kilowatt-hour")),
                    ])
                })
                .collect(),
        ),
        (_, ValueKind::Integer) => Value::scalar((n as u64 * 7919).to_string()),
        (_, ValueKind::LicenseExpression) => Value::scalar(*pick(LICENSES, n)),
        (_, other) => panic!("no generator for {field} ({other})"),
    }
}

fn extension(key: u8, n: u32) -> (String, Value) {
    let name = format!("xVendor{key}");
    let value =
        if n.is_multiple_of(3) { list(distinct(TEXTS, n).into_iter().map(Value::scalar).collect()) } else { text(n) };
    (name, value)
}

/// Builds the document. `reverse` inserts everything in the opposite order.
pub fn build(spec: &DocSpec, reverse: bool) -> Document {
    let catalog = Catalog::bundled();
    let agents: Vec<ElementId> =
        (0..spec.agents.len()).map(|i| ElementId::new(format!("urn:gen:agent:{i}")).unwrap()).collect();
    let info = CreationInfo::new(timestamp(spec.created), vec![agents[0].clone()], "3.0.0").unwrap();
    let mut doc = new_document(info);
    for (key, n) in &spec.doc_extensions {
        let (k, v) = extension(*key, *n);
        doc.extensions.insert(k, v);
    }

    let mut elements: Vec<Element> = Vec::new();
    for (i, n) in spec.agents.iter().enumerate() {
        let kind = *pick(AgentKind::ALL, *n);
        elements.push(Agent::new(agents[i].clone(), pick(TEXTS, *n).trim().to_string() + " agent", kind).into());
    }
    let mut package_ids = Vec::new();
    for (i, p) in spec.packages.iter().enumerate() {
        let id = ElementId::new(format!("urn:gen:pkg:{i}")).unwrap();
        package_ids.push(id.clone());
        let (mut element, profile, purpose): (Element, Profile, &[&str]) = match p.kind {
            0 => (AiPackage::new(id).into(), Profile::Ai, &["ai-model"]),
            1 => (DatasetPackage::new(id).into(), Profile::Dataset, &["dataset"]),
            _ => (Package::new(id).into(), Profile::Base, &["library", "application", "other"]),
        };
        let mut times = Vec::new();
        for (d, choice) in catalog.all().iter().zip(&p.picks) {
            let Some(n) = *choice else { continue };
            if !catalog.is_applicable(profile, &d.name) || matches!(d.name.as_str(), "spdxId" | "contains") {
                continue;
            }
            let value = match d.name.as_str() {
                "primaryPurpose" => Value::scalar(*pick(purpose, n)),
                "builtTime" | "releaseTime" => {
                    times.push((d.name.clone(), i64::from(n % 1_000_000_000)));
                    continue;
                }
                _ => value_for(&d.name, d.value_kind, d.cardinality, n, &agents),
            };
            element.field_mut(&d.name).unwrap().set(&value).unwrap_or_else(|e| panic!("{}: {e}", d.name));
        }
        // builtTime never follows releaseTime.
        let mut stamps: Vec<i64> = times.iter().map(|(_, t)| *t).collect();
        stamps.sort();
        let names: Vec<&str> =
            ["builtTime", "releaseTime"].into_iter().filter(|f| times.iter().any(|(n, _)| n == f)).collect();
        for (name, t) in names.into_iter().zip(stamps) {
            element.field_mut(name).unwrap().set(&Value::scalar(timestamp(t).to_string())).unwrap();
        }
        for (key, n) in &p.extensions {
            let (k, v) = extension(*key, *n);
            element.extensions_mut().insert(k, v);
        }
        elements.push(element);
    }
    if reverse {
        elements.reverse();
    }
    for e in elements {
        doc.add_element(e).unwrap();
    }

    let mut relationships = Vec::new();
    for (a, b, t, completeness) in &spec.relationships {
        let count = package_ids.len() as u32;
        let rel_type = *pick(RelationshipType::ALL, *t);
        let (from, to) = (a % count, b % count);
        let (from, to) = if rel_type == RelationshipType::Contains {
            // Forward edges only, so containment stays acyclic.
            if from == to {
                continue;
            }
            (from.min(to), from.max(to))
        } else {
            (from, to)
        };
        let mut r =
            Relationship::new(package_ids[from as usize].clone(), rel_type, vec![package_ids[to as usize].clone()]);
        r.completeness = completeness.map(|c| *pick(Completeness::ALL, u32::from(c)));
        relationships.push(r);
    }
    if reverse {
        relationships.reverse();
    }
    for r in relationships {
        doc.add_relationship(r);
    }
    doc
}
