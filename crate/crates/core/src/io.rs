// SPDX-License-Identifier: Apache-2.0

//! Reading and writing documents in the `aibom/1` text format.
//!
//! ```text
//! @context: aibom/1
//! specVersion: 3.0.0
//!
//! creationInfo:
//!   created: 2024-04-16T00:00:00Z
//!   createdBy:
//!     - urn:example:agent:wg
//!
//! element:
//!   spdxId: urn:example:agent:wg
//!   type: Agent
//!   name: Working group
//!   agentKind: organization
//!
//! element:
//!   spdxId: urn:example:model
//!   type: AiPackage
//!   ...
//!
//! relationship:
//!   from: urn:example:model
//!   type: trained-on
//!   to:
//!     - urn:example:dataset
//! ```
//!
//! `element` and `relationship` blocks repeat. Package fields are written in
//! catalog order, then any unknown keys in sorted order. Unknown keys are kept
//! and reported; alias spellings are normalized and reported.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::catalog::Catalog;
use crate::findings::{element_path, Code, Finding};
use crate::model::*;
use crate::syntax::{self, Entry, Location, Node, SyntaxError, Value};

pub const CONTEXT: &str = "aibom/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ReadError {
    pub location: Location,
    pub message: String,
}

impl From<SyntaxError> for ReadError {
    fn from(e: SyntaxError) -> Self {
        Self { location: e.location, message: e.message }
    }
}

fn rerr(location: Location, message: impl Into<String>) -> ReadError {
    ReadError { location, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("refusing to write: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct WriteError {
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error(transparent)]
    Write(#[from] WriteError),
}

/// A bound document plus the non-fatal findings produced while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadOutcome {
    pub document: Document,
    pub findings: Vec<Finding>,
}

pub fn read_document(bytes: &[u8]) -> Result<ReadOutcome, ReadError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|b| **b == b'\n').count() + 1;
        let column = prefix.len() - prefix.iter().rposition(|b| *b == b'\n').map_or(0, |p| p + 1) + 1;
        rerr(Location::new(line, column), "input is not valid UTF-8")
    })?;
    let root = syntax::parse(text)?;
    Reader::default().document(&root)
}

#[derive(Default)]
struct Reader {
    findings: Vec<Finding>,
}

fn scalar_of<'a>(node: &'a Node, what: &str) -> Result<&'a str, ReadError> {
    node.as_scalar()
        .ok_or_else(|| rerr(node.location, format!("{what} must be a single value, found a {}", node.kind_name())))
}

fn parse_at<T: std::str::FromStr>(node: &Node, what: &str) -> Result<T, ReadError>
where
    T::Err: std::fmt::Display,
{
    scalar_of(node, what)?.parse().map_err(|e| rerr(node.location, format!("{what}: {e}")))
}

fn map_of<'a>(node: &'a Node, what: &str) -> Result<&'a [Entry], ReadError> {
    node.as_map()
        .ok_or_else(|| rerr(node.location, format!("{what} must be a block of keys, found a {}", node.kind_name())))
}

/// Rejects repeated keys, naming both locations.
fn unique_keys(entries: &[Entry], what: &str) -> Result<(), ReadError> {
    let mut seen: BTreeMap<&str, Location> = BTreeMap::new();
    for e in entries {
        if let Some(first) = seen.insert(&e.key, e.key_location) {
            return Err(rerr(e.key_location, format!("duplicate key '{}' in {what} (first at {first})", e.key)));
        }
    }
    Ok(())
}

impl Reader {
    fn unknown(&mut self, path: String, entry: &Entry, extensions: &mut Extensions) {
        self.findings.push(
            Finding::new(Code::UnknownField, path, format!("unknown field '{}' preserved", entry.key))
                .at(entry.key_location),
        );
        extensions.insert(entry.key.clone(), entry.value.to_value());
    }

    fn document(mut self, root: &Node) -> Result<ReadOutcome, ReadError> {
        let entries = map_of(root, "document")?;
        let mut context = None;
        let mut spec_version = None;
        let mut creation = None;
        let mut element_nodes = Vec::new();
        let mut relationship_nodes = Vec::new();
        let mut extensions = Extensions::new();
        let mut singles: BTreeMap<&str, Location> = BTreeMap::new();

        for entry in entries {
            let repeated = matches!(entry.key.as_str(), "element" | "relationship");
            if !repeated {
                if let Some(first) = singles.insert(&entry.key, entry.key_location) {
                    return Err(rerr(entry.key_location, format!("duplicate key '{}' (first at {first})", entry.key)));
                }
            }
            match entry.key.as_str() {
                "@context" => context = Some(&entry.value),
                "specVersion" => spec_version = Some(&entry.value),
                "creationInfo" => creation = Some(entry),
                "element" => element_nodes.push(&entry.value),
                "relationship" => relationship_nodes.push(&entry.value),
                _ => self.unknown(format!("document.{}", entry.key), entry, &mut extensions),
            }
        }

        let context = context.ok_or_else(|| rerr(root.location, "missing '@context' header"))?;
        let context_text = scalar_of(context, "@context")?;
        if context_text != CONTEXT {
            return Err(rerr(
                context.location,
                format!("unsupported @context '{context_text}' (expected '{CONTEXT}')"),
            ));
        }
        let spec_version = spec_version.ok_or_else(|| rerr(root.location, "missing 'specVersion'"))?;
        let spec_version_text = scalar_of(spec_version, "specVersion")?;
        let creation = creation.ok_or_else(|| rerr(root.location, "missing 'creationInfo' block"))?;
        let creation_info = self.creation_info(creation, spec_version_text)?;

        let mut document = Document::new(creation_info);
        document.extensions = extensions;
        let mut seen: BTreeMap<ElementId, Location> = BTreeMap::new();
        for node in element_nodes {
            let (element, id_location, contains) = self.element(node)?;
            if let Some(first) = seen.get(element.id()) {
                return Err(rerr(
                    id_location,
                    format!("duplicate element id '{}' at {first} and {id_location}", element.id()),
                ));
            }
            seen.insert(element.id().clone(), id_location);
            if let Some(targets) = contains {
                document.add_relationship(Relationship::new(element.id().clone(), RelationshipType::Contains, targets));
            }
            document.add_element(element).expect("uniqueness checked above");
        }
        for node in relationship_nodes {
            let relationship = self.relationship(node)?;
            document.add_relationship(relationship);
        }
        Ok(ReadOutcome { document, findings: self.findings })
    }

    fn creation_info(&mut self, entry: &Entry, spec_version: &str) -> Result<CreationInfo, ReadError> {
        let entries = map_of(&entry.value, "creationInfo")?;
        unique_keys(entries, "creationInfo")?;
        let mut created = None;
        let mut created_by = Vec::new();
        let mut extensions = Extensions::new();
        for e in entries {
            match e.key.as_str() {
                "created" => created = Some(parse_at::<Timestamp>(&e.value, "created")?),
                "createdBy" => created_by = id_list(&e.value, "createdBy")?,
                _ => self.unknown(format!("creationInfo.{}", e.key), e, &mut extensions),
            }
        }
        let created = created.ok_or_else(|| rerr(entry.key_location, "creationInfo is missing 'created'"))?;
        let mut info = CreationInfo::new(created, created_by, spec_version)
            .map_err(|e| rerr(entry.key_location, e.to_string()))?;
        info.extensions = extensions;
        Ok(info)
    }

    fn element(&mut self, node: &Node) -> Result<(Element, Location, Option<Vec<ElementId>>), ReadError> {
        let entries = map_of(node, "element")?;
        unique_keys(entries, "element")?;
        let find = |key: &str| entries.iter().find(|e| e.key == key);
        let id_entry = find("spdxId").ok_or_else(|| rerr(node.location, "element is missing 'spdxId'"))?;
        let id: ElementId = parse_at(&id_entry.value, "spdxId")?;
        let type_entry =
            find("type").ok_or_else(|| rerr(node.location, format!("element '{id}' is missing 'type'")))?;
        let kind: ElementKind = parse_at(&type_entry.value, "type")?;
        let rest = entries.iter().filter(|e| e.key != "spdxId" && e.key != "type");

        if kind == ElementKind::Agent {
            let mut name = None;
            let mut agent_kind = None;
            let mut extensions = Extensions::new();
            for e in rest {
                match e.key.as_str() {
                    "name" => name = Some(scalar_of(&e.value, "name")?.to_string()),
                    "agentKind" => agent_kind = Some(parse_at::<AgentKind>(&e.value, "agentKind")?),
                    _ => self.unknown(element_path(id.as_str(), Some(&e.key)), e, &mut extensions),
                }
            }
            let name = name.ok_or_else(|| rerr(node.location, format!("agent '{id}' is missing 'name'")))?;
            let agent_kind =
                agent_kind.ok_or_else(|| rerr(node.location, format!("agent '{id}' is missing 'agentKind'")))?;
            let mut agent = Agent::new(id, name, agent_kind);
            agent.extensions = extensions;
            return Ok((Element::Agent(agent), id_entry.value.location, None));
        }

        let mut element = match kind {
            ElementKind::AiPackage => Element::Ai(AiPackage::new(id.clone())),
            ElementKind::DatasetPackage => Element::Dataset(DatasetPackage::new(id.clone())),
            _ => Element::Package(Package::new(id.clone())),
        };
        let profile = element.profile().expect("packages have a profile");
        let catalog = Catalog::bundled();
        let mut set_from: BTreeMap<String, Location> = BTreeMap::new();
        let mut contains = None;
        let mut extensions = Extensions::new();
        for e in rest {
            let canonical = catalog.canonical_name(&e.key).filter(|(name, _)| catalog.is_applicable(profile, name));
            let Some((name, via_alias)) = canonical else {
                self.unknown(element_path(id.as_str(), Some(&e.key)), e, &mut extensions);
                continue;
            };
            if let Some(first) = set_from.insert(name.to_string(), e.key_location) {
                return Err(rerr(e.key_location, format!("field '{name}' of '{id}' given twice (first at {first})")));
            }
            if via_alias {
                self.findings.push(
                    Finding::new(
                        Code::Alias,
                        element_path(id.as_str(), Some(name)),
                        format!("'{}' normalized to '{name}'", e.key),
                    )
                    .at(e.key_location),
                );
            }
            if name == "contains" {
                contains = Some(id_list(&e.value, "contains")?);
                continue;
            }
            let slot = element.field_mut(name).expect("applicable stored field has a slot");
            slot.set(&e.value.to_value())
                .map_err(|err| rerr(e.value.location, format!("{}: {err}", element_path(id.as_str(), Some(name)))))?;
        }
        *element.extensions_mut() = extensions;
        Ok((element, id_entry.value.location, contains))
    }

    fn relationship(&mut self, node: &Node) -> Result<Relationship, ReadError> {
        let entries = map_of(node, "relationship")?;
        unique_keys(entries, "relationship")?;
        let mut from = None;
        let mut rel_type = None;
        let mut to = None;
        let mut completeness = None;
        let mut unknown = Vec::new();
        for e in entries {
            match e.key.as_str() {
                "from" => from = Some(parse_at::<ElementId>(&e.value, "from")?),
                "type" => rel_type = Some(parse_at::<RelationshipType>(&e.value, "relationship type")?),
                "to" => to = Some(id_list(&e.value, "to")?),
                "completeness" => completeness = Some(parse_at::<Completeness>(&e.value, "completeness")?),
                _ => unknown.push(e),
            }
        }
        let missing = |key: &str| rerr(node.location, format!("relationship is missing '{key}'"));
        let mut relationship = Relationship::new(
            from.ok_or_else(|| missing("from"))?,
            rel_type.ok_or_else(|| missing("type"))?,
            to.ok_or_else(|| missing("to"))?,
        );
        relationship.completeness = completeness;
        let path = relationship.path();
        for e in unknown {
            self.unknown(format!("{path}.{}", e.key), e, &mut relationship.extensions);
        }
        Ok(relationship)
    }
}

fn id_list(node: &Node, what: &str) -> Result<Vec<ElementId>, ReadError> {
    let items = node
        .as_list()
        .ok_or_else(|| rerr(node.location, format!("{what} must be a list, found a {}", node.kind_name())))?;
    items.iter().map(|item| parse_at(item, what)).collect()
}

/// Canonical bytes for a document that holds every model invariant.
pub fn write_document(doc: &Document) -> Result<Vec<u8>, WriteError> {
    let violations = doc.check_invariants();
    if !violations.is_empty() {
        return Err(WriteError { violations });
    }
    Ok(syntax::render(&document_value(doc)).into_bytes())
}

fn push_extensions(out: &mut Vec<(String, Value)>, extensions: &Extensions) {
    out.extend(extensions.iter().map(|(k, v)| (k.clone(), v.clone())));
}

fn id_values(ids: &[ElementId]) -> Value {
    Value::List(ids.iter().map(|id| Value::scalar(id.as_str())).collect())
}

fn document_value(doc: &Document) -> Value {
    let info = doc.creation_info();
    let mut top = vec![
        ("@context".to_string(), Value::scalar(CONTEXT)),
        ("specVersion".to_string(), Value::scalar(info.spec_version())),
    ];
    let mut creation = vec![
        ("created".to_string(), Value::scalar(info.created().to_string())),
        ("createdBy".to_string(), id_values(info.created_by())),
    ];
    push_extensions(&mut creation, &info.extensions);
    top.push(("creationInfo".into(), Value::Map(creation)));
    push_extensions(&mut top, &doc.extensions);

    let catalog = Catalog::bundled();
    for element in doc.elements() {
        let mut fields = vec![
            ("spdxId".to_string(), Value::scalar(element.id().as_str())),
            ("type".to_string(), Value::scalar(element.kind().as_str())),
        ];
        match element {
            Element::Agent(agent) => {
                fields.push(("name".into(), Value::scalar(&agent.name)));
                fields.push(("agentKind".into(), Value::scalar(agent.kind.as_str())));
            }
            _ => {
                let profile = element.profile().expect("packages have a profile");
                for descriptor in catalog.applicable(profile) {
                    if let Some(value) = element.field(&descriptor.name).and_then(|s| s.get()) {
                        fields.push((descriptor.name.clone(), value));
                    }
                }
            }
        }
        push_extensions(&mut fields, element.extensions());
        top.push(("element".into(), Value::Map(fields)));
    }

    for r in doc.relationships() {
        let mut fields = vec![
            ("from".to_string(), Value::scalar(r.from.as_str())),
            ("type".to_string(), Value::scalar(r.rel_type.as_str())),
            ("to".to_string(), id_values(&r.to)),
        ];
        if let Some(c) = r.completeness {
            fields.push(("completeness".into(), Value::scalar(c.as_str())));
        }
        push_extensions(&mut fields, &r.extensions);
        top.push(("relationship".into(), Value::Map(fields)));
    }
    Value::Map(top)
}

/// `write_document(read_document(bytes))`. Idempotent.
pub fn canonicalize(bytes: &[u8]) -> Result<Vec<u8>, IoError> {
    let outcome = read_document(bytes)?;
    Ok(write_document(&outcome.document)?)
}
