// SPDX-License-Identifier: Apache-2.0

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::catalog::Catalog;
use crate::findings::{element_path, Code};
use crate::syntax::Value;

use super::element::{Element, ElementKind, Extensions};
use super::fields::FieldState;
use super::types::*;

impl Borrow<str> for ElementId {
    fn borrow(&self) -> &str {
        self.as_str()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid creation info: {0}")]
    CreationInfo(String),
    #[error("element id '{0}' is already present")]
    DuplicateId(ElementId),
}

/// Document bookkeeping: when, by whom, and against which spec version.
#[derive(Debug, Clone, PartialEq)]
pub struct CreationInfo {
    created: Timestamp,
    created_by: Vec<ElementId>,
    spec_version: String,
    pub extensions: Extensions,
}

impl CreationInfo {
    pub fn new(
        created: Timestamp,
        created_by: Vec<ElementId>,
        spec_version: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let spec_version = spec_version.into();
        if created_by.is_empty() {
            return Err(ModelError::CreationInfo("createdBy must name at least one agent".into()));
        }
        if !is_semver_triplet(&spec_version) {
            return Err(ModelError::CreationInfo(format!("specVersion '{spec_version}' is not MAJOR.MINOR.PATCH")));
        }
        Ok(Self { created, created_by, spec_version, extensions: Extensions::new() })
    }

    pub fn created(&self) -> Timestamp {
        self.created
    }

    pub fn created_by(&self) -> &[ElementId] {
        &self.created_by
    }

    pub fn spec_version(&self) -> &str {
        &self.spec_version
    }
}

type SortKey<'a> =
    (&'a ElementId, RelationshipType, &'a [ElementId], Option<Completeness>, Vec<(&'a String, &'a Value)>);

#[derive(Debug, Clone, PartialEq)]
pub struct Relationship {
    pub from: ElementId,
    pub rel_type: RelationshipType,
    pub to: Vec<ElementId>,
    pub completeness: Option<Completeness>,
    pub extensions: Extensions,
}

impl Relationship {
    pub fn new(from: ElementId, rel_type: RelationshipType, to: Vec<ElementId>) -> Self {
        Self { from, rel_type, to, completeness: None, extensions: Extensions::new() }
    }

    pub fn path(&self) -> String {
        format!("relationship[{}:{}]", self.from, self.rel_type)
    }

    fn sort_key(&self) -> SortKey<'_> {
        (&self.from, self.rel_type, &self.to, self.completeness, self.extensions.iter().collect())
    }
}

/// A model invariant the document does not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// One of REF-UNRESOLVED, REF-KIND, CYCLE or INVARIANT.
    pub code: Code,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Shortest cycle among `contains` edges, starting at its least id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentCycle {
    pub members: Vec<ElementId>,
}

impl fmt::Display for ContainmentCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for id in &self.members {
            write!(f, "{id} -> ")?;
        }
        write!(f, "{}", self.members[0])
    }
}

/// A graph of elements and relationships. Elements are keyed by id and
/// relationships kept sorted, so equal content compares equal regardless of
/// insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    creation_info: CreationInfo,
    elements: BTreeMap<ElementId, Element>,
    relationships: Vec<Relationship>,
    pub extensions: Extensions,
}

pub fn new_document(creation_info: CreationInfo) -> Document {
    Document::new(creation_info)
}

impl Document {
    /// An empty shell; at least one element must be added before writing.
    pub fn new(creation_info: CreationInfo) -> Self {
        Self { creation_info, elements: BTreeMap::new(), relationships: Vec::new(), extensions: Extensions::new() }
    }

    pub fn creation_info(&self) -> &CreationInfo {
        &self.creation_info
    }

    pub fn creation_info_mut(&mut self) -> &mut CreationInfo {
        &mut self.creation_info
    }

    /// References are not checked here; that is a validation concern.
    pub fn add_element(&mut self, element: impl Into<Element>) -> Result<(), ModelError> {
        let element = element.into();
        let id = element.id().clone();
        if self.elements.contains_key(&id) {
            return Err(ModelError::DuplicateId(id));
        }
        self.elements.insert(id, element);
        Ok(())
    }

    pub fn with_element(mut self, element: impl Into<Element>) -> Result<Self, ModelError> {
        self.add_element(element)?;
        Ok(self)
    }

    pub fn remove_element(&mut self, id: &str) -> Option<Element> {
        self.elements.remove(id)
    }

    /// Exact, case-sensitive lookup.
    pub fn resolve_reference(&self, id: &str) -> Option<&Element> {
        self.elements.get(id)
    }

    pub fn element_mut(&mut self, id: &str) -> Option<&mut Element> {
        self.elements.get_mut(id)
    }

    /// Elements in id order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.elements.values()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn add_relationship(&mut self, relationship: Relationship) {
        let at = self.relationships.partition_point(|r| r.sort_key() <= relationship.sort_key());
        self.relationships.insert(at, relationship);
    }

    pub fn relationships(&self) -> &[Relationship] {
        &self.relationships
    }

    pub fn retain_relationships(&mut self, keep: impl FnMut(&Relationship) -> bool) {
        self.relationships.retain(keep);
    }

    /// Targets of relationships of `rel_type` leaving `from`, deduplicated, in id order.
    pub fn targets(&self, from: &str, rel_type: RelationshipType) -> Vec<&ElementId> {
        let set: BTreeSet<&ElementId> = self
            .relationships
            .iter()
            .filter(|r| r.from.as_str() == from && r.rel_type == rel_type)
            .flat_map(|r| &r.to)
            .collect();
        set.into_iter().collect()
    }

    /// State of a catalog field on a package, including the two fields that
    /// live outside the package record: `spdxId` (always populated) and
    /// `contains` (derived from relationships). `None` for agents, unknown
    /// ids and fields that do not apply to the package's profile.
    pub fn field_state(&self, id: &str, field: &str) -> Option<FieldState> {
        let element = self.resolve_reference(id)?;
        let profile = element.profile()?;
        if !Catalog::bundled().is_applicable(profile, field) {
            return None;
        }
        match field {
            "spdxId" => Some(FieldState::Populated),
            "contains" => Some(if self.targets(id, RelationshipType::Contains).is_empty() {
                FieldState::Absent
            } else {
                FieldState::Populated
            }),
            _ => element.field_state(field),
        }
    }

    /// Removes a field's value. Returns false when the field cannot be cleared.
    pub fn clear_field(&mut self, id: &str, field: &str) -> bool {
        if field == "contains" {
            let present = self.resolve_reference(id).is_some_and(|e| e.profile().is_some());
            if present {
                self.relationships.retain(|r| !(r.from.as_str() == id && r.rel_type == RelationshipType::Contains));
            }
            return present;
        }
        match self.element_mut(id).and_then(|e| e.field_mut(field)) {
            Some(slot) => {
                slot.clear();
                true
            }
            None => false,
        }
    }

    /// Deterministic topological order of all elements under `contains`,
    /// least id first among ready elements.
    pub fn containment_graph(&self) -> Result<Vec<ElementId>, ContainmentCycle> {
        let edges = self.contains_edges();
        let mut indegree: BTreeMap<&ElementId, usize> = self.elements.keys().map(|id| (id, 0)).collect();
        for targets in edges.values() {
            for to in targets {
                *indegree.get_mut(to).expect("edges only join elements") += 1;
            }
        }
        let mut ready: BTreeSet<&ElementId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(id, _)| *id).collect();
        let mut order = Vec::with_capacity(indegree.len());
        while let Some(next) = ready.pop_first() {
            order.push(next.clone());
            for to in edges.get(next).into_iter().flatten() {
                let d = indegree.get_mut(to).expect("edges only join elements");
                *d -= 1;
                if *d == 0 {
                    ready.insert(to);
                }
            }
        }
        if order.len() == indegree.len() {
            return Ok(order);
        }
        let placed: BTreeSet<&ElementId> = order.iter().collect();
        let remaining: Vec<&ElementId> = indegree.keys().filter(|id| !placed.contains(*id)).copied().collect();
        Err(shortest_cycle(&edges, &remaining))
    }

    fn contains_edges(&self) -> BTreeMap<&ElementId, BTreeSet<&ElementId>> {
        let mut edges: BTreeMap<&ElementId, BTreeSet<&ElementId>> = BTreeMap::new();
        for r in &self.relationships {
            if r.rel_type != RelationshipType::Contains {
                continue;
            }
            let Some((from, _)) = self.elements.get_key_value(&r.from) else {
                continue;
            };
            for to in &r.to {
                if let Some((to, _)) = self.elements.get_key_value(to) {
                    edges.entry(from).or_default().insert(to);
                }
            }
        }
        edges
    }

    /// Every model invariant that does not hold, in a stable order.
    pub fn check_invariants(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |code: Code, path: String, message: String| out.push(Violation { code, path, message });

        if self.elements.is_empty() {
            push(Code::Invariant, "document".into(), "a document must contain at least one element".into());
        }

        for id in self.creation_info.created_by() {
            if let Some((code, message)) = self.agent_reference_problem(id) {
                push(code, "creationInfo.createdBy".into(), message);
            }
        }

        for element in self.elements.values() {
            let id = element.id().as_str();
            match element {
                Element::Agent(agent) => {
                    if agent.name.trim().is_empty() {
                        push(Code::Invariant, element_path(id, Some("name")), "agent name must not be empty".into());
                    }
                }
                _ => self.package_violations(element, &mut push),
            }
        }

        for r in &self.relationships {
            let path = r.path();
            if self.resolve_reference(r.from.as_str()).is_none() {
                push(Code::RefUnresolved, format!("{path}.from"), format!("'{}' does not resolve", r.from));
            }
            if r.to.is_empty() {
                push(Code::Invariant, format!("{path}.to"), "a relationship needs at least one target".into());
            }
            for to in &r.to {
                if self.resolve_reference(to.as_str()).is_none() {
                    push(Code::RefUnresolved, format!("{path}.to"), format!("'{to}' does not resolve"));
                }
            }
        }

        if let Err(cycle) = self.containment_graph() {
            push(
                Code::Cycle,
                element_path(cycle.members[0].as_str(), Some("contains")),
                format!("contains relationships form a cycle: {cycle}"),
            );
        }
        out
    }

    fn agent_reference_problem(&self, id: &ElementId) -> Option<(Code, String)> {
        match self.resolve_reference(id.as_str()) {
            None => Some((Code::RefUnresolved, format!("'{id}' does not resolve"))),
            Some(e) if e.kind() != ElementKind::Agent => {
                Some((Code::RefKind, format!("'{id}' is a {}, not an Agent", e.kind())))
            }
            Some(_) => None,
        }
    }

    fn package_violations(&self, element: &Element, push: &mut impl FnMut(Code, String, String)) {
        let id = element.id().as_str();
        let base = element.base().expect("packages have a base");
        let agents = base
            .originated_by
            .iter()
            .map(|a| ("originatedBy", a))
            .chain(base.supplied_by.iter().map(|a| ("suppliedBy", a)));
        for (field, agent) in agents {
            if let Some((code, message)) = self.agent_reference_problem(agent) {
                push(code, element_path(id, Some(field)), message);
            }
        }
        if let (Some(built), Some(released)) = (base.built_time, base.release_time) {
            if built > released {
                push(
                    Code::Invariant,
                    element_path(id, Some("builtTime")),
                    format!("builtTime {built} is after releaseTime {released}"),
                );
            }
        }
        let expected = match element {
            Element::Ai(_) => Some(PrimaryPurpose::AiModel),
            Element::Dataset(_) => Some(PrimaryPurpose::Dataset),
            _ => None,
        };
        if let (Some(expected), Some(actual)) = (expected, base.primary_purpose) {
            if expected != actual {
                push(
                    Code::Invariant,
                    element_path(id, Some("primaryPurpose")),
                    format!("primaryPurpose of a {} must be {expected}, found {actual}", element.kind()),
                );
            }
        }
        if let Element::Ai(ai) = element {
            for (name, value) in &ai.metric {
                if let MetricValue::Number(n) = value {
                    if !n.is_finite() {
                        push(
                            Code::Invariant,
                            element_path(id, Some("metric")),
                            format!("metric '{name}' is not finite"),
                        );
                    }
                }
            }
            for (name, t) in &ai.metric_decision_threshold {
                if !t.is_finite() {
                    push(
                        Code::Invariant,
                        element_path(id, Some("metricDecisionThreshold")),
                        format!("threshold for '{name}' is not finite"),
                    );
                }
            }
        }
        let profile = element.profile().expect("packages have a profile");
        for descriptor in Catalog::bundled().applicable(profile) {
            let Some(value) = element.field(&descriptor.name).and_then(|s| s.get()) else {
                continue;
            };
            let path = element_path(id, Some(&descriptor.name));
            if has_empty_text(&value) {
                push(Code::Invariant, path.clone(), "entries must not be empty text".into());
            }
            if let Value::List(items) = &value {
                let distinct: BTreeSet<&Value> = items.iter().collect();
                if distinct.len() != items.len() {
                    push(Code::Invariant, path, "list contains duplicate entries".into());
                }
            }
        }
    }
}

fn has_empty_text(value: &Value) -> bool {
    match value {
        Value::Scalar(s) => s.trim().is_empty(),
        Value::List(items) => items.iter().any(has_empty_text),
        Value::Map(entries) => entries.iter().any(|(k, v)| k.trim().is_empty() || has_empty_text(v)),
    }
}

fn shortest_cycle(edges: &BTreeMap<&ElementId, BTreeSet<&ElementId>>, candidates: &[&ElementId]) -> ContainmentCycle {
    let mut best: Option<Vec<ElementId>> = None;
    for &start in candidates {
        // Cycles are reported from their least member, so only look at nodes >= start.
        let allowed: BTreeSet<&ElementId> = candidates.iter().copied().filter(|id| *id >= start).collect();
        let successors = |node: &ElementId| {
            edges.get(node).into_iter().flatten().copied().filter(|n| allowed.contains(n)).collect::<Vec<_>>()
        };
        // Distance from every allowed node back to `start`.
        let mut dist: BTreeMap<&ElementId, usize> = BTreeMap::from([(start, 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            for &pred in &allowed {
                if !dist.contains_key(pred) && edges.get(pred).is_some_and(|t| t.contains(node)) {
                    dist.insert(pred, dist[node] + 1);
                    queue.push_back(pred);
                }
            }
        }
        let Some(len) = successors(start).iter().filter_map(|n| dist.get(n)).min().map(|d| d + 1) else {
            continue;
        };
        if best.as_ref().is_some_and(|b| b.len() < len) {
            continue;
        }
        // Least successor that stays on a shortest way back.
        let mut cycle = vec![start.clone()];
        let (mut node, mut remaining) = (start, len);
        while remaining > 1 {
            let next = successors(node)
                .into_iter()
                .find(|n| *n != start && dist.get(n) == Some(&(remaining - 1)))
                .expect("a shortest path continues");
            cycle.push(next.clone());
            node = next;
            remaining -= 1;
        }
        if best.as_ref().is_none_or(|b| (cycle.len(), &cycle) < (b.len(), b)) {
            best = Some(cycle);
        }
    }
    ContainmentCycle { members: best.expect("a graph without a topological order has a cycle") }
}
