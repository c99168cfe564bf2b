// SPDX-License-Identifier: Apache-2.0

//! Conformance policies and document validation.
//!
//! A policy lists required fields per profile and switches cross rules on or
//! off. A no-assertion value satisfies a required field but is noted at info
//! level.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::catalog::{Catalog, Profile};
use crate::findings::{element_path, sort_findings, Code, Finding, Severity};
use crate::io::ReadOutcome;
use crate::license::{license_findings, LicenseSnapshot};
use crate::model::{Document, Element, FieldState, Presence, RelationshipType};
use crate::syntax::{self, Location, Value};

string_enum! {
    pub enum CrossRule {
        SensitiveNoAnon => "sensitive-no-anon",
        RelType => "rel-type",
        ThresholdOrphan => "threshold-orphan",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformancePolicy {
    pub name: String,
    pub required: BTreeMap<Profile, BTreeSet<String>>,
    pub cross_rules: BTreeSet<CrossRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("policy {location}: {message}")]
pub struct PolicyError {
    pub location: Location,
    pub message: String,
}

fn perr(location: Location, message: impl Into<String>) -> PolicyError {
    PolicyError { location, message: message.into() }
}

const DEFAULT_POLICY: &str = include_str!("../data/default.policy");

impl ConformancePolicy {
    /// Required fields that apply to a package of `profile`.
    pub fn required_for(&self, profile: Profile) -> BTreeSet<&str> {
        let mut out: BTreeSet<&str> = BTreeSet::new();
        for p in [Profile::Base, profile] {
            if let Some(fields) = self.required.get(&p) {
                out.extend(fields.iter().map(String::as_str));
            }
        }
        out
    }

    pub fn required_count(&self, profile: Profile) -> usize {
        self.required.get(&profile).map_or(0, BTreeSet::len)
    }
}

pub fn default_policy() -> ConformancePolicy {
    load_policy(DEFAULT_POLICY.as_bytes()).expect("bundled default policy is valid")
}

pub fn load_policy(bytes: &[u8]) -> Result<ConformancePolicy, PolicyError> {
    let text = std::str::from_utf8(bytes).map_err(|_| perr(Location::new(1, 1), "policy file is not valid UTF-8"))?;
    let root = syntax::parse(text).map_err(|e| perr(e.location, e.message))?;
    let catalog = Catalog::bundled();
    let mut name = None;
    let mut required = BTreeMap::new();
    let mut cross_rules: BTreeSet<CrossRule> = CrossRule::ALL.iter().copied().collect();
    let mut seen = BTreeSet::new();

    for entry in root.as_map().unwrap_or_default() {
        if !seen.insert(entry.key.as_str()) {
            return Err(perr(entry.key_location, format!("duplicate key '{}'", entry.key)));
        }
        match entry.key.as_str() {
            "name" => {
                let n = entry
                    .value
                    .as_scalar()
                    .filter(|n| !n.trim().is_empty())
                    .ok_or_else(|| perr(entry.value.location, "name must be non-empty text"))?;
                name = Some(n.to_string());
            }
            "required" => {
                let sections = entry
                    .value
                    .as_map()
                    .ok_or_else(|| perr(entry.value.location, "required must be a block of profiles"))?;
                for section in sections {
                    let profile: Profile =
                        section.key.parse().map_err(|e| perr(section.key_location, format!("{e}")))?;
                    let items = section
                        .value
                        .as_list()
                        .ok_or_else(|| perr(section.value.location, "required fields must be a list"))?;
                    let mut fields = BTreeSet::new();
                    for item in items {
                        let field = item.as_scalar().ok_or_else(|| perr(item.location, "field names must be text"))?;
                        if !catalog.is_applicable(profile, field) {
                            return Err(perr(
                                item.location,
                                format!("unknown field '{field}' for profile '{profile}'"),
                            ));
                        }
                        if !fields.insert(field.to_string()) {
                            return Err(perr(item.location, format!("field '{field}' listed twice")));
                        }
                    }
                    if required.insert(profile, fields).is_some() {
                        return Err(perr(section.key_location, format!("profile '{profile}' listed twice")));
                    }
                }
            }
            "crossRules" => {
                let toggles = entry
                    .value
                    .as_map()
                    .ok_or_else(|| perr(entry.value.location, "crossRules must be a block of rule: on|off"))?;
                for toggle in toggles {
                    let rule: CrossRule = toggle.key.parse().map_err(|e| perr(toggle.key_location, format!("{e}")))?;
                    match toggle.value.as_scalar() {
                        Some("on") => cross_rules.insert(rule),
                        Some("off") => cross_rules.remove(&rule),
                        _ => return Err(perr(toggle.value.location, "expected 'on' or 'off'")),
                    };
                }
            }
            other => return Err(perr(entry.key_location, format!("unknown policy key '{other}'"))),
        }
    }

    let name = name.ok_or_else(|| perr(root.location, "policy is missing 'name'"))?;
    for profile in [Profile::Ai, Profile::Dataset] {
        if required.get(&profile).is_none_or(BTreeSet::is_empty) {
            return Err(perr(root.location, format!("policy must require at least one '{profile}' field")));
        }
    }
    Ok(ConformancePolicy { name, required, cross_rules })
}

string_enum! {
    pub enum Verdict {
        Pass => "pass",
        Fail => "fail",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub policy_name: String,
    pub findings: Vec<Finding>,
    pub verdict: Verdict,
    pub counts: BTreeMap<Severity, usize>,
}

impl ValidationReport {
    pub fn new(policy_name: impl Into<String>, mut findings: Vec<Finding>) -> Self {
        sort_findings(&mut findings);
        let mut counts: BTreeMap<Severity, usize> = Severity::ALL.iter().map(|s| (*s, 0)).collect();
        for f in &findings {
            *counts.entry(f.severity).or_default() += 1;
        }
        let verdict = if counts[&Severity::Error] > 0 { Verdict::Fail } else { Verdict::Pass };
        Self { policy_name: policy_name.into(), findings, verdict, counts }
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.counts.get(&severity).copied().unwrap_or(0)
    }

    pub fn with_code(&self, code: Code) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(move |f| f.code == code)
    }

    /// Structured form in the tree syntax.
    pub fn to_value(&self) -> Value {
        let mut top = vec![
            ("policy".to_string(), Value::scalar(&self.policy_name)),
            ("verdict".to_string(), Value::scalar(self.verdict.as_str())),
            (
                "counts".to_string(),
                Value::Map(
                    Severity::ALL
                        .iter()
                        .map(|s| (s.as_str().to_string(), Value::scalar(self.count(*s).to_string())))
                        .collect(),
                ),
            ),
        ];
        for f in &self.findings {
            top.push(("finding".into(), finding_value(f)));
        }
        Value::Map(top)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out.push_str(&format!(
            "verdict: {} (policy {}; {} errors, {} warnings, {} info)\n",
            self.verdict,
            self.policy_name,
            self.count(Severity::Error),
            self.count(Severity::Warning),
            self.count(Severity::Info)
        ));
        out
    }
}

pub fn finding_value(f: &Finding) -> Value {
    let mut fields = vec![
        ("code".to_string(), Value::scalar(f.code.as_str())),
        ("severity".to_string(), Value::scalar(f.severity.as_str())),
        ("path".to_string(), Value::scalar(&f.path)),
        ("message".to_string(), Value::scalar(&f.message)),
    ];
    if let Some(loc) = f.location {
        fields.push(("line".into(), Value::scalar(loc.line.to_string())));
        fields.push(("column".into(), Value::scalar(loc.column.to_string())));
    }
    Value::Map(fields)
}

/// Checks a document against a policy. Problems are findings, never errors.
pub fn validate(doc: &Document, policy: &ConformancePolicy) -> ValidationReport {
    let mut findings = Vec::new();

    for element in doc.elements() {
        let Some(profile) = element.profile() else { continue };
        let id = element.id().as_str();
        for field in policy.required_for(profile) {
            let path = element_path(id, Some(field));
            match doc.field_state(id, field) {
                Some(FieldState::Absent) | None => {
                    findings.push(Finding::new(Code::ReqMissing, path, format!("required field '{field}' is absent")))
                }
                Some(FieldState::NoAssertion) => findings.push(Finding::new(
                    Code::ReqNoAssertion,
                    path,
                    format!("required field '{field}' is no-assertion"),
                )),
                Some(FieldState::Populated) => {}
            }
        }
        let base = element.base().expect("packages have a base");
        let snapshot = LicenseSnapshot::bundled();
        for (field, license) in
            [("declaredLicense", &base.declared_license), ("concludedLicense", &base.concluded_license)]
        {
            if let Some(ast) = license {
                findings.extend(license_findings(ast, snapshot, &element_path(id, Some(field))));
            }
        }
    }

    for v in doc.check_invariants() {
        findings.push(Finding::new(v.code, v.path, v.message));
    }
    findings.extend(check_enabled_rules(doc, &policy.cross_rules));
    ValidationReport::new(&policy.name, findings)
}

/// Validation that also carries over the notes produced while reading.
pub fn validate_read(outcome: &ReadOutcome, policy: &ConformancePolicy) -> ValidationReport {
    let mut report = validate(&outcome.document, policy);
    let mut findings = std::mem::take(&mut report.findings);
    findings.extend(outcome.findings.iter().cloned());
    ValidationReport::new(&policy.name, findings)
}

/// All shipped cross rules.
pub fn check_cross_rules(doc: &Document) -> Vec<Finding> {
    check_enabled_rules(doc, &CrossRule::ALL.iter().copied().collect())
}

pub fn check_enabled_rules(doc: &Document, rules: &BTreeSet<CrossRule>) -> Vec<Finding> {
    let mut out = Vec::new();
    if rules.contains(&CrossRule::SensitiveNoAnon) {
        for ds in doc.elements().filter_map(Element::as_dataset) {
            if ds.has_sensitive_personal_information == Some(Presence::Yes) && ds.anonymization_method_used.is_empty() {
                out.push(Finding::new(
                    Code::SensitiveNoAnon,
                    element_path(ds.base.id.as_str(), Some("anonymizationMethodUsed")),
                    "dataset holds sensitive personal information but names no anonymization method",
                ));
            }
        }
    }
    if rules.contains(&CrossRule::RelType) {
        for r in doc.relationships() {
            if !matches!(r.rel_type, RelationshipType::TrainedOn | RelationshipType::TestedOn) {
                continue;
            }
            for to in &r.to {
                if let Some(target) = doc.resolve_reference(to.as_str()) {
                    if target.as_dataset().is_none() {
                        out.push(Finding::new(
                            Code::RelType,
                            format!("{}.to", r.path()),
                            format!("{} target '{to}' is a {}, not a DatasetPackage", r.rel_type, target.kind()),
                        ));
                    }
                }
            }
        }
    }
    if rules.contains(&CrossRule::ThresholdOrphan) {
        for ai in doc.elements().filter_map(Element::as_ai) {
            for name in ai.metric_decision_threshold.keys() {
                if !ai.metric.contains_key(name) {
                    out.push(Finding::new(
                        Code::ThresholdOrphan,
                        element_path(ai.base.id.as_str(), Some("metricDecisionThreshold")),
                        format!("threshold '{name}' has no metric of that name"),
                    ));
                }
            }
        }
    }
    out
}
