// SPDX-License-Identifier: Apache-2.0

//! Regulation coverage matrices and model-card generation.
//!
//! A matrix maps each obligation of a regulation onto catalog fields. An
//! obligation is satisfied when every mapped field is populated on some package
//! of the field's profile. No-assertion does not count as populated here.

mod modelcard;

pub use modelcard::*;

use std::collections::BTreeSet;

use crate::catalog::{FieldRef, Profile};
pub use crate::datafile::DataFileError;
use crate::datafile::{data_err, field_refs, parse_data, text_of};
use crate::findings::element_path;
use crate::model::{Document, Element, FieldState};
use crate::rate::Rate;
use crate::syntax::{Entry, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub id: String,
    pub category: String,
    pub description: String,
    pub mapped_fields: Vec<FieldRef>,
    pub mappable: bool,
    /// Filled in without an authoritative source; expected to be edited.
    pub reconstructed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMatrix {
    /// Short identifier, e.g. `eu-ai-act`.
    pub regulation: String,
    pub title: String,
    pub version: String,
    pub obligations: Vec<Obligation>,
}

impl CoverageMatrix {
    pub fn categories(&self) -> BTreeSet<&str> {
        self.obligations.iter().map(|o| o.category.as_str()).collect()
    }

    /// Every field the matrix refers to.
    pub fn fields(&self) -> BTreeSet<&FieldRef> {
        self.obligations.iter().flat_map(|o| &o.mapped_fields).collect()
    }
}

const MATRIX: &str = "matrix";

pub const BUILTIN_MATRICES: &[(&str, &str)] = &[
    ("eu-ai-act", include_str!("../../data/matrices/eu-ai-act.matrix")),
    ("medical-devices", include_str!("../../data/matrices/medical-devices.matrix")),
    ("ieee-7000", include_str!("../../data/matrices/ieee-7000.matrix")),
];

/// A bundled matrix by name.
pub fn builtin_matrix(name: &str) -> Option<CoverageMatrix> {
    BUILTIN_MATRICES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| load_matrix(text.as_bytes()).unwrap_or_else(|e| panic!("bundled matrix {n}: {e}")))
}

pub fn load_matrix(bytes: &[u8]) -> Result<CoverageMatrix, DataFileError> {
    let root = parse_data(bytes, MATRIX)?;
    let mut regulation = None;
    let mut title = None;
    let mut version = None;
    let mut obligations: Vec<Obligation> = Vec::new();
    for entry in root.as_map().unwrap_or_default() {
        let single = |slot: &Option<String>| {
            if slot.is_some() {
                Err(data_err(MATRIX, entry.key_location, format!("duplicate key '{}'", entry.key)))
            } else {
                Ok(())
            }
        };
        match entry.key.as_str() {
            "regulation" => {
                single(&regulation)?;
                regulation = Some(text_of(entry, MATRIX)?);
            }
            "title" => {
                single(&title)?;
                title = Some(text_of(entry, MATRIX)?);
            }
            "version" => {
                single(&version)?;
                version = Some(text_of(entry, MATRIX)?);
            }
            "obligation" => {
                let obligation = obligation(entry)?;
                if obligations.iter().any(|o| o.id == obligation.id) {
                    return Err(data_err(
                        MATRIX,
                        entry.key_location,
                        format!("duplicate obligation id '{}'", obligation.id),
                    ));
                }
                obligations.push(obligation);
            }
            other => return Err(data_err(MATRIX, entry.key_location, format!("unknown key '{other}'"))),
        }
    }
    let regulation = regulation.ok_or_else(|| data_err(MATRIX, root.location, "missing 'regulation'"))?;
    if obligations.is_empty() {
        return Err(data_err(MATRIX, root.location, "a matrix needs at least one obligation"));
    }
    Ok(CoverageMatrix {
        title: title.unwrap_or_else(|| regulation.clone()),
        regulation,
        version: version.unwrap_or_default(),
        obligations,
    })
}

fn obligation(entry: &Entry) -> Result<Obligation, DataFileError> {
    let entries = entry
        .value
        .as_map()
        .ok_or_else(|| data_err(MATRIX, entry.value.location, "an obligation must be a block of keys"))?;
    let mut id = None;
    let mut category = None;
    let mut description = None;
    let mut fields = None;
    let mut mappable = None;
    let mut reconstructed = false;
    let flag = |e: &Entry| match e.value.as_scalar() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        _ => Err(data_err(MATRIX, e.value.location, format!("'{}' must be true or false", e.key))),
    };
    for e in entries {
        match e.key.as_str() {
            "id" => id = Some(text_of(e, MATRIX)?),
            "category" => category = Some(text_of(e, MATRIX)?),
            "description" => description = Some(text_of(e, MATRIX)?),
            "fields" => fields = Some(field_refs(e, MATRIX)?),
            "mappable" => mappable = Some(flag(e)?),
            "reconstructed" => reconstructed = flag(e)?,
            other => return Err(data_err(MATRIX, e.key_location, format!("unknown obligation key '{other}'"))),
        }
    }
    let missing = |key: &str| data_err(MATRIX, entry.key_location, format!("obligation is missing '{key}'"));
    let id = id.ok_or_else(|| missing("id"))?;
    let mapped_fields = fields.unwrap_or_default();
    let mappable = mappable.unwrap_or(!mapped_fields.is_empty());
    if mappable == mapped_fields.is_empty() {
        return Err(data_err(
            MATRIX,
            entry.key_location,
            format!("obligation '{id}': mappable obligations need fields and unmappable ones must have none"),
        ));
    }
    Ok(Obligation {
        category: category.ok_or_else(|| missing("category"))?,
        description: description.ok_or_else(|| missing("description"))?,
        id,
        mapped_fields,
        mappable,
        reconstructed,
    })
}

string_enum! {
    pub enum ObligationStatus {
        Satisfied => "satisfied",
        Partial => "partial",
        Missing => "missing",
        Unmappable => "unmappable",
    }
}

impl ObligationStatus {
    /// Order used for monotonicity: missing < partial < satisfied.
    pub fn rank(self) -> u8 {
        match self {
            ObligationStatus::Unmappable | ObligationStatus::Missing => 0,
            ObligationStatus::Partial => 1,
            ObligationStatus::Satisfied => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObligationResult {
    pub obligation_id: String,
    pub category: String,
    pub status: ObligationStatus,
    /// Paths of the populated fields that back the verdict.
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub regulation: String,
    pub per_obligation: Vec<ObligationResult>,
}

impl CoverageReport {
    pub fn count(&self, status: ObligationStatus) -> usize {
        self.per_obligation.iter().filter(|r| r.status == status).count()
    }

    pub fn satisfied(&self) -> usize {
        self.count(ObligationStatus::Satisfied)
    }

    pub fn total(&self) -> usize {
        self.per_obligation.len()
    }

    /// Satisfied over total; partial obligations are not counted.
    pub fn satisfied_rate(&self) -> Rate {
        Rate::new(self.satisfied() as u64, self.total().max(1) as u64).expect("satisfied never exceeds total")
    }

    pub fn to_value(&self) -> Value {
        let mut top = vec![
            ("regulation".to_string(), Value::scalar(&self.regulation)),
            ("satisfied".to_string(), Value::scalar(self.satisfied_rate().to_string())),
        ];
        let mut counts = Vec::new();
        for s in ObligationStatus::ALL {
            counts.push((s.as_str().to_string(), Value::scalar(self.count(*s).to_string())));
        }
        top.push(("counts".into(), Value::Map(counts)));
        for r in &self.per_obligation {
            top.push((
                "obligation".into(),
                Value::Map(vec![
                    ("id".into(), Value::scalar(&r.obligation_id)),
                    ("category".into(), Value::scalar(&r.category)),
                    ("status".into(), Value::scalar(r.status.as_str())),
                    ("evidence".into(), Value::List(r.evidence.iter().map(Value::scalar).collect())),
                ]),
            ));
        }
        Value::Map(top)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("regulation: {}\n", self.regulation);
        for r in &self.per_obligation {
            out.push_str(&format!("{:<10} {} [{}]", r.status.as_str(), r.obligation_id, r.category));
            if !r.evidence.is_empty() {
                out.push_str(&format!(" <- {}", r.evidence.join(", ")));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "partial: {}, missing: {}, unmappable: {}\n",
            self.count(ObligationStatus::Partial),
            self.count(ObligationStatus::Missing),
            self.count(ObligationStatus::Unmappable)
        ));
        out.push_str(&format!("satisfied: {}\n", self.satisfied_rate()));
        out
    }
}

/// Packages a field reference of `profile` is looked up on. `base` matches any package.
pub(crate) fn packages_of(doc: &Document, profile: Profile) -> impl Iterator<Item = &Element> {
    doc.elements().filter(move |e| match (profile, e.profile()) {
        (_, None) => false,
        (Profile::Base, Some(_)) => true,
        (p, Some(q)) => p == q,
    })
}

pub fn coverage_report(doc: &Document, matrix: &CoverageMatrix) -> CoverageReport {
    let per_obligation = matrix
        .obligations
        .iter()
        .map(|o| {
            if !o.mappable {
                return ObligationResult {
                    obligation_id: o.id.clone(),
                    category: o.category.clone(),
                    status: ObligationStatus::Unmappable,
                    evidence: Vec::new(),
                };
            }
            let mut evidence = Vec::new();
            let mut covered = 0;
            for field in &o.mapped_fields {
                let mut hit = false;
                for e in packages_of(doc, field.profile) {
                    let id = e.id().as_str();
                    if doc.field_state(id, &field.field) == Some(FieldState::Populated) {
                        evidence.push(element_path(id, Some(&field.field)));
                        hit = true;
                    }
                }
                covered += usize::from(hit);
            }
            let status = match covered {
                0 => ObligationStatus::Missing,
                n if n == o.mapped_fields.len() => ObligationStatus::Satisfied,
                _ => ObligationStatus::Partial,
            };
            ObligationResult { obligation_id: o.id.clone(), category: o.category.clone(), status, evidence }
        })
        .collect();
    CoverageReport { regulation: matrix.regulation.clone(), per_obligation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    #[test]
    fn builtin_matrices_load() {
        let eu = builtin_matrix("eu-ai-act").unwrap();
        assert_eq!(eu.obligations.len(), 14);
        assert_eq!(eu.obligations.iter().filter(|o| !o.mappable).count(), 1);
        assert_eq!(eu.categories().len(), 4);
        let med = builtin_matrix("medical-devices").unwrap();
        assert_eq!(
            med.categories().into_iter().collect::<Vec<_>>(),
            vec!["data details", "model details", "package details"]
        );
        let ieee = builtin_matrix("ieee-7000").unwrap();
        assert!(ieee.obligations.len() >= 40);
        assert_eq!(ieee.categories().len(), 8);
        assert!(builtin_matrix("bogus").is_none());
    }

    #[test]
    fn matrix_errors() {
        let dup = "regulation: r\nobligation:\n  id: a\n  category: c\n  description: d\n  fields:\n    - ai:name\nobligation:\n  id: a\n  category: c\n  description: d\n  fields:\n    - ai:name\n";
        assert!(load_matrix(dup.as_bytes()).unwrap_err().message.contains("duplicate obligation"));
        let unknown =
            "regulation: r\nobligation:\n  id: a\n  category: c\n  description: d\n  fields:\n    - ai:nope\n";
        assert!(load_matrix(unknown.as_bytes()).unwrap_err().message.contains("nope"));
        let inconsistent = "regulation: r\nobligation:\n  id: a\n  category: c\n  description: d\n  mappable: false\n  fields:\n    - ai:name\n";
        assert!(load_matrix(inconsistent.as_bytes()).is_err());
    }

    #[test]
    fn partial_when_some_fields_populated() {
        let matrix = load_matrix(
            b"regulation: r\nobligation:\n  id: two\n  category: c\n  description: d\n  fields:\n    - ai:name\n    - ai:limitation\n",
        )
        .unwrap();
        let id = ElementId::new("m").unwrap();
        let info =
            CreationInfo::new(Timestamp::parse("2024-01-01T00:00:00Z").unwrap(), vec![id.clone()], "3.0.0").unwrap();
        let mut doc = Document::new(info);
        let mut ai = AiPackage::new(id);
        ai.base.name = Some("m".into());
        doc.add_element(ai).unwrap();
        let report = coverage_report(&doc, &matrix);
        assert_eq!(report.per_obligation[0].status, ObligationStatus::Partial);
        assert_eq!(report.per_obligation[0].evidence, vec!["element[m].name".to_string()]);
        assert_eq!(report.satisfied_rate().to_string(), "0/1");
    }
}
