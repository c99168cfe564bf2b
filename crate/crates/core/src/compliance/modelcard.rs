// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::catalog::{FieldRef, Profile};
use crate::datafile::{data_err, field_refs, parse_data, text_of, DataFileError};
use crate::model::{Document, Element, FieldState, RelationshipType};
use crate::rate::Rate;
use crate::syntax::Value;

string_enum! {
    pub enum Transform {
        Verbatim => "verbatim",
        JoinList => "join-list",
        RenderMetricTable => "render-metric-table",
        RenderEnergyTable => "render-energy-table",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardSection {
    pub name: String,
    pub sources: Vec<FieldRef>,
    pub transform: Transform,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCardMapping {
    pub name: String,
    pub sections: Vec<CardSection>,
}

const MAPPING: &str = "mapping";

pub fn default_mapping() -> ModelCardMapping {
    load_mapping(include_str!("../../data/modelcard.mapping").as_bytes())
        .unwrap_or_else(|e| panic!("bundled model-card mapping: {e}"))
}

/// Sources must name `ai:` or `dataset:` fields. Dataset sources are read from
/// the datasets the model is trained on.
pub fn load_mapping(bytes: &[u8]) -> Result<ModelCardMapping, DataFileError> {
    let root = parse_data(bytes, MAPPING)?;
    let mut name = None;
    let mut sections: Vec<CardSection> = Vec::new();
    for entry in root.as_map().unwrap_or_default() {
        match entry.key.as_str() {
            "name" => name = Some(text_of(entry, MAPPING)?),
            "section" => {
                let entries = entry
                    .value
                    .as_map()
                    .ok_or_else(|| data_err(MAPPING, entry.value.location, "a section must be a block of keys"))?;
                let (mut title, mut sources, mut transform) = (None, None, None);
                for e in entries {
                    match e.key.as_str() {
                        "name" => title = Some(text_of(e, MAPPING)?),
                        "sources" => {
                            let refs = field_refs(e, MAPPING)?;
                            if let Some(r) = refs.iter().find(|r| r.profile == Profile::Base) {
                                return Err(data_err(
                                    MAPPING,
                                    e.value.location,
                                    format!("'{r}' must name the ai or dataset profile"),
                                ));
                            }
                            sources = Some(refs);
                        }
                        "transform" => {
                            let t = text_of(e, MAPPING)?;
                            transform = Some(
                                t.parse::<Transform>()
                                    .map_err(|err| data_err(MAPPING, e.value.location, err.to_string()))?,
                            );
                        }
                        other => {
                            return Err(data_err(MAPPING, e.key_location, format!("unknown section key '{other}'")))
                        }
                    }
                }
                let missing = |k: &str| data_err(MAPPING, entry.key_location, format!("section is missing '{k}'"));
                let section = CardSection {
                    name: title.ok_or_else(|| missing("name"))?,
                    sources: sources.filter(|s| !s.is_empty()).ok_or_else(|| missing("sources"))?,
                    transform: transform.unwrap_or(Transform::Verbatim),
                };
                if sections.iter().any(|s| s.name == section.name) {
                    return Err(data_err(MAPPING, entry.key_location, format!("duplicate section '{}'", section.name)));
                }
                sections.push(section);
            }
            other => return Err(data_err(MAPPING, entry.key_location, format!("unknown key '{other}'"))),
        }
    }
    Ok(ModelCardMapping { name: name.unwrap_or_else(|| "custom".into()), sections })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelCardError {
    #[error("no element '{0}' in the document")]
    UnknownModel(String),
    #[error("element '{0}' is not an AI package")]
    NotAiPackage(String),
    #[error("mapping '{0}' has no sections")]
    EmptyMapping(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCard {
    pub text: String,
    /// Names of the sections that had content, in mapping order.
    pub populated_sections: Vec<String>,
    pub extraction_rate: Rate,
}

struct Sources<'a> {
    doc: &'a Document,
    model: &'a Element,
    datasets: Vec<&'a Element>,
}

impl<'a> Sources<'a> {
    fn new(doc: &'a Document, model_id: &str) -> Result<Self, ModelCardError> {
        let model =
            doc.resolve_reference(model_id).ok_or_else(|| ModelCardError::UnknownModel(model_id.to_string()))?;
        if model.as_ai().is_none() {
            return Err(ModelCardError::NotAiPackage(model_id.to_string()));
        }
        let datasets = doc
            .targets(model_id, RelationshipType::TrainedOn)
            .into_iter()
            .filter_map(|id| doc.resolve_reference(id.as_str()))
            .filter(|e| e.as_dataset().is_some())
            .collect();
        Ok(Self { doc, model, datasets })
    }

    /// Elements carrying a populated value for `source`.
    fn holders(&self, source: &FieldRef) -> Vec<&'a Element> {
        let candidates: Vec<&'a Element> = match source.profile {
            Profile::Dataset => self.datasets.clone(),
            _ => vec![self.model],
        };
        candidates
            .into_iter()
            .filter(|e| self.doc.field_state(e.id().as_str(), &source.field) == Some(FieldState::Populated))
            .collect()
    }

    fn agent_name(&self, id: &str) -> String {
        self.doc
            .resolve_reference(id)
            .and_then(Element::as_agent)
            .map(|a| a.name.clone())
            .filter(|n| !n.is_empty())
            .unwrap_or_else(|| id.to_string())
    }

    /// Display items of one populated field.
    fn items(&self, element: &Element, field: &str) -> Vec<String> {
        let Some(value) = element.field(field).and_then(|slot| slot.get()) else {
            return Vec::new();
        };
        let agents = matches!(field, "originatedBy" | "suppliedBy");
        match value {
            Value::Scalar(s) if agents => vec![self.agent_name(&s)],
            Value::Scalar(s) => vec![s],
            Value::List(items) => items
                .iter()
                .map(|v| match v {
                    Value::Scalar(s) if agents => self.agent_name(s),
                    other => flat(other),
                })
                .collect(),
            Value::Map(entries) => entries.iter().map(|(k, v)| format!("{k}: {}", flat(v))).collect(),
        }
    }
}

fn flat(value: &Value) -> String {
    match value {
        Value::Scalar(s) => s.clone(),
        Value::List(items) => items.iter().map(flat).collect::<Vec<_>>().join(", "),
        Value::Map(entries) => entries.iter().map(|(_, v)| flat(v)).collect::<Vec<_>>().join(" "),
    }
}

fn label(element: &Element) -> String {
    element.base().and_then(|b| b.name.clone()).unwrap_or_else(|| element.id().to_string())
}

fn render_section(src: &Sources<'_>, section: &CardSection) -> Option<String> {
    let populated: Vec<(&FieldRef, Vec<&Element>)> =
        section.sources.iter().map(|s| (s, src.holders(s))).filter(|(_, h)| !h.is_empty()).collect();
    if populated.is_empty() {
        return None;
    }
    let ai = src.model.as_ai().expect("checked on construction");
    let body = match section.transform {
        Transform::Verbatim => {
            let single = populated.len() == 1 && populated[0].1.len() == 1;
            let mut lines = Vec::new();
            for (source, holders) in &populated {
                for e in holders {
                    let text = src.items(e, &source.field).join(", ");
                    if single {
                        lines.push(text);
                    } else if source.profile == Profile::Dataset {
                        lines.push(format!("- {} ({}): {text}", source.field, label(e)));
                    } else {
                        lines.push(format!("- {}: {text}", source.field));
                    }
                }
            }
            lines.join("\n")
        }
        Transform::JoinList => {
            let mut lines: Vec<String> = Vec::new();
            for (source, holders) in &populated {
                for e in holders {
                    for item in src.items(e, &source.field) {
                        let line = if source.field.ends_with("SensitivePersonalInformation") {
                            format!("- {}: {item}", source.field)
                        } else {
                            format!("- {item}")
                        };
                        if !lines.contains(&line) {
                            lines.push(line);
                        }
                    }
                }
            }
            lines.join("\n")
        }
        Transform::RenderMetricTable => {
            let mut rows = vec!["| Metric | Value | Decision threshold |".to_string(), "|---|---|---|".to_string()];
            for m in ai.metrics() {
                let threshold = m.decision_threshold.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
                rows.push(format!("| {} | {} | {threshold} |", m.name, m.value));
            }
            for (name, t) in &ai.metric_decision_threshold {
                if !ai.metric.contains_key(name) {
                    rows.push(format!("| {name} | - | {t} |"));
                }
            }
            rows.join("\n")
        }
        Transform::RenderEnergyTable => {
            let mut rows = vec!["| Phase | Energy | Unit |".to_string(), "|---|---|---|".to_string()];
            for (phase, values) in [
                ("training", &ai.training_energy_consumption),
                ("finetuning", &ai.finetuning_energy_consumption),
                ("inference", &ai.inference_energy_consumption),
            ] {
                for q in values {
                    rows.push(format!("| {phase} | {} | {} |", q.quantity(), q.unit()));
                }
            }
            rows.join("\n")
        }
    };
    Some(body)
}

/// Renders the card of one AI package as Markdown. Only sections with at least
/// one populated source are emitted.
pub fn generate_model_card(
    doc: &Document,
    model_id: &str,
    mapping: &ModelCardMapping,
) -> Result<ModelCard, ModelCardError> {
    if mapping.sections.is_empty() {
        return Err(ModelCardError::EmptyMapping(mapping.name.clone()));
    }
    let src = Sources::new(doc, model_id)?;
    let mut text = format!("# Model Card: {}\n", label(src.model));
    let mut populated_sections = Vec::new();
    for section in &mapping.sections {
        if let Some(body) = render_section(&src, section) {
            text.push_str(&format!("\n## {}\n\n{body}\n", section.name));
            populated_sections.push(section.name.clone());
        }
    }
    let extraction_rate = Rate::new(populated_sections.len() as u64, mapping.sections.len() as u64)
        .expect("populated sections never exceed the mapping");
    Ok(ModelCard { text, populated_sections, extraction_rate })
}

/// Populated sections over mapping sections.
pub fn extraction_rate(doc: &Document, model_id: &str, mapping: &ModelCardMapping) -> Result<Rate, ModelCardError> {
    generate_model_card(doc, model_id, mapping).map(|c| c.extraction_rate)
}
