// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::catalog::Profile;
use crate::license::LicenseExpression;
use crate::syntax::Value;

use super::fields::{FieldSlot, FieldState};
use super::types::*;

/// Unknown keys kept verbatim so they survive a read/write cycle.
pub type Extensions = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub id: ElementId,
    pub name: String,
    pub kind: AgentKind,
    pub extensions: Extensions,
}

impl Agent {
    pub fn new(id: ElementId, name: impl Into<String>, kind: AgentKind) -> Self {
        Self { id, name: name.into(), kind, extensions: Extensions::new() }
    }
}

/// Fields shared by every package. Used on its own for plain software packages.
#[derive(Debug, Clone, PartialEq)]
pub struct Package {
    pub id: ElementId,
    pub name: Option<String>,
    pub package_version: Option<String>,
    pub primary_purpose: Option<PrimaryPurpose>,
    pub download_location: Option<DownloadLocation>,
    pub built_time: Option<Timestamp>,
    pub release_time: Option<Timestamp>,
    pub originated_by: Vec<ElementId>,
    pub supplied_by: Option<ElementId>,
    pub declared_license: Option<LicenseExpression>,
    pub concluded_license: Option<LicenseExpression>,
    pub comment: Option<String>,
    pub extensions: Extensions,
}

impl Package {
    pub fn new(id: ElementId) -> Self {
        Self {
            id,
            name: None,
            package_version: None,
            primary_purpose: None,
            download_location: None,
            built_time: None,
            release_time: None,
            originated_by: Vec::new(),
            supplied_by: None,
            declared_license: None,
            concluded_license: None,
            comment: None,
            extensions: Extensions::new(),
        }
    }
}

field_slots!(Package {
    "name" => name,
    "packageVersion" => package_version,
    "primaryPurpose" => primary_purpose,
    "downloadLocation" => download_location,
    "builtTime" => built_time,
    "releaseTime" => release_time,
    "originatedBy" => originated_by,
    "suppliedBy" => supplied_by,
    "declaredLicense" => declared_license,
    "concludedLicense" => concluded_license,
    "comment" => comment,
});

#[derive(Debug, Clone, PartialEq)]
pub struct AiPackage {
    pub base: Package,
    pub type_of_model: Vec<String>,
    pub autonomy_type: Option<Presence>,
    pub domain: Vec<String>,
    pub hyperparameter: BTreeMap<String, String>,
    pub information_about_training: Option<String>,
    pub information_about_application: Option<String>,
    pub limitation: Option<String>,
    /// Reported metrics by name.
    pub metric: BTreeMap<String, MetricValue>,
    /// Decision thresholds by metric name. An entry without a matching metric
    /// is representable so that it can be reported.
    pub metric_decision_threshold: BTreeMap<String, f64>,
    pub model_data_preprocessing: Vec<String>,
    pub model_explainability: Vec<String>,
    pub safety_risk_assessment: Option<SafetyRiskAssessment>,
    pub standard_compliance: Vec<String>,
    pub use_sensitive_personal_information: Option<Presence>,
    pub training_energy_consumption: Vec<EnergyQuantity>,
    pub finetuning_energy_consumption: Vec<EnergyQuantity>,
    pub inference_energy_consumption: Vec<EnergyQuantity>,
}

impl AiPackage {
    pub fn new(id: ElementId) -> Self {
        Self {
            base: Package::new(id),
            type_of_model: Vec::new(),
            autonomy_type: None,
            domain: Vec::new(),
            hyperparameter: BTreeMap::new(),
            information_about_training: None,
            information_about_application: None,
            limitation: None,
            metric: BTreeMap::new(),
            metric_decision_threshold: BTreeMap::new(),
            model_data_preprocessing: Vec::new(),
            model_explainability: Vec::new(),
            safety_risk_assessment: None,
            standard_compliance: Vec::new(),
            use_sensitive_personal_information: None,
            training_energy_consumption: Vec::new(),
            finetuning_energy_consumption: Vec::new(),
            inference_energy_consumption: Vec::new(),
        }
    }

    /// Metrics joined with their thresholds, in name order.
    pub fn metrics(&self) -> Vec<MetricEntry> {
        self.metric
            .iter()
            .map(|(name, value)| MetricEntry {
                name: name.clone(),
                value: value.clone(),
                decision_threshold: self.metric_decision_threshold.get(name).copied(),
            })
            .collect()
    }
}

field_slots!(AiPackage {
    "typeOfModel" => type_of_model,
    "autonomyType" => autonomy_type,
    "domain" => domain,
    "hyperparameter" => hyperparameter,
    "informationAboutTraining" => information_about_training,
    "informationAboutApplication" => information_about_application,
    "limitation" => limitation,
    "metric" => metric,
    "metricDecisionThreshold" => metric_decision_threshold,
    "modelDataPreprocessing" => model_data_preprocessing,
    "modelExplainability" => model_explainability,
    "safetyRiskAssessment" => safety_risk_assessment,
    "standardCompliance" => standard_compliance,
    "useSensitivePersonalInformation" => use_sensitive_personal_information,
    "trainingEnergyConsumption" => training_energy_consumption,
    "finetuningEnergyConsumption" => finetuning_energy_consumption,
    "inferenceEnergyConsumption" => inference_energy_consumption,
} else base);

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetPackage {
    pub base: Package,
    pub dataset_type: Vec<DatasetType>,
    pub data_collection_process: Option<String>,
    pub dataset_update_mechanism: Option<String>,
    pub intended_use: Option<String>,
    /// Size in bytes.
    pub dataset_size: Option<u64>,
    pub dataset_noise: Option<String>,
    pub data_preprocessing: Vec<String>,
    pub sensor: BTreeMap<String, String>,
    /// Observed, named biases only.
    pub known_bias: Vec<String>,
    pub has_sensitive_personal_information: Option<Presence>,
    pub anonymization_method_used: Vec<String>,
    pub confidentiality_level: Option<ConfidentialityLevel>,
    pub dataset_availability: Option<DatasetAvailability>,
}

impl DatasetPackage {
    pub fn new(id: ElementId) -> Self {
        Self {
            base: Package::new(id),
            dataset_type: Vec::new(),
            data_collection_process: None,
            dataset_update_mechanism: None,
            intended_use: None,
            dataset_size: None,
            dataset_noise: None,
            data_preprocessing: Vec::new(),
            sensor: BTreeMap::new(),
            known_bias: Vec::new(),
            has_sensitive_personal_information: None,
            anonymization_method_used: Vec::new(),
            confidentiality_level: None,
            dataset_availability: None,
        }
    }
}

field_slots!(DatasetPackage {
    "datasetType" => dataset_type,
    "dataCollectionProcess" => data_collection_process,
    "datasetUpdateMechanism" => dataset_update_mechanism,
    "intendedUse" => intended_use,
    "datasetSize" => dataset_size,
    "datasetNoise" => dataset_noise,
    "dataPreprocessing" => data_preprocessing,
    "sensor" => sensor,
    "knownBias" => known_bias,
    "hasSensitivePersonalInformation" => has_sensitive_personal_information,
    "anonymizationMethodUsed" => anonymization_method_used,
    "confidentialityLevel" => confidentiality_level,
    "datasetAvailability" => dataset_availability,
} else base);

string_enum! {
    /// The `type` written for each element.
    pub enum ElementKind {
        Agent => "Agent",
        AiPackage => "AiPackage",
        DatasetPackage => "DatasetPackage",
        Package => "Package",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Agent(Agent),
    Ai(AiPackage),
    Dataset(DatasetPackage),
    Package(Package),
}

impl Element {
    pub fn id(&self) -> &ElementId {
        match self {
            Element::Agent(a) => &a.id,
            Element::Ai(p) => &p.base.id,
            Element::Dataset(p) => &p.base.id,
            Element::Package(p) => &p.id,
        }
    }

    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Agent(_) => ElementKind::Agent,
            Element::Ai(_) => ElementKind::AiPackage,
            Element::Dataset(_) => ElementKind::DatasetPackage,
            Element::Package(_) => ElementKind::Package,
        }
    }

    /// The catalog profile of a package; `None` for agents.
    pub fn profile(&self) -> Option<Profile> {
        match self {
            Element::Agent(_) => None,
            Element::Ai(_) => Some(Profile::Ai),
            Element::Dataset(_) => Some(Profile::Dataset),
            Element::Package(_) => Some(Profile::Base),
        }
    }

    pub fn base(&self) -> Option<&Package> {
        match self {
            Element::Agent(_) => None,
            Element::Ai(p) => Some(&p.base),
            Element::Dataset(p) => Some(&p.base),
            Element::Package(p) => Some(p),
        }
    }

    pub fn base_mut(&mut self) -> Option<&mut Package> {
        match self {
            Element::Agent(_) => None,
            Element::Ai(p) => Some(&mut p.base),
            Element::Dataset(p) => Some(&mut p.base),
            Element::Package(p) => Some(p),
        }
    }

    pub fn as_ai(&self) -> Option<&AiPackage> {
        match self {
            Element::Ai(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_dataset(&self) -> Option<&DatasetPackage> {
        match self {
            Element::Dataset(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_agent(&self) -> Option<&Agent> {
        match self {
            Element::Agent(a) => Some(a),
            _ => None,
        }
    }

    /// A stored package field by canonical name. `spdxId` and `contains` are
    /// not stored on the package; see `Document::field_state`.
    pub fn field(&self, name: &str) -> Option<&dyn FieldSlot> {
        match self {
            Element::Agent(_) => None,
            Element::Ai(p) => p.slot(name),
            Element::Dataset(p) => p.slot(name),
            Element::Package(p) => p.slot(name),
        }
    }

    pub fn field_mut(&mut self, name: &str) -> Option<&mut dyn FieldSlot> {
        match self {
            Element::Agent(_) => None,
            Element::Ai(p) => p.slot_mut(name),
            Element::Dataset(p) => p.slot_mut(name),
            Element::Package(p) => p.slot_mut(name),
        }
    }

    pub fn field_state(&self, name: &str) -> Option<FieldState> {
        self.field(name).map(|slot| slot.state())
    }

    pub fn extensions(&self) -> &Extensions {
        match self {
            Element::Agent(a) => &a.extensions,
            Element::Ai(p) => &p.base.extensions,
            Element::Dataset(p) => &p.base.extensions,
            Element::Package(p) => &p.extensions,
        }
    }

    pub fn extensions_mut(&mut self) -> &mut Extensions {
        match self {
            Element::Agent(a) => &mut a.extensions,
            Element::Ai(p) => &mut p.base.extensions,
            Element::Dataset(p) => &mut p.base.extensions,
            Element::Package(p) => &mut p.extensions,
        }
    }
}

impl From<Agent> for Element {
    fn from(a: Agent) -> Self {
        Element::Agent(a)
    }
}

impl From<AiPackage> for Element {
    fn from(p: AiPackage) -> Self {
        Element::Ai(p)
    }
}

impl From<DatasetPackage> for Element {
    fn from(p: DatasetPackage) -> Self {
        Element::Dataset(p)
    }
}

impl From<Package> for Element {
    fn from(p: Package) -> Self {
        Element::Package(p)
    }
}
