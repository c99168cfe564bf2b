// SPDX-License-Identifier: Apache-2.0

//! The field catalog: which fields exist, for which profile, with what shape.
//!
//! The catalog is data, loaded from `data/fields.catalog`, so it can be
//! corrected against the upstream SPDX model without touching code.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

string_enum! {
    /// Which package kind a field belongs to. `base` fields apply to all packages.
    pub enum Profile {
        Base => "base",
        Ai => "ai",
        Dataset => "dataset",
    }
}

string_enum! {
    pub enum ValueKind {
        Text => "text",
        TextList => "text-list",
        Mapping => "mapping",
        Presence => "presence",
        Enum => "enum",
        EnergyList => "energy-list",
        MetricList => "metric-list",
        Integer => "integer",
        Timestamp => "timestamp",
        LicenseExpression => "license-expression",
        Uri => "uri",
    }
}

string_enum! {
    pub enum Cardinality {
        ZeroOrOne => "zero-or-one",
        ExactlyOne => "exactly-one",
        ZeroOrMore => "zero-or-more",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub name: String,
    pub profile: Profile,
    pub value_kind: ValueKind,
    pub cardinality: Cardinality,
    pub aliases: Vec<String>,
}

/// A `profile:field` reference, as used by policies, matrices, mappings and rules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldRef {
    pub profile: Profile,
    pub field: String,
}

impl FieldRef {
    pub fn new(profile: Profile, field: impl Into<String>) -> Self {
        Self { profile, field: field.into() }
    }

    /// Parses `profile:field` and checks it against the catalog.
    pub fn parse(text: &str, catalog: &Catalog) -> Result<Self, String> {
        let (profile, field) =
            text.split_once(':').ok_or_else(|| format!("'{text}' is not of the form profile:field"))?;
        let profile: Profile = profile.parse().map_err(|e| format!("{e}"))?;
        if !catalog.is_applicable(profile, field) {
            return Err(format!("unknown field '{field}' for profile '{profile}' (not in the field catalog)"));
        }
        Ok(Self::new(profile, field))
    }
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.profile, self.field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field catalog line {line}: {message}")]
pub struct CatalogError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    fields: Vec<FieldDescriptor>,
    by_name: BTreeMap<String, usize>,
    aliases: BTreeMap<String, usize>,
    units: BTreeSet<String>,
}

const BUNDLED: &str = include_str!("../data/fields.catalog");

impl Catalog {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut catalog =
            Catalog { fields: Vec::new(), by_name: BTreeMap::new(), aliases: BTreeMap::new(), units: BTreeSet::new() };
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let err = |message: String| CatalogError { line, message };
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = content.split_whitespace().collect();
            match parts.as_slice() {
                ["unit", unit] => {
                    if !catalog.units.insert(unit.to_string()) {
                        return Err(err(format!("duplicate unit '{unit}'")));
                    }
                }
                ["field", name, profile, kind, cardinality, rest @ ..] if rest.len() <= 1 => {
                    let profile: Profile = profile.parse().map_err(|e| err(format!("{e}")))?;
                    let value_kind: ValueKind = kind.parse().map_err(|e| err(format!("{e}")))?;
                    let cardinality: Cardinality = cardinality.parse().map_err(|e| err(format!("{e}")))?;
                    let aliases: Vec<String> =
                        rest.first().map(|a| a.split(',').map(str::to_string).collect()).unwrap_or_default();
                    let index = catalog.fields.len();
                    if catalog.by_name.insert(name.to_string(), index).is_some() {
                        return Err(err(format!("duplicate field '{name}'")));
                    }
                    for alias in &aliases {
                        if alias.is_empty() || catalog.by_name.contains_key(alias) {
                            return Err(err(format!("invalid alias '{alias}'")));
                        }
                        if catalog.aliases.insert(alias.clone(), index).is_some() {
                            return Err(err(format!("duplicate alias '{alias}'")));
                        }
                    }
                    catalog.fields.push(FieldDescriptor {
                        name: name.to_string(),
                        profile,
                        value_kind,
                        cardinality,
                        aliases,
                    });
                }
                _ => return Err(err(format!("unrecognized record '{content}'"))),
            }
        }
        if let Some(clash) = catalog.aliases.keys().find(|a| catalog.by_name.contains_key(*a)) {
            return Err(CatalogError { line: 0, message: format!("alias '{clash}' is also a field name") });
        }
        if catalog.fields.is_empty() {
            return Err(CatalogError { line: 0, message: "catalog defines no fields".into() });
        }
        Ok(catalog)
    }

    /// The catalog shipped with this crate.
    pub fn bundled() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::parse(BUNDLED).expect("bundled field catalog is valid"))
    }

    /// All fields in catalog (serialization) order.
    pub fn all(&self) -> &[FieldDescriptor] {
        &self.fields
    }

    pub fn descriptor(&self, name: &str) -> Option<&FieldDescriptor> {
        self.by_name.get(name).map(|&i| &self.fields[i])
    }

    /// Fields of exactly this profile, sorted by name.
    pub fn profile_fields(&self, profile: Profile) -> Vec<FieldDescriptor> {
        let mut fields: Vec<_> = self.fields.iter().filter(|f| f.profile == profile).cloned().collect();
        fields.sort_by(|a, b| a.name.cmp(&b.name));
        fields
    }

    /// Fields a package of `profile` carries: base fields plus the profile's
    /// own, in catalog order.
    pub fn applicable(&self, profile: Profile) -> impl Iterator<Item = &FieldDescriptor> {
        self.fields.iter().filter(move |f| f.profile == Profile::Base || f.profile == profile)
    }

    pub fn is_applicable(&self, profile: Profile, name: &str) -> bool {
        self.descriptor(name).is_some_and(|f| f.profile == Profile::Base || f.profile == profile)
    }

    /// Resolves an alias to its canonical field name. Returns the canonical
    /// name and whether an alias was used.
    pub fn canonical_name<'a>(&'a self, name: &'a str) -> Option<(&'a str, bool)> {
        if self.by_name.contains_key(name) {
            return Some((name, false));
        }
        self.aliases.get(name).map(|&i| (self.fields[i].name.as_str(), true))
    }

    pub fn has_unit(&self, unit: &str) -> bool {
        self.units.contains(unit)
    }

    pub fn units(&self) -> impl Iterator<Item = &str> {
        self.units.iter().map(String::as_str)
    }
}

/// Catalog entries for one profile, sorted by name.
pub fn field_catalog(profile: Profile) -> Vec<FieldDescriptor> {
    Catalog::bundled().profile_fields(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog_shape() {
        let catalog = Catalog::bundled();
        assert_eq!(catalog.profile_fields(Profile::Base).len(), 13);
        assert_eq!(catalog.profile_fields(Profile::Ai).len(), 17);
        assert_eq!(catalog.profile_fields(Profile::Dataset).len(), 13);
        assert!(catalog.has_unit("kilowatt-hour"));
    }

    #[test]
    fn catalog_lookups() {
        let ai = field_catalog(Profile::Ai);
        let sra = ai.iter().find(|f| f.name == "safetyRiskAssessment").unwrap();
        assert_eq!(sra.value_kind, ValueKind::Enum);
        let names: Vec<_> = ai.iter().map(|f| f.name.clone()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);

        assert!(field_catalog(Profile::Dataset).iter().any(|f| f.name == "dataCollectionProcess"));
        let base = field_catalog(Profile::Base);
        let dl = base.iter().find(|f| f.name == "downloadLocation").unwrap();
        assert_eq!(dl.value_kind, ValueKind::Uri);
    }

    #[test]
    fn aliases_resolve() {
        let catalog = Catalog::bundled();
        assert_eq!(catalog.canonical_name("standardsCompliance"), Some(("standardCompliance", true)));
        assert_eq!(catalog.canonical_name("name"), Some(("name", false)));
        assert_eq!(catalog.canonical_name("nope"), None);
    }

    #[test]
    fn field_refs_check_applicability() {
        let catalog = Catalog::bundled();
        assert!(FieldRef::parse("ai:suppliedBy", catalog).is_ok());
        assert!(FieldRef::parse("ai:knownBias", catalog).is_err());
        assert!(FieldRef::parse("dataset:knownBias", catalog).is_ok());
        assert!(FieldRef::parse("ai:notAField", catalog).is_err());
        assert!(FieldRef::parse("knownBias", catalog).is_err());
    }

    #[test]
    fn corrupt_catalogs_are_rejected() {
        assert!(Catalog::parse("").is_err());
        assert!(Catalog::parse("field a base text").is_err());
        assert!(Catalog::parse("field a base blob zero-or-one").is_err());
        assert!(Catalog::parse("field a base text zero-or-one\nfield a ai text zero-or-one").is_err());
        assert!(Catalog::parse("field a base text zero-or-one b\nfield b base text zero-or-one").is_err());
        let err = Catalog::parse("unit kwh\nbogus line").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
