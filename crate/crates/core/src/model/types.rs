// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDateTime, SubsecRound, Utc};
use thiserror::Error;

/// Rejected value for one of the model's scalar types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ValueError(pub String);

/// Identifier of an element within a document. Case-sensitive, compared byte-wise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(value: impl Into<String>) -> Result<Self, ValueError> {
        let value = value.into();
        if value.is_empty() {
            return Err(ValueError("element id must not be empty".into()));
        }
        if value.contains(char::is_whitespace) {
            return Err(ValueError(format!("element id '{value}' must not contain whitespace")));
        }
        Ok(Self(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ElementId {
    type Err = ValueError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl AsRef<str> for ElementId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A UTC instant at second precision. Renders as `YYYY-MM-DDTHH:MM:SSZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(DateTime<Utc>);

impl Timestamp {
    const FORMAT: &'static str = "%Y-%m-%dT%H:%M:%SZ";

    pub fn from_datetime(dt: DateTime<Utc>) -> Self {
        Self(dt.trunc_subsecs(0))
    }

    pub fn now() -> Self {
        Self::from_datetime(Utc::now())
    }

    pub fn datetime(&self) -> DateTime<Utc> {
        self.0
    }

    /// Accepts only the `Z` suffix. Fractional seconds are truncated.
    pub fn parse(s: &str) -> Result<Self, ValueError> {
        let err = || ValueError(format!("'{s}' is not a UTC timestamp (YYYY-MM-DDTHH:MM:SSZ)"));
        let body = s.strip_suffix('Z').ok_or_else(err)?;
        let naive = NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M:%S%.f")
            .or_else(|_| NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M:%S"))
            .map_err(|_| err())?;
        Ok(Self::from_datetime(naive.and_utc()))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format(Self::FORMAT))
    }
}

impl FromStr for Timestamp {
    type Err = ValueError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Sentinel for "the producer makes no claim".
pub const NOASSERTION: &str = "NOASSERTION";

string_enum! {
    pub enum AgentKind {
        Person => "person",
        Organization => "organization",
        SoftwareAgent => "software-agent",
    }
}

string_enum! {
    /// Tri-state answer used by the autonomy and sensitive-data fields.
    pub enum Presence {
        Yes => "yes",
        No => "no",
        NoAssertion => "no-assertion",
    }
    no_assertion = NoAssertion
}

string_enum! {
    pub enum PrimaryPurpose {
        AiModel => "ai-model",
        Dataset => "dataset",
        Application => "application",
        Library => "library",
        Other => "other",
    }
}

string_enum! {
    pub enum SafetyRiskAssessment {
        Serious => "serious",
        High => "high",
        Medium => "medium",
        Low => "low",
        NoAssertion => "no-assertion",
    }
    no_assertion = NoAssertion
}

string_enum! {
    pub enum DatasetType {
        Image => "image",
        Text => "text",
        Audio => "audio",
        Video => "video",
        Tabular => "tabular",
        SensorStream => "sensor-stream",
        Other => "other",
    }
}

string_enum! {
    pub enum ConfidentialityLevel {
        Red => "red",
        Amber => "amber",
        Green => "green",
        Clear => "clear",
        NoAssertion => "no-assertion",
    }
    no_assertion = NoAssertion
}

string_enum! {
    pub enum DatasetAvailability {
        DirectDownload => "direct-download",
        QueryOnly => "query-only",
        RegistrationRequired => "registration-required",
        ScrapingScript => "scraping-script",
        Clickthrough => "clickthrough",
        NoAssertion => "no-assertion",
    }
    no_assertion = NoAssertion
}

string_enum! {
    pub enum RelationshipType {
        Contains => "contains",
        TrainedOn => "trained-on",
        TestedOn => "tested-on",
        FineTunedFrom => "fine-tuned-from",
        HasDocumentation => "has-documentation",
        Other => "other",
    }
}

string_enum! {
    pub enum Completeness {
        Complete => "complete",
        Incomplete => "incomplete",
        NoAssertion => "no-assertion",
    }
    no_assertion = NoAssertion
}

/// `downloadLocation`: a URI, or the NOASSERTION sentinel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DownloadLocation {
    Uri(String),
    NoAssertion,
}

impl DownloadLocation {
    pub fn parse(s: &str) -> Result<Self, ValueError> {
        if s == NOASSERTION {
            return Ok(Self::NoAssertion);
        }
        url::Url::parse(s).map_err(|e| ValueError(format!("'{s}' is not a valid URI: {e}")))?;
        Ok(Self::Uri(s.to_string()))
    }
}

impl fmt::Display for DownloadLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uri(u) => f.write_str(u),
            Self::NoAssertion => f.write_str(NOASSERTION),
        }
    }
}

/// Energy spent in one lifecycle phase.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyQuantity {
    quantity: f64,
    unit: String,
}

impl EnergyQuantity {
    /// The unit must be registered in the bundled field catalog.
    pub fn new(quantity: f64, unit: impl Into<String>) -> Result<Self, ValueError> {
        let unit = unit.into();
        if !quantity.is_finite() || quantity < 0.0 {
            return Err(ValueError(format!("energy quantity must be a finite non-negative number, got {quantity}")));
        }
        if !crate::catalog::Catalog::bundled().has_unit(&unit) {
            return Err(ValueError(format!("'{unit}' is not a registered energy unit")));
        }
        // -0.0 and 0.0 render differently
        Ok(Self { quantity: quantity + 0.0, unit })
    }

    pub fn kilowatt_hours(quantity: f64) -> Result<Self, ValueError> {
        Self::new(quantity, "kilowatt-hour")
    }

    pub fn quantity(&self) -> f64 {
        self.quantity
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }
}

/// Value of a reported metric. Text that reads as a number is stored as a number.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricValue {
    Number(f64),
    Text(String),
}

impl MetricValue {
    pub fn parse(s: &str) -> Result<Self, ValueError> {
        if s.is_empty() {
            return Err(ValueError("metric value must not be empty".into()));
        }
        Ok(match parse_decimal(s) {
            Ok(n) => MetricValue::Number(n),
            Err(_) => MetricValue::Text(s.to_string()),
        })
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Number(n) => write!(f, "{n}"),
            MetricValue::Text(t) => f.write_str(t),
        }
    }
}

/// A metric joined with its decision threshold, if one is recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEntry {
    pub name: String,
    pub value: MetricValue,
    pub decision_threshold: Option<f64>,
}

/// Finite decimal number. Rejects `inf`, `NaN` and hex forms.
pub fn parse_decimal(s: &str) -> Result<f64, ValueError> {
    let plain = !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    match s.parse::<f64>() {
        Ok(n) if plain && n.is_finite() => Ok(n + 0.0),
        _ => Err(ValueError(format!("'{s}' is not a finite decimal number"))),
    }
}

/// Version text of the form MAJOR.MINOR.PATCH.
pub fn is_semver_triplet(s: &str) -> bool {
    let parts: Vec<_> = s.split('.').collect();
    parts.len() == 3 && parts.iter().all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_ids_reject_blank_and_whitespace() {
        assert!(ElementId::new("urn:ex:model1").is_ok());
        assert!(ElementId::new("").is_err());
        assert!(ElementId::new("urn:ex: model").is_err());
        assert_ne!(ElementId::new("A").unwrap(), ElementId::new("a").unwrap());
    }

    #[test]
    fn timestamps_are_utc_second_precision() {
        let t = Timestamp::parse("2024-04-16T00:00:00Z").unwrap();
        assert_eq!(t.to_string(), "2024-04-16T00:00:00Z");
        let frac = Timestamp::parse("2024-04-16T10:11:12.987Z").unwrap();
        assert_eq!(frac.to_string(), "2024-04-16T10:11:12Z");
        assert!(Timestamp::parse("2024-04-16T00:00:00").is_err());
        assert!(Timestamp::parse("2024-04-16T00:00:00+02:00").is_err());
        assert!(Timestamp::parse("2024-02-30T00:00:00Z").is_err());
    }

    #[test]
    fn enums_round_trip_and_accept_noassertion() {
        for p in Presence::ALL {
            assert_eq!(p.as_str().parse::<Presence>().unwrap(), *p);
        }
        assert_eq!("NOASSERTION".parse::<Presence>().unwrap(), Presence::NoAssertion);
        assert!("NOASSERTION".parse::<DatasetType>().is_err());
        assert!("Yes".parse::<Presence>().is_err());
    }

    #[test]
    fn download_location_sentinel() {
        assert_eq!(DownloadLocation::parse("NOASSERTION").unwrap(), DownloadLocation::NoAssertion);
        assert!(DownloadLocation::parse("https://example.org/m.bin").is_ok());
        assert!(DownloadLocation::parse("not a uri").is_err());
    }

    #[test]
    fn energy_requires_registered_unit() {
        assert!(EnergyQuantity::kilowatt_hours(12.5).is_ok());
        assert!(EnergyQuantity::kilowatt_hours(-1.0).is_err());
        assert!(EnergyQuantity::new(1.0, "joule").is_err());
        assert!(EnergyQuantity::kilowatt_hours(f64::NAN).is_err());
    }

    #[test]
    fn metric_values_prefer_numbers() {
        assert_eq!(MetricValue::parse("0.80").unwrap(), MetricValue::Number(0.8));
        assert_eq!(MetricValue::parse("n/a").unwrap(), MetricValue::Text("n/a".into()));
        assert_eq!(MetricValue::parse("inf").unwrap(), MetricValue::Text("inf".into()));
        assert!(MetricValue::parse("").is_err());
    }

    #[test]
    fn semver_pattern() {
        assert!(is_semver_triplet("3.0.0"));
        assert!(!is_semver_triplet("3"));
        assert!(!is_semver_triplet("3.0.x"));
    }
}
