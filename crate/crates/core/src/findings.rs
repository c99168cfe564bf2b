// SPDX-License-Identifier: Apache-2.0

//! Finding codes, severities, and the finding record shared by every check.

use std::fmt;

use crate::syntax::Location;

string_enum! {
    pub enum Severity {
        Error => "error",
        Warning => "warning",
        Info => "info",
    }
}

string_enum! {
    /// Registry of stable finding codes.
    pub enum Code {
        ReqMissing => "REQ-MISSING",
        ReqNoAssertion => "REQ-NOASSERTION",
        RefUnresolved => "REF-UNRESOLVED",
        RefKind => "REF-KIND",
        Cycle => "CYCLE",
        Invariant => "INVARIANT",
        Alias => "ALIAS",
        UnknownField => "UNKNOWN-FIELD",
        UnknownLicense => "UNKNOWN-LICENSE",
        SensitiveNoAnon => "SENSITIVE-NO-ANON",
        RelType => "REL-TYPE",
        ThresholdOrphan => "THRESHOLD-ORPHAN",
        TransformFailed => "TRANSFORM-FAILED",
    }
}

impl Code {
    pub fn default_severity(self) -> Severity {
        use Code::*;
        match self {
            ReqMissing | RefUnresolved | RefKind | Cycle | Invariant | RelType => Severity::Error,
            ReqNoAssertion => Severity::Info,
            Alias | UnknownField | UnknownLicense | SensitiveNoAnon | ThresholdOrphan | TransformFailed => {
                Severity::Warning
            }
        }
    }

    pub fn description(self) -> &'static str {
        use Code::*;
        match self {
            ReqMissing => "a field required by the policy is absent",
            ReqNoAssertion => "a required field is present only as no-assertion",
            RefUnresolved => "a reference names no element in the document",
            RefKind => "a reference resolves to an element of the wrong kind",
            Cycle => "the contains relationships form a cycle",
            Invariant => "a value breaks a model invariant",
            Alias => "a field was spelled with an accepted alias and normalized",
            UnknownField => "a field is not in the catalog and was preserved as an extension",
            UnknownLicense => "a license or exception identifier is not in the license list",
            SensitiveNoAnon => "sensitive personal information without an anonymization method",
            RelType => "a training or testing relationship targets a non-dataset element",
            ThresholdOrphan => "a decision threshold names no reported metric",
            TransformFailed => "a hub value could not be converted by its rule",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub code: Code,
    pub severity: Severity,
    /// `element[<id>].<field>` style locator.
    pub path: String,
    pub message: String,
    /// Source position, when the finding came from reading a file.
    pub location: Option<Location>,
}

impl Finding {
    pub fn new(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { code, severity: code.default_severity(), path: path.into(), message: message.into(), location: None }
    }

    pub fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    fn sort_key(&self) -> (&str, &str, &str, Option<Location>) {
        (&self.path, self.code.as_str(), &self.message, self.location)
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.code, self.path, self.message)?;
        if let Some(location) = self.location {
            write!(f, " ({location})")?;
        }
        Ok(())
    }
}

/// Sorts by path, then code, so reports do not depend on discovery order.
pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Path of an element, or of one field on it.
pub fn element_path(id: &str, field: Option<&str>) -> String {
    match field {
        Some(field) => format!("element[{id}].{field}"),
        None => format!("element[{id}]"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for code in Code::ALL {
            assert_eq!(code.as_str().parse::<Code>().unwrap(), *code);
            assert!(!code.description().is_empty());
        }
    }

    #[test]
    fn findings_sort_by_path_then_code() {
        let mut findings = vec![
            Finding::new(Code::ReqMissing, "element[b].name", "x"),
            Finding::new(Code::Alias, "element[b].name", "x"),
            Finding::new(Code::Cycle, "element[a]", "x"),
        ];
        sort_findings(&mut findings);
        let order: Vec<_> = findings.iter().map(|f| (f.path.as_str(), f.code)).collect();
        assert_eq!(
            order,
            [("element[a]", Code::Cycle), ("element[b].name", Code::Alias), ("element[b].name", Code::ReqMissing)]
        );
    }
}
