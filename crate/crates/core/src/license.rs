// SPDX-License-Identifier: Apache-2.0

//! License expressions: parsing, canonical rendering and identifier checks.
//!
//! Precedence, tightest first: postfix `+`, `WITH`, `AND`, `OR`. `AND` and
//! `OR` associate to the left. Operators are upper case; identifiers are
//! case-sensitive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::findings::{Code, Finding};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LicenseId {
    pub id: String,
    pub or_later: bool,
}

impl LicenseId {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), or_later: false }
    }

    pub fn or_later(id: impl Into<String>) -> Self {
        Self { id: id.into(), or_later: true }
    }
}

impl fmt::Display for LicenseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)?;
        if self.or_later {
            f.write_str("+")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LicenseExpression {
    License(LicenseId),
    /// A user-defined `LicenseRef-` (optionally `DocumentRef-…:`-prefixed) reference.
    LicenseRef(String),
    With {
        license: LicenseId,
        exception: String,
    },
    And(Box<LicenseExpression>, Box<LicenseExpression>),
    Or(Box<LicenseExpression>, Box<LicenseExpression>),
}

impl LicenseExpression {
    pub fn license(id: impl Into<String>) -> Self {
        Self::License(LicenseId::new(id))
    }

    pub fn and(left: Self, right: Self) -> Self {
        Self::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Self, right: Self) -> Self {
        Self::Or(Box::new(left), Box::new(right))
    }

    pub fn parse(input: &str) -> Result<Self, LicenseParseError> {
        parse_license_expression(input)
    }

    /// License and exception identifiers in left-to-right order, excluding
    /// user-defined references.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_ids(&mut out);
        out
    }

    fn collect_ids<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Self::License(l) => out.push(&l.id),
            Self::LicenseRef(_) => {}
            Self::With { license, exception } => {
                out.push(&license.id);
                out.push(exception);
            }
            Self::And(l, r) | Self::Or(l, r) => {
                l.collect_ids(out);
                r.collect_ids(out);
            }
        }
    }
}

impl fmt::Display for LicenseExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_license_expression(self))
    }
}

impl FromStr for LicenseExpression {
    type Err = LicenseParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_license_expression(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("license expression error at offset {offset}: {message}")]
pub struct LicenseParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

fn perr(offset: usize, message: impl Into<String>) -> LicenseParseError {
    LicenseParseError { offset, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    And,
    Or,
    With,
    Word { text: &'a str, plus: bool },
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | ':')
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok<'_>)>, LicenseParseError> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < input.len() {
        let c = input[i..].chars().next().expect("in bounds");
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                tokens.push((i, Tok::Open));
                i += 1;
            }
            ')' => {
                tokens.push((i, Tok::Close));
                i += 1;
            }
            '+' => return Err(perr(i, "'+' must directly follow a license identifier")),
            c if is_word_char(c) => {
                let start = i;
                while i < bytes.len() && is_word_char(bytes[i] as char) {
                    i += 1;
                }
                let text = &input[start..i];
                let plus = bytes.get(i) == Some(&b'+');
                if plus {
                    i += 1;
                }
                let tok = match text {
                    "AND" if !plus => Tok::And,
                    "OR" if !plus => Tok::Or,
                    "WITH" if !plus => Tok::With,
                    _ => Tok::Word { text, plus },
                };
                tokens.push((start, tok));
            }
            other => return Err(perr(i, format!("unexpected character '{other}'"))),
        }
    }
    Ok(tokens)
}

fn is_license_ref(id: &str) -> bool {
    let local = match id.split_once(':') {
        Some((doc, local)) if doc.starts_with("DocumentRef-") => local,
        _ => id,
    };
    local.starts_with("LicenseRef-") && local.len() > "LicenseRef-".len()
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn or_expr(&mut self) -> Result<LicenseExpression, LicenseParseError> {
        let mut left = self.and_expr()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let right = self.and_expr()?;
            left = LicenseExpression::or(left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<LicenseExpression, LicenseParseError> {
        let mut left = self.with_expr()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let right = self.with_expr()?;
            left = LicenseExpression::and(left, right);
        }
        Ok(left)
    }

    fn with_expr(&mut self) -> Result<LicenseExpression, LicenseParseError> {
        let compound = self.peek() == Some(&Tok::Open);
        let primary = self.primary()?;
        if self.peek() != Some(&Tok::With) {
            return Ok(primary);
        }
        let with_offset = self.offset();
        let license = match primary {
            LicenseExpression::License(l) if !compound => l,
            _ => return Err(perr(with_offset, "WITH must follow a single license identifier")),
        };
        self.pos += 1;
        let offset = self.offset();
        match self.tokens.get(self.pos) {
            Some((_, Tok::Word { text, plus: false })) => {
                let exception = text.to_string();
                self.pos += 1;
                Ok(LicenseExpression::With { license, exception })
            }
            Some((_, Tok::Word { plus: true, .. })) => Err(perr(offset, "an exception identifier cannot take '+'")),
            _ => Err(perr(offset, "expected an exception identifier after WITH")),
        }
    }

    fn primary(&mut self) -> Result<LicenseExpression, LicenseParseError> {
        let offset = self.offset();
        match self.tokens.get(self.pos).cloned() {
            Some((_, Tok::Open)) => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(perr(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some((_, Tok::Word { text, plus })) => {
                self.pos += 1;
                if is_license_ref(text) {
                    if plus {
                        return Err(perr(offset, "a LicenseRef cannot take '+'"));
                    }
                    Ok(LicenseExpression::LicenseRef(text.to_string()))
                } else {
                    Ok(LicenseExpression::License(LicenseId { id: text.to_string(), or_later: plus }))
                }
            }
            Some((_, tok)) => {
                Err(perr(offset, format!("expected a license identifier or '(', found {}", describe(&tok))))
            }
            None => Err(perr(offset, "unexpected end of expression")),
        }
    }
}

fn describe(tok: &Tok<'_>) -> &'static str {
    match tok {
        Tok::Open => "'('",
        Tok::Close => "')'",
        Tok::And => "AND",
        Tok::Or => "OR",
        Tok::With => "WITH",
        Tok::Word { .. } => "an identifier",
    }
}

pub fn parse_license_expression(input: &str) -> Result<LicenseExpression, LicenseParseError> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(perr(0, "empty license expression"));
    }
    let mut parser = Parser { tokens, pos: 0, end: input.len() };
    let expr = parser.or_expr()?;
    if let Some((offset, tok)) = parser.tokens.get(parser.pos) {
        let message = match tok {
            Tok::Close => "unbalanced ')'".to_string(),
            Tok::Word { text, .. } if matches!(*text, "and" | "or" | "with") => {
                format!("operators must be upper case, found '{text}'")
            }
            other => format!("expected an operator, found {}", describe(other)),
        };
        return Err(perr(*offset, message));
    }
    Ok(expr)
}

/// Minimal-parentheses rendering. `parse_license_expression` of the result
/// gives back the same tree.
pub fn render_license_expression(ast: &LicenseExpression) -> String {
    let mut out = String::new();
    render_into(ast, &mut out);
    out
}

fn render_into(ast: &LicenseExpression, out: &mut String) {
    use LicenseExpression::*;
    let wrapped = |e: &LicenseExpression, wrap: bool, out: &mut String| {
        if wrap {
            out.push('(');
            render_into(e, out);
            out.push(')');
        } else {
            render_into(e, out);
        }
    };
    match ast {
        License(l) => out.push_str(&l.to_string()),
        LicenseRef(r) => out.push_str(r),
        With { license, exception } => {
            out.push_str(&license.to_string());
            out.push_str(" WITH ");
            out.push_str(exception);
        }
        And(l, r) => {
            wrapped(l, matches!(**l, Or(..)), out);
            out.push_str(" AND ");
            wrapped(r, matches!(**r, Or(..) | And(..)), out);
        }
        Or(l, r) => {
            render_into(l, out);
            out.push_str(" OR ");
            wrapped(r, matches!(**r, Or(..)), out);
        }
    }
}

/// A versioned list of known license and exception identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LicenseSnapshot {
    version: String,
    licenses: BTreeSet<String>,
    exceptions: BTreeSet<String>,
    folded: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("license snapshot line {line}: {message}")]
pub struct SnapshotError {
    pub line: usize,
    pub message: String,
}

const BUNDLED_SNAPSHOT: &str = include_str!("../data/license-list.snapshot");

impl LicenseSnapshot {
    pub fn parse(text: &str) -> Result<Self, SnapshotError> {
        let mut version = None;
        let mut licenses = BTreeSet::new();
        let mut exceptions = BTreeSet::new();
        let mut section: Option<bool> = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let err = |message: &str| SnapshotError { line, message: message.to_string() };
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            if version.is_none() {
                let v = content
                    .strip_prefix("license-list-version:")
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| err("expected 'license-list-version: <version>' header"))?;
                version = Some(v.to_string());
                continue;
            }
            match content {
                "[licenses]" => section = Some(true),
                "[exceptions]" => section = Some(false),
                id => {
                    if id.contains(char::is_whitespace) {
                        return Err(err("identifiers must not contain whitespace"));
                    }
                    let target = match section {
                        Some(true) => &mut licenses,
                        Some(false) => &mut exceptions,
                        None => return Err(err("identifier outside a section")),
                    };
                    if !target.insert(id.to_string()) {
                        return Err(err("duplicate identifier"));
                    }
                }
            }
        }
        let version = version.ok_or(SnapshotError { line: 0, message: "missing version header".into() })?;
        if licenses.is_empty() || exceptions.is_empty() {
            return Err(SnapshotError {
                line: 0,
                message: "license and exception sections must both be non-empty".into(),
            });
        }
        let folded = licenses.iter().chain(&exceptions).map(|id| (id.to_ascii_lowercase(), id.clone())).collect();
        Ok(Self { version, licenses, exceptions, folded })
    }

    pub fn bundled() -> &'static LicenseSnapshot {
        static SNAPSHOT: OnceLock<LicenseSnapshot> = OnceLock::new();
        SNAPSHOT.get_or_init(|| LicenseSnapshot::parse(BUNDLED_SNAPSHOT).expect("bundled license snapshot is valid"))
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn has_license(&self, id: &str) -> bool {
        self.licenses.contains(id)
    }

    pub fn has_exception(&self, id: &str) -> bool {
        self.exceptions.contains(id)
    }

    pub fn license_ids(&self) -> impl Iterator<Item = &str> {
        self.licenses.iter().map(String::as_str)
    }

    pub fn exception_ids(&self) -> impl Iterator<Item = &str> {
        self.exceptions.iter().map(String::as_str)
    }

    /// The listed spelling of an identifier that matches ignoring ASCII case.
    pub fn canonical_case(&self, id: &str) -> Option<&str> {
        self.folded.get(&id.to_ascii_lowercase()).map(String::as_str)
    }

    /// Rewrites identifiers to their listed spelling where one matches
    /// ignoring case. Unlisted identifiers are left alone.
    pub fn normalize_case(&self, ast: &LicenseExpression) -> LicenseExpression {
        use LicenseExpression::*;
        let fix = |id: &str| self.canonical_case(id).unwrap_or(id).to_string();
        match ast {
            License(l) => License(LicenseId { id: fix(&l.id), or_later: l.or_later }),
            LicenseRef(r) => LicenseRef(r.clone()),
            With { license, exception } => With {
                license: LicenseId { id: fix(&license.id), or_later: license.or_later },
                exception: fix(exception),
            },
            And(l, r) => LicenseExpression::and(self.normalize_case(l), self.normalize_case(r)),
            Or(l, r) => LicenseExpression::or(self.normalize_case(l), self.normalize_case(r)),
        }
    }
}

/// Identifiers of `ast` absent from the snapshot, in order of appearance.
/// User-defined references are never reported.
pub fn unknown_license_ids(ast: &LicenseExpression, snapshot: &LicenseSnapshot) -> Vec<String> {
    let mut out = Vec::new();
    collect_unknown(ast, snapshot, &mut out);
    out
}

fn collect_unknown(ast: &LicenseExpression, snapshot: &LicenseSnapshot, out: &mut Vec<String>) {
    match ast {
        LicenseExpression::License(l) => {
            if !snapshot.has_license(&l.id) {
                out.push(l.id.clone());
            }
        }
        LicenseExpression::LicenseRef(_) => {}
        LicenseExpression::With { license, exception } => {
            if !snapshot.has_license(&license.id) {
                out.push(license.id.clone());
            }
            if !exception.starts_with("AdditionRef-") && !snapshot.has_exception(exception) {
                out.push(exception.clone());
            }
        }
        LicenseExpression::And(l, r) | LicenseExpression::Or(l, r) => {
            collect_unknown(l, snapshot, out);
            collect_unknown(r, snapshot, out);
        }
    }
}

/// One UNKNOWN-LICENSE warning per unlisted identifier.
pub fn validate_license_ids(ast: &LicenseExpression, snapshot: &LicenseSnapshot) -> Vec<Finding> {
    license_findings(ast, snapshot, "license-expression")
}

pub(crate) fn license_findings(ast: &LicenseExpression, snapshot: &LicenseSnapshot, path: &str) -> Vec<Finding> {
    unknown_license_ids(ast, snapshot)
        .into_iter()
        .map(|id| {
            Finding::new(Code::UnknownLicense, path, format!("'{id}' is not in license list {}", snapshot.version()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lic(id: &str) -> LicenseExpression {
        LicenseExpression::license(id)
    }

    #[test]
    fn single_identifier() {
        assert_eq!(parse_license_expression("MIT").unwrap(), LicenseExpression::License(LicenseId::new("MIT")));
    }

    #[test]
    fn precedence_and_with() {
        assert_eq!(
            parse_license_expression("MIT OR Apache-2.0 AND BSD-3-Clause").unwrap(),
            LicenseExpression::or(lic("MIT"), LicenseExpression::and(lic("Apache-2.0"), lic("BSD-3-Clause")))
        );
        assert_eq!(
            parse_license_expression("GPL-2.0-only WITH Classpath-exception-2.0").unwrap(),
            LicenseExpression::With {
                license: LicenseId::new("GPL-2.0-only"),
                exception: "Classpath-exception-2.0".into()
            }
        );
        assert_eq!(
            parse_license_expression("Apache-2.0+").unwrap(),
            LicenseExpression::License(LicenseId::or_later("Apache-2.0"))
        );
    }

    #[test]
    fn error_offsets() {
        let cases = [
            ("(MIT OR", 7),
            ("", 0),
            ("   ", 0),
            ("MIT AND", 7),
            ("MIT)", 3),
            ("AND MIT", 0),
            ("(MIT OR A) WITH X", 11),
            ("MIT and A", 4),
            ("MIT +", 4),
            ("MIT WITH", 8),
            ("MIT $", 4),
        ];
        for (input, offset) in cases {
            let err = parse_license_expression(input).unwrap_err();
            assert_eq!(err.offset, offset, "{input}: {err}");
        }
    }

    #[test]
    fn rendering() {
        let or_and = LicenseExpression::or(lic("MIT"), LicenseExpression::and(lic("A"), lic("B")));
        assert_eq!(render_license_expression(&or_and), "MIT OR A AND B");
        assert_eq!(
            render_license_expression(&LicenseExpression::License(LicenseId::or_later("Apache-2.0"))),
            "Apache-2.0+"
        );
        let and_or = LicenseExpression::and(LicenseExpression::or(lic("MIT"), lic("A")), lic("B"));
        assert_eq!(render_license_expression(&and_or), "(MIT OR A) AND B");
        let right_and = LicenseExpression::and(lic("A"), LicenseExpression::and(lic("B"), lic("C")));
        assert_eq!(render_license_expression(&right_and), "A AND (B AND C)");
        assert_eq!(parse_license_expression("A AND (B AND C)").unwrap(), right_and);
    }

    #[test]
    fn license_refs() {
        assert_eq!(
            parse_license_expression("LicenseRef-acme-internal").unwrap(),
            LicenseExpression::LicenseRef("LicenseRef-acme-internal".into())
        );
        assert!(matches!(
            parse_license_expression("DocumentRef-x:LicenseRef-y").unwrap(),
            LicenseExpression::LicenseRef(_)
        ));
        assert!(parse_license_expression("LicenseRef-a WITH X").is_err());
    }

    #[test]
    fn identifier_validation() {
        let snapshot = LicenseSnapshot::bundled();
        let check = |s: &str| validate_license_ids(&parse_license_expression(s).unwrap(), snapshot);
        assert!(check("MIT").is_empty());
        let unknown = check("NotALicense-1.0");
        assert_eq!(unknown.len(), 1);
        assert_eq!(unknown[0].code, Code::UnknownLicense);
        assert!(check("LicenseRef-acme-internal").is_empty());
        assert!(check("GPL-2.0-only WITH Classpath-exception-2.0").is_empty());
        assert_eq!(check("MIT WITH Bogus-exception").len(), 1);
    }

    #[test]
    fn case_normalization() {
        let snapshot = LicenseSnapshot::bundled();
        let ast = parse_license_expression("mit OR apache-2.0").unwrap();
        assert_eq!(render_license_expression(&snapshot.normalize_case(&ast)), "MIT OR Apache-2.0");
        assert_eq!(snapshot.canonical_case("MIT"), Some("MIT"));
        assert_eq!(snapshot.canonical_case("nope-1"), None);
    }

    #[test]
    fn snapshot_format() {
        let snap =
            LicenseSnapshot::parse("license-list-version: 1.0\n[licenses]\nMIT\n[exceptions]\nX-exception\n").unwrap();
        assert_eq!(snap.version(), "1.0");
        assert!(LicenseSnapshot::parse("[licenses]\nMIT\n").is_err());
        assert!(LicenseSnapshot::parse("license-list-version: 1\n[licenses]\nMIT\n").is_err());
        assert!(LicenseSnapshot::parse("license-list-version: 1\nMIT\n").is_err());
        assert_eq!(LicenseSnapshot::bundled().version(), "3.27.0");
    }
}
