// SPDX-License-Identifier: Apache-2.0

//! Line-oriented tree syntax used by every text file this crate reads or writes.
//!
//! A file is a mapping of `key: value` lines. Nested blocks are introduced by a
//! key (or a list dash) with nothing after it and are indented further than
//! their parent. List items start with `- `. Scalars are either bare text
//! (everything after `: ` on the line) or a JSON-style double-quoted string.
//! `[]` and `{}` denote the empty list and the empty mapping. Lines whose first
//! non-blank character is `#` are comments.
//!
//! ```text
//! name: example
//! required:
//!   ai:
//!     - suppliedBy
//!     - releaseTime
//! ```
//!
//! The parser keeps source locations and duplicate keys so callers can report
//! precise errors. [`render`] produces the canonical form: LF line endings,
//! two-space indentation, no trailing whitespace, and quoting only where a
//! scalar is not a plain token.

use std::fmt;

use thiserror::Error;

/// One-based line and column within a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Location {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

/// A location-free tree, used for output and for preserved unknown content.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Scalar(String),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl Value {
    pub fn scalar(text: impl Into<String>) -> Self {
        Value::Scalar(text.into())
    }

    pub fn as_scalar(&self) -> Option<&str> {
        match self {
            Value::Scalar(s) => Some(s),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::List(_) => "list",
            Value::Map(_) => "mapping",
        }
    }
}

/// A parsed tree node carrying the location it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub location: Location,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Scalar(String),
    List(Vec<Node>),
    Map(Vec<Entry>),
}

/// A mapping entry. Keys are kept in source order, duplicates included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub key_location: Location,
    pub value: Node,
}

impl Node {
    pub fn as_scalar(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Scalar(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&[Entry]> {
        match &self.kind {
            NodeKind::Map(entries) => Some(entries),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Node]> {
        match &self.kind {
            NodeKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            NodeKind::Scalar(_) => "scalar",
            NodeKind::List(_) => "list",
            NodeKind::Map(_) => "mapping",
        }
    }

    /// Drops locations.
    pub fn to_value(&self) -> Value {
        match &self.kind {
            NodeKind::Scalar(s) => Value::Scalar(s.clone()),
            NodeKind::List(items) => Value::List(items.iter().map(Node::to_value).collect()),
            NodeKind::Map(entries) => Value::Map(entries.iter().map(|e| (e.key.clone(), e.value.to_value())).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct SyntaxError {
    pub location: Location,
    pub message: String,
}

impl SyntaxError {
    fn new(location: Location, message: impl Into<String>) -> Self {
        Self { location, message: message.into() }
    }
}

struct Line<'a> {
    number: usize,
    indent: usize,
    content: &'a str,
}

/// Parses a complete text. The root is always a mapping; an empty text yields
/// an empty mapping.
pub fn parse(text: &str) -> Result<Node, SyntaxError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = Vec::new();
    for (index, raw) in text.split('\n').enumerate() {
        let number = index + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let body = raw.trim_start_matches(' ');
        if body.starts_with('\t') {
            return Err(SyntaxError::new(
                Location::new(number, raw.len() - body.len() + 1),
                "tab characters are not allowed in indentation",
            ));
        }
        let content = body.trim_end();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        lines.push(Line { number, indent: raw.len() - body.len(), content });
    }

    let Some(first) = lines.first() else {
        return Ok(Node { location: Location::new(1, 1), kind: NodeKind::Map(Vec::new()) });
    };
    if first.indent != 0 {
        return Err(SyntaxError::new(
            Location::new(first.number, first.indent + 1),
            "the first line must not be indented",
        ));
    }
    let mut pos = 0;
    let root = parse_block(&lines, &mut pos, 0)?;
    if root.as_map().is_none() {
        return Err(SyntaxError::new(root.location, "the top level must be a mapping of keys"));
    }
    Ok(root)
}

fn is_list_item(content: &str) -> bool {
    content == "-" || content.starts_with("- ")
}

fn parse_block(lines: &[Line<'_>], pos: &mut usize, indent: usize) -> Result<Node, SyntaxError> {
    let first = &lines[*pos];
    let location = Location::new(first.number, indent + 1);
    let is_list = is_list_item(first.content);
    let mut items = Vec::new();
    let mut entries = Vec::new();

    while let Some(line) = lines.get(*pos) {
        if line.indent < indent {
            break;
        }
        if line.indent > indent {
            return Err(SyntaxError::new(Location::new(line.number, line.indent + 1), "unexpected indentation"));
        }
        if is_list_item(line.content) != is_list {
            return Err(SyntaxError::new(
                Location::new(line.number, indent + 1),
                if is_list {
                    "expected a list item starting with '- '"
                } else {
                    "list item found where a key was expected"
                },
            ));
        }
        *pos += 1;

        if is_list {
            let rest = &line.content[1..];
            let item_location = Location::new(line.number, indent + 1);
            if rest.is_empty() {
                items.push(parse_nested(lines, pos, indent, item_location)?);
            } else {
                let value_column = indent + 3;
                items.push(Node {
                    location: Location::new(line.number, value_column),
                    kind: parse_scalar(&rest[1..], Location::new(line.number, value_column))?,
                });
            }
        } else {
            let key_location = Location::new(line.number, indent + 1);
            let (key, rest) = parse_key(line.content, key_location)?;
            let value = if rest.is_empty() {
                parse_nested(lines, pos, indent, key_location)?
            } else if let Some(text) = rest.strip_prefix(' ') {
                let value_column = indent + 1 + (line.content.len() - text.len());
                let value_location = Location::new(line.number, value_column);
                Node { location: value_location, kind: parse_scalar(text, value_location)? }
            } else {
                return Err(SyntaxError::new(key_location, "expected a space after ':'"));
            };
            entries.push(Entry { key, key_location, value });
        }
    }

    Ok(Node { location, kind: if is_list { NodeKind::List(items) } else { NodeKind::Map(entries) } })
}

fn parse_nested(lines: &[Line<'_>], pos: &mut usize, indent: usize, opener: Location) -> Result<Node, SyntaxError> {
    match lines.get(*pos) {
        Some(next) if next.indent > indent => parse_block(lines, pos, next.indent),
        _ => Err(SyntaxError::new(opener, "expected a value or an indented block")),
    }
}

/// Splits `key: rest` and returns the decoded key and the text after the colon.
fn parse_key(content: &str, location: Location) -> Result<(String, &str), SyntaxError> {
    if content.starts_with('"') {
        let end = quoted_end(content).ok_or_else(|| SyntaxError::new(location, "unterminated quoted key"))?;
        let key: String = serde_json::from_str(&content[..=end])
            .map_err(|e| SyntaxError::new(location, format!("invalid quoted key: {e}")))?;
        let rest = content[end + 1..]
            .strip_prefix(':')
            .ok_or_else(|| SyntaxError::new(location, "expected ':' after quoted key"))?;
        return Ok((key, rest));
    }
    let colon = content.find(':').ok_or_else(|| SyntaxError::new(location, "expected 'key: value'"))?;
    let key = &content[..colon];
    if key.is_empty() || key.contains(char::is_whitespace) {
        return Err(SyntaxError::new(location, format!("invalid key '{key}' (quote keys that contain spaces)")));
    }
    Ok((key.to_string(), &content[colon + 1..]))
}

/// Byte index of the closing quote of a JSON string starting at index 0.
fn quoted_end(text: &str) -> Option<usize> {
    let mut escaped = false;
    for (i, c) in text.char_indices().skip(1) {
        match c {
            _ if escaped => escaped = false,
            '\\' => escaped = true,
            '"' => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_scalar(text: &str, location: Location) -> Result<NodeKind, SyntaxError> {
    let text = text.trim();
    if text.starts_with('"') {
        let s: String = serde_json::from_str(text)
            .map_err(|e| SyntaxError::new(location, format!("invalid quoted string: {e}")))?;
        return Ok(NodeKind::Scalar(s));
    }
    Ok(match text {
        "[]" => NodeKind::List(Vec::new()),
        "{}" => NodeKind::Map(Vec::new()),
        _ => NodeKind::Scalar(text.to_string()),
    })
}

fn is_bare_scalar(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_./:@+#%=~?&,()-*!$;".contains(c))
}

fn is_bare_key(s: &str) -> bool {
    !s.is_empty() && !s.starts_with(['-', '#']) && s.chars().all(|c| c.is_ascii_alphanumeric() || "_.@/-".contains(c))
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn render_scalar(s: &str) -> String {
    if is_bare_scalar(s) {
        s.to_string()
    } else {
        quote(s)
    }
}

fn render_key(s: &str) -> String {
    if is_bare_key(s) {
        s.to_string()
    } else {
        quote(s)
    }
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Scalar(s) => Some(render_scalar(s)),
        Value::List(items) if items.is_empty() => Some("[]".into()),
        Value::Map(entries) if entries.is_empty() => Some("{}".into()),
        _ => None,
    }
}

/// Canonical rendering. At the top level, a blank line separates nested blocks
/// from what precedes them.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    render_block(value, 0, &mut out);
    out
}

fn render_block(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Map(entries) => {
            for (i, (key, item)) in entries.iter().enumerate() {
                let inline_text = inline(item);
                if indent == 0 && i > 0 && inline_text.is_none() {
                    out.push('\n');
                }
                push_indent(indent, out);
                out.push_str(&render_key(key));
                out.push(':');
                match inline_text {
                    Some(text) => {
                        out.push(' ');
                        out.push_str(&text);
                        out.push('\n');
                    }
                    None => {
                        out.push('\n');
                        render_block(item, indent + 2, out);
                    }
                }
            }
        }
        Value::List(items) => {
            for item in items {
                push_indent(indent, out);
                out.push('-');
                match inline(item) {
                    Some(text) => {
                        out.push(' ');
                        out.push_str(&text);
                        out.push('\n');
                    }
                    None => {
                        out.push('\n');
                        render_block(item, indent + 2, out);
                    }
                }
            }
        }
        Value::Scalar(s) => {
            push_indent(indent, out);
            out.push_str(&render_scalar(s));
            out.push('\n');
        }
    }
}

fn push_indent(indent: usize, out: &mut String) {
    out.extend(std::iter::repeat_n(' ', indent));
}
