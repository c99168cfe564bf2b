// SPDX-License-Identifier: Apache-2.0

//! Shared reading helpers for the bundled tree-syntax data files.

use thiserror::Error;

use crate::catalog::{Catalog, FieldRef};
use crate::syntax::{self, Entry, Location, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} {location}: {message}")]
pub struct DataFileError {
    pub what: &'static str,
    pub location: Location,
    pub message: String,
}

pub(crate) fn data_err(what: &'static str, location: Location, message: impl Into<String>) -> DataFileError {
    DataFileError { what, location, message: message.into() }
}

/// Parses UTF-8 tree text for one of the bundled data file kinds.
pub(crate) fn parse_data(bytes: &[u8], what: &'static str) -> Result<Node, DataFileError> {
    let text =
        std::str::from_utf8(bytes).map_err(|_| data_err(what, Location::new(1, 1), "file is not valid UTF-8"))?;
    syntax::parse(text).map_err(|e| data_err(what, e.location, e.message))
}

pub(crate) fn text_of(entry: &Entry, what: &'static str) -> Result<String, DataFileError> {
    entry
        .value
        .as_scalar()
        .filter(|s| !s.trim().is_empty())
        .map(str::to_string)
        .ok_or_else(|| data_err(what, entry.value.location, format!("'{}' must be non-empty text", entry.key)))
}

pub(crate) fn field_refs(entry: &Entry, what: &'static str) -> Result<Vec<FieldRef>, DataFileError> {
    let items = entry
        .value
        .as_list()
        .ok_or_else(|| data_err(what, entry.value.location, format!("'{}' must be a list", entry.key)))?;
    let mut out = Vec::new();
    for item in items {
        let text = item.as_scalar().ok_or_else(|| data_err(what, item.location, "field references must be text"))?;
        let field = FieldRef::parse(text, Catalog::bundled()).map_err(|m| data_err(what, item.location, m))?;
        if out.contains(&field) {
            return Err(data_err(what, item.location, format!("'{text}' listed twice")));
        }
        out.push(field);
    }
    Ok(out)
}
