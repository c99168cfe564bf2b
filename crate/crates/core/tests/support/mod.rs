// SPDX-License-Identifier: Apache-2.0

//! Helpers shared by the integration tests of both crates.

#![allow(dead_code)]

pub mod docgen;
pub mod graphs;
pub mod license_oracle;

use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    let here = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let local = here.join("fixtures");
    if local.join("full.aibom").is_file() {
        local
    } else {
        here.join("../core/fixtures")
    }
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    std::fs::read(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Reads a fixture that is expected to parse.
pub fn document(name: &str) -> aibom_core::model::Document {
    aibom_core::io::read_document(&fixture_bytes(name)).unwrap_or_else(|e| panic!("{name}: {e}")).document
}
