// SPDX-License-Identifier: Apache-2.0

mod support;

use proptest::prelude::*;

use aibom_core::io::{canonicalize, read_document, write_document};
use support::docgen::{build, doc_spec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn write_read_write(spec in doc_spec()) {
        let doc = build(&spec, false);
        let bytes = write_document(&doc).unwrap();
        let outcome = read_document(&bytes).unwrap();
        prop_assert_eq!(&outcome.document, &doc);
        let codes: Vec<_> = outcome.findings.iter().map(|f| f.code.as_str()).collect();
        prop_assert!(codes.iter().all(|c| *c == "UNKNOWN-FIELD"), "{:?}", codes);
        let again = canonicalize(&bytes).unwrap();
        prop_assert_eq!(&again, &bytes);
        prop_assert_eq!(canonicalize(&again).unwrap(), again);
    }

    #[test]
    fn insertion_order_does_not_matter(spec in doc_spec()) {
        let forward = write_document(&build(&spec, false)).unwrap();
        let backward = write_document(&build(&spec, true)).unwrap();
        prop_assert_eq!(forward, backward);
    }
}

#[test]
fn fixtures_are_stable_under_canonicalization() {
    for name in ["full.aibom", "minimal.aibom", "typical.aibom", "alias.aibom", "empty-fields.aibom"] {
        let once = canonicalize(&support::fixture_bytes(name)).unwrap();
        assert_eq!(canonicalize(&once).unwrap(), once, "{name}");
    }
    let full = canonicalize(&support::fixture_bytes("full.aibom")).unwrap();
    let shuffled = canonicalize(&support::fixture_bytes("full-shuffled.aibom")).unwrap();
    assert_eq!(full, shuffled);
}

#[test]
fn generator_reaches_every_field() {
    use aibom_core::catalog::Profile;
    use aibom_core::hub::automation_rate;
    use support::docgen::{DocSpec, PackageSpec};

    let fields = aibom_core::catalog::Catalog::bundled().all().len();
    let spec = DocSpec {
        created: 1_700_000_000,
        agents: vec![1, 2],
        packages: [0u8, 1, 2]
            .into_iter()
            .map(|kind| PackageSpec { kind, picks: vec![Some(3); fields], extensions: vec![(1, 2)] })
            .collect(),
        relationships: vec![(0, 2, 0, None)],
        doc_extensions: vec![],
    };
    let doc = build(&spec, false);
    // The AI package gets `contains` from the relationship; the dataset has none.
    assert_eq!(automation_rate(&doc, Profile::Ai).unwrap().to_string(), "30/30");
    assert_eq!(automation_rate(&doc, Profile::Dataset).unwrap().to_string(), "25/26");
    let bytes = write_document(&doc).unwrap();
    assert_eq!(read_document(&bytes).unwrap().document, doc);
}
