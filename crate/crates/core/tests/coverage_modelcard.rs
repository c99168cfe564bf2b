// SPDX-License-Identifier: Apache-2.0

mod support;

use proptest::prelude::*;

use aibom_core::catalog::{Catalog, Profile};
use aibom_core::compliance::*;
use aibom_core::model::Document;

const FULL_MODEL: &str = "urn:example:model:sentiment";

fn doc(name: &str) -> Document {
    support::document(name)
}

fn eu() -> CoverageMatrix {
    builtin_matrix("eu-ai-act").unwrap()
}

#[test]
fn full_fixture_against_the_bundled_matrices() {
    let full = doc("full.aibom");
    let report = coverage_report(&full, &eu());
    assert_eq!((report.satisfied(), report.total()), (13, 14));
    assert_eq!(report.count(ObligationStatus::Unmappable), 1);
    assert_eq!(report.satisfied_rate().decimal(2), "0.93");
    for (name, expected) in [("medical-devices", 3), ("ieee-7000", 40)] {
        let r = coverage_report(&full, &builtin_matrix(name).unwrap());
        assert_eq!((r.satisfied(), r.total()), (expected, expected), "{name}");
    }
}

#[test]
fn empty_fields_fixture_satisfies_nothing() {
    let report = coverage_report(&doc("empty-fields.aibom"), &eu());
    assert_eq!(report.satisfied(), 0);
    assert_eq!(report.count(ObligationStatus::Missing), 13);
    assert_eq!(report.count(ObligationStatus::Unmappable), 1);
    assert_eq!(report.satisfied_rate().to_string(), "0/14");
}

#[test]
fn every_matrix_field_exists_and_categories_are_named() {
    for (name, _) in BUILTIN_MATRICES {
        let m = builtin_matrix(name).unwrap();
        assert!(!m.categories().is_empty(), "{name}");
        for f in m.fields() {
            assert!(Catalog::bundled().descriptor(&f.field).is_some(), "{name}: {}", f.field);
        }
    }
}

#[test]
fn model_cards_for_the_fixtures() {
    let mapping = default_mapping();
    assert_eq!(mapping.sections.len(), 20);

    let full = generate_model_card(&doc("full.aibom"), FULL_MODEL, &mapping).unwrap();
    assert_eq!(full.extraction_rate.to_string(), "20/20");

    let typical = generate_model_card(&doc("typical.aibom"), FULL_MODEL, &mapping).unwrap();
    // Read off the fixture: the model has these fields and its one training set
    // carries only a name.
    let expected = [
        "Model Name",
        "Version",
        "Developers",
        "Release Date",
        "Model Type",
        "License",
        "Download Location",
        "Intended Use",
        "Domains",
        "Hyperparameters",
        "Training Data",
        "Evaluation Metrics",
    ];
    assert_eq!(typical.populated_sections, expected);
    assert_eq!(typical.extraction_rate.to_string(), "12/20");
    assert_eq!(typical.extraction_rate.decimal(2), "0.60");
    assert!(typical.text.starts_with("# Model Card: "));
    assert!(typical.text.contains("| Metric | Value | Decision threshold |"));

    let minimal = generate_model_card(&doc("minimal.aibom"), "urn:example:model:tiny", &mapping).unwrap();
    assert_eq!(minimal.extraction_rate.to_string(), "4/20");
}

#[test]
fn model_card_errors() {
    let full = doc("full.aibom");
    let mapping = default_mapping();
    assert_eq!(
        generate_model_card(&full, "urn:example:nothing", &mapping).unwrap_err(),
        ModelCardError::UnknownModel("urn:example:nothing".into())
    );
    assert!(matches!(
        generate_model_card(&full, "urn:example:dataset:reviews", &mapping),
        Err(ModelCardError::NotAiPackage(_))
    ));
    let empty = ModelCardMapping { name: "empty".into(), sections: Vec::new() };
    assert!(matches!(generate_model_card(&full, FULL_MODEL, &empty), Err(ModelCardError::EmptyMapping(_))));
}

/// Every `(package id, field)` pair that can be cleared in the full fixture.
fn clearable(doc: &Document) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for e in doc.elements() {
        let Some(profile) = e.profile() else { continue };
        for d in Catalog::bundled().applicable(profile) {
            if d.name != "spdxId" {
                out.push((e.id().to_string(), d.name.clone()));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn clearing_fields_never_improves_coverage(
        first in proptest::collection::vec(any::<bool>(), 64),
        more in proptest::collection::vec(any::<bool>(), 64),
    ) {
        // `larger` clears everything `smaller` clears, and possibly more.
        let full = doc("full.aibom");
        let fields = clearable(&full);
        let (mut smaller, mut larger) = (full.clone(), full);
        for (i, (id, field)) in fields.iter().enumerate() {
            let (a, b) = (first[i % first.len()], more[(i * 7) % more.len()]);
            if a {
                prop_assert!(smaller.clear_field(id, field));
            }
            if a || b {
                prop_assert!(larger.clear_field(id, field));
            }
        }
        for (name, _) in BUILTIN_MATRICES {
            let matrix = builtin_matrix(name).unwrap();
            let before = coverage_report(&smaller, &matrix);
            let after = coverage_report(&larger, &matrix);
            prop_assert!(after.satisfied() <= before.satisfied());
            for (a, b) in after.per_obligation.iter().zip(&before.per_obligation) {
                prop_assert_eq!(&a.obligation_id, &b.obligation_id);
                prop_assert!(a.status.rank() <= b.status.rank(), "{} in {}", a.obligation_id, name);
            }
        }
        let mapping = default_mapping();
        let card_before = generate_model_card(&smaller, FULL_MODEL, &mapping).unwrap();
        let card_after = generate_model_card(&larger, FULL_MODEL, &mapping).unwrap();
        prop_assert!(card_after.extraction_rate.numerator() <= card_before.extraction_rate.numerator());
        for s in &card_after.populated_sections {
            prop_assert!(card_before.populated_sections.contains(s));
        }
    }
}

#[test]
fn ai_profile_catalog_is_consistent_with_card_sources() {
    for section in default_mapping().sections {
        for source in &section.sources {
            assert_ne!(source.profile, Profile::Base, "{}", section.name);
        }
    }
}
