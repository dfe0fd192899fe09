mod common;

use common::*;
use nilduality::data::{load_bundle, load_bundle_pair, validate_bundle, Bundle, BundleDoc, DataError};
use nilduality::orbits::Side;
use nilduality::packets::Packets;

fn summary(b: &Bundle) -> Vec<String> {
    let d = b.duality();
    let mut out = Vec::new();
    for side in [Side::Group, Side::Dual] {
        for x in d.bar_classes(side) {
            out.push(format!("{} -> {}", d.display(&x), d.display(&d.achar_dual(&x).unwrap())));
        }
    }
    for set in b.parameter_sets() {
        let p = Packets::new(d, set);
        for x in set.params() {
            out.push(format!("{} {}", x.id, d.display(&p.cuwf(x).unwrap())));
        }
    }
    out
}

#[test]
fn shipped_bundle_passes_every_check() {
    let report = validate_bundle(&f4_doc(), None);
    assert!(report.passed, "{:?}", report.failed_names());
    assert!(report.check("packets.jiang").is_some());
}

#[test]
fn round_trip_preserves_results() {
    let doc = f4_doc();
    let again = BundleDoc::from_json(&doc.to_json()).unwrap();
    assert_eq!(doc, again);
    let a = Bundle::from_docs(doc, None).unwrap();
    let b = Bundle::from_docs(again, None).unwrap();
    assert_eq!(summary(&a), summary(&b));
}

#[test]
fn loading_is_order_independent() {
    let doc = f4_doc();
    let mut shuffled = doc.clone();
    shuffled.orbits.reverse();
    shuffled.closure.reverse();
    shuffled.bar_a.reverse();
    shuffled.d_s.rotate_left(7);
    shuffled.parameter_sets[0].parameters.reverse();
    let a = Bundle::from_docs(doc, None).unwrap();
    let b = Bundle::from_docs(shuffled, None).unwrap();
    assert_eq!(summary(&a), summary(&b));
    assert_eq!(a.parameter_ids(), b.parameter_ids());
}

#[test]
fn each_broken_fixture_fails_its_check() {
    for (name, check, doc) in broken_fixtures() {
        let report = validate_bundle(&doc, None);
        assert!(!report.passed, "{name}");
        assert!(
            report.failed_names().iter().any(|n| n == check),
            "{name}: {check} not among {:?}",
            report.failed_names()
        );
    }
}

#[test]
fn load_errors_are_classified() {
    let text = f4_doc().to_json();
    let unknown = text.replacen("\"format_version\"", "\"extra\": 0, \"format_version\"", 1);
    assert!(matches!(load_bundle(unknown.as_bytes()), Err(DataError::Schema(_))));
    assert!(matches!(load_bundle("{".as_bytes()), Err(DataError::Parse(_))));
    let mut doc = f4_doc();
    doc.closure.push(("F4".into(), "0".into()));
    let err = load_bundle(doc.to_json().as_bytes()).unwrap_err();
    assert!(err.to_string().contains("closure.antisymmetry"), "{err}");
}

#[test]
fn non_self_dual_bundle_needs_its_dual() {
    assert!(matches!(load_bundle(B2_JSON.as_bytes()), Err(DataError::MissingDual(_))));
    let b = load_bundle_pair(B2_JSON.as_bytes(), C2_JSON.as_bytes()).unwrap();
    assert!(b.report().passed);
    let d = b.duality();
    let x = d.bar_class(Side::Group, "(2,2,1)", "1").unwrap();
    assert_eq!(d.display(&d.achar_dual(&x).unwrap()), "((2,2),(12))");
}

#[test]
fn conjectural_data_is_kept_but_not_authoritative() {
    let doc = f4_doc();
    let c = doc.conjectural_decomposition.as_ref().unwrap();
    assert!(!c.authoritative);
    assert_eq!(c.entries.len(), 4);
}
