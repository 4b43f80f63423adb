use fibcat::corpus::{generate, sample_gluing, CorpusKind};
use fibcat::fincat::SizeGuard;
use fibcat::io::{
    document_to_json, fibration_to_file, parse_document, run_predicate, to_json, Document,
    Predicate, ReportContent,
};
use fibcat::moens::StabilityMode;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = CorpusKind> {
    prop::sample::select(CorpusKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn parse_after_serialize_is_identity(k in kind(), seed in 1u64..1000) {
        let doc = generate(k, None, seed, SizeGuard::default()).unwrap();
        let text = document_to_json(&doc);
        let back = parse_document(&text, SizeGuard::default()).unwrap();
        prop_assert_eq!(back.kind(), doc.kind());
        prop_assert_eq!(document_to_json(&back), text);
    }

    #[test]
    fn witnesses_recheck_after_reload(seed in 1u64..1000, n in 2usize..5) {
        let p = sample_gluing(seed, n).unwrap();
        let text = to_json(&fibration_to_file(&p));
        let Document::Fibration(q) = parse_document(&text, SizeGuard::default()).unwrap() else {
            panic!("not a fibration");
        };
        let outcomes: Vec<_> = [Predicate::Bcc, Predicate::GenMoens, Predicate::Zawadowski]
            .into_iter()
            .map(|pr| run_predicate(&p, pr, StabilityMode::PreMoens).unwrap())
            .collect();
        let report = ReportContent::new(text.as_bytes(), StabilityMode::PreMoens, outcomes);
        let json = to_json(&report);
        let reloaded: ReportContent = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&reloaded, &report);
        prop_assert!(reloaded.recheck(&q).unwrap());
    }
}

#[test]
fn unknown_fields_are_schema_errors() {
    let doc = generate(CorpusKind::Poset, None, 1, SizeGuard::default()).unwrap();
    let text = document_to_json(&doc).replacen('{', "{\"extra\": 1,", 1);
    let err = parse_document(&text, SizeGuard::default()).unwrap_err();
    assert!(matches!(err, fibcat::Error::Schema(_)), "{err}");
}
