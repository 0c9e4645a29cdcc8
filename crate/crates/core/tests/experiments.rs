mod common;

use common::*;
use deceptext::eval::report::parse_predictions;
use deceptext::eval::{majority_baseline, run_cross_dataset, run_experiment};
use deceptext::setup::FeatureSetup;
use deceptext::Label;

#[test]
fn planted_token_is_found_by_both_trainers() {
    let lex = english_lexicons();
    let corpus = synthetic_corpus("planted", 20, 11, Some("zanzibar"));
    let data = prepare(&corpus, &lex);
    for s in ["word(1,1),lowercase:log", "word(1,1),lowercase:simplog"] {
        let setup: FeatureSetup = s.parse().unwrap();
        let out = run_experiment(&data, &setup, &settings(&lex, 3)).unwrap();
        let r = &out.report;
        assert_eq!(r.test.accuracy, Some(1.0), "{s}");
        assert_eq!(r.top_deceptive[0].feature, "word:zanzibar", "{s}");
    }
}

#[test]
fn reports_are_deterministic() {
    let lex = english_lexicons();
    let corpus = synthetic_corpus("det", 60, 5, Some("zanzibar"));
    let data = prepare(&corpus, &lex);
    let setup: FeatureSetup = "ling+word(1,2),stem:simplog".parse().unwrap();
    let a = run_experiment(&data, &setup, &settings(&lex, 9)).unwrap();
    let b = run_experiment(&data, &setup, &settings(&lex, 9)).unwrap();
    assert_eq!(a.report.to_markdown(), b.report.to_markdown());
    assert_eq!(a.report.predictions_csv(), b.report.predictions_csv());
    assert_eq!(a.model.to_json(), b.model.to_json());
}

#[test]
fn accuracy_is_rederivable_from_predictions() {
    let lex = english_lexicons();
    let corpus = synthetic_corpus("rederive", 80, 8, None);
    let data = prepare(&corpus, &lex);
    let setup: FeatureSetup = "ling+char(1,2):log".parse().unwrap();
    let out = run_experiment(&data, &setup, &settings(&lex, 1)).unwrap();
    let (hash, rows) = parse_predictions(&out.report.predictions_csv()).unwrap();
    assert_eq!(hash, "test");
    let hits = rows.iter().filter(|r| r.gold == r.label).count();
    let acc = hits as f64 / rows.len() as f64;
    assert_eq!(Some(acc), out.report.test.accuracy);
    assert!(acc <= 1.0);

    // Predicting the majority class for every row reproduces the baseline.
    let gold: Vec<Label> = rows.iter().map(|r| r.gold).collect();
    let relabeled = rows.iter().filter(|r| r.gold == out.report.majority_label).count() as f64 / rows.len() as f64;
    assert_eq!(relabeled, out.report.majority_accuracy);
    let train_labels = vec![out.report.majority_label; 3];
    assert_eq!(majority_baseline(&train_labels, &gold).unwrap().1, relabeled);
}

#[test]
fn cross_dataset_on_duplicates_matches_training_accuracy() {
    let lex = english_lexicons();
    let a = synthetic_corpus("A", 40, 21, Some("zanzibar"));
    let mut docs = a.documents().to_vec();
    for d in &mut docs {
        d.dataset_id = "A-copy".into();
    }
    let copy = deceptext::Corpus::new("A-copy", "en", None, None, "review", docs).unwrap();
    let sets = [prepare(&a, &lex), prepare(&copy, &lex)];
    let setup: FeatureSetup = "word(1,1):log".parse().unwrap();
    let out = run_cross_dataset(&sets, &setup, &settings(&lex, 4)).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].report.test_dataset, "A");
    assert_eq!(out[1].report.test_dataset, "A-copy");
    for o in &out {
        assert_eq!(o.report.test.accuracy, Some(o.report.train_accuracy));
    }
    assert_eq!(out[0].report.test.accuracy, out[1].report.test.accuracy);
}

#[test]
fn cross_dataset_rejects_mixed_languages() {
    let lex = english_lexicons();
    let a = synthetic_corpus("A", 20, 1, None);
    let mut docs = a.documents().to_vec();
    for d in &mut docs {
        d.language = "es".into();
    }
    let b = deceptext::Corpus::new("B", "es", None, None, "review", docs).unwrap();
    let sets = [prepare(&a, &lex), prepare(&b, &lex)];
    let setup: FeatureSetup = "char(1,1):log".parse().unwrap();
    let err = run_cross_dataset(&sets, &setup, &settings(&lex, 4)).unwrap_err();
    assert_eq!(err.stage(), "cross-dataset");
}
