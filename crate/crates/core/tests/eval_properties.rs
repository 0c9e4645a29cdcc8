use deceptext::corpus::Label;
use deceptext::eval::{auc, metrics, two_proportion_z_test, Confusion};
use proptest::prelude::*;

fn confusion() -> impl Strategy<Value = Confusion> {
    (0usize..50, 0usize..50, 0usize..50, 0usize..50).prop_map(|(tp, fp, tn, fn_)| Confusion { tp, fp, tn, fn_ })
}

proptest! {
    #[test]
    fn metrics_stay_in_the_unit_interval(c in confusion()) {
        let m = metrics(&c);
        for v in [m.precision, m.recall, m.f1, m.accuracy].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert_eq!(m.accuracy.is_some(), c.total() > 0);
    }

    #[test]
    fn f1_lies_between_precision_and_recall(c in confusion()) {
        let m = metrics(&c);
        if let (Some(p), Some(r), Some(f)) = (m.precision, m.recall, m.f1) {
            prop_assert!(f >= p.min(r) - 1e-12 && f <= p.max(r) + 1e-12, "{p} {r} {f}");
        }
    }

    #[test]
    fn confusion_counts_every_document(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 0..100)) {
        let gold: Vec<Label> = pairs.iter().map(|p| Label::from_deceptive(p.0)).collect();
        let pred: Vec<Label> = pairs.iter().map(|p| Label::from_deceptive(p.1)).collect();
        prop_assert_eq!(Confusion::from_labels(&gold, &pred).total(), pairs.len());
    }

    #[test]
    fn z_test_is_antisymmetric(a in 0.0f64..=1.0, n1 in 1usize..500, b in 0.0f64..=1.0, n2 in 1usize..500) {
        let ab = two_proportion_z_test(a, n1, b, n2).unwrap();
        let ba = two_proportion_z_test(b, n2, a, n1).unwrap();
        prop_assert!((ab.z + ba.z).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&ab.p_one_tailed));
        if ab.z != 0.0 {
            prop_assert!((ab.p_one_tailed + ba.p_one_tailed - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn equal_accuracies_give_no_evidence(a in 0.0f64..=1.0, n in 1usize..500) {
        let t = two_proportion_z_test(a, n, a, n).unwrap();
        prop_assert_eq!(t.z, 0.0);
        prop_assert_eq!(t.p_one_tailed, 0.5);
    }

    #[test]
    fn negated_scores_flip_auc(scores in prop::collection::vec((-5i32..5, any::<bool>()), 2..60)) {
        let gold: Vec<Label> = scores.iter().map(|s| Label::from_deceptive(s.1)).collect();
        prop_assume!(gold.iter().any(|l| l.is_deceptive()) && gold.iter().any(|l| !l.is_deceptive()));
        let s: Vec<f64> = scores.iter().map(|s| f64::from(s.0)).collect();
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        let a = auc(&s, &gold).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + auc(&neg, &gold).unwrap() - 1.0).abs() < 1e-12);
    }
}
