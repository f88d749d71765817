use proptest::prelude::*;
use termbench_core::dataset::Split;
use termbench_core::outcome::{classify, derive_metrics, CategoryShares, OutcomeCategory, PairOutcome};
use termbench_core::{Direction, Terminology};

fn outcomes(flags: &[(bool, bool, bool)]) -> Vec<PairOutcome> {
    flags
        .iter()
        .enumerate()
        .map(|(i, &(train, b, f))| PairOutcome {
            pair_id: format!("HPO/HP:{i:07}"),
            terminology: Terminology::Hpo,
            direction: Direction::IdToTerm,
            split: if train { Split::Train } else { Split::Validation },
            baseline_correct: b,
            finetuned_correct: f,
            category: classify(b, f),
        })
        .collect()
}

proptest! {
    #[test]
    fn categories_partition_each_split(flags in prop::collection::vec(any::<(bool, bool, bool)>(), 1..300)) {
        let o = outcomes(&flags);
        for split in Split::ALL {
            let members: Vec<_> = o.iter().filter(|x| x.split == split).collect();
            let total: usize = OutcomeCategory::ALL
                .iter()
                .map(|c| members.iter().filter(|x| x.category == *c).count())
                .sum();
            prop_assert_eq!(total, members.len());
        }
    }

    #[test]
    fn memorized_identity_and_train_accuracy(flags in prop::collection::vec(any::<(bool, bool, bool)>(), 2..300)) {
        let o = outcomes(&flags);
        prop_assume!(o.iter().any(|x| x.split == Split::Train) && o.iter().any(|x| x.split == Split::Validation));
        let train = CategoryShares::of_split(&o, Split::Train).unwrap();
        let hundred = num_rational::Ratio::from_integer(100);
        prop_assert_eq!(train.gainer, hundred - train.incorrect - train.correct - train.loser);

        let n_train = o.iter().filter(|x| x.split == Split::Train).count();
        let ft_train = o.iter().filter(|x| x.split == Split::Train && x.finetuned_correct).count();
        let ft_acc = num_rational::Ratio::new(100 * ft_train as i64, n_train as i64);
        prop_assert_eq!(ft_acc, train.correct + train.gainer);

        let m = derive_metrics(&o).unwrap();
        if train.loser == num_rational::Ratio::from_integer(0) {
            let rounded = (ft_acc * num_rational::Ratio::from_integer(10)).round().to_integer() as f64 / 10.0;
            prop_assert_eq!(m.accuracy_pct, rounded);
        }
        prop_assert!((0.0..=100.0).contains(&m.memorized_pct));
        prop_assert!((0.0..=100.0).contains(&m.generalized_pct));
    }
}

#[test]
fn missing_validation_is_domain_error() {
    let o = outcomes(&[(true, false, true)]);
    assert!(matches!(derive_metrics(&o), Err(termbench_core::Error::Domain(_))));
}
