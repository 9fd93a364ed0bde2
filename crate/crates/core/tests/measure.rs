use causet_lab::hunter::sample_measures;
use causet_lab::measure::{
    find_ccs, is_ccs, is_common_cause, is_correlated, CcsSearch, Condition, Relevance, ScreeningOptions,
    ZeroScreener,
};
use causet_lab::{validate_causet, DomMap, Error, Event, ExactMeasure, HistorySpace, MeasureTable, Probability, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(p: u64, d: u64) -> Rational {
    Rational::from_ratio(p, d)
}

fn anti2() -> HistorySpace {
    HistorySpace::new(validate_causet(&["x", "y"], &[]).unwrap(), 2).unwrap()
}

fn perf(s: &HistorySpace) -> MeasureTable<Rational> {
    ExactMeasure::diagonal(s)
}

#[test]
fn probabilities() {
    let s = anti2();
    let m = perf(&s);
    let (x1, y1) = (s.value_event(0, 1), s.value_event(1, 1));
    assert_eq!(m.prob(x1), q(1, 2));
    assert_eq!(m.cond_prob(x1, s.omega()).unwrap(), m.prob(x1));
    assert_eq!(m.cond_prob(x1, Event::EMPTY).unwrap_err(), Error::ZeroCondition);
    assert!(is_correlated(&m, x1, y1));
    assert!(!is_correlated(&ExactMeasure::uniform(&s), x1, y1));
    assert!(!is_correlated(&m, x1, s.omega()));
}

#[test]
fn common_causes() {
    let s = anti2();
    let m = perf(&s);
    let (x1, y1) = (s.value_event(0, 1), s.value_event(1, 1));
    let opts = ScreeningOptions::default();
    assert!(is_common_cause(&m, x1, y1, x1, opts).qualifies);
    assert!(is_common_cause(&m, x1, x1, x1, opts).qualifies);
    let on_omega = is_common_cause(&m, x1, y1, s.omega(), opts);
    assert!(!on_omega.qualifies);
    assert!(on_omega.failed.iter().any(|f| f.condition == Condition::ScreenOnC));
    let conditional = ScreeningOptions { relevance: Relevance::Conditional, zero: ZeroScreener::Vacuous };
    assert!(is_common_cause(&m, x1, y1, x1, conditional).qualifies);
}

#[test]
fn common_cause_systems() {
    let s = anti2();
    let m = perf(&s);
    let (x1, y1) = (s.value_event(0, 1), s.value_event(1, 1));
    let by_x = vec![s.value_event(0, 0), s.value_event(0, 1)];
    assert!(is_ccs(&s, &m, x1, y1, &by_x, ZeroScreener::Vacuous).unwrap().qualifies);
    assert!(!is_ccs(&s, &m, x1, y1, &[s.omega()], ZeroScreener::Vacuous).unwrap().qualifies);
    assert!(matches!(is_ccs(&s, &m, x1, y1, &[x1], ZeroScreener::Vacuous), Err(Error::NotAPartition(_))));
    let uniform = ExactMeasure::uniform(&s);
    let v = is_ccs(&s, &uniform, x1, y1, &by_x, ZeroScreener::Vacuous).unwrap();
    assert!(!v.correlated && !v.qualifies);

    let found = find_ccs(&s, &DomMap::Canonical, &m, x1, y1, 2, CcsSearch::AllPartitions).unwrap();
    let mut want = by_x.clone();
    want.sort();
    assert!(found.iter().any(|p| {
        let mut p = p.clone();
        p.sort();
        p == want
    }));
    assert!(find_ccs(&s, &DomMap::Canonical, &m, x1, y1, 1, CcsSearch::AllPartitions).unwrap().is_empty());
    assert!(find_ccs(&s, &DomMap::Canonical, &uniform, x1, y1, 2, CcsSearch::AllPartitions).unwrap().is_empty());
    let regions = find_ccs(&s, &DomMap::Canonical, &m, x1, y1, 2, CcsSearch::Regions).unwrap();
    assert!(!regions.is_empty());
}

#[test]
fn all_partition_search_is_capped() {
    let c = validate_causet(&["x", "y", "z", "w"], &[]).unwrap();
    let s = HistorySpace::new(c, 2).unwrap();
    let m = ExactMeasure::diagonal(&s);
    let (a, b) = (s.value_event(0, 1), s.value_event(1, 1));
    let err = find_ccs(&s, &DomMap::Canonical, &m, a, b, 2, CcsSearch::AllPartitions).unwrap_err();
    assert!(matches!(err, Error::CapExceeded(_)));
    assert!(find_ccs(&s, &DomMap::Canonical, &m, a, b, 2, CcsSearch::Regions).is_ok());
}

#[test]
fn measure_validation() {
    let s = anti2();
    assert!(MeasureTable::new(&s, vec![q(1, 2), q(1, 2), q(1, 2), Rational::zero()]).is_err());
    assert!(MeasureTable::new(&s, vec![Rational::one()]).is_err());
    let neg = Rational::zero() - q(1, 2);
    assert!(MeasureTable::new(&s, vec![neg, q(1, 2), q(1, 2), q(1, 2)]).is_err());
}

#[test]
fn sampled_measures() {
    let s = anti2();
    let one = sample_measures(&s, 1, 5, 8).unwrap();
    assert_eq!(one, vec![ExactMeasure::uniform(&s)]);
    let a = sample_measures(&s, 5, 42, 8).unwrap();
    assert_eq!(a, sample_measures(&s, 5, 42, 8).unwrap());
    assert_ne!(a, sample_measures(&s, 5, 43, 8).unwrap());
    assert!(sample_measures(&s, 0, 1, 8).is_err());
}

proptest! {
    #[test]
    fn sampled_measures_are_exactly_normalized(seed in any::<u64>(), d in 1u64..20, n in 1usize..=3) {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let s = HistorySpace::new(validate_causet::<String>(&names, &[]).unwrap(), 2).unwrap();
        for m in sample_measures(&s, 4, seed, d).unwrap() {
            let total = m.weights().iter().fold(Rational::zero(), |acc, w| acc + w.clone());
            prop_assert!(total.is_one());
            prop_assert!(m.weights().iter().all(|w| *w >= Rational::zero()));
        }
    }

    #[test]
    fn common_cause_verdicts_are_consistent(
        ws in proptest::collection::vec(0u64..6, 4),
        a in 0u128..16, b in 0u128..16, c in 0u128..16,
    ) {
        prop_assume!(ws.iter().any(|&w| w > 0));
        let s = anti2();
        let m = MeasureTable::normalized(&s, ws.iter().map(|&w| q(w, 1)).collect()).unwrap();
        let (a, b, c) = (Event::from_bits(a), Event::from_bits(b), Event::from_bits(c));
        let opts = ScreeningOptions::default();
        let v = is_common_cause(&m, a, b, c, opts);
        prop_assert_eq!(v.qualifies, v.failed.is_empty());
        prop_assert_eq!(v.qualifies, is_common_cause(&m, b, a, c, opts).qualifies);
        // a qualifying common cause implies the correlation it explains
        if v.qualifies {
            prop_assert!(is_correlated(&m, a, b));
        }
    }

    #[test]
    fn product_measures_factor(wx in 1u64..6, wy in 1u64..6, wz in 1u64..6, fa in 0u128..4, fb in 0u128..4, z in 0usize..2) {
        // x, y, z independent; A depends on x, B on y, screen on a value of z
        let c = validate_causet(&["x", "y", "z"], &[]).unwrap();
        let s = HistorySpace::new(c, 2).unwrap();
        let side = |w: u64, v: usize| if v == 1 { q(w, w + 1) } else { q(1, w + 1) };
        let weights = (0..s.len())
            .map(|h| side(wx, s.value(h, 0)) * side(wy, s.value(h, 1)) * side(wz, s.value(h, 2)))
            .collect();
        let m = MeasureTable::new(&s, weights).unwrap();
        let lift = |mask: u128, x: usize| {
            (0..2).filter(|v| mask >> v & 1 == 1).fold(Event::EMPTY, |e, v| e.union(s.value_event(x, v)))
        };
        let (a, b) = (lift(fa, 0), lift(fb, 1));
        prop_assert!(!is_correlated(&m, a, b));
        prop_assert_eq!(m.screens_off(a, b, s.value_event(2, z)), Some(true));
    }
}
