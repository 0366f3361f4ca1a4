mod common;

use common::{kb_of, kb_strategy, names_used, Shape};
use fixedbitset::FixedBitSet;
use lealc_core::kb::KnowledgeBase;
use lealc_core::model::{bounded_model_search, build_model, Polarity, SearchLimits};
use lealc_core::syntax::{Assertion, Individual, Term};
use lealc_core::tableau::invariants::{check_depth_bounds, check_separation_shapes};
use lealc_core::tableau::{check_consistency, saturate, RuleSet, SaturationConfig, Schedule};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn bits(len: usize, mask: u32) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    (0..len).filter(|k| mask >> k & 1 == 1).for_each(|k| s.insert(k));
    s
}

fn context(n: usize, m: usize, inc: u32) -> Polarity {
    let pairs = (0..n).flat_map(|a| (0..m).map(move |x| (a, x)));
    Polarity::from_pairs(
        (0..n).map(|a| format!("a{a}")).collect(),
        (0..m).map(|x| format!("x{x}")).collect(),
        pairs.filter(|&(a, x)| inc >> (a * m + x) & 1 == 1),
    )
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn base_completions_respect_depth_bounds_and_shapes(text in kb_strategy(Shape::FUZZ)) {
        let (_, abox) = kb_of(&text);
        let cfg = SaturationConfig { stop_on_clash: false, ..SaturationConfig::default() };
        let c = saturate(&abox, &RuleSet::base(), &cfg).unwrap();
        prop_assert!(check_depth_bounds(&c).is_ok(), "{:?}\n{}", check_depth_bounds(&c), text);
        prop_assert!(check_separation_shapes(&c).is_ok(), "{:?}\n{}", check_separation_shapes(&c), text);
    }

    #[test]
    fn universal_model_agrees_with_completion(text in kb_strategy(Shape::FUZZ)) {
        let (_, abox) = kb_of(&text);
        let res = check_consistency(&abox).unwrap();
        prop_assume!(res.is_consistent());
        let c = res.completion();
        let m = build_model(c).unwrap();
        for t in c.positive_terms() {
            prop_assert!(m.satisfies(Assertion::Pos(t)).unwrap(), "{t}\n{text}");
        }
        prop_assert!(m.check_i_compatibility().is_ok(), "{:?}\n{}", m.check_i_compatibility(), text);
        let (objs, _) = c.individuals();
        for &concept in c.occurring() {
            let x = Individual::class_feature(concept);
            let ext = m.interpret(concept).unwrap().extent;
            for &b in objs.iter().filter(|b| b.is_named()) {
                let derived = c.contains_term(Term::RelI(b, x));
                prop_assert_eq!(derived, ext.contains(m.object_index(b).unwrap()), "{} {}\n{}", b, concept, text);
            }
        }
    }

    #[test]
    fn random_schedules_reach_the_same_completion(text in kb_strategy(Shape::FUZZ), seed in any::<u64>()) {
        let (_, abox) = kb_of(&text);
        let fifo = saturate(&abox, &RuleSet::base(), &SaturationConfig::default()).unwrap();
        let cfg = SaturationConfig { schedule: Schedule::Random(seed), ..SaturationConfig::default() };
        let rnd = saturate(&abox, &RuleSet::base(), &cfg).unwrap();
        prop_assert_eq!(fifo.is_consistent(), rnd.is_consistent());
        if fifo.is_consistent() {
            prop_assert_eq!(fifo.assertion_set(), rnd.assertion_set());
        }
    }

    #[test]
    fn printing_then_parsing_is_the_identity(text in kb_strategy(Shape::FUZZ)) {
        let kb = KnowledgeBase::parse(&text).unwrap();
        let printed = kb.to_text().unwrap();
        let again = KnowledgeBase::parse(&printed).unwrap();
        prop_assert_eq!(&again, &kb);
        prop_assert_eq!(again.to_text().unwrap(), printed);
    }

    #[test]
    fn tiny_consistent_aboxes_have_small_models(text in kb_strategy(Shape::TINY)) {
        let (_, abox) = kb_of(&text);
        prop_assume!(names_used(&abox) <= 2);
        prop_assume!(check_consistency(&abox).unwrap().is_consistent());
        let limits = SearchLimits { max_objects: 3, max_features: 3, budget: 50_000_000 };
        let found = bounded_model_search(&abox, limits).unwrap();
        prop_assert!(found.is_some(), "{}", text);
        let m = found.unwrap();
        for a in &abox {
            prop_assert!(m.satisfies(*a).unwrap(), "{a}\n{text}");
        }
    }

    #[test]
    fn galois_connection_laws(n in 1usize..=4, m in 1usize..=4, inc in any::<u32>(), b in any::<u32>(), b2 in any::<u32>()) {
        let p = context(n, m, inc);
        let (b, b2) = (bits(n, b), bits(n, b2));
        let up = p.up(&b);
        prop_assert_eq!(p.up(&p.down(&up)), up.clone());
        let down = p.down(&bits(m, inc));
        prop_assert_eq!(p.down(&p.up(&down)), down);
        let closure = p.down(&up);
        prop_assert!(b.is_subset(&closure));
        prop_assert_eq!(p.down(&p.up(&closure)), closure.clone());
        let mut bigger = b.clone();
        bigger.union_with(&b2);
        prop_assert!(p.up(&bigger).is_subset(&up));
        prop_assert!(closure.is_subset(&p.down(&p.up(&bigger))));
    }
}
