use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use indexmap::IndexMap;
use proptest::prelude::*;

use super::*;
use crate::kb::KnowledgeBase;
use crate::syntax::{AssertionSet, Concept};
use crate::tableau::check_consistency;
use crate::unravel::unravel;

const MOVIES: &str = include_str!("../../fixtures/movies.kb");

fn movie_completion() -> (KnowledgeBase, Completion) {
    let kb = KnowledgeBase::parse(MOVIES).unwrap();
    let abox = unravel(&kb).unwrap().abox;
    (kb, check_consistency(&abox).unwrap().into_completion())
}

fn bits(n: usize, on: &[usize]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    on.iter().for_each(|&k| s.insert(k));
    s
}

#[test]
fn movie_model_is_sound() {
    let (kb, c) = movie_completion();
    let m = build_model(&c).unwrap();
    m.check_i_compatibility().unwrap();
    for t in c.positive_terms() {
        assert!(m.satisfies(Assertion::Pos(t)).unwrap(), "{t}");
    }
    for a in &kb.abox {
        let a = unravel(&kb).unwrap().definitions.expand_assertion(*a);
        assert!(m.satisfies(a).unwrap(), "{a}");
    }
    let (objs, _) = c.individuals();
    for &concept in c.occurring() {
        let ext = m.interpret(concept).unwrap();
        let x_c = Individual::class_feature(concept);
        for &b in &objs {
            let fact = c.contains_term(Term::RelI(b, x_c));
            assert_eq!(fact, ext.extent.contains(m.object_index(b).unwrap()), "{b} {concept}");
        }
        let p = m.polarity();
        assert_eq!(p.up(&ext.extent), ext.intent);
        assert_eq!(p.down(&ext.intent), ext.extent);
    }
}

#[test]
fn movie_diamond_two() {
    let (kb, c) = movie_completion();
    let m = build_model(&c).unwrap();
    let r = &m.diamonds()[&2];
    let pairs: Vec<(usize, usize)> = r.pairs().collect();
    let m3 = m.object_index(kb.individual("m3").unwrap()).unwrap();
    let f3 = m.feature_index(kb.individual("f3").unwrap()).unwrap();
    assert_eq!(pairs, [(m3, f3)]);
}

#[test]
fn clash_is_rejected() {
    let kb = KnowledgeBase::parse("obj b. b : D. not b : D.").unwrap();
    let c = check_consistency(&kb.abox).unwrap().into_completion();
    assert_eq!(build_model(&c).unwrap_err(), ModelError::ClashPresent);
}

#[test]
fn empty_model() {
    let c = check_consistency(&AssertionSet::new()).unwrap().into_completion();
    let m = build_model(&c).unwrap();
    assert_eq!(m.polarity().num_objects(), 0);
    assert_eq!(m.polarity().num_features(), 0);
    assert_eq!(m.to_csv(), "\n");
}

fn two_by_one(incidence: &[(usize, usize)], boxes: &[(usize, usize)]) -> Model {
    let p = Polarity::from_pairs(
        vec!["a".into(), "a2".into()],
        vec!["x".into()],
        incidence.iter().copied(),
    );
    let mut r = Relation::empty(2, 1);
    boxes.iter().for_each(|&(a, x)| r.insert(a, x));
    Model::from_parts(
        p,
        BTreeMap::from([(1, r)]),
        BTreeMap::new(),
        BTreeMap::new(),
        IndexMap::new(),
        IndexMap::new(),
    )
}

#[test]
fn i_compatibility_cases() {
    let bad = two_by_one(&[], &[(0, 0)]);
    let err = bad.check_i_compatibility().unwrap_err();
    assert_eq!(err.family, "Rbox1^(0)[x]");
    assert!(two_by_one(&[], &[]).check_i_compatibility().is_ok());
    // with full incidence the empty preimage closes to everything
    assert!(two_by_one(&[(0, 0), (1, 0)], &[]).check_i_compatibility().is_err());
    assert!(two_by_one(&[(0, 0), (1, 0)], &[(0, 0), (1, 0)])
        .check_i_compatibility()
        .is_ok());
}

#[test]
fn unknown_atom_and_name() {
    let (_, c) = movie_completion();
    let m = build_model(&c).unwrap();
    assert!(matches!(
        m.interpret(Concept::atom("Nope")),
        Err(ModelError::UnknownAtom(_))
    ));
    let t = Term::RelI(Individual::object("ghost"), Individual::feature("f1"));
    assert!(matches!(
        m.satisfies(Assertion::Pos(t)),
        Err(ModelError::UnknownName(_))
    ));
}

#[test]
fn meet_is_idempotent() {
    let (_, c) = movie_completion();
    let m = build_model(&c).unwrap();
    let d = Concept::atom("DM");
    assert_eq!(m.interpret(Concept::meet(d, d)).unwrap(), m.interpret(d).unwrap());
}

#[test]
fn export_shapes() {
    let (_, c) = movie_completion();
    let m = build_model(&c).unwrap();
    let doc = m.document();
    assert_eq!(
        doc.incidence["m3"].len(),
        m.polarity()
            .row(m.object_index(Individual::object("m3")).unwrap())
            .count_ones(..)
    );
    assert_eq!(doc.diamonds["2"]["f3"], ["m3"]);
    let csv = m.to_csv();
    assert_eq!(csv.lines().count(), m.polarity().num_objects() + 1);
    let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
    assert!(v["atoms"]["GM"]["extent"].is_array());
}

fn kb_abox(text: &str) -> AssertionSet {
    KnowledgeBase::parse(text).unwrap().abox
}

#[test]
fn search_trivial_cases() {
    let lim = SearchLimits {
        max_objects: 2,
        max_features: 2,
        budget: 1_000_000,
    };
    assert!(bounded_model_search(&kb_abox("obj b. b : D. not b : D."), lim)
        .unwrap()
        .is_none());
    let m = bounded_model_search(&kb_abox("obj a. feat x. a I x."), lim)
        .unwrap()
        .unwrap();
    assert_eq!((m.polarity().num_objects(), m.polarity().num_features()), (1, 1));
    let tiny = SearchLimits { budget: 3, ..lim };
    assert!(matches!(
        bounded_model_search(
            &kb_abox("roles box 1 dia 0. obj a b. feat x. a : box1 D. not b I x."),
            tiny
        ),
        Err(ModelError::BudgetExceeded { .. })
    ));
}

#[test]
fn search_finds_modal_model() {
    let abox = kb_abox("roles box 1 dia 1. obj a b. feat x. a : box1 D. x :: D. not b Rbox1 x. x Rdia1 b.");
    let m = bounded_model_search(&abox, SearchLimits::default()).unwrap().unwrap();
    m.check_i_compatibility().unwrap();
    for a in &abox {
        assert!(m.satisfies(*a).unwrap(), "{a}");
    }
}

fn random_model(n: usize, m: usize, inc: u64, roles: [u8; 2], atoms: [u64; 2]) -> Model {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..m).map(move |x| (a, x)))
        .filter(|&(a, x)| inc >> (a * m + x) & 1 == 1)
        .collect();
    let p = Polarity::from_pairs(
        (0..n).map(|a| format!("a{a}")).collect(),
        (0..m).map(|x| format!("x{x}")).collect(),
        pairs.iter().copied(),
    );
    // incidence itself and the full relation are always compatible
    let rel = |kind: u8| {
        let mut r = Relation::empty(n, m);
        for a in 0..n {
            for x in 0..m {
                if kind % 2 == 1 || p.incident(a, x) {
                    r.insert(a, x);
                }
            }
        }
        r
    };
    let atom = |seed: u64| {
        let mut b = FixedBitSet::with_capacity(n);
        (0..n).filter(|k| seed >> k & 1 == 1).for_each(|k| b.insert(k));
        let intent = p.up(&b);
        Extension {
            extent: p.down(&intent),
            intent,
        }
    };
    let atoms = BTreeMap::from([(Name::new("D"), atom(atoms[0])), (Name::new("E"), atom(atoms[1]))]);
    Model::from_parts(
        p.clone(),
        BTreeMap::from([(1, rel(roles[0]))]),
        BTreeMap::from([(1, rel(roles[1]))]),
        atoms,
        IndexMap::new(),
        IndexMap::new(),
    )
}

fn arb_concept() -> impl Strategy<Value = Concept> {
    let leaf = prop_oneof![Just(Concept::atom("D")), Just(Concept::atom("E"))];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Concept::meet(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Concept::join(l, r)),
            inner.clone().prop_map(|c| Concept::boxed(1, c)),
            inner.prop_map(|c| Concept::diamond(1, c)),
        ]
    })
}

proptest! {
    #[test]
    fn interpretations_are_stable(
        n in 1usize..5, m in 1usize..5, inc: u64, roles: [u8; 2], atoms: [u64; 2], c in arb_concept()
    ) {
        let model = random_model(n, m, inc, roles, atoms);
        prop_assert!(model.check_i_compatibility().is_ok());
        let e = model.interpret(c).unwrap();
        let p = model.polarity();
        prop_assert_eq!(&p.up(&e.extent), &e.intent);
        prop_assert_eq!(&p.down(&e.intent), &e.extent);
    }

    #[test]
    fn join_by_enumeration(n in 1usize..5, m in 1usize..5, inc: u64, atoms: [u64; 2]) {
        let model = random_model(n, m, inc, [0, 0], atoms);
        let d = model.interpret(Concept::atom("D")).unwrap();
        let e = model.interpret(Concept::atom("E")).unwrap();
        let j = model.interpret(Concept::join(Concept::atom("D"), Concept::atom("E"))).unwrap();
        let p = model.polarity();
        for a in 0..n {
            let expected = (0..m).all(|x| !(d.intent.contains(x) && e.intent.contains(x)) || p.incident(a, x));
            prop_assert_eq!(j.extent.contains(a), expected);
        }
        let _ = bits(0, &[]);
    }
}
