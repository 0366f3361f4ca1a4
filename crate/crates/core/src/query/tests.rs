use super::*;

const MOVIES: &str = include_str!("../../fixtures/movies.kb");

fn movies() -> Reasoner {
    Reasoner::new(KnowledgeBase::parse(MOVIES).unwrap()).unwrap()
}

fn yes(r: &Reasoner, q: &str) -> bool {
    r.ask_text(q).unwrap().as_bool().unwrap()
}

fn names(r: &Reasoner, q: &str) -> Vec<String> {
    r.ask_text(q).unwrap().names().unwrap().to_vec()
}

#[test]
fn relational_lookups() {
    let r = movies();
    assert!(yes(&r, "rel m3 I f4"));
    assert!(!yes(&r, "rel m1 I f2"));
    assert_eq!(names(&r, "list-related m3 I"), ["f4", "f6"]);
    assert!(names(&r, "list-related m2 I").is_empty());
    assert_eq!(names(&r, "list-related m3 Rbox1"), ["f3"]);
    assert_eq!(names(&r, "list-related Rdia2 m3"), ["f3"]);
    assert_eq!(r.saturations(), 1);
}

#[test]
fn unknown_names_are_errors() {
    let r = Reasoner::new(KnowledgeBase::default()).unwrap();
    let t = Term::RelI(Individual::object("a"), Individual::feature("x"));
    assert_eq!(r.ask(&Query::Rel(t)), Err(QueryError::UnknownName("a".into())));
    assert!(matches!(
        movies().ask_text("rel m9 I f1"),
        Err(QueryError::UnknownName(_))
    ));
}

#[test]
fn membership() {
    let r = movies();
    assert!(yes(&r, "member m4 : IM"));
    assert!(yes(&r, "member f1 :: GM"));
    assert_eq!(r.saturations(), 1);
    // neither concept occurs in the ABox, so each needs its own run
    assert!(!yes(&r, "member m4 : FDM"));
    assert!(!yes(&r, "member m3 : box2 dia1 RM"));
    assert_eq!(r.saturations(), 3);
}

#[test]
fn member_lists() {
    let r = movies();
    assert_eq!(names(&r, "list-members DM"), ["m3"]);
    assert_eq!(names(&r, "list-members intent RDM"), ["f4"]);
    assert!(names(&r, "list-members Unmentioned").is_empty());
}

#[test]
fn subsumption() {
    let r = movies();
    assert!(yes(&r, "subsume box2 RDM sub box2 DM"));
    assert!(yes(&r, "subsume GM sub GM"));
    assert!(!yes(&r, "subsume GM sub FM"));
}

#[test]
fn disjunctions() {
    let r = movies();
    assert!(yes(&r, "disj m4 : FDM ; m4 : IM"));
    assert!(!yes(&r, "disj m2 : GM ; m2 : FM"));
    assert_eq!(yes(&r, "disj m3 I f4"), yes(&r, "rel m3 I f4"));
    assert!(matches!(
        r.ask_text("disj not m1 I f2"),
        Err(QueryError::Unsupported(_))
    ));
}

#[test]
fn negative_relational_is_syntactic() {
    let r = movies();
    assert!(!yes(&r, "neg m3 Rbox1 f4"));
    assert!(yes(&r, "neg m1 Rbox1 f6"));
    assert!(yes(&r, "neg not m1 I f2"));
    assert_eq!(r.saturations(), 0);
}

#[test]
fn negative_membership() {
    let r = movies();
    let a = r.ask_text("neg m1 : box2 dia1 RM").unwrap();
    assert_eq!(a.as_bool(), Some(true));
    assert_eq!(a.certificate.unwrap().kind, CertificateKind::Clash);
    assert!(yes(&r, "neg m2 : EUM"));

    let d = Concept::atom("D");
    let a_d = Individual::class_object(d);
    let mut kb = KnowledgeBase::default();
    kb.insert(Assertion::Pos(Term::MemberObj(a_d, d)));
    let r = Reasoner::new(kb).unwrap();
    assert_eq!(r.ask(&Query::NegMember(a_d, d)).unwrap().as_bool(), Some(false));
}

#[test]
fn negative_subsumption() {
    let r = movies();
    assert!(matches!(r.ask_text("neg DM sub DM"), Err(QueryError::Unsupported(_))));
    assert!(matches!(r.ask_text("neg RDM sub F"), Err(QueryError::Unsupported(_))));
    assert!(matches!(
        r.ask_text("neg GM and FM sub F"),
        Err(QueryError::Unsupported(_))
    ));
    let micro = Reasoner::new(KnowledgeBase::parse("obj a. a : GM. not a : F.").unwrap()).unwrap();
    assert!(yes(&micro, "neg GM sub F"));
    let empty = Reasoner::new(KnowledgeBase::default()).unwrap();
    assert!(!yes(&empty, "neg GM sub F"));
}

#[test]
fn separation_and_differentiation() {
    let r = movies();
    assert!(yes(&r, "sep m4 m2"));
    assert!(!yes(&r, "sep Rbox1 I m4"));
    assert!(!yes(&r, "sep m1 m1"));
    let dif = r.ask_text("dif m2 m4").unwrap();
    assert_eq!(dif.as_bool(), Some(true));
    let labels: Vec<String> = dif
        .certificate
        .unwrap()
        .steps
        .iter()
        .map(|s| s.rule.to_string())
        .collect();
    assert_eq!(labels, ["create", "∧A", "I", "SA(m4,m2)", "¬b"]);
    assert!(!yes(&r, "dif m1 m1"));
    // no role forces a difference: merging the two movies is consistent
    assert!(!yes(&r, "identity m1 m3"));
    assert!(yes(&r, "identity m2 m4"));
    assert!(matches!(
        r.ask_text("sep I Rbox1 m4"),
        Err(QueryError::Rule(RuleError::Unsupported(_)))
    ));
}

#[test]
fn equivalence() {
    let kb = |t: &str| KnowledgeBase::parse(t).unwrap().abox;
    let r = Reasoner::new(KnowledgeBase::default()).unwrap();
    let a = kb("obj b. b : D and E.");
    let b = kb("obj b. b : D. b : E. b : D and E.");
    assert_eq!(r.ask(&Query::Equivalence(a.clone(), b)).unwrap().as_bool(), Some(true));
    assert_eq!(r.ask(&Query::Equivalence(a.clone(), a)).unwrap().as_bool(), Some(true));
    let (d, e) = (kb("obj b. b : D."), kb("obj b. b : E."));
    assert_eq!(r.ask(&Query::Equivalence(d, e)).unwrap().as_bool(), Some(false));
    let m = movies();
    let abox = m.kb().abox.clone();
    assert_eq!(
        m.ask(&Query::Equivalence(abox.clone(), abox)).unwrap().as_bool(),
        Some(true)
    );
}

#[test]
fn inconsistent_kb() {
    let r = Reasoner::new(KnowledgeBase::parse("obj b. feat y. b : D. not b : D. b I y.").unwrap()).unwrap();
    assert!(!r.is_consistent().unwrap());
    assert_eq!(r.ask_text("rel b I y"), Err(QueryError::Inconsistent));
}

#[test]
fn answer_json() {
    let r = movies();
    let a = r.ask_text("list-related m3 I").unwrap();
    let v = serde_json::to_value(&a).unwrap();
    assert_eq!(v["answer"], serde_json::json!(["f4", "f6"]));
    assert_eq!(v["query"], "m3 I ?");
}
