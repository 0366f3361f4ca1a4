use std::collections::VecDeque;

use indexmap::{IndexMap, IndexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::completion::{Clash, Completion, Origin, Step};
use super::rules::{ExtraRule, Rule, RuleSet};
use super::{SaturationConfig, SaturationError, Schedule};
use crate::syntax::{
    abox_concepts, Assertion, AssertionSet, Concept, ConceptKind, Individual, Role, RoleIndex, Sort, Term,
};

type Parents = FxHashMap<Concept, Vec<(Concept, Concept, Concept)>>;

/// Semi-naive fixpoint: each fact is joined against the indexes of facts
/// popped before it, so every premise pair is seen exactly once.
pub(crate) struct Engine<'a> {
    config: &'a SaturationConfig,
    rules: RuleSet,
    input: AssertionSet,
    occurring: IndexSet<Concept>,
    /// child -> (parent, left, right) for meets/joins occurring in the input.
    meet_parents: Parents,
    join_parents: Parents,
    facts: IndexMap<Assertion, Origin>,
    steps: Vec<Step>,
    queue: VecDeque<usize>,
    rng: Option<ChaCha8Rng>,
    objs_of: FxHashMap<Concept, Vec<Individual>>,
    feats_of: FxHashMap<Concept, Vec<Individual>>,
    /// `C -> (i, b)` for each popped `b : □_i C`.
    box_of: FxHashMap<Concept, Vec<(RoleIndex, Individual)>>,
    /// `C -> (i, y)` for each popped `y :: ◇_i C`.
    dia_of: FxHashMap<Concept, Vec<(RoleIndex, Individual)>>,
    clash: Option<Clash>,
    processed: usize,
}

fn pos(t: Term) -> Assertion {
    Assertion::Pos(t)
}

impl<'a> Engine<'a> {
    pub(crate) fn new(abox: &AssertionSet, rules: &RuleSet, config: &'a SaturationConfig) -> Self {
        let occurring = abox_concepts(abox);
        let mut meet_parents = Parents::default();
        let mut join_parents = Parents::default();
        for &c in &occurring {
            let (map, l, r) = match c.kind() {
                ConceptKind::Meet(l, r) => (&mut meet_parents, l, r),
                ConceptKind::Join(l, r) => (&mut join_parents, l, r),
                _ => continue,
            };
            map.entry(l).or_default().push((c, l, r));
            if r != l {
                map.entry(r).or_default().push((c, l, r));
            }
        }
        let rng = match config.schedule {
            Schedule::Fifo => None,
            Schedule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Engine {
            config,
            rules: rules.clone(),
            input: abox.clone(),
            occurring,
            meet_parents,
            join_parents,
            facts: IndexMap::new(),
            steps: Vec::new(),
            queue: VecDeque::new(),
            rng,
            objs_of: FxHashMap::default(),
            feats_of: FxHashMap::default(),
            box_of: FxHashMap::default(),
            dia_of: FxHashMap::default(),
            clash: None,
            processed: 0,
        }
    }

    pub(crate) fn run(mut self) -> Result<Completion, SaturationError> {
        for a in self.input.clone() {
            self.insert(a, Origin::Input);
        }
        for c in self.occurring.clone() {
            let (a_c, x_c) = Individual::classifiers(c);
            self.emit(
                Rule::Create,
                &[],
                &[pos(Term::MemberObj(a_c, c)), pos(Term::MemberFeat(x_c, c))],
            );
        }
        while !(self.config.stop_on_clash && self.clash.is_some()) {
            let Some(idx) = self.next() else { break };
            self.processed += 1;
            let (&a, _) = self.facts.get_index(idx).expect("queued fact");
            self.process(a);
            if self.steps.len() > self.config.max_steps {
                return Err(SaturationError::ResourceLimit {
                    limit: self.config.max_steps,
                });
            }
        }
        if self.clash.is_none() {
            self.clash = self.facts.keys().find_map(|a| match *a {
                Assertion::Pos(t) if t.is_relational() => {
                    let neg = Assertion::Neg(t);
                    self.facts.contains_key(&neg).then_some(Clash {
                        positive: *a,
                        negative: neg,
                    })
                }
                _ => None,
            });
        }
        Ok(Completion {
            facts: self.facts,
            steps: self.steps,
            clash: self.clash,
            occurring: self.occurring,
            input: self.input,
            rules: self.rules,
            processed: self.processed,
        })
    }

    fn next(&mut self) -> Option<usize> {
        match &mut self.rng {
            None => self.queue.pop_front(),
            Some(rng) => {
                if self.queue.is_empty() {
                    return None;
                }
                let i = rng.gen_range(0..self.queue.len());
                self.queue.swap_remove_back(i)
            }
        }
    }

    fn insert(&mut self, a: Assertion, origin: Origin) -> bool {
        if self.facts.contains_key(&a) {
            return false;
        }
        let (idx, _) = self.facts.insert_full(a, origin);
        self.queue.push_back(idx);
        if self.clash.is_none() && a.term().is_relational() {
            let other = a.negated();
            if self.facts.contains_key(&other) {
                let (positive, negative) = if a.is_negative() { (other, a) } else { (a, other) };
                self.clash = Some(Clash { positive, negative });
            }
        }
        true
    }

    fn emit(&mut self, rule: Rule, premises: &[Assertion], conclusions: &[Assertion]) {
        if conclusions.iter().all(|c| self.facts.contains_key(c)) {
            return;
        }
        let step = self.steps.len();
        let mut fresh = Vec::with_capacity(conclusions.len());
        for &c in conclusions {
            if self.insert(c, Origin::Step(step)) {
                fresh.push(c);
            }
        }
        self.steps.push(Step {
            rule,
            premises: premises.to_vec(),
            conclusions: fresh,
        });
    }

    fn has(&self, t: Term) -> bool {
        self.facts.contains_key(&pos(t))
    }

    fn process(&mut self, a: Assertion) {
        match a {
            Assertion::Neg(Term::MemberObj(b, c)) => {
                let x_c = Individual::class_feature(c);
                self.emit(Rule::NegB, &[a], &[Assertion::Neg(Term::RelI(b, x_c))]);
            }
            Assertion::Neg(Term::MemberFeat(y, c)) => {
                let a_c = Individual::class_object(c);
                self.emit(Rule::NegX, &[a], &[Assertion::Neg(Term::RelI(a_c, y))]);
            }
            Assertion::Neg(_) => {}
            Assertion::Pos(Term::MemberObj(b, c)) => self.object_member(a, b, c),
            Assertion::Pos(Term::MemberFeat(y, c)) => self.feature_member(a, y, c),
            Assertion::Pos(Term::RelI(b, y)) => self.incidence(a, b, y),
            Assertion::Pos(Term::RelBox(b, i, y)) => self.box_relation(a, b, i, y),
            Assertion::Pos(Term::RelDiamond(y, i, b)) => self.diamond_relation(a, y, i, b),
        }
    }

    fn object_member(&mut self, a: Assertion, b: Individual, c: Concept) {
        self.objs_of.entry(c).or_default().push(b);
        for y in self.feats_of.get(&c).cloned().unwrap_or_default() {
            self.emit(Rule::Basic, &[a, pos(Term::MemberFeat(y, c))], &[pos(Term::RelI(b, y))]);
        }
        match c.kind() {
            ConceptKind::Meet(l, r) => {
                self.emit(
                    Rule::MeetA,
                    &[a],
                    &[pos(Term::MemberObj(b, l)), pos(Term::MemberObj(b, r))],
                );
            }
            ConceptKind::Box(i, d) => {
                self.box_of.entry(d).or_default().push((i, b));
                for y in self.feats_of.get(&d).cloned().unwrap_or_default() {
                    self.emit(
                        Rule::Box,
                        &[a, pos(Term::MemberFeat(y, d))],
                        &[pos(Term::RelBox(b, i, y))],
                    );
                }
            }
            _ => {}
        }
        for (i, y) in self.dia_of.get(&c).cloned().unwrap_or_default() {
            self.emit(
                Rule::Diamond,
                &[pos(Term::MemberFeat(y, Concept::diamond(i, c))), a],
                &[pos(Term::RelDiamond(y, i, b))],
            );
        }
        for (parent, l, r) in self.meet_parents.get(&c).cloned().unwrap_or_default() {
            if self.has(Term::MemberObj(b, l)) && self.has(Term::MemberObj(b, r)) {
                self.emit(
                    Rule::MeetAInv,
                    &[pos(Term::MemberObj(b, l)), pos(Term::MemberObj(b, r))],
                    &[pos(Term::MemberObj(b, parent))],
                );
            }
        }
    }

    fn feature_member(&mut self, a: Assertion, y: Individual, c: Concept) {
        self.feats_of.entry(c).or_default().push(y);
        for b in self.objs_of.get(&c).cloned().unwrap_or_default() {
            self.emit(Rule::Basic, &[pos(Term::MemberObj(b, c)), a], &[pos(Term::RelI(b, y))]);
        }
        match c.kind() {
            ConceptKind::Join(l, r) => {
                self.emit(
                    Rule::JoinX,
                    &[a],
                    &[pos(Term::MemberFeat(y, l)), pos(Term::MemberFeat(y, r))],
                );
            }
            ConceptKind::Diamond(i, d) => {
                self.dia_of.entry(d).or_default().push((i, y));
                for b in self.objs_of.get(&d).cloned().unwrap_or_default() {
                    self.emit(
                        Rule::Diamond,
                        &[a, pos(Term::MemberObj(b, d))],
                        &[pos(Term::RelDiamond(y, i, b))],
                    );
                }
            }
            _ => {}
        }
        for (i, b) in self.box_of.get(&c).cloned().unwrap_or_default() {
            self.emit(
                Rule::Box,
                &[pos(Term::MemberObj(b, Concept::boxed(i, c))), a],
                &[pos(Term::RelBox(b, i, y))],
            );
        }
        for (parent, l, r) in self.join_parents.get(&c).cloned().unwrap_or_default() {
            if self.has(Term::MemberFeat(y, l)) && self.has(Term::MemberFeat(y, r)) {
                self.emit(
                    Rule::JoinXInv,
                    &[pos(Term::MemberFeat(y, l)), pos(Term::MemberFeat(y, r))],
                    &[pos(Term::MemberFeat(y, parent))],
                );
            }
        }
    }

    fn incidence(&mut self, a: Assertion, b: Individual, y: Individual) {
        if let Some((i, y2)) = y.as_box() {
            self.emit(Rule::BoxY, &[a], &[pos(Term::RelBox(b, i, y2))]);
        }
        if let Some((i, y2)) = y.as_black_square() {
            self.emit(Rule::BlackSquareY, &[a], &[pos(Term::RelDiamond(y2, i, b))]);
        }
        if let Some((i, b2)) = b.as_diamond() {
            self.emit(Rule::DiamondB, &[a], &[pos(Term::RelDiamond(y, i, b2))]);
        }
        if let Some((i, b2)) = b.as_black_diamond() {
            self.emit(Rule::BlackDiamondB, &[a], &[pos(Term::RelBox(b2, i, y))]);
        }
        if let Some(c) = y.classified() {
            self.emit(Rule::AppendX, &[a], &[pos(Term::MemberObj(b, c))]);
        }
        if let Some(c) = b.classified() {
            self.emit(Rule::AppendA, &[a], &[pos(Term::MemberFeat(y, c))]);
        }
        for e in self.rules.extras().to_vec() {
            let out = match e {
                ExtraRule::SepObj {
                    from,
                    to,
                    role: Role::I,
                } if from == b => Term::RelI(to, y),
                ExtraRule::SepFeat {
                    from,
                    to,
                    role: Role::I,
                } if from == y => Term::RelI(b, to),
                _ => continue,
            };
            self.emit(Rule::Extra(e), &[a], &[pos(out)]);
        }
    }

    fn box_relation(&mut self, a: Assertion, b: Individual, i: RoleIndex, y: Individual) {
        self.emit(
            Rule::AdjBox,
            &[a],
            &[
                pos(Term::RelI(Individual::black_diamond(i, b), y)),
                pos(Term::RelI(b, Individual::boxed(i, y))),
            ],
        );
        for e in self.rules.extras().to_vec() {
            let out = match e {
                ExtraRule::SepObj {
                    from,
                    to,
                    role: Role::Box(j),
                } if from == b && j == i => Term::RelBox(to, i, y),
                ExtraRule::SepFeat {
                    from,
                    to,
                    role: Role::Box(j),
                } if from == y && j == i => Term::RelBox(b, i, to),
                ExtraRule::BoxToDiamond { box_role, dia_role, at } if box_role == i && at == b => {
                    Term::RelDiamond(y, dia_role, b)
                }
                ExtraRule::BoxToI { role, at } if role == i && at == b => Term::RelI(b, y),
                _ => continue,
            };
            self.emit(Rule::Extra(e), &[a], &[pos(out)]);
        }
    }

    fn diamond_relation(&mut self, a: Assertion, y: Individual, i: RoleIndex, b: Individual) {
        debug_assert_eq!(b.sort(), Sort::Object);
        self.emit(
            Rule::AdjDiamond,
            &[a],
            &[
                pos(Term::RelI(Individual::diamond(i, b), y)),
                pos(Term::RelI(b, Individual::black_square(i, y))),
            ],
        );
        for e in self.rules.extras().to_vec() {
            let out = match e {
                ExtraRule::SepObj {
                    from,
                    to,
                    role: Role::Diamond(j),
                } if from == b && j == i => Term::RelDiamond(y, i, to),
                ExtraRule::SepFeat {
                    from,
                    to,
                    role: Role::Diamond(j),
                } if from == y && j == i => Term::RelDiamond(to, i, b),
                ExtraRule::DiamondToBox { dia_role, box_role, at } if dia_role == i && at == y => {
                    Term::RelBox(b, box_role, y)
                }
                ExtraRule::DiamondToI { role, at } if role == i && at == y => Term::RelI(b, y),
                _ => continue,
            };
            self.emit(Rule::Extra(e), &[a], &[pos(out)]);
        }
    }
}
