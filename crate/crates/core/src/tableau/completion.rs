use std::collections::BTreeMap;

use indexmap::{IndexMap, IndexSet};
use rustc_hash::FxHashSet;
use serde::Serialize;

use super::rules::{Rule, RuleSet};
use crate::syntax::{Assertion, AssertionSet, Concept, Individual, Sort, Term};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Input,
    /// Index into [`Completion::steps`].
    Step(usize),
}

/// One rule application that added at least one new assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<Assertion>,
    /// Only the conclusions that were new when the rule fired.
    pub conclusions: Vec<Assertion>,
}

/// A relational term together with its negation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Clash {
    pub positive: Assertion,
    pub negative: Assertion,
}

/// A step as shown in a certificate: conclusions are restricted to the
/// ones the certificate needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepView {
    pub step: usize,
    #[serde(serialize_with = "ser_display")]
    pub rule: Rule,
    pub rule_id: &'static str,
    pub premises: Vec<Assertion>,
    pub conclusions: Vec<Assertion>,
}

fn ser_display<S: serde::Serializer>(r: &Rule, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// The saturated assertion set with provenance.
#[derive(Clone, Debug)]
pub struct Completion {
    pub(crate) facts: IndexMap<Assertion, Origin>,
    pub(crate) steps: Vec<Step>,
    pub(crate) clash: Option<Clash>,
    pub(crate) occurring: IndexSet<Concept>,
    pub(crate) input: AssertionSet,
    pub(crate) rules: RuleSet,
    pub(crate) processed: usize,
}

impl Completion {
    pub fn contains(&self, a: &Assertion) -> bool {
        self.facts.contains_key(a)
    }

    pub fn contains_term(&self, t: Term) -> bool {
        self.facts.contains_key(&Assertion::Pos(t))
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// All assertions in insertion order.
    pub fn assertions(&self) -> impl Iterator<Item = Assertion> + '_ {
        self.facts.keys().copied()
    }

    pub fn assertion_set(&self) -> AssertionSet {
        self.facts.keys().copied().collect()
    }

    pub fn positive_terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.facts.keys().filter_map(|a| match a {
            Assertion::Pos(t) => Some(*t),
            Assertion::Neg(_) => None,
        })
    }

    pub fn origin(&self, a: &Assertion) -> Option<Origin> {
        self.facts.get(a).copied()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn clash(&self) -> Option<Clash> {
        self.clash
    }

    pub fn is_consistent(&self) -> bool {
        self.clash.is_none()
    }

    /// Concepts occurring in the input, children before parents.
    pub fn occurring(&self) -> &IndexSet<Concept> {
        &self.occurring
    }

    pub fn input(&self) -> &AssertionSet {
        &self.input
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Number of worklist entries processed.
    pub fn processed(&self) -> usize {
        self.processed
    }

    /// Every individual named in some assertion, objects and features
    /// separately, in first-appearance order.
    pub fn individuals(&self) -> (IndexSet<Individual>, IndexSet<Individual>) {
        let mut objs = IndexSet::new();
        let mut feats = IndexSet::new();
        for a in self.facts.keys() {
            for ind in a.term().individuals() {
                match ind.sort() {
                    Sort::Object => objs.insert(ind),
                    Sort::Feature => feats.insert(ind),
                };
            }
        }
        (objs, feats)
    }

    /// Number of steps per rule, keyed by rule label.
    pub fn stats(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for s in &self.steps {
            *out.entry(s.rule.to_string()).or_insert(0) += 1;
        }
        out
    }

    fn collect_support(&self, target: Assertion, steps: &mut Vec<usize>, needed: &mut FxHashSet<Assertion>) {
        let mut stack = vec![target];
        while let Some(a) = stack.pop() {
            if !needed.insert(a) {
                continue;
            }
            if let Some(Origin::Step(i)) = self.facts.get(&a) {
                if !steps.contains(i) {
                    steps.push(*i);
                }
                stack.extend(self.steps[*i].premises.iter().copied());
            }
        }
    }

    /// The steps needed to derive `target`, in execution order.
    pub fn derivation(&self, target: Assertion) -> Vec<StepView> {
        let mut steps = Vec::new();
        let mut needed = FxHashSet::default();
        self.collect_support(target, &mut steps, &mut needed);
        steps.sort_unstable();
        steps.into_iter().map(|i| self.view(i, &needed)).collect()
    }

    /// Derivation of the clash: first the positive term, then the steps
    /// still missing for its negation.
    pub fn clash_certificate(&self) -> Option<Vec<StepView>> {
        let clash = self.clash?;
        let mut needed = FxHashSet::default();
        let mut pos_steps = Vec::new();
        self.collect_support(clash.positive, &mut pos_steps, &mut needed);
        let mut neg_steps = Vec::new();
        self.collect_support(clash.negative, &mut neg_steps, &mut needed);
        pos_steps.sort_unstable();
        neg_steps.retain(|s| !pos_steps.contains(s));
        neg_steps.sort_unstable();
        Some(
            pos_steps
                .into_iter()
                .chain(neg_steps)
                .map(|i| self.view(i, &needed))
                .collect(),
        )
    }

    fn view(&self, i: usize, needed: &FxHashSet<Assertion>) -> StepView {
        let s = &self.steps[i];
        StepView {
            step: i,
            rule: s.rule,
            rule_id: s.rule.id(),
            premises: s.premises.clone(),
            conclusions: s.conclusions.iter().copied().filter(|c| needed.contains(c)).collect(),
        }
    }

    /// Every step in execution order.
    pub fn step_views(&self) -> Vec<StepView> {
        let needed: FxHashSet<Assertion> = self.facts.keys().copied().collect();
        (0..self.steps.len()).map(|i| self.view(i, &needed)).collect()
    }

    /// Every step as newline-delimited JSON.
    pub fn trace_ndjson(&self) -> String {
        let mut out = String::new();
        for v in self.step_views() {
            out.push_str(&serde_json::to_string(&v).expect("serializable"));
            out.push('\n');
        }
        out
    }
}
