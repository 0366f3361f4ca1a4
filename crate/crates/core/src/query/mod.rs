//! Query answering over a knowledge base.
//!
//! Positive queries are lookups in one cached completion. Negative
//! membership, negative subsumption and separation queries each run their
//! own saturation, seeded from the unravelled input ABox.

mod parse;

use std::borrow::Cow;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::kb::{KnowledgeBase, ParseError, TBoxAxiom};
use crate::syntax::{Assertion, AssertionSet, Concept, Individual, Role, Sort, Term};
use crate::tableau::{
    saturate, Completion, ExtraRule, RuleError, RuleSet, SaturationConfig, SaturationError, StepView,
};
use crate::unravel::{unravel, TBoxError, Unraveled};

pub use parse::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown individual `{0}`")]
    UnknownName(String),
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("the knowledge base is inconsistent")]
    Inconsistent,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    TBox(#[from] TBoxError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Names on the left of the relation (the anchor is on the right).
    Left,
    Right,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    Extent,
    Intent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    /// A positive relational term.
    Rel(Term),
    ListRel {
        anchor: Individual,
        role: Role,
        side: Side,
    },
    Member(Individual, Concept),
    ListMembers(Concept, Extension),
    Subsume(Concept, Concept),
    /// Positive assertions, true when one of them is entailed.
    Disjunctive(Vec<Assertion>),
    NegRel(Term),
    NegMember(Individual, Concept),
    NegSubsume(Concept, Concept),
    Equivalence(AssertionSet, AssertionSet),
    Separation(ExtraRule),
    Differentiation {
        left: Individual,
        right: Individual,
        role: Role,
    },
    Identity(Individual, Individual),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Rel(t) => write!(f, "{t}"),
            Query::ListRel {
                anchor,
                role,
                side: Side::Right,
            } => write!(f, "{anchor} {role} ?"),
            Query::ListRel {
                anchor,
                role,
                side: Side::Left,
            } => write!(f, "? {role} {anchor}"),
            Query::Member(i, c) => write!(f, "{}", Term::member(*i, *c)),
            Query::ListMembers(c, Extension::Extent) => write!(f, "? : {c}"),
            Query::ListMembers(c, Extension::Intent) => write!(f, "? :: {c}"),
            Query::Subsume(a, b) => write!(f, "{a} sub {b}"),
            Query::Disjunctive(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "{}", parts.join(" ; "))
            }
            Query::NegRel(t) => write!(f, "not {t}"),
            Query::NegMember(i, c) => write!(f, "not {}", Term::member(*i, *c)),
            Query::NegSubsume(a, b) => write!(f, "not {a} sub {b}"),
            Query::Equivalence(a, b) => write!(f, "equiv({} terms, {} terms)", a.len(), b.len()),
            Query::Separation(e) => write!(f, "{e}"),
            Query::Differentiation {
                left,
                right,
                role: Role::I,
            } => write!(f, "Dif({left},{right})"),
            Query::Differentiation { left, right, role } => write!(f, "Dif({left},{right},{role})"),
            Query::Identity(a, b) => write!(f, "Distinct({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Names(Vec<String>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    /// Derivation of the witnessing facts in the completion.
    Derivation,
    /// Derivation of a clash.
    Clash,
    /// The witnessing assertions are in the input ABox.
    Input,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub facts: Vec<Assertion>,
    pub steps: Vec<StepView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Answer {
    pub query: String,
    pub answer: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl Answer {
    pub fn as_bool(&self) -> Option<bool> {
        match self.answer {
            Value::Bool(b) => Some(b),
            Value::Names(_) => None,
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        match &self.answer {
            Value::Names(n) => Some(n),
            Value::Bool(_) => None,
        }
    }
}

/// A knowledge base prepared for querying.
pub struct Reasoner {
    kb: KnowledgeBase,
    unraveled: Unraveled,
    config: SaturationConfig,
    base: OnceLock<Result<Completion, SaturationError>>,
    saturations: AtomicUsize,
    include_synthetic: bool,
}

fn clash_certificate(c: &Completion) -> Option<Certificate> {
    let clash = c.clash()?;
    Some(Certificate {
        kind: CertificateKind::Clash,
        facts: vec![clash.positive, clash.negative],
        steps: c.clash_certificate().unwrap_or_default(),
    })
}

fn derivation(c: &Completion, facts: Vec<Assertion>) -> Certificate {
    let mut steps: Vec<StepView> = facts.iter().flat_map(|&f| c.derivation(f)).collect();
    steps.sort_by_key(|s| s.step);
    steps.dedup_by_key(|s| s.step);
    Certificate {
        kind: CertificateKind::Derivation,
        facts,
        steps,
    }
}

impl Reasoner {
    pub fn new(kb: KnowledgeBase) -> Result<Reasoner, QueryError> {
        Reasoner::with_config(kb, SaturationConfig::default())
    }

    pub fn with_config(kb: KnowledgeBase, config: SaturationConfig) -> Result<Reasoner, QueryError> {
        let unraveled = unravel(&kb)?;
        Ok(Reasoner {
            kb,
            unraveled,
            config,
            base: OnceLock::new(),
            saturations: AtomicUsize::new(0),
            include_synthetic: false,
        })
    }

    /// Let naming queries return synthetic individuals too.
    pub fn include_synthetic(mut self, yes: bool) -> Self {
        self.include_synthetic = yes;
        self
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    /// The unravelled input ABox.
    pub fn abox(&self) -> &AssertionSet {
        &self.unraveled.abox
    }

    pub fn config(&self) -> &SaturationConfig {
        &self.config
    }

    /// Number of saturation runs performed so far.
    pub fn saturations(&self) -> usize {
        self.saturations.load(Ordering::Relaxed)
    }

    /// Replaces defined names by their definitions.
    pub fn expand(&self, c: Concept) -> Concept {
        self.unraveled.definitions.expand(c)
    }

    fn run(&self, abox: &AssertionSet, rules: &RuleSet) -> Result<Completion, SaturationError> {
        self.saturations.fetch_add(1, Ordering::Relaxed);
        saturate(abox, rules, &self.config)
    }

    /// The completion of the input ABox under the base rules, computed once.
    pub fn completion(&self) -> Result<&Completion, QueryError> {
        self.base
            .get_or_init(|| self.run(&self.unraveled.abox, &RuleSet::base()))
            .as_ref()
            .map_err(|e| e.clone().into())
    }

    pub fn is_consistent(&self) -> Result<bool, QueryError> {
        Ok(self.completion()?.clash().is_none())
    }

    fn consistent(&self) -> Result<&Completion, QueryError> {
        let c = self.completion()?;
        if c.clash().is_some() {
            return Err(QueryError::Inconsistent);
        }
        Ok(c)
    }

    /// Resolves a name of the KB.
    pub fn individual(&self, name: &str) -> Result<Individual, QueryError> {
        self.kb
            .individual(name)
            .ok_or_else(|| QueryError::UnknownName(name.to_owned()))
    }

    fn known(&self, ind: Individual) -> Result<(), QueryError> {
        let declared = ind.name().is_some_and(|n| self.kb.individual(n.as_str()) == Some(ind));
        if declared
            || self
                .unraveled
                .abox
                .iter()
                .any(|a| a.term().individuals().contains(&ind))
        {
            Ok(())
        } else {
            Err(QueryError::UnknownName(ind.to_string()))
        }
    }

    /// The base completion when every concept in `cs` occurs in it,
    /// otherwise a fresh run with creation terms for `cs` added.
    fn completion_with(&self, cs: &[Concept]) -> Result<Cow<'_, Completion>, QueryError> {
        let base = self.consistent()?;
        if cs.iter().all(|c| base.occurring().contains(c)) {
            return Ok(Cow::Borrowed(base));
        }
        let mut abox = self.unraveled.abox.clone();
        for &c in cs {
            let (a_c, x_c) = Individual::classifiers(c);
            abox.insert(Assertion::Pos(Term::MemberObj(a_c, c)));
            abox.insert(Assertion::Pos(Term::MemberFeat(x_c, c)));
        }
        Ok(Cow::Owned(self.run(&abox, &RuleSet::base())?))
    }

    fn visible(&self, ind: Individual) -> bool {
        self.include_synthetic || ind.is_named()
    }

    fn sorted_names(&self, inds: impl IntoIterator<Item = Individual>) -> Vec<String> {
        let mut names: Vec<String> = inds
            .into_iter()
            .filter(|&i| self.visible(i))
            .map(|i| i.to_string())
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn ask(&self, q: &Query) -> Result<Answer, QueryError> {
        let (answer, certificate) = match q {
            Query::Rel(t) => self.relational(*t)?,
            Query::ListRel { anchor, role, side } => self.list_related(*anchor, *role, *side)?,
            Query::Member(i, c) => self.membership(*i, *c)?,
            Query::ListMembers(c, e) => self.list_members(*c, *e)?,
            Query::Subsume(a, b) => self.subsumption(*a, *b)?,
            Query::Disjunctive(ts) => self.disjunctive(ts)?,
            Query::NegRel(t) => self.negative_relational(*t)?,
            Query::NegMember(i, c) => self.negative_membership(*i, *c)?,
            Query::NegSubsume(a, b) => self.negative_subsumption(*a, *b)?,
            Query::Equivalence(a, b) => self.equivalence(a, b)?,
            Query::Separation(e) => self.separation(&[*e])?,
            Query::Differentiation { left, right, role } => self.differentiation(*left, *right, *role)?,
            Query::Identity(a, b) => self.distinct(*a, *b)?,
        };
        Ok(Answer {
            query: q.to_string(),
            answer,
            certificate,
        })
    }

    fn relational(&self, t: Term) -> Result<(Value, Option<Certificate>), QueryError> {
        if !t.is_relational() {
            return Err(QueryError::Unsupported(format!("`{t}` is not a relational term")));
        }
        t.individuals().into_iter().try_for_each(|i| self.known(i))?;
        let c = self.consistent()?;
        let holds = c.contains_term(t);
        let cert = holds.then(|| derivation(c, vec![Assertion::Pos(t)]));
        Ok((Value::Bool(holds), cert))
    }

    fn list_related(
        &self,
        anchor: Individual,
        role: Role,
        side: Side,
    ) -> Result<(Value, Option<Certificate>), QueryError> {
        self.known(anchor)?;
        let c = self.consistent()?;
        let mut found = Vec::new();
        let mut facts = Vec::new();
        for t in c.positive_terms() {
            if t.role() != Some(role) {
                continue;
            }
            let (lhs, rhs) = match t {
                Term::RelI(b, y) | Term::RelBox(b, _, y) => (b, y),
                Term::RelDiamond(y, _, b) => (y, b),
                _ => continue,
            };
            let other = match side {
                Side::Right if lhs == anchor => rhs,
                Side::Left if rhs == anchor => lhs,
                _ => continue,
            };
            if self.visible(other) {
                found.push(other);
                facts.push(Assertion::Pos(t));
            }
        }
        let cert = derivation(c, facts);
        Ok((Value::Names(self.sorted_names(found)), Some(cert)))
    }

    fn membership_term(ind: Individual, c: Concept) -> Term {
        let (a_c, x_c) = Individual::classifiers(c);
        match ind.sort() {
            Sort::Object => Term::RelI(ind, x_c),
            Sort::Feature => Term::RelI(a_c, ind),
        }
    }

    fn membership(&self, ind: Individual, c: Concept) -> Result<(Value, Option<Certificate>), QueryError> {
        self.known(ind)?;
        let c = self.expand(c);
        let comp = self.completion_with(&[c])?;
        let witness = Reasoner::membership_term(ind, c);
        let holds = comp.contains_term(witness);
        let cert = holds.then(|| derivation(&comp, vec![Assertion::Pos(witness)]));
        Ok((Value::Bool(holds), cert))
    }

    fn list_members(&self, c: Concept, e: Extension) -> Result<(Value, Option<Certificate>), QueryError> {
        let c = self.expand(c);
        let comp = self.completion_with(&[c])?;
        let (a_c, x_c) = Individual::classifiers(c);
        let mut found = Vec::new();
        let mut facts = Vec::new();
        for t in comp.positive_terms() {
            let hit = match (e, t) {
                (Extension::Extent, Term::RelI(b, y)) if y == x_c => b,
                (Extension::Intent, Term::RelI(b, y)) if b == a_c => y,
                _ => continue,
            };
            if self.visible(hit) {
                found.push(hit);
                facts.push(Assertion::Pos(t));
            }
        }
        let cert = derivation(&comp, facts);
        Ok((Value::Names(self.sorted_names(found)), Some(cert)))
    }

    fn subsumption(&self, c1: Concept, c2: Concept) -> Result<(Value, Option<Certificate>), QueryError> {
        let (c1, c2) = (self.expand(c1), self.expand(c2));
        let comp = self.completion_with(&[c1, c2])?;
        let witness = Term::RelI(Individual::class_object(c1), Individual::class_feature(c2));
        let holds = comp.contains_term(witness);
        let cert = holds.then(|| derivation(&comp, vec![Assertion::Pos(witness)]));
        Ok((Value::Bool(holds), cert))
    }

    /// Entailment of a single assertion, dispatched on its shape.
    pub fn entails(&self, a: Assertion) -> Result<Answer, QueryError> {
        let q = match a {
            Assertion::Pos(t) if t.is_relational() => Query::Rel(t),
            Assertion::Neg(t) if t.is_relational() => Query::NegRel(t),
            Assertion::Pos(Term::MemberObj(i, c) | Term::MemberFeat(i, c)) => Query::Member(i, c),
            Assertion::Neg(Term::MemberObj(i, c) | Term::MemberFeat(i, c)) => Query::NegMember(i, c),
            _ => unreachable!("every term is relational or a membership"),
        };
        self.ask(&q)
    }

    fn disjunctive(&self, ts: &[Assertion]) -> Result<(Value, Option<Certificate>), QueryError> {
        if let Some(n) = ts.iter().find(|t| t.is_negative()) {
            return Err(QueryError::Unsupported(format!("negated disjunct `{n}`")));
        }
        for &t in ts {
            let a = self.entails(t)?;
            if a.as_bool() == Some(true) {
                return Ok((Value::Bool(true), a.certificate));
            }
        }
        Ok((Value::Bool(false), None))
    }

    /// Decided on the input ABox alone; never saturates.
    fn negative_relational(&self, t: Term) -> Result<(Value, Option<Certificate>), QueryError> {
        if !t.is_relational() {
            return Err(QueryError::Unsupported(format!("`{t}` is not a relational term")));
        }
        t.individuals().into_iter().try_for_each(|i| self.known(i))?;
        let neg = Assertion::Neg(t);
        let holds = self.unraveled.abox.contains(&neg);
        let cert = holds.then(|| Certificate {
            kind: CertificateKind::Input,
            facts: vec![neg],
            steps: Vec::new(),
        });
        Ok((Value::Bool(holds), cert))
    }

    fn inconsistent_with(
        &self,
        abox: &AssertionSet,
        rules: &RuleSet,
    ) -> Result<(Value, Option<Certificate>), QueryError> {
        self.consistent()?;
        let c = self.run(abox, rules)?;
        let cert = clash_certificate(&c);
        Ok((Value::Bool(cert.is_some()), cert))
    }

    fn negative_membership(&self, ind: Individual, c: Concept) -> Result<(Value, Option<Certificate>), QueryError> {
        self.known(ind)?;
        let mut abox = self.unraveled.abox.clone();
        abox.insert(Assertion::Pos(Term::member(ind, self.expand(c))));
        self.inconsistent_with(&abox, &RuleSet::base())
    }

    fn negative_subsumption(&self, c1: Concept, c2: Concept) -> Result<(Value, Option<Certificate>), QueryError> {
        if !c1.is_atomic() {
            return Err(QueryError::Unsupported(format!(
                "left-hand side `{c1}` must be an atomic concept"
            )));
        }
        let (e1, e2) = (self.expand(c1), self.expand(c2));
        let sub2 = e2.subconcepts();
        if let Some(shared) = e1.subconcepts().into_iter().find(|s| sub2.contains(s)) {
            return Err(QueryError::Unsupported(format!("`{shared}` occurs on both sides")));
        }
        let mut kb = self.kb.clone();
        kb.tbox.push(TBoxAxiom::subsume(c1, c2));
        let un = match unravel(&kb) {
            Ok(u) => u,
            Err(e @ (TBoxError::MultipleDefinition(_) | TBoxError::Cycle(_) | TBoxError::NonAtomicDefinition(_))) => {
                return Err(QueryError::Unsupported(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        self.inconsistent_with(&un.abox, &RuleSet::base())
    }

    fn equivalence(&self, a1: &AssertionSet, a2: &AssertionSet) -> Result<(Value, Option<Certificate>), QueryError> {
        let side = |abox: &AssertionSet| -> Result<Reasoner, QueryError> {
            let mut kb = self.kb.clone();
            kb.abox = AssertionSet::new();
            for &a in abox {
                kb.insert(a);
            }
            Reasoner::with_config(kb, self.config)
        };
        let (r1, r2) = (side(a1)?, side(a2)?);
        let entails_all = |r: &Reasoner, other: &AssertionSet| -> Result<bool, QueryError> {
            for &t in other {
                match r.entails(t) {
                    Ok(a) if a.as_bool() == Some(true) => {}
                    Ok(_) | Err(QueryError::UnknownName(_)) => return Ok(false),
                    Err(e) => return Err(e),
                }
            }
            Ok(true)
        };
        let holds = entails_all(&r1, a2)? && entails_all(&r2, a1)?;
        self.saturations
            .fetch_add(r1.saturations() + r2.saturations(), Ordering::Relaxed);
        Ok((Value::Bool(holds), None))
    }

    fn separation(&self, extras: &[ExtraRule]) -> Result<(Value, Option<Certificate>), QueryError> {
        let abox = &self.unraveled.abox;
        let mut rules = RuleSet::base();
        for &e in extras {
            rules = rules.add_extra_rule(e, abox)?;
        }
        self.inconsistent_with(abox, &rules)
    }

    fn sep_rule(from: Individual, to: Individual, role: Role) -> ExtraRule {
        match from.sort() {
            Sort::Object => ExtraRule::SepObj { from, to, role },
            Sort::Feature => ExtraRule::SepFeat { from, to, role },
        }
    }

    /// One run with the inheritance rules in both directions.
    fn differentiation(
        &self,
        left: Individual,
        right: Individual,
        role: Role,
    ) -> Result<(Value, Option<Certificate>), QueryError> {
        if left.sort() != right.sort() {
            return Err(RuleError::Sort {
                name: right.to_string(),
                expected: left.sort(),
            }
            .into());
        }
        self.separation(&[
            Reasoner::sep_rule(right, left, role),
            Reasoner::sep_rule(left, right, role),
        ])
    }

    /// Differentiation by `I` or any declared role.
    fn distinct(&self, a: Individual, b: Individual) -> Result<(Value, Option<Certificate>), QueryError> {
        for role in self.kb.roles.roles() {
            let (v, cert) = self.differentiation(a, b, role)?;
            if v == Value::Bool(true) {
                return Ok((v, cert));
            }
        }
        Ok((Value::Bool(false), None))
    }

    /// Parses and answers a textual query.
    pub fn ask_text(&self, text: &str) -> Result<Answer, QueryError> {
        let q = parse_query(text, self)?;
        self.ask(&q)
    }
}

#[cfg(test)]
mod tests;
