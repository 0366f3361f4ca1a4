//! Turning an acyclic TBox into plain ABox assertions by substitution.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use indexmap::IndexMap;
use thiserror::Error;

use crate::kb::{AxiomKind, KnowledgeBase, TBoxAxiom};
use crate::syntax::{Assertion, AssertionSet, Concept, Name, Term};

pub const DEFAULT_SIZE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TBoxError {
    #[error("axiom `{0}` is not a subsumption")]
    NotSubsume(String),
    #[error("definition `{0}` does not have an atomic left-hand side")]
    NonAtomicDefinition(String),
    #[error("concept `{0}` is defined more than once")]
    MultipleDefinition(String),
    #[error("cyclic definitions: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("unraveled ABox has {size} nodes, over the limit of {limit}")]
    SizeLimit { size: u64, limit: u64 },
}

/// First of `C`, `C1`, `C2`, ... not in `taken`.
pub fn fresh_concept_name(taken: &BTreeSet<String>) -> String {
    if !taken.contains("C") {
        return "C".to_owned();
    }
    (1u64..)
        .map(|i| format!("C{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded")
}

/// `C1 ⊑ C2` becomes `C1 ≡ C2 ∧ F` for a name `F` outside `taken`, which is
/// then added to `taken`.
pub fn rewrite_gci(ax: &TBoxAxiom, taken: &mut BTreeSet<String>) -> Result<TBoxAxiom, TBoxError> {
    if ax.kind != AxiomKind::Subsume {
        return Err(TBoxError::NotSubsume(ax.to_string()));
    }
    let fresh = fresh_concept_name(taken);
    let atom = Concept::atom(fresh.as_str());
    taken.insert(fresh);
    Ok(TBoxAxiom::equiv(ax.lhs, Concept::meet(ax.rhs, atom)))
}

/// Orders the defined names so that every name comes after the defined
/// names its definition uses. Ties go to the earlier axiom.
pub fn check_acyclic(tbox: &[TBoxAxiom]) -> Result<Vec<Name>, TBoxError> {
    let mut defs: IndexMap<Name, Concept> = IndexMap::new();
    for ax in tbox {
        let Some(name) = ax.lhs.as_atom().filter(|_| ax.kind == AxiomKind::Equiv) else {
            return Err(TBoxError::NonAtomicDefinition(ax.to_string()));
        };
        if defs.insert(name, ax.rhs).is_some() {
            return Err(TBoxError::MultipleDefinition(name.to_string()));
        }
    }
    let uses: Vec<Vec<usize>> = defs
        .values()
        .map(|rhs| rhs.atoms().iter().filter_map(|a| defs.get_index_of(a)).collect())
        .collect();
    let n = defs.len();
    let mut pending: Vec<usize> = uses.iter().map(Vec::len).collect();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, us) in uses.iter().enumerate() {
        for &u in us {
            users[u].push(i);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| pending[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &u in &users[i] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    if order.len() < n {
        let start = (0..n).find(|&i| pending[i] > 0).expect("some name left");
        return Err(TBoxError::Cycle(find_cycle(start, &uses, &pending, &defs)));
    }
    Ok(order.into_iter().map(|i| *defs.get_index(i).unwrap().0).collect())
}

fn find_cycle(start: usize, uses: &[Vec<usize>], pending: &[usize], defs: &IndexMap<Name, Concept>) -> Vec<String> {
    // every unresolved name uses at least one other unresolved name
    let mut path = vec![start];
    loop {
        let cur = *path.last().unwrap();
        let next = *uses[cur]
            .iter()
            .find(|&&u| pending[u] > 0)
            .expect("stuck name has a stuck use");
        if let Some(pos) = path.iter().position(|&p| p == next) {
            return path[pos..]
                .iter()
                .map(|&i| defs.get_index(i).unwrap().0.to_string())
                .collect();
        }
        path.push(next);
    }
}

/// Fully expanded definitions of an acyclic TBox.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    expanded: IndexMap<Name, Concept>,
    /// GCIs after rewriting, in input order.
    pub axioms: Vec<TBoxAxiom>,
}

impl Definitions {
    /// Rewrites GCIs with fresh names not in `taken`, checks acyclicity and
    /// expands each definition in dependency order.
    pub fn build(tbox: &[TBoxAxiom], taken: &BTreeSet<String>) -> Result<Definitions, TBoxError> {
        let mut taken = taken.clone();
        let axioms = tbox
            .iter()
            .map(|ax| match ax.kind {
                AxiomKind::Subsume => rewrite_gci(ax, &mut taken),
                AxiomKind::Equiv => Ok(*ax),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let order = check_acyclic(&axioms)?;
        let rhs: IndexMap<Name, Concept> = axioms
            .iter()
            .map(|ax| (ax.lhs.as_atom().expect("checked"), ax.rhs))
            .collect();
        let mut expanded: IndexMap<Name, Concept> = IndexMap::new();
        for name in order {
            let body = rhs[&name].substitute(&mut |a| expanded.get(&a).copied());
            expanded.insert(name, body);
        }
        Ok(Definitions { expanded, axioms })
    }

    pub fn is_defined(&self, name: Name) -> bool {
        self.expanded.contains_key(&name)
    }

    pub fn definition(&self, name: Name) -> Option<Concept> {
        self.expanded.get(&name).copied()
    }

    /// Defined names in dependency order.
    pub fn order(&self) -> impl Iterator<Item = Name> + '_ {
        self.expanded.keys().copied()
    }

    /// Replaces every defined name in `c` by its expansion.
    pub fn expand(&self, c: Concept) -> Concept {
        if self.expanded.is_empty() {
            return c;
        }
        c.substitute(&mut |a| self.expanded.get(&a).copied())
    }

    pub fn expand_assertion(&self, a: Assertion) -> Assertion {
        let map = |t: Term| match t {
            Term::MemberObj(b, c) => Term::MemberObj(b, self.expand(c)),
            Term::MemberFeat(y, c) => Term::MemberFeat(y, self.expand(c)),
            other => other,
        };
        match a {
            Assertion::Pos(t) => Assertion::Pos(map(t)),
            Assertion::Neg(t) => Assertion::Neg(map(t)),
        }
    }
}

/// The ABox of a knowledge base with its TBox substituted in.
#[derive(Clone, Debug)]
pub struct Unraveled {
    pub abox: AssertionSet,
    pub definitions: Definitions,
}

pub fn unravel(kb: &KnowledgeBase) -> Result<Unraveled, TBoxError> {
    unravel_with_limit(kb, DEFAULT_SIZE_LIMIT)
}

/// As [`unravel`], failing once the expanded ABox exceeds `limit` concept
/// nodes (counted as trees, one extra per assertion).
pub fn unravel_with_limit(kb: &KnowledgeBase, limit: u64) -> Result<Unraveled, TBoxError> {
    let definitions = Definitions::build(&kb.tbox, &kb.atom_names())?;
    let mut abox = AssertionSet::with_capacity(kb.abox.len());
    let mut size: u64 = 0;
    for &a in &kb.abox {
        let e = definitions.expand_assertion(a);
        size = size.saturating_add(1 + e.term().concept().map_or(0, Concept::size));
        if size > limit {
            return Err(TBoxError::SizeLimit { size, limit });
        }
        abox.insert(e);
    }
    Ok(Unraveled { abox, definitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Individual;

    fn c(n: &str) -> Concept {
        Concept::atom(n)
    }

    fn names(v: &[Name]) -> Vec<&'static str> {
        v.iter().map(|n| n.as_str()).collect()
    }

    #[test]
    fn gci_rewrite() {
        let mut taken = BTreeSet::from(["IM".to_owned(), "EUM".to_owned()]);
        let ax = rewrite_gci(&TBoxAxiom::subsume(c("IM"), c("EUM")), &mut taken).unwrap();
        assert_eq!(ax, TBoxAxiom::equiv(c("IM"), Concept::meet(c("EUM"), c("C"))));
        let ax = rewrite_gci(&TBoxAxiom::subsume(c("D"), c("D")), &mut taken).unwrap();
        assert_eq!(ax, TBoxAxiom::equiv(c("D"), Concept::meet(c("D"), c("C1"))));
        assert!(matches!(
            rewrite_gci(&TBoxAxiom::equiv(c("D"), c("E")), &mut taken),
            Err(TBoxError::NotSubsume(_))
        ));
    }

    #[test]
    fn movie_order() {
        let tbox = vec![
            TBoxAxiom::equiv(c("EUM"), Concept::join(c("GM"), c("FM"))),
            TBoxAxiom::equiv(c("RDM"), Concept::meet(c("RM"), c("DM"))),
            TBoxAxiom::equiv(c("IM"), Concept::meet(c("EUM"), c("C"))),
            TBoxAxiom::equiv(
                c("FDM"),
                Concept::meet(Concept::boxed(1, c("DM")), Concept::boxed(2, c("DM"))),
            ),
        ];
        assert_eq!(names(&check_acyclic(&tbox).unwrap()), ["EUM", "RDM", "IM", "FDM"]);
        assert!(check_acyclic(&[]).unwrap().is_empty());
    }

    #[test]
    fn dependency_comes_first_even_when_written_later() {
        let tbox = vec![
            TBoxAxiom::equiv(c("A"), Concept::meet(c("B"), c("X"))),
            TBoxAxiom::equiv(c("B"), c("Y")),
        ];
        assert_eq!(names(&check_acyclic(&tbox).unwrap()), ["B", "A"]);
    }

    #[test]
    fn cycles() {
        let tbox = vec![TBoxAxiom::equiv(c("P"), Concept::boxed(1, c("P")))];
        assert_eq!(check_acyclic(&tbox), Err(TBoxError::Cycle(vec!["P".into()])));
        let tbox = vec![
            TBoxAxiom::equiv(c("Q"), c("Z")),
            TBoxAxiom::equiv(c("P"), c("R")),
            TBoxAxiom::equiv(c("R"), Concept::meet(c("S"), c("P"))),
        ];
        assert_eq!(
            check_acyclic(&tbox),
            Err(TBoxError::Cycle(vec!["P".into(), "R".into()]))
        );
    }

    #[test]
    fn definitional_shape() {
        let dup = vec![TBoxAxiom::equiv(c("P"), c("A")), TBoxAxiom::equiv(c("P"), c("B"))];
        assert_eq!(check_acyclic(&dup), Err(TBoxError::MultipleDefinition("P".into())));
        let complex = vec![TBoxAxiom::equiv(Concept::meet(c("A"), c("B")), c("C"))];
        assert!(matches!(
            check_acyclic(&complex),
            Err(TBoxError::NonAtomicDefinition(_))
        ));
    }

    #[test]
    fn unravel_substitutes_without_simplifying() {
        let kb =
            KnowledgeBase::parse("EUM equiv GM or FM. IM sub EUM. m4 : IM. x :: GM and IM. not m2 : EUM.").unwrap();
        let u = unravel(&kb).unwrap();
        let im = Concept::meet(Concept::join(c("GM"), c("FM")), c("C"));
        let m4 = Individual::object("m4");
        let x = Individual::feature("x");
        assert!(u.abox.contains(&Assertion::Pos(Term::MemberObj(m4, im))));
        assert!(u
            .abox
            .contains(&Assertion::Pos(Term::MemberFeat(x, Concept::meet(c("GM"), im)))));
        assert_eq!(u.definitions.expand(c("IM")), im);
    }

    #[test]
    fn empty_tbox_is_identity() {
        let kb = KnowledgeBase::parse("a : D and E. not a I y.").unwrap();
        assert_eq!(unravel(&kb).unwrap().abox, kb.abox);
    }

    #[test]
    fn size_limit() {
        // each level doubles the expansion
        let mut text = String::from("P0 equiv A and B.\n");
        for i in 1..30 {
            text.push_str(&format!("P{i} equiv P{} and P{}.\n", i - 1, i - 1));
        }
        text.push_str("a : P29.\n");
        let kb = KnowledgeBase::parse(&text).unwrap();
        assert!(matches!(unravel(&kb), Err(TBoxError::SizeLimit { .. })));
        assert!(unravel_with_limit(&kb, u64::MAX).is_ok());
    }
}
