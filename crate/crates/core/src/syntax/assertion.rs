use std::fmt;

use indexmap::IndexSet;

use super::concept::{Concept, Role, RoleIndex};
use super::individual::Individual;
use super::DepthProfile;

/// A positive ABox term.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// `b I y`
    RelI(Individual, Individual),
    /// `b R□_i y`
    RelBox(Individual, RoleIndex, Individual),
    /// `y R◇_i b`
    RelDiamond(Individual, RoleIndex, Individual),
    /// `b : C`
    MemberObj(Individual, Concept),
    /// `y :: C`
    MemberFeat(Individual, Concept),
}

impl Term {
    /// Builds the relational term `lhs role rhs` in surface order.
    pub fn relation(lhs: Individual, role: Role, rhs: Individual) -> Term {
        match role {
            Role::I => Term::RelI(lhs, rhs),
            Role::Box(i) => Term::RelBox(lhs, i, rhs),
            Role::Diamond(i) => Term::RelDiamond(lhs, i, rhs),
        }
    }

    pub fn member(ind: Individual, c: Concept) -> Term {
        match ind.sort() {
            super::Sort::Object => Term::MemberObj(ind, c),
            super::Sort::Feature => Term::MemberFeat(ind, c),
        }
    }

    pub fn is_relational(self) -> bool {
        !matches!(self, Term::MemberObj(..) | Term::MemberFeat(..))
    }

    pub fn role(self) -> Option<Role> {
        match self {
            Term::RelI(..) => Some(Role::I),
            Term::RelBox(_, i, _) => Some(Role::Box(i)),
            Term::RelDiamond(_, i, _) => Some(Role::Diamond(i)),
            _ => None,
        }
    }

    pub fn concept(self) -> Option<Concept> {
        match self {
            Term::MemberObj(_, c) | Term::MemberFeat(_, c) => Some(c),
            _ => None,
        }
    }

    /// Individuals in surface order.
    pub fn individuals(self) -> Vec<Individual> {
        match self {
            Term::RelI(l, r) | Term::RelBox(l, _, r) | Term::RelDiamond(l, _, r) => vec![l, r],
            Term::MemberObj(b, _) | Term::MemberFeat(b, _) => vec![b],
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::RelI(b, y) => write!(f, "{b} I {y}"),
            Term::RelBox(b, i, y) => write!(f, "{b} Rbox{i} {y}"),
            Term::RelDiamond(y, i, b) => write!(f, "{y} Rdia{i} {b}"),
            Term::MemberObj(b, c) => write!(f, "{b} : {c}"),
            Term::MemberFeat(y, c) => write!(f, "{y} :: {c}"),
        }
    }
}

/// A term or its negation. Negation never nests.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Assertion {
    Pos(Term),
    Neg(Term),
}

impl Assertion {
    pub fn term(self) -> Term {
        match self {
            Assertion::Pos(t) | Assertion::Neg(t) => t,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Assertion::Neg(_))
    }

    pub fn negated(self) -> Assertion {
        match self {
            Assertion::Pos(t) => Assertion::Neg(t),
            Assertion::Neg(t) => Assertion::Pos(t),
        }
    }
}

impl From<Term> for Assertion {
    fn from(t: Term) -> Self {
        Assertion::Pos(t)
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Pos(t) => write!(f, "{t}"),
            Assertion::Neg(t) => write!(f, "not {t}"),
        }
    }
}

impl serde::Serialize for Assertion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type AssertionSet = IndexSet<Assertion>;

/// All concepts occurring in membership assertions (positive or negative),
/// closed under subconcepts, children before parents.
pub fn abox_concepts<'a>(abox: impl IntoIterator<Item = &'a Assertion>) -> IndexSet<Concept> {
    let mut out = IndexSet::new();
    for a in abox {
        if let Some(c) = a.term().concept() {
            c.collect_subconcepts(&mut out);
        }
    }
    out
}

pub fn occurs_in<'a>(c: Concept, abox: impl IntoIterator<Item = &'a Assertion>) -> bool {
    abox.into_iter()
        .filter_map(|a| a.term().concept())
        .any(|top| top == c || top.subconcepts().contains(&c))
}

/// Largest modal depth of any concept in the ABox.
pub fn abox_depth<'a>(abox: impl IntoIterator<Item = &'a Assertion>) -> DepthProfile {
    abox.into_iter()
        .filter_map(|a| a.term().concept())
        .fold(DepthProfile::ZERO, |acc, c| acc.max(c.depth()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(n: &str) -> Concept {
        Concept::atom(n)
    }

    #[test]
    fn occurrence() {
        let m4 = Individual::object("m4");
        let c = Concept::meet(Concept::join(at("GM"), at("FM")), at("C"));
        let abox: AssertionSet = [Assertion::Pos(Term::MemberObj(m4, c))].into_iter().collect();
        assert!(occurs_in(Concept::join(at("GM"), at("FM")), &abox));
        assert!(occurs_in(at("FM"), &abox));
        assert!(!occurs_in(at("D"), &AssertionSet::new()));
        // negated memberships count as well
        let neg: AssertionSet = [Assertion::Neg(Term::MemberObj(m4, at("Z")))].into_iter().collect();
        assert!(occurs_in(at("Z"), &neg));
    }

    #[test]
    fn display() {
        let m3 = Individual::object("m3");
        let f3 = Individual::feature("f3");
        assert_eq!(Assertion::Pos(Term::RelBox(m3, 1, f3)).to_string(), "m3 Rbox1 f3");
        assert_eq!(
            Assertion::Neg(Term::RelDiamond(f3, 2, m3)).to_string(),
            "not f3 Rdia2 m3"
        );
        assert_eq!(Assertion::Pos(Term::MemberFeat(f3, at("DM"))).to_string(), "f3 :: DM");
    }

    #[test]
    fn depth_of_abox() {
        let b = Individual::object("b");
        let abox: AssertionSet = [
            Assertion::Pos(Term::MemberObj(b, Concept::boxed(1, Concept::boxed(1, at("D"))))),
            Assertion::Neg(Term::MemberObj(b, Concept::diamond(2, at("D")))),
        ]
        .into_iter()
        .collect();
        assert_eq!(abox_depth(&abox), DepthProfile::new(2, 1));
    }
}
