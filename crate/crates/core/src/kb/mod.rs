//! Knowledge bases and their text format.
//!
//! ```text
//! roles box 2 dia 2.
//! obj m3 m4.
//! feat f3 x_empty.
//! RDM equiv RM and DM.
//! IM sub GM or FM.
//! m3 : box2 RDM.
//! m3 Rbox1 f3.
//! not m4 I x_empty.
//! ```

mod lexer;
mod parser;
mod writer;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Assertion, AssertionSet, Concept, Individual, Role, RoleIndex, Sort};

pub use parser::{parse_assertion, parse_concept};
pub use writer::SerializeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: `{name}` is used as {found} but is {expected}")]
    Sort {
        line: usize,
        col: usize,
        name: String,
        expected: Sort,
        found: Sort,
    },
    #[error("{line}:{col}: role {role} is not declared")]
    UndeclaredRole { line: usize, col: usize, role: Role },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match *self {
            ParseError::Syntax { line, col, .. }
            | ParseError::Sort { line, col, .. }
            | ParseError::UndeclaredRole { line, col, .. } => (line, col),
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleDecl {
    pub boxes: RoleIndex,
    pub diamonds: RoleIndex,
}

impl RoleDecl {
    pub fn declares(self, role: Role) -> bool {
        match role {
            Role::I => true,
            Role::Box(i) => (1..=self.boxes).contains(&i),
            Role::Diamond(i) => (1..=self.diamonds).contains(&i),
        }
    }

    /// Every role the declaration provides, `I` first.
    pub fn roles(self) -> Vec<Role> {
        let mut out = vec![Role::I];
        out.extend((1..=self.boxes).map(Role::Box));
        out.extend((1..=self.diamonds).map(Role::Diamond));
        out
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    Equiv,
    Subsume,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct TBoxAxiom {
    pub kind: AxiomKind,
    pub lhs: Concept,
    pub rhs: Concept,
}

impl TBoxAxiom {
    pub fn equiv(lhs: Concept, rhs: Concept) -> Self {
        TBoxAxiom {
            kind: AxiomKind::Equiv,
            lhs,
            rhs,
        }
    }

    pub fn subsume(lhs: Concept, rhs: Concept) -> Self {
        TBoxAxiom {
            kind: AxiomKind::Subsume,
            lhs,
            rhs,
        }
    }
}

impl fmt::Display for TBoxAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            AxiomKind::Equiv => "equiv",
            AxiomKind::Subsume => "sub",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

/// An ABox together with a TBox. Equality ignores assertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    /// Object names, declared or used.
    pub objects: BTreeSet<String>,
    /// Feature names, declared or used.
    pub features: BTreeSet<String>,
    pub roles: RoleDecl,
    pub abox: AssertionSet,
    pub tbox: Vec<TBoxAxiom>,
}

impl KnowledgeBase {
    pub fn parse(text: &str) -> Result<KnowledgeBase, ParseError> {
        parser::parse_kb(text)
    }

    pub fn to_text(&self) -> Result<String, SerializeError> {
        writer::write_kb(self)
    }

    /// The named individual called `name`, if the KB knows it.
    pub fn individual(&self, name: &str) -> Option<Individual> {
        if self.objects.contains(name) {
            Some(Individual::object(name))
        } else if self.features.contains(name) {
            Some(Individual::feature(name))
        } else {
            None
        }
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.individual(name).map(Individual::sort)
    }

    /// Atomic concept names used anywhere in the KB.
    pub fn atom_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let concepts = self
            .abox
            .iter()
            .filter_map(|a| a.term().concept())
            .chain(self.tbox.iter().flat_map(|ax| [ax.lhs, ax.rhs]));
        for c in concepts {
            out.extend(c.atoms().into_iter().map(|n| n.as_str().to_owned()));
        }
        out
    }

    /// Adds an assertion, registering its named individuals and widening the
    /// role declaration as needed.
    pub fn insert(&mut self, a: Assertion) {
        for ind in a.term().individuals() {
            if let Some(n) = ind.name() {
                let set = match ind.sort() {
                    Sort::Object => &mut self.objects,
                    Sort::Feature => &mut self.features,
                };
                set.insert(n.as_str().to_owned());
            }
        }
        self.widen_roles(a.term().role());
        if let Some(c) = a.term().concept() {
            let (b, d) = c.max_roles();
            self.roles.boxes = self.roles.boxes.max(b);
            self.roles.diamonds = self.roles.diamonds.max(d);
        }
        self.abox.insert(a);
    }

    fn widen_roles(&mut self, role: Option<Role>) {
        match role {
            Some(Role::Box(i)) => self.roles.boxes = self.roles.boxes.max(i),
            Some(Role::Diamond(i)) => self.roles.diamonds = self.roles.diamonds.max(i),
            _ => {}
        }
    }
}
