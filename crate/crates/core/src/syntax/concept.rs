use std::fmt;
use std::sync::LazyLock;

use indexmap::IndexSet;

use super::intern::{Interner, Name};
use super::DepthProfile;

/// Index of a modal role within its family (`R□_i` or `R◇_i`), starting at 1.
pub type RoleIndex = u16;

/// A role name: the incidence relation or one member of a modal family.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    I,
    Box(RoleIndex),
    Diamond(RoleIndex),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::I => f.write_str("I"),
            Role::Box(i) => write!(f, "Rbox{i}"),
            Role::Diamond(i) => write!(f, "Rdia{i}"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConceptKind {
    Atomic(Name),
    Meet(Concept, Concept),
    Join(Concept, Concept),
    Box(RoleIndex, Concept),
    Diamond(RoleIndex, Concept),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    kind: ConceptKind,
    depth: DepthProfile,
    size: u64,
}

static CONCEPTS: LazyLock<Interner<Node>> = LazyLock::new(Interner::new);

/// A hash-consed concept expression. Copying is free and equality is
/// structural.
///
/// The grammar has no top or bottom concept; meets and joins are binary.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Concept(u32);

impl Concept {
    fn make(kind: ConceptKind) -> Concept {
        Concept(CONCEPTS.intern(node_for(kind)))
    }

    pub fn atom(name: impl Into<Name>) -> Concept {
        Concept::make(ConceptKind::Atomic(name.into()))
    }

    pub fn meet(l: Concept, r: Concept) -> Concept {
        Concept::make(ConceptKind::Meet(l, r))
    }

    pub fn join(l: Concept, r: Concept) -> Concept {
        Concept::make(ConceptKind::Join(l, r))
    }

    pub fn boxed(role: RoleIndex, c: Concept) -> Concept {
        Concept::make(ConceptKind::Box(role, c))
    }

    pub fn diamond(role: RoleIndex, c: Concept) -> Concept {
        Concept::make(ConceptKind::Diamond(role, c))
    }

    /// Returns the concept with this shape if it has already been built,
    /// without interning a new one.
    pub fn existing(kind: ConceptKind) -> Option<Concept> {
        let node = node_for(kind);
        CONCEPTS.read(|t| t.lookup(&node)).map(Concept)
    }

    pub fn kind(self) -> ConceptKind {
        CONCEPTS.read(|t| t.get(self.0).kind)
    }

    pub fn depth(self) -> DepthProfile {
        CONCEPTS.read(|t| t.get(self.0).depth)
    }

    /// Number of nodes in the expression tree (saturating).
    pub fn size(self) -> u64 {
        CONCEPTS.read(|t| t.get(self.0).size)
    }

    pub fn as_atom(self) -> Option<Name> {
        match self.kind() {
            ConceptKind::Atomic(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_atomic(self) -> bool {
        self.as_atom().is_some()
    }

    /// All subconcepts, including `self`, children before parents.
    pub fn subconcepts(self) -> IndexSet<Concept> {
        let mut out = IndexSet::new();
        self.collect_subconcepts(&mut out);
        out
    }

    pub(crate) fn collect_subconcepts(self, out: &mut IndexSet<Concept>) {
        if out.contains(&self) {
            return;
        }
        for child in kind_children(self.kind()).into_iter().flatten() {
            child.collect_subconcepts(out);
        }
        out.insert(self);
    }

    /// Atomic names occurring in the concept.
    pub fn atoms(self) -> IndexSet<Name> {
        self.subconcepts().into_iter().filter_map(Concept::as_atom).collect()
    }

    /// Membership in the least set closed under: `□C` for atomic `C`,
    /// `□C` for □-leading `C`, `C ∧ C1` or `C1 ∧ C` for □-leading `C`, and
    /// `C1 ∨ C2` when both disjuncts are □-leading.
    pub fn is_box_leading(self) -> bool {
        match self.kind() {
            ConceptKind::Box(_, c) => c.is_atomic() || c.is_box_leading(),
            ConceptKind::Meet(l, r) => l.is_box_leading() || r.is_box_leading(),
            ConceptKind::Join(l, r) => l.is_box_leading() && r.is_box_leading(),
            ConceptKind::Atomic(_) | ConceptKind::Diamond(..) => false,
        }
    }

    /// Dual of [`Concept::is_box_leading`].
    pub fn is_diamond_leading(self) -> bool {
        match self.kind() {
            ConceptKind::Diamond(_, c) => c.is_atomic() || c.is_diamond_leading(),
            ConceptKind::Join(l, r) => l.is_diamond_leading() || r.is_diamond_leading(),
            ConceptKind::Meet(l, r) => l.is_diamond_leading() && r.is_diamond_leading(),
            ConceptKind::Atomic(_) | ConceptKind::Box(..) => false,
        }
    }

    /// Replaces atoms according to `f`, rebuilding only what changes.
    pub fn substitute(self, f: &mut impl FnMut(Name) -> Option<Concept>) -> Concept {
        match self.kind() {
            ConceptKind::Atomic(n) => f(n).unwrap_or(self),
            ConceptKind::Meet(l, r) => Concept::meet(l.substitute(f), r.substitute(f)),
            ConceptKind::Join(l, r) => Concept::join(l.substitute(f), r.substitute(f)),
            ConceptKind::Box(i, c) => Concept::boxed(i, c.substitute(f)),
            ConceptKind::Diamond(i, c) => Concept::diamond(i, c.substitute(f)),
        }
    }

    /// Largest modal role index used, per family.
    pub fn max_roles(self) -> (RoleIndex, RoleIndex) {
        self.subconcepts().into_iter().fold((0, 0), |(b, d), c| match c.kind() {
            ConceptKind::Box(i, _) => (b.max(i), d),
            ConceptKind::Diamond(i, _) => (b, d.max(i)),
            _ => (b, d),
        })
    }

    fn precedence(self) -> u8 {
        match self.kind() {
            ConceptKind::Join(..) => 1,
            ConceptKind::Meet(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(0, f)?;
            return f.write_str(")");
        }
        match self.kind() {
            ConceptKind::Atomic(n) => f.write_str(n.as_str()),
            // binary connectives associate to the right
            ConceptKind::Meet(l, r) => {
                l.fmt_at(3, f)?;
                f.write_str(" and ")?;
                r.fmt_at(2, f)
            }
            ConceptKind::Join(l, r) => {
                l.fmt_at(2, f)?;
                f.write_str(" or ")?;
                r.fmt_at(1, f)
            }
            ConceptKind::Box(i, c) => {
                write!(f, "box{i} ")?;
                c.fmt_at(3, f)
            }
            ConceptKind::Diamond(i, c) => {
                write!(f, "dia{i} ")?;
                c.fmt_at(3, f)
            }
        }
    }
}

fn node_for(kind: ConceptKind) -> Node {
    let (depth, size) = match kind {
        ConceptKind::Atomic(_) => (DepthProfile::ZERO, 1),
        ConceptKind::Meet(l, r) | ConceptKind::Join(l, r) => {
            let (dl, dr) = (l.depth(), r.depth());
            (
                DepthProfile::new(dl.box_depth.max(dr.box_depth), dl.diamond_depth.max(dr.diamond_depth)),
                l.size().saturating_add(r.size()).saturating_add(1),
            )
        }
        ConceptKind::Box(_, c) => {
            let d = c.depth();
            (
                DepthProfile::new(d.box_depth + 1, d.diamond_depth),
                c.size().saturating_add(1),
            )
        }
        ConceptKind::Diamond(_, c) => {
            let d = c.depth();
            (
                DepthProfile::new(d.box_depth, d.diamond_depth + 1),
                c.size().saturating_add(1),
            )
        }
    };
    Node { kind, depth, size }
}

fn kind_children(kind: ConceptKind) -> [Option<Concept>; 2] {
    match kind {
        ConceptKind::Atomic(_) => [None, None],
        ConceptKind::Meet(l, r) | ConceptKind::Join(l, r) => [Some(l), Some(r)],
        ConceptKind::Box(_, c) | ConceptKind::Diamond(_, c) => [Some(c), None],
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(0, f)
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Concept({self})")
    }
}

impl PartialOrd for Concept {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by printed form, so sorted output does not depend on interning
/// order.
impl Ord for Concept {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        self.to_string().cmp(&other.to_string())
    }
}
