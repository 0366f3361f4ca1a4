use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;

use super::concept::{Concept, ConceptKind, RoleIndex};
use super::intern::{Interner, Name};
use super::DepthProfile;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sort {
    Object,
    Feature,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Object => "object",
            Sort::Feature => "feature",
        })
    }
}

/// Shape of an individual name.
///
/// `BlackDiamond` and `Diamond` build objects from objects; `Box` and
/// `BlackSquare` build features from features.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndividualKind {
    Named(Sort, Name),
    Classifier(Sort, Concept),
    BlackDiamond(RoleIndex, Individual),
    Diamond(RoleIndex, Individual),
    Box(RoleIndex, Individual),
    BlackSquare(RoleIndex, Individual),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    kind: IndividualKind,
    depth: DepthProfile,
}

/// Length of the `◇` prefix of `c`. Since `◇a_C` and `a_{◇C}` are the same
/// name, only this prefix can count towards the depth of `a_C`.
fn leading_diamonds(c: Concept) -> i32 {
    match c.kind() {
        ConceptKind::Diamond(_, d) => 1 + leading_diamonds(d),
        _ => 0,
    }
}

fn leading_boxes(c: Concept) -> i32 {
    match c.kind() {
        ConceptKind::Box(_, d) => 1 + leading_boxes(d),
        _ => 0,
    }
}

static INDIVIDUALS: LazyLock<Interner<Node>> = LazyLock::new(Interner::new);

/// A hash-consed individual name of either sort.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Individual(u32);

impl Individual {
    fn make(kind: IndividualKind) -> Individual {
        let depth = match kind {
            IndividualKind::Named(..) => DepthProfile::ZERO,
            IndividualKind::Classifier(Sort::Object, c) => DepthProfile::new(0, -leading_diamonds(c)),
            IndividualKind::Classifier(Sort::Feature, c) => DepthProfile::new(-leading_boxes(c), 0),
            IndividualKind::BlackDiamond(_, b) => {
                let d = b.depth();
                DepthProfile::new(d.box_depth + 1, d.diamond_depth)
            }
            IndividualKind::Diamond(_, b) => {
                let d = b.depth();
                DepthProfile::new(d.box_depth, d.diamond_depth - 1)
            }
            IndividualKind::Box(_, y) => {
                let d = y.depth();
                DepthProfile::new(d.box_depth - 1, d.diamond_depth)
            }
            IndividualKind::BlackSquare(_, y) => {
                let d = y.depth();
                DepthProfile::new(d.box_depth, d.diamond_depth + 1)
            }
        };
        Individual(INDIVIDUALS.intern(Node { kind, depth }))
    }

    pub fn object(name: impl Into<Name>) -> Individual {
        Individual::make(IndividualKind::Named(Sort::Object, name.into()))
    }

    pub fn feature(name: impl Into<Name>) -> Individual {
        Individual::make(IndividualKind::Named(Sort::Feature, name.into()))
    }

    pub fn named(sort: Sort, name: impl Into<Name>) -> Individual {
        Individual::make(IndividualKind::Named(sort, name.into()))
    }

    /// The classifying object `a_C`.
    pub fn class_object(c: Concept) -> Individual {
        Individual::make(IndividualKind::Classifier(Sort::Object, c))
    }

    /// The classifying feature `x_C`.
    pub fn class_feature(c: Concept) -> Individual {
        Individual::make(IndividualKind::Classifier(Sort::Feature, c))
    }

    /// `(a_C, x_C)`.
    pub fn classifiers(c: Concept) -> (Individual, Individual) {
        (Individual::class_object(c), Individual::class_feature(c))
    }

    pub fn black_diamond(role: RoleIndex, b: Individual) -> Individual {
        debug_assert_eq!(b.sort(), Sort::Object);
        Individual::make(IndividualKind::BlackDiamond(role, b))
    }

    /// `◇b`, with `◇a_C` collapsed to `a_{◇C}`.
    pub fn diamond(role: RoleIndex, b: Individual) -> Individual {
        debug_assert_eq!(b.sort(), Sort::Object);
        match b.kind() {
            IndividualKind::Classifier(Sort::Object, c) => Individual::class_object(Concept::diamond(role, c)),
            _ => Individual::make(IndividualKind::Diamond(role, b)),
        }
    }

    /// `□y`, with `□x_C` collapsed to `x_{□C}`.
    pub fn boxed(role: RoleIndex, y: Individual) -> Individual {
        debug_assert_eq!(y.sort(), Sort::Feature);
        match y.kind() {
            IndividualKind::Classifier(Sort::Feature, c) => Individual::class_feature(Concept::boxed(role, c)),
            _ => Individual::make(IndividualKind::Box(role, y)),
        }
    }

    pub fn black_square(role: RoleIndex, y: Individual) -> Individual {
        debug_assert_eq!(y.sort(), Sort::Feature);
        Individual::make(IndividualKind::BlackSquare(role, y))
    }

    pub fn kind(self) -> IndividualKind {
        INDIVIDUALS.read(|t| t.get(self.0).kind)
    }

    pub fn depth(self) -> DepthProfile {
        INDIVIDUALS.read(|t| t.get(self.0).depth)
    }

    pub fn sort(self) -> Sort {
        match self.kind() {
            IndividualKind::Named(s, _) | IndividualKind::Classifier(s, _) => s,
            IndividualKind::BlackDiamond(..) | IndividualKind::Diamond(..) => Sort::Object,
            IndividualKind::Box(..) | IndividualKind::BlackSquare(..) => Sort::Feature,
        }
    }

    pub fn is_named(self) -> bool {
        matches!(self.kind(), IndividualKind::Named(..))
    }

    pub fn name(self) -> Option<Name> {
        match self.kind() {
            IndividualKind::Named(_, n) => Some(n),
            _ => None,
        }
    }

    /// The concept `C` when this is `a_C` or `x_C`.
    pub fn classified(self) -> Option<Concept> {
        match self.kind() {
            IndividualKind::Classifier(_, c) => Some(c),
            _ => None,
        }
    }

    /// Reads a feature as `□_i y`, including the collapsed form `x_{□_i C}`
    /// which is `□_i x_C`.
    pub fn as_box(self) -> Option<(RoleIndex, Individual)> {
        match self.kind() {
            IndividualKind::Box(i, y) => Some((i, y)),
            IndividualKind::Classifier(Sort::Feature, c) => match c.kind() {
                ConceptKind::Box(i, inner) => Some((i, Individual::class_feature(inner))),
                _ => None,
            },
            _ => None,
        }
    }

    /// Reads an object as `◇_i b`, including `a_{◇_i C}` which is `◇_i a_C`.
    pub fn as_diamond(self) -> Option<(RoleIndex, Individual)> {
        match self.kind() {
            IndividualKind::Diamond(i, b) => Some((i, b)),
            IndividualKind::Classifier(Sort::Object, c) => match c.kind() {
                ConceptKind::Diamond(i, inner) => Some((i, Individual::class_object(inner))),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_black_diamond(self) -> Option<(RoleIndex, Individual)> {
        match self.kind() {
            IndividualKind::BlackDiamond(i, b) => Some((i, b)),
            _ => None,
        }
    }

    pub fn as_black_square(self) -> Option<(RoleIndex, Individual)> {
        match self.kind() {
            IndividualKind::BlackSquare(i, y) => Some((i, y)),
            _ => None,
        }
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            IndividualKind::Named(_, n) => f.write_str(n.as_str()),
            IndividualKind::Classifier(Sort::Object, c) => write!(f, "a[{c}]"),
            IndividualKind::Classifier(Sort::Feature, c) => write!(f, "x[{c}]"),
            IndividualKind::BlackDiamond(i, b) => write!(f, "◆{i}({b})"),
            IndividualKind::Diamond(i, b) => write!(f, "◇{i}({b})"),
            IndividualKind::Box(i, y) => write!(f, "□{i}({y})"),
            IndividualKind::BlackSquare(i, y) => write!(f, "■{i}({y})"),
        }
    }
}

impl fmt::Debug for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for Individual {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Named individuals first, then by printed form.
impl Ord for Individual {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        (!self.is_named(), self.to_string()).cmp(&(!other.is_named(), other.to_string()))
    }
}

impl Serialize for Individual {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_of_classifier_collapses() {
        let d = Concept::atom("D");
        let a = Individual::diamond(1, Individual::class_object(d));
        assert_eq!(a, Individual::class_object(Concept::diamond(1, d)));
        let x = Individual::boxed(2, Individual::class_feature(d));
        assert_eq!(x, Individual::class_feature(Concept::boxed(2, d)));
        // the adjoint forms never collapse
        let bd = Individual::black_diamond(1, Individual::class_object(d));
        assert!(matches!(bd.kind(), IndividualKind::BlackDiamond(..)));
    }

    #[test]
    fn depth_offsets() {
        let b = Individual::object("b");
        assert_eq!(b.depth(), DepthProfile::ZERO);
        assert_eq!(Individual::black_diamond(1, b).depth(), DepthProfile::new(1, 0));
        assert_eq!(Individual::diamond(1, b).depth(), DepthProfile::new(0, -1));
        let y = Individual::feature("y");
        assert_eq!(Individual::boxed(1, y).depth(), DepthProfile::new(-1, 0));
        assert_eq!(Individual::black_square(1, y).depth(), DepthProfile::new(0, 1));
        let c = Concept::diamond(1, Concept::boxed(1, Concept::atom("D")));
        assert_eq!(Individual::class_object(c).depth(), DepthProfile::new(0, -1));
        assert_eq!(Individual::class_feature(c).depth(), DepthProfile::ZERO);
        let boxed = Concept::boxed(2, Concept::boxed(1, Concept::atom("D")));
        assert_eq!(Individual::class_feature(boxed).depth(), DepthProfile::new(-2, 0));
        let mixed = Concept::meet(Concept::diamond(1, Concept::atom("D")), Concept::atom("E"));
        assert_eq!(Individual::class_object(mixed).depth(), DepthProfile::ZERO);
    }

    #[test]
    fn collapsed_forms_have_consistent_depth() {
        let c = Concept::meet(Concept::diamond(2, Concept::atom("E")), Concept::atom("D"));
        let via_individual = Individual::make(IndividualKind::Diamond(1, Individual::class_object(c)));
        let collapsed = Individual::diamond(1, Individual::class_object(c));
        assert_eq!(via_individual.depth(), collapsed.depth());
        let via_feature = Individual::make(IndividualKind::Box(3, Individual::class_feature(c)));
        assert_eq!(
            via_feature.depth(),
            Individual::boxed(3, Individual::class_feature(c)).depth()
        );
    }

    #[test]
    fn as_box_sees_collapsed_classifiers() {
        let d = Concept::atom("D");
        let x = Individual::class_feature(Concept::boxed(2, d));
        assert_eq!(x.as_box(), Some((2, Individual::class_feature(d))));
        let y = Individual::feature("y");
        assert_eq!(Individual::boxed(1, y).as_box(), Some((1, y)));
        assert_eq!(y.as_box(), None);
        let a = Individual::class_object(Concept::diamond(1, d));
        assert_eq!(a.as_diamond(), Some((1, Individual::class_object(d))));
    }

    #[test]
    fn sorts_are_distinct_individuals() {
        assert_ne!(Individual::object("n"), Individual::feature("n"));
        assert_eq!(Individual::object("n").sort(), Sort::Object);
    }

    #[test]
    fn display_forms() {
        let m3 = Individual::object("m3");
        assert_eq!(Individual::black_diamond(1, m3).to_string(), "◆1(m3)");
        let f3 = Individual::feature("f3");
        assert_eq!(Individual::black_square(2, f3).to_string(), "■2(f3)");
        let rd = Concept::meet(Concept::atom("RM"), Concept::atom("DM"));
        assert_eq!(Individual::class_object(rd).to_string(), "a[RM and DM]");
    }
}
