//! Concepts, individuals and assertions.

mod assertion;
mod concept;
mod individual;
mod intern;

pub use assertion::{abox_concepts, abox_depth, occurs_in, Assertion, AssertionSet, Term};
pub use concept::{Concept, ConceptKind, Role, RoleIndex};
pub use individual::{Individual, IndividualKind, Sort};
pub use intern::Name;

/// Modal nesting depth, one counter per modality. Synthetic individuals can
/// carry negative values.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DepthProfile {
    pub box_depth: i32,
    pub diamond_depth: i32,
}

impl DepthProfile {
    pub const ZERO: DepthProfile = DepthProfile {
        box_depth: 0,
        diamond_depth: 0,
    };

    pub const fn new(box_depth: i32, diamond_depth: i32) -> Self {
        DepthProfile {
            box_depth,
            diamond_depth,
        }
    }

    pub fn max(self, other: DepthProfile) -> DepthProfile {
        DepthProfile::new(
            self.box_depth.max(other.box_depth),
            self.diamond_depth.max(other.diamond_depth),
        )
    }
}
