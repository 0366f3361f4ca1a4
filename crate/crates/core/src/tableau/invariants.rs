//! Structural properties every completion must satisfy. Used by tests and
//! by debug runs; none of this is needed to decide consistency.

use std::fmt;

use super::{Completion, ExtraRule};
use crate::syntax::{abox_depth, DepthProfile, Individual, IndividualKind, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub term: Term,
    pub what: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.what, self.term)
    }
}

/// Slack added to the bounds when modality-relating rules are active.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Relaxation {
    /// `R□ ⊆ R◇⁻¹` rules: loosen the ◇ side.
    pub diamond: bool,
    /// `R◇ ⊆ R□⁻¹` rules: loosen the □ side.
    pub boxes: bool,
}

impl Relaxation {
    pub fn for_completion(c: &Completion) -> Relaxation {
        let mut r = Relaxation::default();
        for e in c.rules().extras() {
            match e {
                ExtraRule::BoxToDiamond { .. } => r.diamond = true,
                ExtraRule::DiamondToBox { .. } => r.boxes = true,
                _ => {}
            }
        }
        r
    }
}

/// Checks the depth inequalities on one term against input depth `a`.
pub fn term_depth_bounds(t: Term, a: DepthProfile, relax: Relaxation) -> Result<(), Violation> {
    let bx = a.box_depth + 1 + i32::from(relax.boxes);
    let dx = a.diamond_depth + 1 + i32::from(relax.diamond);
    let fail = |what| Err(Violation { term: t, what });
    match t {
        Term::RelI(b, y) => {
            let (b, y) = (b.depth(), y.depth());
            if b.box_depth - y.box_depth > bx {
                return fail("I box bound");
            }
            if y.diamond_depth - b.diamond_depth > dx {
                return fail("I diamond bound");
            }
        }
        Term::RelBox(b, _, y) => {
            let (b, y) = (b.depth(), y.depth());
            if b.box_depth + 1 - y.box_depth > bx {
                return fail("R□ box bound");
            }
            if y.diamond_depth - b.diamond_depth > a.diamond_depth + 1 {
                return fail("R□ diamond bound");
            }
        }
        Term::RelDiamond(y, _, b) => {
            let (b, y) = (b.depth(), y.depth());
            if b.box_depth - y.box_depth > a.box_depth + 1 {
                return fail("R◇ box bound");
            }
            if y.diamond_depth + 1 - b.diamond_depth > dx {
                return fail("R◇ diamond bound");
            }
        }
        Term::MemberObj(b, c) => {
            let (b, c) = (b.depth(), c.depth());
            if b.box_depth + c.box_depth > a.box_depth + 1 {
                return fail("object box bound");
            }
            if -b.diamond_depth - c.diamond_depth > i32::from(relax.diamond) {
                return fail("object diamond bound");
            }
        }
        Term::MemberFeat(y, c) => {
            let (y, c) = (y.depth(), c.depth());
            if -y.box_depth - c.box_depth > i32::from(relax.boxes) {
                return fail("feature box bound");
            }
            if y.diamond_depth + c.diamond_depth > a.diamond_depth + 1 {
                return fail("feature diamond bound");
            }
        }
    }
    Ok(())
}

/// Depth inequalities over every term of the completion.
pub fn check_depth_bounds(c: &Completion) -> Result<(), Violation> {
    let a = abox_depth(c.input());
    let relax = Relaxation::for_completion(c);
    c.assertions().try_for_each(|x| term_depth_bounds(x.term(), a, relax))
}

fn has_mixed_prefix(ind: Individual) -> bool {
    match ind.kind() {
        IndividualKind::Named(..) | IndividualKind::Classifier(..) => false,
        IndividualKind::BlackDiamond(_, b) => b.as_diamond().is_some() || has_mixed_prefix(b),
        IndividualKind::BlackSquare(_, y) => y.as_box().is_some() || has_mixed_prefix(y),
        IndividualKind::Diamond(_, b) => has_mixed_prefix(b),
        IndividualKind::Box(_, y) => has_mixed_prefix(y),
    }
}

/// Shapes that never occur: `◇b I □y` and names `◆◇b` or `■□y`; also
/// `◇b R□ y` unless an `R◇ ⊆ R□⁻¹` rule is active, and dually `□y R◇ b`
/// unless an `R□ ⊆ R◇⁻¹` rule is active.
pub fn check_separation_shapes(c: &Completion) -> Result<(), Violation> {
    let extras = c.rules().extras();
    let box_side = !extras.iter().any(|e| matches!(e, ExtraRule::DiamondToBox { .. }));
    let dia_side = !extras.iter().any(|e| matches!(e, ExtraRule::BoxToDiamond { .. }));
    for x in c.assertions() {
        let t = x.term();
        let fail = |what| Err(Violation { term: t, what });
        match t {
            Term::RelI(b, y) if b.as_diamond().is_some() && y.as_box().is_some() => {
                return fail("diamond object incident to box feature");
            }
            Term::RelBox(b, _, _) if box_side && b.as_diamond().is_some() => {
                return fail("diamond object in R□");
            }
            Term::RelDiamond(y, _, _) if dia_side && y.as_box().is_some() => {
                return fail("box feature in R◇");
            }
            _ => {}
        }
        if t.individuals().into_iter().any(has_mixed_prefix) {
            return fail("mixed modal prefix");
        }
    }
    Ok(())
}
