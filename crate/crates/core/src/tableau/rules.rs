use std::fmt;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::syntax::{AssertionSet, Individual, Role, RoleIndex, Sort};

/// Expansion rules. The first eighteen form the base calculus.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Create,
    /// `b:C, y::C / b I y`
    Basic,
    MeetA,
    JoinX,
    Box,
    Diamond,
    /// `b I □y / b R□ y`
    BoxY,
    /// `b I ■y / y R◇ b`
    BlackSquareY,
    /// `◇b I y / y R◇ b`
    DiamondB,
    /// `◆b I y / b R□ y`
    BlackDiamondB,
    MeetAInv,
    JoinXInv,
    /// `b R□ y / ◆b I y, b I □y`
    AdjBox,
    /// `y R◇ b / ◇b I y, b I ■y`
    AdjDiamond,
    /// `¬(b:C) / ¬(b I x_C)`
    NegB,
    /// `¬(y::C) / ¬(a_C I y)`
    NegX,
    /// `b I x_C / b:C`
    AppendX,
    /// `a_C I y / y::C`
    AppendA,
    Extra(ExtraRule),
}

impl Rule {
    pub const BASE: [Rule; 18] = [
        Rule::Create,
        Rule::Basic,
        Rule::MeetA,
        Rule::JoinX,
        Rule::Box,
        Rule::Diamond,
        Rule::BoxY,
        Rule::BlackSquareY,
        Rule::DiamondB,
        Rule::BlackDiamondB,
        Rule::MeetAInv,
        Rule::JoinXInv,
        Rule::AdjBox,
        Rule::AdjDiamond,
        Rule::NegB,
        Rule::NegX,
        Rule::AppendX,
        Rule::AppendA,
    ];

    /// Stable ASCII identifier.
    pub fn id(self) -> &'static str {
        match self {
            Rule::Create => "create",
            Rule::Basic => "basic",
            Rule::MeetA => "meet_a",
            Rule::JoinX => "join_x",
            Rule::Box => "box",
            Rule::Diamond => "dia",
            Rule::BoxY => "box_y",
            Rule::BlackSquareY => "bsquare_y",
            Rule::DiamondB => "dia_b",
            Rule::BlackDiamondB => "bdia_b",
            Rule::MeetAInv => "meet_a_inv",
            Rule::JoinXInv => "join_x_inv",
            Rule::AdjBox => "adj_box",
            Rule::AdjDiamond => "adj_dia",
            Rule::NegB => "neg_b",
            Rule::NegX => "neg_x",
            Rule::AppendX => "append_x",
            Rule::AppendA => "append_a",
            Rule::Extra(e) => e.id(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Create => "create",
            Rule::Basic => "I",
            Rule::MeetA => "∧A",
            Rule::JoinX => "∨X",
            Rule::Box => "□",
            Rule::Diamond => "◇",
            Rule::BoxY => "□y",
            Rule::BlackSquareY => "■y",
            Rule::DiamondB => "◇b",
            Rule::BlackDiamondB => "◆b",
            Rule::MeetAInv => "∧A⁻¹",
            Rule::JoinXInv => "∨X⁻¹",
            Rule::AdjBox => "R□",
            Rule::AdjDiamond => "R◇",
            Rule::NegB => "¬b",
            Rule::NegX => "¬x",
            Rule::AppendX => "x_C",
            Rule::AppendA => "a_C",
            Rule::Extra(e) => return write!(f, "{e}"),
        };
        f.write_str(s)
    }
}

/// Rules encoding a universal axiom, used to decide separation queries.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtraRule {
    /// Objects: with `I`, `b I p / d I p`; with `R□_i`, `b R□ p / d R□ p`;
    /// with `R◇_i`, `p R◇ b / p R◇ d`.
    SepObj {
        from: Individual,
        to: Individual,
        role: Role,
    },
    /// Features: with `I`, `p I y / p I z`; with `R□_i`, `p R□ y / p R□ z`;
    /// with `R◇_i`, `y R◇ p / z R◇ p`.
    SepFeat {
        from: Individual,
        to: Individual,
        role: Role,
    },
    /// `b R□_i y / y R◇_j b` at a fixed `b`.
    BoxToDiamond {
        box_role: RoleIndex,
        dia_role: RoleIndex,
        at: Individual,
    },
    /// `y R◇_i b / b R□_j y` at a fixed `y`.
    DiamondToBox {
        dia_role: RoleIndex,
        box_role: RoleIndex,
        at: Individual,
    },
    /// `b R□_i y / b I y` at a fixed `b`.
    BoxToI { role: RoleIndex, at: Individual },
    /// `y R◇_i b / b I y` at a fixed `y`.
    DiamondToI { role: RoleIndex, at: Individual },
}

impl ExtraRule {
    /// Inclusion of `from` in `to` at the individual `at`, read on the
    /// side where `from` starts.
    pub fn inclusion(from: Role, to: Role, at: Individual) -> Result<ExtraRule, RuleError> {
        let rule = match (from, to) {
            (Role::Box(i), Role::Diamond(j)) => ExtraRule::BoxToDiamond {
                box_role: i,
                dia_role: j,
                at,
            },
            (Role::Diamond(i), Role::Box(j)) => ExtraRule::DiamondToBox {
                dia_role: i,
                box_role: j,
                at,
            },
            (Role::Box(i), Role::I) => ExtraRule::BoxToI { role: i, at },
            (Role::Diamond(i), Role::I) => ExtraRule::DiamondToI { role: i, at },
            _ => return Err(RuleError::Unsupported(format!("{from} into {to}"))),
        };
        let want = match from {
            Role::Box(_) => Sort::Object,
            _ => Sort::Feature,
        };
        if at.sort() != want {
            return Err(RuleError::Sort {
                name: at.to_string(),
                expected: want,
            });
        }
        Ok(rule)
    }

    fn id(self) -> &'static str {
        match self {
            ExtraRule::SepObj { .. } => "sep_obj",
            ExtraRule::SepFeat { .. } => "sep_feat",
            ExtraRule::BoxToDiamond { .. } => "box_to_dia",
            ExtraRule::DiamondToBox { .. } => "dia_to_box",
            ExtraRule::BoxToI { .. } => "box_to_i",
            ExtraRule::DiamondToI { .. } => "dia_to_i",
        }
    }

    fn individuals(self) -> Vec<Individual> {
        match self {
            ExtraRule::SepObj { from, to, .. } | ExtraRule::SepFeat { from, to, .. } => {
                vec![from, to]
            }
            ExtraRule::BoxToDiamond { at, .. }
            | ExtraRule::DiamondToBox { at, .. }
            | ExtraRule::BoxToI { at, .. }
            | ExtraRule::DiamondToI { at, .. } => vec![at],
        }
    }

    /// True for the rules relating `R□` and `R◇` to each other, which only
    /// satisfy the relaxed depth bounds.
    pub fn relates_modalities(self) -> bool {
        matches!(self, ExtraRule::BoxToDiamond { .. } | ExtraRule::DiamondToBox { .. })
    }
}

impl fmt::Display for ExtraRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExtraRule::SepObj {
                from,
                to,
                role: Role::I,
            } => write!(f, "SA({from},{to})"),
            ExtraRule::SepObj { from, to, role } => write!(f, "SA({from},{to},{role})"),
            ExtraRule::SepFeat {
                from,
                to,
                role: Role::I,
            } => write!(f, "SX({from},{to})"),
            ExtraRule::SepFeat { from, to, role } => write!(f, "SX({from},{to},{role})"),
            ExtraRule::BoxToDiamond { box_role, dia_role, at } => {
                write!(f, "SA(Rbox{box_role},Rdia{dia_role},{at})")
            }
            ExtraRule::DiamondToBox { dia_role, box_role, at } => {
                write!(f, "SX(Rdia{dia_role},Rbox{box_role},{at})")
            }
            ExtraRule::BoxToI { role, at } => write!(f, "SA(Rbox{role},I,{at})"),
            ExtraRule::DiamondToI { role, at } => write!(f, "SX(Rdia{role},I,{at})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("individual `{0}` does not occur in the ABox")]
    UnknownIndividual(String),
    #[error("unsupported rule: {0}")]
    Unsupported(String),
    #[error("`{name}` must be {expected}")]
    Sort { name: String, expected: Sort },
}

/// The base calculus plus any extra rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    extras: Vec<ExtraRule>,
}

impl RuleSet {
    pub fn base() -> RuleSet {
        RuleSet::default()
    }

    pub fn extras(&self) -> &[ExtraRule] {
        &self.extras
    }

    /// Adds `rule` after checking that its individuals occur in `abox` and
    /// have the right sorts.
    pub fn add_extra_rule(mut self, rule: ExtraRule, abox: &AssertionSet) -> Result<RuleSet, RuleError> {
        let present: FxHashSet<Individual> = abox.iter().flat_map(|a| a.term().individuals()).collect();
        for ind in rule.individuals() {
            if !present.contains(&ind) {
                return Err(RuleError::UnknownIndividual(ind.to_string()));
            }
        }
        let sort_ok = |ind: Individual, s: Sort| {
            if ind.sort() == s {
                Ok(())
            } else {
                Err(RuleError::Sort {
                    name: ind.to_string(),
                    expected: s,
                })
            }
        };
        match rule {
            ExtraRule::SepObj { from, to, .. } => {
                sort_ok(from, Sort::Object)?;
                sort_ok(to, Sort::Object)?;
            }
            ExtraRule::SepFeat { from, to, .. } => {
                sort_ok(from, Sort::Feature)?;
                sort_ok(to, Sort::Feature)?;
            }
            ExtraRule::BoxToDiamond { at, .. } | ExtraRule::BoxToI { at, .. } => sort_ok(at, Sort::Object)?,
            ExtraRule::DiamondToBox { at, .. } | ExtraRule::DiamondToI { at, .. } => sort_ok(at, Sort::Feature)?,
        }
        if !self.extras.contains(&rule) {
            self.extras.push(rule);
        }
        Ok(self)
    }

    pub fn has_modality_relating_extras(&self) -> bool {
        self.extras.iter().any(|e| e.relates_modalities())
    }
}
