//! Tableaux saturation for LE-ALC ABoxes.
//!
//! Every rule is non-branching, so a run is a single fixpoint computation
//! over one growing assertion set. The result is a [`Completion`] that
//! remembers which rule produced each assertion.

mod completion;
mod engine;
pub mod invariants;
mod rules;

use thiserror::Error;

use crate::syntax::{AssertionSet, Concept, Individual};

pub use completion::{Clash, Completion, Origin, Step, StepView};
pub use rules::{ExtraRule, Rule, RuleError, RuleSet};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Worklist in insertion order.
    Fifo,
    /// Worklist drained in a seeded random order.
    Random(u64),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SaturationConfig {
    /// Upper bound on rule applications before giving up.
    pub max_steps: usize,
    pub schedule: Schedule,
    /// Stop at the first clash instead of running to the fixpoint.
    pub stop_on_clash: bool,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            max_steps: 10_000_000,
            schedule: Schedule::Fifo,
            stop_on_clash: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturationError {
    #[error("saturation exceeded the budget of {limit} rule applications")]
    ResourceLimit { limit: usize },
}

/// Outcome of a consistency check. Both arms carry the completion.
#[derive(Debug, Clone)]
pub enum Consistency {
    Consistent(Completion),
    Inconsistent(Completion),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent(_))
    }

    pub fn completion(&self) -> &Completion {
        match self {
            Consistency::Consistent(c) | Consistency::Inconsistent(c) => c,
        }
    }

    pub fn into_completion(self) -> Completion {
        match self {
            Consistency::Consistent(c) | Consistency::Inconsistent(c) => c,
        }
    }
}

/// Runs all rules of `rules` on `abox` to a fixpoint (or the first clash).
pub fn saturate(
    abox: &AssertionSet,
    rules: &RuleSet,
    config: &SaturationConfig,
) -> Result<Completion, SaturationError> {
    engine::Engine::new(abox, rules, config).run()
}

pub fn check_consistency(abox: &AssertionSet) -> Result<Consistency, SaturationError> {
    check_consistency_with(abox, &RuleSet::base(), &SaturationConfig::default())
}

pub fn check_consistency_with(
    abox: &AssertionSet,
    rules: &RuleSet,
    config: &SaturationConfig,
) -> Result<Consistency, SaturationError> {
    let c = saturate(abox, rules, config)?;
    Ok(if c.clash().is_some() {
        Consistency::Inconsistent(c)
    } else {
        Consistency::Consistent(c)
    })
}

/// The classifying object and feature of `c`.
pub fn fresh_names(c: Concept) -> (Individual, Individual) {
    Individual::classifiers(c)
}
