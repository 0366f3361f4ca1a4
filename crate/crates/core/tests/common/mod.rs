//! Random knowledge bases shared by the integration tests.
#![allow(dead_code)]

use lealc_core::kb::KnowledgeBase;
use lealc_core::syntax::AssertionSet;
use lealc_core::unravel::unravel;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 4] = ["A", "B", "C", "D"];

#[derive(Copy, Clone, Debug)]
pub struct Shape {
    pub max_objects: usize,
    pub max_features: usize,
    pub max_names: usize,
    pub max_assertions: usize,
    pub max_depth: u32,
}

impl Shape {
    pub const FUZZ: Shape = Shape {
        max_objects: 4,
        max_features: 4,
        max_names: 6,
        max_assertions: 8,
        max_depth: 2,
    };

    pub const TINY: Shape = Shape {
        max_objects: 2,
        max_features: 2,
        max_names: 3,
        max_assertions: 5,
        max_depth: 1,
    };
}

fn concept(rng: &mut impl Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return ATOMS[rng.gen_range(0..ATOMS.len())].to_owned();
    }
    match rng.gen_range(0..4) {
        0 => format!("({} and {})", concept(rng, depth - 1), concept(rng, depth - 1)),
        1 => format!("({} or {})", concept(rng, depth - 1), concept(rng, depth - 1)),
        2 => format!("box1 {}", concept(rng, depth - 1)),
        _ => format!("dia1 {}", concept(rng, depth - 1)),
    }
}

/// A knowledge base in surface syntax with one role of each kind.
pub fn random_kb_text(rng: &mut impl Rng, shape: Shape) -> String {
    let n_obj = rng.gen_range(1..=shape.max_objects.min(shape.max_names - 1));
    let n_feat = rng.gen_range(1..=shape.max_features.min(shape.max_names - n_obj));
    let objs: Vec<String> = (1..=n_obj).map(|i| format!("o{i}")).collect();
    let feats: Vec<String> = (1..=n_feat).map(|i| format!("y{i}")).collect();
    let mut out = format!(
        "roles box 1 dia 1.\nobj {}.\nfeat {}.\n",
        objs.join(" "),
        feats.join(" ")
    );
    let n = rng.gen_range(1..=shape.max_assertions);
    for _ in 0..n {
        let b = &objs[rng.gen_range(0..n_obj)];
        let y = &feats[rng.gen_range(0..n_feat)];
        let term = match rng.gen_range(0..5) {
            0 | 1 => format!("{b} : {}", concept(rng, shape.max_depth)),
            2 => format!("{y} :: {}", concept(rng, shape.max_depth)),
            3 => format!("{b} I {y}"),
            _ if rng.gen_bool(0.5) => format!("{b} Rbox1 {y}"),
            _ => format!("{y} Rdia1 {b}"),
        };
        let neg = if rng.gen_bool(0.25) { "not " } else { "" };
        out.push_str(&format!("{neg}{term}.\n"));
    }
    out
}

pub fn kb_of(text: &str) -> (KnowledgeBase, AssertionSet) {
    let kb = KnowledgeBase::parse(text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let abox = unravel(&kb).expect("no TBox").abox;
    (kb, abox)
}

/// The deterministic corpus: `count` knowledge bases from `seed`.
pub fn corpus(seed: u64, count: usize, shape: Shape) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_kb_text(&mut rng, shape)).collect()
}

pub fn kb_strategy(shape: Shape) -> impl Strategy<Value = String> {
    any::<u64>().prop_map(move |seed| random_kb_text(&mut ChaCha8Rng::seed_from_u64(seed), shape))
}

/// Number of distinct individuals named in the ABox.
pub fn names_used(abox: &AssertionSet) -> usize {
    let mut seen = std::collections::HashSet::new();
    for a in abox {
        seen.extend(a.term().individuals());
    }
    seen.len()
}
