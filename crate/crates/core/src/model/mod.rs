//! Polarity-based models: the universal model of a saturated ABox, concept
//! evaluation, satisfaction and the I-compatibility check.

mod export;
mod polarity;
mod search;

use std::collections::BTreeMap;
use std::sync::Mutex;

use fixedbitset::FixedBitSet;
use indexmap::IndexMap;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::syntax::{Assertion, Concept, ConceptKind, Individual, Name, RoleIndex, Term};
use crate::tableau::Completion;

pub use export::{ModelDocument, RelationDocument};
pub use polarity::{FormalConcept, Polarity};
pub use search::{bounded_model_search, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the completion contains a clash")]
    ClashPresent,
    #[error("atom `{0}` has no interpretation")]
    UnknownAtom(String),
    #[error("`{0}` is not in the model")]
    UnknownName(String),
    #[error("search budget of {budget} exhausted")]
    BudgetExceeded { budget: usize },
}

/// A binary relation between objects and features, indexed both ways.
/// For `R□` a pair `(a, x)` means `a R□ x`; for `R◇` it means `x R◇ a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    by_object: Vec<FixedBitSet>,
    by_feature: Vec<FixedBitSet>,
}

impl Relation {
    pub fn empty(objects: usize, features: usize) -> Relation {
        Relation {
            by_object: vec![FixedBitSet::with_capacity(features); objects],
            by_feature: vec![FixedBitSet::with_capacity(objects); features],
        }
    }

    pub fn insert(&mut self, a: usize, x: usize) {
        self.by_object[a].insert(x);
        self.by_feature[x].insert(a);
    }

    pub fn contains(&self, a: usize, x: usize) -> bool {
        self.by_object[a].contains(x)
    }

    /// Features related to object `a`.
    pub fn of_object(&self, a: usize) -> &FixedBitSet {
        &self.by_object[a]
    }

    /// Objects related to feature `x`.
    pub fn of_feature(&self, x: usize) -> &FixedBitSet {
        &self.by_feature[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_object
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.ones().map(move |x| (a, x)))
    }

    pub fn is_empty(&self) -> bool {
        self.by_object.iter().all(|r| r.is_clear())
    }
}

/// Extent and intent of an interpreted concept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub extent: FixedBitSet,
    pub intent: FixedBitSet,
}

/// The first I-compatibility failure found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incompatibility {
    /// E.g. `Rbox1^(0)[x]`.
    pub family: String,
    pub at: String,
}

/// An enriched formal context interpreting roles and atoms.
#[derive(Debug)]
pub struct Model {
    polarity: Polarity,
    boxes: BTreeMap<RoleIndex, Relation>,
    diamonds: BTreeMap<RoleIndex, Relation>,
    atoms: BTreeMap<Name, Extension>,
    objects: IndexMap<Individual, usize>,
    features: IndexMap<Individual, usize>,
    memo: Mutex<FxHashMap<Concept, Extension>>,
}

impl Clone for Model {
    fn clone(&self) -> Self {
        Model {
            polarity: self.polarity.clone(),
            boxes: self.boxes.clone(),
            diamonds: self.diamonds.clone(),
            atoms: self.atoms.clone(),
            objects: self.objects.clone(),
            features: self.features.clone(),
            memo: Mutex::new(FxHashMap::default()),
        }
    }
}

impl Model {
    /// Assembles a model. `objects`/`features` map individuals onto carrier
    /// positions; several individuals may share a position.
    pub fn from_parts(
        polarity: Polarity,
        boxes: BTreeMap<RoleIndex, Relation>,
        diamonds: BTreeMap<RoleIndex, Relation>,
        atoms: BTreeMap<Name, Extension>,
        objects: IndexMap<Individual, usize>,
        features: IndexMap<Individual, usize>,
    ) -> Model {
        Model {
            polarity,
            boxes,
            diamonds,
            atoms,
            objects,
            features,
            memo: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn polarity(&self) -> &Polarity {
        &self.polarity
    }

    pub fn boxes(&self) -> &BTreeMap<RoleIndex, Relation> {
        &self.boxes
    }

    pub fn diamonds(&self) -> &BTreeMap<RoleIndex, Relation> {
        &self.diamonds
    }

    pub fn atoms(&self) -> &BTreeMap<Name, Extension> {
        &self.atoms
    }

    pub fn object_index(&self, b: Individual) -> Option<usize> {
        self.objects.get(&b).copied()
    }

    pub fn feature_index(&self, y: Individual) -> Option<usize> {
        self.features.get(&y).copied()
    }

    pub fn object_individuals(&self) -> impl Iterator<Item = (Individual, usize)> + '_ {
        self.objects.iter().map(|(&i, &k)| (i, k))
    }

    pub fn feature_individuals(&self) -> impl Iterator<Item = (Individual, usize)> + '_ {
        self.features.iter().map(|(&i, &k)| (i, k))
    }

    fn obj(&self, b: Individual) -> Result<usize, ModelError> {
        self.object_index(b)
            .ok_or_else(|| ModelError::UnknownName(b.to_string()))
    }

    fn feat(&self, y: Individual) -> Result<usize, ModelError> {
        self.feature_index(y)
            .ok_or_else(|| ModelError::UnknownName(y.to_string()))
    }

    fn box_rel(&self, i: RoleIndex) -> Option<&Relation> {
        self.boxes.get(&i)
    }

    fn dia_rel(&self, i: RoleIndex) -> Option<&Relation> {
        self.diamonds.get(&i)
    }

    /// `R□^(0)[Y]`: objects `R□`-related to every feature of `y`.
    fn box_preimage(&self, i: RoleIndex, y: &FixedBitSet) -> FixedBitSet {
        let mut out = self.polarity.all_objects();
        for x in y.ones() {
            match self.box_rel(i) {
                Some(r) => out.intersect_with(r.of_feature(x)),
                None => out.clear(),
            }
        }
        out
    }

    /// `R◇^(0)[B]`: features `R◇`-related to every object of `b`.
    fn diamond_preimage(&self, i: RoleIndex, b: &FixedBitSet) -> FixedBitSet {
        let mut out = self.polarity.all_features();
        for a in b.ones() {
            match self.dia_rel(i) {
                Some(r) => out.intersect_with(r.of_object(a)),
                None => out.clear(),
            }
        }
        out
    }

    /// Evaluates `c`, caching every subconcept.
    pub fn interpret(&self, c: Concept) -> Result<Extension, ModelError> {
        if let Some(e) = self.memo.lock().expect("memo poisoned").get(&c) {
            return Ok(e.clone());
        }
        let p = &self.polarity;
        let ext = match c.kind() {
            ConceptKind::Atomic(n) => self
                .atoms
                .get(&n)
                .cloned()
                .ok_or_else(|| ModelError::UnknownAtom(n.as_str().to_owned()))?,
            ConceptKind::Meet(l, r) => {
                let mut extent = self.interpret(l)?.extent;
                extent.intersect_with(&self.interpret(r)?.extent);
                Extension {
                    intent: p.up(&extent),
                    extent,
                }
            }
            ConceptKind::Join(l, r) => {
                let mut intent = self.interpret(l)?.intent;
                intent.intersect_with(&self.interpret(r)?.intent);
                Extension {
                    extent: p.down(&intent),
                    intent,
                }
            }
            ConceptKind::Box(i, d) => {
                let extent = self.box_preimage(i, &self.interpret(d)?.intent);
                Extension {
                    intent: p.up(&extent),
                    extent,
                }
            }
            ConceptKind::Diamond(i, d) => {
                let intent = self.diamond_preimage(i, &self.interpret(d)?.extent);
                Extension {
                    extent: p.down(&intent),
                    intent,
                }
            }
        };
        self.memo.lock().expect("memo poisoned").insert(c, ext.clone());
        Ok(ext)
    }

    pub fn satisfies(&self, a: Assertion) -> Result<bool, ModelError> {
        let holds = match a.term() {
            Term::RelI(b, y) => self.polarity.incident(self.obj(b)?, self.feat(y)?),
            Term::RelBox(b, i, y) => {
                let (b, y) = (self.obj(b)?, self.feat(y)?);
                self.box_rel(i).is_some_and(|r| r.contains(b, y))
            }
            Term::RelDiamond(y, i, b) => {
                let (b, y) = (self.obj(b)?, self.feat(y)?);
                self.dia_rel(i).is_some_and(|r| r.contains(b, y))
            }
            Term::MemberObj(b, c) => {
                let b = self.obj(b)?;
                self.interpret(c)?.extent.contains(b)
            }
            Term::MemberFeat(y, c) => {
                let y = self.feat(y)?;
                self.interpret(c)?.intent.contains(y)
            }
        };
        Ok(holds != a.is_negative())
    }

    /// Checks that the four preimage families of every role are Galois-stable.
    pub fn check_i_compatibility(&self) -> Result<(), Incompatibility> {
        let p = &self.polarity;
        let fail = |family: String, at: &str| Incompatibility {
            family,
            at: at.to_owned(),
        };
        for (&i, r) in &self.boxes {
            for x in 0..p.num_features() {
                if !p.is_stable_extent(r.of_feature(x)) {
                    return Err(fail(format!("Rbox{i}^(0)[x]"), &p.features()[x]));
                }
            }
            for a in 0..p.num_objects() {
                if !p.is_stable_intent(r.of_object(a)) {
                    return Err(fail(format!("Rbox{i}^(1)[a]"), &p.objects()[a]));
                }
            }
        }
        for (&i, r) in &self.diamonds {
            for a in 0..p.num_objects() {
                if !p.is_stable_intent(r.of_object(a)) {
                    return Err(fail(format!("Rdia{i}^(0)[a]"), &p.objects()[a]));
                }
            }
            for x in 0..p.num_features() {
                if !p.is_stable_extent(r.of_feature(x)) {
                    return Err(fail(format!("Rdia{i}^(1)[x]"), &p.features()[x]));
                }
            }
        }
        Ok(())
    }
}

/// Label of the padding object incident to no feature.
pub const TOP_OBJECT: &str = "a⊤";
/// Label of the padding feature incident to no object.
pub const BOTTOM_FEATURE: &str = "x⊥";

/// The universal model of a clash-free completion. Atom `D` is read as
/// `(x_D↓, a_D↑)`.
pub fn build_model(c: &Completion) -> Result<Model, ModelError> {
    if c.clash().is_some() {
        return Err(ModelError::ClashPresent);
    }
    let (objs, feats) = c.individuals();
    let objects: IndexMap<Individual, usize> = objs.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let features: IndexMap<Individual, usize> = feats.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    // A non-empty model also gets an object and a feature with no
    // incidences, so that the empty set is closed on both sides.
    let pad = usize::from(!objs.is_empty() || !feats.is_empty());
    let (n, m) = (objects.len() + pad, features.len() + pad);
    let mut obj_labels: Vec<String> = objs.iter().map(|i| i.to_string()).collect();
    let mut feat_labels: Vec<String> = feats.iter().map(|i| i.to_string()).collect();
    if pad == 1 {
        obj_labels.push(TOP_OBJECT.to_owned());
        feat_labels.push(BOTTOM_FEATURE.to_owned());
    }
    let mut polarity = Polarity::new(obj_labels, feat_labels);
    let mut boxes: BTreeMap<RoleIndex, Relation> = BTreeMap::new();
    let mut diamonds: BTreeMap<RoleIndex, Relation> = BTreeMap::new();
    for t in c.positive_terms() {
        match t {
            Term::RelI(b, y) => polarity.relate(objects[&b], features[&y]),
            Term::RelBox(b, i, y) => boxes
                .entry(i)
                .or_insert_with(|| Relation::empty(n, m))
                .insert(objects[&b], features[&y]),
            Term::RelDiamond(y, i, b) => diamonds
                .entry(i)
                .or_insert_with(|| Relation::empty(n, m))
                .insert(objects[&b], features[&y]),
            _ => {}
        }
    }
    let mut atoms = BTreeMap::new();
    for &concept in c.occurring() {
        let Some(name) = concept.as_atom() else { continue };
        let (a_d, x_d) = Individual::classifiers(concept);
        let (Some(&a), Some(&x)) = (objects.get(&a_d), features.get(&x_d)) else {
            continue;
        };
        atoms.insert(
            name,
            Extension {
                extent: polarity.col(x).clone(),
                intent: polarity.row(a).clone(),
            },
        );
    }
    Ok(Model::from_parts(polarity, boxes, diamonds, atoms, objects, features))
}

#[cfg(test)]
mod tests;
