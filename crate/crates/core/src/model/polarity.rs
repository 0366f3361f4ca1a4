use fixedbitset::FixedBitSet;

use super::ModelError;

/// A formal context `(A, X, I)` with dense incidence stored both by row
/// and by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarity {
    objects: Vec<String>,
    features: Vec<String>,
    /// `rows[a]` = features incident to object `a`.
    rows: Vec<FixedBitSet>,
    /// `cols[x]` = objects incident to feature `x`.
    cols: Vec<FixedBitSet>,
}

/// A Galois-stable pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: FixedBitSet,
    pub intent: FixedBitSet,
}

impl Polarity {
    pub fn new(objects: Vec<String>, features: Vec<String>) -> Polarity {
        let (n, m) = (objects.len(), features.len());
        Polarity {
            objects,
            features,
            rows: vec![FixedBitSet::with_capacity(m); n],
            cols: vec![FixedBitSet::with_capacity(n); m],
        }
    }

    /// Builds a context from index pairs `(object, feature)`.
    pub fn from_pairs(
        objects: Vec<String>,
        features: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Polarity {
        let mut p = Polarity::new(objects, features);
        for (a, x) in pairs {
            p.relate(a, x);
        }
        p
    }

    pub fn relate(&mut self, a: usize, x: usize) {
        self.rows[a].insert(x);
        self.cols[x].insert(a);
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    pub fn incident(&self, a: usize, x: usize) -> bool {
        self.rows[a].contains(x)
    }

    pub fn row(&self, a: usize) -> &FixedBitSet {
        &self.rows[a]
    }

    pub fn col(&self, x: usize) -> &FixedBitSet {
        &self.cols[x]
    }

    pub fn all_objects(&self) -> FixedBitSet {
        full(self.objects.len())
    }

    pub fn all_features(&self) -> FixedBitSet {
        full(self.features.len())
    }

    /// `B↑`: features incident to every object of `b`.
    pub fn up(&self, b: &FixedBitSet) -> FixedBitSet {
        let mut out = self.all_features();
        for a in b.ones() {
            out.intersect_with(&self.rows[a]);
        }
        out
    }

    /// `Y↓`: objects incident to every feature of `y`.
    pub fn down(&self, y: &FixedBitSet) -> FixedBitSet {
        let mut out = self.all_objects();
        for x in y.ones() {
            out.intersect_with(&self.cols[x]);
        }
        out
    }

    pub fn is_stable_extent(&self, b: &FixedBitSet) -> bool {
        self.down(&self.up(b)) == *b
    }

    pub fn is_stable_intent(&self, y: &FixedBitSet) -> bool {
        self.up(&self.down(y)) == *y
    }

    /// All formal concepts, ordered so that smaller extents come first.
    /// Fails when more than `limit` concepts exist.
    pub fn formal_concepts(&self, limit: usize) -> Result<Vec<FormalConcept>, ModelError> {
        let mut extents: Vec<FixedBitSet> = vec![self.all_objects()];
        let mut seen: std::collections::HashSet<FixedBitSet> = extents.iter().cloned().collect();
        for col in &self.cols {
            let mut fresh = Vec::new();
            for e in &extents {
                let mut meet = e.clone();
                meet.intersect_with(col);
                if seen.insert(meet.clone()) {
                    fresh.push(meet);
                }
            }
            extents.extend(fresh);
            if extents.len() > limit {
                return Err(ModelError::BudgetExceeded { budget: limit });
            }
        }
        extents.sort_by(|a, b| {
            a.count_ones(..)
                .cmp(&b.count_ones(..))
                .then_with(|| a.ones().cmp(b.ones()))
        });
        Ok(extents
            .into_iter()
            .map(|extent| FormalConcept {
                intent: self.up(&extent),
                extent,
            })
            .collect())
    }
}

pub(crate) fn full(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}
