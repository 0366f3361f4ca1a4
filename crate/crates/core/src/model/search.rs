//! Exhaustive search for small models, used to cross-check the tableau on
//! tiny inputs. Sets are bitmasks, so carriers are limited to 8 elements.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use indexmap::{IndexMap, IndexSet};

use super::{Extension, Model, ModelError, Polarity, Relation};
use crate::syntax::{Assertion, AssertionSet, Concept, ConceptKind, Individual, Name, RoleIndex, Sort, Term};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_objects: usize,
    pub max_features: usize,
    /// Upper bound on visited search nodes.
    pub budget: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_objects: 2,
            max_features: 2,
            budget: 5_000_000,
        }
    }
}

/// Incidence and relations over `n x m` carriers as bitmasks; bit
/// `a * m + x` holds the pair `(a, x)`.
#[derive(Clone)]
struct Ctx {
    n: usize,
    m: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
}

impl Ctx {
    fn new(n: usize, m: usize, inc: u64) -> Ctx {
        let mut rows = vec![0u32; n];
        let mut cols = vec![0u32; m];
        for (a, row) in rows.iter_mut().enumerate() {
            for (x, col) in cols.iter_mut().enumerate() {
                if inc >> (a * m + x) & 1 == 1 {
                    *row |= 1 << x;
                    *col |= 1 << a;
                }
            }
        }
        Ctx { n, m, rows, cols }
    }

    fn all_a(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    fn all_x(&self) -> u32 {
        (1u32 << self.m) - 1
    }

    fn up(&self, b: u32) -> u32 {
        (0..self.n)
            .filter(|a| b >> a & 1 == 1)
            .fold(self.all_x(), |acc, a| acc & self.rows[a])
    }

    fn down(&self, y: u32) -> u32 {
        (0..self.m)
            .filter(|x| y >> x & 1 == 1)
            .fold(self.all_a(), |acc, x| acc & self.cols[x])
    }

    fn concepts(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = (0..=self.all_a())
            .filter(|&b| self.down(self.up(b)) == b)
            .map(|b| (b, self.up(b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Relations whose four preimage families are all Galois-stable. The
    /// condition is the same for `R□` and (transposed) `R◇`.
    fn compatible_relations(&self) -> Vec<u64> {
        let bits = self.n * self.m;
        (0..1u64 << bits)
            .filter(|&r| {
                let by_obj = |a: usize| ((r >> (a * self.m)) as u32) & self.all_x();
                let by_feat = |x: usize| {
                    (0..self.n)
                        .filter(|a| r >> (a * self.m + x) & 1 == 1)
                        .fold(0u32, |s, a| s | 1 << a)
                };
                (0..self.n).all(|a| self.up(self.down(by_obj(a))) == by_obj(a))
                    && (0..self.m).all(|x| self.down(self.up(by_feat(x))) == by_feat(x))
            })
            .collect()
    }
}

struct Problem {
    objects: Vec<Individual>,
    features: Vec<Individual>,
    atoms: Vec<Name>,
    box_roles: Vec<RoleIndex>,
    dia_roles: Vec<RoleIndex>,
    abox: Vec<Assertion>,
}

struct State<'a> {
    p: &'a Problem,
    ctx: Ctx,
    concepts: Vec<(u32, u32)>,
    compat: Vec<u64>,
    /// Per role slot (boxes, then diamonds), the compatible relations that
    /// satisfy the ABox's literals on that role under the current mapping.
    candidates: Vec<Vec<u64>>,
    obj_at: Vec<usize>,
    feat_at: Vec<usize>,
    boxes: Vec<u64>,
    dias: Vec<u64>,
    atoms: Vec<(u32, u32)>,
    boxes_fixed: usize,
    dias_fixed: usize,
    atoms_fixed: usize,
    visited: usize,
    budget: usize,
}

fn rgs(k: usize, n: usize, f: &mut dyn FnMut(&[usize]) -> Result<bool, ModelError>) -> Result<bool, ModelError> {
    fn go(
        cur: &mut Vec<usize>,
        k: usize,
        n: usize,
        f: &mut dyn FnMut(&[usize]) -> Result<bool, ModelError>,
    ) -> Result<bool, ModelError> {
        if cur.len() == k {
            return f(cur);
        }
        let next = cur.iter().max().map_or(0, |m| m + 1).min(n - 1);
        for v in 0..=next {
            cur.push(v);
            if go(cur, k, n, f)? {
                return Ok(true);
            }
            cur.pop();
        }
        Ok(false)
    }
    go(&mut Vec::with_capacity(k), k, n, f)
}

impl State<'_> {
    fn tick(&mut self) -> Result<(), ModelError> {
        self.visited += 1;
        if self.visited > self.budget {
            Err(ModelError::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn oi(&self, b: Individual) -> usize {
        self.obj_at[self.p.objects.iter().position(|&o| o == b).expect("object")]
    }

    fn fi(&self, y: Individual) -> usize {
        self.feat_at[self.p.features.iter().position(|&o| o == y).expect("feature")]
    }

    fn rel(&self, r: u64, a: usize, x: usize) -> bool {
        r >> (a * self.ctx.m + x) & 1 == 1
    }

    fn box_rel(&self, i: RoleIndex) -> u64 {
        self.p
            .box_roles
            .iter()
            .position(|&j| j == i)
            .map_or(0, |k| self.boxes[k])
    }

    fn dia_rel(&self, i: RoleIndex) -> u64 {
        self.p
            .dia_roles
            .iter()
            .position(|&j| j == i)
            .map_or(0, |k| self.dias[k])
    }

    fn box_fixed(&self, i: RoleIndex) -> bool {
        self.p
            .box_roles
            .iter()
            .position(|&j| j == i)
            .is_some_and(|k| k < self.boxes_fixed)
    }

    fn dia_fixed(&self, i: RoleIndex) -> bool {
        self.p
            .dia_roles
            .iter()
            .position(|&j| j == i)
            .is_some_and(|k| k < self.dias_fixed)
    }

    /// Bound on the extent of `c` over all completions of the partial
    /// assignment: the least one when `hi` is false, the greatest otherwise.
    /// Every constructor is monotone in its arguments and in `R□`, and
    /// antitone in `R◇`.
    fn extent_bound(&self, c: Concept, hi: bool) -> u32 {
        let ctx = &self.ctx;
        let full = (1u64 << (ctx.n * ctx.m)) - 1;
        match c.kind() {
            ConceptKind::Atomic(n) => {
                let k = self.p.atoms.iter().position(|&a| a == n).expect("atom");
                if k < self.atoms_fixed {
                    self.atoms[k].0
                } else if hi {
                    ctx.all_a()
                } else {
                    ctx.down(ctx.all_x())
                }
            }
            ConceptKind::Meet(l, r) => self.extent_bound(l, hi) & self.extent_bound(r, hi),
            ConceptKind::Join(l, r) => ctx.down(ctx.up(self.extent_bound(l, hi)) & ctx.up(self.extent_bound(r, hi))),
            ConceptKind::Box(i, d) => {
                let rel = if self.box_fixed(i) {
                    self.box_rel(i)
                } else if hi {
                    full
                } else {
                    0
                };
                let int = ctx.up(self.extent_bound(d, hi));
                (0..ctx.n)
                    .filter(|&a| (0..ctx.m).all(|x| int >> x & 1 == 0 || self.rel(rel, a, x)))
                    .fold(0u32, |s, a| s | 1 << a)
            }
            ConceptKind::Diamond(i, d) => {
                let rel = if self.dia_fixed(i) {
                    self.dia_rel(i)
                } else if hi {
                    0
                } else {
                    full
                };
                let ext = self.extent_bound(d, hi);
                let int = (0..ctx.m)
                    .filter(|&x| (0..ctx.n).all(|a| ext >> a & 1 == 0 || self.rel(rel, a, x)))
                    .fold(0u32, |s, x| s | 1 << x);
                ctx.down(int)
            }
        }
    }

    /// `None` when the partial assignment does not decide the assertion.
    fn holds(&self, k: usize) -> Option<bool> {
        let a = self.p.abox[k];
        let v = match a.term() {
            Term::RelI(b, y) => self.ctx.rows[self.oi(b)] >> self.fi(y) & 1 == 1,
            Term::RelBox(b, i, y) if self.box_fixed(i) => self.rel(self.box_rel(i), self.oi(b), self.fi(y)),
            Term::RelDiamond(y, i, b) if self.dia_fixed(i) => self.rel(self.dia_rel(i), self.oi(b), self.fi(y)),
            Term::MemberObj(b, c) => {
                let bit = 1u32 << self.oi(b);
                if self.extent_bound(c, false) & bit != 0 {
                    true
                } else if self.extent_bound(c, true) & bit == 0 {
                    false
                } else {
                    return None;
                }
            }
            Term::MemberFeat(y, c) => {
                // y is in the intent iff the extent lies inside y's column.
                let col = self.ctx.cols[self.fi(y)];
                if self.extent_bound(c, true) & !col == 0 {
                    true
                } else if self.extent_bound(c, false) & !col != 0 {
                    false
                } else {
                    return None;
                }
            }
            _ => return None,
        };
        Some(v != a.is_negative())
    }

    fn consistent(&self) -> bool {
        (0..self.p.abox.len()).all(|k| self.holds(k) != Some(false))
    }

    fn roles(&mut self, k: usize) -> Result<bool, ModelError> {
        let nb = self.p.box_roles.len();
        if k == nb + self.p.dia_roles.len() {
            return Ok(true);
        }
        for idx in 0..self.candidates[k].len() {
            self.tick()?;
            let r = self.candidates[k][idx];
            if k < nb {
                self.boxes[k] = r;
                self.boxes_fixed = k + 1;
            } else {
                self.dias[k - nb] = r;
                self.dias_fixed = k - nb + 1;
            }
            if self.consistent() && self.roles(k + 1)? {
                return Ok(true);
            }
        }
        if k < nb {
            self.boxes_fixed = k;
        } else {
            self.dias_fixed = k - nb;
        }
        Ok(false)
    }

    /// Recomputes `candidates`; false when some role has none left.
    fn filter_candidates(&mut self) -> bool {
        let nb = self.p.box_roles.len();
        let slots = nb + self.p.dia_roles.len();
        self.candidates = (0..slots)
            .map(|k| {
                let lits: Vec<(usize, usize, bool)> = self
                    .p
                    .abox
                    .iter()
                    .filter_map(|a| match a.term() {
                        Term::RelBox(b, i, y) if k < nb && self.p.box_roles[k] == i => {
                            Some((self.oi(b), self.fi(y), !a.is_negative()))
                        }
                        Term::RelDiamond(y, i, b) if k >= nb && self.p.dia_roles[k - nb] == i => {
                            Some((self.oi(b), self.fi(y), !a.is_negative()))
                        }
                        _ => None,
                    })
                    .collect();
                self.compat
                    .iter()
                    .copied()
                    .filter(|&r| lits.iter().all(|&(a, x, pos)| self.rel(r, a, x) == pos))
                    .collect()
            })
            .collect();
        self.candidates.iter().all(|c| !c.is_empty())
    }

    fn atoms(&mut self, k: usize) -> Result<bool, ModelError> {
        if k == self.p.atoms.len() {
            return self.roles(0);
        }
        for idx in 0..self.concepts.len() {
            self.tick()?;
            self.atoms[k] = self.concepts[idx];
            self.atoms_fixed = k + 1;
            if self.consistent() && self.atoms(k + 1)? {
                return Ok(true);
            }
        }
        self.atoms_fixed = k;
        Ok(false)
    }

    fn into_model(self) -> Model {
        let (n, m) = (self.ctx.n, self.ctx.m);
        let pairs = (0..n).flat_map(|a| (0..m).map(move |x| (a, x)));
        let polarity = Polarity::from_pairs(
            (0..n).map(|a| format!("o{a}")).collect(),
            (0..m).map(|x| format!("f{x}")).collect(),
            pairs.filter(|&(a, x)| self.ctx.rows[a] >> x & 1 == 1),
        );
        let relation = |r: u64| {
            let mut rel = Relation::empty(n, m);
            for a in 0..n {
                for x in 0..m {
                    if self.rel(r, a, x) {
                        rel.insert(a, x);
                    }
                }
            }
            rel
        };
        let boxes = self
            .p
            .box_roles
            .iter()
            .zip(&self.boxes)
            .map(|(&i, &r)| (i, relation(r)))
            .collect();
        let dias = self
            .p
            .dia_roles
            .iter()
            .zip(&self.dias)
            .map(|(&i, &r)| (i, relation(r)))
            .collect();
        let mask = |bits: u32, len: usize| {
            let mut s = FixedBitSet::with_capacity(len);
            (0..len).filter(|k| bits >> k & 1 == 1).for_each(|k| s.insert(k));
            s
        };
        let atoms: BTreeMap<Name, Extension> = self
            .p
            .atoms
            .iter()
            .zip(&self.atoms)
            .map(|(&name, &(e, i))| {
                (
                    name,
                    Extension {
                        extent: mask(e, n),
                        intent: mask(i, m),
                    },
                )
            })
            .collect();
        let objects: IndexMap<Individual, usize> = self
            .p
            .objects
            .iter()
            .copied()
            .zip(self.obj_at.iter().copied())
            .collect();
        let features: IndexMap<Individual, usize> = self
            .p
            .features
            .iter()
            .copied()
            .zip(self.feat_at.iter().copied())
            .collect();
        Model::from_parts(polarity, boxes, dias, atoms, objects, features)
    }
}

fn problem(abox: &AssertionSet) -> Problem {
    let mut objects = IndexSet::new();
    let mut features = IndexSet::new();
    let mut atoms = IndexSet::new();
    let mut box_roles = IndexSet::new();
    let mut dia_roles = IndexSet::new();
    for a in abox {
        let t = a.term();
        for ind in t.individuals() {
            match ind.sort() {
                Sort::Object => objects.insert(ind),
                Sort::Feature => features.insert(ind),
            };
        }
        match t {
            Term::RelBox(_, i, _) => {
                box_roles.insert(i);
            }
            Term::RelDiamond(_, i, _) => {
                dia_roles.insert(i);
            }
            _ => {}
        }
        if let Some(c) = t.concept() {
            for s in c.subconcepts() {
                match s.kind() {
                    ConceptKind::Atomic(n) => {
                        atoms.insert(n);
                    }
                    ConceptKind::Box(i, _) => {
                        box_roles.insert(i);
                    }
                    ConceptKind::Diamond(i, _) => {
                        dia_roles.insert(i);
                    }
                    _ => {}
                }
            }
        }
    }
    Problem {
        objects: objects.into_iter().collect(),
        features: features.into_iter().collect(),
        atoms: atoms.into_iter().collect(),
        box_roles: box_roles.into_iter().collect(),
        dia_roles: dia_roles.into_iter().collect(),
        abox: abox.iter().copied().collect(),
    }
}

/// Looks for a model of `abox` over at most `max_objects x max_features`
/// elements. `Ok(None)` means none exists within the bounds, not that the
/// ABox is inconsistent.
pub fn bounded_model_search(abox: &AssertionSet, limits: SearchLimits) -> Result<Option<Model>, ModelError> {
    let p = problem(abox);
    let max_a = limits.max_objects.clamp(1, 8);
    let max_x = limits.max_features.clamp(1, 8);
    let mut visited = 0;
    for n in 1..=max_a {
        for m in 1..=max_x {
            if n * m > 24 {
                continue;
            }
            for inc in 0..1u64 << (n * m) {
                let ctx = Ctx::new(n, m, inc);
                let needs_rel = !(p.box_roles.is_empty() && p.dia_roles.is_empty());
                let mut st = State {
                    p: &p,
                    concepts: ctx.concepts(),
                    compat: if needs_rel {
                        ctx.compatible_relations()
                    } else {
                        Vec::new()
                    },
                    ctx,
                    candidates: Vec::new(),
                    obj_at: Vec::new(),
                    feat_at: Vec::new(),
                    boxes: vec![0; p.box_roles.len()],
                    dias: vec![0; p.dia_roles.len()],
                    atoms: vec![(0, 0); p.atoms.len()],
                    boxes_fixed: 0,
                    dias_fixed: 0,
                    atoms_fixed: 0,
                    visited,
                    budget: limits.budget,
                };
                st.tick()?;
                let mut found = None;
                let ok = rgs(p.objects.len(), n, &mut |oa| {
                    st.obj_at = oa.to_vec();
                    rgs(p.features.len(), m, &mut |fa| {
                        st.feat_at = fa.to_vec();
                        st.tick()?;
                        st.boxes_fixed = 0;
                        st.dias_fixed = 0;
                        st.atoms_fixed = 0;
                        if !st.consistent() || !st.filter_candidates() {
                            return Ok(false);
                        }
                        if st.atoms(0)? {
                            found = Some((st.obj_at.clone(), st.feat_at.clone()));
                            return Ok(true);
                        }
                        Ok(false)
                    })
                })?;
                visited = st.visited;
                if ok {
                    let (oa, fa) = found.expect("found");
                    st.obj_at = oa;
                    st.feat_at = fa;
                    return Ok(Some(st.into_model()));
                }
            }
        }
    }
    Ok(None)
}
