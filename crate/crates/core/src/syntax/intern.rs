//! Process-wide hash-consing tables.
//!
//! Concepts, individuals and names are interned once and referred to by a
//! `u32` handle afterwards, so structural equality is handle equality. The
//! tables are append-only; handles stay valid for the life of the process.

use std::hash::Hash;
use std::sync::{LazyLock, RwLock};

use rustc_hash::FxHashMap;

pub(crate) struct Table<T> {
    items: Vec<T>,
    ids: FxHashMap<T, u32>,
}

impl<T: Clone + Eq + Hash> Table<T> {
    fn new() -> Self {
        Table {
            items: Vec::new(),
            ids: FxHashMap::default(),
        }
    }

    pub(crate) fn get(&self, id: u32) -> &T {
        &self.items[id as usize]
    }

    pub(crate) fn lookup(&self, item: &T) -> Option<u32> {
        self.ids.get(item).copied()
    }

    fn insert(&mut self, item: T) -> u32 {
        if let Some(&id) = self.ids.get(&item) {
            return id;
        }
        let id = u32::try_from(self.items.len()).expect("interner overflow");
        self.items.push(item.clone());
        self.ids.insert(item, id);
        id
    }
}

pub(crate) struct Interner<T>(RwLock<Table<T>>);

impl<T: Clone + Eq + Hash> Interner<T> {
    pub(crate) fn new() -> Self {
        Interner(RwLock::new(Table::new()))
    }

    pub(crate) fn intern(&self, item: T) -> u32 {
        if let Some(id) = self.read(|t| t.lookup(&item)) {
            return id;
        }
        self.0.write().expect("interner poisoned").insert(item)
    }

    pub(crate) fn read<R>(&self, f: impl FnOnce(&Table<T>) -> R) -> R {
        f(&self.0.read().expect("interner poisoned"))
    }
}

static NAMES: LazyLock<Interner<&'static str>> = LazyLock::new(Interner::new);

/// An interned identifier for a concept or individual name.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Name(u32);

impl Name {
    pub fn new(text: &str) -> Name {
        if let Some(id) = NAMES.read(|t| t.lookup(&text)) {
            return Name(id);
        }
        let leaked: &'static str = Box::leak(text.to_owned().into_boxed_str());
        Name(NAMES.intern(leaked))
    }

    pub fn as_str(self) -> &'static str {
        NAMES.read(|t| *t.get(self.0))
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl std::fmt::Debug for Name {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl std::fmt::Display for Name {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}
