//! Process-wide interning of structured values.
//!
//! Every distinct [`Value`] receives a fresh [`CanonicalId`] the first time it
//! is interned; later lookups of a structurally equal value return the same id.
//! This is the constructive stand-in for every "injective function" the models
//! require: two ids are equal exactly when the interned values are equal.
//!
//! Ids are scoped to one process run. Compare ids only against ids produced in
//! the same run.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::LazyLock;

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use serde::Serialize;

use crate::injective::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalId(pub u64);

impl fmt::Display for CanonicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Structured value accepted by [`intern`].
///
/// Multisets are represented as `Tuple`s whose elements the caller has sorted;
/// [`Value::multiset`] does the sorting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(u64),
    Id(CanonicalId),
    Tag(&'static str),
    Tuple(Vec<Value>),
    Scalar(ExactScalar),
}

impl Value {
    pub fn ints(xs: &[u64]) -> Value {
        Value::Tuple(xs.iter().copied().map(Value::Int).collect())
    }

    pub fn multiset(mut items: Vec<Value>) -> Value {
        items.sort_unstable();
        Value::Tuple(items)
    }

    pub fn tagged(tag: &'static str, mut rest: Vec<Value>) -> Value {
        rest.insert(0, Value::Tag(tag));
        Value::Tuple(rest)
    }
}

impl From<CanonicalId> for Value {
    fn from(id: CanonicalId) -> Self {
        Value::Id(id)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(x) => write!(f, "{x}"),
            Value::Id(id) => write!(f, "{id}"),
            Value::Tag(t) => write!(f, "{t}"),
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Registry {
    ids: DashMap<Value, CanonicalId>,
    next: AtomicU64,
}

static REGISTRY: LazyLock<Registry> = LazyLock::new(|| Registry {
    ids: DashMap::new(),
    next: AtomicU64::new(0),
});

/// Returns the canonical id of `value`, assigning a fresh one on first sight.
///
/// Safe under concurrent insertion: the shard lock held by the entry API makes
/// the first writer's id the one every caller observes.
pub fn intern(value: Value) -> CanonicalId {
    let reg = &*REGISTRY;
    if let Some(id) = reg.ids.get(&value) {
        return *id;
    }
    match reg.ids.entry(value) {
        Entry::Occupied(o) => *o.get(),
        Entry::Vacant(v) => {
            let id = CanonicalId(reg.next.fetch_add(1, Ordering::Relaxed));
            v.insert(id);
            id
        }
    }
}

/// Number of distinct values interned so far in this process.
pub fn registry_len() -> usize {
    REGISTRY.ids.len()
}
