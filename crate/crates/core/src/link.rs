//! The triple-intersection link `B` as a set of labeled components.
//!
//! Labels are `c0`, `c1`, ... handed out from a counter that only moves
//! forward, so a label is never reused. Every split or merge is logged in a
//! genealogy that replays to the current component set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Opaque link-component identifier, written `c<N>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(pub u32);

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl FromStr for ComponentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('c')
            .filter(|digits| !digits.is_empty() && digits.bytes().all(|d| d.is_ascii_digit()))
            .and_then(|digits| digits.parse().ok())
            .map(ComponentId)
            .ok_or_else(|| Error::Format(format!("bad component identifier {s:?}")))
    }
}

impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComponentId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenealogyKind {
    Initial,
    Split,
    Merge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenealogyEvent {
    pub kind: GenealogyKind,
    pub parents: Vec<ComponentId>,
    pub children: Vec<ComponentId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkComponentSet {
    components: BTreeSet<ComponentId>,
    next_id: u32,
    genealogy: Vec<GenealogyEvent>,
}

impl LinkComponentSet {
    /// `b` fresh components `c0..c{b-1}`.
    pub fn new(b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidState("a link has at least one component".into()));
        }
        let components: BTreeSet<_> = (0..b).map(ComponentId).collect();
        Ok(LinkComponentSet {
            genealogy: vec![GenealogyEvent {
                kind: GenealogyKind::Initial,
                parents: vec![],
                children: components.iter().copied().collect(),
            }],
            components,
            next_id: b,
        })
    }

    /// Rebuilds a set whose earliest known components are `initial`.
    pub fn from_initial(initial: BTreeSet<ComponentId>, next_id: u32) -> Result<Self> {
        if initial.is_empty() {
            return Err(Error::InvalidState("a link has at least one component".into()));
        }
        if let Some(bad) = initial.iter().find(|c| c.0 >= next_id) {
            return Err(Error::InvalidState(format!("component {bad} is not below next_id {next_id}")));
        }
        Ok(LinkComponentSet {
            genealogy: vec![GenealogyEvent {
                kind: GenealogyKind::Initial,
                parents: vec![],
                children: initial.iter().copied().collect(),
            }],
            components: initial,
            next_id,
        })
    }

    pub fn len(&self) -> u32 {
        self.components.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, c: ComponentId) -> bool {
        self.components.contains(&c)
    }

    pub fn components(&self) -> impl Iterator<Item = ComponentId> + '_ {
        self.components.iter().copied()
    }

    pub fn next_id(&self) -> u32 {
        self.next_id
    }

    pub fn genealogy(&self) -> &[GenealogyEvent] {
        &self.genealogy
    }

    pub fn smallest(&self) -> ComponentId {
        *self.components.first().expect("link is never empty")
    }

    pub fn smallest_pair(&self) -> Option<(ComponentId, ComponentId)> {
        let mut it = self.components.iter().copied();
        Some((it.next()?, it.next()?))
    }

    /// All unordered pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> Vec<(ComponentId, ComponentId)> {
        let v: Vec<_> = self.components().collect();
        let mut out = Vec::with_capacity(v.len() * v.len().saturating_sub(1) / 2);
        for (i, &a) in v.iter().enumerate() {
            for &b in &v[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }

    fn fresh(&mut self) -> ComponentId {
        let id = ComponentId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Replaces `c` by two fresh components.
    pub fn split(&mut self, c: ComponentId) -> Result<[ComponentId; 2]> {
        if !self.components.remove(&c) {
            return Err(Error::illegal(format!("no link component {c}")));
        }
        let children = [self.fresh(), self.fresh()];
        self.components.extend(children);
        self.genealogy.push(GenealogyEvent {
            kind: GenealogyKind::Split,
            parents: vec![c],
            children: children.to_vec(),
        });
        Ok(children)
    }

    /// Replaces two distinct components by one fresh component.
    pub fn merge(&mut self, a: ComponentId, b: ComponentId) -> Result<ComponentId> {
        if a == b {
            return Err(Error::illegal(format!("cannot merge {a} with itself")));
        }
        for c in [a, b] {
            if !self.contains(c) {
                return Err(Error::illegal(format!("no link component {c}")));
            }
        }
        self.components.remove(&a);
        self.components.remove(&b);
        let child = self.fresh();
        self.components.insert(child);
        self.genealogy.push(GenealogyEvent {
            kind: GenealogyKind::Merge,
            parents: vec![a.min(b), a.max(b)],
            children: vec![child],
        });
        Ok(child)
    }

    /// Folds the genealogy from scratch.
    pub fn replay_genealogy(&self) -> Result<BTreeSet<ComponentId>> {
        let mut live = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for ev in &self.genealogy {
            for p in &ev.parents {
                if !live.remove(p) {
                    return Err(Error::InvalidState(format!("genealogy consumes dead component {p}")));
                }
            }
            for c in &ev.children {
                if !seen.insert(*c) {
                    return Err(Error::InvalidState(format!("component {c} created twice")));
                }
                live.insert(*c);
            }
        }
        Ok(live)
    }
}
