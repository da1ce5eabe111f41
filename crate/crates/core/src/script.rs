//! Move records and replayable scripts.
//!
//! Wire shape of one record:
//! `{"op":"stab","handlebody":3,"arc":{"same":"c0"},"created":["c1","c2"],"removed":["c0"]}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::link::ComponentId;
use crate::profile::Handlebody;

/// Arc class in the surface opposite the stabilized handlebody.
///
/// For a stabilization, `Same(c)` is a nonseparating arc with both ends on
/// `c` and `Distinct(a, b)` joins two different components. A destabilization
/// names the components its pinch consumes: `Distinct(a, b)` re-merges two
/// components (undoing a `Same` stabilization) and `Same(c)` splits `c`
/// (undoing a `Distinct` stabilization).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arc {
    Same(ComponentId),
    Distinct(ComponentId, ComponentId),
}

impl Arc {
    /// Unordered pair, stored smaller label first.
    pub fn distinct(a: ComponentId, b: ComponentId) -> Arc {
        Arc::Distinct(a.min(b), a.max(b))
    }

    pub fn kind(&self) -> ArcKind {
        match self {
            Arc::Same(_) => ArcKind::Same,
            Arc::Distinct(..) => ArcKind::Distinct,
        }
    }

    pub fn normalized(self) -> Arc {
        match self {
            Arc::Distinct(a, b) => Arc::distinct(a, b),
            same => same,
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arc::Same(c) => write!(f, "same:{c}"),
            Arc::Distinct(a, b) => write!(f, "distinct:{a},{b}"),
        }
    }
}

impl std::str::FromStr for Arc {
    type Err = crate::error::Error;

    /// Parses `same:cK` or `distinct:cK,cL`.
    fn from_str(s: &str) -> crate::error::Result<Arc> {
        let bad = || crate::error::Error::Format(format!("arc must be same:cK or distinct:cK,cL, got {s:?}"));
        match s.split_once(':') {
            Some(("same", c)) => Ok(Arc::Same(c.parse()?)),
            Some(("distinct", pair)) => {
                let (a, b) = pair.split_once(',').ok_or_else(bad)?;
                Ok(Arc::distinct(a.parse()?, b.parse()?))
            }
            _ => Err(bad()),
        }
    }
}

/// Arc class with component labels erased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    Same,
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StabMove {
    pub handlebody: Handlebody,
    pub arc: Arc,
}

impl StabMove {
    pub fn new(handlebody: Handlebody, arc: Arc) -> Self {
        StabMove { handlebody, arc: arc.normalized() }
    }
}

impl fmt::Display for StabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stab {} along {} in {}", self.handlebody, self.arc, self.handlebody.opposite())
    }
}

/// Formal inverse of a stabilization; see [`Arc`] for how the components are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DestabMove {
    pub handlebody: Handlebody,
    pub arc: Arc,
}

impl DestabMove {
    pub fn new(handlebody: Handlebody, arc: Arc) -> Self {
        DestabMove { handlebody, arc: arc.normalized() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveOp {
    Stab,
    Destab,
    /// One of the two stabilizations making up a fake Heegaard stabilization.
    FakeStab,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRecord {
    pub op: MoveOp,
    pub handlebody: Handlebody,
    pub arc: Arc,
    pub created: Vec<ComponentId>,
    pub removed: Vec<ComponentId>,
}

impl MoveRecord {
    pub fn is_stabilization(&self) -> bool {
        matches!(self.op, MoveOp::Stab | MoveOp::FakeStab)
    }

    /// The destabilization undoing this stabilization record.
    pub fn inverse(&self) -> Option<DestabMove> {
        if !self.is_stabilization() {
            return None;
        }
        match (self.arc, self.created.as_slice()) {
            (Arc::Same(_), [a, b]) => Some(DestabMove::new(self.handlebody, Arc::distinct(*a, *b))),
            (Arc::Distinct(..), [c]) => Some(DestabMove::new(self.handlebody, Arc::Same(*c))),
            _ => None,
        }
    }
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            MoveOp::Stab => "stab",
            MoveOp::Destab => "destab",
            MoveOp::FakeStab => "fake_stab",
        };
        write!(f, "{op} {} {}", self.handlebody, self.arc)
    }
}

/// Ordered, replayable list of move records.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveScript(pub Vec<MoveRecord>);

impl MoveScript {
    pub fn new() -> Self {
        MoveScript(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn records(&self) -> &[MoveRecord] {
        &self.0
    }

    pub fn push(&mut self, r: MoveRecord) {
        self.0.push(r);
    }

    pub fn extend(&mut self, other: &MoveScript) {
        self.0.extend(other.0.iter().cloned());
    }

    /// Records from index `from` onward.
    pub fn tail(&self, from: usize) -> MoveScript {
        MoveScript(self.0[from..].to_vec())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MoveRecord> {
        self.0.iter()
    }

    pub fn only_stabilizations(&self) -> bool {
        self.0.iter().all(MoveRecord::is_stabilization)
    }
}

impl<'a> IntoIterator for &'a MoveScript {
    type Item = &'a MoveRecord;
    type IntoIter = std::slice::Iter<'a, MoveRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_wire_shape() {
        let r = MoveRecord {
            op: MoveOp::FakeStab,
            handlebody: Handlebody::H1,
            arc: Arc::distinct(ComponentId(2), ComponentId(1)),
            created: vec![ComponentId(3)],
            removed: vec![ComponentId(1), ComponentId(2)],
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"op":"fake_stab","handlebody":1,"arc":{"distinct":["c1","c2"]},"created":["c3"],"removed":["c1","c2"]}"#
        );
        assert_eq!(serde_json::from_str::<MoveRecord>(&s).unwrap(), r);
        let same = r#"{"op":"stab","handlebody":3,"arc":{"same":"c0"},"created":["c1","c2"],"removed":["c0"]}"#;
        let parsed: MoveRecord = serde_json::from_str(same).unwrap();
        assert_eq!(parsed.arc, Arc::Same(ComponentId(0)));
        let extra = same.replace("\"removed\"", "\"bogus\":1,\"removed\"");
        assert!(serde_json::from_str::<MoveRecord>(&extra).is_err());
    }

    #[test]
    fn arc_cli_syntax() {
        assert_eq!("same:c3".parse::<Arc>().unwrap(), Arc::Same(ComponentId(3)));
        assert_eq!(
            "distinct:c4,c1".parse::<Arc>().unwrap(),
            Arc::Distinct(ComponentId(1), ComponentId(4))
        );
        for bad in ["same", "same:", "distinct:c1", "other:c1", "same:3"] {
            assert!(bad.parse::<Arc>().is_err(), "{bad}");
        }
    }

    #[test]
    fn inverse_swaps_arc_shape() {
        let same = MoveRecord {
            op: MoveOp::Stab,
            handlebody: Handlebody::H3,
            arc: Arc::Same(ComponentId(0)),
            created: vec![ComponentId(1), ComponentId(2)],
            removed: vec![ComponentId(0)],
        };
        assert_eq!(
            same.inverse(),
            Some(DestabMove::new(Handlebody::H3, Arc::distinct(ComponentId(1), ComponentId(2))))
        );
        let destab = MoveRecord { op: MoveOp::Destab, ..same };
        assert_eq!(destab.inverse(), None);
    }
}
