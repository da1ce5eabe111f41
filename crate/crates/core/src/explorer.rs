//! Brute-force search over the stabilization graph on parameter states.
//!
//! Nodes are `(g12, g13, g23, b)` with link labels erased: two `Same` moves
//! on different components have the same parameter effect, so the labeled
//! genealogies collapse onto a small lattice. Every edge raises `h1+h2+h3` by
//! exactly one, so BFS layers are the level sets of that sum.
//!
//! The successor table here is written out independently of
//! [`crate::moves`]; tests use it as the oracle for the labeled engine.
//! Results describe the parameter shadow only; isotopy is not modeled.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::moves::{apply_stabilization, balance, build_heegaard};
use crate::profile::{is_feasible, Handlebody, Profile, SurfaceGenera};
use crate::script::{Arc, ArcKind, MoveScript, StabMove};
use crate::state::TrisectionState;

/// A trisection state modulo link-component labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveGraphNode {
    pub g12: u32,
    pub g13: u32,
    pub g23: u32,
    pub b: u32,
}

impl MoveGraphNode {
    pub const TRIVIAL: MoveGraphNode = MoveGraphNode { g12: 0, g13: 0, g23: 0, b: 1 };

    pub const fn new(g12: u32, g13: u32, g23: u32, b: u32) -> Self {
        MoveGraphNode { g12, g13, g23, b }
    }

    pub fn from_state(s: &TrisectionState) -> Self {
        let g = s.genera();
        MoveGraphNode::new(g.g12, g.g13, g.g23, s.b())
    }

    pub fn from_profile(p: &Profile) -> Result<Self> {
        let g = crate::profile::genera_from_profile(p)?;
        Ok(MoveGraphNode::new(g.g12, g.g13, g.g23, p.b))
    }

    pub fn genera(&self) -> SurfaceGenera {
        SurfaceGenera::new(self.g12, self.g13, self.g23)
    }

    /// `h_i = g_ij + g_ik + b - 1`, written out directly.
    pub fn profile(&self) -> Profile {
        let c = self.b - 1;
        Profile::new(self.g12 + self.g13 + c, self.g12 + self.g23 + c, self.g13 + self.g23 + c, self.b)
    }

    pub fn sum_h(&self) -> u32 {
        2 * (self.g12 + self.g13 + self.g23) + 3 * (self.b - 1)
    }

    pub fn is_trivial(&self) -> bool {
        *self == MoveGraphNode::TRIVIAL
    }

    /// Labeled state with components `c0..c{b-1}`.
    pub fn to_state(&self, label: impl Into<String>) -> TrisectionState {
        TrisectionState::new(self.genera(), self.b, label).expect("b >= 1")
    }

    /// All stabilization successors, in handlebody order, `Same` before `Distinct`.
    pub fn successors(&self) -> Vec<(NodeMove, MoveGraphNode)> {
        let MoveGraphNode { g12, g13, g23, b } = *self;
        let mut out = Vec::with_capacity(6);
        // H1 uses arcs in S23, H2 in S13, H3 in S12.
        if g23 >= 1 {
            out.push((NodeMove::same(Handlebody::H1), MoveGraphNode::new(g12, g13, g23 - 1, b + 1)));
        }
        if b >= 2 {
            out.push((NodeMove::distinct(Handlebody::H1), MoveGraphNode::new(g12 + 1, g13 + 1, g23, b - 1)));
        }
        if g13 >= 1 {
            out.push((NodeMove::same(Handlebody::H2), MoveGraphNode::new(g12, g13 - 1, g23, b + 1)));
        }
        if b >= 2 {
            out.push((NodeMove::distinct(Handlebody::H2), MoveGraphNode::new(g12 + 1, g13, g23 + 1, b - 1)));
        }
        if g12 >= 1 {
            out.push((NodeMove::same(Handlebody::H3), MoveGraphNode::new(g12 - 1, g13, g23, b + 1)));
        }
        if b >= 2 {
            out.push((NodeMove::distinct(Handlebody::H3), MoveGraphNode::new(g12, g13 + 1, g23 + 1, b - 1)));
        }
        out
    }

    /// Smallest node among the six handlebody relabelings.
    pub fn canonical_under_relabeling(&self) -> MoveGraphNode {
        let MoveGraphNode { g12, g13, g23, b } = *self;
        // Permuting handlebodies permutes the three surfaces the same way.
        [
            (g12, g13, g23),
            (g12, g23, g13),
            (g13, g12, g23),
            (g13, g23, g12),
            (g23, g12, g13),
            (g23, g13, g12),
        ]
        .into_iter()
        .map(|(x, y, z)| MoveGraphNode::new(x, y, z, b))
        .min()
        .expect("six permutations")
    }
}

impl fmt::Display for MoveGraphNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{};b={}]", self.g12, self.g13, self.g23, self.b)
    }
}

/// Label-free stabilization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeMove {
    pub handlebody: Handlebody,
    pub kind: ArcKind,
}

impl NodeMove {
    pub fn same(handlebody: Handlebody) -> Self {
        NodeMove { handlebody, kind: ArcKind::Same }
    }

    pub fn distinct(handlebody: Handlebody) -> Self {
        NodeMove { handlebody, kind: ArcKind::Distinct }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExploreOptions {
    /// Identify nodes that differ by a relabeling of the handlebodies.
    pub relabel_quotient: bool,
    /// Worker threads for frontier expansion and property checks; 0 or 1 runs inline.
    pub threads: usize,
}

impl ExploreOptions {
    fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        if self.threads > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .expect("thread pool")
                .install(f)
        } else {
            f()
        }
    }

    fn key(&self, n: MoveGraphNode) -> MoveGraphNode {
        if self.relabel_quotient {
            n.canonical_under_relabeling()
        } else {
            n
        }
    }
}

/// BFS layers from `start`: layer `k` holds the nodes at graph distance `k`
/// with `sum_h <= max_sum`.
pub fn bfs_layers(start: MoveGraphNode, max_sum: u32, opts: &ExploreOptions) -> Vec<BTreeSet<MoveGraphNode>> {
    let start = opts.key(start);
    let mut layers = vec![BTreeSet::from([start])];
    let mut seen = BTreeSet::from([start]);
    loop {
        let frontier: Vec<MoveGraphNode> = layers.last().expect("nonempty").iter().copied().collect();
        let expand = |n: &MoveGraphNode| -> Vec<MoveGraphNode> {
            n.successors()
                .into_iter()
                .map(|(_, m)| opts.key(m))
                .filter(|m| m.sum_h() <= max_sum)
                .collect()
        };
        let next: Vec<MoveGraphNode> = if opts.threads > 1 {
            opts.run(|| frontier.par_iter().flat_map_iter(expand).collect())
        } else {
            frontier.iter().flat_map(expand).collect()
        };
        let layer: BTreeSet<_> = next.into_iter().filter(|m| !seen.contains(m)).collect();
        if layer.is_empty() {
            return layers;
        }
        seen.extend(layer.iter().copied());
        layers.push(layer);
    }
}

pub fn bfs_reachable(start: MoveGraphNode, max_sum: u32) -> BTreeSet<MoveGraphNode> {
    bfs_reachable_with(start, max_sum, &ExploreOptions::default())
}

pub fn bfs_reachable_with(start: MoveGraphNode, max_sum: u32, opts: &ExploreOptions) -> BTreeSet<MoveGraphNode> {
    bfs_layers(start, max_sum, opts).into_iter().flatten().collect()
}

/// Minimum-length label-free path, or `None` if `to` is not reachable in at
/// most `depth_bound` stabilizations.
pub fn shortest_path(from: MoveGraphNode, to: MoveGraphNode, depth_bound: u32) -> Option<Vec<NodeMove>> {
    if from == to {
        return Some(Vec::new());
    }
    // Every move adds one to sum_h, so the distance is fixed if reachable.
    if to.sum_h() < from.sum_h() || to.sum_h() - from.sum_h() > depth_bound {
        return None;
    }
    let max_sum = to.sum_h();
    let mut parent: HashMap<MoveGraphNode, (MoveGraphNode, NodeMove)> = HashMap::new();
    let mut frontier = vec![from];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for n in &frontier {
            for (mv, m) in n.successors() {
                if m.sum_h() > max_sum || m == from || parent.contains_key(&m) {
                    continue;
                }
                parent.insert(m, (*n, mv));
                if m == to {
                    let mut path = vec![mv];
                    let mut cur = *n;
                    while cur != from {
                        let (p, pm) = parent[&cur];
                        path.push(pm);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                next.push(m);
            }
        }
        frontier = next;
    }
    None
}

/// Applies a label-free path to a labeled state with canonical component
/// choices, returning the resulting script.
pub fn realize(state: &TrisectionState, path: &[NodeMove]) -> Result<MoveScript> {
    let start = state.history().len();
    let mut s = state.clone();
    for mv in path {
        let arc = match mv.kind {
            ArcKind::Same => Arc::Same(s.link().smallest()),
            ArcKind::Distinct => {
                let (a, b) = s.link().smallest_pair().ok_or_else(|| {
                    crate::error::Error::illegal(format!("{} needs b >= 2", mv.handlebody))
                })?;
                Arc::Distinct(a, b)
            }
        };
        s = apply_stabilization(&s, &StabMove::new(mv.handlebody, arc))?;
    }
    Ok(s.history().tail(start))
}

/// Shortest stabilization script between two nodes, realized on the
/// canonical labeled state of `from`.
pub fn shortest_script(from: MoveGraphNode, to: MoveGraphNode, depth_bound: u32) -> Option<MoveScript> {
    let path = shortest_path(from, to, depth_bound)?;
    Some(realize(&from.to_state("explorer"), &path).expect("graph paths are legal"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonStabilization {
    pub node: MoveGraphNode,
    pub script_a: MoveScript,
    pub script_b: MoveScript,
}

/// A common stabilization with minimal `sum_h <= bound` (ties broken
/// lexicographically), with witness scripts from each side.
pub fn common_stabilization_search(a: MoveGraphNode, b: MoveGraphNode, bound: u32) -> Option<CommonStabilization> {
    let ra = bfs_reachable(a, bound);
    let rb = bfs_reachable(b, bound);
    let node = ra.intersection(&rb).copied().min_by_key(|n| (n.sum_h(), *n))?;
    let script_a = shortest_script(a, node, bound)?;
    let script_b = shortest_script(b, node, bound)?;
    Some(CommonStabilization { node, script_a, script_b })
}

/// Every node with `sum_h <= max_sum`, in lexicographic order.
pub fn nodes_up_to(max_sum: u32) -> Vec<MoveGraphNode> {
    let mut out = Vec::new();
    let max_b = max_sum / 3 + 1;
    for g12 in 0..=max_sum / 2 {
        for g13 in 0..=max_sum / 2 {
            for g23 in 0..=max_sum / 2 {
                for b in 1..=max_b {
                    let n = MoveGraphNode::new(g12, g13, g23, b);
                    if n.sum_h() <= max_sum {
                        out.push(n);
                    }
                }
            }
        }
    }
    out
}

/// Transitive closure of the move graph restricted to `sum_h <= bound`,
/// one bitset per node. Indices are ordered by `(sum_h, node)`, so the first
/// common bit of two rows is the minimal common stabilization.
pub struct ReachTable {
    nodes: Vec<MoveGraphNode>,
    index: HashMap<MoveGraphNode, usize>,
    reach: Vec<FixedBitSet>,
}

impl ReachTable {
    pub fn new(bound: u32) -> Self {
        let mut nodes = nodes_up_to(bound);
        nodes.sort_by_key(|n| (n.sum_h(), *n));
        let index: HashMap<_, _> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut reach = vec![FixedBitSet::with_capacity(nodes.len()); nodes.len()];
        // Successors have larger sum_h, hence larger index.
        for i in (0..nodes.len()).rev() {
            let mut row = FixedBitSet::with_capacity(nodes.len());
            row.insert(i);
            for (_, m) in nodes[i].successors() {
                if let Some(&j) = index.get(&m) {
                    row.union_with(&reach[j]);
                }
            }
            reach[i] = row;
        }
        ReachTable { nodes, index, reach }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn reachable(&self, n: MoveGraphNode) -> Option<impl Iterator<Item = MoveGraphNode> + '_> {
        let i = *self.index.get(&n)?;
        Some(self.reach[i].ones().map(|j| self.nodes[j]))
    }

    pub fn first_common(&self, a: MoveGraphNode, b: MoveGraphNode) -> Option<MoveGraphNode> {
        let (i, j) = (*self.index.get(&a)?, *self.index.get(&b)?);
        self.reach[i]
            .as_slice()
            .iter()
            .zip(self.reach[j].as_slice())
            .enumerate()
            .find_map(|(w, (x, y))| {
                let both = x & y;
                (both != 0).then(|| w * usize::BITS as usize + both.trailing_zeros() as usize)
            })
            .map(|k| self.nodes[k])
    }
}

/// Extra headroom above `max_sum` allowed when looking for a common
/// stabilization of two nodes with `sum_h <= max_sum`. Exhaustive runs show
/// the worst pair, e.g. `[0,0,n/2;1]` against `[0,n/2,0;1]`, meets at
/// `sum_h = 1.5 n`.
pub fn common_stabilization_slack(max_sum: u32) -> u32 {
    max_sum.div_ceil(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Counterexample {
    Node(MoveGraphNode),
    Profile(Profile),
    Pair(MoveGraphNode, MoveGraphNode),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRange {
    pub max_sum: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub property: String,
    pub range: PropertyRange,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: u32,
    pub scope: String,
    pub max_sum: u32,
    pub slack: u32,
    pub properties: Vec<PropertyResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn get(&self, property: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.property == property)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

const MAX_COUNTEREXAMPLES: usize = 20;

fn result(property: &str, range: PropertyRange, mut bad: Vec<Counterexample>) -> PropertyResult {
    let pass = bad.is_empty();
    bad.truncate(MAX_COUNTEREXAMPLES);
    PropertyResult { property: property.to_string(), range, pass, counterexamples: bad }
}

pub const BALANCE_REACHABILITY_CAP: u32 = 12;

pub mod property {
    pub const FEASIBILITY_PARITY: &str = "feasibility_parity";
    pub const BALANCE_POSTCONDITIONS: &str = "balance_postconditions";
    pub const BALANCE_REACHABLE: &str = "balance_bfs_reachable";
    pub const BUILT_HEEGAARD: &str = "built_heegaard_splitting";
    pub const TRIVIAL_UNIQUE_MOVELESS: &str = "trivial_unique_moveless";
    pub const COMMON_STABILIZATION: &str = "common_stabilization";
}

/// Profiles with `sum_h <= max_sum`: the feasibility predicate must agree
/// with the image of forward enumeration, and balanced `(h;b)` must be
/// feasible exactly when `h + b` is odd and `b <= h + 1`.
fn check_feasibility(max_sum: u32, nodes: &[MoveGraphNode]) -> Vec<Counterexample> {
    let image: BTreeSet<Profile> = nodes.iter().map(|n| n.profile()).collect();
    let mut bad = Vec::new();
    for h1 in 0..=max_sum {
        for h2 in 0..=max_sum - h1 {
            for h3 in 0..=max_sum - h1 - h2 {
                for b in 1..=max_sum + 2 {
                    let p = Profile::new(h1, h2, h3, b);
                    let feasible = is_feasible(&p);
                    let mut ok = feasible == image.contains(&p);
                    if p.is_balanced() {
                        ok &= feasible == ((h1 + b) % 2 == 1 && b <= h1 + 1);
                    }
                    if !ok {
                        bad.push(Counterexample::Profile(p));
                    }
                }
            }
        }
    }
    bad
}

fn check_balance(n: MoveGraphNode) -> bool {
    let s = n.to_state("verify");
    let p = n.profile();
    let Ok((out, script)) = balance(&s) else {
        return false;
    };
    let q = out.profile();
    q.is_balanced()
        && q.h1 == p.max_h()
        && q.b <= p.b.max(2)
        && script.len() as u32 == 3 * p.max_h() - p.sum_h()
        && script.only_stabilizations()
        && out.euler_defect() == 0
}

fn check_balance_reachable(n: MoveGraphNode) -> bool {
    let Ok((out, _)) = balance(&n.to_state("verify")) else {
        return false;
    };
    let target = MoveGraphNode::from_state(&out);
    bfs_reachable(n, target.sum_h()).contains(&target)
}

fn check_built_heegaard(n: MoveGraphNode) -> bool {
    let s = n.to_state("verify");
    let p = n.profile();
    Handlebody::ALL.into_iter().all(|i| {
        let opposite = i.opposite();
        let Ok((out, genus, script)) = build_heegaard(&s, i) else {
            return false;
        };
        let others: u32 = Handlebody::ALL.iter().filter(|&&h| h != i).map(|&h| p.h(h)).sum();
        let mut ok = script.len() as u32 == 2 * s.genera().get(opposite) + p.b - 1
            && genus == others
            && out.handlebody_genus(i) == genus
            && out.genera().get(opposite) == 0
            && out.b() == 1;
        if p.is_balanced() {
            ok &= script.len() as u32 == p.h1 && genus == 2 * p.h1;
        }
        ok
    })
}

/// Exhaustive check of the arithmetic claims over every node with
/// `sum_h <= max_sum`.
pub fn verify_properties(max_sum: u32, opts: &ExploreOptions) -> VerificationReport {
    let nodes = nodes_up_to(max_sum);
    let range = PropertyRange { max_sum, search_bound: None };
    let mut properties = Vec::new();

    properties.push(result(property::FEASIBILITY_PARITY, range.clone(), check_feasibility(max_sum, &nodes)));

    let failing = |check: fn(MoveGraphNode) -> bool, subset: &[MoveGraphNode]| -> Vec<Counterexample> {
        opts.run(|| {
            subset
                .par_iter()
                .filter(|&&n| !check(n))
                .map(|&n| Counterexample::Node(n))
                .collect()
        })
    };
    properties.push(result(property::BALANCE_POSTCONDITIONS, range.clone(), failing(check_balance, &nodes)));

    let cap = max_sum.min(BALANCE_REACHABILITY_CAP);
    let small: Vec<_> = nodes.iter().copied().filter(|n| n.sum_h() <= cap).collect();
    properties.push(result(
        property::BALANCE_REACHABLE,
        PropertyRange { max_sum: cap, search_bound: None },
        failing(check_balance_reachable, &small),
    ));

    properties.push(result(property::BUILT_HEEGAARD, range.clone(), failing(check_built_heegaard, &nodes)));

    let moveless: Vec<_> = nodes.iter().copied().filter(|n| n.successors().is_empty()).collect();
    let bad = if moveless == [MoveGraphNode::TRIVIAL] {
        Vec::new()
    } else {
        moveless.into_iter().filter(|n| !n.is_trivial()).map(Counterexample::Node).collect::<Vec<_>>()
    };
    let bad = if bad.is_empty() && !nodes.contains(&MoveGraphNode::TRIVIAL) {
        vec![Counterexample::Node(MoveGraphNode::TRIVIAL)]
    } else {
        bad
    };
    properties.push(result(property::TRIVIAL_UNIQUE_MOVELESS, range.clone(), bad));

    let slack = common_stabilization_slack(max_sum);
    let bound = max_sum + slack;
    let table = ReachTable::new(bound);
    let nontrivial: Vec<_> = nodes.iter().copied().filter(|n| !n.is_trivial()).collect();
    let mut bad: Vec<Counterexample> = opts.run(|| {
        nontrivial
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, &a)| {
                let table = &table;
                nontrivial[i..]
                    .iter()
                    .filter(move |&&b| table.first_common(a, b).is_none())
                    .map(move |&b| Counterexample::Pair(a, b))
            })
            .collect()
    });
    // The trivial node must meet nothing else.
    for &n in &nontrivial {
        if table.first_common(MoveGraphNode::TRIVIAL, n).is_some() {
            bad.push(Counterexample::Pair(MoveGraphNode::TRIVIAL, n));
        }
    }
    properties.push(result(
        property::COMMON_STABILIZATION,
        PropertyRange { max_sum, search_bound: Some(bound) },
        bad,
    ));

    VerificationReport {
        version: 1,
        scope: "parameter shadow".to_string(),
        max_sum,
        slack,
        properties,
    }
}

/// Minimal common `sum_h` per pair, keyed by pair; used for reporting.
pub fn common_stabilization_table(max_sum: u32, bound: u32) -> BTreeMap<(MoveGraphNode, MoveGraphNode), Option<u32>> {
    let table = ReachTable::new(bound);
    let nodes: Vec<_> = nodes_up_to(max_sum).into_iter().filter(|n| !n.is_trivial()).collect();
    let mut out = BTreeMap::new();
    for &a in &nodes {
        for &b in &nodes {
            out.insert((a, b), table.first_common(a, b).map(|n| n.sum_h()));
        }
    }
    out
}
