//! The move calculus on w-tree presentations.
//!
//! Exact moves preserve the welded class. Truncated moves (twist past a
//! vertex, IHX, and the general head-tail exchange) hold modulo trees of
//! degree above their truncation degree; those residual trees are dropped
//! and reported. Homotopy moves delete repeated trees.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::ArcLabels;
use crate::model::{densify, keyed_trees, Key, Node, Presentation, Side, Site, StrandKind, WTree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MoveSpec {
    /// Swap the tails at `site` and at the next position.
    TailsExchange { site: Site },
    /// Delete an arrow whose tail and head are adjacent.
    IsolatedArrow { tree: usize },
    /// Delete two parallel trees with opposite terminal twists and adjacent
    /// heads.
    InversePairDelete { first: usize, second: usize },
    /// Insert `tree` and its inverse. Each endpoint `[s, q]` of the template
    /// is placed just before the current position `q` of strand `s` (`q` may
    /// be the endpoint count, meaning the end of the strand). The copies go
    /// to the end of the tree list.
    InversePairInsert { tree: WTree },
    /// Move the tail and head of the arrow `arrow` across the heads of two
    /// parallel trees `first` (tail side) and `second` (head side).
    Slide { arrow: usize, first: usize, second: usize },
    /// Move a head across `offset` neighbouring positions (negative moves
    /// backwards) occupied by an isolated union of trees.
    HeadTraversal { tree: usize, offset: i64 },
    /// Swap adjacent heads of `first` and the following `second`, adding
    /// the commutator tree.
    HeadsExchange { first: usize, second: usize },
    /// Move the tail at `leaf` of `tail_tree` across the adjacent head of
    /// `head_tree`, adding a correction tree. Exact when the tail tree is an
    /// arrow; otherwise `truncation` is required.
    HeadTailExchange {
        head_tree: usize,
        tail_tree: usize,
        #[serde(default)]
        leaf: Vec<u8>,
        #[serde(default, rename = "truncation_degree", skip_serializing_if = "Option::is_none")]
        truncation: Option<usize>,
    },
    /// Swap the children of a vertex and flip the twists of its three edges.
    Antisymmetry { tree: usize, path: Vec<u8> },
    /// Delete a tree containing a vertex with two adjacent leaves.
    Fork { tree: usize, path: Vec<u8> },
    /// Remove the twist on child `child` of a vertex, flipping the twist of
    /// the vertex's outgoing edge.
    TwistPastVertex {
        tree: usize,
        path: Vec<u8>,
        child: u8,
        #[serde(rename = "truncation_degree")]
        truncation: usize,
    },
    /// At a vertex `(A, (B, C))`, rewrite to `((A, B), C)` and insert the
    /// tree with `((A, C), B̄)` there.
    #[serde(rename = "IHX")]
    Ihx {
        tree: usize,
        path: Vec<u8>,
        #[serde(rename = "truncation_degree")]
        truncation: usize,
    },
    /// Delete an arrow with both ends on one component.
    SelfArrowDelete { tree: usize },
    /// Delete a tree with two endpoints on one component.
    RepeatedTreeDelete { tree: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveClass {
    Exact,
    Truncated,
    Homotopy,
}

impl MoveSpec {
    pub fn class(&self) -> MoveClass {
        match self {
            MoveSpec::TwistPastVertex { .. } | MoveSpec::Ihx { .. } => MoveClass::Truncated,
            MoveSpec::HeadTailExchange { truncation: Some(_), .. } => MoveClass::Truncated,
            MoveSpec::SelfArrowDelete { .. } | MoveSpec::RepeatedTreeDelete { .. } => MoveClass::Homotopy,
            _ => MoveClass::Exact,
        }
    }

    pub fn truncation(&self) -> Option<usize> {
        match self {
            MoveSpec::TwistPastVertex { truncation, .. } | MoveSpec::Ihx { truncation, .. } => Some(*truncation),
            MoveSpec::HeadTailExchange { truncation, .. } => *truncation,
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MoveSpec::TailsExchange { .. } => "TailsExchange",
            MoveSpec::IsolatedArrow { .. } => "IsolatedArrow",
            MoveSpec::InversePairDelete { .. } => "InversePairDelete",
            MoveSpec::InversePairInsert { .. } => "InversePairInsert",
            MoveSpec::Slide { .. } => "Slide",
            MoveSpec::HeadTraversal { .. } => "HeadTraversal",
            MoveSpec::HeadsExchange { .. } => "HeadsExchange",
            MoveSpec::HeadTailExchange { .. } => "HeadTailExchange",
            MoveSpec::Antisymmetry { .. } => "Antisymmetry",
            MoveSpec::Fork { .. } => "Fork",
            MoveSpec::TwistPastVertex { .. } => "TwistPastVertex",
            MoveSpec::Ihx { .. } => "IHX",
            MoveSpec::SelfArrowDelete { .. } => "SelfArrowDelete",
            MoveSpec::RepeatedTreeDelete { .. } => "RepeatedTreeDelete",
        }
    }
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub presentation: Presentation,
    /// Lowest degree of the residual trees that were dropped, if any.
    pub discarded_degree: Option<usize>,
}

fn na<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::NotApplicable(msg.into()))
}

fn tree_at(p: &Presentation, i: usize) -> Result<&WTree> {
    p.trees.get(i).ok_or(Error::TreeIndex(i))
}

fn node_at<'a>(t: &'a WTree, path: &[u8]) -> Result<&'a Node> {
    match t.root.at_path(path) {
        Some(n) => Ok(n),
        None => na(format!("no node at path {path:?}")),
    }
}

/// Which endpoint occupies a site.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Owner {
    Head(usize),
    Leaf(usize, Vec<u8>),
}

fn owners(p: &Presentation) -> BTreeMap<Site, Owner> {
    let mut out = BTreeMap::new();
    for (i, t) in p.trees.iter().enumerate() {
        out.insert(t.head, Owner::Head(i));
        for (path, site) in t.root.leaf_paths().into_iter().zip(t.root.leaves()) {
            out.insert(*site, Owner::Leaf(i, path));
        }
    }
    out
}

/// Consecutive along a strand, including across the basepoint of a closed
/// strand.
fn adjacent(p: &Presentation, counts: &[usize], a: &Site, b: &Site) -> bool {
    if a.strand != b.strand {
        return false;
    }
    let m = counts[a.strand];
    let d = a.pos.abs_diff(b.pos);
    d == 1 || (p.diagram.strands[a.strand] == StrandKind::Closed && m > 2 && d == m - 1)
}

fn copy_node(n: &Node<Key>, c: u16) -> Node<Key> {
    n.map_sites(&mut |k: &Key| k.child(c))
}

/// Parallel trees: same shape and internal twists, corresponding leaves on
/// the same arcs. Terminal twists are compared by the caller.
fn parallel(p: &Presentation, labels: &ArcLabels, a: &WTree, b: &WTree) -> std::result::Result<(), String> {
    let (a, b) = (a.clone().normalized(), b.clone().normalized());
    let same = match (&a.root, &b.root) {
        (Node::Leaf { .. }, Node::Leaf { .. }) => true,
        (Node::Vertex { first: f1, second: s1, .. }, Node::Vertex { first: f2, second: s2, .. }) => {
            f1.same_shape(f2) && s1.same_shape(s2)
        }
        _ => false,
    };
    if !same {
        return Err("trees have different shapes".into());
    }
    for (x, y) in a.root.leaves().iter().zip(b.root.leaves()) {
        if x.strand != y.strand || labels.arc_of(x) != labels.arc_of(y) {
            return Err(format!("tails {x} and {y} are separated by a head"));
        }
    }
    let _ = p;
    Ok(())
}

fn remove_indices(trees: &mut Vec<WTree<Key>>, idx: &[usize]) {
    let mut idx = idx.to_vec();
    idx.sort_unstable();
    for i in idx.into_iter().rev() {
        trees.remove(i);
    }
}

fn set_leaf_key(t: &mut WTree<Key>, path: &[u8], key: Key) {
    match t.root.at_path_mut(path) {
        Some(Node::Leaf { site, .. }) => *site = key,
        _ => unreachable!("leaf path checked"),
    }
}

type Rewrite = (Vec<WTree<Key>>, Option<usize>);

/// Checks and applies a move.
pub fn apply(p: &Presentation, m: &MoveSpec) -> Result<MoveOutcome> {
    p.check()?;
    let (trees, discarded_degree) = rewrite(p, m)?;
    Ok(MoveOutcome { presentation: densify(&p.diagram, &trees).0, discarded_degree })
}

/// `Ok(())` when the move applies, otherwise the reason.
pub fn applicable(p: &Presentation, m: &MoveSpec) -> std::result::Result<(), String> {
    match p.check().and_then(|_| rewrite(p, m)) {
        Ok(_) => Ok(()),
        Err(Error::NotApplicable(r)) => Err(r),
        Err(e) => Err(e.to_string()),
    }
}

fn rewrite(p: &Presentation, m: &MoveSpec) -> Result<Rewrite> {
    let counts = p.strand_counts();
    let mut kt = keyed_trees(p);
    match m {
        MoveSpec::TailsExchange { site } => {
            let next = Site::new(site.strand, site.pos + 1);
            let own = owners(p);
            let (Some(Owner::Leaf(i, pi)), Some(Owner::Leaf(j, pj))) = (own.get(site), own.get(&next)) else {
                return na(format!("sites {site} and {next} are not both tails"));
            };
            set_leaf_key(&mut kt[*i], pi, Key::original(&next));
            set_leaf_key(&mut kt[*j], pj, Key::original(site));
            Ok((kt, None))
        }

        MoveSpec::IsolatedArrow { tree } => {
            let t = tree_at(p, *tree)?;
            let Node::Leaf { site, .. } = &t.root else {
                return na("not a w-arrow");
            };
            if !adjacent(p, &counts, site, &t.head) {
                return na("tail and head are not adjacent");
            }
            kt.remove(*tree);
            Ok((kt, None))
        }

        MoveSpec::InversePairDelete { first, second } => {
            let (a, b) = (tree_at(p, *first)?, tree_at(p, *second)?);
            if first == second {
                return na("a tree is not its own inverse");
            }
            if a.effective_twist() == b.effective_twist() {
                return na("terminal twists agree; the trees are not inverse");
            }
            if a.head.strand != b.head.strand || a.head.pos.abs_diff(b.head.pos) != 1 {
                return na("heads are not adjacent");
            }
            parallel(p, &ArcLabels::new(p), a, b).or_else(na)?;
            remove_indices(&mut kt, &[*first, *second]);
            Ok((kt, None))
        }

        MoveSpec::InversePairInsert { tree } => {
            let tpl = tree.clone().normalized();
            let mut slot_rank: BTreeMap<Site, u16> = BTreeMap::new();
            let mut rank = |s: &Site| -> Result<u16> {
                if s.strand >= counts.len() || s.pos > counts[s.strand] {
                    return na(format!("slot {s} is outside the diagram"));
                }
                let r = slot_rank.entry(*s).or_insert(0);
                *r += 1;
                Ok(*r - 1)
            };
            // Leaves first so that tails precede a head sharing the slot.
            let mut leaf_keys = Vec::new();
            for s in tpl.root.leaves() {
                let r = rank(s)?;
                leaf_keys.push((Key::before(s, 2 * r), Key::before(s, 2 * r + 1)));
            }
            let hr = rank(&tpl.head)?;
            let mut it = leaf_keys.iter();
            let fwd = WTree { head: Key::before(&tpl.head, 2 * hr), side: Side::Right, root: tpl.root.map_sites(&mut |_| it.next().unwrap().0.clone()) };
            let mut it = leaf_keys.iter();
            let mut inv_root = tpl.root.map_sites(&mut |_| it.next().unwrap().1.clone());
            inv_root.set_twist(!inv_root.twist());
            let inv = WTree { head: Key::before(&tpl.head, 2 * hr + 1), side: Side::Right, root: inv_root };
            kt.push(fwd);
            kt.push(inv);
            Ok((kt, None))
        }

        MoveSpec::Slide { arrow, first, second } => {
            let z = tree_at(p, *arrow)?;
            let (x, y) = (tree_at(p, *first)?, tree_at(p, *second)?);
            if arrow == first || arrow == second || first == second {
                return na("slide needs three distinct trees");
            }
            let Node::Leaf { site: tail, .. } = &z.root else {
                return na("the sliding tree must be a w-arrow");
            };
            if x.head.strand == y.head.strand {
                return na("the parallel heads must lie on different strands");
            }
            if x.effective_twist() != y.effective_twist() {
                return na("parallel trees must have equal terminal twists");
            }
            parallel(p, &ArcLabels::new(p), x, y).or_else(na)?;
            let after = |a: &Site, b: &Site| a.strand == b.strand && a.pos == b.pos + 1;
            let (new_tail, new_head) = if after(tail, &x.head) && after(&z.head, &y.head) {
                (Key::before(&x.head, 0), Key::before(&y.head, 0))
            } else if after(&x.head, tail) && after(&y.head, &z.head) {
                (Key::after(&x.head, 0), Key::after(&y.head, 0))
            } else {
                return na("arrow ends are not both right after or both right before the parallel heads");
            };
            set_leaf_key(&mut kt[*arrow], &[], new_tail);
            kt[*arrow].head = new_head;
            Ok((kt, None))
        }

        MoveSpec::HeadTraversal { tree, offset } => {
            let t = tree_at(p, *tree)?;
            let h = t.head;
            let m = counts[h.strand] as i64;
            let (lo, hi) = if *offset > 0 {
                (h.pos as i64 + 1, h.pos as i64 + offset)
            } else if *offset < 0 {
                (h.pos as i64 + offset, h.pos as i64 - 1)
            } else {
                return na("offset must be nonzero");
            };
            if lo < 0 || hi >= m {
                return na("segment leaves the strand");
            }
            let inside = |s: &Site| s.strand == h.strand && (lo..=hi).contains(&(s.pos as i64));
            for (j, u) in p.trees.iter().enumerate() {
                let ends = u.endpoints();
                let n_in = ends.iter().filter(|s| inside(s)).count();
                if n_in > 0 && (j == *tree || n_in != ends.len()) {
                    return na(format!("tree {j} is not contained in the traversed segment"));
                }
            }
            kt[*tree].head = if *offset > 0 {
                Key::after(&Site::new(h.strand, hi as usize), 0)
            } else {
                Key::before(&Site::new(h.strand, lo as usize), 0)
            };
            Ok((kt, None))
        }

        MoveSpec::HeadsExchange { first, second } => {
            let (a, b) = (tree_at(p, *first)?, tree_at(p, *second)?);
            if first == second || a.head.strand != b.head.strand || b.head.pos != a.head.pos + 1 {
                return na("the second head must directly follow the first");
            }
            let ka = kt[*first].clone().normalized();
            let kb = kt[*second].clone().normalized();
            let c = WTree {
                head: Key::original(&a.head).child(0),
                side: Side::Right,
                root: Node::vertex(copy_node(&kb.root, 0).flipped(), copy_node(&ka.root, 0).flipped()),
            };
            kt[*second].head = Key::original(&a.head);
            kt[*first].head = Key::original(&b.head);
            kt.insert(first.max(second) + 1, c);
            Ok((kt, None))
        }

        MoveSpec::HeadTailExchange { head_tree, tail_tree, leaf, truncation } => {
            let a = tree_at(p, *head_tree)?;
            let z = tree_at(p, *tail_tree)?;
            if head_tree == tail_tree {
                return na("head and tail belong to the same tree");
            }
            let Node::Leaf { site: tail, twist: leaf_twist } = node_at(z, leaf)? else {
                return na("path does not end at a leaf");
            };
            let forward = if tail.strand == a.head.strand && tail.pos == a.head.pos + 1 {
                true
            } else if tail.strand == a.head.strand && tail.pos + 1 == a.head.pos {
                false
            } else {
                return na("tail is not adjacent to the head");
            };
            let (moved, copy) = if forward {
                (Key::before(&a.head, 0), Key::before(&a.head, 1))
            } else {
                (Key::after(&a.head, 0), Key::after(&a.head, 1))
            };
            let mut w = copy_node(&kt[*head_tree].clone().normalized().root, 0);
            if !forward {
                w = w.flipped();
            }
            let bracket = Node::vertex(Node::twisted_leaf(copy), w);
            let zk = kt[*tail_tree].clone().normalized();
            let (correction, discarded) = if z.is_arrow() {
                if truncation.is_some() {
                    return na("an arrow tail exchange is exact and takes no truncation degree");
                }
                if zk.root.twist() {
                    (WTree { head: Key::before(&z.head, 0), side: Side::Right, root: bracket.flipped() }, None)
                } else {
                    (WTree { head: Key::original(&z.head).child(0), side: Side::Right, root: bracket }, None)
                }
            } else {
                let Some(k) = truncation else {
                    return na("exchanging a tail of a higher tree needs a truncation degree");
                };
                let total = a.degree() + z.degree();
                if *k > total {
                    return na(format!("truncation {k} exceeds the correction degree {total}"));
                }
                let mut root = copy_node(&zk.root, 0);
                *root.at_path_mut(leaf).expect("leaf path") = bracket.with_twist(*leaf_twist);
                (WTree { head: Key::original(&z.head).child(0), side: Side::Right, root }, Some(total + 1))
            };
            kt[*tail_tree] = zk;
            set_leaf_key(&mut kt[*tail_tree], leaf, moved);
            kt.push(correction);
            Ok((kt, discarded))
        }

        MoveSpec::Antisymmetry { tree, path } => {
            let t = tree_at(p, *tree)?;
            if node_at(t, path)?.is_leaf() {
                return na("path does not end at a vertex");
            }
            let v = kt[*tree].root.at_path_mut(path).expect("checked");
            if let Node::Vertex { first, second, twist } = v {
                std::mem::swap(first, second);
                let f = first.twist();
                first.set_twist(!f);
                let s = second.twist();
                second.set_twist(!s);
                *twist = !*twist;
            }
            Ok((kt, None))
        }

        MoveSpec::Fork { tree, path } => {
            let t = tree_at(p, *tree)?;
            let Node::Vertex { first, second, .. } = node_at(t, path)? else {
                return na("path does not end at a vertex");
            };
            let (Node::Leaf { site: a, .. }, Node::Leaf { site: b, .. }) = (&**first, &**second) else {
                return na("vertex children are not both tails");
            };
            if !adjacent(p, &counts, a, b) {
                return na("fork tails are not adjacent");
            }
            kt.remove(*tree);
            Ok((kt, None))
        }

        MoveSpec::TwistPastVertex { tree, path, child, truncation } => {
            let t = tree_at(p, *tree)?;
            let Node::Vertex { first, second, .. } = node_at(t, path)? else {
                return na("path does not end at a vertex");
            };
            let c = match child {
                0 => first,
                1 => second,
                _ => return na("child must be 0 or 1"),
            };
            if !c.twist() {
                return na("the child edge carries no twist");
            }
            if *truncation > t.degree() {
                return na(format!("truncation {truncation} exceeds the tree degree {}", t.degree()));
            }
            let v = kt[*tree].root.at_path_mut(path).expect("checked");
            if let Node::Vertex { first, second, twist } = v {
                let c = if *child == 0 { first } else { second };
                c.set_twist(false);
                *twist = !*twist;
            }
            Ok((kt, Some(t.degree() + 1)))
        }

        MoveSpec::Ihx { tree, path, truncation } => {
            let t = tree_at(p, *tree)?;
            let Node::Vertex { second, .. } = node_at(t, path)? else {
                return na("path does not end at a vertex");
            };
            let Node::Vertex { twist: inner, .. } = &**second else {
                return na("second child is not a vertex");
            };
            if *inner {
                return na("the inner edge must be untwisted");
            }
            if *truncation > t.degree() {
                return na(format!("truncation {truncation} exceeds the tree degree {}", t.degree()));
            }
            let base = kt[*tree].clone().normalized();
            let Some(Node::Vertex { first: a, second: bc, twist }) = base.root.at_path(path) else {
                unreachable!("checked")
            };
            let Node::Vertex { first: b, second: c, .. } = &**bc else { unreachable!("checked") };
            let h = Node::Vertex {
                first: Box::new(Node::vertex((**a).clone(), (**b).clone())),
                second: c.clone(),
                twist: *twist,
            };
            let x = Node::Vertex {
                first: Box::new(Node::vertex(copy_node(a, 0), copy_node(c, 0))),
                second: Box::new(copy_node(b, 0).flipped()),
                twist: *twist,
            };
            let mut ht = base.clone();
            *ht.root.at_path_mut(path).expect("checked") = h;
            let mut xt = WTree { head: base.head.child(0), side: Side::Right, root: copy_node(&base.root, 0) };
            *xt.root.at_path_mut(path).expect("checked") = x;
            kt[*tree] = ht;
            kt.insert(tree + 1, xt);
            Ok((kt, Some(t.degree() + 1)))
        }

        MoveSpec::SelfArrowDelete { tree } => {
            let t = tree_at(p, *tree)?;
            match &t.root {
                Node::Leaf { site, .. } if site.strand == t.head.strand => {
                    kt.remove(*tree);
                    Ok((kt, None))
                }
                Node::Leaf { .. } => na("arrow joins two components"),
                _ => na("not a w-arrow"),
            }
        }

        MoveSpec::RepeatedTreeDelete { tree } => {
            let t = tree_at(p, *tree)?;
            if !crate::classify::is_repeated(t) {
                return na("tree meets every component at most once");
            }
            kt.remove(*tree);
            Ok((kt, None))
        }
    }
}

/// One line of a move trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub index: usize,
    #[serde(rename = "move")]
    pub spec: MoveSpec,
    pub class: MoveClass,
    pub trees_before: usize,
    pub trees_after: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discarded_degree: Option<usize>,
}

impl TraceEntry {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace entry serializes")
    }
}

/// Applies moves in order; the first inapplicable move aborts with its
/// index.
pub fn trace(p: &Presentation, moves: &[MoveSpec]) -> Result<(Presentation, Vec<TraceEntry>)> {
    let mut cur = p.clone();
    let mut log = Vec::with_capacity(moves.len());
    for (index, m) in moves.iter().enumerate() {
        let out = apply(&cur, m).map_err(|e| Error::TraceAborted { index, reason: e.to_string() })?;
        log.push(TraceEntry {
            index,
            spec: m.clone(),
            class: m.class(),
            trees_before: cur.trees.len(),
            trees_after: out.presentation.trees.len(),
            discarded_degree: out.discarded_degree,
        });
        cur = out.presentation;
    }
    Ok((cur, log))
}

/// Every located move that applies to `p`, except insertions. Truncated
/// moves are listed with the largest admissible truncation degree.
pub fn enumerate_applicable(p: &Presentation) -> Vec<MoveSpec> {
    let n = p.trees.len();
    let mut cands = Vec::new();
    let counts = p.strand_counts();
    for (s, &c) in counts.iter().enumerate() {
        for pos in 0..c.saturating_sub(1) {
            cands.push(MoveSpec::TailsExchange { site: Site::new(s, pos) });
        }
    }
    for i in 0..n {
        let t = &p.trees[i];
        cands.push(MoveSpec::IsolatedArrow { tree: i });
        cands.push(MoveSpec::SelfArrowDelete { tree: i });
        cands.push(MoveSpec::RepeatedTreeDelete { tree: i });
        let m = counts[t.head.strand] as i64;
        for off in 1..m {
            cands.push(MoveSpec::HeadTraversal { tree: i, offset: off });
            cands.push(MoveSpec::HeadTraversal { tree: i, offset: -off });
        }
        for path in t.root.vertex_paths() {
            cands.push(MoveSpec::Antisymmetry { tree: i, path: path.clone() });
            cands.push(MoveSpec::Fork { tree: i, path: path.clone() });
            for child in 0..2 {
                cands.push(MoveSpec::TwistPastVertex { tree: i, path: path.clone(), child, truncation: t.degree() });
            }
            cands.push(MoveSpec::Ihx { tree: i, path, truncation: t.degree() });
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            cands.push(MoveSpec::InversePairDelete { first: i, second: j });
            cands.push(MoveSpec::HeadsExchange { first: i, second: j });
            let u = &p.trees[j];
            for leaf in u.root.leaf_paths() {
                let truncation = (!u.is_arrow()).then(|| t.degree() + u.degree());
                cands.push(MoveSpec::HeadTailExchange { head_tree: i, tail_tree: j, leaf, truncation });
            }
            for k in 0..n {
                if k != i && k != j && p.trees[k].is_arrow() {
                    cands.push(MoveSpec::Slide { arrow: k, first: i, second: j });
                }
            }
        }
    }
    cands.into_iter().filter(|m| applicable(p, m).is_ok()).collect()
}
