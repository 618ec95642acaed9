//! The expansion move, full expansion to w-arrows, and surgery.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gauss::{GaussCode, GaussStrand, Passage};
use crate::model::{densify, keyed_trees, to_signed_arrows, Key, Node, Presentation, Side, Site, WTree};

/// Endpoint labels that can be duplicated next to themselves.
pub(crate) trait Refine: Clone {
    fn child(&self, c: u16) -> Self;
}

impl Refine for Key {
    fn child(&self, c: u16) -> Self {
        Key::child(self, c)
    }
}

impl<T: Clone> Refine for (Key, T) {
    fn child(&self, c: u16) -> Self {
        (self.0.child(c), self.1.clone())
    }
}

/// One application of (E). A tree with terminal vertex `(A, B)` becomes
/// four trees whose heads spell `A B̄ Ā B` (or its inverse when the
/// terminal edge is twisted). The tails of the `c`-th copy of a subtree
/// are refined with `c`.
pub(crate) fn expand_step<K: Refine>(t: &WTree<K>) -> Option<[WTree<K>; 4]> {
    let Node::Vertex { first, second, .. } = &t.root else {
        return None;
    };
    let (a, b) = (&**first, &**second);
    let order = if t.effective_twist() {
        [(b, true, 0), (a, false, 0), (b, false, 1), (a, true, 1)]
    } else {
        [(a, false, 0), (b, true, 0), (a, true, 1), (b, false, 1)]
    };
    Some(std::array::from_fn(|j| {
        let (sub, flip, c) = order[j];
        let root = sub.map_sites(&mut |k: &K| k.child(c));
        let tw = root.twist() ^ flip;
        WTree { head: t.head.child(j as u16), side: Side::Right, root: root.with_twist(tw) }
    }))
}

pub(crate) fn expand_all<K: Refine>(t: WTree<K>, out: &mut Vec<WTree<K>>) {
    match expand_step(&t) {
        None => out.push(t.normalized()),
        Some(parts) => {
            for part in parts {
                expand_all(part, out);
            }
        }
    }
}

/// Outcome of expanding a single tree.
#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub presentation: Presentation,
    /// Indices of the four new trees in `presentation`.
    pub trees: Vec<usize>,
    /// New position of every endpoint that was not part of the expanded tree.
    pub site_relabeling: BTreeMap<Site, Site>,
}

pub fn expand_tree(p: &Presentation, index: usize) -> Result<ExpansionResult> {
    let t = p.trees.get(index).ok_or(Error::TreeIndex(index))?;
    if t.is_arrow() {
        return Err(Error::AlreadyArrow(index));
    }
    let mut keyed = keyed_trees(p);
    let parts = expand_step(&keyed[index]).expect("degree at least two");
    keyed.splice(index..=index, parts);
    let (q, map) = densify(&p.diagram, &keyed);
    let mut site_relabeling = BTreeMap::new();
    for (i, tree) in p.trees.iter().enumerate() {
        if i != index {
            for s in tree.endpoints() {
                site_relabeling.insert(*s, map[&Key::original(s)]);
            }
        }
    }
    Ok(ExpansionResult { presentation: q, trees: (index..index + 4).collect(), site_relabeling })
}

/// Applies (E) to the terminal vertex of one tree.
pub fn expand_once(p: &Presentation, index: usize) -> Result<Presentation> {
    Ok(expand_tree(p, index)?.presentation)
}

/// Expands every tree into w-arrows. Trees are replaced in place by
/// consecutive blocks of arrows.
pub fn full_expand(p: &Presentation) -> Presentation {
    let mut out = Vec::new();
    for t in keyed_trees(p) {
        expand_all(t, &mut out);
    }
    densify(&p.diagram, &out).0
}

/// Number of arrows in the full expansion of a node.
pub fn expansion_length<S>(n: &Node<S>) -> usize {
    match n {
        Node::Leaf { .. } => 1,
        Node::Vertex { first, second, .. } => 2 * (expansion_length(first) + expansion_length(second)),
    }
}

/// Full expansion, then one crossing per arrow: over at the tail, under at
/// the head. Crossings are numbered 1..N in arrow order.
pub fn surgery(p: &Presentation) -> GaussCode {
    let q = full_expand(p);
    let counts = q.strand_counts();
    let mut slots: Vec<Vec<Option<Passage>>> = counts.iter().map(|&c| vec![None; c]).collect();
    let mut arrows = Vec::with_capacity(q.trees.len());
    for t in &q.trees {
        let single = Presentation::new(q.diagram.clone(), vec![t.clone()]);
        arrows.push(to_signed_arrows(&single).expect("fully expanded")[0]);
    }
    for (i, a) in arrows.iter().enumerate() {
        let id = i as u32 + 1;
        slots[a.tail.strand][a.tail.pos] = Some(Passage::over(id, a.sign));
        slots[a.head.strand][a.head.pos] = Some(Passage::under(id, a.sign));
    }
    GaussCode::new(
        q.diagram
            .strands
            .iter()
            .zip(slots)
            .map(|(&kind, s)| GaussStrand { kind, passages: s.into_iter().map(|x| x.expect("dense sites")).collect() })
            .collect(),
    )
}

/// Expands tree `tree` and drops every arrow whose tail descends from its
/// `tail`-th leaf (depth-first order). Other trees are kept as they are.
pub fn delete_tail_group(p: &Presentation, tree: usize, tail: usize) -> Result<Presentation> {
    let t = p.trees.get(tree).ok_or(Error::TreeIndex(tree))?;
    if tail >= t.degree() {
        return Err(Error::TailIndex { tree, tail });
    }
    let mut counter = 0usize;
    let tagged: WTree<(Key, usize)> = WTree {
        head: (Key::original(&t.head), usize::MAX),
        side: t.side,
        root: t.root.map_sites(&mut |s: &Site| {
            counter += 1;
            (Key::original(s), counter - 1)
        }),
    };
    let mut arrows = Vec::new();
    expand_all(tagged, &mut arrows);
    let kept = arrows
        .into_iter()
        .filter(|a| a.root.leaves()[0].1 != tail)
        .map(|a| a.map_sites(|(k, _)| k.clone()));
    let mut keyed = keyed_trees(p);
    keyed.splice(tree..=tree, kept);
    Ok(densify(&p.diagram, &keyed).0)
}
