//! Random presentations and Gauss codes for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gauss::{GaussCode, GaussStrand, Passage};
use crate::model::{densify, Key, Node, Presentation, Sign, StrandDiagram, StrandKind, WTree};

#[derive(Clone, Debug)]
pub struct Shape {
    pub diagram: StrandDiagram,
    pub max_trees: usize,
    pub max_degree: usize,
}

impl Shape {
    pub fn string_link(n: usize, max_trees: usize, max_degree: usize) -> Self {
        Shape { diagram: StrandDiagram::string_link(n), max_trees, max_degree }
    }

    pub fn long_knot(max_trees: usize, max_degree: usize) -> Self {
        Shape { diagram: StrandDiagram::long_knot(), max_trees, max_degree }
    }

    pub fn knot(max_trees: usize, max_degree: usize) -> Self {
        Shape { diagram: StrandDiagram::knot(), max_trees, max_degree }
    }
}

fn random_node<R: Rng + ?Sized>(rng: &mut R, degree: usize, next: &mut impl FnMut(&mut R) -> Key) -> Node<Key> {
    let twist = rng.gen_bool(0.3);
    if degree == 1 {
        return Node::leaf(next(rng)).with_twist(twist);
    }
    let left = rng.gen_range(1..degree);
    let a = random_node(rng, left, next);
    let b = random_node(rng, degree - left, next);
    Node::vertex(a, b).with_twist(twist)
}

/// Random trees with endpoints spread uniformly over the strands.
pub fn presentation<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Presentation {
    let n = shape.diagram.len();
    let count = rng.gen_range(0..=shape.max_trees);
    let degrees: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=shape.max_degree.max(1))).collect();
    let total: usize = degrees.iter().map(|d| d + 1).sum();
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    let mut slot = order.into_iter();
    let mut next = |rng: &mut R| Key { strand: rng.gen_range(0..n), major: slot.next().expect("enough slots"), sub: vec![1] };
    let mut trees = Vec::with_capacity(count);
    for d in degrees {
        let head = next(rng);
        let root = random_node(rng, d, &mut next);
        let mut t = WTree::new(head, root);
        if rng.gen_bool(0.2) {
            t.side = crate::model::Side::Left;
        }
        trees.push(t);
    }
    densify(&shape.diagram, &trees).0
}

/// A random Gauss code with `crossings` crossings whose passages are spread
/// over strands of the given kinds.
pub fn gauss_code<R: Rng + ?Sized>(rng: &mut R, kinds: &[StrandKind], crossings: usize) -> GaussCode {
    let mut slots: Vec<u32> = (1..=crossings as u32).flat_map(|c| [c, c]).collect();
    slots.shuffle(rng);
    let signs: Vec<Sign> = (0..crossings).map(|_| Sign::from_negative(rng.gen_bool(0.5))).collect();
    let over_first: Vec<bool> = (0..crossings).map(|_| rng.gen_bool(0.5)).collect();
    let mut seen = vec![false; crossings];
    let passages: Vec<Passage> = slots
        .into_iter()
        .map(|c| {
            let i = c as usize - 1;
            let over = seen[i] != over_first[i];
            seen[i] = true;
            if over {
                Passage::over(c, signs[i])
            } else {
                Passage::under(c, signs[i])
            }
        })
        .collect();
    let mut cuts: Vec<usize> = (1..kinds.len()).map(|_| rng.gen_range(0..=passages.len())).collect();
    cuts.sort_unstable();
    cuts.push(passages.len());
    let mut start = 0;
    let strands = kinds
        .iter()
        .zip(cuts)
        .map(|(&kind, end)| {
            let s = GaussStrand { kind, passages: passages[start..end].to_vec() };
            start = end;
            s
        })
        .collect();
    GaussCode::new(strands)
}
