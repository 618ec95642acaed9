//! Free groups, the Wirtinger-type presentation read off a w-tree
//! presentation, Fox calculus and the normalized Alexander polynomial.

mod det;
mod laurent;
mod word;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use det::laurent_det;
pub use laurent::{laurent_gcd, LaurentPoly};
pub use word::{FreeWord, Letter};

use crate::error::{Error, Result};
use crate::model::{Node, Presentation, Side, Site, StrandKind, WTree};

/// Values that w-trees can be evaluated in: a bracket and an inverse.
pub trait BracketAlgebra: Sized {
    fn bracket(a: &Self, b: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl BracketAlgebra for FreeWord {
    fn bracket(a: &Self, b: &Self) -> Self {
        FreeWord::commutator(a, b)
    }

    fn inverse(&self) -> Self {
        FreeWord::inverse(self)
    }
}

/// Evaluates a node: leaves through `leaf`, vertices as brackets, and every
/// twisted edge as an inverse (including the node's own outgoing edge).
pub fn eval_node<S, A: BracketAlgebra>(node: &Node<S>, leaf: &mut impl FnMut(&S) -> Result<A>) -> Result<A> {
    let (v, twist) = match node {
        Node::Leaf { site, twist } => (leaf(site)?, *twist),
        Node::Vertex { first, second, twist } => {
            let a = eval_node(first, leaf)?;
            let b = eval_node(second, leaf)?;
            (A::bracket(&a, &b), *twist)
        }
    };
    Ok(if twist { v.inverse() } else { v })
}

/// Value of the tree seen from the right side of the head's strand.
pub fn eval_tree<S, A: BracketAlgebra>(t: &WTree<S>, leaf: &mut impl FnMut(&S) -> Result<A>) -> Result<A> {
    let v = eval_node(&t.root, leaf)?;
    Ok(if t.side == Side::Left { v.inverse() } else { v })
}

/// The bracket word of a tree; the side of the head is ignored.
pub fn wtree_word<S>(t: &WTree<S>, labels: impl Fn(&S) -> Option<u32>) -> Result<FreeWord> {
    eval_node(&t.root, &mut |s: &S| {
        labels(s).map(FreeWord::gen).ok_or_else(|| Error::Argument("unlabeled leaf".into()))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArcGenerator {
    pub strand: usize,
    pub arc: usize,
}

/// The relation at one head: `outgoing = conjugator⁻¹ · incoming · conjugator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadRelation {
    pub tree: usize,
    pub strand: usize,
    pub incoming: u32,
    pub outgoing: u32,
    pub conjugator: FreeWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub strand_kinds: Vec<StrandKind>,
    pub generators: Vec<ArcGenerator>,
    pub relators: Vec<FreeWord>,
    /// Structured form of the relators, one per tree, in strand order.
    pub relations: Vec<HeadRelation>,
    /// Per strand, the first and last arc generator.
    pub meridians: Vec<(u32, u32)>,
}

impl GroupPresentation {
    pub fn generator_name(&self, g: u32) -> String {
        let a = self.generators[g as usize];
        format!("a{}_{}", a.strand + 1, a.arc)
    }

    pub fn is_long_knot(&self) -> bool {
        self.strand_kinds == [StrandKind::Open]
    }
}

/// Splits strands into arcs at heads and names each arc.
#[derive(Clone, Debug)]
pub struct ArcLabels {
    kinds: Vec<StrandKind>,
    heads: Vec<Vec<usize>>,
    offset: Vec<u32>,
}

impl ArcLabels {
    pub fn new(p: &Presentation) -> Self {
        let n = p.diagram.len();
        let mut heads = vec![Vec::new(); n];
        for t in &p.trees {
            heads[t.head.strand].push(t.head.pos);
        }
        for h in &mut heads {
            h.sort_unstable();
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut acc = 0u32;
        for (s, kind) in p.diagram.strands.iter().enumerate() {
            offset.push(acc);
            acc += match kind {
                StrandKind::Open => heads[s].len() + 1,
                StrandKind::Closed => heads[s].len().max(1),
            } as u32;
        }
        offset.push(acc);
        Self { kinds: p.diagram.strands.clone(), heads, offset }
    }

    pub fn generator_count(&self) -> usize {
        *self.offset.last().unwrap_or(&0) as usize
    }

    pub fn arcs_on(&self, strand: usize) -> usize {
        (self.offset[strand + 1] - self.offset[strand]) as usize
    }

    fn wrap(&self, strand: usize, arc: usize) -> usize {
        match self.kinds[strand] {
            StrandKind::Open => arc,
            StrandKind::Closed => arc % self.arcs_on(strand),
        }
    }

    /// Arc generator carrying the given (non-head) site.
    pub fn arc_of(&self, s: &Site) -> u32 {
        let k = self.heads[s.strand].partition_point(|&h| h < s.pos);
        self.offset[s.strand] + self.wrap(s.strand, k) as u32
    }

    /// Incoming and outgoing arcs at a head site.
    pub fn around_head(&self, s: &Site) -> (u32, u32) {
        let k = self.heads[s.strand].partition_point(|&h| h < s.pos);
        let base = self.offset[s.strand];
        (base + self.wrap(s.strand, k) as u32, base + self.wrap(s.strand, k + 1) as u32)
    }

    pub fn provenance(&self) -> Vec<ArcGenerator> {
        (0..self.kinds.len())
            .flat_map(|s| (0..self.arcs_on(s)).map(move |arc| ArcGenerator { strand: s, arc }))
            .collect()
    }

    pub fn meridians(&self) -> Vec<(u32, u32)> {
        (0..self.kinds.len())
            .map(|s| (self.offset[s], self.offset[s + 1] - 1))
            .collect()
    }
}

/// Wirtinger-type presentation: one generator per arc, one relation per
/// head. Crossing a head from the right-hand side conjugates by the
/// tree's word.
pub fn wirtinger(p: &Presentation) -> GroupPresentation {
    let labels = ArcLabels::new(p);
    let mut order: Vec<usize> = (0..p.trees.len()).collect();
    order.sort_by_key(|&i| p.trees[i].head);
    let mut relations = Vec::with_capacity(p.trees.len());
    for i in order {
        let t = &p.trees[i];
        let w: FreeWord = eval_tree(t, &mut |s: &Site| Ok(FreeWord::gen(labels.arc_of(s)))).expect("labels are total");
        let (incoming, outgoing) = labels.around_head(&t.head);
        relations.push(HeadRelation { tree: i, strand: t.head.strand, incoming, outgoing, conjugator: w });
    }
    let relators = relations
        .iter()
        .map(|r| {
            let mut w = FreeWord::gen(r.incoming).conjugate_by(&r.conjugator);
            w.push(Letter::new(r.outgoing, true));
            w
        })
        .collect();
    GroupPresentation {
        strand_kinds: p.diagram.strands.clone(),
        generators: labels.provenance(),
        relators,
        relations,
        meridians: labels.meridians(),
    }
}

/// `φ(∂w/∂g)` where φ sends every generator to `t`.
pub fn fox_phi(w: &FreeWord, g: u32) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    let mut e = 0i64;
    for l in w.letters() {
        if l.inv {
            e -= 1;
            if l.gen == g {
                out.add_term(e, BigInt::from(-1));
            }
        } else {
            if l.gen == g {
                out.add_term(e, BigInt::one());
            }
            e += 1;
        }
    }
    out
}

pub fn jacobian(gp: &GroupPresentation) -> Vec<Vec<LaurentPoly>> {
    let m = gp.generators.len() as u32;
    gp.relators.iter().map(|r| (0..m).map(|g| fox_phi(r, g)).collect()).collect()
}

const MAX_MINORS: usize = 20_000;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Gcd of all `(m−1)`-minors of the Alexander matrix, with lowest exponent
/// 0 and positive leading coefficient.
pub fn alexander_gcd(gp: &GroupPresentation) -> Result<LaurentPoly> {
    let m = gp.generators.len();
    if m <= 1 {
        return Ok(LaurentPoly::one());
    }
    let jac = jacobian(gp);
    let k = m - 1;
    // With every relator of exponent sum zero the columns sum to zero, so
    // dropping any one column gives the same minors up to sign.
    let balanced = gp.relators.iter().all(|r| r.total_exponent() == 0);
    let drop_cols: Vec<usize> = if balanced { vec![m - 1] } else { (0..m).collect() };
    let row_sets = combinations(jac.len(), k);
    if row_sets.len() * drop_cols.len() > MAX_MINORS {
        return Err(Error::Limit(format!("{} minors to examine", row_sets.len() * drop_cols.len())));
    }
    let mut g = LaurentPoly::zero();
    for &dc in &drop_cols {
        for rows in &row_sets {
            let minor: Vec<Vec<LaurentPoly>> = rows
                .iter()
                .map(|&r| jac[r].iter().enumerate().filter(|(j, _)| *j != dc).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = laurent_det(&minor);
            g = if g.is_zero() { d.canonical_unit() } else { laurent_gcd(&g, &d) };
            if g == LaurentPoly::one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedAlexander {
    pub poly: LaurentPoly,
    /// All minors vanished; `poly` is zero and no normalization applies.
    pub degenerate: bool,
}

/// Alexander polynomial of a long knot, normalized by `Δ(1) = 1` and
/// `Δ'(1) = 0`.
pub fn alexander_normalized(gp: &GroupPresentation) -> Result<NormalizedAlexander> {
    if !gp.is_long_knot() {
        return Err(Error::NotLongKnot("expected a single open strand".into()));
    }
    let g = alexander_gcd(gp)?;
    if g.is_zero() {
        return Ok(NormalizedAlexander { poly: g, degenerate: true });
    }
    let v = g.eval_one();
    if v.abs() != BigInt::one() {
        return Err(Error::NotLongKnot(format!("Δ(1) = {v}")));
    }
    let g = g.scale(&v);
    let a = -g.derivative_at_one();
    let a = a.to_i64().ok_or_else(|| Error::Limit("exponent shift overflows".into()))?;
    Ok(NormalizedAlexander { poly: g.shift(a), degenerate: false })
}

/// Normalized Alexander polynomial straight from a presentation.
pub fn alexander(p: &Presentation) -> Result<NormalizedAlexander> {
    p.require_long_knot()?;
    alexander_normalized(&wirtinger(p))
}

/// Coefficients `α_2..α_kmax` of the expansion `Δ = 1 + Σ α_k (1−t)^k`.
pub fn alpha_coeffs(d: &LaurentPoly, kmax: usize) -> Result<Vec<i64>> {
    if kmax < 2 {
        return Err(Error::Argument(format!("kmax must be at least 2, got {kmax}")));
    }
    if d.eval_one() != BigInt::one() {
        return Err(Error::Argument("polynomial is not normalized (Δ(1) ≠ 1)".into()));
    }
    // t^e = (1−u)^e, with (1−u)^{-n} = Σ C(n+i−1, i) u^i.
    let mut series = vec![BigInt::zero(); kmax + 1];
    for (e, c) in d.terms() {
        let mut coef = BigInt::one();
        for (i, slot) in series.iter_mut().enumerate() {
            if i > 0 {
                if e >= 0 {
                    // C(e, i) (−1)^i
                    coef = -coef * BigInt::from(e - i as i64 + 1) / BigInt::from(i);
                } else {
                    let n = -e;
                    coef = coef * BigInt::from(n + i as i64 - 1) / BigInt::from(i);
                }
            }
            *slot += c * &coef;
        }
    }
    series[2..]
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| Error::Limit(format!("α coefficient {c} overflows"))))
        .collect()
}

pub fn alpha(p: &Presentation, kmax: usize) -> Result<Vec<i64>> {
    let d = alexander(p)?;
    if d.degenerate {
        return Err(Error::NotLongKnot("all minors vanish".into()));
    }
    alpha_coeffs(&d.poly, kmax)
}
