//! Generator families and normal forms: welded long knots up to
//! w_k-equivalence (via the α coefficients) and welded string links up to
//! homotopy (via non-repeated Milnor invariants).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::alpha;
use crate::milnor::{format_sequence, milnor_many, nonrepeated_sequences};
use crate::model::{densify, keyed_trees, power, product, product_all, Node, Presentation, Site, StrandDiagram, WTree};

/// The one-tree long knot `L_k` (or `L̄_k` when `inverted`), whose
/// normalized Alexander polynomial is `1 ± (1−t)^k`.
///
/// Layout: the tail `l` at position 0, the head at 1, and `k−1` tails `r`
/// after it. The tree is the right comb `[r, [r, .. [r, l̄]]]`.
pub fn make_lk(k: usize, inverted: bool) -> Result<Presentation> {
    if k < 2 {
        return Err(Error::Argument(format!("L_k needs k >= 2, got {k}")));
    }
    let mut node = Node::twisted_leaf(Site::new(0, 0));
    for pos in (2..=k).rev() {
        node = Node::vertex(Node::leaf(Site::new(0, pos)), node);
    }
    node.set_twist(inverted);
    Ok(Presentation::new(StrandDiagram::long_knot(), vec![WTree::new(Site::new(0, 1), node)]))
}

/// The tree `T_I` on the trivial n-component string link (`T̄_I` when
/// `inverted`): tails on components `i_1..i_{k-1}`, head on `i_k`. Indices
/// are 1-based.
pub fn make_ti(seq: &[usize], n: usize, inverted: bool) -> Result<Presentation> {
    let k = seq.len();
    if k < 2 {
        return Err(Error::Sequence("T_I needs at least two indices".into()));
    }
    if let Some(&bad) = seq.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::Sequence(format!("index {bad} out of range 1..={n}")));
    }
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Sequence(format!("{} has a repeated index", format_sequence(seq))));
    }
    let site = |i: usize| Site::new(i - 1, 0);
    let mut node = Node::Leaf { site: site(seq[k - 2]), twist: k > 2 };
    for j in (0..k.saturating_sub(2)).rev() {
        node = Node::Vertex { first: Box::new(Node::leaf(site(seq[j]))), second: Box::new(node), twist: j != 0 };
    }
    node.set_twist(node.twist() ^ inverted);
    Ok(Presentation::new(StrandDiagram::string_link(n), vec![WTree::new(site(seq[k - 1]), node)]))
}

/// `L_k^x`, using `L̄_k` for negative `x`.
pub fn lk_power(k: usize, x: i64) -> Result<Presentation> {
    power(&make_lk(k, x < 0)?, x.unsigned_abs() as usize)
}

/// `W^x` for the tree `T_I`, using `T̄_I` for negative `x`.
pub fn ti_power(seq: &[usize], n: usize, x: i64) -> Result<Presentation> {
    power(&make_ti(seq, n, x < 0)?, x.unsigned_abs() as usize)
}

/// Which α coefficients classify w_k-equivalence classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaRange {
    /// `α_2..α_k`.
    #[default]
    Inclusive,
    /// `α_2..α_{k-1}`.
    Exclusive,
}

impl AlphaRange {
    pub fn upper(self, k: usize) -> usize {
        match self {
            AlphaRange::Inclusive => k,
            AlphaRange::Exclusive => k - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongKnotNormalForm {
    pub k: usize,
    /// `x_2, x_3, ..`
    pub exponents: Vec<i64>,
    #[serde(skip)]
    pub representative: Presentation,
}

fn alphas_upto(p: &Presentation, upper: usize) -> Result<Vec<i64>> {
    if upper < 2 {
        return Ok(Vec::new());
    }
    alpha(p, upper)
}

/// Exponents `x_i` with `α_i(∏ L_j^{x_j}) = α_i(p)` for the chosen range.
pub fn wk_normal_form(p: &Presentation, k: usize, range: AlphaRange) -> Result<LongKnotNormalForm> {
    if k < 2 {
        return Err(Error::Argument(format!("k must be at least 2, got {k}")));
    }
    p.check()?;
    p.require_long_knot()?;
    let upper = range.upper(k);
    let target = alphas_upto(p, upper)?;
    let mut rep = Presentation::empty(StrandDiagram::long_knot());
    let mut exponents = Vec::new();
    for i in 2..=upper {
        let current = alpha(&rep, i)?;
        let x = target[i - 2] - current[i - 2];
        exponents.push(x);
        if x != 0 {
            rep = product(&rep, &lk_power(i, x)?)?;
        }
    }
    Ok(LongKnotNormalForm { k, exponents, representative: rep })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum WkDecision {
    Equal,
    Distinct { index: usize, left: i64, right: i64 },
}

pub fn decide_wk(p: &Presentation, q: &Presentation, k: usize, range: AlphaRange) -> Result<WkDecision> {
    if k < 2 {
        return Err(Error::Argument(format!("k must be at least 2, got {k}")));
    }
    let upper = range.upper(k);
    let (a, b) = rayon::join(|| alphas_upto(p, upper), || alphas_upto(q, upper));
    let (a, b) = (a?, b?);
    Ok(match a.iter().zip(&b).position(|(x, y)| x != y) {
        Some(i) => WkDecision::Distinct { index: i + 2, left: a[i], right: b[i] },
        None => WkDecision::Equal,
    })
}

/// Whether two endpoints of the tree lie on the same strand.
pub fn is_repeated(t: &WTree) -> bool {
    let mut strands: Vec<usize> = t.endpoints().iter().map(|s| s.strand).collect();
    strands.sort_unstable();
    strands.windows(2).any(|w| w[0] == w[1])
}

/// Deletes every repeated tree and re-densifies positions.
pub fn homotopy_reduce(p: &Presentation) -> Presentation {
    let keyed: Vec<_> = keyed_trees(p)
        .into_iter()
        .zip(&p.trees)
        .filter(|(_, t)| !is_repeated(t))
        .map(|(k, _)| k)
        .collect();
    densify(&p.diagram, &keyed).0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringLinkNormalForm {
    pub n: usize,
    /// `(I·i, x)` in product order.
    pub terms: Vec<(Vec<usize>, i64)>,
    pub representative: Presentation,
}

impl StringLinkNormalForm {
    pub fn exponents(&self) -> BTreeMap<String, i64> {
        self.terms.iter().map(|(s, x)| (format_sequence(s), *x)).collect()
    }
}

impl Serialize for StringLinkNormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            exponents: BTreeMap<String, i64>,
        }
        Repr { n: self.n, exponents: self.exponents() }.serialize(s)
    }
}

/// `S_k(i)`: sequences of `k` distinct indices from `1..=n` without `i`,
/// whose last entry is their maximum, in lexicographic order.
pub fn index_set(n: usize, k: usize, i: usize) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(pool: &[usize], k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            let max = *cur.iter().max().expect("nonempty");
            if cur[k - 1] == max {
                out.push(cur.clone());
            }
            return;
        }
        for &j in pool {
            if !cur.contains(&j) {
                cur.push(j);
                rec(pool, k, cur, out);
                cur.pop();
            }
        }
    }
    if k >= 1 {
        rec(&pool, k, &mut cur, &mut out);
    }
    out
}

/// Product of generators `W_{Ii}^{x_I}` realizing the non-repeated Milnor
/// invariants of `p`, built layer by layer.
pub fn homotopy_normal_form(p: &Presentation) -> Result<StringLinkNormalForm> {
    p.check()?;
    let n = p.require_string_link()?;
    let mut rep = Presentation::empty(StrandDiagram::string_link(n));
    let mut terms = Vec::new();
    for k in 1..n {
        let layer: Vec<Vec<usize>> = (1..=n)
            .flat_map(|i| {
                index_set(n, k, i).into_iter().map(move |mut s| {
                    s.push(i);
                    s
                })
            })
            .collect();
        let (target, current) = rayon::join(|| milnor_many(p, &layer), || milnor_many(&rep, &layer));
        let (target, current) = (target?, current?);
        let mut factors = Vec::new();
        for ((seq, a), b) in layer.into_iter().zip(target).zip(current) {
            let x = a - b;
            if x != 0 {
                factors.push(ti_power(&seq, n, x)?);
            }
            terms.push((seq, x));
        }
        let lk = product_all(n, &factors)?;
        rep = product(&rep, &lk)?;
    }
    Ok(StringLinkNormalForm { n, terms, representative: rep })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum HomotopyDecision {
    Equal,
    Distinct { sequence: String, left: i64, right: i64 },
}

pub fn decide_homotopy(p: &Presentation, q: &Presentation) -> Result<HomotopyDecision> {
    let n = p.require_string_link()?;
    let m = q.require_string_link()?;
    if n != m {
        return Err(Error::Argument(format!("component counts differ: {n} vs {m}")));
    }
    let seqs = nonrepeated_sequences(n, n);
    let (a, b) = rayon::join(|| milnor_many(p, &seqs), || milnor_many(q, &seqs));
    let (a, b) = (a?, b?);
    Ok(match a.iter().zip(&b).position(|(x, y)| x != y) {
        Some(i) => HomotopyDecision::Distinct { sequence: format_sequence(&seqs[i]), left: a[i], right: b[i] },
        None => HomotopyDecision::Equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{alexander, wirtinger, FreeWord, LaurentPoly};
    use crate::milnor::milnor_mu;
    use crate::model::is_valid;

    fn one_minus_t_pow(k: u32, sign: i64) -> LaurentPoly {
        let base = LaurentPoly::from_terms([(0, 1), (1, -1)]);
        &LaurentPoly::one() + &base.pow(k).scale(&sign.into())
    }

    #[test]
    fn lk_relator_shape() {
        let p = make_lk(3, false).unwrap();
        assert!(is_valid(&p));
        let gp = wirtinger(&p);
        assert_eq!(gp.generators.len(), 2);
        // l = generator 0, r = generator 1; R_3 = [[l, r̄], r̄]
        let (l, r) = (FreeWord::gen(0), FreeWord::gen(1));
        let r3 = FreeWord::commutator(&FreeWord::commutator(&l, &r.inverse()), &r.inverse());
        let expected = &(&(&r3 * &l) * &r3.inverse()) * &r.inverse();
        assert_eq!(gp.relators, vec![expected]);
    }

    #[test]
    fn lk_alexander() {
        for k in 2..=5 {
            assert_eq!(alexander(&make_lk(k, false).unwrap()).unwrap().poly, one_minus_t_pow(k as u32, 1));
            assert_eq!(alexander(&make_lk(k, true).unwrap()).unwrap().poly, one_minus_t_pow(k as u32, -1));
        }
        assert!(make_lk(1, false).is_err());
    }

    #[test]
    fn ti_values() {
        let p = make_ti(&[1, 2], 2, false).unwrap();
        assert_eq!(milnor_mu(&p, &[1, 2]).unwrap(), 1);
        assert_eq!(milnor_mu(&p, &[2, 1]).unwrap(), 0);
        let q = make_ti(&[1, 2, 3], 3, true).unwrap();
        assert_eq!(milnor_mu(&q, &[1, 2, 3]).unwrap(), -1);
        assert!(make_ti(&[1, 1], 2, false).is_err());
        assert!(make_ti(&[1, 4], 3, false).is_err());
    }

    #[test]
    fn wk_examples() {
        let unknot = Presentation::empty(StrandDiagram::long_knot());
        assert_eq!(wk_normal_form(&unknot, 4, AlphaRange::Inclusive).unwrap().exponents, vec![0, 0, 0]);
        let l3 = make_lk(3, false).unwrap();
        assert_eq!(wk_normal_form(&l3, 5, AlphaRange::Inclusive).unwrap().exponents, vec![0, 1, 0, 0]);
        assert_eq!(wk_normal_form(&l3, 5, AlphaRange::Exclusive).unwrap().exponents, vec![0, 1, 0]);
        let d = decide_wk(&make_lk(2, false).unwrap(), &make_lk(2, true).unwrap(), 2, AlphaRange::Inclusive).unwrap();
        assert_eq!(d, WkDecision::Distinct { index: 2, left: 1, right: -1 });
        assert_eq!(decide_wk(&l3, &l3, 6, AlphaRange::Inclusive).unwrap(), WkDecision::Equal);
    }

    #[test]
    fn index_sets() {
        assert_eq!(index_set(3, 1, 3), vec![vec![1], vec![2]]);
        assert_eq!(index_set(4, 3, 4), vec![vec![1, 2, 3], vec![2, 1, 3]]);
        assert_eq!(index_set(3, 2, 1), vec![vec![2, 3]]);
    }

    #[test]
    fn homotopy_examples() {
        let p = make_ti(&[1, 2], 2, false).unwrap();
        let nf = homotopy_normal_form(&p).unwrap();
        assert_eq!(nf.exponents()["12"], 1);
        assert_eq!(nf.exponents()["21"], 0);
        assert_eq!(homotopy_reduce(&p), p);
        let q = make_ti(&[1, 2], 2, true).unwrap();
        let d = decide_homotopy(&p, &q).unwrap();
        assert_eq!(d, HomotopyDecision::Distinct { sequence: "12".into(), left: 1, right: -1 });
        let empty = homotopy_normal_form(&Presentation::empty(StrandDiagram::string_link(3))).unwrap();
        assert!(empty.representative.trees.is_empty());
        assert!(empty.terms.iter().all(|(_, x)| *x == 0));
    }

    #[test]
    fn self_arrows_vanish_under_reduction() {
        let p = Presentation::new(
            StrandDiagram::string_link(2),
            vec![
                WTree::arrow(Site::new(0, 0), Site::new(0, 2), false),
                WTree::arrow(Site::new(1, 0), Site::new(0, 1), false),
            ],
        );
        let q = homotopy_reduce(&p);
        assert!(is_valid(&q));
        assert_eq!(q.trees, vec![WTree::arrow(Site::new(1, 0), Site::new(0, 0), false)]);
        let only_self = Presentation::new(StrandDiagram::long_knot(), vec![WTree::arrow(Site::new(0, 0), Site::new(0, 1), true)]);
        assert!(homotopy_reduce(&only_self).trees.is_empty());
    }
}
