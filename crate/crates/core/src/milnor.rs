//! Truncated Magnus expansion, combinatorial longitudes and welded Milnor
//! invariants of string links.
//!
//! Index sequences are 1-based, matching component numbers. In text they
//! are written as digit strings (`123`), with parentheses around indices
//! above 9 (`1(10)3`).

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::group::{eval_tree, wirtinger, BracketAlgebra, FreeWord, GroupPresentation};
use crate::model::{Presentation, Site};

/// Element of `Z<<X_1..X_n>>` modulo words of length `> k`, stored by
/// degree; a word `X_{a_1}..X_{a_d}` sits at base-n index `a_1..a_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    n: usize,
    k: usize,
    coeffs: Vec<Vec<i128>>,
}

impl TruncatedSeries {
    pub fn zero(n: usize, k: usize) -> Self {
        let coeffs = (0..=k).map(|d| vec![0; n.pow(d as u32)]).collect();
        Self { n, k, coeffs }
    }

    pub fn one(n: usize, k: usize) -> Self {
        let mut s = Self::zero(n, k);
        s.coeffs[0][0] = 1;
        s
    }

    /// `1 + X_i`, or its inverse `Σ (−X_i)^j` when `inv`.
    pub fn generator(n: usize, k: usize, i: usize, inv: bool) -> Self {
        assert!(i < n, "variable {i} out of range");
        let mut s = Self::one(n, k);
        let mut idx = 0usize;
        for d in 1..=k {
            idx = idx * n + i;
            if inv {
                s.coeffs[d][idx] = if d % 2 == 0 { 1 } else { -1 };
            } else if d == 1 {
                s.coeffs[d][idx] = 1;
            }
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn constant(&self) -> i128 {
        self.coeffs[0][0]
    }

    /// Coefficient of `X_{w_1} .. X_{w_d}` (0-based variables).
    pub fn coeff(&self, word: &[usize]) -> i128 {
        if word.len() > self.k {
            return 0;
        }
        let idx = word.iter().fold(0, |acc, &v| acc * self.n + v);
        self.coeffs[word.len()][idx]
    }

    pub fn set_coeff(&mut self, word: &[usize], c: i128) {
        assert!(word.len() <= self.k);
        let idx = word.iter().fold(0, |acc, &v| acc * self.n + v);
        self.coeffs[word.len()][idx] = c;
    }

    /// Nonzero terms as (word, coefficient), by degree then word.
    pub fn terms(&self) -> Vec<(Vec<usize>, i128)> {
        let mut out = Vec::new();
        for (d, layer) in self.coeffs.iter().enumerate() {
            for (idx, &c) in layer.iter().enumerate() {
                if c != 0 {
                    let mut w = vec![0; d];
                    let mut x = idx;
                    for slot in w.iter_mut().rev() {
                        *slot = x % self.n;
                        x /= self.n;
                    }
                    out.push((w, c));
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            for (x, y) in a.iter_mut().zip(b) {
                *x -= y;
            }
        }
        out
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Self {
        assert_eq!(self.constant(), 1, "only unipotent series are inverted");
        let one = Self::one(self.n, self.k);
        let nil = self.sub(&one);
        let mut inv = one.clone();
        for _ in 0..self.k {
            inv = one.sub(&(&nil * &inv));
        }
        inv
    }

    /// Sets every variable outside `keep` to zero and renumbers the rest.
    pub fn project(&self, keep: &[usize]) -> Self {
        let m = keep.len();
        let mut out = Self::zero(m, self.k);
        for (w, c) in self.terms() {
            if let Some(nw) = w.iter().map(|v| keep.iter().position(|x| x == v)).collect::<Option<Vec<_>>>() {
                let idx = nw.iter().fold(0, |acc, &v| acc * m + v);
                out.coeffs[w.len()][idx] = c;
            }
        }
        out
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!((self.n, self.k), (rhs.n, rhs.k), "series shapes differ");
        let n = self.n;
        let mut out = TruncatedSeries::zero(n, self.k);
        for d in 0..=self.k {
            let target = &mut out.coeffs[d];
            for i in 0..=d {
                let a = &self.coeffs[i];
                let b = &rhs.coeffs[d - i];
                let width = b.len();
                for (ia, &ca) in a.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    let base = ia * width;
                    for (ib, &cb) in b.iter().enumerate() {
                        if cb != 0 {
                            target[base + ib] += ca * cb;
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in terms.iter().enumerate() {
            let neg = *c < 0;
            let a = c.unsigned_abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{a}")?;
                continue;
            }
            if a != 1 {
                write!(f, "{a}*")?;
            }
            for v in w {
                write!(f, "X{}", v + 1)?;
            }
        }
        Ok(())
    }
}

/// Magnus expansion `m_i ↦ 1 + X_i` of a word in generators `0..n`.
pub fn magnus(w: &FreeWord, n: usize, k: usize) -> Result<TruncatedSeries> {
    if k < 1 {
        return Err(Error::Argument("truncation degree must be at least 1".into()));
    }
    let mut acc = TruncatedSeries::one(n, k);
    for l in w.letters() {
        if l.gen as usize >= n {
            return Err(Error::Argument(format!("generator {} is not among {n} meridians", l.gen)));
        }
        acc = &acc * &TruncatedSeries::generator(n, k, l.gen as usize, l.inv);
    }
    Ok(acc)
}

/// A series together with its inverse, so brackets need no inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Unit {
    v: TruncatedSeries,
    inv: TruncatedSeries,
}

impl BracketAlgebra for Unit {
    fn bracket(a: &Self, b: &Self) -> Self {
        let v = &(&(&a.v * &b.inv) * &a.inv) * &b.v;
        let inv = &(&(&b.inv * &a.v) * &b.v) * &a.inv;
        Unit { v, inv }
    }

    fn inverse(&self) -> Self {
        Unit { v: self.inv.clone(), inv: self.v.clone() }
    }
}

/// Longitudes `λ_i` as words in the meridians `m_1..m_n` (generator `i`
/// stands for `m_{i+1}`), valid modulo the k-th lower central subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongitudeSet {
    pub k: usize,
    pub longitudes: Vec<FreeWord>,
}

/// Words longer than this abort the word-level longitude computation.
pub const MAX_WORD_LENGTH: usize = 1 << 20;

struct Setup {
    gp: GroupPresentation,
    /// Strand of each arc generator.
    strand_of: Vec<usize>,
    /// Arc generator carrying each tail site, per relation.
    leaf_arcs: Vec<Vec<u32>>,
}

fn setup(p: &Presentation) -> Result<Setup> {
    p.require_string_link()?;
    p.check()?;
    let gp = wirtinger(p);
    let strand_of = gp.generators.iter().map(|g| g.strand).collect();
    let labels = crate::group::ArcLabels::new(p);
    let leaf_arcs = gp
        .relations
        .iter()
        .map(|r| p.trees[r.tree].root.leaves().iter().map(|s| labels.arc_of(s)).collect())
        .collect();
    Ok(Setup { gp, strand_of, leaf_arcs })
}

/// Runs the substitution rounds, evaluating trees in `A` with arc values
/// from the previous round. Returns the conjugator of each strand's last
/// arc.
fn iterate<A: BracketAlgebra + Clone + PartialEq>(
    p: &Presentation,
    s: &Setup,
    rounds: usize,
    meridian: impl Fn(usize) -> A,
    one: A,
    mul: impl Fn(&A, &A) -> Result<A>,
) -> Result<Vec<A>> {
    let n = p.diagram.len();
    let mut arcs: Vec<A> = s.strand_of.iter().map(|&j| meridian(j)).collect();
    let mut conj = vec![one.clone(); n];
    for _ in 0..rounds {
        let prev = arcs.clone();
        let mut next = prev.clone();
        let mut c = vec![one.clone(); n];
        for (ri, r) in s.gp.relations.iter().enumerate() {
            let t = &p.trees[r.tree];
            let mut leaf_iter = s.leaf_arcs[ri].iter();
            let w: A = eval_tree(t, &mut |_: &Site| Ok(prev[*leaf_iter.next().expect("one arc per leaf") as usize].clone()))?;
            let incoming = next[r.incoming as usize].clone();
            next[r.outgoing as usize] = mul(&mul(&w.inverse(), &incoming)?, &w)?;
            c[r.strand] = mul(&c[r.strand], &w)?;
        }
        arcs = next;
        let done = arcs == prev && c == conj;
        conj = c;
        if done {
            break;
        }
    }
    Ok(conj)
}

/// Longitudes computed on words. `m_i^{-e}` is prepended so that the
/// exponent sum of `m_i` in `λ_i` vanishes.
pub fn longitudes(p: &Presentation, k: usize) -> Result<LongitudeSet> {
    if k < 2 {
        return Err(Error::Argument("nilpotency class must be at least 2".into()));
    }
    let s = setup(p)?;
    let cap = |w: FreeWord| -> Result<FreeWord> {
        if w.len() > MAX_WORD_LENGTH {
            Err(Error::Limit(format!("longitude word exceeds {MAX_WORD_LENGTH} letters")))
        } else {
            Ok(w)
        }
    };
    let conj = iterate(p, &s, k, |j| FreeWord::gen(j as u32), FreeWord::identity(), |a, b| cap(a * b))?;
    let longitudes = conj
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            let e = w.exponent_sum(i as u32);
            let mut fix = FreeWord::identity();
            for _ in 0..e.unsigned_abs() {
                fix.push(crate::group::Letter::new(i as u32, e > 0));
            }
            &fix * &w
        })
        .collect();
    Ok(LongitudeSet { k, longitudes })
}

/// Magnus expansions of the longitudes, truncated at degree `degree`, in
/// the variables of the strands listed in `vars` (0-based; `X_j` for
/// strands outside the list is set to zero). Entries for strands outside
/// `vars` are `None`.
pub fn longitude_series(p: &Presentation, degree: usize, vars: &[usize]) -> Result<Vec<Option<TruncatedSeries>>> {
    let s = setup(p)?;
    let n = p.diagram.len();
    if let Some(&bad) = vars.iter().find(|&&v| v >= n) {
        return Err(Error::Sequence(format!("index {} out of range for {n} components", bad + 1)));
    }
    let m = vars.len();
    let slot = |j: usize| vars.iter().position(|&v| v == j);
    let meridian = |j: usize| match slot(j) {
        Some(i) => Unit {
            v: TruncatedSeries::generator(m, degree, i, false),
            inv: TruncatedSeries::generator(m, degree, i, true),
        },
        None => Unit { v: TruncatedSeries::one(m, degree), inv: TruncatedSeries::one(m, degree) },
    };
    let one = Unit { v: TruncatedSeries::one(m, degree), inv: TruncatedSeries::one(m, degree) };
    let conj = iterate(p, &s, degree + 1, meridian, one, |a, b| {
        Ok(Unit { v: &a.v * &b.v, inv: &b.inv * &a.inv })
    })?;
    Ok(conj
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            slot(j).map(|i| {
                if degree == 0 {
                    return c.v;
                }
                let e = c.v.coeff(&[i]);
                let fix = TruncatedSeries::generator(m, degree, i, e > 0);
                let mut acc = c.v;
                for _ in 0..e.unsigned_abs() {
                    acc = &fix * &acc;
                }
                acc
            })
        })
        .collect())
}

pub fn parse_sequence(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut chars = text.trim().chars();
    while let Some(c) = chars.next() {
        match c {
            '1'..='9' => out.push(c as usize - '0' as usize),
            '(' => {
                let mut num = String::new();
                loop {
                    match chars.next() {
                        Some(')') => break,
                        Some(d) if d.is_ascii_digit() => num.push(d),
                        _ => return Err(Error::Sequence(format!("unterminated or bad index group in {text:?}"))),
                    }
                }
                let v: usize = num.parse().map_err(|_| Error::Sequence(format!("empty index group in {text:?}")))?;
                if v == 0 {
                    return Err(Error::Sequence("indices start at 1".into()));
                }
                out.push(v);
            }
            '0' => return Err(Error::Sequence("indices start at 1".into())),
            other => return Err(Error::Sequence(format!("unexpected {other:?} in {text:?}"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Sequence("empty sequence".into()));
    }
    Ok(out)
}

pub fn format_sequence(seq: &[usize]) -> String {
    seq.iter()
        .map(|&i| if i <= 9 { i.to_string() } else { format!("({i})") })
        .collect()
}

fn check_sequence(seq: &[usize], n: usize) -> Result<()> {
    if seq.len() < 2 {
        return Err(Error::Sequence(format!("{} has length below 2", format_sequence(seq))));
    }
    if let Some(&bad) = seq.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::Sequence(format!("index {bad} out of range 1..={n}")));
    }
    Ok(())
}

/// `μ^w_I` for several sequences at once (1-based indices).
pub fn milnor_many(p: &Presentation, seqs: &[Vec<usize>]) -> Result<Vec<i64>> {
    let n = p.require_string_link()?;
    for s in seqs {
        check_sequence(s, n)?;
    }
    let Some(maxlen) = seqs.iter().map(Vec::len).max() else {
        return Ok(Vec::new());
    };
    let mut vars: Vec<usize> = seqs.iter().flatten().map(|i| i - 1).collect();
    vars.sort_unstable();
    vars.dedup();
    let series = longitude_series(p, maxlen - 1, &vars)?;
    seqs.iter()
        .map(|s| {
            let last = s[s.len() - 1] - 1;
            let word: Vec<usize> = s[..s.len() - 1]
                .iter()
                .map(|i| vars.iter().position(|&v| v == i - 1).expect("var present"))
                .collect();
            let c = series[last].as_ref().expect("var present").coeff(&word);
            i64::try_from(c).map_err(|_| Error::Limit("Milnor invariant overflows i64".into()))
        })
        .collect()
}

/// `μ^w_I`: coefficient of `X_{i_1}..X_{i_{m-1}}` in the expansion of the
/// `i_m`-th longitude.
pub fn milnor_mu(p: &Presentation, seq: &[usize]) -> Result<i64> {
    Ok(milnor_many(p, &[seq.to_vec()])?[0])
}

/// All sequences of distinct indices in `1..=n` with lengths `2..=maxlen`,
/// ordered by length and then lexicographically.
pub fn nonrepeated_sequences(n: usize, maxlen: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    for _ in 2..=maxlen.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            for i in 1..=n {
                if !s.contains(&i) {
                    let mut t = s.clone();
                    t.push(i);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
