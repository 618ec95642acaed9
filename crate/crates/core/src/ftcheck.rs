//! Alternating sums over crossing subsets, the defining test for finite
//! type invariants.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss::{canonical_arrow_presentation, GaussCode, GaussStrand};
use crate::group::{alexander, alpha_coeffs};
use crate::milnor::{format_sequence, milnor_mu, parse_sequence};

/// Default cap on `|S|` for [`alternating_sum`].
pub const DEFAULT_SUBSET_LIMIT: usize = 12;

/// Replaces the given classical crossings by virtual ones, i.e. forgets
/// them.
pub fn virtualize(g: &GaussCode, crossings: &BTreeSet<u32>) -> Result<GaussCode> {
    let present = g.crossings();
    if let Some(bad) = crossings.iter().find(|c| !present.contains(c)) {
        return Err(Error::Argument(format!("unknown crossing {bad}")));
    }
    Ok(GaussCode::new(
        g.strands
            .iter()
            .map(|s| GaussStrand {
                kind: s.kind,
                passages: s.passages.iter().filter(|p| !crossings.contains(&p.crossing)).copied().collect(),
            })
            .collect(),
    ))
}

/// A named integer-vector valued invariant of Gauss codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Functional {
    /// `alpha:K`, the single coefficient `α_K` of a long knot.
    Alpha(usize),
    /// `alphas:K`, the vector `α_2..α_K`.
    Alphas(usize),
    /// `mu:I`, a welded Milnor invariant of a string link.
    Mu(Vec<usize>),
    /// `crossings`, the number of classical crossings (not finite type of
    /// any bounded degree; useful as a control).
    Crossings,
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = || arg.parse::<usize>().map_err(|_| Error::Argument(format!("bad argument in {s:?}")));
        match name {
            "alpha" => Ok(Functional::Alpha(num()?)),
            "alphas" => Ok(Functional::Alphas(num()?)),
            "mu" => Ok(Functional::Mu(parse_sequence(arg)?)),
            "crossings" => Ok(Functional::Crossings),
            _ => Err(Error::Argument(format!("unknown functional {name:?}; known: alpha:K, alphas:K, mu:I, crossings"))),
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Alpha(k) => write!(f, "alpha:{k}"),
            Functional::Alphas(k) => write!(f, "alphas:{k}"),
            Functional::Mu(s) => write!(f, "mu:{}", format_sequence(s)),
            Functional::Crossings => f.write_str("crossings"),
        }
    }
}

impl Functional {
    pub fn evaluate(&self, g: &GaussCode) -> Result<Vec<i64>> {
        match self {
            Functional::Alpha(k) | Functional::Alphas(k) => {
                let d = alexander(&canonical_arrow_presentation(g)?)?;
                if d.degenerate {
                    return Err(Error::NotLongKnot("all minors vanish".into()));
                }
                let a = alpha_coeffs(&d.poly, *k)?;
                Ok(match self {
                    Functional::Alpha(_) => vec![a[k - 2]],
                    _ => a,
                })
            }
            Functional::Mu(seq) => Ok(vec![milnor_mu(&canonical_arrow_presentation(g)?, seq)?]),
            Functional::Crossings => Ok(vec![g.crossing_count() as i64]),
        }
    }
}

/// `Σ_{S' ⊆ S} (−1)^{|S'|} v(g with S' virtualized)`, coordinate-wise.
pub fn alternating_sum<F>(v: F, g: &GaussCode, subset: &BTreeSet<u32>, limit: usize) -> Result<Vec<i64>>
where
    F: Fn(&GaussCode) -> Result<Vec<i64>> + Sync,
{
    if subset.len() > limit {
        return Err(Error::Limit(format!("|S| = {} exceeds the limit {limit}", subset.len())));
    }
    virtualize(g, subset)?;
    let ids: Vec<u32> = subset.iter().copied().collect();
    let values: Vec<(bool, Vec<i64>)> = (0u64..1 << ids.len())
        .into_par_iter()
        .map(|mask| {
            let chosen: BTreeSet<u32> = ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| *c).collect();
            let value = v(&virtualize(g, &chosen)?)?;
            Ok((chosen.len() % 2 == 1, value))
        })
        .collect::<Result<_>>()?;
    let width = values.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut sum = vec![0i64; width];
    for (odd, v) in values {
        if v.len() != width {
            return Err(Error::Argument("functional returned vectors of different lengths".into()));
        }
        for (s, x) in sum.iter_mut().zip(v) {
            *s += if odd { -x } else { x };
        }
    }
    Ok(sum)
}

/// All `size`-element subsets of the crossings of `g`.
pub fn crossing_subsets(g: &GaussCode, size: usize) -> Vec<BTreeSet<u32>> {
    let ids: Vec<u32> = g.crossings().into_iter().collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(ids: &[u32], start: usize, size: usize, cur: &mut Vec<u32>, out: &mut Vec<BTreeSet<u32>>) {
        if cur.len() == size {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..ids.len() {
            cur.push(ids[i]);
            rec(ids, i + 1, size, cur, out);
            cur.pop();
        }
    }
    rec(&ids, 0, size, &mut cur, &mut out);
    out
}
