#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use warrow::group::{alexander, alpha, LaurentPoly};
use warrow::milnor::milnor_many;
use warrow::{Presentation, StrandKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every index sequence over `1..=n` with length in `2..=maxlen`.
pub fn all_sequences(n: usize, maxlen: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    for _ in 2..=maxlen {
        layer = layer
            .iter()
            .flat_map(|s| (1..=n).map(move |i| [s.clone(), vec![i]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn mus(p: &Presentation, maxlen: usize) -> Vec<i64> {
    let n = p.diagram.len();
    milnor_many(p, &all_sequences(n, maxlen)).expect("milnor invariants")
}

pub fn alex(p: &Presentation) -> LaurentPoly {
    let d = alexander(p).expect("alexander");
    assert!(!d.degenerate);
    d.poly
}

pub fn alphas(p: &Presentation, k: usize) -> Vec<i64> {
    alpha(p, k).expect("alpha")
}

pub fn is_long_knot(p: &Presentation) -> bool {
    p.diagram.strands == [StrandKind::Open]
}

/// Builds a presentation from trees whose sites carry `(strand, rank)`;
/// positions follow rank order on each strand.
pub fn from_ranks(diagram: warrow::StrandDiagram, trees: &[warrow::WTree<(usize, u64)>]) -> Presentation {
    let mut ranks: Vec<(usize, u64)> = trees.iter().flat_map(|t| t.endpoints()).copied().collect();
    ranks.sort_unstable();
    ranks.dedup();
    let pos = |r: &(usize, u64)| {
        let before = ranks.iter().take_while(|x| x.0 < r.0 || (x.0 == r.0 && x.1 < r.1)).filter(|x| x.0 == r.0).count();
        warrow::Site::new(r.0, before)
    };
    let trees = trees.iter().map(|t| t.map_sites(pos)).collect();
    let p = Presentation::new(diagram, trees);
    p.check().expect("ranked presentation is valid");
    p
}

/// `p` with sites re-expressed as ranks spaced by `gap`.
pub fn to_ranks(p: &Presentation, gap: u64) -> Vec<warrow::WTree<(usize, u64)>> {
    p.trees.iter().map(|t| t.map_sites(|s| (s.strand, (s.pos as u64 + 1) * gap))).collect()
}
