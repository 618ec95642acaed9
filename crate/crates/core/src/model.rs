//! Strand diagrams, sites, w-trees and presentations.
//!
//! A presentation is a crossingless diagram (a list of open or closed
//! strands) together with a list of w-trees whose endpoints sit at integer
//! positions along the strands.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrandKind {
    Open,
    Closed,
}

/// Strands of a crossingless diagram; the strand id is the index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrandDiagram {
    pub strands: Vec<StrandKind>,
}

impl StrandDiagram {
    pub fn new(strands: Vec<StrandKind>) -> Self {
        Self { strands }
    }

    /// The trivial n-component string link.
    pub fn string_link(n: usize) -> Self {
        Self::new(vec![StrandKind::Open; n])
    }

    pub fn long_knot() -> Self {
        Self::string_link(1)
    }

    pub fn knot() -> Self {
        Self::new(vec![StrandKind::Closed])
    }

    pub fn len(&self) -> usize {
        self.strands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strands.is_empty()
    }

    pub fn kind(&self, strand: usize) -> Option<StrandKind> {
        self.strands.get(strand).copied()
    }

    pub fn is_string_link(&self) -> bool {
        !self.strands.is_empty() && self.strands.iter().all(|k| *k == StrandKind::Open)
    }
}

/// A position on a strand, serialized as `[strand, pos]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub strand: usize,
    pub pos: usize,
}

impl Site {
    pub const fn new(strand: usize, pos: usize) -> Self {
        Self { strand, pos }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.strand, self.pos)
    }
}

impl Serialize for Site {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.strand, self.pos).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Site {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (strand, pos) = <(usize, usize)>::deserialize(d)?;
        Ok(Site { strand, pos })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    #[default]
    Right,
}

/// A node of a w-tree. `twist` is the parity of twists on the edge from
/// this node towards the head; on the root it is the terminal edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node<S = Site> {
    Leaf { site: S, twist: bool },
    Vertex { first: Box<Node<S>>, second: Box<Node<S>>, twist: bool },
}

impl<S> Node<S> {
    pub fn leaf(site: S) -> Self {
        Node::Leaf { site, twist: false }
    }

    pub fn twisted_leaf(site: S) -> Self {
        Node::Leaf { site, twist: true }
    }

    pub fn vertex(first: Node<S>, second: Node<S>) -> Self {
        Node::Vertex { first: Box::new(first), second: Box::new(second), twist: false }
    }

    pub fn twist(&self) -> bool {
        match self {
            Node::Leaf { twist, .. } | Node::Vertex { twist, .. } => *twist,
        }
    }

    pub fn set_twist(&mut self, value: bool) {
        match self {
            Node::Leaf { twist, .. } | Node::Vertex { twist, .. } => *twist = value,
        }
    }

    pub fn with_twist(mut self, value: bool) -> Self {
        self.set_twist(value);
        self
    }

    pub fn flipped(mut self) -> Self {
        let t = self.twist();
        self.set_twist(!t);
        self
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn degree(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Vertex { first, second, .. } => first.degree() + second.degree(),
        }
    }

    /// Leaf sites in depth-first order (first child before second).
    pub fn leaves(&self) -> Vec<&S> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a S>) {
        match self {
            Node::Leaf { site, .. } => out.push(site),
            Node::Vertex { first, second, .. } => {
                first.collect_leaves(out);
                second.collect_leaves(out);
            }
        }
    }

    pub fn map_sites<T>(&self, f: &mut impl FnMut(&S) -> T) -> Node<T> {
        match self {
            Node::Leaf { site, twist } => Node::Leaf { site: f(site), twist: *twist },
            Node::Vertex { first, second, twist } => {
                let a = first.map_sites(f);
                let b = second.map_sites(f);
                Node::Vertex { first: Box::new(a), second: Box::new(b), twist: *twist }
            }
        }
    }

    /// Follows a path of child selectors (0 = first, 1 = second).
    pub fn at_path(&self, path: &[u8]) -> Option<&Node<S>> {
        let mut node = self;
        for &step in path {
            node = match (node, step) {
                (Node::Vertex { first, .. }, 0) => first,
                (Node::Vertex { second, .. }, 1) => second,
                _ => return None,
            };
        }
        Some(node)
    }

    pub fn at_path_mut(&mut self, path: &[u8]) -> Option<&mut Node<S>> {
        let mut node = self;
        for &step in path {
            node = match (node, step) {
                (Node::Vertex { first, .. }, 0) => first,
                (Node::Vertex { second, .. }, 1) => second,
                _ => return None,
            };
        }
        Some(node)
    }

    /// Paths of all internal vertices, in preorder.
    pub fn vertex_paths(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((node, path)) = stack.pop() {
            if let Node::Vertex { first, second, .. } = node {
                let mut p1 = path.clone();
                p1.push(1);
                let mut p0 = path.clone();
                p0.push(0);
                out.push(path);
                stack.push((second, p1));
                stack.push((first, p0));
            }
        }
        out
    }

    /// Paths of all leaves, in depth-first order.
    pub fn leaf_paths(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((node, path)) = stack.pop() {
            match node {
                Node::Leaf { .. } => out.push(path),
                Node::Vertex { first, second, .. } => {
                    let mut p1 = path.clone();
                    p1.push(1);
                    let mut p0 = path;
                    p0.push(0);
                    stack.push((second, p1));
                    stack.push((first, p0));
                }
            }
        }
        out
    }

    /// Same shape and twist bits everywhere (sites ignored).
    pub fn same_shape<T>(&self, other: &Node<T>) -> bool {
        match (self, other) {
            (Node::Leaf { twist: a, .. }, Node::Leaf { twist: b, .. }) => a == b,
            (
                Node::Vertex { first: f1, second: s1, twist: a },
                Node::Vertex { first: f2, second: s2, twist: b },
            ) => a == b && f1.same_shape(f2) && s1.same_shape(s2),
            _ => false,
        }
    }
}

/// A w-tree: a head attached on one side of a strand and a rooted binary
/// tree of tails.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WTree<S = Site> {
    pub head: S,
    pub side: Side,
    pub root: Node<S>,
}

impl<S> WTree<S> {
    pub fn new(head: S, root: Node<S>) -> Self {
        Self { head, side: Side::Right, root }
    }

    /// A w-arrow with the given tail and head; `twist` is the terminal twist.
    pub fn arrow(tail: S, head: S, twist: bool) -> Self {
        Self::new(head, Node::Leaf { site: tail, twist })
    }

    pub fn degree(&self) -> usize {
        self.root.degree()
    }

    pub fn is_arrow(&self) -> bool {
        self.root.is_leaf()
    }

    /// Twist parity of the terminal edge after moving the head to the right.
    pub fn effective_twist(&self) -> bool {
        self.root.twist() ^ (self.side == Side::Left)
    }

    pub fn normalized(mut self) -> Self {
        let t = self.effective_twist();
        self.side = Side::Right;
        self.root.set_twist(t);
        self
    }

    /// Head site followed by leaf sites in depth-first order.
    pub fn endpoints(&self) -> Vec<&S> {
        let mut out = vec![&self.head];
        out.extend(self.root.leaves());
        out
    }

    pub fn map_sites<T>(&self, mut f: impl FnMut(&S) -> T) -> WTree<T> {
        let head = f(&self.head);
        WTree { head, side: self.side, root: self.root.map_sites(&mut f) }
    }
}

/// Crossingless diagram plus w-trees.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Presentation {
    pub diagram: StrandDiagram,
    pub trees: Vec<WTree>,
}

impl Presentation {
    pub fn new(diagram: StrandDiagram, trees: Vec<WTree>) -> Self {
        Self { diagram, trees }
    }

    pub fn empty(diagram: StrandDiagram) -> Self {
        Self::new(diagram, Vec::new())
    }

    pub fn max_degree(&self) -> usize {
        self.trees.iter().map(WTree::degree).max().unwrap_or(0)
    }

    pub fn is_arrow_presentation(&self) -> bool {
        self.trees.iter().all(WTree::is_arrow)
    }

    /// Number of endpoints on each strand.
    pub fn strand_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.diagram.len()];
        for t in &self.trees {
            for s in t.endpoints() {
                if let Some(c) = counts.get_mut(s.strand) {
                    *c += 1;
                }
            }
        }
        counts
    }

    pub fn check(&self) -> Result<()> {
        let v = validate(self);
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
            Err(Error::Invalid(msgs.join("; ")))
        }
    }

    pub fn require_string_link(&self) -> Result<usize> {
        if self.diagram.is_string_link() {
            Ok(self.diagram.len())
        } else {
            Err(Error::NotStringLink("every strand must be open".into()))
        }
    }

    pub fn require_long_knot(&self) -> Result<()> {
        if self.diagram.strands == [StrandKind::Open] {
            Ok(())
        } else {
            Err(Error::NotLongKnot("expected a single open strand".into()))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Presentation = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.check()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    StrandOutOfRange { tree: usize, site: Site },
    SiteCollision { site: Site, trees: Vec<usize> },
    NonDense { strand: usize, missing: usize, count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StrandOutOfRange { tree, site } => {
                write!(f, "tree {tree}: site {site} refers to a missing strand")
            }
            Violation::SiteCollision { site, trees } => {
                write!(f, "site collision at {site} (trees {trees:?})")
            }
            Violation::NonDense { strand, missing, count } => write!(
                f,
                "strand {strand}: positions are not dense, {missing} unused among 0..{count}"
            ),
        }
    }
}

/// Checks that endpoints are pairwise distinct, lie on existing strands,
/// and that positions on every strand are exactly `0..m`.
pub fn validate(p: &Presentation) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut owners: BTreeMap<Site, Vec<usize>> = BTreeMap::new();
    for (i, t) in p.trees.iter().enumerate() {
        for s in t.endpoints() {
            if s.strand >= p.diagram.len() {
                out.push(Violation::StrandOutOfRange { tree: i, site: *s });
            } else {
                owners.entry(*s).or_default().push(i);
            }
        }
    }
    for (site, trees) in &owners {
        if trees.len() > 1 {
            out.push(Violation::SiteCollision { site: *site, trees: trees.clone() });
        }
    }
    for strand in 0..p.diagram.len() {
        let count = owners.range(Site::new(strand, 0)..=Site::new(strand, usize::MAX)).count();
        let missing = (0..count).filter(|&q| !owners.contains_key(&Site::new(strand, q))).count();
        if missing > 0 {
            out.push(Violation::NonDense { strand, missing, count });
        }
    }
    out
}

pub fn is_valid(p: &Presentation) -> bool {
    validate(p).is_empty()
}

/// Moves every head to the right side of its strand.
pub fn normalize_sides(p: &Presentation) -> Presentation {
    Presentation {
        diagram: p.diagram.clone(),
        trees: p.trees.iter().cloned().map(WTree::normalized).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn from_negative(negative: bool) -> Self {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn flip(self) -> Self {
        Self::from_negative(!self.is_negative())
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedArrow {
    pub tail: Site,
    pub head: Site,
    pub sign: Sign,
}

/// Reads off the crossing signs of an arrow-only presentation, ordered by
/// head site.
pub fn to_signed_arrows(p: &Presentation) -> Result<Vec<SignedArrow>> {
    let mut out = Vec::with_capacity(p.trees.len());
    for (i, t) in p.trees.iter().enumerate() {
        match &t.root {
            Node::Leaf { site, .. } => out.push(SignedArrow {
                tail: *site,
                head: t.head,
                sign: Sign::from_negative(t.effective_twist()),
            }),
            Node::Vertex { .. } => return Err(Error::NotArrow { index: i, degree: t.degree() }),
        }
    }
    out.sort_by_key(|a| a.head);
    Ok(out)
}

/// Moves the basepoint of a closed strand forward by `shift` endpoints.
pub fn rotate_basepoint(p: &Presentation, strand: usize, shift: usize) -> Result<Presentation> {
    match p.diagram.kind(strand) {
        Some(StrandKind::Closed) => {}
        Some(StrandKind::Open) => {
            return Err(Error::Argument(format!("strand {strand} is open; basepoints live on closed strands")))
        }
        None => return Err(Error::Argument(format!("strand {strand} does not exist"))),
    }
    let m = p.strand_counts()[strand];
    if m == 0 {
        return Ok(p.clone());
    }
    let shift = shift % m;
    let rot = |s: &Site| {
        if s.strand == strand {
            Site::new(strand, (s.pos + m - shift) % m)
        } else {
            *s
        }
    };
    Ok(Presentation {
        diagram: p.diagram.clone(),
        trees: p.trees.iter().map(|t| t.map_sites(rot)).collect(),
    })
}

/// Stacks `q` after `p`: strand i of the product runs through strand i of
/// `p` and then strand i of `q`. Both must be string links with the same
/// number of components.
pub fn product(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    let n = p.require_string_link()?;
    let m = q.require_string_link()?;
    if n != m {
        return Err(Error::Argument(format!("component counts differ: {n} vs {m}")));
    }
    let offsets = p.strand_counts();
    let mut trees = p.trees.clone();
    trees.extend(q.trees.iter().map(|t| t.map_sites(|s| Site::new(s.strand, s.pos + offsets[s.strand]))));
    Ok(Presentation { diagram: p.diagram.clone(), trees })
}

/// `p` concatenated with itself `e` times.
pub fn power(p: &Presentation, e: usize) -> Result<Presentation> {
    let n = p.require_string_link()?;
    let mut acc = Presentation::empty(StrandDiagram::string_link(n));
    for _ in 0..e {
        acc = product(&acc, p)?;
    }
    Ok(acc)
}

/// Ordered product of a list of string-link presentations on `n` strands.
pub fn product_all<'a>(n: usize, factors: impl IntoIterator<Item = &'a Presentation>) -> Result<Presentation> {
    let mut acc = Presentation::empty(StrandDiagram::string_link(n));
    for f in factors {
        acc = product(&acc, f)?;
    }
    Ok(acc)
}

// Positions are rebuilt from sort keys whenever endpoints are inserted or
// duplicated. A key orders first by strand and old position, then by a
// refinement path: originals carry `[1]`, slots before an old position use
// `[0, ..]`, copies created next to a site extend its path.

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Key {
    pub strand: usize,
    pub major: usize,
    pub sub: Vec<u16>,
}

impl Key {
    pub fn original(s: &Site) -> Self {
        Key { strand: s.strand, major: s.pos, sub: vec![1] }
    }

    /// A slot strictly before the original at `s`, ordered by `i`.
    pub fn before(s: &Site, i: u16) -> Self {
        Key { strand: s.strand, major: s.pos, sub: vec![0, i] }
    }

    /// A slot strictly after `s` (and any of its copies' neighbours), by `i`.
    pub fn after(s: &Site, i: u16) -> Self {
        Key { strand: s.strand, major: s.pos, sub: vec![1, u16::MAX, i] }
    }

    /// The `c`-th refinement of this key; children sort right after the
    /// parent and before any later key.
    pub fn child(&self, c: u16) -> Self {
        let mut sub = self.sub.clone();
        sub.push(c);
        Key { strand: self.strand, major: self.major, sub }
    }
}

pub(crate) fn keyed_trees(p: &Presentation) -> Vec<WTree<Key>> {
    p.trees.iter().map(|t| t.map_sites(Key::original)).collect()
}

/// Assigns dense positions in key order. Returns the presentation and the
/// position map.
pub(crate) fn densify(diagram: &StrandDiagram, trees: &[WTree<Key>]) -> (Presentation, BTreeMap<Key, Site>) {
    let mut keys: Vec<&Key> = trees.iter().flat_map(|t| t.endpoints()).collect();
    keys.sort();
    debug_assert!(keys.windows(2).all(|w| w[0] != w[1]), "duplicate endpoint key");
    let mut map = BTreeMap::new();
    let mut strand = usize::MAX;
    let mut pos = 0;
    for k in keys {
        if k.strand != strand {
            strand = k.strand;
            pos = 0;
        }
        map.insert(k.clone(), Site::new(strand, pos));
        pos += 1;
    }
    let trees = trees.iter().map(|t| t.map_sites(|k| map[k])).collect();
    (Presentation { diagram: diagram.clone(), trees }, map)
}

// JSON form.

fn ser_twist<S: Serializer>(t: &bool, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u8(u8::from(*t))
}

fn de_twist<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
    let v = u64::deserialize(d)?;
    match v {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(de::Error::custom(format!("twist must be 0 or 1, got {other}"))),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    leaf: Option<Site>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    vertex: Option<Box<(Node, Node)>>,
    #[serde(serialize_with = "ser_twist", deserialize_with = "de_twist", default)]
    twist: bool,
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Node::Leaf { site, twist } => NodeRepr { leaf: Some(*site), vertex: None, twist: *twist },
            Node::Vertex { first, second, twist } => NodeRepr {
                leaf: None,
                vertex: Some(Box::new(((**first).clone(), (**second).clone()))),
                twist: *twist,
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = NodeRepr::deserialize(d)?;
        match (repr.leaf, repr.vertex) {
            (Some(site), None) => Ok(Node::Leaf { site, twist: repr.twist }),
            (None, Some(children)) => {
                let (a, b) = *children;
                Ok(Node::Vertex { first: Box::new(a), second: Box::new(b), twist: repr.twist })
            }
            _ => Err(de::Error::custom("node needs exactly one of \"leaf\" or \"vertex\"")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WTreeRepr {
    head: Site,
    #[serde(default)]
    side: Side,
    root: Node,
}

impl Serialize for WTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WTreeRepr { head: self.head, side: self.side, root: self.root.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = WTreeRepr::deserialize(d)?;
        Ok(WTree { head: r.head, side: r.side, root: r.root })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationRepr {
    strands: StrandDiagram,
    #[serde(default)]
    trees: Vec<WTree>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationRepr { strands: self.diagram.clone(), trees: self.trees.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PresentationRepr::deserialize(d)?;
        Ok(Presentation { diagram: r.strands, trees: r.trees })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow(t: (usize, usize), h: (usize, usize), twist: bool) -> WTree {
        WTree::arrow(Site::new(t.0, t.1), Site::new(h.0, h.1), twist)
    }

    #[test]
    fn empty_long_knot_is_valid() {
        assert!(is_valid(&Presentation::empty(StrandDiagram::long_knot())));
    }

    #[test]
    fn collision_is_reported() {
        let p = Presentation::new(
            StrandDiagram::string_link(2),
            vec![arrow((0, 0), (1, 0), false), arrow((0, 0), (1, 1), false)],
        );
        let v = validate(&p);
        assert!(v.iter().any(|v| matches!(v, Violation::SiteCollision { .. })));
        assert!(v.iter().any(|v| v.to_string().contains("site collision")));
        // strand 0 has positions {0} but two endpoints recorded there
        assert!(!is_valid(&p));
    }

    #[test]
    fn gaps_and_missing_strands() {
        let p = Presentation::new(StrandDiagram::long_knot(), vec![arrow((0, 0), (0, 2), false)]);
        assert_eq!(validate(&p), vec![Violation::NonDense { strand: 0, missing: 1, count: 2 }]);
        let p = Presentation::new(StrandDiagram::long_knot(), vec![arrow((0, 0), (1, 0), false)]);
        assert!(matches!(validate(&p)[0], Violation::StrandOutOfRange { tree: 0, .. }));
    }

    #[test]
    fn sign_rule() {
        let mut t = arrow((0, 0), (1, 0), false);
        let p = |t: &WTree| Presentation::new(StrandDiagram::string_link(2), vec![t.clone()]);
        assert_eq!(to_signed_arrows(&p(&t)).unwrap()[0].sign, Sign::Plus);
        t.root.set_twist(true);
        assert_eq!(to_signed_arrows(&p(&t)).unwrap()[0].sign, Sign::Minus);
        t.side = Side::Left;
        assert_eq!(to_signed_arrows(&p(&t)).unwrap()[0].sign, Sign::Plus);
        t.root.set_twist(false);
        assert_eq!(to_signed_arrows(&p(&t)).unwrap()[0].sign, Sign::Minus);
    }

    #[test]
    fn signed_arrows_reject_trees() {
        let t = WTree::new(
            Site::new(0, 2),
            Node::vertex(Node::leaf(Site::new(0, 0)), Node::leaf(Site::new(0, 1))),
        );
        let p = Presentation::new(StrandDiagram::long_knot(), vec![t]);
        let err = to_signed_arrows(&p).unwrap_err();
        assert!(err.to_string().contains("expand first"));
    }

    #[test]
    fn normalize_sides_flips_twist() {
        let mut t = arrow((0, 0), (0, 1), false);
        t.side = Side::Left;
        let p = Presentation::new(StrandDiagram::long_knot(), vec![t]);
        let q = normalize_sides(&p);
        assert_eq!(q.trees[0].side, Side::Right);
        assert!(q.trees[0].root.twist());
        assert_eq!(normalize_sides(&q), q);
        assert_eq!(to_signed_arrows(&p).unwrap(), to_signed_arrows(&q).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let t = WTree {
            head: Site::new(0, 3),
            side: Side::Left,
            root: Node::Vertex {
                first: Box::new(Node::twisted_leaf(Site::new(0, 0))),
                second: Box::new(Node::leaf(Site::new(1, 0))),
                twist: true,
            },
        };
        let p = Presentation::new(
            StrandDiagram::new(vec![StrandKind::Open, StrandKind::Closed]),
            vec![t, arrow((0, 1), (0, 2), false)],
        );
        let text = p.to_json();
        assert!(text.starts_with(r#"{"strands":["open","closed"],"trees":[{"head":[0,3],"side":"left""#));
        let back: Presentation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn bad_twist_names_the_field() {
        let text = r#"{"strands":["open"],"trees":[{"head":[0,1],"root":{"leaf":[0,0],"twist":2}}]}"#;
        let err = Presentation::from_json(text).unwrap_err().to_string();
        assert!(err.contains("twist must be 0 or 1, got 2"), "{err}");
    }

    #[test]
    fn rotation_cycles() {
        let p = Presentation::new(
            StrandDiagram::knot(),
            vec![arrow((0, 0), (0, 2), false), arrow((0, 1), (0, 3), true)],
        );
        let q = rotate_basepoint(&p, 0, 1).unwrap();
        assert!(is_valid(&q));
        assert_eq!(q.trees[0].root.leaves()[0], &Site::new(0, 3));
        assert_eq!(rotate_basepoint(&q, 0, 3).unwrap(), p);
    }

    #[test]
    fn product_offsets_positions() {
        let a = Presentation::new(StrandDiagram::string_link(2), vec![arrow((0, 0), (1, 0), false)]);
        let ab = product(&a, &a).unwrap();
        assert!(is_valid(&ab));
        assert_eq!(ab.trees[1].head, Site::new(1, 1));
        assert_eq!(power(&a, 0).unwrap().trees.len(), 0);
        assert_eq!(power(&a, 3).unwrap().trees[2].root.leaves()[0], &Site::new(0, 2));
    }

    #[test]
    fn densify_orders_slots() {
        let s = Site::new(0, 1);
        let mut keys = vec![Key::after(&s, 0), Key::original(&s).child(1), Key::before(&s, 3), Key::original(&s)];
        keys.sort();
        assert_eq!(keys[0], Key::before(&s, 3));
        assert_eq!(keys[1], Key::original(&s));
        assert_eq!(keys[3], Key::after(&s, 0));
    }
}
