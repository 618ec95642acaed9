//! Signed Gauss codes of welded diagrams (virtual crossings are not
//! recorded).
//!
//! Text form: one strand per `|`-separated segment, each an optional
//! `open:`/`closed:` prefix followed by passages such as `O1+ U2-`.
//! Segments without a prefix are closed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Presentation, Sign, Site, StrandDiagram, StrandKind, WTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: u32,
    pub role: Role,
    pub sign: Sign,
}

impl Passage {
    pub fn over(crossing: u32, sign: Sign) -> Self {
        Self { crossing, role: Role::Over, sign }
    }

    pub fn under(crossing: u32, sign: Sign) -> Self {
        Self { crossing, role: Role::Under, sign }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.role {
            Role::Over => 'O',
            Role::Under => 'U',
        };
        write!(f, "{r}{}{}", self.crossing, self.sign.as_char())
    }
}

impl FromStr for Passage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut toks = tokenize(s)?;
        match (toks.pop(), toks.is_empty()) {
            (Some(p), true) => Ok(p),
            _ => Err(Error::Gauss(format!("expected a single passage, got {s:?}"))),
        }
    }
}

impl Serialize for Passage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Passage {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussStrand {
    pub kind: StrandKind,
    #[serde(default)]
    pub passages: Vec<Passage>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussCode {
    pub strands: Vec<GaussStrand>,
}

fn tokenize(s: &str) -> Result<Vec<Passage>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() || c == ',' {
            chars.next();
            continue;
        }
        let role = match c {
            'O' | 'o' => Role::Over,
            'U' | 'u' => Role::Under,
            other => return Err(Error::Gauss(format!("unexpected character {other:?} in {s:?}"))),
        };
        chars.next();
        let mut digits = String::new();
        while let Some(&d) = chars.peek() {
            if d.is_ascii_digit() {
                digits.push(d);
                chars.next();
            } else {
                break;
            }
        }
        let crossing: u32 = digits
            .parse()
            .map_err(|_| Error::Gauss(format!("missing crossing number after {c:?} in {s:?}")))?;
        let sign = match chars.next() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(Error::Gauss(format!("crossing {crossing} is missing its sign in {s:?}"))),
        };
        out.push(Passage { crossing, role, sign });
    }
    Ok(out)
}

impl GaussCode {
    pub fn new(strands: Vec<GaussStrand>) -> Self {
        Self { strands }
    }

    /// Crossingless code on the given strands.
    pub fn trivial(diagram: &StrandDiagram) -> Self {
        Self::new(diagram.strands.iter().map(|&kind| GaussStrand { kind, passages: Vec::new() }).collect())
    }

    pub fn diagram(&self) -> StrandDiagram {
        StrandDiagram::new(self.strands.iter().map(|s| s.kind).collect())
    }

    pub fn crossings(&self) -> BTreeSet<u32> {
        self.strands.iter().flat_map(|s| s.passages.iter().map(|p| p.crossing)).collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings().len()
    }

    /// Every crossing must appear exactly once over and once under, with
    /// matching signs.
    pub fn check(&self) -> Result<()> {
        let mut seen: BTreeMap<u32, (Option<Sign>, Option<Sign>)> = BTreeMap::new();
        for p in self.strands.iter().flat_map(|s| &s.passages) {
            let e = seen.entry(p.crossing).or_default();
            let slot = match p.role {
                Role::Over => &mut e.0,
                Role::Under => &mut e.1,
            };
            if slot.is_some() {
                return Err(Error::Gauss(format!("crossing {} has two {:?} passages", p.crossing, p.role)));
            }
            *slot = Some(p.sign);
        }
        for (c, (o, u)) in seen {
            match (o, u) {
                (Some(a), Some(b)) if a == b => {}
                (Some(_), Some(_)) => return Err(Error::Gauss(format!("crossing {c} has mismatched signs"))),
                _ => return Err(Error::Gauss(format!("crossing {c} is unpaired"))),
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut strands = Vec::new();
        for seg in text.trim().split('|') {
            let seg = seg.trim();
            let (kind, body) = if let Some(rest) = seg.strip_prefix("open:") {
                (StrandKind::Open, rest)
            } else if let Some(rest) = seg.strip_prefix("closed:") {
                (StrandKind::Closed, rest)
            } else {
                (StrandKind::Closed, seg)
            };
            strands.push(GaussStrand { kind, passages: tokenize(body)? });
        }
        let g = GaussCode { strands };
        g.check()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("gauss code serializes")
    }

    /// Sign of each crossing.
    pub fn signs(&self) -> BTreeMap<u32, Sign> {
        self.strands
            .iter()
            .flat_map(|s| &s.passages)
            .map(|p| (p.crossing, p.sign))
            .collect()
    }

    /// Renames crossings to 1..N in order of first appearance.
    pub fn relabeled(&self) -> GaussCode {
        let mut names = BTreeMap::new();
        for p in self.strands.iter().flat_map(|s| &s.passages) {
            let next = names.len() as u32 + 1;
            names.entry(p.crossing).or_insert(next);
        }
        GaussCode {
            strands: self
                .strands
                .iter()
                .map(|s| GaussStrand {
                    kind: s.kind,
                    passages: s.passages.iter().map(|p| Passage { crossing: names[&p.crossing], ..*p }).collect(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.strands.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            f.write_str(match s.kind {
                StrandKind::Open => "open:",
                StrandKind::Closed => "closed:",
            })?;
            for p in &s.passages {
                write!(f, " {p}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GaussCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GaussCode::parse(s)
    }
}

/// One w-arrow per crossing, from the over passage to the under passage,
/// in crossing-id order.
pub fn canonical_arrow_presentation(g: &GaussCode) -> Result<Presentation> {
    g.check()?;
    let mut ends: BTreeMap<u32, (Option<Site>, Option<Site>, Sign)> = BTreeMap::new();
    for (s, strand) in g.strands.iter().enumerate() {
        for (i, p) in strand.passages.iter().enumerate() {
            let e = ends.entry(p.crossing).or_insert((None, None, p.sign));
            match p.role {
                Role::Over => e.0 = Some(Site::new(s, i)),
                Role::Under => e.1 = Some(Site::new(s, i)),
            }
        }
    }
    let trees = ends
        .into_values()
        .map(|(o, u, sign)| {
            WTree::arrow(o.expect("checked"), u.expect("checked"), sign.is_negative())
        })
        .collect();
    Ok(Presentation::new(g.diagram(), trees))
}
