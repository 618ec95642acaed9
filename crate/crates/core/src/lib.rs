//! Arrow calculus for welded knotted objects: w-tree presentations,
//! expansion and surgery, the move calculus, and the invariants that
//! classify welded long knots and string links.

pub mod classify;
pub mod error;
pub mod expand;
pub mod ftcheck;
pub mod gauss;
pub mod group;
pub mod milnor;
pub mod model;
pub mod moves;
pub mod random;

pub use error::{Error, Result};
pub use gauss::{canonical_arrow_presentation, GaussCode, GaussStrand, Passage, Role};
pub use model::{
    normalize_sides, to_signed_arrows, validate, Node, Presentation, Side, Sign, SignedArrow, Site,
    StrandDiagram, StrandKind, Violation, WTree,
};
