//! The labelled flat tangle core.
//!
//! Diagrams are non-crossing perfect matchings on `2k` boundary points
//! placed clockwise: points `1..=k` along the top (left to right),
//! `k+1..=2k` along the bottom (right to left), with the marked interval
//! between point `2k` and point `1`.  Regions are checkerboard shaded,
//! the marked region being white iff the colour sign is `+`, and spin
//! labels sit in black regions.  Every operation resolves closed loops
//! on the fly: an unlabelled loop interior contributes `sqrt(n)`, a
//! consistently labelled one contributes `1/sqrt(n)` and consumes its
//! label, and a label clash kills the term.

mod closed;
mod element;
mod faces;
mod flat;

pub use closed::{frame_faces, ClosedDiagram, FaceRef, LoopNode};
pub use element::Element;
pub use flat::{Face, FlatDiagram};

use std::fmt;

/// A spin label, ranging over `1..=n`.
pub type Label = u32;

/// Shading sign: `+` is white, `-` is black.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Shading after crossing `depth` strands starting from this sign.
    pub fn at_depth(self, depth: u32) -> Sign {
        if depth % 2 == 0 {
            self
        } else {
            self.flip()
        }
    }

    pub fn is_white(self) -> bool {
        self == Sign::Plus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// The colour `(k, sign)` of a box: `2k` boundary points plus the
/// shading of the marked region.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Colour {
    pub k: u32,
    pub sign: Sign,
}

impl Colour {
    pub fn new(k: u32, sign: Sign) -> Colour {
        Colour { k, sign }
    }

    pub fn plus(k: u32) -> Colour {
        Colour::new(k, Sign::Plus)
    }

    pub fn minus(k: u32) -> Colour {
        Colour::new(k, Sign::Minus)
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.sign)
    }
}
