//! Loop-free labelled flat tangles.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::faces::{face_partition, FacePartition};
use crate::diagram::{Colour, Label, Sign};
use crate::{Error, Result};

/// A loop-free labelled flat tangle of one colour: a non-crossing
/// perfect matching on `2k` boundary points together with spin labels
/// attached to black faces.  Faces are addressed by the smallest
/// boundary interval they touch (address 0 for the single face when
/// `k = 0`).
///
/// Label entries are multisets; a diagram is canonical when every
/// multiset is a singleton.  [`Element`](crate::diagram::Element) keys
/// are always canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FlatDiagram {
    colour: Colour,
    pairs: Vec<(u32, u32)>,
    labels: BTreeMap<u32, Vec<Label>>,
}

/// One face of a flat diagram, as reported by [`FlatDiagram::faces`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Face {
    pub address: u32,
    pub colour: Sign,
    pub intervals: Vec<u32>,
}

impl FlatDiagram {
    /// Validates the matching (perfect, non-crossing) and the label
    /// placement (black faces only, labels >= 1).
    pub fn new(
        colour: Colour,
        pairs: Vec<(u32, u32)>,
        labels: BTreeMap<u32, Vec<Label>>,
    ) -> Result<FlatDiagram> {
        let k = colour.k;
        let mut pairs: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort();
        if pairs.len() as u32 != k {
            return Err(Error::Validation(format!(
                "expected {} chords for colour {}, got {}",
                k,
                colour,
                pairs.len()
            )));
        }
        let mut seen = vec![false; (2 * k + 1) as usize];
        for &(a, b) in &pairs {
            if a == b || a == 0 || b > 2 * k {
                return Err(Error::Validation(format!("chord ({a},{b}) out of range")));
            }
            for p in [a, b] {
                if seen[p as usize] {
                    return Err(Error::Validation(format!("point {p} matched twice")));
                }
                seen[p as usize] = true;
            }
        }
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                if a < c && c < b && b < d {
                    return Err(Error::Validation(format!(
                        "chords ({a},{b}) and ({c},{d}) cross"
                    )));
                }
            }
        }
        let mut labels: BTreeMap<u32, Vec<Label>> = labels
            .into_iter()
            .filter(|(_, ls)| !ls.is_empty())
            .collect();
        for ls in labels.values_mut() {
            ls.sort_unstable();
            if ls.iter().any(|&l| l == 0) {
                return Err(Error::Validation("labels start at 1".into()));
            }
        }
        let partition = face_partition(k, &pairs, false);
        for &addr in labels.keys() {
            match partition.face_with_address(addr) {
                None => {
                    return Err(Error::Validation(format!(
                        "no face with address {addr} in colour {colour}"
                    )))
                }
                Some(f) => {
                    let shade = colour.sign.at_depth(partition.faces[f].depth);
                    if shade.is_white() {
                        return Err(Error::Validation(format!(
                            "label on white face {addr}"
                        )));
                    }
                }
            }
        }
        Ok(FlatDiagram { colour, pairs, labels })
    }

    /// The identity diagram: `k` through strands `(t, 2k+1-t)`.
    pub fn identity(colour: Colour) -> FlatDiagram {
        let k = colour.k;
        let pairs = (1..=k).map(|t| (t, 2 * k + 1 - t)).collect();
        FlatDiagram { colour, pairs, labels: BTreeMap::new() }
    }

    pub fn colour(&self) -> Colour {
        self.colour
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn labels(&self) -> &BTreeMap<u32, Vec<Label>> {
        &self.labels
    }

    pub(crate) fn partition(&self) -> FacePartition {
        face_partition(self.colour.k, &self.pairs, false)
    }

    /// The `k+1` faces with their shading; colours flip across chords
    /// and the marked face matches the colour sign.
    pub fn faces(&self) -> Vec<Face> {
        let partition = self.partition();
        partition
            .faces
            .iter()
            .map(|f| Face {
                address: f.address(),
                colour: self.colour.sign.at_depth(f.depth),
                intervals: f.intervals.clone(),
            })
            .collect()
    }

    /// True when every label multiset is a singleton.
    pub fn is_canonical(&self) -> bool {
        self.labels.values().all(|ls| ls.len() == 1)
    }

    /// Collapses each multiset by the multiplication relation: equal
    /// labels merge, distinct labels in one face return `None` (the
    /// Kronecker-delta zero).
    pub(crate) fn collapse_labels(mut self) -> Option<FlatDiagram> {
        for ls in self.labels.values_mut() {
            ls.dedup();
            if ls.len() > 1 {
                return None;
            }
        }
        Some(self)
    }

    /// Builds a diagram without re-validating; callers guarantee the
    /// matching is a sorted non-crossing perfect matching and labels sit
    /// on black faces.
    pub(crate) fn from_parts_unchecked(
        colour: Colour,
        pairs: Vec<(u32, u32)>,
        labels: BTreeMap<u32, Vec<Label>>,
    ) -> FlatDiagram {
        debug_assert!(
            FlatDiagram::new(colour, pairs.clone(), labels.clone()).is_ok(),
            "internal diagram failed validation"
        );
        FlatDiagram { colour, pairs, labels }
    }

    /// Canonical text form, also the file format.  Bit-exact round trip
    /// with [`FlatDiagram::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("colour {} {}\n", self.colour.k, self.colour.sign);
        out.push_str("match:");
        for &(a, b) in &self.pairs {
            out.push_str(&format!(" ({a},{b})"));
        }
        out.push('\n');
        out.push_str("labels:");
        for (addr, ls) in &self.labels {
            for l in ls {
                out.push_str(&format!(" {addr}={l}"));
            }
        }
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<FlatDiagram> {
        let bad = |msg: &str| Error::Validation(format!("diagram text: {msg}"));
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| bad("missing colour line"))?;
        let mut it = head.split_whitespace();
        if it.next() != Some("colour") {
            return Err(bad("first line must start with 'colour'"));
        }
        let k: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad k"))?;
        let sign = match it.next() {
            Some("+") => Sign::Plus,
            Some("-") => Sign::Minus,
            _ => return Err(bad("bad sign")),
        };
        let match_line = lines.next().ok_or_else(|| bad("missing match line"))?;
        let rest = match_line
            .strip_prefix("match:")
            .ok_or_else(|| bad("second line must start with 'match:'"))?;
        let mut pairs = Vec::new();
        for tok in rest.split_whitespace() {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad("chord must look like (a,b)"))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| bad("chord must look like (a,b)"))?;
            pairs.push((
                a.parse().map_err(|_| bad("bad chord endpoint"))?,
                b.parse().map_err(|_| bad("bad chord endpoint"))?,
            ));
        }
        let label_line = lines.next().ok_or_else(|| bad("missing labels line"))?;
        let rest = label_line
            .strip_prefix("labels:")
            .ok_or_else(|| bad("third line must start with 'labels:'"))?;
        let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
        for tok in rest.split_whitespace() {
            let (addr, l) = tok.split_once('=').ok_or_else(|| bad("label must look like face=label"))?;
            labels
                .entry(addr.parse().map_err(|_| bad("bad face address"))?)
                .or_default()
                .push(l.parse().map_err(|_| bad("bad label"))?);
        }
        FlatDiagram::new(Colour::new(k, sign), pairs, labels)
    }
}

impl fmt::Display for FlatDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(entries: &[(u32, &[Label])]) -> BTreeMap<u32, Vec<Label>> {
        entries.iter().map(|&(a, ls)| (a, ls.to_vec())).collect()
    }

    #[test]
    fn identity_one_strand_faces() {
        // one chord, colour flip: marked face white, right of strand black
        let d = FlatDiagram::identity(Colour::plus(1));
        let fs = d.faces();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs.iter().find(|f| f.address == 2).unwrap().colour, Sign::Plus);
        assert_eq!(fs.iter().find(|f| f.address == 1).unwrap().colour, Sign::Minus);
    }

    #[test]
    fn zero_minus_single_black_face() {
        let d = FlatDiagram::identity(Colour::minus(0));
        let fs = d.faces();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].address, 0);
        assert_eq!(fs[0].colour, Sign::Minus);
    }

    #[test]
    fn cup_cap_three_faces() {
        // marked white outer face, black cap face, black cup face
        let d = FlatDiagram::new(Colour::plus(2), vec![(1, 2), (3, 4)], BTreeMap::new()).unwrap();
        let fs = d.faces();
        assert_eq!(fs.len(), 3);
        let by_addr = |a: u32| fs.iter().find(|f| f.address == a).unwrap();
        assert_eq!(by_addr(2).colour, Sign::Plus);
        assert_eq!(by_addr(2).intervals, vec![2, 4]);
        assert_eq!(by_addr(1).colour, Sign::Minus);
        assert_eq!(by_addr(3).colour, Sign::Minus);
    }

    #[test]
    fn crossing_matching_rejected() {
        let err = FlatDiagram::new(Colour::plus(2), vec![(1, 3), (2, 4)], BTreeMap::new());
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn label_on_white_face_rejected() {
        let err = FlatDiagram::new(
            Colour::plus(1),
            vec![(1, 2)],
            labels(&[(2, &[1])]),
        );
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let d = FlatDiagram::new(
            Colour::minus(3),
            vec![(1, 6), (2, 3), (4, 5)],
            labels(&[(6, &[2]), (2, &[1]), (4, &[3])]),
        )
        .unwrap();
        let text = d.to_text();
        let back = FlatDiagram::from_text(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_text(), text);
        assert_eq!(text, "colour 3 -\nmatch: (1,6) (2,3) (4,5)\nlabels: 2=1 4=3 6=2\n");
    }

    #[test]
    fn empty_diagram_text() {
        let d = FlatDiagram::identity(Colour::plus(0));
        assert_eq!(d.to_text(), "colour 0 +\nmatch:\nlabels:\n");
        assert_eq!(FlatDiagram::from_text(&d.to_text()).unwrap(), d);
    }
}
