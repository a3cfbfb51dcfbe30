//! Linear combinations of canonical diagrams and the generating
//! annular operations.
//!
//! Each operation glues a fixed frame of arcs onto every diagram of an
//! element.  Combinatorially that means three things: chords chain into
//! new chords or close into loops, faces merge across the glued
//! channels, and each loop consumes the labels of the face it encloses
//! (factor `sqrt(n)` for an empty interior, `1/sqrt(n)` for a
//! consistently labelled one, zero on a label clash).  Faces interior
//! to a loop are exactly the merged face classes that no longer touch
//! the result boundary, so the factors can be read off the class
//! contents without tracking loop nesting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagram::faces::{face_partition, UnionFind};
use crate::diagram::{Colour, FlatDiagram, Label, Sign};
use crate::exactnum::Scalar;
use crate::{Error, Result};

/// A finite linear combination of canonical diagrams of one colour with
/// coefficients in Q(sqrt n).  No zero coefficients are stored; the
/// empty combination is the zero element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    colour: Colour,
    n: u32,
    terms: BTreeMap<FlatDiagram, Scalar>,
}

impl Element {
    pub fn zero(n: u32, colour: Colour) -> Element {
        Element { colour, n, terms: BTreeMap::new() }
    }

    /// The unit `1_(k,sign)`: the identity diagram with coefficient one.
    pub fn unit(n: u32, colour: Colour) -> Element {
        let mut e = Element::zero(n, colour);
        e.insert(FlatDiagram::identity(colour), Scalar::one(n));
        e
    }

    /// `S(i)`: the (0,-) diagram whose black face carries label `i`.
    pub fn spin(n: u32, i: Label) -> Result<Element> {
        if i == 0 || i > n {
            return Err(Error::Validation(format!("label {i} out of range 1..={n}")));
        }
        let d = FlatDiagram::new(
            Colour::minus(0),
            vec![],
            [(0u32, vec![i])].into_iter().collect(),
        )?;
        Element::canonicalize(d, Scalar::one(n))
    }

    /// Applies the multiplication relation to a (possibly multiset
    /// labelled) diagram: distinct labels in one face give zero, equal
    /// labels collapse to one.
    pub fn canonicalize(d: FlatDiagram, coeff: Scalar) -> Result<Element> {
        let n = coeff.n();
        if let Some(&l) = d.labels().values().flatten().find(|&&l| l > n) {
            return Err(Error::Validation(format!("label {l} out of range 1..={n}")));
        }
        let colour = d.colour();
        let mut e = Element::zero(n, colour);
        if let Some(c) = d.collapse_labels() {
            e.insert(c, coeff);
        }
        Ok(e)
    }

    pub fn colour(&self) -> Colour {
        self.colour
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FlatDiagram, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &FlatDiagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(|| Scalar::zero(self.n))
    }

    fn insert(&mut self, d: FlatDiagram, c: Scalar) {
        debug_assert!(d.is_canonical() || d.labels().is_empty());
        debug_assert_eq!(d.colour(), self.colour);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.colour != other.colour {
            return Err(Error::ColourMismatch(self.colour, other.colour));
        }
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.insert(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Scalar::one(self.n))
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        let mut out = Element::zero(self.n, self.colour);
        for (d, c) in &self.terms {
            out.insert(d.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Diagram multiplication: `self` drawn above `other`, bottom point
    /// `t` of `self` glued to top point `2k+1-t` of `other`, loops
    /// resolved.
    pub fn stack(&self, other: &Element) -> Result<Element> {
        if self.colour != other.colour {
            return Err(Error::ColourMismatch(self.colour, other.colour));
        }
        let mut out = Element::zero(self.n, self.colour);
        for (dx, cx) in &self.terms {
            for (dy, cy) in &other.terms {
                if let Some((d, f)) = stack_diagrams(dx, dy, self.n) {
                    out.insert(d, cx.clone() * cy.clone() * f);
                }
            }
        }
        Ok(out)
    }

    /// The involution: reflect top to bottom (`t -> 2k+1-t`), keep
    /// labels; coefficients are real so conjugation is the identity.
    pub fn involute(&self) -> Element {
        let mut out = Element::zero(self.n, self.colour);
        for (d, c) in &self.terms {
            out.insert(involute_diagram(d), c.clone());
        }
        out
    }

    /// Caps the rightmost strand: joins top point `k` to bottom point
    /// `k+1` around the right, lowering the colour to `(k-1, sign)`.
    /// No normalising scalar is applied.
    pub fn cap_right(&self) -> Result<Element> {
        if self.colour.k == 0 {
            return Err(Error::Arity("cap_right needs k >= 1".into()));
        }
        let colour = Colour::new(self.colour.k - 1, self.colour.sign);
        let mut out = Element::zero(self.n, colour);
        for (d, c) in &self.terms {
            if let Some((rd, f)) = cap_right_diagram(d, self.n) {
                out.insert(rd, c.clone() * f);
            }
        }
        Ok(out)
    }

    /// Caps around the left: joins top point 1 to bottom point `2k`
    /// through the marked interval.  The new marked interval is the old
    /// interval 1, so the sign flips: the result has colour
    /// `(k-1, -sign)`.
    pub fn cap_left(&self) -> Result<Element> {
        if self.colour.k == 0 {
            return Err(Error::Arity("cap_left needs k >= 1".into()));
        }
        let colour = Colour::new(self.colour.k - 1, self.colour.sign.flip());
        let mut out = Element::zero(self.n, colour);
        for (d, c) in &self.terms {
            if let Some((rd, f)) = cap_left_diagram(d, self.n) {
                out.insert(rd, c.clone() * f);
            }
        }
        Ok(out)
    }

    /// Inserts a through strand at the right: colour `(k+1, sign)`.
    pub fn add_string_right(&self) -> Element {
        let colour = Colour::new(self.colour.k + 1, self.colour.sign);
        let mut out = Element::zero(self.n, colour);
        for (d, c) in &self.terms {
            out.insert(add_string_diagram(d), c.clone());
        }
        out
    }

    /// One click of rotation: new point `j` is old point `j+1`, the
    /// marked interval moves clockwise past one point, the sign flips.
    pub fn rotate_one(&self) -> Result<Element> {
        if self.colour.k == 0 {
            return Err(Error::Arity("rotate_one needs k >= 1".into()));
        }
        let colour = Colour::new(self.colour.k, self.colour.sign.flip());
        let mut out = Element::zero(self.n, colour);
        for (d, c) in &self.terms {
            out.insert(rotate_diagram(d), c.clone());
        }
        Ok(out)
    }

    /// Replaces every unlabelled black face by the sum over all `n`
    /// labels; equal to the input in the quotient algebra.
    pub fn expand_units(&self) -> Element {
        let mut out = Element::zero(self.n, self.colour);
        for (d, c) in &self.terms {
            let partition = d.partition();
            let open: Vec<u32> = partition
                .faces
                .iter()
                .filter(|f| {
                    self.colour.sign.at_depth(f.depth) == Sign::Minus
                        && !d.labels().contains_key(&f.address())
                })
                .map(|f| f.address())
                .collect();
            let mut assignments: Vec<BTreeMap<u32, Vec<Label>>> = vec![d.labels().clone()];
            for &addr in &open {
                let mut next = Vec::with_capacity(assignments.len() * self.n as usize);
                for a in &assignments {
                    for l in 1..=self.n {
                        let mut b = a.clone();
                        b.insert(addr, vec![l]);
                        next.push(b);
                    }
                }
                assignments = next;
            }
            for labels in assignments {
                let nd = FlatDiagram::from_parts_unchecked(d.colour(), d.pairs().to_vec(), labels);
                out.insert(nd, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 : colour {} {}", self.colour.k, self.colour.sign);
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f, "+")?;
            }
            writeln!(f, "{c} *")?;
            write!(f, "{}", d.to_text())?;
        }
        Ok(())
    }
}

/// Gluing bookkeeping shared by the diagram-level operations: a
/// composite face class per original face, labels pooled per class,
/// then labels transported onto the faces of the result matching.
/// `interval_node` names, for every boundary interval of the result,
/// the original face lying there.
fn finish_glue(
    n: u32,
    colour: Colour,
    mut result_pairs: Vec<(u32, u32)>,
    interval_node: impl Fn(u32) -> usize,
    uf: &mut UnionFind,
    node_labels: &[Vec<Label>],
    loop_count: usize,
) -> Option<(FlatDiagram, Scalar)> {
    result_pairs.sort_unstable();
    let mut class_labels: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    for (node, labels) in node_labels.iter().enumerate() {
        class_labels.entry(uf.find(node)).or_default().extend(labels.iter().copied());
    }

    let partition = face_partition(colour.k, &result_pairs, false);
    let mut out_labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
    let mut boundary_roots: BTreeSet<usize> = BTreeSet::new();
    for face in &partition.faces {
        let mut root: Option<usize> = None;
        for &iv in &face.intervals {
            let r = uf.find(interval_node(iv));
            assert!(root.is_none() || root == Some(r), "result face split across classes");
            root = Some(r);
        }
        let r = root.expect("face with no interval");
        assert!(boundary_roots.insert(r), "two result faces share a class");
        let mut ls = class_labels.get(&r).cloned().unwrap_or_default();
        ls.sort_unstable();
        ls.dedup();
        if ls.len() > 1 {
            return None; // label clash on a surviving face
        }
        if ls.len() == 1 {
            out_labels.insert(face.address(), ls);
        }
    }

    // every class away from the boundary is the interior of one loop
    let mut exponent: i64 = 0;
    let mut interior = 0usize;
    for (root, labels) in &class_labels {
        if boundary_roots.contains(root) {
            continue;
        }
        interior += 1;
        let mut ls = labels.clone();
        ls.sort_unstable();
        ls.dedup();
        match ls.len() {
            0 => exponent += 1,
            1 => exponent -= 1,
            _ => return None,
        }
    }
    assert_eq!(interior, loop_count, "loops and interior face classes must match");

    let d = FlatDiagram::from_parts_unchecked(colour, result_pairs, out_labels);
    Some((d, Scalar::sqrtn_pow(n, exponent)))
}

fn partner_map(d: &FlatDiagram) -> Vec<u32> {
    let k = d.colour().k;
    let mut partner = vec![0u32; (2 * k + 1) as usize];
    for &(a, b) in d.pairs() {
        partner[a as usize] = b;
        partner[b as usize] = a;
    }
    partner
}

fn labels_by_face(d: &FlatDiagram) -> Vec<Vec<Label>> {
    let partition = d.partition();
    let mut out = vec![Vec::new(); partition.faces.len()];
    for (addr, ls) in d.labels() {
        let f = partition.face_with_address(*addr).expect("label on a known face");
        out[f].extend(ls.iter().copied());
    }
    out
}

/// Follows a strand of the stacked picture from a result boundary point
/// to the other end, marking everything seen.
fn chase(
    k: u32,
    partner_x: &[u32],
    partner_y: &[u32],
    visited_x: &mut [bool],
    visited_y: &mut [bool],
    start: u32,
    start_in_x: bool,
) -> u32 {
    let (mut p, mut in_x) = (start, start_in_x);
    loop {
        let q = if in_x {
            visited_x[p as usize] = true;
            let q = partner_x[p as usize];
            visited_x[q as usize] = true;
            q
        } else {
            visited_y[p as usize] = true;
            let q = partner_y[p as usize];
            visited_y[q as usize] = true;
            q
        };
        if in_x && q <= k {
            return q; // result top point
        }
        if !in_x && q > k {
            return q; // result bottom point
        }
        // cross the seam: x bottom b meets y top 2k+1-b
        p = 2 * k + 1 - q;
        in_x = !in_x;
    }
}

fn stack_diagrams(x: &FlatDiagram, y: &FlatDiagram, n: u32) -> Option<(FlatDiagram, Scalar)> {
    let colour = x.colour();
    let k = colour.k;
    let px = x.partition();
    let py = y.partition();
    let nx = px.faces.len();
    let mut uf = UnionFind::new(nx + py.faces.len());
    let mut node_labels = labels_by_face(x);
    node_labels.extend(labels_by_face(y));

    if k == 0 {
        uf.union(0, 1);
        return finish_glue(n, colour, vec![], |_| 0, &mut uf, &node_labels, 0);
    }

    // seam channels, left to right: the marked faces meet, then x's
    // bottom gaps meet y's top gaps, then the two right sides meet
    uf.union(px.face_of(2 * k), nx + py.face_of(2 * k));
    for t in 1..=k {
        uf.union(px.face_of(2 * k - t), nx + py.face_of(t));
    }

    let partner_x = partner_map(x);
    let partner_y = partner_map(y);
    let mut visited_x = vec![false; (2 * k + 1) as usize];
    let mut visited_y = vec![false; (2 * k + 1) as usize];
    let mut result_pairs: Vec<(u32, u32)> = Vec::with_capacity(k as usize);

    for j in 1..=k {
        if !visited_x[j as usize] {
            let end = chase(k, &partner_x, &partner_y, &mut visited_x, &mut visited_y, j, true);
            result_pairs.push((j.min(end), j.max(end)));
        }
    }
    for j in k + 1..=2 * k {
        if !visited_y[j as usize] {
            let end = chase(k, &partner_x, &partner_y, &mut visited_x, &mut visited_y, j, false);
            result_pairs.push((j.min(end), j.max(end)));
        }
    }

    // leftovers close into loops alternating x and y chords
    let mut loop_count = 0usize;
    for s in k + 1..=2 * k {
        if visited_x[s as usize] {
            continue;
        }
        loop_count += 1;
        let mut p = s;
        loop {
            visited_x[p as usize] = true;
            let q = partner_x[p as usize];
            visited_x[q as usize] = true;
            let yp = 2 * k + 1 - q;
            visited_y[yp as usize] = true;
            let yq = partner_y[yp as usize];
            visited_y[yq as usize] = true;
            p = 2 * k + 1 - yq;
            if p == s {
                break;
            }
        }
    }

    let interval_node = |iv: u32| -> usize {
        if iv == 2 * k {
            px.face_of(2 * k)
        } else if iv <= k {
            px.face_of(iv)
        } else {
            nx + py.face_of(iv)
        }
    };
    finish_glue(n, colour, result_pairs, interval_node, &mut uf, &node_labels, loop_count)
}

fn cap_right_diagram(x: &FlatDiagram, n: u32) -> Option<(FlatDiagram, Scalar)> {
    let k = x.colour().k;
    let colour = Colour::new(k - 1, x.colour().sign);
    let px = x.partition();
    let mut uf = UnionFind::new(px.faces.len());
    let node_labels = labels_by_face(x);
    if k >= 2 {
        // the new right side wraps around the cap
        uf.union(px.face_of(k - 1), px.face_of(k + 1));
    }

    let partner = partner_map(x);
    let renum = |p: u32| if p <= k - 1 { p } else { p - 2 };
    let closes_loop = partner[k as usize] == k + 1;
    let mut result_pairs: Vec<(u32, u32)> = Vec::new();
    for &(a, b) in x.pairs() {
        if a != k && a != k + 1 && b != k && b != k + 1 {
            result_pairs.push((renum(a), renum(b)));
        }
    }
    if !closes_loop {
        let (u, v) = (renum(partner[k as usize]), renum(partner[(k + 1) as usize]));
        result_pairs.push((u.min(v), u.max(v)));
    }

    let interval_node = |iv: u32| -> usize {
        if k == 1 {
            px.face_of(2)
        } else if iv == 2 * k - 2 {
            px.face_of(2 * k)
        } else if iv <= k - 1 {
            px.face_of(iv)
        } else {
            px.face_of(iv + 2)
        }
    };
    finish_glue(
        n,
        colour,
        result_pairs,
        interval_node,
        &mut uf,
        &node_labels,
        usize::from(closes_loop),
    )
}

fn cap_left_diagram(x: &FlatDiagram, n: u32) -> Option<(FlatDiagram, Scalar)> {
    let k = x.colour().k;
    let colour = Colour::new(k - 1, x.colour().sign.flip());
    let px = x.partition();
    let mut uf = UnionFind::new(px.faces.len());
    let node_labels = labels_by_face(x);
    if k >= 2 {
        // the new marked region wraps around the cap
        uf.union(px.face_of(1), px.face_of(2 * k - 1));
    }

    let partner = partner_map(x);
    let renum = |p: u32| p - 1;
    let closes_loop = partner[1] == 2 * k;
    let mut result_pairs: Vec<(u32, u32)> = Vec::new();
    for &(a, b) in x.pairs() {
        if a != 1 && b != 2 * k {
            result_pairs.push((renum(a), renum(b)));
        }
    }
    if !closes_loop {
        let (u, v) = (renum(partner[1]), renum(partner[(2 * k) as usize]));
        result_pairs.push((u.min(v), u.max(v)));
    }

    let interval_node = |iv: u32| -> usize {
        if k == 1 {
            px.face_of(1)
        } else if iv == 2 * k - 2 {
            px.face_of(1)
        } else {
            px.face_of(iv + 1)
        }
    };
    finish_glue(
        n,
        colour,
        result_pairs,
        interval_node,
        &mut uf,
        &node_labels,
        usize::from(closes_loop),
    )
}

fn involute_diagram(x: &FlatDiagram) -> FlatDiagram {
    let k = x.colour().k;
    if k == 0 {
        return x.clone();
    }
    let reflect = |p: u32| 2 * k + 1 - p;
    let mut pairs: Vec<(u32, u32)> = x
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let (u, v) = (reflect(a), reflect(b));
            (u.min(v), u.max(v))
        })
        .collect();
    pairs.sort_unstable();
    let px = x.partition();
    let partition = face_partition(k, &pairs, false);
    // new interval j sits where old interval 2k-j was (marked fixed)
    let old_interval = |j: u32| if j == 2 * k { 2 * k } else { 2 * k - j };
    let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
    for face in &partition.faces {
        let old_addr = px.address_of(old_interval(face.intervals[0]));
        if let Some(ls) = x.labels().get(&old_addr) {
            labels.insert(face.address(), ls.clone());
        }
    }
    FlatDiagram::from_parts_unchecked(x.colour(), pairs, labels)
}

fn rotate_diagram(x: &FlatDiagram) -> FlatDiagram {
    let k = x.colour().k;
    let colour = Colour::new(k, x.colour().sign.flip());
    let rename = |p: u32| if p == 1 { 2 * k } else { p - 1 };
    let mut pairs: Vec<(u32, u32)> = x
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let (u, v) = (rename(a), rename(b));
            (u.min(v), u.max(v))
        })
        .collect();
    pairs.sort_unstable();
    let px = x.partition();
    let partition = face_partition(k, &pairs, false);
    let old_interval = |j: u32| if j == 2 * k { 1 } else { j + 1 };
    let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
    for face in &partition.faces {
        let old_addr = px.address_of(old_interval(face.intervals[0]));
        if let Some(ls) = x.labels().get(&old_addr) {
            labels.insert(face.address(), ls.clone());
        }
    }
    FlatDiagram::from_parts_unchecked(colour, pairs, labels)
}

fn add_string_diagram(x: &FlatDiagram) -> FlatDiagram {
    let k = x.colour().k;
    let colour = Colour::new(k + 1, x.colour().sign);
    let rename = |p: u32| if p <= k { p } else { p + 2 };
    let mut pairs: Vec<(u32, u32)> = x
        .pairs()
        .iter()
        .map(|&(a, b)| (rename(a), rename(b)))
        .collect();
    pairs.push((k + 1, k + 2));
    pairs.sort_unstable();
    let px = x.partition();
    let partition = face_partition(k + 1, &pairs, false);
    // old face per new interval; the face right of the new strand is fresh
    let old_interval = |j: u32| -> Option<u32> {
        if k == 0 {
            return if j == 2 { Some(0) } else { None };
        }
        if j == 2 * k + 2 {
            Some(2 * k)
        } else if j <= k {
            Some(j)
        } else if j == k + 1 {
            None
        } else {
            Some(j - 2)
        }
    };
    let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
    for face in &partition.faces {
        for &iv in &face.intervals {
            if let Some(old_iv) = old_interval(iv) {
                let old_addr = px.address_of(old_iv);
                if let Some(ls) = x.labels().get(&old_addr) {
                    labels.insert(face.address(), ls.clone());
                }
                break;
            }
        }
    }
    FlatDiagram::from_parts_unchecked(colour, pairs, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cup_cap(n: u32, cap_label: Option<Label>, cup_label: Option<Label>) -> Element {
        let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
        if let Some(l) = cap_label {
            labels.insert(1, vec![l]);
        }
        if let Some(l) = cup_label {
            labels.insert(3, vec![l]);
        }
        let d = FlatDiagram::new(Colour::plus(2), vec![(1, 2), (3, 4)], labels).unwrap();
        Element::canonicalize(d, Scalar::one(n)).unwrap()
    }

    #[test]
    fn multiplication_relation_at_the_seam() {
        // S(i) S(j) = delta_ij S(i)
        let n = 3;
        let s1 = Element::spin(n, 1).unwrap();
        let s2 = Element::spin(n, 2).unwrap();
        assert_eq!(s1.stack(&s1).unwrap(), s1);
        assert!(s1.stack(&s2).unwrap().is_zero());
    }

    #[test]
    fn canonicalize_multiset() {
        let n = 2;
        let same = FlatDiagram::new(
            Colour::minus(0),
            vec![],
            [(0u32, vec![2, 2])].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(
            Element::canonicalize(same.clone(), Scalar::one(n)).unwrap(),
            Element::spin(n, 2).unwrap()
        );
        let clash = FlatDiagram::new(
            Colour::minus(0),
            vec![],
            [(0u32, vec![1, 2])].into_iter().collect(),
        )
        .unwrap();
        assert!(Element::canonicalize(clash, Scalar::one(n)).unwrap().is_zero());
        // idempotence on an already canonical diagram
        assert_eq!(
            Element::canonicalize(same.collapse_labels().unwrap(), Scalar::one(n)).unwrap(),
            Element::spin(n, 2).unwrap()
        );
    }

    #[test]
    fn tl_loop_has_modulus_sqrt_n() {
        // stacking the unlabelled cup-cap on itself closes one empty loop
        let n = 2;
        let c = cup_cap(n, None, None);
        assert_eq!(c.stack(&c).unwrap(), c.scale(&Scalar::sqrt_n(n)));
    }

    #[test]
    fn labelled_loop_gives_inverse_modulus() {
        let n = 3;
        let top = cup_cap(n, Some(1), Some(2));
        let bot = cup_cap(n, Some(2), Some(3));
        // the loop face carries {2,2}: collapses, factor 1/sqrt(n)
        let expect = cup_cap(n, Some(1), Some(3)).scale(&Scalar::sqrtn_pow(n, -1));
        assert_eq!(top.stack(&bot).unwrap(), expect);
        // mismatched interior labels kill the term
        let bot2 = cup_cap(n, Some(3), Some(3));
        assert!(top.stack(&bot2).unwrap().is_zero());
    }

    #[test]
    fn unit_is_neutral_for_stacking() {
        let n = 2;
        for colour in [Colour::plus(2), Colour::minus(2), Colour::plus(3)] {
            let one = Element::unit(n, colour);
            let x = if colour == Colour::plus(2) {
                cup_cap(n, Some(1), None)
            } else {
                one.clone()
            };
            if x.colour() == colour {
                assert_eq!(one.stack(&x).unwrap(), x);
                assert_eq!(x.stack(&one).unwrap(), x);
            }
        }
    }

    #[test]
    fn cap_right_on_identity_strand() {
        let n = 2;
        // unlabelled: the closed loop encloses the unlabelled black face
        let e = Element::unit(n, Colour::plus(1));
        assert_eq!(
            e.cap_right().unwrap(),
            Element::unit(n, Colour::plus(0)).scale(&Scalar::sqrt_n(n))
        );
        // labelled black face: factor 1/sqrt(n)
        let d = FlatDiagram::new(
            Colour::plus(1),
            vec![(1, 2)],
            [(1u32, vec![2])].into_iter().collect(),
        )
        .unwrap();
        let e = Element::canonicalize(d, Scalar::one(n)).unwrap();
        assert_eq!(
            e.cap_right().unwrap(),
            Element::unit(n, Colour::plus(0)).scale(&Scalar::sqrtn_pow(n, -1))
        );
    }

    #[test]
    fn cap_left_closes_the_marked_face() {
        let n = 2;
        // (1,+): the enclosed marked face is white, factor sqrt(n); the
        // black face survives as the external face of the (0,-) result
        let d = FlatDiagram::new(
            Colour::plus(1),
            vec![(1, 2)],
            [(1u32, vec![2])].into_iter().collect(),
        )
        .unwrap();
        let e = Element::canonicalize(d, Scalar::one(n)).unwrap();
        assert_eq!(
            e.cap_left().unwrap(),
            Element::spin(n, 2).unwrap().scale(&Scalar::sqrt_n(n))
        );
        // (1,-) with marked face labelled: the labelled face closes up
        let d = FlatDiagram::new(
            Colour::minus(1),
            vec![(1, 2)],
            [(2u32, vec![1])].into_iter().collect(),
        )
        .unwrap();
        let e = Element::canonicalize(d, Scalar::one(n)).unwrap();
        assert_eq!(
            e.cap_left().unwrap(),
            Element::unit(n, Colour::plus(0)).scale(&Scalar::sqrtn_pow(n, -1))
        );
    }

    #[test]
    fn caps_commute_on_two_strands() {
        let n = 3;
        for x in [
            Element::unit(n, Colour::plus(2)),
            cup_cap(n, Some(1), Some(2)),
            cup_cap(n, None, Some(3)),
        ] {
            let lr = x.cap_left().unwrap().cap_right().unwrap();
            let rl = x.cap_right().unwrap().cap_left().unwrap();
            assert_eq!(lr, rl);
        }
    }

    #[test]
    fn add_string_maps_unit_to_unit() {
        let n = 2;
        for colour in [Colour::plus(0), Colour::minus(0), Colour::plus(2), Colour::minus(3)] {
            let bigger = Colour::new(colour.k + 1, colour.sign);
            assert_eq!(
                Element::unit(n, colour).add_string_right(),
                Element::unit(n, bigger)
            );
        }
    }

    #[test]
    fn add_string_on_spin_gives_left_labelled_strand() {
        let n = 3;
        let e = Element::spin(n, 2).unwrap().add_string_right();
        let d = FlatDiagram::new(
            Colour::minus(1),
            vec![(1, 2)],
            [(2u32, vec![2])].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(e, Element::canonicalize(d, Scalar::one(n)).unwrap());
    }

    #[test]
    fn rotation_has_order_2k() {
        let n = 2;
        let x = cup_cap(n, Some(1), Some(2));
        let mut y = x.clone();
        for _ in 0..4 {
            y = y.rotate_one().unwrap();
        }
        assert_eq!(y, x);
    }

    #[test]
    fn involute_is_an_involution_and_reflects() {
        let n = 3;
        let x = cup_cap(n, Some(1), Some(2));
        let y = x.involute();
        assert_eq!(y.involute(), x);
        assert_eq!(y, cup_cap(n, Some(2), Some(1)));
        assert_eq!(Element::spin(n, 1).unwrap().involute(), Element::spin(n, 1).unwrap());
    }

    #[test]
    fn expand_units_examples() {
        let n = 3;
        // 1_(0,-) expands to the sum of all S(i)
        let mut sum = Element::zero(n, Colour::minus(0));
        for i in 1..=n {
            sum = sum.add(&Element::spin(n, i).unwrap()).unwrap();
        }
        assert_eq!(Element::unit(n, Colour::minus(0)).expand_units(), sum);
        // no unlabelled black face: unchanged
        let s = Element::spin(n, 2).unwrap();
        assert_eq!(s.expand_units(), s);
        // 1_(2,+) has one black face (the middle channel)
        let expanded = Element::unit(n, Colour::plus(2)).expand_units();
        assert_eq!(expanded.num_terms(), n as usize);
    }
}
