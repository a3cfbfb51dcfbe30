//! Closed diagrams: nesting forests of loops with labelled faces.
//!
//! A closed diagram of colour `(0, sign)` is a collection of disjoint
//! nested loops.  Each loop owns the face just inside it (outside its
//! children); together with the external face that accounts for every
//! region.  Shading alternates with nesting depth and labels sit only
//! on black faces.  Loops are kept unresolved so that the counting
//! functionals and the procedural loop resolution stay two independent
//! routes to the same scalar.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::diagram::faces::{face_partition, UnionFind};
use crate::diagram::{Colour, Element, FlatDiagram, Label, Sign};
use crate::exactnum::Scalar;
use crate::{Error, Result};

/// One loop and the face it encloses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LoopNode {
    labels: Vec<Label>,
    children: Vec<LoopNode>,
}

impl LoopNode {
    pub fn new(labels: Vec<Label>, children: Vec<LoopNode>) -> LoopNode {
        let mut node = LoopNode { labels, children };
        node.normalize();
        node
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn children(&self) -> &[LoopNode] {
        &self.children
    }

    fn normalize(&mut self) {
        self.labels.sort_unstable();
        for c in &mut self.children {
            c.normalize();
        }
        self.children.sort();
    }

    fn check_shading(&self, shade: Sign) -> Result<()> {
        if shade.is_white() && !self.labels.is_empty() {
            return Err(Error::Validation("label on a white loop face".into()));
        }
        for c in &self.children {
            c.check_shading(shade.flip())?;
        }
        Ok(())
    }
}

/// A reference to one face of a closed diagram: the path of child
/// indices from the top; the empty path is the external face.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceRef(pub Vec<usize>);

/// A labelled `(0, sign)` tangle: nested loops plus the external face.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ClosedDiagram {
    sign: Sign,
    external: Vec<Label>,
    roots: Vec<LoopNode>,
}

impl ClosedDiagram {
    pub fn new(sign: Sign, external: Vec<Label>, roots: Vec<LoopNode>) -> Result<ClosedDiagram> {
        if sign.is_white() && !external.is_empty() {
            return Err(Error::Validation("label on a white external face".into()));
        }
        for r in &roots {
            r.check_shading(sign.flip())?;
        }
        let mut d = ClosedDiagram { sign, external, roots };
        d.external.sort_unstable();
        for r in &mut d.roots {
            r.normalize();
        }
        d.roots.sort();
        Ok(d)
    }

    pub fn empty(sign: Sign) -> ClosedDiagram {
        ClosedDiagram { sign, external: vec![], roots: vec![] }
    }

    /// The closed diagram of `S(i)`: no loops, external label `i`.
    pub fn spin(i: Label) -> ClosedDiagram {
        ClosedDiagram { sign: Sign::Minus, external: vec![i], roots: vec![] }
    }

    /// One loop whose interior face carries `labels`.
    pub fn single_loop(sign: Sign, labels: Vec<Label>) -> Result<ClosedDiagram> {
        ClosedDiagram::new(sign, vec![], vec![LoopNode::new(labels, vec![])])
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn colour(&self) -> Colour {
        Colour::new(0, self.sign)
    }

    pub fn external_labels(&self) -> &[Label] {
        &self.external
    }

    pub fn roots(&self) -> &[LoopNode] {
        &self.roots
    }

    pub fn loop_count(&self) -> usize {
        fn count(node: &LoopNode) -> usize {
            1 + node.children.iter().map(count).sum::<usize>()
        }
        self.roots.iter().map(count).sum()
    }

    /// Every face with its shading, external first, in DFS order.
    pub fn faces(&self) -> Vec<(FaceRef, Sign, &[Label])> {
        fn walk<'a>(
            node: &'a LoopNode,
            path: &mut Vec<usize>,
            shade: Sign,
            out: &mut Vec<(FaceRef, Sign, &'a [Label])>,
        ) {
            out.push((FaceRef(path.clone()), shade, &node.labels));
            for (i, c) in node.children.iter().enumerate() {
                path.push(i);
                walk(c, path, shade.flip(), out);
                path.pop();
            }
        }
        let mut out = vec![(FaceRef(vec![]), self.sign, self.external.as_slice())];
        let mut path = Vec::new();
        for (i, r) in self.roots.iter().enumerate() {
            path.push(i);
            walk(r, &mut path, self.sign.flip(), &mut out);
            path.pop();
        }
        out
    }

    fn face_mut(&mut self, face: &FaceRef) -> std::result::Result<(&mut Vec<Label>, &mut Vec<LoopNode>, Sign), Error> {
        if face.0.is_empty() {
            let sign = self.sign;
            return Ok((&mut self.external, &mut self.roots, sign));
        }
        let mut sign = self.sign.flip();
        let mut node = self
            .roots
            .get_mut(face.0[0])
            .ok_or_else(|| Error::Validation("bad face path".into()))?;
        for &i in &face.0[1..] {
            sign = sign.flip();
            node = node
                .children
                .get_mut(i)
                .ok_or_else(|| Error::Validation("bad face path".into()))?;
        }
        Ok((&mut node.labels, &mut node.children, sign))
    }

    /// Plugs the closed diagram `inner` into the given face: the face is
    /// the hole of an annular tangle.  The face shading must match the
    /// external shading of `inner`; face labels pool together.
    pub fn insert_at(&self, face: &FaceRef, inner: &ClosedDiagram) -> Result<ClosedDiagram> {
        let mut out = self.clone();
        let (labels, children, shade) = out.face_mut(face)?;
        if shade != inner.sign {
            return Err(Error::Arity(format!(
                "hole shading {} does not match diagram shading {}",
                shade, inner.sign
            )));
        }
        labels.extend(inner.external.iter().copied());
        children.extend(inner.roots.iter().cloned());
        ClosedDiagram::new(out.sign, out.external, out.roots)
    }

    /// Wraps the whole diagram in one new loop whose face picks up
    /// `extra` on top of the old external labels.  This is the generic
    /// single-ring annular tangle; with `extra = [k]` on a `(0,-)`
    /// diagram it is the tangle computing `lambda_{-,k}` inside
    /// `lambda_+`.
    pub fn wrap(&self, extra: Vec<Label>) -> Result<ClosedDiagram> {
        let mut labels = self.external.clone();
        labels.extend(extra);
        ClosedDiagram::new(
            self.sign.flip(),
            vec![],
            vec![LoopNode::new(labels, self.roots.clone())],
        )
    }

    /// Resolves all loops, innermost first, choosing among the currently
    /// innermost loops with `pick`.  Returns the scalar multiple of the
    /// canonical `(0, sign)` element left behind.
    pub fn resolve_with<F>(&self, n: u32, mut pick: F) -> Element
    where
        F: FnMut(usize) -> usize,
    {
        // arena of unresolved loops: (labels, parent index or usize::MAX)
        let mut labels: Vec<Vec<Label>> = Vec::new();
        let mut parent: Vec<usize> = Vec::new();
        let mut child_count: Vec<usize> = Vec::new();
        fn load(
            node: &LoopNode,
            par: usize,
            labels: &mut Vec<Vec<Label>>,
            parent: &mut Vec<usize>,
            child_count: &mut Vec<usize>,
        ) {
            let idx = labels.len();
            labels.push(node.labels.clone());
            parent.push(par);
            child_count.push(node.children.len());
            for c in &node.children {
                load(c, idx, labels, parent, child_count);
            }
        }
        for r in &self.roots {
            load(r, usize::MAX, &mut labels, &mut parent, &mut child_count);
        }

        let mut alive: Vec<bool> = vec![true; labels.len()];
        let mut remaining = labels.len();
        let mut exponent: i64 = 0;
        while remaining > 0 {
            let leaves: Vec<usize> = (0..labels.len())
                .filter(|&i| alive[i] && child_count[i] == 0)
                .collect();
            let chosen = leaves[pick(leaves.len())];
            let mut ls = labels[chosen].clone();
            ls.dedup(); // already sorted
            match ls.len() {
                0 => exponent += 1,
                1 => exponent -= 1,
                _ => return Element::zero(n, self.colour()),
            }
            alive[chosen] = false;
            if parent[chosen] != usize::MAX {
                child_count[parent[chosen]] -= 1;
            }
            remaining -= 1;
        }

        let factor = Scalar::sqrtn_pow(n, exponent);
        let mut ext = self.external.clone();
        ext.dedup();
        match (self.sign, ext.len()) {
            (_, 0) => Element::unit(n, self.colour()).scale(&factor),
            (Sign::Minus, 1) => Element::spin(n, ext[0])
                .expect("external label in range")
                .scale(&factor),
            _ => Element::zero(n, self.colour()),
        }
    }

    /// Deterministic resolution (always takes the first innermost loop).
    pub fn resolve(&self, n: u32) -> Element {
        self.resolve_with(n, |_| 0)
    }

    /// Resolution order randomised among admissible (innermost) loops.
    pub fn resolve_shuffled<R: Rng>(&self, n: u32, rng: &mut R) -> Element {
        self.resolve_with(n, |len| rng.gen_range(0..len))
    }
}

impl fmt::Display for ClosedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn labels(ls: &[Label]) -> String {
            ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
        }
        fn node(n: &LoopNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "loop{{{}}}(", labels(&n.labels))?;
            for (i, c) in n.children.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                node(c, f)?;
            }
            write!(f, ")")
        }
        write!(f, "closed {} ext{{{}}}", self.sign, labels(&self.external))?;
        for r in &self.roots {
            write!(f, " ")?;
            node(r, f)?;
        }
        Ok(())
    }
}

impl Element {
    /// Trace closure: joins top point `j` to bottom point `2k+1-j` by
    /// nested arcs around the right.  One unresolved closed diagram per
    /// term, coefficients untouched (no normalisation here).
    pub fn trace_close(&self) -> Vec<(ClosedDiagram, Scalar)> {
        let k = self.colour().k;
        let rainbow: Vec<(u32, u32)> = (1..=k).map(|t| (t, 2 * k + 1 - t)).collect();
        let ext = if k == 0 { 0 } else { 2 * k };
        self.close_with(&rainbow, ext, &BTreeMap::new())
            .expect("rainbow closure is always valid")
    }

    /// Closes every term with an arbitrary annular frame: `outer` is a
    /// matching of the boundary points drawn outside the disk,
    /// `ext_interval` names the outer face holding the ambient boundary,
    /// and `outer_labels` decorates outer faces (keyed by the smallest
    /// interval they touch).  Returns unresolved closed diagrams.
    pub fn close_with(
        &self,
        outer: &[(u32, u32)],
        ext_interval: u32,
        outer_labels: &BTreeMap<u32, Vec<Label>>,
    ) -> Result<Vec<(ClosedDiagram, Scalar)>> {
        let mut acc: BTreeMap<ClosedDiagram, Scalar> = BTreeMap::new();
        for (d, c) in self.terms() {
            let closed = close_diagram(d, outer, ext_interval, outer_labels)?;
            match acc.entry(closed) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().clone() + c.clone();
                    if sum.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = sum;
                    }
                }
            }
        }
        Ok(acc.into_iter().collect())
    }
}

/// The faces of a closure frame: `outer` drawn outside a `(k, sign)`
/// box.  Returns address, shading and touched intervals per face; the
/// shading at boundary interval `i` is the box sign flipped `i` times.
/// Used to decorate frames with labels before closing.
pub fn frame_faces(colour: Colour, outer: &[(u32, u32)]) -> Result<Vec<crate::diagram::Face>> {
    let k = colour.k;
    let mut outer: Vec<(u32, u32)> = outer
        .iter()
        .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect();
    outer.sort_unstable();
    let _ = FlatDiagram::new(Colour::new(k, colour.sign), outer.clone(), BTreeMap::new())?;
    if k == 0 {
        return Ok(vec![crate::diagram::Face {
            address: 0,
            colour: colour.sign,
            intervals: vec![0],
        }]);
    }
    let partition = face_partition(k, &outer, true);
    Ok(partition
        .faces
        .iter()
        .map(|f| {
            let shade = colour.sign.at_depth(f.intervals[0]);
            debug_assert!(f
                .intervals
                .iter()
                .all(|&iv| colour.sign.at_depth(iv) == shade));
            crate::diagram::Face {
                address: f.address(),
                colour: shade,
                intervals: f.intervals.clone(),
            }
        })
        .collect())
}

fn close_diagram(
    d: &FlatDiagram,
    outer: &[(u32, u32)],
    ext_interval: u32,
    outer_labels: &BTreeMap<u32, Vec<Label>>,
) -> Result<ClosedDiagram> {
    let colour = d.colour();
    let k = colour.k;

    let mut outer: Vec<(u32, u32)> = outer
        .iter()
        .map(|&(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect();
    outer.sort_unstable();
    {
        // same validity conditions as an inner matching: "non-crossing"
        // is mirror invariant
        let _ = FlatDiagram::new(Colour::new(k, colour.sign), outer.clone(), BTreeMap::new())?;
    }

    if k == 0 {
        let mut external: Vec<Label> = d.labels().get(&0).cloned().unwrap_or_default();
        external.extend(outer_labels.get(&0).cloned().unwrap_or_default());
        return ClosedDiagram::new(colour.sign, external, vec![]);
    }
    if ext_interval == 0 || ext_interval > 2 * k {
        return Err(Error::Validation(format!(
            "external interval {ext_interval} out of range"
        )));
    }

    let pin = d.partition();
    let pout = face_partition(k, &outer, true);
    let n_in = pin.faces.len();
    let mut uf = UnionFind::new(n_in + pout.faces.len());
    for j in 1..=2 * k {
        uf.union(pin.face_of(j), n_in + pout.face_of(j));
    }

    // pooled labels and shading per class
    let mut class_labels: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    let mut class_shade: BTreeMap<usize, Sign> = BTreeMap::new();
    for (f, data) in pin.faces.iter().enumerate() {
        let root = uf.find(f);
        let shade = colour.sign.at_depth(data.depth);
        if let Some(prev) = class_shade.insert(root, shade) {
            assert_eq!(prev, shade, "inconsistent shading across a closure channel");
        }
        let entry = class_labels.entry(root).or_default();
        if let Some(ls) = d.labels().get(&data.address()) {
            entry.extend(ls.iter().copied());
        }
    }
    for (f, data) in pout.faces.iter().enumerate() {
        let root = uf.find(n_in + f);
        let entry = class_labels.entry(root).or_default();
        if let Some(ls) = outer_labels.get(&data.address()) {
            entry.extend(ls.iter().copied());
        }
    }
    for (root, ls) in &class_labels {
        if !ls.is_empty() && class_shade[root].is_white() {
            return Err(Error::Validation("closure label lands on a white region".into()));
        }
    }

    // loops: cycles alternating inner chords and outer arcs
    let partner_in = {
        let mut p = vec![0u32; (2 * k + 1) as usize];
        for &(a, b) in d.pairs() {
            p[a as usize] = b;
            p[b as usize] = a;
        }
        p
    };
    let partner_out = {
        let mut p = vec![0u32; (2 * k + 1) as usize];
        for &(a, b) in &outer {
            p[a as usize] = b;
            p[b as usize] = a;
        }
        p
    };
    let mut visited = vec![false; (2 * k + 1) as usize];
    // for every loop remember one inner chord: the classes on its two
    // sides are the faces the loop separates
    let mut loop_edges: Vec<(usize, usize)> = Vec::new();
    for start in 1..=2 * k {
        if visited[start as usize] {
            continue;
        }
        let a = start;
        let prev_iv = if a == 1 { 2 * k } else { a - 1 };
        let c1 = uf.find(pin.face_of(a));
        let c2 = uf.find(pin.face_of(prev_iv));
        assert_ne!(c1, c2, "loop with equal faces on both sides");
        loop_edges.push((c1, c2));
        let mut p = start;
        loop {
            visited[p as usize] = true;
            let q = partner_in[p as usize];
            visited[q as usize] = true;
            p = partner_out[q as usize];
            if p == start {
                break;
            }
        }
    }
    assert_eq!(
        class_labels.len(),
        loop_edges.len() + 1,
        "sphere faces must be loops + 1"
    );

    // root the face/loop tree at the external class
    let external_class = uf.find(n_in + pout.face_of(ext_interval));
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (idx, &(c1, c2)) in loop_edges.iter().enumerate() {
        adjacency.entry(c1).or_default().push((idx, c2));
        adjacency.entry(c2).or_default().push((idx, c1));
    }
    fn build(
        class: usize,
        from_loop: Option<usize>,
        adjacency: &BTreeMap<usize, Vec<(usize, usize)>>,
        class_labels: &BTreeMap<usize, Vec<Label>>,
    ) -> Vec<LoopNode> {
        let mut nodes = Vec::new();
        if let Some(edges) = adjacency.get(&class) {
            for &(loop_idx, other) in edges {
                if Some(loop_idx) == from_loop {
                    continue;
                }
                let children = build(other, Some(loop_idx), adjacency, class_labels);
                nodes.push(LoopNode::new(class_labels[&other].clone(), children));
            }
        }
        nodes
    }
    let roots = build(external_class, None, &adjacency, &class_labels);
    let external = class_labels[&external_class].clone();
    let closed = ClosedDiagram::new(class_shade[&external_class], external, roots)?;
    assert_eq!(closed.loop_count(), loop_edges.len(), "closure tree must reach every loop");
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cup_cap(n: u32, cap: Option<Label>, cup: Option<Label>) -> Element {
        let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
        if let Some(l) = cap {
            labels.insert(1, vec![l]);
        }
        if let Some(l) = cup {
            labels.insert(3, vec![l]);
        }
        let d = FlatDiagram::new(Colour::plus(2), vec![(1, 2), (3, 4)], labels).unwrap();
        Element::canonicalize(d, Scalar::one(n)).unwrap()
    }

    #[test]
    fn trace_close_identity_two_nested_unlabelled_loops() {
        let n = 2;
        let closed = Element::unit(n, Colour::plus(2)).trace_close();
        assert_eq!(closed.len(), 1);
        let (t, c) = &closed[0];
        assert!(c.is_one());
        assert_eq!(t.sign(), Sign::Plus);
        assert_eq!(t.loop_count(), 2);
        assert_eq!(t.roots().len(), 1);
        assert_eq!(t.roots()[0].children().len(), 1);
        assert!(t.external_labels().is_empty());
        assert!(t.roots()[0].labels().is_empty());
    }

    #[test]
    fn trace_close_cup_cap_single_loop_merges_labels() {
        let n = 2;
        let closed = cup_cap(n, Some(1), Some(2)).trace_close();
        assert_eq!(closed.len(), 1);
        let t = &closed[0].0;
        assert_eq!(t.loop_count(), 1);
        assert_eq!(t.roots()[0].labels(), &[1, 2]);
    }

    #[test]
    fn resolve_matches_direct_factors() {
        let n = 3;
        // empty loop: sqrt(n); labelled loop: 1/sqrt(n); clash: 0
        let one = ClosedDiagram::single_loop(Sign::Plus, vec![]).unwrap();
        assert_eq!(
            one.resolve(n),
            Element::unit(n, Colour::plus(0)).scale(&Scalar::sqrt_n(n))
        );
        let labelled = ClosedDiagram::single_loop(Sign::Plus, vec![2]).unwrap();
        assert_eq!(
            labelled.resolve(n),
            Element::unit(n, Colour::plus(0)).scale(&Scalar::sqrtn_pow(n, -1))
        );
        let clash = ClosedDiagram::single_loop(Sign::Plus, vec![1, 2]).unwrap();
        assert!(clash.resolve(n).is_zero());
    }

    #[test]
    fn resolve_external_labels() {
        let n = 3;
        let s2 = ClosedDiagram::spin(2);
        assert_eq!(s2.resolve(n), Element::spin(n, 2).unwrap());
        let clash = ClosedDiagram::new(Sign::Minus, vec![1, 2], vec![]).unwrap();
        assert!(clash.resolve(n).is_zero());
    }

    #[test]
    fn wrap_builds_the_lambda_minus_ring() {
        let u = ClosedDiagram::spin(3);
        let t = u.wrap(vec![1]).unwrap();
        assert_eq!(t.sign(), Sign::Plus);
        assert_eq!(t.loop_count(), 1);
        assert_eq!(t.roots()[0].labels(), &[1, 3]);
    }

    #[test]
    fn insert_at_checks_shading() {
        let a = ClosedDiagram::single_loop(Sign::Plus, vec![]).unwrap();
        // the loop face of a (0,+) single loop is black: S(i) fits
        let faces = a.faces();
        let black = faces.iter().find(|(_, s, _)| !s.is_white()).unwrap().0.clone();
        let b = a.insert_at(&black, &ClosedDiagram::spin(2)).unwrap();
        assert_eq!(b.roots()[0].labels(), &[2]);
        assert!(a.insert_at(&FaceRef(vec![]), &ClosedDiagram::spin(2)).is_err());
    }

    #[test]
    fn six_point_closure_shapes() {
        // closing the (3,+) identity with the rainbow: three nested loops
        let n = 2;
        let id3 = Element::unit(n, Colour::plus(3));
        let (t, _) = &id3.trace_close()[0];
        assert_eq!(t.loop_count(), 3);
        assert_eq!(t.roots().len(), 1);
        let r = &t.roots()[0];
        assert_eq!(r.children().len(), 1);
        assert_eq!(r.children()[0].children().len(), 1);
    }
}
