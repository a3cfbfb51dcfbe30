//! Region bookkeeping for chord diagrams.
//!
//! A non-crossing matching on `2k` points cuts the disk into `k+1`
//! faces, every one of which touches the boundary.  Boundary intervals
//! are numbered `1..=2k` clockwise, interval `i` lying between points
//! `i` and `i+1` (interval `2k`, between `2k` and `1`, is the marked
//! one).  Two intervals lie on the same face iff they are on the same
//! side of every chord.  The same matching can also be drawn on the
//! outside of the circle (used for closures); there the side predicate
//! flips.

/// Face structure of one matching, keyed by boundary interval.
#[derive(Debug, Clone)]
pub(crate) struct FacePartition {
    /// interval -> face index; slot 0 is the single face when `k = 0`.
    face_of_interval: Vec<usize>,
    /// per face: sorted member intervals and the nesting depth
    /// (number of chords strictly enclosing the face, inner side only).
    pub faces: Vec<FaceData>,
    k: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct FaceData {
    pub intervals: Vec<u32>,
    pub depth: u32,
}

impl FaceData {
    /// Canonical face address: the smallest touched interval.
    pub fn address(&self) -> u32 {
        self.intervals[0]
    }
}

impl FacePartition {
    pub fn face_of(&self, interval: u32) -> usize {
        if self.k == 0 {
            return 0;
        }
        debug_assert!(interval >= 1 && interval <= 2 * self.k);
        self.face_of_interval[interval as usize]
    }

    pub fn address_of(&self, interval: u32) -> u32 {
        self.faces[self.face_of(interval)].address()
    }

    /// Index of the face with the given address, if any.
    pub fn face_with_address(&self, address: u32) -> Option<usize> {
        self.faces.iter().position(|f| f.address() == address)
    }
}

/// Compute the face partition of `pairs` on `2k` points, drawn inside
/// the circle (`outer = false`) or outside it (`outer = true`).
pub(crate) fn face_partition(k: u32, pairs: &[(u32, u32)], outer: bool) -> FacePartition {
    if k == 0 {
        return FacePartition {
            face_of_interval: vec![0],
            faces: vec![FaceData { intervals: vec![0], depth: 0 }],
            k,
        };
    }
    let m = 2 * k;
    // interval i is inside chord (a,b) iff a <= i < b
    let side = |i: u32, (a, b): (u32, u32)| -> bool {
        let inside = a <= i && i < b;
        inside != outer
    };
    let mut face_of_interval = vec![usize::MAX; (m + 1) as usize];
    let mut faces: Vec<FaceData> = Vec::new();
    let mut signatures: Vec<Vec<bool>> = Vec::new();
    for i in 1..=m {
        let sig: Vec<bool> = pairs.iter().map(|&p| side(i, p)).collect();
        let idx = match signatures.iter().position(|s| *s == sig) {
            Some(idx) => idx,
            None => {
                signatures.push(sig.clone());
                faces.push(FaceData {
                    intervals: Vec::new(),
                    depth: sig.iter().filter(|&&b| b).count() as u32,
                });
                faces.len() - 1
            }
        };
        faces[idx].intervals.push(i);
        face_of_interval[i as usize] = idx;
    }
    debug_assert_eq!(faces.len(), k as usize + 1);
    FacePartition { face_of_interval, faces, k }
}

/// Plain union-find over `len` nodes.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind { parent: (0..len).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx.max(ry)] = rx.min(ry);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_two_strands() {
        // (2,eps) identity {(1,4),(2,3)}: faces {4}, {1,3}, {2}
        let p = face_partition(2, &[(1, 4), (2, 3)], false);
        assert_eq!(p.faces.len(), 3);
        assert_eq!(p.address_of(4), 4);
        assert_eq!(p.address_of(1), 1);
        assert_eq!(p.address_of(3), 1);
        assert_eq!(p.address_of(2), 2);
        assert_eq!(p.faces[p.face_of(4)].depth, 0);
        assert_eq!(p.faces[p.face_of(1)].depth, 1);
        assert_eq!(p.faces[p.face_of(2)].depth, 2);
    }

    #[test]
    fn cup_cap_faces() {
        // {(1,2),(3,4)}: cap face {1}, cup face {3}, outer face {2,4}
        let p = face_partition(2, &[(1, 2), (3, 4)], false);
        assert_eq!(p.faces.len(), 3);
        assert_eq!(p.address_of(1), 1);
        assert_eq!(p.address_of(3), 3);
        assert_eq!(p.address_of(2), 2);
        assert_eq!(p.address_of(4), 2);
    }

    #[test]
    fn outer_rainbow_channels() {
        // rainbow {(j, 2k+1-j)} outside the circle: pocket {k}, channels
        // {t, 2k-t}, external {2k}
        let k = 3;
        let pairs = [(1, 6), (2, 5), (3, 4)];
        let p = face_partition(k, &pairs, true);
        assert_eq!(p.faces.len(), 4);
        assert_eq!(p.address_of(3), 3); // pocket
        assert_eq!(p.address_of(6), 6); // external
        assert_eq!(p.face_of(1), p.face_of(5));
        assert_eq!(p.face_of(2), p.face_of(4));
    }
}
