//! Seeded random generators feeding the verification suites.
//!
//! Everything draws from a caller-supplied ChaCha stream, so one seed
//! reproduces one run byte for byte.

use std::collections::BTreeMap;

use rand::Rng;

use crate::diagram::{ClosedDiagram, Colour, Element, FaceRef, FlatDiagram, Label, LoopNode, Sign};
use crate::exactnum::Scalar;

fn catalan_table(max: usize) -> Vec<u128> {
    let mut c = vec![1u128; max + 1];
    for m in 1..=max {
        c[m] = (0..m).map(|j| c[j] * c[m - 1 - j]).sum();
    }
    c
}

/// Uniform non-crossing perfect matching on points `1..=2k`.
pub fn random_matching<R: Rng>(rng: &mut R, k: u32) -> Vec<(u32, u32)> {
    let cat = catalan_table(k as usize);
    let mut pairs = Vec::with_capacity(k as usize);
    // split recursively: the first point pairs so that both sides stay
    // non-crossing, weighted by the Catalan counts
    fn fill<R: Rng>(rng: &mut R, cat: &[u128], lo: u32, hi: u32, pairs: &mut Vec<(u32, u32)>) {
        if lo >= hi {
            return;
        }
        let m = ((hi - lo + 1) / 2) as usize;
        let total = cat[m];
        let mut draw = rng.gen_range(0..total);
        let mut j = 1usize;
        loop {
            let weight = cat[j - 1] * cat[m - j];
            if draw < weight {
                break;
            }
            draw -= weight;
            j += 1;
        }
        let partner = lo + 2 * j as u32 - 1;
        pairs.push((lo, partner));
        fill(rng, cat, lo + 1, partner - 1, pairs);
        fill(rng, cat, partner + 1, hi, pairs);
    }
    fill(rng, &cat, 1, 2 * k, &mut pairs);
    pairs.sort_unstable();
    pairs
}

/// Random canonical diagram: uniform matching, each black face labelled
/// with probability 1/2.
pub fn random_diagram<R: Rng>(rng: &mut R, n: u32, colour: Colour) -> FlatDiagram {
    let pairs = random_matching(rng, colour.k);
    let bare = FlatDiagram::new(colour, pairs, BTreeMap::new()).expect("generated matching");
    let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
    for face in bare.faces() {
        if face.colour == Sign::Minus && rng.gen_bool(0.5) {
            labels.insert(face.address, vec![rng.gen_range(1..=n)]);
        }
    }
    FlatDiagram::new(colour, bare.pairs().to_vec(), labels).expect("labels on black faces")
}

/// Random small scalar: `a + b sqrt(n)` with numerators in `-3..=3`.
pub fn random_scalar<R: Rng>(rng: &mut R, n: u32) -> Scalar {
    loop {
        let a = Scalar::rational(n, rng.gen_range(-3..=3), rng.gen_range(1..=2));
        let b = Scalar::rational(n, rng.gen_range(-2..=2), 1) * Scalar::sqrt_n(n);
        let s = a + b;
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random element: one to three random terms.
pub fn random_element<R: Rng>(rng: &mut R, n: u32, colour: Colour) -> Element {
    let mut out = Element::zero(n, colour);
    for _ in 0..rng.gen_range(1..=3) {
        let d = random_diagram(rng, n, colour);
        let c = random_scalar(rng, n);
        let term = Element::canonicalize(d, c).expect("labels in range");
        out = out.add(&term).expect("same colour");
    }
    out
}

fn random_forest<R: Rng>(rng: &mut R, n: u32, shade: Sign, depth: u32) -> Vec<LoopNode> {
    if depth == 0 {
        return vec![];
    }
    let breadth = rng.gen_range(0..=2);
    (0..breadth)
        .map(|_| {
            let mut labels = Vec::new();
            if shade == Sign::Minus {
                // mostly one label, occasionally none or a clashing pair
                match rng.gen_range(0..6) {
                    0 | 1 => {}
                    5 => {
                        labels.push(rng.gen_range(1..=n));
                        labels.push(rng.gen_range(1..=n));
                    }
                    _ => labels.push(rng.gen_range(1..=n)),
                }
            }
            LoopNode::new(labels, random_forest(rng, n, shade.flip(), depth - 1))
        })
        .collect()
}

/// Random closed diagram of the given external shading, a few loops
/// deep, labels (possibly clashing multisets) on black faces.
pub fn random_closed<R: Rng>(rng: &mut R, n: u32, sign: Sign) -> ClosedDiagram {
    let mut external = Vec::new();
    if sign == Sign::Minus {
        match rng.gen_range(0..4) {
            0 | 1 => {}
            _ => external.push(rng.gen_range(1..=n)),
        }
    }
    let roots = random_forest(rng, n, sign.flip(), 3);
    ClosedDiagram::new(sign, external, roots).expect("labels placed on black faces")
}

/// Random annular tangle: a closed diagram of colour `(0, ambient)`
/// with one designated hole face of shading `hole`.
pub fn random_annulus<R: Rng>(
    rng: &mut R,
    n: u32,
    ambient: Sign,
    hole: Sign,
) -> (ClosedDiagram, FaceRef) {
    let mut a = random_closed(rng, n, ambient);
    let candidates: Vec<FaceRef> = a
        .faces()
        .into_iter()
        .filter(|(_, s, _)| *s == hole)
        .map(|(f, _, _)| f)
        .collect();
    if candidates.is_empty() {
        // force a hole of the right shading with one extra empty ring
        a = a
            .insert_at(
                &FaceRef(vec![]),
                &ClosedDiagram::single_loop(ambient, vec![]).expect("empty loop"),
            )
            .expect("external face accepts a ring");
        let face = a
            .faces()
            .into_iter()
            .find(|(_, s, ls)| *s == hole && ls.is_empty())
            .map(|(f, _, _)| f)
            .expect("the fresh ring face has the flipped shading");
        return (a, face);
    }
    let pick = rng.gen_range(0..candidates.len());
    (a, candidates[pick].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matchings_are_valid_and_cover_all_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let pairs = random_matching(&mut rng, 3);
            let d = FlatDiagram::new(Colour::plus(3), pairs.clone(), BTreeMap::new());
            assert!(d.is_ok(), "{pairs:?}");
            seen.insert(pairs);
        }
        // catalan(3) = 5 non-crossing matchings on 6 points
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn annulus_hole_has_requested_shading() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ambient in [Sign::Plus, Sign::Minus] {
            for hole in [Sign::Plus, Sign::Minus] {
                for _ in 0..50 {
                    let (a, face) = random_annulus(&mut rng, 3, ambient, hole);
                    let shade = a
                        .faces()
                        .into_iter()
                        .find(|(f, _, _)| *f == face)
                        .map(|(_, s, _)| s)
                        .unwrap();
                    assert_eq!(shade, hole);
                    assert_eq!(a.sign(), ambient);
                }
            }
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            assert_eq!(
                random_element(&mut a, 3, Colour::plus(3)),
                random_element(&mut b, 3, Colour::plus(3))
            );
        }
    }
}
