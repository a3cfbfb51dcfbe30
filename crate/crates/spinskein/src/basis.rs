//! The explicit orthogonal bases, their matrix-unit arithmetic, Jones
//! projections, and coordinatisation of arbitrary elements.
//!
//! Four families, all weighted by `(sqrt n)^m`:
//!
//! - `e^{i1..im}_{j1..jm}` in `(2m,+)`: m adjacent caps on top labelled
//!   by the `i`s, m aligned cups below labelled by the `j`s;
//! - `e^{i..}_{j..}(q]` in `(2m+1,+)`: the same plus a rightmost through
//!   strand with `q` on the black face right of it;
//! - `e[p)^{i..}_{j..}(q]` in `(2m+2,-)`: through strands at both ends,
//!   `p` on the marked black face, `q` at the far right;
//! - `e[p)^{i..}_{j..}` in `(2m+1,-)`: the left strand only.
//!
//! `(0,+)` is the empty even family; the `(0,-)` basis is `S(1..n)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{Colour, Element, FlatDiagram, Label, Sign};
use crate::evalfun::pairing;
use crate::exactnum::Scalar;
use crate::{Error, Result};

/// Index of one basis element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasisIndex {
    /// `(2m,+)`, including the `(0,+)` singleton at `m = 0`
    Even { i: Vec<Label>, j: Vec<Label> },
    /// `(2m+1,+)`
    OddPlus { i: Vec<Label>, j: Vec<Label>, q: Label },
    /// `(2m+1,-)`
    OddMinus { p: Label, i: Vec<Label>, j: Vec<Label> },
    /// `(2m+2,-)`
    EvenMinus { p: Label, i: Vec<Label>, j: Vec<Label>, q: Label },
    /// `(0,-)`: the generator `S(i)`
    Spin(Label),
}

use BasisIndex::{Even, EvenMinus, OddMinus, OddPlus, Spin};

impl BasisIndex {
    pub fn colour(&self) -> Colour {
        match self {
            Even { i, .. } => Colour::plus(2 * i.len() as u32),
            OddPlus { i, .. } => Colour::plus(2 * i.len() as u32 + 1),
            OddMinus { i, .. } => Colour::minus(2 * i.len() as u32 + 1),
            EvenMinus { i, .. } => Colour::minus(2 * i.len() as u32 + 2),
            Spin(_) => Colour::minus(0),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Even { i, .. } | OddPlus { i, .. } | OddMinus { i, .. } | EvenMinus { i, .. } => {
                i.len()
            }
            Spin(_) => 0,
        }
    }

    fn tuples(&self) -> (Option<Label>, &[Label], &[Label], Option<Label>) {
        match self {
            Even { i, j } => (None, i, j, None),
            OddPlus { i, j, q } => (None, i, j, Some(*q)),
            OddMinus { p, i, j } => (Some(*p), i, j, None),
            EvenMinus { p, i, j, q } => (Some(*p), i, j, Some(*q)),
            Spin(_) => (None, &[], &[], None),
        }
    }

    fn validate(&self, n: u32) -> Result<()> {
        let in_range = |l: Label| l >= 1 && l <= n;
        let ok = match self {
            Spin(i) => in_range(*i),
            _ => {
                let (p, i, j, q) = self.tuples();
                i.len() == j.len()
                    && i.iter().chain(j).all(|&l| in_range(l))
                    && p.map_or(true, in_range)
                    && q.map_or(true, in_range)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!("bad basis index {self} for n = {n}")))
        }
    }

    /// The involution image: `i` and `j` swap, decorations stay put.
    pub fn star(&self) -> BasisIndex {
        match self.clone() {
            Even { i, j } => Even { i: j, j: i },
            OddPlus { i, j, q } => OddPlus { i: j, j: i, q },
            OddMinus { p, i, j } => OddMinus { p, i: j, j: i },
            EvenMinus { p, i, j, q } => EvenMinus { p, i: j, j: i, q },
            s @ Spin(_) => s,
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tuple(ls: &[Label]) -> String {
            ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
        }
        match self {
            Spin(i) => write!(f, "s({i})"),
            _ => {
                let (p, i, j, q) = self.tuples();
                if let Some(p) = p {
                    write!(f, "e[{p})")?;
                } else {
                    write!(f, "e")?;
                }
                write!(f, "^{{{}}}_{{{}}}", tuple(i), tuple(j))?;
                if let Some(q) = q {
                    write!(f, "({q}]")?;
                }
                Ok(())
            }
        }
    }
}

fn label_tuples(n: u32, len: usize) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for t in &out {
            for l in 1..=n {
                let mut u = t.clone();
                u.push(l);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// All `n^k` basis indices of colour `(k, sign)` (one for `(0,+)`, `n`
/// for `(0,-)`), in lexicographic order of `(p, i, j, q)`.
pub fn enumerate_basis(n: u32, k: u32, sign: Sign) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    match (k, sign) {
        (0, Sign::Plus) => out.push(Even { i: vec![], j: vec![] }),
        (0, Sign::Minus) => out.extend((1..=n).map(Spin)),
        (k, Sign::Plus) if k % 2 == 0 => {
            let m = (k / 2) as usize;
            for i in label_tuples(n, m) {
                for j in label_tuples(n, m) {
                    out.push(Even { i: i.clone(), j });
                }
            }
        }
        (k, Sign::Plus) => {
            let m = ((k - 1) / 2) as usize;
            for i in label_tuples(n, m) {
                for j in label_tuples(n, m) {
                    for q in 1..=n {
                        out.push(OddPlus { i: i.clone(), j: j.clone(), q });
                    }
                }
            }
        }
        (k, Sign::Minus) if k % 2 == 0 => {
            let m = ((k - 2) / 2) as usize;
            for p in 1..=n {
                for i in label_tuples(n, m) {
                    for j in label_tuples(n, m) {
                        for q in 1..=n {
                            out.push(EvenMinus { p, i: i.clone(), j: j.clone(), q });
                        }
                    }
                }
            }
        }
        (k, Sign::Minus) => {
            let m = ((k - 1) / 2) as usize;
            for p in 1..=n {
                for i in label_tuples(n, m) {
                    for j in label_tuples(n, m) {
                        out.push(OddMinus { p, i: i.clone(), j: j.clone() });
                    }
                }
            }
        }
    }
    out
}

/// The canonical diagram of a basis index, weighted by `(sqrt n)^m`.
pub fn basis_diagram(n: u32, idx: &BasisIndex) -> Result<Element> {
    idx.validate(n)?;
    if let Spin(i) = idx {
        return Element::spin(n, *i);
    }
    let colour = idx.colour();
    let k = colour.k;
    let m = idx.m() as u32;
    let (p, i, j, q) = idx.tuples();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut labels: BTreeMap<u32, Vec<Label>> = BTreeMap::new();
    // cap t and the cup aligned below it; shifted right by one when a
    // left strand is present
    let shift = u32::from(p.is_some());
    for t in 1..=m {
        let cap = (2 * t - 1 + shift, 2 * t + shift);
        let cup_hi = 2 * k + 1 - cap.0;
        pairs.push(cap);
        pairs.push((cup_hi - 1, cup_hi));
        labels.insert(cap.0, vec![i[(t - 1) as usize]]);
        labels.insert(cup_hi - 1, vec![j[(t - 1) as usize]]);
    }
    if let Some(p) = p {
        pairs.push((1, 2 * k));
        labels.insert(2 * k, vec![p]);
    }
    if let Some(q) = q {
        pairs.push((k, k + 1));
        labels.insert(k, vec![q]);
    }
    let d = FlatDiagram::new(colour, pairs, labels)?;
    Element::canonicalize(d, Scalar::sqrtn_pow(n, m as i64))
}

/// The delta-rule product of two basis indices of the same colour:
/// coefficient 0 (`None`) or 1 (`Some`).
pub fn unit_product(a: &BasisIndex, b: &BasisIndex) -> Result<Option<BasisIndex>> {
    if a.colour() != b.colour() {
        return Err(Error::Arity(format!(
            "basis product needs one colour, got {} and {}",
            a.colour(),
            b.colour()
        )));
    }
    let out = match (a.clone(), b.clone()) {
        (Spin(x), Spin(y)) => (x == y).then_some(Spin(x)),
        (Even { i, j }, Even { i: kk, j: l }) => (j == kk).then_some(Even { i, j: l }),
        (OddPlus { i, j, q }, OddPlus { i: kk, j: l, q: s }) => {
            (j == kk && q == s).then_some(OddPlus { i, j: l, q })
        }
        (OddMinus { p, i, j }, OddMinus { p: r, i: kk, j: l }) => {
            (p == r && j == kk).then_some(OddMinus { p, i, j: l })
        }
        (EvenMinus { p, i, j, q }, EvenMinus { p: r, i: kk, j: l, q: s }) => {
            (p == r && j == kk && q == s).then_some(EvenMinus { p, i, j: l, q: s })
        }
        _ => unreachable!("same colour implies same family"),
    };
    Ok(out)
}

/// The Jones projection at position `pos`: `1/sqrt(n)` times the
/// diagram with a cap-cup at strands `pos, pos+1` and through strands
/// elsewhere.
pub fn jones_projection(n: u32, k: u32, sign: Sign, pos: u32) -> Result<Element> {
    if pos < 1 || pos + 1 > k {
        return Err(Error::Arity(format!(
            "Jones projection position {pos} out of range for k = {k}"
        )));
    }
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for t in 1..=k {
        if t == pos {
            pairs.push((pos, pos + 1));
            pairs.push((2 * k - pos, 2 * k + 1 - pos));
        } else if t != pos + 1 {
            pairs.push((t, 2 * k + 1 - t));
        }
    }
    let d = FlatDiagram::new(Colour::new(k, sign), pairs, BTreeMap::new())?;
    Element::canonicalize(d, Scalar::sqrtn_pow(n, -1))
}

/// Coordinates of `x` on the orthogonal basis of its colour:
/// `c_e = pairing(x, e) / pairing(e, e)`.
pub fn to_basis(x: &Element) -> Result<BTreeMap<BasisIndex, Scalar>> {
    let n = x.n();
    let mut out = BTreeMap::new();
    for idx in enumerate_basis(n, x.colour().k, x.colour().sign) {
        let e = basis_diagram(n, &idx)?;
        let num = pairing(x, &e)?;
        if num.is_zero() {
            continue;
        }
        let den = pairing(&e, &e)?;
        out.insert(idx, num * den.inv()?);
    }
    Ok(out)
}

/// Rebuilds an element from coordinates.
pub fn from_basis(
    n: u32,
    colour: Colour,
    coords: &BTreeMap<BasisIndex, Scalar>,
) -> Result<Element> {
    let mut out = Element::zero(n, colour);
    for (idx, c) in coords {
        if idx.colour() != colour {
            return Err(Error::ColourMismatch(idx.colour(), colour));
        }
        out = out.add(&basis_diagram(n, idx)?.scale(c))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalfun::tau;

    #[test]
    fn degenerate_families() {
        let n = 3;
        assert_eq!(
            basis_diagram(n, &Even { i: vec![], j: vec![] }).unwrap(),
            Element::unit(n, Colour::plus(0))
        );
        assert_eq!(basis_diagram(n, &Spin(2)).unwrap(), Element::spin(n, 2).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        // n = 2, plus: 1, 2, 4, 8; minus: 2, 2, 4, 8
        let n = 2;
        let plus: Vec<usize> = (0..4).map(|k| enumerate_basis(n, k, Sign::Plus).len()).collect();
        let minus: Vec<usize> = (0..4).map(|k| enumerate_basis(n, k, Sign::Minus).len()).collect();
        assert_eq!(plus, vec![1, 2, 4, 8]);
        assert_eq!(minus, vec![2, 2, 4, 8]);
        // n = 3, k = 4, minus: 81
        assert_eq!(enumerate_basis(3, 4, Sign::Minus).len(), 81);
    }

    #[test]
    fn matrix_unit_product_even_plus() {
        let n = 3;
        let e12 = basis_diagram(n, &Even { i: vec![1], j: vec![2] }).unwrap();
        let e21 = basis_diagram(n, &Even { i: vec![2], j: vec![1] }).unwrap();
        let e11 = basis_diagram(n, &Even { i: vec![1], j: vec![1] }).unwrap();
        assert_eq!(e12.stack(&e21).unwrap(), e11);
        let e31 = basis_diagram(n, &Even { i: vec![3], j: vec![1] }).unwrap();
        assert!(e12.stack(&e31).unwrap().is_zero());
    }

    #[test]
    fn stacking_agrees_with_unit_product_m1() {
        // all four families at m = 1, n = 2, every index pair
        let n = 2;
        for (k, sign) in [(2, Sign::Plus), (3, Sign::Plus), (3, Sign::Minus), (4, Sign::Minus)] {
            for a in enumerate_basis(n, k, sign) {
                for b in enumerate_basis(n, k, sign) {
                    let da = basis_diagram(n, &a).unwrap();
                    let db = basis_diagram(n, &b).unwrap();
                    let observed = da.stack(&db).unwrap();
                    let expected = match unit_product(&a, &b).unwrap() {
                        None => Element::zero(n, Colour::new(k, sign)),
                        Some(c) => basis_diagram(n, &c).unwrap(),
                    };
                    assert_eq!(observed, expected, "{a} * {b}");
                }
            }
        }
    }

    #[test]
    fn trace_values_at_m1() {
        let n = 3;
        let nn = n as i64;
        // tau(e^i_j) = delta_ij / n
        let d = |idx: &BasisIndex| tau(&basis_diagram(n, idx).unwrap());
        assert_eq!(d(&Even { i: vec![2], j: vec![2] }), Scalar::rational(n, 1, nn));
        assert_eq!(d(&Even { i: vec![1], j: vec![2] }), Scalar::zero(n));
        // m = 0 decorated families
        assert_eq!(
            d(&EvenMinus { p: 1, i: vec![], j: vec![], q: 2 }),
            Scalar::rational(n, 1, nn * nn)
        );
        assert_eq!(d(&OddPlus { i: vec![], j: vec![], q: 3 }), Scalar::rational(n, 1, nn));
        assert_eq!(d(&OddMinus { p: 2, i: vec![], j: vec![] }), Scalar::rational(n, 1, nn));
        // m = 1 decorated families
        assert_eq!(
            d(&OddPlus { i: vec![1], j: vec![1], q: 2 }),
            Scalar::rational(n, 1, nn * nn)
        );
        assert_eq!(
            d(&EvenMinus { p: 3, i: vec![2], j: vec![2], q: 1 }),
            Scalar::rational(n, 1, nn * nn * nn)
        );
        assert_eq!(
            d(&OddMinus { p: 1, i: vec![2], j: vec![1] }),
            Scalar::zero(n)
        );
    }

    #[test]
    fn involution_swaps_the_tuples() {
        let n = 3;
        for idx in [
            Even { i: vec![1, 2], j: vec![3, 1] },
            OddPlus { i: vec![2], j: vec![3], q: 1 },
            OddMinus { p: 2, i: vec![1], j: vec![3] },
            EvenMinus { p: 1, i: vec![2], j: vec![3], q: 2 },
        ] {
            let e = basis_diagram(n, &idx).unwrap();
            let star = basis_diagram(n, &idx.star()).unwrap();
            assert_eq!(e.involute(), star, "{idx}");
        }
    }

    #[test]
    fn to_basis_examples() {
        let n = 2;
        // the unit of (2,+) is the sum of the diagonal matrix units
        let coords = to_basis(&Element::unit(n, Colour::plus(2))).unwrap();
        let mut expect = BTreeMap::new();
        for i in 1..=n {
            expect.insert(Even { i: vec![i], j: vec![i] }, Scalar::one(n));
        }
        assert_eq!(coords, expect);
        // the unlabelled cup-cap is (1/sqrt n) * sum of all e^i_j
        let c = Element::canonicalize(
            FlatDiagram::new(Colour::plus(2), vec![(1, 2), (3, 4)], BTreeMap::new()).unwrap(),
            Scalar::one(n),
        )
        .unwrap();
        let coords = to_basis(&c).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                assert_eq!(
                    coords[&Even { i: vec![i], j: vec![j] }],
                    Scalar::sqrtn_pow(n, -1)
                );
            }
        }
        // a basis element has a single unit coordinate
        let idx = OddMinus { p: 2, i: vec![1], j: vec![2] };
        let coords = to_basis(&basis_diagram(n, &idx).unwrap()).unwrap();
        assert_eq!(coords.len(), 1);
        assert!(coords[&idx].is_one());
    }

    #[test]
    fn from_basis_inverts_to_basis() {
        let n = 2;
        let c = Element::canonicalize(
            FlatDiagram::new(Colour::plus(2), vec![(1, 2), (3, 4)], BTreeMap::new()).unwrap(),
            Scalar::sqrt_n(n),
        )
        .unwrap();
        let x = c
            .add(&Element::unit(n, Colour::plus(2)).scale(&Scalar::rational(n, -1, 2)))
            .unwrap();
        let coords = to_basis(&x).unwrap();
        let back = from_basis(n, Colour::plus(2), &coords).unwrap();
        // equality in the quotient: identical coordinates
        assert_eq!(to_basis(&back).unwrap(), coords);
    }

    #[test]
    fn jones_projections_are_idempotents() {
        let n = 2;
        for (k, sign) in [(2, Sign::Plus), (3, Sign::Minus), (4, Sign::Plus)] {
            for pos in 1..k {
                let e = jones_projection(n, k, sign, pos).unwrap();
                assert_eq!(e.stack(&e).unwrap(), e, "E_{pos} at ({k},{sign})");
            }
        }
        assert!(jones_projection(n, 2, Sign::Plus, 2).is_err());
    }

    #[test]
    fn jones_braid_relation() {
        // E_pos E_{pos+-1} E_pos = (1/n) E_pos
        let n = 3;
        let k = 4;
        let inv_n = Scalar::rational(n, 1, n as i64);
        for pos in 1..k {
            let e = jones_projection(n, k, Sign::Plus, pos).unwrap();
            for other in [pos.checked_sub(1), Some(pos + 1)].into_iter().flatten() {
                if other < 1 || other >= k {
                    continue;
                }
                let f = jones_projection(n, k, Sign::Plus, other).unwrap();
                let prod = e.stack(&f).unwrap().stack(&e).unwrap();
                assert_eq!(prod, e.scale(&inv_n));
            }
        }
    }

    #[test]
    fn jones_in_coordinates() {
        let n = 2;
        let e1 = jones_projection(n, 2, Sign::Plus, 1).unwrap();
        let coords = to_basis(&e1).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                assert_eq!(
                    coords[&Even { i: vec![i], j: vec![j] }],
                    Scalar::rational(n, 1, n as i64)
                );
            }
        }
    }

    #[test]
    fn out_of_range_labels_rejected() {
        assert!(basis_diagram(2, &Spin(3)).is_err());
        assert!(basis_diagram(2, &Even { i: vec![3], j: vec![1] }).is_err());
        assert!(unit_product(&Spin(1), &Even { i: vec![], j: vec![] }).is_err());
    }
}
