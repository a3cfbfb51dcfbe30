//! The concrete loop model on the star bipartite graph and its
//! identification with the presented algebra.
//!
//! The graph has one even vertex `w` joined to odd vertices
//! `v1, ..., vn`.  Loops of length `2k` based at `w` (for `+`) or at
//! some `vi` (for `-`) index the model spaces; a loop is determined by
//! its `k` odd-vertex slots, which we identify with the basis indices
//! of the presented algebra.  Multiplication, star and trace on the
//! model side are the delta rules and stated trace values, computed
//! without touching diagrams, so agreement with the diagram engine is a
//! genuine two-route check.

use std::collections::BTreeMap;
use std::fmt;

use crate::basis::{basis_diagram, enumerate_basis, to_basis, unit_product, BasisIndex};
use crate::diagram::{ClosedDiagram, Colour, Element, Label, Sign};
use crate::exactnum::Scalar;
use crate::{Error, Result};

/// An element of the loop model: a coefficient on every loop (equally,
/// on every basis index) of one colour.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelElement {
    colour: Colour,
    n: u32,
    coeffs: BTreeMap<BasisIndex, Scalar>,
}

impl ModelElement {
    pub fn zero(n: u32, colour: Colour) -> ModelElement {
        ModelElement { colour, n, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(
        n: u32,
        colour: Colour,
        coeffs: BTreeMap<BasisIndex, Scalar>,
    ) -> Result<ModelElement> {
        for idx in coeffs.keys() {
            if idx.colour() != colour {
                return Err(Error::ColourMismatch(idx.colour(), colour));
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(ModelElement { colour, n, coeffs })
    }

    /// The multiplicative unit: every diagonal loop with coefficient 1.
    pub fn identity(n: u32, colour: Colour) -> ModelElement {
        let coeffs = enumerate_basis(n, colour.k, colour.sign)
            .into_iter()
            .filter(is_diagonal)
            .map(|idx| (idx, Scalar::one(n)))
            .collect();
        ModelElement { colour, n, coeffs }
    }

    pub fn single(n: u32, idx: BasisIndex) -> ModelElement {
        let colour = idx.colour();
        ModelElement {
            colour,
            n,
            coeffs: [(idx, Scalar::one(n))].into_iter().collect(),
        }
    }

    pub fn colour(&self) -> Colour {
        self.colour
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<BasisIndex, Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &ModelElement) -> Result<ModelElement> {
        if self.colour != other.colour {
            return Err(Error::ColourMismatch(self.colour, other.colour));
        }
        let mut coeffs = self.coeffs.clone();
        for (idx, c) in &other.coeffs {
            let entry = coeffs.entry(idx.clone()).or_insert_with(|| Scalar::zero(self.n));
            *entry += c.clone();
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(ModelElement { colour: self.colour, n: self.n, coeffs })
    }

    pub fn scale(&self, s: &Scalar) -> ModelElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(idx, c)| (idx.clone(), c.clone() * s.clone()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        ModelElement { colour: self.colour, n: self.n, coeffs }
    }
}

fn is_diagonal(idx: &BasisIndex) -> bool {
    match idx {
        BasisIndex::Even { i, j } => i == j,
        BasisIndex::OddPlus { i, j, .. } => i == j,
        BasisIndex::OddMinus { i, j, .. } => i == j,
        BasisIndex::EvenMinus { i, j, .. } => i == j,
        BasisIndex::Spin(_) => true,
    }
}

/// Bilinear extension of the delta-rule product to the model.
pub fn model_mul(x: &ModelElement, y: &ModelElement) -> Result<ModelElement> {
    if x.colour != y.colour {
        return Err(Error::ColourMismatch(x.colour, y.colour));
    }
    let mut coeffs: BTreeMap<BasisIndex, Scalar> = BTreeMap::new();
    for (a, ca) in &x.coeffs {
        for (b, cb) in &y.coeffs {
            if let Some(c) = unit_product(a, b)? {
                let entry = coeffs.entry(c).or_insert_with(|| Scalar::zero(x.n));
                *entry += ca.clone() * cb.clone();
            }
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(ModelElement { colour: x.colour, n: x.n, coeffs })
}

/// The star: loop reversal, i.e. swapping the two label tuples.
pub fn model_star(x: &ModelElement) -> ModelElement {
    let coeffs = x
        .coeffs
        .iter()
        .map(|(idx, c)| (idx.star(), c.clone()))
        .collect();
    ModelElement { colour: x.colour, n: x.n, coeffs }
}

/// The normalised trace on the model: diagonal loops of the four
/// families take the values `n^-m`, `n^-m-1`, `n^-m-1`, `n^-m-2`, and
/// `tr(S(i)) = 1/n`.
pub fn model_tau(x: &ModelElement) -> Scalar {
    let n = x.n;
    let mut out = Scalar::zero(n);
    for (idx, c) in &x.coeffs {
        if !is_diagonal(idx) {
            continue;
        }
        let m = idx.m() as i64;
        let exponent = match idx {
            BasisIndex::Even { .. } => -m,
            BasisIndex::OddPlus { .. } | BasisIndex::OddMinus { .. } => -m - 1,
            BasisIndex::EvenMinus { .. } => -m - 2,
            BasisIndex::Spin(_) => -1,
        };
        out += c.clone() * Scalar::sqrtn_pow(n, 2 * exponent);
    }
    out
}

/// Transports an element of the presented algebra to the model along
/// its basis coordinates.
pub fn iso_to_model(x: &Element) -> Result<ModelElement> {
    ModelElement::from_coeffs(x.n(), x.colour(), to_basis(x)?)
}

/// The inverse on coordinates: model element back to a diagram element.
pub fn iso_from_model(x: &ModelElement) -> Result<Element> {
    let mut out = Element::zero(x.n, x.colour);
    for (idx, c) in &x.coeffs {
        out = out.add(&basis_diagram(x.n, idx)?.scale(c))?;
    }
    Ok(out)
}

/// A loop in the star graph, as its sequence of odd-vertex slots.
pub fn loop_encode(idx: &BasisIndex) -> Vec<Label> {
    let mut slots = Vec::new();
    match idx {
        BasisIndex::Spin(i) => slots.push(*i),
        BasisIndex::Even { i, j } => {
            slots.extend(i);
            slots.extend(j.iter().rev());
        }
        BasisIndex::OddPlus { i, j, q } => {
            slots.extend(i);
            slots.push(*q);
            slots.extend(j.iter().rev());
        }
        BasisIndex::OddMinus { p, i, j } => {
            slots.push(*p);
            slots.extend(i);
            slots.extend(j.iter().rev());
        }
        BasisIndex::EvenMinus { p, i, j, q } => {
            slots.push(*p);
            slots.extend(i);
            slots.push(*q);
            slots.extend(j.iter().rev());
        }
    }
    slots
}

/// Inverse of [`loop_encode`] for a given colour.
pub fn loop_decode(colour: Colour, slots: &[Label]) -> Result<BasisIndex> {
    let k = colour.k as usize;
    let expected = match colour.sign {
        Sign::Plus => k,
        Sign::Minus => k.max(1),
    };
    if slots.len() != expected {
        return Err(Error::Validation(format!(
            "expected {expected} spin slots for colour {colour}, got {}",
            slots.len()
        )));
    }
    let rev = |s: &[Label]| s.iter().rev().copied().collect::<Vec<_>>();
    Ok(match (colour.sign, k % 2) {
        (Sign::Plus, 0) => {
            let m = k / 2;
            BasisIndex::Even { i: slots[..m].to_vec(), j: rev(&slots[m..]) }
        }
        (Sign::Plus, _) => {
            let m = (k - 1) / 2;
            BasisIndex::OddPlus {
                i: slots[..m].to_vec(),
                q: slots[m],
                j: rev(&slots[m + 1..]),
            }
        }
        (Sign::Minus, _) if k == 0 => BasisIndex::Spin(slots[0]),
        (Sign::Minus, 1) => {
            let m = (k - 1) / 2;
            BasisIndex::OddMinus {
                p: slots[0],
                i: slots[1..m + 1].to_vec(),
                j: rev(&slots[m + 1..]),
            }
        }
        (Sign::Minus, _) => {
            let m = (k - 2) / 2;
            BasisIndex::EvenMinus {
                p: slots[0],
                i: slots[1..m + 1].to_vec(),
                q: slots[m + 1],
                j: rev(&slots[m + 2..]),
            }
        }
    })
}

/// Text form of the loop: `w v3 w v1 w` for `+`, `v2 w v4 w v2` for `-`.
pub fn loop_text(idx: &BasisIndex) -> String {
    let slots = loop_encode(idx);
    match idx.colour().sign {
        Sign::Plus => {
            let mut out = String::from("w");
            for s in slots {
                out.push_str(&format!(" v{s} w"));
            }
            out
        }
        Sign::Minus => {
            let base = slots[0];
            let mut out = format!("v{base}");
            for s in &slots[1..] {
                out.push_str(&format!(" w v{s}"));
            }
            if idx.colour().k > 0 {
                out.push_str(&format!(" w v{base}"));
            }
            out
        }
    }
}

/// Parses a loop word back to a basis index: the walk must alternate
/// between `w` and odd vertices, close up, and have length `2k`.
pub fn loop_parse(colour: Colour, text: &str) -> Result<BasisIndex> {
    let bad = |msg: String| Error::Validation(format!("loop word: {msg}"));
    let mut slots: Vec<Label> = Vec::new();
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(bad("empty".into()));
    }
    if tokens.len() != 2 * colour.k as usize + 1 {
        return Err(bad(format!(
            "a loop of length {} has {} vertices, got {}",
            2 * colour.k,
            2 * colour.k + 1,
            tokens.len()
        )));
    }
    let starts_at_w = colour.sign == Sign::Plus;
    for (pos, tok) in tokens.iter().enumerate() {
        let expect_w = (pos % 2 == 0) == starts_at_w;
        if expect_w {
            if *tok != "w" {
                return Err(bad(format!("walk not alternating at position {pos}")));
            }
        } else {
            let l: Label = tok
                .strip_prefix('v')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("expected an odd vertex at position {pos}")))?;
            slots.push(l);
        }
    }
    if colour.sign == Sign::Minus {
        if tokens.first() != tokens.last() {
            return Err(bad("walk does not close up".into()));
        }
        if colour.k > 0 {
            slots.pop(); // the closing revisit of the base vertex
        }
    }
    loop_decode(colour, &slots)
}

/// The spin function of the star graph, stored as its exact squares
/// (the values themselves are fourth roots of `n`, outside Q(sqrt n)).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpinFunction {
    pub mu_w_sq: Scalar,
    pub mu_v_sq: Scalar,
}

impl SpinFunction {
    /// Squares of the coordinate-wise square root of the Perron
    /// eigenvector `(sqrt n at w, 1 at each leaf)`, normalised so the
    /// modulus relations hold.
    pub fn star_graph(n: u32) -> SpinFunction {
        SpinFunction {
            mu_w_sq: Scalar::sqrt_n(n),
            mu_v_sq: Scalar::sqrtn_pow(n, -1),
        }
    }
}

/// One line of the consistency report.
#[derive(Clone, Debug)]
pub struct SpinCheck {
    pub name: String,
    pub pass: bool,
}

/// Checks the spin function against the engine's loop values: a white
/// loop is worth `mu_w^2`, a black loop around `S(i)` is worth
/// `mu_v^2`, and `tr(S(i)) = mu_v^2 / (n mu_v^2) = 1/n`.
pub fn spin_consistency(n: u32) -> Vec<SpinCheck> {
    let mu = SpinFunction::star_graph(n);
    let mut checks = Vec::new();

    let white_loop = ClosedDiagram::single_loop(Sign::Minus, vec![])
        .expect("white interior carries no label")
        .resolve(n);
    let white_value = white_loop
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .unwrap_or_else(|| Scalar::zero(n));
    checks.push(SpinCheck {
        name: "white loop value equals mu_w^2".into(),
        pass: white_value == mu.mu_w_sq,
    });

    let mut black_ok = true;
    for i in 1..=n {
        let black_loop = ClosedDiagram::single_loop(Sign::Plus, vec![i])
            .expect("black interior accepts a label")
            .resolve(n);
        let value = black_loop
            .terms()
            .next()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Scalar::zero(n));
        black_ok &= value == mu.mu_v_sq;
    }
    checks.push(SpinCheck {
        name: "black loop around S(i) equals mu_v^2".into(),
        pass: black_ok,
    });

    let mut trace_ok = true;
    let norm = mu.mu_v_sq.clone()
        * (mu.mu_v_sq.clone() * Scalar::from_int(n, n as i64))
            .inv()
            .expect("nonzero");
    for i in 1..=n {
        let t = crate::evalfun::tau(&Element::spin(n, i).expect("label in range"));
        trace_ok &= t == norm;
    }
    checks.push(SpinCheck {
        name: "tr(S(i)) equals mu_v^2 / sum mu_v^2 = 1/n".into(),
        pass: trace_ok,
    });

    checks
}

impl fmt::Display for ModelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 : colour {}", self.colour);
        }
        for (i, (idx, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {}", loop_text(idx))?;
        }
        Ok(())
    }
}
