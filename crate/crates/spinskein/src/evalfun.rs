//! The partition functionals on closed diagrams and the normalised
//! traces they induce.
//!
//! For a closed diagram `T`, `E(T)` counts non-external faces with no
//! label and `N(T)` those with at least one; loops and non-external
//! faces correspond one to one.  On consistently labelled diagrams the
//! functionals take the value `(sqrt n)^(E-N)`; `lambda_{-,i}`
//! additionally vetoes any external label other than `i`.  These counts
//! are a second, independent route to the scalars produced by the
//! procedural loop resolution in the diagram module.

use crate::diagram::{ClosedDiagram, Element, Label, Sign};
use crate::exactnum::Scalar;
use crate::{Error, Result};

/// Face census of a closed diagram.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalCounts {
    /// non-external faces with no label
    pub empty: u32,
    /// non-external faces with at least one label
    pub labelled: u32,
    /// no face carries two distinct labels
    pub consistent: bool,
    /// the external label, when there is exactly one distinct one
    pub external_label: Option<Label>,
}

pub fn counts(t: &ClosedDiagram) -> EvalCounts {
    let mut out = EvalCounts {
        empty: 0,
        labelled: 0,
        consistent: true,
        external_label: None,
    };
    for (face, _, labels) in t.faces() {
        let mut distinct = labels.to_vec();
        distinct.dedup(); // faces keep their labels sorted
        if distinct.len() > 1 {
            out.consistent = false;
        }
        if face.0.is_empty() {
            out.external_label = distinct.first().copied();
        } else if distinct.is_empty() {
            out.empty += 1;
        } else {
            out.labelled += 1;
        }
    }
    out
}

/// `lambda_+`: zero on inconsistently labelled diagrams, otherwise
/// `(sqrt n)^(E-N)`.
pub fn lambda_plus(n: u32, t: &ClosedDiagram) -> Result<Scalar> {
    if t.sign() != Sign::Plus {
        return Err(Error::Arity("lambda_+ needs a (0,+) diagram".into()));
    }
    let c = counts(t);
    if !c.consistent {
        return Ok(Scalar::zero(n));
    }
    Ok(Scalar::sqrtn_pow(n, c.empty as i64 - c.labelled as i64))
}

/// `lambda_{-,i}`: as `lambda_+`, vetoing any external box not
/// labelled `i`.
pub fn lambda_minus(n: u32, t: &ClosedDiagram, i: Label) -> Result<Scalar> {
    if t.sign() != Sign::Minus {
        return Err(Error::Arity("lambda_- needs a (0,-) diagram".into()));
    }
    let c = counts(t);
    if !c.consistent || c.external_label.map_or(false, |l| l != i) {
        return Ok(Scalar::zero(n));
    }
    Ok(Scalar::sqrtn_pow(n, c.empty as i64 - c.labelled as i64))
}

/// Coordinates of the image of `T` in the n-dimensional `(0,-)` space,
/// on the basis `S(1), ..., S(n)`.
pub fn project_0minus(n: u32, t: &ClosedDiagram) -> Result<Vec<Scalar>> {
    (1..=n).map(|i| lambda_minus(n, t, i)).collect()
}

/// `lambda_+` of an already resolved `(0,+)` element.
pub fn lambda_plus_element(x: &Element) -> Result<Scalar> {
    if x.colour().k != 0 || x.colour().sign != Sign::Plus {
        return Err(Error::Arity("lambda_+ needs a (0,+) element".into()));
    }
    let mut out = Scalar::zero(x.n());
    for (_, c) in x.terms() {
        out += c.clone();
    }
    Ok(out)
}

/// `lambda_{-,i}` of an already resolved `(0,-)` element: `S(i)` and the
/// unlabelled unit both count, other labels are vetoed.
pub fn lambda_minus_element(x: &Element, i: Label) -> Result<Scalar> {
    if x.colour().k != 0 || x.colour().sign != Sign::Minus {
        return Err(Error::Arity("lambda_- needs a (0,-) element".into()));
    }
    let mut out = Scalar::zero(x.n());
    for (d, c) in x.terms() {
        match d.labels().get(&0).map(|ls| ls.as_slice()) {
            None => out += c.clone(),
            Some([l]) if *l == i => out += c.clone(),
            _ => {}
        }
    }
    Ok(out)
}

/// The normalised trace: `(sqrt n)^(-k)` times the closed evaluation;
/// on `(k,-)` the closure lands in the `(0,-)` space and is traced with
/// `tr(S(i)) = 1/n`.
pub fn tau(x: &Element) -> Scalar {
    let n = x.n();
    let k = x.colour().k;
    let norm = Scalar::sqrtn_pow(n, -(k as i64));
    let mut total = Scalar::zero(n);
    match x.colour().sign {
        Sign::Plus => {
            for (t, c) in x.trace_close() {
                total += c * lambda_plus(n, &t).expect("closure keeps the sign");
            }
        }
        Sign::Minus => {
            let inv_n = Scalar::rational(n, 1, n as i64);
            for (t, c) in x.trace_close() {
                let mut sum = Scalar::zero(n);
                for i in 1..=n {
                    sum += lambda_minus(n, &t, i).expect("closure keeps the sign");
                }
                total += c * sum * inv_n.clone();
            }
        }
    }
    total * norm
}

/// The sesquilinear trace pairing `tau(y* x)` (conjugation is the
/// identity on Q(sqrt n)).
pub fn pairing(x: &Element, y: &Element) -> Result<Scalar> {
    if x.colour() != y.colour() {
        return Err(Error::ColourMismatch(x.colour(), y.colour()));
    }
    Ok(tau(&y.involute().stack(x)?))
}
