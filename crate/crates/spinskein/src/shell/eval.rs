//! Compositional evaluation of parsed expressions.

use crate::basis::{basis_diagram, jones_projection};
use crate::diagram::Element;
use crate::evalfun::tau;
use crate::exactnum::Scalar;
use crate::shell::parser::{Expr, Node, UnOp};
use crate::{Error, Result};

/// Result of evaluating a node: an element or a scalar.
#[derive(Clone, PartialEq, Debug)]
pub enum Value {
    Elem(Element),
    Scal(Scalar),
}

pub fn evaluate(n: u32, node: &Node) -> Result<Value> {
    let wrap = |msg: String| Error::Type {
        line: node.span.line,
        col: node.span.col,
        msg,
    };
    match &node.expr {
        Expr::Spin(i) => Ok(Value::Elem(Element::spin(n, *i)?)),
        Expr::Unit(c) => Ok(Value::Elem(Element::unit(n, *c))),
        Expr::Jones { colour, pos } => {
            Ok(Value::Elem(jones_projection(n, colour.k, colour.sign, *pos)?))
        }
        Expr::Basis(idx) => Ok(Value::Elem(basis_diagram(n, idx)?)),
        Expr::Num { a, b } => Ok(Value::Scal(Scalar::new(n, a.clone(), b.clone()))),
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            let negate = matches!(node.expr, Expr::Sub(..));
            let vx = evaluate(n, x)?;
            let vy = evaluate(n, y)?;
            match (vx, vy) {
                (Value::Scal(a), Value::Scal(b)) => {
                    Ok(Value::Scal(if negate { a - b } else { a + b }))
                }
                (Value::Elem(a), Value::Elem(b)) => {
                    let b = if negate { b.neg() } else { b };
                    Ok(Value::Elem(a.add(&b)?))
                }
                _ => Err(wrap("cannot add a scalar and an element".into())),
            }
        }
        Expr::Mul(x, y) => {
            let vx = evaluate(n, x)?;
            let vy = evaluate(n, y)?;
            match (vx, vy) {
                (Value::Scal(a), Value::Scal(b)) => Ok(Value::Scal(a * b)),
                (Value::Scal(a), Value::Elem(b)) => Ok(Value::Elem(b.scale(&a))),
                (Value::Elem(a), Value::Scal(b)) => Ok(Value::Elem(a.scale(&b))),
                (Value::Elem(a), Value::Elem(b)) => Ok(Value::Elem(a.stack(&b)?)),
            }
        }
        Expr::Unary(op, x) => {
            let vx = evaluate(n, x)?;
            let Value::Elem(e) = vx else {
                return Err(wrap(format!("{} needs an element", op.name())));
            };
            Ok(match op {
                UnOp::Inc => Value::Elem(e.add_string_right()),
                UnOp::CapL => Value::Elem(e.cap_left()?),
                UnOp::CapR => Value::Elem(e.cap_right()?),
                UnOp::Rot => Value::Elem(e.rotate_one()?),
                UnOp::Star => Value::Elem(e.involute()),
                UnOp::Expand => Value::Elem(e.expand_units()),
                UnOp::Tr => Value::Scal(tau(&e)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Colour;
    use crate::shell::parser::parse;

    fn eval(n: u32, text: &str) -> Value {
        evaluate(n, &parse(text).unwrap()).unwrap()
    }

    #[test]
    fn capping_the_strand_gives_the_modulus() {
        let n = 2;
        match eval(n, "capR(id(1,+))") {
            Value::Elem(e) => assert_eq!(
                e,
                Element::unit(n, Colour::plus(0)).scale(&Scalar::sqrt_n(n))
            ),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn spin_product_collapses() {
        let n = 2;
        match eval(n, "s(1) * s(2)") {
            Value::Elem(e) => assert!(e.is_zero()),
            v => panic!("{v:?}"),
        }
        match eval(n, "s(1) * s(1)") {
            Value::Elem(e) => assert_eq!(e, Element::spin(n, 1).unwrap()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn jones_idempotent_through_the_dsl() {
        let n = 3;
        let e = eval(n, "E(2,+,1) * E(2,+,1)");
        let single = eval(n, "E(2,+,1)");
        assert_eq!(e, single);
    }

    #[test]
    fn traces_through_the_dsl() {
        let n = 2;
        match eval(n, "tr(id(2,+))") {
            Value::Scal(s) => assert!(s.is_one()),
            v => panic!("{v:?}"),
        }
        match eval(n, "tr(e^{1}_{2})") {
            Value::Scal(s) => assert!(s.is_zero()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn label_range_is_checked_at_evaluation() {
        assert!(evaluate(2, &parse("s(3)").unwrap()).is_err());
        assert!(evaluate(2, &parse("e^{1}_{3}").unwrap()).is_err());
    }
}
