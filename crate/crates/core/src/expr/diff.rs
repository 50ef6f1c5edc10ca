//! Symbolic d/dz with light constant folding.

use std::sync::Arc;

use num_complex::Complex64;

use super::{Func, Node};

type N = Arc<Node>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn konst(c: Complex64) -> N {
    Arc::new(Node::Const(c))
}

fn as_const(n: &Node) -> Option<Complex64> {
    match n {
        Node::Const(c) => Some(*c),
        _ => None,
    }
}

fn fold(v: Complex64) -> Option<N> {
    (v.re.is_finite() && v.im.is_finite()).then(|| konst(v))
}

pub(super) fn add(a: N, b: N) -> N {
    match (as_const(&a), as_const(&b)) {
        (Some(x), _) if x == ZERO => b,
        (_, Some(y)) if y == ZERO => a,
        (Some(x), Some(y)) => fold(x + y).unwrap_or_else(|| Arc::new(Node::Add(a, b))),
        _ => Arc::new(Node::Add(a, b)),
    }
}

pub(super) fn sub(a: N, b: N) -> N {
    match (as_const(&a), as_const(&b)) {
        (_, Some(y)) if y == ZERO => a,
        (Some(x), _) if x == ZERO => neg(b),
        (Some(x), Some(y)) => fold(x - y).unwrap_or_else(|| Arc::new(Node::Sub(a, b))),
        _ => Arc::new(Node::Sub(a, b)),
    }
}

pub(super) fn mul(a: N, b: N) -> N {
    match (as_const(&a), as_const(&b)) {
        (Some(x), _) | (_, Some(x)) if x == ZERO => konst(ZERO),
        (Some(x), _) if x == ONE => b,
        (_, Some(y)) if y == ONE => a,
        (Some(x), Some(y)) => fold(x * y).unwrap_or_else(|| Arc::new(Node::Mul(a, b))),
        _ => Arc::new(Node::Mul(a, b)),
    }
}

pub(super) fn div(a: N, b: N) -> N {
    match (as_const(&a), as_const(&b)) {
        (_, Some(y)) if y == ONE => a,
        // 0/b stays symbolic so that b = 0 still raises at evaluation
        (Some(x), Some(y)) if y != ZERO => {
            fold(x / y).unwrap_or_else(|| Arc::new(Node::Div(a, b)))
        }
        _ => Arc::new(Node::Div(a, b)),
    }
}

pub(super) fn neg(a: N) -> N {
    match &*a {
        Node::Const(c) => konst(-*c),
        Node::Neg(inner) => inner.clone(),
        _ => Arc::new(Node::Neg(a)),
    }
}

fn pow(a: N, n: i32) -> N {
    match n {
        0 => konst(ONE),
        1 => a,
        _ => Arc::new(Node::Pow(a, n)),
    }
}

fn call(f: Func, a: N) -> N {
    Arc::new(Node::Call(f, a))
}

pub(super) fn derivative(node: &N) -> N {
    match &**node {
        Node::Const(_) => konst(ZERO),
        Node::Var => konst(ONE),
        Node::Add(a, b) => add(derivative(a), derivative(b)),
        Node::Sub(a, b) => sub(derivative(a), derivative(b)),
        Node::Mul(a, b) => add(
            mul(derivative(a), b.clone()),
            mul(a.clone(), derivative(b)),
        ),
        Node::Div(a, b) => {
            let da = derivative(a);
            let db = derivative(b);
            if as_const(&db) == Some(ZERO) {
                return div(da, b.clone());
            }
            // (a/b)' = a'/b - a b'/b^2
            sub(div(da, b.clone()), div(mul(a.clone(), db), pow(b.clone(), 2)))
        }
        Node::Neg(a) => neg(derivative(a)),
        Node::Pow(a, n) => {
            let n = *n;
            if n == 0 {
                return konst(ZERO);
            }
            // d(a^n) = n a^(n-1) a'
            let coeff = konst(Complex64::new(n as f64, 0.0));
            mul(mul(coeff, pow(a.clone(), n - 1)), derivative(a))
        }
        Node::Call(f, a) => {
            let da = derivative(a);
            if as_const(&da) == Some(ZERO) {
                return konst(ZERO);
            }
            let outer = match f {
                Func::Exp => node.clone(),
                Func::Log => div(konst(ONE), a.clone()),
                Func::Sin => call(Func::Cos, a.clone()),
                Func::Cos => neg(call(Func::Sin, a.clone())),
                Func::Sinh => call(Func::Cosh, a.clone()),
                Func::Cosh => call(Func::Sinh, a.clone()),
                Func::Sqrt => div(
                    konst(ONE),
                    mul(konst(Complex64::new(2.0, 0.0)), node.clone()),
                ),
            };
            mul(outer, da)
        }
    }
}
