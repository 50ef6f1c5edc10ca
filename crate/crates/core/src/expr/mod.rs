//! Closed-form holomorphic expressions in one complex variable `z`.
//!
//! Expressions are the input language for Weierstrass data. They parse from
//! the grammar below, evaluate at complex points and differentiate
//! symbolically with respect to `z`.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := number | 'i' | 'pi' | 'z' | func '(' expr ')' | '(' expr ')' | '-' base
//! func   := exp | log | sin | cos | sinh | cosh | sqrt
//! ```
//!
//! Note that unary minus binds tighter than `^`: `-z^2` is `(-z)^2`.
//! `log` and `sqrt` use the principal branch (cut along the negative real
//! axis); evaluating them close to the cut raises a warning flag.

mod diff;
mod parse;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub use parse::{ParseError, ParseErrorKind};

/// Relative distance to the negative real axis below which `log`/`sqrt`
/// arguments are reported as sitting on the branch cut.
pub const BRANCH_CUT_WARNING: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn has_branch_cut(self) -> bool {
        matches!(self, Func::Log | Func::Sqrt)
    }

    fn apply(self, w: Complex64) -> Complex64 {
        match self {
            Func::Exp => w.exp(),
            Func::Log => w.ln(),
            Func::Sin => w.sin(),
            Func::Cos => w.cos(),
            Func::Sinh => w.sinh(),
            Func::Cosh => w.cosh(),
            Func::Sqrt => w.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Const(Complex64),
    Var,
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Neg(Arc<Node>),
    Pow(Arc<Node>, i32),
    Call(Func, Arc<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at z = {z}")]
    DivisionByZero { z: Complex64 },
    #[error("non-finite value at z = {z}")]
    NonFinite { z: Complex64 },
}

/// A value together with the branch-cut warning flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub near_branch_cut: bool,
}

/// Parsed expression. Cheap to clone; immutable and `Send + Sync`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Arc<Node>,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Expression, ParseError> {
        parse::parse(source).map(|root| Expression { root: Arc::new(root) })
    }

    pub fn constant(value: Complex64) -> Expression {
        Expression {
            root: Arc::new(Node::Const(value)),
        }
    }

    pub fn variable() -> Expression {
        Expression {
            root: Arc::new(Node::Var),
        }
    }

    pub(crate) fn from_node(node: Arc<Node>) -> Expression {
        Expression { root: node }
    }

    /// Symbolic derivative with respect to `z`.
    pub fn differentiate(&self) -> Expression {
        Expression {
            root: diff::derivative(&self.root),
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.evaluate_flagged(z).map(|e| e.value)
    }

    pub fn evaluate_flagged(&self, z: Complex64) -> Result<Evaluation, EvalError> {
        let mut near_branch_cut = false;
        let value = eval_node(&self.root, z, &mut near_branch_cut)?;
        Ok(Evaluation {
            value,
            near_branch_cut,
        })
    }

    /// `self * factor`, folding constants.
    pub fn scale(&self, factor: Complex64) -> Expression {
        Expression {
            root: diff::mul(Arc::new(Node::Const(factor)), self.root.clone()),
        }
    }

    pub fn is_constant(&self) -> bool {
        !contains_var(&self.root)
    }

    pub fn add(&self, other: &Expression) -> Expression {
        Expression::from_node(diff::add(self.root.clone(), other.root.clone()))
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        Expression::from_node(diff::sub(self.root.clone(), other.root.clone()))
    }

    pub fn mul(&self, other: &Expression) -> Expression {
        Expression::from_node(diff::mul(self.root.clone(), other.root.clone()))
    }

    pub fn div(&self, other: &Expression) -> Expression {
        Expression::from_node(diff::div(self.root.clone(), other.root.clone()))
    }

    pub fn recip(&self) -> Expression {
        Expression::constant(Complex64::new(1.0, 0.0)).div(self)
    }
}

fn contains_var(node: &Node) -> bool {
    match node {
        Node::Const(_) => false,
        Node::Var => true,
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            contains_var(a) || contains_var(b)
        }
        Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => contains_var(a),
    }
}

fn finite(v: Complex64, z: Complex64) -> Result<Complex64, EvalError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { z })
    }
}

fn eval_node(node: &Node, z: Complex64, flag: &mut bool) -> Result<Complex64, EvalError> {
    let v = match node {
        Node::Const(c) => *c,
        Node::Var => z,
        Node::Add(a, b) => eval_node(a, z, flag)? + eval_node(b, z, flag)?,
        Node::Sub(a, b) => eval_node(a, z, flag)? - eval_node(b, z, flag)?,
        Node::Mul(a, b) => eval_node(a, z, flag)? * eval_node(b, z, flag)?,
        Node::Div(a, b) => {
            let num = eval_node(a, z, flag)?;
            let den = eval_node(b, z, flag)?;
            if den == Complex64::new(0.0, 0.0) {
                return Err(EvalError::DivisionByZero { z });
            }
            num / den
        }
        Node::Neg(a) => -eval_node(a, z, flag)?,
        Node::Pow(a, n) => {
            let base = eval_node(a, z, flag)?;
            if *n < 0 && base == Complex64::new(0.0, 0.0) {
                return Err(EvalError::DivisionByZero { z });
            }
            base.powi(*n)
        }
        Node::Call(f, a) => {
            let w = eval_node(a, z, flag)?;
            if f.has_branch_cut() && w.re < 0.0 && w.im.abs() <= BRANCH_CUT_WARNING * w.norm() {
                *flag = true;
            }
            f.apply(w)
        }
    };
    finite(v, z)
}

fn fmt_complex(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (c.re == 0.0, c.im == 0.0) {
        (_, true) => {
            if c.re.is_sign_negative() {
                write!(f, "(-{:e})", -c.re)
            } else {
                write!(f, "{:e}", c.re)
            }
        }
        (true, false) => {
            if c.im.is_sign_negative() {
                write!(f, "(-{:e}*i)", -c.im)
            } else {
                write!(f, "({:e}*i)", c.im)
            }
        }
        (false, false) => {
            let sign = if c.im.is_sign_negative() { '-' } else { '+' };
            write!(f, "({:e} {} {:e}*i)", c.re, sign, c.im.abs())
        }
    }
}

fn fmt_node(node: &Node, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Node::Const(c) => fmt_complex(*c, f),
        Node::Var => write!(f, "z"),
        Node::Add(a, b) => bin(f, a, " + ", b),
        Node::Sub(a, b) => bin(f, a, " - ", b),
        Node::Mul(a, b) => bin(f, a, "*", b),
        Node::Div(a, b) => bin(f, a, "/", b),
        Node::Neg(a) => {
            write!(f, "(-")?;
            fmt_node(a, f)?;
            write!(f, ")")
        }
        Node::Pow(a, n) => {
            write!(f, "(")?;
            fmt_node(a, f)?;
            write!(f, ")^{n}")
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            fmt_node(a, f)?;
            write!(f, ")")
        }
    }
}

fn bin(f: &mut fmt::Formatter<'_>, a: &Node, op: &str, b: &Node) -> fmt::Result {
    write!(f, "(")?;
    fmt_node(a, f)?;
    write!(f, "{op}")?;
    fmt_node(b, f)?;
    write!(f, ")")
}

/// Prints a fully parenthesized form that parses back to an equivalent tree.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(&self.root, f)
    }
}

impl std::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ev(src: &str, z: Complex64) -> Complex64 {
        Expression::parse(src).unwrap().evaluate(z).unwrap()
    }

    #[test]
    fn spec_examples_parse_and_evaluate() {
        assert_eq!(ev("z", c(2.5, -1.0)), c(2.5, -1.0));
        assert_eq!(ev("(1/2)*(1/z - z)", c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(ev("exp(i*z)", c(0.0, 0.0)), c(1.0, 0.0));
        let v = ev("1/z", c(0.0, 1.0));
        assert!((v - c(0.0, -1.0)).norm() < 1e-16);
        assert_eq!(ev("z^2", c(1.0, 1.0)), c(0.0, 2.0));
        assert_eq!(ev("cosh(z)", c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        let d = |src: &str, z: Complex64| Expression::parse(src).unwrap().differentiate().evaluate(z).unwrap();
        assert_eq!(d("z^2", c(3.0, 0.0)), c(6.0, 0.0));
        assert!((d("exp(i*z)", c(0.0, 0.0)) - c(0.0, 1.0)).norm() < 1e-16);
        assert_eq!(d("1/z", c(2.0, 0.0)), c(-0.25, 0.0));
    }

    #[test]
    fn reserved_constants() {
        assert_eq!(ev("i*i", c(0.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(ev("pi", c(0.0, 0.0)), c(std::f64::consts::PI, 0.0));
    }

    #[test]
    fn unary_minus_binds_tighter_than_power() {
        assert_eq!(ev("-z^2", c(3.0, 0.0)), c(9.0, 0.0));
        assert_eq!(ev("0-z^2", c(3.0, 0.0)), c(-9.0, 0.0));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let e = Expression::parse("1/z").unwrap();
        assert!(matches!(e.evaluate(c(0.0, 0.0)), Err(EvalError::DivisionByZero { .. })));
        let e = Expression::parse("z^-2").unwrap();
        assert!(matches!(e.evaluate(c(0.0, 0.0)), Err(EvalError::DivisionByZero { .. })));
    }

    #[test]
    fn log_of_zero_is_non_finite() {
        let e = Expression::parse("log(z)").unwrap();
        assert!(matches!(e.evaluate(c(0.0, 0.0)), Err(EvalError::NonFinite { .. })));
    }

    #[test]
    fn branch_cut_flag() {
        let e = Expression::parse("sqrt(z)").unwrap();
        assert!(e.evaluate_flagged(c(-1.0, 0.0)).unwrap().near_branch_cut);
        assert!(e.evaluate_flagged(c(-1.0, 1e-12)).unwrap().near_branch_cut);
        assert!(!e.evaluate_flagged(c(-1.0, 1e-3)).unwrap().near_branch_cut);
        assert!(!e.evaluate_flagged(c(1.0, 0.0)).unwrap().near_branch_cut);
        let e = Expression::parse("log(z)").unwrap();
        let r = e.evaluate_flagged(c(1.0, 0.0)).unwrap();
        assert!(!r.near_branch_cut);
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "(1/2)*(1/z - z)",
            "-i*(1 + z^2)/(2*z^2)",
            "exp(i*z) - 3.25e-3*sqrt(z + 2)",
            "-z^2",
            "z^-3 + (1+2*i)*cosh(z)",
            "log(z)*sin(pi*z)",
        ] {
            let e = Expression::parse(src).unwrap();
            let printed = e.to_string();
            let back = Expression::parse(&printed).unwrap();
            for z in [c(0.3, 0.7), c(-1.1, 0.2), c(2.0, -0.5)] {
                assert_eq!(e.evaluate(z).unwrap(), back.evaluate(z).unwrap(), "{src} vs {printed}");
            }
        }
    }

    #[test]
    fn evaluation_is_deterministic() {
        let e = Expression::parse("exp(sin(z))/(z^3 + cosh(z))").unwrap();
        let z = c(0.123, -0.456);
        let a = e.evaluate(z).unwrap();
        let b = e.evaluate(z).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn expressions_are_thread_safe() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Expression>();
    }
}
