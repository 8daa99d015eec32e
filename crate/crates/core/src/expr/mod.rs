//! Closed-form scalar expressions over chart coordinates.
//!
//! Metrics, lapses and vector fields are all built from [`Expr`] trees, either
//! programmatically (fixtures) or by parsing a restricted arithmetic grammar
//! (configuration files). Evaluation is generic over [`Scalar`], so the same
//! tree yields values and exact derivatives.

mod parse;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

pub use parse::{parse_expr, ParseContext};

use crate::autodiff::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
}

#[derive(Debug)]
enum Node {
    Const(f64),
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Expr),
    Div(Expr, Expr),
    Pow(Expr, f64),
    Apply(Func, Expr),
    Atan2(Expr, Expr),
}

/// Shared, immutable expression tree.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn constant(value: f64) -> Self {
        Self::node(Node::Const(value))
    }

    pub fn var(index: usize) -> Self {
        Self::node(Node::Var(index))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// Constant value when the tree has no variables at its root.
    pub fn as_constant(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    pub fn powf(&self, exponent: f64) -> Self {
        if exponent == 1.0 {
            return self.clone();
        }
        if exponent == 0.0 {
            return Self::one();
        }
        if let Some(c) = self.as_constant() {
            return Self::constant(c.pow_real(exponent));
        }
        Self::node(Node::Pow(self.clone(), exponent))
    }

    fn apply(&self, func: Func) -> Self {
        if let Some(c) = self.as_constant() {
            return Self::constant(match func {
                Func::Sqrt => c.sqrt(),
                Func::Exp => c.exp(),
                Func::Ln => c.ln(),
                Func::Sin => c.sin(),
                Func::Cos => c.cos(),
            });
        }
        Self::node(Node::Apply(func, self.clone()))
    }

    pub fn sqrt(&self) -> Self {
        self.apply(Func::Sqrt)
    }

    pub fn exp(&self) -> Self {
        self.apply(Func::Exp)
    }

    pub fn ln(&self) -> Self {
        self.apply(Func::Ln)
    }

    pub fn sin(&self) -> Self {
        self.apply(Func::Sin)
    }

    pub fn cos(&self) -> Self {
        self.apply(Func::Cos)
    }

    pub fn atan2(&self, x: &Expr) -> Self {
        if let (Some(a), Some(b)) = (self.as_constant(), x.as_constant()) {
            return Self::constant(a.atan2(b));
        }
        Self::node(Node::Atan2(self.clone(), x.clone()))
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Self {
        let mut constant = 0.0;
        let mut rest = Vec::new();
        for term in terms {
            match *term.0 {
                Node::Const(c) => constant += c,
                Node::Add(ref inner) => rest.extend(inner.iter().cloned()),
                _ => rest.push(term),
            }
        }
        if constant != 0.0 {
            rest.push(Self::constant(constant));
        }
        match rest.len() {
            0 => Self::zero(),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Add(rest)),
        }
    }

    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Self {
        let mut constant = 1.0;
        let mut rest = Vec::new();
        for factor in factors {
            match *factor.0 {
                Node::Const(c) => constant *= c,
                Node::Mul(ref inner) => rest.extend(inner.iter().cloned()),
                _ => rest.push(factor),
            }
        }
        if constant == 0.0 {
            return Self::zero();
        }
        if constant != 1.0 {
            rest.insert(0, Self::constant(constant));
        }
        match rest.len() {
            0 => Self::one(),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Mul(rest)),
        }
    }

    /// Evaluates the tree at `vars`, generic over the number type.
    pub fn eval<S: Scalar>(&self, vars: &[S]) -> S {
        match &*self.0 {
            Node::Const(c) => S::from_f64(*c),
            Node::Var(i) => vars[*i],
            Node::Add(terms) => {
                let mut acc = terms[0].eval(vars);
                for t in &terms[1..] {
                    acc += t.eval(vars);
                }
                acc
            }
            Node::Mul(factors) => {
                let mut acc = factors[0].eval(vars);
                for f in &factors[1..] {
                    acc *= f.eval(vars);
                }
                acc
            }
            Node::Neg(a) => -a.eval(vars),
            Node::Div(a, b) => a.eval(vars) / b.eval(vars),
            Node::Pow(a, p) => a.eval(vars).pow_real(*p),
            Node::Apply(func, a) => {
                let v = a.eval(vars);
                match func {
                    Func::Sqrt => v.sqrt(),
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                }
            }
            Node::Atan2(y, x) => y.eval(vars).atan2(x.eval(vars)),
        }
    }

    /// Replaces every variable `i` by `replacements[i]`.
    pub fn substitute(&self, replacements: &[Expr]) -> Expr {
        match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Var(i) => replacements[*i].clone(),
            Node::Add(terms) => Expr::sum(terms.iter().map(|t| t.substitute(replacements))),
            Node::Mul(factors) => {
                Expr::product(factors.iter().map(|f| f.substitute(replacements)))
            }
            Node::Neg(a) => -a.substitute(replacements),
            Node::Div(a, b) => a.substitute(replacements) / b.substitute(replacements),
            Node::Pow(a, p) => a.substitute(replacements).powf(*p),
            Node::Apply(func, a) => a.substitute(replacements).apply(*func),
            Node::Atan2(y, x) => y.substitute(replacements).atan2(&x.substitute(replacements)),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match &*self.0 {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Add(v) | Node::Mul(v) => v.iter().filter_map(Expr::max_var).max(),
            Node::Neg(a) | Node::Pow(a, _) | Node::Apply(_, a) => a.max_var(),
            Node::Div(a, b) | Node::Atan2(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

impl From<f64> for Expr {
    fn from(value: f64) -> Self {
        Expr::constant(value)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        if let Some(c) = rhs.as_constant() {
            return self * Expr::constant(1.0 / c);
        }
        if self.is_zero() {
            return Expr::zero();
        }
        Expr::node(Node::Div(self, rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        if let Some(c) = self.as_constant() {
            return Expr::constant(-c);
        }
        if let Node::Neg(ref inner) = *self.0 {
            return inner.clone();
        }
        Expr::node(Node::Neg(self))
    }
}

macro_rules! scalar_rhs_ops {
    ($($trait:ident $method:ident),*) => {
        $(
            impl $trait<f64> for Expr {
                type Output = Expr;
                fn $method(self, rhs: f64) -> Expr {
                    $trait::$method(self, Expr::constant(rhs))
                }
            }
            impl $trait<Expr> for f64 {
                type Output = Expr;
                fn $method(self, rhs: Expr) -> Expr {
                    $trait::$method(Expr::constant(self), rhs)
                }
            }
        )*
    };
}

scalar_rhs_ops!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{i}"),
            Node::Add(terms) => {
                write!(f, "(")?;
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Node::Mul(factors) => {
                for (k, t) in factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Node::Neg(a) => write!(f, "-({a})"),
            Node::Div(a, b) => write!(f, "({a})/({b})"),
            Node::Pow(a, p) => write!(f, "({a})^{p}"),
            Node::Apply(func, a) => write!(f, "{}({a})", format!("{func:?}").to_lowercase()),
            Node::Atan2(y, x) => write!(f, "atan2({y}, {x})"),
        }
    }
}

/// Euclidean radius `sqrt(x0² + … + x_{n-1}²)` over the first `n` variables.
pub fn euclidean_radius(n: usize) -> Expr {
    Expr::sum((0..n).map(|i| Expr::var(i).powf(2.0))).sqrt()
}
