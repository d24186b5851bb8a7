//! Expression trees over the single variable `t`, with exact symbolic
//! first derivatives.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use super::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Atan,
    /// Continuous inverse cotangent with range (0, π).
    Acot,
    Sqrt,
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Acot => "acot",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "atan" => Func::Atan,
            "acot" => Func::Acot,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => return None,
        })
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Atan => x.atan(),
            Func::Acot => FRAC_PI_2 - x.atan(),
            Func::Sqrt => x.sqrt(),
            Func::Exp => x.exp(),
            Func::Log => {
                if x > 0.0 {
                    x.ln()
                } else {
                    f64::NAN
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// A tabulated function applied to `arg`; `order` selects the
    /// derivative of the local cubic interpolant.
    Table {
        table: Arc<Table>,
        order: u8,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::call(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::call(Func::Cos, arg)
    }

    /// Constant value, if the tree does not depend on `t`.
    pub fn constant_value(&self) -> Option<f64> {
        if self.depends_on_var() {
            None
        } else {
            Some(self.eval(0.0))
        }
    }

    pub fn depends_on_var(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_var(),
            Expr::Table { arg, .. } => arg.depends_on_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_var() || b.depends_on_var()
            }
        }
    }

    pub fn contains_table(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::Var => false,
            Expr::Table { .. } => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.contains_table(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.contains_table() || b.contains_table()
            }
        }
    }

    /// Raw evaluation; undefined operations yield NaN or ±∞.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => t,
            Expr::Pi => PI,
            Expr::Neg(a) => -a.eval(t),
            Expr::Add(a, b) => a.eval(t) + b.eval(t),
            Expr::Sub(a, b) => a.eval(t) - b.eval(t),
            Expr::Mul(a, b) => a.eval(t) * b.eval(t),
            Expr::Div(a, b) => a.eval(t) / b.eval(t),
            Expr::Pow(a, b) => a.eval(t).powf(b.eval(t)),
            Expr::Call(f, a) => f.apply(a.eval(t)),
            Expr::Table { table, order, arg } => table.eval(arg.eval(t), *order),
        }
    }

    /// Exact symbolic derivative with respect to `t`.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Pi => Expr::Num(0.0),
            Expr::Var => Expr::Num(1.0),
            Expr::Neg(a) => neg(a.derivative()),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => {
                // (a'b − ab') / b²
                let num = sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                );
                div(num, pow((**b).clone(), Expr::Num(2.0)))
            }
            Expr::Pow(a, b) => pow_derivative(a, b),
            Expr::Call(f, a) => {
                let inner = a.derivative();
                let u = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::cos(u),
                    Func::Cos => neg(Expr::sin(u)),
                    Func::Tan => div(Expr::Num(1.0), pow(Expr::cos(u), Expr::Num(2.0))),
                    Func::Atan => div(Expr::Num(1.0), add(Expr::Num(1.0), pow(u, Expr::Num(2.0)))),
                    Func::Acot => neg(div(Expr::Num(1.0), add(Expr::Num(1.0), pow(u, Expr::Num(2.0))))),
                    Func::Sqrt => div(Expr::Num(1.0), mul(Expr::Num(2.0), Expr::call(Func::Sqrt, u))),
                    Func::Exp => Expr::call(Func::Exp, u),
                    Func::Log => div(Expr::Num(1.0), u),
                };
                mul(outer, inner)
            }
            Expr::Table { table, order, arg } => mul(
                Expr::Table {
                    table: Arc::clone(table),
                    order: order.saturating_add(1),
                    arg: arg.clone(),
                },
                arg.derivative(),
            ),
        }
    }

    /// Replaces every occurrence of `t` with `replacement`.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        let sub_box = |e: &Expr| Box::new(e.substitute(replacement));
        match self {
            Expr::Var => replacement.clone(),
            Expr::Num(_) | Expr::Pi => self.clone(),
            Expr::Neg(a) => Expr::Neg(sub_box(a)),
            Expr::Add(a, b) => Expr::Add(sub_box(a), sub_box(b)),
            Expr::Sub(a, b) => Expr::Sub(sub_box(a), sub_box(b)),
            Expr::Mul(a, b) => Expr::Mul(sub_box(a), sub_box(b)),
            Expr::Div(a, b) => Expr::Div(sub_box(a), sub_box(b)),
            Expr::Pow(a, b) => Expr::Pow(sub_box(a), sub_box(b)),
            Expr::Call(f, a) => Expr::Call(*f, sub_box(a)),
            Expr::Table { table, order, arg } => Expr::Table {
                table: Arc::clone(table),
                order: *order,
                arg: sub_box(arg),
            },
        }
    }
}

fn pow_derivative(a: &Expr, b: &Expr) -> Expr {
    let base = a.clone();
    let exponent = b.clone();
    match (a.depends_on_var(), b.depends_on_var()) {
        (_, false) => {
            // n a^(n−1) a'
            let n = exponent;
            let reduced = sub(n.clone(), Expr::Num(1.0));
            mul(mul(n, pow(base, reduced)), a.derivative())
        }
        (false, true) => mul(
            mul(pow(base.clone(), exponent), Expr::call(Func::Log, base)),
            b.derivative(),
        ),
        (true, true) => {
            // a^b (b' ln a + b a'/a)
            let log_term = mul(b.derivative(), Expr::call(Func::Log, base.clone()));
            let ratio_term = div(mul(exponent.clone(), a.derivative()), base.clone());
            mul(pow(base, exponent), add(log_term, ratio_term))
        }
    }
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

pub(crate) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => Expr::Num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        _ if is_num(&a, -1.0) => neg(b),
        _ if is_num(&b, -1.0) => neg(a),
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&b, 1.0) => a,
        _ if is_num(&a, 0.0) && !is_num(&b, 0.0) => Expr::Num(0.0),
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn pow(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&b, 1.0) => a,
        _ if is_num(&b, 0.0) => Expr::Num(1.0),
        _ => Expr::Pow(Box::new(a), Box::new(b)),
    }
}

/// Fully parenthesized source form; for table-free trees the output
/// parses back to an equal-valued expression.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => write!(f, "(-{:?})", -v),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("t"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Table { table, order, arg } => {
                write!(f, "table{}", "'".repeat(*order as usize))?;
                write!(f, "[{} samples]({arg})", table.len())
            }
        }
    }
}
