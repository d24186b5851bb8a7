//! Scalar profile functions θ, α, β, γ of the ruling parameter and the
//! surface profile that bundles them.

mod expr;
mod file;
mod parse;
mod table;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use expr::{Expr, Func};
pub use file::ProfileDocument;
pub use table::Table;

use crate::error::{Error, Result};
use crate::tolerances::PERIODICITY_TOL;

pub(crate) use expr::{add, mul, sub};

/// A C² function of `t` with exact first derivative.
///
/// Backed by an expression tree whose derivative tree is built once at
/// construction. Tabulated samples enter the tree as a leaf node, so
/// parsed and sampled data compose freely.
#[derive(Clone, Debug)]
pub struct ProfileFunction {
    name: String,
    expr: Expr,
    derivative: Expr,
}

impl PartialEq for ProfileFunction {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl ProfileFunction {
    pub fn from_expr(expr: Expr) -> Self {
        let derivative = expr.derivative();
        Self {
            name: "f".into(),
            expr,
            derivative,
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        parse::parse(src).map(Self::from_expr)
    }

    pub fn constant(value: f64) -> Self {
        Self::from_expr(Expr::Num(value))
    }

    /// The identity `t`.
    pub fn identity() -> Self {
        Self::from_expr(Expr::Var)
    }

    /// `slope·t + intercept`.
    pub fn affine(slope: f64, intercept: f64) -> Self {
        Self::from_expr(add(mul(Expr::Num(slope), Expr::Var), Expr::Num(intercept)))
    }

    pub fn tabulated(ts: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        let table = Table::new(ts, fs)?;
        Ok(Self::from_expr(Expr::Table {
            table: Arc::new(table),
            order: 0,
            arg: Box::new(Expr::Var),
        }))
    }

    /// Samples `f` on `n` evenly spaced points of `[lo, hi]`.
    pub fn sample<F>(f: F, lo: f64, hi: f64, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let n = n.max(Table::MIN_SAMPLES);
        let ts: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let fs = ts.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::tabulated(ts, fs)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.derivative
    }

    /// The underlying table when this function is exactly a sampled table.
    pub fn as_table(&self) -> Option<&Table> {
        match &self.expr {
            Expr::Table { table, order: 0, arg } if **arg == Expr::Var => Some(table),
            _ => None,
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        self.expr.constant_value()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = self.expr.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.domain_error(t))
        }
    }

    pub fn eval_with_derivative(&self, t: f64) -> Result<(f64, f64)> {
        let v = self.eval(t)?;
        let d = self.derivative.eval(t);
        if d.is_finite() {
            Ok((v, d))
        } else {
            Err(self.domain_error(t))
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Expr) -> Self {
        Self::from_expr(self.expr.substitute(inner)).named(self.name.clone())
    }

    /// `self + c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self::from_expr(add(self.expr.clone(), Expr::Num(c))).named(self.name.clone())
    }

    fn domain_error(&self, t: f64) -> Error {
        Error::Domain {
            function: self.name.clone(),
            t,
        }
    }
}

impl fmt::Display for ProfileFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// Serialized as the expression source, or as `{"samples": [[t, f], ...]}`
/// for a bare table.
impl Serialize for ProfileFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        file::FunctionSource::from(self).serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidProfile(format!("[{min}, {max}] is not a valid interval")));
        }
        Ok(Self { min, max })
    }

    pub fn len(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    /// `n ≥ 2` evenly spaced points including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.max
                } else {
                    self.min + self.len() * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Band,
    Annulus,
}

/// The four profile functions of a ruled surface
/// `X(s, t) = (s sinθ + α, −s cosθ + β, s(β sinθ + α cosθ) + γ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceProfile {
    pub theta: ProfileFunction,
    pub alpha: ProfileFunction,
    pub beta: ProfileFunction,
    pub gamma: ProfileFunction,
    pub t_range: Interval,
    pub s_range: Interval,
    pub topology: Topology,
}

/// Point values and first derivatives of all four profiles at one `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileValues {
    pub theta: (f64, f64),
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub gamma: (f64, f64),
}

impl SurfaceProfile {
    const DOMAIN_PROBES: usize = 65;

    pub fn new(
        theta: ProfileFunction,
        alpha: ProfileFunction,
        beta: ProfileFunction,
        gamma: ProfileFunction,
        t_range: Interval,
        s_range: Interval,
        topology: Topology,
    ) -> Result<Self> {
        let profile = Self {
            theta: theta.named("theta"),
            alpha: alpha.named("alpha"),
            beta: beta.named("beta"),
            gamma: gamma.named("gamma"),
            t_range,
            s_range,
            topology,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Builds α, β from the (δ, ξ) decomposition:
    /// `(α, β) = δ (cosθ, sinθ) + ξ (sinθ, −cosθ)`.
    pub fn from_delta_xi(
        theta: ProfileFunction,
        delta: ProfileFunction,
        xi: ProfileFunction,
        gamma: ProfileFunction,
        t_range: Interval,
        s_range: Interval,
        topology: Topology,
    ) -> Result<Self> {
        let th = theta.expr().clone();
        let (d, x) = (delta.expr().clone(), xi.expr().clone());
        let alpha = add(mul(d.clone(), Expr::cos(th.clone())), mul(x.clone(), Expr::sin(th.clone())));
        let beta = sub(mul(d, Expr::sin(th.clone())), mul(x, Expr::cos(th)));
        Self::new(
            theta,
            ProfileFunction::from_expr(alpha),
            ProfileFunction::from_expr(beta),
            gamma,
            t_range,
            s_range,
            topology,
        )
    }

    pub fn functions(&self) -> [&ProfileFunction; 4] {
        [&self.theta, &self.alpha, &self.beta, &self.gamma]
    }

    pub fn values(&self, t: f64) -> Result<ProfileValues> {
        Ok(ProfileValues {
            theta: self.theta.eval_with_derivative(t)?,
            alpha: self.alpha.eval_with_derivative(t)?,
            beta: self.beta.eval_with_derivative(t)?,
            gamma: self.gamma.eval_with_derivative(t)?,
        })
    }

    pub fn with_ranges(&self, t_range: Interval, s_range: Interval) -> Result<Self> {
        Self::new(
            self.theta.clone(),
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            t_range,
            s_range,
            self.topology,
        )
    }

    fn validate(&self) -> Result<()> {
        for t in self.t_range.linspace(Self::DOMAIN_PROBES) {
            self.values(t)?;
        }
        if self.topology == Topology::Annulus {
            let (a, b) = (self.t_range.min, self.t_range.max);
            for f in self.functions() {
                let (va, da) = f.eval_with_derivative(a)?;
                let (vb, db) = f.eval_with_derivative(b)?;
                // θ only matters modulo 2π: the ruling direction is (sinθ, −cosθ).
                let gap = if f.name() == "theta" {
                    let d = (vb - va) / TAU;
                    (d - d.round()).abs() * TAU
                } else {
                    (vb - va).abs()
                };
                if gap > PERIODICITY_TOL || (db - da).abs() > PERIODICITY_TOL {
                    return Err(Error::InvalidProfile(format!(
                        "annulus topology requires `{}` to be periodic on [{a}, {b}]",
                        f.name()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Reduces an angle to `[0, π)`; the second value is `true` when an odd
/// multiple of π was removed.
pub fn reduce_mod_pi(theta: f64) -> (f64, bool) {
    let k = (theta / PI).floor();
    let mut reduced = theta - k * PI;
    let mut k = k as i64;
    if reduced >= PI {
        reduced -= PI;
        k += 1;
    }
    if reduced < 0.0 {
        reduced += PI;
        k -= 1;
    }
    (reduced, k.rem_euclid(2) == 1)
}
