//! Truncated Taylor jets in a single seed variable.
//!
//! A [`JetScalar`] carries a value together with its derivatives up to a fixed
//! order (at most [`MAX_ORDER`]). Arithmetic propagates the derivatives exactly,
//! so every formula built from jets yields analytic derivatives to floating
//! precision.
//!
//! Internally the coefficients are kept normalized (divided by `k!`) because the
//! product and composition recurrences are simplest in that form; the public
//! accessors always return true derivatives.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Highest derivative order a jet can carry.
pub const MAX_ORDER: usize = 4;

const LEN: usize = MAX_ORDER + 1;

const FACTORIAL: [f64; LEN] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooHigh(usize),
    #[error("operands have different jet orders ({left} and {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogNonPositive(f64),
    #[error("logarithm of |x| at x = 0")]
    AbsLogZero,
    #[error("real power of non-positive base {0}")]
    PowNonPositive(f64),
    #[error("jet evaluation produced a non-finite coefficient")]
    NonFinite,
}

/// Value and derivatives `f, f', ..., f^(order)` of a scalar quantity.
#[derive(Clone, Copy, PartialEq)]
pub struct JetScalar {
    order: usize,
    // normalized Taylor coefficients f^(k) / k!
    taylor: [f64; LEN],
}

impl fmt::Debug for JetScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetScalar")
            .field("order", &self.order)
            .field("derivatives", &self.derivatives())
            .finish()
    }
}

impl JetScalar {
    pub fn constant(value: f64, order: usize) -> Result<Self, JetError> {
        check_order(order)?;
        let mut taylor = [0.0; LEN];
        taylor[0] = value;
        Ok(Self { order, taylor })
    }

    /// The seed variable itself: `(value, 1, 0, ...)`.
    pub fn variable(value: f64, order: usize) -> Result<Self, JetError> {
        let mut jet = Self::constant(value, order)?;
        if order >= 1 {
            jet.taylor[1] = 1.0;
        }
        Ok(jet)
    }

    /// Builds a jet from true derivatives `d[0] = f, d[1] = f', ...`.
    /// The order is `d.len() - 1`.
    pub fn from_derivatives(d: &[f64]) -> Result<Self, JetError> {
        if d.is_empty() {
            return Err(JetError::OrderTooHigh(0));
        }
        let order = d.len() - 1;
        check_order(order)?;
        let mut taylor = [0.0; LEN];
        for (k, &dk) in d.iter().enumerate() {
            taylor[k] = dk / FACTORIAL[k];
        }
        Ok(Self { order, taylor })
    }

    fn nan(order: usize) -> Self {
        Self { order, taylor: [f64::NAN; LEN] }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.taylor[0]
    }

    /// The k-th derivative; zero beyond the jet order.
    pub fn derivative(&self, k: usize) -> f64 {
        if k > self.order {
            0.0
        } else {
            self.taylor[k] * FACTORIAL[k]
        }
    }

    pub fn derivatives(&self) -> Vec<f64> {
        (0..=self.order).map(|k| self.derivative(k)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.taylor[..=self.order].iter().all(|c| c.is_finite())
    }

    /// The same quantity truncated to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut taylor = [0.0; LEN];
        taylor[..=order].copy_from_slice(&self.taylor[..=order]);
        Self { order, taylor }
    }

    fn with_taylor(order: usize, taylor: [f64; LEN]) -> Result<Self, JetError> {
        let jet = Self { order, taylor };
        if jet.is_finite() {
            Ok(jet)
        } else {
            Err(JetError::NonFinite)
        }
    }

    fn same_order(&self, other: &Self) -> Result<usize, JetError> {
        if self.order == other.order {
            Ok(self.order)
        } else {
            Err(JetError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, JetError> {
        let n = self.same_order(other)?;
        let mut t = [0.0; LEN];
        for k in 0..=n {
            t[k] = self.taylor[k] + other.taylor[k];
        }
        Self::with_taylor(n, t)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, JetError> {
        let n = self.same_order(other)?;
        let mut t = [0.0; LEN];
        for k in 0..=n {
            t[k] = self.taylor[k] - other.taylor[k];
        }
        Self::with_taylor(n, t)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, JetError> {
        let n = self.same_order(other)?;
        let mut t = [0.0; LEN];
        for k in 0..=n {
            t[k] = (0..=k).map(|i| self.taylor[i] * other.taylor[k - i]).sum();
        }
        Self::with_taylor(n, t)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, JetError> {
        let n = self.same_order(other)?;
        let b0 = other.taylor[0];
        if b0 == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let mut q = [0.0; LEN];
        for k in 0..=n {
            let s: f64 = (1..=k).map(|i| other.taylor[i] * q[k - i]).sum();
            q[k] = (self.taylor[k] - s) / b0;
        }
        Self::with_taylor(n, q)
    }

    pub fn recip(&self) -> Result<Self, JetError> {
        Self::constant(1.0, self.order)?.try_div(self)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut t = self.taylor;
        for c_k in t.iter_mut().take(self.order + 1) {
            *c_k *= c;
        }
        Self { order: self.order, taylor: t }
    }

    pub fn offset(&self, c: f64) -> Self {
        let mut t = self.taylor;
        t[0] += c;
        Self { order: self.order, taylor: t }
    }

    pub fn exp(&self) -> Result<Self, JetError> {
        let n = self.order;
        let a = &self.taylor;
        let mut e = [0.0; LEN];
        e[0] = a[0].exp();
        for k in 1..=n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Self::with_taylor(n, e)
    }

    pub fn ln(&self) -> Result<Self, JetError> {
        let a0 = self.taylor[0];
        if !(a0 > 0.0) {
            return Err(JetError::LogNonPositive(a0));
        }
        self.log_unchecked()
    }

    /// `ln|x|`, defined for nonzero values of either sign.
    pub fn abs_ln(&self) -> Result<Self, JetError> {
        let a0 = self.taylor[0];
        if a0 == 0.0 {
            return Err(JetError::AbsLogZero);
        }
        if a0 > 0.0 {
            self.log_unchecked()
        } else {
            (-*self).log_unchecked()
        }
    }

    fn log_unchecked(&self) -> Result<Self, JetError> {
        let n = self.order;
        let a = &self.taylor;
        let mut l = [0.0; LEN];
        l[0] = a[0].ln();
        for k in 1..=n {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Self::with_taylor(n, l)
    }

    /// Real power `x^r` on the positive branch.
    pub fn powf(&self, r: f64) -> Result<Self, JetError> {
        let n = self.order;
        let a = &self.taylor;
        if !(a[0] > 0.0) {
            return Err(JetError::PowNonPositive(a[0]));
        }
        let mut p = [0.0; LEN];
        p[0] = a[0].powf(r);
        for k in 1..=n {
            let s: f64 = (1..=k)
                .map(|j| ((r + 1.0) * j as f64 - k as f64) * a[j] * p[k - j])
                .sum();
            p[k] = s / (k as f64 * a[0]);
        }
        Self::with_taylor(n, p)
    }

    /// Composes an outer function, given by its derivatives at `self.value()`,
    /// with this jet (Faà di Bruno). Missing outer derivatives count as zero.
    pub fn compose(&self, outer: &[f64]) -> Result<Self, JetError> {
        let n = self.order;
        let mut delta = *self;
        delta.taylor[0] = 0.0;
        // Horner in delta: sum_k outer[k]/k! * delta^k
        let top = outer.len().min(n + 1);
        let mut acc = Self::constant(0.0, n)?;
        for k in (0..top).rev() {
            acc = acc.try_mul(&delta)?.offset(outer[k] / FACTORIAL[k]);
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(JetError::NonFinite)
        }
    }
}

fn check_order(order: usize) -> Result<(), JetError> {
    if order > MAX_ORDER {
        Err(JetError::OrderTooHigh(order))
    } else {
        Ok(())
    }
}

// Operator sugar for jets built in a single context. Mixed orders are a
// programming error here; use the `try_*` methods when orders may differ.
macro_rules! jet_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for JetScalar {
            type Output = JetScalar;
            fn $method(self, rhs: JetScalar) -> JetScalar {
                match self.$checked(&rhs) {
                    Ok(j) => j,
                    Err(JetError::OrderMismatch { left, right }) => {
                        panic!("jet operands must share one order ({left} vs {right})")
                    }
                    // IEEE semantics for operator sugar; checked methods report instead
                    Err(_) => JetScalar::nan(self.order),
                }
            }
        }
        impl $trait<f64> for JetScalar {
            type Output = JetScalar;
            fn $method(self, rhs: f64) -> JetScalar {
                let c = JetScalar::constant(rhs, self.order).expect("order already checked");
                $trait::$method(self, c)
            }
        }
        impl $trait<JetScalar> for f64 {
            type Output = JetScalar;
            fn $method(self, rhs: JetScalar) -> JetScalar {
                let c = JetScalar::constant(self, rhs.order).expect("order already checked");
                $trait::$method(c, rhs)
            }
        }
    };
}

jet_binop!(Add, add, try_add);
jet_binop!(Sub, sub, try_sub);
jet_binop!(Mul, mul, try_mul);
jet_binop!(Div, div, try_div);

impl Neg for JetScalar {
    type Output = JetScalar;
    fn neg(self) -> JetScalar {
        self.scale(-1.0)
    }
}

/// Elementary expressions in one variable, evaluated by [`jet_eval`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    AbsLn(Box<Expr>),
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn var() -> Self {
        Expr::Var
    }

    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }

    pub fn ln(self) -> Self {
        Expr::Ln(Box::new(self))
    }

    pub fn abs_ln(self) -> Self {
        Expr::AbsLn(Box::new(self))
    }

    pub fn powf(self, r: f64) -> Self {
        Expr::Pow(Box::new(self), r)
    }

    fn jet(&self, x: &JetScalar) -> Result<JetScalar, JetError> {
        let n = x.order();
        Ok(match self {
            Expr::Var => *x,
            Expr::Const(c) => JetScalar::constant(*c, n)?,
            Expr::Add(a, b) => a.jet(x)?.try_add(&b.jet(x)?)?,
            Expr::Sub(a, b) => a.jet(x)?.try_sub(&b.jet(x)?)?,
            Expr::Mul(a, b) => a.jet(x)?.try_mul(&b.jet(x)?)?,
            Expr::Div(a, b) => a.jet(x)?.try_div(&b.jet(x)?)?,
            Expr::Neg(a) => -a.jet(x)?,
            Expr::Exp(a) => a.jet(x)?.exp()?,
            Expr::Ln(a) => a.jet(x)?.ln()?,
            Expr::AbsLn(a) => a.jet(x)?.abs_ln()?,
            Expr::Pow(a, r) => a.jet(x)?.powf(*r)?,
        })
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl $trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Evaluates `expr` and its derivatives up to `order` at `seed`.
pub fn jet_eval(expr: &Expr, seed: f64, order: usize) -> Result<JetScalar, JetError> {
    let x = JetScalar::variable(seed, order)?;
    expr.jet(&x)
}
