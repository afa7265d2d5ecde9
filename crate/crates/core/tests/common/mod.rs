//! Reference implementations used as oracles by the integration tests. Nothing
//! here calls into the library's numerics.

#![allow(dead_code)]

use rand::Rng;
use reeb_gvl::jets::Expr;

/// Expression tree with symbolic differentiation.
#[derive(Debug, Clone)]
pub enum Sym {
    X,
    C(f64),
    Add(Box<Sym>, Box<Sym>),
    Sub(Box<Sym>, Box<Sym>),
    Mul(Box<Sym>, Box<Sym>),
    Div(Box<Sym>, Box<Sym>),
    Neg(Box<Sym>),
    Exp(Box<Sym>),
    /// `ln|u|`
    Ln(Box<Sym>),
    Pow(Box<Sym>, f64),
}

use Sym::*;

fn b(s: Sym) -> Box<Sym> {
    Box::new(s)
}

impl Sym {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            X => x,
            C(c) => *c,
            Add(a, c) => a.eval(x) + c.eval(x),
            Sub(a, c) => a.eval(x) - c.eval(x),
            Mul(a, c) => a.eval(x) * c.eval(x),
            Div(a, c) => a.eval(x) / c.eval(x),
            Neg(a) => -a.eval(x),
            Exp(a) => a.eval(x).exp(),
            Ln(a) => a.eval(x).abs().ln(),
            Pow(a, r) => a.eval(x).powf(*r),
        }
    }

    pub fn diff(&self) -> Sym {
        match self {
            X => C(1.0),
            C(_) => C(0.0),
            Add(a, c) => Add(b(a.diff()), b(c.diff())),
            Sub(a, c) => Sub(b(a.diff()), b(c.diff())),
            Mul(a, c) => Add(
                b(Mul(b(a.diff()), c.clone())),
                b(Mul(a.clone(), b(c.diff()))),
            ),
            Div(a, c) => Div(
                b(Sub(
                    b(Mul(b(a.diff()), c.clone())),
                    b(Mul(a.clone(), b(c.diff()))),
                )),
                b(Mul(c.clone(), c.clone())),
            ),
            Neg(a) => Neg(b(a.diff())),
            Exp(a) => Mul(b(self.clone()), b(a.diff())),
            Ln(a) => Div(b(a.diff()), a.clone()),
            Pow(a, r) => Mul(
                b(Mul(b(C(*r)), b(Pow(a.clone(), r - 1.0)))),
                b(a.diff()),
            ),
        }
    }

    pub fn nth(&self, k: usize) -> Sym {
        (0..k).fold(self.clone(), |s, _| s.diff())
    }

    /// The same expression in the library's representation.
    pub fn to_expr(&self) -> Expr {
        match self {
            X => Expr::var(),
            C(c) => Expr::constant(*c),
            Add(a, c) => a.to_expr() + c.to_expr(),
            Sub(a, c) => a.to_expr() - c.to_expr(),
            Mul(a, c) => a.to_expr() * c.to_expr(),
            Div(a, c) => a.to_expr() / c.to_expr(),
            Neg(a) => -a.to_expr(),
            Exp(a) => a.to_expr().exp(),
            Ln(a) => a.to_expr().abs_ln(),
            Pow(a, r) => a.to_expr().powf(*r),
        }
    }

    /// Every subexpression is finite at `x`, logs see nonzero arguments and
    /// powers see positive bases.
    pub fn well_posed(&self, x: f64) -> bool {
        let ok = self.eval(x).is_finite();
        ok && match self {
            X | C(_) => true,
            Add(a, c) | Sub(a, c) | Mul(a, c) => a.well_posed(x) && c.well_posed(x),
            Div(a, c) => a.well_posed(x) && c.well_posed(x) && c.eval(x).abs() > 1e-3,
            Neg(a) | Exp(a) => a.well_posed(x),
            Ln(a) => a.well_posed(x) && a.eval(x).abs() > 1e-3,
            Pow(a, _) => a.well_posed(x) && a.eval(x) > 1e-3,
        }
    }
}

pub fn random_sym<R: Rng>(rng: &mut R, depth: u32) -> Sym {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.6) {
            X
        } else {
            C(rng.gen_range(-2.0..2.0))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => Add(b(random_sym(rng, d)), b(random_sym(rng, d))),
        1 => Sub(b(random_sym(rng, d)), b(random_sym(rng, d))),
        2 | 3 => Mul(b(random_sym(rng, d)), b(random_sym(rng, d))),
        4 => Div(b(random_sym(rng, d)), b(random_sym(rng, d))),
        5 => Neg(b(random_sym(rng, d))),
        6 => Exp(b(Mul(b(C(0.5)), b(random_sym(rng, d))))),
        7 => Ln(b(random_sym(rng, d))),
        _ => {
            let r = [2.0, 3.0, 0.5, -1.5, 1.7][rng.gen_range(0..5)];
            Pow(b(random_sym(rng, d)), r)
        }
    }
}

/// The positive Szekeres field `V = -exp(-x^-α)` as a symbolic expression.
pub fn szekeres_sym(alpha: f64) -> Sym {
    Neg(b(Exp(b(Neg(b(Pow(b(X), -alpha)))))))
}

/// `[V, V', V'', V''']` at `x` from symbolic differentiation.
pub fn field_derivatives(alpha: f64, x: f64) -> [f64; 4] {
    let v = szekeres_sym(alpha);
    [0, 1, 2, 3].map(|k| v.nth(k).eval(x))
}

/// `a(x1, x2)` such that the closed form is valid for `0 < x0 < 1/a`.
pub fn guard_bound(alpha: f64, x1: f64, x2: f64) -> f64 {
    let a = x1.abs() + (x2.abs() + (x1 * x2).abs() + (-x1).exp()) / alpha;
    if a > 1.0 {
        a
    } else {
        1.0
    }
}

/// The closed-form invariant coefficients `(A, B, C)` in plain f64.
pub fn closed_form(alpha: f64, x0: f64, x1: f64, x2: f64) -> [f64; 3] {
    let p = 1.0 + x0.powf(alpha) * x1;
    let q = alpha - x0.powf(alpha + 1.0) * x2;
    let d = alpha * p * q;
    let a = (alpha + 1.0) * x0.powf(2.0 * alpha + 1.0) / d;
    let bb = x1 + q.ln() - (1.0 + 1.0 / alpha) * p.ln() + (alpha + 1.0) * x0.powf(alpha) / (p * q);
    let c = (alpha + 1.0)
        * (alpha * x0.powf(alpha) * x2
            - x0.powf(2.0 * alpha + 1.0) * x2 * x2
            - alpha * (alpha + 1.0) * x0.powf(alpha - 1.0))
        / d;
    [a, bb, c]
}

/// Max over components of `|x - y| / max(1, |y|)`.
pub fn rel_gap(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    (0..3)
        .map(|i| (x[i] - y[i]).abs() / y[i].abs().max(1.0))
        .fold(0.0, f64::max)
}
