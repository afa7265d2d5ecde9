use thiserror::Error;

use crate::jets::JetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("map jet is degenerate: f'(x0) = 0")]
    DegenerateJet,
    #[error("map jet is based at x0 = {jet} but the frame point has x0 = {point}")]
    BasePointMismatch { jet: f64, point: f64 },
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("flow of x = {x} for t = {t} is not bracketable within [{lo}, {hi}] (attempted [{bracket_lo}, {bracket_hi}])")]
    Range {
        t: f64,
        x: f64,
        lo: f64,
        hi: f64,
        bracket_lo: f64,
        bracket_hi: f64,
    },
    #[error("quadrature did not converge: estimate {estimate}, error {error}, {panels} panels")]
    Quadrature {
        estimate: f64,
        error: f64,
        panels: usize,
    },
    #[error("ODE oracle cannot resolve motion at x = {0}: the field underflows to zero")]
    OracleUnderflow(f64),
    #[error("power-law fit failed: {0}")]
    Fit(String),
    #[error("one-sided limit of {component} diverges on the {side} side of x0 = 0")]
    DivergentLimit { component: char, side: &'static str },
    #[error("invalid sequence: {0}")]
    Sequence(String),
    #[error("candidate grid: {0}")]
    Grid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
