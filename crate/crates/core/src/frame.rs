//! Second-order frame coordinates over a one-dimensional base.
//!
//! A point of the frame space (after the O(1) quotient) is written
//! `(x0, x1, x2)` with `x0 = z0`, `x1 = ln|z1|`, `x2 = z2 / z1^2`, where
//! `z0, z1, z2` are the value and first two derivatives of a 2-jet. A local
//! diffeomorphism `f` of the base lifts to
//!
//! ```text
//! (x0, x1, x2) -> (f(x0), x1 + ln|f'(x0)|, x2 / f'(x0) + f''(x0) / f'(x0)^2)
//! ```
//!
//! 2-forms are stored by their coefficient triple `W = (A, B, C)` in
//! `ω = A dx2∧dx1 + B dx0∧dx2 + C dx1∧dx0`, i.e. `ω = i_W(dx2∧dx1∧dx0)`, so
//! that `dω = (div W) dx2∧dx1∧dx0`.

use crate::error::{Error, Result};
use crate::jets::JetScalar;
use crate::szekeres::FieldJet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl FramePoint {
    pub const fn new(x0: f64, x1: f64, x2: f64) -> Self {
        Self { x0, x1, x2 }
    }

    /// Like [`FramePoint::new`] but rejects non-finite coordinates.
    pub fn checked(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        if x0.is_finite() && x1.is_finite() && x2.is_finite() {
            Ok(Self { x0, x1, x2 })
        } else {
            Err(Error::Domain(format!(
                "frame point ({x0}, {x1}, {x2}) has a non-finite coordinate"
            )))
        }
    }

    pub fn from_coords(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x0, self.x1, self.x2]
    }

    /// Image under the lift of `x -> -x`: `(-x0, x1, -x2)`.
    pub fn mirrored(&self) -> Self {
        Self::new(-self.x0, self.x1, -self.x2)
    }

    pub fn with(&self, axis: Axis, value: f64) -> Self {
        let mut c = self.coords();
        c[axis.index()] = value;
        Self::from_coords(c)
    }

    pub fn get(&self, axis: Axis) -> f64 {
        self.coords()[axis.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X0,
    X1,
    X2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X0, Axis::X1, Axis::X2];

    pub fn index(self) -> usize {
        match self {
            Axis::X0 => 0,
            Axis::X1 => 1,
            Axis::X2 => 2,
        }
    }
}

/// Coordinates of `p` as jets, with `axis` as the seed variable.
pub fn seed_point(p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
    let c = p.coords();
    let mut out = [JetScalar::constant(0.0, order)?; 3];
    for (i, a) in Axis::ALL.into_iter().enumerate() {
        out[i] = if a == axis {
            JetScalar::variable(c[i], order)?
        } else {
            JetScalar::constant(c[i], order)?
        };
    }
    Ok(out)
}

/// Third-order jet of a base map `f` at `at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapJet {
    pub at: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl MapJet {
    pub const fn new(at: f64, value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self {
            at,
            value,
            d1,
            d2,
            d3,
        }
    }

    pub const fn identity(at: f64) -> Self {
        Self::new(at, at, 1.0, 0.0, 0.0)
    }

    /// Reads `f, f', f'', f'''` off a jet seeded at `at` (missing orders are zero).
    pub fn from_jet(at: f64, jet: &JetScalar) -> Self {
        Self::new(
            at,
            jet.value(),
            jet.derivative(1),
            jet.derivative(2),
            jet.derivative(3),
        )
    }

    /// Jet of `outer ∘ self`; `outer` must be based at `self.value`.
    pub fn then(&self, outer: &MapJet) -> Result<MapJet> {
        if !same_base(outer.at, self.value) {
            return Err(Error::BasePointMismatch {
                jet: outer.at,
                point: self.value,
            });
        }
        let (a1, a2, a3) = (self.d1, self.d2, self.d3);
        let (b1, b2, b3) = (outer.d1, outer.d2, outer.d3);
        Ok(MapJet::new(
            self.at,
            outer.value,
            b1 * a1,
            b2 * a1 * a1 + b1 * a2,
            b3 * a1 * a1 * a1 + 3.0 * b2 * a1 * a2 + b1 * a3,
        ))
    }

    fn check_at(&self, p: &FramePoint) -> Result<()> {
        if self.d1 == 0.0 {
            return Err(Error::DegenerateJet);
        }
        if !same_base(self.at, p.x0) {
            return Err(Error::BasePointMismatch {
                jet: self.at,
                point: p.x0,
            });
        }
        Ok(())
    }
}

fn same_base(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Image of `p` under the lift of the map with jet `f`.
pub fn lift_map(f: &MapJet, p: &FramePoint) -> Result<FramePoint> {
    f.check_at(p)?;
    FramePoint::checked(
        f.value,
        p.x1 + f.d1.abs().ln(),
        p.x2 / f.d1 + f.d2 / (f.d1 * f.d1),
    )
}

/// Jacobian `∂y_i/∂x_j` of the lifted map at `p`, assembled analytically.
pub fn lift_jacobian(f: &MapJet, p: &FramePoint) -> Result<[[f64; 3]; 3]> {
    f.check_at(p)?;
    let (d1, d2, d3) = (f.d1, f.d2, f.d3);
    let d1sq = d1 * d1;
    Ok([
        [d1, 0.0, 0.0],
        [d2 / d1, 1.0, 0.0],
        [
            -p.x2 * d2 / d1sq + d3 / d1sq - 2.0 * d2 * d2 / (d1sq * d1),
            0.0,
            1.0 / d1,
        ],
    ])
}

pub fn determinant(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn adjugate(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut adj = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            adj[i][j] = sign * minor;
        }
    }
    adj
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Infinitesimal generator `U = (V, V', -x2 V' + V'')` of the lifted flow of `V`.
pub fn lift_generator(v: &FieldJet, p: &FramePoint) -> [f64; 3] {
    [v.v0, v.v1, -p.x2 * v.v1 + v.v2]
}

/// Values and first partials of `(A, B, C)` at a point; `grad[i][j] = ∂W_i/∂x_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormSample {
    pub values: [f64; 3],
    pub grad: [[f64; 3]; 3],
}

impl FormSample {
    pub fn divergence(&self) -> f64 {
        self.grad[0][0] + self.grad[1][1] + self.grad[2][2]
    }
}

/// A 2-form on frame coordinates given by its coefficient triple `(A, B, C)`.
///
/// Evaluation outside [`WForm::contains`] must return [`Error::Domain`].
pub trait WForm {
    fn contains(&self, p: &FramePoint) -> bool;

    /// `(A, B, C)` as jets along the coordinate line through `p` in direction `axis`.
    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]>;

    fn coefficients(&self, p: &FramePoint) -> Result<[f64; 3]> {
        let j = self.jets(p, Axis::X0, 0)?;
        Ok([j[0].value(), j[1].value(), j[2].value()])
    }

    fn sample(&self, p: &FramePoint) -> Result<FormSample> {
        let mut values = [0.0; 3];
        let mut grad = [[0.0; 3]; 3];
        for axis in Axis::ALL {
            let j = self.jets(p, axis, 1)?;
            for i in 0..3 {
                values[i] = j[i].value();
                grad[i][axis.index()] = j[i].derivative(1);
            }
        }
        Ok(FormSample { values, grad })
    }
}

impl<T: WForm + ?Sized> WForm for &T {
    fn contains(&self, p: &FramePoint) -> bool {
        (**self).contains(p)
    }
    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        (**self).jets(p, axis, order)
    }
    fn coefficients(&self, p: &FramePoint) -> Result<[f64; 3]> {
        (**self).coefficients(p)
    }
    fn sample(&self, p: &FramePoint) -> Result<FormSample> {
        (**self).sample(p)
    }
}

pub(crate) fn domain_error(p: &FramePoint, what: &str) -> Error {
    Error::Domain(format!("({}, {}, {}) {what}", p.x0, p.x1, p.x2))
}

/// `∂A/∂x0 + ∂B/∂x1 + ∂C/∂x2`, the coefficient of `dω` against `dx2∧dx1∧dx0`.
pub fn divergence<W: WForm + ?Sized>(omega: &W, p: &FramePoint) -> Result<f64> {
    let mut div = 0.0;
    for axis in Axis::ALL {
        let j = omega.jets(p, axis, 1)?;
        div += j[axis.index()].derivative(1);
    }
    Ok(div)
}

/// Coefficients at `p` of the pullback of `omega` under the lift of `f`.
///
/// With `ω = i_W vol` and `F* vol = det(J) vol` the pulled-back triple is
/// `adj(J) W(F(p))`.
pub fn pullback_two_form<W: WForm + ?Sized>(f: &MapJet, omega: &W, p: &FramePoint) -> Result<[f64; 3]> {
    let image = lift_map(f, p)?;
    if !omega.contains(&image) {
        return Err(domain_error(&image, "(lifted image) is outside the form's domain"));
    }
    let w = omega.coefficients(&image)?;
    let adj = adjugate(&lift_jacobian(f, p)?);
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|j| adj[i][j] * w[j]).sum();
    }
    Ok(out)
}

type JetFn = dyn Fn(&[JetScalar; 3]) -> std::result::Result<[JetScalar; 3], crate::jets::JetError>
    + Send
    + Sync;

/// A W-form defined by a jet-level closure, e.g. `W = (x0, 0, 0)`.
pub struct FnForm {
    f: Box<JetFn>,
    domain: Box<dyn Fn(&FramePoint) -> bool + Send + Sync>,
}

impl FnForm {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[JetScalar; 3]) -> std::result::Result<[JetScalar; 3], crate::jets::JetError>
            + Send
            + Sync
            + 'static,
    {
        Self {
            f: Box::new(f),
            domain: Box::new(|_| true),
        }
    }

    pub fn with_domain<D>(mut self, domain: D) -> Self
    where
        D: Fn(&FramePoint) -> bool + Send + Sync + 'static,
    {
        self.domain = Box::new(domain);
        self
    }

    pub fn zero() -> Self {
        Self::new(|x| {
            let z = JetScalar::constant(0.0, x[0].order())?;
            Ok([z; 3])
        })
    }
}

impl WForm for FnForm {
    fn contains(&self, p: &FramePoint) -> bool {
        (self.domain)(p)
    }

    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        if !self.contains(p) {
            return Err(domain_error(p, "is outside the form's domain"));
        }
        let x = seed_point(p, axis, order)?;
        Ok((self.f)(&x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_lift() {
        let p = FramePoint::new(1.0, 0.0, 1.0);
        assert_eq!(lift_map(&MapJet::identity(1.0), &p).unwrap(), p);
    }

    #[test]
    fn doubling_lift() {
        let f = MapJet::new(1.0, 2.0, 2.0, 0.0, 0.0);
        let q = lift_map(&f, &FramePoint::new(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(q.x0, 2.0);
        assert_relative_eq!(q.x1, 2f64.ln());
        assert_eq!(q.x2, 0.5);
    }

    #[test]
    fn square_lift() {
        let f = MapJet::new(1.0, 1.0, 2.0, 2.0, 0.0);
        let q = lift_map(&f, &FramePoint::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(q.x0, 1.0);
        assert_relative_eq!(q.x1, 2f64.ln());
        assert_eq!(q.x2, 0.5);
    }

    #[test]
    fn degenerate_and_mismatched_jets() {
        let p = FramePoint::new(1.0, 0.0, 0.0);
        assert_eq!(
            lift_map(&MapJet::new(1.0, 1.0, 0.0, 1.0, 0.0), &p),
            Err(Error::DegenerateJet)
        );
        assert!(matches!(
            lift_map(&MapJet::identity(2.0), &p),
            Err(Error::BasePointMismatch { .. })
        ));
    }

    #[test]
    fn generator_examples() {
        let zero = FieldJet::new(0.3, [0.0; 4]);
        assert_eq!(lift_generator(&zero, &FramePoint::new(0.3, 1.0, 2.0)), [0.0; 3]);
        // V(x) = x
        let lin = FieldJet::new(0.7, [0.7, 1.0, 0.0, 0.0]);
        assert_eq!(
            lift_generator(&lin, &FramePoint::new(0.7, 5.0, 2.5)),
            [0.7, 1.0, -2.5]
        );
        // V(x) = x^2 at 1
        let sq = FieldJet::new(1.0, [1.0, 2.0, 2.0, 0.0]);
        assert_eq!(
            lift_generator(&sq, &FramePoint::new(1.0, 0.0, 3.0)),
            [1.0, 2.0, -4.0]
        );
    }

    #[test]
    fn pullback_under_identity_and_doubling() {
        let omega = FnForm::new(|x| {
            let one = JetScalar::constant(1.0, x[0].order())?;
            let zero = JetScalar::constant(0.0, x[0].order())?;
            Ok([one, zero, zero])
        });
        let p = FramePoint::new(1.0, 0.3, -0.2);
        assert_eq!(
            pullback_two_form(&MapJet::identity(1.0), &omega, &p).unwrap(),
            [1.0, 0.0, 0.0]
        );
        let f = MapJet::new(1.0, 2.0, 2.0, 0.0, 0.0);
        let pb = pullback_two_form(&f, &omega, &p).unwrap();
        assert_eq!(pb, [0.5, 0.0, 0.0]);
    }

    #[test]
    fn pullback_domain_error() {
        let omega = FnForm::zero().with_domain(|p| p.x0 < 1.5);
        let f = MapJet::new(1.0, 2.0, 2.0, 0.0, 0.0);
        let err = pullback_two_form(&f, &omega, &FramePoint::new(1.0, 0.0, 0.0));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn divergence_of_simple_fields() {
        let lin = FnForm::new(|x| {
            let z = JetScalar::constant(0.0, x[0].order())?;
            Ok([x[0], z, z])
        });
        for p in [FramePoint::new(0.2, 1.0, -3.0), FramePoint::new(-4.0, 0.0, 0.0)] {
            assert_eq!(divergence(&lin, &p).unwrap(), 1.0);
            assert_eq!(divergence(&FnForm::zero(), &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn lift_jacobian_has_unit_determinant() {
        let f = MapJet::new(0.4, 0.9, 1.7, -3.0, 11.0);
        let j = lift_jacobian(&f, &FramePoint::new(0.4, 2.0, -1.0)).unwrap();
        assert_relative_eq!(determinant(&j), 1.0, max_relative = 1e-15);
        let adj = adjugate(&j);
        // J adj(J) = det(J) I
        for i in 0..3 {
            for k in 0..3 {
                let s: f64 = (0..3).map(|m| j[i][m] * adj[m][k]).sum();
                assert_relative_eq!(s, if i == k { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }
}
