//! Explicit solutions `W = (A, B, C)` of the invariance PDE system with `div W = 1`.
//!
//! [`GeneralWitness`] builds `W` from any `(Φ, Ψ)` pair through the
//! u-coordinates:
//!
//! ```text
//! A = -V Φ,   B = u1 - ∂Ψ/∂u2 - V' Φ,   C = -(1/V) ∂Ψ/∂u1 + (x2 V' - V'') Φ
//! ```
//!
//! For the standard pair on the plateau `ν = 1` this reduces to the closed form
//! in [`ClosedWitness`], which needs no field values and so stays evaluable all
//! the way down to the boundary plane.

use crate::error::{Error, Result};
use crate::frame::{domain_error, seed_point, Axis, FramePoint, WForm};
use crate::jets::JetScalar;
use crate::szekeres::{field_jet, ReebProfile};

use super::cutoff::{PhiPsi, StandardPhiPsi};
use super::ucoords::{domain_bound, in_guard, nu_log_margin};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha must be a positive finite real, got {alpha}"
        )))
    }
}

pub struct GeneralWitness<P> {
    profile: ReebProfile,
    provider: P,
}

impl<P: PhiPsi> GeneralWitness<P> {
    pub fn new(profile: ReebProfile, provider: P) -> Self {
        Self { profile, provider }
    }
}

impl GeneralWitness<StandardPhiPsi> {
    /// The standard pair for the positive field of the given `α`.
    pub fn standard(alpha: f64) -> Result<Self> {
        Ok(Self::new(
            ReebProfile::positive(alpha)?,
            StandardPhiPsi { alpha },
        ))
    }
}

/// Below this `|V|` the u-coordinates still exist mathematically, but `1/V` and
/// products of field values leave the `f64` range.
pub const MIN_FIELD: f64 = 1.4916681462400413e-154;

impl<P: PhiPsi> WForm for GeneralWitness<P> {
    /// `|V(x0)| >= MIN_FIELD`, which excludes the boundary plane and the
    /// numerically flat region next to it.
    fn contains(&self, p: &FramePoint) -> bool {
        field_jet(&self.profile, p.x0).v0.abs() >= MIN_FIELD && p.x1.is_finite() && p.x2.is_finite()
    }

    /// Jets up to order 1: the field is known through `V'''` only.
    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        if !self.contains(p) {
            return Err(domain_error(
                p,
                "has |V(x0)| below the representable range of the u-coordinates",
            ));
        }
        if order > 1 {
            return Err(Error::InvalidArgument(format!(
                "general witness supports jets of order <= 1, requested {order}"
            )));
        }
        let [x0, x1, x2] = seed_point(p, axis, order)?;
        let v = field_jet(&self.profile, p.x0).derivatives();
        let v0 = x0.compose(&v)?;
        let v1 = x0.compose(&v[1..])?;
        let v2 = x0.compose(&v[2..])?;
        let u1 = x1.try_sub(&v0.abs_ln()?)?;
        let u2 = v1.try_sub(&x2.try_mul(&v0)?)?;
        let pp = self.provider.eval(&u1, &u2)?;
        let a = -v0.try_mul(&pp.phi)?;
        let b = u1.try_sub(&pp.psi_u2)?.try_sub(&v1.try_mul(&pp.phi)?)?;
        let c = x2
            .try_mul(&v1)?
            .try_sub(&v2)?
            .try_mul(&pp.phi)?
            .try_sub(&pp.psi_u1.try_div(&v0)?)?;
        Ok([a, b, c])
    }
}

/// Where the closed form is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessDomain {
    /// `0 < x0 < 1/a(x1, x2)`, the region where the closed form is guaranteed.
    Guard,
    /// Every point with `x0 > 0` whose cutoff argument exceeds 1. Invariant
    /// under the lifted flow, and contains the guard region.
    Plateau,
}

/// `(A, B, C)` of the closed form, with `P = 1 + x0^α x1`, `Q = α - x0^{α+1} x2`
/// and `D = α P Q`:
///
/// ```text
/// A = (α+1) x0^{2α+1} / D
/// B = x1 + ln Q - (1 + 1/α) ln P + (α+1) x0^α / (P Q)
/// C = (α+1)(α x0^α x2 - x0^{2α+1} x2² - α(α+1) x0^{α-1}) / D
/// ```
pub fn closed_components(alpha: f64, x: &[JetScalar; 3]) -> Result<[JetScalar; 3]> {
    let [x0, x1, x2] = x;
    let a1 = alpha + 1.0;
    let xa = x0.powf(alpha)?;
    let xam1 = x0.powf(alpha - 1.0)?;
    let x2a1 = x0.powf(2.0 * alpha + 1.0)?;
    let p = xa.try_mul(x1)?.offset(1.0);
    let q = (-xa.try_mul(x0)?.try_mul(x2)?).offset(alpha);
    let pq = p.try_mul(&q)?;
    let d = pq.scale(alpha);
    let a = x2a1.scale(a1).try_div(&d)?;
    let b = x1
        .try_add(&q.ln()?)?
        .try_sub(&p.ln()?.scale(1.0 + 1.0 / alpha))?
        .try_add(&xa.scale(a1).try_div(&pq)?)?;
    let c_num = xa
        .try_mul(x2)?
        .scale(alpha)
        .try_sub(&x2a1.try_mul(x2)?.try_mul(x2)?)?
        .try_sub(&xam1.scale(alpha * a1))?;
    let c = c_num.scale(a1).try_div(&d)?;
    Ok([a, b, c])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedWitness {
    alpha: f64,
    domain: WitnessDomain,
}

impl ClosedWitness {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_domain(alpha, WitnessDomain::Guard)
    }

    pub fn with_domain(alpha: f64, domain: WitnessDomain) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, domain })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn domain(&self) -> WitnessDomain {
        self.domain
    }
}

impl WForm for ClosedWitness {
    fn contains(&self, p: &FramePoint) -> bool {
        match self.domain {
            WitnessDomain::Guard => in_guard(self.alpha, p),
            WitnessDomain::Plateau => nu_log_margin(self.alpha, p).is_some_and(|m| m > 0.0),
        }
    }

    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        if !self.contains(p) {
            let what = match self.domain {
                WitnessDomain::Guard => format!(
                    "violates the guard 0 < x0 < 1/a(x1, x2) = {}",
                    1.0 / domain_bound(self.alpha, p.x1, p.x2)
                ),
                WitnessDomain::Plateau => {
                    "is outside the plateau where the cutoff argument exceeds 1".to_string()
                }
            };
            return Err(domain_error(p, &what));
        }
        closed_components(self.alpha, &seed_point(p, axis, order)?)
    }
}

/// The closed witness on `x0 > 0` glued to its mirror image on `x0 < 0`:
/// `A(p) = -A(Rp)`, `B(p) = B(Rp)`, `C(p) = -C(Rp)` with `R(x0, x1, x2) = (-x0, x1, -x2)`.
/// The boundary plane itself is excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectedWitness {
    inner: ClosedWitness,
}

impl ReflectedWitness {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            inner: ClosedWitness::new(alpha)?,
        })
    }

    pub fn with_domain(alpha: f64, domain: WitnessDomain) -> Result<Self> {
        Ok(Self {
            inner: ClosedWitness::with_domain(alpha, domain)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.inner.alpha
    }
}

impl WForm for ReflectedWitness {
    fn contains(&self, p: &FramePoint) -> bool {
        if p.x0 < 0.0 {
            self.inner.contains(&p.mirrored())
        } else {
            self.inner.contains(p)
        }
    }

    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        if p.x0 >= 0.0 {
            return self.inner.jets(p, axis, order);
        }
        if !self.contains(p) {
            return Err(domain_error(
                p,
                "mirrors to a point outside the closed witness domain",
            ));
        }
        let [x0, x1, x2] = seed_point(p, axis, order)?;
        let [a, b, c] = closed_components(self.inner.alpha, &[-x0, x1, -x2])?;
        Ok([-a, b, -c])
    }
}

/// `W` from the general construction with the standard pair at `p`.
pub fn witness_general<P: PhiPsi>(alpha: f64, provider: P, p: &FramePoint) -> Result<[f64; 3]> {
    GeneralWitness::new(ReebProfile::positive(alpha)?, provider).coefficients(p)
}

/// The closed form at an in-guard point.
pub fn witness_closed(alpha: f64, p: &FramePoint) -> Result<[f64; 3]> {
    ClosedWitness::new(alpha)?.coefficients(p)
}

/// The mirrored closed form at a point with `x0 < 0`.
pub fn witness_reflected(alpha: f64, p: &FramePoint) -> Result<[f64; 3]> {
    if !(p.x0 < 0.0) {
        return Err(domain_error(p, "is not on the negative side x0 < 0"));
    }
    ReflectedWitness::new(alpha)?.coefficients(p)
}
