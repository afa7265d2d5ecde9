//! Time-averaging of 2-forms along the lifted flow.

use crate::error::{Error, Result};
use crate::frame::{pullback_two_form, Axis, FramePoint, WForm};
use crate::jets::JetScalar;
use crate::quadrature::gauss_legendre;
use crate::szekeres::{flow_jet, ReebProfile};

pub const DEFAULT_QUAD_N: usize = 64;

/// `ω'(p) = ∫_ξ^{ξ+1} (Φ_t^* ω)(p) dt` with `Φ_t` the lifted time-`t` flow,
/// by `quad_n`-point Gauss-Legendre quadrature.
pub fn average_form<W: WForm + ?Sized>(
    omega: &W,
    profile: &ReebProfile,
    xi: f64,
    p: &FramePoint,
    quad_n: usize,
) -> Result<[f64; 3]> {
    if quad_n == 0 || !xi.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "averaging needs quad_n >= 1 and finite xi, got {quad_n} and {xi}"
        )));
    }
    let mut acc = [0.0; 3];
    for (t, w) in gauss_legendre(quad_n, xi, xi + 1.0) {
        let jet = flow_jet(profile, t, p.x0)?;
        let pulled = pullback_two_form(&jet, omega, p).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!("{msg} (flow time t = {t})")),
            other => other,
        })?;
        for i in 0..3 {
            acc[i] += w * pulled[i];
        }
    }
    Ok(acc)
}

/// The averaged form as a [`WForm`]. Values come from [`average_form`]; first
/// partials from central differences with relative step `step`.
pub struct AveragedForm<W> {
    omega: W,
    profile: ReebProfile,
    xi: f64,
    quad_n: usize,
    step: f64,
}

impl<W: WForm> AveragedForm<W> {
    pub fn new(omega: W, profile: ReebProfile, xi: f64, quad_n: usize) -> Self {
        Self {
            omega,
            profile,
            xi,
            quad_n,
            step: 1e-5,
        }
    }
}

impl<W: WForm> WForm for AveragedForm<W> {
    fn contains(&self, p: &FramePoint) -> bool {
        self.omega.contains(p)
    }

    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        let at = |q: &FramePoint| average_form(&self.omega, &self.profile, self.xi, q, self.quad_n);
        let v = at(p)?;
        match order {
            0 => Ok(v.map(|c| JetScalar::constant(c, 0).expect("order 0"))),
            1 => {
                let x = p.get(axis);
                let h = self.step * x.abs().max(1e-3);
                let hi = at(&p.with(axis, x + h))?;
                let lo = at(&p.with(axis, x - h))?;
                let mut out = [JetScalar::constant(0.0, 1)?; 3];
                for i in 0..3 {
                    out[i] = JetScalar::from_derivatives(&[v[i], (hi[i] - lo[i]) / (2.0 * h)])?;
                }
                Ok(out)
            }
            _ => Err(Error::InvalidArgument(format!(
                "averaged forms support jets of order <= 1, requested {order}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FnForm;
    use crate::gvl::witness::{ClosedWitness, WitnessDomain};

    #[test]
    fn witness_is_fixed_by_averaging() {
        let alpha = 2.0;
        let profile = ReebProfile::positive(alpha).unwrap();
        let w = ClosedWitness::with_domain(alpha, WitnessDomain::Plateau).unwrap();
        let p = FramePoint::new(0.4, 0.2, -0.3);
        let avg = average_form(&w, &profile, 0.0, &p, 16).unwrap();
        let orig = w.coefficients(&p).unwrap();
        for i in 0..3 {
            assert!((avg[i] - orig[i]).abs() <= 1e-7, "{avg:?} vs {orig:?}");
        }
    }

    #[test]
    fn domain_error_names_flow_time() {
        let profile = ReebProfile::positive(1.0).unwrap();
        let w = FnForm::zero().with_domain(|p| p.x0 > 0.45);
        let err = average_form(&w, &profile, 0.0, &FramePoint::new(0.5, 0.0, 0.0), 8).unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains("flow time t =")),
            other => panic!("{other:?}"),
        }
    }
}
