//! The smooth cutoff `ν` and the `(Φ, Ψ)` pairs feeding the general witness.

use crate::error::Result;
use crate::jets::JetScalar;

use super::ucoords::UCoords;

fn sigma(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `ν(t) = σ(t) / (σ(t) + σ(1 - t))` with `σ(t) = e^{-1/t}` for `t > 0`, else 0.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let (a, b) = (sigma(t), sigma(1.0 - t));
        a / (a + b)
    }
}

/// `ν'(t)`; zero outside `(0, 1)`.
pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let (a, b) = (sigma(t), sigma(1.0 - t));
    let (da, db) = (a / (t * t), b / ((1.0 - t) * (1.0 - t)));
    (da * b + a * db) / ((a + b) * (a + b))
}

/// `ν(s)` and `ν'(s)` as jets for `s` strictly inside `(0, 1)`.
fn smooth_step_jets(s: &JetScalar) -> Result<(JetScalar, JetScalar)> {
    let sig = |t: &JetScalar| -> Result<JetScalar> { Ok(t.recip()?.scale(-1.0).exp()?) };
    let r = (-*s).offset(1.0);
    let a = sig(s)?;
    let b = sig(&r)?;
    let da = a.try_div(&s.try_mul(s)?)?;
    let db = b.try_div(&r.try_mul(&r)?)?;
    let sum = a.try_add(&b)?;
    let nu = a.try_div(&sum)?;
    let dnu = da
        .try_mul(&b)?
        .try_add(&a.try_mul(&db)?)?
        .try_div(&sum.try_mul(&sum)?)?;
    Ok((nu, dnu))
}

/// `Φ`, `Ψ` and the u-partials of `Ψ`, all as jets in the seed variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiPsiJets {
    pub phi: JetScalar,
    pub psi: JetScalar,
    pub psi_u1: JetScalar,
    pub psi_u2: JetScalar,
}

impl PhiPsiJets {
    pub fn zero(order: usize) -> Result<Self> {
        let z = JetScalar::constant(0.0, order)?;
        Ok(Self {
            phi: z,
            psi: z,
            psi_u1: z,
            psi_u2: z,
        })
    }
}

/// A pair of smooth functions `Φ(u1, u2)`, `Ψ(u1, u2)` with analytic `Ψ` partials.
pub trait PhiPsi {
    fn eval(&self, u1: &JetScalar, u2: &JetScalar) -> Result<PhiPsiJets>;
}

/// `Φ = Ψ = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPhiPsi;

impl PhiPsi for ZeroPhiPsi {
    fn eval(&self, u1: &JetScalar, _u2: &JetScalar) -> Result<PhiPsiJets> {
        PhiPsiJets::zero(u1.order())
    }
}

/// The standard pair on `Π = {u1 > 0, u2 < 0}`, with `s = -2 u1 u2 e^{u1} - 1`
/// and `L = ((α+1)/α) ln u1 + 1 - ln|u2|`:
///
/// ```text
/// Φ = -(α+1) ν(s) / (α u1 u2),    Ψ = u2 L ν(s)
/// ```
///
/// Both vanish off `Π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardPhiPsi {
    pub alpha: f64,
}

impl PhiPsi for StandardPhiPsi {
    fn eval(&self, u1: &JetScalar, u2: &JetScalar) -> Result<PhiPsiJets> {
        let n = u1.order();
        if !(u1.value() > 0.0 && u2.value() < 0.0) {
            return PhiPsiJets::zero(n);
        }
        let a = self.alpha;
        let ln_u1 = u1.ln()?;
        let ln_neg_u2 = (-*u2).ln()?;
        // s + 1 = 2 exp(ln u1 + ln(-u2) + u1), formed in logs to avoid overflow
        let s_plus = ln_u1.try_add(&ln_neg_u2)?.try_add(u1)?.exp()?.scale(2.0);
        let s = s_plus.offset(-1.0);
        if s.value() <= 0.0 {
            return PhiPsiJets::zero(n);
        }
        let (nu, dnu) = if s.value() >= 1.0 {
            (JetScalar::constant(1.0, n)?, JetScalar::constant(0.0, n)?)
        } else {
            smooth_step_jets(&s)?
        };
        let u1u2 = u1.try_mul(u2)?;
        let phi = nu.scale(-(a + 1.0) / a).try_div(&u1u2)?;
        let l = ln_u1.scale((a + 1.0) / a).offset(1.0).try_sub(&ln_neg_u2)?;
        let u2l = u2.try_mul(&l)?;
        let psi = u2l.try_mul(&nu)?;
        // ∂s/∂u1 = (s+1)(1+u1)/u1 and ∂s/∂u2 = (s+1)/u2
        let psi_u1 = u2
            .try_div(u1)?
            .scale((a + 1.0) / a)
            .try_mul(&nu)?
            .try_add(
                &u2l.try_mul(&dnu)?
                    .try_mul(&s_plus)?
                    .try_mul(&u1.offset(1.0))?
                    .try_div(u1)?,
            )?;
        let psi_u2 = l
            .offset(-1.0)
            .try_mul(&nu)?
            .try_add(&l.try_mul(&dnu)?.try_mul(&s_plus)?)?;
        Ok(PhiPsiJets {
            phi,
            psi,
            psi_u1,
            psi_u2,
        })
    }
}

/// `(Φ, Ψ)` of the standard pair at `u`.
pub fn phi_psi_standard(alpha: f64, u: UCoords) -> Result<(f64, f64)> {
    let j = StandardPhiPsi { alpha }.eval(
        &JetScalar::constant(u.u1, 0)?,
        &JetScalar::constant(u.u2, 0)?,
    )?;
    Ok((j.phi.value(), j.psi.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn smooth_step_examples() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert_eq!(smooth_step(0.5), 0.5);
        let (t, h) = (0.3, 1e-6);
        let fd = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
        assert_relative_eq!(smooth_step_derivative(t), fd, max_relative = 1e-8);
    }

    #[test]
    fn smooth_step_jets_agree_with_scalars() {
        let s = JetScalar::variable(0.37, 1).unwrap();
        let (nu, dnu) = smooth_step_jets(&s).unwrap();
        assert_relative_eq!(nu.value(), smooth_step(0.37), max_relative = 1e-15);
        assert_relative_eq!(nu.derivative(1), smooth_step_derivative(0.37), max_relative = 1e-13);
        assert_relative_eq!(dnu.value(), smooth_step_derivative(0.37), max_relative = 1e-13);
    }

    #[test]
    fn standard_pair_off_pi_is_zero() {
        assert_eq!(phi_psi_standard(1.0, UCoords { u1: -1.0, u2: 1.0 }).unwrap(), (0.0, 0.0));
        assert_eq!(phi_psi_standard(2.0, UCoords { u1: 1.0, u2: 0.5 }).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn standard_pair_on_plateau() {
        let u = UCoords {
            u1: 10.0,
            u2: -100.0 * (-10.0f64).exp(),
        };
        let (phi, psi) = phi_psi_standard(1.0, u).unwrap();
        assert_relative_eq!(phi, 10f64.exp() / 500.0, max_relative = 1e-14);
        assert_relative_eq!(psi, -1100.0 * (-10.0f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn transition_region_is_damped() {
        // s = 0.5 at u1 = 1: u2 = -1.5 / (2 e)
        let u = UCoords {
            u1: 1.0,
            u2: -1.5 / (2.0 * 1f64.exp()),
        };
        assert_relative_eq!(u.nu_argument(), 0.5, max_relative = 1e-14);
        let (phi, _) = phi_psi_standard(2.0, u).unwrap();
        let uncut = -3.0 / (2.0 * u.u1 * u.u2);
        assert!(phi > 0.0 && phi < uncut);
        assert_relative_eq!(phi, 0.5 * uncut, max_relative = 1e-14);
    }

    #[test]
    fn psi_partials_match_jet_differentiation() {
        let alpha = 1.5;
        let provider = StandardPhiPsi { alpha };
        // one point in the cutoff transition, one on the plateau
        for (u1, u2) in [(1.0, -0.3), (2.0, -0.5), (0.8, -1.2)] {
            let j = provider
                .eval(
                    &JetScalar::constant(u1, 0).unwrap(),
                    &JetScalar::constant(u2, 0).unwrap(),
                )
                .unwrap();
            let d1 = provider
                .eval(
                    &JetScalar::variable(u1, 1).unwrap(),
                    &JetScalar::constant(u2, 1).unwrap(),
                )
                .unwrap()
                .psi
                .derivative(1);
            let d2 = provider
                .eval(
                    &JetScalar::constant(u1, 1).unwrap(),
                    &JetScalar::variable(u2, 1).unwrap(),
                )
                .unwrap()
                .psi
                .derivative(1);
            assert_relative_eq!(j.psi_u1.value(), d1, max_relative = 1e-12);
            assert_relative_eq!(j.psi_u2.value(), d2, max_relative = 1e-12);
        }
    }
}
