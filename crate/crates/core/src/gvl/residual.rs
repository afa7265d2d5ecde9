use crate::error::Result;
use crate::frame::{lift_generator, FramePoint, WForm};
use crate::szekeres::SzekeresField;

/// Residuals `(r1, r2, r3)` of the invariance system for `W` under the lifted
/// flow of `field`. With `adv(F) = V ∂F/∂x0 + V' ∂F/∂x1 + (-x2 V' + V'') ∂F/∂x2`:
///
/// ```text
/// r1 = adv(A) - V' A
/// r2 = adv(B) - V'' A
/// r3 = adv(C) - (-x2 V'' + V''') A + V' C
/// ```
///
/// All three vanish exactly when `[U, W] = 0` for the lifted generator `U`.
pub fn pde_residual<F, W>(field: &F, omega: &W, p: &FramePoint) -> Result<[f64; 3]>
where
    F: SzekeresField + ?Sized,
    W: WForm + ?Sized,
{
    let s = omega.sample(p)?;
    let v = field.jet_at(p.x0);
    let u = lift_generator(&v, p);
    let adv = |i: usize| -> f64 { (0..3).map(|j| u[j] * s.grad[i][j]).sum() };
    let [a, _, c] = s.values;
    Ok([
        adv(0) - v.v1 * a,
        adv(1) - v.v2 * a,
        adv(2) - (-p.x2 * v.v2 + v.v3) * a + v.v1 * c,
    ])
}
