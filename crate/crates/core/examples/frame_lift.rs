//! Lifting a base map to frame coordinates and pulling a 2-form back along it.

use reeb_gvl::frame::{
    determinant, divergence, lift_jacobian, lift_map, pullback_two_form, FnForm, FramePoint, MapJet,
};
use reeb_gvl::jets::JetScalar;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = FramePoint::new(0.4, -0.2, 1.1);
    // f(x) = x + x^3 at x = 0.4
    let f = MapJet::new(0.4, 0.4 + 0.064, 1.0 + 3.0 * 0.16, 6.0 * 0.4, 6.0);
    let q = lift_map(&f, &p)?;
    let jac = lift_jacobian(&f, &p)?;
    println!("lift of {p:?} is {q:?}");
    println!("det of lifted Jacobian = {}", determinant(&jac));

    // g(y) = 2y composed after f
    let g = MapJet::new(f.value, 2.0 * f.value, 2.0, 0.0, 0.0);
    let gf = f.then(&g)?;
    let direct = lift_map(&gf, &p)?;
    let stepwise = lift_map(&g, &q)?;
    println!("functoriality gap {:e}", (direct.x2 - stepwise.x2).abs());

    // W = (x0, 0, 0) has divergence 1 everywhere
    let omega = FnForm::new(|x| {
        let z = JetScalar::constant(0.0, x[0].order())?;
        Ok([x[0], z, z])
    });
    println!("div W = {}", divergence(&omega, &p)?);
    println!("f^* W at p = {:?}", pullback_two_form(&f, &omega, &p)?);
    Ok(())
}
