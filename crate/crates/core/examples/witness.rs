//! The closed-form invariant 2-form: PDE residuals, divergence and agreement
//! with the general construction from the cutoff pair.

use reeb_gvl::frame::{divergence, WForm};
use reeb_gvl::gvl::{
    domain_bound, nu_log_margin, pde_residual, u_coords, ClosedWitness, GeneralWitness,
};
use reeb_gvl::frame::FramePoint;
use reeb_gvl::szekeres::ReebProfile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for alpha in [1.0, 2.0, 3.0] {
        let field = ReebProfile::positive(alpha)?;
        let closed = ClosedWitness::new(alpha)?;
        let general = GeneralWitness::standard(alpha)?;
        let (x1, x2) = (0.5, -0.5);
        let p = FramePoint::new(0.6 / domain_bound(alpha, x1, x2), x1, x2);
        let u = u_coords(&field, &p)?;
        println!("alpha = {alpha}, p = {p:?}");
        println!("  u = ({:.6}, {:.6}), log margin {:?}", u.u1, u.u2, nu_log_margin(alpha, &p));
        println!("  closed  W = {:?}", closed.coefficients(&p)?);
        println!("  general W = {:?}", general.coefficients(&p)?);
        println!("  residual {:?}", pde_residual(&field, &closed, &p)?);
        println!("  div W - 1 = {:e}", divergence(&closed, &p)? - 1.0);
    }
    Ok(())
}
