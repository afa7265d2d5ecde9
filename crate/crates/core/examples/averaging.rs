//! Time-averaging along the lifted flow leaves an invariant form unchanged.

use reeb_gvl::frame::{FramePoint, WForm};
use reeb_gvl::gvl::{average_form, domain_bound, ClosedWitness, WitnessDomain, DEFAULT_QUAD_N};
use reeb_gvl::szekeres::ReebProfile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 2.0;
    let field = ReebProfile::positive(alpha)?;
    let w = ClosedWitness::with_domain(alpha, WitnessDomain::Plateau)?;
    for (x1, x2) in [(0.0, 0.0), (1.0, -1.0), (-0.5, 0.5)] {
        let p = FramePoint::new(0.5 / domain_bound(alpha, x1, x2), x1, x2);
        let w0 = w.coefficients(&p)?;
        let a0 = average_form(&w, &field, 0.0, &p, DEFAULT_QUAD_N)?;
        let a1 = average_form(&w, &field, 0.37, &p, DEFAULT_QUAD_N)?;
        let gap = (0..3).map(|i| (a0[i] - w0[i]).abs()).fold(0.0, f64::max);
        let shift = (0..3).map(|i| (a0[i] - a1[i]).abs()).fold(0.0, f64::max);
        println!("{p:?}: |avg - W| = {gap:.2e}, |avg(0) - avg(0.37)| = {shift:.2e}");
    }
    Ok(())
}
