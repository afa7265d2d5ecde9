//! The Szekeres field, its flow, the holonomy and the profile function.

use reeb_gvl::szekeres::{
    field_jet, flow, flow_ode_oracle, hat_f, holonomy, profile_to_f, ReebProfile,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 1.0;
    let v = ReebProfile::positive(alpha)?;
    let x = 0.5;
    println!("V and derivatives at {x}: {:?}", field_jet(&v, x).derivatives());
    println!("hat f({x}) = {}", hat_f(&v, x)?);
    for t in [-1.0, -0.5, 0.5, 1.0] {
        let y = flow(&v, t, x)?;
        let o = flow_ode_oracle(&v, t, x)?;
        println!("phi_{t}({x}) = {y:.15}  rk4 {o:.15}");
    }
    println!("holonomy({x}) = {}", holonomy(&v, x)?);
    println!("phi_1 fixes the inactive side: {}", flow(&v, 1.0, -0.3)?);
    println!("profile f at t = 0.25: {}", profile_to_f(&v, 0.25)?);

    let even = ReebProfile::two_sided(alpha)?;
    println!("two-sided phi_1(-0.5) = {}", flow(&even, 1.0, -0.5)?);
    Ok(())
}
