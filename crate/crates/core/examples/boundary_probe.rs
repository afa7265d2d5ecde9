//! Behaviour of the witness near the boundary plane x0 = 0: limits of the
//! divergence terms, the local exponent of C and jumps of the reflected form.

use reeb_gvl::gvl::ClosedWitness;
use reeb_gvl::probe::{
    boundary_partials, default_sequence, derivative_gaps, exponent_fit, two_sided_gap,
    BoundarySide, Component,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for alpha in [1.0, 1.5, 2.0, 2.5, 3.0] {
        let w = ClosedWitness::new(alpha)?;
        let seq = default_sequence(alpha, 0.0, 0.0);
        let est = boundary_partials(&w, 0.0, 0.0, &seq, BoundarySide::Positive)?;
        let e = exponent_fit(&w, Component::C, 0.0, 0.0, &seq)?;
        println!("alpha = {alpha}: partials {:?}, sum {:?}, C ~ x0^{e:.4}", est.partials(), est.sum);
    }
    for alpha in [1.0, 2.0, 3.0] {
        let gaps = two_sided_gap(alpha, 0.0, 0.0)?;
        let worst = derivative_gaps(alpha, 0.0, 0.0, 4)?
            .iter()
            .skip(1)
            .flatten()
            .fold(0.0f64, |m, g| m.max(*g));
        println!("alpha = {alpha}: jumps {gaps:?}, largest derivative jump {worst:.3e}");
    }
    Ok(())
}
