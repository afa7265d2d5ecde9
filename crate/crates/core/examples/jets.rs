//! Truncated Taylor arithmetic: derivatives of `exp(-1/x^2)` and a chain rule check.

use reeb_gvl::jets::{jet_eval, Expr, JetScalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = Expr::var();
    let bump = (-(Expr::constant(1.0) / (x.clone() * x))).exp();
    let j = jet_eval(&bump, 0.7, 4)?;
    println!("exp(-1/x^2) at x = 0.7");
    for (k, d) in j.derivatives().iter().enumerate() {
        println!("  d^{k}/dx^{k} = {d:.12e}");
    }

    // sin is not a primitive, so compose with a hand-written jet of the outer map.
    let inner = JetScalar::variable(0.3, 3)?.powf(2.0)?;
    let y = inner.value();
    let composed = inner.compose(&[y.sin(), y.cos(), -y.sin(), -y.cos()])?;
    println!("sin(x^2) at x = 0.3: {:?}", composed.derivatives());
    Ok(())
}
