//! Writing a form to the candidate CSV format, reading it back and checking it
//! with finite differences, then running the CLI on the file.

use reeb_gvl::frame::{divergence, WForm};
use reeb_gvl::gvl::{domain_bound, pde_residual, ClosedWitness};
use reeb_gvl::grid::{write_candidate, GridForm};
use reeb_gvl::szekeres::ReebProfile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 2.0;
    let w = ClosedWitness::new(alpha)?;
    let x1s: Vec<f64> = (0..5).map(|i| -0.2 + 0.1 * i as f64).collect();
    let x2s = x1s.clone();
    let top = 0.9 / domain_bound(alpha, 0.2, 0.2);
    let x0s: Vec<f64> = (0..7).map(|i| top * (0.5 + 0.05 * i as f64)).collect();

    let path = std::env::temp_dir().join("reeb-gvl-candidate.csv");
    write_candidate(&w, &x0s, &x1s, &x2s, std::fs::File::create(&path)?)?;
    let grid = GridForm::from_path(&path)?;
    let field = ReebProfile::positive(alpha)?;
    let mut worst_res = 0.0f64;
    let mut worst_div = 0.0f64;
    for p in grid.interior_points() {
        let r = pde_residual(&field, &grid, &p)?;
        worst_res = r.iter().fold(worst_res, |m, v| m.max(v.abs()));
        worst_div = worst_div.max((divergence(&grid, &p)? - 1.0).abs());
    }
    println!("{} interior nodes", grid.interior_points().len());
    println!("finite-difference residual {worst_res:.2e}, |div - 1| {worst_div:.2e}");
    println!("exact value at first node {:?}", w.coefficients(&grid.interior_points()[0])?);

    let code = reeb_gvl::cli::run([
        "reeb-gvl".as_ref(),
        "verify-witness".as_ref(),
        "--alpha".as_ref(),
        "2".as_ref(),
        "--candidate".as_ref(),
        path.as_os_str(),
        // finite differences on this spacing are good to about 1e-2
        "--tol-pde".as_ref(),
        "1e-2".as_ref(),
        "--tol-div".as_ref(),
        "5e-2".as_ref(),
    ]);
    println!("verify-witness on the candidate exited with {code}");
    Ok(())
}
