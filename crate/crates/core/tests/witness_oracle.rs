mod common;

use common::{closed_form, field_derivatives, guard_bound, rel_gap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reeb_gvl::frame::{divergence, FnForm, FramePoint, WForm};
use reeb_gvl::gvl::{
    average_form, domain_bound, in_guard, nu_log_margin, pde_residual, u_coords, witness_closed,
    witness_reflected, ClosedWitness, GeneralWitness, ReflectedWitness, WitnessDomain,
    DEFAULT_QUAD_N,
};
use reeb_gvl::jets::JetScalar;
use reeb_gvl::szekeres::ReebProfile;

fn random_in_guard<R: Rng>(rng: &mut R, alpha: f64) -> FramePoint {
    let x1 = rng.gen_range(-2.0..2.0);
    let x2 = rng.gen_range(-2.0..2.0);
    // log-uniform over three decades below the guard
    let frac = 10f64.powf(-3.0 * rng.gen::<f64>()) * 0.999;
    FramePoint::new(frac / guard_bound(alpha, x1, x2), x1, x2)
}

#[test]
fn guard_bound_matches() {
    assert!((domain_bound(2.0, 1.0, -1.0) - 2.1839397205857211608).abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let (x1, x2) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let (a, b) = (domain_bound(alpha, x1, x2), guard_bound(alpha, x1, x2));
            assert!((a - b).abs() <= 1e-15 * b);
        }
    }
}

#[test]
fn reference_values() {
    let w = witness_closed(1.0, &FramePoint::new(0.1, 0.0, 0.0)).unwrap();
    assert!(rel_gap(&w, &[0.002, 0.2, -4.0]) < 1e-14);
    let w = witness_closed(2.0, &FramePoint::new(0.2, 0.0, 0.0)).unwrap();
    assert!(rel_gap(&w, &[2.4e-4, 0.75314718055994530720, -0.9]) < 1e-14);
    let c = witness_closed(1.5, &FramePoint::new(0.01, 0.0, 0.0)).unwrap()[2];
    assert!((c + 6.25 / 1.5 * 0.1).abs() < 1e-3 * 0.42);
    let r = witness_reflected(2.0, &FramePoint::new(-0.1, 0.0, 0.0)).unwrap();
    assert!((r[0] + 7.5e-6).abs() < 1e-18);
    let r = witness_reflected(2.0, &FramePoint::new(-0.2, 0.0, 0.0)).unwrap();
    assert!((r[2] - 0.9).abs() < 1e-14);
    assert!(witness_reflected(2.0, &FramePoint::new(0.2, 0.0, 0.0)).is_err());
}

#[test]
fn residual_of_a_simple_form() {
    let omega = FnForm::new(|x| {
        let z = JetScalar::constant(0.0, x[0].order())?;
        Ok([x[0], z, z])
    });
    let v = ReebProfile::positive(1.0).unwrap();
    let r = pde_residual(&v, &omega, &FramePoint::new(0.5, 0.0, 0.0)).unwrap();
    let [_, _, v2, v3] = field_derivatives(1.0, 0.5);
    let e2 = (-2.0f64).exp();
    assert!((r[0] - e2).abs() < 1e-15);
    assert!((r[1] + 0.5 * v2).abs() < 1e-15);
    assert!((r[2] + 0.5 * v3).abs() < 1e-14);
}

#[test]
fn closed_form_matches_reference_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for alpha in [1.0, 1.5, 2.0, 3.0] {
        let w = ClosedWitness::new(alpha).unwrap();
        for _ in 0..300 {
            let p = random_in_guard(&mut rng, alpha);
            let got = w.coefficients(&p).unwrap();
            let want = closed_form(alpha, p.x0, p.x1, p.x2);
            assert!(rel_gap(&got, &want) < 1e-12, "{p:?}: {got:?} vs {want:?}");
        }
    }
}

/// Invariance residuals recomputed from the reference formula with fourth-order
/// central differences and symbolically differentiated field values.
#[test]
fn residual_by_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-4;
    for alpha in [1.0, 2.0, 3.0] {
        for _ in 0..60 {
            let x1 = rng.gen_range(-2.0..2.0);
            let x2 = rng.gen_range(-2.0..2.0);
            let x0 = rng.gen_range(0.3..0.9) / guard_bound(alpha, x1, x2);
            let x = [x0, x1, x2];
            let grad: [[f64; 3]; 3] = std::array::from_fn(|j| {
                let at = |d: f64| {
                    let mut y = x;
                    y[j] += d;
                    closed_form(alpha, y[0], y[1], y[2])
                };
                let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
                std::array::from_fn(|i| (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h))
            });
            let [v0, v1, v2, v3] = field_derivatives(alpha, x0);
            let u = [v0, v1, -x2 * v1 + v2];
            let adv = |i: usize| (0..3).map(|j| u[j] * grad[j][i]).sum::<f64>();
            let [a, _, c] = closed_form(alpha, x0, x1, x2);
            let r = [
                adv(0) - v1 * a,
                adv(1) - v2 * a,
                adv(2) - (-x2 * v2 + v3) * a + v1 * c,
            ];
            let scale = v0.abs().max(v1.abs()).max(v2.abs()).max(v3.abs()).max(1e-300);
            for ri in r {
                assert!(ri.abs() <= 1e-6 * scale, "alpha {alpha} {x:?}: {r:?}");
            }
            let div = grad[0][0] + grad[1][1] + grad[2][2];
            assert!((div - 1.0).abs() < 1e-7);
        }
    }
}

#[test]
fn residual_and_divergence_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for alpha in [1.0, 2.0, 3.0] {
        let field = ReebProfile::positive(alpha).unwrap();
        let w = ClosedWitness::new(alpha).unwrap();
        for _ in 0..500 {
            let p = random_in_guard(&mut rng, alpha);
            let r = pde_residual(&field, &w, &p).unwrap();
            assert!(r.iter().all(|v| v.abs() <= 1e-9), "{p:?}: {r:?}");
            assert!((divergence(&w, &p).unwrap() - 1.0).abs() <= 1e-11);
        }
    }
}

#[test]
fn closed_form_agrees_with_general_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for alpha in [1.0, 2.0, 3.0] {
        let closed = ClosedWitness::new(alpha).unwrap();
        let general = GeneralWitness::standard(alpha).unwrap();
        let field = ReebProfile::positive(alpha).unwrap();
        let mut compared = 0;
        let mut drawn = 0;
        while compared < 500 {
            drawn += 1;
            assert!(drawn < 50_000);
            let p = random_in_guard(&mut rng, alpha);
            assert!(nu_log_margin(alpha, &p).unwrap() > 0.0, "guard without cutoff margin at {p:?}");
            if !general.contains(&p) {
                continue;
            }
            assert!(u_coords(&field, &p).unwrap().nu_argument() > 1.0);
            let g = general.coefficients(&p).unwrap();
            let c = closed.coefficients(&p).unwrap();
            for i in 0..3 {
                let scale = g[i].abs().max(c[i].abs());
                assert!((g[i] - c[i]).abs() <= 1e-10 * scale, "{p:?}: {g:?} vs {c:?}");
            }
            compared += 1;
        }
    }
}

#[test]
fn reflected_form_solves_the_mirrored_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for alpha in [1.0, 2.0, 3.0] {
        let w = ReflectedWitness::new(alpha).unwrap();
        let neg = ReebProfile::negative(alpha).unwrap();
        let even = ReebProfile::two_sided(alpha).unwrap();
        for _ in 0..200 {
            let p = random_in_guard(&mut rng, alpha).mirrored();
            let want = closed_form(alpha, -p.x0, p.x1, -p.x2);
            let got = w.coefficients(&p).unwrap();
            assert!(rel_gap(&got, &[-want[0], want[1], -want[2]]) < 1e-12);
            for field in [&neg, &even] {
                let r = pde_residual(field, &w, &p).unwrap();
                assert!(r.iter().all(|v| v.abs() <= 1e-9));
            }
            assert!((divergence(&w, &p).unwrap() - 1.0).abs() <= 1e-11);
        }
    }
}

#[test]
fn averaging_fixes_the_witness() {
    let alpha = 2.0;
    let field = ReebProfile::positive(alpha).unwrap();
    let w = ClosedWitness::with_domain(alpha, WitnessDomain::Plateau).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let x1 = rng.gen_range(-1.0..1.0);
        let x2 = rng.gen_range(-1.0..1.0);
        let p = FramePoint::new(rng.gen_range(0.3..0.9) / guard_bound(alpha, x1, x2), x1, x2);
        assert!(in_guard(alpha, &p));
        let avg = average_form(&w, &field, 0.0, &p, DEFAULT_QUAD_N).unwrap();
        let shifted = average_form(&w, &field, 0.37, &p, DEFAULT_QUAD_N).unwrap();
        let w0 = w.coefficients(&p).unwrap();
        for i in 0..3 {
            assert!((avg[i] - w0[i]).abs() <= 1e-7);
            assert!((avg[i] - shifted[i]).abs() <= 1e-7);
        }
    }
}
