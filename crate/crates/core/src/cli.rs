//! The `reeb-gvl` command line: check suites emitting JSON [`Report`]s.
//!
//! Exit codes are 0 when every check passes, 1 when a check fails and 2 on
//! usage or domain errors. `probe` exits 0 whenever the probe ran; its verdicts
//! are informational.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{Error, Result};
use crate::frame::{divergence, lift_map, pullback_two_form, FramePoint, WForm};
use crate::grid::GridForm;
use crate::gvl::{
    average_form, in_guard, nu_log_margin, pde_residual, AxisRange, ClosedWitness,
    GeneralWitness, GridSpec, ReflectedWitness, WitnessDomain, DEFAULT_QUAD_N,
};
use crate::probe::{
    boundary_partials, boundary_smoothness, default_sequence, exponent_fit, two_sided_limits,
    BoundarySide, Component, GeometricSequence, DIVERGENCE_FACTOR,
};
use crate::report::{fmt_num, Check, Report};
use crate::szekeres::{flow, flow_jet, flow_ode_oracle, ReebProfile, Side};

pub const SIGN_CONVENTION: &str =
    "omega = A dx2^dx1 + B dx0^dx2 + C dx1^dx0, d omega = (div W) dx2^dx1^dx0";
pub const PSI_OFF_PI: &str = "Psi = 0 off Pi";

/// Relative tolerance for closed form against the general construction.
pub const TOL_ORACLE: f64 = 1e-10;
pub const TOL_FINITE_TIME: f64 = 1e-6;
pub const FINITE_TIMES: [f64; 3] = [0.1, 0.5, 1.0];
pub const TOL_BOUNDARY_SUM: f64 = 1e-4;
pub const TOL_EXPONENT: f64 = 0.01;
pub const TOL_GAP: f64 = 1e-6;
/// Relative tolerance for jumps in x0-derivatives across the boundary plane.
pub const TOL_DERIVATIVE_GAP: f64 = 1e-4;
pub const TOL_AVERAGE: f64 = 1e-7;
pub const TOL_FLOW_ORACLE: f64 = 1e-6;
/// Highest x0-derivative inspected at the boundary plane.
pub const SMOOTHNESS_ORDER: usize = 4;
/// Offset between the two averaging windows compared for ξ-independence.
pub const XI_SHIFT: f64 = 0.37;

#[derive(Debug, Parser)]
#[command(name = "reeb-gvl", version, about = "Numerical checks for the GVL class of Reeb foliations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the closed-form witness (or a candidate grid) against the invariance system.
    VerifyWitness(VerifyArgs),
    /// Estimate boundary limits, local exponents and two-sided jumps.
    Probe(ProbeArgs),
    /// Evaluate the Szekeres flow, optionally against the RK4 oracle.
    Flow(FlowArgs),
    /// Check that time-averaging fixes the witness and does not depend on ξ.
    Average(AverageArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value = "-2:2:9", allow_hyphen_values = true)]
    pub grid_x1: AxisRange,
    #[arg(long, default_value = "-2:2:9", allow_hyphen_values = true)]
    pub grid_x2: AxisRange,
    #[arg(long, default_value_t = 20)]
    pub n_x0: usize,
    #[arg(long, default_value_t = 0.9)]
    pub x0_fraction: f64,
    /// Decades spanned by the logarithmic x0 values below x0_fraction / a(x1, x2).
    #[arg(long, default_value_t = 2.0)]
    pub x0_decades: f64,
}

impl GridArgs {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x1: self.grid_x1,
            x2: self.grid_x2,
            n_x0: self.n_x0,
            x0_fraction: self.x0_fraction,
            x0_decades: self.x0_decades,
        }
    }
}

impl Default for GridArgs {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            grid_x1: g.x1,
            grid_x2: g.x2,
            n_x0: g.n_x0,
            x0_fraction: g.x0_fraction,
            x0_decades: g.x0_decades,
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_pde: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub tol_div: f64,
    /// Candidate form as CSV with header x0,x1,x2,A,B,C.
    #[arg(long)]
    pub candidate: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl VerifyArgs {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            grid: GridArgs::default(),
            tol_pde: 1e-9,
            tol_div: 1e-11,
            candidate: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ProbeArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Also measure jumps of the reflected witness across x0 = 0.
    #[arg(long)]
    pub two_sided: bool,
    #[arg(long, default_value_t = 0.0)]
    pub x1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub x2: f64,
    /// First |x0| of the sequence; defaults to 0.1 / a(x1, x2).
    #[arg(long)]
    pub seq_start: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub seq_ratio: f64,
    #[arg(long, default_value_t = 8)]
    pub seq_len: usize,
    #[arg(long)]
    pub candidate: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ProbeArgs {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            two_sided: false,
            x1: 0.0,
            x2: 0.0,
            seq_start: None,
            seq_ratio: 0.5,
            seq_len: 8,
            candidate: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct FlowArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub x: f64,
    /// Compare against RK4 integration of the field.
    #[arg(long)]
    pub oracle: bool,
    /// Use the two-sided field instead of the positive branch.
    #[arg(long, conflicts_with = "negative")]
    pub two_sided: bool,
    /// Use the mirrored field on x < 0.
    #[arg(long)]
    pub negative: bool,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct AverageArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_N)]
    pub quad_n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub xi: f64,
    #[arg(long, default_value = "-1:1:5", allow_hyphen_values = true)]
    pub grid_x1: AxisRange,
    #[arg(long, default_value = "-1:1:5", allow_hyphen_values = true)]
    pub grid_x2: AxisRange,
    #[arg(long, default_value_t = 2)]
    pub n_x0: usize,
    #[arg(long, default_value_t = 0.9)]
    pub x0_fraction: f64,
    /// Default spacing halves x0: 0.9/a and 0.45/a.
    #[arg(long, default_value_t = std::f64::consts::LOG10_2)]
    pub x0_decades: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl AverageArgs {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            quad_n: DEFAULT_QUAD_N,
            xi: 0.0,
            grid_x1: AxisRange { lo: -1.0, hi: 1.0, n: 5 },
            grid_x2: AxisRange { lo: -1.0, hi: 1.0, n: 5 },
            n_x0: 2,
            x0_fraction: 0.9,
            x0_decades: std::f64::consts::LOG10_2,
            out: None,
        }
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x1: self.grid_x1,
            x2: self.grid_x2,
            n_x0: self.n_x0,
            x0_fraction: self.x0_fraction,
            x0_decades: self.x0_decades,
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_tolerance(name: &str, tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be a non-negative finite number, got {tol}"
        )))
    }
}

/// Residual and divergence checks of any form against the positive field.
fn residual_checks<W: WForm + ?Sized>(
    report: &mut Report,
    profile: &ReebProfile,
    omega: &W,
    points: &[FramePoint],
    tol_pde: f64,
    tol_div: f64,
) -> Result<()> {
    let mut worst_pde = 0.0f64;
    let mut worst_div = 0.0f64;
    for p in points {
        worst_pde = worst_pde.max(max_abs(&pde_residual(profile, omega, p)?));
        worst_div = worst_div.max((divergence(omega, p)? - 1.0).abs());
    }
    let n = points.len() as u64;
    report.push(Check::measured("pde-residual", n, worst_pde, tol_pde, "max over r1, r2, r3"));
    report.push(Check::measured("divergence", n, worst_div, tol_div, "max |div W - 1|"));
    Ok(())
}

pub fn verify_witness_report(args: &VerifyArgs) -> Result<Report> {
    let profile = ReebProfile::positive(args.alpha)?;
    let alpha = args.alpha;
    check_tolerance("tol-pde", args.tol_pde)?;
    check_tolerance("tol-div", args.tol_div)?;
    let mut report = Report::new("verify-witness");
    report
        .param("alpha", alpha)
        .param("tol_pde", args.tol_pde)
        .param("tol_div", args.tol_div)
        .param("sign_convention", SIGN_CONVENTION);

    if let Some(path) = &args.candidate {
        let form = GridForm::from_path(path)?;
        let points = form.interior_points();
        if points.is_empty() {
            return Err(Error::Grid("candidate grid has no interior nodes".into()));
        }
        report
            .param("candidate", path.display().to_string())
            .param("points", points.len());
        residual_checks(&mut report, &profile, &form, &points, args.tol_pde, args.tol_div)?;
        return Ok(report);
    }

    let spec = args.grid.spec();
    let points = spec.points(alpha)?;
    report
        .param("grid_x1", spec.x1.to_string())
        .param("grid_x2", spec.x2.to_string())
        .param("n_x0", spec.n_x0)
        .param("x0_fraction", spec.x0_fraction)
        .param("x0_decades", spec.x0_decades)
        .param("points", points.len())
        .param("psi_off_pi", PSI_OFF_PI)
        .param("witness", "closed");
    let witness = ClosedWitness::new(alpha)?;
    residual_checks(&mut report, &profile, &witness, &points, args.tol_pde, args.tol_div)?;
    report.push(oracle_equivalence(alpha, &witness, &points)?);
    report.push(guard_sufficiency(alpha, &points));
    report.push(finite_time_invariance(&profile, &witness, &points)?);
    report.push(smoothness_check(alpha, &witness, &spec)?);
    Ok(report)
}

fn oracle_equivalence(alpha: f64, witness: &ClosedWitness, points: &[FramePoint]) -> Result<Check> {
    let general = GeneralWitness::standard(alpha)?;
    let mut worst = 0.0f64;
    let mut n = 0;
    let mut skipped = 0;
    for p in points {
        if !general.contains(p) || !nu_log_margin(alpha, p).is_some_and(|m| m > 0.0) {
            skipped += 1;
            continue;
        }
        let g = general.coefficients(p)?;
        let c = witness.coefficients(p)?;
        for i in 0..3 {
            let scale = g[i].abs().max(c[i].abs());
            if scale > 0.0 {
                worst = worst.max((g[i] - c[i]).abs() / scale);
            }
        }
        n += 1;
    }
    let notes = format!(
        "max relative difference; {skipped} points skipped where V(x0) underflows or the cutoff argument is <= 1"
    );
    Ok(Check::measured("oracle-equivalence", n, worst, TOL_ORACLE, notes))
}

fn guard_sufficiency(alpha: f64, points: &[FramePoint]) -> Check {
    let mut violations = 0u64;
    let mut min_margin = f64::INFINITY;
    for p in points {
        match nu_log_margin(alpha, p) {
            Some(m) if m > 0.0 => min_margin = min_margin.min(m),
            _ => violations += 1,
        }
    }
    Check::measured(
        "guard-sufficiency",
        points.len() as u64,
        violations as f64,
        0.0,
        format!(
            "count of in-guard points with cutoff argument <= 1; smallest log margin {}",
            fmt_num(min_margin)
        ),
    )
}

fn finite_time_invariance(
    profile: &ReebProfile,
    witness: &ClosedWitness,
    points: &[FramePoint],
) -> Result<Check> {
    let alpha = profile.alpha();
    let mut worst = 0.0f64;
    let mut n = 0;
    let mut skipped = 0;
    for p in points {
        let w = witness.coefficients(p)?;
        for t in FINITE_TIMES {
            let jet = flow_jet(profile, t, p.x0)?;
            let image = lift_map(&jet, p)?;
            if !in_guard(alpha, &image) {
                skipped += 1;
                continue;
            }
            let pulled = pullback_two_form(&jet, witness, p)?;
            for i in 0..3 {
                worst = worst.max((pulled[i] - w[i]).abs() / w[i].abs().max(1.0));
            }
            n += 1;
        }
    }
    let notes = format!(
        "t in {FINITE_TIMES:?}; error relative to max(1, |W|); {skipped} (point, t) pairs skipped with image outside the guard"
    );
    Ok(Check::measured("finite-time-invariance", n, worst, TOL_FINITE_TIME, notes))
}

fn smoothness_check(alpha: f64, witness: &ClosedWitness, spec: &GridSpec) -> Result<Check> {
    let mut worst = (1.0, 0.0, 0.0, Component::A, 0);
    let nodes = spec.nodes();
    let mut n = 0;
    for &(x1, x2) in &nodes {
        let seq = default_sequence(alpha, x1, x2);
        let scan = boundary_smoothness(witness, x1, x2, &seq, BoundarySide::Positive, SMOOTHNESS_ORDER)?;
        n += seq.len as u64;
        if scan.worst_growth > worst.0 {
            worst = (scan.worst_growth, x1, x2, scan.component, scan.order);
        }
    }
    let notes = format!(
        "largest growth of |d^k W/dx0^k| (k <= {SMOOTHNESS_ORDER}) over three halvings of x0 toward 0; worst: order {} of {} at (x1, x2) = ({}, {})",
        worst.4,
        worst.3.letter(),
        fmt_num(worst.1),
        fmt_num(worst.2)
    );
    Ok(Check::measured("boundary-smoothness", n, worst.0, DIVERGENCE_FACTOR, notes))
}

fn probe_sequence(args: &ProbeArgs, alpha: f64) -> Result<GeometricSequence> {
    let start = args
        .seq_start
        .unwrap_or_else(|| default_sequence(alpha, args.x1, args.x2).start);
    GeometricSequence::new(start, args.seq_ratio, args.seq_len)
}

/// Picks the interior node nearest to `(x1, x2)` and the positive interior x0
/// values of a candidate grid.
fn candidate_probe_setup(form: &GridForm, x1: f64, x2: f64) -> Result<(f64, f64, GeometricSequence)> {
    use crate::frame::Axis;
    let interior = |a: &[f64]| -> Vec<f64> {
        if a.len() < 3 {
            vec![]
        } else {
            a[1..a.len() - 1].to_vec()
        }
    };
    let nearest = |a: Vec<f64>, v: f64| -> Result<f64> {
        a.into_iter()
            .min_by(|p, q| (p - v).abs().total_cmp(&(q - v).abs()))
            .ok_or_else(|| Error::Grid("candidate grid has no interior nodes".into()))
    };
    let n1 = nearest(interior(form.axis(Axis::X1)), x1)?;
    let n2 = nearest(interior(form.axis(Axis::X2)), x2)?;
    let mut x0s: Vec<f64> = interior(form.axis(Axis::X0))
        .into_iter()
        .filter(|&x| x > 0.0)
        .collect();
    x0s.reverse();
    Ok((n1, n2, GeometricSequence::from_values(&x0s)?))
}

pub fn probe_report(args: &ProbeArgs) -> Result<Report> {
    let alpha = args.alpha;
    ReebProfile::positive(alpha)?;
    let mut report = Report::new("probe");
    report.param("alpha", alpha).param("two_sided", args.two_sided);

    let candidate = match &args.candidate {
        Some(path) => {
            if args.two_sided {
                return Err(Error::InvalidArgument(
                    "--two-sided applies to the reflected closed witness, not to candidate grids".into(),
                ));
            }
            Some((path, GridForm::from_path(path)?))
        }
        None => None,
    };
    let witness = ClosedWitness::new(alpha)?;
    let (form, x1, x2, seq): (&dyn WForm, f64, f64, GeometricSequence) = match &candidate {
        Some((path, grid)) => {
            let (x1, x2, seq) = candidate_probe_setup(grid, args.x1, args.x2)?;
            report.param("candidate", path.display().to_string());
            (grid, x1, x2, seq)
        }
        None => {
            report.param("form", "closed witness");
            (&witness, args.x1, args.x2, probe_sequence(args, alpha)?)
        }
    };
    report
        .param("x1", x1)
        .param("x2", x2)
        .param("seq_start", seq.start)
        .param("seq_ratio", seq.ratio)
        .param("seq_len", seq.len);

    let est = boundary_partials(form, x1, x2, &seq, BoundarySide::Positive)?;
    report
        .param("dA_dx0", est.da_dx0)
        .param("dB_dx1", est.db_dx1)
        .param("dC_dx2", est.dc_dx2)
        .param("divergent", json!(est.divergent));
    let n = seq.len as u64;
    let check = match est.sum {
        Some(sum) => {
            report.param("boundary_sum", sum);
            Check::measured(
                "boundary-sum-deviation",
                n,
                (sum - 1.0).abs(),
                TOL_BOUNDARY_SUM,
                format!(
                    "limits dA/dx0 = {}, dB/dx1 = {}, dC/dx2 = {}; a smooth invariant form with div W = 1 needs sum 1",
                    fmt_num(est.da_dx0),
                    fmt_num(est.db_dx1),
                    fmt_num(est.dc_dx2)
                ),
            )
        }
        None => {
            let names: Vec<String> = Component::ALL
                .iter()
                .filter(|c| est.divergent[c.index()])
                .map(|c| c.letter().to_string())
                .collect();
            Check::failed(
                "boundary-sum-deviation",
                TOL_BOUNDARY_SUM,
                format!("boundary partial of {} diverges", names.join(", ")),
            )
        }
    };
    report.push(check);

    for c in [Component::A, Component::C] {
        let name = format!("exponent-fit-{}", c.letter());
        let check = match exponent_fit(form, c, x1, x2, &seq) {
            Ok(e) => {
                report.param(&format!("exponent_{}", c.letter()), e);
                Check::measured(
                    &name,
                    n,
                    (e - e.round()).abs(),
                    TOL_EXPONENT,
                    format!(
                        "fitted exponent {}; residual is the distance to the nearest integer",
                        fmt_num(e)
                    ),
                )
            }
            Err(e) => Check::failed(&name, TOL_EXPONENT, e.to_string()),
        };
        report.push(check);
    }

    if args.two_sided {
        report.push(two_sided_residual(alpha)?);
        two_sided_checks(&mut report, alpha, x1, x2);
    }
    Ok(report)
}

/// Residuals of the reflected witness against the two-sided field on the
/// default grid and its mirror image.
fn two_sided_residual(alpha: f64) -> Result<Check> {
    let profile = ReebProfile::two_sided(alpha)?;
    let witness = ReflectedWitness::new(alpha)?;
    let points = GridSpec::default().points(alpha)?;
    let mut worst = 0.0f64;
    for p in &points {
        for q in [*p, p.mirrored()] {
            worst = worst.max(max_abs(&pde_residual(&profile, &witness, &q)?));
        }
    }
    Ok(Check::measured(
        "two-sided-residual",
        2 * points.len() as u64,
        worst,
        1e-9,
        "reflected witness against the two-sided field on the default grid and its mirror",
    ))
}

fn two_sided_checks(report: &mut Report, alpha: f64, x1: f64, x2: f64) {
    let n = 2 * default_sequence(alpha, x1, x2).len as u64;
    match two_sided_limits(alpha, x1, x2, SMOOTHNESS_ORDER) {
        Ok((plus, minus)) => {
            for c in Component::ALL {
                let i = c.index();
                let gap = (plus[0][i] - minus[0][i]).abs();
                report.param(&format!("gap_{}", c.letter()), gap);
                report.push(Check::measured(
                    &format!("two-sided-gap-{}", c.letter()),
                    n,
                    gap,
                    TOL_GAP,
                    format!(
                        "{l}(0+) = {}, {l}(0-) = {}",
                        fmt_num(plus[0][i]),
                        fmt_num(minus[0][i]),
                        l = c.letter()
                    ),
                ));
            }
            let mut worst = (0.0f64, 0, Component::A);
            for k in 1..plus.len() {
                for c in Component::ALL {
                    let i = c.index();
                    let scale = 1.0 + plus[k][i].abs().max(minus[k][i].abs());
                    let g = (plus[k][i] - minus[k][i]).abs() / scale;
                    if g > worst.0 {
                        worst = (g, k, c);
                    }
                }
            }
            report.param("derivative_gap", worst.0);
            report.push(Check::measured(
                "two-sided-derivative-gap",
                n,
                worst.0,
                TOL_DERIVATIVE_GAP,
                format!(
                    "largest jump of d^k/dx0^k (1 <= k <= {SMOOTHNESS_ORDER}) relative to 1 + |limit|: order {} of {}",
                    worst.1,
                    worst.2.letter()
                ),
            ));
        }
        Err(e) => {
            for c in Component::ALL {
                report.push(Check::failed(
                    &format!("two-sided-gap-{}", c.letter()),
                    TOL_GAP,
                    e.to_string(),
                ));
            }
            report.push(Check::failed("two-sided-derivative-gap", TOL_DERIVATIVE_GAP, e.to_string()));
        }
    }
}

pub fn average_report(args: &AverageArgs) -> Result<Report> {
    let alpha = args.alpha;
    let profile = ReebProfile::positive(alpha)?;
    if args.quad_n == 0 {
        return Err(Error::InvalidArgument("quad-n must be at least 1".into()));
    }
    let spec = args.spec();
    let points = spec.points(alpha)?;
    let witness = ClosedWitness::with_domain(alpha, WitnessDomain::Plateau)?;
    let mut report = Report::new("average");
    report
        .param("alpha", alpha)
        .param("quad_n", args.quad_n)
        .param("xi", args.xi)
        .param("xi_shifted", args.xi + XI_SHIFT)
        .param("grid_x1", spec.x1.to_string())
        .param("grid_x2", spec.x2.to_string())
        .param("n_x0", spec.n_x0)
        .param("x0_fraction", spec.x0_fraction)
        .param("x0_decades", spec.x0_decades)
        .param("points", points.len())
        .param("witness_domain", "plateau (cutoff argument > 1), invariant under the lifted flow");
    let mut fix = 0.0f64;
    let mut shift = 0.0f64;
    for p in &points {
        let w = witness.coefficients(p)?;
        let a0 = average_form(&witness, &profile, args.xi, p, args.quad_n)?;
        let a1 = average_form(&witness, &profile, args.xi + XI_SHIFT, p, args.quad_n)?;
        for i in 0..3 {
            fix = fix.max((a0[i] - w[i]).abs());
            shift = shift.max((a0[i] - a1[i]).abs());
        }
    }
    let n = points.len() as u64;
    report.push(Check::measured(
        "average-fixes-witness",
        n,
        fix,
        TOL_AVERAGE,
        "max |omega' - omega| over components",
    ));
    report.push(Check::measured(
        "xi-independence",
        n,
        shift,
        TOL_AVERAGE,
        format!("max |omega'(xi) - omega'(xi + {XI_SHIFT})|"),
    ));
    Ok(report)
}

fn flow_output(args: &FlowArgs) -> Result<(String, bool)> {
    let side = if args.two_sided {
        Side::TwoSided
    } else if args.negative {
        Side::Negative
    } else {
        Side::Positive
    };
    let profile = ReebProfile::new(args.alpha, side)?;
    let y = flow(&profile, args.t, args.x)?;
    if !args.oracle {
        return Ok((format!("{}\n", fmt_num(y)), true));
    }
    let o = flow_ode_oracle(&profile, args.t, args.x)?;
    let delta = (y - o).abs();
    Ok((
        format!(
            "{}\noracle {}\ndelta {}\n",
            fmt_num(y),
            fmt_num(o),
            fmt_num(delta)
        ),
        delta <= TOL_FLOW_ORACLE,
    ))
}

fn emit(report: &Report, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let text = report.to_json();
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("cannot write report: {e}"))),
    }
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome: Result<i32> = match &cli.command {
        Command::VerifyWitness(a) => verify_witness_report(a)
            .and_then(|r| emit(&r, &a.out, stdout).map(|_| if r.pass { 0 } else { 1 })),
        Command::Probe(a) => probe_report(a).and_then(|r| emit(&r, &a.out, stdout).map(|_| 0)),
        Command::Average(a) => average_report(a)
            .and_then(|r| emit(&r, &a.out, stdout).map(|_| if r.pass { 0 } else { 1 })),
        Command::Flow(a) => flow_output(a).map(|(text, ok)| {
            let _ = stdout.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = vec![];
        let mut err = vec![];
        let code = run_with(
            std::iter::once("reeb-gvl").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn flow_trivial_cases() {
        assert_eq!(run_capture(&["flow", "--alpha", "1", "--t", "0", "--x", "0.5"]).1, "0.5\n");
        assert_eq!(run_capture(&["flow", "--alpha", "1", "--t", "5", "--x", "-0.3"]).1, "-0.3\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["verify-witness", "--alpha", "0"]).0, 2);
        assert_eq!(run_capture(&["verify-witness"]).0, 2);
        assert_eq!(run_capture(&["bogus"]).0, 2);
        assert_eq!(run_capture(&["flow", "--alpha", "nan", "--t", "1", "--x", "1"]).0, 2);
    }

    #[test]
    fn help_and_version_exit_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify-witness"));
        assert_eq!(run_capture(&["--version"]).0, 0);
    }
}
