//! Diagnostics at the boundary plane `Γ = {x0 = 0}`.
//!
//! A form that solves the invariance system with `div W = 1` and extends
//! smoothly to `Γ` must have `∂A/∂x0 + ∂B/∂x1 + ∂C/∂x2 = 1` there. The probes
//! estimate these limits along geometric sequences `x0 = start · ratio^k`,
//! detect power-law blow-up, fit local exponents, and measure how the
//! reflected witness glues across `Γ`.

use crate::error::{Error, Result};
use crate::extrapolate::extrapolate_limit;
use crate::frame::{domain_error, Axis, FramePoint, WForm};
use crate::gvl::{domain_bound, ReflectedWitness};

/// Successive magnitudes must grow by more than this over the last three points
/// of a sequence for a limit to count as divergent.
pub const DIVERGENCE_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    A,
    B,
    C,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::A, Component::B, Component::C];

    pub fn index(self) -> usize {
        match self {
            Component::A => 0,
            Component::B => 1,
            Component::C => 2,
        }
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C'][self.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundarySide {
    Positive,
    Negative,
}

impl BoundarySide {
    pub fn sign(self) -> f64 {
        match self {
            BoundarySide::Positive => 1.0,
            BoundarySide::Negative => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundarySide::Positive => "positive",
            BoundarySide::Negative => "negative",
        }
    }
}

/// `|x0| = start · ratio^k` for `k = 0 .. len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricSequence {
    pub start: f64,
    pub ratio: f64,
    pub len: usize,
}

impl Default for GeometricSequence {
    fn default() -> Self {
        Self {
            start: 0.1,
            ratio: 0.5,
            len: 8,
        }
    }
}

impl GeometricSequence {
    pub fn new(start: f64, ratio: f64, len: usize) -> Result<Self> {
        if !(start > 0.0 && start.is_finite()) {
            return Err(Error::Sequence(format!("start must be positive, got {start}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Sequence(format!("ratio must lie in (0, 1), got {ratio}")));
        }
        if len < 6 {
            return Err(Error::Sequence(format!("need at least 6 points, got {len}")));
        }
        Ok(Self { start, ratio, len })
    }

    /// Recovers a sequence from explicit values, which must be decreasing,
    /// positive and geometric to within `1e-9` relative.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Sequence("need at least 6 points".into()));
        }
        let ratio = values[1] / values[0];
        for w in values.windows(2) {
            let r = w[1] / w[0];
            if !((r - ratio).abs() <= 1e-9 * ratio) {
                return Err(Error::Sequence(format!(
                    "values are not geometric: ratios {ratio} and {r}"
                )));
            }
        }
        Self::new(values[0], ratio, values.len())
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len)
            .map(|k| self.start * self.ratio.powi(k as i32))
            .collect()
    }

    fn limit(&self, values: &[f64]) -> f64 {
        extrapolate_limit(values, 1.0 / self.ratio, 2)
    }
}

/// `|v_{n-1}| / |v_{n-4}|` when the magnitudes grow at each of the last three
/// steps; `None` otherwise.
pub fn growth_factor(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 4 {
        return None;
    }
    let tail: Vec<f64> = values[n - 4..].iter().map(|v| v.abs()).collect();
    if tail.windows(2).all(|w| w[1] > w[0]) {
        Some(tail[3] / tail[0])
    } else {
        None
    }
}

pub fn is_divergent(values: &[f64]) -> bool {
    growth_factor(values).is_some_and(|g| g > DIVERGENCE_FACTOR)
}

/// Limits at `Γ` of the three partials that enter `div W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEstimate {
    pub da_dx0: f64,
    pub db_dx1: f64,
    pub dc_dx2: f64,
    /// `None` when any component diverges.
    pub sum: Option<f64>,
    pub divergent: [bool; 3],
    pub fitted_exponent: Option<f64>,
}

impl BoundaryEstimate {
    pub fn partials(&self) -> [f64; 3] {
        [self.da_dx0, self.db_dx1, self.dc_dx2]
    }
}

fn sequence_point<W: WForm + ?Sized>(
    omega: &W,
    x0: f64,
    x1: f64,
    x2: f64,
) -> Result<FramePoint> {
    let p = FramePoint::checked(x0, x1, x2)?;
    if !omega.contains(&p) {
        return Err(domain_error(&p, "(sequence point) is outside the form's domain"));
    }
    Ok(p)
}

pub fn boundary_partials<W: WForm + ?Sized>(
    omega: &W,
    x1: f64,
    x2: f64,
    seq: &GeometricSequence,
    side: BoundarySide,
) -> Result<BoundaryEstimate> {
    let mut series = [vec![], vec![], vec![]];
    for x0 in seq.values() {
        let p = sequence_point(omega, side.sign() * x0, x1, x2)?;
        let s = omega.sample(&p)?;
        for i in 0..3 {
            series[i].push(s.grad[i][i]);
        }
    }
    let divergent = [0, 1, 2].map(|i| is_divergent(&series[i]));
    let limits = [0, 1, 2].map(|i| seq.limit(&series[i]));
    let sum = if divergent.iter().any(|&d| d) {
        None
    } else {
        Some(limits.iter().sum())
    };
    Ok(BoundaryEstimate {
        da_dx0: limits[0],
        db_dx1: limits[1],
        dc_dx2: limits[2],
        sum,
        divergent,
        fitted_exponent: None,
    })
}

/// Least-squares slope of `ln|F|` against `ln|x0|` along the sequence: the local
/// power-law exponent of one component near `Γ`.
pub fn exponent_fit<W: WForm + ?Sized>(
    omega: &W,
    component: Component,
    x1: f64,
    x2: f64,
    seq: &GeometricSequence,
) -> Result<f64> {
    let mut xs = vec![];
    let mut ys = vec![];
    let mut sign = 0.0;
    for x0 in seq.values() {
        let p = sequence_point(omega, x0, x1, x2)?;
        let v = omega.coefficients(&p)?[component.index()];
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Fit(format!(
                "{} = {v} at x0 = {x0}",
                component.letter()
            )));
        }
        if sign != 0.0 && v.signum() != sign {
            return Err(Error::Fit(format!(
                "{} changes sign along the sequence",
                component.letter()
            )));
        }
        sign = v.signum();
        xs.push(x0.ln());
        ys.push(v.abs().ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// One-sided limits at `Γ` of `∂^k W / ∂x0^k` for `k = 0 ..= max_order`.
/// A diverging component is reported as [`Error::DivergentLimit`].
pub fn derivative_limits<W: WForm + ?Sized>(
    omega: &W,
    x1: f64,
    x2: f64,
    seq: &GeometricSequence,
    side: BoundarySide,
    max_order: usize,
) -> Result<Vec<[f64; 3]>> {
    let series = derivative_series(omega, x1, x2, seq, side, max_order)?;
    let mut out = vec![];
    for per_order in &series {
        let mut lim = [0.0; 3];
        for c in Component::ALL {
            let vals = &per_order[c.index()];
            if is_divergent(vals) {
                return Err(Error::DivergentLimit {
                    component: c.letter(),
                    side: side.name(),
                });
            }
            lim[c.index()] = seq.limit(vals);
        }
        out.push(lim);
    }
    Ok(out)
}

/// `series[k][c][j]`: the k-th x0-derivative of component `c` at sequence point `j`.
fn derivative_series<W: WForm + ?Sized>(
    omega: &W,
    x1: f64,
    x2: f64,
    seq: &GeometricSequence,
    side: BoundarySide,
    max_order: usize,
) -> Result<Vec<[Vec<f64>; 3]>> {
    let mut series: Vec<[Vec<f64>; 3]> = (0..=max_order).map(|_| [vec![], vec![], vec![]]).collect();
    for x0 in seq.values() {
        let p = sequence_point(omega, side.sign() * x0, x1, x2)?;
        let jets = omega.jets(&p, Axis::X0, max_order)?;
        for (k, per_order) in series.iter_mut().enumerate() {
            for c in 0..3 {
                per_order[c].push(jets[c].derivative(k));
            }
        }
    }
    Ok(series)
}

/// Worst growth of any x0-derivative (orders `0 ..= max_order`) along a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessScan {
    /// Largest growth factor found; 1 when nothing grows.
    pub worst_growth: f64,
    pub component: Component,
    pub order: usize,
}

impl SmoothnessScan {
    pub fn is_smooth(&self) -> bool {
        self.worst_growth <= DIVERGENCE_FACTOR
    }
}

pub fn boundary_smoothness<W: WForm + ?Sized>(
    omega: &W,
    x1: f64,
    x2: f64,
    seq: &GeometricSequence,
    side: BoundarySide,
    max_order: usize,
) -> Result<SmoothnessScan> {
    let series = derivative_series(omega, x1, x2, seq, side, max_order)?;
    let mut scan = SmoothnessScan {
        worst_growth: 1.0,
        component: Component::A,
        order: 0,
    };
    for (k, per_order) in series.iter().enumerate() {
        for c in Component::ALL {
            if let Some(g) = growth_factor(&per_order[c.index()]) {
                if g > scan.worst_growth {
                    scan = SmoothnessScan {
                        worst_growth: g,
                        component: c,
                        order: k,
                    };
                }
            }
        }
    }
    Ok(scan)
}

/// The default probing sequence at `(x1, x2)`, started well inside the guard.
pub fn default_sequence(alpha: f64, x1: f64, x2: f64) -> GeometricSequence {
    let d = GeometricSequence::default();
    GeometricSequence {
        start: d.start / domain_bound(alpha, x1, x2),
        ..d
    }
}

/// `|W(0⁺) - W(0⁻)|` per component for the reflected closed witness.
pub fn two_sided_gap(alpha: f64, x1: f64, x2: f64) -> Result<[f64; 3]> {
    let gaps = derivative_gaps(alpha, x1, x2, 0)?;
    Ok(gaps[0])
}

/// One-sided limits at `Γ` of the x0-derivatives (orders `0 ..= max_order`) of
/// the reflected closed witness: `(from x0 > 0, from x0 < 0)`.
pub fn two_sided_limits(
    alpha: f64,
    x1: f64,
    x2: f64,
    max_order: usize,
) -> Result<(Vec<[f64; 3]>, Vec<[f64; 3]>)> {
    let w = ReflectedWitness::new(alpha)?;
    let seq = default_sequence(alpha, x1, x2);
    let plus = derivative_limits(&w, x1, x2, &seq, BoundarySide::Positive, max_order)?;
    let minus = derivative_limits(&w, x1, x2, &seq, BoundarySide::Negative, max_order)?;
    Ok((plus, minus))
}

/// `|∂^k W/∂x0^k (0⁺) - ∂^k W/∂x0^k (0⁻)|` for `k = 0 ..= max_order` for the
/// reflected closed witness.
pub fn derivative_gaps(alpha: f64, x1: f64, x2: f64, max_order: usize) -> Result<Vec<[f64; 3]>> {
    let (plus, minus) = two_sided_limits(alpha, x1, x2, max_order)?;
    Ok(plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| [0, 1, 2].map(|i| (p[i] - m[i]).abs()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FnForm;
    use crate::gvl::ClosedWitness;
    use crate::jets::JetScalar;

    #[test]
    fn sequence_validation() {
        assert!(GeometricSequence::new(0.1, 0.5, 5).is_err());
        assert!(GeometricSequence::new(0.1, 1.5, 8).is_err());
        assert!(GeometricSequence::new(-0.1, 0.5, 8).is_err());
        let s = GeometricSequence::default();
        assert_eq!(s.values().len(), 8);
        assert_eq!(GeometricSequence::from_values(&s.values()).unwrap().len, 8);
        assert!(GeometricSequence::from_values(&[1.0, 0.5, 0.2, 0.1, 0.05, 0.025]).is_err());
    }

    #[test]
    fn growth_detection() {
        let grow: Vec<f64> = (0..8).map(|k| 2f64.powf(0.5 * k as f64)).collect();
        assert!(is_divergent(&grow));
        let settle: Vec<f64> = (0..8).map(|k| 1.0 + 0.5f64.powi(k)).collect();
        assert!(!is_divergent(&settle));
        let log: Vec<f64> = (1..9).map(|k| k as f64).collect();
        assert!(!is_divergent(&log));
    }

    #[test]
    fn linear_form_partials() {
        let w = FnForm::new(|x| {
            let z = JetScalar::constant(0.0, x[0].order())?;
            Ok([x[0], z, z])
        });
        let e = boundary_partials(&w, 0.0, 0.0, &GeometricSequence::default(), BoundarySide::Positive)
            .unwrap();
        assert_eq!(e.partials(), [1.0, 0.0, 0.0]);
        assert_eq!(e.sum, Some(1.0));
    }

    #[test]
    fn witness_partials_at_origin() {
        for alpha in [1.0, 2.0] {
            let w = ClosedWitness::new(alpha).unwrap();
            let e = boundary_partials(&w, 0.0, 0.0, &GeometricSequence::default(), BoundarySide::Positive)
                .unwrap();
            assert!(e.da_dx0.abs() <= 1e-6);
            assert!((e.db_dx1 - 1.0).abs() <= 1e-6);
            assert!(e.dc_dx2.abs() <= 1e-6);
            assert!((e.sum.unwrap() - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn domain_error_names_point() {
        let w = ClosedWitness::new(1.0).unwrap();
        let seq = GeometricSequence::new(2.0, 0.5, 6).unwrap();
        match boundary_partials(&w, 0.0, 0.0, &seq, BoundarySide::Positive) {
            Err(Error::Domain(msg)) => assert!(msg.starts_with("(2, 0, 0)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exponents_of_closed_witness() {
        let seq = GeometricSequence::default();
        let fit = |alpha: f64, c: Component| {
            exponent_fit(&ClosedWitness::new(alpha).unwrap(), c, 0.0, 0.0, &seq).unwrap()
        };
        assert!((fit(1.5, Component::C) - 0.5).abs() <= 0.01);
        assert!((fit(1.0, Component::A) - 3.0).abs() <= 0.01);
        assert!(fit(1.0, Component::C).abs() <= 0.01);
    }

    #[test]
    fn fit_rejects_zero_component() {
        let w = FnForm::zero();
        assert!(matches!(
            exponent_fit(&w, Component::B, 0.0, 0.0, &GeometricSequence::default()),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn gaps_of_reflected_witness() {
        let g = two_sided_gap(1.0, 0.0, 0.0).unwrap();
        assert!((g[2] - 8.0).abs() <= 1e-6);
        assert!(g[0] <= 1e-6 && g[1] <= 1e-6);
        let g = two_sided_gap(2.0, 0.0, 0.0).unwrap();
        assert!(g.iter().all(|&x| x <= 1e-6), "{g:?}");
    }

    #[test]
    fn c_diverges_below_one() {
        assert_eq!(
            two_sided_gap(0.5, 0.0, 0.0),
            Err(Error::DivergentLimit {
                component: 'C',
                side: "positive"
            })
        );
    }
}
