//! Sample grids over the guard region.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::FramePoint;

use super::ucoords::domain_bound;

/// `n` equally spaced values from `lo` to `hi`, written `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || n == 0 || (n > 1 && !(lo < hi)) {
            return Err(Error::InvalidArgument(format!(
                "axis range {lo}:{hi}:{n} needs finite lo < hi and n >= 1"
            )));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.lo + step * k as f64).collect()
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("expected lo:hi:n, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(lo, hi, n)
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

/// A tensor grid in `(x1, x2)` with `n_x0` logarithmically spaced `x0` values per
/// node, from `x0_fraction / a(x1, x2)` down `x0_decades` decades.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x1: AxisRange,
    pub x2: AxisRange,
    pub n_x0: usize,
    pub x0_fraction: f64,
    pub x0_decades: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x1: AxisRange { lo: -2.0, hi: 2.0, n: 9 },
            x2: AxisRange { lo: -2.0, hi: 2.0, n: 9 },
            n_x0: 20,
            x0_fraction: 0.9,
            x0_decades: 2.0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_x0 == 0 {
            return Err(Error::InvalidArgument("n_x0 must be at least 1".into()));
        }
        if !(self.x0_fraction > 0.0 && self.x0_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "x0 fraction must lie in (0, 1), got {}",
                self.x0_fraction
            )));
        }
        if !(self.x0_decades >= 0.0 && self.x0_decades.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "x0 decades must be a non-negative finite number, got {}",
                self.x0_decades
            )));
        }
        Ok(())
    }

    /// `x0` values for one `(x1, x2)` node, largest first.
    pub fn x0_values(&self, alpha: f64, x1: f64, x2: f64) -> Vec<f64> {
        let top = self.x0_fraction / domain_bound(alpha, x1, x2);
        if self.n_x0 == 1 {
            return vec![top];
        }
        let span = (self.n_x0 - 1) as f64;
        (0..self.n_x0)
            .map(|k| top * 10f64.powf(-self.x0_decades * k as f64 / span))
            .collect()
    }

    /// All grid points in deterministic order: x1 outermost, then x2, then x0.
    pub fn points(&self, alpha: f64) -> Result<Vec<FramePoint>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.x1.n * self.x2.n * self.n_x0);
        for x1 in self.x1.values() {
            for x2 in self.x2.values() {
                for x0 in self.x0_values(alpha, x1, x2) {
                    out.push(FramePoint::new(x0, x1, x2));
                }
            }
        }
        Ok(out)
    }

    /// The `(x1, x2)` nodes.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let x2s = self.x2.values();
        self.x1
            .values()
            .into_iter()
            .flat_map(|x1| x2s.iter().map(move |&x2| (x1, x2)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gvl::ucoords::in_guard;

    #[test]
    fn parse_range() {
        let r: AxisRange = "-2:2:9".parse().unwrap();
        assert_eq!(r, AxisRange { lo: -2.0, hi: 2.0, n: 9 });
        assert_eq!(r.values()[4], 0.0);
        assert!("1:0:3".parse::<AxisRange>().is_err());
        assert!("1:2".parse::<AxisRange>().is_err());
        assert!("a:2:3".parse::<AxisRange>().is_err());
    }

    #[test]
    fn default_grid_is_in_guard() {
        let pts = GridSpec::default().points(2.0).unwrap();
        assert_eq!(pts.len(), 1620);
        assert!(pts.iter().all(|p| in_guard(2.0, p)));
    }
}
