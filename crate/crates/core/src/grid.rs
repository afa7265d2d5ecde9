//! Externally supplied candidate forms sampled on a rectangular grid.
//!
//! The CSV format has the header `x0,x1,x2,A,B,C` and one row per node. Every
//! combination of the distinct `x0`, `x1` and `x2` values must appear exactly
//! once. Partials are three-point finite differences on the (possibly
//! non-uniform) grid, so only interior nodes can be evaluated.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{domain_error, Axis, FramePoint, WForm};
use crate::jets::JetScalar;

pub const HEADER: [&str; 6] = ["x0", "x1", "x2", "A", "B", "C"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Debug, Clone)]
pub struct GridForm {
    axes: [Vec<f64>; 3],
    values: Vec<[f64; 3]>,
}

fn csv_error(e: csv::Error) -> Error {
    Error::Grid(e.to_string())
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl GridForm {
    pub fn from_rows(rows: &[GridRow]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Grid("no samples".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            let all = [r.x0, r.x1, r.x2, r.a, r.b, r.c];
            if !all.iter().all(|v| v.is_finite()) {
                return Err(Error::Grid(format!("row {} has a non-finite entry", i + 1)));
            }
        }
        let axes = [
            sorted_unique(rows.iter().map(|r| r.x0).collect()),
            sorted_unique(rows.iter().map(|r| r.x1).collect()),
            sorted_unique(rows.iter().map(|r| r.x2).collect()),
        ];
        let shape = [axes[0].len(), axes[1].len(), axes[2].len()];
        if shape.iter().product::<usize>() != rows.len() {
            return Err(Error::Grid(format!(
                "{} rows do not form a rectangular {}x{}x{} grid",
                rows.len(),
                shape[0],
                shape[1],
                shape[2]
            )));
        }
        let mut values = vec![[f64::NAN; 3]; rows.len()];
        let mut seen = vec![false; rows.len()];
        let lookup: [HashMap<u64, usize>; 3] = [0, 1, 2].map(|k| {
            axes[k]
                .iter()
                .enumerate()
                .map(|(i, v)| (v.to_bits(), i))
                .collect()
        });
        for r in rows {
            let idx = [r.x0, r.x1, r.x2]
                .iter()
                .enumerate()
                .map(|(k, v)| lookup[k][&v.to_bits()])
                .collect::<Vec<_>>();
            let flat = (idx[0] * shape[1] + idx[1]) * shape[2] + idx[2];
            if seen[flat] {
                return Err(Error::Grid(format!(
                    "duplicate node ({}, {}, {})",
                    r.x0, r.x1, r.x2
                )));
            }
            seen[flat] = true;
            values[flat] = [r.a, r.b, r.c];
        }
        Ok(Self { axes, values })
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(csv_error)?.clone();
        if header.iter().ne(HEADER) {
            return Err(Error::Grid(format!(
                "header must be {}, got {}",
                HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let rows = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<GridRow>, _>>()
            .map_err(csv_error)?;
        Self::from_rows(&rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Grid(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    /// Sorted distinct node values along one axis.
    pub fn axis(&self, axis: Axis) -> &[f64] {
        &self.axes[axis.index()]
    }

    /// Nodes with a neighbour on both sides along every axis.
    pub fn interior_points(&self) -> Vec<FramePoint> {
        let inner = |a: &Vec<f64>| -> Vec<f64> {
            if a.len() < 3 {
                vec![]
            } else {
                a[1..a.len() - 1].to_vec()
            }
        };
        let (i0, i1, i2) = (inner(&self.axes[0]), inner(&self.axes[1]), inner(&self.axes[2]));
        let mut out = vec![];
        for &x1 in &i1 {
            for &x2 in &i2 {
                for &x0 in &i0 {
                    out.push(FramePoint::new(x0, x1, x2));
                }
            }
        }
        out
    }

    /// Index of the node equal to `v` up to a relative `1e-12`, so coordinates
    /// recomputed by arithmetic (such as a geometric sequence) still hit nodes.
    fn index_of(&self, axis: usize, v: f64) -> Option<usize> {
        let a = &self.axes[axis];
        let i = a.partition_point(|x| *x < v);
        let tol = 1e-12 * v.abs().max(f64::MIN_POSITIVE);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter(|&j| j < a.len() && (a[j] - v).abs() <= tol)
            .min_by(|&j, &k| (a[j] - v).abs().total_cmp(&(a[k] - v).abs()))
    }

    fn node(&self, p: &FramePoint) -> Option<[usize; 3]> {
        Some([
            self.index_of(0, p.x0)?,
            self.index_of(1, p.x1)?,
            self.index_of(2, p.x2)?,
        ])
    }

    fn value(&self, idx: [usize; 3]) -> [f64; 3] {
        let n1 = self.axes[1].len();
        let n2 = self.axes[2].len();
        self.values[(idx[0] * n1 + idx[1]) * n2 + idx[2]]
    }
}

impl WForm for GridForm {
    fn contains(&self, p: &FramePoint) -> bool {
        self.node(p).is_some_and(|idx| {
            (0..3).all(|k| idx[k] > 0 && idx[k] + 1 < self.axes[k].len())
        })
    }

    fn jets(&self, p: &FramePoint, axis: Axis, order: usize) -> Result<[JetScalar; 3]> {
        if !self.contains(p) {
            return Err(domain_error(p, "is not an interior node of the candidate grid"));
        }
        let idx = self.node(p).expect("checked by contains");
        let v = self.value(idx);
        match order {
            0 => Ok(v.map(|c| JetScalar::constant(c, 0).expect("order 0"))),
            1 => {
                let k = axis.index();
                let mut lo = idx;
                let mut hi = idx;
                lo[k] -= 1;
                hi[k] += 1;
                let (vl, vh) = (self.value(lo), self.value(hi));
                let a = &self.axes[k];
                let hm = a[idx[k]] - a[idx[k] - 1];
                let hp = a[idx[k] + 1] - a[idx[k]];
                // three-point derivative on a non-uniform stencil
                let cl = -hp / (hm * (hm + hp));
                let c0 = (hp - hm) / (hm * hp);
                let ch = hm / (hp * (hm + hp));
                let mut out = [JetScalar::constant(0.0, 1)?; 3];
                for i in 0..3 {
                    let d = cl * vl[i] + c0 * v[i] + ch * vh[i];
                    out[i] = JetScalar::from_derivatives(&[v[i], d])?;
                }
                Ok(out)
            }
            _ => Err(Error::InvalidArgument(format!(
                "candidate grids support jets of order <= 1, requested {order}"
            ))),
        }
    }
}

/// Samples `omega` on the tensor grid `x0s × x1s × x2s` and writes candidate CSV.
pub fn write_candidate<W, Wr>(omega: &W, x0s: &[f64], x1s: &[f64], x2s: &[f64], out: Wr) -> Result<()>
where
    W: WForm + ?Sized,
    Wr: Write,
{
    let mut w = csv::Writer::from_writer(out);
    for &x0 in x0s {
        for &x1 in x1s {
            for &x2 in x2s {
                let p = FramePoint::new(x0, x1, x2);
                let [a, b, c] = omega.coefficients(&p)?;
                w.serialize(GridRow { x0, x1, x2, a, b, c }).map_err(csv_error)?;
            }
        }
    }
    w.flush().map_err(|e| Error::Grid(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{divergence, FnForm};

    fn linear() -> FnForm {
        FnForm::new(|x| {
            let z = JetScalar::constant(0.0, x[0].order())?;
            Ok([x[0], x[1].scale(2.0), z])
        })
    }

    fn csv_of(omega: &FnForm) -> Vec<u8> {
        let mut buf = vec![];
        let xs = [0.1, 0.2, 0.35, 0.5];
        write_candidate(omega, &xs, &[-1.0, 0.0, 1.0], &[-1.0, 0.0, 2.0], &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trip_and_divergence() {
        let g = GridForm::from_reader(csv_of(&linear()).as_slice()).unwrap();
        let pts = g.interior_points();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!((divergence(&g, p).unwrap() - 3.0).abs() < 1e-12);
        }
        assert!(!g.contains(&FramePoint::new(0.1, 0.0, 0.0)));
        let nudged = FramePoint::new(0.2 * (1.0 + 1e-15), 0.0, 0.0);
        assert!(g.contains(&nudged));
        assert!(!g.contains(&FramePoint::new(0.2001, 0.0, 0.0)));
        assert!(g.sample(&FramePoint::new(0.1, 0.0, 0.0)).is_err());
    }

    #[test]
    fn rejects_bad_header() {
        let data = "x0,x1,x2,A,B\n0,0,0,1,2\n";
        assert!(matches!(GridForm::from_reader(data.as_bytes()), Err(Error::Grid(_))));
    }

    #[test]
    fn rejects_ragged_grid() {
        let mut text = String::from_utf8(csv_of(&linear())).unwrap();
        text.truncate(text.trim_end().rfind('\n').unwrap() + 1);
        assert!(matches!(GridForm::from_reader(text.as_bytes()), Err(Error::Grid(_))));
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        let data = "x0,x1,x2,A,B,C\n0,0,0,1,2,3\n0,0,0,1,2,3\n";
        assert!(GridForm::from_reader(data.as_bytes()).is_err());
        let data = "x0,x1,x2,A,B,C\n0,zero,0,1,2,3\n";
        assert!(GridForm::from_reader(data.as_bytes()).is_err());
    }
}
