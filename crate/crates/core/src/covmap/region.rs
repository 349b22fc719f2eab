//! Physical-region scans in the `(x, y) = (beta·m_11, C)` plane at fixed `alpha`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::{apply, canonical_coefficients, positivity_flags, EigenFamily, MapParams};
use crate::bloch::BlochVector;
use crate::error::{check_dimension, Error, Result};

/// Points whose oracle eigenvalue is closer to zero than this are not used to
/// judge agreement between the two physicality tests.
pub const AGREEMENT_BAND: f64 = 1e-9;

const ACTIVE_TOL: f64 = 1e-12;

/// Closed interval `[min, max]`; `min == max` is allowed and samples one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::validation(format!(
                "interval [{min}, {max}] is not finite"
            )));
        }
        if min > max {
            return Err(Error::validation(format!(
                "interval [{min}, {max}] is inverted"
            )));
        }
        Ok(Interval { min, max })
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min - ACTIVE_TOL && v <= self.max + ACTIVE_TOL
    }

    /// `resolution` evenly spaced samples including both ends.
    pub fn samples(&self, resolution: usize) -> Vec<f64> {
        if self.min == self.max {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (resolution - 1) as f64;
        (0..resolution)
            .map(|k| {
                if k + 1 == resolution {
                    self.max
                } else {
                    self.min + span * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPoint {
    pub x: f64,
    pub y: f64,
    /// Decided by the four constraints.
    pub physical: bool,
    /// Decided by the dense spectrum of the map output.
    pub eig_physical: bool,
    pub min_eig: f64,
    pub margin: f64,
}

impl RegionPoint {
    /// Whether the two tests disagree at a point that is not near-degenerate.
    pub fn disagrees(&self) -> bool {
        self.min_eig.abs() > AGREEMENT_BAND && self.physical != self.eig_physical
    }
}

/// Grid of region points; `points[iy * xs.len() + ix]`.
#[derive(Debug, Clone)]
pub struct RegionScan {
    pub n: usize,
    pub alpha: f64,
    pub resolution: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub points: Vec<RegionPoint>,
}

/// Scans the `(beta·m_11, C)` plane, deciding physicality both from the
/// constraints and from the minimum eigenvalue of the canonical output.
pub fn region_scan(
    n: usize,
    alpha: f64,
    x_range: Interval,
    y_range: Interval,
    resolution: usize,
) -> Result<RegionScan> {
    check_dimension(n)?;
    if resolution < 2 {
        return Err(Error::validation(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    MapParams::new(n, alpha, 0.0, 0.0)?;
    let xs = x_range.samples(resolution);
    let ys = y_range.samples(resolution);
    let canonical = BlochVector::canonical(n)?;
    let nx = xs.len();
    let points = (0..xs.len() * ys.len())
        .into_par_iter()
        .map(|idx| {
            let (x, y) = (xs[idx % nx], ys[idx / nx]);
            let params = MapParams::new(n, alpha, x / n as f64, y)?;
            let flags = positivity_flags(&canonical_coefficients(&params));
            let min_eig = apply(&params, &canonical)?.min_eigenvalue();
            Ok(RegionPoint {
                x,
                y,
                physical: flags.is_physical(),
                eig_physical: min_eig >= super::MARGIN_TOL,
                min_eig,
                margin: flags.margin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionScan {
        n,
        alpha,
        resolution,
        xs,
        ys,
        points,
    })
}

impl RegionScan {
    pub fn at(&self, ix: usize, iy: usize) -> &RegionPoint {
        &self.points[iy * self.xs.len() + ix]
    }

    pub fn physical_count(&self) -> usize {
        self.points.iter().filter(|p| p.physical).count()
    }

    pub fn disagreements(&self) -> Vec<&RegionPoint> {
        self.points.iter().filter(|p| p.disagrees()).collect()
    }

    /// Discrete convexity: along every row, column and diagonal of the grid the
    /// physical points form one contiguous run.
    pub fn is_grid_convex(&self) -> bool {
        let (nx, ny) = (self.xs.len() as isize, self.ys.len() as isize);
        let phys = |ix: isize, iy: isize| self.at(ix as usize, iy as usize).physical;
        let contiguous = |line: &mut dyn Iterator<Item = bool>| {
            // physical runs seen so far; a second run means a gap
            let mut runs = 0;
            let mut prev = false;
            for p in line {
                if p && !prev {
                    runs += 1;
                }
                prev = p;
            }
            runs <= 1
        };
        for iy in 0..ny {
            if !contiguous(&mut (0..nx).map(|ix| phys(ix, iy))) {
                return false;
            }
        }
        for ix in 0..nx {
            if !contiguous(&mut (0..ny).map(|iy| phys(ix, iy))) {
                return false;
            }
        }
        for offset in -(ny - 1)..nx {
            let mut diag = (0..ny).filter_map(|iy| {
                let ix = iy + offset;
                (0..nx).contains(&ix).then(|| phys(ix, iy))
            });
            if !contiguous(&mut diag) {
                return false;
            }
            let mut anti = (0..ny).filter_map(|iy| {
                let ix = offset + (ny - 1 - iy);
                (0..nx).contains(&ix).then(|| phys(ix, iy))
            });
            if !contiguous(&mut anti) {
                return false;
            }
        }
        true
    }

    /// CSV with header `x,y,physical,min_eig,margin`, floats to 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,y,physical,min_eig,margin")?;
        for p in &self.points {
            writeln!(
                w,
                "{:.16e},{:.16e},{},{:.16e},{:.16e}",
                p.x, p.y, p.physical, p.min_eig, p.margin
            )?;
        }
        Ok(())
    }
}

/// A vertex of the physical polygon, where two or more eigenvalue lines meet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub margin: f64,
    pub slacks: [f64; 4],
    /// Eigenvalue families vanishing here.
    pub active: Vec<EigenFamily>,
}

impl CriticalPoint {
    /// All four positivity constraints hold with equality.
    pub fn all_constraints_active(&self) -> bool {
        self.slacks.iter().all(|s| s.abs() < ACTIVE_TOL)
    }
}

/// Each eigenvalue family is affine in `(x, y)`: `c0 + cx·x + cy·y`.
fn family_lines(n: usize, alpha: f64) -> Result<Vec<(EigenFamily, [f64; 3])>> {
    let eval = |x: f64, y: f64| -> Result<super::CanonicalCoefficients> {
        Ok(canonical_coefficients(&MapParams::new(
            n,
            alpha,
            x / n as f64,
            y,
        )?))
    };
    let (k0, kx, ky) = (eval(0.0, 0.0)?, eval(1.0, 0.0)?, eval(0.0, 1.0)?);
    Ok(EigenFamily::ALL
        .iter()
        .filter(|f| f.multiplicity(n) > 0)
        .map(|&f| {
            let c0 = f.value(&k0);
            (f, [c0, f.value(&kx) - c0, f.value(&ky) - c0])
        })
        .collect())
}

/// Vertices of the physical polygon at fixed `alpha`, sorted by the number of
/// simultaneously vanishing eigenvalue families (most first), then by `(y, x)`.
pub fn critical_points(n: usize, alpha: f64) -> Result<Vec<CriticalPoint>> {
    check_dimension(n)?;
    let lines = family_lines(n, alpha)?;
    let mut found: Vec<CriticalPoint> = Vec::new();
    for (a, &(_, la)) in lines.iter().enumerate() {
        for &(_, lb) in &lines[a + 1..] {
            let det = la[1] * lb[2] - la[2] * lb[1];
            if det.abs() < 1e-14 {
                continue;
            }
            let x = (-la[0] * lb[2] + la[2] * lb[0]) / det;
            let y = (-la[1] * lb[0] + la[0] * lb[1]) / det;
            if found
                .iter()
                .any(|p| (p.x - x).abs() < 1e-10 && (p.y - y).abs() < 1e-10)
            {
                continue;
            }
            let params = MapParams::new(n, alpha, x / n as f64, y)?;
            let k = canonical_coefficients(&params);
            let flags = positivity_flags(&k);
            if !flags.is_physical() {
                continue;
            }
            let active = lines
                .iter()
                .filter(|(f, _)| f.value(&k).abs() < ACTIVE_TOL)
                .map(|&(f, _)| f)
                .collect();
            found.push(CriticalPoint {
                x,
                y,
                margin: flags.margin,
                slacks: flags.slacks,
                active,
            });
        }
    }
    found.sort_by(|p, q| {
        q.active
            .len()
            .cmp(&p.active.len())
            .then(p.y.total_cmp(&q.y))
            .then(p.x.total_cmp(&q.x))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        let i = Interval::new(-1.0, 1.0).unwrap();
        let s = i.samples(3);
        assert_eq!(s, vec![-1.0, 0.0, 1.0]);
        assert_eq!(Interval::new(0.0, 0.0).unwrap().samples(5), vec![0.0]);
    }

    #[test]
    fn scan_rejects_bad_resolution() {
        let w = Interval::new(-0.1, 0.1).unwrap();
        assert!(region_scan(3, 0.0, w, w, 1).is_err());
        assert!(region_scan(1, 0.0, w, w, 5).is_err());
    }

    #[test]
    fn degenerate_window_at_origin() {
        let z = Interval::new(0.0, 0.0).unwrap();
        for n in 2..=5 {
            let scan = region_scan(n, 0.0, z, z, 7).unwrap();
            assert_eq!(scan.points.len(), 1);
            assert!(scan.points[0].physical && scan.points[0].eig_physical);
        }
    }

    #[test]
    fn window_above_c_equals_one_is_empty() {
        let x = Interval::new(-0.3, 0.3).unwrap();
        let y = Interval::new(1.01, 2.0).unwrap();
        let scan = region_scan(3, 0.0, x, y, 11).unwrap();
        assert_eq!(scan.physical_count(), 0);
        assert!(scan.points.iter().all(|p| !p.eig_physical));
    }

    #[test]
    fn grey_dot_is_unique_triple_vertex_at_n3() {
        let pts = critical_points(3, 0.0).unwrap();
        let top = &pts[0];
        assert!(top.x.abs() < 1e-15 && (top.y + 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(top.active.len(), 3);
        assert!(top.all_constraints_active());
        assert!(pts[1..]
            .iter()
            .all(|p| p.active.len() < 3 && !p.all_constraints_active()));
    }

    #[test]
    fn csv_layout() {
        let w = Interval::new(0.0, 0.0).unwrap();
        let scan = region_scan(3, 0.0, w, w, 2).unwrap();
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y,physical,min_eig,margin"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[2], "true");
        assert_eq!(row[4], "1.1111111111111110e-1");
    }
}
