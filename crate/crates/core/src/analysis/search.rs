//! Brute-force grid searches over the parameter space.
//!
//! These are oracles for the closed-form parameter points and do not use them.

use rayon::prelude::*;
use serde::Serialize;

use super::entropy_of_spectrum;
use crate::bloch::BlochVector;
use crate::covmap::{
    apply, canonical_coefficients, positivity_flags, Interval, MapParams, MARGIN_TOL,
};
use crate::error::{check_dimension, Error, Result};

/// Entropies closer than this are ties, broken by smaller `(C, beta·m_11)`.
const ENTROPY_TIE: f64 = 1e-12;
/// Local grid minima refined per search.
const MAX_CANDIDATES: usize = 8;
const ZOOM_RESOLUTION: usize = 21;
const ZOOM_LEVELS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizerResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub beta_m11: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub entropy: f64,
    pub resolution: usize,
}

/// Canonical-output entropy at `(x, y) = (beta·m_11, C)` with `alpha = 0`, or
/// `None` outside the physical region. Physicality comes from the dense
/// spectrum, not from the constraint formulas.
fn slice_entropy(n: usize, canonical: &BlochVector, x: f64, y: f64) -> Result<Option<f64>> {
    let params = MapParams::new(n, 0.0, x / n as f64, y)?;
    let eigs = apply(&params, canonical)?.eigenvalues();
    if eigs[0] < MARGIN_TOL {
        return Ok(None);
    }
    entropy_of_spectrum(&eigs).map(Some)
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    x: f64,
    y: f64,
    s: f64,
}

fn better(a: &Sample, b: &Sample) -> bool {
    if (a.s - b.s).abs() <= ENTROPY_TIE {
        (a.y, a.x) < (b.y, b.x)
    } else {
        a.s < b.s
    }
}

fn scan(n: usize, canonical: &BlochVector, xs: &[f64], ys: &[f64]) -> Result<Vec<Option<f64>>> {
    (0..xs.len() * ys.len())
        .into_par_iter()
        .map(|idx| slice_entropy(n, canonical, xs[idx % xs.len()], ys[idx / xs.len()]))
        .collect()
}

/// Grid search for the minimum-entropy point of the `alpha = 0` slice over
/// `[−0.5, 0.5]²`.
pub fn entropy_minimizer(n: usize, resolution: usize) -> Result<MinimizerResult> {
    let w = Interval::new(-0.5, 0.5)?;
    entropy_minimizer_in(n, resolution, w, w)
}

/// Grid search for the minimum-entropy point in the given window.
///
/// Entropy is concave in the state and the state is affine in `(x, y)`, so
/// the minimum sits on a vertex of the physical polygon, where it is not
/// resolved by any fixed grid. The search therefore
///
/// 1. scans the window, then rescans the bounding box of its physical points;
/// 2. collects the grid's local minima;
/// 3. zooms into each of the best few with successively finer grids;
/// 4. returns the lowest, ties broken by smaller `(C, beta·m_11)`.
pub fn entropy_minimizer_in(
    n: usize,
    resolution: usize,
    x_range: Interval,
    y_range: Interval,
) -> Result<MinimizerResult> {
    check_dimension(n)?;
    if resolution < 50 {
        return Err(Error::validation(format!(
            "resolution must be at least 50, got {resolution}"
        )));
    }
    let canonical = BlochVector::canonical(n)?;

    let mut xs = x_range.samples(resolution);
    let mut ys = y_range.samples(resolution);
    let mut vals = scan(n, &canonical, &xs, &ys)?;

    // tighten the window around the physical points found
    let cell = |v: &[f64]| if v.len() > 1 { v[1] - v[0] } else { 0.0 };
    let (dx, dy) = (cell(&xs), cell(&ys));
    let feasible: Vec<(f64, f64)> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_some())
        .map(|(idx, _)| (xs[idx % xs.len()], ys[idx / xs.len()]))
        .collect();
    if feasible.is_empty() {
        return Err(Error::validation("no physical point in the search window"));
    }
    let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| {
        feasible.iter().map(pick).fold(init, f)
    };
    let bx = Interval::new(
        (fold(f64::min, f64::INFINITY, |p| p.0) - dx).max(x_range.min),
        (fold(f64::max, f64::NEG_INFINITY, |p| p.0) + dx).min(x_range.max),
    )?;
    let by = Interval::new(
        (fold(f64::min, f64::INFINITY, |p| p.1) - dy).max(y_range.min),
        (fold(f64::max, f64::NEG_INFINITY, |p| p.1) + dy).min(y_range.max),
    )?;
    if bx.max - bx.min < 0.5 * (x_range.max - x_range.min)
        || by.max - by.min < 0.5 * (y_range.max - y_range.min)
    {
        xs = bx.samples(resolution);
        ys = by.samples(resolution);
        vals = scan(n, &canonical, &xs, &ys)?;
    }

    let (nx, ny) = (xs.len(), ys.len());
    let (dx, dy) = (cell(&xs), cell(&ys));
    let mut minima: Vec<Sample> = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let Some(s) = vals[iy * nx + ix] else {
                continue;
            };
            let mut is_min = true;
            for jy in iy.saturating_sub(1)..(iy + 2).min(ny) {
                for jx in ix.saturating_sub(1)..(ix + 2).min(nx) {
                    if let Some(t) = vals[jy * nx + jx] {
                        if t < s {
                            is_min = false;
                        }
                    }
                }
            }
            if is_min {
                minima.push(Sample {
                    x: xs[ix],
                    y: ys[iy],
                    s,
                });
            }
        }
    }
    minima.sort_by(|a, b| {
        a.s.total_cmp(&b.s)
            .then(a.y.total_cmp(&b.y))
            .then(a.x.total_cmp(&b.x))
    });
    minima.truncate(MAX_CANDIDATES);

    let refined = minima
        .par_iter()
        .map(|start| zoom(n, &canonical, *start, dx, dy, &x_range, &y_range))
        .collect::<Result<Vec<_>>>()?;
    let best = refined
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one physical grid point");

    Ok(MinimizerResult {
        n,
        beta_m11: best.x,
        c: best.y,
        entropy: best.s,
        resolution,
    })
}

fn zoom(
    n: usize,
    canonical: &BlochVector,
    mut best: Sample,
    mut dx: f64,
    mut dy: f64,
    x_range: &Interval,
    y_range: &Interval,
) -> Result<Sample> {
    for _ in 0..ZOOM_LEVELS {
        if dx.max(dy) < 1e-13 {
            break;
        }
        let sub = |c: f64, h: f64, r: &Interval| -> Result<Vec<f64>> {
            Ok(
                Interval::new((c - 2.0 * h).max(r.min), (c + 2.0 * h).min(r.max))?
                    .samples(ZOOM_RESOLUTION),
            )
        };
        let xs = sub(best.x, dx, x_range)?;
        let ys = sub(best.y, dy, y_range)?;
        for (idx, v) in scan(n, canonical, &xs, &ys)?.into_iter().enumerate() {
            if let Some(s) = v {
                let cand = Sample {
                    x: xs[idx % xs.len()],
                    y: ys[idx / xs.len()],
                    s,
                };
                if better(&cand, &best) {
                    best = cand;
                }
            }
        }
        let shrink = 4.0 / (ZOOM_RESOLUTION - 1) as f64;
        dx *= shrink;
        dy *= shrink;
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CloningSearchResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha_m11: f64,
    pub beta_m11: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// Best `M11` from the constraint formulas.
    pub m11: f64,
    /// `⟨11|ρ|11⟩` of the map output at the winner.
    pub fidelity: f64,
    /// Minimum eigenvalue of the map output at the winner.
    pub min_eig: f64,
    /// Grid spacing on every axis.
    pub cell: f64,
}

/// Maximizes the clone weight `⟨11|ρ|11⟩ = M11` over a `resolution³` grid of
/// `(alpha·m_11, beta·m_11, C)`, each axis spanning `window`, subject to the
/// four positivity constraints. The winner is re-evaluated through the full map.
pub fn cloning_grid_search(
    n: usize,
    resolution: usize,
    window: Interval,
) -> Result<CloningSearchResult> {
    check_dimension(n)?;
    if resolution < 2 || window.min == window.max {
        return Err(Error::validation(
            "cloning search needs resolution ≥ 2 and a non-empty window",
        ));
    }
    let g = window.samples(resolution);
    let best = g
        .par_iter()
        .map(|&a| {
            let mut best: Option<(f64, f64, f64, f64)> = None;
            for &x in &g {
                for &y in &g {
                    let p = MapParams::from_products(n, a, x, y).expect("finite grid");
                    let k = canonical_coefficients(&p);
                    if !positivity_flags(&k).is_physical() {
                        continue;
                    }
                    if best.is_none_or(|b| k.m11 > b.0) {
                        best = Some((k.m11, a, x, y));
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .reduce(|b, c| if c.0 > b.0 { c } else { b })
        .ok_or_else(|| Error::validation("no physical point in the cloning search window"))?;

    let (m11, a, x, y) = best;
    let params = MapParams::from_products(n, a, x, y)?;
    let out = apply(&params, &BlochVector::canonical(n)?)?;
    Ok(CloningSearchResult {
        n,
        alpha_m11: a,
        beta_m11: x,
        c: y,
        m11,
        fidelity: out.entry(0, 0).re,
        min_eig: out.min_eigenvalue(),
        cell: g[1] - g[0],
    })
}
