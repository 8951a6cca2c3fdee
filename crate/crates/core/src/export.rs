//! Sample the screw-motion immersion of a solved tube and write meshes and
//! curves for offline visualization.
//!
//! The OBJ chart is cylindrical: (r, theta, z) -> (r cos theta, r sin theta, z).
//! This is a plotting convention only; the model metric is NOT the Euclidean
//! metric of this chart, so lengths and angles in the mesh are not ambient
//! lengths and angles.

use crate::error::{Error, Result};
use crate::moduli::TubeSolution;
use crate::profile::radius_at;
use crate::quad::QuadratureSettings;
use crate::space::{AmbientSpace, Pitch};
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

/// A (res_sigma x res_theta) grid of model points (r, theta, z) sampling the
/// immersion (sigma, theta) -> (r(sigma), theta, h(sigma) + a theta).
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub res_sigma: usize,
    pub res_theta: usize,
    pub theta_span: f64,
    /// Row-major: index = i_sigma * res_theta + i_theta.
    pub points: Vec<[f64; 3]>,
    /// Fiber length used for the vertical reduction, if the model is compact.
    pub fiber_period: Option<f64>,
}

impl SurfaceGrid {
    pub fn point(&self, i_sigma: usize, i_theta: usize) -> [f64; 3] {
        self.points[i_sigma * self.res_theta + i_theta]
    }

    /// Whether the first and last theta columns coincide (tube closed in theta).
    pub fn theta_seam_closed(&self, tol: f64) -> bool {
        (0..self.res_sigma).all(|i| {
            let a = self.point(i, 0);
            let b = self.point(i, self.res_theta - 1);
            let dz = match self.fiber_period {
                Some(l) => {
                    let d = (a[2] - b[2]).rem_euclid(l);
                    d.min(l - d)
                }
                None => (a[2] - b[2]).abs(),
            };
            (a[0] - b[0]).abs() <= tol && dz <= tol
        })
    }
}

/// Sample the immersion over sigma in [pi/2, 5pi/2] and theta in [0, theta_span]
/// (both endpoints included). In the compact model (kappa > 0, tau > 0) the
/// vertical coordinate is reduced to the centered fiber period.
pub fn sample_surface(
    space: &AmbientSpace,
    pitch: Pitch,
    tube: &TubeSolution,
    res_sigma: usize,
    res_theta: usize,
    theta_span: f64,
    quad: &QuadratureSettings,
) -> Result<SurfaceGrid> {
    if res_sigma < 2 || res_theta < 2 {
        return Err(Error::Domain("surface grid needs resolution >= 2".into()));
    }
    let fiber_period = if space.kappa() > 0.0 && space.tau() > 0.0 {
        Some(space.fiber_length()?)
    } else {
        None
    };
    let reduce = |z: f64| match fiber_period {
        Some(l) => z - l * (z / l).round(),
        None => z,
    };
    let mut heights = Vec::with_capacity(res_sigma);
    let mut radii = Vec::with_capacity(res_sigma);
    let mut prev_sigma = PI / 2.0;
    let mut acc = 0.0;
    for i in 0..res_sigma {
        let sigma = PI / 2.0 + 2.0 * PI * i as f64 / (res_sigma - 1) as f64;
        if i > 0 {
            acc += crate::profile::height_increment(
                space,
                pitch,
                &tube.point,
                prev_sigma,
                sigma,
                quad,
            )?;
        }
        radii.push(radius_at(space, &tube.point, sigma));
        heights.push(acc);
        prev_sigma = sigma;
    }
    let mut points = Vec::with_capacity(res_sigma * res_theta);
    for i in 0..res_sigma {
        for jt in 0..res_theta {
            let theta = theta_span * jt as f64 / (res_theta - 1) as f64;
            let z = heights[i] + pitch.value() * theta;
            points.push([radii[i], theta, reduce(z)]);
        }
    }
    Ok(SurfaceGrid {
        res_sigma,
        res_theta,
        theta_span,
        points,
        fiber_period,
    })
}

/// Chart used when flattening model coordinates to mesh vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Cylindrical,
}

/// Write the grid as an ASCII OBJ (v and f records, 1-based indices, LF
/// endings, triangulated quads). When the theta seam closes within 1e-9 the
/// faces are stitched to the first column so the mesh is watertight around
/// the screw axis; the duplicate seam vertices stay in the file so the vertex
/// count remains res_sigma * res_theta.
pub fn write_obj(grid: &SurfaceGrid, chart: Chart, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    render_obj(grid, chart, &mut buf).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    std::fs::write(path, buf).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn render_obj(grid: &SurfaceGrid, _chart: Chart, out: &mut impl Write) -> std::io::Result<()> {
    let (ns, nt) = (grid.res_sigma, grid.res_theta);
    for p in &grid.points {
        let (r, theta, z) = (p[0], p[1], p[2]);
        writeln!(
            out,
            "v {:.9} {:.9} {:.9}",
            r * theta.cos(),
            r * theta.sin(),
            z
        )?;
    }
    // stitching needs at least two distinct columns besides the seam copy
    let stitched = nt > 2 && grid.theta_seam_closed(1e-9);
    let cols = if stitched { nt - 1 } else { nt };
    let idx = |i: usize, j: usize| -> usize {
        let jj = if stitched && j == cols { 0 } else { j };
        i * nt + jj + 1
    };
    for i in 0..ns - 1 {
        for j in 0..cols.max(1) - if stitched { 0 } else { 1 } {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            writeln!(out, "f {a} {b} {c}")?;
            writeln!(out, "f {a} {c} {d}")?;
        }
    }
    Ok(())
}

/// Write a profile curve as CSV (sigma,r,h at 17 significant digits).
pub fn write_curve_csv(curve: &crate::profile::ProfileCurve, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    curve.write_csv(&mut buf).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    std::fs::write(path, buf).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}
