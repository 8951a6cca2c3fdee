//! Area and enclosed-volume quadratures for compact tubes in the Berger
//! model, and the (volume, area) profile sweep over mean-curvature grids.

use crate::error::{Error, Result};
use crate::moduli::{tube_energy, SolveStatus, TubeSolution};
use crate::profile::{height_at, radius_at, radius_derivative};
use crate::quad::{integrate, QuadratureSettings};
use crate::roots::RootFindSettings;
use crate::space::AmbientSpace;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

fn check_closing_pitch(space: &AmbientSpace, m: u32, tube: &TubeSolution) -> Result<f64> {
    if space.kappa() <= 0.0 {
        return Err(Error::NotApplicable(
            "compact tubes require kappa > 0".into(),
        ));
    }
    let a = space.berger_pitch(1, m)?.pitch.value();
    if (tube.pitch.value() - a).abs() > 1e-9 * a.abs().max(1.0) {
        return Err(Error::NotClosing(format!(
            "tube pitch {} does not close after {m} turns (expected {a})",
            tube.pitch.value()
        )));
    }
    Ok(a)
}

/// Surface area of the compact tube with pitch a_{1,m}: the profile half-arc
/// integrated with the induced line element and swept over 2 pi m turns
/// (the two half-arcs are congruent).
pub fn tube_area(
    space: &AmbientSpace,
    m: u32,
    tube: &TubeSolution,
    quad: &QuadratureSettings,
) -> Result<f64> {
    let a = check_closing_pitch(space, m, tube)?;
    let point = &tube.point;
    let t = space.tau();
    let integrand = |sig: f64| {
        let r = radius_at(space, point, sig);
        let dr = radius_derivative(space, point, sig);
        let dh = crate::profile::height_derivative(space, tube.pitch, point, sig)?;
        let sn = space.sn(r);
        let twist = 4.0 * t * space.sn(0.5 * r).powi(2) - a;
        Ok(((sn * sn + twist * twist) * dr * dr + sn * sn * dh * dh).sqrt())
    };
    let half = integrate(integrand, PI / 2.0, 3.0 * PI / 2.0, quad)?;
    Ok(4.0 * PI * f64::from(m) * half)
}

/// Enclosed volume of the compact tube with pitch a_{1,m}, computed in the
/// turning-angle variable along the strictly monotone upper branch:
/// 4 pi m * integral of sn(r) h (-dr/dsigma). The slab between the two
/// mirror branches contributes the factor 2 already included.
pub fn tube_volume(
    space: &AmbientSpace,
    m: u32,
    tube: &TubeSolution,
    quad: &QuadratureSettings,
) -> Result<f64> {
    check_closing_pitch(space, m, tube)?;
    let point = &tube.point;
    // the upper branch must be a graph over r with non-negative height
    for i in 1..32 {
        let sig = PI / 2.0 + PI * i as f64 / 32.0;
        if radius_derivative(space, point, sig) >= 0.0 {
            return Err(Error::Geometry(format!(
                "radius not strictly decreasing at sigma = {sig}"
            )));
        }
    }
    let h0 = height_at(space, tube.pitch, point, 3.0 * PI / 2.0, quad)?;
    if h0 < -1e-7 {
        return Err(Error::Geometry(format!(
            "upper branch dips below the symmetry line (h(3pi/2) = {h0:.3e}); not a closed tube"
        )));
    }
    let integrand = |sig: f64| {
        let r = radius_at(space, point, sig);
        let h = height_at(space, tube.pitch, point, sig, quad)?;
        Ok(space.sn(r) * h * (-radius_derivative(space, point, sig)))
    };
    let v = integrate(integrand, PI / 2.0, 3.0 * PI / 2.0, quad)?;
    Ok(4.0 * PI * f64::from(m) * v)
}

/// Total volume of the compact model: 32 pi^2 tau / kappa^2
/// (radial volume element sn(r), fiber length 8 pi tau / kappa).
pub fn ambient_volume(space: &AmbientSpace) -> Result<f64> {
    if space.kappa() <= 0.0 || space.tau() <= 0.0 {
        return Err(Error::NotApplicable(
            "finite ambient volume requires the compact model (kappa > 0, tau > 0)".into(),
        ));
    }
    Ok(32.0 * PI * PI * space.tau() / (space.kappa() * space.kappa()))
}

/// One row of the isoperimetric sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub pitch_n: u32,
    pub pitch_m: u32,
    pub a: f64,
    pub h: f64,
    pub j_tube: Option<f64>,
    pub volume: Option<f64>,
    pub vol_complement: Option<f64>,
    pub area: Option<f64>,
    pub status: SolveStatus,
    pub message: Option<String>,
}

/// Sweep the (volume, area) profile of the compact tube families a_{1,m} over
/// a mean-curvature grid. Rows where no tube exists are recorded, never
/// skipped; per-row failures do not abort the sweep. Rows are evaluated in
/// parallel but assembled in grid order.
pub fn profile_sweep(
    space: &AmbientSpace,
    m_list: &[u32],
    h_grid: &[f64],
    roots: &RootFindSettings,
    quad: &QuadratureSettings,
) -> Result<Vec<SweepRow>> {
    if space.kappa() <= 0.0 {
        return Err(Error::NotApplicable(
            "the sweep targets the compact model".into(),
        ));
    }
    let ambient = ambient_volume(space)?;
    let jobs: Vec<(u32, f64)> = m_list
        .iter()
        .flat_map(|&m| h_grid.iter().map(move |&h| (m, h)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(m, h)| sweep_row(space, m, h, ambient, roots, quad))
        .collect())
}

fn sweep_row(
    space: &AmbientSpace,
    m: u32,
    h: f64,
    ambient: f64,
    roots: &RootFindSettings,
    quad: &QuadratureSettings,
) -> SweepRow {
    let report = match space.berger_pitch(1, m) {
        Ok(r) => r,
        Err(e) => return error_row(space, m, h, e.to_string()),
    };
    let mut row = SweepRow {
        pitch_n: 1,
        pitch_m: m,
        a: report.pitch.value(),
        h,
        j_tube: None,
        volume: None,
        vol_complement: None,
        area: None,
        status: SolveStatus::NoTube,
        message: None,
    };
    if report.tube_exists == Some(false) {
        row.message = Some("pitch is neither admissible nor conjugate-admissible".into());
        return row;
    }
    match tube_energy(space, report.pitch, h, roots, quad) {
        Ok(sol) => {
            row.j_tube = Some(sol.point.j());
            match (
                tube_volume(space, m, &sol, quad),
                tube_area(space, m, &sol, quad),
            ) {
                (Ok(v), Ok(a)) => {
                    row.volume = Some(v);
                    row.vol_complement = Some(ambient - v);
                    row.area = Some(a);
                    row.status = SolveStatus::Ok;
                }
                (v, a) => {
                    row.status = SolveStatus::Error;
                    row.message = Some(
                        v.err()
                            .or(a.err())
                            .map(|e| e.to_string())
                            .unwrap_or_default(),
                    );
                }
            }
        }
        Err(Error::NoTube(msg)) => {
            row.status = SolveStatus::NoTube;
            row.message = Some(msg);
        }
        Err(e) => {
            row.status = SolveStatus::Error;
            row.message = Some(e.to_string());
        }
    }
    row
}

fn error_row(space: &AmbientSpace, m: u32, h: f64, message: String) -> SweepRow {
    SweepRow {
        pitch_n: 1,
        pitch_m: m,
        a: 4.0 * space.tau() / space.kappa() / f64::from(m),
        h,
        j_tube: None,
        volume: None,
        vol_complement: None,
        area: None,
        status: SolveStatus::Error,
        message: Some(message),
    }
}

/// CSV columns: pitch_n,pitch_m,a,H,J_tube,volume,vol_complement,area,status.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "pitch_n,pitch_m,a,H,J_tube,volume,vol_complement,area,status"
    )?;
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{},{},{},{},{}",
            r.pitch_n,
            r.pitch_m,
            r.a,
            r.h,
            fmt(r.j_tube),
            fmt(r.volume),
            fmt(r.vol_complement),
            fmt(r.area),
            r.status.as_str()
        )?;
    }
    Ok(())
}

/// Test-oracle volume: integrate the height as a graph over the radius,
/// inverting r(sigma) by bisection. Slower than the turning-angle form but
/// shares nothing with it beyond the radius formula.
pub fn tube_volume_r_graph(
    space: &AmbientSpace,
    m: u32,
    tube: &TubeSolution,
    quad: &QuadratureSettings,
) -> Result<f64> {
    check_closing_pitch(space, m, tube)?;
    let point = &tube.point;
    let (rm, rp) = crate::profile::radius_extremes(space, point);
    let sigma_of_r = |r: f64| -> Result<f64> {
        crate::roots::bisect(
            |s: f64| Ok(radius_at(space, point, s) - r),
            PI / 2.0,
            3.0 * PI / 2.0,
            1e-14,
            200,
        )
    };
    let integrand = |r: f64| {
        let sig = sigma_of_r(r)?;
        let h = height_at(space, tube.pitch, point, sig, quad)?;
        Ok(space.sn(r) * h)
    };
    let inner = integrate(integrand, rm, rp, &QuadratureSettings::with_tol(1e-9))?;
    Ok(4.0 * PI * f64::from(m) * inner)
}
