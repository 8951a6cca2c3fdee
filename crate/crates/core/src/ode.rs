//! Direct arclength integration of the profile system
//!
//! ```text
//!     r'     = cos sigma,
//!     h'     = sqrt(sn(r)^2 + (4 tau sn(r/2)^2 - a)^2) / sn(r) * sin sigma,
//!     sigma' = 2H - ct(r) sin sigma,
//! ```
//!
//! with an embedded Dormand-Prince 5(4) scheme. This route never touches the
//! closed-form radius or the explicit height integrand, so it serves as an
//! independent oracle for both.

use crate::error::{Error, Result};
use crate::space::{AmbientSpace, Pitch};

/// Step-size control for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            initial_step: 1e-3,
            max_steps: 1_000_000,
        }
    }
}

/// Accepted integration steps of the arclength system.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub h: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl OdeSolution {
    pub fn last(&self) -> (f64, f64, f64, f64) {
        let n = self.t.len() - 1;
        (self.t[n], self.r[n], self.h[n], self.sigma[n])
    }
}

fn rhs(space: &AmbientSpace, a: f64, h_mean: f64, y: [f64; 3]) -> Result<[f64; 3]> {
    let (r, sigma) = (y[0], y[2]);
    if !(r > 0.0) || (space.kappa() > 0.0 && r >= space.radial_sup()) {
        return Err(Error::Integration(format!(
            "radius {r} left the coordinate range"
        )));
    }
    let sn = space.sn(r);
    let w = (sn * sn + (4.0 * space.tau() * space.sn(0.5 * r).powi(2) - a).powi(2)).sqrt() / sn;
    Ok([
        sigma.cos(),
        w * sigma.sin(),
        2.0 * h_mean - space.ct(r) * sigma.sin(),
    ])
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Dopri<'a> {
    space: &'a AmbientSpace,
    a: f64,
    h_mean: f64,
    ctrl: StepControl,
}

impl Dopri<'_> {
    /// One embedded step from (t, y) with trial size dt.
    /// Returns (y_new, error_norm).
    fn step(&self, y: [f64; 3], dt: f64, k1: [f64; 3]) -> Result<([f64; 3], [f64; 3], f64)> {
        let mut k = [[0.0; 3]; 7];
        k[0] = k1;
        for s in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                for c in 0..3 {
                    ys[c] += dt * A[s][j] * kj[c];
                }
            }
            k[s + 1] = rhs(self.space, self.a, self.h_mean, ys)?;
        }
        // 5th-order solution uses the last A row (FSAL)
        let mut y5 = y;
        let mut y4 = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            for c in 0..3 {
                y5[c] += dt * A[5][j] * kj[c];
            }
        }
        for (j, kj) in k.iter().enumerate() {
            for c in 0..3 {
                y4[c] += dt * B4[j] * kj[c];
            }
        }
        let mut err: f64 = 0.0;
        for c in 0..3 {
            let scale = self.ctrl.abs_tol + self.ctrl.rel_tol * y[c].abs().max(y5[c].abs());
            err = err.max(((y5[c] - y4[c]) / scale).abs());
        }
        Ok((y5, k[6], err))
    }
}

/// Integrate the profile system from `initial = (r0, sigma0, h0)` over the
/// arclength span `t_span`. Records every accepted step.
pub fn integrate_ode_direct(
    space: &AmbientSpace,
    pitch: Pitch,
    h_mean: f64,
    initial: (f64, f64, f64),
    t_span: (f64, f64),
    ctrl: &StepControl,
) -> Result<OdeSolution> {
    let (r0, sigma0, h0) = initial;
    if !(r0 > 0.0) || (space.kappa() > 0.0 && r0 >= space.radial_sup()) {
        return Err(Error::Domain(format!(
            "initial radius {r0} outside the coordinate range"
        )));
    }
    let solver = Dopri {
        space,
        a: pitch.value(),
        h_mean,
        ctrl: *ctrl,
    };
    let (t0, t1) = t_span;
    let mut t = t0;
    let mut y = [r0, h0, sigma0];
    let mut out = OdeSolution {
        t: vec![t0],
        r: vec![r0],
        h: vec![h0],
        sigma: vec![sigma0],
    };
    let mut dt = ctrl.initial_step.min((t1 - t0).abs()).max(1e-12);
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    dt *= dir;
    let mut k1 = rhs(space, pitch.value(), h_mean, y)?;
    for _ in 0..ctrl.max_steps {
        if (t - t1) * dir >= 0.0 {
            return Ok(out);
        }
        if (t + dt - t1) * dir > 0.0 {
            dt = t1 - t;
        }
        let (y_new, k_last, err) = solver.step(y, dt, k1)?;
        if err <= 1.0 {
            t += dt;
            y = y_new;
            k1 = k_last;
            out.t.push(t);
            out.r.push(y[0]);
            out.h.push(y[1]);
            out.sigma.push(y[2]);
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        dt *= factor;
        if dt.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Integration(format!(
                "step size underflow at t = {t}"
            )));
        }
    }
    Err(Error::Integration(format!(
        "step budget exhausted at t = {t} (span {t0}..{t1})"
    )))
}

/// Integrate forward from `initial` until the turning angle reaches
/// `sigma_target` (the angle is strictly increasing inside the supercritical
/// region), then land on it with a Newton-refined final step.
pub fn integrate_to_sigma(
    space: &AmbientSpace,
    pitch: Pitch,
    h_mean: f64,
    initial: (f64, f64, f64),
    sigma_target: f64,
    ctrl: &StepControl,
) -> Result<OdeSolution> {
    let solver = Dopri {
        space,
        a: pitch.value(),
        h_mean,
        ctrl: *ctrl,
    };
    let mut t = 0.0;
    let mut y = [initial.0, initial.2, initial.1];
    let mut out = OdeSolution {
        t: vec![0.0],
        r: vec![initial.0],
        h: vec![initial.2],
        sigma: vec![initial.1],
    };
    if initial.1 >= sigma_target {
        return Ok(out);
    }
    let mut dt = ctrl.initial_step;
    let mut k1 = rhs(space, pitch.value(), h_mean, y)?;
    for _ in 0..ctrl.max_steps {
        let (y_new, k_last, err) = solver.step(y, dt, k1)?;
        if err <= 1.0 {
            if y_new[2] >= sigma_target {
                // Newton on the step size: sigma is smooth and monotone in t
                let mut dt_land = dt * (sigma_target - y[2]) / (y_new[2] - y[2]);
                let mut y_land = y;
                for _ in 0..8 {
                    let (cand, _, _) = solver.step(y, dt_land, k1)?;
                    y_land = cand;
                    let slope = rhs(space, pitch.value(), h_mean, y_land)?[2];
                    let miss = y_land[2] - sigma_target;
                    if miss.abs() < 1e-13 {
                        break;
                    }
                    dt_land -= miss / slope;
                }
                out.t.push(t + dt_land);
                out.r.push(y_land[0]);
                out.h.push(y_land[1]);
                out.sigma.push(y_land[2]);
                return Ok(out);
            }
            t += dt;
            y = y_new;
            k1 = k_last;
            out.t.push(t);
            out.r.push(y[0]);
            out.h.push(y[1]);
            out.sigma.push(y[2]);
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        dt *= factor;
        if dt < 1e-14 {
            return Err(Error::Integration("step size underflow".into()));
        }
    }
    Err(Error::Integration("step budget exhausted".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{energy_residual, radius_at, radius_extremes, ModuliPoint};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn conserves_energy_along_orbit() {
        let s = AmbientSpace::new(0.0, 1.0).unwrap();
        let a = Pitch::new(1.0).unwrap();
        let p = ModuliPoint::new(&s, 2.0, -0.8).unwrap();
        let r0 = radius_at(&s, &p, PI / 2.0);
        let sol = integrate_ode_direct(
            &s,
            a,
            2.0,
            (r0, PI / 2.0, 0.0),
            (0.0, 20.0),
            &StepControl::default(),
        )
        .unwrap();
        assert!(sol.t.len() > 100);
        for i in 0..sol.t.len() {
            assert_abs_diff_eq!(
                energy_residual(&s, 2.0, -0.8, sol.r[i], sol.sigma[i]),
                0.0,
                epsilon = 1e-8
            );
        }
        // radius trapped between the extremes
        let (rm, rp) = radius_extremes(&s, &p);
        for r in &sol.r {
            assert!(*r >= rm - 1e-8 && *r <= rp + 1e-8);
        }
    }

    #[test]
    fn tube_initial_data_closes() {
        // frozen tube energy for the Heisenberg space at H = 2, pitch 1
        let s = AmbientSpace::new(0.0, 1.0).unwrap();
        let a = Pitch::new(1.0).unwrap();
        let j = -0.8136234481530142;
        let p = ModuliPoint::new(&s, 2.0, j).unwrap();
        let r0 = radius_at(&s, &p, PI / 2.0);
        let sol = integrate_to_sigma(
            &s,
            a,
            2.0,
            (r0, PI / 2.0, 0.0),
            5.0 * PI / 2.0,
            &StepControl::default(),
        )
        .unwrap();
        let (_, r_end, h_end, sigma_end) = sol.last();
        assert_abs_diff_eq!(sigma_end, 5.0 * PI / 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r_end, r0, epsilon = 1e-7);
        assert_abs_diff_eq!(h_end, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_initial_radius() {
        let s = AmbientSpace::new(4.0, 0.5).unwrap();
        let a = Pitch::new(0.5).unwrap();
        assert!(integrate_ode_direct(
            &s,
            a,
            1.0,
            (-0.1, PI / 2.0, 0.0),
            (0.0, 1.0),
            &StepControl::default()
        )
        .is_err());
        assert!(integrate_ode_direct(
            &s,
            a,
            1.0,
            (PI / 2.0 + 0.1, PI / 2.0, 0.0),
            (0.0, 1.0),
            &StepControl::default()
        )
        .is_err());
    }
}
