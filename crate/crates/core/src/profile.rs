//! Profile curves of screw-motion CMC surfaces, parameterized by the turning
//! angle sigma of the tangent against the radial direction.
//!
//! The radius r(sigma) admits a closed form; the height h(sigma) is the
//! integral of an explicit, radius-free derivative. A full period is
//! sigma in [pi/2, 5pi/2]; the curve closes exactly when the closing defect
//! (height gained over the half period [pi/2, 3pi/2]) vanishes.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureSettings};
use crate::space::{AmbientSpace, Pitch};
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// A point (H, J) of the supercritical moduli subspace: H above the critical
/// curvature and J in (-4H/kappa, 0) for kappa > 0, J < 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModuliPoint {
    h: f64,
    j: f64,
}

impl ModuliPoint {
    pub fn new(space: &AmbientSpace, h: f64, j: f64) -> Result<Self> {
        if !Self::in_region(space, h, j) {
            return Err(Error::OutOfRegion);
        }
        Ok(ModuliPoint { h, j })
    }

    /// Membership in the open supercritical region.
    pub fn in_region(space: &AmbientSpace, h: f64, j: f64) -> bool {
        if !h.is_finite() || !j.is_finite() || h <= space.critical_curvature() {
            return false;
        }
        if space.kappa() > 0.0 {
            -4.0 * h / space.kappa() < j && j < 0.0
        } else {
            j < 0.0
        }
    }

    /// Mean curvature H.
    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Energy J (first integral of the profile system).
    #[inline]
    pub fn j(&self) -> f64 {
        self.j
    }
}

/// Energy residual of a sample (r, sigma): the amount by which it misses the
/// first integral J. Zero along exact profile curves.
pub fn energy_residual(space: &AmbientSpace, h: f64, j: f64, r: f64, sigma: f64) -> f64 {
    2.0 * h * space.cs_minus_one_over_kappa(r) + space.sn(r) * sigma.sin() - j
}

/// Closed-form radius r(sigma). Depends on sigma only through sin(sigma) and
/// does not depend on the pitch. The inverse-cotangent branch is fixed by the
/// energy relation: supercriticality keeps the argument sin(sigma)/(2H) inside
/// the domain of the inverse for every curvature sign.
pub fn radius_at(space: &AmbientSpace, point: &ModuliPoint, sigma: f64) -> f64 {
    let (h, j) = (point.h, point.j);
    let k = space.kappa();
    let s = sigma.sin();
    let q = (4.0 * h * h + k * s * s).sqrt();
    let first = space
        .arct(s / (2.0 * h))
        .expect("supercritical H keeps the inverse in range");
    // arcs((kappa J + 2H)/q) written as arcs(1 - kappa w) with cancellation-free w
    let w = (s * s / (q + 2.0 * h) - j) / q;
    let second = space
        .arcs_one_minus(w)
        .expect("inside the moduli region the inverse argument is in range");
    first + second
}

/// Minimal and maximal radius (attained at sigma = 3pi/2 and pi/2).
pub fn radius_extremes(space: &AmbientSpace, point: &ModuliPoint) -> (f64, f64) {
    (
        radius_at(space, point, 3.0 * PI / 2.0),
        radius_at(space, point, PI / 2.0),
    )
}

/// d r / d sigma from the profile system; negative on (pi/2, 3pi/2).
pub fn radius_derivative(space: &AmbientSpace, point: &ModuliPoint, sigma: f64) -> f64 {
    let r = radius_at(space, point, sigma);
    sigma.cos() / (2.0 * point.h - space.ct(r) * sigma.sin())
}

/// Polynomial coefficients of the radius-free height integrand.
struct HeightCoeffs {
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    c5: f64,
    /// magnitude scale used for the round-off clamp
    scale: f64,
}

fn height_coeffs(space: &AmbientSpace, pitch: Pitch, h: f64, j: f64) -> HeightCoeffs {
    let (k, t, a) = (space.kappa(), space.tau(), pitch.value());
    let (t2, h2, j2) = (t * t, h * h, j * j);
    let c1 = 8.0 * t2 - 4.0 * a * t * k + a * a * k * k;
    let c2 = -32.0 * t2 * h * j - 4.0 * t2 * k * j2 - 16.0 * a * t * h2
        + 8.0 * a * t * k * h * j
        + 4.0 * k * h * j
        + k * k * j2
        + 8.0 * h2
        + 8.0 * a * a * k * h2;
    let c3 =
        16.0 * t2 * h2 * j2 + 32.0 * a * t * h2 * h * j - 4.0 * k * h2 * j2 - 16.0 * h2 * h * j
            + 16.0 * a * a * h2 * h2;
    let c4 = 8.0 * t2 - 4.0 * a * t * k;
    let c5 = -16.0 * t2 * h * j - 16.0 * a * t * h2 + 4.0 * k * h * j + 8.0 * h2;
    let scale = c1.abs() + c2.abs() + c3.abs() + c4.abs() + c5.abs();
    HeightCoeffs {
        c1,
        c2,
        c3,
        c4,
        c5,
        scale,
    }
}

fn height_derivative_raw(
    space: &AmbientSpace,
    co: &HeightCoeffs,
    h: f64,
    j: f64,
    sigma: f64,
) -> Result<f64> {
    let k = space.kappa();
    let s = sigma.sin();
    let s2 = s * s;
    let disc = s2 - k * j * j - 4.0 * h * j;
    if disc < 0.0 {
        return Err(Error::Domain(format!(
            "height integrand discriminant {disc} < 0 at sigma = {sigma}"
        )));
    }
    let root = disc.sqrt();
    let mut f = co.c1 * s2 * s2 + co.c2 * s2 + co.c3 + (co.c4 * s2 + co.c5) * root * s;
    if f < 0.0 {
        // round-off at tangency points only; anything materially negative is a bug
        if f >= -1e-12 * co.scale.max(1.0) {
            f = 0.0;
        } else {
            return Err(Error::Domain(format!(
                "height integrand radicand {f} < 0 at sigma = {sigma}"
            )));
        }
    }
    Ok(f.sqrt() * s / ((4.0 * h * h + k * s2) * root))
}

/// The explicit height derivative dh/dsigma. 2pi-periodic, positive on
/// (pi/2, pi), zero at sigma = pi, negative on (pi, 3pi/2).
pub fn height_derivative(
    space: &AmbientSpace,
    pitch: Pitch,
    point: &ModuliPoint,
    sigma: f64,
) -> Result<f64> {
    let co = height_coeffs(space, pitch, point.h, point.j);
    height_derivative_raw(space, &co, point.h, point.j, sigma)
}

/// Integrate dh/dsigma over [lo, hi], split at multiples of pi/2 so that the
/// mirror symmetry of the integrand cancels exactly in the closing defect.
fn integrate_height(
    space: &AmbientSpace,
    co: &HeightCoeffs,
    h: f64,
    j: f64,
    lo: f64,
    hi: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let f = |s: f64| height_derivative_raw(space, co, h, j, s);
    let (a, b, sign) = if lo <= hi {
        (lo, hi, 1.0)
    } else {
        (hi, lo, -1.0)
    };
    let mut total = 0.0;
    let mut cut = (a / (PI / 2.0)).floor() * (PI / 2.0);
    let mut left = a;
    while cut + PI / 2.0 < b - 1e-15 {
        cut += PI / 2.0;
        if cut > left {
            total += integrate(f, left, cut, settings)?;
            left = cut;
        }
    }
    total += integrate(f, left, b, settings)?;
    Ok(sign * total)
}

/// Height h(sigma) with h(pi/2) = 0.
pub fn height_at(
    space: &AmbientSpace,
    pitch: Pitch,
    point: &ModuliPoint,
    sigma: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let co = height_coeffs(space, pitch, point.h, point.j);
    integrate_height(space, &co, point.h, point.j, PI / 2.0, sigma, settings)
}

/// Height gained between two turning angles (h(hi) - h(lo)).
pub(crate) fn height_increment(
    space: &AmbientSpace,
    pitch: Pitch,
    point: &ModuliPoint,
    lo: f64,
    hi: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let co = height_coeffs(space, pitch, point.h, point.j);
    integrate_height(space, &co, point.h, point.j, lo, hi, settings)
}

/// Maximal height of the profile curve, attained at sigma = pi.
pub fn h_max(
    space: &AmbientSpace,
    pitch: Pitch,
    point: &ModuliPoint,
    settings: &QuadratureSettings,
) -> Result<f64> {
    height_at(space, pitch, point, PI, settings)
}

/// Closing defect: height gained over the half period [pi/2, 3pi/2].
/// Positive for nodoids of type I, negative for type II, zero exactly on tubes.
pub fn closing_defect(
    space: &AmbientSpace,
    pitch: Pitch,
    point: &ModuliPoint,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let co = height_coeffs(space, pitch, point.h, point.j);
    integrate_height(
        space,
        &co,
        point.h,
        point.j,
        PI / 2.0,
        3.0 * PI / 2.0,
        settings,
    )
}

/// Same as [`closing_defect`] but for raw (h, j) without the region guard on
/// j < 0: the integrand extends continuously to j = 0. Used by solvers that
/// scan all the way to the sphere-type boundary.
pub(crate) fn closing_defect_raw(
    space: &AmbientSpace,
    pitch: Pitch,
    h: f64,
    j: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let co = height_coeffs(space, pitch, h, j);
    integrate_height(space, &co, h, j, PI / 2.0, 3.0 * PI / 2.0, settings)
}

/// Pointwise limit of the height derivative on the rising arc as the energy
/// tends to zero. The limit of the closing defect is its integral minus
/// (pi/2)|a|.
pub fn boundary_integrand(space: &AmbientSpace, pitch: Pitch, h: f64, sigma: f64) -> f64 {
    let (k, t, a) = (space.kappa(), space.tau(), pitch.value());
    let s2 = sigma.sin().powi(2);
    let num = (4.0 * t - a * k).powi(2) * s2 * s2
        + 8.0 * h * h * (2.0 - 4.0 * a * t + a * a * k) * s2
        + 16.0 * a * a * h.powi(4);
    num.sqrt() / (4.0 * h * h + k * s2)
}

/// Residual of the boundary equation: the integral of the limit integrand over
/// [pi/2, pi] minus (pi/2)|a|. Its zeros locate where the tube family meets the
/// sphere-type boundary of the moduli region.
pub fn boundary_residual(
    space: &AmbientSpace,
    pitch: Pitch,
    h: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(h > space.critical_curvature()) {
        return Err(Error::Domain(format!(
            "boundary residual needs supercritical H, got {h}"
        )));
    }
    let a = pitch.value().abs();
    let v = integrate(
        |s| Ok(boundary_integrand(space, pitch, h, s) - a),
        PI / 2.0,
        PI,
        settings,
    )?;
    Ok(v)
}

/// A sampled profile curve over one full period sigma in [pi/2, 5pi/2],
/// with the cached radius extremes, maximal height, and closing defect.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileCurve {
    sigma: Vec<f64>,
    r: Vec<f64>,
    h: Vec<f64>,
    r_minus: f64,
    r_plus: f64,
    h_max: f64,
    delta: f64,
}

impl ProfileCurve {
    pub const DEFAULT_NODES: usize = 512;

    /// Sample on `n` Chebyshev-Lobatto nodes (endpoints included). The height
    /// is accumulated panel by panel; the cached h_max and closing defect are
    /// integrated separately at full tolerance.
    pub fn sample(
        space: &AmbientSpace,
        pitch: Pitch,
        point: &ModuliPoint,
        n: usize,
        settings: &QuadratureSettings,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("profile curve needs at least 2 nodes".into()));
        }
        let co = height_coeffs(space, pitch, point.h, point.j);
        let mut sigma = Vec::with_capacity(n);
        for k in 0..n {
            let c = (k as f64 * PI / (n - 1) as f64).cos();
            sigma.push(PI / 2.0 + PI * (1.0 - c));
        }
        let r: Vec<f64> = sigma.iter().map(|&s| radius_at(space, point, s)).collect();
        let mut h = Vec::with_capacity(n);
        let mut acc = 0.0;
        h.push(0.0);
        for k in 1..n {
            acc += integrate_height(
                space,
                &co,
                point.h,
                point.j,
                sigma[k - 1],
                sigma[k],
                settings,
            )?;
            h.push(acc);
        }
        let (r_minus, r_plus) = radius_extremes(space, point);
        let h_max = integrate_height(space, &co, point.h, point.j, PI / 2.0, PI, settings)?;
        let delta = integrate_height(
            space,
            &co,
            point.h,
            point.j,
            PI / 2.0,
            3.0 * PI / 2.0,
            settings,
        )?;
        Ok(ProfileCurve {
            sigma,
            r,
            h,
            r_minus,
            r_plus,
            h_max,
            delta,
        })
    }

    pub fn sample_default(
        space: &AmbientSpace,
        pitch: Pitch,
        point: &ModuliPoint,
        settings: &QuadratureSettings,
    ) -> Result<Self> {
        Self::sample(space, pitch, point, Self::DEFAULT_NODES, settings)
    }

    pub fn sigma_samples(&self) -> &[f64] {
        &self.sigma
    }

    pub fn r_samples(&self) -> &[f64] {
        &self.r
    }

    pub fn h_samples(&self) -> &[f64] {
        &self.h
    }

    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    /// Cached closing defect of the underlying moduli point.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// CSV with columns sigma,r,h at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "sigma,r,h")?;
        for i in 0..self.sigma.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e}",
                self.sigma[i], self.r[i], self.h[i]
            )?;
        }
        Ok(())
    }
}
