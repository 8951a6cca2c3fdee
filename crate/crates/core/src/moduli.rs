//! Moduli-space structure: classify points, solve for tube energies, locate
//! the boundary mean curvatures where the tube family meets the sphere-type
//! limit, sample tube families over mean-curvature grids, and the uniqueness
//! bound in Heisenberg space.

use crate::error::{Error, Result};
use crate::profile::{
    boundary_residual, closing_defect_raw, radius_extremes, ModuliPoint, ProfileCurve,
};
use crate::quad::QuadratureSettings;
use crate::roots::{cubic_real_roots, scan_and_refine, RootFindSettings};
use crate::space::{AmbientSpace, Pitch};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Relative tolerance for the degenerate-family test 2 tau^2 - a tau kappa = 0.
const DEGENERATE_TOL: f64 = 1e-13;

/// Where a moduli point sits in the closure of the supercritical region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceClass {
    SphereType,
    Helicoid,
    NodoidI,
    Tube,
    NodoidII,
}

impl SurfaceClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SurfaceClass::SphereType => "sphere_type",
            SurfaceClass::Helicoid => "helicoid",
            SurfaceClass::NodoidI => "nodoid_i",
            SurfaceClass::Tube => "tube",
            SurfaceClass::NodoidII => "nodoid_ii",
        }
    }
}

impl std::fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 2 tau^2 - a tau kappa, the quantity separating the fully symmetric families
/// (product spaces, horizontal Berger pitch) from the generic ones.
pub fn symmetry_defect(space: &AmbientSpace, pitch: Pitch) -> f64 {
    2.0 * space.tau() * space.tau() - pitch.value() * space.tau() * space.kappa()
}

fn is_degenerate_family(space: &AmbientSpace, pitch: Pitch) -> bool {
    let scale = (2.0 * space.tau() * space.tau()).abs()
        + (pitch.value() * space.tau() * space.kappa()).abs();
    symmetry_defect(space, pitch).abs() <= DEGENERATE_TOL * scale.max(1.0)
}

/// Classify a point of the closed moduli region: sphere-type and helicoid
/// limits on the energy boundary, tube/nodoid in the interior by the sign of
/// the closing defect against `tol`.
pub fn classify(
    space: &AmbientSpace,
    pitch: Pitch,
    h: f64,
    j: f64,
    tol: f64,
    quad: &QuadratureSettings,
) -> Result<SurfaceClass> {
    if !h.is_finite() || !j.is_finite() || h < 0.0 {
        return Err(Error::OutOfRegion);
    }
    if j > 0.0 {
        return Err(Error::OutOfScope);
    }
    let k = space.kappa();
    let on_upper = j == 0.0;
    let on_lower = k > 0.0 && (j + 4.0 * h / k).abs() <= 1e-12 * (1.0 + 4.0 * h / k);
    if on_upper || on_lower {
        if h == 0.0 {
            return if k > 0.0 {
                Ok(SurfaceClass::Helicoid)
            } else {
                Err(Error::OutOfRegion)
            };
        }
        if h > space.critical_curvature() {
            return Ok(SurfaceClass::SphereType);
        }
        return Err(Error::OutOfRegion);
    }
    let point = ModuliPoint::new(space, h, j)?;
    let d = crate::profile::closing_defect(space, pitch, &point, quad)?;
    Ok(if d.abs() <= tol {
        SurfaceClass::Tube
    } else if d > 0.0 {
        SurfaceClass::NodoidI
    } else {
        SurfaceClass::NodoidII
    })
}

/// One sign-change bracket for the closing defect in the energy variable.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JBracket {
    pub j_lo: f64,
    pub j_hi: f64,
    pub j_root: f64,
    pub residual: f64,
}

/// A solved tube: moduli point with vanishing closing defect, its profile
/// curve, and the solver diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct TubeSolution {
    pub pitch: Pitch,
    pub point: ModuliPoint,
    pub curve: ProfileCurve,
    /// |closing defect| at the returned energy.
    pub residual: f64,
    /// The scanned energy interval.
    pub bracket: (f64, f64),
    /// Every sign-change bracket found in the scanned interval.
    pub multiplicity_report: Vec<JBracket>,
}

/// The energy interval to scan for tubes with pitch `a` at mean curvature `h`.
/// For a pitch that is only conjugate-admissible (kappa > 0) the interval of
/// the conjugate pitch is mapped through the congruence J -> -J - 4H/kappa.
fn tube_bracket(space: &AmbientSpace, pitch: Pitch, h: f64) -> Result<(f64, f64)> {
    if space.is_admissible(pitch) {
        let (lo, hi) = space.energy_bounds(pitch, h)?;
        return Ok((lo, hi));
    }
    if space.kappa() > 0.0 {
        let conj = space.conjugate_pitch(pitch)?;
        if space.is_admissible(conj) {
            let (lo, hi) = space.energy_bounds(conj, h)?;
            let shift = 4.0 * h / space.kappa();
            return Ok((-hi - shift, -lo - shift));
        }
    }
    Err(Error::NoGeodesicOrbit)
}

/// Solve for the tube energy at fixed pitch and mean curvature: scan the
/// closing defect over the admissible energy interval, refine every sign
/// change, and return the root closest to the sphere-type boundary (all roots
/// are listed in the multiplicity report).
pub fn tube_energy(
    space: &AmbientSpace,
    pitch: Pitch,
    h: f64,
    roots: &RootFindSettings,
    quad: &QuadratureSettings,
) -> Result<TubeSolution> {
    if !(h > space.critical_curvature()) {
        return Err(Error::Domain(format!(
            "tube solve needs supercritical H, got {h}"
        )));
    }
    if is_degenerate_family(space, pitch) {
        // the energy interval collapses to the line J = -2H/kappa
        let j = -2.0 * h / space.kappa();
        let point = ModuliPoint::new(space, h, j)?;
        let residual = crate::profile::closing_defect(space, pitch, &point, quad)?.abs();
        let curve = ProfileCurve::sample_default(space, pitch, &point, quad)?;
        return Ok(TubeSolution {
            pitch,
            point,
            curve,
            residual,
            bracket: (j, j),
            multiplicity_report: vec![JBracket {
                j_lo: j,
                j_hi: j,
                j_root: j,
                residual,
            }],
        });
    }
    let (lo, raw_hi) = tube_bracket(space, pitch, h)?;
    // keep the scan strictly inside the moduli region: J < 0
    let hi = raw_hi.min(-1e-10 * lo.abs().max(1.0));
    if hi <= lo {
        return Err(Error::NoTube(format!(
            "energy interval [{lo}, {raw_hi}] has no intersection with J < 0 at H = {h}"
        )));
    }
    let defect = |j: f64| closing_defect_raw(space, pitch, h, j, quad);
    let brackets = scan_and_refine(defect, lo, hi, roots)?;
    if brackets.is_empty() {
        return Err(Error::NoTube(format!(
            "no sign change of the closing defect in [{lo:.6e}, {hi:.6e}] at H = {h}"
        )));
    }
    let mut report = Vec::with_capacity(brackets.len());
    for (j_lo, j_hi, j_root) in &brackets {
        report.push(JBracket {
            j_lo: *j_lo,
            j_hi: *j_hi,
            j_root: *j_root,
            residual: defect(*j_root)?.abs(),
        });
    }
    let chosen = *report.last().expect("non-empty report");
    let point = ModuliPoint::new(space, h, chosen.j_root)?;
    let curve = ProfileCurve::sample_default(space, pitch, &point, quad)?;
    Ok(TubeSolution {
        pitch,
        point,
        curve,
        residual: chosen.residual,
        bracket: (lo, hi),
        multiplicity_report: report,
    })
}

/// All mean curvatures in (H_crit, E_a) where the boundary residual vanishes,
/// i.e. where the tube family can reach the sphere-type boundary.
///
/// A conjugate-admissible pitch (kappa > 0) is canonicalized to its admissible
/// representative first: the families are congruent, and the boundary equation
/// itself only describes the J -> 0 limit of the admissible branch.
pub fn boundary_h0(
    space: &AmbientSpace,
    pitch: Pitch,
    roots: &RootFindSettings,
    quad: &QuadratureSettings,
) -> Result<Vec<f64>> {
    let a_eff = if space.is_admissible(pitch) {
        pitch
    } else if space.is_conjugate_admissible(pitch) {
        space.conjugate_pitch(pitch)?
    } else {
        return Err(Error::NoGeodesicOrbit);
    };
    if is_degenerate_family(space, a_eff) {
        return Err(Error::NotApplicable(
            "fully symmetric family: the boundary point is H = 0 and tubes exist for all H > 0"
                .into(),
        ));
    }
    let h_crit = space.critical_curvature();
    let e_a = space.existence_bound(a_eff)?;
    let span = e_a - h_crit;
    let lo = h_crit + 1e-7 * span;
    let hi = e_a - 1e-9 * span;
    let residual = |h: f64| boundary_residual(space, a_eff, h, quad);
    let mut settings = *roots;
    for attempt in 0..3 {
        let found = scan_and_refine(residual, lo, hi, &settings)?;
        if !found.is_empty() {
            return Ok(found.into_iter().map(|(_, _, r)| r).collect());
        }
        settings.scan_points *= 4;
        if attempt == 2 {
            break;
        }
    }
    Err(Error::NoTube(format!(
        "no boundary root located in ({h_crit}, {e_a})"
    )))
}

/// Status of one family entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Ok,
    NoTube,
    Error,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Ok => "ok",
            SolveStatus::NoTube => "no_tube",
            SolveStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyEntry {
    pub h: f64,
    pub status: SolveStatus,
    pub solution: Option<TubeSolution>,
    pub message: Option<String>,
}

/// A tube family sampled over a mean-curvature grid, with gap bookkeeping and
/// an empirical monotonicity diagnostic of H -> J(H). Monotonicity is an open
/// conjecture: it is measured here, never assumed.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub entries: Vec<FamilyEntry>,
    /// Some(true) if the solved energies are strictly decreasing in H;
    /// None when fewer than two solves succeeded.
    pub j_strictly_decreasing: Option<bool>,
    pub gap_count: usize,
}

pub fn tube_family(
    space: &AmbientSpace,
    pitch: Pitch,
    h_grid: &[f64],
    roots: &RootFindSettings,
    quad: &QuadratureSettings,
) -> FamilyReport {
    let entries: Vec<FamilyEntry> = h_grid
        .par_iter()
        .map(|&h| match tube_energy(space, pitch, h, roots, quad) {
            Ok(sol) => FamilyEntry {
                h,
                status: SolveStatus::Ok,
                solution: Some(sol),
                message: None,
            },
            Err(e) => FamilyEntry {
                h,
                status: if matches!(e, Error::NoTube(_)) {
                    SolveStatus::NoTube
                } else {
                    SolveStatus::Error
                },
                solution: None,
                message: Some(e.to_string()),
            },
        })
        .collect();
    let solved: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.solution.as_ref().map(|s| (e.h, s.point.j())))
        .collect();
    let j_strictly_decreasing = if solved.len() < 2 {
        None
    } else {
        Some(
            solved
                .windows(2)
                .all(|w| w[0].0 < w[1].0 && w[1].1 < w[0].1),
        )
    };
    let gap_count = entries
        .iter()
        .filter(|e| e.status != SolveStatus::Ok)
        .count();
    FamilyReport {
        entries,
        j_strictly_decreasing,
        gap_count,
    }
}

impl FamilyReport {
    /// CSV columns: H, J_tube, residual, r_minus, r_plus, h_max, class, roots_found.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "H,J_tube,residual,r_minus,r_plus,h_max,class,roots_found"
        )?;
        for e in &self.entries {
            match &e.solution {
                Some(s) => writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},tube,{}",
                    e.h,
                    s.point.j(),
                    s.residual,
                    s.curve.r_minus(),
                    s.curve.r_plus(),
                    s.curve.h_max(),
                    s.multiplicity_report.len()
                )?,
                None => writeln!(out, "{:.16e},,,,,,{},0", e.h, e.status.as_str())?,
            }
        }
        Ok(())
    }
}

/// The mean curvature above which a Heisenberg-space tube with this pitch is
/// unique: max(E_a, sqrt(y*)) with y* the largest real root of
///
/// ```text
///     2 (1 - 6 a tau + 8 a^2 tau^2) y^3 + 3 tau^2 (1 - 4 a tau) y^2
///         + 2 tau^4 (1 - 2 a tau) y + tau^6.
/// ```
///
/// Above this value the certificate polynomial stays positive on the whole
/// energy interval, which forces the closing defect to be strictly monotone
/// in the energy.
pub fn nil_uniqueness_bound(space: &AmbientSpace, pitch: Pitch) -> Result<f64> {
    if space.kappa() != 0.0 {
        return Err(Error::NotApplicable(
            "the uniqueness bound is specific to kappa = 0".into(),
        ));
    }
    if !space.is_admissible(pitch) {
        return Err(Error::NoGeodesicOrbit);
    }
    let s = pitch.value() * space.tau();
    let t2 = space.tau() * space.tau();
    let c3 = 2.0 * (1.0 - 6.0 * s + 8.0 * s * s);
    let c2 = 3.0 * t2 * (1.0 - 4.0 * s);
    let c1 = 2.0 * t2 * t2 * (1.0 - 2.0 * s);
    let c0 = t2 * t2 * t2;
    let e_a = space.existence_bound(pitch)?;
    let y_star = cubic_real_roots(c3, c2, c1, c0)
        .into_iter()
        .filter(|y| *y > 0.0)
        .fold(f64::NEG_INFINITY, f64::max);
    if y_star.is_finite() {
        Ok(e_a.max(y_star.sqrt()))
    } else {
        Ok(e_a)
    }
}

/// Certificate value whose positivity (at the upper energy bound) guarantees
/// monotonicity of the closing defect in the energy for kappa = 0.
pub fn nil_monotonicity_certificate(
    space: &AmbientSpace,
    pitch: Pitch,
    h: f64,
    j: f64,
) -> Result<f64> {
    if space.kappa() != 0.0 {
        return Err(Error::NotApplicable(
            "the monotonicity certificate is specific to kappa = 0".into(),
        ));
    }
    let (a, t) = (pitch.value(), space.tau());
    let t2 = t * t;
    Ok(32.0
        * h
        * h
        * (2.0 * t2 * t2 * j.powi(3)
            + t2 * h * j * j * (2.0 * a * t - 1.0)
            + h * h * j * (1.0 - 4.0 * a * t - 2.0 * a * a * t2)
            - a * a * h.powi(3) * (2.0 * a * t - 1.0)))
}

/// Convenience wrapper: (r_minus, r_plus) of a solved tube.
pub fn solution_radii(space: &AmbientSpace, sol: &TubeSolution) -> (f64, f64) {
    radius_extremes(space, &sol.point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn space(k: f64, t: f64) -> AmbientSpace {
        AmbientSpace::new(k, t).unwrap()
    }

    fn pitch(a: f64) -> Pitch {
        Pitch::new(a).unwrap()
    }

    fn defaults() -> (RootFindSettings, QuadratureSettings) {
        (RootFindSettings::default(), QuadratureSettings::default())
    }

    #[test]
    fn classify_boundary_and_interior() {
        let (_, q) = defaults();
        let berg = space(4.0, 0.5);
        assert_eq!(
            classify(&berg, pitch(0.5), 0.0, 0.0, 1e-9, &q).unwrap(),
            SurfaceClass::Helicoid
        );
        assert_eq!(
            classify(&berg, pitch(0.5), 1.0, 0.0, 1e-9, &q).unwrap(),
            SurfaceClass::SphereType
        );
        assert_eq!(
            classify(&berg, pitch(0.5), 1.0, -1.0, 1e-9, &q).unwrap(),
            SurfaceClass::SphereType
        );
        let skr = space(1.0, 0.0);
        assert_eq!(
            classify(&skr, pitch(1.0), 1.0, -2.0, 1e-9, &q).unwrap(),
            SurfaceClass::Tube
        );
        // off the tube line the defect has a definite sign
        let c = classify(&skr, pitch(1.0), 1.0, -1.0, 1e-9, &q).unwrap();
        assert!(matches!(c, SurfaceClass::NodoidI | SurfaceClass::NodoidII));
        let p = ModuliPoint::new(&skr, 1.0, -1.0).unwrap();
        let d = crate::profile::closing_defect(&skr, pitch(1.0), &p, &q).unwrap();
        assert!(d.abs() > 1e-6);
        assert_eq!(
            c,
            if d > 0.0 {
                SurfaceClass::NodoidI
            } else {
                SurfaceClass::NodoidII
            }
        );
        assert!(matches!(
            classify(&skr, pitch(1.0), 1.0, 0.5, 1e-9, &q),
            Err(Error::OutOfScope)
        ));
        // helicoid needs positive curvature
        assert!(classify(&space(0.0, 1.0), pitch(1.0), 0.0, 0.0, 1e-9, &q).is_err());
    }

    #[test]
    fn degenerate_family_returns_exact_energy() {
        let (r, q) = defaults();
        let s = space(1.0, 0.0);
        let sol = tube_energy(&s, pitch(1.0), 2.0, &r, &q).unwrap();
        assert_eq!(sol.point.j(), -4.0);
        assert!(sol.residual <= 1e-9);
        assert_eq!(sol.bracket, (-4.0, -4.0));
        assert_eq!(sol.multiplicity_report.len(), 1);
    }

    #[test]
    fn nil_tube_energy_matches_frozen_values() {
        let (r, q) = defaults();
        let s = space(0.0, 1.0);
        let sol = tube_energy(&s, pitch(1.0), 2.0, &r, &q).unwrap();
        // bracket (-1, -0.75); root frozen from an independent prototype run
        assert_relative_eq!(sol.point.j(), -0.8136234481530142, max_relative = 1e-9);
        assert!(sol.residual <= 1e-9);
        assert!(sol.point.j() > -1.0 && sol.point.j() < -0.75);
        let sol10 = tube_energy(&s, pitch(1.0), 10.0, &r, &q).unwrap();
        assert_eq!(sol10.multiplicity_report.len(), 1);
        assert_relative_eq!(sol10.point.j(), -4.962510351929028, max_relative = 1e-8);
    }

    #[test]
    fn berger_conjugate_pitch_solves_through_mapped_interval() {
        let (r, q) = defaults();
        let s = space(4.0, 0.5);
        // a = 0.5 is admissible, its conjugate 0 is not
        let ja = tube_energy(&s, pitch(0.5), 1.0, &r, &q).unwrap().point.j();
        let jb = tube_energy(&s, pitch(0.0), 1.0, &r, &q).unwrap().point.j();
        assert_relative_eq!(jb, -ja - 1.0, max_relative = 1e-8);
        assert_relative_eq!(ja, -0.22220564334257614, max_relative = 1e-8);
    }

    #[test]
    fn boundary_h0_frozen_values() {
        let (r, q) = defaults();
        let nil = space(0.0, 1.0);
        let roots = boundary_h0(&nil, pitch(1.0), &r, &q).unwrap();
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0], 0.857815610436932, max_relative = 1e-8);
        // the root lies strictly inside (H_crit, E_a)
        assert!(roots[0] > 0.0 && roots[0] < 1.0);
        let psl = space(-1.0, 1.0);
        let roots = boundary_h0(&psl, pitch(50.0), &r, &q).unwrap();
        assert!(roots[0] > 0.5 && roots[0] < 0.55);
        // degenerate family short-circuits
        assert!(matches!(
            boundary_h0(&space(1.0, 0.0), pitch(1.0), &r, &q),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn boundary_h0_conjugate_symmetry() {
        let (r, q) = defaults();
        let berg = space(1.0, 1.0);
        let h_adm = boundary_h0(&berg, pitch(1.0), &r, &q).unwrap();
        let h_conj = boundary_h0(&berg, pitch(3.0), &r, &q).unwrap();
        assert_eq!(h_adm.len(), h_conj.len());
        for (x, y) in h_adm.iter().zip(&h_conj) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-6);
        }
        assert_relative_eq!(h_adm[0], 0.5722325345925185, max_relative = 1e-8);
    }

    #[test]
    fn tube_family_reports_monotonicity_and_gaps() {
        let (r, q) = defaults();
        let s = space(1.0, 0.0);
        let grid: Vec<f64> = (1..=8).map(|i| 0.5 * i as f64).collect();
        let fam = tube_family(&s, pitch(1.0), &grid, &r, &q);
        assert_eq!(fam.gap_count, 0);
        assert_eq!(fam.j_strictly_decreasing, Some(true));
        for e in &fam.entries {
            let s = e.solution.as_ref().unwrap();
            assert_relative_eq!(s.point.j(), -2.0 * e.h, max_relative = 1e-12);
        }
        // existence below the nominal bound in Heisenberg space
        let nil = space(0.0, 1.0);
        let grid = [0.6, 0.7, 0.8, 0.88, 0.95];
        let fam = tube_family(&nil, pitch(1.0), &grid, &r, &q);
        let below: Vec<_> = fam
            .entries
            .iter()
            .filter(|e| e.status == SolveStatus::Ok && e.h < 1.0)
            .collect();
        assert!(!below.is_empty());
        // and gaps below the boundary root
        assert!(fam.entries[0].status == SolveStatus::NoTube);
    }

    #[test]
    fn family_height_decays_towards_the_geodesic() {
        let (r, q) = defaults();
        let nil = space(0.0, 1.0);
        let grid = [1.0, 3.0, 10.0, 100.0, 1000.0];
        let fam = tube_family(&nil, pitch(1.0), &grid, &r, &q);
        let heights: Vec<f64> = fam
            .entries
            .iter()
            .map(|e| e.solution.as_ref().unwrap().curve.h_max())
            .collect();
        assert!(heights.windows(2).all(|w| w[1] < w[0]), "{heights:?}");
        assert!(*heights.last().unwrap() < 1e-2);
    }

    #[test]
    fn nil_defect_monotone_in_energy_above_the_bound() {
        let (_, q) = defaults();
        let nil = space(0.0, 1.0);
        let a = pitch(1.0);
        let bound = nil_uniqueness_bound(&nil, a).unwrap();
        for factor in [1.05, 2.0, 8.0] {
            let h = bound * factor;
            let (lo, hi) = nil.energy_bounds(a, h).unwrap();
            let mut signs = Vec::new();
            for i in 0..9 {
                let j = lo + (hi - lo) * (0.05 + 0.9 * i as f64 / 8.0);
                let step = 1e-7 * (hi - lo).abs();
                let up = closing_defect_raw(&nil, a, h, j + step, &q).unwrap();
                let dn = closing_defect_raw(&nil, a, h, j - step, &q).unwrap();
                signs.push(((up - dn) / (2.0 * step)).signum());
            }
            assert!(
                signs.windows(2).all(|w| w[0] == w[1]),
                "H = {h}: derivative signs {signs:?}"
            );
        }
    }

    #[test]
    fn family_csv_shape() {
        let (r, q) = defaults();
        let s = space(1.0, 0.0);
        let fam = tube_family(&s, pitch(1.0), &[1.0, 2.0], &r, &q);
        let mut buf = Vec::new();
        fam.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("H,J_tube,residual,r_minus,r_plus,h_max,class,roots_found"));
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().contains(",tube,1"));
    }

    #[test]
    fn nil_uniqueness_bound_frozen() {
        let s = space(0.0, 1.0);
        let a = pitch(1.0);
        let bound = nil_uniqueness_bound(&s, a).unwrap();
        assert_relative_eq!(bound, 1.281103305629447, max_relative = 1e-10);
        let e_a = s.existence_bound(a).unwrap();
        assert!(bound >= e_a);
        assert!(bound < 2.0 * e_a);
        // certificate positive just above the bound, at the upper energy limit
        let h = 1.01 * bound;
        let (_, jp) = s.energy_bounds(a, h).unwrap();
        assert!(nil_monotonicity_certificate(&s, a, h, jp).unwrap() > 0.0);
        // leading cubic coefficient positive for admissible pitches
        for at in [0.6, 1.0, 3.0, 10.0] {
            let alpha = 2.0 * (1.0 - 6.0 * at + 8.0 * at * at);
            assert!(alpha > 0.0);
        }
        assert!(matches!(
            nil_uniqueness_bound(&space(1.0, 1.0), pitch(1.0)),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn solved_tubes_stay_inside_reported_bracket() {
        let (r, q) = defaults();
        for (k, t, a, h) in [
            (0.0, 1.0, 1.0, 2.0),
            (-1.0, 1.0, 2.0, 1.5),
            (4.0, 0.5, 0.5, 1.0),
            (1.0, 1.0, 1.0, 1.5),
        ] {
            let s = space(k, t);
            let sol = tube_energy(&s, pitch(a), h, &r, &q).unwrap();
            assert!(sol.residual <= 1e-9, "residual {}", sol.residual);
            let j = sol.point.j();
            assert!(j >= sol.bracket.0 - 1e-12 && j <= sol.bracket.1 + 1e-12);
        }
    }
}
