//! Embeddedness and foliation decisions for solved tubes, the closed-form
//! maximal height in product spaces, and the profile-curve symmetry order.

use crate::error::{Error, Result};
use crate::moduli::{symmetry_defect, TubeSolution};
use crate::profile::{height_at, radius_at, radius_extremes};
use crate::quad::QuadratureSettings;
use crate::space::{AmbientSpace, Pitch};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Unique positive solution of x * artanh(x) = 1, by bisection to 1e-12.
///
/// The defining equation uses the hyperbolic inverse: the residual is
/// negative at 0.5 and positive at 0.95, and the root evaluates to
/// 0.833556559601 (the circular arctan variant would put the "root"
/// near 1.3 instead and solves nothing here).
pub fn solve_x0() -> f64 {
    static X0: OnceLock<f64> = OnceLock::new();
    *X0.get_or_init(|| {
        let f = |x: f64| x * x.atanh() - 1.0;
        let (mut lo, mut hi) = (0.5, 0.95);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Embeddedness of a tube in the non-compact models: the screw motion
/// self-intersects exactly when the profile diameter 2 h_max reaches the
/// vertical translation 2 pi |a| of one full turn.
pub fn embedded_noncompact(_space: &AmbientSpace, pitch: Pitch, tube: &TubeSolution) -> bool {
    2.0 * tube.curve.h_max() < 2.0 * PI * pitch.value().abs()
}

/// Diagnosis attached to a compact-model embeddedness verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BergerEmbedding {
    pub embedded: bool,
    pub n: u32,
    pub m: u32,
    pub pitch: f64,
    pub fiber_length: f64,
    pub pitch_admissible: bool,
    pub tube_exists: bool,
    pub h_max: f64,
    /// m profile diameters stacked along one fiber: 2 m h_max.
    pub stacked_height: f64,
}

/// Embeddedness of a compact tube with pitch a_{1,m}: m stacked profile
/// diameters must fit inside one fiber of length 8 pi tau / kappa.
pub fn embedded_berger(
    space: &AmbientSpace,
    m: u32,
    tube: &TubeSolution,
) -> Result<BergerEmbedding> {
    if space.kappa() <= 0.0 {
        return Err(Error::NotDefined);
    }
    let report = space.berger_pitch(1, m)?;
    let a = report.pitch.value();
    if (tube.pitch.value() - a).abs() > 1e-9 * a.abs().max(1.0) {
        return Err(Error::NotClosing(format!(
            "tube pitch {} is not the closing pitch {} for m = {m}",
            tube.pitch.value(),
            a
        )));
    }
    let fiber_length = space.fiber_length()?;
    let stacked = 2.0 * f64::from(m) * tube.curve.h_max();
    Ok(BergerEmbedding {
        embedded: stacked < fiber_length,
        n: 1,
        m,
        pitch: a,
        fiber_length,
        pitch_admissible: report.admissible,
        tube_exists: report.tube_exists.unwrap_or(false),
        h_max: tube.curve.h_max(),
        stacked_height: stacked,
    })
}

/// Foliation verdict for the fully symmetric tube families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FoliationVerdict {
    /// The whole family leaves simultaneously: ambient space is foliated
    /// (up to the limit geodesics).
    Foliates,
    /// Only the subfamily with mean curvature above the given threshold
    /// foliates an open subset; h_max peaks exactly there.
    PartialAbove(f64),
}

/// Decide whether the tube family foliates. Only the fully symmetric families
/// carry a proof: product spaces over the sphere (tau = 0, any pitch) and the
/// horizontal pitch 2 tau / kappa in the compact model. Everything else
/// returns NotApplicable.
pub fn foliation_decision(space: &AmbientSpace, pitch: Pitch) -> Result<FoliationVerdict> {
    if space.kappa() <= 0.0 {
        return Err(Error::NotApplicable(
            "foliation criteria require kappa > 0".into(),
        ));
    }
    let scale = (2.0 * space.tau() * space.tau()).abs()
        + (pitch.value() * space.tau() * space.kappa()).abs();
    if symmetry_defect(space, pitch).abs() > 1e-12 * scale.max(1.0) {
        return Err(Error::NotApplicable(
            "no foliation criterion is established for generic pitches".into(),
        ));
    }
    let x0 = solve_x0();
    let x2 = x0 * x0;
    let k = space.kappa();
    if space.tau() == 0.0 {
        let a2 = pitch.value() * pitch.value();
        let threshold2 = (1.0 - x2) / (x2 * k);
        if a2 >= threshold2 {
            return Ok(FoliationVerdict::Foliates);
        }
        let u = 1.0 + k * a2;
        let h_star = 0.5 * k.sqrt() * ((1.0 - x2 * u) / (x2 * u)).sqrt();
        return Ok(FoliationVerdict::PartialAbove(h_star));
    }
    let crit = (1.0 - x2) * k - 4.0 * space.tau() * space.tau();
    if crit <= 0.0 {
        Ok(FoliationVerdict::Foliates)
    } else {
        Ok(FoliationVerdict::PartialAbove((crit / (4.0 * x2)).sqrt()))
    }
}

/// Closed-form maximal height of the tube with mean curvature H in a product
/// space over the sphere (tau = 0, kappa > 0):
///
/// ```text
///     h_max(H) = 2H / (sqrt(k) sqrt(4H^2+k)) * artanh( sqrt(k) / (sqrt(4H^2+k) sqrt(1+k a^2)) )
///              + |a| * arcsin( |a| k / sqrt(a^2 k^2 + 4 H^2 (1 + k a^2)) ).
/// ```
///
/// Derived by substituting u = cos(sigma) in the height integral and splitting
/// off the arcsine part; both terms are positive. (The same antiderivative is
/// sometimes quoted with both signs flipped, which is its negative; the
/// quadrature of the integrand fixes the convention used here.)
pub fn hmax_closed_form(space: &AmbientSpace, pitch: Pitch, h: f64) -> Result<f64> {
    check_product_sphere(space, h)?;
    let (k, a) = (space.kappa(), pitch.value().abs());
    let q = (4.0 * h * h + k).sqrt();
    let u = (1.0 + k * a * a).sqrt();
    let arg = k.sqrt() / (q * u);
    Ok(2.0 * h / (k.sqrt() * q) * arg.atanh()
        + a * (a * k / (a * a * k * k + 4.0 * h * h * u * u).sqrt()).asin())
}

/// H-derivative of [`hmax_closed_form`]:
///
/// ```text
///     d/dH h_max = 2 sqrt(k) / (4H^2+k)^{3/2} * arcoth( sqrt(4H^2+k) sqrt(1+k a^2) / sqrt(k) )
///                - 2 sqrt(1+k a^2) / (4H^2+k).
/// ```
pub fn hmax_derivative(space: &AmbientSpace, pitch: Pitch, h: f64) -> Result<f64> {
    check_product_sphere(space, h)?;
    let (k, a) = (space.kappa(), pitch.value());
    let q2 = 4.0 * h * h + k;
    let u = (1.0 + k * a * a).sqrt();
    let arcoth = (k.sqrt() / (q2.sqrt() * u)).atanh();
    Ok(2.0 * k.sqrt() / q2.powf(1.5) * arcoth - 2.0 * u / q2)
}

fn check_product_sphere(space: &AmbientSpace, h: f64) -> Result<()> {
    if space.tau() != 0.0 || space.kappa() <= 0.0 {
        return Err(Error::NotApplicable(
            "closed-form height requires tau = 0 and kappa > 0".into(),
        ));
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "closed-form height needs H > 0, got {h}"
        )));
    }
    Ok(())
}

/// Order of the dihedral symmetry group of the profile curve: 4 when the
/// curve is additionally symmetric across the equatorial radius (fully
/// symmetric families only), otherwise 2. The order-4 claim is verified
/// numerically on the solved curve before it is reported.
pub fn dihedral_order(
    space: &AmbientSpace,
    pitch: Pitch,
    tube: &TubeSolution,
    quad: &QuadratureSettings,
) -> u32 {
    let scale = (2.0 * space.tau() * space.tau()).abs()
        + (pitch.value() * space.tau() * space.kappa()).abs();
    if symmetry_defect(space, pitch).abs() > 1e-12 * scale.max(1.0) || space.kappa() <= 0.0 {
        return 2;
    }
    let (rm, rp) = radius_extremes(space, &tube.point);
    let equator = 0.5 * space.radial_sup();
    if (rp + rm - 2.0 * equator).abs() > 1e-9 {
        return 2;
    }
    // reflected-profile residual: the point reflection through (equator, 0)
    // pairs sigma with sigma + pi
    for i in 1..8 {
        let sig = PI / 2.0 + (PI / 2.0) * i as f64 / 8.0;
        let mirrored = sig + PI;
        let r_res = radius_at(space, &tube.point, sig) + radius_at(space, &tube.point, mirrored)
            - 2.0 * equator;
        if r_res.abs() > 1e-9 {
            return 2;
        }
        let h1 = height_at(space, pitch, &tube.point, sig, quad);
        let h2 = height_at(space, pitch, &tube.point, mirrored, quad);
        match (h1, h2) {
            (Ok(h1), Ok(h2)) => {
                if (h1 + h2).abs() > 1e-7 {
                    return 2;
                }
            }
            _ => return 2,
        }
    }
    4
}

/// JSON-serializable record of an embeddedness/foliation decision:
/// {space, pitch, verdict, threshold, witnesses}.
#[derive(Debug, Clone, Serialize)]
pub struct DecisionRecord {
    pub space: AmbientSpace,
    pub pitch: f64,
    pub verdict: String,
    pub threshold: Option<f64>,
    pub witnesses: serde_json::Value,
}

impl DecisionRecord {
    pub fn foliation(space: &AmbientSpace, pitch: Pitch, v: &FoliationVerdict) -> Self {
        let x0 = solve_x0();
        let (verdict, threshold) = match v {
            FoliationVerdict::Foliates => ("foliates".to_string(), None),
            FoliationVerdict::PartialAbove(h) => ("partial_above".to_string(), Some(*h)),
        };
        DecisionRecord {
            space: *space,
            pitch: pitch.value(),
            verdict,
            threshold,
            witnesses: serde_json::json!({ "x0": x0 }),
        }
    }

    pub fn embedding_noncompact(
        space: &AmbientSpace,
        pitch: Pitch,
        tube: &TubeSolution,
        embedded: bool,
    ) -> Self {
        DecisionRecord {
            space: *space,
            pitch: pitch.value(),
            verdict: if embedded { "embedded" } else { "not_embedded" }.into(),
            threshold: Some(PI * pitch.value().abs()),
            witnesses: serde_json::json!({
                "h_max": tube.curve.h_max(),
                "J_tube": tube.point.j(),
            }),
        }
    }

    pub fn embedding_berger(space: &AmbientSpace, d: &BergerEmbedding) -> Self {
        DecisionRecord {
            space: *space,
            pitch: d.pitch,
            verdict: if d.embedded {
                "embedded"
            } else {
                "not_embedded"
            }
            .into(),
            threshold: Some(d.fiber_length),
            witnesses: serde_json::json!({
                "m": d.m,
                "h_max": d.h_max,
                "stacked_height": d.stacked_height,
                "pitch_admissible": d.pitch_admissible,
                "tube_exists": d.tube_exists,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::tube_energy;
    use crate::roots::RootFindSettings;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn space(k: f64, t: f64) -> AmbientSpace {
        AmbientSpace::new(k, t).unwrap()
    }

    fn pitch(a: f64) -> Pitch {
        Pitch::new(a).unwrap()
    }

    #[test]
    fn x0_satisfies_its_equation() {
        let x0 = solve_x0();
        assert_abs_diff_eq!(x0, 0.83356, epsilon = 5e-5);
        assert_abs_diff_eq!(x0 * x0.atanh(), 1.0, epsilon = 1e-10);
        assert!(0.5 * 0.5f64.atanh() - 1.0 < 0.0);
        assert!(0.95 * 0.95f64.atanh() - 1.0 > 0.0);
    }

    #[test]
    fn foliation_thresholds() {
        let skr = space(1.0, 0.0);
        let threshold = ((1.0 - solve_x0().powi(2)) / solve_x0().powi(2)).sqrt();
        assert_relative_eq!(threshold, 0.6627434193491806, max_relative = 1e-10);
        assert_eq!(
            foliation_decision(&skr, pitch(1.0)).unwrap(),
            FoliationVerdict::Foliates
        );
        match foliation_decision(&skr, pitch(0.3)).unwrap() {
            FoliationVerdict::PartialAbove(h) => assert!(h > 0.0),
            v => panic!("expected partial verdict, got {v:?}"),
        }
        // verdict flips exactly at the threshold
        assert_eq!(
            foliation_decision(&skr, pitch(threshold + 1e-9)).unwrap(),
            FoliationVerdict::Foliates
        );
        assert!(matches!(
            foliation_decision(&skr, pitch(threshold - 1e-9)).unwrap(),
            FoliationVerdict::PartialAbove(_)
        ));
        // compact model, horizontal pitch
        let berg = space(4.0, 0.5);
        match foliation_decision(&berg, pitch(0.25)).unwrap() {
            FoliationVerdict::PartialAbove(h) => {
                assert_relative_eq!(h, 0.28181843431185055, max_relative = 1e-9)
            }
            v => panic!("expected partial verdict, got {v:?}"),
        }
        // generic pitch: nothing is established
        assert!(matches!(
            foliation_decision(&berg, pitch(0.5)),
            Err(Error::NotApplicable(_))
        ));
        assert!(matches!(
            foliation_decision(&space(0.0, 1.0), pitch(1.0)),
            Err(Error::NotApplicable(_))
        ));
        // a tau = 0 family that does foliate the compact model
        let squat = space(4.0, 1.1);
        assert_eq!(
            foliation_decision(&squat, pitch(0.55)).unwrap(),
            FoliationVerdict::Foliates
        );
    }

    #[test]
    fn closed_form_height_matches_quadrature() {
        let s = space(1.0, 0.0);
        let q = QuadratureSettings::default();
        let a = pitch(1.0);
        let v = hmax_closed_form(&s, a, 1.0).unwrap();
        assert_abs_diff_eq!(v, 0.6327172275233334, epsilon = 1e-12);
        let p = crate::profile::ModuliPoint::new(&s, 1.0, -2.0).unwrap();
        let hq = crate::profile::h_max(&s, a, &p, &q).unwrap();
        assert_abs_diff_eq!(v, hq, epsilon = 1e-8);
        assert!(matches!(
            hmax_closed_form(&space(4.0, 0.5), a, 1.0),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn closed_form_derivative_matches_finite_difference() {
        let s = space(1.0, 0.0);
        let a = pitch(0.4);
        for h in [0.3, 0.9, 2.0] {
            let fd = (hmax_closed_form(&s, a, h + 1e-6).unwrap()
                - hmax_closed_form(&s, a, h - 1e-6).unwrap())
                / 2e-6;
            assert_relative_eq!(
                hmax_derivative(&s, a, h).unwrap(),
                fd,
                max_relative = 1e-6,
                epsilon = 1e-9
            );
        }
        // the derivative changes sign at the partial-foliation peak
        let h_star = match foliation_decision(&s, a).unwrap() {
            FoliationVerdict::PartialAbove(h) => h,
            _ => panic!("pitch 0.4 is below the foliation threshold"),
        };
        assert!(hmax_derivative(&s, a, 0.9 * h_star).unwrap() > 0.0);
        assert!(hmax_derivative(&s, a, 1.1 * h_star).unwrap() < 0.0);
    }

    #[test]
    fn embeddedness_checks() {
        let r = RootFindSettings::default();
        let q = QuadratureSettings::default();
        // compact model at H = 1: the first four closing pitches embed, the fifth does not
        let berg = space(4.0, 0.5);
        let fiber = berg.fiber_length().unwrap();
        assert_relative_eq!(fiber, PI, max_relative = 1e-15);
        for m in 1..=5u32 {
            let a = berg.berger_pitch(1, m).unwrap().pitch;
            let tube = tube_energy(&berg, a, 1.0, &r, &q).unwrap();
            let d = embedded_berger(&berg, m, &tube).unwrap();
            assert_eq!(d.embedded, m <= 4, "m = {m}");
            if m == 2 {
                // horizontal closing pitch: compact criterion coincides with
                // the non-compact one
                assert_eq!(d.embedded, embedded_noncompact(&berg, a, &tube));
            }
        }
        // mismatched pitch is rejected
        let t = tube_energy(&berg, pitch(0.5), 1.0, &r, &q).unwrap();
        assert!(matches!(
            embedded_berger(&berg, 3, &t),
            Err(Error::NotClosing(_))
        ));
        // non-compact: embedded on both ends of the family
        let nil = space(0.0, 1.0);
        let t = tube_energy(&nil, pitch(1.0), 2.0, &r, &q).unwrap();
        assert!(embedded_noncompact(&nil, pitch(1.0), &t));
    }

    #[test]
    fn dihedral_symmetry_order() {
        let r = RootFindSettings::default();
        let q = QuadratureSettings::default();
        let skr = space(1.0, 0.0);
        let t = tube_energy(&skr, pitch(1.0), 1.0, &r, &q).unwrap();
        assert_eq!(dihedral_order(&skr, pitch(1.0), &t, &q), 4);
        let berg = space(4.0, 0.5);
        let t = tube_energy(&berg, pitch(0.25), 1.0, &r, &q).unwrap();
        assert_eq!(dihedral_order(&berg, pitch(0.25), &t, &q), 4);
        let nil = space(0.0, 1.0);
        let t = tube_energy(&nil, pitch(1.0), 2.0, &r, &q).unwrap();
        assert_eq!(dihedral_order(&nil, pitch(1.0), &t, &q), 2);
        // witness: the maximal height is not attained at the mean radius
        let r_pi = radius_at(&nil, &t.point, PI);
        let (rm, rp) = radius_extremes(&nil, &t.point);
        assert!((r_pi - 0.5 * (rm + rp)).abs() > 1e-3);
    }

    #[test]
    fn foliating_family_heights_decrease_and_radii_nest() {
        // Foliates verdict: h_max strictly decreasing over a wide log grid
        let skr = space(1.0, 0.0);
        let a = pitch(1.0);
        assert_eq!(
            foliation_decision(&skr, a).unwrap(),
            FoliationVerdict::Foliates
        );
        let mut prev = f64::INFINITY;
        for i in 0..25 {
            let h = 1e-3 * (1e6f64).powf(i as f64 / 24.0);
            let v = hmax_closed_form(&skr, a, h).unwrap();
            assert!(v < prev, "h_max not decreasing at H = {h}");
            prev = v;
        }
        // radius intervals nest with growing mean curvature above the peak
        let berg = space(4.0, 0.5);
        let hp = pitch(0.25);
        let h_star = match foliation_decision(&berg, hp).unwrap() {
            FoliationVerdict::PartialAbove(h) => h,
            _ => unreachable!(),
        };
        let interval = |h: f64| {
            let p = crate::profile::ModuliPoint::new(&berg, h, -2.0 * h / 4.0).unwrap();
            radius_extremes(&berg, &p)
        };
        let mut prev = interval(h_star * 1.5);
        for f in [2.5, 5.0, 12.0, 40.0] {
            let cur = interval(h_star * f);
            assert!(
                cur.0 > prev.0 && cur.1 < prev.1,
                "intervals fail to nest at factor {f}: {cur:?} vs {prev:?}"
            );
            prev = cur;
        }
    }

    #[test]
    fn decision_records_serialize() {
        let s = space(4.0, 0.5);
        let rec = DecisionRecord::foliation(
            &s,
            pitch(0.25),
            &foliation_decision(&s, pitch(0.25)).unwrap(),
        );
        let js = serde_json::to_value(&rec).unwrap();
        assert_eq!(js["verdict"], "partial_above");
        assert!(js["threshold"].as_f64().unwrap() > 0.28);
        assert!(js["witnesses"]["x0"].as_f64().unwrap() > 0.8);
    }
}
