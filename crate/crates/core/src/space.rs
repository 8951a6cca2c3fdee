//! Ambient-space parameters for the homogeneous 3-manifolds E(kappa, tau),
//! kappa-parameterized trigonometric functions, screw-motion pitch arithmetic,
//! and the closed-form scalar quantities attached to a pitch.
//!
//! The coordinate model is geodesic polar coordinates (r, theta, z) with metric
//!
//! ```text
//!     g = dr^2 + sn(r)^2 dtheta^2 + (4 tau sn(r/2)^2 dtheta - dz)^2,
//! ```
//!
//! where r ranges over (0, pi/sqrt(kappa)) for kappa > 0 and (0, inf) otherwise.
//! The screw motion with pitch `a` acts by (r, theta, z) -> (r, theta + s, z + a s).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Constructor guard: reject spaces this close to the space-form locus kappa = 4 tau^2.
const SPACE_FORM_TOL: f64 = 1e-12;
/// Switch to truncated series when |kappa| x^2 drops below this.
const SERIES_SWITCH: f64 = 1e-8;

/// The pair (kappa, tau) with the derived sign epsilon = sgn(kappa - 4 tau^2).
///
/// kappa is the base curvature, tau >= 0 the bundle curvature. The sign epsilon
/// is stored at construction so it cannot flip by round-off near kappa = 4 tau^2
/// (such spaces are rejected outright: they are space forms, not fibered).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpace {
    kappa: f64,
    tau: f64,
    epsilon: i32,
}

/// Screw-motion pitch: vertical translation per unit rotation angle.
///
/// Any finite real is a valid pitch; admissibility is a predicate on
/// (space, pitch), not a construction constraint.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Pitch(f64);

impl Pitch {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::Domain(format!("pitch must be finite, got {a}")));
        }
        Ok(Pitch(a))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Branch selector for [`AmbientSpace::trig_eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Sn,
    Cs,
    Tn,
    Ct,
    Arcs,
    Arct,
}

/// Report returned by [`AmbientSpace::berger_pitch`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BergerPitch {
    pub pitch: Pitch,
    pub n: u32,
    pub m: u32,
    /// The orbit closes after m turns and n fiber periods by construction.
    pub closes_fibers: bool,
    /// Admissibility of a_{n,m} itself.
    pub admissible: bool,
    /// For n = 1: whether a tube with this pitch exists at all
    /// (admissible or conjugate to an admissible pitch). `None` for n >= 2.
    pub tube_exists: Option<bool>,
}

impl AmbientSpace {
    /// Build E(kappa, tau). Rejects tau < 0, non-finite input, and the
    /// space-form locus |kappa - 4 tau^2| < 1e-12.
    pub fn new(kappa: f64, tau: f64) -> Result<Self> {
        if !kappa.is_finite() || !tau.is_finite() {
            return Err(Error::InvalidSpace(format!(
                "kappa and tau must be finite, got kappa={kappa}, tau={tau}"
            )));
        }
        if tau < 0.0 {
            return Err(Error::InvalidSpace(format!(
                "tau must be >= 0 (orientation normalization), got {tau}"
            )));
        }
        let d = kappa - 4.0 * tau * tau;
        if d.abs() < SPACE_FORM_TOL {
            return Err(Error::InvalidSpace(format!(
                "kappa = 4 tau^2 is a space form, not fibered (kappa={kappa}, tau={tau})"
            )));
        }
        Ok(AmbientSpace {
            kappa,
            tau,
            epsilon: if d > 0.0 { 1 } else { -1 },
        })
    }

    #[inline]
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// sgn(kappa - 4 tau^2), fixed at construction.
    #[inline]
    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    #[inline]
    fn eps_f(&self) -> f64 {
        f64::from(self.epsilon)
    }

    /// kappa - 4 tau^2.
    #[inline]
    pub fn curvature_gap(&self) -> f64 {
        self.kappa - 4.0 * self.tau * self.tau
    }

    /// Upper end of the radial interval: pi/sqrt(kappa) for kappa > 0, infinity otherwise.
    pub fn radial_sup(&self) -> f64 {
        if self.kappa > 0.0 {
            std::f64::consts::PI / self.kappa.sqrt()
        } else {
            f64::INFINITY
        }
    }

    // ----- generalized trigonometric functions -----

    /// sn(x): sin(sqrt(k) x)/sqrt(k), x, or sinh(sqrt(-k) x)/sqrt(-k), continuous in kappa.
    pub fn sn(&self, x: f64) -> f64 {
        let k = self.kappa;
        let z = k * x * x;
        if z.abs() < SERIES_SWITCH {
            return x * (1.0 - z / 6.0 * (1.0 - z / 20.0));
        }
        if k > 0.0 {
            let s = k.sqrt();
            (s * x).sin() / s
        } else {
            let s = (-k).sqrt();
            (s * x).sinh() / s
        }
    }

    /// cs(x): cos(sqrt(k) x), 1, or cosh(sqrt(-k) x), continuous in kappa.
    pub fn cs(&self, x: f64) -> f64 {
        let k = self.kappa;
        let z = k * x * x;
        if z.abs() < SERIES_SWITCH {
            return 1.0 - z / 2.0 * (1.0 - z / 12.0);
        }
        if k > 0.0 {
            (k.sqrt() * x).cos()
        } else {
            ((-k).sqrt() * x).cosh()
        }
    }

    /// (cs(x) - 1)/kappa evaluated without the cancellation that the direct
    /// quotient suffers for small |kappa| x^2; tends to -x^2/2 as kappa -> 0.
    pub(crate) fn cs_minus_one_over_kappa(&self, x: f64) -> f64 {
        let z = self.kappa * x * x;
        if z.abs() < 1e-4 {
            return -x * x / 2.0 * (1.0 - z / 12.0 * (1.0 - z / 30.0));
        }
        (self.cs(x) - 1.0) / self.kappa
    }

    /// tn = sn/cs. Unbounded at zeros of cs for kappa > 0.
    #[inline]
    pub fn tn(&self, x: f64) -> f64 {
        self.sn(x) / self.cs(x)
    }

    /// ct = cs/sn. Unbounded at zeros of sn.
    #[inline]
    pub fn ct(&self, x: f64) -> f64 {
        self.cs(x) / self.sn(x)
    }

    /// Inverse of cs: the unique preimage in [0, pi/sqrt(kappa)] for kappa > 0
    /// and in [0, inf) for kappa < 0. Not defined at kappa = 0 (cs degenerates
    /// to the constant 1; callers that need the kappa -> 0 limit use
    /// [`AmbientSpace::arcs_one_minus`] on the deviation from 1).
    pub fn arcs(&self, y: f64) -> Result<f64> {
        let k = self.kappa;
        if k > 0.0 {
            if !(-1.0..=1.0).contains(&y) {
                return Err(Error::Domain(format!("arcs argument {y} outside [-1,1]")));
            }
            Ok(y.acos() / k.sqrt())
        } else if k < 0.0 {
            if y < 1.0 {
                return Err(Error::Domain(format!(
                    "arcs argument {y} below 1 for kappa < 0"
                )));
            }
            Ok(y.acosh() / (-k).sqrt())
        } else {
            Err(Error::Domain(
                "arcs is degenerate at kappa = 0; use the limit form".into(),
            ))
        }
    }

    /// arcs(1 - kappa w) evaluated stably for all kappa, including the
    /// kappa -> 0 limit sqrt(2 w). Requires w >= 0.
    pub(crate) fn arcs_one_minus(&self, w: f64) -> Result<f64> {
        if !(w >= 0.0) {
            return Err(Error::Domain(format!("arcs argument beyond 1 (w = {w})")));
        }
        let mut z = self.kappa * w;
        if z.abs() < 1e-4 {
            // acos(1-z)/sqrt(kappa) = sqrt(2w) (1 + z/12 + 3z^2/160 + 5z^3/896 + ...),
            // identical series for the acosh branch at negative z.
            return Ok(
                (2.0 * w).sqrt() * (1.0 + z / 12.0 + 3.0 * z * z / 160.0 + 5.0 * z * z * z / 896.0)
            );
        }
        // round-off guard at the antipodal end of the principal range
        if z > 2.0 && z < 2.0 * (1.0 + 1e-12) {
            z = 2.0;
        }
        self.arcs(1.0 - z)
    }

    /// Inverse of tn: the unique preimage in (-pi/(2 sqrt(kappa)), pi/(2 sqrt(kappa)))
    /// for kappa > 0, and in R for kappa <= 0. For kappa < 0 the argument must
    /// satisfy |y| < 1/sqrt(-kappa).
    pub fn arct(&self, y: f64) -> Result<f64> {
        let k = self.kappa;
        let w = k * y * y;
        if w.abs() < SERIES_SWITCH {
            return Ok(y * (1.0 - w / 3.0 * (1.0 - 3.0 * w / 5.0)));
        }
        if k > 0.0 {
            let s = k.sqrt();
            Ok((s * y).atan() / s)
        } else {
            let s = (-k).sqrt();
            if s * y.abs() >= 1.0 {
                return Err(Error::Domain(format!(
                    "arct argument {y} outside (-1/sqrt(-kappa), 1/sqrt(-kappa))"
                )));
            }
            Ok((s * y).atanh() / s)
        }
    }

    /// Evaluate one of the kappa-dependent trigonometric branches with domain checks.
    pub fn trig_eval(&self, kind: TrigKind, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!(
                "trig argument must be finite, got {x}"
            )));
        }
        match kind {
            TrigKind::Sn => Ok(self.sn(x)),
            TrigKind::Cs => Ok(self.cs(x)),
            TrigKind::Tn => {
                let c = self.cs(x);
                if c == 0.0 {
                    return Err(Error::Domain(format!(
                        "tn undefined at zero of cs, x = {x}"
                    )));
                }
                Ok(self.sn(x) / c)
            }
            TrigKind::Ct => {
                let s = self.sn(x);
                if s == 0.0 {
                    return Err(Error::Domain(format!(
                        "ct undefined at zero of sn, x = {x}"
                    )));
                }
                Ok(self.cs(x) / s)
            }
            TrigKind::Arcs => self.arcs(x),
            TrigKind::Arct => self.arct(x),
        }
    }

    /// Metric quadratic form g_p(v, v) at p = (r, theta, z) for a tangent
    /// vector v = (vr, vtheta, vz) in coordinate components.
    pub fn metric_form(&self, p: [f64; 3], v: [f64; 3]) -> f64 {
        let r = p[0];
        let twist = 4.0 * self.tau * self.sn(0.5 * r).powi(2) * v[1] - v[2];
        v[0] * v[0] + self.sn(r).powi(2) * v[1] * v[1] + twist * twist
    }

    // ----- pitch predicates and scalars -----

    /// Admissible pitch: a tau eps in (-inf, eps/2) for kappa <= 0,
    /// or in [2 tau^2 eps / kappa, eps/2) for kappa > 0.
    pub fn is_admissible(&self, a: Pitch) -> bool {
        let v = a.value() * self.tau * self.eps_f();
        let hi = 0.5 * self.eps_f();
        if self.kappa <= 0.0 {
            v < hi
        } else {
            let lo = 2.0 * self.tau * self.tau * self.eps_f() / self.kappa;
            lo <= v && v < hi
        }
    }

    /// Whether the screw motion group with this pitch contains a geodesic orbit.
    /// For kappa > 0 this interval is wider than admissibility: it is symmetric
    /// under conjugation a <-> 4 tau / kappa - a.
    pub fn has_geodesic_orbit(&self, a: Pitch) -> bool {
        let v = a.value() * self.tau * self.eps_f();
        let hi = 0.5 * self.eps_f();
        if self.kappa <= 0.0 {
            v < hi
        } else {
            let lo = 4.0 * self.tau * self.tau * self.eps_f() / self.kappa - hi;
            lo < v && v < hi
        }
    }

    /// For kappa > 0: the pitch is not admissible itself but its conjugate is.
    pub fn is_conjugate_admissible(&self, a: Pitch) -> bool {
        if self.kappa <= 0.0 || self.is_admissible(a) {
            return false;
        }
        self.conjugate_pitch(a)
            .map(|c| self.is_admissible(c))
            .unwrap_or(false)
    }

    /// Radius of the geodesic orbit c_a(s) = (rho_a, s, a s).
    pub fn geodesic_radius(&self, a: Pitch) -> Result<f64> {
        if !self.has_geodesic_orbit(a) {
            return Err(Error::NoGeodesicOrbit);
        }
        // rho_a solves cs(rho) = 1 + kappa (2 a tau - 1)/(kappa - 4 tau^2).
        let w = (1.0 - 2.0 * a.value() * self.tau) / self.curvature_gap();
        self.arcs_one_minus(w).map_err(|_| Error::NoGeodesicOrbit)
    }

    /// Cosine of the constant angle between the geodesic orbit and the fibers.
    pub fn fiber_angle(&self, a: Pitch) -> Result<f64> {
        if !self.has_geodesic_orbit(a) {
            return Err(Error::NoGeodesicOrbit);
        }
        let av = a.value();
        let rad = self.curvature_gap() * (1.0 + av * av * self.kappa - 4.0 * av * self.tau);
        if rad <= 0.0 {
            return Err(Error::NoGeodesicOrbit);
        }
        Ok((av * self.kappa - 2.0 * self.tau) * self.eps_f() / rad.sqrt())
    }

    /// Conjugate pitch 4 tau / kappa - a (kappa > 0 only).
    pub fn conjugate_pitch(&self, a: Pitch) -> Result<Pitch> {
        if self.kappa <= 0.0 {
            return Err(Error::NotDefined);
        }
        Pitch::new(4.0 * self.tau / self.kappa - a.value())
    }

    /// The isometry exchanging the screw motion group of pitch a with that of
    /// the conjugate pitch (kappa > 0): reflection at the equatorial cylinder
    /// combined with the fiberwise reflection
    ///
    /// ```text
    ///     (r, theta, z) -> (pi/sqrt(kappa) - r, theta, (4 tau / kappa) theta - z).
    /// ```
    ///
    /// It is an involution, maps the geodesic orbit of pitch a pointwise onto
    /// the one of the conjugate pitch, and preserves the model metric.
    pub fn conjugation_isometry(&self, _a: Pitch, p: [f64; 3]) -> Result<[f64; 3]> {
        if self.kappa <= 0.0 {
            return Err(Error::NotDefined);
        }
        Ok([
            self.radial_sup() - p[0],
            p[1],
            4.0 * self.tau / self.kappa * p[1] - p[2],
        ])
    }

    /// Critical mean curvature: 0 for kappa >= 0, sqrt(-kappa)/2 for kappa < 0.
    /// Bounded profile curves require H strictly above this.
    pub fn critical_curvature(&self) -> f64 {
        if self.kappa < 0.0 {
            0.5 * (-self.kappa).sqrt()
        } else {
            0.0
        }
    }

    /// Existence bound: tubes with pitch a exist for every H above
    /// sqrt((2 tau^2 - a tau kappa)/(4 a tau - 2)). Zero when the numerator
    /// vanishes (product spaces and the horizontal Berger pitch).
    pub fn existence_bound(&self, a: Pitch) -> Result<f64> {
        let num = 2.0 * self.tau * self.tau - a.value() * self.tau * self.kappa;
        if num == 0.0 {
            return Ok(0.0);
        }
        let den = 4.0 * a.value() * self.tau - 2.0;
        if den == 0.0 {
            return Err(Error::NoGeodesicOrbit);
        }
        let ratio = num / den;
        if ratio < 0.0 {
            return Err(Error::NoGeodesicOrbit);
        }
        Ok(ratio.sqrt())
    }

    /// The interval [J_minus, J_plus] that must contain the energy of every
    /// tube with pitch a and mean curvature H.
    pub fn energy_bounds(&self, a: Pitch, h: f64) -> Result<(f64, f64)> {
        if !(h > 0.0) {
            return Err(Error::Domain(format!("energy bounds need H > 0, got {h}")));
        }
        let gap = self.curvature_gap();
        let j_minus = 2.0 * h * (2.0 * a.value() * self.tau - 1.0) / gap;
        let j_plus =
            j_minus - (2.0 * self.tau * self.tau - a.value() * self.tau * self.kappa) / (h * gap);
        Ok((j_minus, j_plus))
    }

    /// Length of a fiber in the compact model (kappa > 0): 8 pi tau / kappa.
    pub fn fiber_length(&self) -> Result<f64> {
        if self.kappa <= 0.0 {
            return Err(Error::NotDefined);
        }
        Ok(8.0 * std::f64::consts::PI * self.tau / self.kappa)
    }

    /// The pitch a_{n,m} = (n/m)(4 tau / kappa) whose screw orbit closes after
    /// m turns and n fiber periods, with admissibility and (for n = 1)
    /// tube-existence flags.
    pub fn berger_pitch(&self, n: u32, m: u32) -> Result<BergerPitch> {
        if self.kappa <= 0.0 {
            return Err(Error::NotDefined);
        }
        if n == 0 || m == 0 {
            return Err(Error::Domain("berger pitch needs n, m >= 1".into()));
        }
        let pitch = Pitch::new(f64::from(n) / f64::from(m) * 4.0 * self.tau / self.kappa)?;
        let tube_exists = (n == 1).then(|| {
            let eps = self.eps_f();
            let mf = f64::from(m);
            let t2 = self.tau * self.tau;
            let low_m = mf * eps <= 2.0 * eps && (self.kappa - 8.0 * t2 / mf) * eps > 0.0;
            let high_m =
                mf * eps >= 2.0 * eps && (self.kappa - 8.0 * (mf - 1.0) * t2 / mf) * eps > 0.0;
            low_m || high_m
        });
        Ok(BergerPitch {
            pitch,
            n,
            m,
            closes_fibers: true,
            admissible: self.is_admissible(pitch),
            tube_exists,
        })
    }
}
