//! Scalar root finding: bisection, Brent refinement of a bracket, and real
//! roots of cubics (used by the Heisenberg uniqueness bound).

use crate::error::{Error, Result};

/// Tolerances for scan-and-refine root searches.
#[derive(Debug, Clone, Copy)]
pub struct RootFindSettings {
    /// Half-width target on the independent variable.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of scan nodes used to bracket sign changes.
    pub scan_points: usize,
}

impl Default for RootFindSettings {
    fn default() -> Self {
        RootFindSettings {
            tol: 1e-13,
            max_iter: 200,
            scan_points: 64,
        }
    }
}

impl RootFindSettings {
    pub fn validated(self) -> Result<Self> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain("root tolerance must be > 0".into()));
        }
        if self.scan_points < 8 {
            return Err(Error::Domain("scan_points must be >= 8".into()));
        }
        Ok(self)
    }
}

/// Plain bisection on [a, b]; f(a) and f(b) must have opposite signs.
pub fn bisect<F: Fn(f64) -> Result<f64>>(
    f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "bisection bracket [{a}, {b}] has no sign change"
        )));
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Brent's method on a sign-change bracket [x1, x2].
pub fn brent<F: Fn(f64) -> Result<f64>>(
    f: F,
    x1: f64,
    x2: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let eps = f64::EPSILON;
    let (mut a, mut b) = (x1, x2);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "brent bracket [{x1}, {x2}] has no sign change"
        )));
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * eps * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation / secant
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Scan [lo, hi] at `n` evenly spaced nodes and Brent-refine every sign
/// change. Exact zeros at scan nodes are kept as roots.
pub fn scan_and_refine<F: Fn(f64) -> Result<f64> + Copy>(
    f: F,
    lo: f64,
    hi: f64,
    settings: &RootFindSettings,
) -> Result<Vec<(f64, f64, f64)>> {
    let n = settings.scan_points.max(8);
    let mut xs = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        xs.push(x);
        fs.push(f(x)?);
    }
    let mut out = Vec::new();
    for i in 0..n - 1 {
        if fs[i] == 0.0 {
            out.push((xs[i], xs[i], xs[i]));
        } else if fs[i].signum() != fs[i + 1].signum() && fs[i + 1] != 0.0 {
            let root = brent(f, xs[i], xs[i + 1], settings.tol, settings.max_iter)?;
            out.push((xs[i], xs[i + 1], root));
        }
    }
    if fs[n - 1] == 0.0 {
        out.push((xs[n - 1], xs[n - 1], xs[n - 1]));
    }
    Ok(out)
}

/// All real roots of c3 x^3 + c2 x^2 + c1 x + c0, Newton-polished.
pub fn cubic_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c3 == 0.0 {
        return quadratic_real_roots(c2, c1, c0);
    }
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // depressed cubic t^3 + p t + q with x = t - a/3
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if disc > 0.0 {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v + shift]
    } else if p == 0.0 && q == 0.0 {
        vec![shift]
    } else {
        // three real roots, trigonometric form
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect()
    };
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let fx = ((c3 * *r + c2) * *r + c1) * *r + c0;
            let dfx = (3.0 * c3 * *r + 2.0 * c2) * *r + c1;
            if dfx != 0.0 {
                let step = fx / dfx;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return vec![];
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + s.copysign(b));
    let mut out = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q / a, c / q]
    };
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn brent_finds_cos_root() {
        let r = brent(|x| Ok(x.cos()), 1.0, 2.0, 1e-14, 100).unwrap();
        assert_abs_diff_eq!(r, std::f64::consts::FRAC_PI_2, epsilon = 1e-13);
    }

    #[test]
    fn bisect_matches_brent() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let rb = bisect(f, 0.0, 2.0, 1e-13, 200).unwrap();
        let rn = brent(f, 0.0, 2.0, 1e-13, 200).unwrap();
        assert_abs_diff_eq!(rb, rn, epsilon = 1e-12);
        assert_abs_diff_eq!(rb, 2f64.cbrt(), epsilon = 1e-12);
    }

    #[test]
    fn scan_finds_all_roots() {
        let s = RootFindSettings {
            scan_points: 128,
            ..Default::default()
        };
        let roots =
            scan_and_refine(|x| Ok((x - 1.0) * (x - 2.0) * (x - 3.5)), 0.0, 4.0, &s).unwrap();
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.5]) {
            assert_abs_diff_eq!(r.2, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn cubic_roots_cover_all_cases() {
        // one real root
        let r = cubic_real_roots(1.0, 0.0, 0.0, -8.0);
        assert_eq!(r.len(), 1);
        assert_abs_diff_eq!(r[0], 2.0, epsilon = 1e-12);
        // three real roots
        let r = cubic_real_roots(1.0, -6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
        // the uniqueness-bound cubic at pitch 1, bundle curvature 1
        let r = cubic_real_roots(6.0, -9.0, -2.0, 1.0);
        let largest = r.last().copied().unwrap();
        assert!(largest > 1.6 && largest < 1.7);
        // degenerate to quadratic
        let r = cubic_real_roots(0.0, 1.0, -3.0, 2.0);
        assert_eq!(r.len(), 2);
    }
}
