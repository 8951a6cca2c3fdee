//! Adaptive quadrature: 15-point Gauss-Kronrod with worst-interval-first
//! refinement, falling back to node-doubling composite Simpson if the
//! Kronrod error estimate stalls.

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2048,
        }
    }
}

impl QuadratureSettings {
    pub fn validated(self) -> Result<Self> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be > 0".into()));
        }
        Ok(self)
    }

    pub fn with_tol(tol: f64) -> Self {
        QuadratureSettings {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss-Kronrod panel: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut res_abs = WGK[7] * fc.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod / 2.0;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let integral = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * 1.0_f64.min((200.0 * err / res_asc).powf(1.5));
    }
    let min_err = 50.0 * f64::EPSILON * res_abs;
    if min_err > err {
        err = min_err;
    }
    Ok((integral, err))
}

/// Integrate `f` over [a, b] adaptively. The integrand may reject points with
/// an error, which aborts the integration.
pub fn integrate<F: Fn(f64) -> Result<f64>>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (i0, e0) = gk15(&f, a, b)?;
    let mut intervals = vec![(a, b, i0, e0)];
    let mut total = i0;
    let mut total_err = e0;
    for _ in 0..settings.max_subdivisions {
        let tol = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        // split the interval with the largest error estimate
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty interval list");
        let (lo, hi, iv, ev) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution; keep its estimate
            intervals.push((lo, hi, iv, 0.0));
            total_err -= ev;
            continue;
        }
        let (i1, e1) = gk15(&f, lo, mid)?;
        let (i2, e2) = gk15(&f, mid, hi)?;
        total += i1 + i2 - iv;
        total_err += e1 + e2 - ev;
        intervals.push((lo, mid, i1, e1));
        intervals.push((mid, hi, i2, e2));
    }
    let tol = settings.abs_tol.max(settings.rel_tol * total.abs());
    if total_err <= tol {
        return Ok(total);
    }
    // Kronrod refinement stalled; try doubling composite Simpson before giving up.
    simpson_doubling(&f, a, b, settings).ok_or_else(|| {
        Error::Quadrature(format!(
            "error estimate {total_err:.3e} above tolerance {tol:.3e} on [{a}, {b}]"
        ))
    })?
}

fn simpson_doubling<F: Fn(f64) -> Result<f64>>(
    f: &F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Option<Result<f64>> {
    let mut n = 64usize;
    let mut prev = match composite_simpson(f, a, b, n) {
        Ok(v) => v,
        Err(e) => return Some(Err(e)),
    };
    for _ in 0..16 {
        n *= 2;
        let cur = match composite_simpson(f, a, b, n) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let tol = settings.abs_tol.max(settings.rel_tol * cur.abs());
        if (cur - prev).abs() <= tol {
            return Some(Ok(cur));
        }
        prev = cur;
    }
    None
}

fn composite_simpson<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, n: usize) -> Result<f64> {
    let h = (b - a) / n as f64;
    let mut sum = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}
