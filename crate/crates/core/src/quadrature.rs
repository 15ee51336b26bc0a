//! Adaptive Gauss–Kronrod (G7/K15) quadrature on finite intervals and on the
//! open unit interval, where integrands may blow up at the endpoints.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 48;

/// Interior cut-off of the unit interval; the tails below it are handled by a
/// logarithmic change of variables.
pub const UNIT_EPS: f64 = 1e-8;
/// Tail mass below this distance from 0 or 1 is dropped.
pub const UNIT_FLOOR: f64 = 1e-15;

/// Returns the K15 estimate, its error estimate and the K15 estimate of `∫|f|`.
fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(Error::Evaluation(format!("integrand is not finite at {c}")));
    }
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        if !f1.is_finite() || !f2.is_finite() {
            return Err(Error::Evaluation(format!(
                "integrand is not finite near {}",
                c - dx
            )));
        }
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((k * h, (k - g).abs() * h, abs * h.abs()))
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let (value, err, abs) = kronrod(f, a, b)?;
    let unsplittable = (b - a).abs() <= 64.0 * f64::EPSILON * a.abs().max(b.abs());
    if err <= tol.max(50.0 * f64::EPSILON * abs) || unsplittable {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Evaluation(format!(
            "no convergence on [{a}, {b}] (error estimate {err:e})"
        )));
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, depth + 1)? + adapt(f, m, b, 0.5 * tol, depth + 1)?)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    adapt(&f, a, b, tol, 0)
}

/// Integrates `f` over `(0, 1)`.
///
/// The bulk `(UNIT_EPS, 1 - UNIT_EPS)` is integrated directly. Each tail is
/// mapped through `p = e^s` (resp. `1 - e^s`) so that integrable endpoint
/// singularities such as `z(p)^2` are resolved.
pub fn integrate_unit<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    let bulk = adapt(&f, UNIT_EPS, 1.0 - UNIT_EPS, 0.5 * tol, 0)?;
    let (lo, hi) = (UNIT_FLOOR.ln(), UNIT_EPS.ln());
    let lower = adapt(
        &|s: f64| {
            let p = s.exp();
            f(p) * p
        },
        lo,
        hi,
        0.25 * tol,
        0,
    )?;
    let upper = adapt(
        &|s: f64| {
            let q = s.exp();
            f(1.0 - q) * q
        },
        lo,
        hi,
        0.25 * tol,
        0,
    )?;
    Ok(bulk + lower + upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn log_singularity_on_unit_interval() {
        // ∫ ln(p)^2 dp = 2
        let v = integrate_unit(|p: f64| p.ln().powi(2), 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        assert!(integrate(|x: f64| 1.0 / x, -1.0, 1.0, 1e-10).is_err());
    }
}
