//! Distortion functions, the Choquet regularizer `Φ_h` and the
//! location-scale laws that maximize it under mean and variance constraints.
//!
//! For a concave distortion `h` with `h(0) = h(1) = 0` the regularizer of a
//! law with quantile function `Q` is `∫₀¹ Q(p) h′(1−p) dp`. Among all laws with
//! mean `m` and standard deviation `s` it is maximized by
//! `Q(p) = m + s·h′(1−p)/‖h′‖₂`, which attains `s·‖h′‖₂`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_unit, UNIT_FLOOR};

const QUAD_TOL: f64 = 1e-13;

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    if p < 0.5 {
        -SQRT_2 * erfc_inv(2.0 * p)
    } else {
        SQRT_2 * erfc_inv(2.0 * (1.0 - p))
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Built-in distortions selectable by name in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistortionPreset {
    /// `h(p) = ∫₀ᵖ z(1−s) ds`; the optimal law is Gaussian.
    Normal,
    /// `h(p) = p − p²` (Gini mean difference); the optimal law is uniform.
    Gini,
}

impl DistortionPreset {
    pub fn build(self) -> Distortion {
        match self {
            DistortionPreset::Normal => Distortion::normal(),
            DistortionPreset::Gini => Distortion::gini(),
        }
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Normal,
    Gini,
    Custom {
        name: String,
        h: ScalarFn,
        h_prime: ScalarFn,
    },
}

/// A concave distortion `h` on `[0, 1]` with `h(0) = h(1) = 0`, together
/// with its derivative and the cached norm `‖h′‖₂`.
#[derive(Clone)]
pub struct Distortion {
    kind: Kind,
    l2_norm: f64,
}

impl fmt::Debug for Distortion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Distortion")
            .field("name", &self.name())
            .field("l2_norm", &self.l2_norm)
            .finish()
    }
}

impl PartialEq for Distortion {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (Kind::Normal, Kind::Normal) | (Kind::Gini, Kind::Gini) => true,
            (Kind::Custom { h: a, .. }, Kind::Custom { h: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl Distortion {
    pub fn normal() -> Self {
        Self {
            kind: Kind::Normal,
            l2_norm: 1.0,
        }
    }

    pub fn gini() -> Self {
        Self {
            kind: Kind::Gini,
            l2_norm: 1.0 / 3f64.sqrt(),
        }
    }

    /// Wraps a user-supplied distortion after checking the boundary values,
    /// monotonicity of `h′` on a sampled grid, and that `‖h′‖₂ > 0`.
    ///
    /// The concavity check is necessary, not sufficient.
    pub fn custom<H, D>(name: impl Into<String>, h: H, h_prime: D) -> Result<Self>
    where
        H: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        let (h0, h1) = (h(0.0), h(1.0));
        if h0.abs() > 1e-9 || h1.abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "distortion {name}: h(0) = {h0}, h(1) = {h1}, both must vanish"
            )));
        }
        const GRID: usize = 1000;
        let mut prev = h_prime(0.5 / GRID as f64);
        for i in 1..GRID {
            let cur = h_prime((i as f64 + 0.5) / GRID as f64);
            if !cur.is_finite() || cur > prev + 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "distortion {name} is not concave: h′ increases near p = {}",
                    i as f64 / GRID as f64
                )));
            }
            prev = cur;
        }
        let sq = integrate_unit(|p| h_prime(p).powi(2), QUAD_TOL)?;
        let l2_norm = sq.sqrt();
        if l2_norm < 1e-12 {
            return Err(Error::DegenerateDistortion(format!(
                "{name}: h′ vanishes identically"
            )));
        }
        Ok(Self {
            kind: Kind::Custom {
                name,
                h: Arc::new(h),
                h_prime: Arc::new(h_prime),
            },
            l2_norm,
        })
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            Kind::Normal => "normal",
            Kind::Gini => "gini",
            Kind::Custom { name, .. } => name,
        }
    }

    pub fn preset(&self) -> Option<DistortionPreset> {
        match self.kind {
            Kind::Normal => Some(DistortionPreset::Normal),
            Kind::Gini => Some(DistortionPreset::Gini),
            Kind::Custom { .. } => None,
        }
    }

    pub fn h(&self, p: f64) -> f64 {
        match &self.kind {
            Kind::Normal => {
                if p <= 0.0 || p >= 1.0 {
                    0.0
                } else {
                    normal_pdf(normal_quantile(p))
                }
            }
            Kind::Gini => p - p * p,
            Kind::Custom { h, .. } => h(p),
        }
    }

    pub fn h_prime(&self, p: f64) -> f64 {
        match &self.kind {
            Kind::Normal => -normal_quantile(p),
            Kind::Gini => 1.0 - 2.0 * p,
            Kind::Custom { h_prime, .. } => h_prime(p),
        }
    }

    /// `h′(1 − p)`, the weight the quantile `Q(p)` receives in `Φ_h`.
    pub fn weight(&self, p: f64) -> f64 {
        match &self.kind {
            Kind::Normal => normal_quantile(p),
            Kind::Gini => 2.0 * p - 1.0,
            Kind::Custom { h_prime, .. } => h_prime(1.0 - p),
        }
    }

    /// `‖h′‖₂`.
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    /// `‖h′‖₂` recomputed by quadrature, ignoring the cached value.
    pub fn l2_norm_by_quadrature(&self) -> Result<f64> {
        Ok(integrate_unit(|p| self.weight(p).powi(2), QUAD_TOL)?.sqrt())
    }

    /// `Φ_self` of the unit-variance optimal law built from `shape`.
    ///
    /// For a location-scale law `m + s·w(p)/‖w‖` the regularizer is `s` times
    /// this constant.
    pub fn phi_of_unit_law(&self, shape: &Distortion) -> Result<f64> {
        if self == shape {
            return Ok(self.l2_norm);
        }
        let cross = integrate_unit(|p| self.weight(p) * shape.weight(p), QUAD_TOL)?;
        Ok(cross / shape.l2_norm)
    }
}

/// `Φ_h(Π) = ∫₀¹ Q_Π(p) h′(1−p) dp` by adaptive quadrature.
pub fn phi_h<Q: Fn(f64) -> f64>(distortion: &Distortion, quantile: Q) -> Result<f64> {
    integrate_unit(|p| quantile(p) * distortion.weight(p), QUAD_TOL)
}

/// `Φ_h` of a discrete law given as `(atom, probability)` pairs, evaluated
/// exactly through `h` itself: an atom occupying quantile levels
/// `(P_{k−1}, P_k]` contributes `x_k·[h(1−P_{k−1}) − h(1−P_k)]`.
pub fn phi_h_discrete(distortion: &Distortion, atoms: &[(f64, f64)]) -> f64 {
    let mut sorted: Vec<(f64, f64)> = atoms.iter().copied().filter(|a| a.1 > 0.0).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = sorted.iter().map(|a| a.1).sum();
    let mut cum = 0.0;
    let mut acc = 0.0;
    for (x, w) in sorted {
        let next = (cum + w / total).min(1.0);
        acc += x * (distortion.h(1.0 - cum) - distortion.h(1.0 - next));
        cum = next;
    }
    acc
}

/// The location-scale law `p ↦ mean + std·h′(1−p)/‖h′‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantilePolicy {
    pub mean: f64,
    pub std: f64,
    pub distortion: Distortion,
}

/// Builds the `Φ_h`-maximizing law with the given mean and standard deviation.
pub fn build_optimal_quantile(distortion: &Distortion, mean: f64, std: f64) -> Result<QuantilePolicy> {
    if !(std >= 0.0) || !std.is_finite() || !mean.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "optimal law needs finite mean and std >= 0, got ({mean}, {std})"
        )));
    }
    Ok(QuantilePolicy {
        mean,
        std,
        distortion: distortion.clone(),
    })
}

impl QuantilePolicy {
    pub fn quantile(&self, p: f64) -> f64 {
        if self.std == 0.0 {
            return self.mean;
        }
        self.mean + self.std * self.distortion.weight(p) / self.distortion.l2_norm()
    }

    /// Inverse-transform sample from a uniform draw `u ∈ (0, 1)`.
    pub fn sample(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(u));
        }
        Ok(self.quantile(u))
    }

    /// The maximal regularizer value `std·‖h′‖₂`.
    pub fn phi(&self) -> f64 {
        self.std * self.distortion.l2_norm()
    }

    /// Density of the law at `x`; `0` outside the support. Point masses have
    /// no density and return `NaN`.
    pub fn density(&self, x: f64) -> f64 {
        if self.std == 0.0 {
            return f64::NAN;
        }
        let s = self.std;
        match self.distortion.kind {
            Kind::Normal => normal_pdf((x - self.mean) / s) / s,
            Kind::Gini => {
                let half = 3f64.sqrt() * s;
                if (x - self.mean).abs() <= half * (1.0 + 4.0 * f64::EPSILON) {
                    1.0 / (2.0 * half)
                } else {
                    0.0
                }
            }
            Kind::Custom { .. } => self.density_by_inversion(x),
        }
    }

    fn density_by_inversion(&self, x: f64) -> f64 {
        let (mut lo, mut hi) = (UNIT_FLOOR, 1.0 - UNIT_FLOOR);
        if x < self.quantile(lo) || x > self.quantile(hi) {
            return 0.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.quantile(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        let p = 0.5 * (lo + hi);
        let dp = 1e-6 * p.min(1.0 - p);
        let dq = self.quantile(p + dp) - self.quantile(p - dp);
        if dq <= 0.0 {
            f64::INFINITY
        } else {
            2.0 * dp / dq
        }
    }
}
