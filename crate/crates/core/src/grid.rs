//! Uniform time grids, cubic Hermite interpolation and backward RK4.

use crate::error::{Error, Result};

/// Uniform grid `t_k = k·T/(n−1)`, `k = 0..n`, on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub horizon: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Config(format!("grid needs at least 2 points, got {points}")));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Config(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self { horizon, points })
    }

    pub fn step(&self) -> f64 {
        self.horizon / (self.points - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            self.horizon
        } else {
            k as f64 * self.step()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|k| self.time(k))
    }
}

/// A function of time stored as node values and slopes on a [`TimeGrid`],
/// evaluated off-grid by cubic Hermite interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: TimeGrid,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: TimeGrid, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if values.len() != grid.points || slopes.len() != grid.points {
            return Err(Error::Config(format!(
                "grid function has {} values and {} slopes on a {}-point grid",
                values.len(),
                slopes.len(),
                grid.points
            )));
        }
        Ok(Self {
            grid,
            values,
            slopes,
        })
    }

    /// Samples `f` and its derivative `df` at the nodes.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.times().map(&f).collect(),
            slopes: grid.times().map(&df).collect(),
        }
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.points],
            slopes: vec![0.0; grid.points],
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let h = self.grid.step();
        let last = self.grid.points - 2;
        let t = t.clamp(0.0, self.grid.horizon);
        let k = ((t / h).floor() as usize).min(last);
        (k, (t - k as f64 * h) / h)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t >= self.grid.horizon {
            return self.values[self.grid.points - 1];
        }
        let (k, s) = self.locate(t);
        let h = self.grid.step();
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (k, s) = self.locate(t);
        let h = self.grid.step();
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h
    }

    /// `max_k |self(t_k) − other(t_k)|` over shared nodes.
    pub fn sup_distance(&self, other: &GridFn) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Config("grid functions live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Integrates `y′ = f(t, y)` backward from `y(T) = terminal` with classical
/// RK4 on the grid nodes. Returns the states at every node (index 0 is `t = 0`)
/// together with `f` evaluated there.
pub fn rk4_backward<const N: usize, F>(
    grid: TimeGrid,
    terminal: [f64; N],
    f: F,
) -> (Vec<[f64; N]>, Vec<[f64; N]>)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let n = grid.points;
    let h = -grid.step();
    let mut states = vec![[0.0; N]; n];
    states[n - 1] = terminal;
    let axpy = |y: &[f64; N], a: f64, k: &[f64; N]| {
        let mut out = *y;
        for i in 0..N {
            out[i] += a * k[i];
        }
        out
    };
    for k in (1..n).rev() {
        let t = grid.time(k);
        let y = states[k];
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = f(t + h, &axpy(&y, h, &k3));
        let mut next = y;
        for i in 0..N {
            next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        states[k - 1] = next;
    }
    let slopes = states
        .iter()
        .enumerate()
        .map(|(k, y)| f(grid.time(k), y))
        .collect();
    (states, slopes)
}

/// Splits an `N`-dimensional RK4 solution into one [`GridFn`] per component.
pub fn split_components<const N: usize>(
    grid: TimeGrid,
    states: &[[f64; N]],
    slopes: &[[f64; N]],
) -> [GridFn; N] {
    std::array::from_fn(|i| GridFn {
        grid,
        values: states.iter().map(|s| s[i]).collect(),
        slopes: slopes.iter().map(|s| s[i]).collect(),
    })
}

/// `(1 − e^{−z})/z`, continuous through `z = 0`.
pub fn one_minus_exp_ratio(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 - z / 2.0 + z * z / 6.0
    } else {
        -(-z).exp_m1() / z
    }
}
