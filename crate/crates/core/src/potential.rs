//! Periodic even potentials given by a truncated cosine series, and the
//! skew-symmetric velocity-coupling operator they induce.
//!
//! For `V(x) = a_0 + sum_{n>=1} a_n cos(2 n kappa x)` with `kappa = pi / l`,
//! the Wigner potential collapses to delta combs at velocity shifts
//! `n kappa`. On a lattice `v_i = i kappa + s` the pseudo-differential term
//! becomes the discrete convolution
//!
//! ```text
//! (A(x) f)_k = sum_{n>=1} a_n sin(2 n kappa x) (f_{k-n} - f_{k+n})
//! ```
//!
//! which is skew-symmetric and odd in `x`.

use crate::error::{Error, Result};
use crate::kinetic::VelocityGrid;

/// `sin` evaluated so that `odd_sin(-t) == -odd_sin(t)` holds bit-exactly.
#[inline]
pub(crate) fn odd_sin(t: f64) -> f64 {
    if t < 0.0 {
        -(-t).sin()
    } else {
        t.sin()
    }
}

/// Cosine-series potential on a period `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential {
    period_l: f64,
    coeffs: Vec<f64>,
    kappa: f64,
}

impl FourierPotential {
    /// Builds a potential from its period and cosine coefficients `a_0, a_1, ...`.
    pub fn new(period_l: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(period_l.is_finite() && period_l > 0.0) {
            return Err(Error::invalid(format!(
                "period_l must be a positive finite real, got {period_l}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::invalid("coeffs must contain at least a_0"));
        }
        if let Some((n, a)) = coeffs.iter().enumerate().find(|(_, a)| !a.is_finite()) {
            return Err(Error::invalid(format!(
                "coefficient a_{n} = {a} is not finite"
            )));
        }
        Ok(FourierPotential {
            period_l,
            kappa: std::f64::consts::PI / period_l,
            coeffs,
        })
    }

    pub fn period_l(&self) -> f64 {
        self.period_l
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `pi / period_l`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Largest `n` with a stored coefficient, i.e. the velocity reach of `A(x)`.
    pub fn max_harmonic(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `V(x) = a_0 + sum_n a_n cos(2 n kappa x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.coeffs[0];
        for (n, a) in self.coeffs.iter().enumerate().skip(1) {
            v += a * (2.0 * n as f64 * self.kappa * x).cos();
        }
        v
    }

    /// Weights `a_n sin(2 n kappa x)` for `n = 1..=N`; entry `n - 1` holds harmonic `n`.
    pub fn coupling_weights(&self, x: f64) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a * odd_sin(2.0 * n as f64 * self.kappa * x))
            .collect()
    }

    /// Applies `A(x)` to a vector indexed by `grid`. Indices outside the
    /// truncated grid contribute zero.
    pub fn apply_coupling(&self, grid: &VelocityGrid, x: f64, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != grid.len() {
            return Err(Error::invalid(format!(
                "vector has {} entries but the velocity grid has {}",
                f.len(),
                grid.len()
            )));
        }
        if grid.kappa() != self.kappa {
            return Err(Error::invalid(format!(
                "velocity grid kappa {} does not match potential kappa {}",
                grid.kappa(),
                self.kappa
            )));
        }
        let weights = self.coupling_weights(x);
        let mut out = vec![0.0; f.len()];
        apply_convolution(&weights, f, &mut out);
        Ok(out)
    }

    /// `C = 2 sum_{n>=1} |a_n|`, a bound on the operator norm of `A(x)` on l^2.
    pub fn coupling_bound(&self) -> f64 {
        2.0 * self.coeffs.iter().skip(1).map(|a| a.abs()).sum::<f64>()
    }
}

/// `out_k = sum_n w_n (f_{k-n} - f_{k+n})` with hard truncation at the ends.
pub(crate) fn apply_convolution(weights: &[f64], f: &[f64], out: &mut [f64]) {
    let len = f.len();
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (m, w) in weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let n = m + 1;
            let lo = if k >= n { f[k - n] } else { 0.0 };
            let hi = if k + n < len { f[k + n] } else { 0.0 };
            acc += w * (lo - hi);
        }
        *o = acc;
    }
}
