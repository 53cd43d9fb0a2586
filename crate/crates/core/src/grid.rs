use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic lattice on `[-L/2, L/2)` with its FFT-ordered momentum lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    x: Vec<f64>,
    k: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let dx = length / n as f64;
        let x = (0..n).map(|j| -0.5 * length + j as f64 * dx).collect();
        let dk = 2.0 * PI / length;
        let k = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
                m as f64 * dk
            })
            .collect();
        Ok(Self { n, length, x, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Momentum values in FFT order: `0..n/2-1`, then `-n/2..-1`, times `2π/L`.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    /// Largest representable |k|, `π·n/L`.
    pub fn k_max(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            n: self.n,
            length: self.length,
        }
    }
}

/// Serializable description of a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub length: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.n, self.length)
    }
}
