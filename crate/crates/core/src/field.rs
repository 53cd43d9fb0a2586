//! Wave fields on a [`Grid`] and the quadrature-based observables shared by
//! both engines.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// External potential in dimensionless units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    FreeParticle,
    /// `V(x) = x²/2` in oscillator units.
    Harmonic,
}

impl PotentialKind {
    #[inline]
    pub fn value(self, x: f64) -> f64 {
        match self {
            PotentialKind::FreeParticle => 0.0,
            PotentialKind::Harmonic => 0.5 * x * x,
        }
    }
}

/// Which width is reported from a variance.
///
/// `Ansatz` returns the `Δ` of `exp(-(x-x₀)²/2Δ²)`, i.e. `√(2·Var x)`;
/// `Variance` returns `√(Var x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthConvention {
    Variance,
    #[default]
    Ansatz,
}

#[derive(Debug, Clone)]
pub struct WaveField {
    pub grid: Grid,
    pub amp: Vec<Complex64>,
    pub t: f64,
}

impl WaveField {
    pub fn new(grid: Grid, amp: Vec<Complex64>, t: f64) -> Result<Self> {
        if amp.len() != grid.n() {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a grid of {} points",
                amp.len(),
                grid.n()
            )));
        }
        let field = Self { grid, amp, t };
        field.check_finite()?;
        Ok(field)
    }

    /// `dx·Σ|ψ_j|²`.
    pub fn norm2(&self) -> f64 {
        self.grid.dx() * self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    pub fn density(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalize(&mut self) {
        let scale = self.norm2().sqrt().recip();
        self.amp.iter_mut().for_each(|a| *a *= scale);
    }

    /// `⟨self|other⟩ = dx·Σ conj(ψ_j)·φ_j`.
    pub fn overlap(&self, other: &WaveField) -> Complex64 {
        let s: Complex64 = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum();
        s * self.grid.dx()
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.amp.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            Some(j) => Err(Error::NonFinite(format!("amplitude at index {j}, t = {}", self.t))),
            None => Ok(()),
        }
    }
}

/// Forward/inverse FFT pair for one grid size. Transforms are unnormalized.
#[derive(Clone)]
pub struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/n` factor.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|a| *a *= scale);
    }

    pub fn observables(
        &self,
        field: &WaveField,
        potential: PotentialKind,
        cubic: f64,
    ) -> Result<Observables> {
        let grid = &field.grid;
        let dx = grid.dx();

        let mut s0 = 0.0;
        let mut s1 = 0.0;
        let mut quartic = 0.0;
        let mut potential_energy = 0.0;
        for (a, &x) in field.amp.iter().zip(grid.x()) {
            let rho = a.norm_sqr();
            s0 += rho;
            s1 += x * rho;
            quartic += rho * rho;
            potential_energy += potential.value(x) * rho;
        }
        let norm2 = dx * s0;
        let mean_x = s1 / s0;
        let var_x = field
            .amp
            .iter()
            .zip(grid.x())
            .map(|(a, &x)| (x - mean_x).powi(2) * a.norm_sqr())
            .sum::<f64>()
            / s0;
        let quartic = dx * quartic;

        let mut spectrum = field.amp.clone();
        self.forward(&mut spectrum);
        let (mut w0, mut w1, mut w2) = (0.0, 0.0, 0.0);
        for (a, &k) in spectrum.iter().zip(grid.k()) {
            let w = a.norm_sqr();
            w0 += w;
            w1 += k * w;
            w2 += k * k * w;
        }
        let mean_p = w1 / w0;
        let mean_p2 = w2 / w0;
        // Parseval: dx·Σ|∂ψ|² = (dx/n)·Σ k²|ψ̂|²
        let kinetic = 0.5 * dx / grid.n() as f64 * w2;
        let energy = kinetic + dx * potential_energy + 0.5 * cubic * quartic;

        let obs = Observables {
            t: field.t,
            norm2,
            mean_x,
            mean_p,
            var_x,
            mean_p2,
            quartic,
            energy,
        };
        obs.check_finite()?;
        Ok(obs)
    }
}

/// Moments of a field at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub t: f64,
    pub norm2: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub mean_p2: f64,
    /// `∫|ψ|⁴ dx`
    pub quartic: f64,
    pub energy: f64,
}

impl Observables {
    fn check_finite(&self) -> Result<()> {
        let values = [
            ("norm2", self.norm2),
            ("mean_x", self.mean_x),
            ("mean_p", self.mean_p),
            ("var_x", self.var_x),
            ("mean_p2", self.mean_p2),
            ("quartic", self.quartic),
            ("energy", self.energy),
        ];
        match values.iter().find(|(_, v)| !v.is_finite()) {
            Some((name, v)) => Err(Error::NonFinite(format!("{name} = {v} at t = {}", self.t))),
            None => Ok(()),
        }
    }

    pub fn width(&self, convention: WidthConvention) -> f64 {
        width_measure(self, convention)
    }
}

/// Normalized Gaussian `π^(-1/4)·Δ₀^(-1/2)·exp(-(x-x₀)²/2Δ₀²)·exp(i·p₀·x)`,
/// renormalized to unit norm on the lattice.
pub fn gaussian_packet(grid: &Grid, delta0: f64, center: f64, p0: f64) -> Result<WaveField> {
    if !(delta0.is_finite() && delta0 > 0.0) {
        return Err(Error::Domain(format!("packet width must be positive, got {delta0}")));
    }
    if !(center.is_finite() && p0.is_finite()) {
        return Err(Error::Domain("packet centre and momentum must be finite".into()));
    }
    let min = 4.0 * grid.dx();
    if delta0 < min {
        return Err(Error::GridTooCoarse { delta0, min });
    }
    let half = 0.5 * grid.length();
    if center.abs() + 5.0 * delta0 > half * (1.0 + 1e-12) {
        return Err(Error::PacketOutOfDomain { center, delta0, half });
    }

    let prefactor = PI.powf(-0.25) / delta0.sqrt();
    let amp = grid
        .x()
        .iter()
        .map(|&x| {
            let envelope = prefactor * (-(x - center).powi(2) / (2.0 * delta0 * delta0)).exp();
            Complex64::from_polar(envelope, p0 * x)
        })
        .collect();
    let mut field = WaveField::new(grid.clone(), amp, 0.0)?;
    field.normalize();
    Ok(field)
}

/// Observables with a fresh FFT plan. Use [`Spectral::observables`] in loops.
pub fn observables(field: &WaveField, potential: PotentialKind, cubic: f64) -> Result<Observables> {
    Spectral::new(field.grid.n()).observables(field, potential, cubic)
}

pub fn width_measure(obs: &Observables, convention: WidthConvention) -> f64 {
    match convention {
        WidthConvention::Variance => obs.var_x.sqrt(),
        WidthConvention::Ansatz => (2.0 * obs.var_x).sqrt(),
    }
}
