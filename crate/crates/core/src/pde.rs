//! Strang split-step Fourier evolution of the dimensionless equation
//! `i∂ψ/∂t = -½∂²ψ/∂x² + V(x)ψ + c|ψ|²ψ` with `c = √(2π)·coupling`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gaussian_packet, Observables, PotentialKind, Spectral, WaveField, WidthConvention};
use crate::grid::{Grid, GridSpec};

pub const DEFAULT_N: usize = 1024;
pub const DEFAULT_LENGTH: f64 = 40.0;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 100;
/// Runs stop once the measured width drops below this many lattice spacings.
pub const UNRESOLVED_WIDTH_CELLS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialPacket {
    pub delta0: f64,
    pub center: f64,
    pub p0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeConfig {
    pub grid: GridSpec,
    pub potential_kind: PotentialKind,
    /// `γ` for the free particle, `β` in the trap.
    pub coupling: f64,
    pub initial: InitialPacket,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    #[serde(default)]
    pub width_convention: WidthConvention,
}

impl PdeConfig {
    /// Config on the default lattice (`L = 40`, `n = 1024`, `dt = 1e-3`).
    pub fn with_defaults(
        potential_kind: PotentialKind,
        coupling: f64,
        initial: InitialPacket,
        t_end: f64,
    ) -> Self {
        Self {
            grid: GridSpec {
                n: DEFAULT_N,
                length: DEFAULT_LENGTH,
            },
            potential_kind,
            coupling,
            initial,
            dt: DEFAULT_DT,
            t_end,
            snapshot_stride: DEFAULT_SNAPSHOT_STRIDE,
            width_convention: WidthConvention::Ansatz,
        }
    }

    pub fn cubic(&self) -> f64 {
        effective_cubic(self.potential_kind, self.coupling)
    }

    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<Grid> {
        let grid = self.grid.build()?;
        if !self.coupling.is_finite() {
            return Err(Error::InvalidConfig(format!("coupling must be finite, got {}", self.coupling)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidConfig(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidConfig("snapshot_stride must be at least 1".into()));
        }
        // The kinetic factor is exact for every mode; the bound applies to the
        // real-space phase of one half-step at the domain edge.
        let v_max = self.potential_kind.value(0.5 * grid.length());
        if 0.5 * self.dt * v_max >= PI / 4.0 {
            return Err(Error::InvalidConfig(format!(
                "dt = {} gives a potential phase of {:.3} rad per half-step (limit π/4)",
                self.dt,
                0.5 * self.dt * v_max
            )));
        }
        Ok(grid)
    }
}

/// Coefficient of `|ψ|²ψ`: `√(2π)·coupling` for either potential.
pub fn effective_cubic(_kind: PotentialKind, coupling: f64) -> f64 {
    (2.0 * PI).sqrt() * coupling
}

/// Precomputed propagators for one `(grid, potential, coupling, dt)`.
pub struct SplitStepper {
    spectral: Spectral,
    kinetic: Vec<Complex64>,
    potential: Vec<f64>,
    cubic: f64,
    dt: f64,
}

impl SplitStepper {
    pub fn new(grid: &Grid, potential_kind: PotentialKind, cubic: f64, dt: f64) -> Self {
        let kinetic = grid
            .k()
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -0.5 * k * k * dt))
            .collect();
        let potential = grid.x().iter().map(|&x| potential_kind.value(x)).collect();
        Self {
            spectral: Spectral::new(grid.n()),
            kinetic,
            potential,
            cubic,
            dt,
        }
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    fn half_potential(&self, amp: &mut [Complex64]) {
        let h = 0.5 * self.dt;
        for (a, &v) in amp.iter_mut().zip(&self.potential) {
            *a *= Complex64::from_polar(1.0, -(v + self.cubic * a.norm_sqr()) * h);
        }
    }

    /// One Strang step: half potential, full kinetic, half potential.
    pub fn step_in_place(&self, amp: &mut [Complex64]) {
        self.half_potential(amp);
        self.spectral.forward(amp);
        amp.iter_mut().zip(&self.kinetic).for_each(|(a, k)| *a *= k);
        self.spectral.inverse(amp);
        self.half_potential(amp);
    }
}

/// Advances `field` by one step of `cfg.dt`.
pub fn step(field: &WaveField, cfg: &PdeConfig) -> Result<WaveField> {
    let grid = cfg.validate()?;
    if grid.n() != field.grid.n() || grid.length() != field.grid.length() {
        return Err(Error::InvalidConfig("field lives on a different grid than the config".into()));
    }
    let stepper = SplitStepper::new(&grid, cfg.potential_kind, cfg.cubic(), cfg.dt);
    let mut next = field.clone();
    stepper.step_in_place(&mut next.amp);
    next.t = field.t + cfg.dt;
    next.check_finite()?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// The width fell below [`UNRESOLVED_WIDTH_CELLS`] lattice spacings.
    CollapseUnresolvable,
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySnapshot {
    pub t: f64,
    pub density: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: PdeConfig,
    pub grid: Grid,
    /// One entry per step, starting at `t = 0`.
    pub observables: Vec<Observables>,
    /// Every `snapshot_stride` steps, starting at `t = 0`.
    pub snapshots: Vec<DensitySnapshot>,
    pub status: RunStatus,
    /// Last finite field reached.
    pub final_field: WaveField,
}

impl Trajectory {
    /// `(t, width)` in the config's width convention.
    pub fn widths(&self) -> Vec<(f64, f64)> {
        self.observables
            .iter()
            .map(|o| (o.t, o.width(self.config.width_convention)))
            .collect()
    }

    pub fn end_time(&self) -> f64 {
        self.observables.last().map_or(0.0, |o| o.t)
    }
}

pub fn evolve(cfg: &PdeConfig) -> Result<Trajectory> {
    let grid = cfg.validate()?;
    let init = cfg.initial;
    let mut field = gaussian_packet(&grid, init.delta0, init.center, init.p0)?;
    let stepper = SplitStepper::new(&grid, cfg.potential_kind, cfg.cubic(), cfg.dt);
    let floor = UNRESOLVED_WIDTH_CELLS * grid.dx();
    let steps = cfg.steps();

    let obs0 = stepper.spectral().observables(&field, cfg.potential_kind, cfg.cubic())?;
    let mut observables = Vec::with_capacity(steps + 1);
    observables.push(obs0);
    let mut snapshots = vec![DensitySnapshot {
        t: 0.0,
        density: field.density(),
    }];
    let mut status = if obs0.width(cfg.width_convention) < floor {
        RunStatus::CollapseUnresolvable
    } else {
        RunStatus::Completed
    };

    let mut scratch = field.amp.clone();
    for s in 1..=steps {
        if status != RunStatus::Completed {
            break;
        }
        stepper.step_in_place(&mut scratch);
        let t = s as f64 * cfg.dt;
        let candidate = WaveField {
            grid: grid.clone(),
            amp: std::mem::take(&mut scratch),
            t,
        };
        if candidate.check_finite().is_err() {
            status = RunStatus::NonFinite;
            break;
        }
        let obs = match stepper.spectral().observables(&candidate, cfg.potential_kind, cfg.cubic()) {
            Ok(o) => o,
            Err(_) => {
                status = RunStatus::NonFinite;
                break;
            }
        };
        field = candidate;
        scratch.clone_from(&field.amp);
        observables.push(obs);
        if s % cfg.snapshot_stride == 0 {
            snapshots.push(DensitySnapshot {
                t,
                density: field.density(),
            });
        }
        if obs.width(cfg.width_convention) < floor {
            status = RunStatus::CollapseUnresolvable;
        }
    }

    Ok(Trajectory {
        config: cfg.clone(),
        grid,
        observables,
        snapshots,
        status,
        final_field: field,
    })
}
