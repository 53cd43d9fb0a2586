//! Width dynamics of a Gaussian packet under the moment-method closure.
//!
//! Everything here works with `Y = Δ²` in dimensionless units. For the free
//! particle lengths are in `ħ/p₀` and times in `mħ/p₀²`; in the trap lengths
//! are in the oscillator length and times in `1/ω`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integration halts once `Y` drops to this value.
pub const Y_FLOOR: f64 = 1e-6;
/// Largest accepted RK4 step.
pub const MAX_DT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeParams {
    /// Signed coupling `γ`; negative is attractive.
    pub gamma: f64,
    /// Initial width `Δ̄₀`.
    pub delta0: f64,
}

impl FreeParams {
    pub fn new(gamma: f64, delta0: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
        }
        if !(delta0.is_finite() && delta0 > 0.0) {
            return Err(Error::Domain(format!("delta0 must be positive, got {delta0}")));
        }
        Ok(Self { gamma, delta0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapParams {
    /// Signed coupling `β`; negative is attractive.
    pub beta: f64,
    /// Initial width `δ` in oscillator lengths.
    pub delta: f64,
    /// Initial centre offset `α`. Does not enter the width equation.
    pub alpha: f64,
}

impl TrapParams {
    pub fn new(beta: f64, delta: f64, alpha: f64) -> Result<Self> {
        if !(beta.is_finite() && alpha.is_finite()) {
            return Err(Error::Domain("beta and alpha must be finite".into()));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Domain(format!("delta must be positive, got {delta}")));
        }
        Ok(Self { beta, delta, alpha })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthState {
    pub y: f64,
    pub ydot: f64,
    pub t: f64,
}

impl WidthState {
    pub fn width(&self) -> f64 {
        self.y.sqrt()
    }
}

/// Right-hand side selector for [`integrate_width`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WidthModel {
    Free(FreeParams),
    Trap(TrapParams),
}

impl WidthModel {
    pub fn rhs(&self, y: f64) -> Result<f64> {
        match self {
            WidthModel::Free(p) => free_rhs(y, p),
            WidthModel::Trap(p) => trap_rhs(y, p),
        }
    }

    pub fn potential(&self, y: f64) -> f64 {
        match self {
            WidthModel::Free(p) => free_potential(y, p),
            WidthModel::Trap(p) => trap_potential(y, p),
        }
    }

    /// `½Ẏ² + V(Y)`, conserved along exact trajectories.
    pub fn energy(&self, state: &WidthState) -> f64 {
        0.5 * state.ydot * state.ydot + self.potential(state.y)
    }

    fn accel(&self, y: f64) -> f64 {
        match self {
            WidthModel::Free(p) => p.gamma / y.sqrt() + 0.5 / (p.delta0 * p.delta0),
            WidthModel::Trap(p) => trap_d(p) - 4.0 * y - p.beta / y.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WidthStatus {
    Completed,
    /// `Y` reached [`Y_FLOOR`] within the step ending at `t`.
    Collapsed { t: f64 },
}

#[derive(Debug, Clone)]
pub struct WidthSeries {
    pub model: WidthModel,
    pub dt: f64,
    pub samples: Vec<WidthState>,
    pub status: WidthStatus,
}

impl WidthSeries {
    pub fn last(&self) -> &WidthState {
        self.samples.last().expect("series holds the initial state")
    }

    pub fn is_collapsed(&self) -> bool {
        matches!(self.status, WidthStatus::Collapsed { .. })
    }

    /// `(t, √Y)` pairs.
    pub fn widths(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.width())).collect()
    }
}

fn check_positive(y: f64) -> Result<()> {
    if y > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Y must be positive, got {y}")))
    }
}

/// `d²Y/dt² = γ/√Y + 1/(2Δ̄₀²)`.
pub fn free_rhs(y: f64, p: &FreeParams) -> Result<f64> {
    check_positive(y)?;
    Ok(WidthModel::Free(*p).accel(y))
}

/// `V(Y) = -Y/(2Δ̄₀²) - 2γ√Y`, so that `free_rhs = -dV/dY`. Requires `y ≥ 0`.
pub fn free_potential(y: f64, p: &FreeParams) -> f64 {
    -y / (2.0 * p.delta0 * p.delta0) - 2.0 * p.gamma * y.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Spread,
    Collapse,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalWidth {
    /// Location of the barrier top of [`free_potential`].
    pub y_c: Option<f64>,
    pub delta_c: Option<f64>,
    pub regime: Regime,
}

/// Barrier location and critical width for the free packet.
///
/// Only attractive coupling has a barrier. Starting at rest, packets narrower
/// than `Δ_c = 1/(2|γ|)` sit beyond the barrier and spread; wider ones fall
/// towards `Y = 0` in finite time.
pub fn free_critical(p: &FreeParams) -> CriticalWidth {
    if p.gamma >= 0.0 {
        return CriticalWidth {
            y_c: None,
            delta_c: None,
            regime: Regime::Spread,
        };
    }
    let g = p.gamma.abs();
    let y_c = (2.0 * g * p.delta0 * p.delta0).powi(2);
    let delta_c = 1.0 / (2.0 * g);
    let regime = if (p.delta0 - delta_c).abs() <= 1e-12 * delta_c.max(1.0) {
        Regime::Marginal
    } else if p.delta0 < delta_c {
        Regime::Spread
    } else {
        Regime::Collapse
    };
    CriticalWidth {
        y_c: Some(y_c),
        delta_c: Some(delta_c),
        regime,
    }
}

/// `D̄ = δ² + 1/δ² + 2β/δ`, in units of `ħω/m`.
pub fn trap_d(p: &TrapParams) -> f64 {
    let d = p.delta;
    d * d + 1.0 / (d * d) + 2.0 * p.beta / d
}

/// `d²Y/dt² = D̄ - 4Y - β/√Y`.
pub fn trap_rhs(y: f64, p: &TrapParams) -> Result<f64> {
    check_positive(y)?;
    Ok(WidthModel::Trap(*p).accel(y))
}

/// `V(Y) = 2Y² + 2β√Y - D̄·Y`, so that `trap_rhs = -dV/dY`. Requires `y ≥ 0`.
pub fn trap_potential(y: f64, p: &TrapParams) -> f64 {
    2.0 * y * y + 2.0 * p.beta * y.sqrt() - trap_d(p) * y
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremaThreshold {
    pub threshold: f64,
    pub exists: bool,
}

/// Repulsive trap: extrema of the effective potential require
/// `D̄ > 3·4^(1/3)·(β/4)^(2/3)`.
pub fn trap_extrema_threshold(p: &TrapParams) -> Result<ExtremaThreshold> {
    if p.beta <= 0.0 {
        return Err(Error::InvalidRegime(format!(
            "extrema threshold needs beta > 0, got {}",
            p.beta
        )));
    }
    let threshold = 3.0 * 4f64.cbrt() * (p.beta / 4.0).powf(2.0 / 3.0);
    Ok(ExtremaThreshold {
        threshold,
        exists: trap_d(p) > threshold,
    })
}

/// Minimum of the attractive-trap potential: the root of `|β|/√Y = 4Y - D̄`
/// above `max(D̄/4, 0)`, by bisection.
pub fn trap_ymin(p: &TrapParams) -> Result<f64> {
    if p.beta >= 0.0 {
        return Err(Error::InvalidRegime(format!(
            "Y_min exists only for beta < 0, got {}",
            p.beta
        )));
    }
    let d = trap_d(p);
    let g = p.beta.abs();
    // increasing in Y, -∞ at the lower end
    let f = |y: f64| 4.0 * y - d - g / y.sqrt();

    let mut lo = (0.25 * d).max(0.0);
    if lo == 0.0 {
        lo = f64::MIN_POSITIVE;
    }
    let mut hi = lo.max(1.0);
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 1100 || !hi.is_finite() {
            return Err(Error::ConvergenceFailure(format!(
                "no sign change above {lo} for beta = {}, delta = {}",
                p.beta, p.delta
            )));
        }
    }
    if f(lo) >= 0.0 {
        return Err(Error::ConvergenceFailure(format!("f({lo}) is not negative")));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `|β|` making `Y_min = δ²`: `|β| = 1/δ - 3δ³`. Exists for `δ ≤ 3^(-1/4)`.
pub fn beta_for_constant_width(delta: f64) -> Result<f64> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let limit = 3f64.powf(-0.25);
    if delta > limit {
        return Err(Error::NoSolution(format!(
            "delta = {delta} is above 3^(-1/4) = {limit}"
        )));
    }
    Ok((1.0 / delta - 3.0 * delta.powi(3)).max(0.0))
}

/// Small-oscillation frequency about `Y_min`, in cycles per unit time:
/// `√(4 + |β|/(2·Y_min^(3/2)))/(2π)`.
pub fn stability_frequency(p: &TrapParams) -> Result<f64> {
    let y_min = trap_ymin(p)?;
    Ok((4.0 + p.beta.abs() / (2.0 * y_min.powf(1.5))).sqrt() / (2.0 * PI))
}

/// Classic fixed-step RK4 on `(Y, Ẏ)` from `t = 0` to `t_end`.
///
/// Stops with [`WidthStatus::Collapsed`] as soon as any stage would take `Y`
/// to [`Y_FLOOR`] or below.
pub fn integrate_width(
    model: WidthModel,
    y0: f64,
    ydot0: f64,
    t_end: f64,
    dt: f64,
) -> Result<WidthSeries> {
    if !(y0.is_finite() && y0 > 0.0) {
        return Err(Error::Domain(format!("y0 must be positive, got {y0}")));
    }
    if !ydot0.is_finite() {
        return Err(Error::Domain(format!("ydot0 must be finite, got {ydot0}")));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if dt > MAX_DT {
        return Err(Error::StepTooLarge { dt, max: MAX_DT });
    }

    let steps = ((t_end / dt).round() as usize).max(1);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut state = WidthState {
        y: y0,
        ydot: ydot0,
        t: 0.0,
    };
    samples.push(state);
    let mut status = WidthStatus::Completed;
    if y0 <= Y_FLOOR {
        status = WidthStatus::Collapsed { t: 0.0 };
    }

    let accel = |y: f64| -> Option<f64> { (y > Y_FLOOR).then(|| model.accel(y)) };

    if status == WidthStatus::Completed {
        for i in 1..=steps {
            let t = i as f64 * dt;
            let (y, v) = (state.y, state.ydot);
            let next = (|| {
                let a1 = accel(y)?;
                let (y2, v2) = (y + 0.5 * dt * v, v + 0.5 * dt * a1);
                let a2 = accel(y2)?;
                let (y3, v3) = (y + 0.5 * dt * v2, v + 0.5 * dt * a2);
                let a3 = accel(y3)?;
                let (y4, v4) = (y + dt * v3, v + dt * a3);
                let a4 = accel(y4)?;
                let y_new = y + dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
                let v_new = v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
                Some((y_new, v_new))
            })();
            match next {
                Some((y_new, v_new)) => {
                    if !(y_new.is_finite() && v_new.is_finite()) {
                        return Err(Error::NonFinite(format!("width state at t = {t}")));
                    }
                    if y_new <= Y_FLOOR {
                        status = WidthStatus::Collapsed { t };
                        break;
                    }
                    state = WidthState {
                        y: y_new,
                        ydot: v_new,
                        t,
                    };
                    samples.push(state);
                }
                None => {
                    status = WidthStatus::Collapsed { t };
                    break;
                }
            }
        }
    }

    Ok(WidthSeries {
        model,
        dt,
        samples,
        status,
    })
}
