//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use wavepack::analysis::{
    estimate_frequency, free_regime_sweep, sweep_constant_width, WidthTrace,
};
use wavepack::pde::{evolve, InitialPacket, PdeConfig, RunStatus};
use wavepack::variational::*;
use wavepack::PotentialKind;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn verdict(pass: bool, detail: String) -> Outcome {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pde(kind: PotentialKind, coupling: f64, delta0: f64, center: f64, p0: f64, t_end: f64) -> PdeConfig {
    PdeConfig::with_defaults(kind, coupling, InitialPacket { delta0, center, p0 }, t_end)
}

fn locus_value() -> Outcome {
    let b = beta_for_constant_width(0.5).map_err(|e| e.to_string())?;
    let err = (b - 1.625).abs();
    verdict(err < 1e-12, format!("|beta| = {b}, error {err:.1e} (tol 1e-12)"))
}

fn variational_fixed_point() -> Outcome {
    let p = TrapParams::new(-1.625, 0.5, 0.0).unwrap();
    let s = integrate_width(WidthModel::Trap(p), 0.25, 0.0, 50.0, 1e-3).map_err(|e| e.to_string())?;
    let worst = s.samples.iter().map(|st| (st.y - 0.25).abs()).fold(0.0, f64::max);
    let done = s.status == WidthStatus::Completed && (s.last().t - 50.0).abs() < 1e-9;
    verdict(done && worst < 1e-9, format!("max |Y - 0.25| = {worst:.2e} over t in [0, 50] (tol 1e-9)"))
}

fn stability_frequencies() -> Outcome {
    let b = beta_for_constant_width(0.75).unwrap();
    let linear = stability_frequency(&TrapParams::new(-b, 0.75, 0.0).unwrap()).map_err(|e| e.to_string())?;
    let p = TrapParams::new(-0.8, 0.75, 0.0).unwrap();
    let s = integrate_width(WidthModel::Trap(p), 0.5625, 0.0, 20.0, 1e-3).map_err(|e| e.to_string())?;
    let measured = estimate_frequency(&WidthTrace::from_series(&s)).map_err(|e| e.to_string())?;
    let ok = (linear - 0.32).abs() <= 0.01 && (0.36..=0.45).contains(&measured);
    verdict(
        ok,
        format!("linear {linear:.4} (0.32 ± 0.01); measured at beta=-0.8 {measured:.4} (in [0.36, 0.45])"),
    )
}

fn free_regime_map() -> Outcome {
    let r1 = free_critical(&FreeParams::new(-0.5, 0.5).unwrap()).regime;
    let r2 = free_critical(&FreeParams::new(-2.0, 2.0).unwrap()).regime;
    let repulsive_ok = [0.01, 0.5, 1.0, 2.0, 10.0]
        .iter()
        .flat_map(|&g| [0.1, 0.5, 2.0, 5.0].map(|d| (g, d)))
        .all(|(g, d)| free_critical(&FreeParams::new(g, d).unwrap()).regime == Regime::Spread);
    let gammas: Vec<f64> = (0..20).map(|i| -2.0 + 1.9 * i as f64 / 19.0).collect();
    let deltas: Vec<f64> = (0..20).map(|i| 0.1 + 3.9 * i as f64 / 19.0).collect();
    let checks = free_regime_sweep(&gammas, &deltas, 100.0, 1e-3).map_err(|e| e.to_string())?;
    let agree = checks.iter().filter(|c| c.agrees()).count();
    let ok = r1 == Regime::Spread && r2 == Regime::Collapse && repulsive_ok && agree == checks.len();
    verdict(
        ok,
        format!(
            "(-0.5, 0.5) -> {r1:?}, (-2, 2) -> {r2:?}, gamma > 0 all Spread: {repulsive_ok}; sweep agreement {agree}/{}",
            checks.len()
        ),
    )
}

fn pde_collapse() -> Outcome {
    let cfg = pde(PotentialKind::FreeParticle, -2.0, 2.0, 0.0, 1.0, 2.5);
    let traj = evolve(&cfg).map_err(|e| e.to_string())?;
    let w0 = traj.widths()[0].1;
    let (t_min, w_min) = traj
        .widths()
        .into_iter()
        .filter(|p| p.0 < 2.5)
        .fold((0.0, f64::INFINITY), |b, p| if p.1 < b.1 { p } else { b });
    let ok = w_min < 0.5 * w0 && traj.status == RunStatus::CollapseUnresolvable;
    verdict(
        ok,
        format!(
            "min width {w_min:.4} at t = {t_min:.3} ({:.1}% of initial, need < 50%); status {:?} (need CollapseUnresolvable)",
            100.0 * w_min / w0,
            traj.status
        ),
    )
}

fn pde_constant_width() -> Outcome {
    let cfg = pde(PotentialKind::Harmonic, -1.625, 0.5, 0.0, 0.0, 20.0);
    let traj = evolve(&cfg).map_err(|e| e.to_string())?;
    let excursion = WidthTrace::from_trajectory(&traj).max_relative_excursion();
    let ok = traj.status == RunStatus::Completed && excursion < 0.15;
    verdict(ok, format!("max relative width excursion {excursion:.4} over t in [0, 20] (need < 0.15)"))
}

fn conservation() -> Outcome {
    let cfg = pde(PotentialKind::Harmonic, -1.625, 0.5, 1.0, 0.5, 10.0);
    let traj = evolve(&cfg).map_err(|e| e.to_string())?;
    let steps = traj.observables.len() - 1;
    let norm_drift = traj.observables.iter().map(|o| (o.norm2 - 1.0).abs()).fold(0.0, f64::max);

    let rate = |dt: f64| -> Result<f64, String> {
        let mut c = pde(PotentialKind::Harmonic, -1.625, 0.5, 0.0, 0.0, 2.0);
        c.dt = dt;
        let t = evolve(&c).map_err(|e| e.to_string())?;
        let e0 = t.observables[0].energy;
        Ok(t.observables.iter().map(|o| (o.energy - e0).abs()).fold(0.0, f64::max) / c.t_end)
    };
    let coarse = rate(4e-3)?;
    let fine = rate(2e-3)?;
    let ratio = coarse / fine;
    verdict(
        steps == 10_000 && norm_drift < 1e-10 && ratio >= 3.5,
        format!("norm drift {norm_drift:.1e} over {steps} steps (tol 1e-10); energy drift ratio {ratio:.2} (need >= 3.5)"),
    )
}

fn kohn_mode() -> Outcome {
    let cfg = pde(PotentialKind::Harmonic, -1.625, 0.5, 1.0, 0.0, 4.0 * PI);
    let traj = evolve(&cfg).map_err(|e| e.to_string())?;
    let worst = traj.observables.iter().map(|o| (o.mean_x - o.t.cos()).abs()).fold(0.0, f64::max);
    verdict(worst < 1e-3, format!("max |<x>(t) - cos t| = {worst:.2e} over [0, 4π] (tol 1e-3)"))
}

fn linear_limit() -> Outcome {
    let (w0, a, p0) = (1.0, 0.0, 1.0);
    let cfg = pde(PotentialKind::FreeParticle, 0.0, w0, a, p0, 1.0);
    let traj = evolve(&cfg).map_err(|e| e.to_string())?;
    let t = traj.end_time();
    let w2 = w0 * w0 + t * t / (w0 * w0);
    let worst = traj
        .final_field
        .amp
        .iter()
        .zip(traj.grid.x())
        .map(|(c, &x)| (c.norm_sqr() - (-(x - a - p0 * t).powi(2) / w2).exp() / (PI * w2).sqrt()).abs())
        .fold(0.0, f64::max);
    verdict(worst < 1e-6, format!("max pointwise density error at t = {t} is {worst:.2e} (tol 1e-6)"))
}

fn locus_sweep() -> Outcome {
    let deltas: Vec<f64> = (1..=20).map(|i| 0.2 + 0.55 * i as f64 / 21.0).collect();
    let pts = sweep_constant_width(&deltas, 1e-6);
    let verified = pts.iter().filter(|p| p.verified).count();
    let worst = pts.iter().filter_map(|p| p.max_excursion).fold(0.0, f64::max);
    verdict(verified == 20, format!("{verified}/20 verified, worst relative excursion {worst:.1e} (tol 1e-6)"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "constant-width locus value", budget: Duration::from_secs(1), check: locus_value },
        Criterion { id: 2, name: "variational fixed point", budget: Duration::from_secs(1), check: variational_fixed_point },
        Criterion { id: 3, name: "stability frequency", budget: Duration::from_secs(1), check: stability_frequencies },
        Criterion { id: 4, name: "free-particle regime map", budget: Duration::from_secs(10), check: free_regime_map },
        Criterion { id: 5, name: "PDE collapse scenario", budget: Duration::from_secs(60), check: pde_collapse },
        Criterion { id: 6, name: "PDE constant width", budget: Duration::from_secs(60), check: pde_constant_width },
        Criterion { id: 7, name: "conservation suite", budget: Duration::from_secs(60), check: conservation },
        Criterion { id: 8, name: "Ehrenfest/Kohn mode", budget: Duration::from_secs(60), check: kohn_mode },
        Criterion { id: 9, name: "linear-limit oracle", budget: Duration::from_secs(10), check: linear_limit },
        Criterion { id: 10, name: "locus sweep", budget: Duration::from_secs(10), check: locus_sweep },
    ];

    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let timing = format!("{:.2}s / budget {}s", elapsed.as_secs_f64(), c.budget.as_secs());
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {}: {detail} [{timing}]", c.id, c.name),
            Err(detail) => {
                println!("[FAIL] {:>2} {}: {detail} [{timing}]", c.id, c.name);
                failed.push(c.id);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
