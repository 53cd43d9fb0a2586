use std::f64::consts::PI;

use wavepack::grid::GridSpec;
use wavepack::pde::{evolve, InitialPacket, PdeConfig, RunStatus, SplitStepper};
use wavepack::{gaussian_packet, Grid, PotentialKind, WaveField, WidthConvention};

fn cfg(kind: PotentialKind, coupling: f64, delta0: f64, center: f64, p0: f64, t_end: f64) -> PdeConfig {
    PdeConfig::with_defaults(kind, coupling, InitialPacket { delta0, center, p0 }, t_end)
}

#[test]
fn norm_is_conserved_over_ten_thousand_steps() {
    let c = cfg(PotentialKind::Harmonic, -1.625, 0.5, 1.0, 0.5, 10.0);
    assert_eq!(c.steps(), 10_000);
    let traj = evolve(&c).unwrap();
    assert_eq!(traj.observables.len(), 10_001);
    let worst = traj.observables.iter().map(|o| (o.norm2 - 1.0).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst}");
}

fn energy_drift_rate(dt: f64) -> f64 {
    let mut c = cfg(PotentialKind::Harmonic, -1.625, 0.5, 0.0, 0.0, 2.0);
    c.dt = dt;
    let traj = evolve(&c).unwrap();
    let e0 = traj.observables[0].energy;
    traj.observables.iter().map(|o| (o.energy - e0).abs()).fold(0.0, f64::max) / c.t_end
}

#[test]
fn energy_error_is_second_order() {
    let coarse = energy_drift_rate(4e-3);
    let fine = energy_drift_rate(2e-3);
    assert!(coarse / fine >= 3.5, "coarse {coarse}, fine {fine}");
}

#[test]
fn harmonic_revival_converges_at_second_order() {
    // exact evolution over one period maps ψ to -ψ
    let grid = Grid::new(256, 24.0).unwrap();
    let start = gaussian_packet(&grid, 0.7, 1.5, 0.3).unwrap();
    let err = |steps: usize| {
        let stepper = SplitStepper::new(&grid, PotentialKind::Harmonic, 0.0, 2.0 * PI / steps as f64);
        let mut amp = start.amp.clone();
        (0..steps).for_each(|_| stepper.step_in_place(&mut amp));
        let end = WaveField::new(grid.clone(), amp, 2.0 * PI).unwrap();
        let fidelity = start.overlap(&end).norm_sqr();
        let dist = start
            .amp
            .iter()
            .zip(&end.amp)
            .map(|(a, b)| (a + b).norm_sqr())
            .sum::<f64>()
            * grid.dx();
        (fidelity, dist.sqrt())
    };
    let (fid, e1) = err(3000);
    let (_, e2) = err(6000);
    assert!(fid > 1.0 - 1e-4);
    let ratio = e1 / e2;
    assert!((3.6..4.4).contains(&ratio), "ratio {ratio}");
}

#[test]
fn kohn_mode_is_unaffected_by_the_interaction() {
    for beta in [-1.625, 1.0] {
        let c = cfg(PotentialKind::Harmonic, beta, 0.5, 1.0, 0.0, 4.0 * PI);
        let traj = evolve(&c).unwrap();
        for o in &traj.observables {
            assert!((o.mean_x - o.t.cos()).abs() < 1e-3, "beta {beta}, t {}", o.t);
            assert!((o.mean_p + o.t.sin()).abs() < 1e-3, "beta {beta}, t {}", o.t);
        }
    }
}

#[test]
fn free_packet_drifts_uniformly() {
    // wide box: the spreading tails must stay clear of the periodic wrap
    let mut c = cfg(PotentialKind::FreeParticle, -0.5, 0.5, -3.0, 1.0, 3.0);
    c.grid = GridSpec { n: 2048, length: 80.0 };
    let traj = evolve(&c).unwrap();
    let p0 = traj.observables[0].mean_p;
    for o in &traj.observables {
        assert!((o.mean_p - p0).abs() < 1e-8);
        assert!((o.mean_x - (-3.0 + p0 * o.t)).abs() < 1e-6, "t {}", o.t);
    }
    assert!((p0 - 1.0).abs() < 1e-6);
}

#[test]
fn linear_free_evolution_matches_closed_form() {
    let (w0, a, p0) = (1.0, -2.0, 1.0);
    let c = cfg(PotentialKind::FreeParticle, 0.0, w0, a, p0, 1.0);
    let traj = evolve(&c).unwrap();
    let t = traj.end_time();
    let w2 = w0 * w0 + t * t / (w0 * w0);
    let x = traj.grid.x();
    for (j, amp) in traj.final_field.amp.iter().enumerate() {
        let exact = (-(x[j] - a - p0 * t).powi(2) / w2).exp() / (PI * w2).sqrt();
        assert!((amp.norm_sqr() - exact).abs() < 1e-6, "x = {}", x[j]);
    }
}

#[test]
fn width_is_grid_independent() {
    let run = |n: usize| {
        let mut c = cfg(PotentialKind::FreeParticle, -0.5, 0.5, 0.0, 1.0, 1.0);
        c.grid = GridSpec { n, length: 40.0 };
        let traj = evolve(&c).unwrap();
        traj.widths().last().unwrap().1
    };
    let (a, b) = (run(512), run(1024));
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn narrow_attractive_packet_keeps_spreading() {
    let traj = evolve(&cfg(PotentialKind::FreeParticle, -0.5, 0.5, 0.0, 1.0, 5.0)).unwrap();
    assert_eq!(traj.status, RunStatus::Completed);
    let late: Vec<f64> = traj.widths().iter().filter(|p| p.0 >= 0.1).map(|p| p.1).collect();
    assert!(late.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn wide_attractive_packet_focuses_near_t_two() {
    // The width shrinks to a minimum around t ≈ 2 and then rebounds; in one
    // dimension the packet stays resolvable.
    let traj = evolve(&cfg(PotentialKind::FreeParticle, -2.0, 2.0, 0.0, 1.0, 4.0)).unwrap();
    let widths = traj.widths();
    let (t_min, w_min) = widths
        .iter()
        .copied()
        .fold((0.0, f64::INFINITY), |b, p| if p.1 < b.1 { p } else { b });
    assert!((1.5..2.5).contains(&t_min), "minimum at {t_min}");
    assert!(w_min < 0.75 * 2.0, "minimum width {w_min}");
    assert_eq!(traj.status, RunStatus::Completed);
}

#[test]
fn variance_convention_is_ansatz_over_root_two() {
    let mut c = cfg(PotentialKind::Harmonic, 1.0, 0.75, 0.0, 0.0, 0.5);
    let a = evolve(&c).unwrap().widths();
    c.width_convention = WidthConvention::Variance;
    let v = evolve(&c).unwrap().widths();
    for (p, q) in a.iter().zip(&v) {
        assert!((p.1 / q.1 - 2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn unresolved_width_stops_the_run() {
    // A packet already narrower than six cells is reported immediately.
    let mut c = cfg(PotentialKind::FreeParticle, -2.0, 0.4, 0.0, 0.0, 1.0);
    c.grid = GridSpec { n: 512, length: 40.0 };
    let traj = evolve(&c).unwrap();
    assert_eq!(traj.status, RunStatus::CollapseUnresolvable);
    assert_eq!(traj.observables.len(), 1);
}

#[test]
fn runs_are_deterministic() {
    let c = cfg(PotentialKind::Harmonic, -1.0, 0.6, 0.5, 0.2, 0.5);
    let a = evolve(&c).unwrap();
    let b = evolve(&c).unwrap();
    assert_eq!(a.observables, b.observables);
    assert_eq!(a.snapshots, b.snapshots);
}
