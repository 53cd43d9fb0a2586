//! Canned parameter sets for each figure of the reference study, numbered in
//! order of appearance.

use crate::field::PotentialKind;
use crate::pde::{InitialPacket, PdeConfig};
use crate::variational::{
    beta_for_constant_width, free_potential, trap_potential, FreeParams, TrapParams, WidthModel,
};

#[derive(Debug, Clone)]
pub enum Panel {
    /// Effective potential sampled on `[0, y_max]`.
    Potential { model: WidthModel, y_max: f64 },
    /// Variational width run from rest at `Y = Δ₀²`.
    Width { model: WidthModel, t_end: f64 },
    Pde(PdeConfig),
}

impl Panel {
    pub fn potential_at(&self, y: f64) -> f64 {
        match self {
            Panel::Potential {
                model: WidthModel::Free(p),
                ..
            } => free_potential(y, p),
            Panel::Potential {
                model: WidthModel::Trap(p),
                ..
            } => trap_potential(y, p),
            _ => f64::NAN,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub name: &'static str,
    pub description: &'static str,
    pub panels: Vec<(String, Panel)>,
}

pub const NAMES: [&str; 14] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "fig12", "fig13", "fig14",
];

fn free(gamma: f64, delta0: f64) -> WidthModel {
    WidthModel::Free(FreeParams { gamma, delta0 })
}

fn trap(beta: f64, delta: f64) -> WidthModel {
    WidthModel::Trap(TrapParams {
        beta,
        delta,
        alpha: 0.0,
    })
}

fn free_pde(gamma: f64, delta0: f64, t_end: f64) -> Panel {
    let initial = InitialPacket {
        delta0,
        center: 0.0,
        p0: 1.0,
    };
    Panel::Pde(PdeConfig::with_defaults(PotentialKind::FreeParticle, gamma, initial, t_end))
}

fn trap_pde(beta: f64, delta: f64, p0: f64, t_end: f64) -> Panel {
    let initial = InitialPacket {
        delta0: delta,
        center: 0.0,
        p0,
    };
    Panel::Pde(PdeConfig::with_defaults(PotentialKind::Harmonic, beta, initial, t_end))
}

fn label(prefix: &str, value: f64) -> String {
    format!("{prefix}_{value}")
}

pub fn figure(name: &str) -> Option<Figure> {
    let locus_075 = -beta_for_constant_width(0.75).expect("0.75 lies below 3^(-1/4)");
    let (description, panels): (&'static str, Vec<(String, Panel)>) = match name {
        "fig1" => (
            "free-particle effective potential for repulsive and attractive coupling",
            vec![
                (label("gamma", 1.0), Panel::Potential { model: free(1.0, 2.0), y_max: 40.0 }),
                (label("gamma", -0.5), Panel::Potential { model: free(-0.5, 2.0), y_max: 40.0 }),
            ],
        ),
        "fig2" => (
            "variational free width, delta0 = 2 above the critical width",
            [-0.5, -1.0, -2.0]
                .iter()
                .map(|&g| (label("gamma", g), Panel::Width { model: free(g, 2.0), t_end: 10.0 }))
                .collect(),
        ),
        "fig3" => (
            "variational free width below the critical width",
            [(-0.5, 0.5), (1.0, 0.4), (2.0, 0.2)]
                .iter()
                .map(|&(g, d)| (label("gamma", g), Panel::Width { model: free(g, d), t_end: 5.0 }))
                .collect(),
        ),
        "fig4" => (
            "trapped effective potential for repulsive and attractive coupling",
            vec![
                (label("beta", 1.0), Panel::Potential { model: trap(1.0, 1.0), y_max: 2.0 }),
                (label("beta", -1.625), Panel::Potential { model: trap(-1.625, 0.5), y_max: 2.0 }),
            ],
        ),
        "fig5" => (
            "variational trap width on the constant-width locus, delta = 0.75",
            vec![("width".into(), Panel::Width { model: trap(locus_075, 0.75), t_end: 20.0 })],
        ),
        "fig6" => (
            "variational trap width off the locus, delta = 0.75, beta = -0.8",
            vec![("width".into(), Panel::Width { model: trap(-0.8, 0.75), t_end: 20.0 })],
        ),
        "fig7" => ("free PDE, gamma = 2, delta0 = 2", vec![("pde".into(), free_pde(2.0, 2.0, 5.0))]),
        "fig8" => ("free PDE, gamma = -2, delta0 = 2", vec![("pde".into(), free_pde(-2.0, 2.0, 2.5))]),
        "fig9" => ("free PDE, gamma = -0.5, delta0 = 0.5", vec![("pde".into(), free_pde(-0.5, 0.5, 5.0))]),
        "fig10" => (
            "free PDE density panels",
            vec![
                ("top_left".into(), free_pde(-0.5, 0.5, 5.0)),
                ("top_right".into(), free_pde(-2.0, 2.0, 5.0)),
                ("bottom".into(), free_pde(2.0, 2.0, 5.0)),
            ],
        ),
        "fig11" => ("trapped PDE, beta = 1, delta = 0.75", vec![("pde".into(), trap_pde(1.0, 0.75, 0.0, 20.0))]),
        "fig12" => ("trapped PDE, beta = -0.01, delta = 0.75", vec![("pde".into(), trap_pde(-0.01, 0.75, 0.0, 20.0))]),
        "fig13" => (
            "trapped PDE on the constant-width locus, beta = -1.625, delta = 0.5",
            vec![("pde".into(), trap_pde(-1.625, 0.5, 0.0, 20.0))],
        ),
        "fig14" => (
            "trapped PDE density panels",
            vec![
                ("top_left".into(), trap_pde(1.0, 0.75, 0.0, 20.0)),
                ("top_right".into(), trap_pde(-0.01, 0.75, 0.0, 20.0)),
                ("bottom_left".into(), trap_pde(-1.625, 0.5, 0.0, 20.0)),
                ("bottom_right".into(), trap_pde(-1.625, 0.5, 0.5, 20.0)),
            ],
        ),
        _ => return None,
    };
    let name = NAMES.iter().find(|&&n| n == name)?;
    Some(Figure {
        name,
        description,
        panels,
    })
}
