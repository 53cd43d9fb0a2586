//! Deterministic CSV/JSON writers for run directories.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::error::Result;
use crate::field::Observables;
use crate::grid::Grid;
use crate::pde::Trajectory;
use crate::variational::WidthSeries;

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes via a sibling temp file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn width_csv(samples: &[(f64, f64)]) -> String {
    let mut s = String::from("t,width\n");
    for &(t, w) in samples {
        let _ = writeln!(s, "{},{}", num(t), num(w));
    }
    s
}

pub fn series_csv(series: &WidthSeries) -> String {
    let mut s = String::from("t,y,ydot\n");
    for st in &series.samples {
        let _ = writeln!(s, "{},{},{}", num(st.t), num(st.y), num(st.ydot));
    }
    s
}

pub fn observables_csv(obs: &[Observables]) -> String {
    let mut s = String::from("t,norm2,mean_x,mean_p,var_x,mean_p2,quartic,energy\n");
    for o in obs {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            num(o.t),
            num(o.norm2),
            num(o.mean_x),
            num(o.mean_p),
            num(o.var_x),
            num(o.mean_p2),
            num(o.quartic),
            num(o.energy)
        );
    }
    s
}

pub fn density_csv(traj: &Trajectory) -> String {
    let mut s = String::from("x");
    for &x in traj.grid.x() {
        let _ = write!(s, ",{}", num(x));
    }
    s.push('\n');
    for snap in &traj.snapshots {
        s.push_str(&num(snap.t));
        for &r in &snap.density {
            let _ = write!(s, ",{}", num(r));
        }
        s.push('\n');
    }
    s
}

pub fn grid_csv(grid: &Grid) -> String {
    format!("n,L,dx\n{},{},{}\n", grid.n(), num(grid.length()), num(grid.dx()))
}

/// `(y, V(y))` on `points` equally spaced values in `[0, y_max]`.
pub fn potential_csv(y_max: f64, points: usize, v: impl Fn(f64) -> f64) -> String {
    let mut s = String::from("y,v\n");
    for i in 0..points {
        let y = y_max * i as f64 / (points - 1) as f64;
        let _ = writeln!(s, "{},{}", num(y), num(v(y)));
    }
    s
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub status: String,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: serde_json::Value, status: impl Into<String>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config,
            outputs: Vec::new(),
            status: status.into(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn write(mut self, dir: &Path, elapsed: Duration) -> Result<()> {
        self.wall_clock_seconds = elapsed.as_secs_f64();
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        write_atomic(&dir.join("manifest.json"), &text)
    }
}

/// Collects output files written into one directory.
pub struct RunDir {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

impl RunDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        write_atomic(&self.dir.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn write_trajectory(&mut self, traj: &Trajectory) -> Result<()> {
        self.write("width.csv", &width_csv(&traj.widths()))?;
        self.write("observables.csv", &observables_csv(&traj.observables))?;
        self.write("density.csv", &density_csv(traj))?;
        self.write("grid.csv", &grid_csv(&traj.grid))
    }

    pub fn write_series(&mut self, series: &WidthSeries) -> Result<()> {
        self.write("width.csv", &width_csv(&series.widths()))?;
        self.write("series.csv", &series_csv(series))
    }

    pub fn finish(self, mut manifest: RunManifest, elapsed: Duration) -> Result<()> {
        manifest.outputs = self.files;
        manifest.write(&self.dir, elapsed)
    }
}
