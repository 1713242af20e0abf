use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use curved_dirac::solver::MAX_EIGENCOUNT;
use curved_dirac::{AngularMomentum, QuantumNumbers, RadialGrid, SurfaceKind, SurfaceSpec};
use serde::{Deserialize, Serialize};

/// Deepest convergence study accepted; each level doubles the unknowns.
pub const MAX_LEVELS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Geometry,
    Analytic,
    Solve,
    Converge,
    Compare,
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CommandName::Geometry => "geometry",
            CommandName::Analytic => "analytic",
            CommandName::Solve => "solve",
            CommandName::Converge => "converge",
            CommandName::Compare => "compare",
        };
        f.write_str(name)
    }
}

/// Every key a config file may set. Absent keys fall back to the defaults
/// of [`RunConfig`]; unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<CommandName>,
    pub surface: Option<SurfaceKind>,
    pub amplitude: Option<f64>,
    pub width: Option<f64>,
    pub m: Option<AngularMomentum>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub h: Option<f64>,
    pub eigencount: Option<usize>,
    pub out: Option<PathBuf>,
    pub kappa: Option<f64>,
    pub levels: Option<usize>,
    pub modes: Option<Vec<usize>>,
}

impl PartialConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("malformed config")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Values set in `top` win.
    pub fn overridden_by(self, top: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: top.command.or(self.command),
            surface: top.surface.or(self.surface),
            amplitude: top.amplitude.or(self.amplitude),
            width: top.width.or(self.width),
            m: top.m.or(self.m),
            r_min: top.r_min.or(self.r_min),
            r_max: top.r_max.or(self.r_max),
            h: top.h.or(self.h),
            eigencount: top.eigencount.or(self.eigencount),
            out: top.out.or(self.out),
            kappa: top.kappa.or(self.kappa),
            levels: top.levels.or(self.levels),
            modes: top.modes.or(self.modes),
        }
    }

    pub fn resolve(self) -> anyhow::Result<RunConfig> {
        let d = RunConfig::defaults();
        let Some(command) = self.command else {
            bail!("no command given (expected geometry, analytic, solve, converge or compare)");
        };
        Ok(RunConfig {
            command,
            surface: self.surface.unwrap_or(d.surface),
            amplitude: self.amplitude.unwrap_or(d.amplitude),
            width: self.width.unwrap_or(d.width),
            m: self.m.unwrap_or(d.m),
            r_min: self.r_min.unwrap_or(d.r_min),
            r_max: self.r_max.unwrap_or(d.r_max),
            h: self.h.unwrap_or(d.h),
            eigencount: self.eigencount.unwrap_or(d.eigencount),
            out: self.out.unwrap_or(d.out),
            kappa: self.kappa.unwrap_or(d.kappa),
            levels: self.levels.unwrap_or(d.levels),
            modes: self.modes.unwrap_or(d.modes),
        })
    }
}

/// A fully specified run. Serializes to the same keys [`PartialConfig`]
/// reads, so the echo in a summary can be fed back with `--config`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub surface: SurfaceKind,
    pub amplitude: f64,
    pub width: f64,
    pub m: AngularMomentum,
    pub r_min: f64,
    pub r_max: f64,
    pub h: f64,
    pub eigencount: usize,
    pub out: PathBuf,
    /// Wavenumber of the `analytic` profiles.
    pub kappa: f64,
    /// Grid levels of `converge`.
    pub levels: usize,
    /// Mode indices (from 1) written by `solve`.
    pub modes: Vec<usize>,
}

impl RunConfig {
    fn defaults() -> Self {
        RunConfig {
            command: CommandName::Solve,
            surface: SurfaceKind::Gaussian,
            amplitude: 1.3,
            width: 1.0,
            m: AngularMomentum::half(),
            r_min: 0.01,
            r_max: 5.0,
            h: 0.001,
            eigencount: 10,
            out: PathBuf::from("out"),
            kappa: 2.35,
            levels: 3,
            modes: vec![5],
        }
    }

    /// Checks every constraint up front so that no command fails on its
    /// input halfway through.
    pub fn validate(&self) -> anyhow::Result<Plan> {
        let spec = SurfaceSpec::new(self.surface, self.amplitude, self.width)?;
        let grid = RadialGrid::new(self.r_min, self.r_max, self.h)?;
        if !(1..=MAX_EIGENCOUNT).contains(&self.eigencount) {
            bail!("eigencount must be in 1..={MAX_EIGENCOUNT}, got {}", self.eigencount);
        }
        if self.eigencount > grid.unknowns() {
            bail!(
                "eigencount {} exceeds the {} unknowns of the grid",
                self.eigencount,
                grid.unknowns()
            );
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            bail!("kappa must be positive and finite, got {}", self.kappa);
        }
        if !(3..=MAX_LEVELS).contains(&self.levels) {
            bail!("levels must be in 3..={MAX_LEVELS}, got {}", self.levels);
        }
        for (i, &n) in self.modes.iter().enumerate() {
            if !(1..=self.eigencount).contains(&n) {
                bail!("mode index {n} is outside 1..={}", self.eigencount);
            }
            if self.modes[..i].contains(&n) {
                bail!("mode index {n} is listed twice");
            }
        }
        if self.out.as_os_str().is_empty() {
            bail!("output directory must not be empty");
        }
        Ok(Plan {
            spec,
            grid,
            qn: QuantumNumbers::a(self.m),
        })
    }

    /// File-name fragment such as `gaussian_m3_2` or `flat_m-1_2`.
    pub fn tag(&self) -> String {
        format!("{}_m{}_2", self.surface.name(), self.m.twice())
    }
}

/// Validated library objects for a run.
#[derive(Clone, Copy, Debug)]
pub struct Plan {
    pub spec: SurfaceSpec,
    pub grid: RadialGrid,
    pub qn: QuantumNumbers,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn later_layers_win() {
        let file = PartialConfig::from_json(r#"{"command": "geometry", "m": "3/2", "h": 0.002}"#).unwrap();
        let flags = PartialConfig {
            h: Some(0.005),
            ..Default::default()
        };
        let cfg = file.overridden_by(flags).resolve().unwrap();
        assert_eq!(cfg.command, CommandName::Geometry);
        assert_eq!(cfg.m, AngularMomentum::from_twice(3).unwrap());
        assert_eq!(cfg.h, 0.005);
        assert_eq!(cfg.eigencount, 10);
    }

    #[test]
    fn unknown_keys_and_bad_m_are_rejected() {
        assert!(PartialConfig::from_json(r#"{"command": "solve", "colour": 1}"#).is_err());
        assert!(PartialConfig::from_json(r#"{"m": 0.7}"#).is_err());
        assert!(PartialConfig::from_json(r#"{"m": "1/3"}"#).is_err());
        assert!(PartialConfig::from_json(r#"{"m": 1.5}"#).is_ok());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = PartialConfig::from_json(r#"{"command": "solve", "surface": "volcano", "m": "-5/2", "modes": [1, 3]}"#)
            .unwrap()
            .resolve()
            .unwrap();
        let echo = serde_json::to_string(&cfg).unwrap();
        assert_eq!(PartialConfig::from_json(&echo).unwrap().resolve().unwrap(), cfg);
    }

    #[test]
    fn validation() {
        let base = PartialConfig {
            command: Some(CommandName::Solve),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert!(base.validate().is_ok());
        let bad = [
            RunConfig { r_max: 0.005, ..base.clone() },
            RunConfig { h: 0.0007, ..base.clone() },
            RunConfig { eigencount: 0, ..base.clone() },
            RunConfig { eigencount: 51, ..base.clone() },
            RunConfig { modes: vec![11], ..base.clone() },
            RunConfig { modes: vec![2, 2], ..base.clone() },
            RunConfig { amplitude: -1.0, ..base.clone() },
            RunConfig { levels: 2, ..base.clone() },
            RunConfig { kappa: 0.0, ..base.clone() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        let flat = RunConfig {
            surface: SurfaceKind::Flat,
            amplitude: -1.0,
            ..base
        };
        assert!(flat.validate().is_ok());
        assert_eq!(flat.tag(), "flat_m1_2");
    }
}
