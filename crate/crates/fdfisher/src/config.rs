//! Flat key-value run configuration (UTF-8 text, `key = value` lines,
//! `#` comments).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{Grid, GridKind};
use crate::profiles::{beta_from_mass, fd_equilibrium, fd_profile, FdProfile, QuantumParams};
use crate::solvers::Flow;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub kind: GridKind,
    pub extent: f64,
    pub n: usize,
    /// Angular node count, polar grids only.
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitKind {
    Equilibrium,
    FdProfile,
    ScaledEquilibrium,
}

impl InitKind {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "equilibrium" => Ok(InitKind::Equilibrium),
            "fd_profile" => Ok(InitKind::FdProfile),
            "scaled_equilibrium" => Ok(InitKind::ScaledEquilibrium),
            other => Err(Error::Config(format!(
                "init: unknown kind `{other}` (expected equilibrium | fd_profile | scaled_equilibrium)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitSpec {
    pub kind: InitKind,
    pub alpha: Option<f64>,
    pub u1: Option<f64>,
    pub u2: Option<f64>,
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeSpec {
    pub t_end: f64,
    pub samples: usize,
    /// Optional explicit time step; still checked against the stability bound.
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub equation: Flow,
    pub dimension: usize,
    pub epsilon: f64,
    pub beta: Option<f64>,
    pub mass: Option<f64>,
    pub grid: GridSpec,
    pub init: InitSpec,
    pub time: TimeSpec,
    pub output_csv: Option<String>,
    pub output_json: Option<String>,
}

fn parse_map(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!(
                "line {}: empty key or value in `{line}`",
                lineno + 1
            )));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{key}`",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "equation",
    "dimension",
    "epsilon",
    "beta",
    "mass",
    "grid.kind",
    "grid.extent",
    "grid.n",
    "grid.m",
    "init",
    "init.alpha",
    "init.u1",
    "init.u2",
    "init.scale",
    "time.t_end",
    "time.samples",
    "time.dt",
    "output.csv",
    "output.json",
];

fn req<'m>(map: &'m BTreeMap<String, String>, key: &str) -> Result<&'m str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Config(format!("{key}: missing required key")))
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: `{s}` is not a number")))
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::Config(format!("{key}: `{s}` is not a nonnegative integer")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let map = parse_map(text)?;
        for key in map.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }
        let opt_f64 = |key: &str| -> Result<Option<f64>> {
            map.get(key).map(|s| parse_f64(key, s)).transpose()
        };
        let config = RunConfig {
            equation: Flow::parse(req(&map, "equation")?)?,
            dimension: parse_usize("dimension", req(&map, "dimension")?)?,
            epsilon: parse_f64("epsilon", req(&map, "epsilon")?)?,
            beta: opt_f64("beta")?,
            mass: opt_f64("mass")?,
            grid: GridSpec {
                kind: GridKind::parse(req(&map, "grid.kind")?)?,
                extent: parse_f64("grid.extent", req(&map, "grid.extent")?)?,
                n: parse_usize("grid.n", req(&map, "grid.n")?)?,
                m: map
                    .get("grid.m")
                    .map(|s| parse_usize("grid.m", s))
                    .transpose()?,
            },
            init: InitSpec {
                kind: InitKind::parse(req(&map, "init")?)?,
                alpha: opt_f64("init.alpha")?,
                u1: opt_f64("init.u1")?,
                u2: opt_f64("init.u2")?,
                scale: opt_f64("init.scale")?,
            },
            time: TimeSpec {
                t_end: parse_f64("time.t_end", req(&map, "time.t_end")?)?,
                samples: parse_usize("time.samples", req(&map, "time.samples")?)?,
                dt: opt_f64("time.dt")?,
            },
            output_csv: map.get("output.csv").cloned(),
            output_json: map.get("output.json").cloned(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::Config(format!(
                "epsilon: must be finite and >= 0, got {}",
                self.epsilon
            )));
        }
        match (self.beta, self.mass) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "beta, mass: specify exactly one, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config("beta, mass: exactly one is required".into()))
            }
            (Some(b), None) if b.is_nan() || b <= 0.0 => {
                return Err(Error::Config(format!("beta: must be > 0, got {b}")))
            }
            (None, Some(m)) if m.is_nan() || m <= 0.0 => {
                return Err(Error::Config(format!("mass: must be > 0, got {m}")))
            }
            _ => {}
        }
        if self.dimension != self.grid.kind.dim() {
            return Err(Error::Config(format!(
                "dimension: {} does not match grid.kind = {} (dimension {})",
                self.dimension,
                self.grid.kind,
                self.grid.kind.dim()
            )));
        }
        let ok_grid = match self.equation {
            Flow::Fdfp => self.grid.kind.is_truncated_cartesian(),
            Flow::Heat => self.grid.kind.is_torus(),
            Flow::Model | Flow::Landau => self.grid.kind == GridKind::Polar2d,
        };
        if !ok_grid {
            return Err(Error::Config(format!(
                "grid.kind: {} is not hosted on {} grids",
                self.equation, self.grid.kind
            )));
        }
        if self.grid.kind == GridKind::Polar2d && self.grid.m.is_none() {
            return Err(Error::Config("grid.m: required for polar-2d grids".into()));
        }
        match self.init.kind {
            InitKind::FdProfile => {
                let alpha = self.init.alpha.ok_or_else(|| {
                    Error::Config("init.alpha: required for init = fd_profile".into())
                })?;
                if alpha.is_nan() || alpha <= 0.0 {
                    return Err(Error::Config(format!(
                        "init.alpha: must be > 0, got {alpha}"
                    )));
                }
            }
            InitKind::ScaledEquilibrium => {
                let scale = self.init.scale.ok_or_else(|| {
                    Error::Config("init.scale: required for init = scaled_equilibrium".into())
                })?;
                if scale.is_nan() || scale <= 0.0 {
                    return Err(Error::Config(format!(
                        "init.scale: must be > 0, got {scale}"
                    )));
                }
            }
            InitKind::Equilibrium => {}
        }
        if self.init.u2.is_some() && self.dimension == 1 {
            return Err(Error::Config(
                "init.u2: not meaningful on a 1-dimensional grid".into(),
            ));
        }
        if self.time.t_end.is_nan() || self.time.t_end <= 0.0 {
            return Err(Error::Config(format!(
                "time.t_end: must be > 0, got {}",
                self.time.t_end
            )));
        }
        if self.time.samples == 0 {
            return Err(Error::Config("time.samples: must be at least 1".into()));
        }
        if let Some(dt) = self.time.dt {
            if dt.is_nan() || dt <= 0.0 {
                return Err(Error::Config(format!("time.dt: must be > 0, got {dt}")));
            }
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Grid> {
        match self.grid.kind {
            GridKind::Line1d => Grid::line(self.grid.extent, self.grid.n),
            GridKind::Tensor2d => Grid::tensor(self.grid.extent, self.grid.n),
            GridKind::Torus1d => Grid::torus_1d(self.grid.extent, self.grid.n),
            GridKind::Torus2d => Grid::torus_2d(self.grid.extent, self.grid.n),
            GridKind::Polar2d => Grid::polar(
                self.grid.extent,
                self.grid.n,
                self.grid.m.expect("validated above"),
            ),
        }
    }

    /// β either given directly or solved from the prescribed mass.
    pub fn resolved_beta(&self) -> Result<f64> {
        match (self.beta, self.mass) {
            (Some(b), None) => Ok(b),
            (None, Some(m)) => beta_from_mass(self.epsilon, m, self.dimension),
            _ => Err(Error::Config("beta, mass: exactly one is required".into())),
        }
    }

    pub fn build_initial(&self, grid: &Grid, beta: f64) -> Result<Field> {
        let params = QuantumParams::new(self.epsilon, beta)?;
        let field = match self.init.kind {
            InitKind::Equilibrium => fd_equilibrium(&params, grid),
            InitKind::ScaledEquilibrium => {
                let scale = self.init.scale.expect("validated");
                let mu = fd_equilibrium(&params, grid);
                let values = mu.values().iter().map(|&v| scale * v).collect();
                Field::new(grid.clone(), values)?
            }
            InitKind::FdProfile => {
                let spec = FdProfile::new(
                    self.init.alpha.expect("validated"),
                    [self.init.u1.unwrap_or(0.0), self.init.u2.unwrap_or(0.0)],
                    self.epsilon,
                )?;
                fd_profile(&spec, grid)?
            }
        };
        field.check_bounds(self.epsilon)?;
        Ok(field)
    }
}
