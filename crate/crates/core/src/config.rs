//! Flat `key = value` configuration shared by the CLI and the C API.
//! One key per line, `#` comments; unknown keys are rejected and every
//! default equals the canonical model value where one exists.

use crate::engine::RunConfig;
use crate::error::{Error, Result};
use crate::lattice::{ArenaGeometry, Rect};
use crate::particle::ModelParams;

/// Every tunable of a run, with optional explicit habitable origin
/// (otherwise the habitable region is centred in the lattice).
#[derive(Debug, Clone, Copy)]
pub struct AppConfig {
    pub lattice_width: usize,
    pub lattice_height: usize,
    pub habitable_width: usize,
    pub habitable_height: usize,
    pub habitable_origin: Option<(usize, usize)>,
    pub fraction: f64,
    pub params: ModelParams,
    pub total_steps: u32,
    pub warmup_steps: u32,
    pub constraint_step: u32,
    pub window_width: usize,
    pub window_height: usize,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            lattice_width: 360,
            lattice_height: 66,
            habitable_width: 300,
            habitable_height: 20,
            habitable_origin: None,
            fraction: 1.0,
            params: ModelParams::default(),
            total_steps: 12000,
            warmup_steps: 2000,
            constraint_step: 0,
            window_width: 20,
            window_height: 20,
        }
    }
}

/// The recognised configuration keys, in documentation order.
pub const KEYS: &[&str] = &[
    "lattice_width",
    "lattice_height",
    "habitable_width",
    "habitable_height",
    "habitable_origin_x",
    "habitable_origin_y",
    "fraction",
    "sensor_angle_deg",
    "rotation_angle_deg",
    "sensor_offset_px",
    "deposit_per_move",
    "damp_factor",
    "sample_interval",
    "population_size",
    "rng_seed",
    "total_steps",
    "warmup_steps",
    "constraint_step",
    "window_width",
    "window_height",
];

impl AppConfig {
    /// Parses a whole configuration file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value', got '{line}'", idx + 1))
            })?;
            config
                .apply(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", idx + 1)))?;
        }
        Ok(config)
    }

    /// Sets one key; used for file lines and command-line overrides alike.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse::<T>().map_err(|_| {
                Error::Config(format!("invalid value '{value}' for key '{key}'"))
            })
        }
        match key {
            "lattice_width" => self.lattice_width = parse(key, value)?,
            "lattice_height" => self.lattice_height = parse(key, value)?,
            "habitable_width" => self.habitable_width = parse(key, value)?,
            "habitable_height" => self.habitable_height = parse(key, value)?,
            "habitable_origin_x" => {
                let x = parse(key, value)?;
                let y = self.habitable_origin.map(|(_, y)| y).unwrap_or(0);
                self.habitable_origin = Some((x, y));
            }
            "habitable_origin_y" => {
                let y = parse(key, value)?;
                let x = self.habitable_origin.map(|(x, _)| x).unwrap_or(0);
                self.habitable_origin = Some((x, y));
            }
            "fraction" => self.fraction = parse(key, value)?,
            "sensor_angle_deg" => self.params.sensor_angle_deg = parse(key, value)?,
            "rotation_angle_deg" => self.params.rotation_angle_deg = parse(key, value)?,
            "sensor_offset_px" => self.params.sensor_offset_px = parse(key, value)?,
            "deposit_per_move" => self.params.deposit_per_move = parse(key, value)?,
            "damp_factor" => self.params.damp_factor = parse(key, value)?,
            "sample_interval" => self.params.sample_interval = parse(key, value)?,
            "population_size" => self.params.population_size = parse(key, value)?,
            "rng_seed" => self.params.rng_seed = parse(key, value)?,
            "total_steps" => self.total_steps = parse(key, value)?,
            "warmup_steps" => self.warmup_steps = parse(key, value)?,
            "constraint_step" => self.constraint_step = parse(key, value)?,
            "window_width" => self.window_width = parse(key, value)?,
            "window_height" => self.window_height = parse(key, value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Resolved arena geometry; the habitable region is centred unless an
    /// origin was given explicitly.
    pub fn geometry(&self) -> Result<ArenaGeometry> {
        let (origin_x, origin_y) = match self.habitable_origin {
            Some(origin) => origin,
            None => {
                if self.habitable_width > self.lattice_width
                    || self.habitable_height > self.lattice_height
                {
                    return Err(Error::InvalidGeometry(format!(
                        "habitable region {}x{} does not fit the {}x{} lattice",
                        self.habitable_width,
                        self.habitable_height,
                        self.lattice_width,
                        self.lattice_height
                    )));
                }
                (
                    (self.lattice_width - self.habitable_width) / 2,
                    (self.lattice_height - self.habitable_height) / 2,
                )
            }
        };
        Ok(ArenaGeometry {
            lattice_width: self.lattice_width,
            lattice_height: self.lattice_height,
            habitable_origin_x: origin_x,
            habitable_origin_y: origin_y,
            habitable_width: self.habitable_width,
            habitable_height: self.habitable_height,
            fraction: self.fraction,
        })
    }

    /// Builds and validates the run configuration.
    pub fn to_run_config(&self) -> Result<RunConfig> {
        let geometry = self.geometry()?;
        let window = Rect::new(
            geometry.habitable_origin_x,
            geometry.habitable_origin_y,
            self.window_width,
            self.window_height,
        );
        let config = RunConfig {
            geometry,
            params: self.params,
            total_steps: self.total_steps,
            warmup_steps: self.warmup_steps,
            constraint_step: self.constraint_step,
            window,
        };
        config.validate()?;
        Ok(config)
    }
}
