//! Orchestrates a full oscillation experiment: inoculation across the
//! full habitable region, geometric constraint (freezing particles left
//! outside the shrunken region), the scheduler loop, flux sampling in the
//! left-hand measurement window, and deterministic batch sweeps over
//! fractions and seeds.

use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{ArenaGeometry, HabitableMask, LatticeState, OccupancyGrid, Rect, TrailField};
use crate::particle::{population_step, ModelParams, Particle, SenseKernel, StepStats};

/// Everything needed to execute one experiment.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub geometry: ArenaGeometry,
    pub params: ModelParams,
    pub total_steps: u32,
    pub warmup_steps: u32,
    /// Scheduler step after which the fraction mask is applied; 0 means
    /// immediately after inoculation.
    pub constraint_step: u32,
    pub window: Rect,
}

impl RunConfig {
    /// Default experiment over a geometry: 12000 steps with a 2000-step
    /// warmup, constraint applied at step 0, sampling window at the left
    /// edge of the habitable region.
    pub fn new(geometry: ArenaGeometry, params: ModelParams) -> Self {
        let window = Rect::new(
            geometry.habitable_origin_x,
            geometry.habitable_origin_y,
            20,
            20,
        );
        Self {
            geometry,
            params,
            total_steps: 12000,
            warmup_steps: 2000,
            constraint_step: 0,
            window,
        }
    }

    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.geometry.fraction = fraction;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.params.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.params.validate()?;
        if self.params.population_size > self.geometry.full_cell_count() {
            return Err(Error::Capacity {
                requested: self.params.population_size,
                available: self.geometry.full_cell_count(),
            });
        }
        if self.warmup_steps >= self.total_steps {
            return Err(Error::InvalidArgument(format!(
                "warmup ({}) must be shorter than the run ({})",
                self.warmup_steps, self.total_steps
            )));
        }
        if !self.window.fits_within(&self.geometry.constrained_rect()) {
            return Err(Error::InvalidGeometry(format!(
                "sampling window {}x{} at ({}, {}) must lie inside the constrained habitable region (fraction {})",
                self.window.width,
                self.window.height,
                self.window.x,
                self.window.y,
                self.geometry.fraction
            )));
        }
        Ok(())
    }
}

/// Mean window concentration sampled every `sample_interval` scheduler
/// steps.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSeries {
    steps: Vec<u64>,
    values: Vec<f64>,
    sample_interval: u32,
}

impl FluxSeries {
    pub fn new(sample_interval: u32) -> Self {
        Self {
            steps: Vec::new(),
            values: Vec::new(),
            sample_interval,
        }
    }

    pub fn push(&mut self, step: u64, value: f64) {
        debug_assert!(self.steps.last().is_none_or(|&last| step > last));
        self.steps.push(step);
        self.values.push(value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn steps(&self) -> &[u64] {
        &self.steps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sample_interval(&self) -> u32 {
        self.sample_interval
    }

    /// The samples taken strictly after the warmup period.
    pub fn post_warmup_values(&self, warmup_steps: u32) -> &[f64] {
        let start = self
            .steps
            .partition_point(|&s| s <= u64::from(warmup_steps));
        &self.values[start..]
    }

    /// CSV with header `step,mean_flux`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "step,mean_flux")?;
        for (step, value) in self.steps.iter().zip(&self.values) {
            writeln!(out, "{step},{value}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Places `population_size` particles on distinct uniformly random cells
/// of the full habitable region with uniformly random headings.
pub fn inoculate<R: Rng + ?Sized>(
    geometry: &ArenaGeometry,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Vec<Particle>> {
    let full = geometry.full_rect();
    let capacity = full.area();
    if params.population_size > capacity {
        return Err(Error::Capacity {
            requested: params.population_size,
            available: capacity,
        });
    }
    let picks = index::sample(rng, capacity, params.population_size);
    let mut particles = Vec::with_capacity(params.population_size);
    for pick in picks.iter() {
        let cx = full.x + pick % full.width;
        let cy = full.y + pick / full.width;
        let heading = rng.random_range(0.0..360.0);
        particles.push(Particle::new(cx as f64 + 0.5, cy as f64 + 0.5, heading));
    }
    Ok(particles)
}

/// Freezes every particle whose cell lies outside the mask; returns how
/// many were frozen by this pass.
pub fn apply_constraint(particles: &mut [Particle], mask: &HabitableMask) -> usize {
    let mut frozen = 0;
    for p in particles.iter_mut() {
        let (cx, cy) = p.cell();
        if !p.is_frozen() && !mask.is_habitable(cx, cy) {
            p.freeze();
            frozen += 1;
        }
    }
    frozen
}

/// A single in-flight experiment, steppable one scheduler step at a time.
pub struct Simulation {
    config: RunConfig,
    lattice: LatticeState,
    particles: Vec<Particle>,
    live: Vec<u32>,
    kernel: SenseKernel,
    rng: ChaCha8Rng,
    constrained_mask: HabitableMask,
    constrained: bool,
    completed_steps: u32,
    order_scratch: Vec<u32>,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let full_mask = HabitableMask::build(&config.geometry.with_fraction(1.0))?;
        let constrained_mask = HabitableMask::build(&config.geometry)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.params.rng_seed);
        let particles = inoculate(&config.geometry, &config.params, &mut rng)?;

        let mut occupancy = OccupancyGrid::new(config.geometry.lattice_width, config.geometry.lattice_height);
        for (id, p) in particles.iter().enumerate() {
            let (cx, cy) = p.cell();
            occupancy.place(id as u32, cx, cy)?;
        }

        let mut sim = Self {
            config: *config,
            lattice: LatticeState {
                field: TrailField::new(config.geometry.lattice_width, config.geometry.lattice_height),
                occupancy,
                mask: full_mask,
            },
            live: (0..particles.len() as u32).collect(),
            particles,
            kernel: SenseKernel::new(&config.params),
            rng,
            constrained_mask,
            constrained: false,
            completed_steps: 0,
            order_scratch: Vec::new(),
        };
        if sim.config.constraint_step == 0 {
            sim.constrain();
        }
        Ok(sim)
    }

    fn constrain(&mut self) {
        apply_constraint(&mut self.particles, &self.constrained_mask);
        self.lattice.mask = self.constrained_mask.clone();
        self.live = self
            .particles
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_frozen())
            .map(|(i, _)| i as u32)
            .collect();
        self.constrained = true;
    }

    /// Executes one scheduler step, applying the geometric constraint
    /// first if its step has been reached.
    pub fn step(&mut self) -> Result<StepStats> {
        if !self.constrained && self.completed_steps >= self.config.constraint_step {
            self.constrain();
        }
        let stats = population_step(
            &mut self.particles,
            &self.live,
            &mut self.lattice,
            &self.config.params,
            &self.kernel,
            &mut self.order_scratch,
            &mut self.rng,
        )?;
        self.completed_steps += 1;
        Ok(stats)
    }

    pub fn completed_steps(&self) -> u32 {
        self.completed_steps
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn field(&self) -> &TrailField {
        &self.lattice.field
    }

    pub fn occupancy(&self) -> &OccupancyGrid {
        &self.lattice.occupancy
    }

    pub fn mask(&self) -> &HabitableMask {
        &self.lattice.mask
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn live_count(&self) -> usize {
        self.live.len()
    }

    /// Mean trail concentration in the sampling window right now.
    pub fn window_flux(&self) -> f64 {
        self.lattice
            .field
            .mean_in_window(self.config.window)
            .expect("window validated against the lattice")
    }
}

/// Runs a full experiment, sampling the window every
/// `params.sample_interval` steps, and invoking `after_step` after every
/// scheduler step (for snapshot export and instrumentation).
pub fn run_experiment_with<F>(config: &RunConfig, mut after_step: F) -> Result<FluxSeries>
where
    F: FnMut(u32, &Simulation),
{
    let mut sim = Simulation::new(config)?;
    let mut series = FluxSeries::new(config.params.sample_interval);
    for step in 1..=config.total_steps {
        sim.step()?;
        if step % config.params.sample_interval == 0 {
            series.push(u64::from(step), sim.window_flux());
        }
        after_step(step, &sim);
    }
    Ok(series)
}

/// Runs a full experiment and returns the sampled flux series.
pub fn run_experiment(config: &RunConfig) -> Result<FluxSeries> {
    run_experiment_with(config, |_, _| {})
}

/// One completed run of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub fraction: f64,
    pub seed: u64,
    pub series: FluxSeries,
}

/// Runs `runs_per_fraction` seeded experiments at every fraction. Seeds
/// are `base seed + run index`, so each fraction reuses the same seed set
/// and any single run can be reproduced in isolation. Runs execute in
/// parallel; results are ordered fraction-major, then by run index.
pub fn sweep(fractions: &[f64], runs_per_fraction: u32, base: &RunConfig) -> Result<Vec<SweepRun>> {
    if runs_per_fraction == 0 {
        return Err(Error::InvalidArgument("sweep needs at least one run per fraction".into()));
    }
    let jobs: Vec<(f64, u64)> = fractions
        .iter()
        .flat_map(|&fraction| {
            (0..runs_per_fraction).map(move |i| (fraction, u64::from(i)))
        })
        .collect();
    jobs.par_iter()
        .map(|&(fraction, offset)| {
            let seed = base.params.rng_seed.wrapping_add(offset);
            let config = base.with_fraction(fraction).with_seed(seed);
            let series = run_experiment(&config)?;
            Ok(SweepRun {
                fraction,
                seed,
                series,
            })
        })
        .collect()
}
