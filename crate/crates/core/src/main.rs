//! Command-line front end: simulate, sweep, calibrate, evaluate the
//! adder, analyse recorded traces, and print the truth table.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use physadder::adder::{
    flux_dominant_frequency, logical_full_add, physical_full_add, AdderInput, CalibrationTable,
    FractionMap,
};
use physadder::analysis::{length_frequency_study, load_traces};
use physadder::config::AppConfig;
use physadder::engine::{run_experiment_with, sweep, SweepRun};
use physadder::error::{Error, Result};
use physadder::plot::{line_chart, ChartOptions, ErrorBar, Series};
use physadder::spectral::{periodogram, PeriodogramOptions};

#[derive(Parser)]
#[command(
    name = "physadder",
    version,
    about = "Physarum-inspired oscillatory simulator implementing a quantitative full adder"
)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Base RNG seed; overrides `rng_seed` from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for generated files.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,

    /// Override a single config key, e.g. `--set total_steps=4000`.
    /// May be repeated; applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and export flux, spectrum and plots.
    Simulate {
        /// Arena length fraction in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        fraction: f64,
        /// Scheduler steps at which to export field snapshots (PGM + text).
        #[arg(long, value_delimiter = ',', value_name = "STEPS")]
        snapshot_steps: Vec<u32>,
    },
    /// Run seeded experiments over a list of fractions.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "1.0,0.75,0.5,0.25")]
        fractions: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        runs: u32,
    },
    /// Sweep the mapped fractions and fit the bin thresholds.
    Calibrate {
        #[arg(long, default_value_t = 10)]
        runs: u32,
    },
    /// Evaluate the adder on one input pattern through the simulator.
    Add {
        #[arg(value_parser = parse_bit)]
        x: u8,
        #[arg(value_parser = parse_bit)]
        y: u8,
        #[arg(value_parser = parse_bit)]
        cin: u8,
        /// Calibration table produced by `calibrate`.
        #[arg(long, value_name = "PATH")]
        calibration: PathBuf,
        /// Majority vote over this many seeded runs.
        #[arg(long, default_value_t = 1)]
        votes: u32,
    },
    /// Fit dominant frequency against tube length for recorded traces.
    Analyze {
        /// Trace file: `# trace,<length_cm>,<sample_rate_hz>` headers
        /// followed by one voltage sample per line.
        traces: PathBuf,
    },
    /// Print the full adder truth table with bit counts and bins.
    TruthTable,
}

fn parse_bit(s: &str) -> std::result::Result<u8, String> {
    match s {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => Err(format!("'{s}' is not a bit (expected 0 or 1)")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(cli: &Cli) -> Result<AppConfig> {
    let mut config = match &cli.config {
        Some(path) => AppConfig::parse(&fs::read_to_string(path)?)?,
        None => AppConfig::default(),
    };
    for pair in &cli.set {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            Error::Config(format!("--set expects KEY=VALUE, got '{pair}'"))
        })?;
        config.apply(key.trim(), value.trim())?;
    }
    if let Some(seed) = cli.seed {
        config.params.rng_seed = seed;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(&cli)?;
    fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Simulate {
            fraction,
            snapshot_steps,
        } => cmd_simulate(&config, *fraction, snapshot_steps, &cli.out),
        Command::Sweep { fractions, runs } => cmd_sweep(&config, fractions, *runs, &cli.out),
        Command::Calibrate { runs } => cmd_calibrate(&config, *runs, &cli.out),
        Command::Add {
            x,
            y,
            cin,
            calibration,
            votes,
        } => cmd_add(&config, *x, *y, *cin, calibration, *votes, &cli.out),
        Command::Analyze { traces } => cmd_analyze(traces, &cli.out),
        Command::TruthTable => {
            cmd_truth_table();
            Ok(())
        }
    }
}

fn cmd_simulate(config: &AppConfig, fraction: f64, snapshot_steps: &[u32], out: &Path) -> Result<()> {
    let mut app = *config;
    app.fraction = fraction;
    let run_config = app.to_run_config()?;
    println!("seed {}", run_config.params.rng_seed);

    let wanted: BTreeSet<u32> = snapshot_steps.iter().copied().collect();
    let mut snapshot_error = None;
    let series = run_experiment_with(&run_config, |step, sim| {
        if wanted.contains(&step) && snapshot_error.is_none() {
            if let Err(e) = write_snapshots(sim.field(), step, out) {
                snapshot_error = Some(e);
            }
        }
    })?;
    if let Some(e) = snapshot_error {
        return Err(e);
    }

    let flux_path = out.join("flux.csv");
    fs::write(&flux_path, series.to_csv_string())?;

    let post = series.post_warmup_values(run_config.warmup_steps);
    let spectrum = periodogram(
        post,
        f64::from(run_config.params.sample_interval),
        &PeriodogramOptions::default(),
    )?;
    let mut spectrum_csv = Vec::new();
    spectrum.write_csv(&mut spectrum_csv)?;
    fs::write(out.join("spectrum.csv"), spectrum_csv)?;

    let dominant = flux_dominant_frequency(&series, run_config.warmup_steps)?;
    println!(
        "dominant frequency {} cycles/step (magnitude {})",
        dominant.frequency, dominant.magnitude
    );

    let points: Vec<(f64, f64)> = series
        .steps()
        .iter()
        .zip(series.values())
        .map(|(&s, &v)| (s as f64, v))
        .collect();
    let chart = line_chart(
        &ChartOptions {
            title: "Mean window flux",
            x_label: "scheduler step",
            y_label: "mean flux",
            ..ChartOptions::default()
        },
        &[Series {
            label: "",
            points: &points,
        }],
        &[],
    );
    fs::write(out.join("flux.svg"), chart)?;
    println!("wrote {}", flux_path.display());
    Ok(())
}

fn write_snapshots(field: &physadder::lattice::TrailField, step: u32, out: &Path) -> Result<()> {
    let mut pgm = Vec::new();
    field.write_pgm16(&mut pgm)?;
    fs::write(out.join(format!("field_step_{step}.pgm")), pgm)?;
    let mut text = Vec::new();
    field.write_text_grid(&mut text)?;
    fs::write(out.join(format!("field_step_{step}.txt")), text)?;
    Ok(())
}

/// Writes per-run series files plus a manifest; returns manifest rows as
/// `(fraction, seed, path, dominant_frequency)`.
fn export_sweep(runs: &[SweepRun], warmup_steps: u32, out: &Path) -> Result<Vec<(f64, u64, String, f64)>> {
    let mut rows = Vec::with_capacity(runs.len());
    for run in runs {
        let name = format!("flux_f{}_s{}.csv", run.fraction, run.seed);
        fs::write(out.join(&name), run.series.to_csv_string())?;
        let dominant = flux_dominant_frequency(&run.series, warmup_steps)?;
        rows.push((run.fraction, run.seed, name, dominant.frequency));
    }
    let mut manifest = String::from("fraction,seed,series_path,dominant_frequency\n");
    for (fraction, seed, path, freq) in &rows {
        manifest.push_str(&format!("{fraction},{seed},{path},{freq}\n"));
    }
    fs::write(out.join("manifest.csv"), manifest)?;
    Ok(rows)
}

fn cmd_sweep(config: &AppConfig, fractions: &[f64], runs: u32, out: &Path) -> Result<()> {
    let base = config.to_run_config()?;
    println!(
        "sweeping {} fractions x {runs} runs, seeds {}..={}",
        fractions.len(),
        base.params.rng_seed,
        base.params.rng_seed + u64::from(runs) - 1
    );
    let results = sweep(fractions, runs, &base)?;
    export_sweep(&results, base.warmup_steps, out)?;
    println!("wrote {}", out.join("manifest.csv").display());
    Ok(())
}

fn cmd_calibrate(config: &AppConfig, runs: u32, out: &Path) -> Result<()> {
    let base = config.to_run_config()?;
    let map = FractionMap::default();
    let fractions = map.fractions();
    println!(
        "calibrating over fractions {:?}, {runs} runs each, seeds {}..={}",
        fractions,
        base.params.rng_seed,
        base.params.rng_seed + u64::from(runs) - 1
    );
    let results = sweep(&fractions, runs, &base)?;
    let rows = export_sweep(&results, base.warmup_steps, out)?;

    let samples: Vec<(f64, f64)> = rows.iter().map(|&(f, _, _, freq)| (f, freq)).collect();
    let table = match CalibrationTable::calibrate(&samples, &map) {
        Ok(table) => table,
        Err(e) => {
            if let Error::CalibrationFailure { means } = &e {
                for (bin, mean) in means.iter().enumerate() {
                    eprintln!("bin {bin} (fraction {}): mean frequency {mean}", fractions[bin]);
                }
            }
            return Err(e);
        }
    };
    if table.low_confidence() {
        eprintln!("warning: fewer than 2 runs per fraction; thresholds are low-confidence");
    }

    fs::write(out.join("calibration.csv"), table.to_csv_string())?;
    for b in table.bins() {
        println!(
            "bin {} fraction {} mean frequency {} ({} runs)",
            b.bin, b.fraction, b.mean_frequency, b.runs
        );
    }
    println!("thresholds {:?}", table.thresholds());

    // Fig-style frequency vs fraction plot with per-fraction spread.
    let mut means = Vec::new();
    let mut bars = Vec::new();
    for (bin, &fraction) in fractions.iter().enumerate() {
        let freqs: Vec<f64> = rows
            .iter()
            .filter(|r| r.0 == fraction)
            .map(|r| r.3)
            .collect();
        let mean = table.bins()[bin].mean_frequency;
        let std = if freqs.len() > 1 {
            (freqs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (freqs.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        means.push((fraction, mean));
        bars.push(ErrorBar {
            x: fraction,
            y: mean,
            dy: std,
        });
    }
    means.sort_by(|a, b| a.0.total_cmp(&b.0));
    let chart = line_chart(
        &ChartOptions {
            title: "Oscillation frequency vs arena fraction",
            x_label: "arena length fraction",
            y_label: "dominant frequency (cycles/step)",
            ..ChartOptions::default()
        },
        &[Series {
            label: "mean of runs",
            points: &means,
        }],
        &bars,
    );
    fs::write(out.join("frequency_vs_fraction.svg"), chart)?;
    println!("wrote {}", out.join("calibration.csv").display());
    Ok(())
}

fn cmd_add(
    config: &AppConfig,
    x: u8,
    y: u8,
    cin: u8,
    calibration_path: &Path,
    votes: u32,
    out: &Path,
) -> Result<()> {
    let input = AdderInput::new(x, y, cin)?;
    let table = CalibrationTable::parse_csv(&fs::read_to_string(calibration_path)?)?;
    let base = config.to_run_config()?;
    let map = FractionMap::default();
    println!(
        "evaluating ({x}, {y}, {cin}): bit count {}, fraction {}, {votes} vote(s), seeds {}..={}",
        input.bit_count(),
        map.fraction_for(input.bit_count())?,
        base.params.rng_seed,
        base.params.rng_seed + u64::from(votes) - 1
    );
    let result = physical_full_add(input, &table, &base, &map, base.params.rng_seed, votes)?;

    let mut report = String::from("vote,seed,fraction,frequency,bin\n");
    for (i, v) in result.votes.iter().enumerate() {
        report.push_str(&format!("{i},{},{},{},{}\n", v.seed, v.fraction, v.frequency, v.bin));
    }
    fs::write(out.join("add_report.csv"), report)?;

    println!("S={} Cout={}", result.output.s(), result.output.cout());
    Ok(())
}

fn cmd_analyze(traces_path: &Path, out: &Path) -> Result<()> {
    let traces = load_traces(traces_path)?;
    let study = length_frequency_study(&traces)?;
    for w in &study.warnings {
        eprintln!("warning: {w}");
    }

    fs::write(
        out.join("fit_report.csv"),
        format!(
            "slope,intercept,r2\n{},{},{}\n",
            study.fit.slope, study.fit.intercept, study.fit.r2
        ),
    )?;

    let mut summary = String::from("length_cm,mean_freq_hz,std_freq_hz,n\n");
    for s in &study.per_length {
        summary.push_str(&format!(
            "{},{},{},{}\n",
            s.length_cm, s.mean_freq_hz, s.std_freq_hz, s.n
        ));
    }
    fs::write(out.join("length_summary.csv"), summary)?;

    let means: Vec<(f64, f64)> = study
        .per_length
        .iter()
        .map(|s| (s.length_cm, s.mean_freq_hz))
        .collect();
    let bars: Vec<ErrorBar> = study
        .per_length
        .iter()
        .map(|s| ErrorBar {
            x: s.length_cm,
            y: s.mean_freq_hz,
            dy: s.std_freq_hz,
        })
        .collect();
    let x_lo = means.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_hi = means.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let fit_line = [
        (x_lo, study.fit.intercept + study.fit.slope * x_lo),
        (x_hi, study.fit.intercept + study.fit.slope * x_hi),
    ];
    let chart = line_chart(
        &ChartOptions {
            title: "Oscillation frequency vs tube length",
            x_label: "length (cm)",
            y_label: "frequency (Hz)",
            ..ChartOptions::default()
        },
        &[
            Series {
                label: "per-length mean",
                points: &means,
            },
            Series {
                label: "least-squares fit",
                points: &fit_line,
            },
        ],
        &bars,
    );
    fs::write(out.join("frequency_vs_length.svg"), chart)?;

    println!(
        "fit: frequency = {} * length + {} (r2 = {})",
        study.fit.slope, study.fit.intercept, study.fit.r2
    );
    Ok(())
}

fn cmd_truth_table() {
    println!("dec bits   X Y Cin | Cout S   out");
    for input in AdderInput::all() {
        let output = logical_full_add(input);
        println!(
            "{:>3} {:>4}   {} {} {} | {} {}   {:>3}",
            input.decimal(),
            input.bit_count(),
            input.x(),
            input.y(),
            input.cin(),
            output.cout(),
            output.s(),
            output.decimal()
        );
    }
}
