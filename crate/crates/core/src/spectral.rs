//! Frequency-domain analysis of flux series and voltage traces:
//! periodogram and dominant-frequency extraction.
//!
//! A periodogram is computed by removing the series mean, applying a
//! periodic Hann window (rectangular available for exactness tests),
//! optionally zero-padding, and taking the one-sided magnitude spectrum
//! `|X_k|` for `k = 0..=M/2` at bin frequencies `k / (M * dt)`, where `M`
//! is the (padded) transform length. With this normalisation the
//! windowed time-domain energy satisfies
//! `sum(y^2) = (|X_0|^2 + 2 * sum_mid |X_k|^2 + c * |X_{M/2}|^2) / M`
//! with `c = 1` for even `M` and the Nyquist term absent for odd `M`.

use std::io::Write;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Window applied before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// Periodic Hann window; the default, reduces leakage for
    /// quasi-sinusoidal series.
    Hann,
    /// No tapering; exact for bin-aligned sines.
    Rectangular,
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodogramOptions {
    pub window: WindowKind,
    /// Zero-padding factor; 1 means no padding, 4 interpolates the
    /// spectrum four-fold.
    pub pad_factor: usize,
}

impl Default for PeriodogramOptions {
    fn default() -> Self {
        Self {
            window: WindowKind::Hann,
            pad_factor: 1,
        }
    }
}

/// One-sided magnitude spectrum with ascending bin frequencies from DC to
/// Nyquist.
#[derive(Debug, Clone)]
pub struct Spectrum {
    frequencies: Vec<f64>,
    magnitudes: Vec<f64>,
    bin_width: f64,
}

impl Spectrum {
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// Spacing between adjacent bins in cycles per time unit.
    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// Default low-frequency cutoff for dominant-frequency extraction:
    /// two bin widths, so slow settling drift cannot masquerade as the
    /// dominant oscillation.
    pub fn default_min_frequency(&self) -> f64 {
        2.0 * self.bin_width
    }

    /// CSV with header `frequency,magnitude`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "frequency,magnitude")?;
        for (f, m) in self.frequencies.iter().zip(&self.magnitudes) {
            writeln!(out, "{f},{m}")?;
        }
        Ok(())
    }
}

/// The non-DC spectral peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominantFrequency {
    pub frequency: f64,
    pub magnitude: f64,
    pub bin_width: f64,
}

/// Magnitude spectrum of a sampled series; `dt` is the time between
/// samples (scheduler steps for flux series, seconds for voltage traces).
pub fn periodogram(series: &[f64], dt: f64, options: &PeriodogramOptions) -> Result<Spectrum> {
    let n = series.len();
    if n < 16 {
        return Err(Error::InsufficientData(format!(
            "periodogram needs at least 16 samples, got {n}"
        )));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sample spacing must be positive, got {dt}"
        )));
    }
    if options.pad_factor == 0 {
        return Err(Error::InvalidArgument("pad factor must be >= 1".into()));
    }

    let mean = series.iter().sum::<f64>() / n as f64;
    let padded_len = n * options.pad_factor;
    let mut buffer = vec![Complex64::new(0.0, 0.0); padded_len];
    match options.window {
        WindowKind::Hann => {
            let scale = std::f64::consts::TAU / n as f64;
            for (i, (&x, slot)) in series.iter().zip(buffer.iter_mut()).enumerate() {
                let w = 0.5 * (1.0 - (scale * i as f64).cos());
                *slot = Complex64::new(w * (x - mean), 0.0);
            }
        }
        WindowKind::Rectangular => {
            for (&x, slot) in series.iter().zip(buffer.iter_mut()) {
                *slot = Complex64::new(x - mean, 0.0);
            }
        }
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(padded_len);
    fft.process(&mut buffer);

    let bins = padded_len / 2 + 1;
    let bin_width = 1.0 / (padded_len as f64 * dt);
    let mut frequencies = Vec::with_capacity(bins);
    let mut magnitudes = Vec::with_capacity(bins);
    for (k, value) in buffer.iter().take(bins).enumerate() {
        frequencies.push(k as f64 * bin_width);
        magnitudes.push(value.norm());
    }
    Ok(Spectrum {
        frequencies,
        magnitudes,
        bin_width,
    })
}

/// The strongest bin at or above `min_frequency` (DC always excluded).
/// Exact magnitude ties resolve to the lower frequency.
pub fn dominant_frequency(spectrum: &Spectrum, min_frequency: f64) -> Result<DominantFrequency> {
    let mut best: Option<(f64, f64)> = None;
    let mut qualifying = 0usize;
    for (&f, &m) in spectrum.frequencies.iter().zip(&spectrum.magnitudes) {
        if f <= 0.0 || f < min_frequency {
            continue;
        }
        qualifying += 1;
        match best {
            Some((_, best_m)) if m <= best_m => {}
            _ => best = Some((f, m)),
        }
    }
    if qualifying < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 spectral bins at or above {min_frequency}, found {qualifying}"
        )));
    }
    let (frequency, magnitude) = best.expect("qualifying bins exist");
    Ok(DominantFrequency {
        frequency,
        magnitude,
        bin_width: spectrum.bin_width,
    })
}
