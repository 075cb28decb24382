//! Voltage-trace analysis: ingest logged traces grouped by tube length,
//! extract each trace's dominant frequency, and fit frequency against
//! length by ordinary least squares with R².

use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{dominant_frequency, periodogram, PeriodogramOptions};

/// A logged voltage recording labelled with its tube length.
#[derive(Debug, Clone)]
pub struct VoltageTrace {
    pub length_cm: f64,
    pub sample_rate_hz: f64,
    pub samples: Vec<f64>,
}

/// Ordinary least squares line with intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Set when the responses carry no variance (SStot = 0), in which
    /// case r2 is reported as 0 rather than dividing by zero.
    pub degenerate: bool,
}

/// Loads traces from the documented CSV format: each block starts with a
/// `# trace,<length_cm>,<sample_rate_hz>` header followed by one voltage
/// sample per line. Other `#` comment lines and blank lines are ignored.
pub fn load_traces(path: &Path) -> Result<Vec<VoltageTrace>> {
    let text = std::fs::read_to_string(path)?;
    parse_traces(&text)
}

pub fn parse_traces(text: &str) -> Result<Vec<VoltageTrace>> {
    let mut traces: Vec<VoltageTrace> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim_start();
            if !rest.starts_with("trace") {
                continue; // ordinary comment
            }
            let fields: Vec<&str> = rest.split(',').collect();
            if fields.len() != 3 || fields[0].trim() != "trace" {
                return Err(Error::Parse {
                    line: lineno,
                    message: "trace header must be '# trace,<length_cm>,<sample_rate_hz>'".into(),
                });
            }
            let length_cm = fields[1].trim().parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("expected a length in cm, got '{}'", fields[1]),
            })?;
            let sample_rate_hz = fields[2].trim().parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("expected a sample rate in Hz, got '{}'", fields[2]),
            })?;
            if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("sample rate must be positive, got {sample_rate_hz}"),
                });
            }
            traces.push(VoltageTrace {
                length_cm,
                sample_rate_hz,
                samples: Vec::new(),
            });
            continue;
        }
        let value = line.parse::<f64>().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("expected a voltage sample, got '{line}'"),
        })?;
        match traces.last_mut() {
            Some(trace) => trace.samples.push(value),
            None => {
                return Err(Error::Format(
                    "voltage samples before any '# trace' header".into(),
                ))
            }
        }
    }
    if traces.is_empty() {
        return Err(Error::Format("no '# trace' blocks found".into()));
    }
    Ok(traces)
}

/// Ordinary least squares fit of `ys` on `xs` with an intercept.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "x/y length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {n}"
        )));
    }
    let x_mean = xs.iter().sum::<f64>() / n as f64;
    let y_mean = ys.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_mean;
        let dy = y - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit(
            "all x values are identical".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    if syy == 0.0 {
        return Ok(LinearFit {
            slope,
            intercept,
            r2: 0.0,
            degenerate: true,
        });
    }
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        r2: 1.0 - ss_res / syy,
        degenerate: false,
    })
}

/// Mean and spread of the recovered frequencies at one tube length.
#[derive(Debug, Clone, Copy)]
pub struct LengthSummary {
    pub length_cm: f64,
    pub mean_freq_hz: f64,
    pub std_freq_hz: f64,
    pub n: usize,
}

/// One trace's recovered dominant frequency.
#[derive(Debug, Clone, Copy)]
pub struct TraceFrequency {
    pub length_cm: f64,
    pub frequency_hz: f64,
}

/// Full output of the length/frequency regression.
#[derive(Debug, Clone)]
pub struct LengthFrequencyStudy {
    pub fit: LinearFit,
    pub per_trace: Vec<TraceFrequency>,
    pub per_length: Vec<LengthSummary>,
    /// One entry per trace excluded for failing the spectral
    /// preconditions.
    pub warnings: Vec<String>,
}

/// Extracts each trace's dominant frequency and fits frequency against
/// length over the per-trace points. Traces failing the spectral
/// preconditions are excluded with a warning; the fit proceeds as long
/// as two distinct lengths survive.
pub fn length_frequency_study(traces: &[VoltageTrace]) -> Result<LengthFrequencyStudy> {
    let mut per_trace = Vec::new();
    let mut warnings = Vec::new();
    for (i, trace) in traces.iter().enumerate() {
        let dt = 1.0 / trace.sample_rate_hz;
        let result = periodogram(&trace.samples, dt, &PeriodogramOptions::default())
            .and_then(|s| dominant_frequency(&s, s.default_min_frequency()));
        match result {
            Ok(dominant) => per_trace.push(TraceFrequency {
                length_cm: trace.length_cm,
                frequency_hz: dominant.frequency,
            }),
            Err(e) => warnings.push(format!(
                "trace {} (length {} cm) excluded: {e}",
                i + 1,
                trace.length_cm
            )),
        }
    }

    let mut sorted = per_trace.clone();
    sorted.sort_by(|a, b| a.length_cm.total_cmp(&b.length_cm));
    let mut per_length: Vec<LengthSummary> = Vec::new();
    for t in &sorted {
        match per_length.last_mut() {
            Some(summary) if summary.length_cm == t.length_cm => {
                summary.mean_freq_hz += t.frequency_hz;
                summary.n += 1;
            }
            _ => per_length.push(LengthSummary {
                length_cm: t.length_cm,
                mean_freq_hz: t.frequency_hz,
                std_freq_hz: 0.0,
                n: 1,
            }),
        }
    }
    for summary in &mut per_length {
        summary.mean_freq_hz /= summary.n as f64;
        if summary.n > 1 {
            let var: f64 = sorted
                .iter()
                .filter(|t| t.length_cm == summary.length_cm)
                .map(|t| (t.frequency_hz - summary.mean_freq_hz).powi(2))
                .sum::<f64>()
                / (summary.n - 1) as f64;
            summary.std_freq_hz = var.sqrt();
        }
    }

    let xs: Vec<f64> = per_trace.iter().map(|t| t.length_cm).collect();
    let ys: Vec<f64> = per_trace.iter().map(|t| t.frequency_hz).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(LengthFrequencyStudy {
        fit,
        per_trace,
        per_length,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_trace(length_cm: f64, freq_hz: f64, rate_hz: f64, n: usize) -> VoltageTrace {
        let samples = (0..n)
            .map(|i| (std::f64::consts::TAU * freq_hz * i as f64 / rate_hz).sin())
            .collect();
        VoltageTrace {
            length_cm,
            sample_rate_hz: rate_hz,
            samples,
        }
    }

    #[test]
    fn parse_two_trace_file() {
        let text = "# trace,3.0,100\n0.1\n0.2\n\n# trace,1.5,50\n-0.3\n0.4\n0.5\n";
        let traces = parse_traces(text).unwrap();
        assert_eq!(traces.len(), 2);
        assert_eq!(traces[0].length_cm, 3.0);
        assert_eq!(traces[0].sample_rate_hz, 100.0);
        assert_eq!(traces[0].samples, vec![0.1, 0.2]);
        assert_eq!(traces[1].samples.len(), 3);
    }

    #[test]
    fn parse_empty_file_is_format_error() {
        assert!(matches!(parse_traces(""), Err(Error::Format(_))));
        assert!(matches!(parse_traces("# just a comment\n"), Err(Error::Format(_))));
    }

    #[test]
    fn parse_bad_voltage_reports_line() {
        let text = "# trace,3.0,100\n0.1\nnot-a-number\n";
        assert!(matches!(
            parse_traces(text),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn parse_samples_before_header_rejected() {
        assert!(matches!(parse_traces("0.5\n"), Err(Error::Format(_))));
    }

    #[test]
    fn parse_bad_header_fields() {
        assert!(matches!(
            parse_traces("# trace,abc,100\n0.1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_traces("# trace,1.0,0\n0.1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_traces("# trace,1.0\n0.1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn fit_recovers_reference_line_exactly() {
        let xs = [0.75, 1.5, 2.25, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| -0.0015 * x + 0.0109).collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope - -0.0015).abs() < 1e-12);
        assert!((fit.intercept - 0.0109).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert!(!fit.degenerate);
    }

    #[test]
    fn fit_exact_simple_line() {
        let fit = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_constant_y_is_degenerate_zero_r2() {
        let fit = linear_fit(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r2, 0.0);
        assert!(fit.degenerate);
    }

    #[test]
    fn fit_identical_x_rejected() {
        assert!(matches!(
            linear_fit(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn fit_residual_orthogonality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let xs: Vec<f64> = (0..40).map(|_| rng.random_range(0.0..10.0)).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 0.7 * x - 2.0 + rng.random_range(-0.5..0.5))
            .collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        let residuals: Vec<f64> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| y - (fit.intercept + fit.slope * x))
            .collect();
        let scale: f64 = ys.iter().map(|y| y.abs()).sum();
        let sum_r: f64 = residuals.iter().sum();
        let sum_rx: f64 = residuals.iter().zip(&xs).map(|(r, x)| r * x).sum();
        assert!(sum_r.abs() / scale < 1e-9);
        assert!(sum_rx.abs() / (scale * 10.0) < 1e-9);
    }

    #[test]
    fn fit_invariant_under_reordering() {
        let xs = [3.0, 1.0, 2.0, 5.0, 4.0];
        let ys = [2.9, 1.2, 2.1, 4.8, 4.2];
        let fit_a = linear_fit(&xs, &ys).unwrap();
        let order = [4usize, 2, 0, 1, 3];
        let xs_b: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
        let ys_b: Vec<f64> = order.iter().map(|&i| ys[i]).collect();
        let fit_b = linear_fit(&xs_b, &ys_b).unwrap();
        assert!((fit_a.slope - fit_b.slope).abs() < 1e-12);
        assert!((fit_a.intercept - fit_b.intercept).abs() < 1e-12);
        assert!((fit_a.r2 - fit_b.r2).abs() < 1e-12);
    }

    #[test]
    fn study_single_length_is_degenerate() {
        let traces = vec![
            sine_trace(1.5, 0.01, 1.0, 1024),
            sine_trace(1.5, 0.012, 1.0, 1024),
        ];
        assert!(matches!(
            length_frequency_study(&traces),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn study_excludes_short_traces_with_warning() {
        let mut traces = vec![
            sine_trace(1.0, 0.02, 1.0, 2048),
            sine_trace(2.0, 0.015, 1.0, 2048),
        ];
        traces.push(VoltageTrace {
            length_cm: 3.0,
            sample_rate_hz: 1.0,
            samples: vec![0.0; 4],
        });
        let study = length_frequency_study(&traces).unwrap();
        assert_eq!(study.per_trace.len(), 2);
        assert_eq!(study.warnings.len(), 1);
        assert!(study.warnings[0].contains("length 3 cm"));
    }

    #[test]
    fn study_negative_slope_with_jitter() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let lengths = [0.75, 1.5, 2.25, 3.0];
        let mut traces = Vec::new();
        for &len in &lengths {
            let base = -0.0015 * len + 0.0109;
            for _ in 0..10 {
                let jitter = rng.random_range(-0.02..0.02);
                traces.push(sine_trace(len, base * (1.0 + jitter), 1.0, 8192));
            }
        }
        let study = length_frequency_study(&traces).unwrap();
        assert!(study.fit.slope < 0.0);
        assert!(study.fit.r2 > 0.5);
        assert_eq!(study.per_length.len(), 4);
        for summary in &study.per_length {
            assert_eq!(summary.n, 10);
            assert!(summary.std_freq_hz >= 0.0);
        }
    }
}
