//! The quantitative single-bit full adder: inputs are encoded as their
//! '1'-bit count, the count selects an arena fraction, the simulated
//! oscillation frequency is thresholded back into one of four output
//! bins, and the bin decodes to (Cout, S). Because the 8 input patterns
//! collapse onto 4 bit counts with identical outputs, the usual 2:1
//! mapping becomes 1:1 and the whole adder needs no branching or
//! crossing signal paths. A logic-level ripple adder chains the same
//! mapping through its carries.

use rayon::prelude::*;

use crate::engine::{run_experiment, RunConfig};
use crate::error::{Error, Result};
use crate::spectral::{dominant_frequency, periodogram, PeriodogramOptions};

/// The three binary inputs (X, Y, carry-in).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdderInput {
    x: u8,
    y: u8,
    cin: u8,
}

impl AdderInput {
    pub fn new(x: u8, y: u8, cin: u8) -> Result<Self> {
        for (name, bit) in [("X", x), ("Y", y), ("Cin", cin)] {
            if bit > 1 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be 0 or 1, got {bit}"
                )));
            }
        }
        Ok(Self { x, y, cin })
    }

    pub fn x(&self) -> u8 {
        self.x
    }

    pub fn y(&self) -> u8 {
        self.y
    }

    pub fn cin(&self) -> u8 {
        self.cin
    }

    /// Number of '1' bits among (X, Y, Cin); the quantitative transform.
    pub fn bit_count(&self) -> u8 {
        self.x + self.y + self.cin
    }

    /// Value of the input pattern read as a 3-bit number, X most
    /// significant.
    pub fn decimal(&self) -> u8 {
        self.x << 2 | self.y << 1 | self.cin
    }

    /// All 8 input patterns in decimal order.
    pub fn all() -> [AdderInput; 8] {
        let mut out = [AdderInput { x: 0, y: 0, cin: 0 }; 8];
        for (d, slot) in out.iter_mut().enumerate() {
            let d = d as u8;
            *slot = AdderInput {
                x: d >> 2 & 1,
                y: d >> 1 & 1,
                cin: d & 1,
            };
        }
        out
    }
}

/// The two binary outputs (S, carry-out).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdderOutput {
    s: u8,
    cout: u8,
}

impl AdderOutput {
    pub fn s(&self) -> u8 {
        self.s
    }

    pub fn cout(&self) -> u8 {
        self.cout
    }

    /// Value of the output pattern read as a 2-bit number, Cout most
    /// significant; equals the input bit count.
    pub fn decimal(&self) -> u8 {
        self.cout << 1 | self.s
    }
}

/// The '1'-bit count of an input pattern, 0..=3.
pub fn encode_bit_count(input: AdderInput) -> u8 {
    input.bit_count()
}

/// Maps an output bin 0..=3 back to binary (Cout, S).
pub fn decode_bin(bin: u8) -> Result<AdderOutput> {
    if bin > 3 {
        return Err(Error::InvalidArgument(format!(
            "output bin must be 0..=3, got {bin}"
        )));
    }
    Ok(AdderOutput {
        s: bin & 1,
        cout: bin >> 1,
    })
}

/// Pure-logic full adder via the bit-count encoding. Equivalent to the
/// classical gate circuit: 2*Cout + S = X + Y + Cin.
pub fn logical_full_add(input: AdderInput) -> AdderOutput {
    decode_bin(input.bit_count()).expect("bit count of three bits is always 0..=3")
}

/// n-bit ripple adder chaining `logical_full_add` through the carries;
/// the result carries `width + 1` bits.
pub fn ripple_add(a: u64, b: u64, width: u32) -> Result<u64> {
    if width == 0 || width > 63 {
        return Err(Error::InvalidArgument(format!(
            "word width must be 1..=63 bits, got {width}"
        )));
    }
    let limit = 1u64 << width;
    if a >= limit || b >= limit {
        return Err(Error::InvalidArgument(format!(
            "operands must fit in {width} bits, got {a} and {b}"
        )));
    }
    let mut carry = 0u8;
    let mut sum = 0u64;
    for bit in 0..width {
        let input = AdderInput::new((a >> bit & 1) as u8, (b >> bit & 1) as u8, carry)?;
        let out = logical_full_add(input);
        sum |= u64::from(out.s()) << bit;
        carry = out.cout();
    }
    sum |= u64::from(carry) << width;
    Ok(sum)
}

/// Pairing of input bit counts with arena length fractions. Frequency
/// rises as the arena shrinks, so bin index rises with bit count only if
/// fractions strictly decrease.
#[derive(Debug, Clone, Copy)]
pub struct FractionMap {
    fractions: [f64; 4],
}

impl Default for FractionMap {
    fn default() -> Self {
        Self {
            fractions: [1.0, 0.75, 0.5, 0.25],
        }
    }
}

impl FractionMap {
    pub fn new(fractions: [f64; 4]) -> Result<Self> {
        for f in fractions {
            if !f.is_finite() || f <= 0.0 || f > 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "fractions must lie in (0, 1], got {f}"
                )));
            }
        }
        if !fractions.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!(
                "fractions must strictly decrease with bit count, got {fractions:?}"
            )));
        }
        Ok(Self { fractions })
    }

    pub fn fraction_for(&self, bit_count: u8) -> Result<f64> {
        self.fractions
            .get(bit_count as usize)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("bit count must be 0..=3, got {bit_count}")))
    }

    pub fn fractions(&self) -> [f64; 4] {
        self.fractions
    }
}

/// Calibration of one output bin.
#[derive(Debug, Clone, Copy)]
pub struct BinCalibration {
    pub bin: u8,
    pub fraction: f64,
    pub mean_frequency: f64,
    pub runs: usize,
}

/// Per-bin mean dominant frequencies and the three thresholds separating
/// the four bins.
#[derive(Debug, Clone)]
pub struct CalibrationTable {
    bins: [BinCalibration; 4],
    thresholds: [f64; 3],
}

impl CalibrationTable {
    /// Builds the table from sweep output: one `(fraction, dominant
    /// frequency)` sample per run. Every mapped fraction must be present;
    /// thresholds sit at the midpoints of adjacent bin means, and the
    /// means must strictly increase with bin index or calibration fails
    /// (the physical layer did not separate the bins).
    pub fn calibrate(samples: &[(f64, f64)], map: &FractionMap) -> Result<Self> {
        let mut sums = [0.0f64; 4];
        let mut counts = [0usize; 4];
        for &(fraction, frequency) in samples {
            let bin = map
                .fractions
                .iter()
                .position(|&f| (f - fraction).abs() < 1e-12)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "fraction {fraction} is not in the calibration map {:?}",
                        map.fractions
                    ))
                })?;
            sums[bin] += frequency;
            counts[bin] += 1;
        }
        for (bin, &count) in counts.iter().enumerate() {
            if count == 0 {
                return Err(Error::InsufficientData(format!(
                    "no runs for bin {bin} (fraction {})",
                    map.fractions[bin]
                )));
            }
        }
        let mut means = [0.0f64; 4];
        for bin in 0..4 {
            means[bin] = sums[bin] / counts[bin] as f64;
        }
        Self::build(means, counts, map)
    }

    /// Builds the table directly from per-bin mean frequencies (run
    /// counts unknown).
    pub fn from_bin_means(means: [f64; 4], map: &FractionMap) -> Result<Self> {
        Self::build(means, [0; 4], map)
    }

    fn build(means: [f64; 4], counts: [usize; 4], map: &FractionMap) -> Result<Self> {
        if !means.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::CalibrationFailure {
                means: means.to_vec(),
            });
        }
        let thresholds = [
            (means[0] + means[1]) / 2.0,
            (means[1] + means[2]) / 2.0,
            (means[2] + means[3]) / 2.0,
        ];
        let mut bins = [BinCalibration {
            bin: 0,
            fraction: 0.0,
            mean_frequency: 0.0,
            runs: 0,
        }; 4];
        for (i, slot) in bins.iter_mut().enumerate() {
            *slot = BinCalibration {
                bin: i as u8,
                fraction: map.fractions[i],
                mean_frequency: means[i],
                runs: counts[i],
            };
        }
        Ok(Self { bins, thresholds })
    }

    pub fn bins(&self) -> &[BinCalibration; 4] {
        &self.bins
    }

    pub fn thresholds(&self) -> &[f64; 3] {
        &self.thresholds
    }

    pub fn mean_frequencies(&self) -> [f64; 4] {
        [
            self.bins[0].mean_frequency,
            self.bins[1].mean_frequency,
            self.bins[2].mean_frequency,
            self.bins[3].mean_frequency,
        ]
    }

    /// True when any bin was calibrated from fewer than two runs.
    pub fn low_confidence(&self) -> bool {
        self.bins.iter().any(|b| b.runs < 2)
    }

    /// The output bin for a measured frequency: the number of thresholds
    /// strictly below it. A frequency exactly on a threshold classifies
    /// into the lower bin; extreme frequencies clamp to bins 0 and 3.
    pub fn classify(&self, frequency: f64) -> u8 {
        self.thresholds.iter().filter(|&&t| t < frequency).count() as u8
    }

    /// CSV persistence: a `bin,fraction,mean_frequency` section followed
    /// by a `threshold_index,frequency` section.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("bin,fraction,mean_frequency\n");
        for b in &self.bins {
            out.push_str(&format!("{},{},{}\n", b.bin, b.fraction, b.mean_frequency));
        }
        out.push_str("threshold_index,frequency\n");
        for (i, t) in self.thresholds.iter().enumerate() {
            out.push_str(&format!("{i},{t}\n"));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        enum Section {
            None,
            Bins,
            Thresholds,
        }
        let mut section = Section::None;
        let mut means: [Option<f64>; 4] = [None; 4];
        let mut fractions: [Option<f64>; 4] = [None; 4];
        let mut thresholds: [Option<f64>; 3] = [None; 3];
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            match line {
                "bin,fraction,mean_frequency" => {
                    section = Section::Bins;
                    continue;
                }
                "threshold_index,frequency" => {
                    section = Section::Thresholds;
                    continue;
                }
                _ => {}
            }
            let fields: Vec<&str> = line.split(',').collect();
            let parse_f64 = |s: &str| -> Result<f64> {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("expected a number, got '{s}'"),
                })
            };
            match section {
                Section::None => {
                    return Err(Error::Format(
                        "calibration file must start with a 'bin,fraction,mean_frequency' header".into(),
                    ))
                }
                Section::Bins => {
                    if fields.len() != 3 {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "expected bin,fraction,mean_frequency".into(),
                        });
                    }
                    let bin = fields[0].trim().parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("expected a bin index, got '{}'", fields[0]),
                    })?;
                    if bin > 3 {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("bin index must be 0..=3, got {bin}"),
                        });
                    }
                    fractions[bin] = Some(parse_f64(fields[1])?);
                    means[bin] = Some(parse_f64(fields[2])?);
                }
                Section::Thresholds => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "expected threshold_index,frequency".into(),
                        });
                    }
                    let i = fields[0].trim().parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("expected a threshold index, got '{}'", fields[0]),
                    })?;
                    if i > 2 {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("threshold index must be 0..=2, got {i}"),
                        });
                    }
                    thresholds[i] = Some(parse_f64(fields[1])?);
                }
            }
        }
        let mut bins = [BinCalibration {
            bin: 0,
            fraction: 0.0,
            mean_frequency: 0.0,
            runs: 0,
        }; 4];
        for i in 0..4 {
            bins[i] = BinCalibration {
                bin: i as u8,
                fraction: fractions[i]
                    .ok_or_else(|| Error::Format(format!("calibration bin {i} missing")))?,
                mean_frequency: means[i]
                    .ok_or_else(|| Error::Format(format!("calibration bin {i} missing")))?,
                runs: 0,
            };
        }
        let thresholds = [
            thresholds[0].ok_or_else(|| Error::Format("threshold 0 missing".into()))?,
            thresholds[1].ok_or_else(|| Error::Format("threshold 1 missing".into()))?,
            thresholds[2].ok_or_else(|| Error::Format("threshold 2 missing".into()))?,
        ];
        Ok(Self { bins, thresholds })
    }
}

/// Classifies a frequency against a calibration table.
pub fn classify_frequency(frequency: f64, calibration: &CalibrationTable) -> u8 {
    calibration.classify(frequency)
}

/// One simulated evaluation inside `physical_full_add`.
#[derive(Debug, Clone, Copy)]
pub struct VoteRecord {
    pub seed: u64,
    pub fraction: f64,
    pub frequency: f64,
    pub magnitude: f64,
    pub bin: u8,
}

/// Outcome of a physical evaluation, including every vote.
#[derive(Debug, Clone)]
pub struct PhysicalAddResult {
    pub output: AdderOutput,
    pub bin: u8,
    pub votes: Vec<VoteRecord>,
}

/// Dominant oscillation frequency of a run's post-warmup flux.
pub fn flux_dominant_frequency(
    series: &crate::engine::FluxSeries,
    warmup_steps: u32,
) -> Result<crate::spectral::DominantFrequency> {
    let values = series.post_warmup_values(warmup_steps);
    let spectrum = periodogram(
        values,
        f64::from(series.sample_interval()),
        &PeriodogramOptions::default(),
    )?;
    dominant_frequency(&spectrum, spectrum.default_min_frequency())
}

/// Evaluates the adder through the physical route: the bit count selects
/// an arena fraction, seeded runs measure the dominant oscillation
/// frequency, the calibration thresholds pick the output bin, and the
/// bin decodes back to binary. With `votes > 1` the runs use seeds
/// `seed + vote index` and the most common bin wins (ties to the lower
/// bin).
pub fn physical_full_add(
    input: AdderInput,
    calibration: &CalibrationTable,
    base: &RunConfig,
    map: &FractionMap,
    seed: u64,
    votes: u32,
) -> Result<PhysicalAddResult> {
    if votes == 0 {
        return Err(Error::InvalidArgument("votes must be >= 1".into()));
    }
    let fraction = map.fraction_for(input.bit_count())?;
    let records: Vec<VoteRecord> = (0..votes)
        .into_par_iter()
        .map(|v| {
            let run_seed = seed.wrapping_add(u64::from(v));
            let config = base.with_fraction(fraction).with_seed(run_seed);
            let series = run_experiment(&config)?;
            let dominant = flux_dominant_frequency(&series, config.warmup_steps)?;
            Ok(VoteRecord {
                seed: run_seed,
                fraction,
                frequency: dominant.frequency,
                magnitude: dominant.magnitude,
                bin: calibration.classify(dominant.frequency),
            })
        })
        .collect::<Result<_>>()?;

    let mut counts = [0usize; 4];
    for r in &records {
        counts[r.bin as usize] += 1;
    }
    let winner = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(bin, _)| bin as u8)
        .expect("four bins always present");
    Ok(PhysicalAddResult {
        output: decode_bin(winner)?,
        bin: winner,
        votes: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (X, Y, Cin, Cout, S) for all 8 rows in decimal order.
    pub(crate) const TRUTH_TABLE: [(u8, u8, u8, u8, u8); 8] = [
        (0, 0, 0, 0, 0),
        (0, 0, 1, 0, 1),
        (0, 1, 0, 0, 1),
        (0, 1, 1, 1, 0),
        (1, 0, 0, 0, 1),
        (1, 0, 1, 1, 0),
        (1, 1, 0, 1, 0),
        (1, 1, 1, 1, 1),
    ];

    #[test]
    fn encode_bit_count_examples() {
        assert_eq!(AdderInput::new(0, 0, 0).unwrap().bit_count(), 0);
        assert_eq!(AdderInput::new(1, 0, 1).unwrap().bit_count(), 2);
        assert_eq!(AdderInput::new(1, 1, 1).unwrap().bit_count(), 3);
    }

    #[test]
    fn non_bit_inputs_rejected() {
        assert!(AdderInput::new(2, 0, 0).is_err());
        assert!(AdderInput::new(0, 255, 0).is_err());
        assert!(AdderInput::new(0, 0, 9).is_err());
    }

    #[test]
    fn decode_bin_rows() {
        let rows = [(0u8, 0u8, 0u8), (1, 0, 1), (2, 1, 0), (3, 1, 1)];
        for (bin, cout, s) in rows {
            let out = decode_bin(bin).unwrap();
            assert_eq!((out.cout(), out.s()), (cout, s), "bin {bin}");
            assert_eq!(out.decimal(), bin);
        }
        assert!(decode_bin(4).is_err());
    }

    #[test]
    fn logical_full_add_matches_truth_table() {
        for (x, y, cin, cout, s) in TRUTH_TABLE {
            let out = logical_full_add(AdderInput::new(x, y, cin).unwrap());
            assert_eq!((out.cout(), out.s()), (cout, s), "input ({x}, {y}, {cin})");
        }
    }

    #[test]
    fn adder_identity_and_symmetry() {
        for input in AdderInput::all() {
            let out = logical_full_add(input);
            assert_eq!(2 * out.cout() + out.s(), input.x() + input.y() + input.cin());
            // Any permutation of the three inputs shares the output.
            let permuted = [
                AdderInput::new(input.y(), input.x(), input.cin()).unwrap(),
                AdderInput::new(input.cin(), input.y(), input.x()).unwrap(),
                AdderInput::new(input.x(), input.cin(), input.y()).unwrap(),
            ];
            for p in permuted {
                assert_eq!(logical_full_add(p), out);
            }
            // Composition identity: the decoded decimal equals the bit count.
            assert_eq!(out.decimal(), input.bit_count());
        }
    }

    #[test]
    fn bit_count_multiplicities() {
        let mut counts = [0usize; 4];
        for input in AdderInput::all() {
            counts[input.bit_count() as usize] += 1;
        }
        assert_eq!(counts, [1, 3, 3, 1]);
    }

    #[test]
    fn ripple_add_examples() {
        assert_eq!(ripple_add(0, 0, 4).unwrap(), 0);
        assert_eq!(ripple_add(7, 1, 3).unwrap(), 8);
        assert_eq!(ripple_add(0b1010, 0b0110, 4).unwrap(), 0b10000);
    }

    #[test]
    fn ripple_add_exhaustive_n4() {
        for a in 0u64..16 {
            for b in 0u64..16 {
                assert_eq!(ripple_add(a, b, 4).unwrap(), a + b, "{a} + {b}");
            }
        }
    }

    #[test]
    fn ripple_add_random_n8() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let a = rng.random_range(0u64..256);
            let b = rng.random_range(0u64..256);
            assert_eq!(ripple_add(a, b, 8).unwrap(), a + b);
        }
    }

    #[test]
    fn ripple_add_rejects_bad_widths_and_operands() {
        assert!(ripple_add(0, 0, 0).is_err());
        assert!(ripple_add(16, 0, 4).is_err());
        assert!(ripple_add(0, 999, 4).is_err());
    }

    #[test]
    fn fraction_map_default_pairs() {
        let map = FractionMap::default();
        assert_eq!(map.fraction_for(0).unwrap(), 1.0);
        assert_eq!(map.fraction_for(3).unwrap(), 0.25);
        assert!(map.fraction_for(4).is_err());
    }

    #[test]
    fn fraction_map_rejects_non_decreasing() {
        assert!(FractionMap::new([1.0, 0.75, 0.75, 0.25]).is_err());
        assert!(FractionMap::new([0.25, 0.5, 0.75, 1.0]).is_err());
        assert!(FractionMap::new([1.0, 0.75, 0.5, 0.0]).is_err());
    }

    #[test]
    fn calibration_midpoint_thresholds() {
        let map = FractionMap::default();
        let samples = [
            (1.0, 0.004),
            (1.0, 0.004),
            (0.75, 0.006),
            (0.75, 0.006),
            (0.5, 0.008),
            (0.5, 0.008),
            (0.25, 0.010),
            (0.25, 0.010),
        ];
        let table = CalibrationTable::calibrate(&samples, &map).unwrap();
        let expected = [0.005, 0.007, 0.009];
        for (t, e) in table.thresholds().iter().zip(expected) {
            assert!((t - e).abs() < 1e-15);
        }
        assert!(!table.low_confidence());
    }

    #[test]
    fn calibration_rejects_non_monotone_means() {
        let map = FractionMap::default();
        let samples = [
            (1.0, 0.004),
            (0.75, 0.006),
            (0.5, 0.005),
            (0.25, 0.010),
        ];
        assert!(matches!(
            CalibrationTable::calibrate(&samples, &map),
            Err(Error::CalibrationFailure { .. })
        ));
    }

    #[test]
    fn calibration_requires_all_fractions() {
        let map = FractionMap::default();
        let samples = [(1.0, 0.004), (0.75, 0.006), (0.5, 0.008)];
        assert!(matches!(
            CalibrationTable::calibrate(&samples, &map),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn single_run_bins_flag_low_confidence() {
        let map = FractionMap::default();
        let samples = [(1.0, 0.004), (0.75, 0.006), (0.5, 0.008), (0.25, 0.010)];
        let table = CalibrationTable::calibrate(&samples, &map).unwrap();
        assert!(table.low_confidence());
    }

    #[test]
    fn classify_thresholds() {
        let table =
            CalibrationTable::from_bin_means([0.004, 0.006, 0.008, 0.010], &FractionMap::default())
                .unwrap();
        assert_eq!(table.classify(0.003), 0);
        assert_eq!(table.classify(0.005), 0, "exact threshold goes to the lower bin");
        assert_eq!(table.classify(0.0051), 1);
        assert_eq!(table.classify(0.008), 2);
        assert_eq!(table.classify(99.0), 3);
        assert_eq!(table.classify(-1.0), 0);
    }

    #[test]
    fn classify_is_monotone() {
        let table =
            CalibrationTable::from_bin_means([0.004, 0.006, 0.008, 0.010], &FractionMap::default())
                .unwrap();
        let mut previous = 0u8;
        let mut f = 0.0;
        while f < 0.02 {
            let bin = table.classify(f);
            assert!(bin >= previous);
            previous = bin;
            f += 1e-4;
        }
    }

    #[test]
    fn calibration_csv_round_trip() {
        let table =
            CalibrationTable::from_bin_means([0.0041, 0.0062, 0.0083, 0.0104], &FractionMap::default())
                .unwrap();
        let text = table.to_csv_string();
        let parsed = CalibrationTable::parse_csv(&text).unwrap();
        assert_eq!(parsed.mean_frequencies(), table.mean_frequencies());
        assert_eq!(parsed.thresholds(), table.thresholds());
        for (a, b) in parsed.bins().iter().zip(table.bins()) {
            assert_eq!(a.fraction, b.fraction);
        }
    }

    #[test]
    fn calibration_csv_rejects_garbage() {
        assert!(CalibrationTable::parse_csv("").is_err());
        assert!(CalibrationTable::parse_csv("nonsense\n1,2,3\n").is_err());
        let missing_threshold = "bin,fraction,mean_frequency\n0,1,0.004\n1,0.75,0.006\n2,0.5,0.008\n3,0.25,0.01\nthreshold_index,frequency\n0,0.005\n1,0.007\n";
        assert!(CalibrationTable::parse_csv(missing_threshold).is_err());
        let bad_number = "bin,fraction,mean_frequency\n0,1,abc\n";
        assert!(matches!(
            CalibrationTable::parse_csv(bad_number),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
