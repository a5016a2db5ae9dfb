//! Uniformly sampled traces, CSV I/O, synthetic scenarios and discrete derivatives.
//!
//! Synthetic scenarios are drawn from ChaCha8 (`rand_chacha`), which produces the
//! same stream on every platform for a given seed. Noise and wavelets use separate
//! ChaCha streams of the same seed so changing one never perturbs the other.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NOISE_STREAM: u64 = 1;
const WAVELET_STREAM: u64 = 2;

/// Relative tolerance on sample spacing accepted by the CSV reader.
pub const SPACING_TOL: f64 = 1e-9;

/// A real-valued trace sampled at `t0 + i * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    dt: f64,
    t0: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, dt: f64, t0: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Size {
                needed: 2,
                found: samples.len(),
            });
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sample interval must be positive and finite, got {dt}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidSignal(format!(
                "start time {t0} is not finite"
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(Signal { samples, dt, t0 })
    }

    /// Same grid as `self`, new values.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: samples.len(),
            });
        }
        Signal::new(samples, self.dt, self.t0)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Time of the last sample.
    pub fn end_time(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn rms(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() / self.len() as f64).sqrt()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidSignal(format!("unreadable header: {e}")))?
            .clone();
        if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "value" {
            return Err(Error::InvalidSignal(format!(
                "expected header `t,value`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record =
                record.map_err(|e| Error::InvalidSignal(format!("row {}: {e}", row + 1)))?;
            if record.len() != 2 {
                return Err(Error::InvalidSignal(format!(
                    "row {}: expected 2 fields, found {}",
                    row + 1,
                    record.len()
                )));
            }
            let parse = |field: &str, name: &str| {
                field.parse::<f64>().map_err(|_| {
                    Error::InvalidSignal(format!("row {}: bad {name} `{field}`", row + 1))
                })
            };
            times.push(parse(&record[0], "time")?);
            values.push(parse(&record[1], "value")?);
        }
        if times.len() < 2 {
            return Err(Error::Size {
                needed: 2,
                found: times.len(),
            });
        }
        let n = times.len();
        let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::InvalidSignal(
                "time stamps must strictly increase".into(),
            ));
        }
        for (i, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step <= 0.0 {
                return Err(Error::InvalidSignal(format!(
                    "time stamps not strictly increasing at row {}",
                    i + 2
                )));
            }
            if (step - dt).abs() > SPACING_TOL * dt {
                return Err(Error::InvalidSignal(format!(
                    "non-uniform spacing at row {}: step {step} vs mean {dt}",
                    i + 2
                )));
            }
        }
        Signal::new(values, dt, times[0])
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "t,value")?;
        for (i, v) in self.samples.iter().enumerate() {
            writeln!(writer, "{:.16e},{:.16e}", self.time(i), v)?;
        }
        writer.flush()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path)
            .map_err(|e| Error::InvalidSignal(format!("{}: {e}", path.display())))?;
        Signal::read_csv(BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        self.write_csv(BufWriter::new(File::create(path)?))
    }
}

/// Discrete first derivative on the signal's own grid.
///
/// Interior samples use `(s[i+1] - s[i-1]) / (2 dt)`, the two endpoints use
/// first-order one-sided differences.
pub fn central_difference(s: &Signal) -> Result<Signal> {
    let x = s.samples();
    let n = x.len();
    if n < 3 {
        return Err(Error::Size {
            needed: 3,
            found: n,
        });
    }
    let dt = s.dt();
    let mut out = vec![0.0; n];
    out[0] = (x[1] - x[0]) / dt;
    out[n - 1] = (x[n - 1] - x[n - 2]) / dt;
    for i in 1..n - 1 {
        out[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    }
    s.with_samples(out)
}

/// Parameters of a synthetic noise + wavelet-train scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub length: usize,
    pub seed: u64,
    /// Highest Fourier index retained in the noise.
    pub noise_n_max: usize,
    /// RMS of the generated noise.
    pub noise_amplitude: f64,
    pub wavelet_count: usize,
    /// Ricker width range `(min, max)`, in samples.
    pub wavelet_width_range: (f64, f64),
    pub dt: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            length: 403,
            seed: 0,
            noise_n_max: 21,
            noise_amplitude: 1.0,
            wavelet_count: 4,
            wavelet_width_range: (2.5, 3.5),
            dt: 1.0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(Error::Size {
                needed: 2,
                found: self.length,
            });
        }
        if 2 * self.noise_n_max >= self.length {
            return Err(Error::Aliasing {
                n_max: self.noise_n_max,
                length: self.length,
            });
        }
        if !(self.noise_amplitude.is_finite() && self.noise_amplitude >= 0.0) {
            return Err(Error::Parameter(format!(
                "noise_amplitude must be finite and >= 0, got {}",
                self.noise_amplitude
            )));
        }
        if self.wavelet_count == 0 {
            return Err(Error::Parameter("wavelet_count must be positive".into()));
        }
        let (lo, hi) = self.wavelet_width_range;
        if !(lo > 0.0 && hi.is_finite() && lo <= hi) {
            return Err(Error::Parameter(format!(
                "wavelet_width_range must satisfy 0 < min <= max, got ({lo}, {hi})"
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Parameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random member of the low-frequency Fourier subspace, scaled to the requested RMS.
pub fn synth_noise(spec: &SynthSpec) -> Result<Signal> {
    spec.validate()?;
    let mut rng = stream(spec.seed, NOISE_STREAM);
    let len = spec.length;
    let mut out = vec![0.0; len];
    for n in 0..=spec.noise_n_max {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let omega = 2.0 * std::f64::consts::PI * n as f64 / len as f64;
        for (i, v) in out.iter_mut().enumerate() {
            let phase = omega * i as f64;
            *v += a * phase.cos() + b * phase.sin();
        }
    }
    let rms = (out.iter().map(|v| v * v).sum::<f64>() / len as f64).sqrt();
    let scale = if rms > 0.0 {
        spec.noise_amplitude / rms
    } else {
        0.0
    };
    out.iter_mut().for_each(|v| *v *= scale);
    Signal::new(out, spec.dt, 0.0)
}

/// One Ricker pulse; `center` and `width` are in samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavelet {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

impl Wavelet {
    pub fn value(&self, i: f64) -> f64 {
        let tau = (i - self.center) / self.width;
        let tau2 = tau * tau;
        self.amplitude * (1.0 - tau2) * (-0.5 * tau2).exp()
    }
}

/// Superposition of Ricker wavelets sampled at `i = 0..length`.
pub fn ricker_trace(length: usize, dt: f64, wavelets: &[Wavelet]) -> Result<Signal> {
    let samples = (0..length)
        .map(|i| wavelets.iter().map(|w| w.value(i as f64)).sum())
        .collect();
    Signal::new(samples, dt, 0.0)
}

/// Draws the wavelets of a broadband scenario.
///
/// Centers are uniform over the trace, keeping three widths clear of either
/// end; amplitudes have random sign and magnitude in `[0.5, 1]`.
pub fn draw_wavelets(spec: &SynthSpec) -> Result<Vec<Wavelet>> {
    spec.validate()?;
    let mut rng = stream(spec.seed, WAVELET_STREAM);
    let (lo, hi) = spec.wavelet_width_range;
    let last = (spec.length - 1) as f64;
    let wavelets = (0..spec.wavelet_count)
        .map(|_| {
            let width = if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            };
            let margin = (3.0 * width).min(0.5 * last);
            let center = if last - margin > margin {
                rng.random_range(margin..=last - margin)
            } else {
                0.5 * last
            };
            let magnitude = rng.random_range(0.5..=1.0);
            let amplitude = if rng.random_bool(0.5) {
                magnitude
            } else {
                -magnitude
            };
            Wavelet {
                center,
                width,
                amplitude,
            }
        })
        .collect();
    Ok(wavelets)
}

/// Seeded Ricker wavelet train standing in for a broadband seismic trace.
///
/// With the default spec, under 20 % of the energy falls in Fourier bins
/// `|n| <= 21`.
pub fn synth_broadband(spec: &SynthSpec) -> Result<Signal> {
    let wavelets = draw_wavelets(spec)?;
    ricker_trace(spec.length, spec.dt, &wavelets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            Signal::new(vec![1.0], 1.0, 0.0),
            Err(Error::Size { .. })
        ));
        assert!(Signal::new(vec![1.0, 2.0], 0.0, 0.0).is_err());
        assert!(Signal::new(vec![1.0, f64::NAN], 1.0, 0.0).is_err());
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let s = Signal::new(vec![5.0; 4], 0.3, 0.0).unwrap();
        assert_eq!(central_difference(&s).unwrap().samples(), &[0.0; 4]);
    }

    #[test]
    fn derivative_of_ramp() {
        for &dt in &[0.01, 1.0, 7.5] {
            let k = -2.5;
            let s = Signal::new((0..20).map(|i| k * dt * i as f64).collect(), dt, 0.0).unwrap();
            let d = central_difference(&s).unwrap();
            for v in &d.samples()[1..19] {
                assert_abs_diff_eq!(*v, k, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn derivative_of_sine_matches_cosine() {
        let dt = 0.01;
        let s = Signal::new((0..700).map(|i| (i as f64 * dt).sin()).collect(), dt, 0.0).unwrap();
        let d = central_difference(&s).unwrap();
        let worst = (1..699)
            .map(|i| (d.samples()[i] - (i as f64 * dt).cos()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "worst deviation {worst}");
    }

    #[test]
    fn derivative_needs_three_samples() {
        let s = Signal::new(vec![1.0, 2.0], 1.0, 0.0).unwrap();
        assert!(matches!(
            central_difference(&s),
            Err(Error::Size {
                needed: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn zero_amplitude_noise_is_zero() {
        let spec = SynthSpec {
            noise_amplitude: 0.0,
            ..SynthSpec::default()
        };
        assert!(synth_noise(&spec)
            .unwrap()
            .samples()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn dc_only_noise_is_constant() {
        let spec = SynthSpec {
            noise_n_max: 0,
            seed: 11,
            ..SynthSpec::default()
        };
        let s = synth_noise(&spec).unwrap();
        let first = s.samples()[0];
        assert!(first.abs() > 0.0);
        assert!(s.samples().iter().all(|&v| (v - first).abs() < 1e-12));
        assert_abs_diff_eq!(s.rms(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn noise_rms_matches_request() {
        let spec = SynthSpec {
            noise_amplitude: 3.5,
            seed: 4,
            ..SynthSpec::default()
        };
        assert_abs_diff_eq!(synth_noise(&spec).unwrap().rms(), 3.5, epsilon = 1e-12);
    }

    #[test]
    fn aliasing_rejected() {
        let spec = SynthSpec {
            length: 40,
            noise_n_max: 20,
            ..SynthSpec::default()
        };
        assert!(matches!(synth_noise(&spec), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn single_wavelet_peaks_at_center() {
        let w = Wavelet {
            center: 50.0,
            width: 2.5,
            amplitude: 1.0,
        };
        let s = ricker_trace(101, 1.0, &[w]).unwrap();
        let x = s.samples();
        let argmax = (0..x.len())
            .max_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()))
            .unwrap();
        assert_eq!(argmax, 50);
        for k in 1..50 {
            assert_abs_diff_eq!(x[50 - k], x[50 + k], epsilon = 1e-15);
        }
    }

    #[test]
    fn wavelets_superpose() {
        let a = Wavelet {
            center: 20.0,
            width: 2.0,
            amplitude: 0.7,
        };
        let b = Wavelet { center: 80.0, ..a };
        let both = ricker_trace(101, 1.0, &[a, b]).unwrap();
        let sa = ricker_trace(101, 1.0, &[a]).unwrap();
        let sb = ricker_trace(101, 1.0, &[b]).unwrap();
        for i in 0..101 {
            assert_eq!(both.samples()[i], sa.samples()[i] + sb.samples()[i]);
        }
    }

    #[test]
    fn synthesis_is_reproducible() {
        let spec = SynthSpec {
            seed: 99,
            ..SynthSpec::default()
        };
        assert_eq!(synth_noise(&spec).unwrap(), synth_noise(&spec).unwrap());
        assert_eq!(
            synth_broadband(&spec).unwrap(),
            synth_broadband(&spec).unwrap()
        );
        let other = SynthSpec {
            seed: 100,
            ..spec.clone()
        };
        assert_ne!(
            synth_broadband(&spec).unwrap(),
            synth_broadband(&other).unwrap()
        );
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = Signal::new(vec![0.1, -1.0 / 3.0, 2e-300, 7.0], 0.004, 12.5).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = Signal::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.samples(), s.samples());
        assert_abs_diff_eq!(back.dt(), s.dt(), epsilon = 1e-15);
        assert_eq!(back.t0(), s.t0());
        assert_eq!(back.len(), 4);
    }

    #[test]
    fn csv_rejects_nonuniform_spacing() {
        let text = "t,value\n0,1\n1,2\n2.5,3\n3,4\n";
        let err = Signal::read_csv(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("non-uniform"), "{err}");
    }

    #[test]
    fn csv_rejects_bad_header() {
        assert!(Signal::read_csv("time,v\n0,1\n1,2\n".as_bytes()).is_err());
    }

    fn low_band_fraction(x: &[f64], n_max: usize) -> f64 {
        // direct O(L^2) DFT, independent of the FFT path
        let len = x.len();
        let power = |k: usize| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, v) in x.iter().enumerate() {
                let a = -2.0 * std::f64::consts::PI * ((k * i) % len) as f64 / len as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            re * re + im * im
        };
        let (mut low, mut total) = (0.0, 0.0);
        for k in 0..len {
            let p = power(k);
            total += p;
            if k.min(len - k) <= n_max {
                low += p;
            }
        }
        low / total
    }

    #[test]
    fn default_broadband_is_mostly_out_of_band() {
        let spec = SynthSpec::default();
        let sig = synth_broadband(&spec).unwrap();
        let frac = low_band_fraction(sig.samples(), spec.noise_n_max);
        assert!(frac < 0.2, "low-band energy fraction {frac}");
    }

    #[test]
    fn noise_is_confined_to_low_band() {
        let spec = SynthSpec {
            seed: 11,
            ..SynthSpec::default()
        };
        let noise = synth_noise(&spec).unwrap();
        let frac = low_band_fraction(noise.samples(), spec.noise_n_max);
        assert_abs_diff_eq!(frac, 1.0, epsilon = 1e-12);
    }
}
