//! Audio clips, STFT analysis and synthesis, and the spectrogram relabelings
//! used by the separation paths.
//!
//! The transform length equals the window length, so a 1411-sample window
//! gives 706 one-sided bins. Synthesis divides the overlap-added frames by
//! the summed squared window, which makes `istft(stft(x)) = x` for any hop up
//! to the window length, whether or not the window satisfies COLA.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    sample_rate: u32,
    channels: Vec<Vec<f64>>,
}

impl AudioClip {
    pub fn new(sample_rate: u32, channels: Vec<Vec<f64>>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        if channels.is_empty() || channels.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "expected 1 or 2 channels, got {}",
                channels.len()
            )));
        }
        if channels.iter().any(|c| c.len() != channels[0].len()) {
            return Err(Error::InvalidInput("channels differ in length".into()));
        }
        Ok(Self {
            sample_rate,
            channels,
        })
    }

    pub fn mono(sample_rate: u32, samples: Vec<f64>) -> Result<Self> {
        Self::new(sample_rate, vec![samples])
    }

    pub fn stereo(sample_rate: u32, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        Self::new(sample_rate, vec![left, right])
    }

    pub fn silent(sample_rate: u32, channels: usize, len: usize) -> Result<Self> {
        Self::new(sample_rate, vec![vec![0.0; len]; channels])
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn is_stereo(&self) -> bool {
        self.channels.len() == 2
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration_secs(&self) -> f64 {
        self.len() as f64 / self.sample_rate as f64
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        &self.channels[idx]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    /// All channels back to back.
    pub fn concatenated(&self) -> Vec<f64> {
        self.channels.concat()
    }

    pub fn energy(&self) -> f64 {
        self.channels.iter().flatten().map(|x| x * x).sum()
    }

    pub fn rms(&self) -> f64 {
        let count = self.len() * self.num_channels();
        if count == 0 {
            0.0
        } else {
            (self.energy() / count as f64).sqrt()
        }
    }

    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            sample_rate: self.sample_rate,
            channels: self
                .channels
                .iter()
                .map(|c| c.iter().map(|x| x * gain).collect())
                .collect(),
        }
    }

    /// Sample-wise sum. Fails on mismatched rate, channel count or length.
    pub fn mix(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            sample_rate: self.sample_rate,
            channels: self
                .channels
                .iter()
                .zip(&other.channels)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_channels() != other.num_channels() || self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: (self.num_channels(), self.len()),
                got: (other.num_channels(), other.len()),
            });
        }
        if self.sample_rate != other.sample_rate {
            return Err(Error::InvalidInput(format!(
                "sample rates differ: {} vs {}",
                self.sample_rate, other.sample_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Window {
    /// Periodic Hann, `½ − ½·cos(2πn/N)`.
    #[default]
    Hann,
}

impl Window {
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            Window::Hann => (0..len)
                .map(|n| 0.5 - 0.5 * (2.0 * PI * n as f64 / len as f64).cos())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StftConfig {
    pub window_length: usize,
    pub hop: usize,
    pub window: Window,
}

impl Default for StftConfig {
    /// 1411-point Hann window, hop 353 (≈75% overlap).
    fn default() -> Self {
        Self {
            window_length: 1411,
            hop: 353,
            window: Window::Hann,
        }
    }
}

impl StftConfig {
    pub fn new(window_length: usize, hop: usize) -> Result<Self> {
        let cfg = Self {
            window_length,
            hop,
            window: Window::Hann,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_length < 2 {
            return Err(Error::InvalidConfig(format!(
                "window length must be at least 2, got {}",
                self.window_length
            )));
        }
        if self.hop == 0 || self.hop > self.window_length {
            return Err(Error::InvalidConfig(format!(
                "hop must be in 1..={}, got {}",
                self.window_length, self.hop
            )));
        }
        Ok(())
    }

    /// One-sided bin count, `⌊N/2⌋ + 1`.
    pub fn bins(&self) -> usize {
        self.window_length / 2 + 1
    }

    /// Zero padding applied before the first and after the last sample.
    pub fn edge_padding(&self) -> usize {
        self.window_length - self.hop
    }

    pub fn frames_for(&self, len: usize) -> usize {
        (self.edge_padding() + len).div_ceil(self.hop).max(1)
    }
}

/// A bins × frames time–frequency matrix with its framing metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram<F> {
    pub entries: Matrix<F>,
    pub config: StftConfig,
    pub original_length: usize,
}

impl<F: Scalar> Spectrogram<F> {
    pub fn bins(&self) -> usize {
        self.entries.rows()
    }

    pub fn frames(&self) -> usize {
        self.entries.cols()
    }

    /// Same framing, new entries.
    pub fn with_entries<G: Scalar>(&self, entries: Matrix<G>) -> Result<Spectrogram<G>> {
        if entries.shape() != self.entries.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.shape(),
                got: entries.shape(),
            });
        }
        Ok(Spectrogram {
            entries,
            config: self.config,
            original_length: self.original_length,
        })
    }

    fn check_matches<G: Scalar>(&self, other: &Spectrogram<G>) -> Result<()> {
        if self.entries.shape() != other.entries.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.shape(),
                got: other.entries.shape(),
            });
        }
        if self.config != other.config || self.original_length != other.original_length {
            return Err(Error::InvalidInput("spectrogram framing differs".into()));
        }
        Ok(())
    }
}

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(len: usize) -> Plans {
    let mut planner = FftPlanner::new();
    Plans {
        forward: planner.plan_fft_forward(len),
        inverse: planner.plan_fft_inverse(len),
    }
}

/// STFT of one channel of samples.
pub fn stft_samples(samples: &[f64], config: &StftConfig) -> Result<Spectrogram<Complex64>> {
    config.validate()?;
    let win_len = config.window_length;
    let window = config.window.coefficients(win_len);
    let pad = config.edge_padding();
    let frames = config.frames_for(samples.len());
    let bins = config.bins();
    let fft = plans(win_len).forward;

    let sample_at = |idx: usize| -> f64 {
        idx.checked_sub(pad)
            .and_then(|i| samples.get(i))
            .copied()
            .unwrap_or(0.0)
    };

    let mut entries = Matrix::zeros(bins, frames);
    let mut buf = vec![Complex64::new(0.0, 0.0); win_len];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for t in 0..frames {
        let start = t * config.hop;
        for (n, slot) in buf.iter_mut().enumerate() {
            *slot = Complex64::new(window[n] * sample_at(start + n), 0.0);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (f, &v) in buf.iter().take(bins).enumerate() {
            entries[(f, t)] = v;
        }
    }
    Ok(Spectrogram {
        entries,
        config: *config,
        original_length: samples.len(),
    })
}

/// Inverse of [`stft_samples`] by weighted overlap-add.
pub fn istft_samples(spec: &Spectrogram<Complex64>) -> Result<Vec<f64>> {
    let config = spec.config;
    config.validate()?;
    let win_len = config.window_length;
    if spec.bins() != config.bins() {
        return Err(Error::DimensionMismatch {
            expected: (config.bins(), spec.frames()),
            got: spec.entries.shape(),
        });
    }
    let window = config.window.coefficients(win_len);
    let pad = config.edge_padding();
    let total = (spec.frames().saturating_sub(1)) * config.hop + win_len;
    let mut acc = vec![0.0; total.max(pad + spec.original_length)];
    let mut norm = vec![0.0; acc.len()];
    let ifft = plans(win_len).inverse;
    let mut buf = vec![Complex64::new(0.0, 0.0); win_len];
    let mut scratch = vec![Complex64::new(0.0, 0.0); ifft.get_inplace_scratch_len()];
    let bins = config.bins();
    let scale = 1.0 / win_len as f64;

    for t in 0..spec.frames() {
        for f in 0..bins {
            buf[f] = spec.entries[(f, t)];
        }
        for f in 1..(win_len - bins + 1) {
            buf[win_len - f] = spec.entries[(f, t)].conj();
        }
        ifft.process_with_scratch(&mut buf, &mut scratch);
        let start = t * config.hop;
        for n in 0..win_len {
            acc[start + n] += window[n] * buf[n].re * scale;
            norm[start + n] += window[n] * window[n];
        }
    }
    Ok((0..spec.original_length)
        .map(|i| {
            let d = norm[pad + i];
            if d > 1e-12 {
                acc[pad + i] / d
            } else {
                0.0
            }
        })
        .collect())
}

/// One-sided complex STFT of a mono clip.
pub fn stft(clip: &AudioClip, config: &StftConfig) -> Result<Spectrogram<Complex64>> {
    if clip.num_channels() != 1 {
        return Err(Error::InvalidInput(format!(
            "stft expects a mono clip, got {} channels",
            clip.num_channels()
        )));
    }
    stft_samples(clip.channel(0), config)
}

/// Mono clip from a spectrogram, trimmed to its original length.
pub fn istft(spec: &Spectrogram<Complex64>, sample_rate: u32) -> Result<AudioClip> {
    AudioClip::mono(sample_rate, istft_samples(spec)?)
}

/// `(L + R) / 2` sample-wise. Mono clips pass through unchanged.
pub fn downmix(clip: &AudioClip) -> AudioClip {
    if !clip.is_stereo() {
        return clip.clone();
    }
    let (l, r) = (clip.channel(0), clip.channel(1));
    let samples = l.iter().zip(r).map(|(a, b)| 0.5 * (a + b)).collect();
    AudioClip {
        sample_rate: clip.sample_rate,
        channels: vec![samples],
    }
}

/// Packs two complex spectrograms into one quaternion spectrogram `L + R·ĵ`.
pub fn mux_quaternion(
    left: &Spectrogram<Complex64>,
    right: &Spectrogram<Complex64>,
) -> Result<Spectrogram<Quaternion>> {
    left.check_matches(right)?;
    let l = &left.entries;
    let r = &right.entries;
    left.with_entries(Matrix::from_fn(l.rows(), l.cols(), |b, t| {
        Quaternion::from_complex_pair(l[(b, t)], r[(b, t)])
    }))
}

/// Inverse of [`mux_quaternion`].
pub fn demux_quaternion(
    spec: &Spectrogram<Quaternion>,
) -> (Spectrogram<Complex64>, Spectrogram<Complex64>) {
    let left = spec.entries.map(|q| q.to_complex_pair().0);
    let right = spec.entries.map(|q| q.to_complex_pair().1);
    let wrap = |entries| Spectrogram {
        entries,
        config: spec.config,
        original_length: spec.original_length,
    };
    (wrap(left), wrap(right))
}

/// Entrywise `|·|` of a complex spectrogram.
pub fn magnitude(spec: &Spectrogram<Complex64>) -> Spectrogram<f64> {
    Spectrogram {
        entries: spec.entries.map(|z| z.norm()),
        config: spec.config,
        original_length: spec.original_length,
    }
}

/// `m · exp(i·arg(p))` entrywise; entries where `p = 0` get phase zero.
pub fn apply_phase(
    magnitude: &Spectrogram<f64>,
    phase_source: &Spectrogram<Complex64>,
) -> Result<Spectrogram<Complex64>> {
    magnitude.check_matches(phase_source)?;
    if magnitude.entries.as_slice().iter().any(|&m| !(m >= 0.0)) {
        return Err(Error::InvalidInput("magnitudes must be nonnegative".into()));
    }
    let (m, p) = (&magnitude.entries, &phase_source.entries);
    let entries = Matrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (mag, z) = (m[(r, c)], p[(r, c)]);
        let radius = z.norm();
        if radius == 0.0 {
            Complex64::new(mag, 0.0)
        } else {
            z * (mag / radius)
        }
    });
    magnitude.with_entries(entries)
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

const DECIMATION_TAPS: usize = 129;
const KAISER_BETA: f64 = 8.0;

/// Linear-phase low-pass FIR (Kaiser window) with cutoff at half the
/// Nyquist frequency and unit DC gain.
pub fn halfband_lowpass() -> Vec<f64> {
    let m = (DECIMATION_TAPS - 1) as f64;
    let cutoff = 0.25; // cycles per sample
    let denom = bessel_i0(KAISER_BETA);
    let mut taps: Vec<f64> = (0..DECIMATION_TAPS)
        .map(|n| {
            let centred = n as f64 - m / 2.0;
            let sinc = if centred == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * PI * cutoff * centred).sin() / (PI * centred)
            };
            let ratio = 2.0 * n as f64 / m - 1.0;
            let kaiser = bessel_i0(KAISER_BETA * (1.0 - ratio * ratio).max(0.0).sqrt()) / denom;
            sinc * kaiser
        })
        .collect();
    let gain: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= gain);
    taps
}

/// Halves the sample rate: low-pass filter then keep every other sample.
pub fn downsample_by_2(clip: &AudioClip) -> Result<AudioClip> {
    if clip.sample_rate % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "cannot halve odd sample rate {}",
            clip.sample_rate
        )));
    }
    let taps = halfband_lowpass();
    let delay = (taps.len() - 1) / 2;
    let channels = clip
        .channels
        .iter()
        .map(|x| {
            (0..x.len().div_ceil(2))
                .map(|out| {
                    let centre = 2 * out;
                    taps.iter()
                        .enumerate()
                        .filter_map(|(k, &h)| {
                            (centre + delay)
                                .checked_sub(k)
                                .and_then(|i| x.get(i))
                                .map(|&s| h * s)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    AudioClip::new(clip.sample_rate / 2, channels)
}

/// Voice and accompaniment mixed at 0 dB: the voice is rescaled so both
/// stems have equal RMS, then the stems are summed.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDbMix {
    pub mixture: AudioClip,
    pub voice: AudioClip,
    pub accompaniment: AudioClip,
}

pub fn mix_at_0db(voice: &AudioClip, accompaniment: &AudioClip) -> Result<ZeroDbMix> {
    voice.check_compatible(accompaniment)?;
    let (rv, ra) = (voice.rms(), accompaniment.rms());
    if rv == 0.0 || ra == 0.0 {
        return Err(Error::InvalidInput("cannot balance a silent stem".into()));
    }
    let voice = voice.scaled(ra / rv);
    let mixture = voice.mix(accompaniment)?;
    Ok(ZeroDbMix {
        mixture,
        voice,
        accompaniment: accompaniment.clone(),
    })
}
