//! End-to-end singing voice separation.
//!
//! The low-rank part of the mixture spectrogram becomes the accompaniment and
//! the sparse part becomes the voice. Three paths are available:
//!
//! * [`SeparationMode::Real`] runs PCP on the magnitude spectrogram of the
//!   downmix and copies the mixture phase back onto both parts.
//! * [`SeparationMode::Complex`] runs PCP on the complex spectrogram of the
//!   downmix and inverts both parts directly.
//! * [`SeparationMode::Quaternion`] packs the left and right spectrograms into
//!   one quaternion spectrogram `L + R·ĵ`, so inter-channel phase takes part
//!   in the decomposition, and returns stereo stems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcp::{pcp_solve, PcpSolution, SolverConfig};
use crate::scalar::Scalar;
use crate::spectral::{
    apply_phase, demux_quaternion, downmix, istft, magnitude, mix_at_0db, mux_quaternion, stft,
    stft_samples, AudioClip, Spectrogram, StftConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparationMode {
    Real,
    #[default]
    Complex,
    Quaternion,
}

impl SeparationMode {
    pub fn name(self) -> &'static str {
        match self {
            SeparationMode::Real => "real",
            SeparationMode::Complex => "complex",
            SeparationMode::Quaternion => "quaternion",
        }
    }
}

impl fmt::Display for SeparationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeparationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" => Ok(SeparationMode::Real),
            "complex" => Ok(SeparationMode::Complex),
            "quaternion" => Ok(SeparationMode::Quaternion),
            other => Err(Error::InvalidConfig(format!("unknown mode '{other}'"))),
        }
    }
}

/// Solver outcome attached to a separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub rank: usize,
    pub nnz: usize,
    pub lambda: f64,
}

impl<F: Scalar> From<&PcpSolution<F>> for SolverReport {
    fn from(sol: &PcpSolution<F>) -> Self {
        Self {
            iterations: sol.iterations,
            converged: sol.converged,
            residual: sol.final_residual(),
            rank: sol.rank,
            nnz: sol.nnz,
            lambda: sol.lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationResult {
    /// From the low-rank part.
    pub accompaniment: AudioClip,
    /// From the sparse part.
    pub voice: AudioClip,
    pub report: SolverReport,
}

/// The signal that `mode` actually decomposes: the downmix for the real and
/// complex paths, the untouched stereo clip for the quaternion path.
pub fn processed_mixture(mixture: &AudioClip, mode: SeparationMode) -> AudioClip {
    match mode {
        SeparationMode::Quaternion => mixture.clone(),
        _ => downmix(mixture),
    }
}

pub fn separate(
    mixture: &AudioClip,
    mode: SeparationMode,
    solver: &SolverConfig,
    stft_cfg: &StftConfig,
) -> Result<SeparationResult> {
    solver.validate()?;
    stft_cfg.validate()?;
    if mixture.is_empty() {
        return Err(Error::EmptyInput("mixture"));
    }
    if mixture.channels().iter().flatten().any(|s| !s.is_finite()) {
        return Err(Error::InvalidInput("mixture has non-finite samples".into()));
    }
    match mode {
        SeparationMode::Real => separate_real(mixture, solver, stft_cfg),
        SeparationMode::Complex => separate_complex(mixture, solver, stft_cfg),
        SeparationMode::Quaternion => separate_quaternion(mixture, solver, stft_cfg),
    }
}

fn separate_real(mixture: &AudioClip, solver: &SolverConfig, cfg: &StftConfig) -> Result<SeparationResult> {
    let rate = mixture.sample_rate();
    let spec = stft(&downmix(mixture), cfg)?;
    let mag = magnitude(&spec);
    let sol = pcp_solve(&mag.entries, solver)?;
    // The real prox does not keep parts nonnegative.
    let rebuild = |part: &crate::matrix::Matrix<f64>| -> Result<AudioClip> {
        let clamped = mag.with_entries(part.map(|v| v.max(0.0)))?;
        istft(&apply_phase(&clamped, &spec)?, rate)
    };
    Ok(SeparationResult {
        accompaniment: rebuild(&sol.low_rank)?,
        voice: rebuild(&sol.sparse)?,
        report: SolverReport::from(&sol),
    })
}

fn separate_complex(
    mixture: &AudioClip,
    solver: &SolverConfig,
    cfg: &StftConfig,
) -> Result<SeparationResult> {
    let rate = mixture.sample_rate();
    let spec = stft(&downmix(mixture), cfg)?;
    let sol = pcp_solve(&spec.entries, solver)?;
    Ok(SeparationResult {
        accompaniment: istft(&spec.with_entries(sol.low_rank.clone())?, rate)?,
        voice: istft(&spec.with_entries(sol.sparse.clone())?, rate)?,
        report: SolverReport::from(&sol),
    })
}

fn separate_quaternion(
    mixture: &AudioClip,
    solver: &SolverConfig,
    cfg: &StftConfig,
) -> Result<SeparationResult> {
    if !mixture.is_stereo() {
        return Err(Error::ModeInput {
            channels: mixture.num_channels(),
        });
    }
    let rate = mixture.sample_rate();
    let left = stft_samples(mixture.channel(0), cfg)?;
    let right = stft_samples(mixture.channel(1), cfg)?;
    let spec = mux_quaternion(&left, &right)?;
    let sol = pcp_solve(&spec.entries, solver)?;
    let stereo = |part: Spectrogram<crate::Quaternion>| -> Result<AudioClip> {
        let (l, r) = demux_quaternion(&part);
        let l = istft(&l, rate)?.into_channels().remove(0);
        let r = istft(&r, rate)?.into_channels().remove(0);
        AudioClip::stereo(rate, l, r)
    };
    Ok(SeparationResult {
        accompaniment: stereo(spec.with_entries(sol.low_rank.clone())?)?,
        voice: stereo(spec.with_entries(sol.sparse.clone())?)?,
        report: SolverReport::from(&sol),
    })
}

/// A mixture with known stems.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticMix {
    pub mixture: AudioClip,
    pub accompaniment: AudioClip,
    pub voice: AudioClip,
}

/// Chord tones in Hz, one row per chord.
const CHORDS: [[f64; 3]; 4] = [
    [220.0, 277.18, 329.63],
    [246.94, 311.13, 369.99],
    [196.0, 246.94, 293.66],
    [220.0, 261.63, 329.63],
];
/// Each chord lasts this many hops.
const HOPS_PER_CHORD: usize = 2;
const CHIRP_SECS: f64 = 0.06;
const CHIRP_EVERY_SECS: f64 = 0.37;
const CHIRP_START_HZ: f64 = 1500.0;
const CHIRP_END_HZ: f64 = 4000.0;

/// Band-limited sawtooth chords, one loop period long.
fn chord_period(rate: f64, chord_len: usize) -> Vec<f64> {
    let nyquist = 0.45 * rate;
    let mut out = Vec::with_capacity(chord_len * CHORDS.len());
    for chord in &CHORDS {
        for n in 0..chord_len {
            let t = n as f64 / rate;
            let mut s = 0.0;
            for &f in chord {
                let mut h = 1;
                while h as f64 * f < nyquist {
                    s += (2.0 * PI * h as f64 * f * t).sin() / h as f64;
                    h += 1;
                }
            }
            out.push(s / 3.0);
        }
    }
    out
}

fn chirp_bursts(rate: f64, len: usize) -> Vec<f64> {
    let burst = (CHIRP_SECS * rate).round() as usize;
    let every = (CHIRP_EVERY_SECS * rate).round() as usize;
    let sweep = (CHIRP_END_HZ - CHIRP_START_HZ) / CHIRP_SECS;
    let mut out = vec![0.0; len];
    let mut start = every / 2;
    while start + burst <= len {
        for n in 0..burst {
            let t = n as f64 / rate;
            let env = 0.5 - 0.5 * (2.0 * PI * n as f64 / burst as f64).cos();
            let phase = 2.0 * PI * (CHIRP_START_HZ * t + 0.5 * sweep * t * t);
            out[start + n] = env * phase.sin();
        }
        start += every;
    }
    out
}

/// Synthetic test material: a loop of four harmonic-rich chords as the
/// accompaniment and short frequency sweeps as the voice, mixed at equal RMS.
///
/// Each chord lasts two hops of `stft_cfg`, so the loop period is a whole
/// number of hops and the loop's spectrogram columns repeat exactly. With two
/// channels the loop leans left and the sweeps lean right.
pub fn loop_and_chirp(
    sample_rate: u32,
    seconds: f64,
    channels: usize,
    stft_cfg: &StftConfig,
) -> Result<SyntheticMix> {
    stft_cfg.validate()?;
    if !(seconds > 0.0) {
        return Err(Error::InvalidInput("duration must be positive".into()));
    }
    let rate = sample_rate as f64;
    let len = (seconds * rate).round() as usize;
    let period = chord_period(rate, HOPS_PER_CHORD * stft_cfg.hop);
    let chords: Vec<f64> = period.iter().copied().cycle().take(len).collect();
    let chirps = chirp_bursts(rate, len);
    if chirps.iter().all(|&s| s == 0.0) {
        return Err(Error::InvalidInput("clip too short to hold a sweep".into()));
    }
    let (accompaniment, voice) = match channels {
        1 => (
            AudioClip::mono(sample_rate, chords)?,
            AudioClip::mono(sample_rate, chirps)?,
        ),
        2 => {
            let pan = |x: &[f64], g: f64| x.iter().map(|s| s * g).collect::<Vec<_>>();
            (
                AudioClip::stereo(sample_rate, pan(&chords, 0.8), pan(&chords, 0.6))?,
                AudioClip::stereo(sample_rate, pan(&chirps, 0.5), pan(&chirps, 0.87))?,
            )
        }
        n => return Err(Error::InvalidInput(format!("expected 1 or 2 channels, got {n}"))),
    };
    let mix = mix_at_0db(&voice, &accompaniment)?;
    Ok(SyntheticMix {
        mixture: mix.mixture,
        accompaniment: mix.accompaniment,
        voice: mix.voice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> StftConfig {
        StftConfig::new(256, 64).unwrap()
    }

    #[test]
    fn silence_in_silence_out() {
        let clip = AudioClip::silent(8000, 2, 3000).unwrap();
        for mode in [SeparationMode::Real, SeparationMode::Complex, SeparationMode::Quaternion] {
            let out = separate(&clip, mode, &SolverConfig::default(), &small_cfg()).unwrap();
            assert_eq!(out.voice.energy(), 0.0);
            assert_eq!(out.accompaniment.energy(), 0.0);
            assert_eq!(out.voice.len(), 3000);
            assert_eq!(out.report.iterations, 0);
        }
    }

    #[test]
    fn quaternion_mode_needs_stereo() {
        let clip = AudioClip::mono(8000, vec![0.1; 1000]).unwrap();
        let err = separate(&clip, SeparationMode::Quaternion, &SolverConfig::default(), &small_cfg());
        assert!(matches!(err, Err(Error::ModeInput { channels: 1 })));
    }

    #[test]
    fn output_shapes_follow_mode() {
        let mix = loop_and_chirp(8000, 1.0, 2, &small_cfg()).unwrap().mixture;
        let real = separate(&mix, SeparationMode::Real, &SolverConfig::default(), &small_cfg()).unwrap();
        assert_eq!(real.voice.num_channels(), 1);
        assert_eq!(real.voice.len(), mix.len());
        assert_eq!(real.accompaniment.sample_rate(), 8000);
        let quat =
            separate(&mix, SeparationMode::Quaternion, &SolverConfig::default(), &small_cfg()).unwrap();
        assert_eq!(quat.voice.num_channels(), 2);
        assert_eq!(quat.accompaniment.len(), mix.len());
    }

    #[test]
    fn synthetic_stems_are_balanced() {
        let mix = loop_and_chirp(8000, 1.0, 1, &small_cfg()).unwrap();
        let ratio = mix.voice.rms() / mix.accompaniment.rms();
        assert!((ratio - 1.0).abs() < 1e-12);
        let sum = mix.voice.mix(&mix.accompaniment).unwrap();
        assert_eq!(sum, mix.mixture);
        assert!(loop_and_chirp(8000, 0.01, 1, &small_cfg()).is_err());
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [SeparationMode::Real, SeparationMode::Complex, SeparationMode::Quaternion] {
            assert_eq!(m.name().parse::<SeparationMode>().unwrap(), m);
        }
        assert_eq!(SeparationMode::default(), SeparationMode::Complex);
    }
}
