//! Separation quality: SDR, NSDR and the length-weighted averages over a set
//! of clips.
//!
//! SDR here projects the estimate onto the reference with a single gain,
//! `s = (⟨ŝ, s_ref⟩ / ‖s_ref‖²)·s_ref`, and reports
//! `10·log10(‖s‖² / ‖ŝ − s‖²)`. It equals the filter-projection SDR of
//! BSS Eval with a one-tap filter, so absolute values are not comparable with
//! numbers produced by BSS Eval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::AudioClip;

/// Infinite ratios are clamped to `±SDR_CAP` dB.
pub const SDR_CAP: f64 = 300.0;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cap(db: f64) -> f64 {
    if db.is_nan() {
        -SDR_CAP
    } else {
        db.clamp(-SDR_CAP, SDR_CAP)
    }
}

/// SDR of `estimate` against `reference` in dB. Channels are concatenated.
pub fn sdr(estimate: &AudioClip, reference: &AudioClip) -> Result<f64> {
    estimate.check_compatible(reference)?;
    let est = estimate.concatenated();
    let refr = reference.concatenated();
    let ref_energy = dot(&refr, &refr);
    if ref_energy == 0.0 {
        return Err(Error::SilentReference);
    }
    let gain = dot(&est, &refr) / ref_energy;
    let mut target = 0.0;
    let mut distortion = 0.0;
    for (e, r) in est.iter().zip(&refr) {
        let t = gain * r;
        target += t * t;
        distortion += (e - t) * (e - t);
    }
    if target == 0.0 {
        return Ok(-SDR_CAP);
    }
    if distortion == 0.0 {
        return Ok(SDR_CAP);
    }
    Ok(cap(10.0 * (target / distortion).log10()))
}

/// `sdr(estimate, reference) − sdr(mixture, reference)`.
pub fn nsdr(estimate: &AudioClip, reference: &AudioClip, mixture: &AudioClip) -> Result<f64> {
    Ok(sdr(estimate, reference)? - sdr(mixture, reference)?)
}

/// Share of the true stem's energy that ended up in the estimate:
/// `⟨estimate, truth⟩ / ‖truth‖²`.
pub fn energy_capture(estimate: &AudioClip, truth: &AudioClip) -> Result<f64> {
    estimate.check_compatible(truth)?;
    let t = truth.concatenated();
    let energy = dot(&t, &t);
    if energy == 0.0 {
        return Err(Error::SilentReference);
    }
    Ok(dot(&estimate.concatenated(), &t) / energy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipScores {
    pub sdr_voice: f64,
    pub sdr_accomp: f64,
    pub nsdr_voice: f64,
    pub nsdr_accomp: f64,
    /// Samples per channel.
    pub clip_length: usize,
}

impl ClipScores {
    pub fn compute(
        est_voice: &AudioClip,
        est_accomp: &AudioClip,
        ref_voice: &AudioClip,
        ref_accomp: &AudioClip,
        mixture: &AudioClip,
    ) -> Result<Self> {
        for clip in [est_accomp, ref_voice, ref_accomp, mixture] {
            est_voice.check_compatible(clip)?;
        }
        let sdr_voice = sdr(est_voice, ref_voice)?;
        let sdr_accomp = sdr(est_accomp, ref_accomp)?;
        Ok(Self {
            sdr_voice,
            sdr_accomp,
            nsdr_voice: sdr_voice - sdr(mixture, ref_voice)?,
            nsdr_accomp: sdr_accomp - sdr(mixture, ref_accomp)?,
            clip_length: est_voice.len(),
        })
    }
}

/// Length-weighted means of [`ClipScores`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalScores {
    pub gsdr_voice: f64,
    pub gsdr_accomp: f64,
    pub gnsdr_voice: f64,
    pub gnsdr_accomp: f64,
    pub total_length: usize,
}

pub fn aggregate(scores: &[ClipScores]) -> Result<GlobalScores> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("clip scores"));
    }
    let total: usize = scores.iter().map(|s| s.clip_length).sum();
    if total == 0 {
        return Err(Error::EmptyInput("clip lengths"));
    }
    let mean = |f: fn(&ClipScores) -> f64| {
        scores
            .iter()
            .map(|s| s.clip_length as f64 * f(s))
            .sum::<f64>()
            / total as f64
    };
    Ok(GlobalScores {
        gsdr_voice: mean(|s| s.sdr_voice),
        gsdr_accomp: mean(|s| s.sdr_accomp),
        gnsdr_voice: mean(|s| s.nsdr_voice),
        gnsdr_accomp: mean(|s| s.nsdr_accomp),
        total_length: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip(v: Vec<f64>) -> AudioClip {
        AudioClip::mono(100, v).unwrap()
    }

    fn scores(nsdr: f64, len: usize) -> ClipScores {
        ClipScores {
            sdr_voice: nsdr,
            sdr_accomp: -nsdr,
            nsdr_voice: nsdr,
            nsdr_accomp: 2.0 * nsdr,
            clip_length: len,
        }
    }

    #[test]
    fn sdr_caps() {
        let r = clip(vec![1.0, -2.0, 0.5, 3.0]);
        assert_eq!(sdr(&r, &r).unwrap(), SDR_CAP);
        assert_eq!(sdr(&r.scaled(2.0), &r).unwrap(), SDR_CAP);
        let ortho = clip(vec![2.0, 1.0, 0.0, 0.0]);
        assert_eq!(sdr(&ortho, &r).unwrap(), -SDR_CAP);
        assert_eq!(sdr(&clip(vec![0.0; 4]), &r).unwrap(), -SDR_CAP);
    }

    #[test]
    fn sdr_known_value() {
        // Estimate = reference + equal-energy orthogonal noise: 0 dB.
        let r = clip(vec![1.0, 0.0]);
        let e = clip(vec![1.0, 1.0]);
        assert!(sdr(&e, &r).unwrap().abs() < 1e-12);
        // Noise at a tenth of the energy: 10 dB.
        let e = clip(vec![1.0, 0.1f64.sqrt()]);
        assert!((sdr(&e, &r).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn sdr_errors() {
        let r = clip(vec![0.0; 3]);
        assert!(matches!(sdr(&r, &r), Err(Error::SilentReference)));
        let a = clip(vec![1.0; 3]);
        let b = clip(vec![1.0; 4]);
        assert!(sdr(&a, &b).is_err());
    }

    #[test]
    fn nsdr_of_mixture_is_zero() {
        let r = clip(vec![1.0, 0.5, -0.2]);
        let m = clip(vec![0.7, 0.9, 0.1]);
        assert_eq!(nsdr(&m, &r, &m).unwrap(), 0.0);
        assert!(nsdr(&r, &r, &m).unwrap() > 0.0);
    }

    #[test]
    fn aggregate_examples() {
        let one = aggregate(&[scores(1.5, 10)]).unwrap();
        assert_eq!(one.gnsdr_voice, 1.5);
        assert_eq!(one.gsdr_accomp, -1.5);
        let equal = aggregate(&[scores(2.0, 5), scores(4.0, 5)]).unwrap();
        assert!((equal.gnsdr_voice - 3.0).abs() < 1e-15);
        let weighted = aggregate(&[scores(0.0, 1), scores(4.0, 3)]).unwrap();
        assert!((weighted.gnsdr_voice - 3.0).abs() < 1e-15);
        assert!((weighted.gnsdr_accomp - 6.0).abs() < 1e-15);
        assert_eq!(weighted.total_length, 4);
        assert!(matches!(aggregate(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn capture_ratio() {
        let t = clip(vec![1.0, 2.0]);
        assert_eq!(energy_capture(&t, &t).unwrap(), 1.0);
        assert_eq!(energy_capture(&t.scaled(0.25), &t).unwrap(), 0.25);
    }
}
