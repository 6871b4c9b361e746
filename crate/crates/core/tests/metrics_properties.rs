mod common;

use common::*;
use proptest::prelude::*;
use qpcp::metrics::{aggregate, nsdr, sdr, ClipScores, SDR_CAP};
use qpcp::spectral::AudioClip;

fn clip(samples: Vec<f64>) -> AudioClip {
    AudioClip::mono(16000, samples).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sdr_ignores_positive_gain(seed in any::<u64>(), len in 2usize..400, alpha in 1e-3f64..1e3) {
        let mut rng = rng(seed);
        let est = clip(white_noise(&mut rng, len));
        let reference = clip(white_noise(&mut rng, len));
        let a = sdr(&est, &reference).unwrap();
        let b = sdr(&est.scaled(alpha), &reference).unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn nsdr_of_the_mixture_is_zero(seed in any::<u64>(), len in 2usize..400) {
        let mut rng = rng(seed);
        let mix = clip(white_noise(&mut rng, len));
        let reference = clip(white_noise(&mut rng, len));
        prop_assert_eq!(nsdr(&mix, &reference, &mix).unwrap(), 0.0);
    }

    #[test]
    fn identical_scores_aggregate_to_themselves(score in -50.0f64..50.0,
                                                lengths in prop::collection::vec(1usize..100_000, 1..8)) {
        let scores: Vec<ClipScores> = lengths
            .iter()
            .map(|&clip_length| ClipScores {
                sdr_voice: score,
                sdr_accomp: score,
                nsdr_voice: score,
                nsdr_accomp: score,
                clip_length,
            })
            .collect();
        let g = aggregate(&scores).unwrap();
        prop_assert!((g.gnsdr_voice - score).abs() <= 1e-12 * (1.0 + score.abs()));
        prop_assert!((g.gsdr_accomp - score).abs() <= 1e-12 * (1.0 + score.abs()));
    }

    #[test]
    fn sdr_stays_within_the_cap(seed in any::<u64>(), len in 1usize..50) {
        let mut rng = rng(seed);
        let est = clip(white_noise(&mut rng, len));
        let reference = clip(white_noise(&mut rng, len));
        let s = sdr(&est, &reference).unwrap();
        prop_assert!(s.is_finite() && s.abs() <= SDR_CAP);
    }
}

#[test]
fn stereo_channels_are_concatenated() {
    let reference = AudioClip::stereo(16000, vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
    let est = AudioClip::stereo(16000, vec![1.0, 0.0], vec![0.0, 0.0]).unwrap();
    // Projection gain 1/2 splits the estimate into equal target and error energy.
    assert!(sdr(&est, &reference).unwrap().abs() < 1e-12);
}

#[test]
fn clip_scores_from_stems() {
    let v = clip(vec![1.0, 0.0, 0.5, 0.0]);
    let a = clip(vec![0.0, 1.0, 0.0, -0.5]);
    let mix = v.mix(&a).unwrap();
    let s = ClipScores::compute(&v, &a, &v, &a, &mix).unwrap();
    assert_eq!(s.sdr_voice, SDR_CAP);
    assert!(s.nsdr_voice > 0.0 && s.nsdr_accomp > 0.0);
    assert_eq!(s.clip_length, 4);
    let short = clip(vec![1.0; 3]);
    assert!(ClipScores::compute(&short, &a, &v, &a, &mix).is_err());
}
