mod common;

use common::*;
use proptest::prelude::*;
use qpcp::iso::{chi, chi_inverse, real_embed, real_unembed};
use qpcp::svd::{singular_values, spectral_norm, svd};
use qpcp::{Complex64, Matrix, Quaternion, Scalar};

fn check_svd<F: Scalar>(a: &Matrix<F>) -> Result<(), TestCaseError> {
    let dec = svd(a).unwrap();
    let scale = a.frobenius().max(1.0);
    prop_assert!((&dec.reconstruct() - a).frobenius() / scale < 1e-10);
    prop_assert!(orthonormality_error(&dec.u) < 1e-10);
    prop_assert!(orthonormality_error(&dec.v) < 1e-10);
    prop_assert!(dec.sigma.windows(2).all(|w| w[0] >= w[1]));
    prop_assert!(dec.sigma.iter().all(|&s| s >= 0.0));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_is_an_algebra_map(seed in any::<u64>(), m in 1usize..8, p in 1usize..8, n in 1usize..8) {
        let mut rng = rng(seed);
        let a = quat(&mut rng, m, p);
        let b = quat(&mut rng, p, n);
        let c = quat(&mut rng, m, p);
        prop_assert!(rel_diff(&chi(&a.matmul(&b).unwrap()), &chi(&a).matmul(&chi(&b)).unwrap()) < 1e-12);
        prop_assert_eq!(chi(&(&a + &c)), &chi(&a) + &chi(&c));
        prop_assert_eq!(chi(&a.adjoint()), chi(&a).adjoint());
        prop_assert_eq!(chi_inverse(&chi(&a)), a);
    }

    #[test]
    fn embeddings_preserve_inner_products(seed in any::<u64>(), m in 1usize..8, n in 1usize..8) {
        let mut rng = rng(seed);
        let a = quat(&mut rng, m, n);
        let b = quat(&mut rng, m, n);
        let ip = a.inner(&b).unwrap();
        let scale = a.frobenius() * b.frobenius();
        let via_real = real_embed(&a).inner(&real_embed(&b)).unwrap();
        let via_chi = 0.5 * chi(&a).inner(&chi(&b)).unwrap();
        prop_assert!((ip - via_real).abs() <= 1e-12 * scale);
        prop_assert!((ip - via_chi).abs() <= 1e-12 * scale);
        prop_assert_eq!(real_unembed(&real_embed(&a)), a);
    }

    #[test]
    fn svd_contract_every_field(seed in any::<u64>(), m in 1usize..12, n in 1usize..12) {
        let mut rng = rng(seed);
        check_svd(&matrix::<f64>(&mut rng, m, n))?;
        check_svd(&matrix::<Complex64>(&mut rng, m, n))?;
        check_svd(&matrix::<Quaternion>(&mut rng, m, n))?;
    }

    #[test]
    fn svd_contract_low_rank(seed in any::<u64>(), m in 2usize..14, n in 2usize..14, r in 1usize..4) {
        let mut rng = rng(seed);
        let a = low_rank::<Quaternion>(&mut rng, m, n, r.min(m).min(n));
        check_svd(&a)?;
        let dec = svd(&a).unwrap();
        prop_assert!(dec.rank(1e-9 * dec.sigma[0]) <= r);
    }

    #[test]
    fn quaternion_values_pair_up_in_chi(seed in any::<u64>(), m in 1usize..10, n in 1usize..10) {
        let mut rng = rng(seed);
        let a = quat(&mut rng, m, n);
        let s = svd(&a).unwrap().sigma;
        let sc = singular_values(&chi(&a)).unwrap();
        for (k, &v) in s.iter().enumerate() {
            prop_assert!((sc[2 * k] - v).abs() <= 1e-10 * s[0]);
            prop_assert!((sc[2 * k + 1] - v).abs() <= 1e-10 * s[0]);
        }
    }

    #[test]
    fn singular_values_agree_across_fields(seed in any::<u64>(), m in 1usize..10, n in 1usize..10) {
        let mut rng = rng(seed);
        let a = matrix::<f64>(&mut rng, m, n);
        let sr = singular_values(&a).unwrap();
        let sc = singular_values(&a.map(Complex64::from_real)).unwrap();
        let sq = singular_values(&a.map(Quaternion::from_real)).unwrap();
        for k in 0..sr.len() {
            prop_assert!((sr[k] - sc[k]).abs() <= 1e-12 * sr[0]);
            prop_assert!((sr[k] - sq[k]).abs() <= 1e-12 * sr[0]);
        }
    }

    #[test]
    fn unitary_invariance(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = rng(seed);
        let a = quat(&mut rng, n, n);
        let q = svd(&quat(&mut rng, n, n)).unwrap().u;
        let s1 = singular_values(&a).unwrap();
        let s2 = singular_values(&q.matmul(&a).unwrap()).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() <= 1e-10 * s1[0]);
        }
    }
}

#[test]
fn spectral_norm_paths_agree_on_a_wide_matrix() {
    let mut rng = rng(11);
    let a = low_rank::<Quaternion>(&mut rng, 600, 520, 3);
    let direct = singular_values(&a).unwrap()[0];
    let power = spectral_norm(&a).unwrap();
    assert!((direct - power).abs() / direct < 1e-6, "{direct} vs {power}");
}

#[test]
fn frobenius_identity_on_structured_inputs() {
    let mut rng = rng(12);
    let cases = [
        Matrix::<Quaternion>::identity(5),
        low_rank::<Quaternion>(&mut rng, 9, 7, 2),
        matrix::<Complex64>(&mut rng, 6, 4).map(Quaternion::from_complex),
    ];
    for a in &cases {
        let s: f64 = svd(a).unwrap().sigma.iter().map(|x| x * x).sum();
        assert!((s.sqrt() - a.frobenius()).abs() <= 1e-12 * a.frobenius());
    }
}
