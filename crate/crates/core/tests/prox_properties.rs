mod common;

use common::*;
use proptest::prelude::*;
use qpcp::iso::chi;
use qpcp::prox::{prox_l1, prox_trace, prox_trace_ranked, trace_norm};
use qpcp::svd::singular_values;
use qpcp::{Complex64, Matrix, Quaternion, Scalar};

fn nonexpansive<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>, lambda: f64) -> Result<(), TestCaseError> {
    let d = (a - b).frobenius();
    let l1 = (&prox_l1(a, lambda) - &prox_l1(b, lambda)).frobenius();
    let tr = (&prox_trace(a, lambda).unwrap() - &prox_trace(b, lambda).unwrap()).frobenius();
    prop_assert!(l1 <= d * (1.0 + 1e-12) + 1e-12);
    prop_assert!(tr <= d * (1.0 + 1e-10) + 1e-10);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prox_operators_are_nonexpansive(seed in any::<u64>(), m in 1usize..7, n in 1usize..7,
                                       lambda in 0.01f64..3.0) {
        let mut rng = rng(seed);
        nonexpansive(&matrix::<f64>(&mut rng, m, n), &matrix::<f64>(&mut rng, m, n), lambda)?;
        nonexpansive(&matrix::<Complex64>(&mut rng, m, n), &matrix::<Complex64>(&mut rng, m, n), lambda)?;
        nonexpansive(&quat(&mut rng, m, n), &quat(&mut rng, m, n), lambda)?;
    }

    #[test]
    fn l1_prox_entrywise_shape(seed in any::<u64>(), m in 1usize..7, n in 1usize..7, lambda in 0.01f64..3.0) {
        let mut rng = rng(seed);
        let z = quat(&mut rng, m, n);
        let p = prox_l1(&z, lambda);
        for (zi, pi) in z.as_slice().iter().zip(p.as_slice()) {
            let mag = zi.magnitude();
            if mag <= lambda {
                prop_assert_eq!(*pi, Quaternion::ZERO);
            } else {
                // same direction, magnitude reduced by exactly lambda
                prop_assert!((pi.magnitude() - (mag - lambda)).abs() < 1e-12 * mag);
                prop_assert!((*pi - zi.scale(1.0 - lambda / mag)).magnitude() < 1e-12 * mag);
            }
        }
    }

    #[test]
    fn trace_prox_shrinks_singular_values(seed in any::<u64>(), m in 1usize..8, n in 1usize..8,
                                          frac in 0.0f64..1.2) {
        let mut rng = rng(seed);
        let z = quat(&mut rng, m, n);
        let s = singular_values(&z).unwrap();
        let lambda = frac * s[0];
        let (p, rank) = prox_trace_ranked(&z, lambda).unwrap();
        let sp = singular_values(&p).unwrap();
        let expected: Vec<f64> = s.iter().map(|x| (x - lambda).max(0.0)).collect();
        for (got, want) in sp.iter().zip(&expected) {
            prop_assert!((got - want).abs() <= 1e-10 * s[0]);
        }
        prop_assert_eq!(rank, expected.iter().filter(|&&x| x > 0.0).count());
    }

    #[test]
    fn prox_commutes_with_field_embedding(seed in any::<u64>(), m in 1usize..7, n in 1usize..7,
                                          lambda in 0.01f64..2.0) {
        let mut rng = rng(seed);
        let c = matrix::<Complex64>(&mut rng, m, n);
        let lifted = c.map(Quaternion::from_complex);
        let lq = prox_l1(&lifted, lambda);
        let lc = prox_l1(&c, lambda).map(Quaternion::from_complex);
        prop_assert!((&lq - &lc).max_abs() <= 1e-14 * c.max_abs());
        let tq = prox_trace(&lifted, lambda).unwrap();
        let tc = prox_trace(&c, lambda).unwrap().map(Quaternion::from_complex);
        prop_assert!((&tq - &tc).frobenius() <= 1e-10 * c.frobenius());

        let r = matrix::<f64>(&mut rng, m, n);
        let tr = prox_trace(&r, lambda).unwrap().map(Complex64::from_real);
        let tc = prox_trace(&r.map(Complex64::from_real), lambda).unwrap();
        prop_assert!((&tc - &tr).frobenius() <= 1e-10 * r.frobenius());
    }

    #[test]
    fn trace_norm_via_adjoint(seed in any::<u64>(), m in 1usize..8, n in 1usize..8) {
        let mut rng = rng(seed);
        let a = quat(&mut rng, m, n);
        let direct = trace_norm(&a).unwrap();
        let via_chi = 0.5 * trace_norm(&chi(&a)).unwrap();
        prop_assert!((direct - via_chi).abs() <= 1e-12 * direct);
    }
}

#[test]
fn real_l1_prox_is_soft_thresholding() {
    let z = Matrix::new(1, 5, vec![-3.0, -0.5, 0.0, 0.7, 2.0]).unwrap();
    let p = prox_l1(&z, 1.0);
    assert_eq!(p.as_slice(), &[-2.0, 0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn zero_threshold_is_identity() {
    let mut rng = rng(21);
    let z = quat(&mut rng, 5, 4);
    assert_eq!(prox_l1(&z, 0.0), z);
    assert!(rel_diff(&prox_trace(&z, 0.0).unwrap(), &z) < 1e-13);
}
