use num_complex::Complex64;
use proptest::prelude::*;
use qcovmap::bloch::{
    bloch_compose, bloch_decompose, bloch_rotation, generator, haar_unitary, haar_unitary_with,
    purity_residual,
};
use qcovmap::linalg::{CMatrix, CVector};
use qcovmap::{BlochVector, DensityMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn haar_first_moment_matches_theory() {
    // E|U_11|² = 1/N and E|U_11|⁴ = 2/(N(N+1)) for Haar U(N)
    const SAMPLES: usize = 10_000;
    for n in [2usize, 3, 5] {
        let mut r = rng(42 + n as u64);
        let mean = (0..SAMPLES)
            .map(|_| haar_unitary_with(n, &mut r)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / SAMPLES as f64;
        let nf = n as f64;
        let var = 2.0 / (nf * (nf + 1.0)) - 1.0 / (nf * nf);
        let se = (var / SAMPLES as f64).sqrt();
        assert!(
            (mean - 1.0 / nf).abs() < 3.0 * se,
            "N={n}: mean {mean}, se {se}"
        );
    }
}

#[test]
fn haar_phases_are_uniform() {
    // a phase-biased sampler (missing diagonal correction) puts U_11 on the positive real axis
    let mut r = rng(5);
    let mean: Complex64 = (0..10_000)
        .map(|_| haar_unitary_with(3, &mut r)[(0, 0)])
        .sum::<Complex64>()
        / 10_000.0;
    // |E U_11| = 0; standard error of each component is sqrt(1/(2·3·10⁴))
    assert!(mean.norm() < 0.03, "{mean}");
}

#[test]
fn haar_is_deterministic_and_unitary() {
    for n in 2..=6 {
        let a = haar_unitary(n, 11).unwrap();
        assert_eq!(a, haar_unitary(n, 11).unwrap());
        assert_ne!(a, haar_unitary(n, 12).unwrap());
        let g = a.adjoint() * &a;
        assert!(max_diff(&g, &CMatrix::identity(n, n)) < 1e-12);
    }
}

#[test]
fn rotation_of_identity_is_identity() {
    let r = bloch_rotation(&CMatrix::identity(4, 4)).unwrap();
    assert!(max_diff(r.matrix(), &CMatrix::identity(16, 16)) < 1e-15);
}

#[test]
fn rotation_rejects_non_unitary() {
    let mut u = CMatrix::identity(3, 3);
    u[(0, 0)] = Complex64::new(1.1, 0.0);
    assert!(bloch_rotation(&u).is_err());
}

#[test]
fn sign_flip_rotation() {
    let u = CMatrix::from_diagonal(&CVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]));
    let r = bloch_rotation(&u).unwrap();
    let m = BlochVector::new(CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(1.2, 0.0),
            Complex64::new(0.3, 0.4),
            Complex64::new(0.3, -0.4),
            Complex64::new(0.8, 0.0),
        ],
    ))
    .unwrap();
    let out = r.apply(&m).unwrap();
    assert!((out.get(1, 2).unwrap() + m.get(1, 2).unwrap()).norm() < 1e-15);
    assert!((out.get(1, 1).unwrap() - m.get(1, 1).unwrap()).norm() < 1e-15);
}

#[test]
fn generators_are_traceless_and_adjoint_paired() {
    for n in 2..=5 {
        for i in 1..=n {
            for j in 1..=n {
                let a = generator(i, j, n).unwrap();
                assert!(a.trace().norm() < 1e-15);
                assert!(max_diff(&a.adjoint(), &generator(j, i, n).unwrap()) < 1e-15);
            }
        }
    }
}

fn pure_state(n: usize, seed: u64) -> DensityMatrix {
    DensityMatrix::random_pure(n, &mut rng(seed))
}

fn mixed_state(n: usize, seed: u64) -> DensityMatrix {
    DensityMatrix::random_mixed(n, &mut rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn round_trip(n in 2usize..=6, seed in any::<u64>(), pure in any::<bool>()) {
        let rho = if pure { pure_state(n, seed) } else { mixed_state(n, seed) };
        let back = bloch_compose(&bloch_decompose(&rho).unwrap());
        prop_assert!(max_diff(back.matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn rotation_commutes_with_decomposition(n in 2usize..=5, seed in any::<u64>()) {
        let u = haar_unitary(n, seed).unwrap();
        let rho = mixed_state(n, seed ^ 0x9e37);
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        let lhs = bloch_decompose(&rotated).unwrap();
        let rhs = bloch_rotation(&u).unwrap().apply(&bloch_decompose(&rho).unwrap()).unwrap();
        prop_assert!(max_diff(lhs.coefficients(), rhs.coefficients()) < 1e-10);
    }

    #[test]
    fn rotation_is_a_homomorphism(n in 2usize..=5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (u1, u2) = (haar_unitary(n, s1).unwrap(), haar_unitary(n, s2).unwrap());
        let r12 = bloch_rotation(&(&u2 * &u1)).unwrap();
        let composed = bloch_rotation(&u2).unwrap().compose(&bloch_rotation(&u1).unwrap()).unwrap();
        prop_assert!(max_diff(r12.matrix(), composed.matrix()) < 1e-10);
    }

    #[test]
    fn purity_residual_tracks_purity(n in 2usize..=6, seed in any::<u64>()) {
        let nf = n as f64;
        let pure = bloch_decompose(&pure_state(n, seed)).unwrap();
        prop_assert!(purity_residual(&pure).abs() < 1e-10);

        // residual = N²(Tr ρ² − 1), strictly negative for a mixed state
        let rho = mixed_state(n, seed);
        let p = (rho.matrix() * rho.matrix()).trace().re;
        let res = purity_residual(&bloch_decompose(&rho).unwrap());
        prop_assert!((res - nf * nf * (p - 1.0)).abs() < 1e-10);
        prop_assert!(p < 1.0 - 1e-9 && res < -1e-9);
    }
}
