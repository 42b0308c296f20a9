use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kraus_core::linalg::{frobenius_distance, hermitian_eig, kron, partial_trace_ancilla, polar_decompose, svd};
use kraus_core::random::{random_density, random_ginibre, random_hermitian, random_unitary};
use kraus_core::{apply_channel, connect, mix_kraus, verify_kraus, ComplexMatrix, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), n in 1usize..=8) {
        let a = random_hermitian(n, &mut rng(seed));
        let e = hermitian_eig(&a, &tol()).unwrap();
        let back = e.vectors.conjugate(&ComplexMatrix::from_real_diagonal(&e.eigenvalues));
        prop_assert!(frobenius_distance(&back, &a) <= 1e-10 * a.frobenius_norm().max(1.0));
        prop_assert!(e.vectors.unitarity_defect() <= 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eig_is_deterministic(seed in any::<u64>(), n in 1usize..=6) {
        let a = random_hermitian(n, &mut rng(seed));
        prop_assert_eq!(hermitian_eig(&a, &tol()).unwrap(), hermitian_eig(&a, &tol()).unwrap());
    }

    #[test]
    fn svd_and_polar_reconstruct(seed in any::<u64>(), n in 1usize..=8, rank in 0usize..=8) {
        let mut r = rng(seed);
        let rank = rank.min(n);
        // rank-deficient product G·P·G
        let g = random_ginibre(n, &mut r);
        let p = ComplexMatrix::from_real_diagonal(&(0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect::<Vec<_>>());
        let m = &(&g * &p) * &random_ginibre(n, &mut r);
        let scale = m.frobenius_norm().max(1.0);

        let s = svd(&m, &tol()).unwrap();
        let sigma = ComplexMatrix::from_real_diagonal(&s.singular_values);
        let back = &(&s.left * &sigma) * &s.right.adjoint();
        prop_assert!(frobenius_distance(&back, &m) <= 1e-10 * scale);
        prop_assert!(s.left.unitarity_defect() <= 1e-10);
        prop_assert!(s.right.unitarity_defect() <= 1e-10);

        let pd = polar_decompose(&m, &tol()).unwrap();
        prop_assert!(frobenius_distance(&(&pd.h * &pd.u), &m) <= 1e-10 * scale);
        prop_assert!(pd.u.unitarity_defect() <= 1e-10);
        prop_assert!(pd.h.hermiticity_defect() <= 1e-12 * scale);
        let min = hermitian_eig(&pd.h, &tol()).unwrap().eigenvalues.last().copied().unwrap();
        prop_assert!(min >= -1e-10 * scale);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=4) {
        let mut r = rng(seed);
        let x = random_ginibre(n * k, &mut r);
        let pt = partial_trace_ancilla(&x, n, k).unwrap();
        prop_assert!((pt.trace() - x.trace()).norm() <= 1e-12 * x.frobenius_norm().max(1.0));
        let a = random_density(n, n, &mut r);
        let b = random_density(k, k, &mut r);
        let pt = partial_trace_ancilla(&kron(a.matrix(), b.matrix()), n, k).unwrap();
        prop_assert!(frobenius_distance(&pt, a.matrix()) <= 1e-13);
    }

    #[test]
    fn connect_reaches_target(seed in any::<u64>(), n in 2usize..=6, ra in 1usize..=6, rb in 1usize..=6) {
        let mut r = rng(seed);
        let a = random_density(n, ra.min(n), &mut r);
        let b = random_density(n, rb.min(n), &mut r);
        let ks = connect(&a, &b, &tol()).unwrap();
        prop_assert_eq!(ks.len(), n);
        let rep = verify_kraus(&ks, &a, &b, &tol());
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn connect_output_fixed_on_same_eigenbasis(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let a = random_density(n, n, &mut r);
        let b = random_density(n, n, &mut r);
        let ks = connect(&a, &b, &tol()).unwrap();
        let sd = kraus_core::spectral_decompose(&a, &tol()).unwrap();
        let q = random_density(n, n, &mut r);
        let p = kraus_core::spectral_decompose(&q, &tol()).unwrap();
        let same_basis = sd.frame().conjugate(&ComplexMatrix::from_real_diagonal(p.eigenvalues()));
        let rho = kraus_core::validate_density(&same_basis, &tol()).unwrap();
        let out = apply_channel(&ks, &rho, &tol()).unwrap();
        prop_assert!(frobenius_distance(out.matrix(), b.matrix()) <= 1e-10);
    }

    #[test]
    fn mixing_preserves_channel(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let a = random_density(n, n, &mut r);
        let b = random_density(n, n, &mut r);
        let ks = connect(&a, &b, &tol()).unwrap();
        let mixed = mix_kraus(&ks, &random_unitary(n, &mut r), &tol()).unwrap();
        prop_assert!(mixed.completeness_defect() <= 1e-10);
        let x = random_density(n, n, &mut r);
        prop_assert!(frobenius_distance(&ks.act(x.matrix()), &mixed.act(x.matrix())) <= 1e-10);
    }
}
