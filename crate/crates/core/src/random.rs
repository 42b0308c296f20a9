//! Random matrices and states for tests, benchmarks and fixtures.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::linalg::{ComplexMatrix, C64};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// n×n matrix with i.i.d. standard complex Gaussian entries.
pub fn random_ginibre(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    random_ginibre(n, rng).hermitian_part()
}

/// Haar-distributed unitary (Gram–Schmidt of a Ginibre matrix with the
/// phase of each diagonal R entry removed).
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_ginibre(n, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = crate::linalg::inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let nv = crate::linalg::norm(&v);
        v.iter_mut().for_each(|z| *z /= nv);
        cols.push(v);
    }
    ComplexMatrix::from_columns(&cols).expect("square")
}

/// Random density matrix of the given rank (1 ≤ rank ≤ n): U·diag(p)·U†
/// with Haar U and p uniform on the simplex over `rank` entries.
pub fn random_density(n: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    assert!(rank >= 1 && rank <= n, "rank {rank} out of range for n = {n}");
    let mut p: Vec<f64> = (0..n)
        .map(|i| if i < rank { -rng.random::<f64>().max(f64::MIN_POSITIVE).ln() } else { 0.0 })
        .collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    let u = random_unitary(n, rng);
    let rho = u.conjugate(&ComplexMatrix::from_real_diagonal(&p)).hermitian_part();
    DensityMatrix::new_unchecked(rho)
}

/// Random pure state vector of unit norm.
pub fn random_ket(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let nv = crate::linalg::norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    v
}
