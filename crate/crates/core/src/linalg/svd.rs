//! One-sided (Hestenes) Jacobi SVD for square complex matrices and the
//! polar decomposition built on it.

use super::complete::complete_to_unitary;
use super::eig::Rotation;
use super::matrix::{gauge_phase, inner, norm, ComplexMatrix, Tolerances, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;
/// Singular values below this fraction of the largest are treated as zero.
const RANK_CUTOFF: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    /// Left singular vectors W (columns).
    pub left: ComplexMatrix,
    /// Descending, non-negative.
    pub singular_values: Vec<f64>,
    /// Right singular vectors V (columns); M = W·Σ·V†.
    pub right: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polar {
    /// Hermitian positive semidefinite factor.
    pub h: ComplexMatrix,
    /// Unitary factor, M = h·u.
    pub u: ComplexMatrix,
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// SVD of a square matrix. Left singular vectors of (numerically) zero
/// singular values are completed deterministically; every left vector is
/// gauged so its first largest-modulus component is real non-negative, with
/// the matching right vector rotated by the same phase.
pub fn svd(m: &ComplexMatrix, tol: &Tolerances) -> Result<Svd> {
    check_square(m)?;
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let eps = f64::EPSILON * n as f64;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let cp = a.column(p);
                let cq = a.column(q);
                let alpha = inner(&cp, &cp).re;
                let beta = inner(&cq, &cq).re;
                let gamma = inner(&cp, &cq);
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut a, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (norm(&a.column(j)), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let sigma_max = order.first().map_or(0.0, |o| o.0);

    let mut left_cols = Vec::new();
    let mut singular_values = Vec::with_capacity(n);
    let mut right_cols = Vec::with_capacity(n);
    for &(s, j) in &order {
        right_cols.push(v.column(j));
        if sigma_max > 0.0 && s > RANK_CUTOFF * sigma_max {
            left_cols.push(a.column(j).into_iter().map(|z| z / s).collect::<Vec<_>>());
            singular_values.push(s);
        } else {
            singular_values.push(0.0);
        }
    }
    let mut left = complete_to_unitary(&left_cols, n, tol)?;
    let mut right = ComplexMatrix::from_columns(&right_cols)?;

    for k in 0..n {
        let g = gauge_phase(&left.column(k));
        for r in 0..n {
            left[(r, k)] *= g;
            right[(r, k)] *= g;
        }
    }

    Ok(Svd {
        left,
        singular_values,
        right,
    })
}

/// Polar decomposition M = h·u with h = WΣW† and u = WV†.
pub fn polar_decompose(m: &ComplexMatrix, tol: &Tolerances) -> Result<Polar> {
    let s = svd(m, tol)?;
    let sigma: Vec<C64> = s.singular_values.iter().map(|&x| C64::new(x, 0.0)).collect();
    let h = s
        .left
        .conjugate(&ComplexMatrix::from_diagonal(&sigma))
        .hermitian_part();
    let u = &s.left * &s.right.adjoint();
    Ok(Polar { h, u })
}
