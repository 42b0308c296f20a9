//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary, then applies the real symmetric Schur rotation that
//! annihilates it. Sweeps stop once the off-diagonal Frobenius mass drops
//! below `eig_tol · ‖A‖_F`.

use std::cmp::Ordering;

use super::matrix::{gauge_phase, ComplexMatrix, Tolerances, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub vectors: ComplexMatrix,
}

/// 2×2 unitary `G` (acting on indices p, q) with `(G† A G)_{pq} = 0` for the
/// Hermitian block `[[app, apq], [conj(apq), aqq]]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub pp: C64,
    pub pq: C64,
    pub qp: C64,
    pub qq: C64,
}

impl Rotation {
    pub(crate) fn annihilating(app: f64, aqq: f64, apq: C64) -> Rotation {
        let mag = apq.norm();
        let phase = apq / mag;
        let tau = (aqq - app) / (2.0 * mag);
        let t = if tau.abs() > 1e150 {
            0.5 / tau
        } else {
            let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
            sign / (tau.abs() + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        Rotation {
            pp: C64::new(c, 0.0),
            pq: C64::new(s, 0.0),
            qp: -phase.conj() * s,
            qq: phase.conj() * c,
        }
    }

    /// M ← M·G on columns p, q.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for r in 0..m.rows() {
            let x = m[(r, p)];
            let y = m[(r, q)];
            m[(r, p)] = x * self.pp + y * self.qp;
            m[(r, q)] = x * self.pq + y * self.qq;
        }
    }

    /// M ← G†·M on rows p, q.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for c in 0..m.cols() {
            let x = m[(p, c)];
            let y = m[(q, c)];
            m[(p, c)] = self.pp.conj() * x + self.qp.conj() * y;
            m[(q, c)] = self.pq.conj() * x + self.qq.conj() * y;
        }
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition `A = U·diag(λ)·U†` of a Hermitian matrix.
///
/// Eigenvalues come out descending. Each eigenvector is gauged so that its
/// first component of largest modulus is real non-negative; inside a cluster
/// of equal eigenvalues (gap ≤ `eig_tol · max(1, ‖A‖_F)`) vectors are ordered
/// lexicographically by their gauged components.
pub fn hermitian_eig(a: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = a.frobenius_norm();
    let defect = a.hermiticity_defect();
    if defect > tol.eq_tol * (1.0 + norm) {
        return Err(Error::NotHermitian { defect });
    }

    let n = a.rows();
    let mut work = a.hermitian_part();
    let mut vecs = ComplexMatrix::identity(n);
    let threshold = tol.eig_tol * norm;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&work) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = work[(p, q)];
                if apq == ZERO {
                    continue;
                }
                let rot = Rotation::annihilating(work[(p, p)].re, work[(q, q)].re, apq);
                rot.apply_right(&mut work, p, q);
                rot.apply_left_adjoint(&mut work, p, q);
                rot.apply_right(&mut vecs, p, q);
                work[(p, q)] = ZERO;
                work[(q, p)] = ZERO;
                work[(p, p)].im = 0.0;
                work[(q, q)].im = 0.0;
            }
        }
    }
    if !converged {
        let off = off_diagonal_mass(&work);
        if off > threshold {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_diagonal: off,
            });
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|i| {
            let mut v = vecs.column(i);
            let g = gauge_phase(&v);
            v.iter_mut().for_each(|z| *z *= g);
            (work[(i, i)].re, v)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    let cluster_gap = tol.eig_tol * norm.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end - 1].0 - pairs[end].0 <= cluster_gap {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|x, y| lexicographic_desc(&x.1, &y.1));
        }
        start = end;
    }

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let columns: Vec<Vec<C64>> = pairs.into_iter().map(|p| p.1).collect();
    Ok(HermitianEigen {
        eigenvalues,
        vectors: ComplexMatrix::from_columns(&columns)?,
    })
}

fn lexicographic_desc(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}
