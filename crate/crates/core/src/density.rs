//! Density matrices and their spectral decompositions.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, hermitian_eig, ComplexMatrix, Tolerances, C64};

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix the caller already knows to be a valid state.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix { mat }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    /// |ψ⟩⟨ψ| for a normalised ket.
    pub fn pure(ket: &[C64], tol: &Tolerances) -> Result<Self> {
        validate_density(&ComplexMatrix::outer(ket, ket), tol)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn transpose(&self) -> Self {
        DensityMatrix {
            mat: self.mat.transpose(),
        }
    }
}

/// Checks that `mat` is a density matrix.
///
/// Eigenvalues in (−eq_tol, 0) are clipped to zero and the spectrum is
/// renormalised; the returned matrix is then rebuilt from it.
pub fn validate_density(mat: &ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    let e = hermitian_eig(mat, tol)?;
    let tr = mat.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > tol.eq_tol {
        return Err(Error::NotUnitTrace { re: tr.re, im: tr.im });
    }
    let min = e.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol.eq_tol {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    if min >= 0.0 {
        return Ok(DensityMatrix {
            mat: mat.hermitian_part(),
        });
    }
    let p = normalized_spectrum(&e.eigenvalues, tol)?;
    let mat = e
        .vectors
        .conjugate(&ComplexMatrix::from_real_diagonal(&p))
        .hermitian_part();
    Ok(DensityMatrix { mat })
}

/// Clips negatives and eigenvalues at rounding level (≤ eig_tol) to zero,
/// then renormalises.
fn normalized_spectrum(eigenvalues: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let mut p: Vec<f64> = eigenvalues
        .iter()
        .map(|&x| if x <= tol.eig_tol { 0.0 } else { x })
        .collect();
    let s: f64 = p.iter().sum();
    if s <= 0.0 {
        return Err(Error::BadProbabilityVector("spectrum sums to zero".into()));
    }
    p.iter_mut().for_each(|x| *x /= s);
    Ok(p)
}

/// Eigenvalues `p_i` (probabilities) with a unitary frame whose i-th
/// column is the eigenvector |ψ_i⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    frame: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Validated constructor: probabilities must be non-negative (within
    /// `eq_tol`) and sum to one, the frame must be unitary.
    pub fn new(eigenvalues: Vec<f64>, frame: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !frame.is_square() || frame.rows() != eigenvalues.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues with a {}x{} frame",
                eigenvalues.len(),
                frame.rows(),
                frame.cols()
            )));
        }
        check_probabilities(&eigenvalues, tol)?;
        let defect = frame.unitarity_defect();
        if defect > tol.eq_tol {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(SpectralDecomposition { eigenvalues, frame })
    }

    pub(crate) fn new_unchecked(eigenvalues: Vec<f64>, frame: ComplexMatrix) -> Self {
        SpectralDecomposition { eigenvalues, frame }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn frame(&self) -> &ComplexMatrix {
        &self.frame
    }

    pub fn eigenvector(&self, i: usize) -> Vec<C64> {
        self.frame.column(i)
    }
}

pub(crate) fn check_probabilities(p: &[f64], tol: &Tolerances) -> Result<()> {
    if p.is_empty() {
        return Err(Error::BadProbabilityVector("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < -tol.eq_tol) {
        return Err(Error::BadProbabilityVector(format!("entry {x} is negative")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > tol.eq_tol {
        return Err(Error::BadProbabilityVector(format!("entries sum to {s}")));
    }
    Ok(())
}

/// Descending spectrum and gauged eigenvector frame of a density matrix.
/// Rounding-level negative eigenvalues are clipped and the spectrum is
/// renormalised to unit sum.
pub fn spectral_decompose(rho: &DensityMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let e = hermitian_eig(rho.matrix(), tol)?;
    Ok(SpectralDecomposition {
        eigenvalues: normalized_spectrum(&e.eigenvalues, tol)?,
        frame: e.vectors,
    })
}

/// U·diag(p)·U†.
pub fn reconstruct(sd: &SpectralDecomposition) -> DensityMatrix {
    let d = ComplexMatrix::from_real_diagonal(&sd.eigenvalues);
    DensityMatrix {
        mat: sd.frame.conjugate(&d).hermitian_part(),
    }
}

/// ‖ρ − U·diag(p)·U†‖_F.
pub fn reconstruction_residual(rho: &DensityMatrix, sd: &SpectralDecomposition) -> f64 {
    frobenius_distance(rho.matrix(), reconstruct(sd).matrix())
}
