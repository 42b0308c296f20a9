//! System⊗ancilla unitaries reproducing an open-system evolution.
//!
//! The combined index is system-major, (i, j) ↦ i·K + j, and the system
//! factor is written in the eigenbasis {|ψ_i(0)⟩} of the initial state. The
//! columns (k, 0) are fixed by the Kraus operators,
//! `U_{(i,j),(k,0)} = ⟨ψ_i(0)|M_j|ψ_k(0)⟩`; Σ_j M_j†M_j = I makes them
//! orthonormal, and the remaining columns come from deterministic
//! completion.

use serde::Serialize;

use crate::density::{DensityMatrix, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kraus::KrausSet;
use crate::linalg::{
    complete_to_unitary, frobenius_distance, gram_defect, kron, partial_trace_ancilla, ComplexMatrix, Tolerances,
    C64, I, ONE,
};
use crate::trajectory::KrausTrajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Eigenbasis of ρ(0) on the system factor.
    Eigen,
    /// Computational basis on the system factor.
    Computational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilationUnitary {
    system_dim: usize,
    ancilla_dim: usize,
    unitary: ComplexMatrix,
    /// U(0), the eigenframe of ρ(0).
    frame: ComplexMatrix,
}

impl DilationUnitary {
    /// Assembles a dilation from parts, e.g. for negative controls.
    pub fn from_parts(system_dim: usize, ancilla_dim: usize, unitary: ComplexMatrix, frame: ComplexMatrix) -> Result<Self> {
        let d = system_dim * ancilla_dim;
        if unitary.rows() != d || unitary.cols() != d || frame.rows() != system_dim || frame.cols() != system_dim {
            return Err(Error::DimensionMismatch(format!(
                "dilation of N={system_dim}, K={ancilla_dim} needs a {d}x{d} unitary and a {system_dim}x{system_dim} frame"
            )));
        }
        Ok(DilationUnitary {
            system_dim,
            ancilla_dim,
            unitary,
            frame,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    /// U_sa with the system factor in the ρ(0) eigenbasis.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn frame(&self) -> &ComplexMatrix {
        &self.frame
    }

    pub fn basis_note(&self) -> &'static str {
        "system factor expressed in eigenbasis of rho(0)"
    }

    /// U_sa in the requested basis; the computational form is
    /// (U(0) ⊗ I)·U_sa·(U(0) ⊗ I)†.
    pub fn in_basis(&self, basis: Basis) -> ComplexMatrix {
        match basis {
            Basis::Eigen => self.unitary.clone(),
            Basis::Computational => {
                let w = kron(&self.frame, &ComplexMatrix::identity(self.ancilla_dim));
                w.conjugate(&self.unitary)
            }
        }
    }

    /// Index of the combined basis vector |i⟩ ⊗ |j_a⟩.
    pub fn index(&self, system: usize, ancilla: usize) -> usize {
        system * self.ancilla_dim + ancilla
    }
}

/// Builds U_sa for a complete Kraus set.
pub fn build_dilation(ks: &KrausSet, sd0: &SpectralDecomposition, tol: &Tolerances) -> Result<DilationUnitary> {
    let n = ks.dim();
    if sd0.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n}-dimensional Kraus set with a {}-dimensional eigenbasis",
            sd0.dim()
        )));
    }
    let defect = ks.completeness_defect();
    if defect > tol.eq_tol {
        return Err(Error::CompletenessDefect { defect });
    }
    let k = ks.len();
    let d = n * k;
    let frame = sd0.frame();
    let local: Vec<ComplexMatrix> = ks
        .ops()
        .iter()
        .map(|m| &(&frame.adjoint() * m) * frame)
        .collect();

    let constrained: Vec<Vec<C64>> = (0..n)
        .map(|col| {
            let mut v = vec![C64::new(0.0, 0.0); d];
            for i in 0..n {
                for (j, m) in local.iter().enumerate() {
                    v[i * k + j] = m[(i, col)];
                }
            }
            v
        })
        .collect();
    let completed = complete_to_unitary(&constrained, d, tol)?;

    let mut unitary = ComplexMatrix::zeros(d, d);
    let mut free = n;
    for (s, column) in constrained.iter().enumerate() {
        for a in 0..k {
            let target = s * k + a;
            if a == 0 {
                unitary.set_column(target, column);
            } else {
                unitary.set_column(target, &completed.column(free));
                free += 1;
            }
        }
    }
    DilationUnitary::from_parts(n, k, unitary, frame.clone())
}

/// Gram defect of the N constrained columns (k, 0).
pub fn constrained_gram_defect(du: &DilationUnitary) -> f64 {
    let cols: Vec<Vec<C64>> = (0..du.system_dim)
        .map(|s| du.unitary.column(du.index(s, 0)))
        .collect();
    gram_defect(&cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationReport {
    pub unitarity_defect: f64,
    pub recovery_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks unitarity and tr_a[U·(ρ̃(0) ⊗ |0⟩⟨0|)·U†] = ρ̃(t), with ρ̃ the
/// state in the ρ(0) eigenbasis.
pub fn verify_dilation(
    du: &DilationUnitary,
    rho0: &DensityMatrix,
    rho_t: &DensityMatrix,
    tol: &Tolerances,
) -> DilationReport {
    let unitarity_defect = du.unitary.unitarity_defect();
    let recovery_defect = if rho0.dim() == du.system_dim && rho_t.dim() == du.system_dim {
        let f = &du.frame;
        let r0 = &(&f.adjoint() * rho0.matrix()) * f;
        let rt = &(&f.adjoint() * rho_t.matrix()) * f;
        let mut anc = ComplexMatrix::zeros(du.ancilla_dim, du.ancilla_dim);
        anc[(0, 0)] = ONE;
        let evolved = du.unitary.conjugate(&kron(&r0, &anc));
        partial_trace_ancilla(&evolved, du.system_dim, du.ancilla_dim)
            .map(|x| frobenius_distance(&x, &rt))
            .unwrap_or(f64::INFINITY)
    } else {
        f64::INFINITY
    };
    DilationReport {
        unitarity_defect,
        recovery_defect,
        tolerance: tol.eq_tol,
        pass: unitarity_defect <= tol.eq_tol && recovery_defect <= tol.eq_tol,
    }
}

/// One dilation per sample of a Kraus trajectory.
pub fn dilation_trajectory(
    kt: &KrausTrajectory,
    sd0: &SpectralDecomposition,
    tol: &Tolerances,
    exec: Exec,
) -> Result<Vec<DilationUnitary>> {
    exec.try_map(kt.sets(), |ks| build_dilation(ks, sd0, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSample {
    pub time: f64,
    /// (H + H†)/2.
    pub hamiltonian: ComplexMatrix,
    /// ‖H − (H + H†)/2‖_F before Hermitisation.
    pub hermitization_defect: f64,
}

/// Forward-difference H(t_k) = i·(U(t_{k+1}) − U(t_k))/Δt_k·U(t_k)†, one per
/// interval.
pub fn hamiltonian_trajectory(dus: &[DilationUnitary], times: &[f64]) -> Result<Vec<HamiltonianSample>> {
    if dus.len() < 2 || times.len() < 2 {
        return Err(Error::TooFewSamples {
            samples: dus.len().min(times.len()),
        });
    }
    if dus.len() != times.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} unitaries for {} times",
            dus.len(),
            times.len()
        )));
    }
    let d = dus[0].unitary.rows();
    if dus.iter().any(|u| u.unitary.rows() != d) {
        return Err(Error::DimensionMismatch("dilations differ in size".into()));
    }
    (0..dus.len() - 1)
        .map(|k| {
            let dt = times[k + 1] - times[k];
            if dt <= 0.0 || dt.is_nan() {
                return Err(Error::InvalidTrajectory(format!("non-increasing time at index {}", k + 1)));
            }
            let du = &dus[k + 1].unitary - &dus[k].unitary;
            let raw = (&du * &dus[k].unitary.adjoint()).scale(I / dt);
            let hamiltonian = raw.hermitian_part();
            Ok(HamiltonianSample {
                time: times[k],
                hermitization_defect: frobenius_distance(&raw, &hamiltonian),
                hamiltonian,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{spectral_decompose, validate_density};
    use crate::kraus::connect;
    use crate::linalg::hermitian_eig;
    use crate::random::{random_density, random_hermitian, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn single_unitary_needs_no_ancilla() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u0 = random_unitary(3, &mut rng);
        let rho0 = random_density(3, 3, &mut rng);
        let sd0 = spectral_decompose(&rho0, &tol()).unwrap();
        let ks = KrausSet::new(vec![u0.clone()], "u").unwrap();
        let du = build_dilation(&ks, &sd0, &tol()).unwrap();
        assert_eq!(du.ancilla_dim(), 1);
        let expected = &(&sd0.frame().adjoint() * &u0) * sd0.frame();
        assert!(frobenius_distance(du.unitary(), &expected) < 1e-14);
        assert!(frobenius_distance(&du.in_basis(Basis::Computational), &u0) < 1e-13);
    }

    #[test]
    fn qubit_reset_dilation() {
        let rho0 = DensityMatrix::maximally_mixed(2);
        let rho_t = validate_density(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), &tol()).unwrap();
        let ks = connect(&rho0, &rho_t, &tol()).unwrap();
        let sd0 = spectral_decompose(&rho0, &tol()).unwrap();
        let du = build_dilation(&ks, &sd0, &tol()).unwrap();
        assert_eq!(du.unitary().rows(), 4);
        for s in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(du.unitary()[(du.index(i, j), du.index(s, 0))], ks.ops()[j][(i, s)]);
                }
            }
        }
        let r = verify_dilation(&du, &rho0, &rho_t, &tol());
        assert!(r.pass && r.unitarity_defect <= 1e-10, "{r:?}");
    }

    #[test]
    fn random_qutrit_constrained_columns_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_density(3, 3, &mut rng);
        let b = random_density(3, 2, &mut rng);
        let ks = connect(&a, &b, &tol()).unwrap();
        let du = build_dilation(&ks, &spectral_decompose(&a, &tol()).unwrap(), &tol()).unwrap();
        assert!(constrained_gram_defect(&du) <= 1e-10);
        assert_eq!(du.ancilla_dim(), 3);
        assert!(verify_dilation(&du, &a, &b, &tol()).pass);
    }

    #[test]
    fn identity_dilation_misses_the_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_density(2, 2, &mut rng);
        let b = random_density(2, 2, &mut rng);
        let frame = spectral_decompose(&a, &tol()).unwrap().frame().clone();
        let du = DilationUnitary::from_parts(2, 2, ComplexMatrix::identity(4), frame).unwrap();
        let r = verify_dilation(&du, &a, &b, &tol());
        assert!(r.unitarity_defect < 1e-15);
        assert!((r.recovery_defect - frobenius_distance(a.matrix(), b.matrix())).abs() < 1e-12);
        assert!(!r.pass);
    }

    #[test]
    fn scrambled_columns_stay_unitary_but_fail_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_density(2, 2, &mut rng);
        let b = random_density(2, 1, &mut rng);
        let ks = connect(&a, &b, &tol()).unwrap();
        let du = build_dilation(&ks, &spectral_decompose(&a, &tol()).unwrap(), &tol()).unwrap();
        let u = du.unitary();
        let perm = [1, 0, 3, 2];
        let scrambled = ComplexMatrix::from_fn(4, 4, |r, c| u[(r, perm[c])]);
        let bad = DilationUnitary::from_parts(2, 2, scrambled, du.frame().clone()).unwrap();
        let r = verify_dilation(&bad, &a, &b, &tol());
        assert!(r.unitarity_defect <= 1e-10);
        assert!(r.recovery_defect > 1e-3);
    }

    #[test]
    fn incomplete_kraus_set_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_density(2, 2, &mut rng);
        let b = random_density(2, 2, &mut rng);
        let ks = connect(&a, &b, &tol()).unwrap().without(0).unwrap();
        let sd0 = spectral_decompose(&a, &tol()).unwrap();
        assert!(matches!(build_dilation(&ks, &sd0, &tol()), Err(Error::CompletenessDefect { .. })));
    }

    #[test]
    fn constant_unitary_has_zero_hamiltonian() {
        let du = DilationUnitary::from_parts(2, 1, ComplexMatrix::identity(2), ComplexMatrix::identity(2)).unwrap();
        let hs = hamiltonian_trajectory(&[du.clone(), du.clone(), du], &[0.0, 0.1, 0.2]).unwrap();
        assert_eq!(hs.len(), 2);
        for h in hs {
            assert_eq!(h.hamiltonian.frobenius_norm(), 0.0);
            assert_eq!(h.hermitization_defect, 0.0);
        }
    }

    #[test]
    fn hamiltonian_of_exponential_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(3, &mut rng);
        let eig = hermitian_eig(&a, &tol()).unwrap();
        let evolve = |t: f64| {
            let d: Vec<C64> = eig.eigenvalues.iter().map(|l| C64::from_polar(1.0, -l * t)).collect();
            eig.vectors.conjugate(&ComplexMatrix::from_diagonal(&d))
        };
        let mut errs = Vec::new();
        for steps in [100usize, 200] {
            let dt = 0.5 / steps as f64;
            let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
            let dus: Vec<_> = times
                .iter()
                .map(|&t| DilationUnitary::from_parts(3, 1, evolve(t), ComplexMatrix::identity(3)).unwrap())
                .collect();
            let hs = hamiltonian_trajectory(&dus, &times).unwrap();
            let err = hs.iter().map(|h| frobenius_distance(&h.hamiltonian, &a)).fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[0] < 0.1);
        // Hermitisation removes the O(Δt) anti-Hermitian part, so this shrinks quickly
        assert!(errs[1] < 0.6 * errs[0], "{errs:?}");
    }

    #[test]
    fn too_few_samples() {
        let du = DilationUnitary::from_parts(1, 1, ComplexMatrix::identity(1), ComplexMatrix::identity(1)).unwrap();
        assert!(matches!(hamiltonian_trajectory(&[du], &[0.0]), Err(Error::TooFewSamples { .. })));
    }
}
