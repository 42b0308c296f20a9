//! Operator-sum representations connecting two density matrices.
//!
//! For target spectrum `p` the shift family places `√p_i` on the μ-th cyclic
//! superdiagonal, `(M'_μ)_{i, i+μ mod N} = √p_i`, which maps every diagonal
//! state onto `diag(p)`. Rotating into the eigenframes of the two states,
//! `M_μ = U_B·M'_μ·U_A†`, connects `ρ_A` to `ρ_B` with exactly N operators.

use serde::Serialize;

use crate::density::{check_probabilities, spectral_decompose, validate_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{frobenius_distance, ComplexMatrix, Tolerances, C64, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    label: String,
}

impl KrausSet {
    /// Wraps N×N operators. Completeness is not enforced here; use
    /// [`KrausSet::completeness_defect`] or [`verify_kraus`].
    pub fn new(ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let dim = ops
            .first()
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::DimensionMismatch("empty Kraus set".into()))?;
        if ops.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "every Kraus operator must be {dim}x{dim}"
            )));
        }
        if ops.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(KrausSet {
            dim,
            ops,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Σ_μ M_μ†M_μ.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, m| {
                &acc + &(&m.adjoint() * m)
            })
    }

    /// ‖Σ_μ M_μ†M_μ − I‖_F.
    pub fn completeness_defect(&self) -> f64 {
        frobenius_distance(&self.completeness_sum(), &ComplexMatrix::identity(self.dim))
    }

    /// Σ_μ M_μ·X·M_μ† without any validation.
    pub fn act(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, m| &acc + &m.conjugate(x))
    }

    /// Same set without operator `index`.
    pub fn without(&self, index: usize) -> Result<Self> {
        let ops: Vec<_> = self
            .ops
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index)
            .map(|(_, m)| m.clone())
            .collect();
        KrausSet::new(ops, format!("{} without #{index}", self.label))
    }
}

/// The shift family for a target spectrum.
pub fn build_shift_family(p_target: &[f64], tol: &Tolerances) -> Result<KrausSet> {
    check_probabilities(p_target, tol)?;
    let n = p_target.len();
    let roots: Vec<f64> = p_target.iter().map(|&p| p.max(0.0).sqrt()).collect();
    let ops = (0..n)
        .map(|mu| {
            let mut m = ComplexMatrix::zeros(n, n);
            for (i, &r) in roots.iter().enumerate() {
                m[(i, (i + mu) % n)] = C64::new(r, 0.0);
            }
            m
        })
        .collect();
    KrausSet::new(ops, "shift family")
}

/// Kraus operators taking `rho_a` to `rho_b`. Eigenbranches are paired in
/// descending-eigenvalue order on both sides.
pub fn connect(rho_a: &DensityMatrix, rho_b: &DensityMatrix, tol: &Tolerances) -> Result<KrausSet> {
    if rho_a.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot connect a {}-dimensional state to a {}-dimensional one",
            rho_a.dim(),
            rho_b.dim()
        )));
    }
    let sd_a = spectral_decompose(rho_a, tol)?;
    let sd_b = spectral_decompose(rho_b, tol)?;
    let shift = build_shift_family(sd_b.eigenvalues(), tol)?;
    let ua_dag = sd_a.frame().adjoint();
    let ops = shift
        .ops()
        .iter()
        .map(|m| &(sd_b.frame() * m) * &ua_dag)
        .collect();
    KrausSet::new(ops, "connect")
}

/// Σ_μ M_μ ρ M_μ†, re-validated as a state.
pub fn apply_channel(ks: &KrausSet, rho: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    if ks.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional Kraus set applied to a {}-dimensional state",
            ks.dim(),
            rho.dim()
        )));
    }
    validate_density(&ks.act(rho.matrix()), tol).map_err(|e| Error::OutputNotDensity(Box::new(e)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KrausReport {
    pub completeness_defect: f64,
    pub reconstruction_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Diagnostic check of Σ M†M = I and Σ M ρ_A M† = ρ_B. Never fails:
/// dimension mismatches are reported as infinite defects.
pub fn verify_kraus(
    ks: &KrausSet,
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    tol: &Tolerances,
) -> KrausReport {
    let completeness_defect = ks.completeness_defect();
    let reconstruction_defect = if ks.dim() == rho_a.dim() && ks.dim() == rho_b.dim() {
        frobenius_distance(&ks.act(rho_a.matrix()), rho_b.matrix())
    } else {
        f64::INFINITY
    };
    KrausReport {
        completeness_defect,
        reconstruction_defect,
        tolerance: tol.eq_tol,
        pass: completeness_defect <= tol.eq_tol && reconstruction_defect <= tol.eq_tol,
    }
}

/// connect and verify_kraus over many independent pairs.
pub fn connect_many(
    pairs: &[(DensityMatrix, DensityMatrix)],
    tol: &Tolerances,
    exec: Exec,
) -> Result<Vec<(KrausSet, KrausReport)>> {
    exec.try_map(pairs, |(a, b)| {
        let ks = connect(a, b, tol)?;
        let report = verify_kraus(&ks, a, b, tol);
        Ok((ks, report))
    })
}

/// M̃_μ = Σ_ν V_{μν}·M_ν for a unitary V over the operator index.
pub fn mix_kraus(ks: &KrausSet, v: &ComplexMatrix, tol: &Tolerances) -> Result<KrausSet> {
    if !v.is_square() || v.rows() != ks.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} mixer for {} operators",
            v.rows(),
            v.cols(),
            ks.len()
        )));
    }
    let defect = v.unitarity_defect();
    if defect > tol.eq_tol {
        return Err(Error::NotUnitaryMixer { defect });
    }
    let n = ks.dim();
    let ops = (0..ks.len())
        .map(|mu| {
            let mut acc = ComplexMatrix::zeros(n, n);
            for (nu, m) in ks.ops().iter().enumerate() {
                let w = v[(mu, nu)];
                if w != ZERO {
                    acc = &acc + &m.scale(w);
                }
            }
            acc
        })
        .collect();
    KrausSet::new(ops, format!("{} (mixed)", ks.label()))
}
