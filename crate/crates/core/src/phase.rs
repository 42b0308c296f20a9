//! Relative and geometric phases from Kraus trajectories.
//!
//! Each `M_μ(t)` is split as `h_μ(t)·u_μ(t)`. Discrete parallel transport
//! right-multiplies `u_μ(t_{k+1})` by a phase unitary diagonal in the ρ(0)
//! eigenbasis so every step overlap `⟨ψ_i(0)|u_μ(t_k)†u_μ(t_{k+1})|ψ_i(0)⟩`
//! becomes real non-negative. The geometric phase is then
//! `α_μ = arg tr[h_μ(τ)·ũ_μ(τ)·ρ(0)]`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::density::{DensityMatrix, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{inner, polar_decompose, ComplexMatrix, Tolerances, C64};
use crate::trajectory::{kraus_trajectory_with, spectral_trajectory_with, DensityTrajectory, KrausTrajectory};

/// Traces smaller than this carry no phase.
pub const PHASE_MAGNITUDE_FLOOR: f64 = 1e-12;
/// Step overlaps smaller than this cannot be aligned.
pub const OVERLAP_FLOOR: f64 = 1e-12;

/// Maps an angle to (−π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarTrajectory {
    times: Vec<f64>,
    /// `h[k][μ]`
    h: Vec<Vec<ComplexMatrix>>,
    /// `u[k][μ]`
    u: Vec<Vec<ComplexMatrix>>,
}

impl PolarTrajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn operator_count(&self) -> usize {
        self.h.first().map_or(0, Vec::len)
    }

    pub fn h(&self, k: usize, mu: usize) -> &ComplexMatrix {
        &self.h[k][mu]
    }

    pub fn u(&self, k: usize, mu: usize) -> &ComplexMatrix {
        &self.u[k][mu]
    }

    /// h_μ(t_k)·u_μ(t_k).
    pub fn recompose(&self, k: usize, mu: usize) -> ComplexMatrix {
        &self.h[k][mu] * &self.u[k][mu]
    }
}

pub fn polar_trajectory(kt: &KrausTrajectory, tol: &Tolerances, exec: Exec) -> Result<PolarTrajectory> {
    let per_time = exec.try_map(kt.sets(), |ks| {
        ks.ops()
            .iter()
            .map(|m| polar_decompose(m, tol))
            .collect::<Result<Vec<_>>>()
    })?;
    let (h, u) = per_time
        .into_iter()
        .map(|ps| ps.into_iter().map(|p| (p.h, p.u)).unzip())
        .unzip();
    Ok(PolarTrajectory {
        times: kt.times().to_vec(),
        h,
        u,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    /// α_μ in (−π, π]; `None` where |tr| is below [`PHASE_MAGNITUDE_FLOOR`].
    pub alpha: Vec<Option<f64>>,
    pub trace_magnitude: Vec<f64>,
    /// Largest parallel-transport residual per operator (empty when the
    /// report was built from Kraus operators alone).
    pub transport_residual_max: Vec<f64>,
    pub aligned: bool,
}

impl PhaseReport {
    /// Operators whose phase is undefined.
    pub fn undefined(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

fn phases_of(ops: &[ComplexMatrix], rho0: &DensityMatrix) -> Result<(Vec<Option<f64>>, Vec<f64>)> {
    if ops.iter().any(|m| m.rows() != rho0.dim() || m.cols() != rho0.dim()) {
        return Err(Error::DimensionMismatch("Kraus operators and ρ(0) differ in dimension".into()));
    }
    let traces: Vec<C64> = ops.iter().map(|m| (m * rho0.matrix()).trace()).collect();
    let mags = traces.iter().map(|z| z.norm()).collect();
    let alpha = traces
        .iter()
        .map(|z| (z.norm() >= PHASE_MAGNITUDE_FLOOR).then(|| normalize_angle(z.arg())))
        .collect();
    Ok((alpha, mags))
}

/// α_μ = arg tr[M_μ(τ)·ρ(0)] at the final sample.
pub fn relative_phases(kt: &KrausTrajectory, rho0: &DensityMatrix) -> Result<PhaseReport> {
    let (alpha, trace_magnitude) = phases_of(kt.last().ops(), rho0)?;
    Ok(PhaseReport {
        alpha,
        trace_magnitude,
        transport_residual_max: Vec::new(),
        aligned: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportResiduals {
    /// `values[μ][k][i]`
    pub values: Vec<Vec<Vec<f64>>>,
    pub max_per_operator: Vec<f64>,
}

/// r_{μ,i,k} = |⟨ψ_i(0)|u_μ(t_k)†·(u_μ(t_{k+1}) − u_μ(t_k))/Δt_k|ψ_i(0)⟩|.
pub fn transport_residuals(pt: &PolarTrajectory, sd0: &SpectralDecomposition) -> Result<TransportResiduals> {
    if pt.len() < 2 {
        return Err(Error::TooFewSamples { samples: pt.len() });
    }
    let n = sd0.dim();
    let basis: Vec<Vec<C64>> = (0..n).map(|i| sd0.eigenvector(i)).collect();
    let values: Vec<Vec<Vec<f64>>> = (0..pt.operator_count())
        .map(|mu| {
            (0..pt.len() - 1)
                .map(|k| {
                    let dt = pt.times[k + 1] - pt.times[k];
                    let step = &pt.u[k + 1][mu] - &pt.u[k][mu];
                    basis
                        .iter()
                        .map(|psi| {
                            let a = pt.u[k][mu].mul_vec(psi);
                            let b = step.mul_vec(psi);
                            inner(&a, &b).norm() / dt
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let max_per_operator = values
        .iter()
        .map(|per_k| per_k.iter().flatten().copied().fold(0.0, f64::max))
        .collect();
    Ok(TransportResiduals {
        values,
        max_per_operator,
    })
}

/// Discrete Pancharatnam alignment of every u_μ, sequential in time and
/// independent across μ.
pub fn align_transport(pt: &PolarTrajectory, sd0: &SpectralDecomposition, exec: Exec) -> Result<PolarTrajectory> {
    let n = sd0.dim();
    let frame = sd0.frame();
    let basis: Vec<Vec<C64>> = (0..n).map(|i| sd0.eigenvector(i)).collect();
    let aligned_per_op = exec.try_map_range(pt.operator_count(), |mu| {
        let mut track: Vec<ComplexMatrix> = Vec::with_capacity(pt.len());
        track.push(pt.u[0][mu].clone());
        for k in 0..pt.len() - 1 {
            let prev = track.last().expect("seeded");
            let next = &pt.u[k + 1][mu];
            let mut phases = Vec::with_capacity(n);
            for (i, psi) in basis.iter().enumerate() {
                let o = inner(&prev.mul_vec(psi), &next.mul_vec(psi));
                if o.norm() < OVERLAP_FLOOR {
                    return Err(Error::DegenerateOverlap {
                        operator: mu,
                        branch: i,
                        step: k,
                        magnitude: o.norm(),
                    });
                }
                phases.push(C64::from_polar(1.0, -o.arg()));
            }
            let g = frame.conjugate(&ComplexMatrix::from_diagonal(&phases));
            track.push(next * &g);
        }
        Ok(track)
    })?;

    let u = (0..pt.len())
        .map(|k| aligned_per_op.iter().map(|track| track[k].clone()).collect())
        .collect();
    Ok(PolarTrajectory {
        times: pt.times.clone(),
        h: pt.h.clone(),
        u,
    })
}

/// Full pipeline: branch-matched spectra, Kraus trajectory, polar
/// factors, transport alignment, and α_μ of the recomposed final operators.
pub fn geometric_phase(traj: &DensityTrajectory, tol: &Tolerances) -> Result<PhaseReport> {
    geometric_phase_with(traj, tol, Exec::default())
}

pub fn geometric_phase_with(traj: &DensityTrajectory, tol: &Tolerances, exec: Exec) -> Result<PhaseReport> {
    let straj = spectral_trajectory_with(traj, tol, exec)?;
    let kt = kraus_trajectory_with(&straj, tol, exec)?;
    let sd0 = straj.decomposition(0);
    let pt = polar_trajectory(&kt, tol, exec)?;
    let aligned = align_transport(&pt, &sd0, exec)?;
    let residuals = transport_residuals(&aligned, &sd0)?;
    let last = aligned.len() - 1;
    let ops: Vec<ComplexMatrix> = (0..aligned.operator_count())
        .map(|mu| aligned.recompose(last, mu))
        .collect();
    let (alpha, trace_magnitude) = phases_of(&ops, traj.initial())?;
    Ok(PhaseReport {
        alpha,
        trace_magnitude,
        transport_residual_max: residuals.max_per_operator,
        aligned: true,
    })
}
