//! Closed-form trajectories used as fixtures.
//!
//! `steps` is the number of grid intervals: every generator samples
//! `t_k = τ·k/steps` for k = 0..=steps.

use rand::Rng;

use super::DensityTrajectory;
use crate::density::{spectral_decompose, validate_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Tolerances, C64};
use crate::random::random_hermitian;

fn grid(tau: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::BadParams(format!("steps must be at least 2, got {steps}")));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::BadParams(format!("duration must be positive, got {tau}")));
    }
    Ok((0..=steps).map(|k| tau * k as f64 / steps as f64).collect())
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParams(format!("{name} must be finite")))
    }
}

/// (I + r·n·σ)/2 for a Bloch vector of length r along n.
fn bloch_state(r: f64, n: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = n;
    ComplexMatrix::from_row_major(
        2,
        2,
        vec![
            C64::new(0.5 * (1.0 + r * z), 0.0),
            C64::new(0.5 * r * x, -0.5 * r * y),
            C64::new(0.5 * r * x, 0.5 * r * y),
            C64::new(0.5 * (1.0 - r * z), 0.0),
        ],
    )
    .expect("2x2")
}

/// Qubit state with eigenvalues (p, 1−p) whose Bloch vector, at polar angle
/// `theta`, precesses about z at rate `omega`:
/// n(t) = (sin θ cos ωt, sin θ sin ωt, cos θ). Closed when ω·τ = 2π.
pub fn gen_unitary_precession(
    theta: f64,
    omega: f64,
    tau: f64,
    steps: usize,
    purity: f64,
) -> Result<DensityTrajectory> {
    finite("theta", theta)?;
    finite("omega", omega)?;
    if !(0.5..=1.0).contains(&purity) {
        return Err(Error::BadParams(format!("purity must lie in [1/2, 1], got {purity}")));
    }
    let times = grid(tau, steps)?;
    let tol = Tolerances::default();
    let r = 2.0 * purity - 1.0;
    let states = times
        .iter()
        .map(|&t| {
            let phi = omega * t;
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            validate_density(&bloch_state(r, n), &tol)
        })
        .collect::<Result<Vec<_>>>()?;
    DensityTrajectory::new(times, states)
}

/// ρ(t) = [[1/2, e^{−γt}/2], [e^{−γt}/2, 1/2]].
pub fn gen_dephasing(gamma: f64, tau: f64, steps: usize) -> Result<DensityTrajectory> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::BadParams(format!("gamma must be non-negative, got {gamma}")));
    }
    let times = grid(tau, steps)?;
    let tol = Tolerances::default();
    let states = times
        .iter()
        .map(|&t| {
            let c = 0.5 * (-gamma * t).exp();
            validate_density(&ComplexMatrix::from_real(2, 2, &[0.5, c, c, 0.5])?, &tol)
        })
        .collect::<Result<Vec<_>>>()?;
    DensityTrajectory::new(times, states)
}

/// ρ(t) = e^{−λt}·ρ0 + (1 − e^{−λt})·I/N.
pub fn gen_depolarizing(lambda_rate: f64, rho0: &DensityMatrix, tau: f64, steps: usize) -> Result<DensityTrajectory> {
    if !(lambda_rate.is_finite() && lambda_rate >= 0.0) {
        return Err(Error::BadParams(format!("lambda must be non-negative, got {lambda_rate}")));
    }
    let times = grid(tau, steps)?;
    let tol = Tolerances::default();
    let mixed = DensityMatrix::maximally_mixed(rho0.dim());
    let states = times
        .iter()
        .map(|&t| {
            let w = (-lambda_rate * t).exp();
            let m = &rho0.matrix().scale_real(w) + &mixed.matrix().scale_real(1.0 - w);
            validate_density(&m, &tol)
        })
        .collect::<Result<Vec<_>>>()?;
    DensityTrajectory::new(times, states)
}

/// Random walk ρ_{k+1} = Π(ρ_k + ε·H_k) where H_k is a random Hermitian
/// matrix and Π clips negative eigenvalues and renormalises the trace.
pub fn gen_random_walk(
    rho0: &DensityMatrix,
    epsilon: f64,
    steps: usize,
    rng: &mut impl Rng,
) -> Result<DensityTrajectory> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::BadParams(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let times = grid(1.0, steps)?;
    let tol = Tolerances::default();
    let n = rho0.dim();
    let mut states = Vec::with_capacity(times.len());
    states.push(rho0.clone());
    for _ in 0..steps {
        let prev = states.last().expect("seeded");
        let h = random_hermitian(n, rng);
        let stepped = validate_density_loose(&(prev.matrix() + &h.scale_real(epsilon)))?;
        let sd = spectral_decompose(&stepped, &tol)?;
        let m = sd
            .frame()
            .conjugate(&ComplexMatrix::from_real_diagonal(sd.eigenvalues()))
            .hermitian_part();
        states.push(validate_density(&m, &tol)?);
    }
    DensityTrajectory::new(times, states)
}

/// Hermitian, trace-normalised, possibly slightly indefinite.
fn validate_density_loose(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let h = m.hermitian_part();
    let tr = h.trace().re;
    let h = &h + &ComplexMatrix::identity(h.rows()).scale_real((1.0 - tr) / h.rows() as f64);
    Ok(DensityMatrix::new_unchecked(h))
}
