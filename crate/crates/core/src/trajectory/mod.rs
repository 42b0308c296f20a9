//! Time-sampled density trajectories and their Kraus representation
//! `M_μ(t) = U(t)·M'_μ(t)·U(0)†`.
//!
//! Eigendecompositions at each sample are independent and run through
//! [`Exec`]; the branch/gauge matching pass that makes `U(t)` continuous is
//! sequential in time.

mod fixtures;

pub use fixtures::{gen_dephasing, gen_depolarizing, gen_random_walk, gen_unitary_precession};

use crate::density::{spectral_decompose, DensityMatrix, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kraus::{build_shift_family, verify_kraus, KrausReport, KrausSet};
use crate::linalg::{inner, polar_decompose, ComplexMatrix, Tolerances, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl DensityTrajectory {
    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::TooFewSamples {
                samples: times.len(),
            });
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidTrajectory("non-finite time".into()));
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTrajectory(format!(
                "times not strictly increasing at index {}",
                k + 1
            )));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "trajectory states differ in dimension".into(),
            ));
        }
        Ok(DensityTrajectory { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.states[0]
    }
}

/// Eigenvalue tracks `p_i(t_k)` and frames `U(t_k)`, column i following
/// branch i through time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTrajectory {
    times: Vec<f64>,
    eigenvalues: Vec<Vec<f64>>,
    frames: Vec<ComplexMatrix>,
}

impl SpectralTrajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Branch-ordered eigenvalues at sample k.
    pub fn eigenvalues(&self, k: usize) -> &[f64] {
        &self.eigenvalues[k]
    }

    pub fn frame(&self, k: usize) -> &ComplexMatrix {
        &self.frames[k]
    }

    pub fn frames(&self) -> &[ComplexMatrix] {
        &self.frames
    }

    pub fn decomposition(&self, k: usize) -> SpectralDecomposition {
        SpectralDecomposition::new_unchecked(self.eigenvalues[k].clone(), self.frames[k].clone())
    }

    /// Same tracks with every frame column multiplied by a phase; used to
    /// exercise gauge independence.
    pub fn regauged(&self, mut phase: impl FnMut(usize, usize) -> f64) -> Self {
        let frames = self
            .frames
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let mut f = f.clone();
                for j in 0..f.cols() {
                    let z = C64::from_polar(1.0, phase(k, j));
                    for r in 0..f.rows() {
                        f[(r, j)] *= z;
                    }
                }
                f
            })
            .collect();
        SpectralTrajectory {
            times: self.times.clone(),
            eigenvalues: self.eigenvalues.clone(),
            frames,
        }
    }
}

pub fn spectral_trajectory(traj: &DensityTrajectory, tol: &Tolerances) -> Result<SpectralTrajectory> {
    spectral_trajectory_with(traj, tol, Exec::default())
}

/// Gauge-continuous spectral decomposition along the trajectory.
///
/// Eigenvalues closer than `eig_tol · max(1, ‖ρ‖_F)` form a cluster. Each
/// previous branch is assigned to a cluster greedily by descending overlap
/// `‖P_c ψ_i(t_{k−1})‖`; inside a cluster the new vectors are the unitary
/// polar factor of the overlap block, so every `⟨ψ_i(t_{k−1})|ψ_i(t_k)⟩`
/// is real non-negative.
pub fn spectral_trajectory_with(
    traj: &DensityTrajectory,
    tol: &Tolerances,
    exec: Exec,
) -> Result<SpectralTrajectory> {
    let sds = exec.try_map(traj.states(), |s| spectral_decompose(s, tol))?;
    let n = traj.dim();

    let mut eigenvalues = Vec::with_capacity(sds.len());
    let mut frames = Vec::with_capacity(sds.len());
    eigenvalues.push(sds[0].eigenvalues().to_vec());
    frames.push(sds[0].frame().clone());

    for (k, sd) in sds.iter().enumerate().skip(1) {
        let prev = frames.last().expect("seeded");
        let prev_cols: Vec<Vec<C64>> = (0..n).map(|i| prev.column(i)).collect();
        let scale = traj.states()[k].matrix().frobenius_norm().max(1.0);
        let clusters = cluster_indices(sd.eigenvalues(), tol.eig_tol * scale);

        // weights[i][c] = ‖P_c ψ_i‖
        let weights: Vec<Vec<f64>> = prev_cols
            .iter()
            .map(|psi| {
                clusters
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|&j| inner(&sd.eigenvector(j), psi).norm_sqr())
                            .sum::<f64>()
                            .sqrt()
                    })
                    .collect()
            })
            .collect();

        for (i, w) in weights.iter().enumerate() {
            let mut sorted = w.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let best = sorted[0];
            let second = sorted.get(1).copied().unwrap_or(0.0);
            if best < std::f64::consts::FRAC_1_SQRT_2 && best - second <= tol.rank_tol {
                return Err(Error::AmbiguousMatching {
                    sample: k,
                    branch: i,
                    best,
                    second,
                });
            }
        }

        let mut candidates: Vec<(f64, usize, usize)> = weights
            .iter()
            .enumerate()
            .flat_map(|(i, w)| w.iter().enumerate().map(move |(c, &x)| (x, i, c)))
            .collect();
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut owner: Vec<Option<usize>> = vec![None; n];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); clusters.len()];
        for (_, i, c) in candidates {
            if owner[i].is_none() && members[c].len() < clusters[c].len() {
                owner[i] = Some(c);
                members[c].push(i);
            }
        }

        let mut frame = ComplexMatrix::zeros(n, n);
        let mut track = vec![0.0; n];
        for (c, cluster) in clusters.iter().enumerate() {
            let mut branches = members[c].clone();
            branches.sort_unstable();
            let m = cluster.len();
            let basis: Vec<Vec<C64>> = cluster.iter().map(|&j| sd.eigenvector(j)).collect();
            let overlap = ComplexMatrix::from_fn(m, m, |a, b| inner(&basis[a], &prev_cols[branches[b]]));
            let rotation = polar_decompose(&overlap, tol)?.u;
            let mean = cluster.iter().map(|&j| sd.eigenvalues()[j]).sum::<f64>() / m as f64;
            for (b, &branch) in branches.iter().enumerate() {
                let v: Vec<C64> = (0..n)
                    .map(|r| (0..m).map(|a| basis[a][r] * rotation[(a, b)]).sum())
                    .collect();
                frame.set_column(branch, &v);
                track[branch] = mean;
            }
        }
        eigenvalues.push(track);
        frames.push(frame);
    }

    Ok(SpectralTrajectory {
        times: traj.times().to_vec(),
        eigenvalues,
        frames,
    })
}

/// Per-sample decompositions with the static gauge and no branch matching.
pub fn static_spectral_trajectory(traj: &DensityTrajectory, tol: &Tolerances) -> Result<SpectralTrajectory> {
    let sds = Exec::default().try_map(traj.states(), |s| spectral_decompose(s, tol))?;
    Ok(SpectralTrajectory {
        times: traj.times().to_vec(),
        eigenvalues: sds.iter().map(|s| s.eigenvalues().to_vec()).collect(),
        frames: sds.iter().map(|s| s.frame().clone()).collect(),
    })
}

fn cluster_indices(eigenvalues: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (j, &x) in eigenvalues.iter().enumerate() {
        match out.last_mut() {
            Some(c) if (eigenvalues[*c.last().expect("non-empty")] - x).abs() <= gap => c.push(j),
            _ => out.push(vec![j]),
        }
    }
    out
}

/// Largest frame jump max_k ‖U(t_{k+1}) − U(t_k)‖_F.
pub fn max_frame_step(straj: &SpectralTrajectory) -> f64 {
    straj
        .frames
        .windows(2)
        .map(|w| crate::linalg::frobenius_distance(&w[0], &w[1]))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausTrajectory {
    times: Vec<f64>,
    sets: Vec<KrausSet>,
}

impl KrausTrajectory {
    pub fn new(times: Vec<f64>, sets: Vec<KrausSet>) -> Result<Self> {
        if times.len() != sets.len() || times.is_empty() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times for {} Kraus sets",
                times.len(),
                sets.len()
            )));
        }
        Ok(KrausTrajectory { times, sets })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sets(&self) -> &[KrausSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &KrausSet {
        self.sets.last().expect("non-empty")
    }
}

pub fn kraus_trajectory(straj: &SpectralTrajectory, tol: &Tolerances) -> Result<KrausTrajectory> {
    kraus_trajectory_with(straj, tol, Exec::default())
}

/// `M_μ(t_k) = U(t_k)·M'_μ(t_k)·U(0)†` with the shift family of the
/// branch-ordered spectrum at t_k.
pub fn kraus_trajectory_with(
    straj: &SpectralTrajectory,
    tol: &Tolerances,
    exec: Exec,
) -> Result<KrausTrajectory> {
    let u0_dag = straj.frames[0].adjoint();
    let sets = exec.try_map_range(straj.len(), |k| {
        let shift = build_shift_family(&straj.eigenvalues[k], tol)?;
        let ops = shift
            .ops()
            .iter()
            .map(|m| &(&straj.frames[k] * m) * &u0_dag)
            .collect();
        KrausSet::new(ops, format!("t[{k}]"))
    })?;
    KrausTrajectory::new(straj.times.clone(), sets)
}

/// verify_kraus against (ρ(0), ρ(t_k)) at every sample.
pub fn verify_kraus_trajectory(
    kt: &KrausTrajectory,
    traj: &DensityTrajectory,
    tol: &Tolerances,
    exec: Exec,
) -> Result<Vec<KrausReport>> {
    if kt.len() != traj.len() {
        return Err(Error::InvalidTrajectory(format!(
            "{} Kraus sets for {} states",
            kt.len(),
            traj.len()
        )));
    }
    Ok(exec.map_range(kt.len(), |k| {
        verify_kraus(&kt.sets[k], traj.initial(), &traj.states()[k], tol)
    }))
}

/// Convenience: trajectory → Kraus trajectory with per-sample reports.
pub fn represent(
    traj: &DensityTrajectory,
    tol: &Tolerances,
    exec: Exec,
) -> Result<(KrausTrajectory, Vec<KrausReport>)> {
    let straj = spectral_trajectory_with(traj, tol, exec)?;
    let kt = kraus_trajectory_with(&straj, tol, exec)?;
    let reports = verify_kraus_trajectory(&kt, traj, tol, exec)?;
    Ok((kt, reports))
}
