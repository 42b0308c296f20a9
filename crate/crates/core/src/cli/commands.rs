use std::path::Path;

use super::files::{
    read_json, write_json, DilationFile, DilationReportFile, DilationSampleFile, HamiltonianFile, KrausSetFile,
    KrausTrajectoryFile, MatrixFile, PhaseFile, Real, TrajectoryFile,
};
use super::{BasisArg, CliError, Command, Common, Fixture, Outcome};
use crate::density::{spectral_decompose, DensityMatrix};
use crate::dilation::{
    build_dilation, constrained_gram_defect, dilation_trajectory, hamiltonian_trajectory, verify_dilation, Basis,
    DilationUnitary,
};
use crate::error::Error;
use crate::exec::Exec;
use crate::kraus::{apply_channel, connect, verify_kraus, KrausReport};
use crate::linalg::{kron, ComplexMatrix, Tolerances};
use crate::phase::geometric_phase_with;
use crate::trajectory::{
    gen_dephasing, gen_depolarizing, gen_unitary_precession, kraus_trajectory_with, spectral_trajectory_with,
    verify_kraus_trajectory, DensityTrajectory,
};

type CmdResult = Result<Outcome, CliError>;

pub(super) fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Connect { rho_a, rho_b, common } => cmd_connect(&rho_a, &rho_b, &common),
        Command::Verify {
            kraus,
            rho_a,
            rho_b,
            common,
        } => cmd_verify(&kraus, &rho_a, &rho_b, &common),
        Command::Apply { kraus, rho, common } => cmd_apply(&kraus, &rho, &common),
        Command::KrausTraj { trajectory, common } => cmd_kraus_traj(&trajectory, &common),
        Command::Dilate { inputs, basis, common } => cmd_dilate(&inputs, basis, &common),
        Command::Phase { trajectory, common } => cmd_phase(&trajectory, &common),
        Command::Gen {
            fixture,
            steps,
            tau,
            gamma,
            theta,
            omega,
            purity,
            lambda,
            rho0,
            common,
        } => {
            let tol = tolerances(&common)?;
            let traj = match fixture {
                Fixture::Precession => gen_unitary_precession(theta, omega, tau, steps, purity)?,
                Fixture::Dephasing => gen_dephasing(gamma, tau, steps)?,
                Fixture::Depolarizing => {
                    let path = rho0.ok_or_else(|| CliError::Usage("depolarizing needs --rho0 <path>".into()))?;
                    gen_depolarizing(lambda, &read_density(&path, &tol)?, tau, steps)?
                }
            };
            write_json(&common.out, &TrajectoryFile::from_trajectory(&traj))?;
            Ok(Outcome {
                summary: format!(
                    "gen {}: samples={} dim={} tau={}",
                    fixture_name(fixture),
                    traj.len(),
                    traj.dim(),
                    traj.times().last().copied().unwrap_or(0.0)
                ),
                pass: true,
            })
        }
    }
}

fn fixture_name(f: Fixture) -> &'static str {
    match f {
        Fixture::Precession => "precession",
        Fixture::Dephasing => "dephasing",
        Fixture::Depolarizing => "depolarizing",
    }
}

fn tolerances(common: &Common) -> Result<Tolerances, CliError> {
    Ok(Tolerances::with_eq_tol(common.tol)?)
}

fn read_density(path: &Path, tol: &Tolerances) -> Result<DensityMatrix, CliError> {
    let f: MatrixFile = read_json(path)?;
    Ok(f.to_density(tol)?)
}

fn read_trajectory(path: &Path, tol: &Tolerances) -> Result<DensityTrajectory, CliError> {
    let f: TrajectoryFile = read_json(path)?;
    Ok(f.to_trajectory(tol)?)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn kraus_summary(cmd: &str, k: usize, r: &KrausReport) -> String {
    format!(
        "{cmd}: K={k} completeness_defect={:.3e} reconstruction_defect={:.3e} tol={:.1e} {}",
        r.completeness_defect,
        r.reconstruction_defect,
        r.tolerance,
        verdict(r.pass)
    )
}

fn cmd_connect(a: &Path, b: &Path, common: &Common) -> CmdResult {
    let tol = tolerances(common)?;
    let rho_a = read_density(a, &tol)?;
    let rho_b = read_density(b, &tol)?;
    let ks = connect(&rho_a, &rho_b, &tol)?;
    let report = verify_kraus(&ks, &rho_a, &rho_b, &tol);
    write_json(&common.out, &KrausSetFile::from_set(&ks, Some(&report)))?;
    Ok(Outcome {
        summary: kraus_summary("connect", ks.len(), &report),
        pass: report.pass,
    })
}

fn cmd_verify(kraus: &Path, a: &Path, b: &Path, common: &Common) -> CmdResult {
    let tol = tolerances(common)?;
    let file: KrausSetFile = read_json(kraus)?;
    let ks = file.to_set()?;
    let rho_a = read_density(a, &tol)?;
    let rho_b = read_density(b, &tol)?;
    if ks.dim() != rho_a.dim() || ks.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional Kraus set with {}- and {}-dimensional states",
            ks.dim(),
            rho_a.dim(),
            rho_b.dim()
        ))
        .into());
    }
    let report = verify_kraus(&ks, &rho_a, &rho_b, &tol);
    write_json(&common.out, &KrausSetFile::from_set(&ks, Some(&report)))?;
    Ok(Outcome {
        summary: kraus_summary("verify", ks.len(), &report),
        pass: report.pass,
    })
}

fn cmd_apply(kraus: &Path, rho: &Path, common: &Common) -> CmdResult {
    let tol = tolerances(common)?;
    let file: KrausSetFile = read_json(kraus)?;
    let ks = file.to_set()?;
    let rho = read_density(rho, &tol)?;
    let out = apply_channel(&ks, &rho, &tol)?;
    write_json(&common.out, &MatrixFile::from_matrix(out.matrix()))?;
    let defect = ks.completeness_defect();
    let pass = defect <= tol.eq_tol;
    Ok(Outcome {
        summary: format!(
            "apply: K={} dim={} completeness_defect={defect:.3e} tol={:.1e} {}",
            ks.len(),
            out.dim(),
            tol.eq_tol,
            verdict(pass)
        ),
        pass,
    })
}

fn max_defects(reports: &[KrausReport]) -> (f64, f64) {
    reports.iter().fold((0.0, 0.0), |(c, r), x| {
        (f64::max(c, x.completeness_defect), f64::max(r, x.reconstruction_defect))
    })
}

fn cmd_kraus_traj(path: &Path, common: &Common) -> CmdResult {
    let tol = tolerances(common)?;
    let traj = read_trajectory(path, &tol)?;
    let exec = Exec::default();
    let straj = spectral_trajectory_with(&traj, &tol, exec)?;
    let kt = kraus_trajectory_with(&straj, &tol, exec)?;
    let reports = verify_kraus_trajectory(&kt, &traj, &tol, exec)?;
    let file = KrausTrajectoryFile::from_trajectory(&kt, &reports, &tol);
    write_json(&common.out, &file)?;
    let (c, r) = max_defects(&reports);
    Ok(Outcome {
        summary: format!(
            "kraus-traj: samples={} K={} max_completeness_defect={c:.3e} max_reconstruction_defect={r:.3e} tol={:.1e} {}",
            kt.len(),
            traj.dim(),
            tol.eq_tol,
            verdict(file.pass)
        ),
        pass: file.pass,
    })
}

fn basis_of(b: BasisArg) -> (Basis, &'static str, &'static str) {
    match b {
        BasisArg::Eigen => (Basis::Eigen, "eigen", "system factor in the eigenbasis of rho(0); index (i, j) -> i*K + j"),
        BasisArg::Computational => (
            Basis::Computational,
            "computational",
            "system factor in the computational basis, (U(0) x I) U (U(0) x I)^dagger; index (i, j) -> i*K + j",
        ),
    }
}

fn cmd_dilate(inputs: &[std::path::PathBuf], basis: BasisArg, common: &Common) -> CmdResult {
    let tol = tolerances(common)?;
    let exec = Exec::default();
    let (basis, basis_name, note) = basis_of(basis);

    let (times, states, dus, frame): (Vec<f64>, Vec<DensityMatrix>, Vec<DilationUnitary>, ComplexMatrix) =
        match inputs {
            [a, b] => {
                let rho_a = read_density(a, &tol)?;
                let rho_b = read_density(b, &tol)?;
                let ks = connect(&rho_a, &rho_b, &tol)?;
                let sd0 = spectral_decompose(&rho_a, &tol)?;
                let du = build_dilation(&ks, &sd0, &tol)?;
                (vec![0.0, 1.0], vec![rho_a, rho_b], vec![du], sd0.frame().clone())
            }
            [t] => {
                let traj = read_trajectory(t, &tol)?;
                let straj = spectral_trajectory_with(&traj, &tol, exec)?;
                let kt = kraus_trajectory_with(&straj, &tol, exec)?;
                let sd0 = straj.decomposition(0);
                let dus = dilation_trajectory(&kt, &sd0, &tol, exec)?;
                let frame = sd0.frame().clone();
                let mut states = vec![traj.initial().clone()];
                states.extend(traj.states().iter().cloned());
                let mut times = vec![traj.times()[0]];
                times.extend_from_slice(traj.times());
                (times, states, dus, frame)
            }
            _ => return Err(CliError::Usage("dilate takes a trajectory file or two matrix files".into())),
        };
    // states[0] is ρ(0); dus[k] maps it to states[k + 1] at times[k + 1]
    let rho0 = &states[0];
    let samples: Vec<DilationSampleFile> = dus
        .iter()
        .enumerate()
        .map(|(k, du)| {
            let report = verify_dilation(du, rho0, &states[k + 1], &tol);
            DilationSampleFile {
                time: Real(times[k + 1]),
                unitary: MatrixFile::from_matrix(&du.in_basis(basis)),
                report: DilationReportFile::new(&report, constrained_gram_defect(du)),
            }
        })
        .collect();

    let hamiltonians = if dus.len() >= 2 {
        let w = kron(&frame, &ComplexMatrix::identity(dus[0].ancilla_dim()));
        let hs = hamiltonian_trajectory(&dus, &times[1..])?;
        Some(
            hs.iter()
                .map(|h| {
                    let mut f = HamiltonianFile::from(h);
                    if basis == Basis::Computational {
                        f.hamiltonian = MatrixFile::from_matrix(&w.conjugate(&h.hamiltonian));
                    }
                    f
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let pass = samples.iter().all(|s| s.report.pass);
    let max = |f: fn(&DilationReportFile) -> f64| samples.iter().map(|s| f(&s.report)).fold(0.0, f64::max);
    let summary = format!(
        "dilate: samples={} N={} K={} basis={basis_name} max_unitarity_defect={:.3e} max_recovery_defect={:.3e} max_gram_defect={:.3e} tol={:.1e} {}",
        samples.len(),
        dus[0].system_dim(),
        dus[0].ancilla_dim(),
        max(|r| r.unitarity_defect.0),
        max(|r| r.recovery_defect.0),
        max(|r| r.constrained_gram_defect.0),
        tol.eq_tol,
        verdict(pass)
    );
    let file = DilationFile {
        basis: basis_name.into(),
        note: note.into(),
        system_dim: dus[0].system_dim(),
        ancilla_dim: dus[0].ancilla_dim(),
        frame: MatrixFile::from_matrix(&frame),
        samples,
        hamiltonians,
        tolerance: Real(tol.eq_tol),
        pass,
    };
    write_json(&common.out, &file)?;
    Ok(Outcome { summary, pass })
}

fn cmd_phase(path: &Path, common: &Common) -> CmdResult {
    let tol = tolerances(common)?;
    let traj = read_trajectory(path, &tol)?;
    let exec = Exec::default();
    let straj = spectral_trajectory_with(&traj, &tol, exec)?;
    let kt = kraus_trajectory_with(&straj, &tol, exec)?;
    let kraus_reports = verify_kraus_trajectory(&kt, &traj, &tol, exec)?;
    let report = geometric_phase_with(&traj, &tol, exec)?;
    let file = PhaseFile::new(&report, &kraus_reports, &tol);
    write_json(&common.out, &file)?;
    let alphas: Vec<String> = report
        .alpha
        .iter()
        .map(|a| a.map_or_else(|| "undefined".to_string(), |x| format!("{x:.9}")))
        .collect();
    let residual = report.transport_residual_max.iter().copied().fold(0.0, f64::max);
    Ok(Outcome {
        summary: format!(
            "phase: alpha=[{}] aligned={} max_transport_residual={residual:.3e} max_reconstruction_defect={:.3e} tol={:.1e} {}",
            alphas.join(", "),
            report.aligned,
            file.max_reconstruction_defect.0,
            tol.eq_tol,
            verdict(file.pass)
        ),
        pass: file.pass,
    })
}
