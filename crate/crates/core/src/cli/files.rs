//! On-disk JSON formats.
//!
//! Complex entries are `[re, im]` pairs. Every real is written with 17
//! significant digits so a write/read cycle is bit-exact; non-finite values
//! (only defects can be infinite) are written as the strings `"inf"`,
//! `"-inf"` and `"nan"`.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::CliError;
use crate::density::{validate_density, DensityMatrix};
use crate::dilation::{DilationReport, HamiltonianSample};
use crate::error::Error;
use crate::kraus::{KrausReport, KrausSet};
use crate::linalg::{ComplexMatrix, Tolerances, C64};
use crate::phase::PhaseReport;
use crate::trajectory::{DensityTrajectory, KrausTrajectory};

/// A real number serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            let raw = RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RealVisitor;

        impl Visitor<'_> for RealVisitor {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                match v {
                    "inf" => Ok(Real(f64::INFINITY)),
                    "-inf" => Ok(Real(f64::NEG_INFINITY)),
                    "nan" => Ok(Real(f64::NAN)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        d.deserialize_any(RealVisitor)
    }
}

fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

fn unreal(xs: &[Real]) -> Vec<f64> {
    xs.iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[Real; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let matrix = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| [Real(m[(r, c)].re), Real(m[(r, c)].im)]).collect())
            .collect();
        MatrixFile { dim: m.rows(), matrix }
    }

    /// Square `dim`×`dim` matrix; ragged or mismatched nesting is rejected.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, Error> {
        let n = self.dim;
        if self.matrix.len() != n {
            return Err(Error::DimensionMismatch(format!("dim is {n} but the matrix has {} rows", self.matrix.len())));
        }
        if let Some((r, row)) = self.matrix.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("row {r} has {} entries, expected {n}", row.len())));
        }
        let data = self.matrix.iter().flatten().map(|[re, im]| C64::new(re.0, im.0)).collect();
        ComplexMatrix::from_row_major(n, n, data)
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix, Error> {
        validate_density(&self.to_matrix()?, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFile {
    pub times: Vec<Real>,
    pub states: Vec<MatrixFile>,
}

impl TrajectoryFile {
    pub fn from_trajectory(traj: &DensityTrajectory) -> Self {
        TrajectoryFile {
            times: reals(traj.times()),
            states: traj.states().iter().map(|s| MatrixFile::from_matrix(s.matrix())).collect(),
        }
    }

    pub fn to_trajectory(&self, tol: &Tolerances) -> Result<DensityTrajectory, Error> {
        let states = self
            .states
            .iter()
            .map(|s| s.to_density(tol))
            .collect::<Result<Vec<_>, _>>()?;
        DensityTrajectory::new(unreal(&self.times), states)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrausReportFile {
    pub completeness_defect: Real,
    pub reconstruction_defect: Real,
    pub tolerance: Real,
    pub pass: bool,
}

impl From<&KrausReport> for KrausReportFile {
    fn from(r: &KrausReport) -> Self {
        KrausReportFile {
            completeness_defect: Real(r.completeness_defect),
            reconstruction_defect: Real(r.reconstruction_defect),
            tolerance: Real(r.tolerance),
            pass: r.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausSetFile {
    pub label: String,
    pub operators: Vec<MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<KrausReportFile>,
}

impl KrausSetFile {
    pub fn from_set(ks: &KrausSet, report: Option<&KrausReport>) -> Self {
        KrausSetFile {
            label: ks.label().to_string(),
            operators: ks.ops().iter().map(MatrixFile::from_matrix).collect(),
            report: report.map(KrausReportFile::from),
        }
    }

    pub fn to_set(&self) -> Result<KrausSet, Error> {
        let ops = self
            .operators
            .iter()
            .map(MatrixFile::to_matrix)
            .collect::<Result<Vec<_>, _>>()?;
        KrausSet::new(ops, self.label.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausTrajectoryFile {
    pub times: Vec<Real>,
    pub sets: Vec<KrausSetFile>,
    pub tolerance: Real,
    pub pass: bool,
}

impl KrausTrajectoryFile {
    pub fn from_trajectory(kt: &KrausTrajectory, reports: &[KrausReport], tol: &Tolerances) -> Self {
        KrausTrajectoryFile {
            times: reals(kt.times()),
            sets: kt
                .sets()
                .iter()
                .zip(reports)
                .map(|(ks, r)| KrausSetFile::from_set(ks, Some(r)))
                .collect(),
            tolerance: Real(tol.eq_tol),
            pass: reports.iter().all(|r| r.pass),
        }
    }

    pub fn to_trajectory(&self) -> Result<KrausTrajectory, Error> {
        let sets = self.sets.iter().map(KrausSetFile::to_set).collect::<Result<Vec<_>, _>>()?;
        KrausTrajectory::new(unreal(&self.times), sets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilationReportFile {
    pub unitarity_defect: Real,
    pub recovery_defect: Real,
    pub constrained_gram_defect: Real,
    pub tolerance: Real,
    pub pass: bool,
}

impl DilationReportFile {
    pub fn new(r: &DilationReport, gram: f64) -> Self {
        DilationReportFile {
            unitarity_defect: Real(r.unitarity_defect),
            recovery_defect: Real(r.recovery_defect),
            constrained_gram_defect: Real(gram),
            tolerance: Real(r.tolerance),
            pass: r.pass && gram <= r.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationSampleFile {
    pub time: Real,
    pub unitary: MatrixFile,
    pub report: DilationReportFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub time: Real,
    pub hamiltonian: MatrixFile,
    pub hermitization_defect: Real,
}

impl From<&HamiltonianSample> for HamiltonianFile {
    fn from(h: &HamiltonianSample) -> Self {
        HamiltonianFile {
            time: Real(h.time),
            hamiltonian: MatrixFile::from_matrix(&h.hamiltonian),
            hermitization_defect: Real(h.hermitization_defect),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationFile {
    pub basis: String,
    pub note: String,
    pub system_dim: usize,
    pub ancilla_dim: usize,
    /// Eigenframe U(0) of the initial state.
    pub frame: MatrixFile,
    pub samples: Vec<DilationSampleFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonians: Option<Vec<HamiltonianFile>>,
    pub tolerance: Real,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFile {
    /// α_μ in (−π, π]; null where the phase is undefined.
    pub alpha: Vec<Option<Real>>,
    pub trace_magnitude: Vec<Real>,
    pub transport_residual_max: Vec<Real>,
    pub undefined: Vec<usize>,
    pub aligned: bool,
    pub max_completeness_defect: Real,
    pub max_reconstruction_defect: Real,
    pub tolerance: Real,
    pub pass: bool,
}

impl PhaseFile {
    pub fn new(report: &PhaseReport, kraus: &[KrausReport], tol: &Tolerances) -> Self {
        let max = |f: fn(&KrausReport) -> f64| kraus.iter().map(f).fold(0.0, f64::max);
        PhaseFile {
            alpha: report.alpha.iter().map(|a| a.map(Real)).collect(),
            trace_magnitude: reals(&report.trace_magnitude),
            transport_residual_max: reals(&report.transport_residual_max),
            undefined: report.undefined(),
            aligned: report.aligned,
            max_completeness_defect: Real(max(|r| r.completeness_defect)),
            max_reconstruction_defect: Real(max(|r| r.reconstruction_defect)),
            tolerance: Real(tol.eq_tol),
            pass: kraus.iter().all(|r| r.pass),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value)).map_err(|e| CliError::io(path, e))
}
