use super::matrix::{inner, norm, ComplexMatrix, Tolerances, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Extends orthonormal columns to a D×D unitary.
///
/// The given columns are copied verbatim into the leading positions. The
/// rest come from classical Gram–Schmidt (two passes) over the standard basis
/// vectors e_0, e_1, ... in index order; a candidate whose residual norm is
/// below `rank_tol` is skipped.
pub fn complete_to_unitary(columns: &[Vec<C64>], dim: usize, tol: &Tolerances) -> Result<ComplexMatrix> {
    if columns.len() > dim || columns.iter().any(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "{} columns cannot be completed in dimension {dim}",
            columns.len()
        )));
    }
    let defect = gram_defect(columns);
    if defect > tol.eq_tol {
        return Err(Error::NotOrthonormal { defect });
    }

    let mut basis: Vec<Vec<C64>> = columns.to_vec();
    for e in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut r = vec![ZERO; dim];
        r[e] = ONE;
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let rn = norm(&r);
        if rn < tol.rank_tol {
            continue;
        }
        r.iter_mut().for_each(|z| *z /= rn);
        basis.push(r);
    }
    if basis.len() < dim {
        return Err(Error::CompletionFailure {
            found: basis.len(),
            needed: dim,
        });
    }
    ComplexMatrix::from_columns(&basis)
}

/// ‖G − I‖_F for the Gram matrix G of the given vectors.
pub fn gram_defect(columns: &[Vec<C64>]) -> f64 {
    let mut s = 0.0;
    for (a, ca) in columns.iter().enumerate() {
        for (b, cb) in columns.iter().enumerate() {
            let g = inner(ca, cb);
            let target = if a == b { ONE } else { ZERO };
            s += (g - target).norm_sqr();
        }
    }
    s.sqrt()
}
