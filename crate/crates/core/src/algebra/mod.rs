//! Exact integer linear algebra and finitely generated abelian groups.

mod group;
mod matrix;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

pub use group::{generated_subgroup, iso_check, kernel_of, FinAbelianGroup, GroupElement, GroupHom};
pub use matrix::IntMatrix;
pub use snf::{snf, snf_triple, SnfParts};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("matrix {rows}x{cols} needs {} entries, got {found}", rows * cols)]
    EntryCount { rows: usize, cols: usize, found: usize },
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("boundary composition is nonzero in column {column}")]
    NonzeroComposition { column: usize },
    #[error("invalid invariant factors: {0}")]
    InvalidFactors(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
}

/// `Z^cols / rowspace(rel)` in invariant-factor form. Factors equal to 1 are
/// dropped; `free_rank = cols − rank(rel)`.
pub fn quotient_group(rel: &IntMatrix) -> FinAbelianGroup {
    group::cokernel(rel).group
}

/// `ker(d_n) / im(d_np1)` for integer boundary matrices acting on columns.
pub fn homology(d_n: &IntMatrix, d_np1: &IntMatrix) -> Result<FinAbelianGroup, AlgebraError> {
    let composite = d_n.try_mul(d_np1)?;
    if let Some(column) = (0..composite.cols()).find(|&c| (0..composite.rows()).any(|r| !composite.get(r, c).is_zero())) {
        return Err(AlgebraError::NonzeroComposition { column });
    }
    let kernel_rank = d_n.cols() - d_n.rank();
    let parts = snf(d_np1);
    let diag = parts.diagonal();
    let image_rank = parts.rank();
    let mut torsion = Vec::new();
    for d in diag.iter().filter(|d| !d.is_zero()) {
        if *d > BigInt::from(1) {
            torsion.push(u64::try_from(d).expect("torsion coefficient exceeds u64"));
        }
    }
    FinAbelianGroup::new(torsion, kernel_rank - image_rank)
}

/// Solves `a·x = b` over the integers; `None` when `b ∉ im(a)`.
pub fn image_solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, AlgebraError> {
    if b.len() != a.rows() {
        return Err(AlgebraError::DimensionMismatch { left: (a.rows(), a.cols()), right: (b.len(), 1) });
    }
    let parts = snf(a);
    let ub = parts.u.apply(b)?;
    let rank = parts.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < rank {
            let d = parts.d.get(i, i);
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(parts.v.apply(&y)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_group(&IntMatrix::from_rows(&[vec![2]])), FinAbelianGroup::cyclic(2));
        assert_eq!(quotient_group(&IntMatrix::diagonal(&[2, 3])), FinAbelianGroup::cyclic(6));
        let free = quotient_group(&IntMatrix::zeros(0, 2));
        assert_eq!((free.free_rank(), free.invariant_factors().len()), (2, 0));
    }

    // Edges 01, 02, 12 with boundary (head - tail).
    fn triangle_d1() -> IntMatrix {
        IntMatrix::from_rows(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]])
    }

    #[test]
    fn triangle_homology() {
        let hollow = homology(&triangle_d1(), &IntMatrix::zeros(3, 0)).unwrap();
        assert_eq!(hollow, FinAbelianGroup::new(vec![], 1).unwrap());
        // the 2-cell 012 has boundary 12 - 02 + 01
        let d2 = IntMatrix::from_rows(&[vec![1], vec![-1], vec![1]]);
        assert!(homology(&triangle_d1(), &d2).unwrap().is_trivial());
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(homology(&z, &z).unwrap().free_rank(), 1);
    }

    #[test]
    fn homology_rejects_nonzero_composition() {
        let d2 = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1], vec![1, 0]]);
        assert!(matches!(homology(&triangle_d1(), &d2), Err(AlgebraError::NonzeroComposition { column: 0 })));
    }

    #[test]
    fn torsion_from_projective_plane_like_boundary() {
        // Z --2--> Z --0--> : H_1 = Z/2
        let d1 = IntMatrix::zeros(0, 1);
        let d2 = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(homology(&d1, &d2).unwrap(), FinAbelianGroup::cyclic(2));
    }

    #[test]
    fn image_solve_examples() {
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(image_solve(&two, &col(&[4])).unwrap(), Some(col(&[2])));
        assert_eq!(image_solve(&two, &col(&[3])).unwrap(), None);
        let d = IntMatrix::diagonal(&[2, 3]);
        assert_eq!(image_solve(&d, &col(&[2, 3])).unwrap(), Some(col(&[1, 1])));
        assert!(image_solve(&d, &col(&[1])).is_err());
    }
}
