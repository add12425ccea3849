//! Direct sparse solver for the symmetric global tangent.
//!
//! The factorization is a fill-reducing (AMD) sparse LDL^T without
//! numerical pivoting: negative pivots are admissible, so the indefinite
//! tangents of the monolithic scheme factor as long as they are regular,
//! while an exactly singular matrix surfaces as an error naming the
//! offending degree of freedom. The symbolic analysis is done once per
//! sparsity pattern and reused across Newton iterations.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::ldlt::factor::{LdltError, LdltRegularization};
use faer::sparse::linalg::cholesky::{
    factorize_symbolic_cholesky, LdltRef, SymbolicCholesky, SymmetricOrdering,
};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{Conj, MatMut, Par, Side};
use thiserror::Error;

/// Failures of the sparse factorization or solve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinSolveError {
    #[error("stiffness matrix is singular at free dof {dof}")]
    Singular { dof: usize },
    #[error("entry ({i}, {j}) outside matrix of dimension {n}")]
    IndexOutOfBounds { i: usize, j: usize, n: usize },
    #[error("sparse factorization ran out of resources")]
    Resource,
}

/// Symmetric sparse matrix stored as the upper triangle in CSC form, with
/// the symbolic LDL^T analysis attached.
pub struct SparseSymmetric {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    symbolic: Option<SymbolicCholesky<usize>>,
}

impl SparseSymmetric {
    /// Builds the pattern from index pairs; order and duplicates are
    /// irrelevant and both triangles fold onto the upper one.
    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, LinSolveError> {
        let mut upper: Vec<(usize, usize)> = Vec::new();
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(LinSolveError::IndexOutOfBounds { i, j, n });
            }
            upper.push((i.max(j), i.min(j)));
        }
        upper.sort_unstable();
        upper.dedup();

        let mut col_ptr = vec![0usize; n + 1];
        let mut row_idx = Vec::with_capacity(upper.len());
        for &(col, row) in &upper {
            col_ptr[col + 1] += 1;
            row_idx.push(row);
        }
        for c in 0..n {
            col_ptr[c + 1] += col_ptr[c];
        }

        let symbolic = if n == 0 {
            None
        } else {
            let pattern = SymbolicSparseColMatRef::new_checked(
                n,
                n,
                &col_ptr,
                None,
                &row_idx,
            );
            Some(
                factorize_symbolic_cholesky(
                    pattern,
                    Side::Upper,
                    SymmetricOrdering::Amd,
                    Default::default(),
                )
                .map_err(|_| LinSolveError::Resource)?,
            )
        };
        Ok(Self { n, col_ptr, row_idx, symbolic })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored (upper-triangle) entries.
    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Value-slot index of entry `(i, j)`; either triangle may be queried.
    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (col, row) = (i.max(j), i.min(j));
        if col >= self.n {
            return None;
        }
        let range = self.col_ptr[col]..self.col_ptr[col + 1];
        self.row_idx[range.clone()]
            .binary_search(&row)
            .ok()
            .map(|k| range.start + k)
    }

    /// Numeric LDL^T factorization of the given values (one per pattern
    /// slot, same order as [`Self::slot`] indices).
    pub fn factor(&self, values: &[f64]) -> Result<Factorization<'_>, LinSolveError> {
        assert_eq!(values.len(), self.nnz(), "value buffer mismatches pattern");
        let Some(symbolic) = &self.symbolic else {
            return Ok(Factorization { matrix: self, l_values: Vec::new() });
        };
        let pattern = SymbolicSparseColMatRef::new_checked(
            self.n,
            self.n,
            &self.col_ptr,
            None,
            &self.row_idx,
        );
        let a = SparseColMatRef::new(pattern, values);
        let mut l_values = vec![0.0f64; symbolic.len_val()];
        let mut buffer = MemBuffer::try_new(
            symbolic
                .factorize_numeric_ldlt_scratch::<f64>(Par::Seq, Default::default()),
        )
        .map_err(|_| LinSolveError::Resource)?;
        symbolic
            .factorize_numeric_ldlt(
                &mut l_values,
                a,
                Side::Upper,
                LdltRegularization::default(),
                Par::Seq,
                MemStack::new(&mut buffer),
                Default::default(),
            )
            .map_err(|LdltError::ZeroPivot { index }| LinSolveError::Singular {
                dof: self.unpermuted_dof(index),
            })?;
        Ok(Factorization { matrix: self, l_values })
    }

    /// Maps a pivot index reported by the factorization (1-based, in the
    /// fill-reducing ordering) back to the caller's dof numbering.
    fn unpermuted_dof(&self, index: usize) -> usize {
        let k = index.saturating_sub(1).min(self.n.saturating_sub(1));
        match self.symbolic.as_ref().and_then(|s| s.perm()) {
            Some(perm) => perm.arrays().0[k],
            None => k,
        }
    }
}

/// Owned numeric factor; solves overwrite the right-hand side.
pub struct Factorization<'a> {
    matrix: &'a SparseSymmetric,
    l_values: Vec<f64>,
}

impl Factorization<'_> {
    pub fn solve_in_place(&self, rhs: &mut [f64]) -> Result<(), LinSolveError> {
        assert_eq!(rhs.len(), self.matrix.n, "rhs length mismatches matrix");
        let Some(symbolic) = &self.matrix.symbolic else {
            return Ok(());
        };
        let ldlt = LdltRef::new(symbolic, &self.l_values);
        let mut buffer = MemBuffer::try_new(
            symbolic.solve_in_place_scratch::<f64>(1, Par::Seq),
        )
        .map_err(|_| LinSolveError::Resource)?;
        let n = self.matrix.n;
        ldlt.solve_in_place_with_conj(
            Conj::No,
            MatMut::from_column_major_slice_mut(rhs, n, 1),
            Par::Seq,
            MemStack::new(&mut buffer),
        );
        if let Some(dof) = rhs.iter().position(|v| !v.is_finite()) {
            return Err(LinSolveError::Singular { dof });
        }
        Ok(())
    }
}

/// One-shot convenience: assembles the triplets (duplicates are summed),
/// factors and solves a single right-hand side.
pub fn linear_solve(
    n: usize,
    triplets: &[(usize, usize, f64)],
    rhs: &[f64],
) -> Result<Vec<f64>, LinSolveError> {
    let matrix =
        SparseSymmetric::from_pairs(n, triplets.iter().map(|&(i, j, _)| (i, j)))?;
    let mut values = vec![0.0f64; matrix.nnz()];
    for &(i, j, v) in triplets {
        // both triangles may be supplied; store each entry once
        if i <= j {
            values[matrix.slot(i, j).expect("pattern covers its triplets")] += v;
        }
    }
    let has_lower = triplets.iter().any(|&(i, j, _)| i > j);
    let has_upper = triplets.iter().any(|&(i, j, _)| i < j);
    if has_lower && !has_upper {
        for &(i, j, v) in triplets {
            if i > j {
                values[matrix.slot(i, j).unwrap()] += v;
            }
        }
    }
    let factor = matrix.factor(&values)?;
    let mut x = rhs.to_vec();
    factor.solve_in_place(&mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_returns_rhs() {
        let triplets: Vec<_> = (0..4).map(|i| (i, i, 1.0)).collect();
        let rhs = vec![3.0, -1.0, 0.5, 2.0];
        let x = linear_solve(4, &triplets, &rhs).unwrap();
        assert_eq!(x, rhs);
    }

    #[test]
    fn small_spd_system() {
        let triplets = vec![(0, 0, 2.0), (0, 1, 1.0), (1, 1, 2.0)];
        let x = linear_solve(2, &triplets, &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn indefinite_diagonal_solves() {
        let triplets = vec![(0, 0, 1.0), (1, 1, -1.0)];
        let x = linear_solve(2, &triplets, &[2.0, 3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14);
        assert!((x[1] + 3.0).abs() < 1e-14);
    }

    #[test]
    fn duplicates_are_summed() {
        let triplets = vec![(0, 0, 1.0), (0, 0, 1.0)];
        let x = linear_solve(1, &triplets, &[4.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_names_the_offending_dof() {
        let triplets = vec![(0, 0, 2.0), (1, 1, 0.0), (2, 2, 3.0)];
        let err = linear_solve(3, &triplets, &[1.0, 1.0, 1.0]).unwrap_err();
        assert_eq!(err, LinSolveError::Singular { dof: 1 });
    }

    #[test]
    fn empty_system_is_trivial() {
        let x = linear_solve(0, &[], &[]).unwrap();
        assert!(x.is_empty());
    }

    #[test]
    fn out_of_bounds_entry_is_rejected() {
        let err = linear_solve(2, &[(0, 5, 1.0)], &[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, LinSolveError::IndexOutOfBounds { .. }));
    }

    #[test]
    fn random_spd_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let m = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a = &m * m.transpose() + DMatrix::<f64>::identity(n, n) * (n as f64);
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let mut triplets = Vec::new();
        for i in 0..n {
            for j in i..n {
                triplets.push((i, j, a[(i, j)]));
            }
        }
        let x = linear_solve(n, &triplets, &rhs).unwrap();

        let oracle = a
            .clone()
            .lu()
            .solve(&nalgebra::DVector::from_column_slice(&rhs))
            .unwrap();
        for i in 0..n {
            assert!(
                (x[i] - oracle[i]).abs() <= 1e-10 * oracle.norm().max(1.0),
                "component {i}: {} vs {}",
                x[i],
                oracle[i]
            );
        }
    }

    #[test]
    fn pattern_slots_cover_both_triangles() {
        let m = SparseSymmetric::from_pairs(3, [(0, 1), (2, 2), (1, 0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.slot(0, 1), m.slot(1, 0));
        assert!(m.slot(0, 2).is_none());
    }
}
