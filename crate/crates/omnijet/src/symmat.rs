//! Symbolic matrices over scalar expressions, with oracle-guided pivoting.
//!
//! Gauss-Jordan elimination where "is this entry zero" is settled by the
//! sampling oracle rather than by canonical forms. Pivots prefer nonzero
//! constants, then any entry that is nonzero at some sample point; division
//! nodes produced here may still be singular at isolated points, which
//! evaluation reports honestly downstream.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::oracle::{EqVerdict, Oracle};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SymMat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Scalar>,
}

impl SymMat {
    pub fn zeros(rows: usize, cols: usize) -> SymMat {
        SymMat {
            rows,
            cols,
            a: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> SymMat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = SymMat::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn identity(n: usize) -> SymMat {
        let mut m = SymMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: &Scalar) {
        for c in 0..self.cols {
            self[(i, c)] = self[(i, c)].mul(f);
        }
    }

    fn add_scaled_row(&mut self, dst: usize, src: usize, f: &Scalar) {
        for c in 0..self.cols {
            let add = self[(src, c)].mul(f);
            self[(dst, c)] = self[(dst, c)].add(&add);
        }
    }

    pub fn transpose(&self) -> SymMat {
        let mut t = SymMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl std::ops::Index<(usize, usize)> for SymMat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SymMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.a[i * self.cols + j]
    }
}

fn oracle_nonzero(chart: &Chart, o: &Oracle, f: &Scalar) -> Result<bool> {
    // An entry is usable as a pivot when it is not oracle-zero. Evaluation
    // failures (a division node singular at a sample point) disqualify it.
    match o.scalars_equal(chart, f, &Scalar::zero()) {
        Ok(EqVerdict::Equal) => Ok(false),
        Ok(EqVerdict::Unequal(_)) => Ok(true),
        Err(_) => Ok(false),
    }
}

/// Reduced row echelon form together with the transform matrix `T` such
/// that `T * m` is the reduced matrix, and the pivot column of each pivot
/// row. Pivot entries are chosen freely among the remaining columns:
/// nonzero constants anywhere beat expression pivots, which keeps the
/// produced quotients away from avoidable singular loci.
pub fn rref(m: &SymMat, chart: &Chart, o: &Oracle) -> Result<(SymMat, SymMat, Vec<usize>)> {
    let mut work = m.clone();
    let mut t = SymMat::identity(m.rows);
    let mut pivots: Vec<usize> = Vec::new();
    let mut used = vec![false; m.cols];
    let mut row = 0;
    while row < m.rows {
        let mut choice = None;
        'consts: for col in 0..m.cols {
            if used[col] {
                continue;
            }
            for r in row..m.rows {
                if work[(r, col)].is_nonzero_const() {
                    choice = Some((r, col));
                    break 'consts;
                }
            }
        }
        if choice.is_none() {
            'exprs: for col in 0..m.cols {
                if used[col] {
                    continue;
                }
                for r in row..m.rows {
                    if oracle_nonzero(chart, o, &work[(r, col)])? {
                        choice = Some((r, col));
                        break 'exprs;
                    }
                }
            }
        }
        let Some((pr, pc)) = choice else {
            break;
        };
        work.swap_rows(row, pr);
        t.swap_rows(row, pr);
        let inv = Scalar::one().div(&work[(row, pc)]);
        work.scale_row(row, &inv);
        t.scale_row(row, &inv);
        for r in 0..m.rows {
            if r != row && !work[(r, pc)].is_zero_const() {
                let f = work[(r, pc)].neg();
                work.add_scaled_row(r, row, &f);
                t.add_scaled_row(r, row, &f);
            }
        }
        // the pivot column is now exactly a unit vector; pin it structurally
        for r in 0..m.rows {
            work[(r, pc)] = if r == row { Scalar::one() } else { Scalar::zero() };
        }
        used[pc] = true;
        pivots.push(pc);
        row += 1;
    }
    Ok((work, t, pivots))
}

/// Symbolic inverse of a square matrix whose rank is full under the oracle.
pub fn invert(m: &SymMat, chart: &Chart, o: &Oracle) -> Result<SymMat> {
    if m.rows != m.cols {
        return Err(Error::Elimination(format!(
            "cannot invert a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let (_rref_m, t, pivots) = rref(m, chart, o)?;
    if pivots.len() != m.rows {
        return Err(Error::Elimination(format!(
            "matrix is singular under the oracle: rank {} of {}",
            pivots.len(),
            m.rows
        )));
    }
    // T * m is a row permutation of the identity; undo it
    let mut inv = SymMat::zeros(m.rows, m.cols);
    for (r, &pc) in pivots.iter().enumerate() {
        for c in 0..m.cols {
            inv[(pc, c)] = t[(r, c)].clone();
        }
    }
    Ok(inv)
}

/// Basis of the right kernel `{v : M v = 0}` over the scalar field.
pub fn nullspace(m: &SymMat, chart: &Chart, o: &Oracle) -> Result<Vec<Vec<Scalar>>> {
    let (r, _, pivots) = rref(m, chart, o)?;
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Scalar::zero(); m.cols];
        v[fc] = Scalar::one();
        for (prow, &pc) in pivots.iter().enumerate() {
            v[pc] = r[(prow, fc)].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Left-kernel basis: combinations `c` with `c^T M = 0`.
pub fn left_nullspace(m: &SymMat, chart: &Chart, o: &Oracle) -> Result<Vec<Vec<Scalar>>> {
    nullspace(&m.transpose(), chart, o)
}
