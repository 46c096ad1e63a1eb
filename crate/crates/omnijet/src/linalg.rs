//! Small dense numeric linear algebra with explicit pivot tolerances.
//!
//! Everything here works on matrices of at most a couple dozen entries per
//! side (frames of `DL ⊕ J¹L` at a single point), so plain Gaussian
//! elimination with partial pivoting is the whole story. Rank decisions are
//! per-point and controlled by the caller's tolerance; nothing is ever
//! interpolated across points.

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            a: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Row echelon form in place; returns the pivot column of each pivot row.
    fn echelon(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // partial pivoting: largest magnitude entry in this column
            let (best, best_val) = (row..self.rows)
                .map(|r| (r, self[(r, col)].abs()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            if best_val <= tol {
                continue;
            }
            self.swap_rows(row, best);
            let p = self[(row, col)];
            for r in (row + 1)..self.rows {
                let factor = self[(r, col)] / p;
                if factor != 0.0 {
                    for c in col..self.cols {
                        let v = self[(row, c)];
                        self[(r, c)] -= factor * v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            let t = self[(i, c)];
            self[(i, c)] = self[(j, c)];
            self[(j, c)] = t;
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        let mut work = self.clone();
        work.echelon(tol).len()
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<f64>> {
        let mut work = self.clone();
        let pivots = work.echelon(tol);
        // Back-substitute to reduced form.
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let p = work[(r, pc)];
            for c in 0..self.cols {
                work[(r, c)] /= p;
            }
            for up in 0..r {
                let f = work[(up, pc)];
                if f != 0.0 {
                    for c in 0..self.cols {
                        let v = work[(r, c)];
                        work[(up, c)] -= f * v;
                    }
                }
            }
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0.0; self.cols];
            v[fc] = 1.0;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[(r, fc)];
            }
            basis.push(v);
        }
        basis
    }

    /// Least-structure solve of `A x = b`: returns one solution if the system
    /// is consistent at tolerance `tol`.
    pub fn solve(&self, b: &[f64], tol: f64) -> Option<Vec<f64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.echelon(tol);
        if pivots.contains(&self.cols) {
            return None; // inconsistent: pivot in the augmented column
        }
        let mut x = vec![0.0; self.cols];
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = aug[(r, self.cols)];
            for c in (pc + 1)..self.cols {
                s -= aug[(r, c)] * x[c];
            }
            x[pc] = s / aug[(r, pc)];
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.a[i * self.cols + j]
    }
}

/// Rank of the span of a list of vectors.
pub fn span_rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_rows(vectors).rank(tol)
}

/// Do two vector lists span the same subspace?
pub fn span_equal(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    let ra = span_rank(a, tol);
    let rb = span_rank(b, tol);
    if ra != rb {
        return false;
    }
    let mut all: Vec<Vec<f64>> = a.to_vec();
    all.extend_from_slice(b);
    span_rank(&all, tol) == ra
}

/// Is `v` in the span of `basis`?
pub fn in_span(basis: &[Vec<f64>], v: &[f64], tol: f64) -> bool {
    let r = span_rank(basis, tol);
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_rank(&all, tol) == r
}

/// Reduces `vectors` to an independent subset (first-come order).
pub fn independent_subset(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut picked: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if !in_span(&picked, v, tol) {
            picked.push(v.clone());
        }
    }
    picked
}
