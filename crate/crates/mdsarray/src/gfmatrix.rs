//! Exact dense linear algebra over GF(q): products, rank, solving, inversion
//! by Gaussian elimination, block-matrix assembly, and the two structural
//! nonsingularity predicates (block Vandermonde families and upper-triangular
//! block families) used as verification oracles.
//!
//! Pivoting is deterministic (first nonzero in column order); exact field
//! arithmetic needs no numeric pivot strategy.

use crate::gf::FieldSpec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("singular system: rank {rank} < dimension {dim}")]
    Singular { rank: usize, dim: usize },
    #[error("inconsistent system: no solution exists")]
    Inconsistent,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("blocks {i} and {j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("block ({t},{i}) is not upper triangular")]
    NotUpperTriangular { t: usize, i: usize },
}

/// Dense row-major matrix over GF(q). Entries are kept reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    q: u64,
    data: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, q: u64) -> Self {
        Mat {
            rows,
            cols,
            q,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, q: u64) -> Self {
        let mut m = Self::zeros(n, n, q);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from a function of (row, col); values are reduced mod q.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        q: u64,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % q);
            }
        }
        Mat {
            rows,
            cols,
            q,
            data,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, q: u64) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let data = rows.into_iter().flatten().map(|v| v % q).collect();
        Mat {
            rows: nrows,
            cols: ncols,
            q,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn field(&self) -> FieldSpec {
        FieldSpec::new(self.q).expect("matrix modulus is a valid prime")
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.q, other.q, "field mismatch");
        let q = self.q;
        let mut out = Mat::zeros(self.rows, other.cols, q);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.get(r, c) + a * other.get(k, c)) % q;
                    out.data[r * out.cols + c] = v;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matvec");
        let q = self.q;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &x)| (acc + a * x) % q)
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.q, other.q);
        let f = self.field();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat { data, ..*self }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.q, other.q);
        let f = self.field();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Mat { data, ..*self }
    }

    pub fn scale(&self, s: u64) -> Mat {
        let s = s % self.q;
        let data = self.data.iter().map(|&a| a * s % self.q).collect();
        Mat { data, ..*self }
    }

    /// Matrix power by repeated multiplication.
    pub fn pow(&self, e: usize) -> Mat {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Mat::identity(self.rows, self.q);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows, self.q);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c) == 0))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Row echelon form in place; returns the rank. `aug` marks how many
    /// trailing columns are an augmented right-hand side and therefore not
    /// eligible as pivots.
    fn echelon(&mut self, aug: usize) -> usize {
        let f = self.field();
        let pivot_cols = self.cols - aug;
        let mut rank = 0;
        for col in 0..pivot_cols {
            let Some(piv) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != rank {
                for c in 0..self.cols {
                    self.data.swap(rank * self.cols + c, piv * self.cols + c);
                }
            }
            let inv = f.inv(self.get(rank, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(rank, c) * inv % self.q;
                self.data[rank * self.cols + c] = v;
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), factor * self.get(rank, c) % self.q);
                    self.data[r * self.cols + c] = v;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Row rank over GF(q).
    pub fn rank(&self) -> usize {
        self.clone().echelon(0)
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Unique solution of `self * x = b` for square nonsingular systems.
    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>, MatError> {
        if !self.is_square() {
            return Err(MatError::ShapeMismatch(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if b.len() != self.rows {
            return Err(MatError::ShapeMismatch(format!(
                "rhs length {} does not match dimension {}",
                b.len(),
                self.rows
            )));
        }
        let rhs = Mat::from_fn(b.len(), 1, self.q, |r, _| b[r]);
        Ok(self.solve_columns(&rhs)?.data)
    }

    /// Solve `self * X = rhs` column-wise for systems with full column rank;
    /// the system may be tall as long as it is consistent.
    pub fn solve_columns(&self, rhs: &Mat) -> Result<Mat, MatError> {
        if rhs.rows != self.rows {
            return Err(MatError::ShapeMismatch(format!(
                "rhs has {} rows, matrix has {}",
                rhs.rows, self.rows
            )));
        }
        assert_eq!(self.q, rhs.q, "field mismatch");
        let mut work = Mat::zeros(self.rows, self.cols + rhs.cols, self.q);
        for r in 0..self.rows {
            work.data[r * work.cols..r * work.cols + self.cols].copy_from_slice(self.row(r));
            work.data[r * work.cols + self.cols..(r + 1) * work.cols].copy_from_slice(rhs.row(r));
        }
        let rank = work.echelon(rhs.cols);
        if rank < self.cols {
            return Err(MatError::Singular {
                rank,
                dim: self.cols,
            });
        }
        // Rows below the rank must have a zero right-hand side.
        for r in rank..self.rows {
            if work.row(r)[self.cols..].iter().any(|&v| v != 0) {
                return Err(MatError::Inconsistent);
            }
        }
        // With full column rank and reduced echelon form, pivot row i holds
        // the solution row for variable i.
        let mut out = Mat::zeros(self.cols, rhs.cols, self.q);
        for r in 0..rank {
            let col = (0..self.cols)
                .find(|&c| work.get(r, c) != 0)
                .expect("pivot row has a pivot");
            for c in 0..rhs.cols {
                out.data[col * rhs.cols + c] = work.get(r, self.cols + c);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Mat, MatError> {
        if !self.is_square() {
            return Err(MatError::ShapeMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        self.solve_columns(&Mat::identity(self.rows, self.q))
    }
}

/// An r x n grid of square blocks of equal order, the shape of every
/// parity-check matrix here.
#[derive(Debug, Clone)]
pub struct BlockMat {
    block_rows: usize,
    block_cols: usize,
    block_size: usize,
    blocks: Vec<Mat>,
}

impl BlockMat {
    pub fn new(grid: Vec<Vec<Mat>>) -> Self {
        let block_rows = grid.len();
        assert!(block_rows > 0, "empty block grid");
        let block_cols = grid[0].len();
        let block_size = grid[0][0].nrows();
        let q = grid[0][0].q();
        for row in &grid {
            assert_eq!(row.len(), block_cols, "ragged block grid");
            for b in row {
                assert!(
                    b.is_square() && b.nrows() == block_size,
                    "block size mismatch"
                );
                assert_eq!(b.q(), q, "field mismatch");
            }
        }
        BlockMat {
            block_rows,
            block_cols,
            block_size,
            blocks: grid.into_iter().flatten().collect(),
        }
    }

    pub fn block(&self, t: usize, i: usize) -> &Mat {
        &self.blocks[t * self.block_cols + i]
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Dense assembly of the whole grid.
    pub fn assemble(&self) -> Mat {
        self.assemble_cols(&(0..self.block_cols).collect::<Vec<_>>())
    }

    /// Dense assembly of the sub-grid restricted to the given block columns.
    pub fn assemble_cols(&self, cols: &[usize]) -> Mat {
        let n = self.block_size;
        let q = self.blocks[0].q();
        let mut out = Mat::zeros(self.block_rows * n, cols.len() * n, q);
        for t in 0..self.block_rows {
            for (ci, &i) in cols.iter().enumerate() {
                let b = self.block(t, i);
                for r in 0..n {
                    for c in 0..n {
                        out.set(t * n + r, ci * n + c, b.get(r, c));
                    }
                }
            }
        }
        out
    }
}

/// Block Vandermonde criterion: for pairwise commuting square blocks
/// `B_0..B_{v-1}`, the stacked Vandermonde block matrix is nonsingular iff
/// `B_i - B_j` is nonsingular for every i != j. Returns that condition;
/// errors if some pair fails to commute.
pub fn is_block_vandermonde_nonsingular(blocks: &[Mat]) -> Result<bool, MatError> {
    let n = blocks
        .first()
        .map(|b| b.nrows())
        .ok_or_else(|| MatError::ShapeMismatch("empty block list".into()))?;
    for (i, b) in blocks.iter().enumerate() {
        if !b.is_square() || b.nrows() != n {
            return Err(MatError::ShapeMismatch(format!(
                "block {i} has wrong shape"
            )));
        }
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if blocks[i].mul(&blocks[j]) != blocks[j].mul(&blocks[i]) {
                return Err(MatError::NonCommuting { i, j });
            }
        }
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if !blocks[i].sub(&blocks[j]).is_nonsingular() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Upper-triangular block family criterion: with every block upper
/// triangular, the assembled r x r block matrix is nonsingular if
/// i) `B_{t,i}[a,a] = (B_{1,i}[a,a])^t` and ii) the `B_{1,i}[a,a]` are
/// distinct across block columns for every diagonal position a. Returns
/// whether the conditions hold; errors when a block is not upper triangular.
///
/// For r = 1 the criterion degenerates to a nonzero diagonal.
pub fn is_upper_triangular_family_nonsingular(grid: &[Vec<Mat>]) -> Result<bool, MatError> {
    let r = grid.len();
    assert!(
        r > 0 && grid.iter().all(|row| row.len() == r),
        "grid must be r x r"
    );
    let n = grid[0][0].nrows();
    let q = grid[0][0].q();
    let f = FieldSpec::new(q).expect("valid modulus");
    for (t, row) in grid.iter().enumerate() {
        for (i, b) in row.iter().enumerate() {
            for a in 0..n {
                for c in 0..a {
                    if b.get(a, c) != 0 {
                        return Err(MatError::NotUpperTriangular { t, i });
                    }
                }
            }
        }
    }
    if r == 1 {
        return Ok((0..n).all(|a| grid[0][0].get(a, a) != 0));
    }
    for i in 0..r {
        for a in 0..n {
            let base = grid[1][i].get(a, a);
            for (t, row) in grid.iter().enumerate() {
                if row[i].get(a, a) != f.pow(f.felt(base), t as i64).unwrap().value() {
                    return Ok(false);
                }
            }
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            for a in 0..n {
                if grid[1][i].get(a, a) == grid[1][j].get(a, a) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
