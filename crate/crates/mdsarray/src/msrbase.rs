//! The three base MSR codes with repair degree `d̄ = k̄ + w - 1 < n̄ - 1`:
//!
//! * `C0`: the array code over `N = w^m` with `n̄ = 2m` nodes (diagonal
//!   blocks on the second half, near-diagonal on the first),
//! * `YB1`: diagonal parity blocks `Ā_{t,i} = diag(λ_{i,a_i})^t` over
//!   `N = w^n̄`,
//! * `YB2`: generalized-permutation blocks shifting digit i by t (mod w),
//!   also over `N = w^n̄`.
//!
//! Each code carries its parity-check blocks `Ā_{t,i}`, a repair matrix
//! `R̄_{i,j}` and select matrix `S̄_{i,t}` per node, and the coefficient
//! table λ. Blocks are materialized lazily per (t, i) and cached; concurrent
//! readers observe identical blocks.

use crate::digits::{digit_add, Digits, Selector, SelectorSum};
use crate::gf::{find_field, FieldSpec, GfError};
use crate::gfmatrix::Mat;
use std::sync::OnceLock;
use thiserror::Error;

/// Desk-scale guard: dense N x N blocks above this size are not useful here.
pub const MAX_SUBPACKETIZATION: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("field too small: need q > {bound}, got q = {q}")]
    FieldTooSmall { q: u64, bound: u64 },
    #[error("duplicate lambda: value {value} appears at ({i0},{u0}) and ({i1},{u1})")]
    DuplicateLambda {
        value: u64,
        i0: usize,
        u0: usize,
        i1: usize,
        u1: usize,
    },
    #[error("zero lift coefficient at (t={t}, i={i})")]
    ZeroCoefficient { t: usize, i: usize },
    #[error("lift table shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("construction conditions violated: {0}")]
    ConditionViolated(String),
    #[error("no sufficient-condition set for family {0}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    C0,
    Yb1,
    Yb2,
}

/// A repair or select matrix. Everything the constructions use is either the
/// identity (compulsory helpers after lifting) or a 0/1 matrix whose rows are
/// disjoint sums of basis vectors, so a support list per row is the whole
/// representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepairMat {
    Identity(usize),
    Rows { rows: Vec<Vec<usize>>, width: usize },
}

impl RepairMat {
    pub fn from_selector(sel: &Selector) -> Self {
        RepairMat::Rows {
            rows: sel.rows().iter().map(|&b| vec![b]).collect(),
            width: sel.width(),
        }
    }

    pub fn from_selector_sum(sum: &SelectorSum) -> Self {
        RepairMat::Rows {
            rows: sum.rows().to_vec(),
            width: sum.width(),
        }
    }

    pub fn nrows(&self) -> usize {
        match self {
            RepairMat::Identity(n) => *n,
            RepairMat::Rows { rows, .. } => rows.len(),
        }
    }

    pub fn width(&self) -> usize {
        match self {
            RepairMat::Identity(n) => *n,
            RepairMat::Rows { width, .. } => *width,
        }
    }

    /// Full row rank by construction (disjoint supports), so rank = rows.
    pub fn rank(&self) -> usize {
        self.nrows()
    }

    /// Number of nonzero columns: the symbols a helper must read to serve
    /// this matrix.
    pub fn nonzero_cols(&self) -> usize {
        match self {
            RepairMat::Identity(n) => *n,
            RepairMat::Rows { rows, width } => {
                let mut seen = vec![false; *width];
                for row in rows {
                    for &c in row {
                        seen[c] = true;
                    }
                }
                seen.iter().filter(|&&s| s).count()
            }
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, f: &[u64], q: u64) -> Vec<u64> {
        assert_eq!(f.len(), self.width(), "column length mismatch");
        match self {
            RepairMat::Identity(_) => f.to_vec(),
            RepairMat::Rows { rows, .. } => rows
                .iter()
                .map(|row| row.iter().fold(0u64, |acc, &c| (acc + f[c]) % q))
                .collect(),
        }
    }

    /// Left-multiply a dense matrix: `self * m`, without densifying self.
    pub fn premul(&self, m: &Mat) -> Mat {
        assert_eq!(self.width(), m.nrows(), "dimension mismatch");
        match self {
            RepairMat::Identity(_) => m.clone(),
            RepairMat::Rows { rows, .. } => {
                let q = m.q();
                Mat::from_fn(rows.len(), m.ncols(), q, |r, c| {
                    rows[r].iter().fold(0u64, |acc, &k| (acc + m.get(k, c)) % q)
                })
            }
        }
    }

    pub fn to_mat(&self, q: u64) -> Mat {
        match self {
            RepairMat::Identity(n) => Mat::identity(*n, q),
            RepairMat::Rows { rows, width } => {
                let mut m = Mat::zeros(rows.len(), *width, q);
                for (r, row) in rows.iter().enumerate() {
                    for &c in row {
                        m.set(r, c, (m.get(r, c) + 1) % q);
                    }
                }
                m
            }
        }
    }
}

/// An (n̄, k̄) base MSR code in parity-check block form.
#[derive(Debug)]
pub struct MsrCode {
    kind: BaseKind,
    field: FieldSpec,
    nbar: usize,
    kbar: usize,
    r: usize,
    w: usize,
    dbar: usize,
    sub: usize,
    digits: Digits,
    /// λ_{i,u} for i in [0, n̄), u in [0, w). YB2 stores its c^{i+1}/1 table
    /// in the same shape.
    lambda: Vec<Vec<u64>>,
    blocks: Vec<OnceLock<Mat>>,
}

impl MsrCode {
    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nbar(&self) -> usize {
        self.nbar
    }

    pub fn kbar(&self) -> usize {
        self.kbar
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn dbar(&self) -> usize {
        self.dbar
    }

    /// Sub-packetization level N.
    pub fn sub(&self) -> usize {
        self.sub
    }

    pub fn digits(&self) -> Digits {
        self.digits
    }

    pub fn lambda(&self) -> &[Vec<u64>] {
        &self.lambda
    }

    /// Digit position that node i's repair schema selects on.
    pub fn select_position(&self, i: usize) -> usize {
        assert!(i < self.nbar);
        i % self.digits.m()
    }

    /// Parity-check block Ā_{t,i}.
    pub fn parity_block(&self, t: usize, i: usize) -> &Mat {
        assert!(t < self.r && i < self.nbar, "block index out of range");
        self.blocks[t * self.nbar + i].get_or_init(|| self.build_block(t, i))
    }

    fn build_block(&self, t: usize, i: usize) -> Mat {
        let n = self.sub;
        let q = self.field.q();
        let f = &self.field;
        let d = &self.digits;
        let pw = |v: u64, e: usize| f.pow(f.felt(v), e as i64).expect("nonneg exponent").value();
        match self.kind {
            BaseKind::C0 => {
                let m = d.m();
                let mut b = Mat::zeros(n, n, q);
                if i < m {
                    for a in 0..n {
                        let ai = d.digit(a, i);
                        b.set(a, a, pw(self.lambda[i][ai], t));
                        if ai == 0 {
                            for u in 1..self.w {
                                let v = f.sub(pw(self.lambda[i][0], t), pw(self.lambda[i][u], t));
                                b.set(a, d.replace(a, i, u), v);
                            }
                        }
                    }
                } else {
                    for a in 0..n {
                        let ai = d.digit(a, i - m);
                        b.set(a, a, pw(self.lambda[i][ai], t));
                    }
                }
                b
            }
            BaseKind::Yb1 => Mat::from_fn(n, n, q, |a, c| {
                if a == c {
                    pw(self.lambda[i][d.digit(a, i)], t)
                } else {
                    0
                }
            }),
            BaseKind::Yb2 => {
                // Ā_i^t has a single entry per row a, at column a(i, a_i + t),
                // equal to the cumulative product λ_{i,a_i} ... λ_{i,a_i+t-1}.
                let mut b = Mat::zeros(n, n, q);
                for a in 0..n {
                    let ai = d.digit(a, i);
                    let mut coeff = 1u64;
                    for l in 0..t {
                        coeff = f.mul(coeff, self.lambda[i][digit_add(ai, l % self.w, self.w)]);
                    }
                    b.set(a, d.replace(a, i, digit_add(ai, t % self.w, self.w)), coeff);
                }
                b
            }
        }
    }

    /// R̄_{i,j}: what helper j sends when repairing node i (independent of j
    /// for these codes).
    pub fn repair_matrix(&self, i: usize, j: usize) -> RepairMat {
        assert!(i < self.nbar && j < self.nbar && j != i);
        self.schema(i)
    }

    /// S̄_{i,t}: compression of parity-check group t used to repair node i
    /// (independent of t for these codes).
    pub fn select_matrix(&self, i: usize, _t: usize) -> RepairMat {
        assert!(i < self.nbar);
        self.schema(i)
    }

    fn schema(&self, i: usize) -> RepairMat {
        let pos = self.select_position(i);
        match self.kind {
            BaseKind::C0 => {
                if i < self.digits.m() {
                    RepairMat::from_selector(&self.digits.selector(pos, 0))
                } else {
                    RepairMat::from_selector_sum(&self.digits.selector_sum(pos))
                }
            }
            BaseKind::Yb1 => RepairMat::from_selector_sum(&self.digits.selector_sum(pos)),
            BaseKind::Yb2 => RepairMat::from_selector(&self.digits.selector(pos, 0)),
        }
    }
}

fn check_common(w: usize, r: usize, sub: usize) -> Result<(), BuildError> {
    if w < 2 || w >= r {
        return Err(BuildError::InvalidParams(format!(
            "need 2 <= w < r, got w = {w}, r = {r}"
        )));
    }
    if sub > MAX_SUBPACKETIZATION {
        return Err(BuildError::InvalidParams(format!(
            "sub-packetization {sub} exceeds the supported maximum {MAX_SUBPACKETIZATION}"
        )));
    }
    Ok(())
}

fn checked_pow(w: usize, m: usize) -> Result<usize, BuildError> {
    let mut n = 1usize;
    for _ in 0..m {
        n = n
            .checked_mul(w)
            .filter(|&v| v <= MAX_SUBPACKETIZATION)
            .ok_or_else(|| {
                BuildError::InvalidParams(format!(
                    "sub-packetization {w}^{m} exceeds the supported maximum {MAX_SUBPACKETIZATION}"
                ))
            })?;
    }
    Ok(n)
}

fn assert_distinct_lambda(lambda: &[Vec<u64>]) -> Result<(), BuildError> {
    for (i0, row0) in lambda.iter().enumerate() {
        for (u0, &v0) in row0.iter().enumerate() {
            if v0 == 0 {
                return Err(BuildError::InvalidParams(format!(
                    "lambda[{i0}][{u0}] is zero"
                )));
            }
            for (i1, row1) in lambda.iter().enumerate() {
                for (u1, &v1) in row1.iter().enumerate() {
                    if (i1, u1) > (i0, u0) && v0 == v1 {
                        return Err(BuildError::DuplicateLambda {
                            value: v0,
                            i0,
                            u0,
                            i1,
                            u1,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// C0: `(n̄ = 2m, k̄ = n̄ - r)` over `N = w^m`, with the two-case λ
/// assignment. The default field is the smallest prime above `m(w+2)` for
/// w = 2 and `m(w+1)` otherwise.
pub fn build_c0(
    m: usize,
    w: usize,
    r: usize,
    field: Option<FieldSpec>,
) -> Result<MsrCode, BuildError> {
    if m < 1 || r > 2 * m - 1 {
        return Err(BuildError::InvalidParams(format!(
            "need 1 <= r <= 2m-1 for a positive dimension, got m = {m}, r = {r}"
        )));
    }
    let sub = checked_pow(w, m)?;
    check_common(w, r, sub)?;
    let bound = if w == 2 { m * (w + 2) } else { m * (w + 1) } as u64;
    let field = match field {
        Some(f) => {
            if f.q() <= bound {
                return Err(BuildError::FieldTooSmall { q: f.q(), bound });
            }
            f
        }
        None => find_field(bound, None)?,
    };
    let nbar = 2 * m;
    // Two-case assignment: exponents stay inside [0, q-1) by the bound above.
    let mut lambda = vec![vec![0u64; w]; nbar];
    for i in 0..m {
        for u in 0..w {
            if w == 2 {
                lambda[i][u] = field.cpow((i * (w + 2) + u) as i64);
                lambda[i + m][u] = field.cpow((i * (w + 2) + w + u) as i64);
            } else {
                lambda[i][u] = field.cpow((i * (w + 1) + u) as i64);
                lambda[i + m][u] = if u == 0 {
                    field.cpow((i * (w + 1) + w) as i64)
                } else {
                    field.cpow((i * (w + 1) + (u % (w - 1)) + 1) as i64)
                };
            }
        }
    }
    Ok(MsrCode {
        kind: BaseKind::C0,
        field,
        nbar,
        kbar: nbar - r,
        r,
        w,
        dbar: nbar - r + w - 1,
        sub,
        digits: Digits::new(w, m),
        lambda,
        blocks: (0..r * nbar).map(|_| OnceLock::new()).collect(),
    })
}

/// YB code 1 with the default coefficient table `λ_{i,u} = c^{iw+u}`
/// (distinct whenever q > wn̄).
pub fn build_yb1(
    nbar: usize,
    w: usize,
    r: usize,
    field: Option<FieldSpec>,
) -> Result<MsrCode, BuildError> {
    if r >= nbar {
        return Err(BuildError::InvalidParams(format!(
            "need r < nbar, got r = {r}, nbar = {nbar}"
        )));
    }
    check_common(w, r, checked_pow(w, nbar)?)?;
    let field = match field {
        Some(f) => f,
        None => find_field((w * nbar) as u64, None)?,
    };
    let lambda = (0..nbar)
        .map(|i| (0..w).map(|u| field.cpow((i * w + u) as i64)).collect())
        .collect();
    build_yb1_with_lambda(nbar, w, r, field, lambda)
}

/// YB code 1 with a caller-supplied λ table; the wn̄ values must be nonzero
/// and pairwise distinct. The lifted `C2` family injects its `c^ī δ^u`
/// structure through this entry point.
pub fn build_yb1_with_lambda(
    nbar: usize,
    w: usize,
    r: usize,
    field: FieldSpec,
    lambda: Vec<Vec<u64>>,
) -> Result<MsrCode, BuildError> {
    if r >= nbar {
        return Err(BuildError::InvalidParams(format!(
            "need r < nbar, got r = {r}, nbar = {nbar}"
        )));
    }
    let sub = checked_pow(w, nbar)?;
    check_common(w, r, sub)?;
    if lambda.len() != nbar || lambda.iter().any(|row| row.len() != w) {
        return Err(BuildError::ShapeMismatch(format!(
            "lambda table must be {nbar} x {w}"
        )));
    }
    assert_distinct_lambda(&lambda)?;
    Ok(MsrCode {
        kind: BaseKind::Yb1,
        field,
        nbar,
        kbar: nbar - r,
        r,
        w,
        dbar: nbar - r + w - 1,
        sub,
        digits: Digits::new(w, nbar),
        lambda,
        blocks: (0..r * nbar).map(|_| OnceLock::new()).collect(),
    })
}

/// YB code 2: `λ_{i,0} = c^{i+1}` and `λ_{i,u} = 1` for u > 0, over any
/// prime field with q > n̄.
pub fn build_yb2(
    nbar: usize,
    w: usize,
    r: usize,
    field: Option<FieldSpec>,
) -> Result<MsrCode, BuildError> {
    if r >= nbar {
        return Err(BuildError::InvalidParams(format!(
            "need r < nbar, got r = {r}, nbar = {nbar}"
        )));
    }
    let sub = checked_pow(w, nbar)?;
    check_common(w, r, sub)?;
    let field = match field {
        Some(f) => {
            if f.q() <= nbar as u64 {
                return Err(BuildError::FieldTooSmall {
                    q: f.q(),
                    bound: nbar as u64,
                });
            }
            f
        }
        None => find_field(nbar as u64, None)?,
    };
    let lambda = (0..nbar)
        .map(|i| {
            (0..w)
                .map(|u| {
                    if u == 0 {
                        field.cpow((i + 1) as i64)
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect();
    Ok(MsrCode {
        kind: BaseKind::Yb2,
        field,
        nbar,
        kbar: nbar - r,
        r,
        w,
        dbar: nbar - r + w - 1,
        sub,
        digits: Digits::new(w, nbar),
        lambda,
        blocks: (0..r * nbar).map(|_| OnceLock::new()).collect(),
    })
}
