//! Systematic encoding, erasure decoding, and MDS verification, straight
//! from the parity-check form: a codeword is any column family
//! `(f_0, ..., f_{n-1})` with `Σ_i A_{t,i} f_i = 0` for every parity-check
//! group t.
//!
//! Encoding solves the parity-check system for the chosen parity columns;
//! erasure decoding solves it for the erased ones. Both reduce to one
//! `rN x rN` solve instead of touching the full `nN` system.

use crate::comb::combinations;
use crate::gfmatrix::{Mat, MatError};
use crate::lift::ArrayCode;
use crate::rng::SplitMix64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    /// The solved sub-block system was singular, i.e. the instance is not
    /// MDS on these positions. Signals a broken construction upstream.
    #[error("singular sub-block system on columns {0:?}")]
    SingularSystem(Vec<usize>),
    #[error("{erased} erasures exceed the correction radius r = {r}")]
    TooManyErasures { erased: usize, r: usize },
    #[error("exhaustive verification out of range: {0}")]
    TooLarge(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// An N x n array codeword, stored as n columns of N symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    q: u64,
    columns: Vec<Vec<u64>>,
}

impl Codeword {
    pub fn new(q: u64, columns: Vec<Vec<u64>>) -> Self {
        Codeword { q, columns }
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn column(&self, i: usize) -> &[u64] {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[Vec<u64>] {
        &self.columns
    }
}

fn check_column(code: &ArrayCode, col: &[u64], what: &str) -> Result<(), CodecError> {
    if col.len() != code.sub() {
        return Err(CodecError::ShapeMismatch(format!(
            "{what} has {} symbols, expected N = {}",
            col.len(),
            code.sub()
        )));
    }
    if col.iter().any(|&v| v >= code.field().q()) {
        return Err(CodecError::ShapeMismatch(format!(
            "{what} contains values outside GF({})",
            code.field().q()
        )));
    }
    Ok(())
}

/// Assemble the rN x rN sub-block matrix on the given block columns.
fn stacked_system(code: &ArrayCode, cols: &[usize]) -> Mat {
    let n = code.sub();
    let q = code.field().q();
    let mut m = Mat::zeros(code.r() * n, cols.len() * n, q);
    for t in 0..code.r() {
        for (ci, &i) in cols.iter().enumerate() {
            let b = code.parity_block(t, i);
            for a in 0..n {
                for c in 0..n {
                    let v = b.get(a, c);
                    if v != 0 {
                        m.set(t * n + a, ci * n + c, v);
                    }
                }
            }
        }
    }
    m
}

/// Right-hand side `-Σ_{i not in cols} A_{t,i} f_i` stacked over t.
fn stacked_rhs(code: &ArrayCode, known: &[(usize, &[u64])]) -> Vec<u64> {
    let n = code.sub();
    let q = code.field().q();
    let mut rhs = vec![0u64; code.r() * n];
    for t in 0..code.r() {
        for &(i, col) in known {
            let prod = code.parity_block(t, i).matvec(col);
            for a in 0..n {
                let cur = rhs[t * n + a];
                rhs[t * n + a] = (cur + q - prod[a] % q) % q;
            }
        }
    }
    rhs
}

/// Reusable encoder for a fixed set of parity positions: one inversion, then
/// a matrix-vector product per stripe.
#[derive(Debug)]
pub struct PreparedEncoder {
    parity: Vec<usize>,
    inv: Mat,
}

impl PreparedEncoder {
    pub fn new(code: &ArrayCode, parity_positions: &[usize]) -> Result<Self, CodecError> {
        let mut parity = parity_positions.to_vec();
        parity.sort_unstable();
        parity.dedup();
        if parity.len() != code.r() || parity.iter().any(|&p| p >= code.n()) {
            return Err(CodecError::ShapeMismatch(format!(
                "parity positions must be {} distinct nodes in [0, {})",
                code.r(),
                code.n()
            )));
        }
        let inv = stacked_system(code, &parity)
            .inverse()
            .map_err(|_| CodecError::SingularSystem(parity.clone()))?;
        Ok(PreparedEncoder { parity, inv })
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity
    }

    /// `data` supplies the non-parity columns in ascending node order.
    pub fn encode(&self, code: &ArrayCode, data: &[Vec<u64>]) -> Result<Codeword, CodecError> {
        if data.len() != code.k() {
            return Err(CodecError::ShapeMismatch(format!(
                "expected k = {} data columns, got {}",
                code.k(),
                data.len()
            )));
        }
        let mut columns = vec![Vec::new(); code.n()];
        let mut di = 0;
        for i in 0..code.n() {
            if self.parity.binary_search(&i).is_err() {
                check_column(code, &data[di], "data column")?;
                columns[i] = data[di].clone();
                di += 1;
            }
        }
        let known: Vec<(usize, &[u64])> = columns
            .iter()
            .enumerate()
            .filter(|(i, _)| self.parity.binary_search(i).is_err())
            .map(|(i, c)| (i, c.as_slice()))
            .collect();
        let rhs = stacked_rhs(code, &known);
        let sol = self.inv.matvec(&rhs);
        let n = code.sub();
        for (ci, &p) in self.parity.iter().enumerate() {
            columns[p] = sol[ci * n..(ci + 1) * n].to_vec();
        }
        Ok(Codeword::new(code.field().q(), columns))
    }
}

/// Encode with an explicit parity set.
pub fn encode(
    code: &ArrayCode,
    data: &[Vec<u64>],
    parity_positions: &[usize],
) -> Result<Codeword, CodecError> {
    PreparedEncoder::new(code, parity_positions)?.encode(code, data)
}

/// Systematic convention: data on nodes [0, k), parity on [k, n).
pub fn encode_systematic(code: &ArrayCode, data: &[Vec<u64>]) -> Result<Codeword, CodecError> {
    let parity: Vec<usize> = (code.k()..code.n()).collect();
    encode(code, data, &parity)
}

/// Exact parity residual: true iff every parity-check group sums to zero.
pub fn is_codeword(code: &ArrayCode, cw: &Codeword) -> bool {
    if cw.n() != code.n() || cw.columns().iter().any(|c| c.len() != code.sub()) {
        return false;
    }
    let q = code.field().q();
    for t in 0..code.r() {
        let mut acc = vec![0u64; code.sub()];
        for i in 0..code.n() {
            let prod = code.parity_block(t, i).matvec(cw.column(i));
            for (a, p) in prod.into_iter().enumerate() {
                acc[a] = (acc[a] + p) % q;
            }
        }
        if acc.iter().any(|&v| v != 0) {
            return false;
        }
    }
    true
}

/// Recover the unique codeword agreeing with the intact columns. At most r
/// columns may be erased (`None`).
pub fn decode_erasures(
    code: &ArrayCode,
    partial: &[Option<Vec<u64>>],
) -> Result<Codeword, CodecError> {
    if partial.len() != code.n() {
        return Err(CodecError::ShapeMismatch(format!(
            "expected {} columns, got {}",
            code.n(),
            partial.len()
        )));
    }
    let erased: Vec<usize> = (0..code.n()).filter(|&i| partial[i].is_none()).collect();
    if erased.len() > code.r() {
        return Err(CodecError::TooManyErasures {
            erased: erased.len(),
            r: code.r(),
        });
    }
    for (i, col) in partial.iter().enumerate() {
        if let Some(c) = col {
            check_column(code, c, &format!("column {i}"))?;
        }
    }
    if erased.is_empty() {
        let columns = partial.iter().map(|c| c.clone().unwrap()).collect();
        return Ok(Codeword::new(code.field().q(), columns));
    }
    // Extend to exactly r unknown columns so the sub-block system is square;
    // by the MDS property the unique solution restores the originals.
    let mut unknown = erased.clone();
    for i in 0..code.n() {
        if unknown.len() == code.r() {
            break;
        }
        if partial[i].is_some() && !unknown.contains(&i) {
            unknown.push(i);
        }
    }
    unknown.sort_unstable();
    let sys = stacked_system(code, &unknown);
    let known: Vec<(usize, &[u64])> = partial
        .iter()
        .enumerate()
        .filter(|(i, _)| !unknown.contains(i))
        .map(|(i, c)| (i, c.as_ref().expect("not unknown").as_slice()))
        .collect();
    let rhs = stacked_rhs(code, &known);
    let sol = sys.solve(&rhs).map_err(|e| match e {
        MatError::Singular { .. } => CodecError::SingularSystem(unknown.clone()),
        other => CodecError::ShapeMismatch(other.to_string()),
    })?;
    let n = code.sub();
    let mut columns: Vec<Vec<u64>> = partial
        .iter()
        .map(|c| c.clone().unwrap_or_default())
        .collect();
    for (ci, &i) in unknown.iter().enumerate() {
        columns[i] = sol[ci * n..(ci + 1) * n].to_vec();
    }
    Ok(Codeword::new(code.field().q(), columns))
}

/// A deterministic random codeword for verification suites.
pub fn random_codeword(code: &ArrayCode, seed: u64) -> Codeword {
    let mut rng = SplitMix64::new(seed);
    let q = code.field().q();
    let data: Vec<Vec<u64>> = (0..code.k())
        .map(|_| (0..code.sub()).map(|_| rng.below(q)).collect())
        .collect();
    encode_systematic(code, &data).expect("builders produce MDS instances")
}

/// Exhaustive MDS verification by both routes.
#[derive(Debug, Clone)]
pub struct MdsReport {
    /// Number of r-subsets of block columns examined.
    pub patterns: usize,
    /// Patterns whose sub-block matrix was singular.
    pub determinant_failures: Vec<Vec<usize>>,
    /// Patterns whose erasure decode did not restore the codeword.
    pub decode_failures: Vec<Vec<usize>>,
}

impl MdsReport {
    pub fn is_mds(&self) -> bool {
        self.determinant_failures.is_empty() && self.decode_failures.is_empty()
    }

    /// The two routes must agree pattern-for-pattern.
    pub fn modes_agree(&self) -> bool {
        self.determinant_failures == self.decode_failures
    }
}

/// Check every r x r sub-block matrix for nonsingularity and, in parallel,
/// decode every r-erasure pattern of a seeded random codeword. Guard rails:
/// n <= 16 and N <= 64.
pub fn verify_mds_report(code: &ArrayCode, seed: u64) -> Result<MdsReport, CodecError> {
    if code.n() > 16 || code.sub() > 64 {
        return Err(CodecError::TooLarge(format!(
            "exhaustive MDS verification supports n <= 16 and N <= 64, got n = {}, N = {}",
            code.n(),
            code.sub()
        )));
    }
    let reference = random_codeword(code, seed);
    let mut determinant_failures = Vec::new();
    let mut decode_failures = Vec::new();
    let patterns = combinations(code.n(), code.r());
    for pattern in &patterns {
        if !stacked_system(code, pattern).is_nonsingular() {
            determinant_failures.push(pattern.clone());
        }
        let partial: Vec<Option<Vec<u64>>> = (0..code.n())
            .map(|i| {
                if pattern.contains(&i) {
                    None
                } else {
                    Some(reference.column(i).to_vec())
                }
            })
            .collect();
        match decode_erasures(code, &partial) {
            Ok(cw) if cw == reference => {}
            _ => decode_failures.push(pattern.clone()),
        }
    }
    Ok(MdsReport {
        patterns: patterns.len(),
        determinant_failures,
        decode_failures,
    })
}

/// True iff the code is MDS (exhaustive, both routes agreeing).
pub fn verify_mds(code: &ArrayCode) -> Result<bool, CodecError> {
    let report = verify_mds_report(code, 0)?;
    Ok(report.is_mds() && report.modes_agree())
}

/// Optimal update: every parity-check block is diagonal, so one changed data
/// symbol touches the minimum number of parity symbols.
pub fn verify_optimal_update(code: &ArrayCode) -> bool {
    (0..code.r()).all(|t| (0..code.n()).all(|i| code.parity_block(t, i).is_diagonal()))
}
