//! The (d, d_c)-repair engine.
//!
//! Repairing node i solves the compressed parity-check system: each group t
//! is multiplied by the select matrix `S_{i,t}` (N/w rows), giving `rN/w`
//! equations in the unknowns `f_i` (N symbols) and `R_{i,l} f_l` for each
//! avoided node l ((r-w)·N/w symbols), a square system. Interference from
//! a connected helper j enters the right-hand side: compulsory helpers are
//! downloaded in full, ordinary helpers contribute through the factor
//! matrices `B_{t,j,i}` with `B_{t,j,i} R_{i,j} = S_{i,t} A_{t,j}`, which
//! exist exactly because rank([R; SA]) = rank(R).
//!
//! The engine is family-agnostic: it always solves the assembled square
//! system by elimination. The bespoke per-family eliminations (triangular
//! solve, per-digit Vandermonde with annihilators, scalar A^w elimination)
//! survive as independent cross-checks in the test suites.

use crate::codec::{is_codeword, random_codeword, Codeword};
use crate::comb::subsets_of;
use crate::digits::Digits;
use crate::gf::FieldSpec;
use crate::gfmatrix::Mat;
use crate::lift::{repair_ratio, ArrayCode, Family};
use crate::msrbase::RepairMat;
use crate::ratio::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepairError {
    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("invalid avoid set: {0}")]
    InvalidAvoidSet(String),
    #[error("node {j} is congruent to the failed node; it is downloaded in full, no factor matrix exists")]
    CongruentHelper { j: usize },
    #[error("no factorization B·R = S·A at (t = {t}, j = {j}): requirement R2 is violated")]
    NoFactorization { t: usize, j: usize },
    #[error("repair system is singular: requirement R3 fails for this (code, plan)")]
    SingularSystem,
    #[error("codeword violates the parity checks; refusing to repair from corrupt data")]
    CorruptCodeword,
    #[error("annihilator rank check failed at digit vector {digit}")]
    RankDeficient { digit: usize },
    #[error("operation does not apply to family {0}")]
    UnknownFamily(String),
}

/// Helper selection for one node repair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairPlan {
    pub failed: usize,
    /// All d helpers, ascending.
    pub helpers: Vec<usize>,
    /// The r - w avoided (unconnected) nodes, ascending.
    pub avoided: Vec<usize>,
    /// Helpers congruent to the failed node (always included, downloaded in
    /// full), ascending.
    pub compulsory: Vec<usize>,
}

/// Choose helpers for repairing `failed`. The avoid set must contain exactly
/// `r - w` nodes, none congruent to the failed node mod n̄; by default the
/// lowest-index admissible nodes are avoided.
pub fn plan_repair(
    code: &ArrayCode,
    failed: usize,
    avoid: Option<&[usize]>,
) -> Result<RepairPlan, RepairError> {
    let n = code.n();
    if failed >= n {
        return Err(RepairError::NodeOutOfRange { node: failed, n });
    }
    let nbar = code.nbar();
    let want = code.r() - code.w();
    let pool: Vec<usize> = (0..n).filter(|&j| j % nbar != failed % nbar).collect();
    let avoided: Vec<usize> = match avoid {
        None => pool.iter().take(want).copied().collect(),
        Some(req) => {
            let mut set = req.to_vec();
            set.sort_unstable();
            set.dedup();
            if set.len() != req.len() {
                return Err(RepairError::InvalidAvoidSet("duplicate entries".into()));
            }
            if set.len() != want {
                return Err(RepairError::InvalidAvoidSet(format!(
                    "need exactly r - w = {want} nodes, got {}",
                    set.len()
                )));
            }
            for &j in &set {
                if j >= n {
                    return Err(RepairError::InvalidAvoidSet(format!(
                        "node {j} out of range (n = {n})"
                    )));
                }
                if j % nbar == failed % nbar {
                    return Err(RepairError::InvalidAvoidSet(format!(
                        "node {j} is congruent to the failed node {failed} mod {nbar} (compulsory or the failure itself)"
                    )));
                }
            }
            set
        }
    };
    let helpers: Vec<usize> = (0..n)
        .filter(|&j| j != failed && !avoided.contains(&j))
        .collect();
    debug_assert_eq!(helpers.len(), code.d());
    Ok(RepairPlan {
        failed,
        helpers,
        compulsory: code.compulsory_helpers(failed),
        avoided,
    })
}

/// The factor matrix `B_{t,j,i}` with `B · R_{i,j} = S_{i,t} A_{t,j}`,
/// computed by solving against the full-row-rank repair matrix and verified
/// to have an exactly zero residual.
pub fn factor_interference(
    code: &ArrayCode,
    plan: &RepairPlan,
    j: usize,
    t: usize,
) -> Result<Mat, RepairError> {
    let i = plan.failed;
    if j >= code.n() {
        return Err(RepairError::NodeOutOfRange {
            node: j,
            n: code.n(),
        });
    }
    if j % code.nbar() == i % code.nbar() {
        return Err(RepairError::CongruentHelper { j });
    }
    let q = code.field().q();
    let target = code.select_matrix(i, t).premul(code.parity_block(t, j));
    let r_mat = code.repair_matrix(i, j).to_mat(q);
    // B R = M  <=>  R^T B^T = M^T; R^T has full column rank N/w.
    let bt = r_mat
        .transpose()
        .solve_columns(&target.transpose())
        .map_err(|_| RepairError::NoFactorization { t, j })?;
    let b = bt.transpose();
    if b.mul(&r_mat) != target {
        return Err(RepairError::NoFactorization { t, j });
    }
    Ok(b)
}

/// Everything about one (code, plan) pair that does not depend on the
/// stripe data: the inverted system and the per-helper interference maps.
/// Prepare once, then regenerate any number of stripes.
#[derive(Debug)]
pub struct RepairSolver {
    plan: RepairPlan,
    sub: usize,
    delta: usize,
    r: usize,
    q: u64,
    sys_inv: Mat,
    /// (node, S_{i,t} A_{t,j} for each t) per compulsory helper.
    compulsory: Vec<(usize, Vec<Mat>)>,
    /// (node, R_{i,j}, B_{t,j,i} for each t) per ordinary helper.
    ordinary: Vec<(usize, RepairMat, Vec<Mat>)>,
}

/// Assemble and invert the repair system for a plan.
pub fn prepare(code: &ArrayCode, plan: &RepairPlan) -> Result<RepairSolver, RepairError> {
    let i = plan.failed;
    let n_sub = code.sub();
    let delta = n_sub / code.w();
    let r = code.r();
    let q = code.field().q();

    // Unknowns: f_i (N columns), then R_{i,l} f_l per avoided node.
    let unknown_cols = n_sub + plan.avoided.len() * delta;
    let rows = r * delta;
    assert_eq!(rows, unknown_cols, "select rows must match unknown count");

    let mut sys = Mat::zeros(rows, unknown_cols, q);
    for t in 0..r {
        let useful = code.select_matrix(i, t).premul(code.parity_block(t, i));
        for a in 0..delta {
            for c in 0..n_sub {
                let v = useful.get(a, c);
                if v != 0 {
                    sys.set(t * delta + a, c, v);
                }
            }
        }
        for (li, &l) in plan.avoided.iter().enumerate() {
            let b = factor_interference(code, plan, l, t)?;
            for a in 0..delta {
                for c in 0..delta {
                    let v = b.get(a, c);
                    if v != 0 {
                        sys.set(t * delta + a, n_sub + li * delta + c, v);
                    }
                }
            }
        }
    }
    let sys_inv = sys.inverse().map_err(|_| RepairError::SingularSystem)?;

    let mut compulsory = Vec::new();
    let mut ordinary = Vec::new();
    for &j in &plan.helpers {
        if plan.compulsory.contains(&j) {
            let prods = (0..r)
                .map(|t| code.select_matrix(i, t).premul(code.parity_block(t, j)))
                .collect();
            compulsory.push((j, prods));
        } else {
            let factors = (0..r)
                .map(|t| factor_interference(code, plan, j, t))
                .collect::<Result<Vec<_>, _>>()?;
            ordinary.push((j, code.repair_matrix(i, j), factors));
        }
    }
    Ok(RepairSolver {
        plan: plan.clone(),
        sub: n_sub,
        delta,
        r,
        q,
        sys_inv,
        compulsory,
        ordinary,
    })
}

impl RepairSolver {
    pub fn plan(&self) -> &RepairPlan {
        &self.plan
    }

    /// Regenerate the failed column from helper columns. `fetch` is called
    /// once per helper and never for the failed or avoided nodes; the
    /// returned report meters exactly what was downloaded and accessed.
    pub fn regenerate(
        &self,
        mut fetch: impl FnMut(usize) -> Vec<u64>,
    ) -> Result<(Vec<u64>, RepairReport), RepairError> {
        let q = self.q;
        let mut rhs = vec![0u64; self.r * self.delta];
        let mut downloaded = 0u64;
        let mut accessed = 0u64;
        let mut per_helper = Vec::with_capacity(self.plan.helpers.len());

        for (j, prods) in &self.compulsory {
            let fj = fetch(*j);
            assert_eq!(fj.len(), self.sub, "helper column has wrong length");
            downloaded += self.sub as u64;
            accessed += self.sub as u64;
            per_helper.push(HelperIo {
                node: *j,
                downloaded: self.sub as u64,
                accessed: self.sub as u64,
            });
            for t in 0..self.r {
                let contrib = prods[t].matvec(&fj);
                for a in 0..self.delta {
                    let cell = &mut rhs[t * self.delta + a];
                    *cell = (*cell + q - contrib[a]) % q;
                }
            }
        }
        for (j, rmat, factors) in &self.ordinary {
            let dj = rmat.apply(&fetch(*j), q);
            downloaded += dj.len() as u64;
            let touched = rmat.nonzero_cols() as u64;
            accessed += touched;
            per_helper.push(HelperIo {
                node: *j,
                downloaded: dj.len() as u64,
                accessed: touched,
            });
            for t in 0..self.r {
                let contrib = factors[t].matvec(&dj);
                for a in 0..self.delta {
                    let cell = &mut rhs[t * self.delta + a];
                    *cell = (*cell + q - contrib[a]) % q;
                }
            }
        }

        let solution = self.sys_inv.matvec(&rhs);
        let column = solution[..self.sub].to_vec();
        per_helper.sort_by_key(|h| h.node);

        let gamma_optimal = (self.plan.helpers.len() * self.delta) as u64;
        let report = RepairReport {
            failed: self.plan.failed,
            helpers: self.plan.helpers.clone(),
            avoided: self.plan.avoided.clone(),
            downloaded_symbols: downloaded,
            accessed_columns: accessed,
            gamma_optimal,
            ratio: Ratio::new(downloaded, gamma_optimal),
            per_helper,
        };
        Ok((column, report))
    }
}

/// Per-helper transfer accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HelperIo {
    pub node: usize,
    pub downloaded: u64,
    pub accessed: u64,
}

/// Metered outcome of one node repair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairReport {
    pub failed: usize,
    pub helpers: Vec<usize>,
    pub avoided: Vec<usize>,
    /// γ_i: symbols transferred, summed over helpers.
    pub downloaded_symbols: u64,
    /// Symbols read at helpers (nonzero columns of the repair matrices).
    pub accessed_columns: u64,
    /// Cut-set bound γ_optimal = dN/(d-k+1).
    pub gamma_optimal: u64,
    /// downloaded / γ_optimal, exact.
    pub ratio: Ratio,
    pub per_helper: Vec<HelperIo>,
}

impl Serialize for RepairReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("RepairReport", 8)?;
        s.serialize_field("failed", &self.failed)?;
        s.serialize_field("helpers", &self.helpers)?;
        s.serialize_field("avoided", &self.avoided)?;
        s.serialize_field("downloaded_symbols", &self.downloaded_symbols)?;
        s.serialize_field("accessed_columns", &self.accessed_columns)?;
        s.serialize_field("gamma_optimal", &self.gamma_optimal)?;
        s.serialize_field("ratio_num", &self.ratio.num)?;
        s.serialize_field("ratio_den", &self.ratio.den)?;
        s.end()
    }
}

/// Repair one column of a complete codeword (simulation entry point). The
/// codeword is validated against the parity checks first; the regenerated
/// column is returned for the caller to compare or store.
pub fn execute_repair(
    code: &ArrayCode,
    cw: &Codeword,
    plan: &RepairPlan,
) -> Result<(Vec<u64>, RepairReport), RepairError> {
    if !is_codeword(code, cw) {
        return Err(RepairError::CorruptCodeword);
    }
    let solver = prepare(code, plan)?;
    solver.regenerate(|j| cw.column(j).to_vec())
}

/// Outcome of the exhaustive repair sweep.
#[derive(Debug, Clone, Serialize)]
pub struct RepairAllReport {
    pub cases: usize,
    pub passes: usize,
    pub failures: Vec<RepairFailure>,
    pub gamma: u64,
    pub gamma_optimal: u64,
    pub ratio: Ratio,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepairFailure {
    pub failed: usize,
    pub avoided: Vec<usize>,
    pub reason: String,
}

impl RepairAllReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.passes == self.cases
    }
}

/// For every failed node and every admissible avoid set, regenerate from a
/// seeded random codeword and demand the exact original column and the exact
/// bandwidth formula.
pub fn verify_repair_all(code: &ArrayCode, seed: u64) -> RepairAllReport {
    let cw = random_codeword(code, seed);
    let want_avoid = code.r() - code.w();
    let bw = code.bandwidth();
    let mut cases = 0;
    let mut passes = 0;
    let mut failures = Vec::new();
    for failed in 0..code.n() {
        let pool: Vec<usize> = (0..code.n())
            .filter(|&j| j % code.nbar() != failed % code.nbar())
            .collect();
        for avoid in subsets_of(&pool, want_avoid) {
            cases += 1;
            let outcome = plan_repair(code, failed, Some(&avoid))
                .and_then(|plan| execute_repair(code, &cw, &plan));
            match outcome {
                Ok((column, report)) => {
                    if column != cw.column(failed) {
                        failures.push(RepairFailure {
                            failed,
                            avoided: avoid.clone(),
                            reason: "regenerated column differs from the original".into(),
                        });
                    } else if report.downloaded_symbols != bw.gamma
                        || report.gamma_optimal != bw.gamma_optimal
                        || report.ratio != repair_ratio(code.d(), code.k(), code.dc())
                    {
                        failures.push(RepairFailure {
                            failed,
                            avoided: avoid.clone(),
                            reason: format!(
                                "bandwidth mismatch: downloaded {} of expected {}",
                                report.downloaded_symbols, bw.gamma
                            ),
                        });
                    } else {
                        passes += 1;
                    }
                }
                Err(e) => failures.push(RepairFailure {
                    failed,
                    avoided: avoid.clone(),
                    reason: e.to_string(),
                }),
            }
        }
    }
    RepairAllReport {
        cases,
        passes,
        failures,
        gamma: bw.gamma,
        gamma_optimal: bw.gamma_optimal,
        ratio: bw.ratio,
    }
}

/// μ aggregates: entry b is the sum of the column over the w indices that
/// agree with `g_{i,0}(b)` outside digit position i, which is exactly the data
/// carried by `(V_{i,0} + ... + V_{i,w-1}) f`.
pub fn aggregate_projection(code: &ArrayCode, column: &[u64], i: usize) -> Vec<u64> {
    let digits = code.digits();
    assert!(i < digits.m(), "digit position out of range");
    assert_eq!(column.len(), code.sub(), "column length mismatch");
    let q = code.field().q();
    mu_values(column, i, digits, q)
}

pub(crate) fn mu_values(column: &[u64], i: usize, digits: Digits, q: u64) -> Vec<u64> {
    (0..digits.size() / digits.w())
        .map(|b| (0..digits.w()).fold(0u64, |acc, u| (acc + column[digits.insert(b, i, u)]) % q))
        .collect()
}

/// Outcome of the annihilator-polynomial check on a diagonal family.
#[derive(Debug, Clone, Serialize)]
pub struct AnnihilatorReport {
    pub failed: usize,
    pub digit_vectors: usize,
    pub pass: bool,
    pub witness: Option<String>,
}

/// For the C2 family: build `p_0(x) = Π_u (x - ξ_{failed,u})` and the
/// (r-w) x r coefficient matrix P of `p_i = x^i p_0`, then verify for every
/// digit vector a that P annihilates the failed node's Vandermonde columns
/// and that rank(P·M) = r - w on the helper Vandermonde M. A test oracle
/// for the generic solver, not the production path.
pub fn annihilator_check(
    code: &ArrayCode,
    failed: usize,
) -> Result<AnnihilatorReport, RepairError> {
    if !matches!(code.family(), Family::C2 | Family::C2Prime) {
        return Err(RepairError::UnknownFamily(code.family().as_str().into()));
    }
    if failed >= code.n() {
        return Err(RepairError::NodeOutOfRange {
            node: failed,
            n: code.n(),
        });
    }
    let xi: Vec<Vec<u64>> = (0..code.n())
        .map(|i| code.diag_values(i).expect("C2-family blocks are diagonal"))
        .collect();
    Ok(annihilator_tables_check(
        &xi,
        code.nbar(),
        code.r(),
        code.w(),
        code.digits(),
        code.field(),
        failed,
    ))
}

/// Raw-table core of [`annihilator_check`], usable with degenerate or
/// deliberately corrupted tables.
pub fn annihilator_tables_check(
    xi: &[Vec<u64>],
    nbar: usize,
    r: usize,
    w: usize,
    digits: Digits,
    field: &FieldSpec,
    failed: usize,
) -> AnnihilatorReport {
    let q = field.q();
    let n = xi.len();
    let fbar = failed % nbar;
    // p_0 coefficients by expanding the product over the failed node's values
    let mut p0 = vec![1u64];
    for &root in &xi[failed] {
        let mut next = vec![0u64; p0.len() + 1];
        for (d, &coef) in p0.iter().enumerate() {
            next[d] = (next[d] + field.mul(coef, field.neg(root))) % q;
            next[d + 1] = (next[d + 1] + coef) % q;
        }
        p0 = next;
    }
    let p = Mat::from_fn(r - w, r, q, |i, j| {
        // p_i = x^i p_0: coefficient of x^j is p0[j - i]
        if j >= i && j - i <= w {
            p0[j - i]
        } else {
            0
        }
    });

    let vand = |value: u64| -> Vec<u64> {
        let mut col = Vec::with_capacity(r);
        let mut acc = 1u64;
        for _ in 0..r {
            col.push(acc);
            acc = field.mul(acc, value);
        }
        col
    };

    // P annihilates the failed node's own Vandermonde columns.
    for (u, &root) in xi[failed].iter().enumerate() {
        let col = vand(root);
        for row in 0..r - w {
            let dot = (0..r).fold(0u64, |acc, j| (acc + field.mul(p.get(row, j), col[j])) % q);
            if dot != 0 {
                return AnnihilatorReport {
                    failed,
                    digit_vectors: 0,
                    pass: false,
                    witness: Some(format!("P does not annihilate ξ[{failed},{u}]")),
                };
            }
        }
    }

    let helper_nodes: Vec<usize> = (0..n).filter(|&j| j % nbar != fbar).collect();
    let n_sub = digits.size();
    for a in 0..n_sub {
        let m = Mat::from_fn(r, helper_nodes.len(), q, |row, col| {
            let j = helper_nodes[col];
            vand(xi[j][digits.digit(a, j % nbar)])[row]
        });
        let pm = p.mul(&m);
        if pm.rank() != r - w {
            return AnnihilatorReport {
                failed,
                digit_vectors: a,
                pass: false,
                witness: Some(format!("rank(PM) != r - w at digit vector {a}")),
            };
        }
    }
    AnnihilatorReport {
        failed,
        digit_vectors: n_sub,
        pass: true,
        witness: None,
    }
}
