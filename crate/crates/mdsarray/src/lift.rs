//! The generic transformation: block-replicate a base MSR code `s` times
//! with nonzero scalar multipliers.
//!
//! From an `(n̄, k̄)` base with parity blocks `Ā_{t,i}`, the lifted
//! `(n = s·n̄, k = n - r)` code has
//!
//! * `A_{t,j} = x_{t,j} · Ā_{t, j mod n̄}`,
//! * `R_{i,j} = R̄_{ī,j̄}` when `j ≢ i (mod n̄)`, the identity otherwise,
//! * `S_{i,t} = S̄_{ī,t}`,
//!
//! repair degree `d = n - n̄ + d̄ < n - 1` and `d_c = s - 1` compulsory
//! helpers (the nodes congruent to the failed one). The lift preserves the
//! sub-packetization level.
//!
//! Lifting alone certifies neither the MDS property nor repairability; those
//! depend on the coefficients. The explicit families pick coefficients that
//! provably work; for hand-rolled lifts the verification suites and the
//! repair engine report violations instead of promising success.

use crate::gf::FieldSpec;
use crate::gfmatrix::Mat;
use crate::msrbase::{BaseKind, BuildError, MsrCode, RepairMat};
use crate::ratio::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Desk-scale guard on the lifted code length.
pub const MAX_NODES: usize = 64;

/// Which construction a code instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "C0")]
    C0,
    #[serde(rename = "YB1")]
    Yb1,
    #[serde(rename = "YB2")]
    Yb2,
    #[serde(rename = "C1")]
    C1,
    #[serde(rename = "C2")]
    C2,
    #[serde(rename = "C2P")]
    C2Prime,
    #[serde(rename = "C3")]
    C3,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::C0 => "C0",
            Family::Yb1 => "YB1",
            Family::Yb2 => "YB2",
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::C2Prime => "C2P",
            Family::C3 => "C3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "C0" => Ok(Family::C0),
            "YB1" => Ok(Family::Yb1),
            "YB2" => Ok(Family::Yb2),
            "C1" => Ok(Family::C1),
            "C2" => Ok(Family::C2),
            "C2P" => Ok(Family::C2Prime),
            "C3" => Ok(Family::C3),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

/// The multiplier table of a lift: `x_{t,i}` for t in [0, r), i in [0, n).
#[derive(Debug, Clone)]
pub struct LiftSpec {
    s: usize,
    x: Vec<Vec<u64>>,
    power_base: Option<Vec<u64>>,
}

impl LiftSpec {
    /// General table; shape must be r x (s·n̄) with all entries nonzero.
    pub fn new(s: usize, x: Vec<Vec<u64>>) -> Self {
        LiftSpec {
            s,
            x,
            power_base: None,
        }
    }

    /// s = 1 and x ≡ 1: reproduces the base code block-for-block.
    pub fn identity(r: usize, nbar: usize) -> Self {
        LiftSpec {
            s: 1,
            x: vec![vec![1; nbar]; r],
            power_base: Some(vec![1; nbar]),
        }
    }

    /// Power form `x_{t,i} = x_i^t` (so `x_{0,i} = 1`).
    pub fn powers(xs: &[u64], r: usize, field: &FieldSpec) -> Self {
        let n = xs.len();
        let x = (0..r)
            .map(|t| {
                (0..n)
                    .map(|i| {
                        field
                            .pow(field.felt(xs[i]), t as i64)
                            .expect("t >= 0")
                            .value()
                    })
                    .collect()
            })
            .collect();
        LiftSpec {
            s: 0, // patched by lift() from the base length
            x,
            power_base: Some(xs.to_vec()),
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn x(&self, t: usize, i: usize) -> u64 {
        self.x[t][i]
    }

    /// The per-node bases x_i when the table is in power form.
    pub fn power_base(&self) -> Option<&[u64]> {
        self.power_base.as_deref()
    }
}

/// How parity blocks of an [`ArrayCode`] are produced.
#[derive(Debug)]
pub(crate) enum CodeForm {
    /// `A_{t,i} = x_{t,i} Ā_{t, i mod n̄}` over a base MSR code.
    Lifted { base: MsrCode, lift: LiftSpec },
    /// Directly-defined diagonal powers `A_{t,i} = diag(ξ_{i,a_ī})^t`
    /// (the C2' construction). Repair schema is the YB1 one.
    DiagPower { xi: Vec<Vec<u64>> },
}

/// A (possibly lifted) MDS array code instance: parameters, parity-check
/// blocks, and the repair schema.
#[derive(Debug)]
pub struct ArrayCode {
    family: Family,
    field: FieldSpec,
    n: usize,
    k: usize,
    r: usize,
    w: usize,
    nbar: usize,
    s: usize,
    d: usize,
    dc: usize,
    sub: usize,
    digits: crate::digits::Digits,
    form: CodeForm,
    blocks: Vec<OnceLock<Mat>>,
}

impl ArrayCode {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn nbar(&self) -> usize {
        self.nbar
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Repair degree d = n - n̄ + d̄.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of compulsory helpers d_c = s - 1.
    pub fn dc(&self) -> usize {
        self.dc
    }

    /// Sub-packetization level N.
    pub fn sub(&self) -> usize {
        self.sub
    }

    pub fn digits(&self) -> crate::digits::Digits {
        self.digits
    }

    pub fn base(&self) -> Option<&MsrCode> {
        match &self.form {
            CodeForm::Lifted { base, .. } => Some(base),
            CodeForm::DiagPower { .. } => None,
        }
    }

    pub fn lift_spec(&self) -> Option<&LiftSpec> {
        match &self.form {
            CodeForm::Lifted { lift, .. } => Some(lift),
            CodeForm::DiagPower { .. } => None,
        }
    }

    /// Per-node power bases x_i when the lift is in power form (identity
    /// bases for a direct diagonal construction).
    pub fn x_base(&self) -> Option<&[u64]> {
        match &self.form {
            CodeForm::Lifted { lift, .. } => lift.power_base(),
            CodeForm::DiagPower { .. } => None,
        }
    }

    /// Diagonal values `ξ_{i,u}` (u in [0, w)) for codes whose blocks are
    /// diagonal powers: lifted YB1 in power form, and C2'.
    pub fn diag_values(&self, i: usize) -> Option<Vec<u64>> {
        assert!(i < self.n);
        match &self.form {
            CodeForm::DiagPower { xi } => Some(xi[i].clone()),
            CodeForm::Lifted { base, lift } => {
                if base.kind() != BaseKind::Yb1 {
                    return None;
                }
                let xs = lift.power_base()?;
                let f = &self.field;
                Some(
                    base.lambda()[i % self.nbar]
                        .iter()
                        .map(|&l| f.mul(xs[i], l))
                        .collect(),
                )
            }
        }
    }

    /// Parity-check block A_{t,i}.
    pub fn parity_block(&self, t: usize, i: usize) -> &Mat {
        assert!(t < self.r && i < self.n, "block index out of range");
        self.blocks[t * self.n + i].get_or_init(|| match &self.form {
            CodeForm::Lifted { base, lift } => {
                base.parity_block(t, i % self.nbar).scale(lift.x(t, i))
            }
            CodeForm::DiagPower { xi } => {
                let d = self.digits;
                let f = &self.field;
                let ibar = i % self.nbar;
                Mat::from_fn(self.sub, self.sub, f.q(), |a, c| {
                    if a == c {
                        f.pow(f.felt(xi[i][d.digit(a, ibar)]), t as i64)
                            .expect("t >= 0")
                            .value()
                    } else {
                        0
                    }
                })
            }
        })
    }

    /// R_{i,j}: identity for helpers congruent to the failed node, the base
    /// repair matrix otherwise.
    pub fn repair_matrix(&self, i: usize, j: usize) -> RepairMat {
        assert!(i < self.n && j < self.n && j != i);
        if j % self.nbar == i % self.nbar {
            return RepairMat::Identity(self.sub);
        }
        match &self.form {
            CodeForm::Lifted { base, .. } => base.repair_matrix(i % self.nbar, j % self.nbar),
            CodeForm::DiagPower { .. } => {
                RepairMat::from_selector_sum(&self.digits.selector_sum(i % self.nbar))
            }
        }
    }

    /// S_{i,t}: the base select matrix of node i mod n̄.
    pub fn select_matrix(&self, i: usize, t: usize) -> RepairMat {
        assert!(i < self.n && t < self.r);
        match &self.form {
            CodeForm::Lifted { base, .. } => base.select_matrix(i % self.nbar, t),
            CodeForm::DiagPower { .. } => {
                RepairMat::from_selector_sum(&self.digits.selector_sum(i % self.nbar))
            }
        }
    }

    /// Digit position node i's repair schema selects on.
    pub fn select_position(&self, i: usize) -> usize {
        match &self.form {
            CodeForm::Lifted { base, .. } => base.select_position(i % self.nbar),
            CodeForm::DiagPower { .. } => i % self.nbar,
        }
    }

    /// {j != i : j ≡ i (mod n̄)}, the helpers that must participate in any
    /// repair of node i.
    pub fn compulsory_helpers(&self, i: usize) -> Vec<usize> {
        assert!(i < self.n, "node {i} out of range (n = {})", self.n);
        (0..self.n)
            .filter(|&j| j != i && j % self.nbar == i % self.nbar)
            .collect()
    }

    /// Exact repair-bandwidth accounting for this code.
    pub fn bandwidth(&self) -> Bandwidth {
        let per_helper = (self.sub / self.w) as u64;
        let gamma = (self.d - self.dc) as u64 * per_helper + self.dc as u64 * self.sub as u64;
        let gamma_optimal = self.d as u64 * per_helper;
        let ratio = Ratio::new(gamma, gamma_optimal);
        debug_assert_eq!(ratio, repair_ratio(self.d, self.k, self.dc));
        Bandwidth {
            gamma,
            gamma_optimal,
            ratio,
        }
    }
}

/// Repair bandwidth of one node repair, exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bandwidth {
    /// Downloaded symbols γ_i = (d - d_c)·N/(d-k+1) + d_c·N.
    pub gamma: u64,
    /// Cut-set bound γ_optimal = d·N/(d-k+1).
    pub gamma_optimal: u64,
    /// γ_i / γ_optimal = 1 + d_c(d-k)/d, reduced.
    pub ratio: Ratio,
}

/// `1 + d_c (d - k) / d` as an exact rational. Single source of truth for
/// every ratio column printed anywhere.
pub fn repair_ratio(d: usize, k: usize, dc: usize) -> Ratio {
    Ratio::new((d + dc * (d - k)) as u64, d as u64)
}

/// Apply the generic transformation to a base code.
pub fn lift(base: MsrCode, spec: LiftSpec) -> Result<ArrayCode, BuildError> {
    let family = match base.kind() {
        BaseKind::C0 => Family::C0,
        BaseKind::Yb1 => Family::Yb1,
        BaseKind::Yb2 => Family::Yb2,
    };
    lift_tagged(base, spec, family)
}

pub(crate) fn lift_tagged(
    base: MsrCode,
    mut spec: LiftSpec,
    family: Family,
) -> Result<ArrayCode, BuildError> {
    let nbar = base.nbar();
    let r = base.r();
    let q = base.field().q();
    if spec.x.len() != r {
        return Err(BuildError::ShapeMismatch(format!(
            "lift table has {} rows, code has r = {r}",
            spec.x.len()
        )));
    }
    let n = spec.x[0].len();
    if n == 0 || !n.is_multiple_of(nbar) || spec.x.iter().any(|row| row.len() != n) {
        return Err(BuildError::ShapeMismatch(format!(
            "lift table width must be a positive multiple of nbar = {nbar}"
        )));
    }
    if n > MAX_NODES {
        return Err(BuildError::InvalidParams(format!(
            "code length {n} exceeds the supported maximum {MAX_NODES}"
        )));
    }
    let s = n / nbar;
    spec.s = s;
    for (t, row) in spec.x.iter_mut().enumerate() {
        for (i, v) in row.iter_mut().enumerate() {
            *v %= q;
            if *v == 0 {
                return Err(BuildError::ZeroCoefficient { t, i });
            }
        }
    }
    if let Some(base_xs) = &mut spec.power_base {
        for v in base_xs.iter_mut() {
            *v %= q;
        }
    }
    let k = n - r;
    let d = n - nbar + base.dbar();
    let field = base.field().clone();
    let sub = base.sub();
    let digits = base.digits();
    let w = base.w();
    Ok(ArrayCode {
        family,
        field,
        n,
        k,
        r,
        w,
        nbar,
        s,
        d,
        dc: s - 1,
        sub,
        digits,
        form: CodeForm::Lifted { base, lift: spec },
        blocks: (0..r * n).map(|_| OnceLock::new()).collect(),
    })
}

/// Direct diagonal-power construction (C2'): node i's block at power t is
/// `diag(ξ_{i,a_ī})^t` with the given per-node tables.
pub(crate) fn diag_power_code(
    family: Family,
    field: FieldSpec,
    nbar: usize,
    w: usize,
    r: usize,
    s: usize,
    xi: Vec<Vec<u64>>,
) -> Result<ArrayCode, BuildError> {
    let n = s * nbar;
    if n > MAX_NODES {
        return Err(BuildError::InvalidParams(format!(
            "code length {n} exceeds the supported maximum {MAX_NODES}"
        )));
    }
    if xi.len() != n || xi.iter().any(|row| row.len() != w) {
        return Err(BuildError::ShapeMismatch(format!(
            "xi table must be {n} x {w}"
        )));
    }
    for (i, row) in xi.iter().enumerate() {
        for (u, &v) in row.iter().enumerate() {
            if v == 0 || v >= field.q() {
                return Err(BuildError::InvalidParams(format!(
                    "xi[{i}][{u}] = {v} is not a nonzero field element"
                )));
            }
        }
    }
    let digits = crate::digits::Digits::new(w, nbar);
    let kbar = nbar - r;
    let dbar = kbar + w - 1;
    Ok(ArrayCode {
        family,
        field,
        n,
        k: n - r,
        r,
        w,
        nbar,
        s,
        d: n - nbar + dbar,
        dc: s - 1,
        sub: digits.size(),
        digits,
        form: CodeForm::DiagPower { xi },
        blocks: (0..r * n).map(|_| OnceLock::new()).collect(),
    })
}
