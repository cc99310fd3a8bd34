//! The four explicit lifted families over their smallest admissible fields:
//!
//! * `C1`: lift of C0 with `x_i = c^{⌊i/n̄⌋·m(w+2)}` (w = 2) or
//!   `c^{⌊i/n̄⌋·m(w+1)}` (w > 2),
//! * `C2`: lift of YB1 with `λ_{ī,u} = c^ī δ^u` and `x_i = c^{zn̄} δ^y`
//!   where `δ = c^{(q-1)/w}` is a primitive w-th root of unity,
//! * `C2'`: direct diagonal construction `ξ'_{i,u} = c^{zwn̄ + īw + (u ⊕ y)}`
//!   with no divisibility constraint on the field,
//! * `C3`: lift of YB2 with `x_{un̄+i} = c^{u⌈n̄/w⌉}`.
//!
//! Every builder runs its sufficient-condition checker before returning, so
//! a code you get back has passed the distinctness clauses its construction
//! relies on. The checkers are exhaustive (index ranges are O(n²w²), trivial
//! at desk scale) and also exposed on raw coefficient tables so corrupted
//! tables can be probed directly.

use crate::digits::digit_add;
use crate::gf::{find_field, FieldSpec};
use crate::lift::{diag_power_code, lift_tagged, ArrayCode, Family, LiftSpec};
use crate::msrbase::{build_c0, build_yb1_with_lambda, build_yb2, BuildError};
use serde::Serialize;

/// Outcome of one condition clause, with the first counterexample on failure.
#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Clause {
    fn ok(name: &str) -> Self {
        Clause {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    fn fail(name: &str, witness: String) -> Self {
        Clause {
            name: name.into(),
            pass: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub family: String,
    pub clauses: Vec<Clause>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Clause> {
        self.clauses.iter().find(|c| !c.pass)
    }
}

fn resolve_field(
    q: Option<u64>,
    bound: u64,
    divisor: Option<u64>,
) -> Result<FieldSpec, BuildError> {
    match q {
        None => Ok(find_field(bound, divisor)?),
        Some(q) => {
            let f = FieldSpec::new(q)?;
            if let Some(d) = divisor {
                if (q - 1) % d != 0 {
                    return Err(BuildError::InvalidParams(format!(
                        "need {d} | q-1 for a primitive {d}-th root of unity, got q = {q}"
                    )));
                }
            }
            Ok(f)
        }
    }
}

fn validate_checked(code: ArrayCode) -> Result<ArrayCode, BuildError> {
    let report = check_conditions(&code)?;
    if let Some(clause) = report.first_failure() {
        return Err(BuildError::ConditionViolated(format!(
            "{} clause {}: {}",
            report.family,
            clause.name,
            clause.witness.clone().unwrap_or_default()
        )));
    }
    Ok(code)
}

/// C1: `(n = 2ms, k = n - r)` over `N = w^m`. Default field is the smallest
/// prime above `sm(w+2)` (w = 2) or `sm(w+1)` (w > 2).
pub fn build_c1(
    m: usize,
    w: usize,
    r: usize,
    s: usize,
    q: Option<u64>,
) -> Result<ArrayCode, BuildError> {
    if s < 1 {
        return Err(BuildError::InvalidParams("s must be at least 1".into()));
    }
    if w < 2 {
        return Err(BuildError::InvalidParams("w must be at least 2".into()));
    }
    let step = if w == 2 { m * (w + 2) } else { m * (w + 1) };
    let field = resolve_field(q, (s * step) as u64, None)?;
    let base = build_c0(m, w, r, Some(field.clone()))?;
    let nbar = base.nbar();
    let xs: Vec<u64> = (0..s * nbar)
        .map(|i| field.cpow(((i / nbar) * step) as i64))
        .collect();
    let code = lift_tagged(base, LiftSpec::powers(&xs, r, &field), Family::C1)?;
    validate_checked(code)
}

/// C2: `(n = sn̄, k = n - r)` over `N = w^n̄`, optimal update. Default field
/// is the smallest prime above `⌈s/w⌉wn̄` with `w | q-1`.
pub fn build_c2(
    nbar: usize,
    w: usize,
    r: usize,
    s: usize,
    q: Option<u64>,
) -> Result<ArrayCode, BuildError> {
    if s < 1 {
        return Err(BuildError::InvalidParams("s must be at least 1".into()));
    }
    if w < 2 || w >= r || r >= nbar {
        return Err(BuildError::InvalidParams(format!(
            "need 2 <= w < r < nbar, got w = {w}, r = {r}, nbar = {nbar}"
        )));
    }
    let bound = (s.div_ceil(w) * w * nbar) as u64;
    let field = resolve_field(q, bound, Some(w as u64))?;
    let delta_exp = ((field.q() - 1) / w as u64) as i64;
    // λ_{ī,u} = c^ī δ^u
    let lambda: Vec<Vec<u64>> = (0..nbar)
        .map(|i| {
            (0..w)
                .map(|u| field.cpow(i as i64 + u as i64 * delta_exp))
                .collect()
        })
        .collect();
    let base = build_yb1_with_lambda(nbar, w, r, field.clone(), lambda)?;
    // x_i = c^{zn̄} δ^y for i = zwn̄ + yn̄ + ī
    let xs: Vec<u64> = (0..s * nbar)
        .map(|i| {
            let group = i / nbar;
            let (z, y) = (group / w, group % w);
            field.cpow((z * nbar) as i64 + y as i64 * delta_exp)
        })
        .collect();
    let code = lift_tagged(base, LiftSpec::powers(&xs, r, &field), Family::C2)?;
    validate_checked(code)
}

/// C2': same parameters and performance as C2, any prime field above
/// `⌈s/w⌉wn̄`.
pub fn build_c2prime(
    nbar: usize,
    w: usize,
    r: usize,
    s: usize,
    q: Option<u64>,
) -> Result<ArrayCode, BuildError> {
    if s < 1 {
        return Err(BuildError::InvalidParams("s must be at least 1".into()));
    }
    if w < 2 || w >= r || r >= nbar {
        return Err(BuildError::InvalidParams(format!(
            "need 2 <= w < r < nbar, got w = {w}, r = {r}, nbar = {nbar}"
        )));
    }
    let bound = (s.div_ceil(w) * w * nbar) as u64;
    let field = resolve_field(q, bound, None)?;
    // ξ'_{i,u} = c^{zwn̄ + īw + (u ⊕_w y)}
    let xi: Vec<Vec<u64>> = (0..s * nbar)
        .map(|i| {
            let ibar = i % nbar;
            let group = i / nbar;
            let (z, y) = (group / w, group % w);
            (0..w)
                .map(|u| field.cpow((z * w * nbar + ibar * w + digit_add(u, y, w)) as i64))
                .collect()
        })
        .collect();
    let code = diag_power_code(Family::C2Prime, field, nbar, w, r, s, xi)?;
    validate_checked(code)
}

/// C3: `(n = sn̄, k = n - r)` over `N = w^n̄`, (1+ε)-optimal access. Default
/// field is the smallest prime above `⌈n̄/w⌉sw`.
pub fn build_c3(
    nbar: usize,
    w: usize,
    r: usize,
    s: usize,
    q: Option<u64>,
) -> Result<ArrayCode, BuildError> {
    if s < 1 {
        return Err(BuildError::InvalidParams("s must be at least 1".into()));
    }
    if w < 2 || w >= r || r >= nbar {
        return Err(BuildError::InvalidParams(format!(
            "need 2 <= w < r < nbar, got w = {w}, r = {r}, nbar = {nbar}"
        )));
    }
    let step = nbar.div_ceil(w);
    let field = resolve_field(q, (step * s * w) as u64, None)?;
    let base = build_yb2(nbar, w, r, Some(field.clone()))?;
    let xs: Vec<u64> = (0..s * nbar)
        .map(|i| field.cpow(((i / nbar) * step) as i64))
        .collect();
    let code = lift_tagged(base, LiftSpec::powers(&xs, r, &field), Family::C3)?;
    validate_checked(code)
}

/// Run the family's sufficient-condition clauses on a built code.
pub fn check_conditions(code: &ArrayCode) -> Result<ConditionReport, BuildError> {
    match code.family() {
        Family::C1 => {
            let base = code.base().expect("C1 is a lifted code");
            let xs = code.x_base().ok_or_else(|| {
                BuildError::InvalidParams("C1 conditions need a power-form lift".into())
            })?;
            Ok(check_c1_tables(
                xs,
                base.lambda(),
                base.digits().m(),
                code.w(),
                code.field(),
            ))
        }
        Family::C2 | Family::C2Prime => {
            let xi: Vec<Vec<u64>> = (0..code.n())
                .map(|i| {
                    code.diag_values(i).ok_or_else(|| {
                        BuildError::InvalidParams(
                            "C2-family conditions need diagonal power blocks".into(),
                        )
                    })
                })
                .collect::<Result<_, _>>()?;
            let mut report = check_c2_tables(&xi, code.nbar(), code.w());
            report.family = code.family().as_str().into();
            Ok(report)
        }
        Family::C3 => {
            let xs = code.x_base().ok_or_else(|| {
                BuildError::InvalidParams("C3 conditions need a power-form lift".into())
            })?;
            Ok(check_c3_tables(
                xs,
                code.field(),
                code.nbar(),
                code.w(),
                code.s(),
            ))
        }
        other => Err(BuildError::UnknownFamily(other.as_str().into())),
    }
}

/// C1's sufficient-condition clauses i)-iv) on raw tables. `lambda` is the base C0
/// table (2m rows), `xs` the per-node lift bases.
pub fn check_c1_tables(
    xs: &[u64],
    lambda: &[Vec<u64>],
    m: usize,
    w: usize,
    field: &FieldSpec,
) -> ConditionReport {
    let n = xs.len();
    let nbar = 2 * m;
    let val = |i: usize, u: usize| field.mul(xs[i], lambda[i % nbar][u]);

    let mut clauses = Vec::new();

    // i) x_i λ_{ī,u} != x_j λ_{j̄,u'} whenever i != j (mod m)
    let mut c = Clause::ok("i");
    'ci: for i in 0..n {
        for j in 0..n {
            if i % m == j % m {
                continue;
            }
            for u in 0..w {
                for v in 0..w {
                    if val(i, u) == val(j, v) {
                        c = Clause::fail(
                            "i",
                            format!(
                                "x_{i}·λ[{},{u}] = x_{j}·λ[{},{v}] = {}",
                                i % nbar,
                                j % nbar,
                                val(i, u)
                            ),
                        );
                        break 'ci;
                    }
                }
            }
        }
    }
    clauses.push(c);

    // ii) x_i λ_{ī,u} != x_j λ_{j̄,u} whenever i != j but i = j (mod m)
    let mut c = Clause::ok("ii");
    'cii: for i in 0..n {
        for j in i + 1..n {
            if i % m != j % m {
                continue;
            }
            for u in 0..w {
                if val(i, u) == val(j, u) {
                    c = Clause::fail(
                        "ii",
                        format!(
                            "x_{i}·λ[{},{u}] = x_{j}·λ[{},{u}] = {}",
                            i % nbar,
                            j % nbar,
                            val(i, u)
                        ),
                    );
                    break 'cii;
                }
            }
        }
    }
    clauses.push(c);

    // iii) λ_{ī,u} distinct across u for each ī
    let mut c = Clause::ok("iii");
    'ciii: for ib in 0..nbar {
        for u in 0..w {
            for v in u + 1..w {
                if lambda[ib][u] == lambda[ib][v] {
                    c = Clause::fail(
                        "iii",
                        format!("λ[{ib},{u}] = λ[{ib},{v}] = {}", lambda[ib][u]),
                    );
                    break 'ciii;
                }
            }
        }
    }
    clauses.push(c);

    // iv) x_i λ_{ī,0} != x_j λ_{j̄,u} for u >= 1 when i = j (mod m) but
    // i != j (mod n̄)
    let mut c = Clause::ok("iv");
    'civ: for i in 0..n {
        for j in 0..n {
            if i % m != j % m || i % nbar == j % nbar {
                continue;
            }
            for u in 1..w {
                if val(i, 0) == val(j, u) {
                    c = Clause::fail(
                        "iv",
                        format!(
                            "x_{i}·λ[{},0] = x_{j}·λ[{},{u}] = {}",
                            i % nbar,
                            j % nbar,
                            val(i, 0)
                        ),
                    );
                    break 'civ;
                }
            }
        }
    }
    clauses.push(c);

    ConditionReport {
        family: "C1".into(),
        clauses,
    }
}

/// The diagonal family's sufficient-condition clauses i)-ii) on a per-node table ξ (C2's `x_i λ_{ī,u}`
/// or C2''s ξ').
pub fn check_c2_tables(xi: &[Vec<u64>], nbar: usize, w: usize) -> ConditionReport {
    let n = xi.len();
    let mut clauses = Vec::new();

    let mut c = Clause::ok("i");
    'ci: for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if i % nbar != j % nbar {
                for u in 0..w {
                    for v in 0..w {
                        if xi[i][u] == xi[j][v] {
                            c = Clause::fail(
                                "i",
                                format!("ξ[{i},{u}] = ξ[{j},{v}] = {}", xi[i][u]),
                            );
                            break 'ci;
                        }
                    }
                }
            } else {
                for u in 0..w {
                    if xi[i][u] == xi[j][u] {
                        c = Clause::fail("i", format!("ξ[{i},{u}] = ξ[{j},{u}] = {}", xi[i][u]));
                        break 'ci;
                    }
                }
            }
        }
    }
    clauses.push(c);

    let mut c = Clause::ok("ii");
    'cii: for i in 0..n {
        for u in 0..w {
            for v in u + 1..w {
                if xi[i][u] == xi[i][v] {
                    c = Clause::fail("ii", format!("ξ[{i},{u}] = ξ[{i},{v}] = {}", xi[i][u]));
                    break 'cii;
                }
            }
        }
    }
    clauses.push(c);

    ConditionReport {
        family: "C2".into(),
        clauses,
    }
}

/// C3's sufficient-condition clauses i)-ii), quantified over every failed node
/// `(u, i)`. Slot j of the helper grid corresponds to node j when j < i and
/// node j+1 otherwise; `x^w c^{adjusted exponent}` values must be pairwise
/// distinct (clause i) and distinct from the failed node's value (clause ii).
pub fn check_c3_tables(
    xs: &[u64],
    field: &FieldSpec,
    nbar: usize,
    w: usize,
    s: usize,
) -> ConditionReport {
    let xw = |node: usize| {
        field
            .pow(field.felt(xs[node]), w as i64)
            .expect("w >= 0")
            .value()
    };
    let mut clauses = Vec::new();

    let mut ci = Clause::ok("i");
    let mut cii = Clause::ok("ii");
    'outer: for ifail in 0..nbar {
        for ufail in 0..s {
            // value of grid slot (v, j) for this failed index
            let slot = |v: usize, j: usize| {
                let e = if j < ifail { j } else { j + 1 };
                field.mul(xw(v * nbar + j), field.cpow(e as i64))
            };
            if ci.pass {
                'slots: for v0 in 0..s {
                    for j0 in 0..nbar - 1 {
                        for v1 in 0..s {
                            for j1 in 0..nbar - 1 {
                                if (v0, j0) == (v1, j1) {
                                    continue;
                                }
                                if slot(v0, j0) == slot(v1, j1) {
                                    ci = Clause::fail(
                                        "i",
                                        format!(
                                            "failed (u={ufail}, i={ifail}): slots (v0={v0}, j0={j0}) and (v1={v1}, j1={j1}) collide at {}",
                                            slot(v0, j0)
                                        ),
                                    );
                                    break 'slots;
                                }
                            }
                        }
                    }
                }
            }
            if cii.pass {
                let own = field.mul(xw(ufail * nbar + ifail), field.cpow(ifail as i64));
                'nodes: for v in 0..s {
                    for j in 0..nbar {
                        if j == ifail {
                            continue;
                        }
                        let other = field.mul(xw(v * nbar + j), field.cpow(j as i64));
                        if other == own {
                            cii = Clause::fail(
                                "ii",
                                format!(
                                    "failed (u={ufail}, i={ifail}): node {} matches its value {}",
                                    v * nbar + j,
                                    own
                                ),
                            );
                            break 'nodes;
                        }
                    }
                }
            }
            if !ci.pass && !cii.pass {
                break 'outer;
            }
        }
    }
    clauses.push(ci);
    clauses.push(cii);

    ConditionReport {
        family: "C3".into(),
        clauses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfmatrix::Mat;

    #[test]
    fn c1_example_instance() {
        let code = build_c1(3, 2, 3, 2, None).unwrap();
        assert_eq!(
            (code.n(), code.k(), code.sub(), code.d(), code.field().q()),
            (12, 9, 8, 10, 29)
        );
        // x_{6..11} = c^12
        let xs = code.x_base().unwrap();
        let c12 = code.field().cpow(12);
        assert!(xs[..6].iter().all(|&x| x == 1));
        assert!(xs[6..].iter().all(|&x| x == c12));
        // all 36 blocks nonsingular
        for t in 0..3 {
            for i in 0..12 {
                assert!(code.parity_block(t, i).is_nonsingular());
            }
        }
        assert!(check_conditions(&code).unwrap().all_pass());
    }

    #[test]
    fn c1_with_s1_reproduces_c0() {
        let code = build_c1(3, 2, 3, 1, None).unwrap();
        let base = crate::msrbase::build_c0(3, 2, 3, None).unwrap();
        // same field: the s = 1 bound matches the base bound
        assert_eq!(code.field().q(), base.field().q());
        for t in 0..3 {
            for i in 0..6 {
                assert_eq!(code.parity_block(t, i), base.parity_block(t, i));
            }
        }
    }

    #[test]
    fn c2_example_instance() {
        let code = build_c2(5, 2, 3, 2, None).unwrap();
        assert_eq!(
            (code.n(), code.k(), code.sub(), code.d(), code.field().q()),
            (10, 7, 32, 8, 11)
        );
        // every parity block diagonal, A_{0,i} = I
        for i in 0..10 {
            assert_eq!(*code.parity_block(0, i), Mat::identity(32, 11));
            for t in 0..3 {
                assert!(code.parity_block(t, i).is_diagonal());
            }
        }
        assert!(check_conditions(&code).unwrap().all_pass());
    }

    #[test]
    fn c2prime_builds_on_both_fields() {
        for q in [None, Some(11), Some(13)] {
            let code = build_c2prime(5, 2, 3, 2, q).unwrap();
            assert_eq!((code.n(), code.k(), code.sub(), code.d()), (10, 7, 32, 8));
            assert!(check_conditions(&code).unwrap().all_pass());
            for i in 0..10 {
                for t in 0..3 {
                    assert!(code.parity_block(t, i).is_diagonal());
                }
            }
        }
        assert_eq!(build_c2prime(5, 2, 3, 2, None).unwrap().field().q(), 11);
    }

    #[test]
    fn c2prime_xi_at_origin_group() {
        // z = y = 0 nodes carry ξ'_{i,u} = c^{īw+u}
        let code = build_c2prime(5, 2, 3, 1, None).unwrap();
        for i in 0..5 {
            let xi = code.diag_values(i).unwrap();
            for (u, &v) in xi.iter().enumerate() {
                assert_eq!(v, code.field().cpow((i * 2 + u) as i64));
            }
        }
    }

    #[test]
    fn c3_example_instance() {
        let code = build_c3(5, 2, 3, 2, None).unwrap();
        assert_eq!(
            (code.n(), code.k(), code.sub(), code.d(), code.field().q()),
            (10, 7, 32, 8, 13)
        );
        assert!(check_conditions(&code).unwrap().all_pass());
        // A_9^2 = x_9^2 c^5 I
        let f = code.field();
        let x9 = code.x_base().unwrap()[9];
        let scalar = f.mul(f.mul(x9, x9), f.cpow(5));
        assert_eq!(
            code.parity_block(1, 9).pow(2),
            Mat::identity(32, 13).scale(scalar)
        );
        // scalar identity for every node
        for i in 0..10 {
            let xi = code.x_base().unwrap()[i];
            let scalar = f.mul(f.mul(xi, xi), f.cpow((i % 5 + 1) as i64));
            assert_eq!(
                code.parity_block(1, i).pow(2),
                Mat::identity(32, 13).scale(scalar)
            );
        }
    }

    #[test]
    fn c3_with_s1_recovers_yb2() {
        let code = build_c3(5, 2, 3, 1, None).unwrap();
        assert!(code.x_base().unwrap().iter().all(|&x| x == 1));
        let base = build_yb2(5, 2, 3, Some(code.field().clone())).unwrap();
        for t in 0..3 {
            for i in 0..5 {
                assert_eq!(code.parity_block(t, i), base.parity_block(t, i));
            }
        }
    }

    #[test]
    fn checkers_catch_corrupted_tables() {
        // C1 with a duplicated x kills clause ii
        let good = build_c1(3, 2, 3, 2, None).unwrap();
        let base = good.base().unwrap();
        let mut xs = good.x_base().unwrap().to_vec();
        xs[6] = xs[0];
        let report = check_c1_tables(&xs, base.lambda(), 3, 2, good.field());
        assert!(!report.all_pass());
        let failed = report.first_failure().unwrap();
        assert_eq!(failed.name, "ii");
        assert!(failed.witness.is_some());

        // C2 with a duplicated λ row kills clause i
        let code = build_c2(5, 2, 3, 2, None).unwrap();
        let mut xi: Vec<Vec<u64>> = (0..10).map(|i| code.diag_values(i).unwrap()).collect();
        xi[3] = xi[1].clone();
        let report = check_c2_tables(&xi, 5, 2);
        assert!(!report.all_pass());
        assert!(report.first_failure().unwrap().witness.is_some());

        // duplicate within one node kills clause ii
        let mut xi: Vec<Vec<u64>> = (0..10).map(|i| code.diag_values(i).unwrap()).collect();
        xi[4][1] = xi[4][0];
        let report = check_c2_tables(&xi, 5, 2);
        assert!(report.clauses.iter().any(|c| c.name == "ii" && !c.pass));

        // C3 with colliding x bases
        let code = build_c3(5, 2, 3, 2, None).unwrap();
        let mut xs = code.x_base().unwrap().to_vec();
        xs[5] = xs[0];
        let report = check_c3_tables(&xs, code.field(), 5, 2, 2);
        assert!(!report.all_pass());
    }

    #[test]
    fn checker_rejects_unknown_family() {
        let base = crate::msrbase::build_c0(3, 2, 3, None).unwrap();
        let code = crate::lift::lift(base, LiftSpec::identity(3, 6)).unwrap();
        assert!(matches!(
            check_conditions(&code),
            Err(BuildError::UnknownFamily(_))
        ));
    }

    #[test]
    fn c2_rejects_field_without_root_of_unity() {
        // q = 13 has 2 | 12, fine; q = 17 has 2 | 16, fine; q = 19: 2 | 18 fine.
        // Use w = 3: q = 11 has 3 ∤ 10.
        let err = build_c2(7, 3, 4, 1, Some(11)).unwrap_err();
        assert!(matches!(err, BuildError::InvalidParams(_)));
    }
}
