//! Independent reference implementations used by the test suites to
//! cross-check the production paths: closed-form interference factors for
//! the C1 family, the shifted B-matrices of the C3 repair argument, and the
//! assembled block Vandermonde matrix. Production code never calls into
//! this module.

use crate::digits::Digits;
use crate::gfmatrix::Mat;
use crate::lift::ArrayCode;
use crate::msrbase::{BaseKind, MsrCode};

/// Closed-form `B̄_{t,j,i}` for the C0 base: the (N/w) x (N/w) matrix with
/// `B̄_{t,j,i} R̄_{i,j} = S̄_{i,t} Ā_{t,j}`, written out case by case over
/// the shrunken digit space instead of being solved for numerically.
pub fn c0_factor_closed_form(base: &MsrCode, t: usize, j: usize, i: usize) -> Mat {
    assert_eq!(base.kind(), BaseKind::C0, "closed form is specific to C0");
    assert!(j != i, "factor matrices exist only for j != i");
    let m = base.digits().m();
    let nbar = base.nbar();
    assert!(j < nbar && i < nbar && t < base.r());
    let small = base.digits().shrink();
    let n = small.size();
    let q = base.field().q();
    let f = base.field();
    let lam = base.lambda();
    let pw = |v: u64, e: usize| f.pow(f.felt(v), e as i64).expect("e >= 0").value();

    let iprime = i % m;
    let jprime = j % m;
    if jprime == iprime {
        // j ≡ i (mod m), j != i
        return Mat::identity(n, q).scale(pw(lam[j][0], t));
    }
    let dig = if jprime < iprime { jprime } else { jprime - 1 };
    let mut b = Mat::zeros(n, n, q);
    if j < m {
        for a in 0..n {
            let av = small.digit(a, dig);
            b.set(a, a, pw(lam[j][av], t));
            if av == 0 {
                for u in 1..base.w() {
                    let v = f.sub(pw(lam[j][0], t), pw(lam[j][u], t));
                    b.set(a, small.replace(a, dig, u), v);
                }
            }
        }
    } else {
        for a in 0..n {
            let av = small.digit(a, dig);
            b.set(a, a, pw(lam[j][av], t));
        }
    }
    b
}

/// The three-case diagonal of the closed form, for checking triangular
/// structure claims independently of the full matrix.
pub fn c0_factor_diagonal(base: &MsrCode, t: usize, j: usize, i: usize, a: usize) -> u64 {
    let m = base.digits().m();
    let small = base.digits().shrink();
    let f = base.field();
    let lam = base.lambda();
    let pw = |v: u64, e: usize| f.pow(f.felt(v), e as i64).expect("e >= 0").value();
    let (iprime, jprime) = (i % m, j % m);
    if jprime < iprime {
        pw(lam[j][small.digit(a, jprime)], t)
    } else if jprime == iprime {
        pw(lam[j][0], t)
    } else {
        pw(lam[j][small.digit(a, jprime - 1)], t)
    }
}

/// Lifted factor for the C1 family: `x_j^t B̄_{t, j mod n̄, i mod n̄}`.
pub fn c1_factor_closed_form(code: &ArrayCode, t: usize, j: usize, i: usize) -> Mat {
    let base = code.base().expect("C1 is a lifted code");
    let xs = code.x_base().expect("C1 lift is in power form");
    let scale = code
        .field()
        .pow(code.field().felt(xs[j]), t as i64)
        .expect("t >= 0")
        .value();
    c0_factor_closed_form(base, t, j % code.nbar(), i % code.nbar()).scale(scale)
}

/// The B-matrices of the C3 repair argument: for a failed base index i,
/// grid slot (v, j) with j in [0, n̄-1) holds an (N/w) x (N/w) shifted
/// permutation matrix over the shrunken digit space. Slot j stands for node
/// `vn̄ + j` when j < i and node `vn̄ + j + 1` otherwise (the λ row shifts
/// accordingly).
pub fn c3_b_matrix(code: &ArrayCode, i: usize, v: usize, j: usize) -> Mat {
    let base = code.base().expect("C3 is a lifted code");
    assert_eq!(
        base.kind(),
        BaseKind::Yb2,
        "B-matrices are specific to the YB2 lift"
    );
    let nbar = code.nbar();
    assert!(i < nbar && v < code.s() && j < nbar - 1);
    let xs = code.x_base().expect("C3 lift is in power form");
    let small = Digits::new(code.w(), nbar - 1);
    let n = small.size();
    let q = code.field().q();
    let f = code.field();
    let lam_row = if j < i { j } else { j + 1 };
    let x = xs[v * nbar + j];
    let mut b = Mat::zeros(n, n, q);
    for a in 0..n {
        let aj = small.digit(a, j);
        let val = f.mul(x, base.lambda()[lam_row][aj]);
        b.set(a, small.replace(a, j, (aj + 1) % code.w()), val);
    }
    b
}

/// Assemble the full block Vandermonde matrix `(B_i^t)_{t,i}` for the
/// block Vandermonde cross-check.
pub fn block_vandermonde(blocks: &[Mat]) -> Mat {
    let v = blocks.len();
    let grid: Vec<Vec<Mat>> = (0..v)
        .map(|t| blocks.iter().map(|b| b.pow(t)).collect())
        .collect();
    crate::gfmatrix::BlockMat::new(grid).assemble()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_c3;
    use crate::msrbase::build_c0;

    #[test]
    fn c0_closed_form_matches_product_identity() {
        // S̄_{i,t} Ā_{t,j} = B̄_{t,j,i} R̄_{i,j} for every (t, j, i), j != i
        let base = build_c0(3, 2, 3, None).unwrap();
        let q = base.field().q();
        for i in 0..6 {
            for j in 0..6 {
                if i == j {
                    continue;
                }
                for t in 0..3 {
                    let lhs = base.select_matrix(i, t).premul(base.parity_block(t, j));
                    let b = c0_factor_closed_form(&base, t, j, i);
                    let rhs = b.mul(&base.repair_matrix(i, j).to_mat(q));
                    assert_eq!(lhs, rhs, "t={t} j={j} i={i}");
                }
            }
        }
    }

    #[test]
    fn c3_b_matrices_shift_one_digit() {
        let code = build_c3(5, 2, 3, 2, None).unwrap();
        let b = c3_b_matrix(&code, 0, 0, 0);
        // one nonzero per row
        for a in 0..16 {
            assert_eq!(b.row(a).iter().filter(|&&x| x != 0).count(), 1);
        }
    }
}
