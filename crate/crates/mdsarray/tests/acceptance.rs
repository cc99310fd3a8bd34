//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its timing. Everything is exact field arithmetic; zero tolerance on
//! every comparison.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use mdsarray::codec::{random_codeword, verify_mds_report, verify_optimal_update};
use mdsarray::codespec::CodeSpec;
use mdsarray::families::{
    build_c1, build_c2, build_c2prime, build_c3, check_c1_tables, check_c2_tables, check_c3_tables,
    check_conditions,
};
use mdsarray::gfmatrix::Mat;
use mdsarray::lift::{lift, repair_ratio, ArrayCode, LiftSpec};
use mdsarray::msrbase::{build_c0, build_yb1, build_yb2, RepairMat};
use mdsarray::oracle::{c1_factor_closed_form, c3_b_matrix};
use mdsarray::ratio::Ratio;
use mdsarray::repair::{
    annihilator_check, execute_repair, factor_interference, plan_repair, verify_repair_all,
};
use mdsarray::rng::SplitMix64;
use std::time::Instant;

fn c1_instance() -> ArrayCode {
    build_c1(3, 2, 3, 2, None).unwrap()
}

fn n10_instances() -> Vec<(&'static str, ArrayCode)> {
    vec![
        ("C2 q=11", build_c2(5, 2, 3, 2, None).unwrap()),
        ("C2P q=11", build_c2prime(5, 2, 3, 2, Some(11)).unwrap()),
        ("C2P q=13", build_c2prime(5, 2, 3, 2, Some(13)).unwrap()),
        ("C3 q=13", build_c3(5, 2, 3, 2, None).unwrap()),
    ]
}

#[test]
fn criterion_01_mds_exhaustive_c1() {
    let start = Instant::now();
    let code = c1_instance();
    assert_eq!(
        (code.n(), code.k(), code.sub(), code.field().q()),
        (12, 9, 8, 29)
    );
    let report = verify_mds_report(&code, 0).unwrap();
    assert_eq!(report.patterns, 220);
    assert!(
        report.determinant_failures.is_empty(),
        "singular sub-blocks"
    );
    assert!(report.decode_failures.is_empty(), "failed decodes");
    assert!(report.modes_agree());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}, limit 10 s");
    println!(
        "ACCEPTANCE 1 PASS ({elapsed:?}): C1(12,9) all 220 erasure patterns decode and all 220 sub-block determinants are nonzero, modes agree"
    );
}

#[test]
fn criterion_02_mds_exhaustive_n10_instances() {
    for (name, code) in n10_instances() {
        let start = Instant::now();
        assert_eq!((code.n(), code.k(), code.sub()), (10, 7, 32), "{name}");
        let report = verify_mds_report(&code, 0).unwrap();
        assert_eq!(report.patterns, 120, "{name}");
        assert!(report.is_mds() && report.modes_agree(), "{name}");
        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs() < 60,
            "{name} took {elapsed:?}, limit 60 s"
        );
        println!(
            "ACCEPTANCE 2 PASS ({elapsed:?}): {name} (10,7) N=32 all 120 erasure patterns decode"
        );
    }
    assert_eq!(build_c2(5, 2, 3, 2, None).unwrap().field().q(), 11);
    assert_eq!(build_c3(5, 2, 3, 2, None).unwrap().field().q(), 13);
}

#[test]
fn criterion_03_repair_exhaustive() {
    let start = Instant::now();
    let code = c1_instance();
    let report = verify_repair_all(&code, 42);
    assert_eq!(report.cases, 12 * 10);
    assert!(report.all_pass(), "C1 failures: {:?}", report.failures);
    println!(
        "ACCEPTANCE 3 PASS ({:?}): C1(12,9) {} repairs (12 nodes x 10 avoid sets) regenerate the exact column",
        start.elapsed(),
        report.cases
    );
    for (name, code) in n10_instances() {
        let start = Instant::now();
        let report = verify_repair_all(&code, 42);
        assert_eq!(report.cases, 10 * 8, "{name}");
        assert!(report.all_pass(), "{name} failures: {:?}", report.failures);
        println!(
            "ACCEPTANCE 3 PASS ({:?}): {name} {} repairs (10 nodes x 8 avoid sets) regenerate the exact column",
            start.elapsed(),
            report.cases
        );
    }
}

#[test]
fn criterion_04_bandwidth_ratio_exact() {
    let start = Instant::now();
    let code = c1_instance();
    let cw = random_codeword(&code, 4);
    let plan = plan_repair(&code, 3, Some(&[0])).unwrap();
    let (_, report) = execute_repair(&code, &cw, &plan).unwrap();
    assert_eq!(report.ratio, Ratio::new(11, 10));
    assert_eq!(report.ratio, repair_ratio(10, 9, 1));
    assert!(report.ratio.lt(Ratio::new(
        (code.nbar() + code.r()) as u64,
        code.nbar() as u64
    )));

    for (name, code) in n10_instances() {
        let cw = random_codeword(&code, 4);
        let plan = plan_repair(&code, 4, None).unwrap();
        let (_, report) = execute_repair(&code, &cw, &plan).unwrap();
        assert_eq!(report.ratio, Ratio::new(9, 8), "{name}");
        assert_eq!(report.ratio.as_f64(), 1.125, "{name}");
        assert_eq!(report.ratio, repair_ratio(8, 7, 1), "{name}");
        assert!(
            report.ratio.lt(Ratio::new(
                (code.nbar() + code.r()) as u64,
                code.nbar() as u64
            )),
            "{name}"
        );
    }
    println!(
        "ACCEPTANCE 4 PASS ({:?}): measured ratios are exactly 11/10 (C1) and 9/8 = 1+0.125 (n=10 instances), strictly below 1 + r/nbar",
        start.elapsed()
    );
}

#[test]
fn criterion_05_base_codes_are_msr() {
    let start = Instant::now();
    let cases: [(&str, ArrayCode, u64); 3] = [
        (
            "C0(6,3)",
            {
                let b = build_c0(3, 2, 3, None).unwrap();
                lift(b, LiftSpec::identity(3, 6)).unwrap()
            },
            16,
        ),
        (
            "YB1(5,2)",
            {
                let b = build_yb1(5, 2, 3, None).unwrap();
                lift(b, LiftSpec::identity(3, 5)).unwrap()
            },
            48,
        ),
        (
            "YB2(5,2)",
            {
                let b = build_yb2(5, 2, 3, None).unwrap();
                lift(b, LiftSpec::identity(3, 5)).unwrap()
            },
            48,
        ),
    ];
    for (name, code, gamma) in cases {
        let report = verify_repair_all(&code, 5);
        assert!(report.all_pass(), "{name} failures: {:?}", report.failures);
        assert_eq!(report.gamma, gamma, "{name}");
        assert_eq!(report.gamma_optimal, gamma, "{name}");
        assert_eq!(report.ratio, Ratio::one(), "{name}");
        println!(
            "ACCEPTANCE 5 PASS: {name} repairs every node with exactly gamma_optimal = {gamma} symbols, ratio 1"
        );
    }
    println!(
        "ACCEPTANCE 5 PASS ({:?}): all three base codes are MSR at desk scale",
        start.elapsed()
    );
}

#[test]
fn criterion_06a_c1_factor_closed_form() {
    let start = Instant::now();
    let code = c1_instance();
    let f = code.field();
    let base = code.base().unwrap();
    let xs = code.x_base().unwrap();
    let mut checked = 0;
    for i in 0..code.n() {
        let plan = plan_repair(&code, i, None).unwrap();
        for j in 0..code.n() {
            if j % code.nbar() == i % code.nbar() {
                continue;
            }
            for t in 0..code.r() {
                let numeric = factor_interference(&code, &plan, j, t).unwrap();
                let closed = c1_factor_closed_form(&code, t, j, i);
                assert_eq!(numeric, closed, "t={t} j={j} i={i}");
                // triangularity and the three-case diagonal
                let xjt = f.pow(f.felt(xs[j]), t as i64).unwrap().value();
                for a in 0..numeric.nrows() {
                    for b in 0..a {
                        assert_eq!(numeric.get(a, b), 0, "below-diagonal at t={t} j={j} i={i}");
                    }
                    let lam = mdsarray::oracle::c0_factor_diagonal(
                        base,
                        t,
                        j % code.nbar(),
                        i % code.nbar(),
                        a,
                    );
                    assert_eq!(
                        numeric.get(a, a),
                        f.mul(xjt, lam),
                        "diag at t={t} j={j} i={i}"
                    );
                }
                checked += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE 6a PASS ({:?}): closed-form factor matrices equal numeric factorization on C1 for all {checked} (t, j, i) triples, triangular with the three-case diagonal",
        start.elapsed()
    );
}

#[test]
fn criterion_06b_c3_b_matrix_structure() {
    let start = Instant::now();
    let code = build_c3(5, 2, 3, 2, None).unwrap();
    let q = code.field().q();
    let nbar = code.nbar();
    let small = nbar - 1;
    for ifail in 0..nbar {
        let blocks: Vec<Mat> = (0..code.s())
            .flat_map(|v| (0..small).map(move |j| (v, j)))
            .map(|(v, j)| c3_b_matrix(&code, ifail, v, j))
            .collect();
        // pairwise commuting with nonsingular differences
        for x in 0..blocks.len() {
            for y in x + 1..blocks.len() {
                assert_eq!(
                    blocks[x].mul(&blocks[y]),
                    blocks[y].mul(&blocks[x]),
                    "commute ifail={ifail} x={x} y={y}"
                );
                assert!(
                    blocks[x].sub(&blocks[y]).is_nonsingular(),
                    "difference singular ifail={ifail} x={x} y={y}"
                );
            }
        }
        // intertwining V_{i,0} A^t = B^t V_{i,0} for all t in [0, r)
        let v_mat = RepairMat::from_selector(&code.digits().selector(ifail, 0)).to_mat(q);
        for v in 0..code.s() {
            for j in 0..nbar {
                if j == ifail {
                    continue;
                }
                let node = v * nbar + j;
                let slot = if j < ifail { j } else { j - 1 };
                let b = c3_b_matrix(&code, ifail, v, slot);
                for t in 0..code.r() {
                    let lhs = v_mat.mul(&code.parity_block(1, node).pow(t));
                    let rhs = b.pow(t).mul(&v_mat);
                    assert_eq!(lhs, rhs, "intertwine ifail={ifail} node={node} t={t}");
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 6b PASS ({:?}): C3 B-matrices commute pairwise with nonsingular differences and V_i0 A^t = B^t V_i0 for t in 0..3, every failed index",
        start.elapsed()
    );
}

#[test]
fn criterion_06c_c2_annihilator() {
    let start = Instant::now();
    let code = build_c2(5, 2, 3, 2, None).unwrap();
    for failed in 0..code.n() {
        let report = annihilator_check(&code, failed).unwrap();
        assert!(report.pass, "failed={failed}: {:?}", report.witness);
        assert_eq!(report.digit_vectors, 32);
    }
    println!(
        "ACCEPTANCE 6c PASS ({:?}): annihilator rank(PM) = r-w holds for every digit vector and every failed node of C2(10,7)",
        start.elapsed()
    );
}

#[test]
fn criterion_07_condition_checkers() {
    let start = Instant::now();
    // all builder outputs pass their clauses
    let codes = [
        build_c1(3, 2, 3, 2, None).unwrap(),
        build_c2(5, 2, 3, 2, None).unwrap(),
        build_c2prime(5, 2, 3, 2, None).unwrap(),
        build_c3(5, 2, 3, 2, None).unwrap(),
    ];
    for code in &codes {
        let report = check_conditions(code).unwrap();
        assert!(
            report.all_pass(),
            "{} clause failures: {:?}",
            code.family(),
            report.first_failure()
        );
    }
    // corrupted tables produce witnesses
    let c1 = &codes[0];
    let mut xs = c1.x_base().unwrap().to_vec();
    xs[6] = xs[0];
    let r = check_c1_tables(&xs, c1.base().unwrap().lambda(), 3, 2, c1.field());
    assert!(!r.all_pass() && r.first_failure().unwrap().witness.is_some());

    let c2 = &codes[1];
    let mut xi: Vec<Vec<u64>> = (0..10).map(|i| c2.diag_values(i).unwrap()).collect();
    xi[7] = xi[2].clone();
    let r = check_c2_tables(&xi, 5, 2);
    assert!(!r.all_pass() && r.first_failure().unwrap().witness.is_some());

    let c3 = &codes[3];
    let mut xs = c3.x_base().unwrap().to_vec();
    for x in xs.iter_mut().skip(5) {
        *x = 1;
    }
    let r = check_c3_tables(&xs, c3.field(), 5, 2, 2);
    assert!(!r.all_pass() && r.first_failure().unwrap().witness.is_some());

    println!(
        "ACCEPTANCE 7 PASS ({:?}): sufficient-condition clauses (C1 i-iv, C2/C2P i-ii, C3 i-ii) hold on every builder output; corrupted tables yield counterexample witnesses",
        start.elapsed()
    );
}

#[test]
fn criterion_08_optimal_update_and_access() {
    let start = Instant::now();
    assert!(verify_optimal_update(&build_c2(5, 2, 3, 2, None).unwrap()));
    assert!(verify_optimal_update(
        &build_c2prime(5, 2, 3, 2, None).unwrap()
    ));
    assert!(!verify_optimal_update(&build_c3(5, 2, 3, 2, None).unwrap()));
    assert!(!verify_optimal_update(&c1_instance()));

    // C3's access ratio equals its bandwidth ratio exactly
    let code = build_c3(5, 2, 3, 2, None).unwrap();
    let cw = random_codeword(&code, 8);
    for failed in 0..code.n() {
        let plan = plan_repair(&code, failed, None).unwrap();
        let (_, report) = execute_repair(&code, &cw, &plan).unwrap();
        assert_eq!(report.accessed_columns, report.downloaded_symbols);
        assert_eq!(
            Ratio::new(report.accessed_columns, report.gamma_optimal),
            report.ratio
        );
    }
    println!(
        "ACCEPTANCE 8 PASS ({:?}): optimal-update true for C2/C2P, false for C1/C3; C3 access ratio equals bandwidth ratio exactly",
        start.elapsed()
    );
}

#[test]
fn criterion_09_identity_lift_and_coefficients() {
    let start = Instant::now();
    // identity lifts reproduce each base code block-for-block
    let c0a = build_c0(3, 2, 3, None).unwrap();
    let c0b = build_c0(3, 2, 3, None).unwrap();
    let yb1a = build_yb1(5, 2, 3, None).unwrap();
    let yb1b = build_yb1(5, 2, 3, None).unwrap();
    let yb2a = build_yb2(5, 2, 3, None).unwrap();
    let yb2b = build_yb2(5, 2, 3, None).unwrap();
    for (lifted, base) in [
        (lift(c0a, LiftSpec::identity(3, 6)).unwrap(), c0b),
        (lift(yb1a, LiftSpec::identity(3, 5)).unwrap(), yb1b),
        (lift(yb2a, LiftSpec::identity(3, 5)).unwrap(), yb2b),
    ] {
        for t in 0..base.r() {
            for i in 0..base.nbar() {
                assert_eq!(lifted.parity_block(t, i), base.parity_block(t, i));
            }
        }
    }

    // the (12,9) reference instance: lambda exponents and x_{6+i} = c^12 over GF(29)
    let code = c1_instance();
    let f = code.field();
    assert_eq!((f.q(), f.primitive().value()), (29, 2));
    let lambda = code.base().unwrap().lambda();
    let row0 = [0i64, 4, 8, 2, 6, 10];
    let row1 = [1i64, 5, 9, 3, 7, 11];
    for i in 0..6 {
        assert_eq!(lambda[i][0], f.cpow(row0[i]), "lambda[{i}][0]");
        assert_eq!(lambda[i][1], f.cpow(row1[i]), "lambda[{i}][1]");
    }
    let xs = code.x_base().unwrap();
    for i in 0..6 {
        assert_eq!(xs[i], 1);
        assert_eq!(xs[6 + i], f.cpow(12));
        for t in 0..3 {
            let expect = code.parity_block(t, i).scale(f.cpow(12 * t as i64));
            assert_eq!(*code.parity_block(t, 6 + i), expect);
        }
    }
    println!(
        "ACCEPTANCE 9 PASS ({:?}): identity lifts reproduce C0/YB1/YB2 block-for-block; the (12,9) instance yields the frozen lambda exponents and x_(6+i) = c^12 verbatim",
        start.elapsed()
    );
}

#[test]
fn criterion_10_cluster_round_trip() {
    let start = Instant::now();
    let spec = CodeSpec::from_json(r#"{"family":"C1","m":3,"w":2,"r":3,"s":2}"#).unwrap();
    let mut cluster = mdsarray::cluster::Cluster::new(spec).unwrap();
    let payload = SplitMix64::new(0xC0DE).bytes(1 << 20);
    let id = cluster.ingest(&payload).unwrap();
    let stripes = cluster.stripe_count() as u64;
    assert_eq!(stripes, (1u64 << 20).div_ceil(36));

    let mut expected_ledger = 0u64;
    for node in 0..cluster.code().n() {
        cluster.fail_node(node).unwrap();
        let report = cluster.repair_node(node, None).unwrap();
        assert!(report.repaired);
        assert_eq!(report.stripes as u64, stripes);
        let per_stripe = report.per_stripe.as_ref().unwrap();
        assert_eq!(per_stripe.downloaded_symbols, 44);
        assert_eq!(report.downloaded_symbols, 44 * stripes);
        expected_ledger += report.downloaded_symbols;
    }
    assert_eq!(cluster.ledger_total(), expected_ledger);
    assert_eq!(cluster.ledger_total(), 12 * 44 * stripes);
    assert_eq!(cluster.read_object(id).unwrap(), payload);
    cluster.verify_stripes().unwrap();
    println!(
        "ACCEPTANCE 10 PASS ({:?}): 1 MiB ingested under C1(12,9), every node failed and repaired once ({} stripes), read back bit-exact, ledger = sum of per-stripe gamma",
        start.elapsed(),
        stripes
    );
}
