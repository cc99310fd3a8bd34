//! w = 3 instances: these hit the code paths the w = 2 desk instances never
//! reach (the second case of the C0 coefficient assignment, three-part
//! selector sums, cube roots of unity for C2, and mod-3 digit shifts in
//! YB2).

use mdsarray::codec::{random_codeword, verify_mds_report};
use mdsarray::families::{build_c1, build_c2, build_c2prime, build_c3, check_conditions};
use mdsarray::lift::repair_ratio;
use mdsarray::ratio::Ratio;
use mdsarray::repair::{annihilator_check, execute_repair, plan_repair, verify_repair_all};

#[test]
fn c1_with_radix_three_is_mds_and_repairable() {
    // (12, 8) over N = 27, d = 10, q = 29
    let code = build_c1(3, 3, 4, 2, None).unwrap();
    assert_eq!(
        (code.n(), code.k(), code.sub(), code.d(), code.field().q()),
        (12, 8, 27, 10, 29)
    );
    assert!(check_conditions(&code).unwrap().all_pass());
    let mds = verify_mds_report(&code, 0).unwrap();
    assert_eq!(mds.patterns, 495);
    assert!(mds.is_mds() && mds.modes_agree());
    let repair = verify_repair_all(&code, 0);
    assert_eq!(repair.cases, 12 * 10);
    assert!(repair.all_pass(), "{:?}", repair.failures);
    // gamma = (d - dc) N/w + dc N = 9*9 + 27; ratio = 1 + 1*(10-8)/10
    assert_eq!(repair.gamma, 108);
    assert_eq!(repair.ratio, Ratio::new(6, 5));
    assert_eq!(repair.ratio, repair_ratio(10, 8, 1));
}

#[test]
fn c2_with_radix_three_repairs() {
    // (10, 6) over N = 243, q = 19 (3 | 18 gives the cube root of unity)
    let code = build_c2(5, 3, 4, 2, None).unwrap();
    assert_eq!(
        (code.n(), code.k(), code.sub(), code.d(), code.field().q()),
        (10, 6, 243, 8, 19)
    );
    assert!(check_conditions(&code).unwrap().all_pass());
    assert!(annihilator_check(&code, 4).unwrap().pass);
    let cw = random_codeword(&code, 1);
    let plan = plan_repair(&code, 4, Some(&[0])).unwrap();
    let (col, report) = execute_repair(&code, &cw, &plan).unwrap();
    assert_eq!(col, cw.column(4));
    // gamma = 7*81 + 243 = 810 against gamma_opt = 8*81 = 648
    assert_eq!(report.downloaded_symbols, 810);
    assert_eq!(report.ratio, Ratio::new(5, 4));
}

#[test]
fn c2prime_with_radix_three_repairs() {
    let code = build_c2prime(5, 3, 4, 2, None).unwrap();
    assert_eq!(code.field().q(), 17); // no divisibility constraint: 16 < 17
    assert!(check_conditions(&code).unwrap().all_pass());
    let cw = random_codeword(&code, 2);
    for failed in [0, 7] {
        let plan = plan_repair(&code, failed, None).unwrap();
        let (col, report) = execute_repair(&code, &cw, &plan).unwrap();
        assert_eq!(col, cw.column(failed));
        assert_eq!(report.ratio, Ratio::new(5, 4));
    }
}

#[test]
fn c3_with_radix_three_repairs_with_optimal_access_ratio() {
    let code = build_c3(5, 3, 4, 2, None).unwrap();
    assert_eq!(code.field().q(), 13); // ceil(5/3) * 2 * 3 = 12
    assert!(check_conditions(&code).unwrap().all_pass());
    let cw = random_codeword(&code, 3);
    let plan = plan_repair(&code, 9, Some(&[1])).unwrap();
    let (col, report) = execute_repair(&code, &cw, &plan).unwrap();
    assert_eq!(col, cw.column(9));
    assert_eq!(report.accessed_columns, report.downloaded_symbols);
    assert_eq!(report.ratio, Ratio::new(5, 4));
}
