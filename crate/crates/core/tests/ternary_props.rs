mod common;

use common::{dense, sparse, support_of};
use proptest::prelude::*;
use serpar::{
    certify_ternary, oracle_is_series_parallel, verify_n2, verify_reductions, verify_wheel, DenseMatrix, Mode,
    ReduceOptions, TernaryCertificate, WheelCheckMode,
};

fn check(d: &DenseMatrix) -> Result<(), TestCaseError> {
    let m = sparse(d, Mode::Ternary);
    let search = certify_ternary(&m, &ReduceOptions::default()).unwrap();
    let oracle = oracle_is_series_parallel(d, Mode::Ternary);
    prop_assert_eq!(search.certificate.is_series_parallel(), oracle.series_parallel);
    prop_assert!(verify_reductions(&m, search.certificate.reductions()).is_ok());
    match &search.certificate {
        TernaryCertificate::SeriesParallel(_) => {}
        TernaryCertificate::SignedWheel { wheel, values, cycle_sign_product, .. } => {
            let info = verify_wheel(&m, &wheel.rows, &wheel.cols, WheelCheckMode::Support).unwrap();
            prop_assert_eq!(info.kind, wheel.kind);
            prop_assert_eq!(info.cycle_sign_product, *cycle_sign_product);
            prop_assert_eq!(values, &d.select(&wheel.rows, &wheel.cols));
        }
        TernaryCertificate::N2 { rows, cols, values, .. } => {
            prop_assert!(verify_n2(&m, *rows, *cols).is_ok());
            for a in 0..2 {
                for b in 0..2 {
                    prop_assert_eq!(values[a][b], d.get(rows[a], cols[b]));
                }
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn certificates_agree_with_the_oracle(d in dense(8, 8, Mode::Ternary)) {
        check(&d)?;
    }

    #[test]
    fn ternary_sp_implies_support_sp(d in dense(7, 7, Mode::Ternary)) {
        if oracle_is_series_parallel(&d, Mode::Ternary).series_parallel {
            prop_assert!(oracle_is_series_parallel(&support_of(&d), Mode::Binary).series_parallel);
        }
    }

    #[test]
    fn negating_rows_and_columns_keeps_the_verdict(d in dense(7, 7, Mode::Ternary), flips in any::<u16>()) {
        let mut negated = d.clone();
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let s = if (flips >> (r % 8)) & 1 == (flips >> (8 + c % 8)) & 1 { 1 } else { -1 };
                negated.set(r, c, s * d.get(r, c));
            }
        }
        let a = certify_ternary(&sparse(&d, Mode::Ternary), &ReduceOptions::default()).unwrap();
        let b = certify_ternary(&sparse(&negated, Mode::Ternary), &ReduceOptions::default()).unwrap();
        prop_assert_eq!(a.certificate.is_series_parallel(), b.certificate.is_series_parallel());
    }
}

#[test]
fn every_2x2_ternary() {
    for bits in 0u32..81 {
        let mut d = DenseMatrix::zeros(2, 2);
        let mut v = bits;
        for k in 0..4 {
            d.set(k / 2, k % 2, (v % 3) as i8 - 1);
            v /= 3;
        }
        check(&d).unwrap();
    }
}
