use cubelin::search::run_search_with_records;
use cubelin::{
    corollary_pipeline, decide_automorphism, gz_reduce, matrix_to_json, parse_matrix, Check, CorollaryOutcome, Filter,
    GaussianRational, SearchConfig,
};

fn units() -> Vec<GaussianRational> {
    [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .map(|&(a, b)| GaussianRational::from_gaussian_integer(a, b))
        .collect()
}

#[test]
fn lifted_inverse_matches_direct_inverse() {
    let configs = [
        SearchConfig::enumerate(2, units()).with_filters([Filter::KellerOnly]),
        SearchConfig::sample(3, units(), 20_000, 7).with_filters([Filter::KellerOnly]),
    ];
    let records: Vec<_> = configs.iter().flat_map(|c| run_search_with_records(c, true).unwrap().records).collect();
    assert!(records.len() > 10, "too few Keller samples: {}", records.len());
    let mut lifted = 0;
    for r in &records {
        let direct = decide_automorphism(&r.matrix);
        assert!(direct.is_invertible(), "{}", matrix_to_json(&r.matrix));
        let cor = corollary_pipeline(&r.matrix).unwrap();
        match cor.outcome {
            CorollaryOutcome::Verified => {
                lifted += 1;
                assert_eq!(cor.f_inverse.as_ref(), direct.inverse.as_ref());
            }
            CorollaryOutcome::DiagonalHasZero => assert!(r.matrix.diagonal_entries().iter().any(|d| d.is_zero())),
            other => panic!("unexpected outcome {other:?} for {}", matrix_to_json(&r.matrix)),
        }
        let pair = gz_reduce(&r.matrix).unwrap();
        assert!(pair.recomposes_to(&r.matrix));
    }
    assert!(lifted > 0, "no nonzero-diagonal Keller map visited");
}

#[test]
fn corollary_check_in_search_reports_no_anomalies() {
    let config = SearchConfig::sample(3, units(), 5_000, 11).with_checks([Check::Corollary, Check::Invert]);
    let report = run_search_with_records(&config, false).unwrap();
    assert_eq!(report.totals.corollary_attempted, 5_000);
    assert_eq!(report.totals.corollary_anomaly, 0);
    assert!(report.anomalies.is_empty());
    assert_eq!(
        report.totals.corollary_verified
            + report.totals.corollary_diagonal_has_zero
            + report.totals.corollary_not_keller,
        5_000
    );
}

#[test]
fn matrix_text_round_trip() {
    for text in [r#"[["1","i"],["-1/2+3i","0"]]"#, r#"[["-2/3i","7"],["1-i","-i"]]"#] {
        let m = parse_matrix(text).unwrap();
        assert_eq!(matrix_to_json(&m), text);
        assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
    }
}
