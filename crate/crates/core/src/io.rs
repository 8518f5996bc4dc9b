//! Matrix text format: a JSON array of equal-length arrays of complex
//! literals, e.g. `[["1","i"],["-i","1"]]`.

use serde_json::Value;

use crate::error::InputError;
use crate::linalg::ScalarMatrix;
use crate::scalar::GaussianRational;

pub fn parse_matrix(text: &str) -> Result<ScalarMatrix, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::from_json(&e))?;
    let Value::Array(rows) = value else {
        return Err(InputError::Structure { location: "top level".into(), expected: "an array of rows".into() });
    };
    let width = match rows.first() {
        Some(Value::Array(r)) => r.len(),
        _ => 0,
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(cells) = row else {
            return Err(InputError::Structure {
                location: format!("row {i}"),
                expected: "an array of literals".into(),
            });
        };
        if cells.len() != width {
            return Err(InputError::RaggedRow { row: i, got: cells.len(), expected: width });
        }
        let mut parsed = Vec::with_capacity(width);
        for (j, cell) in cells.iter().enumerate() {
            let location = format!("row {i}, column {j}");
            let Value::String(s) = cell else {
                return Err(InputError::Structure { location, expected: "a string literal".into() });
            };
            parsed.push(GaussianRational::parse(s).map_err(|source| InputError::Literal { location, source })?);
        }
        out.push(parsed);
    }
    Ok(ScalarMatrix::from_rows(out).expect("rows checked"))
}

/// Compact rendering accepted by [`parse_matrix`].
pub fn matrix_to_json(m: &ScalarMatrix) -> String {
    m.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ScalarError;
    use crate::examples::{rank_two_example, shear_2};
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_matrix(r#"[["0","1"],["0","0"]]"#).unwrap(), shear_2());
        let text = r#"[["1","i","1","1"],["-i","1","-i","-i"],["-1","-i","1","-1"],["-1","-i","1","-1"]]"#;
        assert_eq!(parse_matrix(text).unwrap(), rank_two_example());
        assert_eq!(matrix_to_json(&rank_two_example()), text);
        assert_eq!(parse_matrix("[]").unwrap().shape(), (0, 0));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_matrix(r#"[["1","i"],["1"]]"#), Err(InputError::RaggedRow { row: 1, got: 1, expected: 2 }));
        assert!(matches!(parse_matrix(r#"[["1","i"],["1""#), Err(InputError::Json { line: 1, .. })));
        match parse_matrix(r#"[["1","2x"]]"#) {
            Err(InputError::Literal { location, source: ScalarError::Parse { position: 1, .. } }) => {
                assert_eq!(location, "row 0, column 1")
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_matrix(r#"[[1]]"#), Err(InputError::Structure { .. })));
        assert!(matches!(parse_matrix(r#"{"a":1}"#), Err(InputError::Structure { .. })));
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(e in proptest::collection::vec((-9i64..9, -9i64..9, 1i64..5), 6)) {
            let entries = e.into_iter().map(|(a, b, d)| {
                let re = crate::scalar::Rational::new(a, d).unwrap();
                GaussianRational::new(re, b.into())
            }).collect();
            let m = ScalarMatrix::from_vec(2, 3, entries).unwrap();
            prop_assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
        }
    }
}
