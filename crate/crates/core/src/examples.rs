//! Built-in matrices.

use crate::error::InputError;
use crate::linalg::ScalarMatrix;

pub const BUILTIN_NAMES: [&str; 3] = ["paper-example", "shear-2", "zero-3"];

/// The 4×4 matrix whose map is
/// `(t³ + x1, i·t³ + x2, −s³ + x3, −s³ + x4)` with
/// `t = x1 + i·x2 + x3 + x4` and `s = x1 + i·x2 − x3 + x4`.
/// It satisfies the trace condition, has rank 2 and no zero diagonal entry.
pub fn rank_two_example() -> ScalarMatrix {
    ScalarMatrix::from_gaussian_integers(&[
        &[(1, 0), (0, 1), (1, 0), (1, 0)],
        &[(0, -1), (1, 0), (0, -1), (0, -1)],
        &[(-1, 0), (0, -1), (1, 0), (-1, 0)],
        &[(-1, 0), (0, -1), (1, 0), (-1, 0)],
    ])
    .expect("static shape")
}

/// `[[0, 1], [0, 0]]`, giving the triangular map `(x1 + x2³, x2)`.
pub fn shear_2() -> ScalarMatrix {
    ScalarMatrix::from_gaussian_integers(&[&[(0, 0), (1, 0)], &[(0, 0), (0, 0)]]).expect("static shape")
}

pub fn zero_3() -> ScalarMatrix {
    ScalarMatrix::zero(3, 3)
}

pub fn builtin_example(name: &str) -> Result<ScalarMatrix, InputError> {
    match name {
        "paper-example" => Ok(rank_two_example()),
        "shear-2" => Ok(shear_2()),
        "zero-3" => Ok(zero_3()),
        _ => Err(InputError::UnknownExample { name: name.to_string(), available: BUILTIN_NAMES.join(", ") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog() {
        assert_eq!(builtin_example("paper-example").unwrap(), rank_two_example());
        assert_eq!(builtin_example("shear-2").unwrap().to_string(), r#"[["0","1"],["0","0"]]"#);
        assert!(builtin_example("zero-3").unwrap().is_zero());
        let err = builtin_example("nope").unwrap_err();
        assert!(err.to_string().contains("paper-example, shear-2, zero-3"));
    }
}
