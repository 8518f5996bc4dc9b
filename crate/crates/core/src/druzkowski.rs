//! Cubic-linear maps `F = X + (AX)^{*3}` and the rank-bound certificate.
//!
//! For a square matrix `A` with rows `A^i`, write `t_i = A^i·X`. The trace of
//! `J((AX)^{*3})` is `3·Σ a_ii t_i²`, which vanishes identically exactly when
//! the symmetric matrix `AᵗDA` is zero (`D = diag(a_11, …, a_nn)`). Under that
//! condition `2·rank(A) ≤ n + δ`, where `δ` counts zero diagonal entries.
//! [`rank_bound_certificate`] evaluates every quantity in that statement
//! exactly and records whether the inequality held.

use serde::Serialize;

use crate::error::LinalgError;
use crate::linalg::ScalarMatrix;
use crate::poly::{cube_linear_form, PolyMap, PolyMatrix, Polynomial};
use crate::scalar::GaussianRational;

/// A cubic-linear map, determined by its square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DruzkowskiMap {
    matrix: ScalarMatrix,
    map: PolyMap,
}

impl DruzkowskiMap {
    pub fn new(matrix: ScalarMatrix) -> Result<Self, LinalgError> {
        let map = expand_map(&matrix)?;
        Ok(DruzkowskiMap { matrix, map })
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.matrix
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `F - X`, i.e. `(AX)^{*3}`.
    pub fn cubic_part(&self) -> PolyMap {
        cubic_part(&self.matrix)
    }

    /// `JH = JF - I`.
    pub fn jacobian_of_cubic_part(&self) -> PolyMatrix {
        self.cubic_part().jacobian()
    }
}

fn require_square(a: &ScalarMatrix) -> Result<(), LinalgError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() })
    }
}

/// `(AX)^{*3}` as a polynomial map (no square check).
pub(crate) fn cubic_part(a: &ScalarMatrix) -> PolyMap {
    let n = a.cols();
    PolyMap::new(n, (0..a.rows()).map(|i| cube_linear_form(a.row(i))).collect()).expect("uniform arity")
}

/// `(AX)^{*3} ∘ inner`, formed as the cubes of the linear combinations
/// `A^i·inner` so that cancellation happens before cubing.
pub(crate) fn cubic_part_after(a: &ScalarMatrix, inner: &PolyMap, limit: Option<u32>) -> PolyMap {
    let n = inner.nvars();
    let components = (0..a.rows())
        .map(|i| {
            let mut t = Polynomial::zero(n);
            for (j, c) in a.row(i).iter().enumerate() {
                if !c.is_zero() {
                    t = &t + &inner.component(j).scale(c);
                }
            }
            let t = match limit {
                Some(d) => t.truncate(d),
                None => t,
            };
            t.pow_truncated(3, limit)
        })
        .collect();
    PolyMap::new(n, components).expect("uniform arity")
}

/// Component `i` is `x_i + (A^i·X)³`.
pub fn expand_map(a: &ScalarMatrix) -> Result<PolyMap, LinalgError> {
    require_square(a)?;
    let n = a.rows();
    let components = (0..n).map(|i| &Polynomial::var(n, i) + &cube_linear_form(a.row(i))).collect();
    Ok(PolyMap::new(n, components).expect("uniform arity"))
}

/// The literal trace `Tr J((AX)^{*3}) = 3·Σ_i a_ii·t_i²`.
pub fn trace_poly(a: &ScalarMatrix) -> Result<Polynomial, LinalgError> {
    require_square(a)?;
    let n = a.rows();
    let three = GaussianRational::from_integer(3);
    let mut acc = Polynomial::zero(n);
    for i in 0..n {
        let aii = a.get(i, i);
        if aii.is_zero() {
            continue;
        }
        let t = Polynomial::linear_form(a.row(i));
        acc = &acc + &(&t * &t).scale(&(&three * aii));
    }
    Ok(acc)
}

/// Returns `(AᵗDA, AᵗDA == 0)`.
pub fn gram_and_condition(a: &ScalarMatrix) -> Result<(ScalarMatrix, bool), LinalgError> {
    let d = a.diag_of()?;
    let gram = a.transpose().mul(&d)?.mul(a)?;
    let holds = gram.is_zero();
    Ok((gram, holds))
}

/// Number of zero diagonal entries.
pub fn delta(a: &ScalarMatrix) -> Result<usize, LinalgError> {
    require_square(a)?;
    Ok(a.diagonal_entries().iter().filter(|x| x.is_zero()).count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankBoundCertificate {
    pub trace_condition_holds: bool,
    pub delta: usize,
    pub rank: usize,
    pub bound_times_two: usize,
    /// Vacuously true when the trace condition fails.
    pub theorem_satisfied: bool,
}

impl RankBoundCertificate {
    /// The bound is attained: `2·rank = n + δ` under the trace condition.
    pub fn is_tight(&self) -> bool {
        self.trace_condition_holds && 2 * self.rank == self.bound_times_two
    }
}

pub fn rank_bound_certificate(a: &ScalarMatrix) -> Result<RankBoundCertificate, LinalgError> {
    let (_, holds) = gram_and_condition(a)?;
    let delta = delta(a)?;
    let rank = a.rank();
    let bound_times_two = a.rows() + delta;
    Ok(RankBoundCertificate {
        trace_condition_holds: holds,
        delta,
        rank,
        bound_times_two,
        theorem_satisfied: !holds || 2 * rank <= bound_times_two,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{rank_two_example, shear_2};
    use proptest::prelude::*;

    fn c(s: &str) -> GaussianRational {
        GaussianRational::parse(s).unwrap()
    }

    fn m(rows: &[&[(i64, i64)]]) -> ScalarMatrix {
        ScalarMatrix::from_gaussian_integers(rows).unwrap()
    }

    #[test]
    fn expand_examples() {
        let f = expand_map(&shear_2()).unwrap();
        let (x1, x2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        assert_eq!(f.components(), &[&x1 + &x2.pow(3), x2.clone()]);
        assert!(expand_map(&ScalarMatrix::zero(3, 3)).unwrap().is_identity());
        assert!(expand_map(&ScalarMatrix::zero(2, 3)).is_err());
    }

    #[test]
    fn expand_reproduces_example_components() {
        let f = expand_map(&rank_two_example()).unwrap();
        let x: Vec<Polynomial> = (0..4).map(|i| Polynomial::var(4, i)).collect();
        let t = Polynomial::linear_form(&[c("1"), c("i"), c("1"), c("1")]);
        let s = Polynomial::linear_form(&[c("1"), c("i"), c("-1"), c("1")]);
        let (t3, s3) = (t.pow(3), s.pow(3));
        let expected = [&t3 + &x[0], &t3.scale(&c("i")) + &x[1], &(-&s3) + &x[2], &(-&s3) + &x[3]];
        assert_eq!(f.components(), &expected);
    }

    #[test]
    fn trace_examples() {
        assert!(trace_poly(&ScalarMatrix::zero(3, 3)).unwrap().is_zero());
        let (x1, x2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        assert_eq!(trace_poly(&ScalarMatrix::identity(2)).unwrap(), (&(&x1 * &x1) + &(&x2 * &x2)).scale(&c("3")));
        assert!(trace_poly(&rank_two_example()).unwrap().is_zero());
    }

    #[test]
    fn gram_examples() {
        let (g, holds) = gram_and_condition(&rank_two_example()).unwrap();
        assert!(g.is_zero() && holds);
        let (g, holds) = gram_and_condition(&ScalarMatrix::identity(2)).unwrap();
        assert_eq!(g, ScalarMatrix::identity(2));
        assert!(!holds);
        let (g, holds) = gram_and_condition(&m(&[&[(0, 0), (1, 0)], &[(1, 0), (0, 0)]])).unwrap();
        assert!(g.is_zero() && holds);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&ScalarMatrix::zero(3, 3)).unwrap(), 3);
        assert_eq!(delta(&rank_two_example()).unwrap(), 0);
        assert_eq!(delta(&m(&[&[(1, 0), (0, 0)], &[(0, 0), (0, 0)]])).unwrap(), 1);
    }

    #[test]
    fn certificate_examples() {
        let cert = rank_bound_certificate(&rank_two_example()).unwrap();
        assert_eq!(
            cert,
            RankBoundCertificate {
                trace_condition_holds: true,
                delta: 0,
                rank: 2,
                bound_times_two: 4,
                theorem_satisfied: true
            }
        );
        assert!(cert.is_tight());
        let swap = rank_bound_certificate(&m(&[&[(0, 0), (1, 0)], &[(1, 0), (0, 0)]])).unwrap();
        assert_eq!(
            swap,
            RankBoundCertificate {
                trace_condition_holds: true,
                delta: 2,
                rank: 2,
                bound_times_two: 4,
                theorem_satisfied: true
            }
        );
        let id = rank_bound_certificate(&ScalarMatrix::identity(2)).unwrap();
        assert!(!id.trace_condition_holds && id.theorem_satisfied);
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            r#"{"trace_condition_holds":true,"delta":0,"rank":2,"bound_times_two":4,"theorem_satisfied":true}"#
        );
    }

    fn unit_entry() -> impl Strategy<Value = GaussianRational> {
        prop::sample::select(vec![(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
            .prop_map(|(a, b)| GaussianRational::from_gaussian_integer(a, b))
    }

    fn square(n: usize) -> impl Strategy<Value = ScalarMatrix> {
        proptest::collection::vec(unit_entry(), n * n).prop_map(move |e| ScalarMatrix::from_vec(n, n, e).unwrap())
    }

    proptest! {
        #[test]
        fn trace_formulations_agree(a in square(3)) {
            let (_, holds) = gram_and_condition(&a).unwrap();
            prop_assert_eq!(trace_poly(&a).unwrap().is_zero(), holds);
        }

        #[test]
        fn jacobian_structure(a in square(3)) {
            let n = 3;
            let jh = expand_map(&a).unwrap().jacobian().sub(&PolyMatrix::identity(n, n)).unwrap();
            let three = GaussianRational::from_integer(3);
            for i in 0..n {
                let t = Polynomial::linear_form(a.row(i));
                let t2 = &t * &t;
                for j in 0..n {
                    prop_assert_eq!(jh.get(i, j), &t2.scale(&(&three * a.get(i, j))));
                }
            }
            prop_assert_eq!(jh.trace().unwrap(), trace_poly(&a).unwrap());
        }

        #[test]
        fn rank_bound_holds(a in square(4)) {
            prop_assert!(rank_bound_certificate(&a).unwrap().theorem_satisfied);
        }
    }
}
