//! Keller-condition tests and exact inversion of `X + H` maps.
//!
//! For `F = X + H` with `H` cubic homogeneous, `det JF ≡ 1` holds iff `JH`
//! is nilpotent. Nilpotency is the scalable test; the determinant is only a
//! cross-check for small dimensions. Inversion computes the formal inverse
//! up to the automorphism degree bound `3^(n-1)` and accepts it only when
//! both compositions with `F` are exactly the identity.

use serde::Serialize;

use crate::druzkowski::{cubic_part, cubic_part_after, expand_map};
use crate::error::PolyError;
use crate::linalg::ScalarMatrix;
use crate::poly::{PolyMap, PolyMatrix, Polynomial, DET_MAX_DIM};

/// Smallest `k ≤ n` with `M^k = 0`, or `None` if `M^n ≠ 0`.
pub fn nilpotency_index(m: &PolyMatrix) -> Result<Option<usize>, PolyError> {
    if m.rows() != m.cols() {
        return Err(PolyError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    // A nilpotent matrix has zero trace.
    if !m.trace()?.is_zero() {
        return Ok(None);
    }
    let mut power = m.clone();
    for k in 1..=n.max(1) {
        if power.is_zero() {
            return Ok(Some(k));
        }
        if k < n {
            power = power.mul(m)?;
        }
    }
    Ok(None)
}

/// Both Keller tests for a cubic-linear map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KellerCheck {
    pub nilpotency_index: Option<usize>,
    /// `det JF ≡ 1`; computed only for `n ≤ DET_MAX_DIM`.
    pub det_is_one: Option<bool>,
}

impl KellerCheck {
    pub fn is_keller(&self) -> bool {
        self.nilpotency_index.is_some()
    }

    /// False only when both tests ran and disagree.
    pub fn consistent(&self) -> bool {
        self.det_is_one.map_or(true, |d| d == self.nilpotency_index.is_some())
    }
}

/// Runs the nilpotency test on `JH` and, for small `n`, the determinant test
/// on `JF`, without judging agreement.
pub fn keller_check(a: &ScalarMatrix) -> KellerCheck {
    keller_check_with(a, true)
}

/// As [`keller_check`]; `with_det = false` skips the determinant route.
pub fn keller_check_with(a: &ScalarMatrix, with_det: bool) -> KellerCheck {
    assert!(a.is_square(), "Keller check needs a square matrix");
    let n = a.rows();
    let jh = cubic_part(a).jacobian();
    let nilpotency_index = nilpotency_index(&jh).expect("square by construction");
    let det_is_one = (with_det && n <= DET_MAX_DIM).then(|| {
        let jf = jh.add(&PolyMatrix::identity(n, n)).expect("same shape");
        jf.det().expect("size checked") == Polynomial::one(n)
    });
    KellerCheck { nilpotency_index, det_is_one }
}

/// True iff `J((AX)^{*3})` is nilpotent.
///
/// # Panics
/// For `n ≤ 6` the determinant route is evaluated too, and a disagreement
/// between the two routes aborts with an assertion failure.
pub fn is_keller(a: &ScalarMatrix) -> bool {
    let check = keller_check(a);
    assert!(check.consistent(), "Keller tests disagree for {a}: {check:?}");
    check.is_keller()
}

/// Splits `F` into `H = F - X`, checking that `F` has no constant term and
/// identity linear part.
pub fn nonlinear_part(f: &PolyMap) -> Result<PolyMap, PolyError> {
    let n = f.nvars();
    if f.len() != n {
        return Err(PolyError::NotIdentityPlusHigher);
    }
    let h = f.sub(&PolyMap::identity(n))?;
    if h.components().iter().any(|p| p.min_degree().is_some_and(|d| d < 2)) {
        return Err(PolyError::NotIdentityPlusHigher);
    }
    Ok(h)
}

/// The power-series inverse of `F = X + H`, truncated to total degree
/// `degree_bound`, by the fixed-point iteration `G ← X − H∘G`.
pub fn formal_inverse(f: &PolyMap, degree_bound: u32) -> Result<PolyMap, PolyError> {
    let h = nonlinear_part(f)?;
    iterate_inverse(f.nvars(), degree_bound, |g| h.compose(g, Some(degree_bound)))
}

fn iterate_inverse(
    n: usize,
    degree_bound: u32,
    h_after: impl Fn(&PolyMap) -> Result<PolyMap, PolyError>,
) -> Result<PolyMap, PolyError> {
    let identity = PolyMap::identity(n);
    let mut g = identity.clone();
    // Agreement with the true inverse rises by at least one degree per step.
    for _ in 0..=degree_bound {
        let next = identity.sub(&h_after(&g)?)?;
        if next == g {
            break;
        }
        g = next;
    }
    Ok(g)
}

/// `3^(n-1)`, saturating; `n = 0` gives 1.
pub fn default_degree_bound(n: usize) -> u32 {
    3u32.saturating_pow(n.saturating_sub(1) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InverseStatus {
    Invertible,
    NotInvertible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseResult {
    pub status: InverseStatus,
    pub inverse_degree: Option<u32>,
    pub degree_bound_used: u32,
    pub inverse: Option<PolyMap>,
}

impl InverseResult {
    pub fn is_invertible(&self) -> bool {
        self.status == InverseStatus::Invertible
    }
}

/// Decides whether `X + (AX)^{*3}` is a polynomial automorphism, with the
/// default degree bound `3^(n-1)`.
pub fn decide_automorphism(a: &ScalarMatrix) -> InverseResult {
    decide_automorphism_with_bound(a, default_degree_bound(a.rows()))
}

pub fn decide_automorphism_with_bound(a: &ScalarMatrix, degree_bound: u32) -> InverseResult {
    let f = expand_map(a).expect("square matrix required");
    let not_invertible = InverseResult {
        status: InverseStatus::NotInvertible,
        inverse_degree: None,
        degree_bound_used: degree_bound,
        inverse: None,
    };
    // A non-constant Jacobian determinant rules out a polynomial inverse.
    if !is_keller(a) {
        return not_invertible;
    }
    match invert_cubic_linear(a, &f, degree_bound) {
        Some(g) => InverseResult {
            status: InverseStatus::Invertible,
            inverse_degree: Some(g.degree().unwrap_or(0)),
            degree_bound_used: degree_bound,
            inverse: Some(g),
        },
        None => not_invertible,
    }
}

/// Same decision for an arbitrary `X + H` with `H` homogeneous of degree at
/// least two, where nilpotency of `JH` is equivalent to `det JF ≡ 1`.
pub fn decide_map_automorphism(f: &PolyMap, degree_bound: u32) -> Result<InverseResult, PolyError> {
    let h = nonlinear_part(f)?;
    let mut result = InverseResult {
        status: InverseStatus::NotInvertible,
        inverse_degree: None,
        degree_bound_used: degree_bound,
        inverse: None,
    };
    if nilpotency_index(&h.jacobian())?.is_none() {
        return Ok(result);
    }
    if let Some(g) = invert_verified(f, degree_bound) {
        result.status = InverseStatus::Invertible;
        result.inverse_degree = Some(g.degree().unwrap_or(0));
        result.inverse = Some(g);
    }
    Ok(result)
}

/// Formal inverse up to `degree_bound`, returned only if it is a two-sided
/// inverse of `f` exactly.
pub fn invert_verified(f: &PolyMap, degree_bound: u32) -> Option<PolyMap> {
    let g = formal_inverse(f, degree_bound).ok()?;
    is_two_sided_inverse(f, &g).then_some(g)
}

/// Formal inverse of `f = X + (AX)^{*3}` up to `degree_bound`, returned only
/// if it is exactly a two-sided inverse.
pub(crate) fn invert_cubic_linear(a: &ScalarMatrix, f: &PolyMap, degree_bound: u32) -> Option<PolyMap> {
    let g = iterate_inverse(a.rows(), degree_bound, |g| Ok(cubic_part_after(a, g, Some(degree_bound))))
        .expect("uniform arity");
    inverts_cubic_linear(a, f, &g).then_some(g)
}

/// Two-sided check for `f = X + (AX)^{*3}`. `f∘g` is formed as
/// `g + (Ag)^{*3}`; `g∘f` goes through general composition.
pub(crate) fn inverts_cubic_linear(a: &ScalarMatrix, f: &PolyMap, g: &PolyMap) -> bool {
    let right = g.add(&cubic_part_after(a, g, None)).is_ok_and(|m| m.is_identity());
    right && g.compose(f, None).is_ok_and(|m| m.is_identity())
}

/// `f∘g = X` and `g∘f = X`, checked symbolically (cheaper side first).
pub fn is_two_sided_inverse(f: &PolyMap, g: &PolyMap) -> bool {
    let right = f.compose(g, None).map(|m| m.is_identity()).unwrap_or(false);
    right && g.compose(f, None).map(|m| m.is_identity()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{rank_two_example, shear_2};
    use crate::scalar::GaussianRational;
    use proptest::prelude::*;

    fn one_by_one() -> ScalarMatrix {
        ScalarMatrix::identity(1)
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(nilpotency_index(&PolyMatrix::zero(3, 3, 3)).unwrap(), Some(1));
        let jh = cubic_part(&shear_2()).jacobian();
        assert_eq!(nilpotency_index(&jh).unwrap(), Some(2));
        let jh = cubic_part(&one_by_one()).jacobian();
        assert_eq!(nilpotency_index(&jh).unwrap(), None);
        assert!(nilpotency_index(&PolyMatrix::zero(2, 3, 1)).is_err());
    }

    #[test]
    fn keller_examples() {
        assert!(is_keller(&shear_2()));
        assert!(!is_keller(&one_by_one()));
        assert!(is_keller(&rank_two_example()));
        let check = keller_check(&rank_two_example());
        assert_eq!(check.det_is_one, Some(true));
    }

    #[test]
    fn formal_inverse_examples() {
        let f = expand_map(&shear_2()).unwrap();
        let (x1, x2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let expected = PolyMap::new(2, vec![&x1 - &x2.pow(3), x2.clone()]).unwrap();
        assert_eq!(formal_inverse(&f, 3).unwrap(), expected);
        assert_eq!(formal_inverse(&PolyMap::identity(3), 9).unwrap(), PolyMap::identity(3));
        let shifted = PolyMap::new(1, vec![&Polynomial::var(1, 0) + &Polynomial::one(1)]).unwrap();
        assert_eq!(formal_inverse(&shifted, 3), Err(PolyError::NotIdentityPlusHigher));
    }

    #[test]
    fn formal_inverse_of_example_uses_invariant_coordinates() {
        let f = expand_map(&rank_two_example()).unwrap();
        let g = formal_inverse(&f, 27).unwrap();
        assert_eq!(g.degree(), Some(9));
        assert!(f.compose(&g, None).unwrap().is_identity());
        // F fixes s and sends t to t - 2s³, so G sends t to t + 2s³.
        let c = |s: &str| GaussianRational::parse(s).unwrap();
        let s = Polynomial::linear_form(&[c("1"), c("i"), c("-1"), c("1")]);
        let t = Polynomial::linear_form(&[c("1"), c("i"), c("1"), c("1")]);
        let s_map = PolyMap::new(4, vec![s.clone()]).unwrap();
        let t_map = PolyMap::new(4, vec![t.clone()]).unwrap();
        assert_eq!(s_map.compose(&g, None).unwrap().component(0), &s);
        assert_eq!(t_map.compose(&g, None).unwrap().component(0), &(&t + &s.pow(3).scale(&c("2"))));
        assert_eq!(g.truncate(27), g);
    }

    #[test]
    fn decide_examples() {
        let r = decide_automorphism(&shear_2());
        assert!(r.is_invertible());
        assert_eq!(r.inverse_degree, Some(3));
        assert_eq!(r.inverse.unwrap().to_strings(), vec!["-x2^3 + x1", "x2"]);

        let r = decide_automorphism(&one_by_one());
        assert_eq!(r.status, InverseStatus::NotInvertible);
        assert_eq!(r.degree_bound_used, 1);
        assert!(r.inverse.is_none());

        let r = decide_automorphism(&ScalarMatrix::zero(3, 3));
        assert!(r.inverse.unwrap().is_identity());
    }

    fn unit_entry() -> impl Strategy<Value = GaussianRational> {
        prop::sample::select(vec![(0, 0), (0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
            .prop_map(|(a, b)| GaussianRational::from_gaussian_integer(a, b))
    }

    fn square(n: usize) -> impl Strategy<Value = ScalarMatrix> {
        proptest::collection::vec(unit_entry(), n * n).prop_map(move |e| ScalarMatrix::from_vec(n, n, e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn keller_routes_agree(a in square(3)) {
            prop_assert!(keller_check(&a).consistent());
        }

        #[test]
        fn invertible_results_are_exact(a in square(2)) {
            let r = decide_automorphism(&a);
            if let Some(g) = &r.inverse {
                let f = expand_map(&a).unwrap();
                prop_assert!(f.compose(g, None).unwrap().is_identity());
                prop_assert!(g.compose(&f, None).unwrap().is_identity());
                prop_assert!(r.inverse_degree.unwrap() <= r.degree_bound_used);
                prop_assert_eq!(g.truncate(r.degree_bound_used), g.clone());
            }
        }
    }
}
