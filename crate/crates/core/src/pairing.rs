//! Reduction of a rank-`r` cubic-linear map to a cubic homogeneous map in
//! dimension `r`, and the inverse lift back.
//!
//! With `A = B·C` (`B` is `n×r`, `C` is `r×n`), put `G(Y) = Y + C·(BY)^{*3}`.
//! Then `C∘F = G∘C`, and any inverse of `G` yields
//! `F⁻¹(Z) = Z − (B·G⁻¹(C·Z))^{*3}`.

use serde::Serialize;

use crate::druzkowski::{expand_map, rank_bound_certificate, RankBoundCertificate};
use crate::error::{LinalgError, PairingError};
use crate::inversion::{
    decide_map_automorphism, default_degree_bound, inverts_cubic_linear, is_keller, nilpotency_index, nonlinear_part,
};
use crate::linalg::ScalarMatrix;
use crate::poly::{cube_linear_form, PolyMap, Polynomial};

/// Largest dimension accepted by [`corollary_pipeline`].
pub const COROLLARY_MAX_DIM: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GZPair {
    pub b: ScalarMatrix,
    pub c: ScalarMatrix,
    pub g: PolyMap,
    pub rank: usize,
}

impl GZPair {
    /// `C·F(X) = G(C·X)` as a polynomial identity.
    pub fn intertwines(&self, f: &PolyMap) -> bool {
        let c_map = PolyMap::linear(&self.c);
        match (c_map.compose(f, None), self.g.compose(&c_map, None)) {
            (Ok(lhs), Ok(rhs)) => lhs == rhs,
            _ => false,
        }
    }

    pub fn recomposes_to(&self, a: &ScalarMatrix) -> bool {
        self.b.mul(&self.c).is_ok_and(|bc| &bc == a)
    }
}

/// `G(Y) = Y + C·(BY)^{*3}` over the canonical rank factorization of `A`.
pub fn gz_reduce(a: &ScalarMatrix) -> Result<GZPair, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let (b, c) = a.rank_factorization();
    let r = c.rows();
    let cubes: Vec<Polynomial> = (0..b.rows()).map(|j| cube_linear_form(b.row(j))).collect();
    let components = (0..r)
        .map(|i| {
            let mut acc = Polynomial::var(r, i);
            for (j, cube) in cubes.iter().enumerate() {
                let cij = c.get(i, j);
                if !cij.is_zero() && !cube.is_zero() {
                    acc = &acc + &cube.scale(cij);
                }
            }
            acc
        })
        .collect();
    let g = PolyMap::new(r, components).expect("uniform arity");
    Ok(GZPair { b, c, g, rank: r })
}

/// Lifts an exact inverse of `pair.g` to an inverse of `X + (BCX)^{*3}`.
///
/// Both the precondition (`g_inverse` inverts `G`) and the result (two-sided
/// inverse of `F`) are verified symbolically.
pub fn lift_inverse(pair: &GZPair, g_inverse: &PolyMap) -> Result<PolyMap, PairingError> {
    let right = pair.g.compose(g_inverse, None).map_err(|_| PairingError::UnverifiedInverse)?;
    if !right.is_identity() {
        return Err(PairingError::UnverifiedInverse);
    }
    let a = pair.b.mul(&pair.c)?;
    let n = a.rows();
    let c_map = PolyMap::linear(&pair.c);
    let inner = g_inverse.compose(&c_map, None)?;
    let components = (0..n)
        .map(|k| {
            let mut w = Polynomial::zero(n);
            for (j, p) in inner.components().iter().enumerate() {
                let bkj = pair.b.get(k, j);
                if !bkj.is_zero() {
                    w = &w + &p.scale(bkj);
                }
            }
            &Polynomial::var(n, k) - &w.pow(3)
        })
        .collect();
    let lifted = PolyMap::new(n, components)?;
    let f = expand_map(&a)?;
    if !inverts_cubic_linear(&a, &f, &lifted) {
        return Err(PairingError::LiftFailed);
    }
    Ok(lifted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryOutcome {
    Verified,
    /// Some `a_ii` is zero, so the hypothesis fails.
    DiagonalHasZero,
    /// `det JF` is not identically one.
    NotKeller,
    /// A step that should succeed did not; see `anomaly`.
    Anomaly,
}

/// Record of every step of the dimension-≤9 pipeline. Fields after the
/// first failing gate are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub n: usize,
    pub outcome: CorollaryOutcome,
    pub diag_nonzero: bool,
    pub keller: Option<bool>,
    pub certificate: Option<RankBoundCertificate>,
    pub rank: Option<usize>,
    pub rank_le_4: Option<bool>,
    pub pair: Option<GZPair>,
    pub intertwining_holds: Option<bool>,
    pub g_nilpotent: Option<bool>,
    pub g_inverse_degree: Option<u32>,
    pub g_inverse: Option<PolyMap>,
    pub f_inverse_degree: Option<u32>,
    pub f_inverse: Option<PolyMap>,
    pub verified: bool,
    pub anomaly: Option<String>,
}

impl CorollaryReport {
    fn new(n: usize, diag_nonzero: bool) -> Self {
        CorollaryReport {
            n,
            outcome: CorollaryOutcome::DiagonalHasZero,
            diag_nonzero,
            keller: None,
            certificate: None,
            rank: None,
            rank_le_4: None,
            pair: None,
            intertwining_holds: None,
            g_nilpotent: None,
            g_inverse_degree: None,
            g_inverse: None,
            f_inverse_degree: None,
            f_inverse: None,
            verified: false,
            anomaly: None,
        }
    }

    fn flag(mut self, message: impl Into<String>) -> Self {
        self.outcome = CorollaryOutcome::Anomaly;
        self.anomaly = Some(message.into());
        self
    }

    pub fn is_anomaly(&self) -> bool {
        self.outcome == CorollaryOutcome::Anomaly
    }

    /// The hypotheses held (nonzero diagonal, Keller).
    pub fn applicable(&self) -> bool {
        self.diag_nonzero && self.keller == Some(true)
    }
}

/// Runs the nonzero-diagonal, dimension ≤ 9 argument on one matrix:
/// hypothesis gates, rank bound, reduction to dimension `rank(A) ≤ 4`,
/// inversion there and the lift back, each step checked exactly.
pub fn corollary_pipeline(a: &ScalarMatrix) -> Result<CorollaryReport, PairingError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() }.into());
    }
    let n = a.rows();
    if n > COROLLARY_MAX_DIM {
        return Err(PairingError::OutOfScope(n));
    }
    let diag_nonzero = a.diagonal_entries().iter().all(|x| !x.is_zero());
    let mut report = CorollaryReport::new(n, diag_nonzero);
    if !diag_nonzero {
        return Ok(report);
    }

    let keller = is_keller(a);
    report.keller = Some(keller);
    if !keller {
        report.outcome = CorollaryOutcome::NotKeller;
        return Ok(report);
    }

    let cert = rank_bound_certificate(a)?;
    report.rank = Some(cert.rank);
    report.rank_le_4 = Some(cert.rank <= 4);
    report.certificate = Some(cert.clone());
    if !cert.trace_condition_holds {
        return Ok(report.flag("Keller map with nonzero Jacobian trace"));
    }
    if !cert.theorem_satisfied {
        return Ok(report.flag(format!("rank bound violated: 2*{} > {}", cert.rank, cert.bound_times_two)));
    }
    if cert.rank > 4 {
        return Ok(report.flag(format!("rank {} exceeds 4 with nonzero diagonal", cert.rank)));
    }

    let f = expand_map(a)?;
    let pair = gz_reduce(a)?;
    let intertwines = pair.intertwines(&f);
    report.intertwining_holds = Some(intertwines);
    if !pair.recomposes_to(a) || !intertwines {
        report.pair = Some(pair);
        return Ok(report.flag("pairing identities failed"));
    }

    let g_nilpotent = nilpotency_index(&nonlinear_part(&pair.g)?.jacobian())?.is_some();
    report.g_nilpotent = Some(g_nilpotent);
    if !g_nilpotent {
        report.pair = Some(pair);
        return Ok(report.flag("reduced map is not Keller"));
    }

    let g_result = decide_map_automorphism(&pair.g, default_degree_bound(pair.rank))?;
    let Some(g_inverse) = g_result.inverse else {
        report.pair = Some(pair);
        return Ok(report.flag(format!(
            "Keller map in dimension {} failed inversion at degree bound {}",
            n, g_result.degree_bound_used
        )));
    };
    report.g_inverse_degree = g_result.inverse_degree;

    let lifted = match lift_inverse(&pair, &g_inverse) {
        Ok(lifted) => lifted,
        Err(e) => {
            report.pair = Some(pair);
            report.g_inverse = Some(g_inverse);
            return Ok(report.flag(format!("inverse lift failed: {e}")));
        }
    };
    report.f_inverse_degree = Some(lifted.degree().unwrap_or(0));
    report.f_inverse = Some(lifted);
    report.g_inverse = Some(g_inverse);
    report.pair = Some(pair);
    report.verified = true;
    report.outcome = CorollaryOutcome::Verified;
    Ok(report)
}
