//! Exact construction, analysis and inversion of cubic-linear polynomial
//! maps `F = X + (AX)^{*3}` over the Gaussian rationals.
//!
//! * [`scalar`]: `Q(i)` arithmetic and the complex-literal grammar.
//! * [`poly`]: sparse polynomials, polynomial maps and matrices.
//! * [`linalg`]: exact rank, RREF and rank factorization.
//! * [`druzkowski`]: map construction, trace condition, rank-bound certificate.
//! * [`inversion`]: Keller tests and verified formal inversion.
//! * [`pairing`]: reduction to dimension `rank(A)` and the inverse lift.
//! * [`search`]: deterministic enumeration / sampling harness.
//! * [`cli`]: the `cubelin` command line.

pub mod cli;
pub mod druzkowski;
pub mod error;
pub mod examples;
pub mod inversion;
pub mod io;
pub mod linalg;
pub mod pairing;
pub mod poly;
pub mod scalar;
pub mod search;

pub use druzkowski::{
    delta, expand_map, gram_and_condition, rank_bound_certificate, trace_poly, DruzkowskiMap, RankBoundCertificate,
};
pub use error::{InputError, LinalgError, PairingError, PolyError, ScalarError, SearchError};
pub use examples::builtin_example;
pub use inversion::{
    decide_automorphism, decide_automorphism_with_bound, formal_inverse, is_keller, nilpotency_index, InverseResult,
    InverseStatus,
};
pub use io::{matrix_to_json, parse_matrix};
pub use linalg::ScalarMatrix;
pub use pairing::{corollary_pipeline, gz_reduce, lift_inverse, CorollaryOutcome, CorollaryReport, GZPair};
pub use poly::{cube_linear_form, Monomial, PolyMap, PolyMatrix, Polynomial};
pub use scalar::{GaussianRational, Rational};
pub use search::{run_search, Check, Filter, SearchConfig, SearchMode, SearchReport};
