//! Sparse multivariate polynomials over `Q(i)`, polynomial maps and
//! polynomial matrices.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is
//! graded lexicographic with `x1 > x2 > ... > xn`. Zero coefficients are
//! never stored, so two polynomials are equal iff their term maps are.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::PolyError;
use crate::linalg::ScalarMatrix;
use crate::scalar::GaussianRational;

/// Largest square size accepted by [`PolyMatrix::det`].
pub const DET_MAX_DIM: usize = 6;

/// Exponent vector with cached total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 12]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars), degree: 0 }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial { exps: SmallVec::from_slice(exps), degree: exps.iter().map(|&e| u32::from(e)).sum() }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps: SmallVec<[u16; 12]> = SmallVec::from_slice(&self.exps);
        for (a, b) in exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
        Monomial { exps, degree: self.degree + other.degree }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ring operation selector for [`Polynomial::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, GaussianRational::one())
    }

    /// The coordinate function `x_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range for {nvars} variables");
        let mut p = Polynomial::zero(nvars);
        p.terms.insert(Monomial::var(nvars, index), GaussianRational::one());
        p
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from (possibly repeated, possibly zero) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity does not match polynomial arity");
            p.add_term(m, &c);
        }
        p
    }

    /// `Σ_j coeffs[j]·x_j`.
    pub fn linear_form(coeffs: &[GaussianRational]) -> Self {
        let n = coeffs.len();
        Polynomial::from_terms(n, coeffs.iter().enumerate().map(|(j, c)| (Monomial::var(n, j), c.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Smallest degree of a stored term, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::total_degree)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree().map_or(true, |d| d == 0)
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch { left: self.nvars, right: other.nvars })
        }
    }

    pub fn apply(&self, op: RingOp, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        Ok(match op {
            RingOp::Add => self.add_unchecked(other, false),
            RingOp::Sub => self.add_unchecked(other, true),
            RingOp::Mul => self.mul_truncated(other, None),
        })
    }

    fn add_unchecked(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = self.clone();
        out.add_in_place(other, negate);
        out
    }

    fn add_in_place(&mut self, other: &Polynomial, negate: bool) {
        for (m, c) in &other.terms {
            if negate {
                self.add_term(m.clone(), &-c);
            } else {
                self.add_term(m.clone(), c);
            }
        }
    }

    /// Product with every term of total degree above `limit` discarded.
    pub fn mul_truncated(&self, other: &Polynomial, limit: Option<u32>) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc: FxHashMap<Monomial, GaussianRational> = FxHashMap::default();
        acc.reserve(large.terms.len() * 2);
        for (ms, cs) in &small.terms {
            for (ml, cl) in &large.terms {
                if let Some(d) = limit {
                    if ms.degree + ml.degree > d {
                        // terms of `large` are ascending in degree
                        break;
                    }
                }
                let c = cs * cl;
                use std::collections::hash_map::Entry;
                match acc.entry(ms.mul(ml)) {
                    Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    Entry::Occupied(mut o) => *o.get_mut() += &c,
                }
            }
        }
        Polynomial { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        self.pow_truncated(k, None)
    }

    pub fn pow_truncated(&self, k: u32, limit: Option<u32>) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars).truncate_opt(limit);
        for _ in 0..k {
            acc = acc.mul_truncated(self, limit);
        }
        acc
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree <= d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    fn truncate_opt(self, limit: Option<u32>) -> Polynomial {
        match limit {
            Some(d) if self.total_degree().is_some_and(|td| td > d) => self.truncate(d),
            _ => self,
        }
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn diff(&self, var: usize) -> Result<Polynomial, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.exps[var] -= 1;
            dm.degree -= 1;
            out.terms.insert(dm, c * &GaussianRational::from_integer(i64::from(e)));
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<GaussianRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { got: point.len(), expected: self.nvars });
        }
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t = &t * &x.pow(u32::from(e));
                }
            }
            total += &t;
        }
        Ok(total)
    }

    /// Substitutes `inner[j]` for `x_{j+1}`. Uses Horner's scheme one variable
    /// at a time, truncating after every multiplication when `limit` is set.
    pub fn substitute(&self, inner: &[Polynomial], limit: Option<u32>) -> Result<Polynomial, PolyError> {
        if inner.len() != self.nvars {
            return Err(PolyError::ArityMismatch { left: self.nvars, right: inner.len() });
        }
        let target = inner.first().map_or(0, Polynomial::nvars);
        if let Some(p) = inner.iter().find(|p| p.nvars != target) {
            return Err(PolyError::ArityMismatch { left: target, right: p.nvars });
        }
        let terms: Vec<(&Monomial, &GaussianRational)> = self.terms.iter().collect();
        Ok(horner(&terms, 0, inner, target, limit))
    }
}

/// Evaluates the sum of `terms` with variables `var..` replaced by `inner`.
fn horner(
    terms: &[(&Monomial, &GaussianRational)],
    var: usize,
    inner: &[Polynomial],
    target: usize,
    limit: Option<u32>,
) -> Polynomial {
    if terms.is_empty() {
        return Polynomial::zero(target);
    }
    if var == inner.len() {
        let c: GaussianRational = terms.iter().map(|(_, c)| (*c).clone()).sum();
        return Polynomial::constant(target, c);
    }
    let mut groups: BTreeMap<u16, Vec<(&Monomial, &GaussianRational)>> = BTreeMap::new();
    for &(m, c) in terms {
        groups.entry(m.exps[var]).or_default().push((m, c));
    }
    let top = *groups.keys().next_back().unwrap();
    let mut acc = Polynomial::zero(target);
    for e in (0..=top).rev() {
        if e != top {
            acc = acc.mul_truncated(&inner[var], limit);
        }
        if let Some(group) = groups.get(&e) {
            let mut rest = horner(group, var + 1, inner, target, limit);
            if acc.terms.len() < rest.terms.len() {
                std::mem::swap(&mut acc, &mut rest);
            }
            acc.add_in_place(&rest, false);
        }
    }
    acc
}

/// `(Σ_j row_j x_j)³`, expanded with the multinomial coefficients 1, 3, 6.
pub fn cube_linear_form(row: &[GaussianRational]) -> Polynomial {
    let n = row.len();
    let three = GaussianRational::from_integer(3);
    let six = GaussianRational::from_integer(6);
    let support: Vec<usize> = (0..n).filter(|&j| !row[j].is_zero()).collect();
    let mut p = Polynomial::zero(n);
    let mono = |idx: &[usize]| {
        let mut m = Monomial::one(n);
        for &j in idx {
            m.exps[j] += 1;
        }
        m.degree = idx.len() as u32;
        m
    };
    for (a, &j) in support.iter().enumerate() {
        p.add_term(mono(&[j, j, j]), &row[j].pow(3));
        for (b, &k) in support.iter().enumerate().skip(a + 1) {
            p.add_term(mono(&[j, j, k]), &(&three * &(&row[j].pow(2) * &row[k])));
            p.add_term(mono(&[j, k, k]), &(&three * &(&row[j] * &row[k].pow(2))));
            for &l in &support[b + 1..] {
                p.add_term(mono(&[j, k, l]), &(&six * &(&(&row[j] * &row[k]) * &row[l])));
            }
        }
    }
    p
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on arity mismatch; use [`Polynomial::apply`] for a checked form.
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        self.add_unchecked(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        self.add_unchecked(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.mul_truncated(rhs, None)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

fn coefficient_prefix(c: &GaussianRational) -> String {
    if c.is_one() {
        String::new()
    } else if (-c).is_one() {
        "-".to_string()
    } else if c.re.is_zero() || c.im.is_zero() {
        format!("{c}*")
    } else {
        format!("({c})*")
    }
}

/// Canonical rendering, e.g. `x1^3 + 3*x1^2*x2 - i*x2 + (1/2+i)`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let text = if m.is_one() {
                if c.re.is_zero() || c.im.is_zero() {
                    c.to_string()
                } else {
                    format!("({c})")
                }
            } else {
                format!("{}{}", coefficient_prefix(c), m)
            };
            match (k, text.strip_prefix('-')) {
                (0, _) => f.write_str(&text)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A tuple of polynomials sharing one set of variables, read as a map
/// from `nvars`-space to `components.len()`-space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    nvars: usize,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(nvars: usize, components: Vec<Polynomial>) -> Result<Self, PolyError> {
        if let Some(p) = components.iter().find(|p| p.nvars != nvars) {
            return Err(PolyError::ArityMismatch { left: nvars, right: p.nvars });
        }
        Ok(PolyMap { nvars, components })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { nvars: n, components: (0..n).map(|i| Polynomial::var(n, i)).collect() }
    }

    /// The linear map `X ↦ M·X`.
    pub fn linear(m: &ScalarMatrix) -> Self {
        PolyMap { nvars: m.cols(), components: (0..m.rows()).map(|i| Polynomial::linear_form(m.row(i))).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of components (the target dimension).
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn is_identity(&self) -> bool {
        self.nvars == self.components.len()
            && self.components.iter().enumerate().all(|(i, p)| *p == Polynomial::var(self.nvars, i))
    }

    /// Highest total degree among components; `None` if all are zero.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::total_degree).max()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &PolyMap, truncate_above: Option<u32>) -> Result<PolyMap, PolyError> {
        if self.nvars != inner.components.len() {
            return Err(PolyError::ArityMismatch { left: self.nvars, right: inner.components.len() });
        }
        let components = self
            .components
            .par_iter()
            .map(|p| p.substitute(&inner.components, truncate_above))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { nvars: inner.nvars, components })
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<Vec<GaussianRational>, PolyError> {
        self.components.iter().map(|p| p.evaluate(point)).collect()
    }

    pub fn truncate(&self, d: u32) -> PolyMap {
        PolyMap { nvars: self.nvars, components: self.components.iter().map(|p| p.truncate(d)).collect() }
    }

    pub fn add(&self, other: &PolyMap) -> Result<PolyMap, PolyError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap, PolyError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &PolyMap,
        op: impl Fn(&Polynomial, &Polynomial) -> Polynomial,
    ) -> Result<PolyMap, PolyError> {
        if self.nvars != other.nvars || self.len() != other.len() {
            return Err(PolyError::ShapeMismatch { left: (self.len(), self.nvars), right: (other.len(), other.nvars) });
        }
        Ok(PolyMap {
            nvars: self.nvars,
            components: self.components.iter().zip(&other.components).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn jacobian(&self) -> PolyMatrix {
        let entries = self
            .components
            .iter()
            .flat_map(|p| (0..self.nvars).map(move |j| p.diff(j).expect("index in range")))
            .collect();
        PolyMatrix { rows: self.components.len(), cols: self.nvars, nvars: self.nvars, entries }
    }

    /// Component strings in canonical form.
    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for PolyMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.components.serialize(serializer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixOp {
    Add,
    Mul,
    Power(u32),
}

/// Dense matrix with polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_rows(nvars: usize, rows: Vec<Vec<Polynomial>>) -> Result<Self, PolyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(PolyError::ShapeMismatch { left: (r, c), right: (r, row.len()) });
            }
            for p in row {
                if p.nvars != nvars {
                    return Err(PolyError::ArityMismatch { left: nvars, right: p.nvars });
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { rows: r, cols: c, nvars, entries })
    }

    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![Polynomial::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n, nvars);
        for i in 0..n {
            m.entries[i * n + i] = Polynomial::one(nvars);
        }
        m
    }

    /// Embeds a scalar matrix as constant polynomials.
    pub fn from_scalar(m: &ScalarMatrix, nvars: usize) -> Self {
        PolyMatrix {
            rows: m.rows(),
            cols: m.cols(),
            nvars,
            entries: (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| Polynomial::constant(nvars, m.get(i, j).clone()))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn apply(&self, op: MatrixOp, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        match op {
            MatrixOp::Add => self.add(other),
            MatrixOp::Mul => self.mul(other),
            MatrixOp::Power(k) => self.pow(k),
        }
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        self.same_shape(other)?;
        Ok(PolyMatrix {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
            ..self.clone_shape()
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        self.same_shape(other)?;
        Ok(PolyMatrix {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
            ..self.clone_shape()
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.cols != other.rows || self.nvars != other.nvars {
            return Err(PolyError::ShapeMismatch { left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { rows: self.rows, cols: other.cols, nvars: self.nvars, entries })
    }

    /// `self^k`; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Result<PolyMatrix, PolyError> {
        self.require_square()?;
        let mut acc = PolyMatrix::identity(self.rows, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Polynomial, PolyError> {
        self.require_square()?;
        Ok((0..self.rows).fold(Polynomial::zero(self.nvars), |acc, i| &acc + self.get(i, i)))
    }

    /// Determinant by cofactor expansion along rows, memoized on the set of
    /// remaining columns. Limited to [`DET_MAX_DIM`].
    pub fn det(&self) -> Result<Polynomial, PolyError> {
        self.require_square()?;
        let n = self.rows;
        if n > DET_MAX_DIM {
            return Err(PolyError::UnsupportedSize { dim: n, limit: DET_MAX_DIM });
        }
        // minors[mask] = det of rows (n - |mask|).. restricted to columns in mask
        let mut minors: FxHashMap<u32, Polynomial> = FxHashMap::default();
        minors.insert(0, Polynomial::one(self.nvars));
        let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            let row = n - mask.count_ones() as usize;
            let mut acc = Polynomial::zero(self.nvars);
            for (pos, col) in (0..n).filter(|c| mask & (1 << c) != 0).enumerate() {
                let entry = self.get(row, col);
                if entry.is_zero() {
                    continue;
                }
                let minor = &minors[&(mask & !(1 << col))];
                if minor.is_zero() {
                    continue;
                }
                let term = entry * minor;
                acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            minors.insert(mask, acc);
        }
        Ok(minors.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Polynomial::one(self.nvars)))
    }

    /// Entrywise evaluation at a point.
    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<ScalarMatrix, PolyError> {
        let values = self.entries.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>, _>>()?;
        Ok(ScalarMatrix::from_vec(self.rows, self.cols, values).expect("shape preserved"))
    }

    /// Entrywise substitution of `inner` for the variables.
    pub fn substitute(&self, inner: &PolyMap) -> Result<PolyMatrix, PolyError> {
        let entries =
            self.entries.iter().map(|p| p.substitute(inner.components(), None)).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, nvars: inner.nvars(), entries })
    }

    fn require_square(&self) -> Result<(), PolyError> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(PolyError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn same_shape(&self, other: &PolyMatrix) -> Result<(), PolyError> {
        if self.rows == other.rows && self.cols == other.cols && self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::ShapeMismatch { left: (self.rows, self.cols), right: (other.rows, other.cols) })
        }
    }

    fn clone_shape(&self) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, entries: Vec::new() }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
