//! Truncated convolution algebra on the nonnegative integers.
//!
//! Elements are stored as finitely many Taylor/l1 coefficients plus a
//! certified upper bound on the l1 mass of everything omitted. Every
//! operation propagates that bound, so all downstream norm claims are
//! rigorous inequalities rather than approximations.

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Default relative tolerance for the maximal-ideal membership gate.
pub const NOT_IN_IDEAL_TOL: f64 = 1e-10;

/// Element of the truncated algebra: coefficients `a_0..a_deg` plus a
/// certified bound on the l1 mass of unstored terms.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S: Scalar> {
    coeffs: Vec<S>,
    tail: S::Real,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn new(coeffs: Vec<S>, tail: S::Real) -> Result<Self> {
        if !tail.is_valid() || tail < S::Real::zero() {
            return Err(Error::InvalidArgument(format!(
                "tail bound must be finite and nonnegative, got {tail:?}"
            )));
        }
        if coeffs.iter().any(|c| !c.is_valid()) {
            return Err(Error::InvalidArgument(
                "coefficients must be finite".into(),
            ));
        }
        Ok(TruncatedSeries { coeffs, tail })
    }

    /// Polynomial element: exact, zero tail.
    pub fn polynomial(coeffs: Vec<S>) -> Self {
        TruncatedSeries {
            coeffs,
            tail: S::Real::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::polynomial(Vec::new())
    }

    /// Basis element at index `j` (the unit is `delta(0)`).
    pub fn delta(j: usize) -> Self {
        let mut coeffs = vec![S::zero(); j + 1];
        coeffs[j] = S::one();
        Self::polynomial(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn tail(&self) -> S::Real {
        self.tail.clone()
    }

    /// l1 norm of the stored coefficients.
    pub fn norm_lower(&self) -> S::Real {
        self.coeffs
            .iter()
            .fold(S::Real::zero(), |acc, c| acc + c.abs())
    }

    /// Certified upper bound on the l1 norm of the represented element.
    pub fn norm_upper(&self) -> S::Real {
        self.norm_lower() + self.tail.clone()
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        TruncatedSeries {
            coeffs,
            tail: self.tail.clone() + other.tail.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        TruncatedSeries {
            coeffs,
            tail: self.tail.clone() + other.tail.clone(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            tail: self.tail.clone() * c.abs(),
        }
    }

    /// Evaluates the stored polynomial part at `lambda` (Horner). The
    /// reported error bound is the tail: the unstored mass contributes at
    /// most `tail` since `|lambda| <= 1`.
    pub fn evaluate(&self, lambda: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda.clone() + c.clone();
        }
        acc
    }
}

/// Cauchy product with an explicit degree budget.
///
/// Coefficients are exact for degrees `<= budget`; the mass of exactly
/// computed product terms beyond the budget moves into the tail, together
/// with the three cross terms involving the operands' own tails.
pub fn convolve<S: Scalar>(
    a: &TruncatedSeries<S>,
    b: &TruncatedSeries<S>,
    budget: usize,
) -> TruncatedSeries<S> {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        let tail = a.norm_lower() * b.tail() + b.norm_lower() * a.tail() + a.tail() * b.tail();
        return TruncatedSeries {
            coeffs: Vec::new(),
            tail,
        };
    }
    let full_deg = a.degree() + b.degree();
    let mut prod = vec![S::zero(); full_deg + 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            prod[i + j] = prod[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    let keep = full_deg.min(budget);
    let overflow = prod[keep + 1..]
        .iter()
        .fold(S::Real::zero(), |acc, c| acc + c.abs());
    prod.truncate(keep + 1);
    let tail = overflow
        + a.norm_lower() * b.tail()
        + b.norm_lower() * a.tail()
        + a.tail() * b.tail();
    TruncatedSeries { coeffs: prod, tail }
}

/// A point of the closed unit disc, i.e. a character of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscPoint<S: Scalar> {
    lambda: S,
}

impl<S: Scalar> DiscPoint<S> {
    /// Accepts `|lambda|^2 <= 1` with a hair of slack so that floating
    /// `e^{i theta}` boundary points round-trip.
    pub fn new(lambda: S) -> Result<Self> {
        let m2 = lambda.abs_sq();
        if m2 > S::Real::from_f64(1.0 + 1e-12) {
            return Err(Error::PointNotInDisc {
                modulus_sq: m2.to_f64(),
            });
        }
        Ok(DiscPoint { lambda })
    }

    pub fn interior(lambda: S) -> Result<Self> {
        let p = Self::new(lambda)?;
        if !p.is_interior() {
            return Err(Error::PointNotInterior {
                modulus_sq: p.lambda.abs_sq().to_f64(),
            });
        }
        Ok(p)
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn is_interior(&self) -> bool {
        self.lambda.abs_sq() < S::Real::one()
    }

    /// Modulus of the point. Exact mode requires it to be rational.
    pub fn modulus(&self) -> S::Real {
        self.lambda.abs()
    }

    /// Powers `lambda^0 .. lambda^n`.
    pub fn powers(&self, n: usize) -> Vec<S> {
        let mut out = Vec::with_capacity(n + 1);
        let mut acc = S::one();
        for _ in 0..=n {
            out.push(acc.clone());
            acc = acc * self.lambda.clone();
        }
        out
    }
}

impl DiscPoint<Complex64> {
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }
}

/// Character evaluation with its certified error bound (the tail).
pub fn evaluate_char<S: Scalar>(a: &TruncatedSeries<S>, p: &DiscPoint<S>) -> (S, S::Real) {
    (a.evaluate(p.lambda()), a.tail())
}

/// Truncation of the Blaschke factor `(z - lambda)/(1 - conj(lambda) z)`.
///
/// Coefficients: `c_0 = -lambda`, `c_n = (1 - |lambda|^2) conj(lambda)^{n-1}`
/// for `1 <= n <= cutoff`; the omitted geometric tail has l1 mass exactly
/// `(1 + |lambda|) |lambda|^cutoff`, so `norm_upper` is exactly
/// `1 + 2 |lambda|`.
pub fn blaschke<S: Scalar>(p: &DiscPoint<S>, cutoff: usize) -> Result<TruncatedSeries<S>> {
    if !p.is_interior() {
        return Err(Error::PointNotInterior {
            modulus_sq: p.lambda().abs_sq().to_f64(),
        });
    }
    let lam = p.lambda().clone();
    let one_minus = S::Real::one() - lam.abs_sq();
    let conj = lam.conj();
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    coeffs.push(-lam.clone());
    let mut pow = S::one();
    for _ in 1..=cutoff {
        coeffs.push(pow.scale(&one_minus));
        pow = pow * conj.clone();
    }
    let modulus = p.modulus();
    let tail = (S::Real::one() + modulus.clone()) * modulus.pown(cutoff);
    Ok(TruncatedSeries { coeffs, tail })
}

/// Projection onto the maximal ideal: `f - f(lambda) delta_0`.
///
/// The stored part of the result evaluates to zero at `lambda` exactly; as a
/// representation of the projection of the true element, the certified tail
/// doubles (unstored mass of `f`, plus the evaluation error swept into the
/// `delta_0` coefficient).
pub fn maximal_ideal_project<S: Scalar>(
    f: &TruncatedSeries<S>,
    p: &DiscPoint<S>,
) -> TruncatedSeries<S> {
    let value = f.evaluate(p.lambda());
    let mut coeffs = f.coeffs.clone();
    if coeffs.is_empty() {
        coeffs.push(S::zero());
    }
    coeffs[0] = coeffs[0].clone() - value;
    TruncatedSeries {
        coeffs,
        tail: f.tail() + f.tail(),
    }
}

/// Division by the Blaschke factor on polynomial ideal elements.
///
/// Computes `g` with `b_lambda * g = f` by deflating the root at `lambda`
/// (synthetic division by `z - lambda`) and multiplying by
/// `1 - conj(lambda) z`. The result is again a polynomial with
/// `deg(g) <= deg(f)`; any division remainder equals `f(lambda)` and is
/// guarded by the membership gate.
pub fn blaschke_divide<S: Scalar>(
    f: &TruncatedSeries<S>,
    p: &DiscPoint<S>,
    tol: f64,
) -> Result<TruncatedSeries<S>> {
    if !p.is_interior() {
        return Err(Error::PointNotInterior {
            modulus_sq: p.lambda().abs_sq().to_f64(),
        });
    }
    if !f.is_polynomial() {
        return Err(Error::InvalidArgument(
            "blaschke_divide requires a polynomial input (zero tail)".into(),
        ));
    }
    let value = f.evaluate(p.lambda());
    let gate = S::Real::from_f64(tol) * (S::Real::one() + f.norm_lower());
    if value.abs_sq() > gate.clone() * gate.clone() {
        return Err(Error::NotInIdeal {
            deviation: value.abs_sq().to_f64().sqrt(),
            tolerance: (S::Real::from_f64(tol) * (S::Real::one() + f.norm_lower())).to_f64(),
        });
    }
    let d = f.coeffs.len();
    if d <= 1 {
        return Ok(TruncatedSeries::zero());
    }
    // Synthetic division: f(z) = (z - lambda) q(z) + f(lambda).
    let lam = p.lambda().clone();
    let mut q = vec![S::zero(); d - 1];
    let mut carry = f.coeffs[d - 1].clone();
    for k in (1..d).rev() {
        q[k - 1] = carry.clone();
        carry = f.coeffs[k - 1].clone() + lam.clone() * carry;
    }
    // g = (1 - conj(lambda) z) q.
    let conj = lam.conj();
    let mut g = vec![S::zero(); d];
    g[0] = q[0].clone();
    for k in 1..d - 1 {
        g[k] = q[k].clone() - conj.clone() * q[k - 1].clone();
    }
    g[d - 1] = -(conj * q[d - 2].clone());
    Ok(TruncatedSeries::polynomial(g))
}

/// Closed-form coefficients of `S_lambda p(delta_j)`, the Blaschke division
/// of `z^j - lambda^j`: `c_0 = lambda^{j-1}`,
/// `c_k = (1 - |lambda|^2) lambda^{j-1-k}` for `1 <= k <= j-1`,
/// `c_j = -conj(lambda)`. Zero for `j = 0`.
pub fn division_coeffs<S: Scalar>(p: &DiscPoint<S>, j: usize) -> Vec<S> {
    if j == 0 {
        return Vec::new();
    }
    let lam = p.lambda();
    let one_minus = S::Real::one() - lam.abs_sq();
    let pows = p.powers(j.saturating_sub(1));
    let mut out = Vec::with_capacity(j + 1);
    out.push(pows[j - 1].clone());
    for k in 1..j {
        out.push(pows[j - 1 - k].scale(&one_minus));
    }
    out.push(-lam.conj());
    out
}

/// l1 norm of `division_coeffs(p, j)`: exactly `1 + 2|lambda| - |lambda|^j`
/// for `j >= 1`, zero for `j = 0`.
pub fn division_norm<S: Scalar>(p: &DiscPoint<S>, j: usize) -> S::Real {
    if j == 0 {
        return S::Real::zero();
    }
    let m = p.modulus();
    S::Real::one() + m.clone() + m.clone() - m.pown(j)
}

/// Element of the projective tensor product, realized as l1 over the product
/// index grid `{0..rows-1} x {0..cols-1}` with a certified tail.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorSeries<S: Scalar> {
    rows: usize,
    cols: usize,
    values: Vec<S>,
    tail: S::Real,
}

impl<S: Scalar> TensorSeries<S> {
    pub fn outer(a: &[S], b: &[S], tail: S::Real) -> Self {
        let rows = a.len();
        let cols = b.len();
        let mut values = Vec::with_capacity(rows * cols);
        for x in a {
            for y in b {
                values.push(x.clone() * y.clone());
            }
        }
        TensorSeries {
            rows,
            cols,
            values,
            tail,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        if i < self.rows && j < self.cols {
            self.values[i * self.cols + j].clone()
        } else {
            S::zero()
        }
    }

    pub fn tail(&self) -> S::Real {
        self.tail.clone()
    }

    /// Projective tensor norm, which over l1 index sets is the plain l1 sum.
    pub fn norm_lower(&self) -> S::Real {
        self.values
            .iter()
            .fold(S::Real::zero(), |acc, v| acc + v.abs())
    }

    pub fn norm_upper(&self) -> S::Real {
        self.norm_lower() + self.tail.clone()
    }

    /// Multiplication map `pi`: sends `delta_i (x) delta_j` to `delta_{i+j}`.
    pub fn multiply_back(&self) -> TruncatedSeries<S> {
        if self.rows == 0 || self.cols == 0 {
            return TruncatedSeries::new(Vec::new(), self.tail.clone())
                .expect("tail already validated");
        }
        let mut coeffs = vec![S::zero(); self.rows + self.cols - 1];
        for i in 0..self.rows {
            for j in 0..self.cols {
                coeffs[i + j] = coeffs[i + j].clone() + self.values[i * self.cols + j].clone();
            }
        }
        TruncatedSeries {
            coeffs,
            tail: self.tail.clone(),
        }
    }
}

/// The splitting witness `sigma_lambda(f) = b_lambda (x) S_lambda(f)` for a
/// polynomial ideal element `f`, with the Blaschke factor truncated at
/// `cutoff`. Certified norm is at most `(1 + 2|lambda|)^2`; applying the
/// multiplication map recovers `f` within `tail(b) * ||S_lambda f||`.
pub fn sigma<S: Scalar>(
    f: &TruncatedSeries<S>,
    p: &DiscPoint<S>,
    cutoff: usize,
    tol: f64,
) -> Result<TensorSeries<S>> {
    let b = blaschke(p, cutoff)?;
    let g = blaschke_divide(f, p, tol)?;
    let tail = b.tail() * g.norm_lower();
    Ok(TensorSeries::outer(b.coeffs(), g.coeffs(), tail))
}

// --- JSON wire format (float instantiation) -------------------------------

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    coeffs: Vec<[f64; 2]>,
    tail: f64,
}

impl Serialize for TruncatedSeries<Complex64> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        SeriesDto {
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            tail: self.tail,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries<Complex64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = SeriesDto::deserialize(d)?;
        TruncatedSeries::new(
            dto.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
            dto.tail,
        )
        .map_err(serde::de::Error::custom)
    }
}
