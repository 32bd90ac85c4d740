//! The convolution algebra on the nonnegative part of a dense subgroup of
//! the rationals, with exact rational support points.
//!
//! Key arithmetic (joins, bucketing) is exact rational arithmetic: the
//! directed-set structure of step sizes under "divides after scaling" breaks
//! under floating point keys. Values are complex doubles.
//!
//! The flatness witness factors through the isometric identification of
//! `l1(alpha Z+)` with the integer-grid algebra, where the Blaschke
//! machinery applies at the point `lambda = e^{-t alpha} chi(alpha)`.

use crate::cochain::sample_disc;
use crate::discsplit::{self, RectCochain};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{blaschke, blaschke_divide, DiscPoint, TruncatedSeries};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type Rat = BigRational;

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let parse_int = |s: &str| -> Result<BigInt> {
        s.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::InvalidArgument(format!("bad rational '{text}': {e}")))
    };
    match text.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(text)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "bad rational '{text}': zero denominator"
                )));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Finitely supported complex function on exact nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RationalSeries {
    support: BTreeMap<Rat, Complex64>,
}

impl RationalSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rat, Complex64)>) -> Result<Self> {
        let mut out = Self::new();
        for (x, v) in pairs {
            if x.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "support point {x} is negative"
                )));
            }
            out.insert_add(x, v);
        }
        Ok(out)
    }

    pub fn delta(x: Rat) -> Self {
        Self::from_pairs([(x, Complex64::ONE)]).expect("nonnegative support point")
    }

    fn insert_add(&mut self, x: Rat, v: Complex64) {
        let entry = self.support.entry(x).or_insert(Complex64::ZERO);
        *entry += v;
        if entry.is_zero() {
            // keep exact zeros out of the support
            let key = self
                .support
                .iter()
                .find(|(_, val)| val.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.support.remove(&k);
            }
        }
    }

    pub fn value_at(&self, x: &Rat) -> Complex64 {
        self.support.get(x).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Rat, &Complex64)> {
        self.support.iter()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn norm(&self) -> f64 {
        self.support.values().map(|v| v.norm()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.support {
            out.insert_add(x.clone(), *v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.support {
            out.insert_add(x.clone(), -*v);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        RationalSeries {
            support: self
                .support
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(x, v)| (x.clone(), *v * c))
                .collect(),
        }
    }

    /// Convolution: exact on finite supports, no truncation.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = RationalSeries::new();
        for (x, v) in &self.support {
            for (y, w) in &other.support {
                out.insert_add(x.clone() + y.clone(), *v * *w);
            }
        }
        out
    }
}

/// A character of the algebra: either
/// `b -> sum b(x) e^{-t x} e^{i s x}` with finite decay `t >= 0`, or the
/// evaluation `b -> b(0)` (infinite decay).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatChar {
    pub decay: Decay,
    /// Frequency `s` of the oscillating part `chi(x) = e^{i s x}`.
    pub frequency: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    Finite(f64),
    Infinite,
}

impl RatChar {
    pub fn finite(t: f64, s: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "decay parameter must be finite and nonnegative, got {t}"
            )));
        }
        Ok(RatChar {
            decay: Decay::Finite(t),
            frequency: s,
        })
    }

    pub fn infinite() -> Self {
        RatChar {
            decay: Decay::Infinite,
            frequency: 0.0,
        }
    }

    /// Weight `e^{-t x} e^{i s x}` of a single support point (finite decay).
    pub fn weight(&self, x: &Rat) -> Complex64 {
        match self.decay {
            Decay::Finite(t) => {
                let xf = x.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar((-t * xf).exp(), self.frequency * xf)
            }
            Decay::Infinite => {
                if x.is_zero() {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            }
        }
    }

    pub fn eval(&self, b: &RationalSeries) -> Complex64 {
        match self.decay {
            Decay::Finite(_) => b.support().map(|(x, v)| v * self.weight(x)).sum(),
            Decay::Infinite => b.value_at(&Rat::zero()),
        }
    }

    /// The disc point seen by the integer-grid algebra at step `alpha`.
    pub fn lambda_at(&self, alpha: &Rat) -> Complex64 {
        self.weight(alpha)
    }
}

/// Least upper bound in the divisibility order: `gamma` with
/// `a1 = n1 gamma`, `a2 = n2 gamma` for positive integers `n_i`, namely
/// `gcd(p1 q2, p2 q1) / (q1 q2)`. Always an integer combination of the
/// inputs, hence in the same subgroup.
pub fn join(a1: &Rat, a2: &Rat) -> Result<Rat> {
    if !a1.is_positive() || !a2.is_positive() {
        return Err(Error::InvalidArgument(
            "join requires strictly positive step sizes".into(),
        ));
    }
    let g = (a1.numer() * a2.denom()).gcd(&(a2.numer() * a1.denom()));
    Ok(Rat::new(g, a1.denom() * a2.denom()))
}

/// Contractive projection onto `l1(alpha Z+)` preserving the character:
/// the coefficient at `n alpha` collects `b(x) e^{-t(x - n alpha)}
/// chi(x - n alpha)` over the bucket `n alpha <= x < (n+1) alpha`.
pub fn theta(b: &RationalSeries, alpha: &Rat, chr: &RatChar) -> Result<RationalSeries> {
    let Decay::Finite(_) = chr.decay else {
        return Err(Error::InvalidArgument(
            "theta requires a finite-decay character; use theta_inf".into(),
        ));
    };
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let mut out = RationalSeries::new();
    for (x, v) in &b.support {
        let n = (x / alpha).floor();
        let base = alpha.clone() * n;
        let dx = x.clone() - base.clone();
        out.insert_add(base, v * chr.weight(&dx));
    }
    Ok(out)
}

/// The infinite-decay variant: plain restriction to the grid
/// `alpha Z+`.
pub fn theta_inf(b: &RationalSeries, alpha: &Rat) -> Result<RationalSeries> {
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    Ok(RationalSeries {
        support: b
            .support
            .iter()
            .filter(|(x, _)| (*x / alpha).is_integer())
            .map(|(x, v)| (x.clone(), *v))
            .collect(),
    })
}

fn theta_for(b: &RationalSeries, alpha: &Rat, chr: &RatChar) -> Result<RationalSeries> {
    match chr.decay {
        Decay::Finite(_) => theta(b, alpha, chr),
        Decay::Infinite => theta_inf(b, alpha),
    }
}

/// `||theta_alpha(b) - b||` along a refining chain of step sizes; each chain
/// element must be an integer multiple of the next.
pub fn theta_converges(
    b: &RationalSeries,
    chain: &[Rat],
    chr: &RatChar,
) -> Result<Vec<f64>> {
    for pair in chain.windows(2) {
        let ratio = &pair[0] / &pair[1];
        if !ratio.is_integer() || !ratio.is_positive() {
            return Err(Error::ChainNotRefining {
                coarse: pair[0].to_string(),
                fine: pair[1].to_string(),
            });
        }
    }
    chain
        .iter()
        .map(|alpha| Ok(theta_for(b, alpha, chr)?.sub(b).norm()))
        .collect()
}

/// Element of the projective tensor product over rational index pairs;
/// the norm is the plain l1 sum under the identification of the projective
/// tensor product of l1 spaces with l1 over the product index set.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RationalTensor {
    support: BTreeMap<(Rat, Rat), Complex64>,
}

impl RationalTensor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn elementary(a: &RationalSeries, b: &RationalSeries) -> Self {
        let mut out = Self::new();
        for (x, v) in &a.support {
            for (y, w) in &b.support {
                out.insert_add((x.clone(), y.clone()), *v * *w);
            }
        }
        out
    }

    fn insert_add(&mut self, key: (Rat, Rat), v: Complex64) {
        let entry = self.support.entry(key.clone()).or_insert(Complex64::ZERO);
        *entry += v;
        if entry.is_zero() {
            self.support.remove(&key);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (&(Rat, Rat), &Complex64)> {
        self.support.iter()
    }

    pub fn norm(&self) -> f64 {
        self.support.values().map(|v| v.norm()).sum()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.support {
            out.insert_add(k.clone(), -*v);
        }
        out
    }

    /// Multiplication map: sends `delta_x (x) delta_y` to `delta_{x+y}`.
    pub fn multiply_back(&self) -> RationalSeries {
        let mut out = RationalSeries::new();
        for ((x, y), v) in &self.support {
            out.insert_add(x.clone() + y.clone(), *v);
        }
        out
    }

    /// Right module action on the second leg.
    pub fn act_right(&self, b: &RationalSeries) -> Self {
        let mut out = Self::new();
        for ((x, y), v) in &self.support {
            for (z, w) in &b.support {
                out.insert_add((x.clone(), y.clone() + z.clone()), *v * *w);
            }
        }
        out
    }
}

/// Transport of a grid-supported series onto the integer-grid algebra.
fn to_grid_series(b: &RationalSeries, alpha: &Rat) -> Result<TruncatedSeries<Complex64>> {
    let mut coeffs: Vec<Complex64> = Vec::new();
    for (x, v) in &b.support {
        let q = x / alpha;
        if !q.is_integer() {
            return Err(Error::GridMismatch(format!(
                "support point {x} is not a multiple of {alpha}"
            )));
        }
        let n = q.to_integer().to_usize().ok_or_else(|| {
            Error::InvalidArgument(format!("grid index {q} too large"))
        })?;
        if coeffs.len() <= n {
            coeffs.resize(n + 1, Complex64::ZERO);
        }
        coeffs[n] = *v;
    }
    Ok(TruncatedSeries::polynomial(coeffs))
}

/// The composite witness `rho_alpha = sigma_alpha . theta_alpha` as a
/// rational tensor, with the Blaschke factor truncated at `cutoff`.
fn rho(
    c: &RationalSeries,
    alpha: &Rat,
    chr: &RatChar,
    cutoff: usize,
    gate_abs: f64,
) -> Result<RationalTensor> {
    let lambda = chr.lambda_at(alpha);
    let p = DiscPoint::interior(lambda)?;
    let tc = theta(c, alpha, chr)?;
    let grid = to_grid_series(&tc, alpha)?;
    let tol = gate_abs / (1.0 + grid.norm_lower());
    let g = blaschke_divide(&grid, &p, tol)?;
    let b = blaschke(&p, cutoff)?;
    let mut out = RationalTensor::new();
    for (k, bk) in b.coeffs().iter().enumerate() {
        if bk.is_zero() {
            continue;
        }
        for (l, gl) in g.coeffs().iter().enumerate() {
            if gl.is_zero() {
                continue;
            }
            out.insert_add(
                (alpha.clone() * Rat::from_integer(k.into()),
                 alpha.clone() * Rat::from_integer(l.into())),
                bk * gl,
            );
        }
    }
    Ok(out)
}

/// Flatness witness data at one chain step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatWitness {
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// `|| pi rho(c) - c ||`.
    pub r1: f64,
    /// `|| rho(c) . b - rho(c b) ||`, the right-module defect.
    pub r2: f64,
    /// Certified bound `(1 + 2 |lambda|)^2 <= 9`.
    pub norm_bound: f64,
    /// Measured `|| rho(c) ||`.
    pub witness_norm: f64,
    pub input_norm: f64,
}

/// Builds `rho_alpha(c)` for an ideal element `c`, measures how far it is
/// from splitting the multiplication (`r1`) and from being a right module
/// map against `b` (`r2`), and reports the certified norm bound.
pub fn flat_witness_residuals(
    c: &RationalSeries,
    b: &RationalSeries,
    alpha: &Rat,
    chr: &RatChar,
    cutoff: usize,
    tol: f64,
) -> Result<FlatWitness> {
    let Decay::Finite(t) = chr.decay else {
        return Err(Error::InvalidArgument(
            "flat witness requires a finite-decay character".into(),
        ));
    };
    if t <= 0.0 {
        return Err(Error::InvalidArgument(
            "flat witness requires strictly positive decay (t = 0 is the peak-point case)".into(),
        ));
    }
    let phi_c = chr.eval(c);
    let gate = tol * (1.0 + c.norm());
    if phi_c.norm() > gate {
        return Err(Error::NotInIdeal {
            deviation: phi_c.norm(),
            tolerance: gate,
        });
    }
    let lambda = chr.lambda_at(alpha);
    // Numerical slack: the grid transport reproduces phi only to rounding.
    let gate_abs = 10.0 * gate + 1e-12 * (1.0 + c.norm());
    let w_c = rho(c, alpha, chr, cutoff, gate_abs)?;
    let r1 = w_c.multiply_back().sub(c).norm();
    let cb = c.convolve(b);
    let gate_cb = gate * b.norm().max(1.0) * 10.0 + 1e-12 * (1.0 + cb.norm());
    let w_cb = rho(&cb, alpha, chr, cutoff, gate_cb)?;
    let r2 = w_c.act_right(b).sub(&w_cb).norm();
    let modulus = lambda.norm();
    Ok(FlatWitness {
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        r1,
        r2,
        norm_bound: (1.0 + 2.0 * modulus).powi(2),
        witness_norm: w_c.norm(),
        input_norm: c.norm(),
    })
}

/// The explicit witness for the `t = infinity` maximal ideal
/// `{f : f(0) = 0}`: the elementary tensor
/// `delta_alpha (x) (delta_{-alpha} * theta_alpha(f))`, flat with
/// constant 1. Returns the tensor and `|| pi rho(f) - f || =
/// || theta_alpha(f) - f ||`.
pub fn infinity_witness(
    f: &RationalSeries,
    alpha: &Rat,
) -> Result<(RationalTensor, f64)> {
    if !f.value_at(&Rat::zero()).is_zero() {
        return Err(Error::InvalidArgument(
            "infinity witness requires f(0) = 0 exactly".into(),
        ));
    }
    let tf = theta_inf(f, alpha)?;
    let mut shifted = RationalSeries::new();
    for (x, v) in &tf.support {
        if x.is_zero() {
            continue; // f(0) = 0, nothing to shift below zero
        }
        shifted.insert_add(x.clone() - alpha.clone(), *v);
    }
    let tensor = RationalTensor::elementary(&RationalSeries::delta(alpha.clone()), &shifted);
    let r = tf.sub(f).norm();
    Ok((tensor, r))
}

// --- Pre-limit flat splitting maps (appendix construction) -----------------

/// A bounded 2-cochain on the rational semigroup algebra, evaluated on basis
/// pairs. Implementations must be total: at finite truncation the adjoint of
/// the witness is finite rank, so the splitting maps only ever read finitely
/// many values.
pub trait BiCochain {
    fn eval(&self, x: &Rat, y: &Rat) -> Complex64;

    /// Upper bound on the modulus of values, for certified bounds.
    fn norm_bound(&self) -> f64;
}

/// Deterministic pseudo-random bicochain keyed by exact rational pairs.
#[derive(Clone, Debug)]
pub struct SeededBiCochain {
    seed: u64,
    scale: f64,
}

impl SeededBiCochain {
    pub fn new(seed: u64, scale: f64) -> Self {
        SeededBiCochain { seed, scale }
    }
}

fn mix_rat(h: u64, x: &Rat) -> u64 {
    let mut h = h;
    for b in x
        .numer()
        .to_signed_bytes_le()
        .iter()
        .chain(x.denom().to_signed_bytes_le().iter())
    {
        h = (h ^ u64::from(*b)).wrapping_mul(0x100000001b3);
    }
    h
}

impl BiCochain for SeededBiCochain {
    fn eval(&self, x: &Rat, y: &Rat) -> Complex64 {
        let mut h = 0xcbf29ce484222325u64 ^ self.seed;
        h = mix_rat(h, x);
        h = h.wrapping_mul(0x9e3779b97f4a7c15);
        h = mix_rat(h, y);
        let mut rng = ChaCha8Rng::seed_from_u64(h);
        sample_disc::<Complex64>(&mut rng, self.scale)
    }

    fn norm_bound(&self) -> f64 {
        self.scale
    }
}

/// Report for one pre-limit splitting evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrelimitReport {
    pub alpha: String,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub cutoff: usize,
    pub residual_sup: f64,
    pub norm_bound: f64,
}

/// Pre-limit form of the flat splitting maps: with the unit `delta_0` as
/// approximate identity and the finite-rank witness `rho_alpha` in place of
/// the weak-star limit,
///
/// ```text
/// s1 F(f)    = -F~(rho_alpha(p f)) + phi(f) F(delta_0, delta_0)
/// s2 G(f, g) = -G~(rho_alpha(p f) (x) g) + phi(f) G(delta_0, delta_0, g)
/// ```
///
/// Returns the sup over basis pairs from `points` of
/// `|(delta s1 + s2 delta) F (x, y) - F(x, y)|`; the residual is driven by
/// the discretization defects `theta_alpha(p f) - p f` and the Blaschke
/// truncation.
pub fn prelimit_flat_split(
    f: &dyn BiCochain,
    chr: &RatChar,
    alpha: &Rat,
    points: &[Rat],
    cutoff: usize,
) -> Result<PrelimitReport> {
    let Decay::Finite(t) = chr.decay else {
        return Err(Error::InvalidArgument(
            "pre-limit splitting requires a finite-decay character".into(),
        ));
    };
    if t <= 0.0 {
        return Err(Error::InvalidArgument(
            "pre-limit splitting requires strictly positive decay".into(),
        ));
    }
    for x in points {
        if x.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "window point {x} is negative"
            )));
        }
    }
    let lambda = chr.lambda_at(alpha);
    let zero = Rat::zero();
    let f00 = f.eval(&zero, &zero);

    // delta F on basis triples, evaluated lazily.
    let df = |a: &Rat, b: &Rat, c: &Rat| -> Complex64 {
        let mut val = chr.weight(a) * f.eval(b, c);
        val -= f.eval(&(a.clone() + b.clone()), c);
        val += f.eval(a, &(b.clone() + c.clone()));
        val -= f.eval(a, b) * chr.weight(c);
        val
    };

    // The witness tensor of p(delta_z) and the first splitting map at z.
    let witness = |z: &Rat| -> Result<RationalTensor> {
        let pz = RationalSeries::delta(z.clone())
            .sub(&RationalSeries::delta(zero.clone()).scale(chr.weight(z)));
        rho(&pz, alpha, chr, cutoff, 1e-9)
    };
    let s1 = |z: &Rat| -> Result<Complex64> {
        let w = witness(z)?;
        let mut acc = Complex64::ZERO;
        for ((u, v), coeff) in w.support() {
            acc += coeff * f.eval(u, v);
        }
        Ok(-acc + chr.weight(z) * f00)
    };

    let mut sup = 0.0f64;
    for x in points {
        let w_x = witness(x)?;
        let s1_x = s1(x)?;
        for y in points {
            let s1_y = s1(y)?;
            let s1_xy = s1(&(x.clone() + y.clone()))?;
            let a_term = chr.weight(x) * s1_y - s1_xy + s1_x * chr.weight(y);
            let mut acc = Complex64::ZERO;
            for ((u, v), coeff) in w_x.support() {
                acc += coeff * df(u, v, y);
            }
            let b_term = -acc + chr.weight(x) * df(&zero, &zero, y);
            let r = ((a_term - f.eval(x, y)) + b_term).norm();
            sup = sup.max(r);
        }
    }
    let modulus = lambda.norm();
    Ok(PrelimitReport {
        alpha: alpha.to_string(),
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        cutoff,
        residual_sup: sup,
        norm_bound: (1.0 + 2.0 * modulus).powi(2),
    })
}

/// Bicochain view of a rectangular integer-grid cochain: integer pairs in
/// range read the stored value, everything else reads zero.
struct RectBiCochain<'a> {
    rect: &'a RectCochain<Complex64>,
}

impl BiCochain for RectBiCochain<'_> {
    fn eval(&self, x: &Rat, y: &Rat) -> Complex64 {
        let to_idx = |r: &Rat, dim: usize| -> Option<usize> {
            if !r.is_integer() {
                return None;
            }
            let n = r.to_integer().to_usize()?;
            (n < dim).then_some(n)
        };
        match (
            to_idx(x, self.rect.dims[0]),
            to_idx(y, self.rect.dims[1]),
        ) {
            (Some(i), Some(j)) => self.rect.get(&[i, j]),
            _ => Complex64::ZERO,
        }
    }

    fn norm_bound(&self) -> f64 {
        1.0
    }
}

/// Cross-module oracle: at the integer grid (`alpha = 1`) the pre-limit
/// splitting specializes to the disc splitting maps at
/// `lambda = e^{-t} e^{i s}`. Runs both on the same deterministic cochain
/// and returns `(prelimit residual, disc residual)`.
pub fn prelimit_integer_grid_residuals(
    t: f64,
    s: f64,
    window: usize,
    cutoff: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let chr = RatChar::finite(t, s)?;
    let lambda = chr.lambda_at(&Rat::one());
    let p = DiscPoint::interior(lambda)?;
    let disc = discsplit::splitting_identity_check::<Complex64>(1, &p, window, cutoff, seed)?;
    let rect = RectCochain::<Complex64>::random(
        discsplit::rect_dims(1, window, cutoff),
        seed,
        1.0,
    );
    let f = RectBiCochain { rect: &rect };
    let points: Vec<Rat> = (0..=window).map(|n| Rat::from_integer(n.into())).collect();
    let report = prelimit_flat_split(&f, &chr, &Rat::one(), &points, cutoff)?;
    Ok((report.residual_sup, disc.residual_sup()))
}

// --- JSON wire format -------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RationalEntryDto {
    num: i64,
    den: i64,
    re: f64,
    im: f64,
}

impl Serialize for RationalSeries {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let entries: std::result::Result<Vec<RationalEntryDto>, _> = self
            .support
            .iter()
            .map(|(x, v)| {
                let num = x.numer().to_i64().ok_or_else(|| {
                    serde::ser::Error::custom(format!("numerator {} exceeds i64", x.numer()))
                })?;
                let den = x.denom().to_i64().ok_or_else(|| {
                    serde::ser::Error::custom(format!("denominator {} exceeds i64", x.denom()))
                })?;
                Ok(RationalEntryDto {
                    num,
                    den,
                    re: v.re,
                    im: v.im,
                })
            })
            .collect();
        entries?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<RationalEntryDto>::deserialize(d)?;
        RationalSeries::from_pairs(entries.into_iter().map(|e| {
            (
                Rat::new(BigInt::from(e.num), BigInt::from(e.den)),
                Complex64::new(e.re, e.im),
            )
        }))
        .map_err(serde::de::Error::custom)
    }
}
