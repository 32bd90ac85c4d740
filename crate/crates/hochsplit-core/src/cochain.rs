//! Hochschild cochains on the truncated algebra, in basis coordinates.
//!
//! An `n`-cochain with coefficients in the point module at `lambda` is
//! determined by its values on basis tuples; we store those values densely on
//! the window `{0..N}^n`. Because the domain is an l1 space whose unit ball
//! is the closed convex hull of unimodular multiples of basis vectors, the
//! exact multilinear norm restricted to the window is the max modulus of the
//! stored entries.

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};
use crate::series::{DiscPoint, TruncatedSeries};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<S: Scalar> {
    degree: usize,
    window: usize,
    point: DiscPoint<S>,
    values: Vec<S>,
}

fn dense_len(window: usize, degree: usize) -> usize {
    (window + 1).pow(degree as u32)
}

impl<S: Scalar> Cochain<S> {
    pub fn zeros(degree: usize, window: usize, point: DiscPoint<S>) -> Self {
        Cochain {
            degree,
            window,
            point,
            values: vec![S::zero(); dense_len(window, degree)],
        }
    }

    pub fn from_values(
        degree: usize,
        window: usize,
        point: DiscPoint<S>,
        values: Vec<S>,
    ) -> Result<Self> {
        if values.len() != dense_len(window, degree) {
            return Err(Error::InvalidArgument(format!(
                "expected {} values for degree {degree}, window {window}; got {}",
                dense_len(window, degree),
                values.len()
            )));
        }
        Ok(Cochain {
            degree,
            window,
            point,
            values,
        })
    }

    pub fn from_fn(
        degree: usize,
        window: usize,
        point: DiscPoint<S>,
        mut f: impl FnMut(&[usize]) -> S,
    ) -> Self {
        let len = dense_len(window, degree);
        let mut values = Vec::with_capacity(len);
        let mut tuple = vec![0usize; degree];
        for i in 0..len {
            decode_tuple(i, window + 1, &mut tuple);
            values.push(f(&tuple));
        }
        Cochain {
            degree,
            window,
            point,
            values,
        }
    }

    /// Deterministic cochain with entries drawn uniformly from the lattice
    /// points of the complex disc of the given radius.
    pub fn random(
        degree: usize,
        window: usize,
        point: DiscPoint<S>,
        seed: u64,
        scale: f64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = dense_len(window, degree);
        let values = (0..len).map(|_| sample_disc::<S>(&mut rng, scale)).collect();
        Cochain {
            degree,
            window,
            point,
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn point(&self) -> &DiscPoint<S> {
        &self.point
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    fn index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.degree);
        let base = self.window + 1;
        let mut idx = 0usize;
        for &t in tuple {
            debug_assert!(t <= self.window);
            idx = idx * base + t;
        }
        idx
    }

    pub fn get(&self, tuple: &[usize]) -> S {
        self.values[self.index(tuple)].clone()
    }

    pub fn set(&mut self, tuple: &[usize], value: S) {
        let i = self.index(tuple);
        self.values[i] = value;
    }

    /// Exact sup norm over the window (= the multilinear operator norm of
    /// the stored cochain).
    pub fn norm(&self) -> S::Real {
        let mut best: Option<&S> = None;
        let mut best_sq = S::Real::zero();
        for v in &self.values {
            let sq = v.abs_sq();
            if best.is_none() || sq > best_sq {
                best_sq = sq;
                best = Some(v);
            }
        }
        match best {
            None => S::Real::zero(),
            Some(v) => v.abs(),
        }
    }

    /// Largest squared modulus of an entry; exact in exact mode even for
    /// entries with irrational modulus.
    pub fn sup_abs_sq(&self) -> S::Real {
        self.values
            .iter()
            .map(|v| v.abs_sq())
            .fold(S::Real::zero(), |a, b| a.max_with(b))
    }

    /// Restriction to a smaller window.
    pub fn restrict(&self, window: usize) -> Result<Self> {
        if window > self.window {
            return Err(Error::WindowTooSmall {
                window: self.window,
                needed: window,
                context: "restrict",
            });
        }
        let mut tuple = vec![0usize; self.degree];
        let len = dense_len(window, self.degree);
        let mut values = Vec::with_capacity(len);
        for i in 0..len {
            decode_tuple(i, window + 1, &mut tuple);
            values.push(self.get(&tuple));
        }
        Ok(Cochain {
            degree: self.degree,
            window,
            point: self.point.clone(),
            values,
        })
    }

    /// Entrywise difference; shapes must agree.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.window != other.window {
            return Err(Error::InvalidArgument(format!(
                "cochain shapes disagree: ({}, {}) vs ({}, {})",
                self.degree, self.window, other.degree, other.window
            )));
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Cochain {
            degree: self.degree,
            window: self.window,
            point: self.point.clone(),
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let neg = Cochain {
            degree: other.degree,
            window: other.window,
            point: other.point.clone(),
            values: other.values.iter().map(|v| -v.clone()).collect(),
        };
        self.sub(&neg)
    }

    /// Hochschild coboundary in coordinates.
    ///
    /// The output window shrinks to `floor(N/2)` so that every interior
    /// product index `j_{i-1} + j_i` stays inside the input window: every
    /// computed entry is exact, nothing is zero-padded.
    pub fn coboundary(&self) -> Result<Cochain<S>> {
        if self.window < 2 {
            return Err(Error::WindowTooSmall {
                window: self.window,
                needed: 2,
                context: "coboundary",
            });
        }
        let n = self.degree;
        let out_window = self.window / 2;
        let pows = self.point.powers(out_window);
        let mut out = Cochain::zeros(n + 1, out_window, self.point.clone());
        let len = out.values.len();
        let mut tuple = vec![0usize; n + 1];
        let mut inner = vec![0usize; n.max(1)];
        for i in 0..len {
            decode_tuple(i, out_window + 1, &mut tuple);
            // Left module action: lambda^{j_0} T(j_1 .. j_n).
            inner[..n].copy_from_slice(&tuple[1..]);
            let mut val = pows[tuple[0]].clone() * self.get(&inner[..n]);
            // Interior merges with alternating signs.
            for slot in 1..=n {
                for (i, dst) in inner[..n].iter_mut().enumerate() {
                    *dst = if i < slot - 1 {
                        tuple[i]
                    } else if i == slot - 1 {
                        tuple[slot - 1] + tuple[slot]
                    } else {
                        tuple[i + 1]
                    };
                }
                let term = self.get(&inner[..n]);
                val = if slot % 2 == 1 {
                    val - term
                } else {
                    val + term
                };
            }
            // Right module action: (-1)^{n+1} lambda^{j_n} T(j_0 .. j_{n-1}).
            inner[..n].copy_from_slice(&tuple[..n]);
            let term = pows[tuple[n]].clone() * self.get(&inner[..n]);
            val = if (n + 1) % 2 == 1 { val - term } else { val + term };
            out.values[i] = val;
        }
        Ok(out)
    }

    /// Pairs the cochain with algebra elements, with a certified error bound
    /// from the arguments' tails.
    pub fn apply_multilinear(
        &self,
        args: &[&TruncatedSeries<S>],
    ) -> Result<(S, S::Real)> {
        if args.len() != self.degree {
            return Err(Error::InvalidArgument(format!(
                "cochain of degree {} applied to {} arguments",
                self.degree,
                args.len()
            )));
        }
        for f in args {
            if f.degree() > self.window && !f.coeffs().is_empty() {
                if f.coeffs().iter().skip(self.window + 1).any(|c| !c.is_zero()) {
                    return Err(Error::WindowTooSmall {
                        window: self.window,
                        needed: f.degree(),
                        context: "apply_multilinear",
                    });
                }
            }
        }
        let n = self.degree;
        let mut value = S::zero();
        if n == 0 {
            value = self.values[0].clone();
        } else {
            let lens: Vec<usize> = args
                .iter()
                .map(|f| f.coeffs().len().min(self.window + 1))
                .collect();
            if lens.iter().all(|&l| l > 0) {
                let mut tuple = vec![0usize; n];
                'outer: loop {
                    let mut prod = self.get(&tuple);
                    for (slot, f) in args.iter().enumerate() {
                        prod = prod * f.coeff(tuple[slot]);
                    }
                    value = value + prod;
                    // Odometer increment.
                    let mut slot = n;
                    loop {
                        if slot == 0 {
                            break 'outer;
                        }
                        slot -= 1;
                        tuple[slot] += 1;
                        if tuple[slot] < lens[slot] {
                            break;
                        }
                        tuple[slot] = 0;
                    }
                }
            }
        }
        let norm = self.norm();
        let uppers: Vec<S::Real> = args.iter().map(|f| f.norm_upper()).collect();
        let mut err = S::Real::zero();
        for (i, f) in args.iter().enumerate() {
            let mut others = S::Real::one();
            for (k, u) in uppers.iter().enumerate() {
                if k != i {
                    others = others * u.clone();
                }
            }
            err = err + others * f.tail();
        }
        Ok((value, norm * err))
    }
}

pub(crate) fn decode_tuple(mut index: usize, base: usize, tuple: &mut [usize]) {
    for slot in (0..tuple.len()).rev() {
        tuple[slot] = index % base;
        index /= base;
    }
}

const LATTICE: i64 = 1 << 20;

pub(crate) fn sample_disc<S: Scalar>(rng: &mut ChaCha8Rng, scale: f64) -> S {
    loop {
        let a: i64 = rng.random_range(-LATTICE..=LATTICE);
        let b: i64 = rng.random_range(-LATTICE..=LATTICE);
        if a * a + b * b <= LATTICE * LATTICE {
            let re = scale * (a as f64) / (LATTICE as f64);
            let im = scale * (b as f64) / (LATTICE as f64);
            return S::from_f64_parts(re, im);
        }
    }
}

// --- JSON wire format (float instantiation) -------------------------------

#[derive(Serialize, Deserialize)]
struct CochainDto {
    degree: usize,
    window: usize,
    lambda: [f64; 2],
    values: Vec<[f64; 2]>,
}

impl Serialize for Cochain<Complex64> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        CochainDto {
            degree: self.degree,
            window: self.window,
            lambda: [self.point.lambda().re, self.point.lambda().im],
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cochain<Complex64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = CochainDto::deserialize(d)?;
        let point = DiscPoint::new(Complex64::new(dto.lambda[0], dto.lambda[1]))
            .map_err(serde::de::Error::custom)?;
        Cochain::from_values(
            dto.degree,
            dto.window,
            point,
            dto.values
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
