use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A canonical coordinate of `ℝ^{2n}`: position `q_j` or momentum `p_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Q(usize),
    P(usize),
}

/// Complex-coefficient polynomial in the canonical coordinates
/// `(q_1..q_n, p_1..p_n)`.
///
/// Terms are keyed by exponent vectors of length `2n` (positions first);
/// zero coefficients are never stored, so two equal polynomials compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl Observable {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: impl Into<Complex64>) -> Self {
        Self::monomial(dim, vec![0; 2 * dim], c.into())
    }

    /// `c · Π q^a p^b` with exponents `[a_1..a_n, b_1..b_n]`.
    pub fn monomial(dim: usize, exponents: Vec<u32>, c: Complex64) -> Self {
        assert_eq!(
            exponents.len(),
            2 * dim,
            "exponent vector must have length 2n"
        );
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(exponents, c);
        }
        Self { dim, terms }
    }

    pub fn var(dim: usize, v: Var) -> Self {
        let mut e = vec![0; 2 * dim];
        e[Self::slot(dim, v)] = 1;
        Self::monomial(dim, e, Complex64::new(1.0, 0.0))
    }

    pub fn q(dim: usize, j: usize) -> Self {
        Self::var(dim, Var::Q(j))
    }

    pub fn p(dim: usize, j: usize) -> Self {
        Self::var(dim, Var::P(j))
    }

    /// `z_j = p_j + i q_j`.
    pub fn z(dim: usize, j: usize) -> Self {
        Self::p(dim, j) + Self::q(dim, j) * Complex64::i()
    }

    /// `z̄_j = p_j − i q_j`.
    pub fn zbar(dim: usize, j: usize) -> Self {
        Self::p(dim, j) - Self::q(dim, j) * Complex64::i()
    }

    /// Harmonic oscillator `½ Σ (p_j² + q_j²) = ½ Σ z_j z̄_j`.
    pub fn oscillator(dim: usize) -> Self {
        let mut h = Self::zero(dim);
        for j in 0..dim {
            h = h + (Self::p(dim, j) * Self::p(dim, j) + Self::q(dim, j) * Self::q(dim, j)) * 0.5;
        }
        h
    }

    fn slot(dim: usize, v: Var) -> usize {
        match v {
            Var::Q(j) => {
                assert!(j < dim, "q index out of range");
                j
            }
            Var::P(j) => {
                assert!(j < dim, "p index out of range");
                dim + j
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Degree in the momentum variables only.
    pub fn momentum_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e[self.dim..].iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the given exponent vector.
    pub fn coefficient(&self, exponents: &[u32]) -> Complex64 {
        self.terms.get(exponents).copied().unwrap_or_default()
    }

    /// True when every coefficient is real (so the function is real on `ℝ^{2n}`).
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    fn insert_add(&mut self, e: Vec<u32>, c: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                if c != zero {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == zero {
                    slot.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            out.insert_add(e.clone(), v * c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let s = Self::slot(self.dim, v);
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[s] > 0 {
                let mut e2 = e.clone();
                let k = e2[s];
                e2[s] -= 1;
                out.insert_add(e2, c * k as f64);
            }
        }
        out
    }

    /// Evaluates at `(q_1..q_n, p_1..p_n)`.
    pub fn eval(&self, coords: &[f64]) -> Complex64 {
        assert_eq!(coords.len(), 2 * self.dim, "point dimension must be 2n");
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e
                    .iter()
                    .zip(coords)
                    .map(|(&k, &x)| x.powi(k as i32))
                    .product();
                c * m
            })
            .sum()
    }

    /// Real part of [`Observable::eval`], for real observables.
    pub fn eval_real(&self, coords: &[f64]) -> f64 {
        self.eval(coords).re
    }

    /// 1-D re-expression in `z = p + iq`, `z̄ = p − iq`: map `(a, b) ↦ coefficient of z^a z̄^b`.
    pub fn to_complex_monomials(&self) -> Result<BTreeMap<(u32, u32), Complex64>> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dim,
            });
        }
        type ZPoly = BTreeMap<(u32, u32), Complex64>;
        fn mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
            let mut out = ZPoly::new();
            for (&(a1, b1), ca) in a {
                for (&(a2, b2), cb) in b {
                    *out.entry((a1 + a2, b1 + b2)).or_default() += ca * cb;
                }
            }
            out
        }
        let half = Complex64::new(0.5, 0.0);
        // q = (z − z̄)/(2i), p = (z + z̄)/2
        let q: ZPoly = [
            ((1, 0), -Complex64::i() * half),
            ((0, 1), Complex64::i() * half),
        ]
        .into();
        let p: ZPoly = [((1, 0), half), ((0, 1), half)].into();
        let mut out = ZPoly::new();
        for (e, c) in &self.terms {
            let mut term: ZPoly = [((0, 0), *c)].into();
            for _ in 0..e[0] {
                term = mul(&term, &q);
            }
            for _ in 0..e[1] {
                term = mul(&term, &p);
            }
            for (k, v) in term {
                *out.entry(k).or_default() += v;
            }
        }
        out.retain(|_, v| v.norm() > 1e-15);
        Ok(out)
    }
}

impl Add for Observable {
    type Output = Observable;
    fn add(self, rhs: Observable) -> Observable {
        self.try_add(&rhs)
            .expect("observable dimensions must agree")
    }
}

impl Sub for Observable {
    type Output = Observable;
    fn sub(self, rhs: Observable) -> Observable {
        self.try_add(&rhs.scale(-1.0))
            .expect("observable dimensions must agree")
    }
}

impl Mul for Observable {
    type Output = Observable;
    fn mul(self, rhs: Observable) -> Observable {
        self.try_mul(&rhs)
            .expect("observable dimensions must agree")
    }
}

impl Mul<f64> for Observable {
    type Output = Observable;
    fn mul(self, rhs: f64) -> Observable {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for Observable {
    type Output = Observable;
    fn mul(self, rhs: Complex64) -> Observable {
        self.scale(rhs)
    }
}

impl Neg for Observable {
    type Output = Observable;
    fn neg(self) -> Observable {
        self.scale(-1.0)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.dim;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (k, &pow) in e.iter().enumerate() {
                if pow > 0 {
                    let name = if k < n {
                        format!("q{}", k + 1)
                    } else {
                        format!("p{}", k - n + 1)
                    };
                    if pow == 1 {
                        write!(f, "·{name}")?;
                    } else {
                        write!(f, "·{name}^{pow}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
