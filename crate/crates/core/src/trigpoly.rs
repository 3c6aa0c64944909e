//! Exact algebra for quasi-polynomials `P(e^{iz}) e^{i kappa z}`.
//!
//! The ring element is a sparse Laurent polynomial in `u = e^{iz}` together
//! with an optional spectral factor `e^{i kappa z}`. Differentiation and
//! multiplication are closed, so Wronskians of sines and of `e^{i kappa z}`
//! are computed coefficient-exactly with no truncation.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest Wronskian order supported by the cofactor expansion.
pub const MAX_WRONSKIAN: usize = 8;

/// Sparse Laurent polynomial in `u = e^{iz}` times `e^{i kappa z}`.
///
/// Evaluation at `z` is `sum_n c_n e^{inz} * e^{i kappa z}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
    spectral: Complex64,
}

impl ExpPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::term(0, c)
    }

    /// Single term `c u^n`.
    pub fn term(n: i64, c: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            coeffs.insert(n, c);
        }
        Self {
            coeffs,
            spectral: Complex64::new(0.0, 0.0),
        }
    }

    /// The pure spectral factor `e^{i kappa z}`.
    pub fn exponential(kappa: Complex64) -> Self {
        let mut p = Self::constant(Complex64::new(1.0, 0.0));
        p.spectral = kappa;
        p
    }

    /// `sin(kz + phi)` as `(e^{i phi} u^k - e^{-i phi} u^{-k}) / 2i`.
    pub fn from_sine(k: i64, phi: Complex64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidWavenumber(k));
        }
        let i = Complex64::i();
        let half_over_i = Complex64::new(0.0, -0.5); // 1/(2i)
        let mut p = Self::zero();
        p.set(k, (i * phi).exp() * half_over_i);
        p.set(-k, -(-i * phi).exp() * half_over_i);
        Ok(p)
    }

    /// `cos(kz + phi)`.
    pub fn from_cosine(k: i64, phi: Complex64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidWavenumber(k));
        }
        let i = Complex64::i();
        let mut p = Self::zero();
        p.set(k, (i * phi).exp() * 0.5);
        p.set(-k, (-i * phi).exp() * 0.5);
        Ok(p)
    }

    fn set(&mut self, n: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn spectral(&self) -> Complex64 {
        self.spectral
    }

    pub fn with_spectral(mut self, kappa: Complex64) -> Self {
        self.spectral = kappa;
        self
    }

    /// Same coefficients with the spectral factor dropped.
    pub fn strip_spectral(&self) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            spectral: Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Max-norm of the coefficients.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Some(0)` / `Some(1)` if all exponents share one parity, `None` if mixed.
    pub fn parity(&self) -> Option<i64> {
        let mut it = self.coeffs.keys();
        let first = it.next()?.rem_euclid(2);
        if it.all(|n| n.rem_euclid(2) == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Termwise derivative: `c_n -> i (n + kappa) c_n`.
    pub fn differentiate(&self) -> Self {
        let i = Complex64::i();
        let mut out = Self::zero();
        out.spectral = self.spectral;
        for (&n, &c) in &self.coeffs {
            out.set(n, i * (Complex64::new(n as f64, 0.0) + self.spectral) * c);
        }
        out
    }

    /// m-th derivative.
    pub fn derivative(&self, m: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..m {
            p = p.differentiate();
        }
        p
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero();
        out.spectral = self.spectral;
        for (&n, &c) in &self.coeffs {
            out.set(n, s * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Sum of two ring elements sharing the same spectral factor.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(
            self.is_zero() || other.is_zero() || (self.spectral - other.spectral).norm() < 1e-12,
            "adding elements with different spectral factors"
        );
        let mut out = self.clone();
        if out.is_zero() {
            out.spectral = other.spectral;
        }
        for (&n, &c) in &other.coeffs {
            out.set(n, out.coeff(n) + c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; spectral factors add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        out.spectral = self.spectral + other.spectral;
        for (&n, &a) in &self.coeffs {
            for (&m, &b) in &other.coeffs {
                out.set(n + m, out.coeff(n + m) + a * b);
            }
        }
        out
    }

    /// `sum_n c_n e^{inz} * e^{i kappa z}`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let i = Complex64::i();
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            acc += c * (i * z * n as f64).exp();
        }
        acc * (i * self.spectral * z).exp()
    }

    /// `sum_n |c_n| |e^{inz}| * |e^{i kappa z}|` — the evaluation magnitude
    /// scale at `z`, used to normalize residuals away from the real axis.
    pub fn magnitude_bound(&self, z: Complex64) -> f64 {
        let mut acc = 0.0;
        for (&n, &c) in &self.coeffs {
            acc += c.norm() * (-z.im * n as f64).exp();
        }
        acc * (Complex64::i() * self.spectral * z).exp().norm()
    }
}

/// Wronskian determinant of up to [`MAX_WRONSKIAN`] ring elements, expanded
/// exactly by cofactors. The spectral factor of the result is the sum of the
/// input spectral factors.
pub fn wronskian(fs: &[ExpPolynomial]) -> Result<ExpPolynomial> {
    if fs.is_empty() {
        return Err(Error::EmptyWronskian);
    }
    if fs.len() > MAX_WRONSKIAN {
        return Err(Error::WronskianTooLarge {
            max: MAX_WRONSKIAN,
            got: fs.len(),
        });
    }
    let mut spectral_seen: Option<Complex64> = None;
    for f in fs {
        let s = f.spectral();
        if s != Complex64::new(0.0, 0.0) {
            match spectral_seen {
                None => spectral_seen = Some(s),
                Some(prev) if (prev - s).norm() < 1e-12 => {}
                Some(prev) => return Err(Error::ConflictingSpectral(prev, s)),
            }
        }
    }

    let n = fs.len();
    // rows = derivative order, columns = functions
    let mut matrix = Vec::with_capacity(n);
    let mut row = fs.to_vec();
    matrix.push(row.clone());
    for _ in 1..n {
        row = row.iter().map(|p| p.differentiate()).collect();
        matrix.push(row.clone());
    }
    Ok(determinant(&matrix, &(0..n).collect::<Vec<_>>(), 0))
}

fn determinant(matrix: &[Vec<ExpPolynomial>], cols: &[usize], row: usize) -> ExpPolynomial {
    if cols.len() == 1 {
        return matrix[row][cols[0]].clone();
    }
    let mut acc = ExpPolynomial::zero();
    for (pos, &col) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&c| c != col)
            .collect();
        let minor = determinant(matrix, &rest, row + 1);
        let term = matrix[row][col].mul(&minor);
        acc = if pos % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Wavenumbers, phases and a spectral parameter specifying a street.
#[derive(Clone, Debug, PartialEq)]
pub struct StreetSpec {
    /// Strictly increasing positive wavenumbers.
    pub k: Vec<i64>,
    /// Phases, same length as `k`; arbitrary complex, considered modulo pi.
    pub phi: Vec<Complex64>,
    /// Spectral parameter.
    pub kappa: Complex64,
}

impl StreetSpec {
    pub fn new(k: Vec<i64>, phi: Vec<Complex64>, kappa: Complex64) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidInput("empty wavenumber list".into()));
        }
        if k.len() != phi.len() {
            return Err(Error::InvalidInput(format!(
                "{} wavenumbers but {} phases",
                k.len(),
                phi.len()
            )));
        }
        for w in k.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput(
                    "wavenumbers must be strictly increasing".into(),
                ));
            }
        }
        if k[0] < 1 {
            return Err(Error::InvalidWavenumber(k[0]));
        }
        Ok(Self { k, phi, kappa })
    }

    /// The sine factors `sin(k_j z + phi_j)`.
    pub fn sines(&self) -> Result<Vec<ExpPolynomial>> {
        self.k
            .iter()
            .zip(&self.phi)
            .map(|(&k, &phi)| ExpPolynomial::from_sine(k, phi))
            .collect()
    }
}
