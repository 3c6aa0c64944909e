//! Elementary eigenfunctions of the Whittaker-Hill operator for odd `s` and
//! vortex equilibria in the `cos 2z` background flow built from their
//! Wronskians.
//!
//! Substituting `psi = phi e^{alpha cos 2x}` into
//! `-psi'' - (4 alpha s cos 2x + 2 alpha^2 cos 4x) psi = lambda psi`
//! gives
//! `-phi'' + 4 alpha sin 2x phi' + 4 alpha (1-s) cos 2x phi = mu phi` with
//! `mu = lambda + 2 alpha^2`. In the Fourier modes `e^{2ikx}` the coupling
//! `k -> k+1` carries `2 alpha (2k+1-s)` and `k -> k-1` carries
//! `-2 alpha (2k-1+s)`, which both vanish exactly at the band ends, so the
//! span `|k| <= (s-1)/2` is invariant and the problem is an unreduced
//! complex tridiagonal `s x s` eigenproblem.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rootfind::{merge_with_signs, roots_in_strip, RootSet};
use crate::streets::{Periodicity, Provenance, Vortex, VortexConfiguration};
use crate::trigpoly::{wronskian, ExpPolynomial};

/// Choice of eigenfunction index sets for a Whittaker-Hill street.
#[derive(Clone, Debug)]
pub struct WHSpec {
    /// Odd operator parameter.
    pub s: i64,
    /// Background-flow strength.
    pub alpha: Complex64,
    /// Denominator index set (1-based, into the `Re lambda`-sorted list).
    pub i_set: Vec<usize>,
    /// Numerator index set; must contain `i_set` plus exactly one extra.
    pub j_set: Vec<usize>,
}

impl WHSpec {
    pub fn new(s: i64, alpha: Complex64, i_set: Vec<usize>, j_set: Vec<usize>) -> Result<Self> {
        if j_set.len() != i_set.len() + 1 {
            return Err(Error::InvalidInput(
                "the numerator set must have exactly one more index".into(),
            ));
        }
        for &idx in i_set.iter().chain(&j_set) {
            if idx == 0 || idx as i64 > s {
                return Err(Error::InvalidInput(format!(
                    "eigenfunction index {idx} out of range 1..={s}"
                )));
            }
        }
        for &idx in &i_set {
            if !j_set.contains(&idx) {
                return Err(Error::InvalidInput(format!(
                    "denominator index {idx} missing from the numerator set"
                )));
            }
        }
        Ok(Self {
            s,
            alpha,
            i_set,
            j_set,
        })
    }
}

/// One elementary eigenfunction `psi = phi e^{alpha cos 2x}`.
#[derive(Clone, Debug)]
pub struct WHEigenfunction {
    /// Trigonometric-polynomial factor, exponents in `{-(s-1), ..., s-1}`,
    /// even.
    pub phi: ExpPolynomial,
    /// Eigenvalue of the Whittaker-Hill operator.
    pub lambda: Complex64,
    /// Set when the eigenvalue coincides with another one.
    pub degenerate: bool,
}

fn tridiagonal_matrix(s: i64, alpha: Complex64) -> Vec<Vec<Complex64>> {
    let n = s as usize;
    let half = (s - 1) / 2;
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![vec![zero; n]; n];
    for col in 0..n {
        let k = col as i64 - half;
        m[col][col] = Complex64::new((4 * k * k) as f64, 0.0);
        // k -> k+1 lands in the row below
        if col + 1 < n {
            m[col + 1][col] = alpha * (2.0 * (2 * k + 1 - s) as f64);
        }
        // k -> k-1 lands in the row above
        if col > 0 {
            m[col - 1][col] = -alpha * (2.0 * (2 * k - 1 + s) as f64);
        }
    }
    m
}

/// Coefficients (ascending in `mu`) of `det(M - mu I)` for a tridiagonal
/// matrix, by the three-term minor recurrence.
fn characteristic_polynomial(m: &[Vec<Complex64>]) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mul_linear = |p: &[Complex64], d: Complex64| -> Vec<Complex64> {
        // p(mu) * (d - mu)
        let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            out[i] += c * d;
            out[i + 1] -= c;
        }
        out
    };
    let mut prev: Vec<Complex64> = vec![one];
    let mut curr = mul_linear(&prev, m[0][0]);
    for i in 1..m.len() {
        let mut next = mul_linear(&curr, m[i][i]);
        let cross = m[i][i - 1] * m[i - 1][i];
        for (slot, &c) in next.iter_mut().zip(&prev) {
            *slot -= cross * c;
        }
        prev = curr;
        curr = next;
    }
    curr
}

/// Eigenvector of an unreduced tridiagonal matrix by forward propagation
/// from a unit first component.
fn tridiagonal_eigenvector(m: &[Vec<Complex64>], mu: Complex64) -> Vec<Complex64> {
    let n = m.len();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[0] = Complex64::new(1.0, 0.0);
    if n == 1 {
        return v;
    }
    v[1] = (mu - m[0][0]) / m[0][1];
    for i in 1..n - 1 {
        v[i + 1] = ((mu - m[i][i]) * v[i] - m[i][i - 1] * v[i - 1]) / m[i][i + 1];
    }
    v
}

/// All `s` elementary eigenfunctions, sorted by `Re lambda` ascending.
/// Each `phi` is normalized to unit leading (highest-exponent) coefficient.
pub fn wh_eigenfunctions(s: i64, alpha: Complex64) -> Result<Vec<WHEigenfunction>> {
    if s < 1 || s > 15 || s % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "the elementary construction needs odd s in 1..=15, got {s}"
        )));
    }
    if alpha.norm() == 0.0 {
        return Err(Error::InvalidInput(
            "alpha must be nonzero (the zero-background operator is free)".into(),
        ));
    }
    let m = tridiagonal_matrix(s, alpha);
    let half = (s - 1) / 2;
    let mus: Vec<Complex64> = if s == 1 {
        vec![Complex64::new(0.0, 0.0)]
    } else {
        crate::rootfind::aberth(&characteristic_polynomial(&m))
    };
    let mut out: Vec<WHEigenfunction> = mus
        .iter()
        .map(|&mu| {
            let v = tridiagonal_eigenvector(&m, mu);
            let mut phi = ExpPolynomial::zero();
            for (j, &c) in v.iter().enumerate() {
                let k = j as i64 - half;
                phi = phi.add(&ExpPolynomial::term(2 * k, c));
            }
            let lead = phi.coeff(phi.max_exponent().unwrap());
            let phi = if lead.norm() > 1e-12 * phi.coeff_norm() {
                phi.scale(lead.inv())
            } else {
                let top = phi
                    .coeffs()
                    .map(|(_, c)| c.norm())
                    .fold(0.0f64, f64::max);
                phi.scale(Complex64::new(top, 0.0).inv())
            };
            WHEigenfunction {
                phi,
                lambda: mu - alpha * alpha * 2.0,
                degenerate: false,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.lambda.re, a.lambda.im)
            .partial_cmp(&(b.lambda.re, b.lambda.im))
            .unwrap()
    });
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if (out[i].lambda - out[j].lambda).norm() < 1e-8 {
                out[i].degenerate = true;
                out[j].degenerate = true;
            }
        }
    }
    Ok(out)
}

/// Build the vortex equilibrium in the `cos 2z` background whose wave is the
/// ratio of the two eigenfunction Wronskians selected by the given `WHSpec`. The
/// exponential prefactors `e^{n alpha cos 2x}` carry no zeros, so the
/// vortices come from the trigonometric Wronskians alone.
pub fn wh_street(spec: &WHSpec, tol: f64) -> Result<(VortexConfiguration, crate::streets::RationalWave)> {
    let eigen = wh_eigenfunctions(spec.s, spec.alpha)?;
    let pick = |set: &[usize]| -> Vec<ExpPolynomial> {
        set.iter().map(|&idx| eigen[idx - 1].phi.clone()).collect()
    };
    let numerator = wronskian(&pick(&spec.j_set))?;
    let num_roots = roots_in_strip(&numerator, tol)?;
    let (denominator, den_roots) = if spec.i_set.is_empty() {
        (ExpPolynomial::constant(Complex64::new(1.0, 0.0)), RootSet::default())
    } else {
        let d = wronskian(&pick(&spec.i_set))?;
        let roots = roots_in_strip(&d, tol)?;
        (d, roots)
    };
    let pairs = merge_with_signs(&num_roots, &den_roots, crate::streets::MATCH_TOL)?;
    let config = VortexConfiguration {
        vortices: pairs
            .into_iter()
            .map(|(position, circulation)| Vortex {
                position,
                circulation,
            })
            .collect(),
        periodicity: Periodicity::Strip,
        velocity: Complex64::new(0.0, 0.0),
        background_alpha: spec.alpha,
        provenance: Provenance::WhittakerHill {
            alpha: spec.alpha,
            s: spec.s,
            numerator_indices: spec.j_set.clone(),
            denominator_indices: spec.i_set.clone(),
        },
    };
    Ok((
        config,
        crate::streets::RationalWave {
            numerator,
            denominator,
        },
    ))
}

/// Residual of the Whittaker-Hill equation for `psi = phi e^{alpha cos 2x}`
/// at `x`, using exact derivatives of the trigonometric factor:
/// `-psi'' - (4 alpha s cos 2x + 2 alpha^2 cos 4x) psi - lambda psi`.
pub fn wh_residual(f: &WHEigenfunction, s: i64, alpha: Complex64, x: Complex64) -> Complex64 {
    let phi = f.phi.evaluate(x);
    let phi1 = f.phi.differentiate().evaluate(x);
    let phi2 = f.phi.derivative(2).evaluate(x);
    let sin2 = (x * 2.0).sin();
    let cos2 = (x * 2.0).cos();
    let cos4 = (x * 4.0).cos();
    let expf = (alpha * cos2).exp();
    let psi = phi * expf;
    let psi2 = (phi2 - alpha * 4.0 * sin2 * phi1
        + (-alpha * 4.0 * cos2 + alpha * alpha * 4.0 * sin2 * sin2) * phi)
        * expf;
    -psi2 - (alpha * 4.0 * s as f64 * cos2 + alpha * alpha * 2.0 * cos4) * psi - f.lambda * psi
}
