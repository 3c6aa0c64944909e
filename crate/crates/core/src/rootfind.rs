//! Zeros of an [`ExpPolynomial`] in the fundamental strip `Re z in [0, pi)`.
//!
//! The Laurent polynomial is reduced to an ordinary polynomial in
//! `w = e^{2iz}` (its exponents always share one parity here, so the zero set
//! is pi-periodic), all `w`-roots are found by Aberth-Ehrlich simultaneous
//! iteration, then mapped back, clustered into multiplicities and polished by
//! Newton steps on the matching derivative.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trigpoly::ExpPolynomial;

/// Default residual tolerance, relative to the max coefficient magnitude.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative threshold below which a leading/trailing coefficient is treated
/// as a degenerate degree drop (a zero escaped to infinity).
const DEGREE_DROP_TOL: f64 = 1e-9;

/// Initial clustering radius; large enough to capture the `eps^{1/m}` scatter
/// of a multiplicity-6 root, refined recursively when validation fails.
const CLUSTER_RADIUS: f64 = 2e-2;

/// One zero in the fundamental strip.
#[derive(Clone, Debug)]
pub struct Root {
    /// Position with `Re z in [0, pi)`.
    pub position: Complex64,
    pub multiplicity: usize,
    /// `|p(z)| / max|coeff|` at the polished position.
    pub residual: f64,
}

/// All zeros of a quasi-polynomial in the fundamental strip.
#[derive(Clone, Debug, Default)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Number of zeros lost to a degenerate leading/trailing coefficient
    /// (escaped to `Im z -> -inf` / `+inf` respectively).
    pub escaped: usize,
    pub coeff_norm: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Distance on the strip torus: `Re` differences are taken modulo pi.
pub fn strip_distance(a: Complex64, b: Complex64) -> f64 {
    let mut dre = (a.re - b.re).rem_euclid(PI);
    if dre > PI / 2.0 {
        dre -= PI;
    }
    Complex64::new(dre, a.im - b.im).norm()
}

/// Reduce `Re z` into `[0, pi)`.
pub fn reduce_to_strip(z: Complex64) -> Complex64 {
    Complex64::new(z.re.rem_euclid(PI), z.im)
}

/// Extract the zeros of `p` in the fundamental strip, with multiplicities.
///
/// The spectral factor is ignored (it never vanishes). Fails if any polished
/// root leaves a residual above `tol` relative to the coefficient norm.
pub fn roots_in_strip(p: &ExpPolynomial, tol: f64) -> Result<RootSet> {
    let q = p.strip_spectral();
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let norm = q.coeff_norm();
    let lo = q.min_exponent().unwrap();
    let hi = q.max_exponent().unwrap();
    let parity = q.parity().ok_or(Error::MixedParity)?;

    // Trim degenerate leading/trailing coefficients; each trimmed step of 2
    // in the exponent span is one strip zero escaped to infinity.
    let mut lo_t = lo;
    let mut hi_t = hi;
    while hi_t >= lo_t && q.coeff(hi_t).norm() < DEGREE_DROP_TOL * norm {
        hi_t -= 2;
    }
    while lo_t <= hi_t && q.coeff(lo_t).norm() < DEGREE_DROP_TOL * norm {
        lo_t += 2;
    }
    debug_assert!(lo_t.rem_euclid(2) == parity && hi_t.rem_euclid(2) == parity);
    let escaped = ((hi - hi_t) / 2 + (lo_t - lo) / 2) as usize;

    let degree = ((hi_t - lo_t) / 2) as usize;
    if degree == 0 {
        return Ok(RootSet {
            roots: vec![],
            escaped,
            coeff_norm: norm,
        });
    }

    // Coefficients of Q(w), w = e^{2iz}, Q(w) = sum_j c_{lo_t + 2j} w^j.
    let wcoeffs: Vec<Complex64> = (0..=degree as i64).map(|j| q.coeff(lo_t + 2 * j)).collect();
    let wroots = aberth(&wcoeffs);

    // Map to the strip: z = -i Log(w) / 2, then Re z reduced into [0, pi).
    let zs: Vec<Complex64> = wroots
        .iter()
        .map(|w| reduce_to_strip(Complex64::new(w.arg() / 2.0, -w.norm().ln() / 2.0)))
        .collect();

    let mut roots = Vec::new();
    cluster_and_polish(&q, norm, &zs, CLUSTER_RADIUS, tol, &mut roots)?;
    roots.sort_by(|a, b| {
        (a.position.re, a.position.im)
            .partial_cmp(&(b.position.re, b.position.im))
            .unwrap()
    });
    Ok(RootSet {
        roots,
        escaped,
        coeff_norm: norm,
    })
}

/// Single-linkage clustering at `radius`, multiplicity-aware polishing, and
/// recursive splitting when a cluster fails to validate as one multiple root.
fn cluster_and_polish(
    q: &ExpPolynomial,
    norm: f64,
    zs: &[Complex64],
    radius: f64,
    tol: f64,
    out: &mut Vec<Root>,
) -> Result<()> {
    let clusters = single_linkage(zs, radius);
    for cluster in clusters {
        let m = cluster.len();
        match polish_and_validate(q, norm, &cluster, m, tol) {
            Ok(root) => out.push(root),
            Err(err) => {
                if m > 1 && radius > 1e-12 {
                    // wrongly merged distinct roots: split at a finer radius
                    cluster_and_polish(q, norm, &cluster, radius / 4.0, tol, out)?;
                } else {
                    return Err(err);
                }
            }
        }
    }
    Ok(())
}

fn single_linkage(zs: &[Complex64], radius: f64) -> Vec<Vec<Complex64>> {
    let n = zs.len();
    let mut assigned = vec![false; n];
    let mut clusters = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut stack = vec![i];
        let mut members = Vec::new();
        assigned[i] = true;
        while let Some(j) = stack.pop() {
            members.push(zs[j]);
            for l in 0..n {
                if !assigned[l] && strip_distance(zs[j], zs[l]) <= radius {
                    assigned[l] = true;
                    stack.push(l);
                }
            }
        }
        clusters.push(members);
    }
    clusters
}

/// Newton-polish the cluster centroid as a multiplicity-`m` root and verify
/// that all derivatives below order `m` vanish to the expected level.
fn polish_and_validate(
    q: &ExpPolynomial,
    norm: f64,
    cluster: &[Complex64],
    m: usize,
    tol: f64,
) -> Result<Root> {
    // centroid on the torus: shift members near the first one
    let z0 = cluster[0];
    let mut centroid = Complex64::new(0.0, 0.0);
    for &z in cluster {
        let mut re = z.re;
        if (re - z0.re).abs() > PI / 2.0 {
            re -= PI * (re - z0.re).signum();
        }
        centroid += Complex64::new(re, z.im);
    }
    centroid /= m as f64;

    // Newton on the (m-1)-th derivative, which has a simple zero there
    let g = q.derivative(m - 1);
    let gp = g.differentiate();
    let mut z = centroid;
    for _ in 0..100 {
        let gz = g.evaluate(z);
        let gpz = gp.evaluate(z);
        if gpz.norm() == 0.0 {
            break;
        }
        let step = gz / gpz;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }

    // validate: derivatives of order j < m vanish like tol^{(m-j)/m}
    let mut deriv = q.clone();
    for j in 0..m {
        let scale = deriv
            .coeff_norm()
            .max(deriv.magnitude_bound(z))
            .max(norm * 1e-16);
        let threshold = (tol.max(1e-13)).powf((m - j) as f64 / m as f64) * scale * 10.0;
        if deriv.evaluate(z).norm() > threshold {
            return Err(Error::RootResidual {
                z,
                residual: deriv.evaluate(z).norm() / scale,
                tol,
            });
        }
        deriv = deriv.differentiate();
    }

    let residual = q.evaluate(z).norm() / norm.max(q.magnitude_bound(z));
    if residual > tol {
        return Err(Error::RootResidual { z, residual, tol });
    }
    Ok(Root {
        position: reduce_to_strip(z),
        multiplicity: m,
        residual,
    })
}

/// Aberth-Ehrlich simultaneous root iteration.
///
/// `coeffs[j]` is the coefficient of `w^j`; the leading coefficient must be
/// nonzero. Multiple roots converge only to `eps^{1/m}` scatter; the caller
/// clusters them.
pub(crate) fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    assert!(degree >= 1 && coeffs[degree].norm() > 0.0);
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / coeffs[degree]).collect();
    let dmonic: Vec<Complex64> = (1..=degree)
        .map(|j| monic[j] * j as f64)
        .collect();

    // reversed polynomial r(v) = v^d p(1/v), for overflow-free evaluation
    // of the Newton ratio outside the unit circle
    let rev: Vec<Complex64> = monic.iter().rev().copied().collect();
    let drev: Vec<Complex64> = (1..=degree).map(|j| rev[j] * j as f64).collect();

    // Fujiwara bound for the initial circle
    let bound = 2.0
        * (0..degree)
            .map(|j| monic[j].norm().powf(1.0 / (degree - j) as f64))
            .fold(0.0, f64::max)
        + 1e-3;
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / degree as f64 + 0.41;
            Complex64::from_polar(bound * 0.8, angle)
        })
        .collect();

    let eval = |cs: &[Complex64], w: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in cs.iter().rev() {
            acc = acc * w + c;
        }
        acc
    };

    // p(w)/p'(w); far outside the unit circle computed through
    // r(v) = v^d p(1/v) via p'(w)/p(w) = (d - v r'(v)/r(v)) / w, so the
    // Horner recursion cannot overflow however large the start circle is
    let newton_ratio = |w: Complex64| -> Complex64 {
        let fallback = Complex64::new(1e-8, 1e-8);
        let ratio = if w.norm() <= 10.0 {
            let pw = eval(&monic, w);
            let dpw = eval(&dmonic, w);
            if dpw.norm() > 0.0 {
                pw / dpw
            } else {
                fallback
            }
        } else {
            let v = w.inv();
            let rv = eval(&rev, v);
            if rv.norm() == 0.0 {
                return fallback;
            }
            let log_deriv = (Complex64::new(degree as f64, 0.0) - v * eval(&drev, v) / rv) / w;
            if log_deriv.norm() > 0.0 {
                log_deriv.inv()
            } else {
                fallback
            }
        };
        if ratio.is_finite() {
            ratio
        } else {
            fallback
        }
    };

    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let w = roots[i];
            let newton = newton_ratio(w);
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &other) in roots.iter().enumerate() {
                if j != i {
                    let diff = w - other;
                    if diff.norm() > 1e-300 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-12 {
                newton / denom
            } else {
                newton
            };
            roots[i] = w - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    roots
}

/// Match numerator and denominator zeros; the circulation at a matched
/// position is the difference of multiplicities. Returns `(position,
/// circulation)` pairs with zero-circulation points dropped, sorted by
/// `(Re, Im)`.
pub fn merge_with_signs(
    numerator: &RootSet,
    denominator: &RootSet,
    tol: f64,
) -> Result<Vec<(Complex64, i64)>> {
    let mut den_match: Vec<Option<usize>> = vec![None; denominator.roots.len()];
    let mut num_match: Vec<Option<usize>> = vec![None; numerator.roots.len()];
    for (i, nr) in numerator.roots.iter().enumerate() {
        for (j, dr) in denominator.roots.iter().enumerate() {
            if strip_distance(nr.position, dr.position) <= tol {
                if num_match[i].is_some() {
                    return Err(Error::AmbiguousMatch(nr.position));
                }
                if den_match[j].is_some() {
                    return Err(Error::AmbiguousMatch(dr.position));
                }
                num_match[i] = Some(j);
                den_match[j] = Some(i);
            }
        }
    }
    let mut merged = Vec::new();
    for (i, nr) in numerator.roots.iter().enumerate() {
        let gamma = match num_match[i] {
            Some(j) => nr.multiplicity as i64 - denominator.roots[j].multiplicity as i64,
            None => nr.multiplicity as i64,
        };
        if gamma != 0 {
            merged.push((nr.position, gamma));
        }
    }
    for (j, dr) in denominator.roots.iter().enumerate() {
        if den_match[j].is_none() {
            merged.push((dr.position, -(dr.multiplicity as i64)));
        }
    }
    merged.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    Ok(merged)
}
