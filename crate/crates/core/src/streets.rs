//! Construction of periodic vortex streets from Wronskians of sine
//! eigenfunctions: moving streets, their critical degenerations, collinear
//! equilibria, a closed-form oracle for two wavenumbers, and flow potentials.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::rootfind::{merge_with_signs, reduce_to_strip, roots_in_strip};
use crate::trigpoly::{wronskian, ExpPolynomial, StreetSpec};

/// Critical-parameter exclusion zone around integer wavenumbers.
pub const CRITICAL_TOL: f64 = 1e-8;
/// Radius used to match numerator and denominator zeros.
pub const MATCH_TOL: f64 = 1e-6;

/// A point vortex with integer circulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vortex {
    pub position: Complex64,
    pub circulation: i64,
}

/// Spatial periodicity of a configuration.
#[derive(Clone, Debug)]
pub enum Periodicity {
    /// Periodic in the real direction with period pi.
    Strip,
    /// Doubly periodic with the given lattice.
    Lattice(Lattice),
}

/// Construction record carried on every configuration.
#[derive(Clone, Debug)]
pub enum Provenance {
    Street {
        k: Vec<i64>,
        phi: Vec<Complex64>,
        kappa: Complex64,
    },
    Critical {
        k: Vec<i64>,
        phi: Vec<Complex64>,
        j: usize,
    },
    Collinear {
        n: i64,
        m: i64,
        l: i64,
    },
    WhittakerHill {
        alpha: Complex64,
        s: i64,
        numerator_indices: Vec<usize>,
        denominator_indices: Vec<usize>,
    },
    Hermite {
        a_points: Vec<Complex64>,
    },
}

/// A relative equilibrium of point vortices.
#[derive(Clone, Debug)]
pub struct VortexConfiguration {
    pub vortices: Vec<Vortex>,
    pub periodicity: Periodicity,
    /// Common translation velocity of the vortices.
    pub velocity: Complex64,
    /// Background-flow strength; zero except for Whittaker-Hill streets.
    pub background_alpha: Complex64,
    pub provenance: Provenance,
}

impl VortexConfiguration {
    pub fn total_circulation(&self) -> i64 {
        self.vortices.iter().map(|v| v.circulation).sum()
    }

    pub fn positions(&self) -> Vec<Complex64> {
        self.vortices.iter().map(|v| v.position).collect()
    }
}

/// The meromorphic wave `psi = numerator/denominator` whose zeros and poles
/// are the vortices. The spectral factor lives in the numerator only.
#[derive(Clone, Debug)]
pub struct RationalWave {
    pub numerator: ExpPolynomial,
    pub denominator: ExpPolynomial,
}

impl RationalWave {
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.numerator.evaluate(z) / self.denominator.evaluate(z)
    }

    /// `psi'/psi = num'/num - den'/den`, exact in the coefficient algebra.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let n = self.numerator.evaluate(z);
        let d = self.denominator.evaluate(z);
        self.numerator.differentiate().evaluate(z) / n
            - self.denominator.differentiate().evaluate(z) / d
    }
}

fn vortices_from_pairs(pairs: Vec<(Complex64, i64)>) -> Vec<Vortex> {
    pairs
        .into_iter()
        .map(|(position, circulation)| Vortex {
            position,
            circulation,
        })
        .collect()
}

fn check_not_critical(spec: &StreetSpec) -> Result<()> {
    for &k in &spec.k {
        for sign in [1.0, -1.0] {
            let dist = (spec.kappa - sign * k as f64).norm();
            if dist < CRITICAL_TOL {
                return Err(Error::NearCritical {
                    kappa: spec.kappa,
                    critical: sign * k as f64,
                    dist,
                });
            }
        }
    }
    Ok(())
}

/// Build a moving periodic street: vortices are the zeros of the wave
/// `W(sines, e^{i kappa z}) / W(sines)` counted with signs, and the whole
/// configuration translates with velocity `-conj(kappa)/(2 pi)`.
pub fn build_street(spec: &StreetSpec, tol: f64) -> Result<(VortexConfiguration, RationalWave)> {
    check_not_critical(spec)?;
    let mut fs = spec.sines()?;
    let denominator = wronskian(&fs)?;
    fs.push(ExpPolynomial::exponential(spec.kappa));
    let numerator = wronskian(&fs)?;

    let num_roots = roots_in_strip(&numerator, tol)?;
    let den_roots = roots_in_strip(&denominator, tol)?;
    let pairs = merge_with_signs(&num_roots, &den_roots, MATCH_TOL)?;

    let config = VortexConfiguration {
        vortices: vortices_from_pairs(pairs),
        periodicity: Periodicity::Strip,
        velocity: -spec.kappa.conj() / (2.0 * PI),
        background_alpha: Complex64::new(0.0, 0.0),
        provenance: Provenance::Street {
            k: spec.k.clone(),
            phi: spec.phi.clone(),
            kappa: spec.kappa,
        },
    };
    Ok((config, RationalWave { numerator, denominator }))
}

/// Build the fixed equilibrium obtained at the critical value `kappa = k_j`:
/// the wave degenerates to `W(sines without the j-th) / W(sines)` and the
/// configuration no longer moves. `j` is 1-based.
pub fn build_critical(
    spec: &StreetSpec,
    j: usize,
    tol: f64,
) -> Result<(VortexConfiguration, RationalWave)> {
    if j == 0 || j > spec.k.len() {
        return Err(Error::InvalidInput(format!(
            "critical index {} out of range 1..={}",
            j,
            spec.k.len()
        )));
    }
    let fs = spec.sines()?;
    let denominator = wronskian(&fs)?;
    let reduced: Vec<ExpPolynomial> = fs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j - 1)
        .map(|(_, f)| f.clone())
        .collect();
    let (numerator, num_roots) = if reduced.is_empty() {
        // psi = 1/W: the configuration is the denominator poles alone
        let one = ExpPolynomial::constant(Complex64::new(1.0, 0.0));
        (one, crate::rootfind::RootSet::default())
    } else {
        let numerator = wronskian(&reduced)?;
        let roots = roots_in_strip(&numerator, tol)?;
        (numerator, roots)
    };
    let den_roots = roots_in_strip(&denominator, tol)?;
    let pairs = merge_with_signs(&num_roots, &den_roots, MATCH_TOL)?;

    let config = VortexConfiguration {
        vortices: vortices_from_pairs(pairs),
        periodicity: Periodicity::Strip,
        velocity: Complex64::new(0.0, 0.0),
        background_alpha: Complex64::new(0.0, 0.0),
        provenance: Provenance::Critical {
            k: spec.k.clone(),
            phi: spec.phi.clone(),
            j,
        },
    };
    Ok((config, RationalWave { numerator, denominator }))
}

/// Closed form for the moving street with wavenumbers `(1, 2)` and zero
/// phases: the two positive vortices sit at `z = Log(X)/(2i)` with
/// `X = ((kappa^2 - 4) +- sqrt(3 (4 - kappa^2))) / ((kappa - 1)(kappa - 2))`,
/// reduced to the strip. Independent oracle for `build_street`.
pub fn closed_form_n2(kappa: Complex64) -> Result<[Complex64; 2]> {
    for critical in [1.0, 2.0] {
        let dist = (kappa - critical).norm();
        if dist < CRITICAL_TOL {
            return Err(Error::NearCritical {
                kappa,
                critical,
                dist,
            });
        }
    }
    let k2 = kappa * kappa;
    let disc = ((k2 - 4.0) * (-3.0)).sqrt();
    let den = (kappa - 1.0) * (kappa - 2.0);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (slot, sign) in out.iter_mut().zip([1.0, -1.0]) {
        let x = (k2 - 4.0 + disc * sign) / den;
        *slot = reduce_to_strip(x.ln() / Complex64::new(0.0, 2.0));
    }
    out.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(out)
}

/// Build the collinear equilibrium with wavenumbers
/// `k = (1, ..., n-m, n-m+2, ..., n+m-2, n+m+l)` and zero phases; the
/// vortices are the zeros of `W(all sines) / W(sines without the last)`.
/// Asserts the expected structure: net circulation `n` at `0`, `m` at
/// `pi/2`, and `l` simple real zeros symmetric about `pi/2`.
pub fn build_collinear(n: i64, m: i64, l: i64, tol: f64) -> Result<VortexConfiguration> {
    if !(n > m && m >= 1) {
        return Err(Error::InvalidInput(format!(
            "collinear equilibria require n > m >= 1, got n = {n}, m = {m}"
        )));
    }
    if l <= 0 || l % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "collinear equilibria require a positive even l, got l = {l}"
        )));
    }
    let mut k: Vec<i64> = (1..=n - m).collect();
    k.extend((1..m).map(|j| n - m + 2 * j));
    k.push(n + m + l);
    let phi = vec![Complex64::new(0.0, 0.0); k.len()];
    let spec = StreetSpec::new(k.clone(), phi.clone(), Complex64::new(0.0, 0.0))?;

    let fs = spec.sines()?;
    let numerator = wronskian(&fs)?;
    let denominator = if fs.len() == 1 {
        ExpPolynomial::constant(Complex64::new(1.0, 0.0))
    } else {
        wronskian(&fs[..fs.len() - 1])?
    };
    let num_roots = roots_in_strip(&numerator, tol)?;
    let den_roots = roots_in_strip(&denominator, tol)?;
    let pairs = merge_with_signs(&num_roots, &den_roots, MATCH_TOL)?;

    // assert the factorization shape instead of trusting it
    let mut extras: Vec<Complex64> = Vec::new();
    let mut at_zero = 0i64;
    let mut at_half = 0i64;
    for &(z, g) in &pairs {
        if z.norm() < MATCH_TOL || (z - Complex64::new(PI, 0.0)).norm() < MATCH_TOL {
            at_zero += g;
        } else if (z - Complex64::new(PI / 2.0, 0.0)).norm() < MATCH_TOL {
            at_half += g;
        } else {
            if z.im.abs() > tol.max(1e-9) * 100.0 {
                return Err(Error::InvalidInput(format!(
                    "collinear zero off the real axis at z = {z}"
                )));
            }
            if g != 1 {
                return Err(Error::InvalidInput(format!(
                    "collinear zero at z = {z} has circulation {g}, expected 1"
                )));
            }
            extras.push(z);
        }
    }
    if at_zero != n || at_half != m || extras.len() as i64 != l {
        return Err(Error::InvalidInput(format!(
            "collinear structure mismatch: circulation {at_zero} at 0 (expected {n}), \
             {at_half} at pi/2 (expected {m}), {} extra zeros (expected {l})",
            extras.len()
        )));
    }
    for z in &extras {
        let mirror = PI - z.re;
        if !extras.iter().any(|w| (w.re - mirror).abs() < 1e-6) {
            return Err(Error::InvalidInput(format!(
                "collinear zeros not symmetric about pi/2 near x = {}",
                z.re
            )));
        }
    }

    Ok(VortexConfiguration {
        vortices: vortices_from_pairs(pairs),
        periodicity: Periodicity::Strip,
        velocity: Complex64::new(0.0, 0.0),
        background_alpha: Complex64::new(0.0, 0.0),
        provenance: Provenance::Collinear { n, m, l },
    })
}

/// Frame in which the complex potential is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// Co-moving with the street.
    Moving,
    /// Laboratory frame: the moving-frame potential plus `kappa z / (2 pi)`.
    Fixed,
}

/// Complex potential `W(z) = log(psi) / (2 pi i)` (principal branch; the
/// single-valued physical field is its derivative).
pub fn complex_potential(wave: &RationalWave, z: Complex64, frame: Frame) -> Result<Complex64> {
    let num = wave.numerator.evaluate(z);
    let den = wave.denominator.evaluate(z);
    let scale = wave.numerator.coeff_norm().max(wave.denominator.coeff_norm());
    if num.norm() < 1e-12 * scale || den.norm() < 1e-12 * scale {
        return Err(Error::AtSingularity(z));
    }
    let mut psi = num / den;
    if frame == Frame::Fixed {
        let kappa = wave.numerator.spectral();
        psi *= (-Complex64::i() * kappa * z).exp();
    }
    Ok(psi.ln() / (Complex64::i() * 2.0 * PI))
}

/// Schroedinger potential `u(z) = -2 (W''W - W'^2)/W^2` of the sine
/// Wronskian `W`, via exact coefficient-level derivatives.
pub fn potential_u(spec: &StreetSpec, z: Complex64) -> Result<Complex64> {
    let w = wronskian(&spec.sines()?)?;
    let wz = w.evaluate(z);
    if wz.norm() < 1e-12 * w.coeff_norm() {
        return Err(Error::AtSingularity(z));
    }
    let w1 = w.differentiate().evaluate(z);
    let w2 = w.derivative(2).evaluate(z);
    Ok((w2 * wz - w1 * w1) / (wz * wz) * -2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(k: &[i64], phi: &[f64], kappa: Complex64) -> StreetSpec {
        StreetSpec::new(
            k.to_vec(),
            phi.iter().map(|&p| c(p, 0.0)).collect(),
            kappa,
        )
        .unwrap()
    }

    fn find(config: &VortexConfiguration, z: Complex64) -> &Vortex {
        config
            .vortices
            .iter()
            .min_by(|a, b| {
                (a.position - z)
                    .norm()
                    .partial_cmp(&(b.position - z).norm())
                    .unwrap()
            })
            .unwrap()
    }

    #[test]
    fn karman_street_single_wavenumber() {
        let (config, _) = build_street(&spec(&[1], &[0.0], c(3.0, 0.0)), 1e-10).unwrap();
        assert_eq!(config.vortices.len(), 2);
        assert_eq!(config.total_circulation(), 0);
        let neg = find(&config, c(0.0, 0.0));
        assert_eq!(neg.circulation, -1);
        assert!(neg.position.norm() < 1e-10);
        // e^{2iz} = (kappa+1)/(kappa-1) = 2 at kappa = 3
        let pos = find(&config, c(0.0, -0.5 * 2.0f64.ln()));
        assert_eq!(pos.circulation, 1);
        assert!((pos.position - c(0.0, -0.5 * 2.0f64.ln())).norm() < 1e-10);
        assert!((config.velocity - c(-3.0 / (2.0 * PI), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_wavenumber_street_at_zero_kappa() {
        let (config, _) = build_street(&spec(&[1, 2], &[0.0, 0.0], c(0.0, 0.0)), 1e-10).unwrap();
        assert_eq!(config.total_circulation(), 0);
        let h = 0.5 * (2.0 + 3.0f64.sqrt()).ln();
        let neg = find(&config, c(0.0, 0.0));
        assert_eq!(neg.circulation, -2);
        for im in [h, -h] {
            let v = find(&config, c(PI / 2.0, im));
            assert_eq!(v.circulation, 1);
            assert!((v.position - c(PI / 2.0, im)).norm() < 1e-10);
        }
        assert!(config.velocity.norm() < 1e-15);
    }

    #[test]
    fn closed_form_matches_street_on_kappa_grid() {
        for i in 0..20 {
            let kappa = c(0.07 + 0.31 * i as f64, 0.13);
            if (kappa - c(1.0, 0.0)).norm() < 0.1 || (kappa - c(2.0, 0.0)).norm() < 0.1 {
                continue;
            }
            let (config, _) = build_street(&spec(&[1, 2], &[0.0, 0.0], kappa), 1e-10).unwrap();
            let oracle = closed_form_n2(kappa).unwrap();
            for z in oracle {
                let v = find(&config, z);
                assert_eq!(v.circulation, 1);
                assert!(
                    (v.position - z).norm() < 1e-10,
                    "kappa = {kappa}: {} vs {z}",
                    v.position
                );
            }
        }
    }

    #[test]
    fn closed_form_limits() {
        let [z1, z2] = closed_form_n2(c(0.0, 0.0)).unwrap();
        let h = 0.5 * (2.0 + 3.0f64.sqrt()).ln();
        assert!((z1 - c(PI / 2.0, -h)).norm() < 1e-12 || (z1 - c(PI / 2.0, h)).norm() < 1e-12);
        assert!((z2.re - PI / 2.0).abs() < 1e-12 && (z1.im + z2.im).abs() < 1e-12);

        // kappa = 2 + eps: real parts near +-pi/4 (mod pi)
        let eps = 1e-4;
        let [w1, w2] = closed_form_n2(c(2.0 + eps, 0.0)).unwrap();
        let res: Vec<f64> = [w1, w2].iter().map(|z| z.re).collect();
        assert!(res.iter().any(|&x| (x - PI / 4.0).abs() < 1e-2));
        assert!(res.iter().any(|&x| (x - 3.0 * PI / 4.0).abs() < 1e-2));
    }

    #[test]
    fn near_critical_kappa_rejected() {
        let err = build_street(&spec(&[1, 2], &[0.0, 0.0], c(2.0, 1e-9)), 1e-10).unwrap_err();
        assert!(matches!(err, Error::NearCritical { .. }));
        let err = build_street(&spec(&[1], &[0.0], c(-1.0, 0.0)), 1e-10).unwrap_err();
        assert!(matches!(err, Error::NearCritical { .. }));
        assert!(matches!(
            closed_form_n2(c(1.0, 0.0)),
            Err(Error::NearCritical { .. })
        ));
    }

    #[test]
    fn critical_streets_match_known_configurations() {
        let s = spec(&[1, 2], &[0.0, 0.0], c(1.0, 0.0));
        let (config, _) = build_critical(&s, 1, 1e-10).unwrap();
        assert_eq!(config.vortices.len(), 2);
        assert_eq!(find(&config, c(0.0, 0.0)).circulation, -2);
        assert_eq!(find(&config, c(PI / 2.0, 0.0)).circulation, 1);
        assert!(config.velocity.norm() == 0.0);

        let (config, _) = build_critical(&s, 2, 1e-10).unwrap();
        assert_eq!(config.vortices.len(), 1);
        assert_eq!(config.vortices[0].circulation, -2);
        assert!(config.vortices[0].position.norm() < 1e-10);

        let s1 = spec(&[1], &[0.0], c(1.0, 0.0));
        let (config, wave) = build_critical(&s1, 1, 1e-10).unwrap();
        assert_eq!(config.vortices.len(), 1);
        assert_eq!(config.vortices[0].circulation, -1);
        // psi = 1/sin z
        assert!((wave.evaluate(c(0.4, 0.1)) - c(0.4, 0.1).sin().inv()).norm() < 1e-12);
    }

    #[test]
    fn critical_index_out_of_range() {
        let s = spec(&[1, 2], &[0.0, 0.0], c(1.0, 0.0));
        assert!(build_critical(&s, 0, 1e-10).is_err());
        assert!(build_critical(&s, 3, 1e-10).is_err());
    }

    #[test]
    fn vortex_counting_by_gcd() {
        // k = (m, n), phi = 0, generic kappa: m+n-3d of circulation -1,
        // d of -2, m+n-d of +1, with d = gcd(m, n)
        for (m, n, kappa) in [(2, 3, c(0.4, 0.2)), (2, 4, c(0.3, 0.1))] {
            let (config, _) =
                build_street(&spec(&[m, n], &[0.0, 0.0], kappa), 1e-10).unwrap();
            let d = gcd(m, n);
            let count = |g: i64| config.vortices.iter().filter(|v| v.circulation == g).count() as i64;
            assert_eq!(count(-1), m + n - 3 * d, "m={m} n={n}");
            assert_eq!(count(-2), d);
            assert_eq!(count(1), m + n - d);
            assert_eq!(config.total_circulation(), 0);
        }
    }

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn collinear_structure() {
        let config = build_collinear(2, 1, 2, 1e-10).unwrap();
        if let Provenance::Collinear { n, m, l } = config.provenance {
            assert_eq!((n, m, l), (2, 1, 2));
        } else {
            panic!("wrong provenance");
        }
        assert_eq!(find(&config, c(0.0, 0.0)).circulation, 2);
        assert_eq!(find(&config, c(PI / 2.0, 0.0)).circulation, 1);
        let extras: Vec<&Vortex> = config
            .vortices
            .iter()
            .filter(|v| {
                v.position.norm() > 1e-6 && (v.position - c(PI / 2.0, 0.0)).norm() > 1e-6
            })
            .collect();
        assert_eq!(extras.len(), 2);
        for v in &extras {
            assert_eq!(v.circulation, 1);
            assert!(v.position.im.abs() < 1e-9);
        }
        assert!((extras[0].position.re + extras[1].position.re - PI).abs() < 1e-9);

        let config = build_collinear(3, 1, 2, 1e-10).unwrap();
        assert_eq!(find(&config, c(0.0, 0.0)).circulation, 3);
        assert_eq!(find(&config, c(PI / 2.0, 0.0)).circulation, 1);
        assert_eq!(config.total_circulation(), 3 + 1 + 2);
    }

    #[test]
    fn collinear_preconditions() {
        assert!(build_collinear(2, 1, 3, 1e-10).is_err());
        assert!(build_collinear(1, 1, 2, 1e-10).is_err());
        assert!(build_collinear(2, 1, 0, 1e-10).is_err());
    }

    #[test]
    fn potential_u_single_sine() {
        let z = c(0.3, 0.2);
        let u = potential_u(&spec(&[1], &[0.0], c(0.0, 0.0)), z).unwrap();
        let exact = (z.sin() * z.sin()).inv() * 2.0;
        assert!((u - exact).norm() < 1e-12);
        // periodicity
        let u2 = potential_u(&spec(&[1], &[0.0], c(0.0, 0.0)), z + c(PI, 0.0)).unwrap();
        assert!((u - u2).norm() < 1e-11);
        // pole rejected
        assert!(matches!(
            potential_u(&spec(&[1], &[0.0], c(0.0, 0.0)), c(0.0, 0.0)),
            Err(Error::AtSingularity(_))
        ));
    }

    #[test]
    fn wave_solves_schroedinger_equation() {
        let s = spec(&[1, 2], &[0.0, 0.0], c(4.0, 0.0));
        let (_, wave) = build_street(&s, 1e-10).unwrap();
        let kappa2 = s.kappa * s.kappa;
        for i in 0..10 {
            let z = c(0.17 + 0.29 * i as f64, 0.23 - 0.11 * (i % 3) as f64);
            let psi = wave.evaluate(z);
            if !psi.is_finite() || psi.norm() < 1e-8 {
                continue;
            }
            let den = wave.denominator.evaluate(z);
            if den.norm() < 1e-6 * wave.denominator.coeff_norm() {
                continue;
            }
            // psi'' from exact derivatives of the quotient
            let n0 = wave.numerator.evaluate(z);
            let n1 = wave.numerator.differentiate().evaluate(z);
            let n2 = wave.numerator.derivative(2).evaluate(z);
            let d0 = den;
            let d1 = wave.denominator.differentiate().evaluate(z);
            let d2 = wave.denominator.derivative(2).evaluate(z);
            let psi1 = (n1 * d0 - n0 * d1) / (d0 * d0);
            let psi2 = (n2 * d0 * d0 - 2.0 * n1 * d1 * d0 - n0 * d2 * d0
                + 2.0 * n0 * d1 * d1)
                / (d0 * d0 * d0);
            let _ = psi1;
            let u = potential_u(&s, z).unwrap();
            let residual = -psi2 + u * psi - kappa2 * psi;
            assert!(
                residual.norm() < 1e-8 * psi.norm().max(1.0),
                "residual {:.3e} at z = {z}",
                residual.norm()
            );
        }
    }

    #[test]
    fn potential_frames_differ_by_linear_term() {
        let s = spec(&[1], &[0.0], c(3.0, 0.0));
        let (_, wave) = build_street(&s, 1e-10).unwrap();
        let z = c(0.7, 0.4);
        let moving = complex_potential(&wave, z, Frame::Moving).unwrap();
        let fixed = complex_potential(&wave, z, Frame::Fixed).unwrap();
        let diff = moving - fixed - s.kappa * z / (2.0 * PI);
        // equal modulo the 1/(2 pi i) log branch, i.e. modulo 1
        let frac = (diff.re - diff.re.round()).abs();
        assert!(frac < 1e-12 && diff.im.abs() < 1e-12, "diff {diff}");
    }

    #[test]
    fn potential_derivative_matches_circulation_sum() {
        let s = spec(&[1], &[0.0], c(3.0, 0.0));
        let (config, wave) = build_street(&s, 1e-10).unwrap();
        let z = c(1.1, 0.8);
        let h = 1e-5;
        let dw = (complex_potential(&wave, z + c(h, 0.0), Frame::Moving).unwrap()
            - complex_potential(&wave, z - c(h, 0.0), Frame::Moving).unwrap())
            / (2.0 * h);
        let mut expect = s.kappa / (2.0 * PI);
        for v in &config.vortices {
            let w = z - v.position;
            expect += v.circulation as f64 * w.cos() / w.sin() / (Complex64::i() * 2.0 * PI);
        }
        assert!((dw - expect).norm() < 1e-8, "{dw} vs {expect}");
    }

    #[test]
    fn singularity_rejected_in_potential() {
        let s = spec(&[1], &[0.0], c(3.0, 0.0));
        let (config, wave) = build_street(&s, 1e-10).unwrap();
        for v in &config.vortices {
            assert!(matches!(
                complex_potential(&wave, v.position, Frame::Moving),
                Err(Error::AtSingularity(_))
            ));
        }
    }
}
