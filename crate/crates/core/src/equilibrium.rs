//! Independent residual verifiers for the three equilibrium equations
//! (periodic strip, background flow, doubly periodic) and the generalized
//! Stieltjes relations checked by contour quadrature.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::{dynamics_constant, Lattice};
use crate::error::{Error, Result};
use crate::rootfind::strip_distance;
use crate::streets::{Periodicity, RationalWave, VortexConfiguration};

/// Which equilibrium equation a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationKind {
    Periodic,
    Background,
    DoublyPeriodic,
}

/// Per-vortex residuals of one equilibrium equation.
#[derive(Clone, Debug)]
pub struct EquilibriumReport {
    pub per_vortex: Vec<Complex64>,
    pub max_residual: f64,
    pub equation_kind: EquationKind,
}

impl EquilibriumReport {
    fn new(per_vortex: Vec<Complex64>, equation_kind: EquationKind) -> Self {
        let max_residual = per_vortex.iter().map(|r| r.norm()).fold(0.0, f64::max);
        Self {
            per_vortex,
            max_residual,
            equation_kind,
        }
    }
}

/// `cot z` with argument reduction and a form stable for large `|Im z|`:
/// written in `e^{+-2iz}` so the exponential never overflows.
pub fn cot(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im >= 0.0 {
        let w = (i * 2.0 * z).exp();
        i * (w + 1.0) / (w - 1.0)
    } else {
        let u = (-i * 2.0 * z).exp();
        i * (1.0 + u) / (1.0 - u)
    }
}

fn check_pairwise_distinct(config: &VortexConfiguration) -> Result<()> {
    for (i, a) in config.vortices.iter().enumerate() {
        for b in &config.vortices[i + 1..] {
            if strip_distance(a.position, b.position) < 1e-9 {
                return Err(Error::CoincidentVortices(a.position));
            }
        }
    }
    Ok(())
}

fn require_strip(config: &VortexConfiguration) -> Result<()> {
    match config.periodicity {
        Periodicity::Strip => Ok(()),
        Periodicity::Lattice(_) => Err(Error::InvalidInput(
            "expected a strip-periodic configuration".into(),
        )),
    }
}

/// Residuals `r_j = (1/2 pi i) sum_{k != j} Gamma_k cot(z_j - z_k) - conj(v)`
/// of the periodic relative-equilibrium equation.
pub fn residuals_periodic(config: &VortexConfiguration) -> Result<EquilibriumReport> {
    require_strip(config)?;
    check_pairwise_distinct(config)?;
    let two_pi_i = Complex64::i() * 2.0 * PI;
    let mut per_vortex = Vec::with_capacity(config.vortices.len());
    for (j, vj) in config.vortices.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, vk) in config.vortices.iter().enumerate() {
            if j != k {
                acc += vk.circulation as f64 * cot(vj.position - vk.position);
            }
        }
        per_vortex.push(acc / two_pi_i - config.velocity.conj());
    }
    Ok(EquilibriumReport::new(per_vortex, EquationKind::Periodic))
}

/// Residuals `r_i = sum_{j != i} Gamma_j cot(z_i - z_j) - 2 alpha sin 2z_i`
/// of the fixed-equilibrium equation in the background flow of strength
/// `alpha`.
pub fn residuals_background(
    config: &VortexConfiguration,
    alpha: Complex64,
) -> Result<EquilibriumReport> {
    require_strip(config)?;
    check_pairwise_distinct(config)?;
    if config.velocity.norm() != 0.0 {
        return Err(Error::InvalidInput(
            "background equilibria are fixed: velocity must be zero".into(),
        ));
    }
    let mut per_vortex = Vec::with_capacity(config.vortices.len());
    for (i, vi) in config.vortices.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, vj) in config.vortices.iter().enumerate() {
            if i != j {
                acc += vj.circulation as f64 * cot(vi.position - vj.position);
            }
        }
        per_vortex.push(acc - alpha * 2.0 * (vi.position * 2.0).sin());
    }
    Ok(EquilibriumReport::new(per_vortex, EquationKind::Background))
}

/// Residuals
/// `r_k = (1/2 pi i)(sum_{j != k} Gamma_j zeta(z_k - z_j) + C) - conj(v)`
/// of the doubly-periodic equilibrium equation, with
/// `C = a sum Gamma_j z_j + b sum Gamma_j conj(z_j)`.
pub fn residuals_doubly_periodic(
    config: &VortexConfiguration,
    lat: &Lattice,
) -> Result<EquilibriumReport> {
    let total = config.total_circulation();
    if total != 0 {
        return Err(Error::NonzeroCirculation(total));
    }
    let reduced: Vec<(Complex64, i64)> = config
        .vortices
        .iter()
        .map(|v| (lat.reduce(v.position).0, v.circulation))
        .collect();
    for (i, &(zi, _)) in reduced.iter().enumerate() {
        for &(zj, _) in &reduced[i + 1..] {
            let (d, _, _) = lat.reduce(zi - zj);
            if d.norm() < 1e-9 {
                return Err(Error::CoincidentVortices(zi));
            }
        }
    }
    let c = dynamics_constant(&reduced, lat);
    let two_pi_i = Complex64::i() * 2.0 * PI;
    let mut per_vortex = Vec::with_capacity(reduced.len());
    for (k, &(zk, _)) in reduced.iter().enumerate() {
        let mut acc = c;
        for (j, &(zj, gj)) in reduced.iter().enumerate() {
            if j != k {
                acc += lat.zeta(zk - zj)? * gj as f64;
            }
        }
        per_vortex.push(acc / two_pi_i - config.velocity.conj());
    }
    Ok(EquilibriumReport::new(
        per_vortex,
        EquationKind::DoublyPeriodic,
    ))
}

/// Quarter of the nearest-neighbor distance from `vortex` — the default
/// contour radius for [`generalized_stieltjes`].
pub fn default_radius(config: &VortexConfiguration, vortex: Complex64) -> f64 {
    config
        .vortices
        .iter()
        .map(|v| strip_distance(v.position, vortex))
        .filter(|d| *d > 1e-9)
        .fold(f64::INFINITY, f64::min)
        * 0.25
}

/// Residues of `f^2, f^4, ..., f^{2|m|}` around `vortex`, where
/// `f = psi'/psi`, by trapezoidal contour quadrature (spectrally accurate on
/// a circle). A vanishing list certifies the generalized Stieltjes relations
/// at a circulation `+-m` point.
pub fn generalized_stieltjes(
    wave: &RationalWave,
    vortex: Complex64,
    m: i64,
    radius: f64,
    nodes: usize,
) -> Result<Vec<Complex64>> {
    if m == 0 {
        return Err(Error::InvalidInput("circulation must be nonzero".into()));
    }
    if nodes < 64 {
        return Err(Error::InvalidInput("need at least 64 quadrature nodes".into()));
    }
    if radius <= 0.0 {
        return Err(Error::InvalidInput("contour radius must be positive".into()));
    }
    let powers = m.unsigned_abs() as usize;
    let coarse = residues_on_circle(wave, vortex, radius, nodes, powers);
    let fine = residues_on_circle(wave, vortex, radius, 2 * nodes, powers);
    for (a, b) in coarse.iter().zip(&fine) {
        let change = (a - b).norm();
        if change > 1e-8 * (1.0 + b.norm()) {
            return Err(Error::QuadratureNonConvergent(change));
        }
    }
    Ok(fine)
}

/// Winding number `(1/2 pi i) contour-integral of psi'/psi`; equals the
/// circulation at the enclosed vortex.
pub fn winding_number(
    wave: &RationalWave,
    vortex: Complex64,
    radius: f64,
    nodes: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let e = Complex64::new(0.0, theta).exp();
        acc += wave.log_derivative(vortex + e * radius) * e;
    }
    acc * radius / nodes as f64
}

fn residues_on_circle(
    wave: &RationalWave,
    center: Complex64,
    radius: f64,
    nodes: usize,
    powers: usize,
) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); powers];
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let e = Complex64::new(0.0, theta).exp();
        let f = wave.log_derivative(center + e * radius);
        let f2 = f * f;
        let mut p = Complex64::new(1.0, 0.0);
        for slot in acc.iter_mut() {
            p *= f2;
            *slot += p * e;
        }
    }
    for slot in acc.iter_mut() {
        *slot *= radius / nodes as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streets::{build_street, Provenance, Vortex};
    use crate::trigpoly::StreetSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn street(k: &[i64], kappa: Complex64) -> (VortexConfiguration, RationalWave) {
        let spec = StreetSpec::new(
            k.to_vec(),
            vec![c(0.0, 0.0); k.len()],
            kappa,
        )
        .unwrap();
        build_street(&spec, 1e-10).unwrap()
    }

    #[test]
    fn stable_cot_matches_naive_form() {
        for z in [c(0.3, 0.2), c(1.1, -0.7), c(2.9, 0.01)] {
            assert!((cot(z) - z.cos() / z.sin()).norm() < 1e-13);
        }
        // no overflow deep in the half-planes
        assert!((cot(c(0.4, 300.0)) - c(0.0, -1.0)).norm() < 1e-13);
        assert!((cot(c(0.4, -300.0)) - c(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn built_streets_pass_periodic_residuals() {
        for (k, kappa) in [
            (vec![1i64, 2], c(4.0, 0.0)),
            (vec![1], c(0.5, 0.0)),
            (vec![2, 3], c(0.7, 0.4)),
        ] {
            let (config, _) = street(&k, kappa);
            let report = residuals_periodic(&config).unwrap();
            assert_eq!(report.equation_kind, EquationKind::Periodic);
            assert_eq!(report.per_vortex.len(), config.vortices.len());
            assert!(
                report.max_residual < 1e-10,
                "k={k:?} kappa={kappa}: {:.3e}",
                report.max_residual
            );
        }
    }

    #[test]
    fn single_vortex_residual_is_minus_conj_velocity() {
        let config = VortexConfiguration {
            vortices: vec![Vortex {
                position: c(0.3, 0.1),
                circulation: -1,
            }],
            periodicity: Periodicity::Strip,
            velocity: c(0.0, 0.0),
            background_alpha: c(0.0, 0.0),
            provenance: Provenance::Critical {
                k: vec![1],
                phi: vec![c(0.0, 0.0)],
                j: 1,
            },
        };
        let report = residuals_periodic(&config).unwrap();
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn residuals_are_translation_invariant() {
        let (mut config, _) = street(&[1, 2], c(4.0, 0.0));
        let before = residuals_periodic(&config).unwrap();
        let shift = c(0.37, -0.21);
        for v in &mut config.vortices {
            v.position += shift;
        }
        let after = residuals_periodic(&config).unwrap();
        for (a, b) in before.per_vortex.iter().zip(&after.per_vortex) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn coincident_vortices_rejected() {
        let config = VortexConfiguration {
            vortices: vec![
                Vortex {
                    position: c(0.3, 0.1),
                    circulation: 1,
                },
                Vortex {
                    position: c(0.3, 0.1),
                    circulation: -1,
                },
            ],
            periodicity: Periodicity::Strip,
            velocity: c(0.0, 0.0),
            background_alpha: c(0.0, 0.0),
            provenance: Provenance::Street {
                k: vec![1],
                phi: vec![c(0.0, 0.0)],
                kappa: c(0.0, 0.0),
            },
        };
        assert!(matches!(
            residuals_periodic(&config),
            Err(Error::CoincidentVortices(_))
        ));
    }

    #[test]
    fn background_at_zero_alpha_matches_periodic_scaled() {
        // a fixed street (kappa = 0) solves both equations
        let (config, _) = street(&[1, 2], c(0.0, 0.0));
        let report = residuals_background(&config, c(0.0, 0.0)).unwrap();
        assert!(report.max_residual < 1e-9, "{:.3e}", report.max_residual);
    }

    #[test]
    fn doubly_periodic_hermite_street() {
        let lat = Lattice::new(c(PI / 2.0, 0.0), c(0.0, PI / 2.0)).unwrap();
        let a = lat.omega1 * 0.7 + lat.omega2 * 0.4;
        let (config, _) = crate::elliptic::hermite_street(&[a], &lat).unwrap();
        let report = residuals_doubly_periodic(&config, &lat).unwrap();
        assert!(report.max_residual < 1e-10, "{:.3e}", report.max_residual);
    }

    #[test]
    fn doubly_periodic_cell_choice_invariance() {
        let lat = Lattice::new(c(PI / 2.0, 0.0), c(0.0, PI / 2.0)).unwrap();
        let a = lat.omega1 * 0.7 + lat.omega2 * 0.4;
        let (mut config, _) = crate::elliptic::hermite_street(&[a], &lat).unwrap();
        let before = residuals_doubly_periodic(&config, &lat).unwrap();
        config.vortices[0].position += lat.omega2 * 2.0;
        let after = residuals_doubly_periodic(&config, &lat).unwrap();
        for (x, y) in before.per_vortex.iter().zip(&after.per_vortex) {
            assert!((x - y).norm() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn doubly_periodic_two_zero_hermite_round_trip() {
        use crate::elliptic::{solve_hermite_pair, stieltjes_elliptic_residual, EllipticWave};
        let lat = Lattice::new(c(PI / 2.0, 0.0), c(0.0, PI / 2.0)).unwrap();
        let a2 = lat.omega1 * 0.62 + lat.omega2 * 0.31;
        let a1 = solve_hermite_pair(&lat, -a2 + c(0.3, 0.2), a2).unwrap();
        let b = lat.zeta(a1).unwrap() + lat.zeta(a2).unwrap();
        let zeros = vec![(c(0.0, 0.0), -2i64), (a1, 1), (a2, 1)];
        let wave = EllipticWave::new(zeros.clone(), b, lat.clone()).unwrap();
        for r in stieltjes_elliptic_residual(&wave).unwrap() {
            assert!(r.norm() < 1e-10);
        }
        // a wave with vanishing Stieltjes residuals is a relative equilibrium
        // moving with the velocity implied by B and C
        let cst = crate::elliptic::dynamics_constant(&zeros, &lat);
        let v = ((cst - b) / (Complex64::i() * 2.0 * PI)).conj();
        let config = VortexConfiguration {
            vortices: zeros
                .iter()
                .map(|&(position, circulation)| Vortex {
                    position,
                    circulation,
                })
                .collect(),
            periodicity: Periodicity::Lattice(lat.clone()),
            velocity: v,
            background_alpha: c(0.0, 0.0),
            provenance: Provenance::Hermite {
                a_points: vec![a1, a2],
            },
        };
        let report = residuals_doubly_periodic(&config, &lat).unwrap();
        assert!(report.max_residual < 1e-9, "{:.3e}", report.max_residual);
    }

    #[test]
    fn doubly_periodic_requires_zero_circulation() {
        let lat = Lattice::new(c(PI / 2.0, 0.0), c(0.0, PI / 2.0)).unwrap();
        let config = VortexConfiguration {
            vortices: vec![Vortex {
                position: c(0.3, 0.1),
                circulation: 1,
            }],
            periodicity: Periodicity::Lattice(lat.clone()),
            velocity: c(0.0, 0.0),
            background_alpha: c(0.0, 0.0),
            provenance: Provenance::Hermite { a_points: vec![] },
        };
        assert!(matches!(
            residuals_doubly_periodic(&config, &lat),
            Err(Error::NonzeroCirculation(1))
        ));
    }

    #[test]
    fn winding_number_counts_circulation() {
        let (config, wave) = street(&[1, 2], c(4.0, 0.0));
        for v in &config.vortices {
            let r = default_radius(&config, v.position);
            let w = winding_number(&wave, v.position, r, 128);
            assert!(
                (w - c(v.circulation as f64, 0.0)).norm() < 1e-10,
                "winding {w} for circulation {}",
                v.circulation
            );
        }
    }

    #[test]
    fn stieltjes_relations_hold_at_double_pole() {
        let (config, wave) = street(&[1, 2], c(4.0, 0.0));
        let origin = config
            .vortices
            .iter()
            .find(|v| v.circulation == -2)
            .unwrap();
        let r = default_radius(&config, origin.position);
        let res = generalized_stieltjes(&wave, origin.position, -2, r, 128).unwrap();
        assert_eq!(res.len(), 2);
        for q in &res {
            assert!(q.norm() < 1e-8, "residue {q}");
        }
    }

    #[test]
    fn stieltjes_relation_karman() {
        let (config, wave) = street(&[1], c(3.0, 0.0));
        let origin = config
            .vortices
            .iter()
            .find(|v| v.circulation == -1)
            .unwrap();
        let r = default_radius(&config, origin.position);
        let res = generalized_stieltjes(&wave, origin.position, -1, r, 128).unwrap();
        assert_eq!(res.len(), 1);
        assert!(res[0].norm() < 1e-10, "residue {}", res[0]);
    }

    #[test]
    fn quadrature_flags_contour_through_singularity() {
        let (config, wave) = street(&[1], c(3.0, 0.0));
        let origin = config.vortices[0].position;
        let other = config.vortices[1].position;
        // radius passing exactly through the second vortex
        let r = strip_distance(origin, other);
        let out = generalized_stieltjes(&wave, origin, -1, r, 128);
        assert!(matches!(out, Err(Error::QuadratureNonConvergent(_))));
    }

    #[test]
    fn randomized_street_sweep_passes_residuals() {
        // deterministic pseudo-random sweep over n, k, phi, kappa
        let mut state = 0x3ad5_9c1eu64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..=3usize {
            for _ in 0..4 {
                let mut k: Vec<i64> = Vec::new();
                while k.len() < n {
                    let cand = 1 + (rnd() * 12.0) as i64;
                    if !k.contains(&cand) {
                        k.push(cand);
                    }
                }
                k.sort();
                let phi: Vec<Complex64> = (0..n)
                    .map(|_| c(rnd() * PI, (rnd() - 0.5) * 1.0))
                    .collect();
                // kappa on a grid avoiding integers by at least 0.1
                let kappa = c(0.5 + (rnd() * 13.0).floor(), 0.0);
                let spec = StreetSpec::new(k.clone(), phi.clone(), kappa).unwrap();
                let (config, _) = build_street(&spec, 1e-10)
                    .unwrap_or_else(|e| panic!("k={k:?} phi={phi:?} kappa={kappa}: {e}"));
                let report = residuals_periodic(&config).unwrap();
                assert!(
                    report.max_residual < 1e-9,
                    "k={k:?} kappa={kappa}: residual {:.3e}",
                    report.max_residual
                );
            }
        }
    }
}
