//! Time integration of the point-vortex equations of motion as a dynamical
//! confirmation of relative equilibria, plus flow-field sampling for
//! streamline plots.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::dynamics_constant;
use crate::equilibrium::cot;
use crate::error::{Error, Result};
use crate::streets::{Frame, Periodicity, RationalWave, VortexConfiguration};

/// Pairwise distance below which the integrator declares a collision.
pub const COLLISION_TOL: f64 = 1e-6;

/// A computed trajectory of the vortex system.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// One position list per time; vortex order is that of the input
    /// configuration throughout.
    pub states: Vec<Vec<Complex64>>,
    pub scheme: &'static str,
    pub step: f64,
}

/// The motion equations govern the conjugate positions; this helper is the
/// single place where the conjugation happens. Returns `dz_j/dt`.
fn velocities_at(
    positions: &[Complex64],
    circulations: &[i64],
    periodicity: &Periodicity,
    alpha: Complex64,
) -> Result<Vec<Complex64>> {
    let two_pi_i = Complex64::i() * 2.0 * PI;
    let mut out = Vec::with_capacity(positions.len());
    match periodicity {
        Periodicity::Strip => {
            for (j, &zj) in positions.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &zk) in positions.iter().enumerate() {
                    if j != k {
                        let d = zj - zk;
                        if d.norm() < COLLISION_TOL {
                            return Err(Error::CoincidentVortices(zj));
                        }
                        acc += circulations[k] as f64 * cot(d);
                    }
                }
                if alpha.norm() != 0.0 {
                    acc -= alpha * 2.0 * (zj * 2.0).sin();
                }
                out.push((acc / two_pi_i).conj());
            }
        }
        Periodicity::Lattice(lat) => {
            let pairs: Vec<(Complex64, i64)> = positions
                .iter()
                .zip(circulations)
                .map(|(&z, &g)| (z, g))
                .collect();
            let c = dynamics_constant(&pairs, lat);
            for (j, &zj) in positions.iter().enumerate() {
                let mut acc = c;
                for (k, &zk) in positions.iter().enumerate() {
                    if j != k {
                        let (d, _, _) = lat.reduce(zj - zk);
                        if d.norm() < COLLISION_TOL {
                            return Err(Error::CoincidentVortices(zj));
                        }
                        acc += circulations[k] as f64 * lat.zeta(zj - zk)?;
                    }
                }
                out.push((acc / two_pi_i).conj());
            }
        }
    }
    Ok(out)
}

/// Instantaneous velocities `dz_j/dt` of the configuration's vortices.
pub fn vortex_velocities(config: &VortexConfiguration) -> Result<Vec<Complex64>> {
    let positions = config.positions();
    let circulations: Vec<i64> = config.vortices.iter().map(|v| v.circulation).collect();
    velocities_at(
        &positions,
        &circulations,
        &config.periodicity,
        config.background_alpha,
    )
}

/// Classical fixed-step fourth-order Runge-Kutta on the full complex state.
/// Positions are not strip-reduced during integration, so rigid translation
/// stays visible in the output.
pub fn integrate(config: &VortexConfiguration, t_final: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0) || t_final < dt {
        return Err(Error::InvalidInput(format!(
            "need 0 < dt <= T, got dt = {dt}, T = {t_final}"
        )));
    }
    let circulations: Vec<i64> = config.vortices.iter().map(|v| v.circulation).collect();
    let vel = |positions: &[Complex64]| {
        velocities_at(
            positions,
            &circulations,
            &config.periodicity,
            config.background_alpha,
        )
    };

    let steps = (t_final / dt).round() as usize;
    let mut state = config.positions();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(state.clone());
    for step_index in 0..steps {
        let t = step_index as f64 * dt;
        let stage = |base: &[Complex64], k: &[Complex64], factor: f64| -> Vec<Complex64> {
            base.iter()
                .zip(k)
                .map(|(&z, &v)| z + v * (dt * factor))
                .collect()
        };
        let k1 = vel(&state).map_err(|e| collision_at(e, t))?;
        let k2 = vel(&stage(&state, &k1, 0.5)).map_err(|e| collision_at(e, t))?;
        let k3 = vel(&stage(&state, &k2, 0.5)).map_err(|e| collision_at(e, t))?;
        let k4 = vel(&stage(&state, &k3, 1.0)).map_err(|e| collision_at(e, t))?;
        for (j, z) in state.iter_mut().enumerate() {
            *z += (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (dt / 6.0);
        }
        times.push((step_index + 1) as f64 * dt);
        states.push(state.clone());
    }
    Ok(Trajectory {
        times,
        states,
        scheme: "rk4",
        step: dt,
    })
}

fn collision_at(e: Error, t: f64) -> Error {
    match e {
        Error::CoincidentVortices(z) => Error::Collision {
            t,
            dist: z.norm().min(COLLISION_TOL),
        },
        other => other,
    }
}

/// Rectangular sampling grid for [`flow_field`].
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

/// One flow-field sample.
#[derive(Clone, Copy, Debug)]
pub struct FlowSample {
    pub position: Complex64,
    /// Fluid velocity `conj(dW/dz)`; meaningless when `near_singular`.
    pub velocity: Complex64,
    pub near_singular: bool,
}

/// Sample the fluid velocity `conj(dW/dz)` of the wave on a grid, in the
/// requested frame. Near-singular samples are flagged rather than failed.
pub fn flow_field(wave: &RationalWave, grid: &GridSpec, frame: Frame) -> Vec<FlowSample> {
    let two_pi_i = Complex64::i() * 2.0 * PI;
    let kappa = wave.numerator.spectral();
    let mut out = Vec::with_capacity(grid.nx * grid.ny);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let fx = if grid.nx > 1 {
                ix as f64 / (grid.nx - 1) as f64
            } else {
                0.0
            };
            let fy = if grid.ny > 1 {
                iy as f64 / (grid.ny - 1) as f64
            } else {
                0.0
            };
            let z = Complex64::new(
                grid.x_min + fx * (grid.x_max - grid.x_min),
                grid.y_min + fy * (grid.y_max - grid.y_min),
            );
            let num = wave.numerator.evaluate(z);
            let den = wave.denominator.evaluate(z);
            let near_singular = num.norm() < 1e-9 * wave.numerator.magnitude_bound(z)
                || den.norm() < 1e-9 * wave.denominator.magnitude_bound(z);
            let mut dlog = wave.log_derivative(z);
            if frame == Frame::Fixed {
                dlog -= Complex64::i() * kappa;
            }
            out.push(FlowSample {
                position: z,
                velocity: (dlog / two_pi_i).conj(),
                near_singular,
            });
        }
    }
    out
}
