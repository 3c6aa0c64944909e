//! Weierstrass functions via theta series in the nome, lattice constants for
//! doubly-periodic vortex dynamics, and Hermite/Lame doubly-periodic streets.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Period lattice with quasi-period and dynamics constants.
///
/// Periods are `2 omega1`, `2 omega2` with `Im(omega2/omega1) > 0`. The
/// constants `a`, `b` solve `a omega_i + b conj(omega_i) = eta_i` and enter
/// the doubly-periodic vortex velocity through `C`.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    tau: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeierstrassKind {
    P,
    Zeta,
    Sigma,
}

const THETA_MAX_TERMS: usize = 80;

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if omega1.norm() == 0.0 || omega2.norm() == 0.0 {
            return Err(Error::DegenerateLattice);
        }
        let tau = omega2 / omega1;
        if tau.im <= 1e-12 {
            return Err(Error::DegenerateLattice);
        }
        // eta1 = -pi^2 theta1'''(0) / (12 omega1 theta1'(0))
        let (d1, d3) = theta1_zero_derivs(tau);
        let eta1 = -PI * PI * d3 / (12.0 * omega1 * d1);
        // Legendre relation pins eta2
        let eta2 = (eta1 * omega2 - Complex64::new(0.0, PI / 2.0)) / omega1;
        // a omega_i + b conj(omega_i) = eta_i, complex 2x2 by Cramer
        let det = omega1 * omega2.conj() - omega1.conj() * omega2;
        let a = (eta1 * omega2.conj() - eta2 * omega1.conj()) / det;
        let b = (omega1 * eta2 - omega2 * eta1) / det;
        Ok(Self {
            omega1,
            omega2,
            eta1,
            eta2,
            a,
            b,
            tau,
        })
    }

    /// Write `z = 2 x omega1 + 2 y omega2` with real `x`, `y`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let (o1, o2) = (self.omega1 * 2.0, self.omega2 * 2.0);
        let det = o1.re * o2.im - o1.im * o2.re;
        let x = (z.re * o2.im - z.im * o2.re) / det;
        let y = (o1.re * z.im - o1.im * z.re) / det;
        (x, y)
    }

    /// Reduce into the fundamental cell centred at the origin; returns the
    /// reduced point and the integer period shifts taken off.
    pub fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (x, y) = self.coordinates(z);
        let n1 = x.round() as i64;
        let n2 = y.round() as i64;
        let z0 = z - self.omega1 * (2 * n1) as f64 - self.omega2 * (2 * n2) as f64;
        (z0, n1, n2)
    }

    fn v(&self, z: Complex64) -> Complex64 {
        PI * z / (2.0 * self.omega1)
    }

    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let (z0, n1, n2) = self.reduce(z);
        let (t1, _, _) = theta1(self.v(z0), self.tau);
        let (d1, _) = theta1_zero_derivs(self.tau);
        let base = (2.0 * self.omega1 / PI)
            * (self.eta1 * z0 * z0 / (2.0 * self.omega1)).exp()
            * t1
            / d1;
        if n1 == 0 && n2 == 0 {
            return base;
        }
        // sigma(z + 2 m w1 + 2 n w2) =
        //   (-1)^{m+n+mn} sigma(z) exp((2m eta1 + 2n eta2)(z + m w1 + n w2))
        let eta_shift = self.eta1 * (2 * n1) as f64 + self.eta2 * (2 * n2) as f64;
        let midpoint = z0 + self.omega1 * n1 as f64 + self.omega2 * n2 as f64;
        let sign = if (n1 + n2 + n1 * n2) % 2 == 0 { 1.0 } else { -1.0 };
        base * sign * (eta_shift * midpoint).exp()
    }

    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        let (z0, n1, n2) = self.reduce(z);
        self.check_not_lattice_point(z, z0)?;
        let (t1, t1p, _) = theta1(self.v(z0), self.tau);
        let val = self.eta1 * z0 / self.omega1 + PI / (2.0 * self.omega1) * t1p / t1;
        Ok(val + self.eta1 * (2 * n1) as f64 + self.eta2 * (2 * n2) as f64)
    }

    pub fn p(&self, z: Complex64) -> Result<Complex64> {
        let (z0, _, _) = self.reduce(z);
        self.check_not_lattice_point(z, z0)?;
        let (t1, t1p, t1pp) = theta1(self.v(z0), self.tau);
        let log_second = t1pp / t1 - (t1p / t1) * (t1p / t1);
        let scale = PI / (2.0 * self.omega1);
        Ok(-self.eta1 / self.omega1 - scale * scale * log_second)
    }

    fn check_not_lattice_point(&self, z: Complex64, z0: Complex64) -> Result<()> {
        if z0.norm() < 1e-12 * self.omega1.norm() {
            return Err(Error::LatticePoint(z));
        }
        Ok(())
    }

    /// Legendre relation defect `eta1 omega2 - eta2 omega1 - i pi/2`;
    /// construction self-test.
    pub fn legendre_defect(&self) -> f64 {
        (self.eta1 * self.omega2 - self.eta2 * self.omega1 - Complex64::new(0.0, PI / 2.0)).norm()
    }

    /// Invariants `g2`, `g3` from the Eisenstein series `E4`, `E6` in the
    /// square of the nome (independent of the theta-series evaluation path;
    /// used in self-tests): `g2 = (4 pi^4 / 3) E4(tau) / (2 omega1)^4`,
    /// `g3 = (8 pi^6 / 27) E6(tau) / (2 omega1)^6`.
    pub fn eisenstein_invariants(&self) -> (Complex64, Complex64) {
        let q = (Complex64::i() * 2.0 * PI * self.tau).exp();
        let one = Complex64::new(1.0, 0.0);
        let mut e4 = one;
        let mut e6 = one;
        let mut qn = one;
        for n in 1..400 {
            qn *= q;
            if qn.norm() < 1e-18 {
                break;
            }
            let nf = n as f64;
            let lambert = qn / (one - qn);
            let n3 = nf * nf * nf;
            e4 += 240.0 * n3 * lambert;
            e6 -= 504.0 * n3 * nf * nf * lambert;
        }
        let scale = (self.omega1 * 2.0).powi(-4);
        let g2 = 4.0 * PI.powi(4) / 3.0 * e4 * scale;
        let g3 = 8.0 * PI.powi(6) / 27.0 * e6 * scale * (self.omega1 * 2.0).powi(-2);
        (g2, g3)
    }
}

/// Evaluate `sigma`, `zeta` or `p` on a lattice.
pub fn weierstrass(kind: WeierstrassKind, z: Complex64, lat: &Lattice) -> Result<Complex64> {
    match kind {
        WeierstrassKind::Sigma => Ok(lat.sigma(z)),
        WeierstrassKind::Zeta => lat.zeta(z),
        WeierstrassKind::P => lat.p(z),
    }
}

/// `theta1(v | tau)` and its first two `v`-derivatives.
fn theta1(v: Complex64, tau: Complex64) -> (Complex64, Complex64, Complex64) {
    let iptau = Complex64::i() * PI * tau;
    let mut t = Complex64::new(0.0, 0.0);
    let mut tp = Complex64::new(0.0, 0.0);
    let mut tpp = Complex64::new(0.0, 0.0);
    let mut max_term = 0.0f64;
    for n in 0..THETA_MAX_TERMS {
        let half = n as f64 + 0.5;
        let q_pow = (iptau * half * half).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let odd = 2.0 * n as f64 + 1.0;
        let arg = v * odd;
        let term = q_pow * 2.0 * sign;
        t += term * arg.sin();
        tp += term * odd * arg.cos();
        tpp -= term * odd * odd * arg.sin();
        let mag = term.norm() * (arg.im.abs().exp()) * odd * odd;
        max_term = max_term.max(mag);
        if mag < 1e-17 * max_term && n > 2 {
            break;
        }
    }
    (t, tp, tpp)
}

/// `theta1'(0 | tau)` and `theta1'''(0 | tau)`.
fn theta1_zero_derivs(tau: Complex64) -> (Complex64, Complex64) {
    let iptau = Complex64::i() * PI * tau;
    let mut d1 = Complex64::new(0.0, 0.0);
    let mut d3 = Complex64::new(0.0, 0.0);
    let mut max_term = 0.0f64;
    for n in 0..THETA_MAX_TERMS {
        let half = n as f64 + 0.5;
        let q_pow = (iptau * half * half).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let odd = 2.0 * n as f64 + 1.0;
        let term = q_pow * 2.0 * sign;
        d1 += term * odd;
        d3 -= term * odd * odd * odd;
        let mag = term.norm() * odd * odd * odd;
        max_term = max_term.max(mag);
        if mag < 1e-17 * max_term && n > 2 {
            break;
        }
    }
    (d1, d3)
}

/// Quasi-periodic product `prod_i sigma^{m_i}(z - z_i) e^{Bz}` whose zeros
/// and poles are a doubly-periodic vortex configuration.
#[derive(Clone, Debug)]
pub struct EllipticWave {
    /// `(z_i, m_i)` with the `m_i` integers summing to zero.
    pub zeros: Vec<(Complex64, i64)>,
    /// Exponential coefficient.
    pub b_coeff: Complex64,
    /// Energy of the associated Schroedinger equation, when known.
    pub energy: Option<Complex64>,
    pub lattice: Lattice,
}

impl EllipticWave {
    pub fn new(zeros: Vec<(Complex64, i64)>, b_coeff: Complex64, lattice: Lattice) -> Result<Self> {
        let total: i64 = zeros.iter().map(|&(_, m)| m).sum();
        if total != 0 {
            return Err(Error::NonzeroCirculation(total));
        }
        Ok(Self {
            zeros,
            b_coeff,
            energy: None,
            lattice,
        })
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = (self.b_coeff * z).exp();
        for &(zi, m) in &self.zeros {
            let s = self.lattice.sigma(z - zi);
            acc *= s.powi(m as i32);
        }
        acc
    }

    /// Left sides of the Stieltjes conditions
    /// `sum_{j != i} m_j zeta(z_i - z_j) + B`, for each `i`.
    pub fn stieltjes_residuals(&self) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.zeros.len());
        for (i, &(zi, _)) in self.zeros.iter().enumerate() {
            let mut acc = self.b_coeff;
            for (j, &(zj, mj)) in self.zeros.iter().enumerate() {
                if i != j {
                    acc += self.lattice.zeta(zi - zj)? * mj as f64;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Left sides of the Stieltjes conditions of `wave`; see
/// [`EllipticWave::stieltjes_residuals`]. Doubles as the objective of the
/// parameter solve for multi-zero Hermite waves.
pub fn stieltjes_elliptic_residual(wave: &EllipticWave) -> Result<Vec<Complex64>> {
    wave.stieltjes_residuals()
}

/// Hermite street data: the configuration `z = 0` with circulation `-s` and
/// `z = a_r` with circulation `+1`, plus the wave carrying `B = sum zeta(a_r)`.
pub fn hermite_street(
    a_points: &[Complex64],
    lat: &Lattice,
) -> Result<(crate::streets::VortexConfiguration, EllipticWave)> {
    use crate::streets::{Periodicity, Provenance, Vortex, VortexConfiguration};
    if a_points.is_empty() {
        return Err(Error::InvalidInput("empty list of wave zeros".into()));
    }
    for (i, &ai) in a_points.iter().enumerate() {
        let (z0, _, _) = lat.reduce(ai);
        if z0.norm() < 1e-10 * lat.omega1.norm() {
            return Err(Error::LatticePoint(ai));
        }
        for &aj in &a_points[i + 1..] {
            let (d, _, _) = lat.reduce(ai - aj);
            if d.norm() < 1e-10 * lat.omega1.norm() {
                return Err(Error::CoincidentVortices(ai));
            }
        }
    }
    let s = a_points.len() as i64;
    let mut b = Complex64::new(0.0, 0.0);
    for &a in a_points {
        b += lat.zeta(a)?;
    }
    let mut zeros = vec![(Complex64::new(0.0, 0.0), -s)];
    zeros.extend(a_points.iter().map(|&a| (a, 1i64)));
    let mut wave = EllipticWave::new(zeros.clone(), b, lat.clone())?;
    if a_points.len() == 1 {
        // s = 1 solves the Lame equation with potential 2p(z), E = -p(a)
        wave.energy = Some(-lat.p(a_points[0])?);
    }

    // velocity from the doubly-periodic dynamics constant
    let c = dynamics_constant(&zeros, lat);
    let v = ((c - b) / (Complex64::i() * 2.0 * PI)).conj();

    let mut vortices: Vec<Vortex> = zeros
        .iter()
        .map(|&(z, m)| Vortex {
            position: z,
            circulation: m,
        })
        .collect();
    vortices.sort_by(|p, q| {
        (p.position.re, p.position.im)
            .partial_cmp(&(q.position.re, q.position.im))
            .unwrap()
    });
    let config = VortexConfiguration {
        vortices,
        periodicity: Periodicity::Lattice(lat.clone()),
        velocity: v,
        background_alpha: Complex64::new(0.0, 0.0),
        provenance: Provenance::Hermite {
            a_points: a_points.to_vec(),
        },
    };
    Ok((config, wave))
}

/// `C = a sum Gamma_j z_j + b sum Gamma_j conj(z_j)`.
pub fn dynamics_constant(vortices: &[(Complex64, i64)], lat: &Lattice) -> Complex64 {
    let mut sz = Complex64::new(0.0, 0.0);
    let mut szbar = Complex64::new(0.0, 0.0);
    for &(z, g) in vortices {
        sz += z * g as f64;
        szbar += z.conj() * g as f64;
    }
    lat.a * sz + lat.b * szbar
}

/// Solve the Stieltjes condition for a two-zero Hermite wave: given `a2`,
/// find `a1` with `zeta(a1 - a2) - zeta(a1) + zeta(a2) = 0` by damped Newton
/// from `a1_guess`. (The condition at the second point is the negative of the
/// first, and the one at the pole holds identically.)
pub fn solve_hermite_pair(
    lat: &Lattice,
    a1_guess: Complex64,
    a2: Complex64,
) -> Result<Complex64> {
    let residual = |a1: Complex64| -> Result<Complex64> {
        Ok(lat.zeta(a1 - a2)? - lat.zeta(a1)? + lat.zeta(a2)?)
    };
    let mut a1 = a1_guess;
    for _ in 0..200 {
        let r = residual(a1)?;
        if r.norm() < 1e-13 {
            return Ok(a1);
        }
        // d/da1 = -p(a1 - a2) + p(a1)
        let deriv = -lat.p(a1 - a2)? + lat.p(a1)?;
        if deriv.norm() < 1e-14 {
            return Err(Error::NewtonDiverged(200));
        }
        let mut step = r / deriv;
        // damping: do not jump across a period cell
        let max_step = 0.5 * lat.omega1.norm();
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        a1 -= step;
    }
    Err(Error::NewtonDiverged(200))
}
