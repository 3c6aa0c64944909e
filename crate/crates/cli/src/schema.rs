//! JSON schema for configuration files and conversions to and from the
//! library types. Field order is fixed by the struct definitions, and
//! vortices are sorted by `(Re z, Im z)`, so identical runs serialize to
//! byte-identical documents.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use vortex_streets::elliptic::Lattice;
use vortex_streets::streets::{Periodicity, Provenance, Vortex, VortexConfiguration};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<CJson> for Complex64 {
    fn from(c: CJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VortexJson {
    pub re: f64,
    pub im: f64,
    pub gamma: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PeriodicityJson {
    Strip,
    Lattice { omega1: CJson, omega2: CJson },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProvenanceJson {
    Street {
        k: Vec<i64>,
        phi: Vec<CJson>,
        kappa: CJson,
    },
    Critical {
        k: Vec<i64>,
        phi: Vec<CJson>,
        j: usize,
    },
    Collinear {
        n: i64,
        m: i64,
        l: i64,
    },
    WhittakerHill {
        alpha: CJson,
        s: i64,
        numerator_indices: Vec<usize>,
        denominator_indices: Vec<usize>,
    },
    Hermite {
        a_points: Vec<CJson>,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TolerancesJson {
    /// Root-finding tolerance the configuration was built with, when a
    /// root-finding stage was involved.
    pub root: Option<f64>,
    /// Residual gate applied when deciding the exit code.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigJson {
    pub periodicity: PeriodicityJson,
    pub vortices: Vec<VortexJson>,
    pub velocity: CJson,
    pub alpha: CJson,
    pub residuals: Vec<CJson>,
    pub provenance: ProvenanceJson,
    pub tolerances: TolerancesJson,
}

impl ConfigJson {
    pub fn from_config(
        config: &VortexConfiguration,
        residuals: &[Complex64],
        tolerances: TolerancesJson,
    ) -> Self {
        let periodicity = match &config.periodicity {
            Periodicity::Strip => PeriodicityJson::Strip,
            Periodicity::Lattice(lat) => PeriodicityJson::Lattice {
                omega1: lat.omega1.into(),
                omega2: lat.omega2.into(),
            },
        };
        let mut order: Vec<usize> = (0..config.vortices.len()).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (config.vortices[a].position, config.vortices[b].position);
            (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap()
        });
        let vortices = order
            .iter()
            .map(|&i| VortexJson {
                re: config.vortices[i].position.re,
                im: config.vortices[i].position.im,
                gamma: config.vortices[i].circulation,
            })
            .collect();
        let residuals = order
            .iter()
            .map(|&i| {
                residuals
                    .get(i)
                    .copied()
                    .unwrap_or(Complex64::new(0.0, 0.0))
                    .into()
            })
            .collect();
        let provenance = match &config.provenance {
            Provenance::Street { k, phi, kappa } => ProvenanceJson::Street {
                k: k.clone(),
                phi: phi.iter().map(|&p| p.into()).collect(),
                kappa: (*kappa).into(),
            },
            Provenance::Critical { k, phi, j } => ProvenanceJson::Critical {
                k: k.clone(),
                phi: phi.iter().map(|&p| p.into()).collect(),
                j: *j,
            },
            Provenance::Collinear { n, m, l } => ProvenanceJson::Collinear {
                n: *n,
                m: *m,
                l: *l,
            },
            Provenance::WhittakerHill {
                alpha,
                s,
                numerator_indices,
                denominator_indices,
            } => ProvenanceJson::WhittakerHill {
                alpha: (*alpha).into(),
                s: *s,
                numerator_indices: numerator_indices.clone(),
                denominator_indices: denominator_indices.clone(),
            },
            Provenance::Hermite { a_points } => ProvenanceJson::Hermite {
                a_points: a_points.iter().map(|&a| a.into()).collect(),
            },
        };
        Self {
            periodicity,
            vortices,
            velocity: config.velocity.into(),
            alpha: config.background_alpha.into(),
            residuals,
            provenance,
            tolerances,
        }
    }

    /// Rebuild the library configuration (and the lattice, when doubly
    /// periodic) from a parsed document.
    pub fn to_config(&self) -> vortex_streets::Result<(VortexConfiguration, Option<Lattice>)> {
        let (periodicity, lattice) = match &self.periodicity {
            PeriodicityJson::Strip => (Periodicity::Strip, None),
            PeriodicityJson::Lattice { omega1, omega2 } => {
                let lat = Lattice::new((*omega1).into(), (*omega2).into())?;
                (Periodicity::Lattice(lat.clone()), Some(lat))
            }
        };
        let provenance = match &self.provenance {
            ProvenanceJson::Street { k, phi, kappa } => Provenance::Street {
                k: k.clone(),
                phi: phi.iter().map(|&p| p.into()).collect(),
                kappa: (*kappa).into(),
            },
            ProvenanceJson::Critical { k, phi, j } => Provenance::Critical {
                k: k.clone(),
                phi: phi.iter().map(|&p| p.into()).collect(),
                j: *j,
            },
            ProvenanceJson::Collinear { n, m, l } => Provenance::Collinear {
                n: *n,
                m: *m,
                l: *l,
            },
            ProvenanceJson::WhittakerHill {
                alpha,
                s,
                numerator_indices,
                denominator_indices,
            } => Provenance::WhittakerHill {
                alpha: (*alpha).into(),
                s: *s,
                numerator_indices: numerator_indices.clone(),
                denominator_indices: denominator_indices.clone(),
            },
            ProvenanceJson::Hermite { a_points } => Provenance::Hermite {
                a_points: a_points.iter().map(|&a| a.into()).collect(),
            },
        };
        let config = VortexConfiguration {
            vortices: self
                .vortices
                .iter()
                .map(|v| Vortex {
                    position: Complex64::new(v.re, v.im),
                    circulation: v.gamma,
                })
                .collect(),
            periodicity,
            velocity: self.velocity.into(),
            background_alpha: self.alpha.into(),
            provenance,
        };
        Ok((config, lattice))
    }
}
