//! Asymptotic street-shape curves for two-wavenumber configurations and an
//! adherence measure comparing computed vortices against them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::streets::VortexConfiguration;

/// One abscissa of an asymptotic curve with its two branch ordinates.
#[derive(Clone, Copy, Debug)]
pub struct CurveSample {
    pub x: f64,
    pub y_plus: f64,
    pub y_minus: f64,
}

/// Which curve family to compare against in [`curve_adherence`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveKind {
    Equilibrium,
    Moving { kappa: f64 },
}

fn check_orders(m: i64, n: i64) -> Result<()> {
    if !(n > m && m >= 1) {
        return Err(Error::InvalidInput(format!(
            "curve formulas require n > m >= 1, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// Predicted distance from the real axis for the fixed street built from
/// wavenumbers `(m, n)`:
/// `|y| = (log|sin((n-m)x)| + log(2(m+n)/(n-m))) / (m+n)`.
/// Negative values (the curve dipping through the axis near the zeros of the
/// sine) are returned as-is with the flag set.
pub fn equilibrium_curve(m: i64, n: i64, x: f64) -> Result<(f64, bool)> {
    check_orders(m, n)?;
    let s = (((n - m) as f64) * x).sin().abs();
    if s < 1e-14 {
        return Err(Error::AtSingularity(Complex64::new(x, 0.0)));
    }
    let total = (m + n) as f64;
    let y = (s.ln() + (2.0 * total / (n - m) as f64).ln()) / total;
    Ok((y, y < 0.0))
}

/// Predicted branches for the moving street with wavenumbers `(m, n)` and
/// real spectral parameter `kappa`: a common vertical shift from the first
/// logarithm plus/minus a half-width containing the regularizing
/// `kappa^2 (n-m)^2 / ((kappa^2-n^2)(kappa^2-m^2))` term.
pub fn moving_curve(m: i64, n: i64, kappa: f64, x: f64) -> Result<(f64, f64)> {
    check_orders(m, n)?;
    let (mf, nf) = (m as f64, n as f64);
    for critical in [mf, nf] {
        if (kappa.abs() - critical).abs() < 1e-8 {
            return Err(Error::NearCritical {
                kappa: Complex64::new(kappa, 0.0),
                critical,
                dist: (kappa.abs() - critical).abs(),
            });
        }
    }
    let total = nf + mf;
    let shift = (((kappa - nf) / (kappa + nf)) * ((kappa - mf) / (kappa + mf)))
        .abs()
        .ln()
        / (2.0 * total);
    let s = ((nf - mf) * x).sin();
    let k2 = kappa * kappa;
    let inner = s * s + k2 * (nf - mf) * (nf - mf) / ((k2 - nf * nf) * (k2 - mf * mf));
    if inner <= 0.0 {
        return Err(Error::AtSingularity(Complex64::new(x, 0.0)));
    }
    let half = (2.0 * (2.0 * total / (nf - mf)).ln() + inner.ln()) / (2.0 * total);
    Ok((shift + half, shift - half))
}

/// Maximum over the off-axis positive vortices of the distance between
/// `Im z_j` and the curve branch selected by the sign of `Im z_j`, evaluated
/// at `Re z_j`. The curves describe the positive street: the interlaced
/// negative vortices sit on the real axis for the fixed case and drift
/// between the branches for the moving one, so they are excluded.
pub fn curve_adherence(
    config: &VortexConfiguration,
    curve: CurveKind,
    m: i64,
    n: i64,
) -> Result<f64> {
    check_orders(m, n)?;
    let mut worst: f64 = 0.0;
    for v in &config.vortices {
        let y = v.position.im;
        if y.abs() <= 1e-6 || v.circulation <= 0 {
            continue;
        }
        let predicted = match curve {
            CurveKind::Equilibrium => {
                let (val, _) = equilibrium_curve(m, n, v.position.re)?;
                if y > 0.0 {
                    val
                } else {
                    -val
                }
            }
            CurveKind::Moving { kappa } => {
                let (plus, minus) = moving_curve(m, n, kappa, v.position.re)?;
                if y > 0.0 {
                    plus
                } else {
                    minus
                }
            }
        };
        worst = worst.max((y - predicted).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streets::build_street;
    use crate::trigpoly::StreetSpec;
    use std::f64::consts::PI;

    fn street(m: i64, n: i64, kappa: f64) -> VortexConfiguration {
        let spec = StreetSpec::new(
            vec![m, n],
            vec![Complex64::new(0.0, 0.0); 2],
            Complex64::new(kappa, 0.0),
        )
        .unwrap();
        build_street(&spec, 1e-9).unwrap().0
    }

    #[test]
    fn equilibrium_curve_closed_form_point() {
        // (m,n) = (10,12), x = pi/4: sin 2x = 1, |y| = log(22)/22
        let (y, dipped) = equilibrium_curve(10, 12, PI / 4.0).unwrap();
        assert!((y - 22f64.ln() / 22.0).abs() < 1e-15);
        assert!(!dipped);
    }

    #[test]
    fn equilibrium_curve_periodicity_and_maximum() {
        let period = PI / 2.0; // pi/(n-m) for (10,12)
        for x in [0.31, 0.77, 1.01] {
            let (a, _) = equilibrium_curve(10, 12, x).unwrap();
            let (b, _) = equilibrium_curve(10, 12, x + period).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
        let maximum = 22.0f64.ln() / 22.0;
        let mut seen: f64 = f64::MIN;
        for i in 1..200 {
            let x = PI * i as f64 / 200.0;
            if let Ok((y, _)) = equilibrium_curve(10, 12, x) {
                seen = seen.max(y);
                assert!(y <= maximum + 1e-13);
            }
        }
        assert!((seen - maximum).abs() < 1e-4);
    }

    #[test]
    fn equilibrium_curve_rejects_log_singularity() {
        assert!(matches!(
            equilibrium_curve(10, 12, PI / 2.0),
            Err(Error::AtSingularity(_))
        ));
    }

    #[test]
    fn moving_curve_degenerates_at_zero_kappa() {
        for x in [0.2, 0.6, 1.1, 2.3] {
            let (plus, minus) = moving_curve(10, 12, 0.0, x).unwrap();
            let (eq, _) = equilibrium_curve(10, 12, x).unwrap();
            assert!((plus - eq).abs() < 1e-14, "{plus} vs {eq}");
            assert!((minus + eq).abs() < 1e-14);
        }
    }

    #[test]
    fn moving_curve_branch_separation_is_shift_free() {
        for kappa in [0.5, 3.0, 10.0] {
            let (p1, m1) = moving_curve(7, 8, kappa, 0.3).unwrap();
            // the separation depends only on the inner logarithm, which is
            // even in kappa, while the shift is not
            let (p2, m2) = moving_curve(7, 8, -kappa, 0.3).unwrap();
            assert!(((p1 - m1) - (p2 - m2)).abs() < 1e-13);
        }
    }

    #[test]
    fn moving_curve_rejects_critical_kappa() {
        assert!(matches!(
            moving_curve(7, 8, 8.0, 0.3),
            Err(Error::NearCritical { .. })
        ));
        assert!(matches!(
            moving_curve(7, 8, -7.0, 0.3),
            Err(Error::NearCritical { .. })
        ));
    }

    #[test]
    fn adherence_fixed_street_10_12() {
        let config = street(10, 12, 0.0);
        let adherence = curve_adherence(&config, CurveKind::Equilibrium, 10, 12).unwrap();
        assert!(
            adherence <= 0.5 / 22.0,
            "adherence {adherence:.4} exceeds 0.5/(m+n)"
        );
    }

    #[test]
    fn adherence_improves_with_order() {
        let a_small = curve_adherence(
            &street(10, 12, 0.0),
            CurveKind::Equilibrium,
            10,
            12,
        )
        .unwrap();
        let a_large = curve_adherence(
            &street(20, 22, 0.0),
            CurveKind::Equilibrium,
            20,
            22,
        )
        .unwrap();
        assert!(
            a_large < a_small,
            "adherence did not improve: {a_large:.5} vs {a_small:.5}"
        );
    }

    #[test]
    fn adherence_moving_street_7_8() {
        let config = street(7, 8, 4.0);
        let adherence =
            curve_adherence(&config, CurveKind::Moving { kappa: 4.0 }, 7, 8).unwrap();
        assert!(adherence <= 1.0 / 15.0, "adherence {adherence:.4}");
    }

    #[test]
    fn adherence_monotone_along_family() {
        let mut previous = f64::INFINITY;
        for m in [6i64, 10, 14, 18] {
            let config = street(m, m + 2, 0.0);
            let a = curve_adherence(&config, CurveKind::Equilibrium, m, m + 2).unwrap();
            assert!(
                a <= previous + 1e-12,
                "adherence increased at m = {m}: {a:.5} after {previous:.5}"
            );
            previous = a;
        }
    }
}
