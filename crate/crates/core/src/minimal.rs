//! Closed-form specific heats for a system coupled to a *single* bath
//! oscillator: a free particle (mass `M`) or a harmonic oscillator
//! (frequency `Omega`) bilinearly coupled to one environmental mode
//! (mass `m`, frequency `omega`).
//!
//! The coupled quadratic form diagonalizes exactly, so the specific-heat
//! difference `C = C_{S+B} - C_B` is a sum of single-oscillator terms
//! [`boson_heat`]. For the free particle the coupling shifts the bath
//! frequency to `omega_bar = sqrt(1 + m/M) * omega`; the resulting
//! temperature shift between `C_{S+B}` and `C_B` opens a window where
//! `C < 0` once the mass ratio exceeds a threshold slightly above 4,
//! located here by nested minimization/bisection.
//!
//! Frequencies are in units of the bath frequency's reference scale;
//! temperatures are `theta = k_B T / (hbar omega_ref)`.

use crate::specfun::boson_heat;
use crate::{Error, HeatCurvePoint, Result};

/// Parameters of the one-bath-oscillator toy models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalModelParams {
    /// Mass ratio `r = m/M >= 0` of bath mass to system mass
    /// (`r = 0` decouples the bath exactly).
    pub mass_ratio: f64,
    /// Bath oscillator frequency `omega > 0`.
    pub bath_freq: f64,
    /// System frequency `Omega >= 0`; `Omega = 0` selects the free
    /// particle.
    pub system_freq: f64,
}

impl MinimalModelParams {
    /// Validates and builds a parameter set.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidInput`] unless `mass_ratio >= 0`, `bath_freq > 0`
    /// and `system_freq >= 0` (all finite).
    pub fn new(mass_ratio: f64, bath_freq: f64, system_freq: f64) -> Result<Self> {
        if !(mass_ratio.is_finite() && mass_ratio >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "mass_ratio must be finite and >= 0, got {mass_ratio}"
            )));
        }
        if !(bath_freq.is_finite() && bath_freq > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bath_freq must be finite and > 0, got {bath_freq}"
            )));
        }
        if !(system_freq.is_finite() && system_freq >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "system_freq must be finite and >= 0, got {system_freq}"
            )));
        }
        Ok(Self {
            mass_ratio,
            bath_freq,
            system_freq,
        })
    }

    /// Free-particle variant (`Omega = 0`).
    pub fn free(mass_ratio: f64, bath_freq: f64) -> Result<Self> {
        Self::new(mass_ratio, bath_freq, 0.0)
    }

    /// Oscillator variant (`Omega > 0`).
    pub fn oscillator(mass_ratio: f64, bath_freq: f64, system_freq: f64) -> Result<Self> {
        if !(system_freq > 0.0) {
            return Err(Error::InvalidInput(format!(
                "oscillator variant needs system_freq > 0, got {system_freq}"
            )));
        }
        Self::new(mass_ratio, bath_freq, system_freq)
    }

    fn require_free(&self, op: &str) -> Result<()> {
        if self.system_freq == 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{op} applies to the free-particle model only (system_freq = 0), \
                 got system_freq = {}",
                self.system_freq
            )))
        }
    }

    fn require_oscillator(&self, op: &str) -> Result<()> {
        if self.system_freq > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{op} applies to the oscillator model only (system_freq > 0)"
            )))
        }
    }
}

fn require_positive_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "theta must be finite and > 0, got {theta}"
        )))
    }
}

/// Shifted bath frequency of the free-particle model,
/// `omega_bar = sqrt(1 + r) * omega`: coupling to the mobile mass
/// stiffens the bath oscillator.
///
/// # Errors
///
/// [`Error::InvalidInput`] if the parameters are not the free-particle
/// variant.
pub fn coupled_frequency_free(params: &MinimalModelParams) -> Result<f64> {
    params.require_free("coupled_frequency_free")?;
    Ok((1.0 + params.mass_ratio).sqrt() * params.bath_freq)
}

/// Specific heat of the free-particle minimal model,
/// `C/k_B = 1/2 + g(omega_bar/2 theta) - g(omega/2 theta)`.
///
/// `c_coupled` carries the first two terms (free particle plus shifted
/// oscillator), `c_bath` the bare bath oscillator; both are individually
/// non-negative and `c_total` is their exact difference. As
/// `theta -> 0` both `g` terms vanish and `c_total -> 1/2` (the
/// negative-value window of large mass ratios closes again at low
/// temperature because the single bath mode freezes out).
pub fn specific_heat_free_minimal(
    params: &MinimalModelParams,
    theta: f64,
) -> Result<HeatCurvePoint> {
    params.require_free("specific_heat_free_minimal")?;
    require_positive_theta(theta)?;
    let omega_bar = (1.0 + params.mass_ratio).sqrt() * params.bath_freq;
    let c_coupled = 0.5 + boson_heat(omega_bar / (2.0 * theta));
    let c_bath = boson_heat(params.bath_freq / (2.0 * theta));
    Ok(HeatCurvePoint::from_parts(theta, c_coupled, c_bath))
}

/// Normal-mode frequencies `(omega_plus, omega_minus)` of the coupled
/// oscillator pair, `omega_plus >= omega_minus > 0`.
///
/// With `S = (1 + r) omega^2 + Omega^2` the upper frequency is
/// `omega_plus^2 = S/2 + sqrt(S^2/4 - omega^2 Omega^2)`; the lower one
/// is recovered from the determinant identity
/// `omega_minus = omega * Omega / omega_plus`, which avoids the
/// catastrophic cancellation of the textbook `S/2 - sqrt(...)` form at
/// large mass ratios and preserves the product rule
/// `omega_plus * omega_minus = omega * Omega` to round-off.
///
/// The spectrum interlaces the bare frequencies:
/// `omega_minus <= min(omega, Omega) <= max(omega, Omega) <= omega_plus`.
///
/// # Errors
///
/// [`Error::InvalidInput`] if the parameters are not the oscillator
/// variant.
pub fn normal_modes_osc(params: &MinimalModelParams) -> Result<(f64, f64)> {
    params.require_oscillator("normal_modes_osc")?;
    let r = params.mass_ratio;
    let omega = params.bath_freq;
    let omega0 = params.system_freq;
    let half_s = 0.5 * ((1.0 + r) * omega * omega + omega0 * omega0);
    let prod = omega * omega0;
    let disc = (half_s * half_s - prod * prod).max(0.0);
    let omega_plus = (half_s + disc.sqrt()).sqrt();
    let omega_minus = prod / omega_plus;
    Ok((omega_plus, omega_minus))
}

/// Specific heat of the oscillator minimal model,
/// `C/k_B = g(omega_plus/2 theta) + g(omega_minus/2 theta)
///        - g(omega/2 theta)`.
///
/// Always non-negative (the two-mode spectrum dominates the single bath
/// mode at every temperature), but it passes through a dip below the
/// high-temperature plateau of 1 for strong coupling.
pub fn specific_heat_osc_minimal(
    params: &MinimalModelParams,
    theta: f64,
) -> Result<HeatCurvePoint> {
    require_positive_theta(theta)?;
    let (omega_plus, omega_minus) = normal_modes_osc(params)?;
    let c_coupled =
        boson_heat(omega_plus / (2.0 * theta)) + boson_heat(omega_minus / (2.0 * theta));
    let c_bath = boson_heat(params.bath_freq / (2.0 * theta));
    Ok(HeatCurvePoint::from_parts(theta, c_coupled, c_bath))
}

/// Inverse golden ratio `(sqrt 5 - 1)/2`, the section factor.
const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Free-model `c_total` with `omega = 1` (the curve depends on
/// `omega/theta` only, so the bath frequency can be scaled out).
fn free_c_total(mass_ratio: f64, theta: f64) -> f64 {
    let omega_bar = (1.0 + mass_ratio).sqrt();
    0.5 + boson_heat(omega_bar / (2.0 * theta)) - boson_heat(1.0 / (2.0 * theta))
}

/// Location and value of the interior minimum of the free-particle
/// specific-heat curve over `theta` in `[1e-3, 1e2]` (units of the bath
/// frequency): returns `(theta_at_min, c_min)`.
///
/// Golden-section search on `ln theta` — the curve has a single smooth
/// interior minimum there — followed by one parabolic refinement step.
///
/// # Panics
///
/// Panics if `mass_ratio` is negative or not finite.
pub fn free_curve_minimum(mass_ratio: f64) -> (f64, f64) {
    assert!(
        mass_ratio.is_finite() && mass_ratio >= 0.0,
        "free_curve_minimum: mass_ratio must be finite and >= 0"
    );
    let f = |u: f64| free_c_total(mass_ratio, u.exp());
    let (mut a, mut b) = ((1e-3f64).ln(), (1e2f64).ln());
    let mut x1 = b - INV_GOLDEN * (b - a);
    let mut x2 = a + INV_GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    // Parabola through the surviving bracket triple; kept only if the
    // vertex formula is well conditioned (near the round-off floor the
    // differences vanish and the golden-section midpoint stands).
    let (p0, p1, p2, g0, g1, g2) = if f1 <= f2 {
        (a, x1, x2, f(a), f1, f2)
    } else {
        (x1, x2, b, f1, f2, f(b))
    };
    let num = (p1 - p0).powi(2) * (g1 - g2) - (p1 - p2).powi(2) * (g1 - g0);
    let den = (p1 - p0) * (g1 - g2) - (p1 - p2) * (g1 - g0);
    let mut u = p1;
    if den != 0.0 {
        let vertex = p1 - 0.5 * num / den;
        if vertex > p0 && vertex < p2 && f(vertex) <= g1 {
            u = vertex;
        }
    }
    (u.exp(), f(u))
}

/// The mass ratio `r*` at which the minimum over temperature of the
/// free-particle specific heat changes sign: `c_min > 0` for `r < r*`
/// and `c_min < 0` for `r > r*`. Located by bisection on `[4, 5]` to an
/// absolute tolerance well below 1e-6.
pub fn free_threshold_mass_ratio() -> f64 {
    let (mut lo, mut hi) = (4.0, 5.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if free_curve_minimum(mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Reference values frozen from an independent arbitrary-precision
    // evaluation of the closed forms (40 significant digits).

    #[test]
    fn params_validation() {
        assert!(MinimalModelParams::new(-0.1, 1.0, 0.0).is_err());
        assert!(MinimalModelParams::new(1.0, 0.0, 0.0).is_err());
        assert!(MinimalModelParams::new(1.0, 1.0, -1.0).is_err());
        assert!(MinimalModelParams::new(0.0, 1.0, 0.0).is_ok());
        assert!(MinimalModelParams::oscillator(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn coupled_frequency_examples() {
        let decoupled = MinimalModelParams::free(0.0, 1.0).unwrap();
        assert_eq!(coupled_frequency_free(&decoupled).unwrap(), 1.0);

        let heavy = MinimalModelParams::free(10.0, 1.0).unwrap();
        assert_relative_eq!(
            coupled_frequency_free(&heavy).unwrap(),
            3.316624790355399849,
            max_relative = 1e-14
        );

        let scaled = MinimalModelParams::free(3.0, 2.0).unwrap();
        assert_eq!(coupled_frequency_free(&scaled).unwrap(), 4.0);

        let osc = MinimalModelParams::oscillator(1.0, 1.0, 1.0).unwrap();
        assert!(coupled_frequency_free(&osc).is_err());
    }

    #[test]
    fn free_specific_heat_limits_and_spot_values() {
        let params = MinimalModelParams::free(10.0, 1.0).unwrap();

        // Both g terms saturate at high temperature: c -> 1/2.
        let hot = specific_heat_free_minimal(&params, 1e4).unwrap();
        assert_abs_diff_eq!(hot.c_total, 0.5, epsilon = 1e-6);

        // Both g terms vanish at low temperature: c -> 1/2 again (the
        // single-mode bath freezes out, closing the anomaly window).
        let cold = specific_heat_free_minimal(&params, 1e-3).unwrap();
        assert_abs_diff_eq!(cold.c_total, 0.5, epsilon = 1e-6);

        let p_quarter = specific_heat_free_minimal(&params, 0.25).unwrap();
        assert_relative_eq!(
            p_quarter.c_total,
            0.196217432807274147,
            max_relative = 1e-12
        );
        let p_one = specific_heat_free_minimal(&params, 1.0).unwrap();
        assert_relative_eq!(p_one.c_total, 8.956450919180302e-3, max_relative = 1e-11);
        let p_band_edge = specific_heat_free_minimal(&params, 0.05).unwrap();
        assert_relative_eq!(
            p_band_edge.c_total,
            0.499999175538547626,
            max_relative = 1e-12
        );

        // Difference structure is exact by construction.
        assert_eq!(
            p_one.c_total,
            p_one.c_coupled.unwrap() - p_one.c_bath.unwrap()
        );
        assert!(p_one.c_coupled.unwrap() >= 0.0 && p_one.c_bath.unwrap() >= 0.0);
    }

    #[test]
    fn free_curve_goes_negative_at_mass_ratio_ten() {
        let (theta_min, c_min) = free_curve_minimum(10.0);
        assert_abs_diff_eq!(theta_min, 0.566267496431561, epsilon = 1e-6);
        assert_abs_diff_eq!(c_min, -0.177455264838891, epsilon = 1e-9);
        // The curve value at the located minimum agrees.
        let params = MinimalModelParams::free(10.0, 1.0).unwrap();
        let at_min = specific_heat_free_minimal(&params, theta_min).unwrap();
        assert!(at_min.c_total < 0.0);
    }

    #[test]
    fn normal_modes_reference_and_limits() {
        let params = MinimalModelParams::oscillator(10.0, 1.0, 1.0).unwrap();
        let (wp, wm) = normal_modes_osc(&params).unwrap();
        assert_relative_eq!(wp, 3.451967523471160359, max_relative = 1e-12);
        assert_relative_eq!(wm, 0.289689863302781027, max_relative = 1e-12);
        assert_relative_eq!(wp * wm, 1.0, max_relative = 1e-13);

        // Decoupling: the pair degenerates to the bare frequencies.
        let weak = MinimalModelParams::oscillator(1e-12, 2.0, 1.0).unwrap();
        let (wp, wm) = normal_modes_osc(&weak).unwrap();
        assert_abs_diff_eq!(wp, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(wm, 1.0, epsilon = 1e-6);

        // Heavy bath: omega_minus ~ 1/sqrt(r), omega_plus ~ sqrt(r).
        let heavy = MinimalModelParams::oscillator(1e4, 1.0, 1.0).unwrap();
        let (wp, wm) = normal_modes_osc(&heavy).unwrap();
        assert_relative_eq!(wm, 0.01, max_relative = 1e-2);
        assert_relative_eq!(wp, 100.0, max_relative = 1e-2);

        let free = MinimalModelParams::free(1.0, 1.0).unwrap();
        assert!(normal_modes_osc(&free).is_err());
    }

    #[test]
    fn oscillator_specific_heat_limits_and_spot_values() {
        let params = MinimalModelParams::oscillator(10.0, 1.0, 1.0).unwrap();

        let hot = specific_heat_osc_minimal(&params, 1e4).unwrap();
        assert_abs_diff_eq!(hot.c_total, 1.0, epsilon = 1e-6);

        let cold = specific_heat_osc_minimal(&params, 1e-4).unwrap();
        assert_abs_diff_eq!(cold.c_total, 0.0, epsilon = 1e-12);

        let p_quarter = specific_heat_osc_minimal(&params, 0.25).unwrap();
        assert_relative_eq!(
            p_quarter.c_total,
            0.591341045706699673,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p_quarter.c_coupled.unwrap(),
            0.895428365058984070,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p_quarter.c_bath.unwrap(),
            0.304087319352284397,
            max_relative = 1e-12
        );
        let p_one = specific_heat_osc_minimal(&params, 1.0).unwrap();
        assert_relative_eq!(p_one.c_total, 0.475012627294494386, max_relative = 1e-12);
    }

    #[test]
    fn oscillator_curve_has_an_interior_dip() {
        let params = MinimalModelParams::oscillator(10.0, 1.0, 1.0).unwrap();
        // Scan a log grid and locate a strict interior local minimum.
        let n = 400;
        let (lo, hi) = (1e-2f64.ln(), 1e2f64.ln());
        let c: Vec<f64> = (0..n)
            .map(|i| {
                let theta = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
                specific_heat_osc_minimal(&params, theta).unwrap().c_total
            })
            .collect();
        let dip = (1..n - 1).find(|&i| c[i] < c[i - 1] && c[i] < c[i + 1]);
        let dip = dip.expect("no interior dip found");
        assert!(c[dip] > 0.0 && c[dip] < 1.0);
        // Reference dip coordinates.
        assert!(c[dip] < 0.2865 && c[dip] > 0.2863);
    }

    #[test]
    fn threshold_mass_ratio_bracket_and_value() {
        let (_, c4) = free_curve_minimum(4.0);
        assert_abs_diff_eq!(c4, 7.8248213978334e-4, epsilon = 1e-9);
        assert!(c4 > 0.0);

        let (_, c45) = free_curve_minimum(4.5);
        assert_abs_diff_eq!(c45, -0.0236016464729507, epsilon = 1e-9);

        let (_, c5) = free_curve_minimum(5.0);
        assert_abs_diff_eq!(c5, -0.0451946817421222, epsilon = 1e-9);

        let r_star = free_threshold_mass_ratio();
        assert!(r_star > 4.0 && r_star < 5.0);
        // Regression value from the arbitrary-precision reference.
        assert_abs_diff_eq!(r_star, 4.015089017034215, epsilon = 1e-6);
    }

    #[test]
    fn threshold_location_theta() {
        let (theta4, _) = free_curve_minimum(4.0);
        assert_abs_diff_eq!(theta4, 0.444883332045495, epsilon = 1e-6);
    }
}
