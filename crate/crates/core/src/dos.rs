//! Densities of states behind the partition functions: exact delta
//! combs and branch expansions for the minimal models, and a numerical
//! inverse Laplace transform (Bromwich contour + FFT) for the Drude
//! oscillator.
//!
//! The common thread is that `Z(beta)`, analytically continued to
//! complex `beta`, is the Laplace transform of an effective density of
//! states `rho(E)`. For discrete spectra `rho` is a signed comb: the
//! bath-normalized partition function is a *ratio* of partition
//! functions, so its expansion carries both `+1` weights (coupled
//! levels) and `-1` weights (bath levels the normalization removes).
//! The continuum Drude bath smears the comb into a genuine function,
//! recovered here by integrating `Z(sigma + i tau) e^{beta E}` along a
//! vertical contour.

use num_complex::Complex64;

use crate::drude::{characteristic_roots, DrudeParams};
use crate::minimal::{coupled_frequency_free, normal_modes_osc, MinimalModelParams};
use crate::specfun::log_gamma;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// One line of a signed delta comb: a `weight`-fold degenerate level at
/// `energy`. Weights are exact integers; merging never loses counts to
/// rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombEntry {
    pub energy: f64,
    pub weight: i64,
}

/// A signed sum of delta functions, sorted by energy with coincident
/// entries (within `1e-9`) merged and exact cancellations dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaComb {
    pub entries: Vec<CombEntry>,
}

impl DeltaComb {
    /// Energy tolerance below which two analytically distinct levels
    /// are treated as one line.
    pub const MERGE_TOL: f64 = 1e-9;

    /// Sorts, merges coincident energies and drops zero weights. The
    /// representative energy of a merged group is its smallest member
    /// (the members agree to [`Self::MERGE_TOL`] anyway).
    fn from_raw(mut raw: Vec<CombEntry>) -> Self {
        raw.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
        let mut entries: Vec<CombEntry> = Vec::with_capacity(raw.len());
        for e in raw {
            match entries.last_mut() {
                Some(last) if e.energy - last.energy <= Self::MERGE_TOL => {
                    last.weight += e.weight;
                    if last.weight == 0 {
                        entries.pop();
                    }
                }
                _ => entries.push(e),
            }
        }
        Self { entries }
    }

    /// Partial Laplace sum `sum_k w_k exp(-beta E_k)` over all stored
    /// lines. With a comb truncated at `E_max` this approximates the
    /// full partition function with error of order `exp(-beta E_max)`.
    pub fn laplace_sum(&self, beta: f64) -> f64 {
        // Summing from the high-energy end accumulates the small terms
        // first.
        self.entries
            .iter()
            .rev()
            .map(|e| e.weight as f64 * (-beta * e.energy).exp())
            .sum()
    }
}

/// A density of states sampled on a uniform energy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DosCurve {
    /// Uniform, strictly increasing energy grid.
    pub energies: Vec<f64>,
    /// `rho(E)` at the grid points (real part after the residual
    /// imaginary part has been checked).
    pub values: Vec<f64>,
    /// Contour abscissa that produced the curve; `0.0` for analytic
    /// curves.
    pub sigma: f64,
    /// Ground-state energy whose delta line has been split off from the
    /// smooth part.
    pub ground_energy: f64,
}

fn check_uniform_grid(grid: &[f64]) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::InvalidInput(
            "energy grid needs at least two points".into(),
        ));
    }
    let step = grid[1] - grid[0];
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidInput(format!(
            "energy grid must be strictly increasing, first step {step}"
        )));
    }
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step {
            return Err(Error::InvalidInput(
                "energy grid must be uniform".into(),
            ));
        }
    }
    Ok(step)
}

/// Exact signed delta comb of the single-mode oscillator model, truncated
/// at `e_max`.
///
/// The normalized partition function `Z = 2 sinh(beta omega / 2) /
/// [4 sinh(beta omega_plus / 2) sinh(beta omega_minus / 2)]` expands
/// into `+1` lines at `E(n_plus, n_minus) - omega/2` and `-1` lines at
/// `E(n_plus, n_minus) + omega/2` with
/// `E = omega_plus (n_plus + 1/2) + omega_minus (n_minus + 1/2)`:
/// every coupled two-mode level appears twice, once shifted down and
/// once up by half a bath quantum. The lowest line sits at
/// `(omega_plus + omega_minus - omega)/2` with weight `+1`; higher up,
/// down-shifted and up-shifted families collide and partially cancel,
/// and genuinely negative net weights survive whenever the coupling is
/// strong enough to reorder the families.
///
/// # Errors
///
/// [`Error::InvalidInput`] unless the parameters describe an oscillator
/// and `e_max` lies above the lowest line.
pub fn delta_comb_osc_minimal(params: &MinimalModelParams, e_max: f64) -> Result<DeltaComb> {
    let (w_plus, w_minus) = normal_modes_osc(params)?;
    let w = params.bath_freq;
    let ground = 0.5 * (w_plus + w_minus - w);
    if !(e_max.is_finite() && e_max > ground) {
        return Err(Error::InvalidInput(format!(
            "e_max = {e_max} must exceed the lowest line at {ground}"
        )));
    }
    let mut raw = Vec::new();
    let mut n_plus = 0u64;
    loop {
        let base_plus = w_plus * (n_plus as f64 + 0.5) + 0.5 * w_minus;
        // Even the down-shifted branch of this n_plus family starts
        // above the cutoff: all later families do too.
        if base_plus - 0.5 * w > e_max {
            break;
        }
        let mut n_minus = 0u64;
        loop {
            let e = w_plus * (n_plus as f64 + 0.5) + w_minus * (n_minus as f64 + 0.5);
            let down = e - 0.5 * w;
            if down > e_max {
                break;
            }
            raw.push(CombEntry {
                energy: down,
                weight: 1,
            });
            let up = e + 0.5 * w;
            if up <= e_max {
                raw.push(CombEntry {
                    energy: up,
                    weight: -1,
                });
            }
            n_minus += 1;
        }
        n_plus += 1;
    }
    Ok(DeltaComb::from_raw(raw))
}

/// Analytic density of states of the single-mode free-particle model on
/// a uniform energy grid.
///
/// The normalized partition function is a sum of shifted
/// `beta^{-1/2}` transforms, so `rho` is a superposition of one-sided
/// inverse-square-root branches:
///
/// ```text
/// rho(E) = sum_n [ +(pi (E - E_n^+))^{-1/2} for E > E_n^+
///                  -(pi (E - E_n^-))^{-1/2} for E > E_n^- ]
/// ```
///
/// with branch points `E_n^{+-} = omega_bar (n + 1/2) -+ omega/2`.
/// Each contribution is strictly one-sided (nothing at `E = E_n`
/// itself), the first branch point is the ground energy, and strong
/// coupling reorders the `+` and `-` families enough to drive `rho`
/// negative between them.
///
/// # Errors
///
/// [`Error::InvalidInput`] unless the parameters describe a free
/// particle and the grid is uniform and increasing.
pub fn dos_free_minimal(params: &MinimalModelParams, e_grid: &[f64]) -> Result<DosCurve> {
    let w_bar = coupled_frequency_free(params)?;
    let w = params.bath_freq;
    check_uniform_grid(e_grid)?;
    let e_top = *e_grid.last().unwrap();
    let mut values = vec![0.0; e_grid.len()];
    let mut branch = |e_b: f64, sign: f64| {
        for (v, &e) in values.iter_mut().zip(e_grid) {
            if e > e_b {
                *v += sign / (std::f64::consts::PI * (e - e_b)).sqrt();
            }
        }
    };
    let mut n = 0u64;
    loop {
        let center = w_bar * (n as f64 + 0.5);
        let lower = center - 0.5 * w;
        if lower > e_top {
            break;
        }
        branch(lower, 1.0);
        let upper = center + 0.5 * w;
        if upper <= e_top {
            branch(upper, -1.0);
        }
        n += 1;
    }
    Ok(DosCurve {
        energies: e_grid.to_vec(),
        values,
        sigma: 0.0,
        ground_energy: 0.5 * (w_bar - w),
    })
}

/// Bath-normalized Drude-oscillator partition function at complex
/// inverse temperature, in closed form:
///
/// ```text
/// Z(beta) = (1 / beta Omega)
///           * prod_i Gamma(1 - lambda_i beta / 2 pi)
///           / Gamma(1 + omega_D beta / 2 pi),
/// ```
///
/// where `lambda_i` are the three characteristic roots. The formula is
/// the exact resummation of the Matsubara product (the root sum
/// `sum_i lambda_i = -omega_D` makes the regularizing powers cancel),
/// so on the real axis it agrees with [`log_partition_matsubara`] to
/// the latter's truncation accuracy.
///
/// Conjugate symmetry `Z(conj beta) = conj Z(beta)` holds exactly: the
/// root set is closed under conjugation and every elementary operation
/// commutes with it bitwise.
///
/// [`log_partition_matsubara`]: crate::drude::log_partition_matsubara
///
/// # Errors
///
/// [`Error::InvalidInput`] unless `Re beta > 0` (right of all Gamma
/// poles) and the parameters describe an oscillator.
pub fn partition_complex(params: &DrudeParams, beta: Complex64) -> Result<Complex64> {
    params.require_oscillator("partition_complex")?;
    if !(beta.re.is_finite() && beta.im.is_finite() && beta.re > 0.0) {
        return Err(Error::InvalidInput(format!(
            "partition_complex needs Re beta > 0, got beta = {beta}"
        )));
    }
    let scale = beta / TWO_PI;
    let mut log_z = -(beta * params.omega_0).ln();
    for root in characteristic_roots(params).nonzero() {
        log_z += log_gamma(Complex64::new(1.0, 0.0) - root * scale)?;
    }
    log_z -= log_gamma(Complex64::new(1.0, 0.0) + params.omega_d * scale)?;
    Ok(log_z.exp())
}

/// Real closed-form `ln Z(beta)` on the positive real axis. Works in
/// log space throughout: `Z` itself underflows past `beta E_0 ~ 700`,
/// which is exactly the regime the ground-state extractor needs.
fn log_partition_real(params: &DrudeParams, beta: f64) -> Result<f64> {
    let scale = Complex64::new(beta / TWO_PI, 0.0);
    let mut log_z = Complex64::new(-(beta * params.omega_0).ln(), 0.0);
    for root in characteristic_roots(params).nonzero() {
        log_z += log_gamma(Complex64::new(1.0, 0.0) - root * scale)?;
    }
    log_z -= log_gamma(Complex64::new(1.0, 0.0) + params.omega_d * beta / TWO_PI)?;
    Ok(log_z.re)
}

/// Ground-state energy of the damped oscillator,
/// `E_0 = -lim_{beta->inf} d ln Z / d beta`.
///
/// Evaluates `E(beta) = -d ln Z / d beta` by a five-point stencil
/// (step `1e-3 beta`) at `beta = 10^3 / Omega` and twice that, then
/// removes the leading finite-`beta` defect with one Richardson step
/// `E_0 = (4 E(2 beta) - E(beta)) / 3`. The defect is `O(1/beta^2)`
/// because the smooth part of the density of states is finite at
/// `E_0^+`, and the two-point cross-check doubles as an error estimate.
///
/// # Errors
///
/// [`Error::InvalidInput`] for free-particle parameters (an unbound
/// coordinate has no discrete ground line to locate).
pub fn ground_state_energy(params: &DrudeParams) -> Result<f64> {
    params.require_oscillator("ground_state_energy")?;
    let energy_at = |beta: f64| -> Result<f64> {
        let h = 1e-3 * beta;
        let f = |j: f64| log_partition_real(params, beta + j * h);
        let d = (f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h);
        Ok(-d)
    };
    let beta0 = 1e3 / params.omega_0;
    let e1 = energy_at(beta0)?;
    let e2 = energy_at(2.0 * beta0)?;
    Ok((4.0 * e2 - e1) / 3.0)
}

/// Contour and sampling parameters for [`bromwich_dos`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BromwichConfig {
    /// Contour abscissa `sigma > 0` (in units of `Omega`). Larger
    /// values damp the high-energy tail of the integrand but amplify
    /// the reconstruction by `e^{sigma E}`.
    pub sigma: f64,
    /// Half-length of the truncated contour; the energy resolution of
    /// the reconstruction is `pi / tau_max`.
    pub tau_max: f64,
    /// Number of contour samples (a power of two for the FFT).
    pub samples: usize,
}

impl Default for BromwichConfig {
    fn default() -> Self {
        Self {
            sigma: 0.5,
            tau_max: 400.0,
            samples: 8192,
        }
    }
}

/// Smooth part of the Drude-oscillator density of states by numerical
/// inversion of the Laplace transform along the contour
/// `beta = sigma + i tau`.
///
/// The analytically known ground-state delta `e^{-beta E_0}` is
/// subtracted from `Z(beta)` before inversion, the remainder is
/// apodized and integrated by FFT:
///
/// ```text
/// rho(E_k) = e^{sigma E_k} / (2 pi)
///            * int_{-tau_max}^{tau_max} [Z - e^{-beta E_0}] w(tau)
///              e^{i tau E_k} d tau.
/// ```
///
/// The grid must satisfy the FFT reciprocity `delta_E = pi / tau_max`
/// (equivalently `delta_E * delta_tau = 2 pi / samples`); the curve is
/// computed with a Gaussian window (`exp(-(tau/(0.8 tau_max))^2)`) and
/// cross-checked against a half-cosine window
/// (`cos(pi tau / (2 tau_max))`) — a disagreement above 2% of the peak
/// means the contour is too short for the requested parameters and is
/// reported as an error rather than returned as data. Truncating the
/// symmetric contour leaves the `tau = -tau_max` endpoint without its
/// `+tau_max` partner; averaging that slot with the `+tau_max` sample
/// restores Hermitian symmetry, which is what pushes the imaginary
/// residue from `O(window(tau_max))` down to rounding level.
///
/// # Errors
///
/// [`Error::InvalidInput`] for a non-uniform grid, a grid spacing
/// violating reciprocity, more grid points than samples, or a
/// non-power-of-two sample count; [`Error::WindowSensitivity`] and
/// [`Error::ImaginaryResidue`] as described above.
pub fn bromwich_dos(
    params: &DrudeParams,
    e_grid: &[f64],
    config: &BromwichConfig,
) -> Result<DosCurve> {
    let step = check_uniform_grid(e_grid)?;
    if !(config.sigma.is_finite() && config.sigma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "contour abscissa must be > 0, got {}",
            config.sigma
        )));
    }
    if !(config.tau_max.is_finite() && config.tau_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau_max must be > 0, got {}",
            config.tau_max
        )));
    }
    let m = config.samples;
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "samples must be a power of two >= 2, got {m}"
        )));
    }
    if e_grid.len() > m {
        return Err(Error::InvalidInput(format!(
            "grid has {} points but only {m} contour samples",
            e_grid.len()
        )));
    }
    let step_required = std::f64::consts::PI / config.tau_max;
    if (step - step_required).abs() > 1e-9 * step_required {
        return Err(Error::InvalidInput(format!(
            "grid spacing {step} violates reciprocity: need pi / tau_max = {step_required}"
        )));
    }

    let e0 = ground_state_energy(params)?;
    let e_min = e_grid[0];
    let delta_tau = 2.0 * config.tau_max / m as f64;

    // Z(sigma + i tau) minus the ground-state delta, on the contour and
    // at the unpaired +tau_max endpoint.
    let integrand = |tau: f64| -> Result<Complex64> {
        let beta = Complex64::new(config.sigma, tau);
        Ok(partition_complex(params, beta)? - (-beta * e0).exp())
    };
    let mut g = Vec::with_capacity(m);
    for j in 0..m {
        let tau = (j as f64 - m as f64 / 2.0) * delta_tau;
        g.push((tau, integrand(tau)?));
    }
    let g_end = integrand(config.tau_max)?;

    let gauss_width = 0.8 * config.tau_max;
    let gaussian = |tau: f64| (-(tau / gauss_width) * (tau / gauss_width)).exp();
    let half_cosine =
        |tau: f64| (std::f64::consts::FRAC_PI_2 * tau / config.tau_max).cos();

    let mut planner = rustfft::FftPlanner::new();
    let fft = planner.plan_fft_inverse(m);

    let invert = |window: &dyn Fn(f64) -> f64| -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = g
            .iter()
            .map(|&(tau, gj)| gj * window(tau) * Complex64::new(0.0, tau * e_min).exp())
            .collect();
        // Hermitian endpoint fix: the j = 0 slot carries -tau_max alone;
        // average it with its missing +tau_max partner.
        let end = g_end
            * window(config.tau_max)
            * Complex64::new(0.0, config.tau_max * e_min).exp();
        buf[0] = 0.5 * (buf[0] + end);
        fft.process(&mut buf);
        let scale = delta_tau / TWO_PI;
        buf.iter()
            .take(e_grid.len())
            .enumerate()
            .map(|(k, x)| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let e_k = e_min + k as f64 * step;
                sign * scale * (config.sigma * e_k).exp() * x
            })
            .collect()
    };

    let rho_gauss = invert(&gaussian);
    let rho_cos = invert(&half_cosine);

    let peak = rho_gauss.iter().fold(0.0f64, |p, v| p.max(v.re.abs()));
    let peak = peak.max(f64::MIN_POSITIVE);
    let imag_residue = rho_gauss.iter().fold(0.0f64, |p, v| p.max(v.im.abs()));
    if imag_residue > 1e-8 * peak {
        return Err(Error::ImaginaryResidue {
            context: "bromwich_dos",
            residue: imag_residue / peak,
            limit: 1e-8,
        });
    }
    let window_diff = rho_gauss
        .iter()
        .zip(&rho_cos)
        .fold(0.0f64, |p, (a, b)| p.max((a.re - b.re).abs()));
    if window_diff > 0.02 * peak {
        return Err(Error::WindowSensitivity {
            observed: window_diff / peak,
            limit: 0.02,
        });
    }

    Ok(DosCurve {
        energies: e_grid.to_vec(),
        values: rho_gauss.iter().map(|v| v.re).collect(),
        sigma: config.sigma,
        ground_energy: e0,
    })
}

/// Uniform energy grid compatible with [`bromwich_dos`] reciprocity:
/// starts at `e_min`, spacing `pi / tau_max`, last point at or below
/// `e_max`.
pub fn reciprocal_energy_grid(e_min: f64, e_max: f64, tau_max: f64) -> Vec<f64> {
    let step = std::f64::consts::PI / tau_max;
    let count = ((e_max - e_min) / step).floor() as usize + 1;
    (0..count).map(|k| e_min + k as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drude::{log_partition_matsubara, MatsubaraConfig};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn fig4_params() -> MinimalModelParams {
        MinimalModelParams::oscillator(10.0, 1.0, 1.0).unwrap()
    }

    fn drude_fig_params() -> DrudeParams {
        DrudeParams::oscillator(5.0, 0.1, 1.0).unwrap()
    }

    #[test]
    fn comb_ground_line_sits_at_the_zero_point_shift() {
        let comb = delta_comb_osc_minimal(&fig4_params(), 20.0).unwrap();
        let first = comb.entries.first().unwrap();
        assert_abs_diff_eq!(first.energy, 1.370_828_693_386_970_7, epsilon = 1e-12);
        assert_eq!(first.weight, 1);
    }

    #[test]
    fn comb_carries_negative_weights_at_strong_coupling() {
        let comb = delta_comb_osc_minimal(&fig4_params(), 20.0).unwrap();
        assert!(comb.entries.iter().any(|e| e.weight < 0));
        // ... but the partition function it resums stays positive:
        // cumulative weight from below never goes negative.
        let mut cum = 0i64;
        for e in &comb.entries {
            cum += e.weight;
            assert!(cum >= 0, "negative cumulative weight at E = {}", e.energy);
        }
    }

    #[test]
    fn comb_telescopes_to_the_bare_oscillator_at_zero_coupling() {
        let params = MinimalModelParams::oscillator(0.0, 2.0, 1.0).unwrap();
        let comb = delta_comb_osc_minimal(&params, 12.0).unwrap();
        for (n, e) in comb.entries.iter().enumerate() {
            assert_eq!(e.weight, 1);
            assert_abs_diff_eq!(e.energy, n as f64 + 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn comb_round_trips_the_partition_function() {
        let params = fig4_params();
        let e_cut = 40.0;
        let comb = delta_comb_osc_minimal(&params, e_cut).unwrap();
        let (wp, wm) = normal_modes_osc(&params).unwrap();
        for beta in [0.5, 1.0, 2.0] {
            let exact = (beta * params.bath_freq / 2.0).sinh()
                / (2.0 * (beta * wp / 2.0).sinh() * (beta * wm / 2.0).sinh());
            let summed = comb.laplace_sum(beta);
            // Truncation bound plus a small absolute floor: at beta = 2
            // the bound 10 exp(-beta E_cut) ~ 2e-34 is far below what
            // accumulating ~1600 rounded exponentials can reach.
            let bound = 10.0 * (-beta * e_cut).exp() + 1e-12;
            assert!(
                (summed - exact).abs() <= bound,
                "beta = {beta}: |{summed} - {exact}| > {bound}"
            );
        }
    }

    #[test]
    fn comb_rejects_cutoff_below_the_ground_line() {
        assert!(delta_comb_osc_minimal(&fig4_params(), 1.0).is_err());
    }

    #[test]
    fn free_dos_reduces_to_one_branch_at_zero_coupling() {
        let params = MinimalModelParams::free(0.0, 1.0).unwrap();
        let grid: Vec<f64> = (1..200).map(|k| k as f64 * 0.025).collect();
        let curve = dos_free_minimal(&params, &grid).unwrap();
        assert_eq!(curve.ground_energy, 0.0);
        // omega_bar = omega: the n-th +branch at omega n cancels against
        // nothing below the grid top, but the -branches coincide with
        // the +branches of the next n, so only (pi E)^{-1/2} survives.
        for (&e, &v) in grid.iter().zip(&curve.values) {
            assert_relative_eq!(
                v,
                1.0 / (std::f64::consts::PI * e).sqrt(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn free_dos_matches_branch_sum_reference_values() {
        let params = MinimalModelParams::free(10.0, 1.0).unwrap();
        let grid: Vec<f64> = (1..=100).map(|k| k as f64 * 0.05).collect();
        let curve = dos_free_minimal(&params, &grid).unwrap();
        let at = |e: f64| {
            let k = (e / 0.05).round() as usize - 1;
            assert_abs_diff_eq!(grid[k], e, epsilon = 1e-12);
            curve.values[k]
        };
        // Spot values straddling the sign changes of the curve.
        assert_relative_eq!(at(1.2), 2.763_258_992_410, max_relative = 1e-9);
        assert_relative_eq!(at(2.0), 0.614_963_865_425, max_relative = 1e-9);
        assert_relative_eq!(at(2.2), -2.210_473_908_892, max_relative = 1e-9);
        assert_relative_eq!(at(3.0), -0.199_228_393_937, max_relative = 1e-9);
        assert_relative_eq!(at(4.6), 1.538_423_843_004, max_relative = 1e-9);
        // Ground branch point at (omega_bar - omega)/2.
        assert_abs_diff_eq!(
            curve.ground_energy,
            0.5 * (11f64.sqrt() - 1.0),
            epsilon = 1e-14
        );
    }

    #[test]
    fn partition_matches_matsubara_on_the_real_axis() {
        let params = drude_fig_params();
        let cfg = MatsubaraConfig::new(100_000, 2).unwrap();
        for theta in [0.25, 1.0, 4.0] {
            let beta = 1.0 / theta;
            let closed = partition_complex(&params, Complex64::new(beta, 0.0)).unwrap();
            let mats = log_partition_matsubara(&params, theta, &cfg).unwrap();
            assert_relative_eq!(closed.re, mats.exp(), max_relative = 1e-8);
            assert_abs_diff_eq!(closed.im, 0.0);
        }
    }

    #[test]
    fn partition_reduces_to_the_undamped_oscillator() {
        let params = DrudeParams::oscillator(1e-12, 1.0, 1.0).unwrap();
        for beta in [0.3, 1.0, 5.0] {
            let z = partition_complex(&params, Complex64::new(beta, 0.0)).unwrap();
            let undamped = 1.0 / (2.0 * (beta / 2.0).sinh());
            assert_relative_eq!(z.re, undamped, max_relative = 1e-9);
        }
    }

    #[test]
    fn partition_conjugate_symmetry_is_exact() {
        let params = drude_fig_params();
        for (re, im) in [(0.5, 3.0), (1.0, -17.0), (2.0, 123.456), (0.5, 400.0)] {
            let beta = Complex64::new(re, im);
            let z = partition_complex(&params, beta).unwrap();
            let z_conj = partition_complex(&params, beta.conj()).unwrap();
            assert_eq!(z.conj(), z_conj);
        }
    }

    #[test]
    fn partition_rejects_left_half_plane() {
        let params = drude_fig_params();
        assert!(partition_complex(&params, Complex64::new(-1.0, 0.0)).is_err());
        assert!(partition_complex(&params, Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn ground_state_energy_reference_values() {
        let e0 = |gamma: f64| {
            ground_state_energy(&DrudeParams::oscillator(gamma, 0.1, 1.0).unwrap()).unwrap()
        };
        // Vanishing damping recovers the bare zero-point energy.
        assert_abs_diff_eq!(e0(1e-6), 0.5, epsilon = 1e-6);
        // Damping raises the ground-state energy, monotonically.
        let e_weak = e0(1.0);
        let e_strong = e0(5.0);
        assert_abs_diff_eq!(e_weak, 0.520_762_498_039, epsilon = 1e-9);
        assert_abs_diff_eq!(e_strong, 0.597_618_737_751, epsilon = 1e-9);
        assert!(e_strong > e_weak && e_weak > 0.5);
    }

    #[test]
    fn bromwich_rejects_reciprocity_violations() {
        let params = drude_fig_params();
        let config = BromwichConfig::default();
        // Grid spacing unrelated to pi / tau_max.
        let bad: Vec<f64> = (0..100).map(|k| k as f64 * 0.01).collect();
        match bromwich_dos(&params, &bad, &config) {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("reciprocity")),
            other => panic!("expected reciprocity error, got {other:?}"),
        }
    }

    #[test]
    fn bromwich_reconstructs_a_clean_positive_curve() {
        let params = drude_fig_params();
        let config = BromwichConfig::default();
        let grid = reciprocal_energy_grid(0.0, 12.0, config.tau_max);
        let curve = bromwich_dos(&params, &grid, &config).unwrap();
        let peak = curve.values.iter().cloned().fold(0.0f64, f64::max);
        let min = curve.values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(peak > 0.0);
        assert!(min > -0.01 * peak, "undershoot {min} vs peak {peak}");
        // The peak must sit above the ground line the transform split off.
        let k_peak = curve
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!(curve.energies[k_peak] > curve.ground_energy);
    }

    #[test]
    fn reciprocal_grid_spacing_matches_the_contour() {
        let grid = reciprocal_energy_grid(0.0, 20.0, 400.0);
        let step = grid[1] - grid[0];
        assert_relative_eq!(step, std::f64::consts::PI / 400.0);
        assert!(*grid.last().unwrap() <= 20.0);
        assert!(grid.len() <= 8192);
    }
}
