//! Explicit N-mode bath construction and exact normal-mode specific
//! heats: the brute-force bridge between the single-oscillator minimal
//! models (`N = 1`) and the continuum Drude results (`N -> infinity`).
//!
//! The system (mass `M`, frequency `Omega`, possibly 0) couples to each
//! bath mode through `(f_i/2)(q_i - Q)^2` with spring constant
//! `f_i = m_i omega_i^2`; the `q_i`-independent part of this term
//! renormalizes the potential so that `Omega = 0` keeps exact
//! translational invariance (one zero mode). In mass-weighted
//! coordinates the stiffness matrix is an arrowhead
//!
//! ```text
//! K[0][0] = Omega^2 + sum_i m_i omega_i^2      (masses in units of M)
//! K[0][i] = -sqrt(m_i) omega_i^2
//! K[i][i] = omega_i^2
//! ```
//!
//! whose eigenvalues are the squared coupled normal-mode frequencies.
//! Specific heats then reduce to sums of [`boson_heat`] terms over the
//! coupled and bare spectra.

use crate::drude::DrudeParams;
use crate::specfun::boson_heat;
use crate::{Error, HeatCurvePoint, Result};

/// A finite bath attached to one system degree of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    /// Bath mode frequencies `omega_i > 0` (any order).
    pub mode_freqs: Vec<f64>,
    /// Bath mode masses `m_i > 0` in units of the system mass.
    pub mode_masses: Vec<f64>,
    /// System frequency `Omega >= 0`; `Omega = 0` selects the free
    /// particle (translation-invariant coupling).
    pub system_freq: f64,
}

impl BathSpec {
    /// Validates and builds a bath specification.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidInput`] unless there is at least one mode and all
    /// frequencies and masses are finite and strictly positive.
    pub fn new(mode_freqs: Vec<f64>, mode_masses: Vec<f64>, system_freq: f64) -> Result<Self> {
        if mode_freqs.is_empty() {
            return Err(Error::InvalidInput("bath needs at least one mode".into()));
        }
        if mode_freqs.len() != mode_masses.len() {
            return Err(Error::InvalidInput(format!(
                "{} frequencies but {} masses",
                mode_freqs.len(),
                mode_masses.len()
            )));
        }
        if let Some(w) = mode_freqs.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "mode frequencies must be finite and > 0, got {w}"
            )));
        }
        if let Some(m) = mode_masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "mode masses must be finite and > 0, got {m}"
            )));
        }
        if !(system_freq.is_finite() && system_freq >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "system_freq must be finite and >= 0, got {system_freq}"
            )));
        }
        Ok(Self {
            mode_freqs,
            mode_masses,
            system_freq,
        })
    }

    /// Number of bath modes.
    pub fn n_modes(&self) -> usize {
        self.mode_freqs.len()
    }
}

/// Bare and coupled normal-mode frequencies of a [`BathSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    /// The `N` uncoupled bath frequencies, sorted ascending.
    pub bare: Vec<f64>,
    /// The coupled normal-mode frequencies, sorted ascending: `N + 1`
    /// entries for the oscillator, `N` for the free particle (the exact
    /// zero mode is removed).
    pub coupled: Vec<f64>,
}

/// Default integration cutoff for [`discretize_drude`]:
/// `20 * omega_D`, far above the Lorentzian knee.
pub fn default_omega_max(params: &DrudeParams) -> f64 {
    20.0 * params.omega_d
}

/// Builds an `n_modes`-mode bath whose damping kernel approximates the
/// Drude kernel.
///
/// Mode frequencies sit at the midpoints of `n_modes` equal bins on
/// `(0, omega_max]`; the spring constant of each mode is the *bin
/// integral* of the Lorentzian coupling density,
///
/// ```text
/// f_i = (2 gamma omega_D / pi) * [atan(hi/omega_D) - atan(lo/omega_D)],
/// ```
///
/// so the total coupling weight up to `omega_max` is reproduced exactly
/// for every `n_modes` (a plain midpoint rule leaves an
/// `O(1/n_modes^2)` weight defect that stalls the convergence of the
/// specific-heat curves; the bin integral keeps the distance to the
/// continuum limit decreasing monotonically as `n_modes` doubles).
/// Masses follow from `m_i = f_i / omega_i^2`.
///
/// `omega_max` should be well above `omega_D` (see
/// [`default_omega_max`]); the finite lowest mode frequency
/// `omega_max/(2 n_modes)` cuts off the `theta -> 0` behavior, which is
/// the expected discretization artifact of any finite bath.
///
/// # Errors
///
/// [`Error::InvalidInput`] if `n_modes = 0` or `omega_max <= 0`.
pub fn discretize_drude(params: &DrudeParams, n_modes: usize, omega_max: f64) -> Result<BathSpec> {
    if n_modes == 0 {
        return Err(Error::InvalidInput("n_modes must be >= 1".into()));
    }
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "omega_max must be finite and > 0, got {omega_max}"
        )));
    }
    let delta = omega_max / n_modes as f64;
    let weight_scale = 2.0 * params.gamma * params.omega_d / std::f64::consts::PI;
    let mut freqs = Vec::with_capacity(n_modes);
    let mut masses = Vec::with_capacity(n_modes);
    for i in 0..n_modes {
        let lo = i as f64 * delta;
        let hi = lo + delta;
        let omega_i = lo + 0.5 * delta;
        let f_i =
            weight_scale * ((hi / params.omega_d).atan() - (lo / params.omega_d).atan());
        freqs.push(omega_i);
        masses.push(f_i / (omega_i * omega_i));
    }
    BathSpec::new(freqs, masses, params.omega_0)
}

/// Exact coupled and bare spectra of a bath specification.
///
/// Diagonalizes the mass-weighted arrowhead stiffness matrix with a
/// cyclic Jacobi eigensolver (off-diagonal Frobenius norm driven below
/// `1e-12` of the matrix norm). For `Omega = 0` the analytic zero mode
/// (eigenvalue below `1e-10` of the largest) is removed from `coupled`.
///
/// # Errors
///
/// [`Error::Convergence`] if 100 sweeps do not reach the off-diagonal
/// target, or if `Omega = 0` does not show exactly one zero mode
/// (either signals a malformed specification).
pub fn normal_modes(spec: &BathSpec) -> Result<ModeSpectrum> {
    let n = spec.n_modes();
    let dim = n + 1;
    let mut k = vec![0.0; dim * dim];
    let mut k00 = spec.system_freq * spec.system_freq;
    for i in 0..n {
        let w2 = spec.mode_freqs[i] * spec.mode_freqs[i];
        let f = spec.mode_masses[i] * w2;
        k00 += f;
        let off = -spec.mode_masses[i].sqrt() * w2;
        k[i + 1] = off;
        k[(i + 1) * dim] = off;
        k[(i + 1) * dim + (i + 1)] = w2;
    }
    k[0] = k00;

    let mut eigs = jacobi_eigenvalues(&mut k, dim)?;
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    if spec.system_freq == 0.0 {
        let max_eig = eigs[dim - 1];
        let zero_count = eigs.iter().filter(|&&e| e < 1e-10 * max_eig).count();
        if zero_count != 1 {
            return Err(Error::Convergence(format!(
                "translation-invariant coupling must produce exactly one zero mode, \
                 found {zero_count}"
            )));
        }
        eigs.remove(0);
    }

    let coupled = eigs.into_iter().map(|e| e.max(0.0).sqrt()).collect();
    let mut bare = spec.mode_freqs.clone();
    bare.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ModeSpectrum { bare, coupled })
}

/// Cyclic Jacobi diagonalization of a symmetric matrix stored row-major
/// in `a` (`dim x dim`); returns the eigenvalues in unspecified order.
/// Simple, dependency-free and accurate for the dense desk-scale
/// matrices used here (`dim <= 512`).
fn jacobi_eigenvalues(a: &mut [f64], dim: usize) -> Result<Vec<f64>> {
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-12 * norm.max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..dim {
                for q in (p + 1)..dim {
                    s += 2.0 * a[p * dim + q] * a[p * dim + q];
                }
            }
            s.sqrt()
        };
        if off <= target {
            return Ok((0..dim).map(|i| a[i * dim + i]).collect());
        }
        for p in 0..dim - 1 {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                // Symmetric Schur rotation annihilating a[p][q].
                let tau = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                let t = if tau.is_finite() {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                } else {
                    0.5 / tau
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                a[p * dim + p] -= t * apq;
                a[q * dim + q] += t * apq;
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
                for m in 0..dim {
                    if m == p || m == q {
                        continue;
                    }
                    let amp = a[m * dim + p];
                    let amq = a[m * dim + q];
                    a[m * dim + p] = c * amp - s * amq;
                    a[p * dim + m] = a[m * dim + p];
                    a[m * dim + q] = s * amp + c * amq;
                    a[q * dim + m] = a[m * dim + q];
                }
            }
        }
    }
    Err(Error::Convergence(
        "Jacobi eigensolver did not reach the off-diagonal target in 100 sweeps".into(),
    ))
}

/// Specific-heat difference of a diagonalized bath:
/// `c_coupled = [1/2 if free] + sum_j g(coupled_j / 2 theta)`,
/// `c_bath = sum_i g(bare_i / 2 theta)`, `c_total` their exact
/// difference.
///
/// `free_particle` must match how the spectrum was built (it decides
/// whether the classical `1/2` of the unbound coordinate is included).
pub fn specific_heat_difference(
    spectrum: &ModeSpectrum,
    theta: f64,
    free_particle: bool,
) -> Result<HeatCurvePoint> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "theta must be finite and > 0, got {theta}"
        )));
    }
    let half = 1.0 / (2.0 * theta);
    let mut c_coupled = if free_particle { 0.5 } else { 0.0 };
    for w in &spectrum.coupled {
        c_coupled += boson_heat(w * half);
    }
    let mut c_bath = 0.0;
    for w in &spectrum.bare {
        c_bath += boson_heat(w * half);
    }
    Ok(HeatCurvePoint::from_parts(theta, c_coupled, c_bath))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal::{
        normal_modes_osc, specific_heat_free_minimal, specific_heat_osc_minimal,
        MinimalModelParams,
    };
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn spec_validation() {
        assert!(BathSpec::new(vec![], vec![], 1.0).is_err());
        assert!(BathSpec::new(vec![1.0], vec![], 1.0).is_err());
        assert!(BathSpec::new(vec![0.0], vec![1.0], 1.0).is_err());
        assert!(BathSpec::new(vec![1.0], vec![-1.0], 1.0).is_err());
        assert!(BathSpec::new(vec![1.0], vec![1.0], -1.0).is_err());
    }

    #[test]
    fn single_mode_oscillator_matches_minimal_normal_modes() {
        let spec = BathSpec::new(vec![1.0], vec![10.0], 1.0).unwrap();
        let spectrum = normal_modes(&spec).unwrap();
        let params = MinimalModelParams::oscillator(10.0, 1.0, 1.0).unwrap();
        let (wp, wm) = normal_modes_osc(&params).unwrap();
        assert_eq!(spectrum.coupled.len(), 2);
        assert_abs_diff_eq!(spectrum.coupled[0], wm, epsilon = 1e-10);
        assert_abs_diff_eq!(spectrum.coupled[1], wp, epsilon = 1e-10);
    }

    #[test]
    fn single_mode_free_particle_sheds_the_zero_mode() {
        let spec = BathSpec::new(vec![1.0], vec![10.0], 0.0).unwrap();
        let spectrum = normal_modes(&spec).unwrap();
        assert_eq!(spectrum.coupled.len(), 1);
        assert_abs_diff_eq!(spectrum.coupled[0], 11.0f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn vanishing_coupling_decouples_the_spectra() {
        let spec = BathSpec::new(vec![0.7, 1.3, 2.9], vec![1e-18; 3], 1.1).unwrap();
        let spectrum = normal_modes(&spec).unwrap();
        let mut expected = vec![0.7, 1.3, 2.9, 1.1];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in spectrum.coupled.iter().zip(&expected) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-6);
        }
    }

    #[test]
    fn single_mode_specific_heats_match_minimal_closed_forms() {
        let free_spec = BathSpec::new(vec![1.0], vec![10.0], 0.0).unwrap();
        let free_spectrum = normal_modes(&free_spec).unwrap();
        let free_params = MinimalModelParams::free(10.0, 1.0).unwrap();

        let osc_spec = BathSpec::new(vec![1.0], vec![10.0], 1.0).unwrap();
        let osc_spectrum = normal_modes(&osc_spec).unwrap();
        let osc_params = MinimalModelParams::oscillator(10.0, 1.0, 1.0).unwrap();

        for theta in [0.01, 0.1, 0.5, 1.0, 10.0, 300.0] {
            let free_disc = specific_heat_difference(&free_spectrum, theta, true).unwrap();
            let free_min = specific_heat_free_minimal(&free_params, theta).unwrap();
            assert_abs_diff_eq!(free_disc.c_total, free_min.c_total, epsilon = 1e-12);

            let osc_disc = specific_heat_difference(&osc_spectrum, theta, false).unwrap();
            let osc_min = specific_heat_osc_minimal(&osc_params, theta).unwrap();
            assert_abs_diff_eq!(osc_disc.c_total, osc_min.c_total, epsilon = 1e-12);
        }
    }

    #[test]
    fn discretization_reproduces_the_binwise_coupling_weight() {
        let params = DrudeParams::oscillator(5.0, 0.1, 1.0).unwrap();
        let n = 64;
        let omega_max = default_omega_max(&params);
        let spec = discretize_drude(&params, n, omega_max).unwrap();
        assert_eq!(spec.n_modes(), n);
        // Total spring weight telescopes to the full arctan integral.
        let total: f64 = spec
            .mode_freqs
            .iter()
            .zip(&spec.mode_masses)
            .map(|(w, m)| m * w * w)
            .sum();
        let want = 2.0 * params.gamma * params.omega_d / std::f64::consts::PI
            * (omega_max / params.omega_d).atan();
        assert_relative_eq!(total, want, max_relative = 1e-12);
        // Frequencies are the bin midpoints.
        assert_relative_eq!(spec.mode_freqs[0], omega_max / (2.0 * n as f64));
    }

    #[test]
    fn discretized_curve_tracks_the_continuum_closed_form() {
        use crate::drude::specific_heat_osc_drude;
        let params = DrudeParams::oscillator(5.0, 0.1, 1.0).unwrap();
        let spec = discretize_drude(&params, 64, default_omega_max(&params)).unwrap();
        let spectrum = normal_modes(&spec).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=60 {
            let theta = 10f64.powf(-1.0 + 3.0 * k as f64 / 60.0);
            let disc = specific_heat_difference(&spectrum, theta, false).unwrap();
            let cont = specific_heat_osc_drude(&params, theta).unwrap();
            worst = worst.max((disc.c_total - cont.c_total).abs());
        }
        assert!(worst < 5e-2, "64-mode curve off by {worst}");
    }

    #[test]
    fn interlacing_of_bare_and_coupled_spectra() {
        let spec = BathSpec::new(
            vec![0.5, 1.0, 1.7, 2.4],
            vec![0.3, 0.8, 0.2, 0.5],
            0.9,
        )
        .unwrap();
        let spectrum = normal_modes(&spec).unwrap();
        // Star coupling: exactly one coupled frequency below the lowest
        // bare one, one between consecutive bare ones, one above.
        for (i, pair) in spectrum.bare.windows(2).enumerate() {
            let inside = spectrum
                .coupled
                .iter()
                .filter(|&&w| w > pair[0] && w < pair[1])
                .count();
            assert_eq!(inside, 1, "interlacing violated between bare pair {i}");
        }
    }
}
