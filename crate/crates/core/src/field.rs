//! Near-field traces on the sphere `|x| = R` generated by a far-field
//! spectrum, their Sobolev norms and the low/high frequency energy split.
//!
//! A radiating field with far-field coefficients `a_{m,n}` has trace
//! coefficients `u_{m,n}(R) = k·i·a_{m,n}·ĥ_n(kR)` and radial derivative
//! coefficients `k²·i·a_{m,n}·ĥ_n'(kR)`.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonics::{aggregate, synthesize, AggregateSpectrum, CoefficientSpectrum, SphereGrid};
use crate::specfun::{hankel, HankelValue};

/// Smallest `kR` accepted when building traces.
pub const MIN_ELECTRICAL_RADIUS: f64 = 0.1;

/// `√2·e/√π`, the Lipschitz constant of the low-frequency projection.
pub fn low_frequency_constant() -> f64 {
    (2.0_f64).sqrt() * E / PI.sqrt()
}

/// Per-degree trace `u_n(R)` and `∂_r u_n(R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NearFieldTrace {
    pub radius: f64,
    pub wavenumber: f64,
    pub values: Vec<Complex64>,
    pub radial_derivatives: Vec<Complex64>,
}

impl NearFieldTrace {
    pub fn max_degree(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Zero every degree above `cutoff`.
    pub fn low_pass(&self, cutoff: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let cut = |v: &[Complex64]| {
            v.iter()
                .enumerate()
                .map(|(n, &u)| if n <= cutoff { u } else { zero })
                .collect()
        };
        Self {
            radius: self.radius,
            wavenumber: self.wavenumber,
            values: cut(&self.values),
            radial_derivatives: cut(&self.radial_derivatives),
        }
    }

    /// `‖u‖_{(l)}(∂B_R)`
    pub fn norm(&self, l: u32) -> f64 {
        sobolev_norm(&self.values, l, self.radius)
    }

    /// `‖∂_r u‖_{(l)}(∂B_R)`
    pub fn radial_norm(&self, l: u32) -> f64 {
        sobolev_norm(&self.radial_derivatives, l, self.radius)
    }
}

/// Per-(m, n) trace coefficients, used for pointwise synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCoefficients {
    pub radius: f64,
    pub wavenumber: f64,
    pub values: CoefficientSpectrum,
    pub radial_derivatives: CoefficientSpectrum,
}

fn check_wave_parameters(k: f64, radius: f64) -> Result<()> {
    if !(k > 0.0) || !(radius > 0.0) || !k.is_finite() || !radius.is_finite() {
        return Err(Error::Domain(format!(
            "wavenumber and radius must be positive, got k = {k}, R = {radius}"
        )));
    }
    if k * radius < MIN_ELECTRICAL_RADIUS {
        return Err(Error::Domain(format!(
            "kR = {} is below the supported minimum {MIN_ELECTRICAL_RADIUS}",
            k * radius
        )));
    }
    Ok(())
}

/// `ĥ_n(kR)` for `n = 0..=max_degree`.
pub(crate) fn hankel_column(max_degree: usize, t: f64) -> Result<Vec<HankelValue>> {
    (0..=max_degree).map(|n| hankel(n, t)).collect()
}

pub fn near_field_trace(
    spectrum: &AggregateSpectrum,
    k: f64,
    radius: f64,
) -> Result<NearFieldTrace> {
    check_wave_parameters(k, radius)?;
    let column = hankel_column(spectrum.max_degree(), k * radius)?;
    let i = Complex64::new(0.0, 1.0);
    let values = spectrum
        .values()
        .iter()
        .zip(&column)
        .map(|(&a, h)| i * (k * a) * h.value)
        .collect();
    let radial_derivatives = spectrum
        .values()
        .iter()
        .zip(&column)
        .map(|(&a, h)| i * (k * k * a) * h.derivative)
        .collect();
    Ok(NearFieldTrace {
        radius,
        wavenumber: k,
        values,
        radial_derivatives,
    })
}

pub fn near_field_coefficients(
    spectrum: &CoefficientSpectrum,
    k: f64,
    radius: f64,
) -> Result<TraceCoefficients> {
    check_wave_parameters(k, radius)?;
    let column = hankel_column(spectrum.max_degree(), k * radius)?;
    let i = Complex64::new(0.0, 1.0);
    Ok(TraceCoefficients {
        radius,
        wavenumber: k,
        values: spectrum.map_degrees(|n, a| i * k * a * column[n].value),
        radial_derivatives: spectrum.map_degrees(|n, a| i * k * k * a * column[n].derivative),
    })
}

/// `‖u‖²_{(l)}(∂B_R) = R² Σ_{j=0}^{l} Σ_n (n/R)^{2j} |u_n|²`, square-rooted.
pub fn sobolev_norm(values: &[Complex64], l: u32, radius: f64) -> f64 {
    sobolev_norm_squared(values, l, radius).sqrt()
}

pub fn sobolev_norm_squared(values: &[Complex64], l: u32, radius: f64) -> f64 {
    let r2 = radius * radius;
    values
        .iter()
        .enumerate()
        .map(|(n, u)| {
            let ratio = (n as f64 / radius).powi(2);
            let weight: f64 = (0..=l).map(|j| ratio.powi(j as i32)).sum();
            weight * u.norm_sqr()
        })
        .sum::<f64>()
        * r2
}

/// Energy split of the far-field spectrum at the cutoff `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSplit {
    /// `N`
    pub cutoff: usize,
    /// `ε₁ = (Σ_{n<=N} a_n²)^{1/2}`
    pub eps1: f64,
    /// `ε₂ = (Σ_{n>N} a_n²)^{1/2}`
    pub eps2: f64,
    /// `E = -ln ε₂`, `+∞` when `ε₂ = 0`.
    pub log_budget: f64,
}

/// `N = ⌊√(kR)⌋`
pub fn default_cutoff(k: f64, radius: f64) -> usize {
    (k * radius).sqrt().floor() as usize
}

pub fn split_spectrum(spectrum: &AggregateSpectrum, k: f64, radius: f64) -> SpectralSplit {
    split_at(spectrum, default_cutoff(k, radius))
}

pub fn split_at(spectrum: &AggregateSpectrum, cutoff: usize) -> SpectralSplit {
    let (low, high) =
        spectrum
            .values()
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(low, high), (n, a)| {
                if n <= cutoff {
                    (low + a * a, high)
                } else {
                    (low, high + a * a)
                }
            });
    let eps2 = high.sqrt();
    SpectralSplit {
        cutoff,
        eps1: low.sqrt(),
        eps2,
        log_budget: log_budget(eps2),
    }
}

pub(crate) fn log_budget(eps2: f64) -> f64 {
    if eps2 == 0.0 {
        f64::INFINITY
    } else {
        -eps2.ln()
    }
}

/// A priori quantities `M₁ = ‖u‖_{(1)}` and `M₂ = ‖∂_r u‖_{(1)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBudget {
    pub m1: f64,
    pub m2: f64,
}

impl AprioriBudget {
    pub fn from_trace(trace: &NearFieldTrace) -> Self {
        Self {
            m1: trace.norm(1),
            m2: trace.radial_norm(1),
        }
    }
}

/// Both sides of `‖u‖²_{(0)}(∂B_R) = k²R² Σ a_n² |ĥ_n(kR)|²`: the left by
/// quadrature of the synthesized field, the right from the aggregate spectrum.
pub fn norm_identity_check(
    spectrum: &CoefficientSpectrum,
    k: f64,
    radius: f64,
) -> Result<(f64, f64)> {
    let coefficients = near_field_coefficients(spectrum, k, radius)?;
    let grid = SphereGrid::for_max_degree(spectrum.max_degree());
    let samples = synthesize(&coefficients.values, &grid);
    let quadrature: f64 = samples
        .iter()
        .zip(grid.weights())
        .map(|(u, w)| w * u.norm_sqr())
        .sum();
    let lhs = radius * radius * quadrature;

    let column = hankel_column(spectrum.max_degree(), k * radius)?;
    let kr = k * radius;
    let rhs = aggregate(spectrum)
        .values()
        .iter()
        .zip(&column)
        .map(|(a, h)| a * a * h.value.norm_sqr())
        .sum::<f64>()
        * kr
        * kr;
    Ok((lhs, rhs))
}

/// `‖P_N u‖_{(0)}(∂B_R)` against `(√2e/√π)·ε₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowFrequencyCheck {
    pub projected_norm: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn low_frequency_check(
    spectrum: &AggregateSpectrum,
    k: f64,
    radius: f64,
) -> Result<LowFrequencyCheck> {
    let split = split_spectrum(spectrum, k, radius);
    let trace = near_field_trace(&spectrum.low_pass(split.cutoff), k, radius)?;
    let projected_norm = trace.norm(0);
    let bound = low_frequency_constant() * split.eps1;
    Ok(LowFrequencyCheck {
        projected_norm,
        bound,
        satisfied: projected_norm <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(degree: usize, value: f64) -> AggregateSpectrum {
        let mut v = vec![0.0; degree + 1];
        v[degree] = value;
        AggregateSpectrum::new(v).unwrap()
    }

    #[test]
    fn zero_spectrum_gives_zero_trace() {
        let trace =
            near_field_trace(&AggregateSpectrum::new(vec![0.0; 6]).unwrap(), 4.0, 1.0).unwrap();
        assert!(trace.values.iter().all(|u| u.norm() == 0.0));
        assert_eq!(trace.norm(1), 0.0);
    }

    #[test]
    fn order_zero_trace_closed_form() {
        let trace = near_field_trace(&single(0, 1.0), 4.0, 1.0).unwrap();
        assert!((trace.values[0].norm() - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!((trace.values[0].norm() - 0.797_884_560_802_865_4).abs() < 1e-15);
    }

    #[test]
    fn degree_two_trace_uses_hankel_magnitude() {
        let trace = near_field_trace(&single(2, 1.0), 4.0, 1.0).unwrap();
        let oracle = crate::specfun::hankel_magnitude_oracle(2, 4.0).unwrap();
        assert!((trace.values[2].norm() - 4.0 * oracle).abs() < 1e-13);
        // |ĥ_2'(4)| reference from 40-digit evaluation, chain rule k² factor.
        assert!(
            (trace.radial_derivatives[2].norm() - 16.0 * 0.192_355_931_376_592_04).abs() < 1e-13
        );
    }

    #[test]
    fn sobolev_norm_examples() {
        let mut u = vec![Complex64::new(0.0, 0.0); 4];
        u[3] = Complex64::new(0.0, 2.0);
        let r: f64 = 1.5;
        assert!((sobolev_norm_squared(&u, 0, r) - r * r * 4.0).abs() < 1e-14);
        let expected = r * r * (1.0 + (3.0 / r).powi(2)) * 4.0;
        assert!((sobolev_norm_squared(&u, 1, r) - expected).abs() < 1e-13);
    }

    #[test]
    fn split_examples() {
        assert_eq!(default_cutoff(4.0, 1.0), 2);
        let agg = AggregateSpectrum::new(vec![1.0; 5]).unwrap();
        let split = split_spectrum(&agg, 4.0, 1.0);
        assert_eq!(split.cutoff, 2);
        assert!((split.eps1 - 3f64.sqrt()).abs() < 1e-15);
        assert!((split.eps2 - 2f64.sqrt()).abs() < 1e-15);
        assert!((log_budget((-5.0f64).exp()) - 5.0).abs() < 1e-15);
        let low_only = split_at(&agg, 10);
        assert_eq!(low_only.eps2, 0.0);
        assert_eq!(low_only.log_budget, f64::INFINITY);
    }

    #[test]
    fn low_pass_properties() {
        let trace = near_field_trace(
            &AggregateSpectrum::new(vec![1.0, 0.5, 0.25, 0.1]).unwrap(),
            3.0,
            1.0,
        )
        .unwrap();
        let once = trace.low_pass(1);
        assert_eq!(once.low_pass(1), once);
        assert_eq!(trace.low_pass(3), trace);
        assert!(once.norm(0) <= trace.norm(0));
    }

    #[test]
    fn domain_errors() {
        let agg = single(0, 1.0);
        assert!(matches!(
            near_field_trace(&agg, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            near_field_trace(&agg, 1.0, -1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            near_field_trace(&agg, 0.05, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zero_spectrum_norm_identity() {
        let (lhs, rhs) = norm_identity_check(&CoefficientSpectrum::zeros(3), 4.0, 1.0).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn single_degree_norm_identity() {
        let mut s = CoefficientSpectrum::zeros(3);
        s.set(3, -2, Complex64::new(0.4, -0.3)).unwrap();
        let (lhs, rhs) = norm_identity_check(&s, 2.5, 1.2).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9 * rhs);
    }
}
