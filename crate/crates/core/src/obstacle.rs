//! Linearized inverse obstacle scattering about the sphere `D₀ = B_R`.
//!
//! The reference fields are the radiating spherical waves
//!
//! ```text
//! soft: u₀(x) = R e^{-ikR} e^{ikr}/r,                 u₀ = 1 on |x| = R
//! hard: u₁(x) = R²/((ikR - 1) e^{ikR}) · e^{ikr}/r,   ∂_r u₁ = 1 on |x| = R
//! ```
//!
//! Perturbing the radius to `R + d(σ)` produces, to first order, radiating
//! fields with boundary data `v₀ = -d ∂_r u₀` (soft) and `∂_r v₁ = k² u₁ d`
//! (hard). Both maps are diagonal in the harmonic basis; the far-field
//! normalization is `u_n(r) = k·i·a_n·ĥ_n(kr)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{default_cutoff, hankel_column, sobolev_norm};
use crate::harmonics::{aggregate, CoefficientSpectrum};
use crate::specfun::{hankel, HankelValue, MAX_SUPPORTED_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObstacleKind {
    Soft,
    Hard,
}

impl ObstacleKind {
    pub fn name(self) -> &'static str {
        match self {
            ObstacleKind::Soft => "soft",
            ObstacleKind::Hard => "hard",
        }
    }
}

impl std::str::FromStr for ObstacleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "soft" => Ok(ObstacleKind::Soft),
            "hard" => Ok(ObstacleKind::Hard),
            other => Err(Error::Input(format!("unknown obstacle kind '{other}'"))),
        }
    }
}

/// Trace of the unperturbed field on `|x| = R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    pub kind: ObstacleKind,
    pub k: f64,
    pub radius: f64,
    pub trace_value: Complex64,
    pub trace_radial_derivative: Complex64,
}

fn check_parameters(k: f64, radius: f64) -> Result<()> {
    if !(k > 0.0) || !(radius > 0.0) || !k.is_finite() || !radius.is_finite() {
        return Err(Error::Domain(format!(
            "wavenumber and radius must be positive, got k = {k}, R = {radius}"
        )));
    }
    Ok(())
}

pub fn incident_trace(kind: ObstacleKind, k: f64, radius: f64) -> Result<IncidentWave> {
    check_parameters(k, radius)?;
    // (ikR - 1)/R
    let ikr_minus_one = Complex64::new(-1.0, k * radius);
    let (trace_value, trace_radial_derivative) = match kind {
        ObstacleKind::Soft => (Complex64::new(1.0, 0.0), ikr_minus_one / radius),
        ObstacleKind::Hard => (radius / ikr_minus_one, Complex64::new(1.0, 0.0)),
    };
    Ok(IncidentWave {
        kind,
        k,
        radius,
        trace_value,
        trace_radial_derivative,
    })
}

/// Real perturbation `d` of the sphere radius, stored by its harmonic
/// coefficients `d_{m,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPerturbation {
    pub spectrum: CoefficientSpectrum,
}

impl BoundaryPerturbation {
    pub fn new(spectrum: CoefficientSpectrum) -> Self {
        Self { spectrum }
    }

    /// Deviation from the conjugate symmetry of a real function, relative to
    /// the largest coefficient.
    pub fn reality_residual(&self) -> f64 {
        let scale = self.spectrum.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            self.spectrum.conjugate_symmetry_residual() / scale
        }
    }

    pub fn is_real(&self, tolerance: f64) -> bool {
        self.reality_residual() <= tolerance
    }

    /// `‖d‖_{(l)}(∂B_R)`
    pub fn norm(&self, l: u32, radius: f64) -> f64 {
        let per_degree: Vec<Complex64> = aggregate(&self.spectrum)
            .values()
            .iter()
            .map(|&a| Complex64::new(a, 0.0))
            .collect();
        sobolev_norm(&per_degree, l, radius)
    }
}

fn check_degree(max_degree: usize) -> Result<()> {
    if max_degree > MAX_SUPPORTED_ORDER {
        return Err(Error::OrderOutOfRange {
            order: max_degree,
            max: MAX_SUPPORTED_ORDER,
        });
    }
    Ok(())
}

fn guarded(h: &HankelValue, derivative: bool) -> Result<Complex64> {
    let v = if derivative { h.derivative } else { h.value };
    if v.norm() == 0.0 || !v.is_finite() {
        return Err(Error::Underflow(format!(
            "|ĥ{}_{}({})| is not a usable divisor",
            if derivative { "'" } else { "" },
            h.order,
            h.argument
        )));
    }
    Ok(v)
}

/// Per-degree factor `g_n` with `a_{m,n} = g_n · d_{m,n}`.
pub fn forward_gain(kind: ObstacleKind, n: usize, k: f64, radius: f64) -> Result<Complex64> {
    let incident = incident_trace(kind, k, radius)?;
    let h = hankel(n, k * radius)?;
    gain_from(&incident, &h)
}

fn gain_from(incident: &IncidentWave, h: &HankelValue) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    match incident.kind {
        // v₀(R) = -d ∂_r u₀(R) = k i a ĥ_n(kR)
        ObstacleKind::Soft => {
            Ok(-incident.trace_radial_derivative / (i * incident.k * guarded(h, false)?))
        }
        // ∂_r v₁(R) = k² u₁(R) d = k² i a ĥ_n'(kR)
        ObstacleKind::Hard => Ok(incident.trace_value / (i * guarded(h, true)?)),
    }
}

fn gains(kind: ObstacleKind, max_degree: usize, k: f64, radius: f64) -> Result<Vec<Complex64>> {
    check_degree(max_degree)?;
    let incident = incident_trace(kind, k, radius)?;
    hankel_column(max_degree, k * radius)?
        .iter()
        .map(|h| gain_from(&incident, h))
        .collect()
}

/// Far-field spectrum of the linearized scattered field produced by `d`.
pub fn forward(
    kind: ObstacleKind,
    d: &BoundaryPerturbation,
    k: f64,
    radius: f64,
) -> Result<CoefficientSpectrum> {
    let g = gains(kind, d.spectrum.max_degree(), k, radius)?;
    Ok(d.spectrum.map_degrees(|n, c| g[n] * c))
}

pub fn forward_soft(d: &BoundaryPerturbation, k: f64, radius: f64) -> Result<CoefficientSpectrum> {
    forward(ObstacleKind::Soft, d, k, radius)
}

pub fn forward_hard(d: &BoundaryPerturbation, k: f64, radius: f64) -> Result<CoefficientSpectrum> {
    forward(ObstacleKind::Hard, d, k, radius)
}

/// Recover `d` from a far-field spectrum, keeping degrees `<= cutoff`.
pub fn invert(
    kind: ObstacleKind,
    amplitude: &CoefficientSpectrum,
    k: f64,
    radius: f64,
    cutoff: usize,
) -> Result<BoundaryPerturbation> {
    check_degree(cutoff)?;
    let top = amplitude.max_degree().min(cutoff);
    let g = gains(kind, top, k, radius)?;
    let spectrum = amplitude.map_degrees(|n, a| {
        if n <= top {
            a / g[n]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(BoundaryPerturbation { spectrum })
}

pub fn invert_soft(
    amplitude: &CoefficientSpectrum,
    k: f64,
    radius: f64,
    cutoff: usize,
) -> Result<BoundaryPerturbation> {
    invert(ObstacleKind::Soft, amplitude, k, radius, cutoff)
}

pub fn invert_hard(
    amplitude: &CoefficientSpectrum,
    k: f64,
    radius: f64,
    cutoff: usize,
) -> Result<BoundaryPerturbation> {
    invert(ObstacleKind::Hard, amplitude, k, radius, cutoff)
}

/// Default truncation `⌊√(kR)⌋`, capped at the supported degree.
pub fn default_inversion_cutoff(k: f64, radius: f64) -> usize {
    default_cutoff(k, radius).min(MAX_SUPPORTED_ORDER)
}

/// Amplification of data errors at degree `n` on the way from far field to
/// the trace: `|k·i·ĥ_n(kR)|`.
pub fn continuation_gain(n: usize, k: f64, radius: f64) -> Result<f64> {
    check_parameters(k, radius)?;
    Ok(k * hankel(n, k * radius)?.magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_d() -> BoundaryPerturbation {
        let mut s = CoefficientSpectrum::zeros(0);
        s.set(0, 0, c(1.0, 0.0)).unwrap();
        BoundaryPerturbation::new(s)
    }

    #[test]
    fn incident_traces() {
        let soft = incident_trace(ObstacleKind::Soft, 4.0, 1.0).unwrap();
        assert_eq!(soft.trace_value, c(1.0, 0.0));
        assert_eq!(soft.trace_radial_derivative, c(-1.0, 4.0));
        assert!((soft.trace_radial_derivative.norm() - 17f64.sqrt()).abs() < 1e-15);
        let hard = incident_trace(ObstacleKind::Hard, 4.0, 1.0).unwrap();
        assert_eq!(hard.trace_radial_derivative, c(1.0, 0.0));
        assert!((hard.trace_value.norm() - 1.0 / 17f64.sqrt()).abs() < 1e-15);
        let (k, r): (f64, f64) = (3.0, 0.7);
        let soft = incident_trace(ObstacleKind::Soft, k, r).unwrap();
        let kr2 = (k * r).powi(2) + 1.0;
        assert!((soft.trace_radial_derivative.norm_sqr() - kr2 / (r * r)).abs() < 1e-13);
        let hard = incident_trace(ObstacleKind::Hard, k, r).unwrap();
        assert!(((k * k * hard.trace_value).norm() - k * k * r / kr2.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn forward_soft_order_zero() {
        let a = forward_soft(&unit_d(), 4.0, 1.0).unwrap();
        assert!((a.get(0, 0).norm() - 17f64.sqrt() * (PI / 2.0).sqrt()).abs() < 1e-13);
        assert!((a.get(0, 0).norm() - 5.167_546_570_231_684).abs() < 1e-13);
    }

    #[test]
    fn forward_hard_order_zero() {
        let a = forward_hard(&unit_d(), 4.0, 1.0).unwrap();
        let dh = (2.0 / PI).sqrt() * 17f64.sqrt() / 16.0;
        assert!((a.get(0, 0).norm() - (1.0 / 17f64.sqrt()) / dh).abs() < 1e-13);
        assert!((a.get(0, 0).norm() - 1.179_589_776_296_941_4).abs() < 1e-13);
    }

    #[test]
    fn zero_maps_to_zero() {
        let d = BoundaryPerturbation::new(CoefficientSpectrum::zeros(4));
        for kind in [ObstacleKind::Soft, ObstacleKind::Hard] {
            assert_eq!(forward(kind, &d, 4.0, 1.0).unwrap().energy(), 0.0);
            let back = invert(kind, &CoefficientSpectrum::zeros(4), 4.0, 1.0, 4).unwrap();
            assert_eq!(back.spectrum.energy(), 0.0);
        }
    }

    #[test]
    fn truncation_keeps_low_degrees_only() {
        let d = BoundaryPerturbation::new(CoefficientSpectrum::from_fn(5, |n, m| {
            c(1.0 + n as f64, 0.1 * m as f64)
        }));
        for kind in [ObstacleKind::Soft, ObstacleKind::Hard] {
            let a = forward(kind, &d, 6.0, 1.0).unwrap();
            let back = invert(kind, &a, 6.0, 1.0, 3).unwrap();
            for (n, m, v) in back.spectrum.iter() {
                if n <= 3 {
                    assert!(
                        (v - d.spectrum.get(n, m)).norm() <= 1e-12 * d.spectrum.get(n, m).norm()
                    );
                } else {
                    assert_eq!(v, c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn linearity() {
        let d = BoundaryPerturbation::new(CoefficientSpectrum::from_fn(3, |n, m| {
            c(n as f64, m as f64)
        }));
        let alpha = c(0.3, -2.0);
        let scaled = BoundaryPerturbation::new(d.spectrum.scale(alpha));
        for kind in [ObstacleKind::Soft, ObstacleKind::Hard] {
            let lhs = forward(kind, &scaled, 5.0, 1.0).unwrap();
            let rhs = forward(kind, &d, 5.0, 1.0).unwrap().scale(alpha);
            assert!(lhs.sub(&rhs).energy().sqrt() <= 1e-13 * rhs.energy().sqrt());
        }
    }

    #[test]
    fn continuation_gain_grows_past_kr() {
        let (k, r) = (10.0, 1.0);
        let mut prev = 0.0;
        for n in 10..=60 {
            let g = continuation_gain(n, k, r).unwrap();
            assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(incident_trace(ObstacleKind::Soft, 0.0, 1.0).is_err());
        assert!(matches!(
            invert_soft(&CoefficientSpectrum::zeros(2), 4.0, 1.0, 61),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!("wobbly".parse::<ObstacleKind>().is_err());
    }
}
