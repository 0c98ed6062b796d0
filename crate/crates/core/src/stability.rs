//! Right-hand sides of the near-field stability estimates and their
//! verification against synthesized fields.
//!
//! With `N = ⌊√(kR)⌋`, `ε₁, ε₂` the far-field energy below/above `N` and
//! `E = -ln ε₂`, for `kR >= 2`:
//!
//! ```text
//! T1:    ‖u‖²₀    <= (2e²/π) ε₁² + (2/π) e^{2/R} ε₂               + R² M₁² / (E + k)
//! T2:    ‖u‖²₀    <= (2e²/π) ε₁² + √(2R/(πk)) e^{1/R} M₁ ε₂^{1/2} + R² M₁² / (E + k)
//! T1der: ‖∂_r u‖²₀ <= (e²/π)(3+√5) k² ε₁² + k² e^{2/R} ε₂          + R² M₂² / (√(E+k) - 1)²
//! ```
//!
//! where `M₁ = ‖u‖₁` and `M₂ = ‖∂_r u‖₁`. The three terms are reported
//! separately as the Lipschitz, Hölder and a-priori parts.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::field::{near_field_trace, split_spectrum, AprioriBudget};
use crate::harmonics::AggregateSpectrum;

/// Smallest `kR` for which the estimates are stated.
pub const MIN_KR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimate {
    T1,
    T2,
    T1Der,
}

impl Estimate {
    pub const ALL: [Estimate; 3] = [Estimate::T1, Estimate::T2, Estimate::T1Der];

    pub fn name(self) -> &'static str {
        match self {
            Estimate::T1 => "T1",
            Estimate::T2 => "T2",
            Estimate::T1Der => "T1der",
        }
    }
}

impl std::str::FromStr for Estimate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" | "t1" => Ok(Estimate::T1),
            "T2" | "t2" => Ok(Estimate::T2),
            "T1der" | "t1der" | "T1DER" => Ok(Estimate::T1Der),
            other => Err(Error::Input(format!("unknown estimate '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RhsTerms {
    pub lipschitz: f64,
    pub holder: f64,
    pub apriori: f64,
}

impl RhsTerms {
    pub fn total(&self) -> f64 {
        self.lipschitz + self.holder + self.apriori
    }

    /// Hölder plus a-priori part: the terms that decay with `k`.
    pub fn non_lipschitz(&self) -> f64 {
        self.holder + self.apriori
    }
}

fn require_kr(k: f64, radius: f64) -> Result<()> {
    if !(k > 0.0) || !(radius > 0.0) {
        return Err(Error::Precondition(format!(
            "k and R must be positive, got k = {k}, R = {radius}"
        )));
    }
    if !(k * radius >= MIN_KR) {
        return Err(Error::Precondition(format!(
            "estimates require kR >= {MIN_KR}, got kR = {}",
            k * radius
        )));
    }
    Ok(())
}

fn require_eps(eps1: f64, eps2: f64) -> Result<()> {
    if !(eps1 >= 0.0) || !(eps2 >= 0.0) {
        return Err(Error::Precondition(format!(
            "eps1 and eps2 must be nonnegative, got {eps1}, {eps2}"
        )));
    }
    Ok(())
}

/// `R² M² / denominator`, zero when the denominator is infinite.
fn apriori(radius: f64, budget: f64, denominator: f64) -> f64 {
    if denominator.is_infinite() {
        0.0
    } else {
        radius * radius * budget * budget / denominator
    }
}

fn t1_denominator(log_budget: f64, k: f64) -> Result<f64> {
    let d = log_budget + k;
    if !(d > 0.0) {
        return Err(Error::Precondition(format!(
            "E + k must be positive, got {d}"
        )));
    }
    Ok(d)
}

fn t1der_denominator(log_budget: f64, k: f64) -> Result<f64> {
    let s = log_budget + k;
    if !(s > 1.0) {
        return Err(Error::Precondition(format!("E + k must exceed 1, got {s}")));
    }
    if s.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(s - 2.0 * s.sqrt() + 1.0)
}

fn lipschitz_t1(eps1: f64) -> f64 {
    2.0 * E * E / PI * eps1 * eps1
}

fn lipschitz_t1der(eps1: f64, k: f64) -> f64 {
    E * E / PI * (3.0 + 5f64.sqrt()) * k * k * eps1 * eps1
}

pub fn rhs_t1(
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    k: f64,
    radius: f64,
    m1: f64,
) -> Result<RhsTerms> {
    require_kr(k, radius)?;
    require_eps(eps1, eps2)?;
    let denominator = t1_denominator(log_budget, k)?;
    Ok(RhsTerms {
        lipschitz: lipschitz_t1(eps1),
        holder: 2.0 / PI * (2.0 / radius).exp() * eps2,
        apriori: apriori(radius, m1, denominator),
    })
}

pub fn rhs_t2(
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    k: f64,
    radius: f64,
    m1: f64,
) -> Result<RhsTerms> {
    require_kr(k, radius)?;
    require_eps(eps1, eps2)?;
    let denominator = t1_denominator(log_budget, k)?;
    Ok(RhsTerms {
        lipschitz: lipschitz_t1(eps1),
        holder: (2.0 * radius / (PI * k)).sqrt() * (1.0 / radius).exp() * m1 * eps2.sqrt(),
        apriori: apriori(radius, m1, denominator),
    })
}

pub fn rhs_t1der(
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    k: f64,
    radius: f64,
    m2: f64,
) -> Result<RhsTerms> {
    require_kr(k, radius)?;
    require_eps(eps1, eps2)?;
    let denominator = t1der_denominator(log_budget, k)?;
    Ok(RhsTerms {
        lipschitz: lipschitz_t1der(eps1, k),
        holder: k * k * (2.0 / radius).exp() * eps2,
        apriori: apriori(radius, m2, denominator),
    })
}

pub fn rhs(
    which: Estimate,
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    k: f64,
    radius: f64,
    budget: f64,
) -> Result<RhsTerms> {
    match which {
        Estimate::T1 => rhs_t1(eps1, eps2, log_budget, k, radius, budget),
        Estimate::T2 => rhs_t2(eps1, eps2, log_budget, k, radius, budget),
        Estimate::T1Der => rhs_t1der(eps1, eps2, log_budget, k, radius, budget),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub estimate: Estimate,
    pub lhs: f64,
    pub terms: RhsTerms,
    pub rhs_total: f64,
    pub satisfied: bool,
    pub k: f64,
    pub radius: f64,
    pub cutoff: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub log_budget: f64,
    /// `M₁` for T1/T2, `M₂` for T1der.
    pub apriori_norm: f64,
}

impl StabilityReport {
    pub fn slack(&self) -> f64 {
        self.rhs_total - self.lhs
    }

    /// `(rhs - lhs) / rhs`, or 0 when both sides vanish.
    pub fn relative_slack(&self) -> f64 {
        if self.rhs_total == 0.0 {
            0.0
        } else {
            self.slack() / self.rhs_total
        }
    }
}

/// Synthesize the near field of `spectrum` on `|x| = R` and test one
/// estimate.
pub fn verify_estimate(
    spectrum: &AggregateSpectrum,
    k: f64,
    radius: f64,
    which: Estimate,
) -> Result<StabilityReport> {
    require_kr(k, radius)?;
    let trace = near_field_trace(spectrum, k, radius)?;
    let split = split_spectrum(spectrum, k, radius);
    let budget = AprioriBudget::from_trace(&trace);
    let (lhs, apriori_norm) = match which {
        Estimate::T1 | Estimate::T2 => (trace.norm(0).powi(2), budget.m1),
        Estimate::T1Der => (trace.radial_norm(0).powi(2), budget.m2),
    };
    let terms = rhs(
        which,
        split.eps1,
        split.eps2,
        split.log_budget,
        k,
        radius,
        apriori_norm,
    )?;
    let rhs_total = terms.total();
    Ok(StabilityReport {
        estimate: which,
        lhs,
        terms,
        rhs_total,
        satisfied: lhs <= rhs_total,
        k,
        radius,
        cutoff: split.cutoff,
        eps1: split.eps1,
        eps2: split.eps2,
        log_budget: split.log_budget,
        apriori_norm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoftRhsForm {
    T1Based,
    T2Based,
}

/// Bound on `‖d‖²₀` for the linearized soft obstacle, obtained from T1 or T2
/// applied to the scattered field with `M₁ = √(k²R²+1)/R · ‖d‖₁`.
pub fn rhs_soft_obstacle(
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    k: f64,
    radius: f64,
    d_norm1: f64,
    variant: SoftRhsForm,
) -> Result<RhsTerms> {
    require_kr(k, radius)?;
    require_eps(eps1, eps2)?;
    let denominator = t1_denominator(log_budget, k)?;
    let kr2 = (k * radius).powi(2) + 1.0;
    let scale = radius * radius / kr2;
    let holder = match variant {
        SoftRhsForm::T1Based => 2.0 / PI * (2.0 / radius).exp() * eps2,
        SoftRhsForm::T2Based => {
            let m1 = kr2.sqrt() / radius * d_norm1;
            (2.0 * radius / (PI * k)).sqrt() * (1.0 / radius).exp() * m1 * eps2.sqrt()
        }
    };
    Ok(RhsTerms {
        lipschitz: scale * lipschitz_t1(eps1),
        holder: scale * holder,
        apriori: apriori(radius, d_norm1, denominator),
    })
}

/// Bound on `‖d‖²₀` for the linearized hard obstacle, from T1der with
/// `M₂ = k²R/√(k²R²+1) · ‖d‖₁`.
pub fn rhs_hard_obstacle(
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    k: f64,
    radius: f64,
    d_norm1: f64,
) -> Result<RhsTerms> {
    require_kr(k, radius)?;
    require_eps(eps1, eps2)?;
    let denominator = t1der_denominator(log_budget, k)?;
    let kr = k * radius;
    let prefactor = (kr * kr + 1.0) / (kr * kr);
    Ok(RhsTerms {
        lipschitz: prefactor * E * E / PI * (3.0 + 5f64.sqrt()) * eps1 * eps1,
        holder: prefactor * (2.0 / radius).exp() * eps2,
        apriori: apriori(radius, d_norm1, denominator),
    })
}
