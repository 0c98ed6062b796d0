//! Synthetic data: seeded decaying spectra, exact-norm noise, random
//! ensembles for estimate verification and wavenumber sweeps.
//!
//! Every random stream is a `ChaCha8Rng` seeded from a hash of
//! `(seed, tag, k, replicate)`, so results do not depend on thread
//! scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{low_frequency_check, split_at};
use crate::harmonics::{aggregate, AggregateSpectrum, CoefficientSpectrum};
use crate::obstacle::{
    default_inversion_cutoff, forward, invert, BoundaryPerturbation, ObstacleKind,
};
use crate::specfun::MAX_SUPPORTED_ORDER;
use crate::stability::{
    rhs_hard_obstacle, rhs_soft_obstacle, verify_estimate, Estimate, RhsTerms, SoftRhsForm,
    StabilityReport, MIN_KR,
};

const TAG_PROFILE: u64 = 0x7072_6f66;
const TAG_NOISE: u64 = 0x6e6f_6973;
const TAG_ENSEMBLE: u64 = 0x656e_736d;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent generator for the stream identified by `parts`.
pub fn stream_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    let key = parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)));
    ChaCha8Rng::seed_from_u64(key)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecayKind {
    Exponential { rate: f64 },
    Algebraic { power: f64 },
}

impl DecayKind {
    fn magnitude(&self, n: usize) -> f64 {
        match *self {
            DecayKind::Exponential { rate } => (-rate * n as f64).exp(),
            DecayKind::Algebraic { power } => (1.0 + n as f64).powf(-power),
        }
    }
}

/// Per-degree magnitudes `a_n = scale · e^{-ρn}` or `scale · (1+n)^{-p}`,
/// spread over the orders of each degree by a seeded random unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub decay: DecayKind,
    pub max_degree: usize,
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: f64,
    /// Enforce the conjugate symmetry of a real function.
    #[serde(default)]
    pub real: bool,
}

fn default_scale() -> f64 {
    1.0
}

impl DecayProfile {
    fn validate(&self) -> Result<()> {
        match self.decay {
            DecayKind::Exponential { rate } if !(rate > 0.0) => {
                return Err(Error::Input(format!(
                    "decay rate must be positive, got {rate}"
                )))
            }
            DecayKind::Algebraic { power } if !(power > 0.0) => {
                return Err(Error::Input(format!(
                    "decay power must be positive, got {power}"
                )))
            }
            _ => {}
        }
        if self.max_degree > MAX_SUPPORTED_ORDER {
            return Err(Error::OrderOutOfRange {
                order: self.max_degree,
                max: MAX_SUPPORTED_ORDER,
            });
        }
        if !(self.scale >= 0.0) || !self.scale.is_finite() {
            return Err(Error::Input(format!(
                "scale must be finite and nonnegative, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Fill `degree` (orders `-n..=n`) with a random vector of norm `magnitude`.
fn random_degree(
    rng: &mut ChaCha8Rng,
    n: usize,
    magnitude: f64,
    real: bool,
    out: &mut [Complex64],
) {
    if real {
        out[n] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for m in 1..=n {
            let v = gaussian_complex(rng);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            out[n + m] = v;
            out[n - m] = v.conj() * sign;
        }
    } else {
        for v in out.iter_mut() {
            *v = gaussian_complex(rng);
        }
    }
    let norm = out.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in out.iter_mut() {
        *v *= magnitude / norm;
    }
}

pub fn make_spectrum(profile: &DecayProfile) -> Result<CoefficientSpectrum> {
    profile.validate()?;
    let mut rng = stream_rng(profile.seed, &[TAG_PROFILE]);
    let mut spectrum = CoefficientSpectrum::zeros(profile.max_degree);
    for n in 0..=profile.max_degree {
        let magnitude = profile.scale * profile.decay.magnitude(n);
        random_degree(&mut rng, n, magnitude, profile.real, spectrum.degree_mut(n));
    }
    Ok(spectrum)
}

/// Add a random spectrum of exact norm `delta` (same degree range).
pub fn perturb(
    spectrum: &CoefficientSpectrum,
    delta: f64,
    seed: u64,
) -> Result<CoefficientSpectrum> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::Input(format!(
            "noise level must be nonnegative, got {delta}"
        )));
    }
    if delta == 0.0 {
        return Ok(spectrum.clone());
    }
    let mut rng = stream_rng(seed, &[TAG_NOISE]);
    let noise =
        CoefficientSpectrum::from_fn(spectrum.max_degree(), |_, _| gaussian_complex(&mut rng));
    let factor = delta / noise.energy().sqrt();
    Ok(spectrum.add(&noise.scale(Complex64::new(factor, 0.0))))
}

/// Wavenumber sweep of the linearized inverse obstacle problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub radius: f64,
    pub wavenumbers: Vec<f64>,
    pub delta: f64,
    pub replicates: usize,
    pub seed: u64,
    pub profile: DecayProfile,
    #[serde(default = "default_kind", with = "kind_serde")]
    pub kind: ObstacleKind,
}

fn default_kind() -> ObstacleKind {
    ObstacleKind::Soft
}

mod kind_serde {
    use super::ObstacleKind;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(kind: &ObstacleKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(kind.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ObstacleKind, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

impl SweepConfig {
    /// R = 1, δ = 1e-3, real exponential `d` with ρ = 1, k = 2..64 doubling,
    /// 20 noise replicates.
    pub fn canonical() -> Self {
        Self {
            radius: 1.0,
            wavenumbers: vec![2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
            delta: 1e-3,
            replicates: 20,
            seed: 20_131_220,
            profile: DecayProfile {
                decay: DecayKind::Exponential { rate: 1.0 },
                max_degree: 16,
                seed: 7,
                scale: 0.1,
                real: true,
            },
            kind: ObstacleKind::Soft,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.wavenumbers.is_empty() {
            return Err(Error::Input("sweep needs at least one wavenumber".into()));
        }
        if !(self.radius > 0.0) {
            return Err(Error::Input(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if let Some(k) = self
            .wavenumbers
            .iter()
            .find(|&&k| !(k * self.radius >= MIN_KR))
        {
            return Err(Error::Precondition(format!(
                "sweep requires kR >= {MIN_KR}, got k = {k}, R = {}",
                self.radius
            )));
        }
        if self.replicates == 0 {
            return Err(Error::Input("sweep needs at least one replicate".into()));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::Input(format!(
                "delta must be nonnegative, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// One wavenumber of a sweep; every real column is a mean over replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    pub cutoff: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub log_budget: f64,
    /// `‖d̂ - d‖²_{(0)}`
    pub lhs: f64,
    pub terms: RhsTerms,
    pub rhs_total: f64,
    /// `‖d̂ - d‖_{(0)}`
    pub reconstruction_error: f64,
    /// Whether `lhs <= rhs` held for every replicate.
    pub all_satisfied: bool,
}

struct SweepSample {
    eps1: f64,
    eps2: f64,
    log_budget: f64,
    lhs: f64,
    terms: RhsTerms,
    error: f64,
}

fn sweep_sample(
    config: &SweepConfig,
    d: &BoundaryPerturbation,
    amplitude: &CoefficientSpectrum,
    k: f64,
    cutoff: usize,
    replicate: usize,
) -> Result<SweepSample> {
    let radius = config.radius;
    let noise_seed = stream_rng(config.seed, &[k.to_bits(), replicate as u64]).random::<u64>();
    let noisy = perturb(amplitude, config.delta, noise_seed)?;
    let estimate = invert(config.kind, &noisy, k, radius, cutoff)?;
    let error = BoundaryPerturbation::new(estimate.spectrum.sub(&d.spectrum));

    let error_amplitude = forward(config.kind, &error, k, radius)?;
    let split = split_at(&aggregate(&error_amplitude), cutoff);
    let d_norm1 = error.norm(1, radius);
    let terms = match config.kind {
        ObstacleKind::Soft => rhs_soft_obstacle(
            split.eps1,
            split.eps2,
            split.log_budget,
            k,
            radius,
            d_norm1,
            SoftRhsForm::T2Based,
        )?,
        ObstacleKind::Hard => {
            rhs_hard_obstacle(split.eps1, split.eps2, split.log_budget, k, radius, d_norm1)?
        }
    };
    let error_norm = error.norm(0, radius);
    Ok(SweepSample {
        eps1: split.eps1,
        eps2: split.eps2,
        log_budget: split.log_budget,
        lhs: error_norm * error_norm,
        terms,
        error: error_norm,
    })
}

pub fn ksweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let profile = DecayProfile {
        real: true,
        ..config.profile
    };
    let d = BoundaryPerturbation::new(make_spectrum(&profile)?);

    config
        .wavenumbers
        .par_iter()
        .map(|&k| {
            let amplitude = forward(config.kind, &d, k, config.radius)?;
            let cutoff = default_inversion_cutoff(k, config.radius);
            let samples = (0..config.replicates)
                .map(|r| sweep_sample(config, &d, &amplitude, k, cutoff, r))
                .collect::<Result<Vec<_>>>()?;
            let count = samples.len() as f64;
            let mean = |f: &dyn Fn(&SweepSample) -> f64| samples.iter().map(f).sum::<f64>() / count;
            let terms = RhsTerms {
                lipschitz: mean(&|s| s.terms.lipschitz),
                holder: mean(&|s| s.terms.holder),
                apriori: mean(&|s| s.terms.apriori),
            };
            Ok(SweepRow {
                k,
                cutoff,
                eps1: mean(&|s| s.eps1),
                eps2: mean(&|s| s.eps2),
                log_budget: mean(&|s| s.log_budget),
                lhs: mean(&|s| s.lhs),
                terms,
                rhs_total: terms.total(),
                reconstruction_error: mean(&|s| s.error),
                all_satisfied: samples.iter().all(|s| s.lhs <= s.terms.total()),
            })
        })
        .collect()
}

/// Random decaying far-field spectra with `kR` log-uniform in a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub size: usize,
    pub seed: u64,
    pub kr_min: f64,
    pub kr_max: f64,
    pub max_degree: usize,
}

impl EnsembleConfig {
    pub fn new(size: usize, seed: u64, kr_min: f64, kr_max: f64) -> Self {
        Self {
            size,
            seed,
            kr_min,
            kr_max,
            max_degree: MAX_SUPPORTED_ORDER,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::Input("ensemble size must be positive".into()));
        }
        if !(self.kr_min >= MIN_KR) || !(self.kr_max >= self.kr_min) || !self.kr_max.is_finite() {
            return Err(Error::Precondition(format!(
                "ensemble kR range [{}, {}] must lie in [{MIN_KR}, ∞)",
                self.kr_min, self.kr_max
            )));
        }
        if self.max_degree > MAX_SUPPORTED_ORDER || self.max_degree < 1 {
            return Err(Error::Input(format!(
                "ensemble max degree must be in 1..={MAX_SUPPORTED_ORDER}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    pub index: usize,
    pub k: f64,
    pub radius: f64,
    pub spectrum: CoefficientSpectrum,
}

/// Member `index` of the ensemble.
///
/// The far-field norm is drawn log-uniformly from `[1e-6, 1]`, so that
/// `ε₂ <= 1` and `E >= 0`.
pub fn ensemble_member(config: &EnsembleConfig, index: usize) -> Result<EnsembleMember> {
    let mut rng = stream_rng(config.seed, &[TAG_ENSEMBLE, index as u64]);
    let kr =
        (config.kr_min.ln() + rng.random::<f64>() * (config.kr_max / config.kr_min).ln()).exp();
    let radius = 0.5 + 1.5 * rng.random::<f64>();
    let k = kr / radius;
    let decay = if rng.random::<bool>() {
        DecayKind::Exponential {
            rate: (0.1f64.ln() + rng.random::<f64>() * 20f64.ln()).exp(),
        }
    } else {
        DecayKind::Algebraic {
            power: 0.5 + 3.5 * rng.random::<f64>(),
        }
    };
    let max_degree = rng.random_range(1..=config.max_degree);
    let norm = 10f64.powf(-6.0 * rng.random::<f64>());
    let profile = DecayProfile {
        decay,
        max_degree,
        seed: rng.random(),
        scale: 1.0,
        real: false,
    };
    let raw = make_spectrum(&profile)?;
    let spectrum = raw.scale(Complex64::new(norm / raw.energy().sqrt(), 0.0));
    Ok(EnsembleMember {
        index,
        k,
        radius,
        spectrum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateTally {
    pub estimate: Estimate,
    pub checked: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub min_relative_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub config: EnsembleConfig,
    pub tallies: Vec<EstimateTally>,
    pub low_frequency_checked: usize,
    pub low_frequency_violations: usize,
    /// Member-level reports in ensemble order, one per estimate.
    pub members: Vec<Vec<StabilityReport>>,
}

impl EnsembleReport {
    pub fn passed(&self) -> bool {
        self.low_frequency_violations == 0
            && self
                .tallies
                .iter()
                .all(|t| t.violations == 0 && t.min_slack > 0.0)
    }

    /// Deterministic text rendering (summary plus one line per member).
    pub fn render(&self, detailed: bool) -> String {
        let mut out = format!(
            "ensemble size={} seed={} kR=[{},{}] max_degree={}\n",
            self.config.size,
            self.config.seed,
            self.config.kr_min,
            self.config.kr_max,
            self.config.max_degree
        );
        for t in &self.tallies {
            out.push_str(&format!(
                "{}: checked={} violations={} min_slack={:.16e} min_relative_slack={:.16e}\n",
                t.estimate.name(),
                t.checked,
                t.violations,
                t.min_slack,
                t.min_relative_slack
            ));
        }
        out.push_str(&format!(
            "low_frequency: checked={} violations={}\n",
            self.low_frequency_checked, self.low_frequency_violations
        ));
        if detailed {
            for (i, reports) in self.members.iter().enumerate() {
                for r in reports {
                    out.push_str(&format!(
                        "member={i} estimate={} k={:.16e} R={:.16e} N={} lhs={:.16e} rhs={:.16e} ok={}\n",
                        r.estimate.name(),
                        r.k,
                        r.radius,
                        r.cutoff,
                        r.lhs,
                        r.rhs_total,
                        r.satisfied
                    ));
                }
            }
        }
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

pub fn verify_ensemble(config: &EnsembleConfig, estimates: &[Estimate]) -> Result<EnsembleReport> {
    config.validate()?;
    let per_member: Vec<(Vec<StabilityReport>, bool)> = (0..config.size)
        .into_par_iter()
        .map(|i| {
            let member = ensemble_member(config, i)?;
            let agg: AggregateSpectrum = aggregate(&member.spectrum);
            let reports = estimates
                .iter()
                .map(|&e| verify_estimate(&agg, member.k, member.radius, e))
                .collect::<Result<Vec<_>>>()?;
            let low = low_frequency_check(&agg, member.k, member.radius)?;
            Ok((reports, low.satisfied))
        })
        .collect::<Result<_>>()?;

    let tallies = estimates
        .iter()
        .enumerate()
        .map(|(slot, &estimate)| {
            let mut tally = EstimateTally {
                estimate,
                checked: 0,
                violations: 0,
                min_slack: f64::INFINITY,
                min_relative_slack: f64::INFINITY,
            };
            for (reports, _) in &per_member {
                let r = &reports[slot];
                tally.checked += 1;
                if !r.satisfied {
                    tally.violations += 1;
                }
                tally.min_slack = tally.min_slack.min(r.slack());
                tally.min_relative_slack = tally.min_relative_slack.min(r.relative_slack());
            }
            tally
        })
        .collect();
    let low_frequency_violations = per_member.iter().filter(|(_, ok)| !ok).count();
    Ok(EnsembleReport {
        config: *config,
        tallies,
        low_frequency_checked: per_member.len(),
        low_frequency_violations,
        members: per_member.into_iter().map(|(r, _)| r).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_profile(seed: u64) -> DecayProfile {
        DecayProfile {
            decay: DecayKind::Exponential { rate: 1.0 },
            max_degree: 10,
            seed,
            scale: 1.0,
            real: false,
        }
    }

    #[test]
    fn spectra_are_reproducible() {
        assert_eq!(
            make_spectrum(&exp_profile(3)).unwrap(),
            make_spectrum(&exp_profile(3)).unwrap()
        );
        assert_ne!(
            make_spectrum(&exp_profile(3)).unwrap(),
            make_spectrum(&exp_profile(4)).unwrap()
        );
    }

    #[test]
    fn exponential_profile_ratio() {
        let agg = aggregate(&make_spectrum(&exp_profile(1)).unwrap());
        for n in 0..10 {
            let ratio = agg.values()[n] / agg.values()[n + 1];
            assert!((ratio - std::f64::consts::E).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_scale_gives_zero_spectrum() {
        let p = DecayProfile {
            scale: 0.0,
            ..exp_profile(1)
        };
        assert_eq!(make_spectrum(&p).unwrap().energy(), 0.0);
    }

    #[test]
    fn real_profiles_are_conjugate_symmetric() {
        let p = DecayProfile {
            real: true,
            ..exp_profile(9)
        };
        assert!(make_spectrum(&p).unwrap().conjugate_symmetry_residual() < 1e-15);
    }

    #[test]
    fn profile_validation() {
        let bad = DecayProfile {
            decay: DecayKind::Exponential { rate: 0.0 },
            ..exp_profile(1)
        };
        assert!(make_spectrum(&bad).is_err());
        let bad = DecayProfile {
            max_degree: 61,
            ..exp_profile(1)
        };
        assert!(make_spectrum(&bad).is_err());
    }

    #[test]
    fn noise_has_exact_norm() {
        let s = make_spectrum(&exp_profile(2)).unwrap();
        assert_eq!(perturb(&s, 0.0, 5).unwrap(), s);
        let a = perturb(&s, 1e-3, 5).unwrap().sub(&s);
        let b = perturb(&s, 1e-3, 6).unwrap().sub(&s);
        assert!((a.energy() - 1e-6).abs() <= 1e-12);
        assert!((b.energy() - 1e-6).abs() <= 1e-12);
        assert_ne!(a, b);
        assert!(perturb(&s, -1.0, 0).is_err());
    }

    #[test]
    fn single_wavenumber_sweep() {
        let config = SweepConfig {
            wavenumbers: vec![4.0],
            replicates: 2,
            ..SweepConfig::canonical()
        };
        let rows = ksweep(&config).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].cutoff, 2);
        assert!(rows[0].all_satisfied);
    }

    #[test]
    fn sweep_validation() {
        let empty = SweepConfig {
            wavenumbers: vec![],
            ..SweepConfig::canonical()
        };
        assert!(ksweep(&empty).is_err());
        let low = SweepConfig {
            wavenumbers: vec![1.0],
            ..SweepConfig::canonical()
        };
        assert!(matches!(ksweep(&low), Err(Error::Precondition(_))));
    }

    #[test]
    fn ensemble_members_respect_configuration() {
        let config = EnsembleConfig {
            max_degree: 12,
            ..EnsembleConfig::new(30, 11, 2.0, 100.0)
        };
        for i in 0..30 {
            let m = ensemble_member(&config, i).unwrap();
            let kr = m.k * m.radius;
            assert!((2.0..=100.0 + 1e-9).contains(&kr));
            assert!(m.spectrum.max_degree() <= 12);
            assert!(m.spectrum.energy() <= 1.0 + 1e-12);
        }
        assert!(verify_ensemble(&EnsembleConfig::new(0, 1, 2.0, 3.0), &Estimate::ALL).is_err());
        assert!(verify_ensemble(&EnsembleConfig::new(3, 1, 1.0, 3.0), &Estimate::ALL).is_err());
    }
}
