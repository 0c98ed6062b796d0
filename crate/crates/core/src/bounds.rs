//! Explicit envelopes for `|ĥ_n(t)|` and `|ĥ_n'(t)|`.
//!
//! | envelope          | bound                                             | region   |
//! |-------------------|---------------------------------------------------|----------|
//! | `Low`             | `√2·e/(√π·t)`                                     | `n² < t` |
//! | `Global`          | `√2/(√π·t)·(1 + n/t)^n`                           | `t > 0`  |
//! | `LowDerivative`   | `√2·e/√π·(√(t²+1) + 1)/t²`                        | `n² < t` |
//! | `GlobalDerivative`| `√2/(√π·t)·(√(t²+1)/t + n/t)·(1 + n/t)^n`         | `t > 0`  |
//!
//! Both global envelopes coincide with the function itself at `n = 0`; those
//! points are flagged as tight and compared with `<=` up to rounding.

use std::f64::consts::{E, FRAC_2_PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::hankel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Envelope {
    Low,
    Global,
    LowDerivative,
    GlobalDerivative,
}

impl Envelope {
    pub const ALL: [Envelope; 4] = [
        Envelope::Low,
        Envelope::Global,
        Envelope::LowDerivative,
        Envelope::GlobalDerivative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Envelope::Low => "low",
            Envelope::Global => "global",
            Envelope::LowDerivative => "low_deriv",
            Envelope::GlobalDerivative => "global_deriv",
        }
    }

    pub fn bound(self, n: usize, t: f64) -> Result<f64> {
        match self {
            Envelope::Low => low_envelope(t),
            Envelope::Global => global_envelope(n, t),
            Envelope::LowDerivative => low_derivative_envelope(t),
            Envelope::GlobalDerivative => global_derivative_envelope(n, t),
        }
    }

    pub fn applies(self, n: usize, t: f64) -> bool {
        match self {
            Envelope::Low | Envelope::LowDerivative => in_low_region(n, t),
            Envelope::Global | Envelope::GlobalDerivative => t > 0.0,
        }
    }

    /// Whether the envelope equals the function identically at this order.
    pub fn is_tight(self, n: usize) -> bool {
        n == 0 && matches!(self, Envelope::Global | Envelope::GlobalDerivative)
    }

    fn bounds_derivative(self) -> bool {
        matches!(self, Envelope::LowDerivative | Envelope::GlobalDerivative)
    }
}

/// `n² < t`
pub fn in_low_region(n: usize, t: f64) -> bool {
    ((n * n) as f64) < t
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "envelope argument must be positive, got t = {t}"
        )));
    }
    Ok(())
}

pub fn low_envelope(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(FRAC_2_PI.sqrt() * E / t)
}

pub fn global_envelope(n: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    let x = n as f64 / t;
    Ok(FRAC_2_PI.sqrt() / t * (1.0 + x).powi(n as i32))
}

pub fn low_derivative_envelope(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(FRAC_2_PI.sqrt() * E * ((t * t + 1.0).sqrt() + 1.0) / (t * t))
}

pub fn global_derivative_envelope(n: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    let x = n as f64 / t;
    Ok(FRAC_2_PI.sqrt() / t * ((t * t + 1.0).sqrt() / t + x) * (1.0 + x).powi(n as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeReport {
    pub envelope: Envelope,
    pub n: usize,
    pub t: f64,
    pub value_magnitude: f64,
    pub bound: f64,
    pub applicable: bool,
    pub tight: bool,
    pub satisfied: bool,
}

/// Relative rounding allowance for the tight `n = 0` comparisons.
const TIGHT_ALLOWANCE: f64 = 4.0 * f64::EPSILON;

pub fn check_envelope(envelope: Envelope, n: usize, t: f64) -> Result<EnvelopeReport> {
    let h = hankel(n, t)?;
    let value_magnitude = if envelope.bounds_derivative() {
        h.derivative_magnitude()
    } else {
        h.magnitude()
    };
    Ok(report(
        envelope,
        n,
        t,
        value_magnitude,
        envelope.bound(n, t)?,
    ))
}

fn report(
    envelope: Envelope,
    n: usize,
    t: f64,
    value_magnitude: f64,
    bound: f64,
) -> EnvelopeReport {
    let applicable = envelope.applies(n, t);
    let tight = envelope.is_tight(n);
    let satisfied = if tight {
        value_magnitude <= bound * (1.0 + TIGHT_ALLOWANCE)
    } else {
        value_magnitude < bound
    };
    EnvelopeReport {
        envelope,
        n,
        t,
        value_magnitude,
        bound,
        applicable,
        tight,
        satisfied,
    }
}

/// `points` log-spaced arguments in `[t_min, t_max]` for orders `0..=max_order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundGrid {
    pub max_order: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for BoundGrid {
    fn default() -> Self {
        Self {
            max_order: 50,
            t_min: 0.1,
            t_max: 200.0,
            points: 200,
        }
    }
}

impl BoundGrid {
    pub fn arguments(&self) -> Result<Vec<f64>> {
        if !(self.t_min > 0.0) || !self.t_min.is_finite() || !self.t_max.is_finite() {
            return Err(Error::Domain(format!(
                "t_min must be positive, got {}",
                self.t_min
            )));
        }
        if self.t_max < self.t_min {
            return Err(Error::Domain(format!(
                "t_max = {} is below t_min = {}",
                self.t_max, self.t_min
            )));
        }
        if self.points == 0 {
            return Err(Error::Input("grid needs at least one point".into()));
        }
        Ok(log_space(self.t_min, self.t_max, self.points))
    }
}

pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

/// Aggregate over one envelope family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeTally {
    pub envelope: Envelope,
    pub applicable: usize,
    pub violations: usize,
    pub tight: usize,
    /// Smallest `bound / |value|` over applicable non-tight points.
    pub min_ratio: f64,
}

impl EnvelopeTally {
    fn new(envelope: Envelope) -> Self {
        Self {
            envelope,
            applicable: 0,
            violations: 0,
            tight: 0,
            min_ratio: f64::INFINITY,
        }
    }

    fn record(&mut self, r: &EnvelopeReport) {
        if !r.applicable {
            return;
        }
        self.applicable += 1;
        if !r.satisfied {
            self.violations += 1;
        }
        if r.tight {
            self.tight += 1;
        } else {
            self.min_ratio = self.min_ratio.min(r.bound / r.value_magnitude);
        }
    }

    fn merge(&mut self, other: &Self) {
        self.applicable += other.applicable;
        self.violations += other.violations;
        self.tight += other.tight;
        self.min_ratio = self.min_ratio.min(other.min_ratio);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSuiteReport {
    pub grid: BoundGrid,
    pub pairs: usize,
    pub tallies: [EnvelopeTally; 4],
    /// First few violating points, in grid order.
    pub first_violations: Vec<EnvelopeReport>,
}

impl BoundSuiteReport {
    pub fn total_violations(&self) -> usize {
        self.tallies.iter().map(|t| t.violations).sum()
    }

    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "bounds nmax={} t=[{},{}] points={} pairs={}",
            self.grid.max_order, self.grid.t_min, self.grid.t_max, self.grid.points, self.pairs
        );
        for t in &self.tallies {
            line.push_str(&format!(
                " {}:applicable={},violations={},tight={}",
                t.envelope.name(),
                t.applicable,
                t.violations,
                t.tight
            ));
        }
        line.push_str(if self.total_violations() == 0 {
            " PASS"
        } else {
            " FAIL"
        });
        line
    }
}

const MAX_LISTED_VIOLATIONS: usize = 10;

/// Check all four envelopes on every `(n, t)` of the grid.
pub fn run_suite(grid: &BoundGrid) -> Result<BoundSuiteReport> {
    let ts = grid.arguments()?;
    let per_order: Vec<([EnvelopeTally; 4], Vec<EnvelopeReport>)> = (0..=grid.max_order)
        .into_par_iter()
        .map(|n| {
            let mut tallies = Envelope::ALL.map(EnvelopeTally::new);
            let mut bad = Vec::new();
            for &t in &ts {
                let h = hankel(n, t)?;
                for (slot, env) in Envelope::ALL.iter().enumerate() {
                    let value = if env.bounds_derivative() {
                        h.derivative_magnitude()
                    } else {
                        h.magnitude()
                    };
                    let r = report(*env, n, t, value, env.bound(n, t)?);
                    tallies[slot].record(&r);
                    if r.applicable && !r.satisfied {
                        bad.push(r);
                    }
                }
            }
            Ok((tallies, bad))
        })
        .collect::<Result<_>>()?;

    let mut tallies = Envelope::ALL.map(EnvelopeTally::new);
    let mut first_violations = Vec::new();
    for (order_tallies, bad) in &per_order {
        for (total, part) in tallies.iter_mut().zip(order_tallies) {
            total.merge(part);
        }
        for r in bad {
            if first_violations.len() < MAX_LISTED_VIOLATIONS {
                first_violations.push(*r);
            }
        }
    }
    Ok(BoundSuiteReport {
        grid: *grid,
        pairs: ts.len() * (grid.max_order + 1),
        tallies,
        first_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn low_bound_worked_values() {
        // 40-digit reference values of the closed forms.
        assert!(rel(low_envelope(2.0).unwrap(), 1.084_437_551_419_227_5) < 1e-15);
        assert!(in_low_region(1, 2.0));
        assert!(!in_low_region(2, 2.0));
        let r = check_envelope(Envelope::Low, 1, 2.0).unwrap();
        assert!(r.applicable && r.satisfied);
        assert!(rel(r.value_magnitude, 0.446_031_029_038_192_78) < 1e-15);
    }

    #[test]
    fn global_bound_worked_values() {
        for &t in &[0.1, 1.0, 3.0] {
            let r = check_envelope(Envelope::Global, 0, t).unwrap();
            assert!(r.tight && r.satisfied);
            assert!(rel(r.bound, r.value_magnitude) < 1e-15);
        }
        let b = global_envelope(2, 1.0).unwrap();
        assert!(rel(b, 7.180_961_047_225_788_2) < 1e-15);
        let r = check_envelope(Envelope::Global, 2, 1.0).unwrap();
        assert!(r.satisfied && !r.tight);
        let r = check_envelope(Envelope::Global, 10, 0.5).unwrap();
        assert!(r.bound.is_finite() && r.satisfied);
    }

    #[test]
    fn low_derivative_bound_worked_values() {
        assert!(
            rel(
                low_derivative_envelope(2.0).unwrap(),
                1.754_656_816_873_021_9
            ) < 1e-15
        );
        let r = check_envelope(Envelope::LowDerivative, 0, 2.0).unwrap();
        assert!(r.applicable && r.satisfied);
        let far = low_derivative_envelope(1.0e6).unwrap();
        assert!(far > 0.0 && far < 1.1 * FRAC_2_PI.sqrt() * E / 1.0e6);
    }

    #[test]
    fn global_derivative_bound_worked_values() {
        let b = global_derivative_envelope(0, 2.0).unwrap();
        assert!(rel(b, 0.446_031_029_038_192_78) < 1e-15);
        assert!(
            rel(
                global_derivative_envelope(2, 1.0).unwrap(),
                24.517_334_598_311_19
            ) < 1e-15
        );
        let r = check_envelope(Envelope::GlobalDerivative, 2, 1.0).unwrap();
        assert!(r.satisfied);
        for &t in &[0.2, 1.0, 5.0, 80.0] {
            let mut prev = 0.0;
            for n in 0..30 {
                let b = global_derivative_envelope(n, t).unwrap();
                assert!(b > prev);
                prev = b;
            }
        }
    }

    #[test]
    fn bad_arguments() {
        assert!(low_envelope(0.0).is_err());
        assert!(global_envelope(1, -1.0).is_err());
        let grid = BoundGrid {
            t_min: 0.0,
            ..BoundGrid::default()
        };
        assert!(matches!(run_suite(&grid), Err(Error::Domain(_))));
    }

    #[test]
    fn single_point_grid() {
        let grid = BoundGrid {
            max_order: 0,
            t_min: 2.0,
            t_max: 2.0,
            points: 1,
        };
        let report = run_suite(&grid).unwrap();
        assert_eq!(report.pairs, 1);
        assert_eq!(report.total_violations(), 0);
        assert_eq!(report.summary_line().lines().count(), 1);
    }

    #[test]
    fn global_envelopes_are_sharper_in_the_low_region() {
        for n in 1..8 {
            for t in log_space(1.0, 200.0, 60) {
                if in_low_region(n, t) {
                    assert!(global_envelope(n, t).unwrap() <= low_envelope(t).unwrap());
                }
            }
        }
    }
}
