//! Complex orthonormal spherical harmonics, coefficient spectra and
//! quadrature-based synthesis/analysis on the unit sphere.
//!
//! `Y_n^m` is normalized so that `∫_{S²} |Y_n^m|² dσ = 1`, carries the
//! Condon-Shortley phase and satisfies `Y_n^{-m} = (-1)^m conj(Y_n^m)`.

mod grid;
mod legendre;

use num_complex::Complex64;

pub use grid::SphereGrid;
pub(crate) use legendre::{legendre_table, tri_index};

use crate::error::{Error, Result};

/// Degree `n` and order `m` of a spherical harmonic, `|m| <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicIndex {
    degree: usize,
    order: i64,
}

impl HarmonicIndex {
    pub fn new(degree: usize, order: i64) -> Result<Self> {
        if order.unsigned_abs() as usize > degree {
            return Err(Error::InvalidIndex { degree, order });
        }
        Ok(Self { degree, order })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Flat position `n² + n + m` in a [`CoefficientSpectrum`].
    pub fn flat(&self) -> usize {
        flat_index(self.degree, self.order)
    }
}

#[inline]
fn flat_index(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

/// Coefficients `a_{m,n}` for `|m| <= n <= max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSpectrum {
    max_degree: usize,
    coeffs: Vec<Complex64>,
}

impl CoefficientSpectrum {
    pub fn zeros(max_degree: usize) -> Self {
        Self {
            max_degree,
            coeffs: vec![Complex64::new(0.0, 0.0); (max_degree + 1) * (max_degree + 1)],
        }
    }

    pub fn from_fn(max_degree: usize, mut f: impl FnMut(usize, i64) -> Complex64) -> Self {
        let mut spectrum = Self::zeros(max_degree);
        for n in 0..=max_degree {
            for m in -(n as i64)..=n as i64 {
                spectrum.coeffs[flat_index(n, m)] = f(n, m);
            }
        }
        spectrum
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        if n > self.max_degree || m.unsigned_abs() as usize > n {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[flat_index(n, m)]
    }

    pub fn set(&mut self, n: usize, m: i64, value: Complex64) -> Result<()> {
        let index = HarmonicIndex::new(n, m)?;
        if n > self.max_degree {
            return Err(Error::InvalidIndex {
                degree: index.degree,
                order: index.order,
            });
        }
        self.coeffs[flat_index(n, m)] = value;
        Ok(())
    }

    /// Coefficients of degree `n`, orders `-n..=n` in ascending order.
    pub fn degree(&self, n: usize) -> &[Complex64] {
        &self.coeffs[n * n..(n + 1) * (n + 1)]
    }

    pub fn degree_mut(&mut self, n: usize) -> &mut [Complex64] {
        &mut self.coeffs[n * n..(n + 1) * (n + 1)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.max_degree).flat_map(move |n| {
            (-(n as i64)..=n as i64).map(move |m| (n, m, self.coeffs[flat_index(n, m)]))
        })
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map_degrees(|_, c| c * factor)
    }

    /// Apply a per-degree map `(n, a_{m,n}) -> b_{m,n}`.
    pub fn map_degrees(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for n in 0..=self.max_degree {
            for c in out.degree_mut(n) {
                *c = f(n, *c);
            }
        }
        out
    }

    /// Spectrum of degree `max(self, other)` holding `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        let max_degree = self.max_degree.max(other.max_degree);
        Self::from_fn(max_degree, |n, m| self.get(n, m) + other.get(n, m))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Copy with degrees above `cutoff` set to zero (same `max_degree`).
    pub fn low_pass(&self, cutoff: usize) -> Self {
        self.map_degrees(|n, c| {
            if n <= cutoff {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Largest deviation from `a_{-m,n} = (-1)^m conj(a_{m,n})`, the symmetry
    /// of spectra of real-valued functions.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for n in 0..=self.max_degree {
            for m in 0..=n as i64 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let mirrored = self.get(n, -m);
                let expected = self.get(n, m).conj() * sign;
                worst = worst.max((mirrored - expected).norm());
            }
        }
        worst
    }

    /// `(a + S a) / 2` where `S` is the conjugate-symmetry reflection; the
    /// spectrum of the real part of the synthesized function.
    pub fn real_part(&self) -> Self {
        Self::from_fn(self.max_degree, |n, m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * (self.get(n, m) + self.get(n, -m).conj() * sign)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Per-degree magnitudes `a_n = (Σ_m |a_{m,n}|²)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSpectrum {
    values: Vec<f64>,
}

impl AggregateSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Input(format!(
                "aggregate magnitudes must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_degree(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|a| a * a).sum()
    }

    pub fn low_pass(&self, cutoff: usize) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, &a)| if n <= cutoff { a } else { 0.0 })
            .collect();
        Self { values }
    }
}

pub fn aggregate(spectrum: &CoefficientSpectrum) -> AggregateSpectrum {
    let values = (0..=spectrum.max_degree())
        .map(|n| {
            spectrum
                .degree(n)
                .iter()
                .map(|c| c.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    AggregateSpectrum { values }
}

fn direction_angles(direction: [f64; 3]) -> Result<(f64, f64)> {
    let norm = (direction[0].powi(2) + direction[1].powi(2) + direction[2].powi(2)).sqrt();
    if !((norm - 1.0).abs() <= 1e-12) {
        return Err(Error::NonUnitDirection { norm });
    }
    let cos_theta = direction[2].clamp(-1.0, 1.0);
    let phi = direction[1].atan2(direction[0]);
    Ok((cos_theta, phi))
}

/// `Y_n^m` at a unit direction.
pub fn evaluate_harmonic(index: HarmonicIndex, direction: [f64; 3]) -> Result<Complex64> {
    let (x, phi) = direction_angles(direction)?;
    let n = index.degree();
    let m = index.order();
    let abs_m = m.unsigned_abs() as usize;
    let table = legendre_table(n, x);
    let mut lambda = table[tri_index(n, abs_m)];
    if m < 0 && abs_m % 2 == 1 {
        lambda = -lambda;
    }
    Ok(Complex64::from_polar(lambda, m as f64 * phi))
}

/// Pointwise `Σ_{n,m} a_{m,n} Y_n^m` at the grid nodes.
///
/// The sum is evaluated ring by ring: Legendre sums per order first, then the
/// longitudinal Fourier sum.
pub fn synthesize(spectrum: &CoefficientSpectrum, grid: &SphereGrid) -> Vec<Complex64> {
    let degree = spectrum.max_degree();
    let width = 2 * degree + 1;
    let lon = grid.longitudes();
    let phases = longitude_phases(grid, degree);
    let mut out = Vec::with_capacity(grid.len());
    let mut by_order = vec![Complex64::new(0.0, 0.0); width];

    for &x in grid.ring_cos() {
        let table = legendre_table(degree, x);
        for (slot, m) in (-(degree as i64)..=degree as i64).enumerate() {
            let abs_m = m.unsigned_abs() as usize;
            let sign = if m < 0 && abs_m % 2 == 1 { -1.0 } else { 1.0 };
            by_order[slot] = (abs_m..=degree)
                .map(|n| spectrum.get(n, m) * (sign * table[tri_index(n, abs_m)]))
                .sum();
        }
        for k in 0..lon {
            let row = &phases[k * width..(k + 1) * width];
            out.push(by_order.iter().zip(row).map(|(f, e)| f * e).sum());
        }
    }
    out
}

/// Quadrature inner products `⟨samples, Y_n^m⟩` for `n <= max_degree`.
pub fn analyze(
    samples: &[Complex64],
    grid: &SphereGrid,
    max_degree: usize,
) -> Result<CoefficientSpectrum> {
    if grid.design_degree() < max_degree {
        return Err(Error::InsufficientResolution {
            design: grid.design_degree(),
            requested: max_degree,
        });
    }
    if samples.len() != grid.len() {
        return Err(Error::Shape {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let width = 2 * max_degree + 1;
    let lon = grid.longitudes();
    let dphi = 2.0 * std::f64::consts::PI / lon as f64;
    let phases = longitude_phases(grid, max_degree);
    let mut spectrum = CoefficientSpectrum::zeros(max_degree);
    let mut by_order = vec![Complex64::new(0.0, 0.0); width];

    for (j, (&x, &w)) in grid.ring_cos().iter().zip(grid.ring_weights()).enumerate() {
        let ring = &samples[j * lon..(j + 1) * lon];
        by_order
            .iter_mut()
            .for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (k, &u) in ring.iter().enumerate() {
            let row = &phases[k * width..(k + 1) * width];
            for (acc, e) in by_order.iter_mut().zip(row) {
                *acc += u * e.conj();
            }
        }
        let table = legendre_table(max_degree, x);
        for (slot, m) in (-(max_degree as i64)..=max_degree as i64).enumerate() {
            let abs_m = m.unsigned_abs() as usize;
            let sign = if m < 0 && abs_m % 2 == 1 { -1.0 } else { 1.0 };
            let g = by_order[slot] * (w * dphi * sign);
            for n in abs_m..=max_degree {
                spectrum.coeffs[flat_index(n, m)] += g * table[tri_index(n, abs_m)];
            }
        }
    }
    Ok(spectrum)
}

/// Row-major table of `e^{imφ_k}` for `k < longitudes`, `m = -L..=L`.
fn longitude_phases(grid: &SphereGrid, degree: usize) -> Vec<Complex64> {
    let width = 2 * degree + 1;
    let mut table = Vec::with_capacity(grid.longitudes() * width);
    for k in 0..grid.longitudes() {
        let phi = grid.longitude(k);
        for m in -(degree as i64)..=degree as i64 {
            table.push(Complex64::from_polar(1.0, m as f64 * phi));
        }
    }
    table
}
