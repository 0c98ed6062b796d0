//! Gauss-Legendre × uniform-longitude product quadrature on the unit sphere.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub(crate) fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut derivative = 1.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(count, x);
            derivative = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(count, x);
        if dp.is_finite() {
            derivative = dp;
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Quadrature on the sphere, exact for products `Y_n^m · conj(Y_n'^m')` with
/// `n, n' <= design_degree`.
///
/// Nodes are stored ring by ring: node `j * longitudes + k` sits at
/// colatitude `acos(ring_cos[j])` and longitude `2πk / longitudes`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    design_degree: usize,
    ring_cos: Vec<f64>,
    ring_weights: Vec<f64>,
    longitudes: usize,
}

impl SphereGrid {
    pub fn new(design_degree: usize) -> Self {
        let (ring_cos, ring_weights) = gauss_legendre(design_degree + 1);
        Self {
            design_degree,
            ring_cos,
            ring_weights,
            longitudes: 2 * design_degree + 1,
        }
    }

    /// Grid used to analyse fields band-limited to `max_degree`
    /// (design degree `2 * max_degree`).
    pub fn for_max_degree(max_degree: usize) -> Self {
        Self::new(2 * max_degree)
    }

    pub fn design_degree(&self) -> usize {
        self.design_degree
    }

    pub fn rings(&self) -> usize {
        self.ring_cos.len()
    }

    pub fn longitudes(&self) -> usize {
        self.longitudes
    }

    pub fn len(&self) -> usize {
        self.rings() * self.longitudes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn ring_cos(&self) -> &[f64] {
        &self.ring_cos
    }

    pub(crate) fn ring_weights(&self) -> &[f64] {
        &self.ring_weights
    }

    pub(crate) fn longitude(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.longitudes as f64
    }

    pub fn nodes(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.len());
        for &x in &self.ring_cos {
            let s = (1.0 - x * x).max(0.0).sqrt();
            for k in 0..self.longitudes {
                let (sin_phi, cos_phi) = self.longitude(k).sin_cos();
                out.push([s * cos_phi, s * sin_phi, x]);
            }
        }
        out
    }

    pub fn weights(&self) -> Vec<f64> {
        let dphi = 2.0 * PI / self.longitudes as f64;
        self.ring_weights
            .iter()
            .flat_map(|&w| std::iter::repeat_n(w * dphi, self.longitudes))
            .collect()
    }
}
