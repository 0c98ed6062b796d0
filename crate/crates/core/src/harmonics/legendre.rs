//! Orthonormal associated Legendre functions
//! `λ_n^m(x)` with `Y_n^m(θ, φ) = λ_n^m(cos θ) e^{imφ}`, Condon-Shortley phase
//! included.

use std::f64::consts::PI;

/// Position of `(n, m)`, `0 <= m <= n`, in a triangular table.
#[inline]
pub(crate) fn tri_index(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// Triangular table of `λ_n^m(x)` for `0 <= m <= n <= max_degree`.
pub(crate) fn legendre_table(max_degree: usize, x: f64) -> Vec<f64> {
    let size = tri_index(max_degree, max_degree) + 1;
    let mut table = vec![0.0; size];
    let sin_theta = (1.0 - x * x).max(0.0).sqrt();

    let mut diag = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=max_degree {
        if m > 0 {
            let mf = m as f64;
            diag *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_theta;
        }
        table[tri_index(m, m)] = diag;
        if m == max_degree {
            break;
        }
        let mf = m as f64;
        table[tri_index(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * x * diag;
        for n in (m + 2)..=max_degree {
            let nf = n as f64;
            let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
            let b = (((nf - 1.0).powi(2) - mf * mf) / (4.0 * (nf - 1.0).powi(2) - 1.0)).sqrt();
            table[tri_index(n, m)] =
                a * (x * table[tri_index(n - 1, m)] - b * table[tri_index(n - 2, m)]);
        }
    }
    table
}
