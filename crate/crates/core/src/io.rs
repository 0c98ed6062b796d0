//! File formats: JSON spectrum files and sweep CSV.
//!
//! Reals are written with 17 significant digits so that parsing a written
//! file returns the same bits.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::harmonics::CoefficientSpectrum;
use crate::lab::SweepRow;
use crate::specfun::MAX_SUPPORTED_ORDER;

pub const CSV_HEADER: &str =
    "k,N,eps1,eps2,E,lhs,rhs_lipschitz,rhs_holder,rhs_apriori,rhs_total,reconstruction_error";

/// Shortest-safe lossless rendering: 17 significant digits.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct CoefficientRecord {
    pub n: usize,
    pub m: i64,
    pub re: f64,
    pub im: f64,
}

/// Coefficients with the wavenumber and radius they belong to.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SpectrumFile {
    pub k: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub coefficients: Vec<CoefficientRecord>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    n: usize,
    m: i64,
    re: &'a RawValue,
    im: &'a RawValue,
}

#[derive(Serialize)]
struct FileOut<'a> {
    k: &'a RawValue,
    #[serde(rename = "R")]
    radius: &'a RawValue,
    coefficients: Vec<RecordOut<'a>>,
}

fn raw(x: f64) -> Result<Box<RawValue>> {
    if !x.is_finite() {
        return Err(Error::Input(format!(
            "cannot serialize non-finite value {x}"
        )));
    }
    Ok(RawValue::from_string(format_real(x))?)
}

impl SpectrumFile {
    pub fn from_spectrum(k: f64, radius: f64, spectrum: &CoefficientSpectrum) -> Self {
        let coefficients = spectrum
            .iter()
            .map(|(n, m, c)| CoefficientRecord {
                n,
                m,
                re: c.re,
                im: c.im,
            })
            .collect();
        Self {
            k,
            radius,
            coefficients,
        }
    }

    /// Dense spectrum up to the largest degree present; repeated entries are
    /// rejected.
    pub fn to_spectrum(&self) -> Result<CoefficientSpectrum> {
        let max_degree = self.coefficients.iter().map(|c| c.n).max().unwrap_or(0);
        if max_degree > MAX_SUPPORTED_ORDER {
            return Err(Error::OrderOutOfRange {
                order: max_degree,
                max: MAX_SUPPORTED_ORDER,
            });
        }
        let mut spectrum = CoefficientSpectrum::zeros(max_degree);
        let mut seen = vec![false; (max_degree + 1) * (max_degree + 1)];
        for c in &self.coefficients {
            let index = crate::harmonics::HarmonicIndex::new(c.n, c.m)?;
            if std::mem::replace(&mut seen[index.flat()], true) {
                return Err(Error::Input(format!(
                    "duplicate coefficient (n={}, m={})",
                    c.n, c.m
                )));
            }
            spectrum.set(c.n, c.m, Complex64::new(c.re, c.im))?;
        }
        Ok(spectrum)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: SpectrumFile = serde_json::from_str(text)?;
        if !(file.k > 0.0)
            || !(file.radius > 0.0)
            || !file.k.is_finite()
            || !file.radius.is_finite()
        {
            return Err(Error::Input(format!(
                "k and R must be positive and finite, got k = {}, R = {}",
                file.k, file.radius
            )));
        }
        file.to_spectrum()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        let k = raw(self.k)?;
        let radius = raw(self.radius)?;
        let values = self
            .coefficients
            .iter()
            .map(|c| Ok((raw(c.re)?, raw(c.im)?)))
            .collect::<Result<Vec<_>>>()?;
        let out = FileOut {
            k: &k,
            radius: &radius,
            coefficients: self
                .coefficients
                .iter()
                .zip(&values)
                .map(|(c, (re, im))| RecordOut {
                    n: c.n,
                    m: c.m,
                    re,
                    im,
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&out)?;
        text.push('\n');
        Ok(text)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let reals = [
            r.eps1,
            r.eps2,
            r.log_budget,
            r.lhs,
            r.terms.lipschitz,
            r.terms.holder,
            r.terms.apriori,
            r.rhs_total,
            r.reconstruction_error,
        ];
        let _ = write!(out, "{},{}", format_real(r.k), r.cutoff);
        for x in reals {
            let _ = write!(out, ",{}", format_real(x));
        }
        out.push('\n');
    }
    out
}
