//! Tabulated profile samples with local cubic interpolation.

use crate::error::{Error, Result};

/// Sorted samples `(tᵢ, fᵢ)`. Values between samples come from the cubic
/// through the four nearest samples, so polynomials of degree ≤ 3 are
/// reproduced exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    ts: Vec<f64>,
    fs: Vec<f64>,
}

impl Table {
    pub const MIN_SAMPLES: usize = 4;

    pub fn new(ts: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if ts.len() != fs.len() {
            return Err(Error::InvalidProfile(format!(
                "table has {} abscissae but {} values",
                ts.len(),
                fs.len()
            )));
        }
        if ts.len() < Self::MIN_SAMPLES {
            return Err(Error::InvalidProfile(format!(
                "table needs at least {} samples, got {}",
                Self::MIN_SAMPLES,
                ts.len()
            )));
        }
        if ts.iter().chain(&fs).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("table contains non-finite samples".into()));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile("table abscissae must be strictly increasing".into()));
        }
        Ok(Self { ts, fs })
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        let (ts, fs) = pairs.iter().map(|p| (p[0], p[1])).unzip();
        Self::new(ts, fs)
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.ts[0], self.ts[self.ts.len() - 1])
    }

    pub fn pairs(&self) -> Vec<[f64; 2]> {
        self.ts.iter().zip(&self.fs).map(|(&t, &f)| [t, f]).collect()
    }

    /// `order`-th derivative of the local interpolant at `t`; NaN outside
    /// the sampled domain.
    pub fn eval(&self, t: f64, order: u8) -> f64 {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo).abs().max(1.0);
        if !(t >= lo - slack && t <= hi + slack) {
            return f64::NAN;
        }
        let n = self.ts.len();
        let i = self.ts.partition_point(|&x| x <= t).saturating_sub(1);
        let start = i.saturating_sub(1).min(n - 4);
        let xs = &self.ts[start..start + 4];
        let ys = &self.fs[start..start + 4];

        // Newton divided differences.
        let mut c = [ys[0], ys[1], ys[2], ys[3]];
        for k in 1..4 {
            for j in (k..4).rev() {
                c[j] = (c[j] - c[j - 1]) / (xs[j] - xs[j - k]);
            }
        }

        // Horner on the Newton form, carrying two derivatives.
        let (mut p, mut d1, mut d2) = (c[3], 0.0, 0.0);
        for k in (0..3).rev() {
            let u = t - xs[k];
            d2 = d2 * u + 2.0 * d1;
            d1 = d1 * u + p;
            p = p * u + c[k];
        }
        match order {
            0 => p,
            1 => d1,
            2 => d2,
            3 => 6.0 * c[3],
            _ => 0.0,
        }
    }
}
