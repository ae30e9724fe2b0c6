//! Spectral peak finding and straight-line fits for sampled trajectories.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Dominant nonzero frequency of a uniformly sampled real signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    /// Angular frequency of the peak bin.
    pub omega: f64,
    pub bin: usize,
    pub magnitude: f64,
    /// Angular spacing between bins, `2π/(N·dt)`.
    pub resolution: f64,
}

/// Peak of the one-sided DFT magnitude after removing the mean; the DC
/// bin is excluded.
pub fn dominant_frequency(samples: &[f64], dt: f64) -> Result<SpectralPeak> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::InvalidArgument("need at least 4 samples".into()));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument("sample spacing must be positive".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (bin, magnitude) = buf[1..=n / 2]
        .iter()
        .enumerate()
        .map(|(k, z)| (k + 1, z.norm()))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let resolution = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    Ok(SpectralPeak {
        omega: bin as f64 * resolution,
        bin,
        magnitude,
        resolution,
    })
}

/// Half the peak-to-peak excursion.
pub fn half_range(samples: &[f64]) -> f64 {
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if samples.is_empty() {
        0.0
    } else {
        0.5 * (hi - lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of a sample from the fitted line.
    pub max_residual: f64,
}

/// Least-squares straight line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("need at least 2 points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - (intercept + slope * xi)).abs())
        .fold(0.0, f64::max);
    Ok(LinearFit {
        slope,
        intercept,
        max_residual,
    })
}
