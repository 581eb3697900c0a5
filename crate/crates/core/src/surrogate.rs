//! Synthetic long-memory series for calibrating the DFA.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

/// Standard normal i.i.d. values.
pub fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Fourier-filtered Gaussian noise with power spectrum `~ f^-(2H - 1)`,
/// whose DFA exponent is `hurst`. The output has zero mean and unit variance.
///
/// White noise of twice the requested length is filtered and the first half
/// kept, which weakens the wrap-around correlation of the periodic transform.
pub fn fourier_filtered(n: usize, hurst: f64, seed: u64) -> Result<Vec<f64>> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidParams(format!("hurst {hurst} not in (0, 1)")));
    }
    if n < 2 {
        return Err(Error::TooFew {
            what: "surrogate samples".into(),
            need: 2,
            got: n,
        });
    }
    let m = 2 * n;
    let mut buf: Vec<Complex<f64>> = white_noise(m, seed)
        .into_iter()
        .map(|x| Complex::new(x, 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let exponent = -(2.0 * hurst - 1.0) / 2.0;
    buf[0] = Complex::new(0.0, 0.0);
    for (i, c) in buf.iter_mut().enumerate().skip(1) {
        let f = i.min(m - i) as f64;
        *c *= f.powf(exponent);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let mut out: Vec<f64> = buf[..n].iter().map(|c| c.re).collect();
    let mean = out.iter().sum::<f64>() / n as f64;
    let sd = (out.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    out.iter_mut().for_each(|x| *x = (*x - mean) / sd);
    Ok(out)
}

/// Interval lengths with discrete Weibull marginals and long memory: a
/// Fourier-filtered Gaussian series pushed through the normal CDF and the
/// Weibull quantile function. Ranks, and so the correlation structure, are kept.
pub fn weibull_intervals(params: &WeibullParams, n: usize, hurst: f64, seed: u64) -> Result<Vec<u64>> {
    let z = fourier_filtered(n, hurst, seed)?;
    let normal = Normal::standard();
    Ok(z.iter()
        .map(|&x| params.quantile(normal.cdf(x).clamp(1e-300, 1.0 - 1e-16)))
        .collect())
}
