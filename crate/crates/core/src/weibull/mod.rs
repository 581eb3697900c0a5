//! The discrete Weibull distribution on k = 1, 2, 3, ...
//!
//! Survival is `S(k) = (1-p)^(k^beta)`, so `beta = 1` is the geometric
//! distribution and `p` is always the probability of the shortest interval.
//! Everything is evaluated in log space as `exp(k^beta * ln(1-p))`.

mod fit;
mod sample;

pub use fit::{fit_mle, fit_mle_with, ff_rmse, log_likelihood, FitOptions, FitResult, Histogram};
pub use sample::{sample, sample_with};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{Error, Result};

/// Terms summed directly by [`WeibullParams::expected_value`] before the tail
/// is replaced by its Euler-Maclaurin estimate.
const DIRECT_SUM_TERMS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    p: f64,
    beta: f64,
}

impl WeibullParams {
    pub fn new(p: f64, beta: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("p = {p} not in (0, 1)")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!("beta = {beta} not positive")));
        }
        Ok(WeibullParams { p, beta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// ln(1 - p), always negative.
    fn log_q(&self) -> f64 {
        (-self.p).ln_1p()
    }

    fn k_pow(&self, k: u64) -> f64 {
        (k as f64).powf(self.beta)
    }

    pub fn log_survival(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.k_pow(k) * self.log_q()
    }

    /// P(K > k).
    pub fn survival(&self, k: u64) -> f64 {
        self.log_survival(k).exp()
    }

    /// P(K <= k).
    pub fn cdf(&self, k: u64) -> f64 {
        -self.log_survival(k).exp_m1()
    }

    /// P(K = k) for k >= 1: `S(k-1) - S(k)`, evaluated as `S(k-1) * h(k)`
    /// so that it stays accurate when both survivals are tiny.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.survival(k - 1) * self.hazard(k)
    }

    pub fn log_pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return f64::NEG_INFINITY;
        }
        self.log_survival(k - 1) + self.hazard(k).ln()
    }

    /// h(k) = P(K = k | K > k-1) = 1 - (1-p)^(k^beta - (k-1)^beta).
    pub fn hazard(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let step = self.k_pow(k) - self.k_pow(k - 1);
        -(step * self.log_q()).exp_m1()
    }

    /// Mean interval length, `sum_{k>=0} S(k)`.
    ///
    /// Terms are summed until one falls below 1e-12 of the running total. For
    /// very small `beta` the series converges too slowly for that, so after
    /// `DIRECT_SUM_TERMS` terms the rest is taken from the Euler-Maclaurin
    /// formula with the tail integral written as an incomplete gamma function.
    pub fn expected_value(&self) -> f64 {
        let mut sum = 0.0;
        for k in 0..=DIRECT_SUM_TERMS {
            let term = self.survival(k);
            sum += term;
            if term < 1e-12 * sum {
                return sum;
            }
        }
        sum + self.tail_sum(DIRECT_SUM_TERMS)
    }

    /// Approximates `sum_{k > a} S(k)`.
    fn tail_sum(&self, a: u64) -> f64 {
        let rate = -self.log_q();
        let a_f = a as f64;
        let shape = 1.0 / self.beta;
        let x = rate * a_f.powf(self.beta);
        // int_a^inf exp(-rate x^beta) dx = Gamma(1/beta, rate a^beta) / (beta rate^(1/beta))
        let log_integral =
            ln_gamma(shape) + gamma_ur(shape, x).ln() - self.beta.ln() - shape * rate.ln();
        let f_a = self.survival(a);
        let df_a = -f_a * rate * self.beta * a_f.powf(self.beta - 1.0);
        log_integral.exp() - f_a / 2.0 - df_a / 12.0
    }

    /// Smallest k with `cdf(k) >= q`.
    pub fn quantile(&self, q: f64) -> u64 {
        if q <= 0.0 {
            return 1;
        }
        if q >= 1.0 {
            return u64::MAX;
        }
        // S(k) <= 1-q  <=>  k^beta >= ln(1-q)/ln(1-p)
        let x = ((-q).ln_1p() / self.log_q()).powf(1.0 / self.beta);
        let mut k = (x.ceil() as u64).max(1);
        while k > 1 && self.cdf(k - 1) >= q {
            k -= 1;
        }
        while self.cdf(k) < q {
            k += 1;
        }
        k
    }
}
