use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::WeibullParams;
use crate::error::{Error, Result};
use crate::optim::{NelderMead, NelderMeadConfig};

/// Distinct interval lengths with their counts, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: Vec<(u64, u64)>,
    n: u64,
}

impl Histogram {
    pub fn new(series: &[u64]) -> Self {
        let mut map = BTreeMap::new();
        for &k in series {
            *map.entry(k).or_insert(0u64) += 1;
        }
        Histogram {
            bins: map.into_iter().collect(),
            n: series.len() as u64,
        }
    }

    pub fn bins(&self) -> &[(u64, u64)] {
        &self.bins
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn max(&self) -> Option<u64> {
        self.bins.last().map(|&(k, _)| k)
    }

    /// Empirical CDF at every k = 1..=max.
    pub fn ecdf(&self) -> Vec<f64> {
        let Some(max) = self.max() else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(max as usize);
        let mut bins = self.bins.iter().peekable();
        let mut below = 0u64;
        for k in 1..=max {
            while let Some(&&(v, c)) = bins.peek() {
                if v > k {
                    break;
                }
                below += c;
                bins.next();
            }
            out.push(below as f64 / self.n as f64);
        }
        out
    }

    fn log_likelihood(&self, params: &WeibullParams) -> f64 {
        self.bins
            .iter()
            .map(|&(k, c)| c as f64 * params.log_pmf(k))
            .sum()
    }
}

/// Sum of log pmf over the series. A non-finite total (pmf underflow at the
/// edge of parameter space) is reported as [`Error::FitBoundary`].
pub fn log_likelihood(params: &WeibullParams, series: &[u64]) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::Empty("interval series".into()));
    }
    let ll = Histogram::new(series).log_likelihood(params);
    if ll.is_finite() {
        Ok(ll)
    } else {
        Err(Error::FitBoundary {
            p: params.p(),
            beta: params.beta(),
        })
    }
}

/// Root mean squared difference between empirical and model CDF over k = 1..=max(series).
pub fn ff_rmse(params: &WeibullParams, series: &[u64]) -> f64 {
    ff_rmse_hist(params, &Histogram::new(series))
}

fn ff_rmse_hist(params: &WeibullParams, hist: &Histogram) -> f64 {
    let ecdf = hist.ecdf();
    if ecdf.is_empty() {
        return 0.0;
    }
    let sq: f64 = ecdf
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - params.cdf(i as u64 + 1)).powi(2))
        .sum();
    (sq / ecdf.len() as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub p_bounds: (f64, f64),
    pub beta_bounds: (f64, f64),
    /// Log-spaced seed grid size per axis.
    pub grid_points: usize,
    /// Successive simplex refinements must agree to within this distance.
    pub xtol: f64,
    pub max_refinements: usize,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            p_bounds: (1e-4, 1.0 - 1e-4),
            beta_bounds: (0.05, 10.0),
            grid_points: 48,
            xtol: 1e-6,
            max_refinements: 8,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: WeibullParams,
    pub log_likelihood: f64,
    pub ff_rmse: f64,
    pub n: usize,
    pub converged: bool,
    /// The optimum lies on the edge of the search box.
    pub at_bound: bool,
}

pub fn fit_mle(series: &[u64]) -> Result<FitResult> {
    fit_mle_with(series, &FitOptions::default())
}

/// Maximum-likelihood (p, beta): the best point of a log-spaced grid seeds a
/// Nelder-Mead search inside the box, which is restarted from its own result
/// until two successive refinements move less than `xtol`.
pub fn fit_mle_with(series: &[u64], opts: &FitOptions) -> Result<FitResult> {
    if series.len() < 2 {
        return Err(Error::TooFew {
            what: "intervals to fit".into(),
            need: 2,
            got: series.len(),
        });
    }
    if series.contains(&0) {
        return Err(Error::InvalidParams("interval lengths must be >= 1".into()));
    }
    let hist = Histogram::new(series);
    if hist.bins().len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "all {} intervals equal {}",
            series.len(),
            series[0]
        )));
    }

    let (p_lo, p_hi) = opts.p_bounds;
    let (b_lo, b_hi) = opts.beta_bounds;
    let inside = |p: f64, b: f64| p >= p_lo && p <= p_hi && b >= b_lo && b <= b_hi;
    let neg_ll = |x: &[f64]| -> f64 {
        if !inside(x[0], x[1]) {
            return f64::INFINITY;
        }
        match WeibullParams::new(x[0], x[1]) {
            Ok(params) => {
                let ll = hist.log_likelihood(&params);
                if ll.is_finite() {
                    -ll
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    };

    let p_grid = log_space(p_lo, p_hi, opts.grid_points);
    let b_grid = log_space(b_lo, b_hi, opts.grid_points);
    let mut seed = (0usize, 0usize);
    let mut best = f64::INFINITY;
    // beta ascending, strict improvement only: ties keep the smaller beta.
    for (j, &b) in b_grid.iter().enumerate() {
        for (i, &p) in p_grid.iter().enumerate() {
            let v = neg_ll(&[p, b]);
            if v < best {
                best = v;
                seed = (i, j);
            }
        }
    }
    if !best.is_finite() {
        return Err(Error::FitBoundary {
            p: p_grid[seed.0],
            beta: b_grid[seed.1],
        });
    }

    let step = |grid: &[f64], i: usize| {
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        (hi - lo) / 4.0
    };
    let mut x = vec![p_grid[seed.0], b_grid[seed.1]];
    let mut steps = vec![step(&p_grid, seed.0), step(&b_grid, seed.1)];
    // Step toward the interior so the first simplex is not degenerate on a wall.
    if x[0] + steps[0] > p_hi {
        steps[0] = -steps[0];
    }
    if x[1] + steps[1] > b_hi {
        steps[1] = -steps[1];
    }

    let nm = NelderMead::new(NelderMeadConfig {
        max_iterations: opts.max_iterations,
        xtol: opts.xtol * 1e-2,
        ..Default::default()
    });
    let mut converged = false;
    for _ in 0..opts.max_refinements {
        let m = nm.minimize(neg_ll, &x, &steps);
        let moved = (m.x[0] - x[0]).abs().max((m.x[1] - x[1]).abs());
        x = m.x;
        if m.converged && moved < opts.xtol {
            converged = true;
            break;
        }
        steps = vec![
            (x[0] * 0.05).min((p_hi - x[0]).max(1e-6)),
            x[1] * 0.05,
        ];
    }

    let params = WeibullParams::new(x[0], x[1])?;
    let log_likelihood = hist.log_likelihood(&params);
    if !log_likelihood.is_finite() {
        return Err(Error::FitBoundary {
            p: params.p(),
            beta: params.beta(),
        });
    }
    let near = |v: f64, bound: f64| (v - bound).abs() <= 1e-6 * bound.abs().max(1e-3);
    let at_bound = near(x[0], p_lo) || near(x[0], p_hi) || near(x[1], b_lo) || near(x[1], b_hi);
    Ok(FitResult {
        params,
        log_likelihood,
        ff_rmse: ff_rmse_hist(&params, &hist),
        n: series.len(),
        converged,
        at_bound,
    })
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
