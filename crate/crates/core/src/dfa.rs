//! Detrended fluctuation analysis with one- and two-regime scaling fits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{fit_line, solve, LineFit};

pub const DEFAULT_POLY_ORDER: usize = 2;
pub const MIN_POLY_ORDER: usize = 1;
pub const MAX_POLY_ORDER: usize = 3;
pub const DEFAULT_S_MIN: usize = 10;
pub const DEFAULT_SCALE_COUNT: usize = 30;

/// Sampled fluctuation function F(s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationCurve {
    pub scales: Vec<usize>,
    pub values: Vec<f64>,
    pub poly_order: usize,
    /// Length of the analysed series.
    pub n: usize,
}

impl FluctuationCurve {
    /// True when some F(s) is zero, as for a series the detrending removes exactly.
    pub fn is_degenerate(&self) -> bool {
        self.values.iter().any(|&f| f <= 0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,F\n");
        for (s, f) in self.scales.iter().zip(&self.values) {
            let _ = writeln!(out, "{s},{f}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    Single {
        hurst: f64,
        /// Intercept of `ln F = intercept + H ln s`.
        intercept: f64,
        rmse: f64,
    },
    Double {
        hurst_small: f64,
        hurst_large: f64,
        crossover_scale: f64,
        rmse: f64,
    },
}

impl Regime {
    pub fn kind(&self) -> &'static str {
        match self {
            Regime::Single { .. } => "single",
            Regime::Double { .. } => "double",
        }
    }

    pub fn rmse(&self) -> f64 {
        match *self {
            Regime::Single { rmse, .. } | Regime::Double { rmse, .. } => rmse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaResult {
    pub curve: FluctuationCurve,
    pub regime: Regime,
}

/// Thresholds deciding when a two-segment fit replaces the single line.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverPolicy {
    /// Required relative RMSE reduction of the two-segment fit.
    pub min_rmse_improvement: f64,
    /// Required difference between the two exponents.
    pub min_exponent_gap: f64,
    pub min_points_per_regime: usize,
}

impl Default for CrossoverPolicy {
    fn default() -> Self {
        CrossoverPolicy {
            min_rmse_improvement: 0.2,
            min_exponent_gap: 0.05,
            min_points_per_regime: 5,
        }
    }
}

/// About `count` log-spaced integer scales in `[s_min, n/5]`, duplicates removed.
pub fn default_scales(n: usize, s_min: usize, count: usize) -> Result<Vec<usize>> {
    let s_max = n / 5;
    if s_min == 0 || s_max < s_min {
        return Err(Error::SeriesTooShort {
            len: n,
            min_len: 5 * s_min.max(1),
        });
    }
    if count < 2 || s_max == s_min {
        return Ok(vec![s_min]);
    }
    let (a, b) = ((s_min as f64).ln(), (s_max as f64).ln());
    let mut scales: Vec<usize> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .map(|s| s.clamp(s_min, s_max))
        .collect();
    scales.dedup();
    Ok(scales)
}

/// F(s) for each scale: the profile is cut into `floor(N/s)` segments from
/// the start and again from the end, each segment is detrended by a
/// least-squares polynomial, and F(s) is the root of the mean over all
/// `2 floor(N/s)` segment variances.
pub fn compute_fluctuation(
    series: &[f64],
    scales: &[usize],
    poly_order: usize,
) -> Result<FluctuationCurve> {
    if !(MIN_POLY_ORDER..=MAX_POLY_ORDER).contains(&poly_order) {
        return Err(Error::InvalidScales(format!(
            "poly_order {poly_order} outside {MIN_POLY_ORDER}..={MAX_POLY_ORDER}"
        )));
    }
    let mut scales = scales.to_vec();
    scales.sort_unstable();
    scales.dedup();
    let (Some(&s_min), Some(&s_max)) = (scales.first(), scales.last()) else {
        return Err(Error::InvalidScales("no scales".into()));
    };
    if s_min < poly_order + 2 {
        return Err(Error::InvalidScales(format!(
            "smallest scale {s_min} below poly_order + 2 = {}",
            poly_order + 2
        )));
    }
    let n = series.len();
    if n < 5 * s_min {
        return Err(Error::SeriesTooShort {
            len: n,
            min_len: 5 * s_min,
        });
    }
    if s_max > n / 5 {
        return Err(Error::InvalidScales(format!(
            "largest scale {s_max} above N/5 = {}",
            n / 5
        )));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidScales("series has non-finite values".into()));
    }

    let mut profile = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &x in series {
        acc += x;
        profile.push(acc);
    }
    // Residuals at rounding level mean the polynomial removed the profile exactly.
    let floor = 1e-12 * profile.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let values = scales
        .iter()
        .map(|&s| fluctuation_at(&profile, s, poly_order))
        .map(|f| if f <= floor { 0.0 } else { f })
        .collect();
    Ok(FluctuationCurve {
        scales,
        values,
        poly_order,
        n,
    })
}

/// Start indices of the `floor(n/s)` forward segments followed by the
/// `floor(n/s)` segments counted back from the end.
pub fn segment_starts(n: usize, s: usize) -> Vec<usize> {
    let segments = n.checked_div(s).unwrap_or(0);
    let forward = (0..segments).map(|v| v * s);
    let backward = (0..segments).map(|v| n - (v + 1) * s);
    forward.chain(backward).collect()
}

fn fluctuation_at(profile: &[f64], s: usize, order: usize) -> f64 {
    let basis = orthonormal_basis(s, order);
    let starts = segment_starts(profile.len(), s);
    let mut residual = vec![0.0; s];
    let mut total = 0.0;
    for &start in &starts {
        residual.copy_from_slice(&profile[start..start + s]);
        total += detrended_variance(&mut residual, &basis);
    }
    (total / starts.len() as f64).sqrt()
}

/// Orthonormal basis of polynomials up to `order` on `s` equally spaced points.
fn orthonormal_basis(s: usize, order: usize) -> Vec<Vec<f64>> {
    let half = (s as f64 - 1.0) / 2.0;
    let scale = half.max(1.0);
    let t: Vec<f64> = (0..s).map(|i| (i as f64 - half) / scale).collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
    for d in 0..=order {
        let mut v: Vec<f64> = t.iter().map(|x| x.powi(d as i32)).collect();
        // Modified Gram-Schmidt, applied twice for orthogonality to rounding.
        for _ in 0..2 {
            for q in &basis {
                let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        basis.push(v);
    }
    basis
}

fn detrended_variance(segment: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for q in basis {
        let dot: f64 = segment.iter().zip(q).map(|(a, b)| a * b).sum();
        segment.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
    }
    segment.iter().map(|r| r * r).sum::<f64>() / segment.len() as f64
}

pub fn fit_scaling(curve: &FluctuationCurve) -> Result<DfaResult> {
    fit_scaling_with(curve, &CrossoverPolicy::default())
}

/// Fits `ln F` against `ln s` with one line and with a continuous two-segment
/// line, keeping the two-segment fit only when the policy accepts it.
pub fn fit_scaling_with(curve: &FluctuationCurve, policy: &CrossoverPolicy) -> Result<DfaResult> {
    let m = curve.scales.len();
    if m < 10 || curve.values.len() != m {
        return Err(Error::TooFew {
            what: "scale points".into(),
            need: 10,
            got: m.min(curve.values.len()),
        });
    }
    if let Some((s, f)) = curve
        .scales
        .iter()
        .zip(&curve.values)
        .find(|(_, f)| !(**f > 0.0 && f.is_finite()))
    {
        return Err(Error::NonPositiveFluctuation {
            scale: *s,
            value: *f,
        });
    }
    let xs: Vec<f64> = curve.scales.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = curve.values.iter().map(|f| f.ln()).collect();
    let single = fit_line(&xs, &ys)
        .ok_or_else(|| Error::InvalidScales("scales must not all be equal".into()))?;
    let single_rmse = single.rmse(m);
    let single_regime = Regime::Single {
        hurst: single.slope,
        intercept: single.intercept,
        rmse: single_rmse,
    };
    let in_range = |h: f64| h > 0.0 && h < 2.0;

    if let Some(two) = fit_two_segment(&xs, &ys, policy.min_points_per_regime) {
        let rmse = (two.rss / m as f64).sqrt();
        let accept = rmse < (1.0 - policy.min_rmse_improvement) * single_rmse
            && (two.slope_large - two.slope_small).abs() > policy.min_exponent_gap
            && in_range(two.slope_small)
            && in_range(two.slope_large);
        if accept {
            return Ok(DfaResult {
                curve: curve.clone(),
                regime: Regime::Double {
                    hurst_small: two.slope_small,
                    hurst_large: two.slope_large,
                    crossover_scale: two.breakpoint.exp(),
                    rmse,
                },
            });
        }
    }
    if !in_range(single.slope) {
        return Err(Error::ExponentOutOfRange(single.slope));
    }
    Ok(DfaResult {
        curve: curve.clone(),
        regime: single_regime,
    })
}

#[derive(Debug, Clone, Copy)]
struct TwoSegment {
    breakpoint: f64,
    slope_small: f64,
    slope_large: f64,
    rss: f64,
}

/// Continuous fit `y = c + h1 min(x - b, 0) + h2 max(x - b, 0)` at a fixed breakpoint.
fn two_segment_at(xs: &[f64], ys: &[f64], b: f64) -> Option<TwoSegment> {
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let row = [1.0, (x - b).min(0.0), (x - b).max(0.0)];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    let [c, h1, h2] = solve(ata, aty)?;
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - c - h1 * (x - b).min(0.0) - h2 * (x - b).max(0.0)).powi(2))
        .sum();
    Some(TwoSegment {
        breakpoint: b,
        slope_small: h1,
        slope_large: h2,
        rss,
    })
}

/// Scans the breakpoint over data points leaving `min_points` on each side,
/// then refines it continuously between the neighbours of the best one.
fn fit_two_segment(xs: &[f64], ys: &[f64], min_points: usize) -> Option<TwoSegment> {
    let m = xs.len();
    let min_points = min_points.max(2);
    if m < 2 * min_points {
        return None;
    }
    let (first, last) = (min_points - 1, m - min_points);
    let mut best: Option<(usize, TwoSegment)> = None;
    for i in first..=last {
        if let Some(t) = two_segment_at(xs, ys, xs[i]) {
            if best.is_none_or(|(_, b)| t.rss < b.rss) {
                best = Some((i, t));
            }
        }
    }
    let (i, mut best) = best?;
    let lo = xs[i.saturating_sub(1).max(first)];
    let hi = xs[(i + 1).min(last)];
    if hi > lo {
        let rss = |b: f64| two_segment_at(xs, ys, b).map_or(f64::INFINITY, |t| t.rss);
        // Coarse grid, then golden section around its best cell.
        let cells = 64;
        let grid: Vec<f64> = (0..=cells)
            .map(|j| lo + (hi - lo) * j as f64 / cells as f64)
            .collect();
        let j = (0..=cells)
            .min_by(|&a, &b| rss(grid[a]).total_cmp(&rss(grid[b])))
            .unwrap_or(0);
        let b = golden_section(rss, grid[j.saturating_sub(1)], grid[(j + 1).min(cells)]);
        if let Some(t) = two_segment_at(xs, ys, b) {
            if t.rss < best.rss {
                best = t;
            }
        }
    }
    Some(best)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// Single-line fit of an arbitrary curve, also used for scatter summaries.
pub fn loglog_line(curve: &FluctuationCurve) -> Option<LineFit> {
    let xs: Vec<f64> = curve.scales.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = curve.values.iter().map(|f| f.ln()).collect();
    fit_line(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
    }

    fn curve_from(scales: &[usize], f: impl Fn(f64) -> f64) -> FluctuationCurve {
        FluctuationCurve {
            scales: scales.to_vec(),
            values: scales.iter().map(|&s| f(s as f64)).collect(),
            poly_order: 2,
            n: 10_000,
        }
    }

    #[test]
    fn default_grid() {
        let s = default_scales(10_000, 10, 30).unwrap();
        assert_eq!(s[0], 10);
        assert_eq!(*s.last().unwrap(), 2000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.len() > 25 && s.len() <= 30);
        assert!(default_scales(49, 10, 30).is_err());
    }

    #[test]
    fn constant_series_is_degenerate() {
        let c = compute_fluctuation(&[3.5; 500], &[10, 20, 50], 1).unwrap();
        assert!(c.is_degenerate());
        assert!(c.values.iter().all(|&f| f == 0.0));
        assert!(matches!(fit_scaling(&c), Err(Error::TooFew { .. })));
    }

    #[test]
    fn too_short_reports_minimum_length() {
        match compute_fluctuation(&[1.0; 40], &[10], 2) {
            Err(Error::SeriesTooShort { len, min_len }) => assert_eq!((len, min_len), (40, 50)),
            other => panic!("{other:?}"),
        }
        assert!(compute_fluctuation(&[1.0; 100], &[3], 2).is_err());
        assert!(compute_fluctuation(&[1.0; 100], &[10, 30], 2).is_err());
        assert!(compute_fluctuation(&[1.0; 100], &[10], 4).is_err());
    }

    #[test]
    fn brute_force_segment_average() {
        // Linear detrending with explicit normal equations per segment.
        let x = noise(123, 5);
        let s = 12;
        let curve = compute_fluctuation(&x, &[s], 1).unwrap();
        let profile: Vec<f64> = x
            .iter()
            .scan(0.0, |a, v| {
                *a += v;
                Some(*a)
            })
            .collect();
        let n = x.len();
        let mut vars = Vec::new();
        for v in 0..n / s {
            for start in [v * s, n - (v + 1) * s] {
                let ts: Vec<f64> = (0..s).map(|i| i as f64).collect();
                let seg = &profile[start..start + s];
                let line = fit_line(&ts, seg).unwrap();
                vars.push(line.rss / s as f64);
            }
        }
        assert_eq!(vars.len(), 2 * (n / s));
        let f = (vars.iter().sum::<f64>() / vars.len() as f64).sqrt();
        assert!((curve.values[0] - f).abs() < 1e-12 * f);
    }

    #[test]
    fn shift_scale_and_reversal_invariance() {
        let x = noise(2000, 9);
        let scales = default_scales(x.len(), 10, 12).unwrap();
        let base = compute_fluctuation(&x, &scales, 2).unwrap();
        let shifted: Vec<f64> = x.iter().map(|v| v + 7.25).collect();
        let scaled: Vec<f64> = x.iter().map(|v| v * 3.0).collect();
        let reversed: Vec<f64> = x.iter().rev().copied().collect();
        let fs = compute_fluctuation(&shifted, &scales, 2).unwrap();
        let fc = compute_fluctuation(&scaled, &scales, 2).unwrap();
        let fr = compute_fluctuation(&reversed, &scales, 2).unwrap();
        for i in 0..scales.len() {
            let f = base.values[i];
            assert!((fs.values[i] - f).abs() < 1e-9 * f);
            assert!((fc.values[i] - 3.0 * f).abs() < 1e-9 * f);
            // The reversed profile is the original one mirrored and shifted by
            // one index, so agreement is close but not exact.
            assert!((fr.values[i] - f).abs() < 0.05 * f);
        }
    }

    #[test]
    fn reversed_profile_swaps_partitions() {
        let x = noise(1003, 2);
        let profile: Vec<f64> = x
            .iter()
            .scan(0.0, |a, v| {
                *a += v;
                Some(*a)
            })
            .collect();
        let mirrored: Vec<f64> = profile.iter().rev().map(|y| -y).collect();
        for s in [10, 17, 64, 200] {
            for order in 1..=3 {
                let a = fluctuation_at(&profile, s, order);
                let b = fluctuation_at(&mirrored, s, order);
                assert!((a - b).abs() < 1e-12 * a);
            }
        }
    }

    #[test]
    fn exact_power_law_is_single() {
        let scales: Vec<usize> = (0..20).map(|i| 10 + 25 * i).collect();
        let r = fit_scaling(&curve_from(&scales, |s| s.powf(0.7))).unwrap();
        match r.regime {
            Regime::Single { hurst, intercept, .. } => {
                assert!((hurst - 0.7).abs() < 1e-6);
                assert!(intercept.abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kinked_curve_is_double() {
        let scales = default_scales(10_000, 10, 30).unwrap();
        let f = |s: f64| {
            if s < 100.0 {
                s.powf(0.6)
            } else {
                100f64.powf(0.6) * (s / 100.0).powf(0.8)
            }
        };
        let r = fit_scaling(&curve_from(&scales, f)).unwrap();
        match r.regime {
            Regime::Double {
                hurst_small,
                hurst_large,
                crossover_scale,
                ..
            } => {
                assert!((hurst_small - 0.6).abs() < 1e-3, "{hurst_small}");
                assert!((hurst_large - 0.8).abs() < 1e-3, "{hurst_large}");
                assert!((crossover_scale - 100.0).abs() < 1.0, "{crossover_scale}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_kink_stays_single() {
        let scales = default_scales(10_000, 10, 30).unwrap();
        let f = |s: f64| if s < 100.0 { s.powf(0.6) } else { 100f64.powf(0.6) * (s / 100.0).powf(0.63) };
        assert_eq!(fit_scaling(&curve_from(&scales, f)).unwrap().regime.kind(), "single");
    }

    #[test]
    fn out_of_range_exponent_is_an_error() {
        let scales: Vec<usize> = (0..12).map(|i| 10 + 10 * i).collect();
        let r = fit_scaling(&curve_from(&scales, |s| s.powf(2.5)));
        assert!(matches!(r, Err(Error::ExponentOutOfRange(_))));
        let mut c = curve_from(&scales, |s| s);
        c.values[3] = 0.0;
        assert!(matches!(fit_scaling(&c), Err(Error::NonPositiveFluctuation { scale: 40, .. })));
    }

    #[test]
    fn white_noise_near_half() {
        let x = noise(10_000, 1);
        let scales = default_scales(x.len(), 10, 30).unwrap();
        let r = fit_scaling(&compute_fluctuation(&x, &scales, 2).unwrap()).unwrap();
        let h = loglog_line(&r.curve).unwrap().slope;
        assert!((h - 0.5).abs() < 0.06, "{h}");
    }

    #[test]
    fn csv_layout() {
        let c = curve_from(&[10, 20], |s| s);
        assert_eq!(c.to_csv(), "s,F\n10,10\n20,20\n");
    }
}
