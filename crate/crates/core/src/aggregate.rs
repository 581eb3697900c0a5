//! Statistics across texts: language summaries, isolines, averaged hazards,
//! reliability bounds, translation shifts and Hurst scatter.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dfa::Regime;
use crate::error::{Error, Result};
use crate::linalg::{fit_line, sym_eigen2, LineFit};
use crate::weibull::{FitResult, WeibullParams};

pub const DEFAULT_HAZARD_K: usize = 15;
pub const RELIABILITY_PERCENTILE: f64 = 0.95;
const ISOLINE_BETA: (f64, f64) = (0.05, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HazardSource {
    Parametric { p: f64, beta: f64 },
    EmpiricalMean,
    SingleTextEmpirical,
}

/// h(k) for k = 1..=K. `None` marks k with no interval of length >= k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HazardCurve {
    pub values: Vec<Option<f64>>,
    pub source: HazardSource,
}

impl HazardCurve {
    pub fn k_max(&self) -> usize {
        self.values.len()
    }

    /// Value at `k` (1-based).
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied().flatten())
    }

    /// `k,h` rows; missing values are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,h\n");
        for (i, v) in self.values.iter().enumerate() {
            match v {
                Some(h) => writeln!(out, "{},{h}", i + 1),
                None => writeln!(out, "{},", i + 1),
            }
            .ok();
        }
        out
    }
}

/// `h(k) = #{k_i = k} / #{k_i >= k}` for k = 1..=K.
pub fn empirical_hazard(series: &[u64], k_max: usize) -> HazardCurve {
    let mut at = vec![0u64; k_max + 1];
    let mut at_least = vec![0u64; k_max + 2];
    for &v in series {
        let v = v as usize;
        if (1..=k_max).contains(&v) {
            at[v] += 1;
        }
        at_least[v.min(k_max + 1)] += 1;
    }
    for k in (1..=k_max).rev() {
        at_least[k] += at_least[k + 1];
    }
    let values = (1..=k_max)
        .map(|k| (at_least[k] > 0).then(|| at[k] as f64 / at_least[k] as f64))
        .collect();
    HazardCurve {
        values,
        source: HazardSource::SingleTextEmpirical,
    }
}

pub fn parametric_hazard(params: &WeibullParams, k_max: usize) -> HazardCurve {
    HazardCurve {
        values: (1..=k_max as u64).map(|k| Some(params.hazard(k))).collect(),
        source: HazardSource::Parametric {
            p: params.p(),
            beta: params.beta(),
        },
    }
}

/// Hazard of the distribution with the mean `p` and mean `beta` of the fits.
pub fn average_hazard_parametric(fits: &[FitResult], k_max: usize) -> Result<HazardCurve> {
    let (p, beta) = mean_params(fits)?;
    Ok(parametric_hazard(&WeibullParams::new(p, beta)?, k_max))
}

/// Pointwise mean over the curves that have a value at each k.
pub fn average_hazard_empirical(curves: &[HazardCurve], k_max: usize) -> Result<HazardCurve> {
    if curves.is_empty() {
        return Err(Error::Empty("hazard curves".into()));
    }
    let values = (1..=k_max)
        .map(|k| {
            let present: Vec<f64> = curves.iter().filter_map(|c| c.get(k)).collect();
            (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
        })
        .collect();
    Ok(HazardCurve {
        values,
        source: HazardSource::EmpiricalMean,
    })
}

/// Nearest-rank percentile: the value at rank `ceil(q n)` of the sorted series.
pub fn percentile_nearest_rank(series: &[u64], q: f64) -> Result<u64> {
    if series.is_empty() {
        return Err(Error::Empty("interval series".into()));
    }
    let mut sorted = series.to_vec();
    sorted.sort_unstable();
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Ok(sorted[rank - 1])
}

/// Mean over series of each series' 95th percentile.
pub fn reliability_bound<S: AsRef<[u64]>>(series_set: &[S]) -> Result<f64> {
    if series_set.is_empty() {
        return Err(Error::Empty("series set".into()));
    }
    let mut sum = 0.0;
    for s in series_set {
        sum += percentile_nearest_rank(s.as_ref(), RELIABILITY_PERCENTILE)? as f64;
    }
    Ok(sum / series_set.len() as f64)
}

/// Principal-component ellipse of a (p, beta) point cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: [f64; 2],
    pub major_axis: [f64; 2],
    pub minor_axis: [f64; 2],
    pub semi_major: f64,
    pub semi_minor: f64,
}

impl Ellipse {
    /// Mahalanobis distance of `point` from the center under the cloud's
    /// covariance. Infinite when the point leaves a zero-variance direction.
    pub fn mahalanobis(&self, point: [f64; 2]) -> f64 {
        let d = [point[0] - self.center[0], point[1] - self.center[1]];
        let mut sq = 0.0;
        for (axis, semi) in [(self.major_axis, self.semi_major), (self.minor_axis, self.semi_minor)] {
            let proj = d[0] * axis[0] + d[1] * axis[1];
            let var = semi * semi;
            if var > 0.0 {
                sq += proj * proj / var;
            } else if proj.abs() > 1e-15 * (1.0 + point[0].abs() + point[1].abs()) {
                return f64::INFINITY;
            }
        }
        sq.sqrt()
    }

    pub fn total_variance(&self) -> f64 {
        self.semi_major.powi(2) + self.semi_minor.powi(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageSummary {
    pub language_code: String,
    pub mean_p: f64,
    pub mean_beta: f64,
    pub ellipse: Ellipse,
    /// Mean 95th-percentile interval length, when series were supplied.
    pub reliability_k: Option<f64>,
    pub n_texts: usize,
}

/// Centroid and principal-component ellipse of the fitted (p, beta) points.
/// The covariance uses the population (1/n) normalization.
pub fn summarize_language(language_code: &str, fits: &[FitResult]) -> Result<LanguageSummary> {
    if fits.len() < 2 {
        return Err(Error::TooFew {
            what: format!("fits for language {language_code}"),
            need: 2,
            got: fits.len(),
        });
    }
    let (mp, mb) = mean_params(fits)?;
    let n = fits.len() as f64;
    // Corrected two-pass sums: the correction cancels rounding in the means.
    let (mut sp, mut sb, mut spp, mut spb, mut sbb) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for f in fits {
        let (dp, db) = (f.params.p() - mp, f.params.beta() - mb);
        sp += dp;
        sb += db;
        spp += dp * dp;
        spb += dp * db;
        sbb += db * db;
    }
    let var_p = ((spp - sp * sp / n) / n).max(0.0);
    let cov = (spb - sp * sb / n) / n;
    let var_b = ((sbb - sb * sb / n) / n).max(0.0);
    let ([l1, l2], [v1, v2]) = sym_eigen2(var_p, cov, var_b);
    Ok(LanguageSummary {
        language_code: language_code.to_string(),
        mean_p: mp,
        mean_beta: mb,
        ellipse: Ellipse {
            center: [mp, mb],
            major_axis: v1,
            minor_axis: v2,
            semi_major: l1.max(0.0).sqrt(),
            semi_minor: l2.max(0.0).sqrt(),
        },
        reliability_k: None,
        n_texts: fits.len(),
    })
}

fn mean_params(fits: &[FitResult]) -> Result<(f64, f64)> {
    if fits.is_empty() {
        return Err(Error::Empty("fits".into()));
    }
    let n = fits.len() as f64;
    Ok((
        fits.iter().map(|f| f.params.p()).sum::<f64>() / n,
        fits.iter().map(|f| f.params.beta()).sum::<f64>() / n,
    ))
}

/// Points with `expected_value(p, beta) = expected`, one per `p` that has a
/// root for beta in [0.05, 10]. The expected value falls as beta grows, so
/// the root is bracketed and found by bisection.
pub fn isoline(expected: f64, p_grid: &[f64]) -> Result<Vec<WeibullParams>> {
    if !(expected > 1.0 && expected.is_finite()) {
        return Err(Error::InvalidParams(format!("expected value {expected} must exceed 1")));
    }
    let mut out = Vec::new();
    for &p in p_grid {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("p = {p} not in (0, 1)")));
        }
        if let Some(beta) = isoline_beta(expected, p) {
            out.push(WeibullParams::new(p, beta)?);
        }
    }
    if out.is_empty() {
        return Err(Error::NoRoot(format!("no beta in [0.05, 10] gives expected value {expected}")));
    }
    Ok(out)
}

fn isoline_beta(expected: f64, p: f64) -> Option<f64> {
    let e = |beta: f64| WeibullParams::new(p, beta).map(|w| w.expected_value()).ok();
    let (mut lo, mut hi) = ISOLINE_BETA;
    let (e_lo, e_hi) = (e(lo)?, e(hi)?);
    if !(e_hi <= expected && expected <= e_lo) {
        return None;
    }
    // Bisection until the bracket collapses in floating point.
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        let v = e(mid)?;
        if v == expected {
            return Some(mid);
        }
        if v > expected {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Rows `p,beta,expected` for isolines through several expected values.
pub fn isolines_to_csv(lines: &[(f64, Vec<WeibullParams>)]) -> String {
    let mut out = String::from("expected,p,beta\n");
    for (e, points) in lines {
        for w in points {
            let _ = writeln!(out, "{e},{},{}", w.p(), w.beta());
        }
    }
    out
}

/// One original text and one of its translations, with their fits.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationPair {
    pub original_text_id: String,
    pub translated_text_id: String,
    pub target_language: String,
    pub original: WeibullParams,
    pub translated: WeibullParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub original_text_id: String,
    pub translated_text_id: String,
    pub target_language: String,
    pub delta_p: f64,
    pub delta_beta: f64,
    /// Mahalanobis distance of the original point from the target ellipse.
    pub distance_original: Option<f64>,
    /// Mahalanobis distance of the translated point from the target ellipse.
    pub distance_translated: Option<f64>,
    pub distance_decreased: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    /// How "moving toward the target language" is measured.
    pub method: String,
    pub entries: Vec<ShiftEntry>,
    /// Mean of `distance_original - distance_translated` over entries where both are finite.
    pub mean_distance_decrease: Option<f64>,
}

pub const SHIFT_METHOD: &str = "operationalization: Mahalanobis distance from the target-language \
    (p, beta) centroid under its principal-component covariance; smaller is closer";

/// Displacement of each translation and, when the target language has a
/// summary, its Mahalanobis distance before and after translation.
pub fn translation_shift(
    pairs: &[TranslationPair],
    target: impl Fn(&str) -> Option<LanguageSummary>,
) -> Result<ShiftReport> {
    if pairs.is_empty() {
        return Err(Error::Empty("translation pairs".into()));
    }
    let point = |w: &WeibullParams| [w.p(), w.beta()];
    let mut entries = Vec::with_capacity(pairs.len());
    let mut decreases = Vec::new();
    for pair in pairs {
        let summary = target(&pair.target_language);
        let d0 = summary.as_ref().map(|s| s.ellipse.mahalanobis(point(&pair.original)));
        let d1 = summary.as_ref().map(|s| s.ellipse.mahalanobis(point(&pair.translated)));
        let decreased = match (d0, d1) {
            (Some(a), Some(b)) if !(a.is_infinite() && b.is_infinite()) => Some(b < a),
            _ => None,
        };
        if let (Some(a), Some(b)) = (d0, d1) {
            if a.is_finite() && b.is_finite() {
                decreases.push(a - b);
            }
        }
        entries.push(ShiftEntry {
            original_text_id: pair.original_text_id.clone(),
            translated_text_id: pair.translated_text_id.clone(),
            target_language: pair.target_language.clone(),
            delta_p: pair.translated.p() - pair.original.p(),
            delta_beta: pair.translated.beta() - pair.original.beta(),
            distance_original: d0.filter(|d| d.is_finite()),
            distance_translated: d1.filter(|d| d.is_finite()),
            distance_decreased: decreased,
        });
    }
    let mean_distance_decrease =
        (!decreases.is_empty()).then(|| decreases.iter().sum::<f64>() / decreases.len() as f64);
    Ok(ShiftReport {
        method: SHIFT_METHOD.to_string(),
        entries,
        mean_distance_decrease,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstPoint {
    pub text_id: String,
    pub h_stops: f64,
    pub h_all: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstScatter {
    pub points: Vec<HurstPoint>,
    /// Least-squares `h_all = intercept + slope * h_stops`.
    pub line: LineFit,
    pub mean_h_stops: f64,
    pub mean_h_all: f64,
    /// Texts left out because either mode did not scale with a single exponent.
    pub excluded: Vec<String>,
}

impl HurstScatter {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("text_id,h_stops,h_all\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.text_id, p.h_stops, p.h_all);
        }
        out
    }
}

/// Exponents of texts whose stops-only and all-marks curves both have a
/// single scaling regime, with the least-squares line through them.
pub fn hurst_scatter(results: &[(String, Regime, Regime)]) -> Result<HurstScatter> {
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for (id, stops, all) in results {
        match (*stops, *all) {
            (Regime::Single { hurst: hs, .. }, Regime::Single { hurst: ha, .. }) => {
                points.push(HurstPoint {
                    text_id: id.clone(),
                    h_stops: hs,
                    h_all: ha,
                })
            }
            _ => excluded.push(id.clone()),
        }
    }
    if points.len() < 2 {
        return Err(Error::TooFew {
            what: "texts with single-regime scaling in both modes".into(),
            need: 2,
            got: points.len(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.h_stops).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.h_all).collect();
    let line = fit_line(&xs, &ys)
        .ok_or_else(|| Error::DegenerateFit("all stops-only exponents are equal".into()))?;
    let n = points.len() as f64;
    Ok(HurstScatter {
        mean_h_stops: xs.iter().sum::<f64>() / n,
        mean_h_all: ys.iter().sum::<f64>() / n,
        points,
        line,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(p: f64, beta: f64) -> FitResult {
        FitResult {
            params: WeibullParams::new(p, beta).unwrap(),
            log_likelihood: -1.0,
            ff_rmse: 0.0,
            n: 100,
            converged: true,
            at_bound: false,
        }
    }

    #[test]
    fn empirical_hazard_by_hand() {
        let h = empirical_hazard(&[1, 1, 2], 3);
        assert!((h.get(1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(h.get(2), Some(1.0));
        assert_eq!(h.get(3), None);
        assert_eq!(h.get(0), None);
        assert_eq!(h.to_csv(), format!("k,h\n1,{}\n2,1\n3,\n", 2.0 / 3.0));
        // Values past K still count in the denominators.
        let h = empirical_hazard(&[1, 5, 9], 2);
        assert!((h.get(1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(h.get(2), Some(0.0));
    }

    #[test]
    fn summary_examples() {
        let s = summarize_language("en", &[fit(0.1, 1.2), fit(0.3, 1.4)]).unwrap();
        assert!((s.mean_p - 0.2).abs() < 1e-15 && (s.mean_beta - 1.3).abs() < 1e-15);
        assert_eq!(s.ellipse.center, [s.mean_p, s.mean_beta]);
        let s = summarize_language("en", &vec![fit(0.2, 1.3); 3]).unwrap();
        assert_eq!((s.ellipse.semi_major, s.ellipse.semi_minor), (0.0, 0.0));
        assert!(summarize_language("en", &[fit(0.2, 1.3)]).is_err());
    }

    #[test]
    fn axis_aligned_cloud() {
        // Points (mp +- 0.2, mb) and (mp, mb +- 0.1): var_p = 0.02, var_beta = 0.005.
        // Doubling the p offsets by sqrt(2) gives var_p = 0.04 and var_beta = 0.01.
        let r2 = std::f64::consts::SQRT_2;
        let fits = [
            fit(0.5 + 0.2 * r2, 1.0),
            fit(0.5 - 0.2 * r2, 1.0),
            fit(0.5, 1.0 + 0.1 * r2),
            fit(0.5, 1.0 - 0.1 * r2),
        ];
        let s = summarize_language("xx", &fits).unwrap();
        assert!((s.ellipse.semi_major - 0.2).abs() < 1e-12);
        assert!((s.ellipse.semi_minor - 0.1).abs() < 1e-12);
        assert!(s.ellipse.major_axis[0].abs() > 1.0 - 1e-12);
        assert!(s.ellipse.minor_axis[1].abs() > 1.0 - 1e-12);
    }

    #[test]
    fn isoline_geometric_points() {
        let pts = isoline(2.0, &[0.5]).unwrap();
        assert!((pts[0].beta() - 1.0).abs() < 1e-9);
        let pts = isoline(10.0, &[0.1]).unwrap();
        assert!((pts[0].beta() - 1.0).abs() < 1e-9);
        // E >= 2 - p for every beta, so p = 0.9 has no root for E = 1.05.
        assert!(isoline(1.05, &[0.9]).is_err());
        assert!(isoline(1.0, &[0.5]).is_err());
    }

    #[test]
    fn isoline_round_trip() {
        let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.02).collect();
        let pts = isoline(6.0, &grid).unwrap();
        assert!(pts.len() > 5);
        for w in pts {
            assert!((w.expected_value() - 6.0).abs() < 1e-5);
        }
    }

    #[test]
    fn parametric_averages() {
        let single = average_hazard_parametric(&[fit(0.1, 1.25)], 5).unwrap();
        let w = WeibullParams::new(0.1, 1.25).unwrap();
        for k in 1..=5 {
            assert_eq!(single.get(k), Some(w.hazard(k as u64)));
        }
        let avg = average_hazard_parametric(&[fit(0.1, 1.2), fit(0.2, 1.4)], 15).unwrap();
        let mid = WeibullParams::new(0.15000000000000002, 1.3).unwrap();
        for k in 1..=15 {
            assert!((avg.get(k).unwrap() - mid.hazard(k as u64)).abs() < 1e-12);
        }
        assert!(average_hazard_parametric(&[], 5).is_err());
    }

    #[test]
    fn empirical_average() {
        let a = HazardCurve {
            values: vec![Some(0.2), Some(0.4)],
            source: HazardSource::SingleTextEmpirical,
        };
        let b = HazardCurve {
            values: vec![Some(0.4), Some(0.6)],
            source: HazardSource::SingleTextEmpirical,
        };
        let c = HazardCurve {
            values: vec![Some(0.3), None],
            source: HazardSource::SingleTextEmpirical,
        };
        let m = average_hazard_empirical(&[a.clone(), b], 2).unwrap();
        assert!((m.get(1).unwrap() - 0.3).abs() < 1e-15);
        assert!((m.get(2).unwrap() - 0.5).abs() < 1e-15);
        let m = average_hazard_empirical(&[a.clone(), c], 3).unwrap();
        assert_eq!(m.get(2), Some(0.4));
        assert_eq!(m.get(3), None);
        assert_eq!(average_hazard_empirical(&[a.clone(), a.clone()], 2).unwrap().values, a.values);
    }

    #[test]
    fn percentiles() {
        let s: Vec<u64> = (1..=100).collect();
        assert_eq!(reliability_bound(&[s]).unwrap(), 95.0);
        let ten = vec![10u64; 7];
        let twenty = vec![20u64; 3];
        assert_eq!(reliability_bound(&[ten, twenty]).unwrap(), 15.0);
        assert_eq!(percentile_nearest_rank(&[3], 0.95).unwrap(), 3);
        assert!(reliability_bound(&[Vec::<u64>::new()]).is_err());
    }

    #[test]
    fn mahalanobis_at_center_and_on_axes() {
        let s = summarize_language(
            "xx",
            &[fit(0.1, 1.0), fit(0.3, 1.0), fit(0.2, 0.9), fit(0.2, 1.1)],
        )
        .unwrap();
        assert_eq!(s.ellipse.mahalanobis(s.ellipse.center), 0.0);
        // One semi-axis away along beta.
        let semi = s.ellipse.semi_minor;
        let d = s.ellipse.mahalanobis([0.2, 1.0 + semi]);
        assert!((d - 1.0).abs() < 1e-9, "{d}");
        let flat = summarize_language("xx", &[fit(0.1, 1.0), fit(0.3, 1.0)]).unwrap();
        assert!(flat.ellipse.mahalanobis([0.2, 1.5]).is_infinite());
        assert!(flat.ellipse.mahalanobis([0.25, 1.0]).is_finite());
    }

    #[test]
    fn shift_report() {
        let target = summarize_language("de", &[fit(0.1, 1.2), fit(0.2, 1.4), fit(0.15, 1.1)]).unwrap();
        let pair = |orig: (f64, f64), tr: (f64, f64), lang: &str| TranslationPair {
            original_text_id: "o".into(),
            translated_text_id: "t".into(),
            target_language: lang.into(),
            original: WeibullParams::new(orig.0, orig.1).unwrap(),
            translated: WeibullParams::new(tr.0, tr.1).unwrap(),
        };
        let c = (target.mean_p, target.mean_beta);
        let r = translation_shift(
            &[pair((0.3, 1.6), c, "de"), pair((0.3, 1.6), (0.3, 1.6), "fr")],
            |l| (l == "de").then(|| target.clone()),
        )
        .unwrap();
        assert!(r.method.contains("operationalization"));
        assert_eq!(r.entries[0].distance_translated, Some(0.0));
        assert_eq!(r.entries[0].distance_decreased, Some(true));
        assert_eq!((r.entries[1].delta_p, r.entries[1].delta_beta), (0.0, 0.0));
        assert_eq!(r.entries[1].distance_original, None);
        assert!(r.mean_distance_decrease.unwrap() > 0.0);
        assert!(translation_shift(&[], |_| None).is_err());
    }

    fn single(h: f64) -> Regime {
        Regime::Single {
            hurst: h,
            intercept: 0.0,
            rmse: 0.0,
        }
    }

    #[test]
    fn scatter_on_identity() {
        let rows: Vec<_> = [0.5, 0.6, 0.7]
            .iter()
            .map(|&h| (format!("t{h}"), single(h), single(h)))
            .collect();
        let mut rows = rows;
        rows.push((
            "kinked".into(),
            single(0.5),
            Regime::Double {
                hurst_small: 0.6,
                hurst_large: 0.8,
                crossover_scale: 100.0,
                rmse: 0.0,
            },
        ));
        let s = hurst_scatter(&rows).unwrap();
        assert!((s.line.slope - 1.0).abs() < 1e-12 && s.line.intercept.abs() < 1e-12);
        assert_eq!(s.excluded, vec!["kinked".to_string()]);
        assert!((s.mean_h_all - 0.6).abs() < 1e-12);
        assert!(hurst_scatter(&rows[..1]).is_err());
        let two = hurst_scatter(&[("a".into(), single(0.5), single(0.7)), ("b".into(), single(0.6), single(0.9))]).unwrap();
        assert!((two.line.slope - 2.0).abs() < 1e-12 && two.line.rss < 1e-28);
    }
}
