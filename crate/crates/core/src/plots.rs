//! Weibull plots and their rescaling into the unit square.
//!
//! In Weibull coordinates `x = ln k`, `y = ln(-ln(1 - F(k)))` a discrete
//! Weibull CDF is the straight line `y = ln(-ln(1-p)) + beta * x`. The rescaled
//! plot maps the rectangle enclosing both the data and that line onto
//! `[0,1]^2` so the reference line becomes the diagonal.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weibull::{Histogram, WeibullParams};

/// `y = intercept + slope * x`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLine {
    pub intercept: f64,
    pub slope: f64,
}

impl ReferenceLine {
    pub fn for_params(params: &WeibullParams) -> Self {
        ReferenceLine {
            intercept: (-(-params.p()).ln_1p()).ln(),
            slope: params.beta(),
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlotBounds {
    /// Reference line of the plot before rescaling.
    pub source_line: ReferenceLine,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl PlotBounds {
    /// The source reference line's ends at `x_plot.min` and `x_plot.max`,
    /// mapped into the unit square.
    pub fn reference_endpoints(&self) -> [(f64, f64); 2] {
        let w = self.x_max - self.x_min;
        let h = self.y_max - self.y_min;
        [self.x_min, self.x_max].map(|x| {
            (
                (x - self.x_min) / w,
                (self.source_line.at(x) - self.y_min) / h,
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub points: Vec<(f64, f64)>,
    pub reference_line: ReferenceLine,
    /// Set on rescaled plots: the rectangle (in the original coordinates) that was mapped to the unit square.
    pub bounds: Option<PlotBounds>,
}

impl PlotSeries {
    /// Two-column CSV preceded by `#`-prefixed metadata lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let line = self.bounds.map_or(self.reference_line, |b| b.source_line);
        let _ = writeln!(out, "# intercept_a={}", line.intercept);
        let _ = writeln!(out, "# slope_b={}", line.slope);
        if let Some(b) = &self.bounds {
            let _ = writeln!(
                out,
                "# bounds x_plot_min={} x_plot_max={} y_plot_min={} y_plot_max={}",
                b.x_min, b.x_max, b.y_min, b.y_max
            );
            let _ = writeln!(out, "# bounds_rule=data_extremes");
        }
        out.push_str("x,y\n");
        for (x, y) in &self.points {
            let _ = writeln!(out, "{x},{y}");
        }
        out
    }
}

/// Weibull plot of the empirical CDF at each observed interval length.
/// The largest length, where the ECDF reaches 1, has no finite y and is left out.
pub fn weibull_plot(series: &[u64], params: &WeibullParams) -> Result<PlotSeries> {
    if series.is_empty() {
        return Err(Error::Empty("interval series".into()));
    }
    let hist = Histogram::new(series);
    let n = hist.n() as f64;
    let mut below = 0u64;
    let mut points = Vec::new();
    for &(k, c) in hist.bins() {
        below += c;
        let f = below as f64 / n;
        if f < 1.0 {
            points.push(((k as f64).ln(), (-(-f).ln_1p()).ln()));
        }
    }
    if points.is_empty() {
        return Err(Error::Empty("no plottable points (ECDF is 1 everywhere)".into()));
    }
    Ok(PlotSeries {
        points,
        reference_line: ReferenceLine::for_params(params),
        bounds: None,
    })
}

/// Maps the plot into `[0,1]^2` so its reference line runs from (0,0) to (1,1).
///
/// The rectangle is the smallest one holding the points and the reference
/// line's extent over them:
/// `x_plot.min = min(x_min, (y_min - a)/b)`, `y_plot.min = min(y_min, a + b x_min)`,
/// and symmetrically for the maxima, with x/y extremes taken from the data.
pub fn rescale_plot(plot: &PlotSeries) -> Result<PlotSeries> {
    if plot.points.len() < 2 {
        return Err(Error::TooFew {
            what: "plot points".into(),
            need: 2,
            got: plot.points.len(),
        });
    }
    let line = plot.reference_line;
    if line.slope == 0.0 || !line.slope.is_finite() || !line.intercept.is_finite() {
        return Err(Error::DegenerateBounds(format!("reference slope {}", line.slope)));
    }
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &plot.points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    let (a, b) = (line.intercept, line.slope);
    let bounds = PlotBounds {
        source_line: line,
        x_min: x_min.min((y_min - a) / b),
        x_max: x_max.max((y_max - a) / b),
        y_min: y_min.min(a + b * x_min),
        y_max: y_max.max(a + b * x_max),
    };
    let width = bounds.x_max - bounds.x_min;
    let height = bounds.y_max - bounds.y_min;
    if !(width > 0.0 && height > 0.0) {
        return Err(Error::DegenerateBounds(format!("width {width}, height {height}")));
    }
    let points = plot
        .points
        .iter()
        .map(|&(x, y)| {
            (
                ((x - bounds.x_min) / width).clamp(0.0, 1.0),
                ((y - bounds.y_min) / height).clamp(0.0, 1.0),
            )
        })
        .collect();
    Ok(PlotSeries {
        points,
        reference_line: ReferenceLine {
            intercept: 0.0,
            slope: 1.0,
        },
        bounds: Some(bounds),
    })
}

/// Largest vertical distance from the diagonal in a rescaled plot.
pub fn max_diagonal_deviation(rescaled: &PlotSeries) -> f64 {
    rescaled
        .points
        .iter()
        .map(|(x, y)| (y - x).abs())
        .fold(0.0, f64::max)
}
