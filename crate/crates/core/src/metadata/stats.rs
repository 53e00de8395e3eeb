use serde::{Deserialize, Serialize};

use super::MetadataError;
use crate::calibration::DataPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Flat,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub min: DataPoint,
    pub max: DataPoint,
    pub first: DataPoint,
    pub last: DataPoint,
    pub mean_y: f64,
    pub outliers: Vec<DataPoint>,
    pub trend: Trend,
}

/// Quantile of sorted values by linear interpolation between order
/// statistics (`h = (n - 1) p`).
pub fn quartile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Extremes, mean, IQR outliers and overall trend of a series.
///
/// Ties for min/max go to the earliest point. Trend compares the net change
/// `last - first` against a band of 5 % of the y-range.
pub fn compute_stats(points: &[DataPoint]) -> Result<SeriesStats, MetadataError> {
    let (first, last) = match (points.first(), points.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(MetadataError::NoPoints),
    };
    let mut min = first;
    let mut max = first;
    for p in &points[1..] {
        if p.y < min.y {
            min = *p;
        }
        if p.y > max.y {
            max = *p;
        }
    }
    let mean_y = points.iter().map(|p| p.y).sum::<f64>() / points.len() as f64;

    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    ys.sort_by(f64::total_cmp);
    let q1 = quartile(&ys, 0.25);
    let q3 = quartile(&ys, 0.75);
    let iqr = q3 - q1;
    let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let outliers = points.iter().filter(|p| p.y < lo || p.y > hi).copied().collect();

    let range = max.y - min.y;
    let net = last.y - first.y;
    let band = 0.05 * range;
    let variation: f64 = points.windows(2).map(|w| (w[1].y - w[0].y).abs()).sum();
    let trend = if range == 0.0 {
        Trend::Flat
    } else if net > band {
        Trend::Increasing
    } else if net < -band {
        Trend::Decreasing
    } else if variation <= 2.0 * net.abs() {
        Trend::Flat
    } else {
        Trend::Mixed
    };

    Ok(SeriesStats {
        min,
        max,
        first,
        last,
        mean_y: mean_y.clamp(min.y, max.y),
        outliers,
        trend,
    })
}
