use serde::{Deserialize, Serialize};

use super::ExtractionError;
use crate::geometry::PixelPoint;

/// Ordered pixel-space trace with at least one point and no consecutive
/// duplicates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PixelPoint>", into = "Vec<PixelPoint>")]
pub struct PixelPolyline {
    points: Vec<PixelPoint>,
}

impl PixelPolyline {
    /// Builds a polyline, collapsing runs of identical consecutive points.
    pub fn new(mut points: Vec<PixelPoint>) -> Result<Self, ExtractionError> {
        points.dedup();
        if points.is_empty() {
            return Err(ExtractionError::EmptyInput("polyline has no points"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[PixelPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> PixelPoint {
        self.points[0]
    }

    pub fn last(&self) -> PixelPoint {
        self.points[self.points.len() - 1]
    }

    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    pub(crate) fn points_mut(&mut self) -> &mut Vec<PixelPoint> {
        &mut self.points
    }

    pub fn into_points(self) -> Vec<PixelPoint> {
        self.points
    }
}

impl TryFrom<Vec<PixelPoint>> for PixelPolyline {
    type Error = ExtractionError;

    fn try_from(points: Vec<PixelPoint>) -> Result<Self, Self::Error> {
        Self::new(points)
    }
}

impl From<PixelPolyline> for Vec<PixelPoint> {
    fn from(p: PixelPolyline) -> Self {
        p.points
    }
}

/// `n` points spaced evenly by arc length; the first and last input points
/// are reproduced exactly.
pub fn sample_equidistant(polyline: &PixelPolyline, n: usize) -> Result<PixelPolyline, ExtractionError> {
    if n < 2 {
        return Err(ExtractionError::InvalidInput(format!("need at least 2 samples, got {n}")));
    }
    let pts = polyline.points();
    if pts.len() < 2 {
        return Err(ExtractionError::Degenerate("polyline has a single point"));
    }
    let mut cumulative = Vec::with_capacity(pts.len());
    cumulative.push(0.0);
    for w in pts.windows(2) {
        let last = *cumulative.last().expect("non-empty");
        cumulative.push(last + w[0].distance(w[1]));
    }
    let total = *cumulative.last().expect("non-empty");
    if !(total > 0.0) || !total.is_finite() {
        return Err(ExtractionError::Degenerate("polyline has zero arc length"));
    }

    let mut out = Vec::with_capacity(n);
    out.push(pts[0]);
    let mut seg = 0;
    for k in 1..n - 1 {
        let target = total * k as f64 / (n - 1) as f64;
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < target {
            seg += 1;
        }
        let seg_len = cumulative[seg + 1] - cumulative[seg];
        let t = if seg_len > 0.0 {
            ((target - cumulative[seg]) / seg_len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(pts[seg].lerp(pts[seg + 1], t));
    }
    out.push(pts[pts.len() - 1]);
    // Heavy subsampling of tiny curves can yield coincident samples; keep
    // them, so the output length is always `n`.
    Ok(PixelPolyline { points: out })
}

/// `max(2, round(arc_length / 15))`, capped at 300.
pub fn default_keypoint_count(arc_length: f64) -> usize {
    if !arc_length.is_finite() {
        return 2;
    }
    ((arc_length / 15.0).round() as usize).clamp(2, 300)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(pts: &[(f64, f64)]) -> PixelPolyline {
        PixelPolyline::new(pts.iter().map(|&p| p.into()).collect()).unwrap()
    }

    #[test]
    fn straight_segment_thirds() {
        let s = sample_equidistant(&line(&[(0.0, 0.0), (10.0, 0.0)]), 3).unwrap();
        assert_eq!(s.points(), &[PixelPoint::new(0.0, 0.0), PixelPoint::new(5.0, 0.0), PixelPoint::new(10.0, 0.0)]);
    }

    #[test]
    fn l_path_walks_arc_length() {
        let s = sample_equidistant(&line(&[(0.0, 0.0), (0.0, 4.0), (3.0, 4.0)]), 3).unwrap();
        assert_eq!(s.points(), &[PixelPoint::new(0.0, 0.0), PixelPoint::new(0.0, 3.5), PixelPoint::new(3.0, 4.0)]);
    }

    #[test]
    fn two_samples_are_endpoints() {
        let l = line(&[(1.0, 2.0), (4.0, 9.0), (-3.0, 0.5)]);
        let s = sample_equidistant(&l, 2).unwrap();
        assert_eq!(s.points(), &[l.first(), l.last()]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            sample_equidistant(&line(&[(1.0, 1.0)]), 3),
            Err(ExtractionError::Degenerate(_))
        ));
        assert!(matches!(
            sample_equidistant(&line(&[(0.0, 0.0), (1.0, 0.0)]), 1),
            Err(ExtractionError::InvalidInput(_))
        ));
        assert!(PixelPolyline::new(vec![]).is_err());
    }

    #[test]
    fn consecutive_duplicates_collapse() {
        let l = line(&[(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn default_counts() {
        assert_eq!(default_keypoint_count(0.0), 2);
        assert_eq!(default_keypoint_count(150.0), 10);
        assert_eq!(default_keypoint_count(1e6), 300);
    }
}
