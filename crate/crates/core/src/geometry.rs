use serde::{Deserialize, Serialize};

/// A point in continuous pixel coordinates. Pixel `(i, j)` covers
/// `[i, i+1) x [j, j+1)` and has its center at `(i + 0.5, j + 0.5)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PixelPoint {
    pub x: f64,
    pub y: f64,
}

impl PixelPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: PixelPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: PixelPoint, t: f64) -> PixelPoint {
        PixelPoint::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

impl From<[f64; 2]> for PixelPoint {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<PixelPoint> for [f64; 2] {
    fn from(p: PixelPoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(f64, f64)> for PixelPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Axis-aligned rectangle, `x`/`y` at the top-left corner.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    pub const fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn center(&self) -> PixelPoint {
        PixelPoint::new(self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn contains_box(&self, other: &BBox, slack: f64) -> bool {
        other.x >= self.x - slack
            && other.y >= self.y - slack
            && other.right() <= self.right() + slack
            && other.bottom() <= self.bottom() + slack
    }

    /// Euclidean gap between two boxes; zero when they touch or overlap.
    pub fn gap(&self, other: &BBox) -> f64 {
        let dx = (other.x - self.right()).max(self.x - other.right()).max(0.0);
        let dy = (other.y - self.bottom()).max(self.y - other.bottom()).max(0.0);
        dx.hypot(dy)
    }

    /// Distance from the box to a segment; zero when the segment touches it.
    pub fn distance_to_segment(&self, a: PixelPoint, b: PixelPoint) -> f64 {
        if self.contains_point(a) || self.contains_point(b) || self.segment_crosses(a, b) {
            return 0.0;
        }
        let corners = [
            PixelPoint::new(self.x, self.y),
            PixelPoint::new(self.right(), self.y),
            PixelPoint::new(self.right(), self.bottom()),
            PixelPoint::new(self.x, self.bottom()),
        ];
        let mut best = f64::INFINITY;
        for i in 0..4 {
            let (c, d) = (corners[i], corners[(i + 1) % 4]);
            best = best
                .min(point_segment_distance(a, c, d))
                .min(point_segment_distance(b, c, d))
                .min(point_segment_distance(c, a, b))
                .min(point_segment_distance(d, a, b));
        }
        best
    }

    pub fn contains_point(&self, p: PixelPoint) -> bool {
        p.x >= self.x && p.x <= self.right() && p.y >= self.y && p.y <= self.bottom()
    }

    fn segment_crosses(&self, a: PixelPoint, b: PixelPoint) -> bool {
        let corners = [
            PixelPoint::new(self.x, self.y),
            PixelPoint::new(self.right(), self.y),
            PixelPoint::new(self.right(), self.bottom()),
            PixelPoint::new(self.x, self.bottom()),
        ];
        (0..4).any(|i| segments_intersect(a, b, corners[i], corners[(i + 1) % 4]))
    }
}

pub fn point_segment_distance(p: PixelPoint, a: PixelPoint, b: PixelPoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(a.lerp(b, t))
}

fn segments_intersect(p1: PixelPoint, p2: PixelPoint, q1: PixelPoint, q2: PixelPoint) -> bool {
    let orient = |a: PixelPoint, b: PixelPoint, c: PixelPoint| (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}
