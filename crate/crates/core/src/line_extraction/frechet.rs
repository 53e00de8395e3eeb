use super::{ExtractionError, PixelPolyline};

/// Discrete Fréchet distance under the Euclidean point metric.
///
/// Fills the coupling table row by row, keeping only the previous row:
/// `c(i,j) = max(d(p_i, q_j), min(c(i-1,j), c(i,j-1), c(i-1,j-1)))`.
pub fn frechet_distance(p: &PixelPolyline, q: &PixelPolyline) -> Result<f64, ExtractionError> {
    let (p, q) = (p.points(), q.points());
    if p.is_empty() || q.is_empty() {
        return Err(ExtractionError::EmptyInput("Fréchet distance needs two non-empty polylines"));
    }
    let mut prev = vec![0.0f64; q.len()];
    let mut cur = vec![0.0f64; q.len()];
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let d = pi.distance(*qj);
            cur[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => d.max(cur[j - 1]),
                (_, 0) => d.max(prev[0]),
                _ => d.max(prev[j].min(cur[j - 1]).min(prev[j - 1])),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[q.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PixelPoint;

    fn line(pts: &[(f64, f64)]) -> PixelPolyline {
        PixelPolyline::new(pts.iter().map(|&p| PixelPoint::from(p)).collect()).unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let a = line(&[(0.0, 0.0), (3.0, 1.0), (7.0, -2.0)]);
        assert_eq!(frechet_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn single_points() {
        assert_eq!(frechet_distance(&line(&[(0.0, 0.0)]), &line(&[(3.0, 4.0)])).unwrap(), 5.0);
    }

    #[test]
    fn parallel_offset() {
        // Brute force over monotone couplings: the diagonal coupling gives 1,
        // and every coupling pairs (0,0) with (0,1), so 1 is the minimum.
        let a = line(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let b = line(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]);
        assert_eq!(frechet_distance(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn geo_reference_value() {
        // Same inputs as the `geo` crate's doc example for its Fréchet distance.
        let a = line(&[(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        let b = line(&[(2.0, 2.0), (0.0, 1.0), (2.0, 4.0), (3.0, 4.0)]);
        assert_eq!(frechet_distance(&a, &b).unwrap(), 2.0);
    }
}
