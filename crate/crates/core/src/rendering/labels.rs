use super::braille::braille_cells;
use super::PageSpec;
use crate::calibration::Axis;

pub const MIN_PRINT_LABELS: usize = 3;
pub const MAX_PRINT_LABELS: usize = 5;

/// How many labels fit along `axis`: each needs its widest Braille run plus
/// the minimum clearance on both sides. Always between 3 and 5.
pub fn label_budget(labels: &[String], page: &PageSpec, axis: Axis) -> usize {
    let widest = labels
        .iter()
        .map(|l| braille_cells(l).unwrap_or_else(|_| l.chars().count()))
        .max()
        .unwrap_or(0) as f64;
    let per_label = widest * page.braille_cell.width_mm + 2.0 * super::MIN_BRAILLE_CLEARANCE_MM;
    let fit = (page.available_mm(axis) / per_label).floor();
    let fit = if fit.is_finite() && fit > 0.0 { fit as usize } else { 0 };
    fit.clamp(MIN_PRINT_LABELS, MAX_PRINT_LABELS)
}

/// Indices picked by [`reduce_axis_labels`]: `round_half_up(i (n-1) / (k-1))`.
pub fn reduced_indices(n: usize, k: usize) -> Vec<usize> {
    if n <= MIN_PRINT_LABELS || k >= n {
        return (0..n).collect();
    }
    let mut out: Vec<usize> = (0..k)
        .map(|i| (2 * i * (n - 1) + (k - 1)) / (2 * (k - 1)))
        .collect();
    out.dedup();
    out
}

/// Thins an ordered label list for print. Lists of three or fewer are kept;
/// otherwise 3 to 5 labels are chosen, always including both ends.
pub fn reduce_axis_labels(labels: &[String], page: &PageSpec, axis: Axis) -> Vec<String> {
    let k = label_budget(labels, page, axis);
    reduced_indices(labels.len(), k).into_iter().map(|i| labels[i].clone()).collect()
}
