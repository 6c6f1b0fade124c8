//! Exact two-dimensional hypervolume (minimization, both objectives) by the
//! standard sorted sweep.

/// Area weakly dominated by `front` inside the box bounded by `reference`.
/// Points that fail to dominate the reference contribute nothing; dominated
/// points contribute nothing; an empty front yields 0.
pub fn hypervolume_2d(front: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let mut points: Vec<[f64; 2]> = front
        .iter()
        .copied()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .collect();
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut area = 0.0;
    let mut upper_f2 = reference[1];
    for p in points {
        if p[1] < upper_f2 {
            area += (reference[0] - p[0]) * (upper_f2 - p[1]);
            upper_f2 = p[1];
        }
    }
    area
}
