//! Shortest path through a planar sequence of portals (simple stupid funnel).

pub type P2 = [f64; 2];

/// Portal as seen walking forward: `left` endpoint and `right` endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Portal {
    pub left: P2,
    pub right: P2,
}

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Vertices of the taut path from `start` to `end` through `portals`,
/// including both ends.
pub fn funnel(start: P2, end: P2, portals: &[Portal]) -> Vec<P2> {
    let mut all = Vec::with_capacity(portals.len() + 2);
    all.push(Portal { left: start, right: start });
    all.extend_from_slice(portals);
    all.push(Portal { left: end, right: end });

    let mut path = vec![start];
    let (mut apex, mut left, mut right) = (start, start, start);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut apex_i;
    let mut i = 1;
    while i < all.len() {
        let Portal { left: l, right: r } = all[i];

        if cross(apex, right, r) >= 0.0 {
            if apex == right || cross(apex, left, r) < 0.0 {
                right = r;
                right_i = i;
            } else {
                path.push(left);
                apex = left;
                apex_i = left_i;
                right = apex;
                right_i = apex_i;
                i = apex_i + 1;
                continue;
            }
        }

        if cross(apex, left, l) <= 0.0 {
            if apex == left || cross(apex, right, l) > 0.0 {
                left = l;
                left_i = i;
            } else {
                path.push(right);
                apex = right;
                apex_i = right_i;
                left = apex;
                left_i = apex_i;
                i = apex_i + 1;
                continue;
            }
        }
        i += 1;
    }
    if *path.last().unwrap() != end {
        path.push(end);
    }
    path
}

pub fn polyline_length(path: &[P2]) -> f64 {
    path.windows(2).map(|w| dist(w[0], w[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_through_wide_portals() {
        let portals =
            [Portal { left: [1.0, 1.0], right: [1.0, -1.0] }, Portal { left: [2.0, 1.0], right: [2.0, -1.0] }];
        let path = funnel([0.0, 0.0], [3.0, 0.0], &portals);
        assert_eq!(path, vec![[0.0, 0.0], [3.0, 0.0]]);
    }

    #[test]
    fn wraps_around_a_corner() {
        // Portal forces the path to bend at its left end (1, 0).
        let portals = [Portal { left: [1.0, 0.0], right: [1.0, -2.0] }];
        let path = funnel([0.0, 1.0], [2.0, 1.0], &portals);
        assert_eq!(path, vec![[0.0, 1.0], [1.0, 0.0], [2.0, 1.0]]);
        assert!((polyline_length(&path) - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bends_on_the_right_side() {
        let portals = [Portal { left: [1.0, 2.0], right: [1.0, 0.0] }];
        let path = funnel([0.0, -1.0], [2.0, -1.0], &portals);
        assert_eq!(path, vec![[0.0, -1.0], [1.0, 0.0], [2.0, -1.0]]);
    }
}
