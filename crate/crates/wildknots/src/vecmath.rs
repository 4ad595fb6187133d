//! Small helpers for dense real vectors of runtime dimension.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// a + s * (b - a)
pub fn lerp(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect()
}

/// Distance from point `p` to the segment `a`-`b`.
pub fn point_segment_dist(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let len2 = norm_sq(&ab);
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (dot(&sub(p, a), &ab) / len2).clamp(0.0, 1.0);
    dist(p, &lerp(a, b, t))
}

/// Shortest distance between segments `a0`-`a1` and `b0`-`b1`.
pub fn segment_segment_dist(a0: &[f64], a1: &[f64], b0: &[f64], b1: &[f64]) -> f64 {
    let u = sub(a1, a0);
    let v = sub(b1, b0);
    let w = sub(a0, b0);
    let a = norm_sq(&u);
    let b = dot(&u, &v);
    let c = norm_sq(&v);
    let d = dot(&u, &w);
    let e = dot(&v, &w);
    let denom = a * c - b * b;

    let mut s = if denom > 1e-30 {
        ((b * e - c * d) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let t = if c > 1e-30 {
        ((b * s + e) / c).clamp(0.0, 1.0)
    } else {
        0.0
    };
    // re-clamp s against the chosen t
    if a > 1e-30 {
        s = ((b * t - d) / a).clamp(0.0, 1.0);
    }
    let pa = lerp(a0, a1, s);
    let pb = lerp(b0, b1, t);
    dist(&pa, &pb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_parallel_and_crossing() {
        let d = segment_segment_dist(&[0., 0., 0.], &[1., 0., 0.], &[0., 1., 0.], &[1., 1., 0.]);
        assert!((d - 1.0).abs() < 1e-12);
        let d = segment_segment_dist(&[0., 0., 0.], &[1., 1., 0.], &[1., 0., 0.], &[0., 1., 0.]);
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn point_segment_endpoints() {
        let d = point_segment_dist(&[2., 0., 0.], &[0., 0., 0.], &[1., 0., 0.]);
        assert!((d - 1.0).abs() < 1e-12);
    }
}
