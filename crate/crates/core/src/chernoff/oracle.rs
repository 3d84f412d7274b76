use super::boundary_coefficients;
use crate::error::{Error, Result};
use crate::markov::{conditional_relative_entropy, dc_slices, MarkovModel};

/// Brute-force Chernoff information for binary first-order chains.
///
/// Consistent binary bigram laws form the triangle
/// `(p00, p01, p10, p11) = (y, x, x, 1 - y - 2x)`. The triangle is scanned on
/// a `resolution x resolution` grid; every grid edge across which
/// `D_c(p || p1) - D_c(p || p2)` changes sign is bisected to the crossing,
/// and the smallest `D_c(p || p1)` over crossings is returned.
pub fn grid_oracle_chernoff(p1: &MarkovModel, p2: &MarkovModel, resolution: usize) -> Result<f64> {
    for m in [p1, p2] {
        if m.order() != 1 || m.alphabet().size() != 2 {
            return Err(Error::Unsupported("grid oracle handles binary first-order chains only".into()));
        }
    }
    if resolution < 2 {
        return Err(Error::InvalidInput("resolution must be at least 2".into()));
    }
    let d12 = conditional_relative_entropy(p1.joint(), p2.joint());
    let d21 = conditional_relative_entropy(p2.joint(), p1.joint());
    if d12 == 0.0 && d21 == 0.0 {
        return Ok(0.0);
    }

    let r = boundary_coefficients(p1, p2);
    let q1 = p1.joint().probs();
    let point = |i: usize, j: usize| -> Option<[f64; 4]> {
        let x = 0.5 * i as f64 / resolution as f64;
        let y = j as f64 / resolution as f64;
        let z = 1.0 - y - 2.0 * x;
        (z >= -1e-12).then_some([y, x, x, z.max(0.0)])
    };
    let gap = |p: &[f64; 4]| -> f64 { r.iter().zip(p).map(|(a, b)| a * b).sum() };
    let value = |p: &[f64; 4]| dc_slices(p, q1, 2);

    let mut best = f64::INFINITY;
    let mut consider_edge = |a: [f64; 4], b: [f64; 4]| {
        let (ga, gb) = (gap(&a), gap(&b));
        if ga == 0.0 {
            best = best.min(value(&a));
        }
        if ga * gb >= 0.0 {
            return;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let pm = lerp(&a, &b, mid);
            if (gap(&pm) < 0.0) == (ga < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = best.min(value(&lerp(&a, &b, 0.5 * (lo + hi))));
    };

    for i in 0..=resolution {
        for j in 0..=resolution {
            let Some(a) = point(i, j) else { continue };
            match point(i + 1, j) {
                Some(b) if i < resolution => consider_edge(a, b),
                _ => consider_edge(a, a),
            }
            if let Some(b) = point(i, j + 1).filter(|_| j < resolution) {
                consider_edge(a, b);
            }
        }
    }
    Ok(best)
}

fn lerp(a: &[f64; 4], b: &[f64; 4], t: f64) -> [f64; 4] {
    std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
}
