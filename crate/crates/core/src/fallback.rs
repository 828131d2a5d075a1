use crate::geometry::Vec2;

/// Separating direction for two coincident points `a` and `b`.
///
/// Pseudo-random but fixed per unordered pair, and antisymmetric:
/// `axis(a, b) == -axis(b, a)`.
pub(crate) fn separating_axis(a: usize, b: usize) -> Vec2 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let h = splitmix64((lo as u64) << 32 ^ hi as u64);
    let angle = (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * core::f64::consts::TAU;
    let axis = Vec2::from_angle(angle);
    if a <= b {
        axis
    } else {
        -axis
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_unit() {
        for (a, b) in [(0, 1), (3, 17), (100, 2)] {
            let u = separating_axis(a, b);
            let v = separating_axis(b, a);
            assert!((u.norm() - 1.0).abs() < 1e-12);
            assert_eq!(u, -v);
        }
    }
}
