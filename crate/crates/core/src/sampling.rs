//! Seeded quasi-random sampling (Halton sequences) inside a box.
//!
//! Verification reports sample the chart deterministically from a seed, so a
//! report is reproducible without storing point lists: point `i` of a batch
//! is the Halton tuple at index `seed + 1 + i` (the `+1` skips the all-zero
//! tuple at index 0), mapped affinely into the box.

use crate::expr::Point;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical-inverse of `index` in the given base; lies in `[0, 1)`.
fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = f64::from(base);
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while index > 0 {
        out += (index % u64::from(base)) as f64 * inv;
        index /= u64::from(base);
        inv /= b;
    }
    out
}

/// One axis-aligned interval of the sample box.
pub type AxisRange = (f64, f64);

/// `count` Halton points inside `box_ranges`, starting at sequence index
/// `seed + 1`.
pub fn halton_points(box_ranges: &[AxisRange], seed: u64, count: usize) -> Vec<Point> {
    assert!(
        box_ranges.len() <= PRIMES.len(),
        "sampling supports dimension <= {}",
        PRIMES.len()
    );
    (0..count)
        .map(|i| {
            let index = seed + 1 + i as u64;
            let coords = box_ranges
                .iter()
                .enumerate()
                .map(|(axis, &(lo, hi))| {
                    lo + (hi - lo) * radical_inverse(index, PRIMES[axis])
                })
                .collect();
            Point::new(coords)
        })
        .collect()
}

/// The unit box `[-1, 1]^dim` used by the example catalog.
pub fn symmetric_unit_box(dim: usize) -> Vec<AxisRange> {
    vec![(-1.0, 1.0); dim]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_stay_inside_the_box() {
        let ranges = [(-1.0, 1.0), (0.0, 2.0), (-0.5, 0.5), (3.0, 4.0)];
        for p in halton_points(&ranges, 7, 100) {
            for (axis, &(lo, hi)) in ranges.iter().enumerate() {
                let c = p.coords()[axis];
                assert!(c >= lo && c < hi, "axis {axis}: {c} outside [{lo}, {hi})");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let ranges = symmetric_unit_box(4);
        let a = halton_points(&ranges, 42, 10);
        let b = halton_points(&ranges, 42, 10);
        assert_eq!(a, b);
        let c = halton_points(&ranges, 43, 10);
        assert_ne!(a, c);
    }

    #[test]
    fn radical_inverse_base_two_prefix() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
    }
}
