use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropical_core::RPoint;

use crate::ExperimentError;

/// Name of the generator, written into every output for reproducibility.
pub const RNG_NAME: &str = "ChaCha8Rng(seed_from_u64)";
pub const SEED_MIX_NAME: &str = "splitmix64-fold(base,s,n,index)";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` in cell `(s, n)` of a sweep.
pub fn trial_seed(base: u64, s: u32, n: usize, index: usize) -> u64 {
    [s as u64, n as u64, index as u64]
        .into_iter()
        .fold(splitmix64(base), |h, v| splitmix64(h ^ v))
}

/// `n` distinct points `(x/s, y/s)` with `1 <= x, y <= s - 1`, uniform
/// without replacement.
pub fn sample_points(s: u32, n: usize, seed: u64) -> Result<Vec<RPoint>, ExperimentError> {
    if s < 2 {
        return Err(ExperimentError::Config(format!("lattice scale {s} is too small")));
    }
    let side = (s - 1) as usize;
    if n > side * side {
        return Err(ExperimentError::Config(format!(
            "{n} distinct points requested but only {} interior lattice points exist at s = {s}",
            side * side
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index::sample(&mut rng, side * side, n)
        .into_iter()
        .map(|k| RPoint::lattice((k % side) as i64 + 1, (k / side) as i64 + 1, s as i64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_draw() {
        let mut pts = sample_points(4, 9, 5).unwrap();
        pts.sort();
        let mut all: Vec<_> = (1..4)
            .flat_map(|x| (1..4).map(move |y| RPoint::lattice(x, y, 4)))
            .collect();
        all.sort();
        assert_eq!(pts, all);
        assert!(sample_points(4, 10, 5).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(sample_points(64, 16, 42).unwrap(), sample_points(64, 16, 42).unwrap());
        assert_ne!(sample_points(64, 16, 42).unwrap(), sample_points(64, 16, 43).unwrap());
    }

    #[test]
    fn seeds_differ_across_cells() {
        let a = trial_seed(1, 64, 16, 0);
        assert_ne!(a, trial_seed(1, 64, 16, 1));
        assert_ne!(a, trial_seed(1, 32, 16, 0));
        assert_ne!(a, trial_seed(1, 64, 8, 0));
        assert_ne!(a, trial_seed(2, 64, 16, 0));
    }
}
