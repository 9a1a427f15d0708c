//! Seeded random node sets for the certification suites.

use rand::Rng;

use crate::geometry::{random_unit, NodeSet};

/// Uniform point of the closed unit ball: a uniform direction scaled by
/// `U^{1/n}`.
pub fn random_ball_point<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let dir = random_unit(rng, n);
    let radius = rng.gen::<f64>().powf(1.0 / n as f64);
    dir.into_iter().map(|x| x * radius).collect()
}

/// `s` distinct uniform points of the unit ball in `R^n`.
pub fn random_nodeset<R: Rng>(rng: &mut R, s: usize, n: usize) -> NodeSet {
    loop {
        let points = (0..s).map(|_| random_ball_point(rng, n)).collect();
        if let Ok(set) = NodeSet::new(n, points) {
            return set;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn points_stay_in_the_ball_and_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            let x = random_nodeset(&mut a, 6, n);
            let y = random_nodeset(&mut b, 6, n);
            assert_eq!(x, y);
            for p in x.points() {
                assert!(crate::geometry::norm2(p) <= 1.0);
            }
        }
    }
}
