//! Latin hypercube sampling on the unit cube.

use rand::seq::SliceRandom;
use rand::Rng;

/// `n` points in `[0,1)^dim` with one sample per stratum and dimension.
pub fn latin_hypercube(n: usize, dim: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; dim]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for d in 0..dim {
        perm.shuffle(rng);
        for (i, &stratum) in perm.iter().enumerate() {
            points[i][d] = (stratum as f64 + rng.gen::<f64>()) / n as f64;
        }
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_sample_per_stratum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 16;
        let pts = latin_hypercube(n, 3, &mut rng);
        for d in 0..3 {
            let mut seen = vec![false; n];
            for p in &pts {
                let stratum = (p[d] * n as f64) as usize;
                assert!(!seen[stratum], "two samples in stratum {stratum}");
                seen[stratum] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
