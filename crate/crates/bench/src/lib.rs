//! Deterministic inputs shared by the benchmarks.

use kumtors::linalg::Int;
use kumtors::SparseIntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `rows × cols` matrix with entries in `-3..=3`, each nonzero with
/// probability `density`.
pub fn random_sparse(rows: usize, cols: usize, density: f64, seed: u64) -> SparseIntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trip = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                let v: i64 = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                trip.push((i, j, Int::from(v)));
            }
        }
    }
    SparseIntMatrix::from_triplets(rows, cols, trip).expect("in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(random_sparse(20, 30, 0.1, 7), random_sparse(20, 30, 0.1, 7));
        assert_eq!(random_sparse(5, 5, 0.0, 1).nnz(), 0);
    }
}
