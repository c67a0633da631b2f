//! Fixed inputs shared by the benchmarks.

use tropvol_core::TropicalMatrix;

pub fn skewed() -> TropicalMatrix {
    TropicalMatrix::from_ints(&[[-1, -4, -7], [-3, -2, 2], [2, -1, -3]])
}

/// A full-rank 4×5 integer matrix with entries in `[-3, 3]`.
pub fn four_by_five() -> TropicalMatrix {
    TropicalMatrix::from_ints(&[
        [0, 0, 0, 0, 0],
        [3, -1, 2, 0, -3],
        [-2, 1, 3, -3, 0],
        [1, 3, -2, 2, -1],
    ])
}

/// `a_ij = (7i + 3j) mod 11`, a dense square matrix with many ties.
pub fn modular_square(n: usize) -> TropicalMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| ((7 * i + 3 * j) % 11) as i64).collect())
        .collect();
    TropicalMatrix::from_ints(&rows)
}
