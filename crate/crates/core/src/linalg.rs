//! Rank computations over `F_p`.
//!
//! Two independent eliminations live here. [`MatrixFF::rank`] is the plain
//! dense, fraction-free row reduction (no inverses; each elimination step
//! multiplies the target row by the pivot). [`RankAccumulator`] is the
//! streaming path the engine uses: vectors are inserted one at a time and
//! reduced against a growing echelon basis, so a caller never has to
//! materialize a whole matrix.

use crate::field::PrimeField;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFF {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl MatrixFF {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatrixFF { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced modulo `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| field.reduce(v)));
        }
        MatrixFF { field, rows: r, cols: c, entries }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.modulus());
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> MatrixFF {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> Vec<(usize, u32)> {
        (0..self.rows).map(|i| (i, self.get(i, j))).filter(|(_, v)| *v != 0).collect()
    }

    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..cols {
                    a.swap(piv * cols + j, rank * cols + j);
                }
            }
            let pv = a[rank * cols + col];
            for r in rank + 1..rows {
                let t = a[r * cols + col];
                if t == 0 {
                    continue;
                }
                // row_r <- pv * row_r - t * row_rank
                for j in col..cols {
                    let lhs = f.mul(pv, a[r * cols + j]);
                    let rhs = f.mul(t, a[rank * cols + j]);
                    a[r * cols + j] = f.sub(lhs, rhs);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Rank through the streaming path, feeding columns.
    pub fn rank_streaming(&self) -> usize {
        let mut acc = RankAccumulator::new(self.field, self.rows);
        for j in 0..self.cols {
            acc.insert(&self.column(j));
        }
        acc.rank()
    }
}

/// A pivot row normalized to leading coefficient 1, stored from its pivot
/// index up to its last nonzero entry.
#[derive(Debug, Clone)]
struct Pivot {
    values: Vec<u32>,
}

/// Incremental echelon basis of a subspace of `F_p^dim`.
#[derive(Debug, Clone)]
pub struct RankAccumulator {
    field: PrimeField,
    dim: usize,
    pivots: Vec<Option<Pivot>>,
    scratch: Vec<u64>,
    rank: usize,
    // accumulate products without reducing until a position is inspected;
    // valid while (dim + 1) * (p - 1)^2 fits in a u64
    lazy: bool,
}

impl RankAccumulator {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        let p = field.modulus() as u128;
        let lazy = (dim as u128 + 1) * (p - 1) * (p - 1) < u64::MAX as u128;
        RankAccumulator { field, dim, pivots: vec![None; dim], scratch: vec![0; dim], rank: 0, lazy }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.dim
    }

    /// Inserts a sparse vector given as `(index, value)` pairs; repeated
    /// indices are summed. Returns whether the rank grew.
    pub fn insert(&mut self, entries: &[(usize, u32)]) -> bool {
        if self.is_full() || entries.is_empty() {
            return false;
        }
        let p = self.field.modulus() as u64;
        let (mut lo, mut hi) = (usize::MAX, 0usize);
        for &(i, v) in entries {
            assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
            self.scratch[i] = (self.scratch[i] + v as u64) % p;
            lo = lo.min(i);
            hi = hi.max(i);
        }
        let RankAccumulator { field, pivots, scratch, lazy, .. } = self;
        let mut i = lo;
        while i <= hi {
            let c = scratch[i] % p;
            scratch[i] = c;
            if c != 0 {
                match &pivots[i] {
                    Some(piv) => {
                        let factor = p - c;
                        let seg = &mut scratch[i..i + piv.values.len()];
                        if *lazy {
                            for (s, &v) in seg.iter_mut().zip(&piv.values) {
                                *s += factor * v as u64;
                            }
                        } else {
                            for (s, &v) in seg.iter_mut().zip(&piv.values) {
                                *s = (*s + factor * v as u64 % p) % p;
                            }
                        }
                        debug_assert_eq!(scratch[i] % p, 0);
                        scratch[i] = 0;
                        hi = hi.max(i + piv.values.len() - 1);
                    }
                    None => {
                        let inv = field.inv(c as u32).expect("nonzero") as u64;
                        let mut values: Vec<u32> =
                            scratch[i..=hi].iter().map(|&s| ((s % p) * inv % p) as u32).collect();
                        while values.last() == Some(&0) {
                            values.pop();
                        }
                        scratch[i..=hi].iter_mut().for_each(|s| *s = 0);
                        pivots[i] = Some(Pivot { values });
                        self.rank += 1;
                        return true;
                    }
                }
            }
            i += 1;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(MatrixFF::identity(f(5), 3).rank(), 3);
        assert_eq!(MatrixFF::identity(f(5), 3).kernel_dim(), 0);
        let m = MatrixFF::from_rows(f(5), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rank_streaming(), 1);
        let z = MatrixFF::zeros(f(5), 4, 7);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_dim(), 7);
        let k = MatrixFF::from_rows(f(2), &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(k.kernel_dim(), 1);
        assert_eq!(k.rank_streaming(), 2);
    }

    #[test]
    fn accumulator_handles_repeats_and_full_rank() {
        let mut acc = RankAccumulator::new(f(3), 2);
        assert!(!acc.insert(&[]));
        assert!(acc.insert(&[(0, 1), (0, 1)]));
        assert!(!acc.insert(&[(0, 2)]));
        assert!(acc.insert(&[(0, 1), (1, 2)]));
        assert!(acc.is_full());
        assert!(!acc.insert(&[(1, 1)]));
    }

    #[test]
    fn eager_path_for_large_moduli() {
        let p = f(2_147_483_647);
        let acc = RankAccumulator::new(p, 10);
        assert!(!acc.lazy);
        let m = MatrixFF::from_rows(p, &[vec![1, 2, 3], vec![2, 4, 6], vec![-1, 5, 0]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_streaming(), 2);
    }

    fn random_matrix(rng: &mut ChaCha8Rng, p: u64, rows: usize, cols: usize, rank_hint: usize) -> MatrixFF {
        // product of random rows x rank_hint and rank_hint x cols factors,
        // with sparsified entries, gives a spread of ranks
        let field = f(p);
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..rank_hint).map(|_| if rng.gen_bool(0.6) { rng.gen_range(0..p as i64) } else { 0 }).collect())
            .collect();
        let b: Vec<Vec<i64>> = (0..rank_hint)
            .map(|_| (0..cols).map(|_| if rng.gen_bool(0.6) { rng.gen_range(0..p as i64) } else { 0 }).collect())
            .collect();
        let rowsv: Vec<Vec<i64>> = (0..rows)
            .map(|i| (0..cols).map(|j| (0..rank_hint).map(|k| a[i][k] * b[k][j]).sum::<i64>()).collect())
            .collect();
        MatrixFF::from_rows(field, &rowsv)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn rank_invariants(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 101]),
                           rows in 1usize..12, cols in 1usize..12, hint in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, p, rows, cols, hint);
            let r = m.rank();
            prop_assert!(r <= hint.min(rows).min(cols));
            prop_assert_eq!(m.transpose().rank(), r);
            prop_assert_eq!(m.rank_streaming(), r);
            prop_assert_eq!(m.transpose().rank_streaming(), r);
            let mut rp: Vec<usize> = (0..rows).collect();
            let mut cp: Vec<usize> = (0..cols).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let mut perm = MatrixFF::zeros(m.field(), rows, cols);
            for (i, &ri) in rp.iter().enumerate() {
                for (j, &cj) in cp.iter().enumerate() {
                    perm.set(i, j, m.get(ri, cj));
                }
            }
            prop_assert_eq!(perm.rank(), r);
            prop_assert_eq!(perm.rank_streaming(), r);
        }
    }
}
