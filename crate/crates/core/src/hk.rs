//! Degreewise colengths of Frobenius powers `I^[q]`.
//!
//! In degree `m` the multiplication map
//!
//! ```text
//! (a_1, ..., a_n) |-> sum_i a_i f_i^q :  (+)_i R_{m - q d_i} -> R_m
//! ```
//!
//! is assembled column by column in the monomial basis of `R_m` modulo
//! `LT(H)`. Its corank is `length((R/I^[q])_m)` and its kernel is the space of
//! global sections `H^0(Y, Syz(f_1^q, ..., f_n^q)(m))` when `R` is normal.
//! Rank–nullity turns this into the alternating identity
//! `colength = dim R_m - sum_i dim R_{m-q d_i} + h0(Syz(m))`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::HkError;
use crate::linalg::{MatrixFF, RankAccumulator};
use crate::poly::Monomial;
use crate::ring::{merge_sparse, GradedRing, IdealSpec, MonomialReducer};

/// Dimensions of one graded piece of the multiplication map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PieceCounts {
    pub degree: usize,
    /// `dim R_m`.
    pub target_dim: u64,
    /// `sum_i dim R_{m - q d_i}`.
    pub domain_dim: u64,
    pub rank: u64,
}

impl PieceCounts {
    pub fn colength(&self) -> u64 {
        self.target_dim - self.rank
    }

    pub fn syzygy_h0(&self) -> u64 {
        self.domain_dim - self.rank
    }
}

/// `q` must be a power of `p` (including `q = 1`).
pub fn frobenius_exponent(p: u32, q: u64) -> Option<u32> {
    let (mut e, mut r) = (0u32, q);
    if q == 0 {
        return None;
    }
    while r % p as u64 == 0 {
        r /= p as u64;
        e += 1;
    }
    (r == 1).then_some(e)
}

/// The Frobenius power generators `NF(f_i^q)` of one ideal, ready for
/// per-degree evaluation. Each degree is an independent pure computation.
#[derive(Debug, Clone)]
pub struct FrobeniusEngine {
    ring: GradedRing,
    q: u64,
    degrees: Vec<u64>,
    powered: Vec<Vec<(Monomial, u32)>>,
}

impl FrobeniusEngine {
    pub fn new(ideal: &IdealSpec, q: u64) -> Result<Self, HkError> {
        Self::from_parts(ideal.ring(), ideal.gens(), ideal.degrees(), q)
    }

    pub(crate) fn from_parts(
        ring: &GradedRing,
        gens: &[crate::poly::Poly],
        degrees: &[u64],
        q: u64,
    ) -> Result<Self, HkError> {
        let p = ring.field().modulus();
        frobenius_exponent(p, q).ok_or(HkError::NotFrobeniusPower { q, p })?;
        let mut powered = Vec::with_capacity(gens.len());
        for g in gens {
            let gq = g.pow(q)?;
            let gq = match ring.relation() {
                Some(_) => ring.normal_form(&gq).map_err(|_| HkError::Poly(crate::error::PolyError::RingMismatch))?,
                None => gq,
            };
            powered.push(gq.terms().map(|(m, c)| (m.clone(), c)).collect());
        }
        Ok(FrobeniusEngine { ring: ring.clone(), q, degrees: degrees.to_vec(), powered })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    fn shifted_degree(&self, i: usize, m: usize) -> Option<u64> {
        (m as u64).checked_sub(self.q * self.degrees[i])
    }

    pub fn domain_dim(&self, m: usize) -> u64 {
        (0..self.degrees.len()).filter_map(|i| self.shifted_degree(i, m)).map(|k| self.ring.hilbert_dim(k as i64)).sum()
    }

    /// Calls `sink` with each column of the degree-`m` map until it returns
    /// `false`.
    fn for_each_column(&self, m: usize, mut sink: impl FnMut(&[(usize, u32)]) -> bool) {
        let space = self.ring.degree_space(m as u64);
        debug_assert_eq!(space.dim() as u64, self.ring.hilbert_dim(m as i64));
        let mut reducer = MonomialReducer::new(&self.ring, &space);
        let field = self.ring.field();
        let mut column = Vec::new();
        for (i, gen) in self.powered.iter().enumerate() {
            let Some(k) = self.shifted_degree(i, m) else { continue };
            for u in self.ring.basis_mod_h(k) {
                column.clear();
                for (t, c) in gen {
                    reducer.accumulate(&u.mul(t), *c, &mut column);
                }
                let col = merge_sparse(field, std::mem::take(&mut column));
                if !sink(&col) {
                    return;
                }
            }
        }
    }

    pub fn piece(&self, m: usize) -> PieceCounts {
        let target_dim = self.ring.hilbert_dim(m as i64);
        let mut acc = RankAccumulator::new(self.ring.field(), target_dim as usize);
        if target_dim > 0 {
            self.for_each_column(m, |col| {
                acc.insert(col);
                !acc.is_full()
            });
        }
        PieceCounts { degree: m, target_dim, domain_dim: self.domain_dim(m), rank: acc.rank() as u64 }
    }

    /// `length((R/I^[q])_m)`.
    pub fn colength(&self, m: usize) -> u64 {
        self.piece(m).colength()
    }

    /// `h^0(Syz(f_1^q, ..., f_n^q)(m))`.
    pub fn syzygy_h0(&self, m: usize) -> u64 {
        self.piece(m).syzygy_h0()
    }

    /// The full degree-`m` matrix, rows indexed by the basis of `R_m` and
    /// columns by generator then basis of `R_{m - q d_i}`. Only for small
    /// inspection and tests.
    pub fn multiplication_matrix(&self, m: usize) -> MatrixFF {
        let rows = self.ring.hilbert_dim(m as i64) as usize;
        let mut cols: Vec<Vec<(usize, u32)>> = Vec::new();
        self.for_each_column(m, |c| {
            cols.push(c.to_vec());
            true
        });
        let mut mat = MatrixFF::zeros(self.ring.field(), rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for &(i, v) in c {
                mat.set(i, j, v);
            }
        }
        mat
    }
}

pub fn graded_piece_colength(ideal: &IdealSpec, q: u64, m: usize) -> Result<u64, HkError> {
    Ok(FrobeniusEngine::new(ideal, q)?.colength(m))
}

pub fn syzygy_h0(ideal: &IdealSpec, q: u64, m: usize) -> Result<u64, HkError> {
    Ok(FrobeniusEngine::new(ideal, q)?.syzygy_h0(m))
}

/// Options for summing the Hilbert-Kunz function.
#[derive(Debug, Clone, Default)]
pub struct HkOptions {
    /// Length of the run of vanishing degrees that ends the summation;
    /// defaults to `max(1, sum d_i)`.
    pub consecutive_zeros: Option<usize>,
    /// Hard cap on the degree; defaults to [`default_degree_cap`].
    pub max_degree: Option<usize>,
    /// Cap on `dim R_m`.
    pub max_matrix_dim: Option<usize>,
    /// Evaluate degrees on the rayon pool.
    pub parallel: bool,
}

/// Degree beyond which `R/I^[q]` provably vanishes, plus the zero run: with
/// `m0` the first vanishing degree of `R/I`, every `x_i^(q m0)` lies in
/// `I^[q]`, so all monomials of degree `> N (q m0 - 1)` do.
pub fn default_degree_cap(ideal: &IdealSpec, q: u64, run: usize) -> usize {
    let n = ideal.ring().nvars() as u64;
    let m0 = ideal.first_vanishing_degree().max(1) as u64;
    (n * (q * m0 - 1) + 1) as usize + run
}

/// One row of the Hilbert-Kunz function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkRow {
    pub q: u64,
    pub phi: u64,
    /// First degree of the terminating zero run; every listed degree at or
    /// beyond it has colength 0.
    pub cutoff: usize,
    /// Colengths for `m = 0..cutoff`.
    pub per_degree: Vec<u64>,
}

pub fn hk_value(ideal: &IdealSpec, q: u64, opts: &HkOptions) -> Result<HkRow, HkError> {
    let engine = FrobeniusEngine::new(ideal, q)?;
    let run = opts.consecutive_zeros.unwrap_or_else(|| ideal.degrees().iter().sum::<u64>() as usize).max(1);
    let cap = opts.max_degree.unwrap_or_else(|| default_degree_cap(ideal, q, run));
    let batch = if opts.parallel { (2 * rayon::current_num_threads()).max(4) } else { 1 };

    let mut per_degree: Vec<u64> = Vec::new();
    let mut zeros = 0usize;
    let mut m = 0usize;
    while m <= cap {
        let end = (m + batch).min(cap + 1);
        if let Some(limit) = opts.max_matrix_dim {
            for k in m..end {
                let dim = ideal.ring().hilbert_dim(k as i64) as usize;
                if dim > limit {
                    return Err(HkError::MatrixTooLarge { degree: k, dim, cap: limit });
                }
            }
        }
        let values: Vec<u64> = if opts.parallel {
            (m..end).into_par_iter().map(|k| engine.colength(k)).collect()
        } else {
            (m..end).map(|k| engine.colength(k)).collect()
        };
        for v in values {
            per_degree.push(v);
            zeros = if v == 0 { zeros + 1 } else { 0 };
            if zeros == run {
                let cutoff = per_degree.len() - run;
                per_degree.truncate(cutoff);
                let phi = per_degree.iter().sum();
                return Ok(HkRow { q, phi, cutoff, per_degree });
            }
        }
        m = end;
    }
    Err(HkError::CutoffNotReached { q, cap, needed: run })
}

/// `q -> phi(I, q)` with the per-degree breakdown of each row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HkFunctionTable {
    pub rows: BTreeMap<u64, HkRow>,
}

impl HkFunctionTable {
    pub fn compute(ideal: &IdealSpec, qs: &[u64], opts: &HkOptions) -> Result<Self, HkError> {
        let mut rows = BTreeMap::new();
        for &q in qs {
            rows.insert(q, hk_value(ideal, q, opts)?);
        }
        Ok(HkFunctionTable { rows })
    }

    pub fn from_summary(pairs: &[(u64, u64)]) -> Self {
        let rows = pairs.iter().map(|&(q, phi)| (q, HkRow { q, phi, cutoff: 0, per_degree: Vec::new() })).collect();
        HkFunctionTable { rows }
    }

    pub fn summary(&self) -> Vec<(u64, u64)> {
        self.rows.values().map(|r| (r.q, r.phi)).collect()
    }
}
