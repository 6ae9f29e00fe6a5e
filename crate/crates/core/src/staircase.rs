//! Colength of monomial ideals in `K[x, y]` by counting lattice points
//! under the staircase. Used as ground truth for the matrix engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StaircaseError {
    #[error("monomial ideal needs a pure power of x and a pure power of y")]
    NotPrimary,
}

/// A monomial ideal `(x^a_i y^b_i)` with a minimal generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal2 {
    gens: Vec<(u64, u64)>,
}

impl MonomialIdeal2 {
    /// Drops generators divisible by another one; sorted by `a` ascending.
    pub fn new(gens: &[(u64, u64)]) -> Self {
        let mut g: Vec<(u64, u64)> = gens.to_vec();
        g.sort_unstable();
        g.dedup();
        let minimal = g
            .iter()
            .filter(|&&(a, b)| !g.iter().any(|&(c, d)| (c, d) != (a, b) && c <= a && d <= b))
            .copied()
            .collect();
        MonomialIdeal2 { gens: minimal }
    }

    pub fn gens(&self) -> &[(u64, u64)] {
        &self.gens
    }

    pub fn is_primary(&self) -> bool {
        self.gens.iter().any(|g| g.1 == 0) && self.gens.iter().any(|g| g.0 == 0)
    }

    pub fn with_generator(&self, g: (u64, u64)) -> Self {
        let mut all = self.gens.clone();
        all.push(g);
        Self::new(&all)
    }
}

/// `#{(a, b) : x^a y^b not in (x^(q a_i) y^(q b_i))}`, one row of `b` at a time.
pub fn staircase_colength(ideal: &MonomialIdeal2, q: u64) -> Result<u64, StaircaseError> {
    if !ideal.is_primary() {
        return Err(StaircaseError::NotPrimary);
    }
    let height = ideal.gens.iter().filter(|g| g.0 == 0).map(|g| g.1 * q).min().unwrap();
    let mut total = 0u64;
    for b in 0..height {
        let width =
            ideal.gens.iter().filter(|g| g.1 * q <= b).map(|g| g.0 * q).min().expect("pure x power bounds every row");
        total += width;
    }
    Ok(total)
}
