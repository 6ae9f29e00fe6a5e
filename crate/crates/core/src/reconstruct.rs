//! Recovering the exact multiplicity from finitely many values of the
//! Hilbert-Kunz function, and inverting the plane-curve formula.
//!
//! With `phi(q) = e q^2 + r(q)`, the two-point estimate
//! `(phi(q2) - phi(q1)) / (q2^2 - q1^2)` cancels constant terms and leaves
//! an error of order `1/q`. It is rounded to its last continued-fraction
//! convergent with bounded denominator, which is accepted only inside the
//! window `K / q1`.

use std::fmt;

use crate::error::ReconstructError;
use crate::hk::HkFunctionTable;
use crate::rational::{abs, floor, int, rat, rational_sqrt, Rational};

/// Largest denominator accepted by the rounding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenominatorBound(pub u128);

impl DenominatorBound {
    /// `2 (n-1)! deg(Y) p^e_cap`.
    pub fn default_for(n: usize, deg_y: u64, p: u64, e_cap: u32) -> Self {
        let fact: u128 = (1..n as u128).product();
        DenominatorBound(2 * fact * deg_y as u128 * (p as u128).pow(e_cap))
    }

    fn admits(&self, x: &Rational) -> bool {
        (*x.denom() as u128) <= self.0
    }
}

/// Default window constant `K = 4 sum d_i`.
pub fn default_window_constant(degrees: &[u64]) -> Rational {
    int(4 * degrees.iter().sum::<u64>() as i128)
}

/// All continued-fraction convergents of `x`, ending with `x` itself.
pub fn convergents(x: &Rational) -> Vec<Rational> {
    let (mut h0, mut h1) = (1i128, floor(x));
    let (mut k0, mut k1) = (0i128, 1i128);
    let mut out = vec![int(h1)];
    let mut rest = x - int(h1);
    while rest != int(0) {
        let y = rest.recip();
        let a = floor(&y);
        rest = y - int(a);
        (h0, h1) = (h1, a * h1 + h0);
        (k0, k1) = (k1, a * k1 + k0);
        out.push(rat(h1, k1));
    }
    out
}

/// The last convergent of `x` with denominator at most `bound`, if it lies
/// within `window` of `x`.
pub fn rational_round(x: &Rational, bound: DenominatorBound, window: &Rational) -> Option<Rational> {
    let best = convergents(x).into_iter().take_while(|c| bound.admits(c)).last()?;
    Some(best).filter(|c| abs(&(c - x)) <= *window)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub q: u64,
    pub phi: u64,
    /// `|phi(q) - e q^2| / q`.
    pub scaled: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub ehk: Rational,
    pub alpha_hat: Rational,
    pub window: Rational,
    pub q1: u64,
    pub q2: u64,
    pub residuals: Vec<Residual>,
}

pub fn residuals(table: &HkFunctionTable, ehk: &Rational) -> Vec<Residual> {
    table
        .summary()
        .into_iter()
        .map(|(q, phi)| {
            let qr = int(q as i128);
            Residual { q, phi, scaled: abs(&(int(phi as i128) - ehk * qr * qr)) / qr }
        })
        .collect()
}

/// Uses the two largest `q` in the table.
pub fn estimate_ehk(
    table: &HkFunctionTable,
    bound: DenominatorBound,
    k: &Rational,
) -> Result<Reconstruction, ReconstructError> {
    let rows = table.summary();
    if rows.len() < 2 {
        return Err(ReconstructError::TooFewRows);
    }
    let (q1, phi1) = rows[rows.len() - 2];
    let (q2, phi2) = rows[rows.len() - 1];
    let (a1, a2) = (q1 as i128, q2 as i128);
    let alpha_hat = rat(phi2 as i128 - phi1 as i128, a2 * a2 - a1 * a1);
    let window = k / int(a1);
    match rational_round(&alpha_hat, bound, &window) {
        Some(ehk) => Ok(Reconstruction { residuals: residuals(table, &ehk), ehk, alpha_hat, window, q1, q2 }),
        None => {
            let candidates = convergents(&alpha_hat).into_iter().take_while(|c| bound.admits(c)).collect::<Vec<_>>();
            let candidates = candidates.into_iter().rev().take(3).collect();
            Err(ReconstructError::Ambiguous { alpha_hat, window, candidates })
        }
    }
}

/// `nu2`, either rational or `(3 + sqrt(D))/2` with `D` not a rational square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nu2 {
    Rational(Rational),
    Quadratic { discriminant: Rational },
}

impl fmt::Display for Nu2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu2::Rational(r) => write!(f, "{r}"),
            Nu2::Quadratic { discriminant } => write!(f, "(3 + sqrt({discriminant}))/2"),
        }
    }
}

impl Nu2 {
    /// Whether the value lies in `[3/2, 2]`, decided exactly.
    pub fn in_plane_curve_range(&self) -> bool {
        match self {
            Nu2::Rational(r) => *r >= rat(3, 2) && *r <= int(2),
            // 0 <= sqrt(D) <= 1
            Nu2::Quadratic { discriminant } => *discriminant >= int(0) && *discriminant <= int(1),
        }
    }
}

/// Root in `[3/2, 2]` of `h (nu^2 - 3 nu + 3) = e`.
pub fn nu2_from_ehk(h: u64, ehk: &Rational) -> Result<Nu2, ReconstructError> {
    let hr = int(h as i128);
    if h == 0 || *ehk < hr * rat(3, 4) || *ehk > hr {
        return Err(ReconstructError::OutOfPlaneCurveRange { h, ehk: *ehk });
    }
    let d = ehk * int(4) / hr - int(3);
    Ok(match rational_sqrt(&d) {
        Some(s) => Nu2::Rational((int(3) + s) / int(2)),
        None => Nu2::Quadratic { discriminant: d },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slopes::ehk_plane_curve;
    use proptest::prelude::*;

    fn b(n: u128) -> DenominatorBound {
        DenominatorBound(n)
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(rational_round(&rat(2999, 1000), b(10), &rat(1, 100)), Some(int(3)));
        assert_eq!(rational_round(&rat(7499, 10000), b(8), &rat(1, 100)), Some(rat(3, 4)));
        assert_eq!(rational_round(&rat(1, 2), b(1), &rat(1, 10)), None);
    }

    #[test]
    fn convergent_sequence() {
        assert_eq!(convergents(&rat(9, 4)), vec![int(2), rat(9, 4)]);
        assert_eq!(convergents(&rat(-7, 3)), vec![int(-3), int(-2), rat(-7, 3)]);
        assert_eq!(convergents(&int(5)), vec![int(5)]);
    }

    #[test]
    fn exact_quadratic_table() {
        let t = HkFunctionTable::from_summary(&[(2, 28), (4, 112)]);
        let r = estimate_ehk(&t, b(100), &int(12)).unwrap();
        assert_eq!(r.ehk, int(7));
        assert!(r.residuals.iter().all(|x| x.scaled == int(0)));
    }

    #[test]
    fn linear_perturbation() {
        let (q1, q2) = (16u64, 32u64);
        let t = HkFunctionTable::from_summary(&[(q1, 7 * q1 * q1 + q1), (q2, 7 * q2 * q2 + q2)]);
        let r = estimate_ehk(&t, b(40), &int(4)).unwrap();
        assert_eq!(r.alpha_hat, int(7) + rat(1, (q1 + q2) as i128));
        assert_eq!(r.ehk, int(7));
        assert_eq!(r.residuals[0].scaled, int(1));
    }

    #[test]
    fn cubic_tables() {
        // phi = (9 q^2 - 5)/4 and phi = (7 q^2 - 4)/3 at the computed levels
        let smooth = HkFunctionTable::from_summary(&[(5, 55), (25, 1405), (125, 35155)]);
        let r = estimate_ehk(&smooth, DenominatorBound::default_for(3, 3, 5, 3), &int(12)).unwrap();
        assert_eq!(r.ehk, rat(9, 4));
        let two = HkFunctionTable::from_summary(&[(5, 55), (25, 1405)]);
        let r = estimate_ehk(&two, DenominatorBound::default_for(3, 3, 5, 2), &int(12)).unwrap();
        assert_eq!((r.ehk, r.window), (rat(9, 4), rat(12, 5)));
        let cusp = HkFunctionTable::from_summary(&[(7, 113), (49, 5601)]);
        let r = estimate_ehk(&cusp, DenominatorBound::default_for(3, 3, 7, 2), &int(12)).unwrap();
        assert_eq!(r.ehk, rat(7, 3));
    }

    #[test]
    fn ambiguity_is_reported() {
        let t = HkFunctionTable::from_summary(&[(1, 1), (3, 21)]);
        match estimate_ehk(&t, b(1), &rat(1, 100)) {
            Err(ReconstructError::Ambiguous { alpha_hat, candidates, .. }) => {
                assert_eq!(alpha_hat, rat(5, 2));
                assert_eq!(candidates, vec![int(2)]);
            }
            other => panic!("{other:?}"),
        }
        let t = HkFunctionTable::from_summary(&[(2, 10), (3, 19)]);
        assert!(matches!(estimate_ehk(&t, b(1), &rat(1, 100)), Err(ReconstructError::Ambiguous { .. })));
        assert_eq!(
            estimate_ehk(&HkFunctionTable::from_summary(&[(2, 4)]), b(1), &int(1)),
            Err(ReconstructError::TooFewRows)
        );
    }

    #[test]
    fn nu2_examples() {
        assert_eq!(nu2_from_ehk(3, &rat(9, 4)).unwrap(), Nu2::Rational(rat(3, 2)));
        assert_eq!(nu2_from_ehk(3, &rat(7, 3)).unwrap(), Nu2::Rational(rat(5, 3)));
        for h in 1..8 {
            assert_eq!(nu2_from_ehk(h, &int(h as i128)).unwrap(), Nu2::Rational(int(2)));
        }
        let q = nu2_from_ehk(4, &rat(7, 2)).unwrap();
        assert_eq!(q, Nu2::Quadratic { discriminant: rat(1, 2) });
        assert!(q.in_plane_curve_range());
        assert_eq!(q.to_string(), "(3 + sqrt(1/2))/2");
        assert!(nu2_from_ehk(3, &int(2)).is_err());
        assert!(nu2_from_ehk(3, &rat(10, 3)).is_err());
    }

    proptest! {
        #[test]
        fn nu2_round_trip(h in 1u64..20, a in 0i128..30, b in 1i128..30) {
            // nu2 = 3/2 + s/2 with s = a/b in [0, 1] has square discriminant s^2
            let s = rat(a.min(b), b);
            let nu2 = (int(3) + s) / int(2);
            let e = ehk_plane_curve(h, nu2).unwrap();
            prop_assert_eq!(nu2_from_ehk(h, &e).unwrap(), Nu2::Rational(nu2));
        }

        #[test]
        fn synthetic_tables_recover_alpha(
            num in 0i128..50, den in 1i128..12, beta in -6i128..7, gamma in 0i128..20, p in prop::sample::select(vec![2u64, 3, 5, 7]),
        ) {
            let alpha = rat(num, den) + int(1);
            let k = int(beta.abs() + 1);
            let bound = DenominatorBound(12);
            // the estimate is off by at most K/(q1 + q2); below 1/288 alpha is a
            // convergent and the next one has denominator above 12
            let mut e = 0u32;
            while k / int((p.pow(e) + p.pow(e + 1)) as i128) >= rat(1, 288) {
                e += 1;
            }
            for e in e..e + 3 {
                let qs = [p.pow(e), p.pow(e + 1)];
                // phi is an integer by construction: scale to the common denominator
                let rows: Vec<(u64, i128)> = qs.iter().map(|&q| {
                    let qr = int(q as i128);
                    (q, alpha * qr * qr + int(beta) * qr + int(gamma))
                }).map(|(q, v)| (q, floor(&v))).collect();
                // flooring changes phi by < 1, absorbed since K > |beta|
                let t = HkFunctionTable::from_summary(&rows.iter().map(|&(q, v)| (q, v as u64)).collect::<Vec<_>>());
                let r = estimate_ehk(&t, bound, &k).unwrap();
                prop_assert_eq!(r.ehk, alpha);
            }
        }
    }
}
