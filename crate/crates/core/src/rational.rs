//! Exact rationals used for multiplicities and slopes.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

pub type Rational = num_rational::Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let t = text.trim();
    let bad = |msg: &str| ParseError::Syntax { pos: 0, msg: format!("{msg}: `{t}`") };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i128 = num.parse().map_err(|_| bad("bad numerator"))?;
    let d: i128 = den.parse().map_err(|_| bad("bad denominator"))?;
    if d == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn floor(x: &Rational) -> i128 {
    Integer::div_floor(x.numer(), x.denom())
}

pub fn ceil(x: &Rational) -> i128 {
    -Integer::div_floor(&-x.numer(), x.denom())
}

/// Exact square root when `x` is the square of a rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = isqrt_exact(*x.numer())?;
    let d = isqrt_exact(*x.denom())?;
    Some(Rational::new(n, d))
}

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// The rational of least denominator in the closed interval `[lo, hi]`,
/// descending through continued fractions. Among several integers the
/// smallest in absolute value is returned; use [`integers_in`] to detect
/// that case.
pub fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let cl = ceil(lo);
    if Rational::from_integer(cl) <= *hi {
        let fh = floor(hi);
        // closest integer to zero in [cl, fh]
        let pick = if cl <= 0 && fh >= 0 {
            0
        } else if cl > 0 {
            cl
        } else {
            fh
        };
        return Rational::from_integer(pick);
    }
    let n = Rational::from_integer(floor(lo));
    let y = simplest_in(&(hi - n).recip(), &(lo - n).recip());
    n + y.recip()
}

pub fn integers_in(lo: &Rational, hi: &Rational) -> Vec<i128> {
    (ceil(lo)..=floor(hi)).collect()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Rational) -> Rational {
    if x.is_negative() {
        -x
    } else {
        *x
    }
}

pub fn is_zero(x: &Rational) -> bool {
    x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("9/4").unwrap(), rat(9, 4));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rat(-3, 2).to_string(), "-3/2");
        assert_eq!(rat(6, 2).to_string(), "3");
        assert_eq!(rat(3, -4).to_string(), "-3/4");
    }

    #[test]
    fn floors_and_roots() {
        assert_eq!(floor(&rat(-1, 2)), -1);
        assert_eq!(ceil(&rat(-1, 2)), 0);
        assert_eq!(ceil(&rat(7, 3)), 3);
        assert_eq!(rational_sqrt(&rat(1, 9)), Some(rat(1, 3)));
        assert_eq!(rational_sqrt(&rat(2, 9)), None);
        assert_eq!(rational_sqrt(&int(0)), Some(int(0)));
    }

    #[test]
    fn simplest_examples() {
        assert_eq!(simplest_in(&rat(2989, 1000), &rat(3009, 1000)), int(3));
        assert_eq!(simplest_in(&rat(7399, 10000), &rat(7599, 10000)), rat(3, 4));
        assert_eq!(simplest_in(&rat(2, 5), &rat(3, 5)), rat(1, 2));
        assert_eq!(simplest_in(&rat(-3, 5), &rat(-2, 5)), rat(-1, 2));
    }

    /// Brute force over denominators.
    fn simplest_brute(lo: &Rational, hi: &Rational) -> Rational {
        for d in 1i128.. {
            let a = ceil(&(lo * int(d)));
            if Rational::new(a, d) <= *hi {
                let b = floor(&(hi * int(d)));
                let pick = if a <= 0 && b >= 0 {
                    0
                } else if a > 0 {
                    a
                } else {
                    b
                };
                return Rational::new(pick, d);
            }
        }
        unreachable!()
    }

    proptest! {
        #[test]
        fn simplest_matches_brute_force(n in -400i128..400, d in 1i128..60, w in 1i128..200, s in 50i128..5000) {
            let x = Rational::new(n, d);
            let w = Rational::new(w, s);
            prop_assert_eq!(simplest_in(&(x - w), &(x + w)), simplest_brute(&(x - w), &(x + w)));
        }
    }
}
