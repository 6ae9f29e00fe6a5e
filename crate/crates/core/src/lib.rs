//! Exact Hilbert-Kunz functions of homogeneous primary ideals in
//! two-dimensional standard-graded rings over `F_p`, the closed-form
//! multiplicity formulas in terms of strong Harder-Narasimhan data of the
//! syzygy bundle, and reconstruction of the rational multiplicity from
//! finitely many exact values.
//!
//! ```
//! use hkslope::{field::PrimeField, parse::parse_poly, ring::{GradedRing, IdealSpec}};
//! use hkslope::hk::{hk_value, HkOptions};
//!
//! let f = PrimeField::new(2).unwrap();
//! let ring = GradedRing::free(f, &["x", "y"]);
//! let v = ring.vars().to_vec();
//! let gens = ["x^3", "x*y^2", "y^3"].iter().map(|g| parse_poly(g, &v, f).unwrap()).collect();
//! let ideal = IdealSpec::new(ring, gens).unwrap();
//! assert_eq!(hk_value(&ideal, 4, &HkOptions::default()).unwrap().phi, 112);
//! ```

pub mod corpus;
pub mod error;
pub mod field;
pub mod hk;
pub mod linalg;
pub mod p1;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod reconstruct;
pub mod ring;
pub mod slopes;
pub mod staircase;

pub use error::{
    FieldError, HkError, P1Error, ParseError, PolyError, ReconstructError, RingError, SetupError, SlopeError,
};
pub use rational::Rational;
