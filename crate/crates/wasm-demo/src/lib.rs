//! Browser demo over the core library. Every export takes strings and
//! numbers and returns a JSON string; the work is done by plain functions
//! so it can be tested natively.

use hkslope::field::PrimeField;
use hkslope::hk::{hk_value, HkOptions};
use hkslope::parse::parse_poly;
use hkslope::rational::{parse_rational, rat};
use hkslope::reconstruct::nu2_from_ehk;
use hkslope::ring::IdealSpec;
use hkslope::slopes::ehk_plane_curve;
use hkslope::staircase::{staircase_colength, MonomialIdeal2};
use hkslope::Rational;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps a single browser call under a second or so.
pub const MAX_MATRIX_DIM: usize = 2_000;
pub const MAX_Q: u64 = 125;

#[derive(Debug, Serialize, PartialEq)]
pub struct PlaneCurveView {
    pub h: u64,
    pub nu2: String,
    pub ehk: String,
    pub ehk_value: f64,
    /// `nu2` recovered from the multiplicity.
    pub nu2_back: String,
    /// `(nu2, e/h)` samples across `[3/2, 2]` for the plot.
    pub curve: Vec<(f64, f64)>,
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn plane_curve_view(h: u64, nu2: &str) -> Result<PlaneCurveView, String> {
    let nu = parse_rational(nu2).map_err(|e| e.to_string())?;
    let ehk = ehk_plane_curve(h, nu).map_err(|e| e.to_string())?;
    let back = nu2_from_ehk(h, &ehk).map_err(|e| e.to_string())?;
    let curve = (0..=50)
        .map(|i| {
            let t = rat(3, 2) + rat(i, 100);
            (to_f64(&t), to_f64(&(t * t - t * 3 + 3)))
        })
        .collect();
    Ok(PlaneCurveView {
        h,
        nu2: nu.to_string(),
        ehk: ehk.to_string(),
        ehk_value: to_f64(&ehk),
        nu2_back: back.to_string(),
        curve,
    })
}

#[derive(Debug, Serialize, PartialEq)]
pub struct ProfileView {
    pub q: u64,
    pub phi: u64,
    /// `phi / q^2`, reduced.
    pub ratio: String,
    pub per_degree: Vec<u64>,
}

/// `gens` and `vars` are separated by `;` and `,`; an empty relation means
/// the polynomial ring.
pub fn profile_view(p: u64, vars: &str, relation: &str, gens: &str, q: u64) -> Result<ProfileView, String> {
    if q > MAX_Q {
        return Err(format!("q is limited to {MAX_Q} in the browser"));
    }
    let vars: Vec<&str> = vars.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let gens: Vec<&str> = gens.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    let relation = Some(relation.trim()).filter(|r| !r.is_empty());
    let ideal = IdealSpec::from_text(p, &vars, relation, &gens).map_err(|e| e.to_string())?;
    let opts = HkOptions { max_matrix_dim: Some(MAX_MATRIX_DIM), ..HkOptions::default() };
    let row = hk_value(&ideal, q, &opts).map_err(|e| e.to_string())?;
    let qq = (q * q) as i128;
    Ok(ProfileView { q, phi: row.phi, ratio: rat(row.phi as i128, qq).to_string(), per_degree: row.per_degree })
}

#[derive(Debug, Serialize, PartialEq)]
pub struct StaircaseView {
    /// Exponents `(a, b)` of the minimal generators of `I^[q]`.
    pub corners: Vec<(u64, u64)>,
    pub colength: u64,
    /// Colength of `I` itself, which is also the multiplicity.
    pub ehk: u64,
}

/// Monomials in `x, y` separated by `;`, e.g. `x^3; x*y^2; y^3`.
pub fn staircase_view(gens: &str, q: u64) -> Result<StaircaseView, String> {
    if q == 0 || q > MAX_Q {
        return Err(format!("q must lie in 1..={MAX_Q}"));
    }
    let vars = vec!["x".to_string(), "y".to_string()];
    let field = PrimeField::new(2).expect("2 is prime");
    let mut exps = Vec::new();
    for text in gens.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let f = parse_poly(text, &vars, field).map_err(|e| format!("`{text}`: {e}"))?;
        match f.leading() {
            Some((m, _)) if f.num_terms() == 1 => exps.push((m.exps()[0] as u64, m.exps()[1] as u64)),
            _ => return Err(format!("`{text}` is not a monomial")),
        }
    }
    let ideal = MonomialIdeal2::new(&exps);
    let colength = staircase_colength(&ideal, q).map_err(|e| e.to_string())?;
    let ehk = staircase_colength(&ideal, 1).map_err(|e| e.to_string())?;
    let corners = ideal.gens().iter().map(|&(a, b)| (a * q, b * q)).collect();
    Ok(StaircaseView { corners, colength, ehk })
}

fn json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn plane_curve(h: u32, nu2: &str) -> Result<String, JsError> {
    json(plane_curve_view(h as u64, nu2))
}

#[wasm_bindgen]
pub fn profile(p: u32, vars: &str, relation: &str, gens: &str, q: u32) -> Result<String, JsError> {
    json(profile_view(p as u64, vars, relation, gens, q as u64))
}

#[wasm_bindgen]
pub fn staircase(gens: &str, q: u32) -> Result<String, JsError> {
    json(staircase_view(gens, q as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_curve_values() {
        let v = plane_curve_view(3, "3/2").unwrap();
        assert_eq!((v.ehk.as_str(), v.nu2_back.as_str()), ("9/4", "3/2"));
        assert_eq!(plane_curve_view(3, "5/3").unwrap().ehk, "7/3");
        assert_eq!(v.curve.len(), 51);
        assert_eq!(v.curve[0], (1.5, 0.75));
        assert!(plane_curve_view(3, "5/2").is_err());
        assert!(plane_curve_view(3, "abc").is_err());
    }

    #[test]
    fn cubic_profile() {
        let v = profile_view(5, "x, y, z", "x^3 + y^3 + z^3", "x; y; z", 5).unwrap();
        assert_eq!(v.phi, 55);
        assert_eq!(v.per_degree.iter().sum::<u64>(), 55);
        assert_eq!(v.ratio, "11/5");
        assert!(profile_view(5, "x, y", "", "x; y", 625).is_err());
        assert!(profile_view(4, "x, y", "", "x; y", 4).is_err());
    }

    #[test]
    fn staircase_values() {
        let v = staircase_view("x^3; x*y^2; y^3", 2).unwrap();
        assert_eq!((v.colength, v.ehk), (28, 7));
        assert_eq!(v.corners, vec![(0, 6), (2, 4), (6, 0)]);
        // redundant generators are dropped
        assert_eq!(staircase_view("x^3; x^4*y; y^3; x*y^2", 1).unwrap().corners.len(), 3);
        assert!(staircase_view("x + y; y^2", 1).is_err());
        assert!(staircase_view("x*y", 1).is_err());
    }

    #[test]
    fn exports_serialize() {
        let s = serde_json::to_string(&staircase_view("x; y", 3).unwrap()).unwrap();
        assert_eq!(s, r#"{"corners":[[0,3],[3,0]],"colength":9,"ehk":1}"#);
    }
}
