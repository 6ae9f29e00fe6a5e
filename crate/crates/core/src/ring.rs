//! The ambient graded rings: a free polynomial ring `S = K[X_1..X_N]` or a
//! hypersurface quotient `S/(H)`, together with homogeneous ideals in them.

use std::collections::HashMap;

use crate::error::{RingError, SetupError};
use crate::field::PrimeField;
use crate::hk;
use crate::poly::{binomial, graded_piece_basis, Monomial, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    Free,
    Hypersurface,
}

/// The single defining relation of a hypersurface ring, made monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    poly: Poly,
    lead: Monomial,
    degree: u64,
    /// `-(H - LT(H))`, so `LT(H) == tail` in the quotient.
    tail: Vec<(Monomial, u32)>,
}

impl Relation {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn lead(&self) -> &Monomial {
        &self.lead
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    field: PrimeField,
    vars: Vec<String>,
    relation: Option<Relation>,
}

impl GradedRing {
    pub fn free(field: PrimeField, vars: &[&str]) -> Self {
        GradedRing { field, vars: vars.iter().map(|s| s.to_string()).collect(), relation: None }
    }

    pub fn free_named(field: PrimeField, vars: Vec<String>) -> Self {
        GradedRing { field, vars, relation: None }
    }

    /// `S/(H)` for a nonzero homogeneous `H` of positive degree.
    pub fn hypersurface(field: PrimeField, vars: Vec<String>, h: &Poly) -> Result<Self, RingError> {
        if h.field() != field || h.nvars() != vars.len() {
            return Err(RingError::BadRelation);
        }
        let degree = h.homogeneous_degree().ok_or(RingError::BadRelation)?;
        if degree == 0 {
            return Err(RingError::BadRelation);
        }
        let poly = h.monic()?;
        let lead = poly.leading().expect("nonzero").0.clone();
        let tail = poly.terms().skip(1).map(|(m, c)| (m.clone(), field.neg(c))).collect();
        Ok(GradedRing { field, vars, relation: Some(Relation { poly, lead, degree, tail }) })
    }

    pub fn kind(&self) -> RingKind {
        if self.relation.is_some() {
            RingKind::Hypersurface
        } else {
            RingKind::Free
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn relation(&self) -> Option<&Relation> {
        self.relation.as_ref()
    }

    /// Degree of `O_Y(1)` on `Proj R` when `R` is two-dimensional: the degree
    /// of the plane curve for a hypersurface in three variables, 1 for the
    /// projective line.
    pub fn curve_degree(&self) -> Option<u64> {
        match (&self.relation, self.nvars()) {
            (None, 2) => Some(1),
            (Some(r), 3) => Some(r.degree),
            _ => None,
        }
    }

    pub fn hilbert_dim(&self, m: i64) -> u64 {
        if m < 0 {
            return 0;
        }
        let n = self.nvars() as i64;
        let full = binomial(m + n - 1, n - 1);
        match &self.relation {
            None => full,
            Some(r) => full - binomial(m - r.degree as i64 + n - 1, n - 1),
        }
    }

    /// Degree-`m` monomials not divisible by `LT(H)`, in descending order.
    pub fn basis_mod_h(&self, m: u64) -> Vec<Monomial> {
        let all = graded_piece_basis(self.nvars(), m);
        match &self.relation {
            None => all,
            Some(r) => all.into_iter().filter(|u| !r.lead.divides(u)).collect(),
        }
    }

    /// Remainder of division by `H`: no term of the result is divisible by
    /// `LT(H)`.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly, RingError> {
        let r = self.relation.as_ref().ok_or(RingError::NoRelation)?;
        if f.field() != self.field || f.nvars() != self.nvars() {
            return Err(RingError::Poly(crate::error::PolyError::RingMismatch));
        }
        let mut work = f.clone();
        let mut rem = Poly::zero(self.field, self.nvars());
        while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c)) {
            match r.lead.quotient_of(&m) {
                Some(s) => {
                    let step = r.poly.mul_monomial(&s)?.scale(c);
                    work = work.sub(&step)?;
                }
                None => {
                    work.add_term(m.clone(), self.field.neg(c));
                    rem.add_term(m, c);
                }
            }
        }
        Ok(rem)
    }

    pub(crate) fn degree_space(&self, m: u64) -> DegreeSpace {
        let monomials = self.basis_mod_h(m);
        let index = monomials.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
        DegreeSpace { monomials, index }
    }
}

/// Coordinates for one graded piece `R_m`.
#[derive(Debug, Clone)]
pub(crate) struct DegreeSpace {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
}

impl DegreeSpace {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

/// Memoized normal forms of degree-`m` monomials, in [`DegreeSpace`]
/// coordinates.
pub(crate) struct MonomialReducer<'a> {
    ring: &'a GradedRing,
    space: &'a DegreeSpace,
    memo: HashMap<Monomial, Vec<(usize, u32)>>,
}

impl<'a> MonomialReducer<'a> {
    pub fn new(ring: &'a GradedRing, space: &'a DegreeSpace) -> Self {
        MonomialReducer { ring, space, memo: HashMap::new() }
    }

    /// Adds `c * NF(w)` into `out` (unsorted, possibly repeated indices).
    pub fn accumulate(&mut self, w: &Monomial, c: u32, out: &mut Vec<(usize, u32)>) {
        if let Some(&i) = self.space.index.get(w) {
            out.push((i, c));
            return;
        }
        let f = self.ring.field;
        let nf = self.reduce(w);
        out.extend(nf.iter().map(|&(i, v)| (i, f.mul(v, c))));
    }

    fn reduce(&mut self, w: &Monomial) -> &[(usize, u32)] {
        if !self.memo.contains_key(w) {
            let rel = self.ring.relation.as_ref().expect("monomial outside the basis of a free ring");
            let s = rel.lead.quotient_of(w).expect("non-basis monomial is divisible by LT(H)");
            let mut acc: Vec<(usize, u32)> = Vec::new();
            for (t, c) in &rel.tail {
                let ts = t.mul(&s);
                self.accumulate(&ts, *c, &mut acc);
            }
            let merged = merge_sparse(self.ring.field, acc);
            self.memo.insert(w.clone(), merged);
        }
        &self.memo[w]
    }
}

/// Sorts by index and sums duplicates, dropping zeros.
pub(crate) fn merge_sparse(f: PrimeField, mut v: Vec<(usize, u32)>) -> Vec<(usize, u32)> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = f.add(last.1, c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// Default search bound for the primarity witness: twice the sum of the
/// generator degrees.
pub fn default_primary_bound(degrees: &[u64]) -> usize {
    2 * degrees.iter().sum::<u64>() as usize
}

/// A homogeneous ideal `(f_1, ..., f_n)` of `R`, `n >= 2`, primary to the
/// irrelevant ideal.
#[derive(Debug, Clone)]
pub struct IdealSpec {
    ring: GradedRing,
    gens: Vec<Poly>,
    degrees: Vec<u64>,
    first_vanishing: usize,
}

impl IdealSpec {
    pub fn new(ring: GradedRing, gens: Vec<Poly>) -> Result<Self, RingError> {
        let degrees = Self::validate(&ring, &gens)?;
        let bound = default_primary_bound(&degrees);
        Self::with_primary_bound(ring, gens, bound)
    }

    pub fn with_primary_bound(ring: GradedRing, gens: Vec<Poly>, bound: usize) -> Result<Self, RingError> {
        let degrees = Self::validate(&ring, &gens)?;
        let mut ideal = IdealSpec { ring, gens, degrees, first_vanishing: 0 };
        ideal.first_vanishing = check_primary(&ideal, bound)?;
        Ok(ideal)
    }

    fn validate(ring: &GradedRing, gens: &[Poly]) -> Result<Vec<u64>, RingError> {
        if gens.len() < 2 {
            return Err(RingError::TooFewGenerators(gens.len()));
        }
        gens.iter()
            .enumerate()
            .map(|(i, g)| {
                if g.field() != ring.field() || g.nvars() != ring.nvars() {
                    return Err(RingError::GeneratorRingMismatch(i));
                }
                match g.homogeneous_degree() {
                    Some(d) if d > 0 => Ok(d),
                    _ => Err(RingError::BadGenerator(i)),
                }
            })
            .collect()
    }

    /// Parses a field, optional relation and generators in one go.
    pub fn from_text(p: u64, vars: &[&str], relation: Option<&str>, gens: &[&str]) -> Result<Self, SetupError> {
        let field = PrimeField::new(p)?;
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let parse = |what: String, text: &str| {
            crate::parse::parse_poly(text, &names, field).map_err(|source| SetupError::Parse { what, source })
        };
        let ring = match relation {
            Some(h) => GradedRing::hypersurface(field, names.clone(), &parse("relation".into(), h)?)?,
            None => GradedRing::free_named(field, names.clone()),
        };
        let polys = gens
            .iter()
            .enumerate()
            .map(|(i, g)| parse(format!("generator {}", i + 1), g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IdealSpec::new(ring, polys)?)
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    /// First degree `m` with `(R/I)_m = 0`.
    pub fn first_vanishing_degree(&self) -> usize {
        self.first_vanishing
    }

    /// `max_{i != j} (d_i + d_j)`.
    pub fn max_pair_degree(&self) -> u64 {
        let mut d = self.degrees.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d[0] + d[1]
    }
}

/// First `m <= bound` with `(R/I)_m = 0`. In a standard-graded quotient every
/// higher piece then vanishes too.
pub fn check_primary(ideal: &IdealSpec, bound: usize) -> Result<usize, RingError> {
    let engine = hk::FrobeniusEngine::new(ideal, 1).map_err(RingError::Hk)?;
    for m in 0..=bound {
        if engine.colength(m) == 0 {
            return Ok(m);
        }
    }
    Err(RingError::NotPrimary { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn vars3() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    fn fermat(p: u64) -> GradedRing {
        let h = parse_poly("x^3 + y^3 + z^3", &vars3(), f(p)).unwrap();
        GradedRing::hypersurface(f(p), vars3(), &h).unwrap()
    }

    #[test]
    fn dimensions() {
        let free = GradedRing::free(f(5), &["x", "y"]);
        assert_eq!(free.hilbert_dim(7), 8);
        assert_eq!(free.hilbert_dim(-1), 0);
        let r = fermat(5);
        assert_eq!(r.hilbert_dim(5), 15);
        assert_eq!(r.hilbert_dim(-1), 0);
        assert_eq!(r.hilbert_dim(0), 1);
        assert_eq!(r.curve_degree(), Some(3));
        assert_eq!(free.curve_degree(), Some(1));
    }

    #[test]
    fn bases() {
        let r = fermat(5);
        assert_eq!(r.basis_mod_h(3).len(), 9);
        assert_eq!(r.basis_mod_h(0), vec![Monomial::one(3)]);
        let free = GradedRing::free(f(5), &["x", "y"]);
        let b: Vec<_> = free.basis_mod_h(2).iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(b, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn normal_form_examples() {
        let r = fermat(5);
        let v = vars3();
        let x4 = parse_poly("x^4", &v, f(5)).unwrap();
        let expect = parse_poly("-x*y^3 - x*z^3", &v, f(5)).unwrap();
        assert_eq!(r.normal_form(&x4).unwrap(), expect);
        let h = r.relation().unwrap().poly().clone();
        assert!(r.normal_form(&h).unwrap().is_zero());
        let red = parse_poly("x^2*y + 3*z^3", &v, f(5)).unwrap();
        assert_eq!(r.normal_form(&red).unwrap(), red);
        let free = GradedRing::free(f(5), &["x", "y"]);
        let p = parse_poly("x", &["x".into(), "y".into()], f(5)).unwrap();
        assert_eq!(free.normal_form(&p), Err(RingError::NoRelation));
    }

    #[test]
    fn relation_is_made_monic() {
        let v = vars3();
        let h = parse_poly("2x^3 - y^2 z", &v, f(7)).unwrap();
        let r = GradedRing::hypersurface(f(7), v.clone(), &h).unwrap();
        assert_eq!(r.relation().unwrap().lead().exps(), &[3, 0, 0]);
        assert_eq!(r.relation().unwrap().poly().leading().unwrap().1, 1);
        let bad = parse_poly("x^2 + y", &v, f(7)).unwrap();
        assert_eq!(GradedRing::hypersurface(f(7), v, &bad), Err(RingError::BadRelation));
    }

    #[test]
    fn primarity() {
        let ring = GradedRing::free(f(5), &["x", "y"]);
        let v = ring.vars().to_vec();
        let p = |s: &str| parse_poly(s, &v, f(5)).unwrap();
        let i = IdealSpec::new(ring.clone(), vec![p("x"), p("y")]).unwrap();
        assert_eq!(i.first_vanishing_degree(), 1);
        let i = IdealSpec::new(ring.clone(), vec![p("x^2"), p("y^2")]).unwrap();
        assert_eq!(i.first_vanishing_degree(), 3);
        let e = IdealSpec::new(ring.clone(), vec![p("x^2"), p("x^3")]).unwrap_err();
        assert_eq!(e, RingError::NotPrimary { bound: 10 });
        assert_eq!(IdealSpec::new(ring.clone(), vec![p("x")]).unwrap_err(), RingError::TooFewGenerators(1));
        assert_eq!(IdealSpec::new(ring, vec![p("x"), p("x+y^2")]).unwrap_err(), RingError::BadGenerator(1));
        let i = IdealSpec::from_text(7, &["x", "y", "z"], Some("x^3 - y^2 z"), &["x", "y", "z"]).unwrap();
        assert_eq!(i.ring().curve_degree(), Some(3));
        assert!(matches!(IdealSpec::from_text(7, &["x", "y"], None, &["x", "w"]), Err(SetupError::Parse { .. })));
        assert!(matches!(IdealSpec::from_text(8, &["x"], None, &["x", "x"]), Err(SetupError::Field(_))));
    }

    #[test]
    fn reducer_agrees_with_normal_form() {
        let r = fermat(7);
        let space = r.degree_space(8);
        let mut red = MonomialReducer::new(&r, &space);
        for w in graded_piece_basis(3, 8) {
            let mut acc = Vec::new();
            red.accumulate(&w, 1, &mut acc);
            let acc = merge_sparse(r.field(), acc);
            let nf = r.normal_form(&Poly::term(r.field(), w.clone(), 1)).unwrap();
            let via: Poly =
                Poly::from_terms(r.field(), 3, acc.iter().map(|&(i, c)| (space.monomials[i].clone(), c as i64)));
            assert_eq!(via, nf);
        }
    }

    fn arb_relation() -> impl Strategy<Value = (u64, Vec<i64>)> {
        (3u64..5).prop_flat_map(|h| {
            let n = graded_piece_basis(3, h).len();
            (Just(h), prop::collection::vec(-3i64..4, n))
        })
    }

    fn arb_form(deg: u64) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-3i64..4, graded_piece_basis(3, deg).len())
    }

    fn form(field: PrimeField, deg: u64, cs: &[i64]) -> Poly {
        Poly::from_terms(field, 3, graded_piece_basis(3, deg).into_iter().zip(cs.iter().copied()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn normal_form_properties((h, hc) in arb_relation(), a in arb_form(4), b in arb_form(3)) {
            let fl = f(5);
            let mut hp = form(fl, h, &hc);
            if hp.is_zero() {
                hp = form(fl, h, &vec![1; hc.len()]);
            }
            let ring = GradedRing::hypersurface(fl, vars3(), &hp).unwrap();
            let fa = form(fl, 4, &a);
            let fb = form(fl, 3, &b);
            let na = ring.normal_form(&fa).unwrap();
            let nb = ring.normal_form(&fb).unwrap();
            let lead = ring.relation().unwrap().lead().clone();
            prop_assert!(na.terms().all(|(m, _)| !lead.divides(m)));
            prop_assert_eq!(ring.normal_form(&na).unwrap(), na.clone());
            let sum = fa.add(&fb.mul_monomial(&Monomial::var(3, 0)).unwrap()).unwrap();
            let lin = na.add(&ring.normal_form(&fb.mul_monomial(&Monomial::var(3, 0)).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(ring.normal_form(&sum).unwrap(), lin);
            let prod = ring.normal_form(&fa.mul(&fb).unwrap()).unwrap();
            let prod2 = ring.normal_form(&na.mul(&nb).unwrap()).unwrap();
            prop_assert_eq!(prod, prod2);
            for m in 0..=50u64 {
                prop_assert_eq!(ring.basis_mod_h(m).len() as u64, ring.hilbert_dim(m as i64));
            }
        }
    }
}
