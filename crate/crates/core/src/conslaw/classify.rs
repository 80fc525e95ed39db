//! Which potentials `f_uu = l1 f_u + l2 f` admit generators of a given degree.
//!
//! The system for `V_d` is weighted-homogeneous under `f(u) -> f(s u)`, which gives
//! `l1` weight 1 and `l2` weight 2. Every curve in the `(l1, l2)` plane where the
//! coefficient matrix drops rank is therefore either `l1 = 0` or `l2 = c l1^2`. The
//! first is tested directly; the others are the roots of the gcd of maximal minors
//! after setting `l1 = 1`.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{coefficient_matrix, vd_basis};
use crate::error::{Error, Result};
use crate::jetring::{poly_to_json, render, DiffPoly, Format, Monomial, PotentialModel, VarId};
use crate::linalg::{canonical_span, echelon, integer_primitive, maximal_minor_gcd, rational_roots, squarefree, Matrix, UniPoly};
use crate::operators::TCache;
use crate::scalar::GaussScalar;

#[derive(Clone, PartialEq, Debug)]
pub struct Condition {
    /// Polynomial in `l1`, `l2` that vanishes on the branch; zero means "always".
    pub poly: DiffPoly,
    /// Normalized generator on the branch, when the branch is rational.
    pub witness: Option<DiffPoly>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ClassifyReport {
    pub degree: i64,
    pub conditions: Vec<Condition>,
}

impl ClassifyReport {
    pub fn to_json(&self) -> Value {
        let conds: Vec<Value> = self
            .conditions
            .iter()
            .map(|c| {
                json!({
                    "poly": poly_to_json(&c.poly),
                    "text": render(&c.poly, Format::Text),
                    "witness": c.witness.as_ref().map(poly_to_json),
                })
            })
            .collect();
        json!({ "degree": self.degree, "conditions": conds })
    }
}

fn l1() -> VarId {
    VarId::param("l1")
}

fn l2() -> VarId {
    VarId::param("l2")
}

fn specialize(m: &Matrix, var: &VarId, value: &DiffPoly) -> Matrix {
    m.iter()
        .map(|row| row.iter().map(|e| e.substitute(var, value)).collect())
        .collect()
}

fn generators(m: &Matrix, basis: &[Monomial]) -> Vec<DiffPoly> {
    let order: Vec<usize> = (0..basis.len()).collect();
    let kernel = echelon(m, basis.len()).kernel();
    canonical_span(&kernel, &order)
        .into_iter()
        .map(|v| {
            basis
                .iter()
                .zip(v)
                .fold(DiffPoly::zero(), |acc, (mono, c)| &acc + &c.mul_monomial(mono))
        })
        .collect()
}

/// Rank-drop conditions on `(l1, l2)` for `V_d`, `d` odd in `3..=7`.
pub fn classify(d: i64) -> Result<ClassifyReport> {
    if !(3..=7).contains(&d) || d % 2 == 0 {
        return Err(Error::UnsupportedDegree(d));
    }
    let cache = TCache::new(PotentialModel::parametric());
    let _ = cache.t(d as u32 + 2);
    let basis = vd_basis(d as u32).monomials;
    let images: Vec<DiffPoly> = basis
        .par_iter()
        .map(|m| cache.e_op(&DiffPoly::term(GaussScalar::one(), m.clone())))
        .collect();
    let matrix = coefficient_matrix(&images);
    let n = basis.len();
    let mut conditions = Vec::new();

    let generic = generators(&matrix, &basis);
    if !generic.is_empty() {
        conditions.push(Condition { poly: DiffPoly::zero(), witness: generic.into_iter().next() });
        return Ok(ClassifyReport { degree: d, conditions });
    }

    let on_axis = generators(&specialize(&matrix, &l1(), &DiffPoly::zero()), &basis);
    if let Some(w) = on_axis.into_iter().next() {
        conditions.push(Condition { poly: DiffPoly::var(l1()), witness: Some(w) });
    }

    let t = l2();
    let dehom = specialize(&matrix, &l1(), &DiffPoly::one());
    let uni: Vec<Vec<UniPoly>> = dehom
        .iter()
        .map(|row| row.iter().map(|e| UniPoly::from_poly(e, &t)).collect())
        .collect();
    let g = maximal_minor_gcd(&uni, n);
    if g.degree().unwrap_or(0) == 0 {
        return Ok(ClassifyReport { degree: d, conditions });
    }
    let g = UniPoly::from_poly(&squarefree(&g.to_poly(&t)), &t);
    let (roots, rest) = rational_roots(&g);
    let mut roots = roots;
    roots.sort();
    let l1sq = DiffPoly::var(l1()).pow(2);
    for c in roots {
        let value = l1sq.scale(&GaussScalar::real(c));
        let poly = integer_primitive(&(&DiffPoly::var(l2()) - &value));
        let witness = generators(&specialize(&matrix, &l2(), &value), &basis).into_iter().next();
        conditions.push(Condition { poly, witness });
    }
    if let Some(k) = rest.degree().filter(|k| *k > 0) {
        // homogenize: sum g_j l2^j l1^(2(k - j))
        let mut h = DiffPoly::zero();
        for (j, c) in rest.0.iter().enumerate() {
            let m = Monomial::from_factors([(l2(), j as u32), (l1(), 2 * (k - j) as u32)]);
            h.add_term(m, c);
        }
        conditions.push(Condition { poly: integer_primitive(&h), witness: None });
    }
    Ok(ClassifyReport { degree: d, conditions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conslaw::solve_vd;
    use crate::jetring::parse_expr;

    fn p(s: &str) -> DiffPoly {
        parse_expr(s).unwrap()
    }

    #[test]
    fn degree_three() {
        let r = classify(3).unwrap();
        assert_eq!(r.conditions.len(), 1);
        assert_eq!(r.conditions[0].poly, p("l1"));
        let w = r.conditions[0].witness.clone().unwrap();
        assert_eq!(w, p("u2 - (1/2)*l2*u0^3"));
        let beta = w.substitute(&l2(), &p("b"));
        assert_eq!(beta, solve_vd(3, &PotentialModel::sinh_gordon(p("b"))).kernel[0]);
    }

    #[test]
    fn degree_five_has_two_branches() {
        let r = classify(5).unwrap();
        let polys: Vec<DiffPoly> = r.conditions.iter().map(|c| c.poly.clone()).collect();
        assert_eq!(polys, vec![p("l1"), p("l2 - 2*l1^2")]);
        // the second witness specializes to the Tzitzeica generator at l1 = -1
        let w = r.conditions[1].witness.clone().unwrap();
        let tz = w.substitute(&VarId::param("l1"), &DiffPoly::int(-1));
        assert_eq!(tz, solve_vd(5, &PotentialModel::tzitzeica(DiffPoly::int(-1))).kernel[0]);
        let sg = r.conditions[0].witness.clone().unwrap().substitute(&l2(), &p("b"));
        assert_eq!(sg, solve_vd(5, &PotentialModel::sinh_gordon(p("b"))).kernel[0]);
    }

    #[test]
    fn rejects_unsupported_degrees() {
        assert!(classify(4).is_err());
        assert!(classify(9).is_err());
        assert!(classify(1).is_err());
    }
}
