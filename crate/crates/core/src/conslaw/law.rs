//! Normal-form differentiated laws `Phi_P` and undifferentiated laws `varphi_P`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::forms::{d_form, d_function, form_to_json, interior, psi, BasisOneForm, DiffForm, FrameTag, FrameVector, J_apply};
use crate::jetring::{poly_to_json, DiffPoly, VarId, Wd};
use crate::operators::{binomial, TCache};
use crate::scalar::{rat, GaussScalar, Rational};

#[derive(Clone, PartialEq, Debug)]
pub struct NormalFormLaw {
    pub p: DiffPoly,
    pub degree: Wd,
    /// `k = d - 1` for homogeneous generators of degree `d >= 1`.
    pub level: Option<u32>,
    pub a_real: DiffPoly,
    pub rho: DiffForm,
    pub b: BTreeMap<(u32, u32), DiffPoly>,
    /// The weighted-degree-`d` piece (equal to `phi_real` for the classical laws).
    pub phi: DiffForm,
    pub phi_real: DiffForm,
    pub closure_residual: DiffForm,
}

impl NormalFormLaw {
    pub fn is_closed(&self) -> bool {
        self.closure_residual.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let mut b = Map::new();
        for ((i, j), v) in &self.b {
            b.insert(format!("{i},{j}"), poly_to_json(v));
        }
        json!({
            "P": poly_to_json(&self.p),
            "rho": form_to_json(&self.rho),
            "B": b,
            "closure_residual_is_zero": self.is_closed(),
        })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct UndiffLaw {
    pub p: DiffPoly,
    pub varphi: DiffForm,
    /// Only `zeta`, `zetabar` terms.
    pub varphi_tilde: DiffForm,
    /// `d(varphi)` minus the real differentiated law.
    pub d_residual: DiffForm,
    /// `d(varphi_tilde)` modulo the ideal.
    pub tilde_residual: DiffForm,
}

impl UndiffLaw {
    pub fn is_verified(&self) -> bool {
        self.d_residual.is_zero() && self.tilde_residual.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "P": poly_to_json(&self.p),
            "varphi": form_to_json(&self.varphi),
            "varphi_tilde": form_to_json(&self.varphi_tilde),
            "d_varphi_matches": self.d_residual.is_zero(),
            "tilde_closed_mod_ideal": self.tilde_residual.is_zero(),
        })
    }
}

fn half() -> GaussScalar {
    GaussScalar::real(rat(1, 2))
}

fn check_generator(p: &DiffPoly, d: i64) -> Result<()> {
    if !p.weighted_degree().matches(d) {
        return Err(Error::NotHomogeneous { expected: d });
    }
    if p.any_var(|v| matches!(v, VarId::Z | VarId::Zbar)) {
        return Err(Error::ExplicitZ);
    }
    Ok(())
}

fn b_sum(p: &DiffPoly, k: i64, i: i64, j: i64, cache: &TCache) -> DiffPoly {
    let mut acc = DiffPoly::zero();
    for m in 0..=(k - j - i + 1).max(-1) {
        let var = VarId::Uj((m + j + i - 1) as u32);
        let dp = p.partial(&var);
        if dp.is_zero() {
            continue;
        }
        let sign = if (m - i + 1).rem_euclid(2) == 0 { 1 } else { -1 };
        let c = binomial((m + i - 1) as u64, (i - 1) as u64) as i64 * sign;
        acc = &acc + &cache.e_minus1_pow(&dp, m as u32).scale_int(c);
    }
    acc.scale(&GaussScalar::i())
}

/// `B^{ij}(P)` for `1 <= i < j <= k`, `k = d - 1`.
pub fn b_coeffs(p: &DiffPoly, d: i64, cache: &TCache) -> Result<BTreeMap<(u32, u32), DiffPoly>> {
    check_generator(p, d)?;
    if d < 1 {
        return Err(Error::UnsupportedDegree(d));
    }
    Ok(b_coeffs_at_level(p, d - 1, cache))
}

pub(crate) fn b_coeffs_at_level(p: &DiffPoly, k: i64, cache: &TCache) -> BTreeMap<(u32, u32), DiffPoly> {
    let mut out = BTreeMap::new();
    for i in 1..=k {
        for j in (i + 1)..=k {
            out.insert((i as u32, j as u32), b_sum(p, k, i, j, cache));
        }
    }
    out
}

fn rho_of(a: &DiffPoly, cache: &TCache) -> DiffForm {
    J_apply(&d_function(a, cache)).expect("1-form").scale(&-half())
}

fn eta_pair(i: u32, j: u32) -> DiffForm {
    DiffForm::eta(i).wedge(&DiffForm::eta(j))
}

/// Assembles `Phi_P = eta_0 ^ rho_P + P psi + sum B^{ij} eta_i ^ eta_j + (conjugate terms)`.
pub fn build_phi(p: &DiffPoly, d: i64, cache: &TCache) -> Result<NormalFormLaw> {
    check_generator(p, d)?;
    if d < 1 {
        return Err(Error::UnsupportedDegree(d));
    }
    let residual = cache.e_op(p);
    if !residual.is_zero() {
        return Err(Error::NotInKernel { residual: residual.to_string() });
    }
    let rho = rho_of(p, cache);
    let b = b_coeffs(p, d, cache)?;
    let b_conj = b_coeffs_at_level(&p.conjugate(), d - 1, cache);
    let mut phi = DiffForm::eta(0).wedge(&rho).add(&psi().mul_fn(p));
    for ((i, j), v) in &b {
        phi = phi.add(&eta_pair(*i, *j).mul_fn(v));
    }
    for ((i, j), v) in &b_conj {
        let pair = DiffForm::eta_bar(*i).wedge(&DiffForm::eta_bar(*j));
        phi = phi.add(&pair.mul_fn(&v.conjugate()));
    }
    let phi_real = phi.add(&phi.conjugate());
    let closure_residual = d_form(&phi_real, cache);
    Ok(NormalFormLaw {
        p: p.clone(),
        degree: Wd::Homogeneous(d),
        level: Some((d - 1) as u32),
        a_real: p + &p.conjugate(),
        rho,
        b,
        phi,
        phi_real,
        closure_residual,
    })
}

fn max_letter(w: &DiffForm) -> u32 {
    w.terms()
        .flat_map(|(word, _)| word.letters().iter())
        .map(|l| match l {
            BasisOneForm::Eta(i) | BasisOneForm::EtaBar(i) => *i,
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

/// The circle-action vector
/// `v = i (q e_0 + zbar ebar_{-1} - z e_{-1} + sum (e_{-1})^j(q) e_j + sum (ebar_{-1})^j(q) ebar_j)`
/// with `q = z u_0 - zbar ubar_0`, populated up to index `depth`.
pub fn circle_vector(depth: u32, cache: &TCache) -> FrameVector {
    let i = GaussScalar::i();
    let q = &(&DiffPoly::var(VarId::Z) * &DiffPoly::u(0)) - &(&DiffPoly::var(VarId::Zbar) * &DiffPoly::ubar(0));
    let mut v = FrameVector::new();
    v.set(FrameTag::E0, q.scale(&i));
    v.set(FrameTag::Eminus1, DiffPoly::var(VarId::Z).scale(&-&i));
    v.set(FrameTag::Eminus1Bar, DiffPoly::var(VarId::Zbar).scale(&i));
    let (mut e, mut eb) = (q.clone(), q);
    for j in 1..=depth {
        e = cache.e_minus1(&e);
        eb = cache.e_minus1_bar(&eb);
        v.set(FrameTag::Ei(j), e.scale(&i));
        v.set(FrameTag::EiBar(j), eb.scale(&i));
    }
    v
}

/// Undifferentiated law for a generator of degree `d != 0`:
/// `varphi = varphi_P + conj(varphi_P)` with `varphi_P = (1/(i d)) v ⨼ Phi_P`.
pub fn build_varphi(p: &DiffPoly, d: i64, cache: &TCache) -> Result<UndiffLaw> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let (phi_p, phi_real) = if d > 0 {
        let law = build_phi(p, d, cache)?;
        (law.phi, law.phi_real)
    } else {
        let law = build_phi(&p.conjugate(), -d, cache)?;
        (law.phi.conjugate(), law.phi_real)
    };
    let v = circle_vector(max_letter(&phi_p) + 1, cache);
    let factor = GaussScalar::new(Rational::from_integer(0.into()), rat(-1, d));
    let varphi_p = interior(&v, &phi_p).scale(&factor);
    let varphi = varphi_p.add(&varphi_p.conjugate());
    let d_residual = d_form(&varphi, cache).sub(&phi_real);
    let varphi_tilde = varphi_tilde(p, cache);
    let tilde_residual = d_form(&varphi_tilde, cache).mod_ideal();
    Ok(UndiffLaw { p: p.clone(), varphi, varphi_tilde, d_residual, tilde_residual })
}

fn q_poly() -> DiffPoly {
    &(&DiffPoly::var(VarId::Z) * &DiffPoly::u(0)) - &(&DiffPoly::var(VarId::Zbar) * &DiffPoly::ubar(0))
}

/// `(q e_{-1}P) zeta + (ebar_{-1}(q) P) zetabar`.
pub fn varphi_tilde(p: &DiffPoly, cache: &TCache) -> DiffForm {
    let q = q_poly();
    DiffForm::zeta()
        .mul_fn(&(&q * &cache.e_minus1(p)))
        .add(&DiffForm::zeta_bar().mul_fn(&(&cache.e_minus1_bar(&q) * p)))
}

/// `(i/2d) J(P dq - q dP)`, the closed-form expression for `(1/d) v ⨼ Phi_P` modulo the ideal.
pub fn explicit_contraction(p: &DiffPoly, d: i64, cache: &TCache) -> DiffForm {
    let q = q_poly();
    let w = d_function(&q, cache).mul_fn(p).sub(&d_function(p, cache).mul_fn(&q));
    J_apply(&w)
        .expect("1-form")
        .scale(&GaussScalar::new(Rational::from_integer(0.into()), rat(1, 2 * d)))
}

/// Raw contraction `(1/d) v ⨼ Phi_P`.
pub fn contraction(p: &DiffPoly, d: i64, cache: &TCache) -> Result<DiffForm> {
    let law = build_phi(p, d, cache)?;
    let v = circle_vector(max_letter(&law.phi) + 1, cache);
    Ok(interior(&v, &law.phi).scale(&GaussScalar::real(rat(1, d))))
}

/// The classical laws with generating function `a u_0 + i b z u_0`.
pub fn classical_laws(a: &GaussScalar, b: &Rational, cache: &TCache) -> NormalFormLaw {
    let p = &DiffPoly::u(0).scale(a)
        + &(&DiffPoly::var(VarId::Z) * &DiffPoly::u(0)).scale(&GaussScalar::new(Rational::from_integer(0.into()), b.clone()));
    let a_real = &p + &p.conjugate();
    let rho = rho_of(&a_real, cache);
    let phi = DiffForm::eta(0).wedge(&rho).add(&psi().mul_fn(&a_real));
    let closure_residual = d_form(&phi, cache);
    NormalFormLaw {
        degree: p.weighted_degree(),
        p,
        level: None,
        a_real,
        rho,
        b: BTreeMap::new(),
        phi: phi.clone(),
        phi_real: phi,
        closure_residual,
    }
}

/// `varphi_0 = G eta_0 + E zeta + conj(E) zetabar` with `G = -(1/2)(z u_0 + zbar ubar_0)` and
/// `E = -(1/2) z u_0^2 + zbar Sf`, checked against the classical law with `P = i z u_0`.
///
/// With `G = -(z u_0 + zbar ubar_0)` the `zeta ^ eta_1` coefficient of `d varphi_0` comes out
/// as `-zbar ubar_0` instead of `-(i/2) A`, so the factor `1/2` is required.
pub fn classical_phi0(cache: &TCache) -> UndiffLaw {
    let z = DiffPoly::var(VarId::Z);
    let zb = DiffPoly::var(VarId::Zbar);
    let g = (&(&z * &DiffPoly::u(0)) + &(&zb * &DiffPoly::ubar(0))).scale(&-half());
    let e = &(&z * &DiffPoly::u(0).pow(2)).scale(&-half()) + &(&zb * &DiffPoly::tower(-1));
    let varphi_tilde = DiffForm::zeta().mul_fn(&e).add(&DiffForm::zeta_bar().mul_fn(&e.conjugate()));
    let varphi = DiffForm::eta(0).mul_fn(&g).add(&varphi_tilde);
    let law = classical_laws(&GaussScalar::zero(), &Rational::from_integer(1.into()), cache);
    let d_residual = d_form(&varphi, cache).sub(&law.phi_real);
    let tilde_residual = d_form(&varphi_tilde, cache).mod_ideal();
    UndiffLaw { p: law.p, varphi, varphi_tilde, d_residual, tilde_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conslaw::solve_vd;
    use crate::jetring::{parse_expr, PotentialModel};

    fn p(s: &str) -> DiffPoly {
        parse_expr(s).unwrap()
    }

    fn sg() -> TCache {
        TCache::new(PotentialModel::sinh_gordon(p("b")))
    }

    #[test]
    fn b_examples() {
        let c = sg();
        let b = b_coeffs(&p("u2 - (1/2)*b*u0^3"), 3, &c).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[&(1, 2)], DiffPoly::i());
        assert!(b_coeffs(&p("u0"), 1, &c).unwrap().is_empty());
        assert!(matches!(b_coeffs(&p("z*u0"), 0, &c), Err(Error::ExplicitZ)));
        assert!(matches!(b_coeffs(&p("u0 + u1"), 1, &c), Err(Error::NotHomogeneous { .. })));
    }

    #[test]
    fn b_for_outer_pairs() {
        let c = sg();
        for d in [5i64, 7] {
            let g = &solve_vd(d, c.model()).kernel[0];
            let k = d - 1;
            let b = b_coeffs(g, d, &c).unwrap();
            let a_k = g.partial(&VarId::Uj(k as u32));
            for i in 1..=k {
                let j = k + 1 - i;
                if i < j {
                    let sign = if i % 2 == 1 { 1 } else { -1 };
                    assert_eq!(b[&(i as u32, j as u32)], a_k.scale(&GaussScalar::i()).scale_int(sign));
                }
            }
            assert_eq!(b[&(1, k as u32)], a_k.scale(&GaussScalar::i()));
            for ((i, j), v) in &b {
                assert!(v.weighted_degree().matches(d - *i as i64 - *j as i64));
            }
            // raising the level adds only vanishing terms
            assert_eq!(b_coeffs_at_level(g, k + 1, &c).into_iter().filter(|((_, j), _)| *j as i64 <= k).collect::<BTreeMap<_, _>>(), b);
        }
    }

    #[test]
    fn phi_for_u0() {
        let c = sg();
        let law = build_phi(&p("u0"), 1, &c).unwrap();
        let rho = DiffForm::zeta()
            .mul_fn(&p("u1"))
            .add(&DiffForm::zeta_bar().mul_fn(&p("f")))
            .add(&DiffForm::eta(1))
            .scale(&GaussScalar::new(rat(0, 1), rat(-1, 2)));
        assert_eq!(law.rho, rho);
        assert!(law.is_closed());
        assert!(matches!(build_phi(&p("u1"), 2, &c), Err(Error::NotInKernel { .. })));
    }

    #[test]
    fn phi_p3_closed() {
        let c = sg();
        let law = build_phi(&p("u2 - (1/2)*b*u0^3"), 3, &c).unwrap();
        assert!(law.is_closed());
        assert!(d_form(&law.phi, &c).is_zero());
    }

    #[test]
    fn varphi_for_low_degrees() {
        let c = sg();
        for (s, d) in [("u0", 1), ("u2 - (1/2)*b*u0^3", 3)] {
            let law = build_varphi(&p(s), d, &c).unwrap();
            assert!(law.d_residual.is_zero(), "{s}: {}", law.d_residual);
            assert!(law.tilde_residual.is_zero());
            let raw = contraction(&p(s), d, &c).unwrap();
            assert_eq!(raw.mod_ideal(), explicit_contraction(&p(s), d, &c).mod_ideal());
        }
        let neg = build_varphi(&p("ub0"), -1, &c).unwrap();
        assert!(neg.is_verified());
        assert!(matches!(build_varphi(&p("u0"), 0, &c), Err(Error::ZeroDegree)));
    }

    #[test]
    fn classical() {
        let c = TCache::new(PotentialModel::Generic);
        let one = GaussScalar::one();
        let zero = Rational::from_integer(0.into());
        let l1 = classical_laws(&one, &zero, &c);
        assert!(l1.is_closed());
        assert_eq!(l1.phi_real, build_phi(&p("u0"), 1, &c).unwrap().phi_real);
        let l2 = classical_laws(&GaussScalar::zero(), &Rational::from_integer(1.into()), &c);
        assert!(l2.is_closed());
        assert!(l2.phi_real.terms().any(|(_, v)| v.contains_var(&VarId::Z)));
        assert!(classical_laws(&GaussScalar::zero(), &zero, &c).phi_real.is_zero());
        let phi0 = classical_phi0(&c);
        assert!(phi0.d_residual.is_zero(), "{}", phi0.d_residual);
        assert!(phi0.tilde_residual.is_zero());
        assert_eq!(phi0.varphi.weighted_degree(), Wd::Homogeneous(0));
        assert_eq!(phi0.varphi.conjugate(), phi0.varphi);
    }
}
