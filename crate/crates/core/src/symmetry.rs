//! Generalized symmetries built from generating functions, and their Noether pairing
//! with normal-form conservation laws.

use serde_json::{json, Value};

use crate::conslaw::{build_phi, classical_phi0, NormalFormLaw, UndiffLaw};
use crate::error::{Error, Result};
use crate::forms::{d_form, d_function, form_to_json, interior, BasisOneForm, DiffForm, FrameTag, FrameVector};
use crate::jetring::{poly_to_json, DiffPoly, VarId};
use crate::operators::TCache;

/// Proper generalized symmetry: no `zeta`/`zetabar` components, `eta_0` component `g`,
/// `eta_i` component `e^i g` and `etabar_i` component `ebar^i g`.
#[derive(Clone, Debug)]
pub struct GenSymmetry {
    pub g: DiffPoly,
    pub depth: u32,
    pub vector: FrameVector,
}

impl GenSymmetry {
    pub fn component(&self, tag: FrameTag) -> DiffPoly {
        self.vector.components.get(&tag).cloned().unwrap_or_default()
    }
}

/// Builds the vector field without checking `E(g) = 0`. Used to inspect the Lie residual
/// of non-solutions.
pub fn symmetry_unchecked(g: &DiffPoly, cache: &TCache, depth: u32) -> GenSymmetry {
    let mut vector = FrameVector::new();
    vector.set(FrameTag::E0, g.clone());
    let (mut e, mut eb) = (g.clone(), g.clone());
    for j in 1..=depth {
        e = cache.e_minus1(&e);
        eb = cache.e_minus1_bar(&eb);
        vector.set(FrameTag::Ei(j), e.clone());
        vector.set(FrameTag::EiBar(j), eb.clone());
    }
    GenSymmetry { g: g.clone(), depth, vector }
}

pub fn symmetry_from_generating(g: &DiffPoly, cache: &TCache, depth: u32) -> Result<GenSymmetry> {
    let residual = cache.e_op(g);
    if !residual.is_zero() {
        return Err(Error::NotInKernel { residual: residual.to_string() });
    }
    Ok(symmetry_unchecked(g, cache, depth))
}

/// `L_v eta_i` modulo the contact ideal; only `zeta` and `zetabar` terms survive.
pub fn lie_check(v: &GenSymmetry, i: u32, cache: &TCache) -> Result<DiffForm> {
    if v.depth < i + 2 {
        return Err(Error::InsufficientDepth { depth: v.depth as usize, index: i as usize });
    }
    let eta = DiffForm::eta(i);
    let cartan = d_function(&interior(&v.vector, &eta).coeff(&[]), cache)
        .add(&interior(&v.vector, &d_form(&eta, cache)));
    Ok(cartan.mod_ideal().reduce(cache))
}

#[derive(Clone, PartialEq, Debug)]
pub struct LieReport {
    pub index: u32,
    pub zeta: DiffPoly,
    pub zeta_bar: DiffPoly,
}

impl LieReport {
    pub fn vanishes(&self) -> bool {
        self.zeta.is_zero() && self.zeta_bar.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "i": self.index,
            "zeta": poly_to_json(&self.zeta),
            "zeta_bar": poly_to_json(&self.zeta_bar),
            "vanishes": self.vanishes(),
        })
    }
}

/// Residuals of `L_v eta_i` for `i = 0..=max_i`.
pub fn lie_report(v: &GenSymmetry, max_i: u32, cache: &TCache) -> Result<Vec<LieReport>> {
    (0..=max_i)
        .map(|i| {
            let r = lie_check(v, i, cache)?;
            Ok(LieReport {
                index: i,
                zeta: r.coeff(&[BasisOneForm::Zeta]),
                zeta_bar: r.coeff(&[BasisOneForm::ZetaBar]),
            })
        })
        .collect()
}

/// True when contracting `v` into every `eta_i`, `etabar_i` with `i <= depth` gives zero.
pub fn annihilates_ideal(v: &FrameVector, depth: u32) -> bool {
    (0..=depth).all(|i| {
        let bar = if i == 0 { None } else { Some(DiffForm::eta_bar(i)) };
        interior(v, &DiffForm::eta(i)).is_zero() && bar.is_none_or(|b| interior(v, &b).is_zero())
    })
}

/// The trivial symmetry `Q e_{-1}`.
pub fn trivial_symmetry(q: &DiffPoly) -> FrameVector {
    let mut v = FrameVector::new();
    v.set(FrameTag::Eminus1, q.clone());
    v
}

#[derive(Clone, Debug)]
pub enum NoetherLaw {
    Normal(NormalFormLaw),
    Classical(UndiffLaw),
}

impl NoetherLaw {
    pub fn is_verified(&self) -> bool {
        match self {
            NoetherLaw::Normal(l) => l.is_closed(),
            NoetherLaw::Classical(l) => l.is_verified(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            NoetherLaw::Normal(l) => json!({"kind": "normal", "law": l.to_json()}),
            NoetherLaw::Classical(l) => json!({
                "kind": "classical",
                "law": l.to_json(),
                "varphi": form_to_json(&l.varphi),
            }),
        }
    }
}

fn is_mixed(g: &DiffPoly) -> bool {
    g.terms().any(|(m, _)| {
        let hol = m.vars().any(|v| matches!(v, VarId::Uj(_)));
        let anti = m.vars().any(|v| matches!(v, VarId::UjBar(_)));
        hol && anti
    })
}

fn circle_generator() -> DiffPoly {
    &(&DiffPoly::var(VarId::Z) * &DiffPoly::u(0)) - &(&DiffPoly::var(VarId::Zbar) * &DiffPoly::ubar(0))
}

/// Conservation law with the same generating function as the symmetry `g`.
///
/// Degree 0 accepts multiples of `q = z u_0 - zbar ubar_0` and returns the classical law
/// with an explicit primitive. Negative degrees are handled through the conjugate.
pub fn noether_pair(g: &DiffPoly, d: i64, cache: &TCache) -> Result<NoetherLaw> {
    let residual = cache.e_op(g);
    if !residual.is_zero() {
        return Err(Error::NotInKernel { residual: residual.to_string() });
    }
    if !g.weighted_degree().matches(d) {
        return Err(Error::NotHomogeneous { expected: d });
    }
    if d == 0 {
        let q = circle_generator();
        let (m, c) = q.leading_term().expect("q is nonzero");
        let scale = g.coeff(m) * c.inv().expect("nonzero coefficient");
        if g.is_zero() || *g != q.scale(&scale) {
            return Err(Error::NotMixedFree);
        }
        return Ok(NoetherLaw::Classical(classical_phi0(cache)));
    }
    if !g.partial(&VarId::U).is_zero() || is_mixed(g) {
        return Err(Error::NotMixedFree);
    }
    if d < 0 {
        return build_phi(&g.conjugate(), -d, cache).map(NoetherLaw::Normal);
    }
    build_phi(g, d, cache).map(NoetherLaw::Normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::{parse_expr, PotentialModel};
    use crate::operators::E_op;
    use crate::scalar::GaussScalar;

    fn p(s: &str) -> DiffPoly {
        parse_expr(s).unwrap()
    }

    fn sg() -> TCache {
        TCache::new(PotentialModel::sinh_gordon(p("b")))
    }

    #[test]
    fn components_are_iterated_operators() {
        let c = sg();
        let v = symmetry_from_generating(&p("u0"), &c, 3).unwrap();
        assert_eq!(v.component(FrameTag::E0), p("u0"));
        assert_eq!(v.component(FrameTag::Ei(2)), p("u2"));
        assert_eq!(v.component(FrameTag::EiBar(1)), p("-f"));
        assert!(v.component(FrameTag::Eminus1).is_zero());
        let q = symmetry_from_generating(&circle_generator(), &c, 3).unwrap();
        assert_eq!(q.component(FrameTag::Ei(2)), c.e_minus1_pow(&circle_generator(), 2));
        assert!(matches!(symmetry_from_generating(&p("u1"), &c, 3), Err(Error::NotInKernel { .. })));
    }

    #[test]
    fn solutions_have_vanishing_lie_residual() {
        let c = sg();
        for g in [p("u0"), circle_generator(), p("u2 - (1/2)*b*u0^3")] {
            let v = symmetry_from_generating(&g, &c, 5).unwrap();
            for r in lie_report(&v, 3, &c).unwrap() {
                assert!(r.vanishes(), "{g}: {r:?}");
            }
        }
    }

    #[test]
    fn residual_is_linearized_operator() {
        let c = TCache::new(PotentialModel::Generic);
        for s in ["u1", "u0^2", "z*u1 + ub0", "u3*ub1 - 2*u0"] {
            let g = p(s);
            let v = symmetry_unchecked(&g, &c, 4);
            let r = lie_report(&v, 2, &c).unwrap();
            assert!(r[0].vanishes());
            assert!(r[1].zeta.is_zero());
            assert_eq!(r[1].zeta_bar, E_op(&g, c.model()));
        }
    }

    #[test]
    fn depth_is_checked() {
        let c = sg();
        let v = symmetry_from_generating(&p("u0"), &c, 2).unwrap();
        assert!(lie_check(&v, 0, &c).is_ok());
        assert!(matches!(lie_check(&v, 1, &c), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn trivial_symmetry_annihilates_ideal() {
        let v = trivial_symmetry(&p("u3*z + ub1"));
        assert!(annihilates_ideal(&v, 6));
        assert!(!interior(&v, &DiffForm::zeta()).is_zero());
        assert!(!annihilates_ideal(&symmetry_unchecked(&p("u0"), &sg(), 2).vector, 2));
    }

    #[test]
    fn noether_routes() {
        let c = sg();
        assert!(matches!(noether_pair(&p("u0"), 1, &c), Ok(NoetherLaw::Normal(l)) if l.is_closed()));
        let p3 = p("u2 - (1/2)*b*u0^3");
        match noether_pair(&p3, 3, &c).unwrap() {
            NoetherLaw::Normal(l) => {
                assert!(l.is_closed());
                assert_eq!(l.p, p3);
            }
            other => panic!("{other:?}"),
        }
        let q = circle_generator().scale(&GaussScalar::i());
        assert!(matches!(noether_pair(&q, 0, &c), Ok(NoetherLaw::Classical(l)) if l.is_verified()));
        assert!(matches!(noether_pair(&p("ub0"), -1, &c), Ok(NoetherLaw::Normal(l)) if l.is_closed()));
        assert!(matches!(noether_pair(&p("u1"), 2, &c), Err(Error::NotInKernel { .. })));
    }

    #[test]
    fn symmetry_without_law() {
        // f itself solves the linearized equation when f_uu = 0 but depends on u
        let c = TCache::new(PotentialModel::sinh_gordon(DiffPoly::zero()));
        assert!(matches!(noether_pair(&p("f"), 0, &c), Err(Error::NotMixedFree)));
    }
}
