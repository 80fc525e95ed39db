//! Exterior algebra over the coframe `zeta, zetabar, eta_0, eta_i, etabar_i` of the
//! infinite prolongation, with the structure equations of the system.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jetring::{poly_to_json, render, DiffPoly, Format, VarId, Wd};
use crate::operators::{binomial, TCache};
use crate::scalar::{rat, GaussScalar};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BasisOneForm {
    Zeta,
    ZetaBar,
    Eta(u32),
    /// Index `>= 1`.
    EtaBar(u32),
}

impl BasisOneForm {
    fn key(&self) -> (u32, u32) {
        match self {
            BasisOneForm::Zeta => (0, 0),
            BasisOneForm::ZetaBar => (0, 1),
            BasisOneForm::Eta(i) => (1, 2 * i),
            BasisOneForm::EtaBar(i) => (1, 2 * i + 1),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            BasisOneForm::Zeta => BasisOneForm::ZetaBar,
            BasisOneForm::ZetaBar => BasisOneForm::Zeta,
            BasisOneForm::Eta(0) => BasisOneForm::Eta(0),
            BasisOneForm::Eta(i) => BasisOneForm::EtaBar(*i),
            BasisOneForm::EtaBar(i) => BasisOneForm::Eta(*i),
        }
    }

    pub fn wd(&self) -> i64 {
        match self {
            BasisOneForm::Zeta => -1,
            BasisOneForm::ZetaBar => 1,
            BasisOneForm::Eta(i) => *i as i64,
            BasisOneForm::EtaBar(i) => -(*i as i64),
        }
    }

    pub fn in_ideal(&self) -> bool {
        matches!(self, BasisOneForm::Eta(_) | BasisOneForm::EtaBar(_))
    }

    pub fn token(&self) -> String {
        match self {
            BasisOneForm::Zeta => "zeta".into(),
            BasisOneForm::ZetaBar => "zetab".into(),
            BasisOneForm::Eta(i) => format!("eta{i}"),
            BasisOneForm::EtaBar(i) => format!("etab{i}"),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            BasisOneForm::Zeta => "\\zeta".into(),
            BasisOneForm::ZetaBar => "\\bar{\\zeta}".into(),
            BasisOneForm::Eta(i) => format!("\\eta_{{{i}}}"),
            BasisOneForm::EtaBar(i) => format!("\\bar{{\\eta}}_{{{i}}}"),
        }
    }

    /// The frame vector dual to this letter.
    pub fn dual(&self) -> FrameTag {
        match self {
            BasisOneForm::Zeta => FrameTag::Eminus1,
            BasisOneForm::ZetaBar => FrameTag::Eminus1Bar,
            BasisOneForm::Eta(0) => FrameTag::E0,
            BasisOneForm::Eta(i) => FrameTag::Ei(*i),
            BasisOneForm::EtaBar(i) => FrameTag::EiBar(*i),
        }
    }
}

impl Ord for BasisOneForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for BasisOneForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Strictly increasing list of coframe letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct WedgeWord(Vec<BasisOneForm>);

impl WedgeWord {
    pub fn letters(&self) -> &[BasisOneForm] {
        &self.0
    }

    /// Sorts `letters`; returns the sign of the permutation, or `None` on a repeat.
    pub fn normalize(mut letters: Vec<BasisOneForm>) -> Option<(i64, WedgeWord)> {
        let mut sign = 1;
        // insertion sort keeps track of parity
        for i in 1..letters.len() {
            let mut j = i;
            while j > 0 && letters[j - 1] > letters[j] {
                letters.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if letters.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, WedgeWord(letters)))
    }

    pub fn wd(&self) -> i64 {
        self.0.iter().map(BasisOneForm::wd).sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum FrameTag {
    Eminus1,
    Eminus1Bar,
    E0,
    Ei(u32),
    EiBar(u32),
}

impl FrameTag {
    pub fn dual(&self) -> BasisOneForm {
        match self {
            FrameTag::Eminus1 => BasisOneForm::Zeta,
            FrameTag::Eminus1Bar => BasisOneForm::ZetaBar,
            FrameTag::E0 => BasisOneForm::Eta(0),
            FrameTag::Ei(i) => BasisOneForm::Eta(*i),
            FrameTag::EiBar(i) => BasisOneForm::EtaBar(*i),
        }
    }
}

/// A vector field written in the frame `e_{-1}, ebar_{-1}, e_0, e_i, ebar_i`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FrameVector {
    pub components: BTreeMap<FrameTag, DiffPoly>,
}

impl FrameVector {
    pub fn new() -> Self {
        FrameVector::default()
    }

    pub fn set(&mut self, tag: FrameTag, value: DiffPoly) {
        if value.is_zero() {
            self.components.remove(&tag);
        } else {
            self.components.insert(tag, value);
        }
    }

    /// Value of a coframe letter on this vector.
    pub fn pair(&self, l: &BasisOneForm) -> DiffPoly {
        self.components.get(&l.dual()).cloned().unwrap_or_default()
    }
}

/// A differential form of fixed degree with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffForm {
    degree: usize,
    terms: BTreeMap<WedgeWord, DiffPoly>,
}

impl DiffForm {
    pub fn zero(degree: usize) -> Self {
        DiffForm { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: DiffPoly) -> Self {
        let mut out = DiffForm::zero(0);
        out.add_term(WedgeWord::default(), f);
        out
    }

    pub fn letter(l: BasisOneForm) -> Self {
        DiffForm::word(vec![l], DiffPoly::one())
    }

    /// `coeff * l_1 ^ ... ^ l_p` for letters in any order.
    pub fn word(letters: Vec<BasisOneForm>, coeff: DiffPoly) -> Self {
        let mut out = DiffForm::zero(letters.len());
        if let Some((s, w)) = WedgeWord::normalize(letters) {
            out.add_term(w, coeff.scale_int(s));
        }
        out
    }

    pub fn zeta() -> Self {
        DiffForm::letter(BasisOneForm::Zeta)
    }

    pub fn zeta_bar() -> Self {
        DiffForm::letter(BasisOneForm::ZetaBar)
    }

    pub fn eta(i: u32) -> Self {
        DiffForm::letter(BasisOneForm::Eta(i))
    }

    pub fn eta_bar(i: u32) -> Self {
        DiffForm::letter(BasisOneForm::EtaBar(i))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeWord, &DiffPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, letters: &[BasisOneForm]) -> DiffPoly {
        match WedgeWord::normalize(letters.to_vec()) {
            Some((s, w)) => self.terms.get(&w).map(|c| c.scale_int(s)).unwrap_or_default(),
            None => DiffPoly::zero(),
        }
    }

    fn add_term(&mut self, w: WedgeWord, c: DiffPoly) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(w.0.len(), self.degree);
        let entry = self.terms.entry(w).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        if self.is_zero() {
            return DiffForm { degree: other.degree, terms: other.terms.clone() };
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &GaussScalar) -> DiffForm {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_fn(&self, f: &DiffPoly) -> DiffForm {
        self.map_coeffs(|p| p * f)
    }

    pub fn map_coeffs<F: Fn(&DiffPoly) -> DiffPoly>(&self, f: F) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        let mut out = DiffForm::zero(self.degree + other.degree);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let letters: Vec<_> = wa.0.iter().chain(wb.0.iter()).cloned().collect();
                if let Some((s, w)) = WedgeWord::normalize(letters) {
                    out.add_term(w, (ca * cb).scale_int(s));
                }
            }
        }
        out
    }

    pub fn conjugate(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (w, c) in &self.terms {
            let letters = w.0.iter().map(BasisOneForm::conj).collect();
            if let Some((s, w)) = WedgeWord::normalize(letters) {
                out.add_term(w, c.conjugate().scale_int(s));
            }
        }
        out
    }

    pub fn weighted_degree(&self) -> Wd {
        let mut degs = self.terms.iter().map(|(w, c)| match c.weighted_degree() {
            Wd::Homogeneous(d) => Wd::Homogeneous(d + w.wd()),
            other => other,
        });
        let Some(first) = degs.next() else {
            return Wd::Zero;
        };
        if first != Wd::Inhomogeneous && degs.all(|d| d == first) {
            first
        } else {
            Wd::Inhomogeneous
        }
    }

    /// Drops every word containing an `eta` letter.
    pub fn mod_ideal(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (w, c) in &self.terms {
            if !w.0.iter().any(BasisOneForm::in_ideal) {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn reduce(&self, cache: &TCache) -> DiffForm {
        self.map_coeffs(|c| cache.model().reduce(c))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => form_to_json(self).to_string(),
            Format::Text | Format::Latex => {
                if self.is_zero() {
                    return "0".into();
                }
                let parts: Vec<String> = self
                    .terms
                    .iter()
                    .map(|(w, c)| {
                        let coeff = render(c, format);
                        let word: Vec<String> = w
                            .0
                            .iter()
                            .map(|l| if format == Format::Text { l.token() } else { l.latex() })
                            .collect();
                        match (format, word.is_empty()) {
                            (_, true) => coeff,
                            (Format::Text, false) => format!("({coeff})*{}", word.join("^")),
                            _ => format!("\\left({coeff}\\right) {}", word.join("\\wedge")),
                        }
                    })
                    .collect();
                parts.join(" + ")
            }
        }
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Text))
    }
}

pub fn form_to_json(w: &DiffForm) -> Value {
    Value::Array(
        w.terms
            .iter()
            .map(|(word, c)| {
                let letters: Vec<String> = word.0.iter().map(BasisOneForm::token).collect();
                json!({"word": letters, "coeff": poly_to_json(c)})
            })
            .collect(),
    )
}

/// `dF = e_{-1}(F) zeta + ebar_{-1}(F) zetabar + F_u eta_0 + sum F_{u_{i-1}} eta_i + sum F_{ubar_{i-1}} etabar_i`.
///
/// Explicit `z`, `zbar` are handled by the `zeta`, `zetabar` components.
pub fn d_function(f: &DiffPoly, cache: &TCache) -> DiffForm {
    let f = &cache.model().reduce(f);
    let mut out = DiffForm::zero(1);
    out.add_term(WedgeWord(vec![BasisOneForm::Zeta]), cache.e_minus1(f));
    out.add_term(WedgeWord(vec![BasisOneForm::ZetaBar]), cache.e_minus1_bar(f));
    out.add_term(WedgeWord(vec![BasisOneForm::Eta(0)]), cache.model().reduce(&f.partial(&VarId::U)));
    for v in f.vars() {
        match v {
            VarId::Uj(n) => out.add_term(WedgeWord(vec![BasisOneForm::Eta(n + 1)]), f.partial(&v)),
            VarId::UjBar(n) => out.add_term(WedgeWord(vec![BasisOneForm::EtaBar(n + 1)]), f.partial(&v)),
            _ => {}
        }
    }
    out
}

/// `tau^i = sum_j C(i,j) T^j_u eta_{i-j}`.
pub fn tau(i: u32, cache: &TCache) -> DiffForm {
    let mut out = DiffForm::zero(1);
    for j in 0..=i {
        let c = binomial(i as u64, j as u64) as i64;
        let tju = cache.model().reduce(&cache.t(j).partial(&VarId::U));
        out = out.add(&DiffForm::eta(i - j).mul_fn(&tju.scale_int(c)));
    }
    out
}

/// Exterior derivative of a single coframe letter (structure equations).
pub fn d_letter(l: &BasisOneForm, cache: &TCache) -> DiffForm {
    match l {
        BasisOneForm::Zeta | BasisOneForm::ZetaBar => DiffForm::zero(2),
        BasisOneForm::Eta(0) => DiffForm::zeta()
            .wedge(&DiffForm::eta(1))
            .add(&DiffForm::zeta_bar().wedge(&DiffForm::eta_bar(1))),
        BasisOneForm::Eta(i) => DiffForm::eta(i + 1)
            .wedge(&DiffForm::zeta())
            .neg()
            .add(&tau(i - 1, cache).wedge(&DiffForm::zeta_bar())),
        BasisOneForm::EtaBar(i) => d_letter(&BasisOneForm::Eta(*i), cache).conjugate(),
    }
}

pub fn d_form(w: &DiffForm, cache: &TCache) -> DiffForm {
    let mut out = DiffForm::zero(w.degree + 1);
    for (word, c) in &w.terms {
        let c = &cache.model().reduce(c);
        let rest = DiffForm::word(word.0.clone(), DiffPoly::one());
        out = out.add(&d_function(c, cache).wedge(&rest));
        for (k, l) in word.0.iter().enumerate() {
            let before = DiffForm::word(word.0[..k].to_vec(), DiffPoly::one());
            let after = DiffForm::word(word.0[k + 1..].to_vec(), DiffPoly::one());
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let piece = before.wedge(&d_letter(l, cache)).wedge(&after);
            out = out.add(&piece.mul_fn(&c.scale_int(sign)));
        }
    }
    out
}

/// `J` on 1-forms: `i` on `zeta, eta_i`, `-i` on `zetabar, etabar_i`, identity on `eta_0`.
#[allow(non_snake_case)]
pub fn J_apply(w: &DiffForm) -> Result<DiffForm> {
    if w.degree != 1 && !w.is_zero() {
        return Err(Error::FormDegree(w.degree));
    }
    let mut out = DiffForm::zero(1);
    for (word, c) in &w.terms {
        let factor = match word.0[0] {
            BasisOneForm::Eta(0) => GaussScalar::one(),
            BasisOneForm::Zeta | BasisOneForm::Eta(_) => GaussScalar::i(),
            BasisOneForm::ZetaBar | BasisOneForm::EtaBar(_) => -GaussScalar::i(),
        };
        out.add_term(word.clone(), c.scale(&factor));
    }
    Ok(out)
}

/// `psi = -(i/2) (zeta ^ eta_1 - zetabar ^ etabar_1)`.
pub fn psi() -> DiffForm {
    let c = GaussScalar::new(rat(0, 1), rat(-1, 2));
    DiffForm::zeta()
        .wedge(&DiffForm::eta(1))
        .sub(&DiffForm::zeta_bar().wedge(&DiffForm::eta_bar(1)))
        .scale(&c)
}

/// Contraction `v ⨼ w`.
pub fn interior(v: &FrameVector, w: &DiffForm) -> DiffForm {
    if w.degree == 0 {
        return DiffForm::zero(0);
    }
    let mut out = DiffForm::zero(w.degree - 1);
    for (word, c) in &w.terms {
        for (k, l) in word.0.iter().enumerate() {
            let val = v.pair(l);
            if val.is_zero() {
                continue;
            }
            let mut rest = word.0.clone();
            rest.remove(k);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.add_term(WedgeWord(rest), (c * &val).scale_int(sign));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::{parse_expr, Monomial, PotentialModel};
    use proptest::prelude::*;

    fn p(s: &str) -> DiffPoly {
        parse_expr(s).unwrap()
    }

    fn generic() -> TCache {
        TCache::new(PotentialModel::Generic)
    }

    fn letters() -> Vec<BasisOneForm> {
        let mut v = vec![BasisOneForm::Zeta, BasisOneForm::ZetaBar, BasisOneForm::Eta(0)];
        for i in 1..=4 {
            v.push(BasisOneForm::Eta(i));
            v.push(BasisOneForm::EtaBar(i));
        }
        v
    }

    #[test]
    fn d_function_examples() {
        let c = generic();
        let du0 = d_function(&p("u0"), &c);
        let expect = DiffForm::zeta()
            .mul_fn(&p("u1"))
            .add(&DiffForm::zeta_bar().mul_fn(&p("-f")))
            .add(&DiffForm::eta(1));
        assert_eq!(du0, expect);
        assert_eq!(d_function(&p("z"), &c), DiffForm::zeta());
        let du = d_function(&p("u"), &c);
        let expect = DiffForm::zeta()
            .mul_fn(&p("u0"))
            .add(&DiffForm::zeta_bar().mul_fn(&p("ub0")))
            .add(&DiffForm::eta(0));
        assert_eq!(du, expect);
    }

    #[test]
    fn structure_equations() {
        let c = generic();
        let d0 = d_letter(&BasisOneForm::Eta(0), &c);
        assert_eq!(d0.coeff(&[BasisOneForm::Zeta, BasisOneForm::Eta(1)]), DiffPoly::one());
        assert_eq!(d0.coeff(&[BasisOneForm::ZetaBar, BasisOneForm::EtaBar(1)]), DiffPoly::one());
        let d1 = d_letter(&BasisOneForm::Eta(1), &c);
        let expect = DiffForm::eta(2)
            .wedge(&DiffForm::zeta())
            .neg()
            .add(&DiffForm::eta(0).wedge(&DiffForm::zeta_bar()).mul_fn(&p("fu")));
        assert_eq!(d1, expect);
    }

    #[test]
    fn d_squared_vanishes_on_letters() {
        for model in [PotentialModel::Generic, PotentialModel::parametric()] {
            let c = TCache::new(model);
            for l in letters() {
                let dd = d_form(&d_letter(&l, &c), &c);
                assert!(dd.is_zero(), "d^2 {l:?} = {dd}");
            }
        }
    }

    #[test]
    fn d_reduces_unreduced_coefficients() {
        let c = TCache::new(PotentialModel::parametric());
        let w = DiffForm::eta(1).mul_fn(&p("F2 + z*F3"));
        assert!(d_form(&d_form(&w, &c), &c).is_zero());
        assert_eq!(d_function(&p("F2"), &c), d_function(&p("l1*fu + l2*f"), &c));
    }

    #[test]
    fn d_of_function_is_closed() {
        let c = generic();
        for s in ["u0", "z*u1*ub0", "f*u2", "zb*Sf - z*u0^2", "u*ub3"] {
            let df = d_function(&p(s), &c);
            assert!(d_form(&df, &c).is_zero(), "d^2 {s}");
        }
    }

    #[test]
    fn tau_examples() {
        let c = generic();
        assert_eq!(tau(0, &c), DiffForm::eta(0).mul_fn(&p("fu")));
        let t1 = DiffForm::eta(1).mul_fn(&p("fu")).add(&DiffForm::eta(0).mul_fn(&p("u0*F2")));
        assert_eq!(tau(1, &c), t1);
        let sg = TCache::new(PotentialModel::sinh_gordon(p("b")));
        let t1 = DiffForm::eta(1).mul_fn(&p("fu")).add(&DiffForm::eta(0).mul_fn(&p("b*u0*f")));
        assert_eq!(tau(1, &sg), t1);
    }

    #[test]
    fn j_examples() {
        assert_eq!(J_apply(&DiffForm::zeta()).unwrap(), DiffForm::zeta().scale(&GaussScalar::i()));
        assert_eq!(J_apply(&DiffForm::eta(0)).unwrap(), DiffForm::eta(0));
        let w = DiffForm::zeta().add(&DiffForm::zeta_bar());
        assert_eq!(J_apply(&J_apply(&w).unwrap()).unwrap(), w.neg());
        assert!(J_apply(&psi()).is_err());
    }

    #[test]
    fn psi_examples() {
        let s = psi();
        assert_eq!(
            s.coeff(&[BasisOneForm::Zeta, BasisOneForm::Eta(1)]),
            DiffPoly::constant(GaussScalar::new(rat(0, 1), rat(-1, 2)))
        );
        assert_eq!(s.conjugate(), s);
        assert_eq!(s.weighted_degree(), Wd::Homogeneous(0));
        // dpsi = -i f_u eta_0 ^ zeta ^ zetabar
        let c = generic();
        let expect = DiffForm::word(
            vec![BasisOneForm::Eta(0), BasisOneForm::Zeta, BasisOneForm::ZetaBar],
            p("-i*fu"),
        );
        assert_eq!(d_form(&s, &c), expect);
    }

    #[test]
    fn interior_examples() {
        let mut v = FrameVector::new();
        v.set(FrameTag::Eminus1, DiffPoly::one());
        assert_eq!(interior(&v, &DiffForm::zeta()), DiffForm::function(DiffPoly::one()));
        let w = DiffForm::zeta().wedge(&DiffForm::eta(1));
        assert_eq!(interior(&v, &w), DiffForm::eta(1));
    }

    #[test]
    fn mod_ideal_examples() {
        assert!(DiffForm::eta(0).wedge(&DiffForm::zeta()).mod_ideal().is_zero());
        let w = DiffForm::zeta()
            .mul_fn(&p("u0"))
            .add(&DiffForm::zeta_bar().mul_fn(&p("ub0")))
            .add(&DiffForm::eta(0).mul_fn(&p("z")));
        let expect = DiffForm::zeta().mul_fn(&p("u0")).add(&DiffForm::zeta_bar().mul_fn(&p("ub0")));
        assert_eq!(w.mod_ideal(), expect);
        let zz = DiffForm::zeta().wedge(&DiffForm::zeta_bar());
        assert_eq!(zz.mod_ideal(), zz);
    }

    #[test]
    fn render_forms() {
        let w = DiffForm::zeta().wedge(&DiffForm::eta(1)).mul_fn(&p("u0"));
        assert_eq!(w.render(Format::Text), "(u0)*zeta^eta1");
        assert_eq!(w.render(Format::Latex), "\\left(u_{0}\\right) \\zeta\\wedge\\eta_{1}");
        assert_eq!(
            w.render(Format::Json),
            r#"[{"word":["zeta","eta1"],"coeff":{"terms":[{"c":["1/1","0/1"],"m":{"u0":1}}]}}]"#
        );
    }

    fn coeff() -> impl Strategy<Value = DiffPoly> {
        let var = prop_oneof![
            Just(VarId::Z),
            Just(VarId::Zbar),
            Just(VarId::U),
            (0u32..3).prop_map(VarId::Uj),
            (0u32..3).prop_map(VarId::UjBar),
            (0i32..2).prop_map(VarId::FTower),
        ];
        let mono = prop::collection::vec((var, 1u32..3), 0..3).prop_map(Monomial::from_factors);
        let c = (-3i64..4, -2i64..3).prop_map(|(a, b)| GaussScalar::new(rat(a, 1), rat(b, 1)));
        prop::collection::vec((mono, c), 0..3).prop_map(DiffPoly::from_terms)
    }

    fn letter() -> impl Strategy<Value = BasisOneForm> {
        prop_oneof![
            Just(BasisOneForm::Zeta),
            Just(BasisOneForm::ZetaBar),
            (0u32..3).prop_map(BasisOneForm::Eta),
            (1u32..3).prop_map(BasisOneForm::EtaBar),
        ]
    }

    fn form(deg: usize) -> impl Strategy<Value = DiffForm> {
        prop::collection::vec((prop::collection::vec(letter(), deg), coeff()), 0..3).prop_map(move |ts| {
            ts.into_iter()
                .fold(DiffForm::zero(deg), |acc, (ls, c)| acc.add(&DiffForm::word(ls, c)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn d_squared_zero(w1 in form(1), w2 in form(2)) {
            let c = generic();
            prop_assert!(d_form(&d_form(&w1, &c), &c).is_zero());
            prop_assert!(d_form(&d_form(&w2, &c), &c).is_zero());
        }

        #[test]
        fn d_commutes_with_conjugation(w in form(1)) {
            let c = generic();
            prop_assert_eq!(d_form(&w.conjugate(), &c), d_form(&w, &c).conjugate());
        }

        #[test]
        fn leibniz(f in coeff(), w in form(1)) {
            let c = generic();
            let lhs = d_form(&w.mul_fn(&f), &c);
            let rhs = d_function(&f, &c).wedge(&w).add(&d_form(&w, &c).mul_fn(&f));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn interior_is_antiderivation(a in form(1), b in form(2), x in coeff(), y in coeff()) {
            let mut v = FrameVector::new();
            v.set(FrameTag::Eminus1, x);
            v.set(FrameTag::Ei(1), y);
            v.set(FrameTag::E0, DiffPoly::one());
            let lhs = interior(&v, &a.wedge(&b));
            let rhs = interior(&v, &a).wedge(&b).sub(&a.wedge(&interior(&v, &b)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
