//! Differential polynomials on the infinite jet space of `u_{z zbar} = -f(u)`.

mod monomial;
mod parse;
mod render;
mod var;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::scalar::{GaussScalar, Rational};

pub use monomial::Monomial;
pub use parse::{parse_constant, parse_expr};
pub use render::{poly_from_json, poly_to_json, render, Format};
pub use var::VarId;

/// Result of asking for the weighted degree of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Wd {
    /// The zero polynomial, homogeneous of every degree.
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

impl Wd {
    pub fn matches(self, d: i64) -> bool {
        match self {
            Wd::Zero => true,
            Wd::Homogeneous(e) => e == d,
            Wd::Inhomogeneous => false,
        }
    }
}

impl fmt::Display for Wd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wd::Zero => f.write_str("any"),
            Wd::Homogeneous(d) => write!(f, "{d}"),
            Wd::Inhomogeneous => f.write_str("inhomogeneous"),
        }
    }
}

/// Sparse polynomial with Gaussian rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, GaussScalar>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(GaussScalar::one())
    }

    pub fn constant(c: GaussScalar) -> Self {
        DiffPoly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        DiffPoly::constant(GaussScalar::from_int(n))
    }

    pub fn rational(r: Rational) -> Self {
        DiffPoly::constant(GaussScalar::real(r))
    }

    pub fn i() -> Self {
        DiffPoly::constant(GaussScalar::i())
    }

    pub fn var(v: VarId) -> Self {
        DiffPoly::term(GaussScalar::one(), Monomial::var(v))
    }

    pub fn param(name: &str) -> Self {
        DiffPoly::var(VarId::param(name))
    }

    /// `u_n`
    pub fn u(n: u32) -> Self {
        DiffPoly::var(VarId::Uj(n))
    }

    /// `ubar_n`
    pub fn ubar(n: u32) -> Self {
        DiffPoly::var(VarId::UjBar(n))
    }

    /// `f^(n)(u)`
    pub fn tower(n: i32) -> Self {
        DiffPoly::var(VarId::FTower(n))
    }

    pub fn term(c: GaussScalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussScalar)>>(it: I) -> Self {
        let mut p = DiffPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &DiffPoly, c: &GaussScalar) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), &(a * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<GaussScalar> {
        match self.terms.len() {
            0 => Some(GaussScalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussScalar) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> DiffPoly {
        self.scale(&GaussScalar::from_int(n))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn conjugate(&self) -> DiffPoly {
        DiffPoly::from_terms(self.terms.iter().map(|(m, c)| (m.conj(), c.conj())))
    }

    pub fn weighted_degree(&self) -> Wd {
        let mut it = self.terms.keys().map(Monomial::wd);
        match it.next() {
            None => Wd::Zero,
            Some(d) => {
                if it.all(|e| e == d) {
                    Wd::Homogeneous(d)
                } else {
                    Wd::Inhomogeneous
                }
            }
        }
    }

    /// Keeps only the terms of weighted degree `d`.
    pub fn wd_part(&self, d: i64) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.wd() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative treating every variable, tower symbols included, as independent.
    pub fn formal_partial(&self, v: &VarId) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::pow(v.clone(), e - 1));
            out.add_term(m2, &c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// Partial derivative. With respect to `U` the tower symbols are functions of `u`,
    /// so `f^(n)` contributes `f^(n+1)` by the chain rule.
    pub fn partial(&self, v: &VarId) -> DiffPoly {
        let mut out = self.formal_partial(v);
        if *v == VarId::U {
            for n in self.tower_indices() {
                let dn = self.formal_partial(&VarId::FTower(n));
                out = &out + &dn.mul_monomial(&Monomial::var(VarId::FTower(n + 1)));
            }
        }
        out
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    pub fn contains_var(&self, v: &VarId) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn any_var<F: Fn(&VarId) -> bool>(&self, pred: F) -> bool {
        self.terms.keys().any(|m| m.vars().any(&pred))
    }

    fn tower_indices(&self) -> BTreeSet<i32> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                VarId::FTower(n) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Substitutes `v := value` everywhere.
    pub fn substitute(&self, v: &VarId, value: &DiffPoly) -> DiffPoly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let mut powers: Vec<DiffPoly> = vec![DiffPoly::one()];
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            out.add_scaled(&powers[e as usize].mul_monomial(&rest), c);
        }
        out
    }

    /// Groups terms by the factors *not* satisfying `pred`, returning for each such
    /// monomial the polynomial formed by the matching factors.
    pub fn collect_by<F: Fn(&VarId) -> bool>(&self, pred: F) -> BTreeMap<Monomial, DiffPoly> {
        let mut out: BTreeMap<Monomial, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inner, outer) = m.split(&pred);
            out.entry(outer).or_default().add_term(inner, c);
        }
        out
    }

    /// Applies a derivation given by its values on variables.
    pub fn derive<F: FnMut(&VarId) -> DiffPoly>(&self, mut dvar: F) -> DiffPoly {
        let mut cache: BTreeMap<VarId, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, _) in m.factors() {
                let dv = cache.entry(v.clone()).or_insert_with(|| dvar(v));
                if dv.is_zero() {
                    continue;
                }
                let (rest, e) = m.without(v);
                let rest = rest.mul(&Monomial::pow(v.clone(), e - 1));
                let coef = c.scale(&Rational::from_integer(e.into()));
                out.add_scaled(&dv.mul_monomial(&rest), &coef);
            }
        }
        out
    }

    /// Evaluates with a numeric assignment of every variable.
    pub fn eval<F: Fn(&VarId) -> f64>(&self, value: F) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (m, c) in &self.terms {
            let mut x = 1.0;
            for (v, e) in m.factors() {
                x *= value(v).powi(*e as i32);
            }
            let (cr, ci) = c.to_f64();
            re += cr * x;
            im += ci * x;
        }
        (re, im)
    }

    /// Leading term under the admissible graded order used for division.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussScalar)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.admissible_cmp(b.0))
    }

    /// Exact division: `Some(q)` with `self = q * other`, or `None` if `other` does not divide.
    pub fn div_exact(&self, other: &DiffPoly) -> Option<DiffPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(DiffPoly::zero());
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let (lm, lc) = other.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = DiffPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let t = m.div(lm)?;
            let k = c * &lc_inv;
            rem.add_scaled(&other.mul_monomial(&t), &(-&k));
            q.add_term(t, &k);
        }
        Some(q)
    }

    pub fn reduce(&self, model: &PotentialModel) -> DiffPoly {
        model.reduce(self)
    }

    /// Highest `n` with `u_n` or `ubar_n` present.
    pub fn max_jet_order(&self) -> Option<u32> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                VarId::Uj(n) | VarId::UjBar(n) => Some(n),
                _ => None,
            })
            .max()
    }
}

impl From<VarId> for DiffPoly {
    fn from(v: VarId) -> Self {
        DiffPoly::var(v)
    }
}

impl From<GaussScalar> for DiffPoly {
    fn from(c: GaussScalar) -> Self {
        DiffPoly::constant(c)
    }
}

impl From<i64> for DiffPoly {
    fn from(n: i64) -> Self {
        DiffPoly::int(n)
    }
}

impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $f(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $f(self, rhs: &DiffPoly) -> DiffPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<DiffPoly> for &'a DiffPoly {
            type Output = DiffPoly;
            fn $f(self, rhs: DiffPoly) -> DiffPoly {
                self.$f(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Format::Text))
    }
}

/// How derivatives `f^(n)`, `n >= 2`, are rewritten.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PotentialModel {
    /// No relation: the whole tower is kept.
    Generic,
    /// `f_uu = l1 f_u + l2 f`, with `l1`, `l2` polynomials in parameters only.
    Rule { l1: DiffPoly, l2: DiffPoly },
}

impl PotentialModel {
    /// `f_uu = beta f`.
    pub fn sinh_gordon(beta: DiffPoly) -> Self {
        PotentialModel::Rule { l1: DiffPoly::zero(), l2: beta }
    }

    /// `f_uu = alpha f_u + 2 alpha^2 f`.
    pub fn tzitzeica(alpha: DiffPoly) -> Self {
        let l2 = alpha.pow(2).scale_int(2);
        PotentialModel::Rule { l1: alpha, l2 }
    }

    /// `f_uu = l1 f_u + l2 f` with symbolic `l1`, `l2`.
    pub fn parametric() -> Self {
        PotentialModel::Rule { l1: DiffPoly::param("l1"), l2: DiffPoly::param("l2") }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, PotentialModel::Generic)
    }

    /// Coefficients `(a_n, b_n)` with `f^(n) = a_n f_u + b_n f` for `0 <= n <= max`.
    pub fn tower_coefficients(&self, max: i32) -> Vec<(DiffPoly, DiffPoly)> {
        let PotentialModel::Rule { l1, l2 } = self else {
            return Vec::new();
        };
        let mut out = vec![(DiffPoly::zero(), DiffPoly::one()), (DiffPoly::one(), DiffPoly::zero())];
        for n in 2..=max.max(1) as usize {
            let a = &(l1 * &out[n - 1].0) + &(l2 * &out[n - 2].0);
            let b = &(l1 * &out[n - 1].1) + &(l2 * &out[n - 2].1);
            out.push((a, b));
        }
        out
    }

    pub fn reduce(&self, p: &DiffPoly) -> DiffPoly {
        if self.is_generic() {
            return p.clone();
        }
        let top = p
            .tower_indices()
            .into_iter()
            .max()
            .unwrap_or(0);
        if top < 2 {
            return p.clone();
        }
        let coeffs = self.tower_coefficients(top);
        let mut out = p.clone();
        for n in 2..=top {
            let v = VarId::FTower(n);
            if !out.contains_var(&v) {
                continue;
            }
            let (a, b) = &coeffs[n as usize];
            let value = &(a * &DiffPoly::tower(1)) + &(b * &DiffPoly::tower(0));
            out = out.substitute(&v, &value);
        }
        out
    }
}

impl fmt::Display for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialModel::Generic => f.write_str("generic"),
            PotentialModel::Rule { l1, l2 } => {
                if l1.is_zero() {
                    write!(f, "fuu=({l2})*f")
                } else {
                    write!(f, "fuu=({l1})*fu+({l2})*f")
                }
            }
        }
    }
}
