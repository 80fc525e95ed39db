//! Recursive construction of the odd-degree generating functions when `f_uu = beta f`.
//!
//! Chain entry `i` (1-based) has weighted degree `2i - 1`, so entries 1, 2, 3, 4 are the
//! generators of degrees 1, 3, 5, 7.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jetring::{poly_to_json, DiffPoly, PotentialModel};
use crate::operators::TCache;
use crate::scalar::{rat, GaussScalar};

#[derive(Clone, PartialEq, Debug)]
pub struct PSEntry {
    pub p: DiffPoly,
    pub phi: DiffPoly,
}

#[derive(Clone, PartialEq, Debug)]
pub struct PSChain {
    pub beta: DiffPoly,
    pub entries: Vec<PSEntry>,
    /// `theta^{l,m}` for every pair used by the recursion.
    pub theta: BTreeMap<(usize, usize), DiffPoly>,
}

impl PSChain {
    /// `beta = 0` is outside the recursion's hypotheses; the chain then reduces to
    /// `P_i = (e_{-1})^{2(i-1)} u_0`.
    pub fn is_degenerate(&self) -> bool {
        self.beta.is_zero()
    }

    pub fn model(&self) -> PotentialModel {
        PotentialModel::sinh_gordon(self.beta.clone())
    }

    /// `P_i`, 1-based.
    pub fn p(&self, i: usize) -> &DiffPoly {
        &self.entries[i - 1].p
    }

    pub fn to_json(&self) -> Value {
        json!({
            "beta": poly_to_json(&self.beta),
            "degenerate": self.is_degenerate(),
            "entries": self.entries.iter().enumerate().map(|(k, e)| json!({
                "index": k + 1,
                "degree": 2 * k + 1,
                "P": poly_to_json(&e.p),
                "phi": poly_to_json(&e.phi),
            })).collect::<Vec<_>>(),
        })
    }
}

struct Builder<'a> {
    cache: &'a TCache,
    beta_quarter: DiffPoly,
    p: Vec<DiffPoly>,
    phi: Vec<DiffPoly>,
    theta: BTreeMap<(usize, usize), DiffPoly>,
}

impl Builder<'_> {
    fn theta(&mut self, l: usize, m: usize) -> DiffPoly {
        if let Some(t) = self.theta.get(&(l, m)) {
            return t.clone();
        }
        let e = |x: &DiffPoly| self.cache.e_minus1(x);
        let t = &(&(&self.p[l] * &self.p[m + 1]) - &(&e(&self.p[l]) * &e(&self.p[m])))
            + &(&self.beta_quarter * &(&self.phi[l] * &self.phi[m]));
        self.theta.insert((l, m), t.clone());
        t
    }

    fn phi(&mut self, i: usize) -> DiffPoly {
        let mut acc = if i % 2 == 1 {
            let l = i.div_ceil(2);
            self.p[l].pow(2)
        } else {
            let l = i / 2;
            &(&self.p[l + 1] * &self.p[l]) + &self.theta(l, l)
        };
        let l = if i % 2 == 1 { i.div_ceil(2) } else { i / 2 };
        for j in 1..l {
            acc = &acc + &self.theta(j, i - j).scale_int(2);
        }
        acc
    }
}

/// First `n` entries of the chain.
pub fn ps_chain(n: usize, beta: &DiffPoly) -> PSChain {
    let cache = TCache::new(PotentialModel::sinh_gordon(beta.clone()));
    let mut b = Builder {
        cache: &cache,
        beta_quarter: beta.scale(&GaussScalar::real(rat(1, 4))),
        // index 0 is a placeholder so that indices match the recursion
        p: vec![DiffPoly::zero(), DiffPoly::u(0)],
        phi: vec![DiffPoly::zero()],
        theta: BTreeMap::new(),
    };
    let half_beta_u0 = &beta.scale(&GaussScalar::real(rat(1, 2))) * &DiffPoly::u(0);
    for i in 1..=n {
        let phi = b.phi(i);
        b.phi.push(phi.clone());
        if i < n {
            let next = &cache.e_minus1_pow(&b.p[i], 2) - &(&half_beta_u0 * &phi);
            b.p.push(cache.model().reduce(&next));
        }
    }
    let entries = (1..=n)
        .map(|i| PSEntry { p: b.p[i].clone(), phi: b.phi[i].clone() })
        .collect();
    PSChain { beta: beta.clone(), entries, theta: b.theta }
}

/// Residuals of `e_{-1} phi = 2 u_0 e_{-1} P`, `ebar_{-1} phi = -2 f P` and
/// `ebar_{-1} e_{-1} P = -f_u P` for one entry.
#[derive(Clone, PartialEq, Debug)]
pub struct PSCheck {
    pub index: usize,
    pub e_phi: DiffPoly,
    pub ebar_phi: DiffPoly,
    pub ed: DiffPoly,
}

impl PSCheck {
    pub fn passed(&self) -> bool {
        self.e_phi.is_zero() && self.ebar_phi.is_zero() && self.ed.is_zero()
    }
}

pub fn verify_ps(i: usize, chain: &PSChain) -> Result<PSCheck> {
    if i == 0 || i > chain.entries.len() {
        return Err(Error::IndexOutOfRange { index: i, len: chain.entries.len() });
    }
    let cache = TCache::new(chain.model());
    let PSEntry { p, phi } = &chain.entries[i - 1];
    let e_p = cache.e_minus1(p);
    let e_phi = &cache.e_minus1(phi) - &(&DiffPoly::u(0) * &e_p).scale_int(2);
    let ebar_phi = &cache.e_minus1_bar(phi) + &(&DiffPoly::tower(0) * p).scale_int(2);
    let ed = &cache.e_minus1_bar(&e_p) + &(&DiffPoly::tower(1) * p);
    Ok(PSCheck { index: i, e_phi, ebar_phi, ed })
}
