//! Total derivatives `e_{-1}`, `ebar_{-1}` on the infinite prolongation, the family
//! `T^i = (e_{-1})^i f`, and the linearized operator `E(A) = ebar_{-1} e_{-1} A + f_u A`.

use std::sync::Mutex;

use crate::jetring::{DiffPoly, PotentialModel, VarId};

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Frame operators for one potential model, with a memo table for `T^i`.
#[derive(Debug)]
pub struct TCache {
    model: PotentialModel,
    table: Mutex<Vec<DiffPoly>>,
}

impl Clone for TCache {
    fn clone(&self) -> Self {
        TCache {
            model: self.model.clone(),
            table: Mutex::new(self.table.lock().unwrap().clone()),
        }
    }
}

impl TCache {
    pub fn new(model: PotentialModel) -> Self {
        TCache { model, table: Mutex::new(vec![DiffPoly::tower(0)]) }
    }

    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    /// `T^i`, computed by `T^{i+1} = sum_j C(i,j) u_{i-j} T^j_u` and reduced.
    pub fn t(&self, i: u32) -> DiffPoly {
        let mut table = self.table.lock().unwrap();
        while table.len() <= i as usize {
            let n = table.len() - 1;
            let mut next = DiffPoly::zero();
            for j in 0..=n {
                let c = binomial(n as u64, j as u64) as i64;
                let term = &DiffPoly::u((n - j) as u32) * &table[j].partial(&VarId::U);
                next = &next + &term.scale_int(c);
            }
            table.push(self.model.reduce(&next));
        }
        table[i as usize].clone()
    }

    pub fn t_bar(&self, i: u32) -> DiffPoly {
        self.t(i).conjugate()
    }

    fn e_raw(&self, p: &DiffPoly) -> DiffPoly {
        p.derive(|v| match v {
            VarId::Z => DiffPoly::one(),
            VarId::U => DiffPoly::u(0),
            VarId::FTower(n) => &DiffPoly::u(0) * &DiffPoly::tower(n + 1),
            VarId::Uj(n) => DiffPoly::u(n + 1),
            VarId::UjBar(n) => -self.t_bar(*n),
            VarId::Zbar | VarId::Param(_) => DiffPoly::zero(),
        })
    }

    fn ebar_raw(&self, p: &DiffPoly) -> DiffPoly {
        p.derive(|v| match v {
            VarId::Zbar => DiffPoly::one(),
            VarId::U => DiffPoly::ubar(0),
            VarId::FTower(n) => &DiffPoly::ubar(0) * &DiffPoly::tower(n + 1),
            VarId::UjBar(n) => DiffPoly::ubar(n + 1),
            VarId::Uj(n) => -self.t(*n),
            VarId::Z | VarId::Param(_) => DiffPoly::zero(),
        })
    }

    /// `e_{-1} = d/dz + u_0 d/du + sum u_{i+1} d/du_i - sum Tbar^i d/dubar_i`
    pub fn e_minus1(&self, p: &DiffPoly) -> DiffPoly {
        self.model.reduce(&self.e_raw(p))
    }

    /// Conjugate of `e_{-1}`.
    pub fn e_minus1_bar(&self, p: &DiffPoly) -> DiffPoly {
        self.model.reduce(&self.ebar_raw(p))
    }

    pub fn e_minus1_pow(&self, p: &DiffPoly, m: u32) -> DiffPoly {
        (0..m).fold(p.clone(), |acc, _| self.e_minus1(&acc))
    }

    pub fn e_minus1_bar_pow(&self, p: &DiffPoly, m: u32) -> DiffPoly {
        (0..m).fold(p.clone(), |acc, _| self.e_minus1_bar(&acc))
    }

    /// The linearized operator `E(A) = ebar_{-1} e_{-1} A + f_u A`.
    pub fn e_op(&self, p: &DiffPoly) -> DiffPoly {
        let ee = self.ebar_raw(&self.e_raw(p));
        self.model.reduce(&(&ee + &(&DiffPoly::tower(1) * p)))
    }
}

pub fn e_minus1(p: &DiffPoly, m: &PotentialModel) -> DiffPoly {
    TCache::new(m.clone()).e_minus1(p)
}

pub fn e_minus1_bar(p: &DiffPoly, m: &PotentialModel) -> DiffPoly {
    TCache::new(m.clone()).e_minus1_bar(p)
}

#[allow(non_snake_case)]
pub fn E_op(p: &DiffPoly, m: &PotentialModel) -> DiffPoly {
    TCache::new(m.clone()).e_op(p)
}
