//! Generating functions `V_d`, normal-form conservation laws and potential classification.

mod classify;
mod law;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::jetring::{poly_to_json, DiffPoly, Monomial, PotentialModel, VarId};
use crate::linalg::{canonical_span, echelon, Matrix};
use crate::operators::TCache;

pub use classify::{classify, ClassifyReport, Condition};
pub use law::{
    b_coeffs, build_phi, build_varphi, circle_vector, classical_laws, classical_phi0, contraction,
    explicit_contraction, NormalFormLaw,
    UndiffLaw,
};

/// Monomial ansatz for `V_d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VdBasis {
    pub degree: i64,
    pub monomials: Vec<Monomial>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VdSolution {
    pub degree: i64,
    pub model: PotentialModel,
    pub basis: VdBasis,
    pub kernel: Vec<DiffPoly>,
    pub dim: usize,
}

impl VdSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "dim": self.dim,
            "generators": self.kernel.iter().map(poly_to_json).collect::<Vec<_>>(),
        })
    }
}

fn partitions(n: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// All weighted-degree-`d` monomials in `u_0, ..., u_{d-1}`, one per partition of `d`,
/// in canonical order (so `u_{d-1}` comes first).
pub fn vd_basis(d: u32) -> VdBasis {
    let mut parts = Vec::new();
    partitions(d, d, &mut Vec::new(), &mut parts);
    let mut monomials: Vec<Monomial> = parts
        .into_iter()
        .map(|p| Monomial::from_factors(p.into_iter().map(|k| (VarId::Uj(k - 1), 1))))
        .collect();
    monomials.sort();
    VdBasis { degree: d as i64, monomials }
}

/// Weight-zero ansatz: `z^a zbar^b m` with `m` a monomial in only `u_j` or only
/// `ubar_j` of weighted degree `a - b`, and `a + b <= 3`.
fn v0_basis() -> VdBasis {
    let zpow = |a: u32, b: u32| {
        Monomial::from_factors([(VarId::Z, a), (VarId::Zbar, b)])
    };
    let mut monomials = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=(3 - a) {
            if a == b {
                monomials.push(zpow(a, b));
            } else if a > b {
                for m in vd_basis(a - b).monomials {
                    monomials.push(zpow(a, b).mul(&m));
                    monomials.push(zpow(a, b).mul(&m).conj());
                }
            }
        }
    }
    // lead with z*u0 so that q normalizes to z*u0 - zbar*ubar0
    let lead = Monomial::from_factors([(VarId::Z, 1), (VarId::Uj(0), 1)]);
    monomials.sort_by_key(|m| (m != &lead, m.clone()));
    VdBasis { degree: 0, monomials }
}

/// Coefficient matrix of a linear operator applied to a monomial ansatz: one row per
/// monomial in the non-parameter variables of the images.
pub(crate) fn coefficient_matrix(images: &[DiffPoly]) -> Matrix {
    let mut rows: BTreeMap<Monomial, Vec<DiffPoly>> = BTreeMap::new();
    for (k, img) in images.iter().enumerate() {
        for (outer, coeff) in img.collect_by(VarId::is_param) {
            rows.entry(outer)
                .or_insert_with(|| vec![DiffPoly::zero(); images.len()])[k] = coeff;
        }
    }
    rows.into_values().collect()
}

fn warm_cache(cache: &TCache, max_jet: u32) {
    let _ = cache.t(max_jet + 2);
}

/// Kernel of a linear operator on `basis`, in canonical normalized form. `order` lists
/// basis positions in the order used for normalization.
pub(crate) fn solve_linear<F>(basis: &[Monomial], order: &[usize], op: F) -> Vec<DiffPoly>
where
    F: Fn(&DiffPoly) -> DiffPoly + Sync,
{
    let images: Vec<DiffPoly> = basis
        .par_iter()
        .map(|m| op(&DiffPoly::term(crate::scalar::GaussScalar::one(), m.clone())))
        .collect();
    let matrix = coefficient_matrix(&images);
    let kernel = echelon(&matrix, basis.len()).kernel();
    canonical_span(&kernel, order)
        .into_iter()
        .map(|v| {
            basis
                .iter()
                .zip(v)
                .fold(DiffPoly::zero(), |acc, (m, c)| &acc + &c.mul_monomial(m))
        })
        .collect()
}

/// Solves `E(P) = 0` on the ansatz in the given monomial order.
pub fn solve_with_basis(degree: i64, basis: Vec<Monomial>, model: &PotentialModel) -> VdSolution {
    let cache = TCache::new(model.clone());
    let max_jet = degree.unsigned_abs() as u32 + 1;
    warm_cache(&cache, max_jet);
    let mut canonical: Vec<usize> = (0..basis.len()).collect();
    let reference = if degree == 0 { v0_basis().monomials } else { vd_basis(degree as u32).monomials };
    canonical.sort_by_key(|&k| reference.iter().position(|m| m == &basis[k]).unwrap_or(usize::MAX));
    let kernel = solve_linear(&basis, &canonical, |p| cache.e_op(p));
    let dim = kernel.len();
    VdSolution {
        degree,
        model: model.clone(),
        basis: VdBasis { degree, monomials: basis },
        kernel,
        dim,
    }
}

/// `V_d`: weighted-homogeneous solutions of `E(P) = 0`. Negative degrees are obtained
/// by conjugating `V_{-d}`.
pub fn solve_vd(d: i64, model: &PotentialModel) -> VdSolution {
    if d < 0 {
        let pos = solve_vd(-d, model);
        return VdSolution {
            degree: d,
            model: model.clone(),
            basis: VdBasis {
                degree: d,
                monomials: pos.basis.monomials.iter().map(Monomial::conj).collect(),
            },
            kernel: pos.kernel.iter().map(DiffPoly::conjugate).collect(),
            dim: pos.dim,
        };
    }
    let basis = if d == 0 { v0_basis().monomials } else { vd_basis(d as u32).monomials };
    solve_with_basis(d, basis, model)
}

/// Kernel of `ebar_{-1}` on weighted-degree-`d` polynomials in the `u_j`.
pub fn kernel_of_ebar(d: u32, model: &PotentialModel) -> Vec<DiffPoly> {
    let cache = TCache::new(model.clone());
    warm_cache(&cache, d);
    let basis = vd_basis(d).monomials;
    let order: Vec<usize> = (0..basis.len()).collect();
    solve_linear(&basis, &order, |p| cache.e_minus1_bar(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::{parse_expr, Wd};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn p(s: &str) -> DiffPoly {
        parse_expr(s).unwrap()
    }

    fn sg() -> PotentialModel {
        PotentialModel::sinh_gordon(p("b"))
    }

    #[test]
    fn basis_sizes_are_partition_numbers() {
        let b3 = vd_basis(3);
        assert_eq!(b3.monomials, vec![
            Monomial::var(VarId::Uj(2)),
            Monomial::from_factors([(VarId::Uj(1), 1), (VarId::Uj(0), 1)]),
            Monomial::pow(VarId::Uj(0), 3),
        ]);
        assert_eq!(vd_basis(1).monomials, vec![Monomial::var(VarId::Uj(0))]);
        let counts: Vec<usize> = (1..=9).map(|d| vd_basis(d).monomials.len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn solve_examples() {
        let s = solve_vd(3, &sg());
        assert_eq!(s.kernel, vec![p("u2 - (1/2)*b*u0^3")]);
        assert_eq!(solve_vd(2, &sg()).dim, 0);
        assert_eq!(solve_vd(3, &PotentialModel::Generic).dim, 0);
        let tz = PotentialModel::tzitzeica(p("-1"));
        assert_eq!(solve_vd(5, &tz).kernel, vec![p("u4 + 5*u2*u1 - 5*u2*u0^2 - 5*u1^2*u0 + u0^5")]);
        for model in [PotentialModel::Generic, sg(), tz] {
            assert_eq!(solve_vd(0, &model).kernel, vec![p("z*u0 - zb*ub0")]);
        }
    }

    #[test]
    fn negative_degree_by_conjugation() {
        let s = solve_vd(-3, &sg());
        assert_eq!(s.kernel, vec![p("ub2 - (1/2)*b*ub0^3")]);
        let cache = TCache::new(sg());
        assert!(cache.e_op(&s.kernel[0]).is_zero());
    }

    #[test]
    fn kernel_elements_are_mixed_free_solutions() {
        let cache = TCache::new(sg());
        for d in 1..=7 {
            for g in solve_vd(d, &sg()).kernel {
                assert!(cache.e_op(&g).is_zero());
                assert!(g.partial(&VarId::U).is_zero());
                assert!(!g.any_var(|v| matches!(v, VarId::UjBar(_))));
                assert_eq!(g.weighted_degree(), Wd::Homogeneous(d));
            }
        }
    }

    #[test]
    fn solution_is_independent_of_basis_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in [3, 4, 5] {
            let reference = solve_vd(d, &sg());
            let mut basis = vd_basis(d as u32).monomials;
            basis.shuffle(&mut rng);
            let shuffled = solve_with_basis(d, basis, &sg());
            assert_eq!(shuffled.kernel, reference.kernel);
        }
    }

    #[test]
    fn ebar_kernel_is_trivial() {
        for d in 1..=5 {
            assert!(kernel_of_ebar(d, &PotentialModel::Generic).is_empty(), "d={d}");
            assert!(kernel_of_ebar(d, &sg()).is_empty(), "d={d}");
        }
    }
}
