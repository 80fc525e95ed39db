//! Floating-point checks along x-only solutions of `u'' = -4 f(u)`.
//!
//! For `u` independent of `y` we have `d/dz = d/dzbar = (1/2) d/dx`, so the jet
//! coordinates become `u_j = ubar_j = 2^-(j+1) u^(j+1)`.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jetring::{DiffPoly, PotentialModel, VarId};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Potential {
    /// `f = sinh u`, so `f_uu = f`.
    Sinh,
    /// `f = e^u - e^(-2u)`, so `f_uu = -f_u + 2 f`.
    ExpPair,
}

impl Potential {
    pub fn name(self) -> &'static str {
        match self {
            Potential::Sinh => "sinh",
            Potential::ExpPair => "exp-pair",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sinh" => Some(Potential::Sinh),
            "exp-pair" | "tzitzeica" => Some(Potential::ExpPair),
            _ => None,
        }
    }

    /// Symbolic rule satisfied by this potential.
    pub fn model(self) -> PotentialModel {
        match self {
            Potential::Sinh => PotentialModel::sinh_gordon(DiffPoly::int(1)),
            Potential::ExpPair => PotentialModel::tzitzeica(DiffPoly::int(-1)),
        }
    }

    /// `f^(n)(u)`; `n = -1` is the antiderivative used in the energy.
    pub fn deriv(self, n: i32, u: f64) -> f64 {
        match self {
            Potential::Sinh if n.rem_euclid(2) == 0 => u.sinh(),
            Potential::Sinh => u.cosh(),
            Potential::ExpPair => u.exp() - (-2f64).powi(n) * (-2.0 * u).exp(),
        }
    }

    pub fn energy(self, u: f64, v: f64) -> f64 {
        0.5 * v * v + 4.0 * self.deriv(-1, u)
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct OdeSetup {
    pub potential: Potential,
    pub u0: f64,
    pub v0: f64,
    pub h: f64,
    pub steps: usize,
}

impl OdeSetup {
    pub fn length(&self) -> f64 {
        self.h * self.steps as f64
    }

    /// Same problem on `[0, length]` with step `h`.
    pub fn with_step(&self, h: f64) -> OdeSetup {
        let steps = (self.length() / h).round() as usize;
        OdeSetup { h, steps, ..*self }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Trajectory {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Classical fixed-step RK4 for `(u, u')`.
pub fn integrate(setup: &OdeSetup) -> Result<Trajectory> {
    if !(setup.h > 0.0) || setup.steps < 2 {
        return Err(Error::BadSetup(format!("need h > 0 and at least 2 steps, got h={} steps={}", setup.h, setup.steps)));
    }
    let pot = setup.potential;
    let rhs = |u: f64, v: f64| (v, -4.0 * pot.deriv(0, u));
    let h = setup.h;
    let n = setup.steps;
    let mut tr = Trajectory { x: Vec::with_capacity(n + 1), u: Vec::with_capacity(n + 1), v: Vec::with_capacity(n + 1) };
    let (mut u, mut v) = (setup.u0, setup.v0);
    for step in 0..=n {
        let x = step as f64 * h;
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::Diverged { step, x });
        }
        tr.x.push(x);
        tr.u.push(u);
        tr.v.push(v);
        if step == n {
            break;
        }
        let k1 = rhs(u, v);
        let k2 = rhs(u + 0.5 * h * k1.0, v + 0.5 * h * k1.1);
        let k3 = rhs(u + 0.5 * h * k2.0, v + 0.5 * h * k2.1);
        let k4 = rhs(u + h * k3.0, v + h * k3.1);
        u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    Ok(tr)
}

/// `u^(n)` for `n >= 1` as polynomials in `u`, `u'` and the derivatives of `f`,
/// obtained by differentiating along the flow.
#[derive(Clone, Debug)]
pub struct JetSampler {
    derivs: Vec<DiffPoly>,
}

fn du() -> VarId {
    VarId::param("du")
}

impl JetSampler {
    /// Table good for `u_0 .. u_{max_order}`.
    pub fn new(max_order: u32) -> Self {
        let flow = |v: &VarId| match v {
            VarId::U => DiffPoly::var(du()),
            VarId::FTower(k) => &DiffPoly::tower(k + 1) * &DiffPoly::var(du()),
            v if *v == du() => DiffPoly::tower(0).scale_int(-4),
            _ => DiffPoly::zero(),
        };
        let mut derivs = vec![DiffPoly::var(du())];
        for _ in 0..max_order {
            let next = derivs.last().unwrap().derive(flow);
            derivs.push(next);
        }
        JetSampler { derivs }
    }

    pub fn max_order(&self) -> u32 {
        self.derivs.len() as u32 - 1
    }

    /// `u^(n)` for `1 <= n <= max_order + 1`.
    pub fn derivative(&self, n: usize) -> &DiffPoly {
        &self.derivs[n - 1]
    }

    /// `[u_0, .., u_max]` at the state `(u, u')`.
    pub fn jets(&self, pot: Potential, u: f64, v: f64) -> Vec<f64> {
        let val = |var: &VarId| match var {
            VarId::U => u,
            VarId::FTower(k) => pot.deriv(*k, u),
            _ => v,
        };
        self.derivs
            .iter()
            .enumerate()
            .map(|(j, d)| d.eval(val).0 * 0.5f64.powi(j as i32 + 1))
            .collect()
    }
}

fn check_numeric(p: &DiffPoly) -> Result<()> {
    if p.any_var(|v| matches!(v, VarId::Z | VarId::Zbar)) {
        return Err(Error::ExplicitZ);
    }
    if p.any_var(|v| v.is_param()) {
        return Err(Error::BadSetup(format!("generator has free parameters: {p}")));
    }
    Ok(())
}

/// Real part of `P + conj P` at a jet point.
fn eval_real(a: &DiffPoly, pot: Potential, u: f64, jets: &[f64]) -> f64 {
    a.eval(|v| match v {
        VarId::U => u,
        VarId::FTower(k) => pot.deriv(*k, u),
        VarId::Uj(j) | VarId::UjBar(j) => jets[*j as usize],
        _ => unreachable!("checked before evaluation"),
    })
    .0
}

fn observed_orders(hs: &[f64], errs: &[f64]) -> Vec<Option<f64>> {
    hs.windows(2)
        .zip(errs.windows(2))
        .map(|(h, e)| {
            if e[0] > 0.0 && e[1] > 0.0 && e[0] > 1e-13 {
                Some((e[0] / e[1]).ln() / (h[0] / h[1]).ln())
            } else {
                None
            }
        })
        .collect()
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConvergenceReport {
    pub hs: Vec<f64>,
    pub errors: Vec<f64>,
    /// Order between consecutive step sizes; `None` when the error is at rounding level.
    pub orders: Vec<Option<f64>>,
}

impl ConvergenceReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().cloned().fold(0.0, f64::max)
    }

    /// True when every measured order lies in `[lo, hi]`.
    pub fn orders_within(&self, lo: f64, hi: f64) -> bool {
        self.orders.iter().all(|o| o.is_some_and(|o| (lo..=hi).contains(&o)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.hs.iter().zip(&self.errors).map(|(h, e)| json!({"h": h, "error": e})).collect::<Vec<_>>(),
            "orders": self.orders,
            "max_error": self.max_error(),
        })
    }
}

/// Samples of `a = P + conj P` and of the residual on the finest grid.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ResidualSamples {
    pub rows: Vec<(f64, f64, f64, f64, f64)>,
}

impl ResidualSamples {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,u,du,a,residual\n");
        for (x, u, v, a, r) in &self.rows {
            let _ = writeln!(s, "{x},{u},{v},{a},{r}");
        }
        s
    }
}

const SAMPLE_FRACTIONS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Max over fixed sample points of `|D_h^2 a + 4 f_u(u) a|`, for each step size.
pub fn linearized_residual(p: &DiffPoly, setup: &OdeSetup, hs: &[f64]) -> Result<(ConvergenceReport, ResidualSamples)> {
    check_numeric(p)?;
    let a = p + &p.conjugate();
    let order = a.max_jet_order().unwrap_or(0).max(0) as u32;
    let sampler = JetSampler::new(order);
    let pot = setup.potential;
    let mut errors = Vec::with_capacity(hs.len());
    let mut samples = ResidualSamples::default();
    for &h in hs {
        let s = setup.with_step(h);
        let tr = integrate(&s)?;
        let av: Vec<f64> = (0..tr.x.len())
            .map(|n| eval_real(&a, pot, tr.u[n], &sampler.jets(pot, tr.u[n], tr.v[n])))
            .collect();
        samples.rows.clear();
        let mut worst: f64 = 0.0;
        for frac in SAMPLE_FRACTIONS {
            let n = (frac * s.steps as f64).round() as usize;
            let n = n.clamp(1, s.steps - 1);
            let d2 = (av[n + 1] - 2.0 * av[n] + av[n - 1]) / (h * h);
            let r = d2 + 4.0 * pot.deriv(1, tr.u[n]) * av[n];
            worst = worst.max(r.abs());
            samples.rows.push((tr.x[n], tr.u[n], tr.v[n], av[n], r));
        }
        errors.push(worst);
    }
    let orders = observed_orders(hs, &errors);
    Ok((ConvergenceReport { hs: hs.to_vec(), errors, orders }, samples))
}

/// Max drift of `(1/2) u'^2 + 4 F(u)` over the run, for each step size.
pub fn energy_drift(setup: &OdeSetup, hs: &[f64]) -> Result<ConvergenceReport> {
    let pot = setup.potential;
    let mut errors = Vec::with_capacity(hs.len());
    for &h in hs {
        let tr = integrate(&setup.with_step(h))?;
        let e0 = pot.energy(tr.u[0], tr.v[0]);
        let drift = tr.u.iter().zip(&tr.v).map(|(u, v)| (pot.energy(*u, *v) - e0).abs()).fold(0.0, f64::max);
        errors.push(drift);
    }
    let orders = observed_orders(hs, &errors);
    Ok(ConvergenceReport { hs: hs.to_vec(), errors, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conslaw::solve_vd;
    use crate::jetring::parse_expr;
    use crate::psrecursion::ps_chain;

    fn setup(pot: Potential) -> OdeSetup {
        OdeSetup { potential: pot, u0: 1.0, v0: 0.5, h: 0.01, steps: 100 }
    }

    #[test]
    fn derivatives_are_consistent() {
        for pot in [Potential::Sinh, Potential::ExpPair] {
            for u in [-0.7, 0.0, 0.3, 1.2] {
                for n in -1..4 {
                    let h = 1e-5;
                    let fd = (pot.deriv(n, u + h) - pot.deriv(n, u - h)) / (2.0 * h);
                    assert!((fd - pot.deriv(n + 1, u)).abs() < 1e-8, "{pot:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn equilibrium_stays_put() {
        let tr = integrate(&OdeSetup { potential: Potential::Sinh, u0: 0.0, v0: 0.0, h: 0.1, steps: 10 }).unwrap();
        assert!(tr.u.iter().chain(&tr.v).all(|x| *x == 0.0));
        let (r, _) = linearized_residual(&ps_chain(2, &DiffPoly::int(1)).p(2).clone(), &OdeSetup { u0: 0.0, v0: 0.0, ..setup(Potential::Sinh) }, &[0.02, 0.01]).unwrap();
        assert!(r.max_error() < 1e-14);
    }

    #[test]
    fn energy_is_conserved() {
        let s = OdeSetup { potential: Potential::Sinh, u0: 1.0, v0: 0.5, h: 1e-3, steps: 1000 };
        let r = energy_drift(&s, &[1e-3]).unwrap();
        assert!(r.errors[0] < 1e-10, "{r:?}");
        let r = energy_drift(&s, &[0.04, 0.02, 0.01]).unwrap();
        assert!(r.orders_within(3.5, 4.5), "{r:?}");
    }

    #[test]
    fn divergence_is_reported() {
        let s = OdeSetup { potential: Potential::Sinh, u0: 30.0, v0: 0.0, h: 0.5, steps: 50 };
        assert!(matches!(integrate(&s), Err(Error::Diverged { .. })));
        assert!(matches!(integrate(&OdeSetup { steps: 1, ..s }), Err(Error::BadSetup(_))));
    }

    #[test]
    fn closure_table_matches_hand_derivatives() {
        // u''' = -4 f_u u', u'''' = -4 f_uu u'^2 + 16 f_u f
        let s = JetSampler::new(3);
        for pot in [Potential::Sinh, Potential::ExpPair] {
            let (u, v) = (0.4, -1.3);
            let j = s.jets(pot, u, v);
            let d3 = -4.0 * pot.deriv(1, u) * v;
            let d4 = -4.0 * pot.deriv(2, u) * v * v + 16.0 * pot.deriv(1, u) * pot.deriv(0, u);
            assert!((j[0] - v / 2.0).abs() < 1e-15);
            assert!((j[1] + pot.deriv(0, u)).abs() < 1e-14);
            assert!((j[2] - d3 / 8.0).abs() < 1e-13);
            assert!((j[3] - d4 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let sampler = JetSampler::new(1);
        let mut errs = Vec::new();
        for h in [0.02, 0.01] {
            let tr = integrate(&setup(Potential::Sinh).with_step(h)).unwrap();
            let n = tr.x.len() / 2;
            let j = sampler.jets(Potential::Sinh, tr.u[n], tr.v[n]);
            let u0 = (tr.u[n + 1] - tr.u[n - 1]) / (2.0 * h) / 2.0;
            let u1 = (tr.u[n + 1] - 2.0 * tr.u[n] + tr.u[n - 1]) / (h * h) / 4.0;
            errs.push(((j[0] - u0).abs(), (j[1] - u1).abs()));
        }
        for k in 0..2 {
            let pick = |e: &(f64, f64)| if k == 0 { e.0 } else { e.1 };
            let ratio = pick(&errs[0]) / pick(&errs[1]);
            assert!((3.2..4.8).contains(&ratio), "component {k}: {errs:?}");
        }
    }

    #[test]
    fn generators_satisfy_linearization() {
        let hs = [2e-2, 1e-2, 5e-3];
        let chain = ps_chain(3, &DiffPoly::int(1));
        for i in 1..=3 {
            let (r, _) = linearized_residual(chain.p(i), &setup(Potential::Sinh), &hs).unwrap();
            assert!(r.orders_within(1.8, 2.2), "P_{i}: {r:?}");
        }
        let v5 = solve_vd(5, &Potential::ExpPair.model()).kernel.remove(0);
        let (r, _) = linearized_residual(&v5, &setup(Potential::ExpPair), &hs).unwrap();
        assert!(r.orders_within(1.8, 2.2), "{r:?}");
    }

    #[test]
    fn non_solution_does_not_converge() {
        let (r, _) = linearized_residual(&parse_expr("u1").unwrap(), &setup(Potential::Sinh), &[2e-2, 1e-2, 5e-3]).unwrap();
        assert!(r.errors[2] > 1e-2, "{r:?}");
    }

    #[test]
    fn rejects_symbolic_input() {
        let s = setup(Potential::Sinh);
        assert!(matches!(linearized_residual(&parse_expr("z*u0").unwrap(), &s, &[0.01]), Err(Error::ExplicitZ)));
        assert!(matches!(linearized_residual(&parse_expr("b*u0").unwrap(), &s, &[0.01]), Err(Error::BadSetup(_))));
    }
}
