//! The `verify` suite: module invariants up to a degree bound.

use jetlaws::conslaw::{build_phi, build_varphi, classify, solve_vd};
use jetlaws::forms::{d_form, BasisOneForm, DiffForm};
use jetlaws::numcheck::{energy_drift, linearized_residual, OdeSetup, Potential};
use jetlaws::operators::TCache;
use jetlaws::psrecursion::{ps_chain, verify_ps};
use jetlaws::symmetry::{lie_report, symmetry_from_generating};
use jetlaws::{parse_expr, DiffPoly, PotentialModel};
use serde_json::json;

use crate::Outcome;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        let c = Check { name: name.into(), pass, detail: detail.into() };
        log::info!("{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        self.checks.push(c);
    }
}

fn param(s: &str) -> DiffPoly {
    parse_expr(s).expect("literal parses")
}

/// Known dimensions of `V_d` for `f_uu = -f_u + 2 f`.
fn tzitzeica_dim(d: i64) -> Option<usize> {
    [1, 0, 0, 0, 1, 0, 1].get(d as usize - 1).copied()
}

fn generators(suite: &mut Suite, label: &str, model: &PotentialModel, max: i64, expected: impl Fn(i64) -> Option<usize>) {
    let cache = TCache::new(model.clone());
    for d in 1..=max {
        let s = solve_vd(d, model);
        match expected(d) {
            Some(e) => suite.record(format!("dim V_{d} ({label})"), s.dim == e, format!("dim {} expected {e}", s.dim)),
            None => suite.record(format!("dim V_{d} ({label})"), true, format!("dim {}", s.dim)),
        }
        for g in &s.kernel {
            let closed = build_phi(g, d, &cache).is_ok_and(|l| l.is_closed());
            suite.record(format!("law closed d={d} ({label})"), closed, g.to_string());
            let undiff = build_varphi(g, d, &cache).is_ok_and(|l| l.is_verified());
            suite.record(format!("primitive d={d} ({label})"), undiff, "");
            let lie = symmetry_from_generating(g, &cache, 5)
                .and_then(|v| lie_report(&v, 3, &cache))
                .is_ok_and(|rows| rows.iter().all(|r| r.vanishes()));
            suite.record(format!("symmetry d={d} ({label})"), lie, "Lie residual i <= 3");
        }
    }
}

pub fn run_suite(max_degree: i64) -> Outcome {
    let mut suite = Suite::default();
    let sg = PotentialModel::sinh_gordon(param("b"));
    generators(&mut suite, "f_uu = b f", &sg, max_degree, |d| Some((d % 2 == 1) as usize));
    generators(&mut suite, "f_uu = -f_u + 2 f", &PotentialModel::tzitzeica(DiffPoly::int(-1)), max_degree, tzitzeica_dim);
    generators(&mut suite, "generic", &PotentialModel::Generic, max_degree.min(6), |d| Some((d == 1) as usize));

    let n = ((max_degree + 1) / 2) as usize;
    let chain = ps_chain(n, &param("b"));
    for i in 1..=n {
        let ok = verify_ps(i, &chain).is_ok_and(|c| c.passed());
        suite.record(format!("recursion identities P_{i}"), ok, "");
        let d = 2 * i as i64 - 1;
        let same = solve_vd(d, &sg).kernel == vec![chain.p(i).clone()];
        suite.record(format!("recursion matches solver d={d}"), same, "");
    }

    for d in (3..=max_degree.min(7)).step_by(2) {
        let expected: Vec<DiffPoly> =
            if d == 3 { vec![param("l1")] } else { vec![param("l1"), param("l2 - 2*l1^2")] };
        match classify(d) {
            Ok(r) => {
                let got: Vec<DiffPoly> = r.conditions.iter().map(|c| c.poly.clone()).collect();
                let detail = got.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ");
                suite.record(format!("classify d={d}"), got == expected, detail);
            }
            Err(e) => suite.record(format!("classify d={d}"), false, e.to_string()),
        }
    }

    for model in [PotentialModel::Generic, PotentialModel::parametric()] {
        let cache = TCache::new(model.clone());
        let mut letters = vec![BasisOneForm::Zeta, BasisOneForm::ZetaBar, BasisOneForm::Eta(0)];
        for i in 1..=4 {
            letters.push(BasisOneForm::Eta(i));
            letters.push(BasisOneForm::EtaBar(i));
        }
        let ok = letters.into_iter().all(|l| d_form(&d_form(&DiffForm::letter(l), &cache), &cache).is_zero());
        suite.record(format!("d^2 = 0 on coframe ({model})"), ok, "");
    }

    let setup = OdeSetup { potential: Potential::Sinh, u0: 1.0, v0: 0.5, h: 0.02, steps: 50 };
    let hs = [2e-2, 1e-2, 5e-3];
    for g in chain.entries.iter().take(3) {
        let p = g.p.substitute(&jetlaws::VarId::param("b"), &DiffPoly::int(1));
        match linearized_residual(&p, &setup, &hs) {
            Ok((r, _)) => suite.record(format!("numeric linearization {p}"), r.orders_within(1.8, 2.2), format!("orders {:?}", r.orders)),
            Err(e) => suite.record(format!("numeric linearization {p}"), false, e.to_string()),
        }
    }
    match energy_drift(&setup, &[0.04, 0.02, 0.01]) {
        Ok(r) => suite.record("numeric energy drift", r.orders_within(3.5, 4.5), format!("orders {:?}", r.orders)),
        Err(e) => suite.record("numeric energy drift", false, e.to_string()),
    }

    let ok = suite.checks.iter().all(|c| c.pass);
    let json = json!({
        "max_degree": max_degree,
        "checks": suite.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        "pass": ok,
    });
    let text = suite
        .checks
        .iter()
        .map(|c| format!("{} {}{}", if c.pass { "PASS" } else { "FAIL" }, c.name, if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) }))
        .collect::<Vec<_>>()
        .join("\n");
    Outcome { json, latex: text.clone(), text, ok }
}
