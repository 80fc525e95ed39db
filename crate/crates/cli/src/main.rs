//! `jetlaws` command-line tool.

mod model;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use jetlaws::conslaw::{build_phi, build_varphi, classify, solve_vd};
use jetlaws::forms::form_to_json;
use jetlaws::jetring::poly_to_json;
use jetlaws::numcheck::{energy_drift, linearized_residual, OdeSetup, Potential};
use jetlaws::operators::TCache;
use jetlaws::psrecursion::{ps_chain, verify_ps};
use jetlaws::symmetry::{lie_report, symmetry_unchecked};
use jetlaws::{render, DiffPoly, Format};
use serde_json::{json, Value};

use model::{parse_model, parse_poly};

/// Bad command-line input; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "jetlaws", version, about = "Conservation laws of u_{z zbar} = -f(u)")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Plain-text output instead of json.
    #[arg(long, global = true, conflicts_with = "latex")]
    text: bool,
    /// LaTeX output instead of json.
    #[arg(long, global = true)]
    latex: bool,
    /// Write the result to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.text {
            Format::Text
        } else if self.latex {
            Format::Latex
        } else {
            Format::Json
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generating functions of weighted degree d.
    SolveVd {
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long, default_value = "generic")]
        model: String,
    },
    /// Normal-form conservation law of a generating function.
    BuildLaw {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long, default_value = "generic")]
        model: String,
        /// Also build the undifferentiated 1-form.
        #[arg(long)]
        undiff: bool,
    },
    /// Recursive chain of generators for f_uu = beta f.
    PsChain {
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, default_value = "b")]
        beta: String,
    },
    /// Conditions on (l1, l2) in f_uu = l1 f_u + l2 f allowing a law of degree d.
    Classify {
        #[arg(long)]
        degree: i64,
    },
    /// Lie-derivative residuals of the symmetry generated by g.
    SymmetryCheck {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "generic")]
        model: String,
        /// Largest eta index checked.
        #[arg(long, default_value_t = 3)]
        max_index: u32,
    },
    /// Numeric check of a generator along x-only solutions.
    Numcheck {
        #[arg(long, default_value = "sinh")]
        potential: String,
        #[arg(long, default_value_t = 3)]
        degree: i64,
        /// Step sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.02,0.01,0.005")]
        h: Vec<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        u0: f64,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        du0: f64,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        /// Write residual samples for the finest step to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, env = "JETLAWS_MAX_DEGREE", default_value_t = 7)]
        max_degree: i64,
    },
    /// Parse and re-render a polynomial, optionally reduced under a model.
    Render {
        expr: String,
        #[arg(long)]
        model: Option<String>,
    },
}

/// Result of one command.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub latex: String,
    pub ok: bool,
}

impl Outcome {
    fn poly_lines(json: Value, polys: &[DiffPoly], ok: bool) -> Self {
        let join = |f: Format| polys.iter().map(|p| render(p, f)).collect::<Vec<_>>().join("\n");
        Outcome { json, text: join(Format::Text), latex: join(Format::Latex), ok }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::SolveVd { degree, model } => {
            let m = parse_model(&model)?;
            let s = solve_vd(degree, &m);
            log::info!("degree {degree}: basis {} monomials, dim {}", s.basis.monomials.len(), s.dim);
            Ok(Outcome::poly_lines(s.to_json(), &s.kernel, true))
        }
        Command::BuildLaw { poly, degree, model, undiff } => {
            let m = parse_model(&model)?;
            let p = parse_poly(&poly)?;
            let cache = TCache::new(m);
            let law = build_phi(&p, degree.abs(), &cache).or_else(|e| {
                if degree < 0 {
                    build_phi(&p.conjugate(), -degree, &cache)
                } else {
                    Err(e)
                }
            })?;
            let mut json = law.to_json();
            json["Phi"] = form_to_json(&law.phi);
            let mut ok = law.is_closed();
            let mut text = format!("Phi = {}\nclosed: {}", law.phi.render(Format::Text), law.is_closed());
            let mut latex = format!("\\Phi = {}", law.phi.render(Format::Latex));
            if undiff {
                let u = build_varphi(&p, degree, &cache)?;
                ok &= u.is_verified();
                json["undifferentiated"] = u.to_json();
                text.push_str(&format!("\nvarphi = {}\nverified: {}", u.varphi.render(Format::Text), u.is_verified()));
                latex.push_str(&format!("\n\\varphi = {}", u.varphi.render(Format::Latex)));
            }
            Ok(Outcome { json, text, latex, ok })
        }
        Command::PsChain { count, beta } => {
            if count == 0 {
                return Err(UsageError("--count must be at least 1".into()).into());
            }
            let beta = parse_poly(&beta)?;
            if beta.any_var(|v| !v.is_param()) {
                return Err(UsageError("--beta must be a constant or parameter expression".into()).into());
            }
            let chain = ps_chain(count, &beta);
            if chain.is_degenerate() {
                log::warn!("beta = 0: the chain degenerates to iterated e_{{-1}} of u0");
            }
            let checks = (1..=count).map(|i| verify_ps(i, &chain)).collect::<Result<Vec<_>, _>>()?;
            let ok = checks.iter().all(|c| c.passed());
            let mut json = chain.to_json();
            json["identities_hold"] = json!(ok);
            let polys: Vec<DiffPoly> = chain.entries.iter().map(|e| e.p.clone()).collect();
            Ok(Outcome::poly_lines(json, &polys, ok))
        }
        Command::Classify { degree } => {
            let r = classify(degree)?;
            let polys: Vec<DiffPoly> = r.conditions.iter().map(|c| c.poly.clone()).collect();
            Ok(Outcome::poly_lines(r.to_json(), &polys, true))
        }
        Command::SymmetryCheck { poly, model, max_index } => {
            let m = parse_model(&model)?;
            let g = parse_poly(&poly)?;
            let cache = TCache::new(m);
            let v = symmetry_unchecked(&g, &cache, max_index + 2);
            let rows = lie_report(&v, max_index, &cache)?;
            let ok = rows.iter().all(|r| r.vanishes());
            let json = json!({
                "g": poly_to_json(&g),
                "linearized": poly_to_json(&cache.e_op(&g)),
                "residuals": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "pass": ok,
            });
            let line = |f: Format| {
                rows.iter()
                    .map(|r| format!("i={}: zeta: {} zetabar: {}", r.index, render(&r.zeta, f), render(&r.zeta_bar, f)))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(Outcome { json, text: line(Format::Text), latex: line(Format::Latex), ok })
        }
        Command::Numcheck { potential, degree, h, u0, du0, length, csv } => {
            let pot = Potential::from_name(&potential)
                .ok_or_else(|| UsageError(format!("unknown potential `{potential}` (sinh, exp-pair)")))?;
            if h.len() < 2 || h.iter().any(|h| !(*h > 0.0)) {
                return Err(UsageError("--h needs at least two positive step sizes".into()).into());
            }
            let gens = solve_vd(degree, &pot.model()).kernel;
            let Some(p) = gens.first() else {
                return Err(UsageError(format!("no generator of degree {degree} for {}", pot.name())).into());
            };
            let h0 = h[0];
            let setup = OdeSetup { potential: pot, u0, v0: du0, h: h0, steps: (length / h0).round() as usize };
            let (res, samples) = linearized_residual(p, &setup, &h)?;
            let energy = energy_drift(&setup, &h)?;
            if let Some(path) = csv {
                std::fs::write(&path, samples.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
            let ok = res.orders_within(1.8, 2.2);
            let json = json!({
                "potential": pot.name(),
                "degree": degree,
                "generator": poly_to_json(p),
                "linearized_residual": res.to_json(),
                "energy_drift": energy.to_json(),
                "pass": ok,
            });
            let fmt_orders = |o: &[Option<f64>]| {
                o.iter().map(|x| x.map_or("-".into(), |x| format!("{x:.3}"))).collect::<Vec<_>>().join(" ")
            };
            let text = format!(
                "generator: {p}\nresidual: {:?}\norders: {}\nenergy drift: {:?}\norders: {}",
                res.errors,
                fmt_orders(&res.orders),
                energy.errors,
                fmt_orders(&energy.orders)
            );
            Ok(Outcome { json, latex: text.clone(), text, ok })
        }
        Command::Verify { max_degree } => {
            if max_degree < 1 {
                return Err(UsageError("--max-degree must be positive".into()).into());
            }
            Ok(verify::run_suite(max_degree))
        }
        Command::Render { expr, model } => {
            let mut p = parse_poly(&expr)?;
            if let Some(m) = model {
                p = parse_model(&m)?.reduce(&p);
            }
            Ok(Outcome::poly_lines(poly_to_json(&p), std::slice::from_ref(&p), true))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let format = cli.output.format();
    let out_path = cli.output.out.clone();
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return if e.is::<UsageError>() { ExitCode::from(2) } else { ExitCode::from(1) };
        }
    };
    let mut body = match format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("json values serialize"),
        Format::Text => outcome.text,
        Format::Latex => outcome.latex,
    };
    body.push('\n');
    match out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, body) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
