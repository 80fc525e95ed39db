//! Canonical text, LaTeX and JSON output for polynomials.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::{parse::parse_expr, DiffPoly, Monomial};
use crate::error::ParseError;
use crate::scalar::{parse_rational, rational_pq, rational_short, GaussScalar, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Latex,
    Json,
}

pub fn render(p: &DiffPoly, format: Format) -> String {
    match format {
        Format::Text => render_text(p),
        Format::Latex => render_latex(p),
        Format::Json => poly_to_json(p).to_string(),
    }
}

fn text_rational(r: &Rational, wrap: bool) -> String {
    let s = rational_short(r);
    if wrap && !r.is_integer() {
        format!("({s})")
    } else {
        s
    }
}

/// Text of a coefficient with positive leading sign. Returns the prefix to put before
/// a monomial (ending in `*`), or the full constant when `m` is one.
fn text_coeff(c: &GaussScalar, bare: bool) -> String {
    let body = if c.im.is_zero() {
        if bare {
            return rational_short(&c.re);
        }
        if c.re.is_one() {
            return String::new();
        }
        text_rational(&c.re, true)
    } else if c.re.is_zero() {
        if c.im.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", text_rational(&c.im, true))
        }
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        let im = c.im.abs();
        let im_s = if im.is_one() { "i".to_string() } else { format!("{}*i", text_rational(&im, true)) };
        format!("({} {sign} {im_s})", rational_short(&c.re))
    };
    if bare {
        body
    } else {
        format!("{body}*")
    }
}

fn text_monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| if *e == 1 { v.token() } else { format!("{}^{e}", v.token()) })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_text(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.leading_sign() < 0;
        let c = if neg { -c } else { c.clone() };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            out.push_str(&text_coeff(&c, true));
        } else {
            out.push_str(&text_coeff(&c, false));
            out.push_str(&text_monomial(m));
        }
    }
    out
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn latex_coeff(c: &GaussScalar, bare: bool) -> String {
    if c.im.is_zero() {
        if c.re.is_one() && !bare {
            String::new()
        } else {
            latex_rational(&c.re)
        }
    } else if c.re.is_zero() {
        if c.im.is_one() {
            "i".into()
        } else {
            format!("{}i", latex_rational(&c.im))
        }
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        let im = c.im.abs();
        let im_s = if im.is_one() { "i".into() } else { format!("{}i", latex_rational(&im)) };
        format!("\\left({} {sign} {im_s}\\right)", latex_rational(&c.re))
    }
}

fn latex_monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| if *e == 1 { v.latex() } else { format!("{}^{{{e}}}", v.latex()) })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.leading_sign() < 0;
        let c = if neg { -c } else { c.clone() };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let coeff = latex_coeff(&c, m.is_one());
        out.push_str(&coeff);
        if !m.is_one() {
            if !coeff.is_empty() {
                out.push(' ');
            }
            out.push_str(&latex_monomial(m));
        }
    }
    out
}

pub fn poly_to_json(p: &DiffPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mut mono = Map::new();
            for (v, e) in m.factors() {
                mono.insert(v.token(), json!(e));
            }
            json!({"c": [rational_pq(&c.re), rational_pq(&c.im)], "m": mono})
        })
        .collect();
    json!({ "terms": terms })
}

fn bad(msg: &str) -> ParseError {
    ParseError::Syntax { pos: 0, msg: msg.to_string() }
}

pub fn poly_from_json(v: &Value) -> Result<DiffPoly, ParseError> {
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing `terms`"))?;
    let mut out = DiffPoly::zero();
    for t in terms {
        let c = t.get("c").and_then(Value::as_array).ok_or_else(|| bad("missing `c`"))?;
        let part = |k: usize| {
            c.get(k)
                .and_then(Value::as_str)
                .and_then(parse_rational)
                .ok_or_else(|| bad("bad coefficient"))
        };
        let coeff = GaussScalar::new(part(0)?, part(1)?);
        let mut term = DiffPoly::constant(coeff);
        if let Some(m) = t.get("m").and_then(Value::as_object) {
            for (name, e) in m {
                let e = e.as_u64().ok_or_else(|| bad("bad exponent"))?;
                let var = parse_expr(name)?;
                term = &term * &var.pow(e as u32);
            }
        }
        out = &out + &term;
    }
    Ok(out)
}
