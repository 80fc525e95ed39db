use jetlaws::{parse_expr, DiffPoly, Monomial, PotentialModel, VarId};

use crate::UsageError;

/// `generic`, `fuu=<e>*f` or `fuu=<e1>*fu+<e2>*f`.
pub fn parse_model(s: &str) -> Result<PotentialModel, UsageError> {
    let s = s.trim();
    if s == "generic" {
        return Ok(PotentialModel::Generic);
    }
    let rhs = s
        .strip_prefix("fuu")
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| UsageError(format!("model must be `generic` or `fuu=...`, got `{s}`")))?;
    let poly = parse_expr(rhs).map_err(|e| UsageError(format!("model: {e}")))?;
    let parts = poly.collect_by(|v| !v.is_tower());
    let (f, fu) = (Monomial::var(VarId::FTower(0)), Monomial::var(VarId::FTower(1)));
    let mut l1 = DiffPoly::zero();
    let mut l2 = DiffPoly::zero();
    for (outer, coeff) in parts {
        if coeff.any_var(|v| !v.is_param()) {
            return Err(UsageError(format!("model coefficient `{coeff}` must involve parameters only")));
        }
        if outer == f {
            l2 = coeff;
        } else if outer == fu {
            l1 = coeff;
        } else {
            return Err(UsageError(format!("model right-hand side must be linear in f and fu, got `{rhs}`")));
        }
    }
    Ok(PotentialModel::Rule { l1, l2 })
}

pub fn parse_poly(s: &str) -> Result<DiffPoly, UsageError> {
    parse_expr(s).map_err(|e| UsageError(format!("`{s}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_language() {
        assert_eq!(parse_model("generic").unwrap(), PotentialModel::Generic);
        assert_eq!(parse_model("fuu=b*f").unwrap(), PotentialModel::sinh_gordon(parse_expr("b").unwrap()));
        assert_eq!(parse_model("fuu = -fu + 2*f").unwrap(), PotentialModel::tzitzeica(DiffPoly::int(-1)));
        assert_eq!(parse_model("fuu=l1*fu+l2*f").unwrap(), PotentialModel::parametric());
        assert!(parse_model("fuu=f^2").is_err());
        assert!(parse_model("fuu=u0*f").is_err());
        assert!(parse_model("sinh").is_err());
    }
}
