use std::cmp::Ordering;
use std::fmt;

/// A coordinate on the infinite prolongation, a named parameter, or a member of the
/// abstract tower `f^(n)(u)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum VarId {
    Z,
    Zbar,
    U,
    /// `u_n = ∂^{n+1}u/∂z^{n+1}` on solutions.
    Uj(u32),
    UjBar(u32),
    Param(String),
    /// `f^(n)(u)`; `FTower(-1)` is an antiderivative of `f`.
    FTower(i32),
}

impl VarId {
    pub fn param(name: &str) -> Self {
        VarId::Param(name.to_string())
    }

    /// Weighted degree under the circle action `z ↦ λ^{-1} z`, `u_j ↦ λ^{j+1} u_j`.
    pub fn wd(&self) -> i64 {
        match self {
            VarId::Z => -1,
            VarId::Zbar => 1,
            VarId::Uj(n) => *n as i64 + 1,
            VarId::UjBar(n) => -(*n as i64 + 1),
            VarId::U | VarId::Param(_) | VarId::FTower(_) => 0,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            VarId::Z => VarId::Zbar,
            VarId::Zbar => VarId::Z,
            VarId::Uj(n) => VarId::UjBar(*n),
            VarId::UjBar(n) => VarId::Uj(*n),
            other => other.clone(),
        }
    }

    pub fn is_param(&self) -> bool {
        matches!(self, VarId::Param(_))
    }

    pub fn is_tower(&self) -> bool {
        matches!(self, VarId::FTower(_))
    }

    fn sort_key(&self) -> (u8, i64) {
        match self {
            VarId::Param(_) => (0, 0),
            VarId::FTower(n) => (1, *n as i64),
            VarId::U => (2, 0),
            VarId::Z => (3, 0),
            VarId::Zbar => (4, 0),
            VarId::Uj(n) => (5, 2 * *n as i64),
            VarId::UjBar(n) => (5, 2 * *n as i64 + 1),
        }
    }

    /// Token used by the text grammar.
    pub fn token(&self) -> String {
        match self {
            VarId::Z => "z".into(),
            VarId::Zbar => "zb".into(),
            VarId::U => "u".into(),
            VarId::Uj(n) => format!("u{n}"),
            VarId::UjBar(n) => format!("ub{n}"),
            VarId::Param(s) => s.clone(),
            VarId::FTower(-1) => "Sf".into(),
            VarId::FTower(0) => "f".into(),
            VarId::FTower(1) => "fu".into(),
            VarId::FTower(n) => format!("F{n}"),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            VarId::Z => "z".into(),
            VarId::Zbar => "\\bar{z}".into(),
            VarId::U => "u".into(),
            VarId::Uj(n) => format!("u_{{{n}}}"),
            VarId::UjBar(n) => format!("\\bar{{u}}_{{{n}}}"),
            VarId::Param(s) => s.clone(),
            VarId::FTower(-1) => "\\int f".into(),
            VarId::FTower(0) => "f".into(),
            VarId::FTower(1) => "f_{u}".into(),
            VarId::FTower(n) => format!("f^{{({n})}}"),
        }
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key()).then_with(|| match (self, other) {
            (VarId::Param(a), VarId::Param(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_order_matches_canonical_sequence() {
        let seq = vec![
            VarId::param("a"),
            VarId::param("b"),
            VarId::FTower(-1),
            VarId::FTower(0),
            VarId::FTower(1),
            VarId::FTower(7),
            VarId::U,
            VarId::Z,
            VarId::Zbar,
            VarId::Uj(0),
            VarId::UjBar(0),
            VarId::Uj(1),
            VarId::UjBar(1),
        ];
        let mut sorted = seq.clone();
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, seq);
    }

    #[test]
    fn conj_swaps_holomorphic_and_antiholomorphic() {
        assert_eq!(VarId::Uj(3).conj(), VarId::UjBar(3));
        assert_eq!(VarId::Z.conj(), VarId::Zbar);
        assert_eq!(VarId::FTower(2).conj(), VarId::FTower(2));
        assert_eq!(VarId::Z.wd() + VarId::Uj(0).wd(), 0);
    }
}
