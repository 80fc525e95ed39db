//! Exact linear algebra over polynomial rings in the parameters.
//!
//! Entries are [`DiffPoly`] values that only involve parameters. Elimination is
//! fraction-free (Bareiss), so every intermediate entry is a minor of the input and
//! all divisions are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::jetring::{DiffPoly, Monomial, VarId};
use crate::scalar::{GaussScalar, Rational};

pub type Matrix = Vec<Vec<DiffPoly>>;

/// Result of fraction-free Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced rows; row `k` has pivot column `pivots[k]`, with every pivot equal to `det`.
    pub rows: Matrix,
    pub pivots: Vec<usize>,
    pub det: DiffPoly,
    pub ncols: usize,
}

fn size_key(p: &DiffPoly) -> (usize, u32) {
    let deg = p.terms().map(|(m, _)| m.degree()).max().unwrap_or(0);
    (p.len(), deg)
}

/// Fraction-free Gauss-Jordan elimination.
pub fn echelon(matrix: &Matrix, ncols: usize) -> Echelon {
    let mut m: Matrix = matrix
        .iter()
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .cloned()
        .collect();
    let mut prev = DiffPoly::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| size_key(&m[i][c]));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let num = &(&pivot * &row[j]) - &(&factor * &pivot_row[j]);
                row[j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination: inexact division");
            }
            row[c] = DiffPoly::zero();
        }
        // pivots of earlier rows become the new determinant
        for k in 0..r {
            let pc = pivots[k];
            m[k][pc] = pivot.clone();
        }
        pivots.push(c);
        prev = pivot;
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots, det: prev, ncols }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis, one vector per free column, content removed.
    pub fn kernel(&self) -> Vec<Vec<DiffPoly>> {
        let mut out = Vec::new();
        for j in (0..self.ncols).filter(|j| !self.pivots.contains(j)) {
            let mut v = vec![DiffPoly::zero(); self.ncols];
            v[j] = self.det.clone();
            for (k, &pc) in self.pivots.iter().enumerate() {
                v[pc] = -&self.rows[k][j];
            }
            out.push(primitive_vector(&v));
        }
        out
    }
}

pub fn kernel(matrix: &Matrix, ncols: usize) -> Vec<Vec<DiffPoly>> {
    echelon(matrix, ncols).kernel()
}

/// Divides out the gcd of all entries.
pub fn primitive_vector(v: &[DiffPoly]) -> Vec<DiffPoly> {
    let g = v.iter().fold(DiffPoly::zero(), |acc, e| gcd(&acc, e));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter()
        .map(|e| e.div_exact(&g).expect("content divides every entry"))
        .collect()
}

/// Scales so the first nonzero entry (visiting indices in `order`) is `1`, or has
/// leading coefficient `1` when it is not a constant.
pub fn normalize_vector(v: &[DiffPoly], order: &[usize]) -> Vec<DiffPoly> {
    let Some(&k) = order.iter().find(|&&k| !v[k].is_zero()) else {
        return v.to_vec();
    };
    let lead = match v[k].as_constant() {
        Some(c) => c,
        None => v[k].leading_term().map(|(_, c)| c.clone()).unwrap(),
    };
    let inv = lead.inv().expect("nonzero");
    v.iter().map(|e| e.scale(&inv)).collect()
}

/// Canonical basis of the span of `vectors`: reduced echelon rows over the fraction
/// field, each made primitive and normalized along `order`.
pub fn canonical_span(vectors: &[Vec<DiffPoly>], order: &[usize]) -> Vec<Vec<DiffPoly>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let reordered: Matrix = vectors
        .iter()
        .map(|v| order.iter().map(|&k| v[k].clone()).collect())
        .collect();
    let ech = echelon(&reordered, order.len());
    ech.rows
        .iter()
        .map(|row| {
            let mut v = vec![DiffPoly::zero(); order.len()];
            for (pos, &k) in order.iter().enumerate() {
                v[k] = row[pos].clone();
            }
            normalize_vector(&primitive_vector(&v), order)
        })
        .collect()
}

/// Scales so the leading coefficient is `1`.
pub fn monic(p: &DiffPoly) -> DiffPoly {
    match p.leading_term() {
        Some((_, c)) => p.scale(&c.inv().unwrap()),
        None => DiffPoly::zero(),
    }
}

fn univariate(p: &DiffPoly, x: &VarId) -> Vec<DiffPoly> {
    let mut out: Vec<DiffPoly> = Vec::new();
    for (m, c) in p.terms() {
        let (rest, e) = m.without(x);
        let e = e as usize;
        if out.len() <= e {
            out.resize(e + 1, DiffPoly::zero());
        }
        out[e].add_term(rest, c);
    }
    out
}

fn from_univariate(cs: &[DiffPoly], x: &VarId) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (e, c) in cs.iter().enumerate() {
        out = &out + &c.mul_monomial(&Monomial::pow(x.clone(), e as u32));
    }
    out
}

fn trim(v: &mut Vec<DiffPoly>) {
    while v.last().is_some_and(DiffPoly::is_zero) {
        v.pop();
    }
}

fn pseudo_rem(a: &[DiffPoly], b: &[DiffPoly]) -> Vec<DiffPoly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let n = b.len() - 1;
    let lb = &b[n];
    while r.len() > n {
        let m = r.len() - 1;
        let lr = r[m].clone();
        for x in r.iter_mut() {
            *x = &*x * lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[m - n + k] = &r[m - n + k] - &(&lr * bk);
        }
        trim(&mut r);
    }
    r
}

fn content_wrt(cs: &[DiffPoly]) -> DiffPoly {
    cs.iter().fold(DiffPoly::zero(), |acc, c| gcd(&acc, c))
}

/// Greatest common divisor, normalized to leading coefficient `1`.
pub fn gcd(a: &DiffPoly, b: &DiffPoly) -> DiffPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return DiffPoly::one();
    }
    let vars: std::collections::BTreeSet<VarId> = a.vars().union(&b.vars()).cloned().collect();
    let x = vars.iter().next_back().unwrap().clone();
    match (a.contains_var(&x), b.contains_var(&x)) {
        (false, _) => return gcd(a, &content_wrt(&univariate(b, &x))),
        (_, false) => return gcd(&content_wrt(&univariate(a, &x)), b),
        _ => {}
    }
    let ua = univariate(a, &x);
    let ub = univariate(b, &x);
    let ca = content_wrt(&ua);
    let cb = content_wrt(&ub);
    let c = gcd(&ca, &cb);
    let prim = |u: &[DiffPoly], c: &DiffPoly| -> Vec<DiffPoly> {
        u.iter().map(|e| e.div_exact(c).expect("content divides")).collect()
    };
    let (mut p, mut q) = (prim(&ua, &ca), prim(&ub, &cb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = pseudo_rem(&p, &q);
        p = q;
        q = if r.is_empty() {
            r
        } else {
            let cr = content_wrt(&r);
            prim(&r, &cr)
        };
    }
    let cp = content_wrt(&p);
    let g = from_univariate(&prim(&p, &cp), &x);
    monic(&(&c * &g))
}

/// Square-free part: `h / gcd(h, dh/dx_1, ..., dh/dx_n)`.
pub fn squarefree(h: &DiffPoly) -> DiffPoly {
    let mut g = h.clone();
    for v in h.vars() {
        g = gcd(&g, &h.formal_partial(&v));
    }
    monic(&h.div_exact(&g).expect("gcd divides"))
}

/// Scales a polynomial with Gaussian-rational coefficients whose coefficients are all
/// real to coprime integers, first term (in canonical order) positive.
pub fn integer_primitive(p: &DiffPoly) -> DiffPoly {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let scaled = p.scale(&GaussScalar::real(Rational::from_integer(den)));
    let mut g = BigInt::zero();
    for (_, c) in scaled.terms() {
        g = g.gcd(c.re.numer()).gcd(c.im.numer());
    }
    if g.is_zero() {
        return scaled;
    }
    let sign = scaled.terms().next().map(|(_, c)| c.leading_sign()).unwrap_or(1);
    let g = if sign < 0 { -g } else { g };
    scaled.scale(&GaussScalar::real(Rational::new(BigInt::one(), g)))
}

/// Dense univariate polynomial over the Gaussian rationals, ascending powers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly(pub Vec<GaussScalar>);

impl UniPoly {
    pub fn from_poly(p: &DiffPoly, t: &VarId) -> UniPoly {
        let mut c: Vec<GaussScalar> = Vec::new();
        for (m, a) in p.terms() {
            let (rest, e) = m.without(t);
            assert!(rest.is_one(), "polynomial is not univariate in {t}");
            let e = e as usize;
            if c.len() <= e {
                c.resize(e + 1, GaussScalar::zero());
            }
            c[e] = &c[e] + a;
        }
        let mut u = UniPoly(c);
        u.trim();
        u
    }

    pub fn to_poly(&self, t: &VarId) -> DiffPoly {
        DiffPoly::from_terms(
            self.0
                .iter()
                .enumerate()
                .map(|(e, c)| (Monomial::pow(t.clone(), e as u32), c.clone())),
        )
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(GaussScalar::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn one() -> UniPoly {
        UniPoly(vec![GaussScalar::one()])
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::default();
        }
        let mut c = vec![GaussScalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        let mut u = UniPoly(c);
        u.trim();
        u
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let z = GaussScalar::zero();
        let c = (0..n)
            .map(|k| self.0.get(k).unwrap_or(&z) - o.0.get(k).unwrap_or(&z))
            .collect();
        let mut u = UniPoly(c);
        u.trim();
        u
    }

    pub fn divrem(&self, b: &UniPoly) -> (UniPoly, UniPoly) {
        let db = b.degree().expect("division by zero polynomial");
        let inv = b.0[db].inv().unwrap();
        let mut r = self.clone();
        let mut q = vec![GaussScalar::zero(); self.0.len().saturating_sub(db).max(1)];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let k = &r.0[dr] * &inv;
            for (j, bj) in b.0.iter().enumerate() {
                r.0[dr - db + j] = &r.0[dr - db + j] - &(&k * bj);
            }
            q[dr - db] = k;
            r.trim();
        }
        let mut q = UniPoly(q);
        q.trim();
        (q, r)
    }

    pub fn monic(&self) -> UniPoly {
        match self.0.last() {
            Some(l) => {
                let inv = l.inv().unwrap();
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => UniPoly::default(),
        }
    }

    pub fn eval(&self, x: &GaussScalar) -> GaussScalar {
        self.0.iter().rev().fold(GaussScalar::zero(), |acc, c| &(&acc * x) + c)
    }
}

/// `gcd` of all maximal minors of an `m x n` matrix over `Q(i)[t]` (`m >= n`), computed
/// by unimodular row reduction to echelon form. Zero when the rank is below `n`.
pub fn maximal_minor_gcd(matrix: &[Vec<UniPoly>], ncols: usize) -> UniPoly {
    let mut m: Vec<Vec<UniPoly>> = matrix.to_vec();
    let mut det = UniPoly::one();
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by_key(|&i| (m[i][c].degree(), i));
            let Some(p) = best else {
                return UniPoly::default();
            };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let (q, _) = m[i][c].divrem(&m[r][c]);
                for j in c..ncols {
                    let t = q.mul(&m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        det = det.mul(&m[r][c]);
        r += 1;
    }
    det.monic()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(BigInt::from(k));
            if k * k != n {
                out.push(BigInt::from(n / k));
            }
        }
        k += 1;
    }
    out.sort();
    Some(out)
}

/// Rational roots of a polynomial with rational coefficients, each listed once, and the
/// cofactor left after dividing them out. Roots are only searched among candidates of
/// manageable size; anything missed stays in the cofactor.
pub fn rational_roots(p: &UniPoly) -> (Vec<Rational>, UniPoly) {
    let mut rest = p.monic();
    let mut roots = Vec::new();
    if rest.0.iter().any(|c| !c.is_real()) {
        return (roots, rest);
    }
    let zero = GaussScalar::zero();
    while rest.degree().unwrap_or(0) > 0 && rest.0[0].is_zero() {
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
        rest = UniPoly(rest.0[1..].to_vec());
    }
    loop {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut den = BigInt::one();
        for c in &rest.0 {
            den = den.lcm(c.re.denom());
        }
        let ints: Vec<BigInt> = rest.0.iter().map(|c| (&c.re * Rational::from_integer(den.clone())).to_integer()).collect();
        let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
            break;
        };
        let mut found = None;
        'search: for p in &ps {
            for q in &qs {
                for s in [1, -1] {
                    let cand = Rational::new(p * s, q.clone());
                    if rest.eval(&GaussScalar::real(cand.clone())) == zero {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let Some(root) = found else { break };
        let lin = UniPoly(vec![GaussScalar::real(-root.clone()), GaussScalar::one()]);
        let (q, r) = rest.divrem(&lin);
        debug_assert!(r.is_zero());
        rest = q;
        if !roots.contains(&root) {
            roots.push(root);
        }
    }
    (roots, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::parse_expr;
    use crate::scalar::rat;

    fn p(s: &str) -> DiffPoly {
        parse_expr(s).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect()
    }

    #[test]
    fn kernel_over_parameters() {
        // the d = 3 system for f_uu = l1 f_u + l2 f, specialized to l1 = 0
        let m = mat(&[&["0", "-1", "0"], &["0", "-2", "0"], &["-3*b", "0", "-6"], &["-b", "0", "-2"]]);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        let v = normalize_vector(&k[0], &[0, 1, 2]);
        assert_eq!(v, vec![p("1"), p("0"), p("-(1/2)*b")]);
    }

    #[test]
    fn kernel_is_exact_on_random_rank_deficient_matrix() {
        let m = mat(&[
            &["a", "1", "a + b", "2"],
            &["b", "a", "a*b + b", "a + b"],
            &["a + b", "1 + a", "a + 2*b + a*b", "2 + a + b"],
        ]);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot = row.iter().zip(v).fold(DiffPoly::zero(), |acc, (x, y)| &acc + &(x * y));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn multivariate_gcd() {
        let a = p("(l1 + 2*l2)*(l1^2 - l2)");
        let b = p("(l1 + 2*l2)*(l1 - 3)");
        assert_eq!(gcd(&a, &b), p("l2 + (1/2)*l1"));
        assert_eq!(gcd(&p("l1^2*l2"), &p("l1*l2^3")), p("l1*l2"));
        assert_eq!(gcd(&p("3"), &p("l1")), p("1"));
    }

    #[test]
    fn squarefree_part() {
        let h = p("l1^3*(l2 - 2*l1^2)^2*(l2 + 1)");
        let s = squarefree(&h);
        assert_eq!(integer_primitive(&s), integer_primitive(&p("l1*(l2 - 2*l1^2)*(l2 + 1)")));
    }

    #[test]
    fn integer_normalization() {
        assert_eq!(integer_primitive(&p("-(1/2)*l2 + l1^2")), p("l2 - 2*l1^2"));
    }

    #[test]
    fn minor_gcd_and_roots() {
        let t = VarId::param("t");
        let u = |s: &str| UniPoly::from_poly(&p(s), &t);
        // minors: (t-2)^2 (t+2), (t-2)(t+2), -t^2 (t-2)(t+2)
        let m = vec![
            vec![u("t - 2"), u("0")],
            vec![u("0"), u("t^2 - 4")],
            vec![u("t^2"), u("t + 2")],
        ];
        let g = maximal_minor_gcd(&m, 2);
        assert_eq!(g, u("t^2 - 4"));
        let (roots, rest) = rational_roots(&u("(t - 2)*(3*t + 1)*(t^2 + 1)"));
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&rat(2, 1)) && roots.contains(&rat(-1, 3)));
        assert_eq!(rest, u("t^2 + 1"));
    }
}
