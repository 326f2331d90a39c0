//! Sparse multivariate polynomials over Q(√2), with the calculus operators
//! needed by the Münzner equations and the Ozeki–Takeuchi expansion.
//!
//! Terms are kept in a canonical graded-lexicographic order with no explicit
//! zeros, so polynomial equality is structural and every identity check
//! reduces to "is the difference empty".

use crate::scalar::{parse_rational, rational_string, Scalar};
use num_traits::ToPrimitive;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: usize },
    #[error("only degree g = 4 is supported, got {0}")]
    UnsupportedDegree(usize),
    #[error("bad polynomial JSON: {0}")]
    Json(String),
}

/// Exponent tuple of a monomial. Ordered by total degree, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u8>);

impl Mono {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `nvars` variables with [`Scalar`] coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(Mono(vec![0; nvars]), c);
        p
    }

    /// The variable x_i.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![0u8; nvars];
        exp[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(Mono(exp), Scalar::int(1));
        p
    }

    pub fn monomial(nvars: usize, exp: Vec<u8>, c: Scalar) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = MPoly::zero(nvars);
        p.add_term(Mono(exp), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    /// Merges `c` into the coefficient of `mono`, dropping it if it cancels.
    pub fn add_term(&mut self, mono: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(mono.0.len(), self.nvars);
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, exp: &[u8]) -> Scalar {
        self.terms
            .get(&Mono(exp.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, v) in &rhs.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, v) in &rhs.terms {
            out.add_term(m.clone(), -v);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), -v);
        }
        out
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let exp: Vec<u8> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Mono(exp), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::constant(self.nvars, Scalar::int(1));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// ∂/∂x_i.
    pub fn partial(&self, i: usize) -> MPoly {
        assert!(i < self.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] = e - 1;
            out.add_term(Mono(exp), c * &Scalar::int(e as i64));
        }
        out
    }

    /// The exact gradient, one component per variable.
    pub fn grad(&self) -> Vec<MPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Σ_i ∂²/∂x_i².
    pub fn laplacian(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for i in 0..self.nvars {
            out = out.add(&self.partial(i).partial(i));
        }
        out
    }

    /// ⟨∇F, ∇G⟩ as an exact polynomial.
    pub fn grad_inner(&self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = MPoly::zero(self.nvars);
        for i in 0..self.nvars {
            out = out.add(&self.partial(i).mul(&rhs.partial(i)));
        }
        out
    }

    /// Substitutes x_i ← Σ_j rows[i][j]·u_j, producing a polynomial in the
    /// `new_nvars` variables u_j.
    pub fn subst_linear(&self, rows: &[Vec<Scalar>], new_nvars: usize) -> Result<MPoly, PolyError> {
        if rows.len() != self.nvars {
            return Err(PolyError::DimensionMismatch(format!(
                "substitution has {} rows for {} variables",
                rows.len(),
                self.nvars
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != new_nvars {
                return Err(PolyError::DimensionMismatch(format!(
                    "row {i} has {} columns, expected {new_nvars}",
                    row.len()
                )));
            }
        }
        let linear: Vec<MPoly> = rows
            .iter()
            .map(|row| {
                let mut l = MPoly::zero(new_nvars);
                for (j, c) in row.iter().enumerate() {
                    let mut exp = vec![0u8; new_nvars];
                    exp[j] = 1;
                    l.add_term(Mono(exp), c.clone());
                }
                l
            })
            .collect();
        let mut out = MPoly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut prod = MPoly::constant(new_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(&linear[i]);
                }
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Scalar::default();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &point[i];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Floating evaluation with √2 folded into binary64. Oracle use only.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64();
            for (i, &e) in m.0.iter().enumerate() {
                term *= point[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// |x|² = Σ x_i².
    pub fn norm_sq(nvars: usize) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for i in 0..nvars {
            let mut exp = vec![0u8; nvars];
            exp[i] = 2;
            p.add_term(Mono(exp), Scalar::int(1));
        }
        p
    }

    /// Keeps the terms selected by `pred` on the exponent tuple.
    pub fn filter_terms<F: Fn(&[u8]) -> bool>(&self, pred: F) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if pred(&m.0) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Renames variables: new exponent tuple keeps positions listed in `keep`
    /// (all dropped positions must have exponent zero on every term).
    pub fn project(&self, keep: &[usize]) -> MPoly {
        let keep_set: Vec<bool> = {
            let mut v = vec![false; self.nvars];
            for &i in keep {
                v[i] = true;
            }
            v
        };
        let mut out = MPoly::zero(keep.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                assert!(
                    keep_set[i] || e == 0,
                    "projection drops a variable with nonzero exponent"
                );
            }
            let exp: Vec<u8> = keep.iter().map(|&i| m.0[i]).collect();
            out.add_term(Mono(exp), c.clone());
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Outcome of the Cartan–Münzner check: both residuals must be the empty
/// polynomial for a genuine degree-4 example.
#[derive(Debug, Clone)]
pub struct CmReport {
    pub grad_residual_terms: usize,
    pub laplacian_residual_terms: usize,
}

impl CmReport {
    pub fn passed(&self) -> bool {
        self.grad_residual_terms == 0 && self.laplacian_residual_terms == 0
    }
}

/// Checks |∇F|² = g²|x|^(2g-2) and ΔF = (m₂-m₁)g²|x|^(g-2)/2 as exact
/// polynomial identities (g = 4 only).
pub fn verify_cm(f: &MPoly, g: usize, m1: usize, m2: usize) -> Result<CmReport, PolyError> {
    if g != 4 {
        return Err(PolyError::UnsupportedDegree(g));
    }
    if !f.is_homogeneous(g) || f.is_zero() {
        return Err(PolyError::NotHomogeneous { expected: g });
    }
    let n = f.nvars();
    let norm = MPoly::norm_sq(n);
    let grad_target = norm.pow(3).scale(&Scalar::int(16));
    let grad_residual = f.grad_inner(f).sub(&grad_target);
    let lap_target = norm.scale(&Scalar::int(8 * (m2 as i64 - m1 as i64)));
    let lap_residual = f.laplacian().sub(&lap_target);
    Ok(CmReport {
        grad_residual_terms: grad_residual.num_terms(),
        laplacian_residual_terms: lap_residual.num_terms(),
    })
}

/// Serializes in the shared polynomial JSON format:
/// `{"nvars": n, "terms": [{"exp": [...], "r": "p/q", "s": "p/q"}]}`.
pub fn poly_to_json(p: &MPoly) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = p
        .terms()
        .map(|(m, c)| {
            serde_json::json!({
                "exp": m.0.iter().map(|&e| e as u64).collect::<Vec<u64>>(),
                "r": rational_string(c.rational_part()),
                "s": rational_string(c.sqrt2_part()),
            })
        })
        .collect();
    serde_json::json!({ "nvars": p.nvars(), "terms": terms })
}

pub fn poly_from_json(v: &serde_json::Value) -> Result<MPoly, PolyError> {
    let nvars = v
        .get("nvars")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| PolyError::Json("missing nvars".into()))? as usize;
    let terms = v
        .get("terms")
        .and_then(|x| x.as_array())
        .ok_or_else(|| PolyError::Json("missing terms".into()))?;
    let mut p = MPoly::zero(nvars);
    for t in terms {
        let exp = t
            .get("exp")
            .and_then(|x| x.as_array())
            .ok_or_else(|| PolyError::Json("missing exp".into()))?;
        if exp.len() != nvars {
            return Err(PolyError::Json(format!(
                "exponent tuple of length {} in {nvars}-variable polynomial",
                exp.len()
            )));
        }
        let exp: Vec<u8> = exp
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|x| x.to_u8())
                    .ok_or_else(|| PolyError::Json(format!("bad exponent {e}")))
            })
            .collect::<Result<_, _>>()?;
        let r = t
            .get("r")
            .and_then(|x| x.as_str())
            .ok_or_else(|| PolyError::Json("missing r".into()))?;
        let s = t
            .get("s")
            .and_then(|x| x.as_str())
            .ok_or_else(|| PolyError::Json("missing s".into()))?;
        let c = Scalar::new(
            parse_rational(r).map_err(PolyError::Json)?,
            parse_rational(s).map_err(PolyError::Json)?,
        );
        p.add_term(Mono(exp), c);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn gradient_of_square_monomial() {
        // F = x0² in 2 vars -> (2 x0, 0)
        let f = x(2, 0).mul(&x(2, 0));
        let g = f.grad();
        assert_eq!(g[0], x(2, 0).scale(&Scalar::int(2)));
        assert!(g[1].is_zero());
    }

    #[test]
    fn gradient_of_norm_fourth() {
        // F = |x|⁴ in n vars -> component i = 4 x_i |x|²
        let n = 5;
        let f = MPoly::norm_sq(n).pow(2);
        let g = f.grad();
        for i in 0..n {
            let expect = x(n, i).mul(&MPoly::norm_sq(n)).scale(&Scalar::int(4));
            assert_eq!(g[i], expect);
        }
    }

    #[test]
    fn laplacian_examples() {
        // Δ|x|² = 2n
        let n = 7;
        assert_eq!(
            MPoly::norm_sq(n).laplacian(),
            MPoly::constant(n, Scalar::int(2 * n as i64))
        );
        // Δ|x|⁴ = 4(n+2)|x|², here n = 32
        let n = 32;
        let f = MPoly::norm_sq(n).pow(2);
        assert_eq!(
            f.laplacian(),
            MPoly::norm_sq(n).scale(&Scalar::int(4 * (n as i64 + 2)))
        );
    }

    #[test]
    fn grad_inner_disjoint_supports() {
        // F = x0, G = x1² in 2 vars: <(1,0),(0,2x1)> = 0
        let f = x(2, 0);
        let g = x(2, 1).mul(&x(2, 1));
        assert!(f.grad_inner(&g).is_zero());
        // F = G = |x|² -> 4|x|²
        let n = 4;
        let nsq = MPoly::norm_sq(n);
        assert_eq!(nsq.grad_inner(&nsq), nsq.scale(&Scalar::int(4)));
    }

    #[test]
    fn subst_linear_rotation() {
        // x0 <- (u0+u1)/√2 applied to x0² gives (u0² + 2 u0 u1 + u1²)/2
        let f = x(1, 0).mul(&x(1, 0));
        let rows = vec![vec![Scalar::inv_sqrt2(), Scalar::inv_sqrt2()]];
        let got = f.subst_linear(&rows, 2).unwrap();
        let u0 = x(2, 0);
        let u1 = x(2, 1);
        let expect = u0
            .mul(&u0)
            .add(&u0.mul(&u1).scale(&Scalar::int(2)))
            .add(&u1.mul(&u1))
            .scale(&Scalar::ratio(1, 2));
        assert_eq!(got, expect);
    }

    #[test]
    fn subst_linear_identity() {
        let n = 3;
        let f = x(n, 0)
            .mul(&x(n, 1))
            .add(&x(n, 2).pow(3).scale(&Scalar::sqrt2()));
        let mut rows = vec![vec![Scalar::default(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Scalar::int(1);
        }
        assert_eq!(f.subst_linear(&rows, n).unwrap(), f);
    }

    #[test]
    fn subst_linear_dimension_errors() {
        let f = x(2, 0);
        assert!(f.subst_linear(&[vec![Scalar::int(1)]], 1).is_err());
        let bad_row = vec![vec![Scalar::int(1)], vec![Scalar::int(1), Scalar::int(0)]];
        assert!(f.subst_linear(&bad_row, 2).is_err());
    }

    #[test]
    fn verify_cm_rejects_norm_fourth() {
        // |∇|x|⁴|² = 16|x|⁶ holds, but the Laplacian identity fails for (4,1,1).
        let f = MPoly::norm_sq(6).pow(2);
        let report = verify_cm(&f, 4, 1, 1).unwrap();
        assert_eq!(report.grad_residual_terms, 0);
        assert!(report.laplacian_residual_terms > 0);
        assert!(!report.passed());
    }

    #[test]
    fn verify_cm_input_validation() {
        let f = MPoly::norm_sq(3);
        assert!(matches!(
            verify_cm(&f, 4, 1, 1),
            Err(PolyError::NotHomogeneous { .. })
        ));
        assert!(matches!(
            verify_cm(&f.pow(2), 6, 1, 1),
            Err(PolyError::UnsupportedDegree(6))
        ));
    }

    #[test]
    fn values_are_send_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<MPoly>();
        assert_send_sync::<crate::scalar::Scalar>();
        assert_send_sync::<crate::scalar::CScalar>();
    }

    #[test]
    fn json_roundtrip_fixed() {
        let mut p = MPoly::zero(3);
        p.add_term(Mono(vec![2, 0, 1]), Scalar::ratio(-5, 4));
        p.add_term(Mono(vec![0, 1, 0]), Scalar::ratio_sqrt2(1, 2));
        let v = poly_to_json(&p);
        let back = poly_from_json(&v).unwrap();
        assert_eq!(p, back);
    }

    // ---- property tests --------------------------------------------------

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-6i64..7, 1i64..4, -6i64..7, 1i64..4).prop_map(|(rp, rq, sp, sq)| {
            &Scalar::ratio(rp, rq) + &Scalar::ratio_sqrt2(sp, sq)
        })
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = MPoly> {
        proptest::collection::vec((proptest::collection::vec(0u8..3, nvars), arb_scalar()), 0..6)
            .prop_map(move |terms| {
                let mut p = MPoly::zero(nvars);
                for (exp, c) in terms {
                    p.add_term(Mono(exp), c);
                }
                p
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn grad_inner_self_nonnegative_at_points(
            f in arb_poly(3),
            pt in proptest::collection::vec(-3.0f64..3.0, 3),
        ) {
            let g = f.grad_inner(&f);
            prop_assert!(g.eval_f64(&pt) >= -1e-9);
        }

        #[test]
        fn subst_composition(
            f in arb_poly(2),
            m1 in proptest::collection::vec(proptest::collection::vec(arb_scalar(), 2), 2),
            m2 in proptest::collection::vec(proptest::collection::vec(arb_scalar(), 2), 2),
        ) {
            // substituting M1 then M2 equals substituting the product M1·M2
            let step = f.subst_linear(&m1, 2).unwrap().subst_linear(&m2, 2).unwrap();
            let mut prod = vec![vec![Scalar::default(); 2]; 2];
            #[allow(clippy::needless_range_loop)]
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        prod[i][j] = &prod[i][j] + &(&m1[i][k] * &m2[k][j]);
                    }
                }
            }
            let direct = f.subst_linear(&prod, 2).unwrap();
            prop_assert_eq!(step, direct);
        }

        #[test]
        fn euler_identity(f in arb_poly(3)) {
            // homogenize by degree stratum, then check Σ x_i ∂F/∂x_i = d·F
            for d in 0..6usize {
                let fd = f.filter_terms(|exp| exp.iter().map(|&e| e as usize).sum::<usize>() == d);
                if fd.is_zero() { continue; }
                let mut lhs = MPoly::zero(3);
                for i in 0..3 {
                    lhs = lhs.add(&MPoly::var(3, i).mul(&fd.partial(i)));
                }
                prop_assert_eq!(lhs, fd.scale(&Scalar::int(d as i64)));
            }
        }

        #[test]
        fn json_roundtrip(p in arb_poly(4)) {
            let back = poly_from_json(&poly_to_json(&p)).unwrap();
            prop_assert_eq!(p, back);
        }
    }
}
