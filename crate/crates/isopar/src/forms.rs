//! Second and third fundamental forms: extraction from the Cartan–Münzner
//! polynomial by the Ozeki–Takeuchi expansion, the block matrices of the
//! shape operators, the third-form tensors T^p, and the identity suites tying
//! all of them together.
//!
//! Tangent coordinates are ordered x₁…x_{m₂} (E₊), y₁…y_{m₂} (E₋),
//! z₁…z_{m₁} (E₀). Every check in this module is exact.

use crate::algebras::{Octonion, Quaternion};
use crate::geometry::{AdaptedFrame, ExampleId};
use crate::mat::Mat;
use crate::poly::{MPoly, Mono, PolyError};
use crate::report::Check;
use crate::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OtError {
    #[error("base point does not lie on F^-1(1): F(x) = {0}")]
    BasePoint(String),
    #[error("frame is not orthonormal")]
    Frame,
    #[error("stratum {stratum} mismatch: {detail}")]
    Stratum { stratum: String, detail: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error)]
pub enum FormsError {
    #[error("p0 is not the diagonal form sum x^2 - sum y^2")]
    P0Shape,
    #[error("coefficient outside the block pattern in p_{a}: monomial {mono}")]
    OffPattern { a: usize, mono: String },
    #[error("third form q^0 has a non-x.y.z monomial: {0}")]
    Q0Structure(String),
    #[error("nonzero third-form entry at excluded index alpha or mu = m2: p={p}, alpha={alpha}, mu={mu}")]
    ExcludedIndex { p: usize, alpha: usize, mu: usize },
}

/// The degree-2 and degree-3 strata of the expansion at a focal point:
/// p_a quadratic, q^a cubic, both in the m₁+2m₂ tangent coordinates.
#[derive(Clone, Debug)]
pub struct SecondThirdForms {
    pub m1: usize,
    pub m2: usize,
    pub p: Vec<MPoly>,
    pub q: Vec<MPoly>,
    /// Whether the degree-0-in-t remainder matched the expansion formula.
    pub residual_ok: bool,
}

impl SecondThirdForms {
    pub fn tangent_dim(&self) -> usize {
        2 * self.m2 + self.m1
    }

    pub fn x_var(&self, alpha: usize) -> usize {
        alpha
    }

    pub fn y_var(&self, mu: usize) -> usize {
        self.m2 + mu
    }

    pub fn z_var(&self, p: usize) -> usize {
        2 * self.m2 + p
    }
}

fn lift_tangent(p: &MPoly, new_n: usize) -> MPoly {
    let mut out = MPoly::zero(new_n);
    for (m, c) in p.terms() {
        let mut exp = vec![0u8; new_n];
        exp[1..=m.0.len()].copy_from_slice(&m.0);
        out.add_term(Mono(exp), c.clone());
    }
    out
}

/// Expands F(tx + y + w) over the frame and extracts the strata:
/// t⁴ (must be 1), t³ (must vanish), t² (must equal 2|y|²-6|w|²),
/// p_a = (1/8)·(t·w_a coefficient), q^a = -(1/8)·(w_a-linear cubic part at
/// t⁰); `residual_ok` records whether the remaining t⁰ terms equal
/// |y|⁴ - 6|y|²|w|² + |w|⁴ - 2Σp² + 2Σ⟨∇p_a,∇p_b⟩w_a w_b.
pub fn ot_expand(f: &MPoly, frame: &AdaptedFrame) -> Result<SecondThirdForms, OtError> {
    let value = f.eval(&frame.x);
    if !value.is_one() {
        return Err(OtError::BasePoint(value.to_string()));
    }
    if !frame.is_orthonormal() {
        return Err(OtError::Frame);
    }
    let (m1, m2) = (frame.m1, frame.m2);
    let tdim = 2 * m2 + m1;
    let wdim = m1 + 1;
    let new_n = 1 + tdim + wdim;
    assert_eq!(f.nvars(), frame.ambient_dim);

    let mut rows = vec![vec![Scalar::default(); new_n]; frame.ambient_dim];
    for (i, row) in rows.iter_mut().enumerate() {
        row[0] = frame.x[i].clone();
        for (a, v) in frame.eplus.iter().enumerate() {
            row[1 + a] = v[i].clone();
        }
        for (mu, v) in frame.eminus.iter().enumerate() {
            row[1 + m2 + mu] = v[i].clone();
        }
        for (p, v) in frame.ezero.iter().enumerate() {
            row[1 + 2 * m2 + p] = v[i].clone();
        }
        for (a, v) in frame.normals.iter().enumerate() {
            row[1 + tdim + a] = v[i].clone();
        }
    }
    let h = f.subst_linear(&rows, new_n)?;
    extract_strata(&h, m1, m2)
}

/// Stratum bookkeeping shared by `ot_expand` and the round-trip test.
pub(crate) fn extract_strata(
    h: &MPoly,
    m1: usize,
    m2: usize,
) -> Result<SecondThirdForms, OtError> {
    let tdim = 2 * m2 + m1;
    let wdim = m1 + 1;
    let new_n = 1 + tdim + wdim;
    let wbase = 1 + tdim;
    let wdeg = |e: &[u8]| -> u8 { e[wbase..].iter().sum() };

    // t⁴ stratum: exactly the monomial t⁴ with coefficient 1
    let t4 = h.filter_terms(|e| e[0] == 4);
    let mut t4_expect = MPoly::zero(new_n);
    let mut e4 = vec![0u8; new_n];
    e4[0] = 4;
    t4_expect.add_term(Mono(e4), Scalar::int(1));
    if t4 != t4_expect {
        return Err(OtError::Stratum {
            stratum: "t^4".into(),
            detail: format!("{} terms", t4.num_terms()),
        });
    }

    // t³ stratum must vanish
    let t3 = h.filter_terms(|e| e[0] == 3);
    if !t3.is_zero() {
        return Err(OtError::Stratum {
            stratum: "t^3".into(),
            detail: format!("{} unexpected terms", t3.num_terms()),
        });
    }

    // t² stratum: 2|y|²t² - 6|w|²t²
    let t2 = h.filter_terms(|e| e[0] == 2);
    let mut t2_expect = MPoly::zero(new_n);
    for v in 0..tdim {
        let mut e = vec![0u8; new_n];
        e[0] = 2;
        e[1 + v] = 2;
        t2_expect.add_term(Mono(e), Scalar::int(2));
    }
    for a in 0..wdim {
        let mut e = vec![0u8; new_n];
        e[0] = 2;
        e[wbase + a] = 2;
        t2_expect.add_term(Mono(e), Scalar::int(-6));
    }
    if t2 != t2_expect {
        return Err(OtError::Stratum {
            stratum: "t^2".into(),
            detail: format!(
                "difference has {} terms",
                t2.sub(&t2_expect).num_terms()
            ),
        });
    }

    // t¹ stratum: 8 Σ p_a w_a with p_a quadratic in the tangent variables
    let t1 = h.filter_terms(|e| e[0] == 1);
    let off = t1.filter_terms(|e| wdeg(e) != 1);
    if !off.is_zero() {
        return Err(OtError::Stratum {
            stratum: "t^1".into(),
            detail: format!("{} terms not linear in w", off.num_terms()),
        });
    }
    let eighth = Scalar::ratio(1, 8);
    let tangent_positions: Vec<usize> = (1..=tdim).collect();
    let mut p = Vec::with_capacity(wdim);
    for a in 0..wdim {
        let slice = t1.filter_terms(|e| e[wbase + a] == 1);
        let mut pa = MPoly::zero(new_n);
        for (m, c) in slice.terms() {
            let mut e = m.0.clone();
            e[0] = 0;
            e[wbase + a] = 0;
            pa.add_term(Mono(e), c * &eighth);
        }
        p.push(pa.project(&tangent_positions));
    }

    // t⁰, w-linear: -8 Σ q^a w_a with q^a cubic in the tangent variables
    let t0 = h.filter_terms(|e| e[0] == 0);
    let minus_eighth = Scalar::ratio(-1, 8);
    let mut q = Vec::with_capacity(wdim);
    for a in 0..wdim {
        let slice = t0.filter_terms(|e| wdeg(e) == 1 && e[wbase + a] == 1);
        let mut qa = MPoly::zero(new_n);
        for (m, c) in slice.terms() {
            let mut e = m.0.clone();
            e[wbase + a] = 0;
            qa.add_term(Mono(e), c * &minus_eighth);
        }
        q.push(qa.project(&tangent_positions));
    }

    // remaining t⁰ terms against the expansion formula
    let ysq = {
        let mut s = MPoly::zero(new_n);
        for v in 0..tdim {
            let mut e = vec![0u8; new_n];
            e[1 + v] = 2;
            s.add_term(Mono(e), Scalar::int(1));
        }
        s
    };
    let wsq = {
        let mut s = MPoly::zero(new_n);
        for a in 0..wdim {
            let mut e = vec![0u8; new_n];
            e[wbase + a] = 2;
            s.add_term(Mono(e), Scalar::int(1));
        }
        s
    };
    let mut expect = ysq
        .mul(&ysq)
        .sub(&ysq.mul(&wsq).scale(&Scalar::int(6)))
        .add(&wsq.mul(&wsq));
    for pa in &p {
        let lifted = lift_tangent(pa, new_n);
        expect = expect.sub(&lifted.mul(&lifted).scale(&Scalar::int(2)));
    }
    for (a, qa) in q.iter().enumerate() {
        let lifted = lift_tangent(qa, new_n);
        expect = expect.sub(&lifted.mul(&MPoly::var(new_n, wbase + a)).scale(&Scalar::int(8)));
    }
    for (a, pa) in p.iter().enumerate() {
        for (b, pb) in p.iter().enumerate() {
            let g = lift_tangent(&pa.grad_inner(pb), new_n);
            let wawb = MPoly::var(new_n, wbase + a).mul(&MPoly::var(new_n, wbase + b));
            expect = expect.add(&g.mul(&wawb).scale(&Scalar::int(2)));
        }
    }
    let residual_ok = t0 == expect;

    Ok(SecondThirdForms {
        m1,
        m2,
        p,
        q,
        residual_ok,
    })
}

/// Rebuilds the full expansion polynomial from extracted forms; used by the
/// round-trip test of the extraction rules.
pub(crate) fn rebuild_expansion(forms: &SecondThirdForms) -> MPoly {
    let (m1, m2) = (forms.m1, forms.m2);
    let tdim = 2 * m2 + m1;
    let wdim = m1 + 1;
    let new_n = 1 + tdim + wdim;
    let wbase = 1 + tdim;
    let t = MPoly::var(new_n, 0);

    let mut ysq = MPoly::zero(new_n);
    for v in 0..tdim {
        ysq = ysq.add(&MPoly::var(new_n, 1 + v).pow(2));
    }
    let mut wsq = MPoly::zero(new_n);
    for a in 0..wdim {
        wsq = wsq.add(&MPoly::var(new_n, wbase + a).pow(2));
    }

    let mut h = t.pow(4);
    h = h.add(
        &ysq.scale(&Scalar::int(2))
            .sub(&wsq.scale(&Scalar::int(6)))
            .mul(&t.pow(2)),
    );
    for (a, pa) in forms.p.iter().enumerate() {
        let term = lift_tangent(pa, new_n)
            .mul(&MPoly::var(new_n, wbase + a))
            .mul(&t)
            .scale(&Scalar::int(8));
        h = h.add(&term);
    }
    h = h.add(&ysq.mul(&ysq)).sub(&ysq.mul(&wsq).scale(&Scalar::int(6)));
    h = h.add(&wsq.mul(&wsq));
    for pa in &forms.p {
        let lifted = lift_tangent(pa, new_n);
        h = h.sub(&lifted.mul(&lifted).scale(&Scalar::int(2)));
    }
    for (a, qa) in forms.q.iter().enumerate() {
        h = h.sub(
            &lift_tangent(qa, new_n)
                .mul(&MPoly::var(new_n, wbase + a))
                .scale(&Scalar::int(8)),
        );
    }
    for (a, pa) in forms.p.iter().enumerate() {
        for (b, pb) in forms.p.iter().enumerate() {
            let g = lift_tangent(&pa.grad_inner(pb), new_n);
            let wawb = MPoly::var(new_n, wbase + a).mul(&MPoly::var(new_n, wbase + b));
            h = h.add(&g.mul(&wawb).scale(&Scalar::int(2)));
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Shape-operator blocks
// ---------------------------------------------------------------------------

/// The A_a (E₋ → E₊), B_a (E₀ → E₊), C_a (E₀ → E₋) blocks of the shape
/// operators S_a, a = 1..m₁, read off the bilinear coefficients of p_a.
#[derive(Clone, Debug)]
pub struct ShapeBlocks {
    pub m1: usize,
    pub m2: usize,
    pub a: Vec<Mat<Scalar>>,
    pub b: Vec<Mat<Scalar>>,
    pub c: Vec<Mat<Scalar>>,
}

impl ShapeBlocks {
    /// Assembles S_idx for idx = 0..=m₁: S₀ = diag(I, -I, 0), and for a ≥ 1
    /// the symmetric matrix with blocks A_a, B_a, C_a and zero diagonal.
    pub fn s_matrix(&self, idx: usize) -> Mat<Scalar> {
        let (m1, m2) = (self.m1, self.m2);
        let n = 2 * m2 + m1;
        let mut s = Mat::zeros(n, n);
        if idx == 0 {
            for i in 0..m2 {
                s[(i, i)] = Scalar::int(1);
                s[(m2 + i, m2 + i)] = Scalar::int(-1);
            }
            return s;
        }
        let a = &self.a[idx - 1];
        let b = &self.b[idx - 1];
        let c = &self.c[idx - 1];
        s.set_block(0, m2, a);
        s.set_block(m2, 0, &a.transpose());
        s.set_block(0, 2 * m2, b);
        s.set_block(2 * m2, 0, &b.transpose());
        s.set_block(m2, 2 * m2, c);
        s.set_block(2 * m2, m2, &c.transpose());
        s
    }
}

/// Reads the blocks out of extracted forms. Fails if p₀ is not the diagonal
/// form or if any p_a (a ≥ 1) has a coefficient outside the block pattern
/// (an E₊×E₊, E₋×E₋, E₀×E₀ or diagonal entry).
pub fn shape_blocks(forms: &SecondThirdForms) -> Result<ShapeBlocks, FormsError> {
    let (m1, m2) = (forms.m1, forms.m2);
    let tdim = forms.tangent_dim();

    let mut p0_expect = MPoly::zero(tdim);
    for alpha in 0..m2 {
        p0_expect = p0_expect.add(&MPoly::var(tdim, alpha).pow(2));
    }
    for mu in 0..m2 {
        p0_expect = p0_expect.sub(&MPoly::var(tdim, m2 + mu).pow(2));
    }
    if forms.p[0] != p0_expect {
        return Err(FormsError::P0Shape);
    }

    let half = Scalar::ratio(1, 2);
    let mut a_mats = Vec::with_capacity(m1);
    let mut b_mats = Vec::with_capacity(m1);
    let mut c_mats = Vec::with_capacity(m1);
    for a in 1..=m1 {
        let mut am = Mat::zeros(m2, m2);
        let mut bm = Mat::zeros(m2, m1);
        let mut cm = Mat::zeros(m2, m1);
        for (mono, coeff) in forms.p[a].terms() {
            let vars: Vec<usize> = mono
                .0
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
                .collect();
            let bad = || FormsError::OffPattern {
                a,
                mono: format!("{:?}", mono.0),
            };
            if vars.len() != 2 || vars[0] == vars[1] {
                return Err(bad());
            }
            let (i, j) = (vars[0], vars[1]);
            let half_coeff = coeff * &half;
            if i < m2 && (m2..2 * m2).contains(&j) {
                am[(i, j - m2)] = half_coeff;
            } else if i < m2 && j >= 2 * m2 {
                bm[(i, j - 2 * m2)] = half_coeff;
            } else if (m2..2 * m2).contains(&i) && j >= 2 * m2 {
                cm[(i - m2, j - 2 * m2)] = half_coeff;
            } else {
                return Err(bad());
            }
        }
        a_mats.push(am);
        b_mats.push(bm);
        c_mats.push(cm);
    }
    Ok(ShapeBlocks {
        m1,
        m2,
        a: a_mats,
        b: b_mats,
        c: c_mats,
    })
}

// ---------------------------------------------------------------------------
// Displayed data of the two examples
// ---------------------------------------------------------------------------

fn mat2(entries: [[i64; 2]; 2]) -> Mat<Scalar> {
    Mat::from_fn(2, 2, |i, j| Scalar::int(entries[i][j]))
}

/// Assembles a square matrix from a grid of 2×2 blocks named "0", "I", "J",
/// "K", "L" with an optional leading minus sign, padded with zero rows and
/// columns up to `size`.
fn block_matrix(grid: &[[&str; 4]], size: usize) -> Mat<Scalar> {
    let mut m = Mat::zeros(size, size);
    for (bi, row) in grid.iter().enumerate() {
        for (bj, &name) in row.iter().enumerate() {
            let (neg, base) = match name.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, name),
            };
            let block = match base {
                "0" => continue,
                "I" => mat2([[1, 0], [0, 1]]),
                "J" => mat2([[0, -1], [1, 0]]),
                "K" => mat2([[1, 0], [0, -1]]),
                "L" => mat2([[0, 1], [1, 0]]),
                other => panic!("unknown block {other}"),
            };
            let block = if neg { block.neg() } else { block };
            m.set_block(2 * bi, 2 * bj, &block);
        }
    }
    m
}

/// The five displayed second-form components of the {4,5} example, in the
/// tangent ring (x₁…x₅, y₁…y₅, z₁…z₄).
pub fn h45_displayed_p() -> Vec<MPoly> {
    let n = 14;
    let x = |a: usize| MPoly::var(n, a - 1);
    let y = |m: usize| MPoly::var(n, 5 + m - 1);
    let z = |p: usize| MPoly::var(n, 10 + p - 1);
    let two = Scalar::int(2);
    let s2 = Scalar::sqrt2();

    let mut p0 = MPoly::zero(n);
    for a in 1..=5 {
        p0 = p0.add(&x(a).pow(2)).sub(&y(a).pow(2));
    }
    let tail = |p: usize| x(5).add(&y(5)).mul(&z(p)).scale(&s2);
    let p1 = x(1)
        .mul(&y(1))
        .add(&x(2).mul(&y(2)))
        .add(&x(3).mul(&y(3)))
        .add(&x(4).mul(&y(4)))
        .scale(&two)
        .add(&tail(1));
    let p2 = x(2)
        .mul(&y(1))
        .sub(&x(1).mul(&y(2)))
        .add(&x(3).mul(&y(4)))
        .sub(&x(4).mul(&y(3)))
        .scale(&two)
        .add(&tail(2));
    let p3 = x(3)
        .mul(&y(1))
        .sub(&x(1).mul(&y(3)))
        .add(&x(4).mul(&y(2)))
        .sub(&x(2).mul(&y(4)))
        .scale(&two)
        .add(&tail(3));
    let p4 = x(2)
        .mul(&y(3))
        .sub(&x(3).mul(&y(2)))
        .add(&x(4).mul(&y(1)))
        .sub(&x(1).mul(&y(4)))
        .scale(&two)
        .add(&tail(4));
    vec![p0, p1, p2, p3, p4]
}

/// The displayed third-form component q̃⁰ of the {4,5} example.
pub fn h45_displayed_q0() -> MPoly {
    let n = 14;
    let x = |a: usize| MPoly::var(n, a - 1);
    let y = |m: usize| MPoly::var(n, 5 + m - 1);
    let z = |p: usize| MPoly::var(n, 10 + p - 1);
    let m2s = Scalar::int(-2);

    let s4 = x(1)
        .mul(&y(3))
        .add(&x(3).mul(&y(1)))
        .add(&x(2).mul(&y(4)))
        .add(&x(4).mul(&y(2)));
    let s3 = x(1)
        .mul(&y(4))
        .neg()
        .sub(&x(4).mul(&y(1)))
        .add(&x(2).mul(&y(3)))
        .add(&x(3).mul(&y(2)));
    let s2 = x(1)
        .mul(&y(1))
        .add(&x(2).mul(&y(2)))
        .sub(&x(3).mul(&y(3)))
        .sub(&x(4).mul(&y(4)));
    let s1 = x(1)
        .mul(&y(2))
        .sub(&x(2).mul(&y(1)))
        .add(&x(3).mul(&y(4)))
        .sub(&x(4).mul(&y(3)));
    z(4)
        .mul(&s4)
        .add(&z(3).mul(&s3))
        .add(&z(2).mul(&s2))
        .add(&z(1).mul(&s1))
        .scale(&m2s)
}

/// The displayed 5×5 matrices A₁…A₄ of the {4,5} example.
pub fn h45_displayed_a() -> Vec<Mat<Scalar>> {
    [
        [["I", "0", "0", "0"], ["0", "I", "0", "0"]],
        [["J", "0", "0", "0"], ["0", "-J", "0", "0"]],
        [["0", "-I", "0", "0"], ["I", "0", "0", "0"]],
        [["0", "J", "0", "0"], ["J", "0", "0", "0"]],
    ]
    .iter()
    .map(|grid| {
        let mut m = Mat::zeros(5, 5);
        let upper = block_matrix(&grid[..], 4);
        m.set_block(0, 0, &upper);
        m
    })
    .collect()
}

/// The displayed 9×9 matrices A₃…A₈ of the {6,9} example (upper 8×8 block
/// plus a zero ninth row and column).
pub fn fkm_displayed_a() -> Vec<Mat<Scalar>> {
    [
        [
            ["0", "I", "0", "0"],
            ["-I", "0", "0", "0"],
            ["0", "0", "0", "-I"],
            ["0", "0", "I", "0"],
        ],
        [
            ["0", "-J", "0", "0"],
            ["-J", "0", "0", "0"],
            ["0", "0", "0", "J"],
            ["0", "0", "J", "0"],
        ],
        [
            ["0", "0", "I", "0"],
            ["0", "0", "0", "I"],
            ["-I", "0", "0", "0"],
            ["0", "-I", "0", "0"],
        ],
        [
            ["0", "0", "-J", "0"],
            ["0", "0", "0", "-J"],
            ["-J", "0", "0", "0"],
            ["0", "-J", "0", "0"],
        ],
        [
            ["0", "0", "0", "K"],
            ["0", "0", "-K", "0"],
            ["0", "K", "0", "0"],
            ["-K", "0", "0", "0"],
        ],
        [
            ["0", "0", "0", "L"],
            ["0", "0", "-L", "0"],
            ["0", "L", "0", "0"],
            ["-L", "0", "0", "0"],
        ],
    ]
    .iter()
    .map(|grid| {
        let mut m = Mat::zeros(9, 9);
        m.set_block(0, 0, &block_matrix(&grid[..], 8));
        m
    })
    .collect()
}

/// The displayed B_a pattern shared by both examples: the only nonzero entry
/// is (m₂, a) = 1/√2, with B_a = C_a.
pub fn displayed_b(m1: usize, m2: usize) -> Vec<Mat<Scalar>> {
    (1..=m1)
        .map(|a| {
            let mut m = Mat::zeros(m2, m1);
            m[(m2 - 1, a - 1)] = Scalar::inv_sqrt2();
            m
        })
        .collect()
}

/// The displayed third-form matrices T̃¹…T̃⁴ of the {4,5} example.
pub fn h45_displayed_t() -> Vec<Mat<Scalar>> {
    [
        [["-J", "0"], ["0", "-J"]],
        [["I", "0"], ["0", "-I"]],
        [["0", "J"], ["-J", "0"]],
        [["0", "I"], ["I", "0"]],
    ]
    .iter()
    .map(|grid| {
        let rows: Vec<[&str; 4]> = grid
            .iter()
            .map(|r| [r[0], r[1], "0", "0"])
            .collect();
        block_matrix(&rows, 4)
    })
    .collect()
}

/// The displayed third-form matrices T̃³…T̃⁸ of the {6,9} example.
pub fn fkm_displayed_t() -> Vec<Mat<Scalar>> {
    [
        [
            ["0", "J", "0", "0"],
            ["J", "0", "0", "0"],
            ["0", "0", "0", "J"],
            ["0", "0", "J", "0"],
        ],
        [
            ["0", "I", "0", "0"],
            ["-I", "0", "0", "0"],
            ["0", "0", "0", "I"],
            ["0", "0", "-I", "0"],
        ],
        [
            ["0", "0", "J", "0"],
            ["0", "0", "0", "-J"],
            ["J", "0", "0", "0"],
            ["0", "-J", "0", "0"],
        ],
        [
            ["0", "0", "I", "0"],
            ["0", "0", "0", "-I"],
            ["-I", "0", "0", "0"],
            ["0", "I", "0", "0"],
        ],
        [
            ["0", "0", "0", "L"],
            ["0", "0", "L", "0"],
            ["0", "-L", "0", "0"],
            ["-L", "0", "0", "0"],
        ],
        [
            ["0", "0", "0", "-K"],
            ["0", "0", "-K", "0"],
            ["0", "K", "0", "0"],
            ["K", "0", "0", "0"],
        ],
    ]
    .iter()
    .map(|grid| block_matrix(&grid[..], 8))
    .collect()
}

// ---------------------------------------------------------------------------
// Identity suites on the blocks
// ---------------------------------------------------------------------------

fn all_zero(m: &Mat<Scalar>) -> bool {
    m.is_zero()
}

/// The six block-identity families, the quaternion/Clifford relations of the
/// upper blocks, and the rank-1 structure of the B pencil. `designated` is
/// the 1-based index whose (A, B, C) plays the role of the normalized pair.
pub fn block_identity_suite(blocks: &ShapeBlocks, designated: usize, example: ExampleId) -> Vec<Check> {
    let mut checks = Vec::new();
    let m1 = blocks.m1;
    let d = designated;
    let a0 = &blocks.a[d - 1];
    let b0 = &blocks.b[d - 1];
    let c0 = &blocks.c[d - 1];
    let two = Scalar::int(2);

    let mut fail1: Option<usize> = None;
    let mut fail2: Option<usize> = None;
    let mut fail3: Option<usize> = None;
    for j in 1..=m1 {
        if j == d {
            continue;
        }
        let (aj, bj, cj) = (&blocks.a[j - 1], &blocks.b[j - 1], &blocks.c[j - 1]);
        let lhs1 = aj
            .mul(&a0.transpose())
            .add(&a0.mul(&aj.transpose()))
            .add(&bj.mul(&b0.transpose()).scale(&two))
            .add(&b0.mul(&bj.transpose()).scale(&two));
        if !all_zero(&lhs1) && fail1.is_none() {
            fail1 = Some(j);
        }
        let lhs2 = aj
            .mul(&a0.transpose())
            .add(&a0.mul(&aj.transpose()))
            .add(&cj.mul(&c0.transpose()).scale(&two))
            .add(&c0.mul(&cj.transpose()).scale(&two));
        if !all_zero(&lhs2) && fail2.is_none() {
            fail2 = Some(j);
        }
        let lhs3 = aj
            .mul(c0)
            .mul(&b0.transpose())
            .add(&bj.mul(&c0.transpose()).mul(&a0.transpose()))
            .add(&a0.mul(cj).mul(&b0.transpose()));
        if !lhs3.is_skew() && fail3.is_none() {
            fail3 = Some(j);
        }
    }
    checks.push(Check::from_bool(
        "blocks:AAt+2BBt-mixed-zero",
        fail1.is_none(),
        format!("fails at j = {:?}", fail1),
    ));
    checks.push(Check::from_bool(
        "blocks:AAt+2CCt-mixed-zero",
        fail2.is_none(),
        format!("fails at j = {:?}", fail2),
    ));
    checks.push(Check::from_bool(
        "blocks:ACB-skew",
        fail3.is_none(),
        format!("fails at j = {:?}", fail3),
    ));

    let mut fail4: Option<usize> = None;
    for j in 1..=m1 {
        let (aj, bj) = (&blocks.a[j - 1], &blocks.b[j - 1]);
        let lhs = aj
            .mul(&aj.transpose())
            .add(&bj.mul(&bj.transpose()).scale(&two));
        if !lhs.is_identity() && fail4.is_none() {
            fail4 = Some(j);
        }
    }
    checks.push(Check::from_bool(
        "blocks:AAt+2BBt-identity",
        fail4.is_none(),
        format!("fails at j = {:?}", fail4),
    ));

    let mut fail5: Option<(usize, usize)> = None;
    for j in 1..=m1 {
        for k in (j + 1)..=m1 {
            let (aj, bj) = (&blocks.a[j - 1], &blocks.b[j - 1]);
            let (ak, bk) = (&blocks.a[k - 1], &blocks.b[k - 1]);
            let lhs = aj
                .mul(&ak.transpose())
                .add(&ak.mul(&aj.transpose()))
                .add(&bj.mul(&bk.transpose()).scale(&two))
                .add(&bk.mul(&bj.transpose()).scale(&two));
            if !all_zero(&lhs) && fail5.is_none() {
                fail5 = Some((j, k));
            }
        }
    }
    checks.push(Check::from_bool(
        "blocks:AAt+2BBt-cross-zero",
        fail5.is_none(),
        format!("fails at (j,k) = {:?}", fail5),
    ));

    let mut fail6: Option<usize> = None;
    for j in 1..=m1 {
        let (bj, cj) = (&blocks.b[j - 1], &blocks.c[j - 1]);
        let lhs = bj.transpose().mul(b0).add(&b0.transpose().mul(bj));
        let rhs = cj.transpose().mul(c0).add(&c0.transpose().mul(cj));
        if lhs != rhs && fail6.is_none() {
            fail6 = Some(j);
        }
    }
    checks.push(Check::from_bool(
        "blocks:BtB=CtC",
        fail6.is_none(),
        format!("fails at j = {:?}", fail6),
    ));

    // upper-block algebra relations
    match example {
        ExampleId::H45 => {
            let upper: Vec<Mat<Scalar>> = blocks.a.iter().map(|m| m.block(0, 0, 4, 4)).collect();
            let quaternion = upper[1].mul(&upper[2]) == upper[3].neg();
            checks.push(Check::from_bool(
                "blocks:quaternion-A2A3=-A4",
                quaternion,
                "upper 4x4 product mismatch",
            ));
            let mut anti_ok = true;
            for j in 1..4 {
                for k in 1..4 {
                    let lhs = upper[j].mul(&upper[k]).add(&upper[k].mul(&upper[j]));
                    let expect = if j == k {
                        Mat::identity(4).scale(&Scalar::int(-2))
                    } else {
                        Mat::zeros(4, 4)
                    };
                    anti_ok &= lhs == expect;
                }
            }
            checks.push(Check::from_bool(
                "blocks:quaternion-anticommutation",
                anti_ok,
                "upper 4x4 blocks of A2,A3,A4",
            ));
        }
        ExampleId::Fkm69 => {
            let upper: Vec<Mat<Scalar>> = blocks.a.iter().map(|m| m.block(0, 0, 8, 8)).collect();
            let mut c6_ok = true;
            for j in 0..upper.len() {
                for k in 0..upper.len() {
                    let lhs = upper[j].mul(&upper[k]).add(&upper[k].mul(&upper[j]));
                    let expect = if j == k {
                        Mat::identity(8).scale(&Scalar::int(-2))
                    } else {
                        Mat::zeros(8, 8)
                    };
                    c6_ok &= lhs == expect;
                }
            }
            checks.push(Check::from_bool(
                "blocks:c6-anticommutation",
                c6_ok,
                "upper 8x8 blocks of A3..A8",
            ));
            // the C₅ generators -A₃A_j, j = 4..8
            let gens: Vec<Mat<Scalar>> = (1..upper.len())
                .map(|j| upper[0].mul(&upper[j]).neg())
                .collect();
            let mut c5_ok = true;
            for i in 0..gens.len() {
                for j in 0..gens.len() {
                    let lhs = gens[i].mul(&gens[j]).add(&gens[j].mul(&gens[i]));
                    let expect = if i == j {
                        Mat::identity(8).scale(&Scalar::int(-2))
                    } else {
                        Mat::zeros(8, 8)
                    };
                    c5_ok &= lhs == expect;
                }
            }
            checks.push(Check::from_bool(
                "blocks:c5-generators-anticommute",
                c5_ok,
                "-A3Aj generators",
            ));
        }
    }

    // rank-1: every B_a has rank 1, and every combination Σ c_a B_a has all
    // 2×2 minors identically zero as polynomials in c
    let rank_each = blocks.b.iter().all(|b| b.rank() == 1);
    checks.push(Check::from_bool(
        "blocks:B-rank-one-each",
        rank_each,
        "some B_a does not have rank 1",
    ));
    let (m2, m1n) = (blocks.m2, blocks.m1);
    let entries: Vec<Vec<MPoly>> = (0..m2)
        .map(|r| {
            (0..m1n)
                .map(|cidx| {
                    let mut e = MPoly::zero(m1n);
                    for (a, b) in blocks.b.iter().enumerate() {
                        e = e.add(&MPoly::var(m1n, a).scale(&b[(r, cidx)]));
                    }
                    e
                })
                .collect()
        })
        .collect();
    let mut minors_ok = true;
    for r1 in 0..m2 {
        for r2 in (r1 + 1)..m2 {
            for c1 in 0..m1n {
                for c2 in (c1 + 1)..m1n {
                    let det = entries[r1][c1]
                        .mul(&entries[r2][c2])
                        .sub(&entries[r1][c2].mul(&entries[r2][c1]));
                    minors_ok &= det.is_zero();
                }
            }
        }
    }
    checks.push(Check::from_bool(
        "blocks:B-pencil-rank-le-1",
        minors_ok,
        "a 2x2 minor of sum c_a B_a is a nonzero polynomial",
    ));

    checks
}

// ---------------------------------------------------------------------------
// Third-form tensor
// ---------------------------------------------------------------------------

/// The matrices T^p = (S^p_{αμ}) over the reduced index range 1..m₂-1 (the
/// distinguished last index is excluded; its entries must vanish).
#[derive(Clone, Debug)]
pub struct ThirdFormTensor {
    pub m1: usize,
    pub m2: usize,
    pub t: Vec<Mat<Scalar>>,
}

impl ThirdFormTensor {
    /// S^p_{αμ} over the full index range, with the excluded index giving 0.
    /// All indices 0-based; p in 0..m1, alpha/mu in 0..m2.
    pub fn entry(&self, p: usize, alpha: usize, mu: usize) -> Scalar {
        let red = self.m2 - 1;
        if alpha >= red || mu >= red {
            Scalar::default()
        } else {
            self.t[p][(alpha, mu)].clone()
        }
    }
}

/// Reads T^p_{αμ} = -(coefficient of x_α y_μ z_p in q⁰)/2. Fails on any q⁰
/// monomial that is not of x·y·z type, and on any nonzero entry at the
/// excluded index α = m₂ or μ = m₂.
pub fn third_form_tensor(forms: &SecondThirdForms) -> Result<ThirdFormTensor, FormsError> {
    let (m1, m2) = (forms.m1, forms.m2);
    let red = m2 - 1;
    let mut t = vec![Mat::zeros(red, red); m1];
    let minus_half = Scalar::ratio(-1, 2);
    for (mono, coeff) in forms.q[0].terms() {
        let vars: Vec<usize> = mono
            .0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
            .collect();
        if vars.len() != 3 {
            return Err(FormsError::Q0Structure(format!("{:?}", mono.0)));
        }
        let (i, j, k) = (vars[0], vars[1], vars[2]);
        if !(i < m2 && (m2..2 * m2).contains(&j) && k >= 2 * m2) {
            return Err(FormsError::Q0Structure(format!("{:?}", mono.0)));
        }
        let (alpha, mu, p) = (i, j - m2, k - 2 * m2);
        if alpha >= red || mu >= red {
            return Err(FormsError::ExcludedIndex {
                p: p + 1,
                alpha: alpha + 1,
                mu: mu + 1,
            });
        }
        t[p][(alpha, mu)] = coeff * &minus_half;
    }
    Ok(ThirdFormTensor { m1, m2, t })
}

// ---------------------------------------------------------------------------
// Mirror identities
// ---------------------------------------------------------------------------

/// The two identities connecting the S^a data at x with the S^p data at the
/// mirror point, verified over every index tuple:
/// Σ_a S^a_{pα}S^a_{qβ} + Σ_a S^a_{qα}S^a_{pβ}
///   + ½ Σ_μ (S^p_{αμ}S^q_{βμ} + S^q_{αμ}S^p_{βμ}) = δ_{pq}δ_{αβ},
/// and its α↔μ counterpart.
pub fn mirror_check(blocks: &ShapeBlocks, t: &ThirdFormTensor) -> Vec<Check> {
    let (m1, m2) = (blocks.m1, blocks.m2);
    let half = Scalar::ratio(1, 2);

    let mut first_fail: Option<(usize, usize, usize, usize)> = None;
    for p in 0..m1 {
        for q in 0..m1 {
            for alpha in 0..m2 {
                for beta in 0..m2 {
                    let mut acc = Scalar::default();
                    for a in 0..m1 {
                        let b = &blocks.b[a];
                        acc = &acc + &(&b[(alpha, p)] * &b[(beta, q)]);
                        acc = &acc + &(&b[(alpha, q)] * &b[(beta, p)]);
                    }
                    let mut tsum = Scalar::default();
                    for mu in 0..m2 {
                        tsum = &tsum + &(&t.entry(p, alpha, mu) * &t.entry(q, beta, mu));
                        tsum = &tsum + &(&t.entry(q, alpha, mu) * &t.entry(p, beta, mu));
                    }
                    acc = &acc + &(&half * &tsum);
                    let expect = if p == q && alpha == beta {
                        Scalar::int(1)
                    } else {
                        Scalar::default()
                    };
                    if acc != expect && first_fail.is_none() {
                        first_fail = Some((p + 1, q + 1, alpha + 1, beta + 1));
                    }
                }
            }
        }
    }
    let alpha_check = Check::from_bool(
        "mirror:alpha-range",
        first_fail.is_none(),
        format!("fails at (p,q,alpha,beta) = {:?}", first_fail),
    );

    let mut first_fail2: Option<(usize, usize, usize, usize)> = None;
    for p in 0..m1 {
        for q in 0..m1 {
            for mu in 0..m2 {
                for nu in 0..m2 {
                    let mut acc = Scalar::default();
                    for a in 0..m1 {
                        let c = &blocks.c[a];
                        acc = &acc + &(&c[(mu, p)] * &c[(nu, q)]);
                        acc = &acc + &(&c[(mu, q)] * &c[(nu, p)]);
                    }
                    let mut tsum = Scalar::default();
                    for alpha in 0..m2 {
                        tsum = &tsum + &(&t.entry(p, alpha, mu) * &t.entry(q, alpha, nu));
                        tsum = &tsum + &(&t.entry(q, alpha, mu) * &t.entry(p, alpha, nu));
                    }
                    acc = &acc + &(&half * &tsum);
                    let expect = if p == q && mu == nu {
                        Scalar::int(1)
                    } else {
                        Scalar::default()
                    };
                    if acc != expect && first_fail2.is_none() {
                        first_fail2 = Some((p + 1, q + 1, mu + 1, nu + 1));
                    }
                }
            }
        }
    }
    let mu_check = Check::from_bool(
        "mirror:mu-range",
        first_fail2.is_none(),
        format!("fails at (p,q,mu,nu) = {:?}", first_fail2),
    );

    vec![alpha_check, mu_check]
}

// ---------------------------------------------------------------------------
// p·q and gradient identities
// ---------------------------------------------------------------------------

/// Σ_a p_a q^a = 0 plus the two gradient identities (for all index pairs):
/// 8⟨∇q^a,∇q^b⟩ = 8(⟨∇p_a,∇p_b⟩|y|² - p_a p_b) + ⟨∇⟨∇p_a,∇p_b⟩, ∇G⟩
///                 - 24 δ_{ab} G - 2 Σ_c ⟨∇p_a,∇p_c⟩⟨∇p_b,∇p_c⟩,
/// with G = Σ p_b² and |y|² the tangent norm.
pub fn pq_gradient_suite(forms: &SecondThirdForms) -> Vec<Check> {
    let n = forms.tangent_dim();
    let mut pq = MPoly::zero(n);
    for (pa, qa) in forms.p.iter().zip(&forms.q) {
        pq = pq.add(&pa.mul(qa));
    }
    let mut checks = vec![Check::from_bool(
        "pq:sum-paqa-zero",
        pq.is_zero(),
        format!("{} residual terms", pq.num_terms()),
    )];

    let norm = MPoly::norm_sq(n);
    let mut g = MPoly::zero(n);
    for pb in &forms.p {
        g = g.add(&pb.mul(pb));
    }
    let grad_inners: Vec<Vec<MPoly>> = forms
        .p
        .iter()
        .map(|pa| forms.p.iter().map(|pb| pa.grad_inner(pb)).collect())
        .collect();

    let mut diag_fail: Option<usize> = None;
    let mut off_fail: Option<(usize, usize)> = None;
    for a in 0..forms.p.len() {
        for b in a..forms.p.len() {
            let lhs = forms.q[a].grad_inner(&forms.q[b]).scale(&Scalar::int(8));
            let mut rhs = grad_inners[a][b]
                .mul(&norm)
                .sub(&forms.p[a].mul(&forms.p[b]))
                .scale(&Scalar::int(8));
            rhs = rhs.add(&grad_inners[a][b].grad_inner(&g));
            if a == b {
                rhs = rhs.sub(&g.scale(&Scalar::int(24)));
            }
            for c in 0..forms.p.len() {
                rhs = rhs.sub(&grad_inners[a][c].mul(&grad_inners[b][c]).scale(&Scalar::int(2)));
            }
            if lhs != rhs {
                if a == b && diag_fail.is_none() {
                    diag_fail = Some(a);
                } else if a != b && off_fail.is_none() {
                    off_fail = Some((a, b));
                }
            }
        }
    }
    checks.push(Check::from_bool(
        "pq:grad-identity-diagonal",
        diag_fail.is_none(),
        format!("fails at a = {:?}", diag_fail),
    ));
    checks.push(Check::from_bool(
        "pq:grad-identity-offdiagonal",
        off_fail.is_none(),
        format!("fails at (a,b) = {:?}", off_fail),
    ));
    checks
}

// ---------------------------------------------------------------------------
// Circle product
// ---------------------------------------------------------------------------

/// The normed algebra underlying the circle product of each example, with the
/// index bookkeeping between algebra coordinates and frame indices: the
/// reduced E₊/E₋ range is the whole algebra, and the E₀ range occupies the
/// coordinates starting at `z_offset`.
struct CircAlgebra {
    dim: usize,
    z_offset: usize,
    quat: bool,
}

impl CircAlgebra {
    fn for_example(example: ExampleId) -> Self {
        match example {
            ExampleId::H45 => CircAlgebra {
                dim: 4,
                z_offset: 0,
                quat: true,
            },
            ExampleId::Fkm69 => CircAlgebra {
                dim: 8,
                z_offset: 2,
                quat: false,
            },
        }
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        if self.quat {
            let qa = Quaternion(std::array::from_fn(|i| a[i].clone()));
            let qb = Quaternion(std::array::from_fn(|i| b[i].clone()));
            qa.mul(&qb).0.to_vec()
        } else {
            let oa = Octonion(std::array::from_fn(|i| a[i].clone()));
            let ob = Octonion(std::array::from_fn(|i| b[i].clone()));
            oa.mul(&ob).0.to_vec()
        }
    }

    /// X∘Y = Σ_p S^p(X,Y) e_{z(p)} as an algebra element.
    fn circle(&self, t: &ThirdFormTensor, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::default(); self.dim];
        for p in 0..t.m1 {
            let mut acc = Scalar::default();
            for alpha in 0..self.dim {
                for mu in 0..self.dim {
                    acc = &acc + &(&t.t[p][(alpha, mu)] * &(&x[alpha] * &y[mu]));
                }
            }
            out[self.z_offset + p] = acc;
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::default(); self.dim];
        v[i] = Scalar::int(1);
        v
    }
}

fn inner(u: &[Scalar], v: &[Scalar]) -> Scalar {
    crate::mat::dot(u, v)
}

/// The circle-product identities: ⟨X∘Y, e_p⟩ = ⟨T^p(Y), X⟩ on basis pairs,
/// ⟨(YZ)∘Y, Z⟩ = 0 and its two polarizations on all basis tuples and 20
/// seeded rational draws, plus (for the {6,9} example) skew-symmetry, the
/// zero upper-left 2×2 block, and pairwise anticommutation of the T^p.
pub fn circ_suite(t: &ThirdFormTensor, example: ExampleId, seed: u64) -> Vec<Check> {
    let alg = CircAlgebra::for_example(example);
    let dim = alg.dim;
    let mut checks = Vec::new();

    // Eq-useful: the two evaluation routes agree on basis pairs
    let mut useful_ok = true;
    for alpha in 0..dim {
        for mu in 0..dim {
            let x = alg.basis(alpha);
            let y = alg.basis(mu);
            let circ = alg.circle(t, &x, &y);
            for p in 0..t.m1 {
                let lhs = circ[alg.z_offset + p].clone();
                let mut rhs = Scalar::default();
                for m in 0..dim {
                    rhs = &rhs + &(&t.t[p][(alpha, m)] * &y[m]);
                }
                useful_ok &= lhs == rhs;
            }
        }
    }
    checks.push(Check::from_bool(
        "circ:useful-pairing",
        useful_ok,
        "⟨X∘Y,e_p⟩ != ⟨T^p(Y),X⟩ on a basis pair",
    ));

    // z-span basis indices inside the algebra
    let z_basis: Vec<usize> = (0..t.m1).map(|p| alg.z_offset + p).collect();

    let yz_value = |y: &[Scalar], z: &[Scalar]| -> Scalar {
        let yz = alg.mul(y, z);
        inner(&alg.circle(t, &yz, y), z)
    };
    let mut yz_ok = true;
    for i in 0..dim {
        for &jz in &z_basis {
            let y = alg.basis(i);
            let z = alg.basis(jz);
            yz_ok &= yz_value(&y, &z).is_zero();
        }
    }
    checks.push(Check::from_bool(
        "circ:yz-basis",
        yz_ok,
        "⟨(YZ)∘Y,Z⟩ != 0 on a basis pair",
    ));

    // polarizations
    let mut symm1_ok = true;
    for i1 in 0..dim {
        for i2 in 0..dim {
            for &jz in &z_basis {
                let y1 = alg.basis(i1);
                let y2 = alg.basis(i2);
                let z = alg.basis(jz);
                let v1 = inner(&alg.circle(t, &alg.mul(&y1, &z), &y2), &z);
                let v2 = inner(&alg.circle(t, &alg.mul(&y2, &z), &y1), &z);
                symm1_ok &= (&v1 + &v2).is_zero();
            }
        }
    }
    checks.push(Check::from_bool(
        "circ:symm-polarized-in-y",
        symm1_ok,
        "first polarization fails on a basis triple",
    ));

    let mut symm2_ok = true;
    for i in 0..dim {
        for &j1 in &z_basis {
            for &j2 in &z_basis {
                let y = alg.basis(i);
                let z1 = alg.basis(j1);
                let z2 = alg.basis(j2);
                let v1 = inner(&alg.circle(t, &alg.mul(&y, &z1), &y), &z2);
                let v2 = inner(&alg.circle(t, &alg.mul(&y, &z2), &y), &z1);
                symm2_ok &= (&v1 + &v2).is_zero();
            }
        }
    }
    checks.push(Check::from_bool(
        "circ:symm-polarized-in-z",
        symm2_ok,
        "second polarization fails on a basis triple",
    ));

    // 20 seeded random rational draws, exact arithmetic
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |support: &[usize], dim: usize| -> Vec<Scalar> {
        let mut v = vec![Scalar::default(); dim];
        for &i in support {
            v[i] = Scalar::ratio(rng.random_range(-16i64..=16), 8);
        }
        v
    };
    let full: Vec<usize> = (0..dim).collect();
    let mut random_ok = true;
    for _ in 0..20 {
        let y = draw(&full, dim);
        let z = draw(&z_basis, dim);
        random_ok &= yz_value(&y, &z).is_zero();
        let y2 = draw(&full, dim);
        let z2 = draw(&z_basis, dim);
        let s1 = inner(&alg.circle(t, &alg.mul(&y, &z), &y2), &z);
        let s1b = inner(&alg.circle(t, &alg.mul(&y2, &z), &y), &z);
        random_ok &= (&s1 + &s1b).is_zero();
        let s2 = inner(&alg.circle(t, &alg.mul(&y, &z), &y), &z2);
        let s2b = inner(&alg.circle(t, &alg.mul(&y, &z2), &y), &z);
        random_ok &= (&s2 + &s2b).is_zero();
    }
    checks.push(Check::from_bool(
        "circ:yz-symm-random-draws",
        random_ok,
        "an exact identity fails on a seeded rational draw",
    ));

    if example == ExampleId::Fkm69 {
        let mut skew_ok = true;
        let mut corner_ok = true;
        for m in &t.t {
            skew_ok &= m.is_skew();
            corner_ok &= m.block(0, 0, 2, 2).is_zero();
        }
        checks.push(Check::from_bool(
            "circ:T-skew-symmetric",
            skew_ok,
            "a T^p is not skew",
        ));
        checks.push(Check::from_bool(
            "circ:T-zero-upper-corner",
            corner_ok,
            "a T^p has a nonzero upper-left 2x2 block",
        ));
        let mut anti_ok = true;
        for i in 0..t.t.len() {
            for j in (i + 1)..t.t.len() {
                let lhs = t.t[i].mul(&t.t[j]).add(&t.t[j].mul(&t.t[i]));
                anti_ok &= lhs.is_zero();
            }
        }
        checks.push(Check::from_bool(
            "circ:T-anticommutation",
            anti_ok,
            "T^iT^j != -T^jT^i for some pair",
        ));
    }

    checks
}

// ---------------------------------------------------------------------------
// Duality cross-check
// ---------------------------------------------------------------------------

/// Verifies the three block relations of the duality map against primal data:
/// at the dual frame, A*_α = -√2(S^a_{pα}), B*_α = -(1/√2)(S^a_{αμ}), and
/// C*_α = -(1/√2)(S^p_{αμ}), where rows run over the upper index. The primal
/// S^a data are the B and A blocks and the S^p data are the third-form T^p.
pub fn duality_block_check(
    primal: &ShapeBlocks,
    t: &ThirdFormTensor,
    dual: &ShapeBlocks,
) -> Vec<Check> {
    let (m1, m2) = (primal.m1, primal.m2);
    debug_assert_eq!(dual.m1, m2);
    debug_assert_eq!(dual.m2, m1);
    let s2 = Scalar::sqrt2();
    let h = Scalar::inv_sqrt2();

    let mut a_fail = None;
    let mut b_fail = None;
    let mut c_fail = None;
    for alpha in 0..m2 {
        let a_expect = Mat::from_fn(m1, m1, |a, p| -&(&s2 * &primal.b[a][(alpha, p)]));
        if dual.a[alpha] != a_expect && a_fail.is_none() {
            a_fail = Some(alpha + 1);
        }
        let b_expect = Mat::from_fn(m1, m2, |a, mu| -&(&h * &primal.a[a][(alpha, mu)]));
        if dual.b[alpha] != b_expect && b_fail.is_none() {
            b_fail = Some(alpha + 1);
        }
        let c_expect = Mat::from_fn(m1, m2, |p, mu| -&(&h * &t.entry(p, alpha, mu)));
        if dual.c[alpha] != c_expect && c_fail.is_none() {
            c_fail = Some(alpha + 1);
        }
    }
    vec![
        Check::from_bool(
            "duality:A-star",
            a_fail.is_none(),
            format!("fails at alpha = {:?}", a_fail),
        ),
        Check::from_bool(
            "duality:B-star",
            b_fail.is_none(),
            format!("fails at alpha = {:?}", b_fail),
        ),
        Check::from_bool(
            "duality:C-star",
            c_fail.is_none(),
            format!("fails at alpha = {:?}", c_fail),
        ),
    ]
}

// ---------------------------------------------------------------------------
// Structural reconstruction of the third form
// ---------------------------------------------------------------------------

/// Rebuilds q⁰ and the q^a from the (T, A) data along the second route:
/// q⁰ = -2 Σ S^p_{αμ} x_α y_μ z_p and, for a ≥ 1,
/// q^a = √2(x_{m₂} - y_{m₂}) Σ T^a_{αμ} x_α y_μ
///       + Σ U^a_{αβp} x_α x_β z_p + Σ V^a_{μνp} y_μ y_ν z_p
/// with U^a_{αβp} = ½ Σ_μ (S^p_{αμ}S^a_{βμ} + S^p_{βμ}S^a_{αμ}) and
/// V^a_{μνp} = -½ Σ_α (S^p_{αμ}S^a_{αν} + S^p_{αν}S^a_{αμ}).
pub fn reconstruct_q(blocks: &ShapeBlocks, t: &ThirdFormTensor) -> Vec<MPoly> {
    let (m1, m2) = (blocks.m1, blocks.m2);
    let n = 2 * m2 + m1;
    let red = m2 - 1;
    let xv = |a: usize| MPoly::var(n, a);
    let yv = |m: usize| MPoly::var(n, m2 + m);
    let zv = |p: usize| MPoly::var(n, 2 * m2 + p);
    let half = Scalar::ratio(1, 2);

    let mut out = Vec::with_capacity(m1 + 1);

    let mut q0 = MPoly::zero(n);
    for p in 0..m1 {
        for alpha in 0..red {
            for mu in 0..red {
                let c = &t.t[p][(alpha, mu)] * &Scalar::int(-2);
                if c.is_zero() {
                    continue;
                }
                q0 = q0.add(&xv(alpha).mul(&yv(mu)).mul(&zv(p)).scale(&c));
            }
        }
    }
    out.push(q0);

    for a in 1..=m1 {
        let ta = &t.t[a - 1];
        let aa = &blocks.a[a - 1];
        let mut qa = MPoly::zero(n);
        // √2 (x_{m2} - y_{m2}) Σ T^a_{αμ} x_α y_μ
        let mut bilinear = MPoly::zero(n);
        for alpha in 0..red {
            for mu in 0..red {
                let c = ta[(alpha, mu)].clone();
                if c.is_zero() {
                    continue;
                }
                bilinear = bilinear.add(&xv(alpha).mul(&yv(mu)).scale(&c));
            }
        }
        qa = qa.add(
            &xv(m2 - 1)
                .sub(&yv(m2 - 1))
                .mul(&bilinear)
                .scale(&Scalar::sqrt2()),
        );
        // U and V strata
        for p in 0..m1 {
            let tp = &t.t[p];
            for alpha in 0..red {
                for beta in 0..red {
                    let mut u = Scalar::default();
                    for mu in 0..red {
                        u = &u + &(&tp[(alpha, mu)] * &aa[(beta, mu)]);
                        u = &u + &(&tp[(beta, mu)] * &aa[(alpha, mu)]);
                    }
                    u = &u * &half;
                    if !u.is_zero() {
                        qa = qa.add(&xv(alpha).mul(&xv(beta)).mul(&zv(p)).scale(&u));
                    }
                }
            }
            for mu in 0..red {
                for nu in 0..red {
                    let mut v = Scalar::default();
                    for alpha in 0..red {
                        v = &v + &(&tp[(alpha, mu)] * &aa[(alpha, nu)]);
                        v = &v + &(&tp[(alpha, nu)] * &aa[(alpha, mu)]);
                    }
                    v = -&(&v * &half);
                    if !v.is_zero() {
                        qa = qa.add(&yv(mu).mul(&yv(nu)).mul(&zv(p)).scale(&v));
                    }
                }
            }
        }
        out.push(qa);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_f_45, frame_45};
    use crate::scalar::Scalar;

    fn h45_forms() -> SecondThirdForms {
        ot_expand(&build_f_45(), &frame_45()).unwrap()
    }

    #[test]
    fn h45_extraction_matches_displays() {
        let forms = h45_forms();
        assert!(forms.residual_ok);
        assert_eq!(forms.p, h45_displayed_p());
        assert_eq!(forms.q[0], h45_displayed_q0());
        let blocks = shape_blocks(&forms).unwrap();
        assert_eq!(blocks.a, h45_displayed_a());
        assert_eq!(blocks.b, displayed_b(4, 5));
        assert_eq!(blocks.b, blocks.c);
        let tensor = third_form_tensor(&forms).unwrap();
        assert_eq!(tensor.t, h45_displayed_t());
    }

    #[test]
    fn h45_subst_reproduces_8p0_at_t_w0() {
        // the t·w₀ coefficient of the expanded quartic is 8·p₀
        let f = build_f_45();
        let frame = frame_45();
        let forms = ot_expand(&f, &frame).unwrap();
        let disp = h45_displayed_p();
        assert_eq!(forms.p[0], disp[0]);
    }

    #[test]
    fn expansion_roundtrip_is_exact() {
        // rebuilding the expansion from extracted data and re-extracting
        // returns identical forms
        let forms = h45_forms();
        let rebuilt = rebuild_expansion(&forms);
        let again = extract_strata(&rebuilt, forms.m1, forms.m2).unwrap();
        assert!(again.residual_ok);
        assert_eq!(again.p, forms.p);
        assert_eq!(again.q, forms.q);
    }

    #[test]
    fn ot_expand_rejects_off_focal_base_point() {
        let f = build_f_45();
        let mut frame = frame_45();
        for c in frame.x.iter_mut() {
            *c = &*c * &Scalar::int(2);
        }
        assert!(matches!(
            ot_expand(&f, &frame),
            Err(OtError::BasePoint(_))
        ));
    }

    #[test]
    fn ot_expand_rejects_non_orthonormal_frame() {
        let f = build_f_45();
        let mut frame = frame_45();
        frame.eplus[0] = frame.eplus[1].clone();
        assert!(matches!(ot_expand(&f, &frame), Err(OtError::Frame)));
    }

    #[test]
    fn ot_expand_reports_failing_stratum() {
        // an arbitrary quartic with F(x)=1 at a frame point is not a
        // Cartan-Münzner polynomial; the t-strata checks catch it
        let frame = frame_45();
        let x12 = MPoly::var(20, crate::geometry::x_idx(1, 2));
        let x34 = MPoly::var(20, crate::geometry::x_idx(3, 4));
        // F = 4 x12² x34² equals 1 at the base point
        let f = x12.pow(2).mul(&x34.pow(2)).scale(&Scalar::int(4));
        match ot_expand(&f, &frame) {
            Err(OtError::Stratum { stratum, .. }) => assert_eq!(stratum, "t^2"),
            other => panic!("expected a stratum error, got {other:?}"),
        }
    }

    #[test]
    fn shape_blocks_rejects_off_pattern_terms() {
        let mut forms = h45_forms();
        // inject an E₊×E₊ coupling into p₁
        let n = forms.tangent_dim();
        forms.p[1] = forms.p[1].add(&MPoly::var(n, 0).mul(&MPoly::var(n, 1)));
        assert!(matches!(
            shape_blocks(&forms),
            Err(FormsError::OffPattern { a: 1, .. })
        ));
        // break p₀
        let mut forms = h45_forms();
        forms.p[0] = MPoly::norm_sq(n);
        assert!(matches!(shape_blocks(&forms), Err(FormsError::P0Shape)));
    }

    #[test]
    fn third_form_tensor_rejects_bad_q0() {
        let n = 14;
        let mut forms = h45_forms();
        // a z·z·x monomial is outside Lemma-Q0 structure
        forms.q[0] = forms.q[0].add(
            &MPoly::var(n, 10).mul(&MPoly::var(n, 11)).mul(&MPoly::var(n, 0)),
        );
        assert!(matches!(
            third_form_tensor(&forms),
            Err(FormsError::Q0Structure(_))
        ));
        // a coefficient at the excluded index α = 5 violates the zero pattern
        let mut forms = h45_forms();
        forms.q[0] = forms.q[0].add(
            &MPoly::var(n, 4).mul(&MPoly::var(n, 5)).mul(&MPoly::var(n, 10)),
        );
        assert!(matches!(
            third_form_tensor(&forms),
            Err(FormsError::ExcludedIndex { alpha: 5, .. })
        ));
    }

    #[test]
    fn h45_identity_suites_pass() {
        let forms = h45_forms();
        let blocks = shape_blocks(&forms).unwrap();
        let tensor = third_form_tensor(&forms).unwrap();
        for c in block_identity_suite(&blocks, 1, crate::geometry::ExampleId::H45) {
            assert_eq!(c.status, crate::report::Status::Pass, "{}: {}", c.id, c.detail);
        }
        for c in mirror_check(&blocks, &tensor) {
            assert_eq!(c.status, crate::report::Status::Pass, "{}: {}", c.id, c.detail);
        }
        for c in pq_gradient_suite(&forms) {
            assert_eq!(c.status, crate::report::Status::Pass, "{}: {}", c.id, c.detail);
        }
        for c in circ_suite(&tensor, crate::geometry::ExampleId::H45, 0) {
            assert_eq!(c.status, crate::report::Status::Pass, "{}: {}", c.id, c.detail);
        }
        assert_eq!(forms.q, reconstruct_q(&blocks, &tensor));
    }

    #[test]
    fn mirror_detects_corrupted_tensor() {
        let forms = h45_forms();
        let blocks = shape_blocks(&forms).unwrap();
        let mut tensor = third_form_tensor(&forms).unwrap();
        tensor.t[0][(0, 1)] = Scalar::int(7);
        let checks = mirror_check(&blocks, &tensor);
        assert!(checks.iter().any(|c| c.status == crate::report::Status::Fail));
    }

    #[test]
    fn mirror_index_arithmetic_examples() {
        // p = q, α = β = 1: the B terms vanish and the T-row norm carries
        // the whole identity; p = q, α = β = 5: only the B terms contribute
        let forms = h45_forms();
        let blocks = shape_blocks(&forms).unwrap();
        let tensor = third_form_tensor(&forms).unwrap();
        for p in 0..4 {
            let mut row_norm = Scalar::default();
            for mu in 0..5 {
                let t = tensor.entry(p, 0, mu);
                row_norm = &row_norm + &(&t * &t);
            }
            assert_eq!(row_norm, Scalar::int(1));
            let mut b_part = Scalar::default();
            for a in 0..4 {
                let b = &blocks.b[a];
                b_part = &b_part + &(&b[(4, p)] * &b[(4, p)]);
            }
            assert_eq!(&b_part * &Scalar::int(2), Scalar::int(1));
        }
    }
}
