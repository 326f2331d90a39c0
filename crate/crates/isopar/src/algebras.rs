//! Quaternion and octonion arithmetic, their right-multiplication matrices,
//! and the Clifford system P₀,…,P₉ on R³² built from the C₈ representation.
//!
//! The octonion basis is e₁,…,e₈ with e₁ the unit. The multiplication table
//! is encoded by seven oriented triples (i,j,k) meaning eᵢeⱼ = e_k cyclically;
//! this particular orientation is the one under which the right-multiplication
//! matrices reproduce the block displays used by the {6,9} example (entrywise,
//! including all signs) — see the checks in `forms`.

use crate::mat::Mat;
use crate::scalar::Scalar;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CliffordError {
    #[error("P_{0} is not symmetric")]
    NotSymmetric(usize),
    #[error("P_{i}P_{j} + P_{j}P_{i} != 2 delta_ij I at pair ({i}, {j})")]
    PairIdentity { i: usize, j: usize },
    #[error("matrix {0} has wrong shape")]
    Shape(usize),
}

/// Oriented quaternion triples over basis (1, i, j, k): i·j = k cyclically.
const QUAT_TRIPLES: [[usize; 3]; 1] = [[1, 2, 3]];

/// Oriented octonion triples over imaginary indices 1..=7 (basis slot of
/// e_{n+1}): eᵢeⱼ = e_k for consecutive pairs read cyclically.
const OCT_TRIPLES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 5],
    [1, 7, 6],
    [2, 4, 6],
    [2, 5, 7],
    [3, 4, 7],
    [3, 6, 5],
];

/// (sign, index) table for a Cayley table of dimension N built from triples.
fn build_table<const N: usize>(triples: &[[usize; 3]]) -> [[(i8, usize); N]; N] {
    let mut t = [[(0i8, 0usize); N]; N];
    for j in 0..N {
        t[0][j] = (1, j);
        t[j][0] = (1, j);
    }
    for i in 1..N {
        t[i][i] = (-1, 0);
    }
    for &[a, b, c] in triples {
        for &(x, y, z) in &[(a, b, c), (b, c, a), (c, a, b)] {
            t[x][y] = (1, z);
            t[y][x] = (-1, z);
        }
    }
    t
}

fn oct_table() -> &'static [[(i8, usize); 8]; 8] {
    static TABLE: OnceLock<[[(i8, usize); 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| build_table::<8>(&OCT_TRIPLES))
}

fn quat_table() -> &'static [[(i8, usize); 4]; 4] {
    static TABLE: OnceLock<[[(i8, usize); 4]; 4]> = OnceLock::new();
    TABLE.get_or_init(|| build_table::<4>(&QUAT_TRIPLES))
}

/// Octonion with exact coefficients over e₁,…,e₈ (e₁ stored first).
#[derive(Clone, PartialEq, Debug)]
pub struct Octonion(pub [Scalar; 8]);

/// Quaternion with exact coefficients over 1, i, j, k.
#[derive(Clone, PartialEq, Debug)]
pub struct Quaternion(pub [Scalar; 4]);

fn table_mul<const N: usize>(
    table: &[[(i8, usize); N]; N],
    a: &[Scalar; N],
    b: &[Scalar; N],
) -> [Scalar; N] {
    let mut out: [Scalar; N] = std::array::from_fn(|_| Scalar::default());
    for i in 0..N {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..N {
            if b[j].is_zero() {
                continue;
            }
            let (sign, k) = table[i][j];
            let prod = &a[i] * &b[j];
            out[k] = if sign > 0 {
                &out[k] + &prod
            } else {
                &out[k] - &prod
            };
        }
    }
    out
}

impl Octonion {
    pub fn zero() -> Self {
        Octonion(std::array::from_fn(|_| Scalar::default()))
    }

    /// Basis element e_n for n in 1..=8.
    pub fn basis(n: usize) -> Self {
        assert!((1..=8).contains(&n), "octonion basis index out of range");
        let mut o = Octonion::zero();
        o.0[n - 1] = Scalar::int(1);
        o
    }

    pub fn mul(&self, rhs: &Octonion) -> Octonion {
        Octonion(table_mul(oct_table(), &self.0, &rhs.0))
    }

    pub fn conj(&self) -> Octonion {
        let mut o = self.clone();
        for c in o.0.iter_mut().skip(1) {
            *c = -&*c;
        }
        o
    }

    pub fn norm_sq(&self) -> Scalar {
        let mut acc = Scalar::default();
        for c in &self.0 {
            acc = &acc + &(c * c);
        }
        acc
    }

    pub fn inner(&self, rhs: &Octonion) -> Scalar {
        let mut acc = Scalar::default();
        for (a, b) in self.0.iter().zip(&rhs.0) {
            acc = &acc + &(a * b);
        }
        acc
    }
}

impl Quaternion {
    pub fn zero() -> Self {
        Quaternion(std::array::from_fn(|_| Scalar::default()))
    }

    /// Basis element: 1, i, j, k for n = 1..=4.
    pub fn basis(n: usize) -> Self {
        assert!((1..=4).contains(&n), "quaternion basis index out of range");
        let mut q = Quaternion::zero();
        q.0[n - 1] = Scalar::int(1);
        q
    }

    pub fn mul(&self, rhs: &Quaternion) -> Quaternion {
        Quaternion(table_mul(quat_table(), &self.0, &rhs.0))
    }

    pub fn conj(&self) -> Quaternion {
        let mut q = self.clone();
        for c in q.0.iter_mut().skip(1) {
            *c = -&*c;
        }
        q
    }
}

/// `oct_mul` on coefficient slices; used by the circle-product suites.
pub fn oct_mul(a: &Octonion, b: &Octonion) -> Octonion {
    a.mul(b)
}

/// 8×8 matrix of right multiplication by e_i (basis label 2..=8):
/// column c holds the coordinates of e_c·e_i. Skew-symmetric and orthogonal.
pub fn right_mult_matrix(i: usize) -> Mat<Scalar> {
    assert!((2..=8).contains(&i), "right multiplication index out of 2..=8");
    let table = oct_table();
    let mut m = Mat::zeros(8, 8);
    for c in 0..8 {
        let (sign, k) = table[c][i - 1];
        m[(k, c)] = Scalar::int(sign as i64);
    }
    m
}

/// 4×4 matrix of right multiplication by the quaternion basis element
/// 1, i, j, k (n = 1..=4), column convention as above.
pub fn quat_right_mult_matrix(n: usize) -> Mat<Scalar> {
    assert!((1..=4).contains(&n));
    let table = quat_table();
    let mut m = Mat::zeros(4, 4);
    for c in 0..4 {
        let (sign, k) = table[c][n - 1];
        m[(k, c)] = Scalar::int(sign as i64);
    }
    m
}

/// The eight anticommuting complex structures J̌₁,…,J̌₈ on R¹⁶ generating the
/// irreducible C₈ representation: J̌ᵢ = diag(Jᵢ, -Jᵢ) for i ≤ 7 with Jᵢ the
/// right multiplication by e_{i+1}, and J̌₈ the antidiagonal (u,v) ↦ (-v, u).
/// The antidiagonal orientation is the one under which ⟨P₉(h_α), k_μ⟩ =
/// -⟨e_α, e_μ⟩ at the base frame of the {6,9} example.
pub fn build_c8_rep() -> Vec<Mat<Scalar>> {
    let mut reps = Vec::with_capacity(8);
    for i in 1..=7 {
        let j = right_mult_matrix(i + 1);
        let mut m = Mat::zeros(16, 16);
        m.set_block(0, 0, &j);
        m.set_block(8, 8, &j.neg());
        reps.push(m);
    }
    let mut j8 = Mat::zeros(16, 16);
    j8.set_block(0, 8, &Mat::identity(8).neg());
    j8.set_block(8, 0, &Mat::identity(8));
    reps.push(j8);
    reps
}

/// Symmetric orthogonal anticommuting matrices P₀,…,P_m.
#[derive(Clone, Debug)]
pub struct CliffordSystem {
    pub dim: usize,
    pub mats: Vec<Mat<Scalar>>,
}

impl CliffordSystem {
    pub fn m(&self) -> usize {
        self.mats.len().saturating_sub(1)
    }
}

/// The C₁₀'-type system on R³² = R¹⁶ ⊕ R¹⁶:
/// P₀(c,d) = (c,-d), P₁(c,d) = (d,c), P_{1+i}(c,d) = (J̌ᵢ d, -J̌ᵢ c).
pub fn build_clifford_system() -> CliffordSystem {
    let reps = build_c8_rep();
    let id16 = Mat::identity(16);
    let mut mats = Vec::with_capacity(10);

    let mut p0 = Mat::zeros(32, 32);
    p0.set_block(0, 0, &id16);
    p0.set_block(16, 16, &id16.neg());
    mats.push(p0);

    let mut p1 = Mat::zeros(32, 32);
    p1.set_block(0, 16, &id16);
    p1.set_block(16, 0, &id16);
    mats.push(p1);

    for j in &reps {
        let mut p = Mat::zeros(32, 32);
        p.set_block(0, 16, j);
        p.set_block(16, 0, &j.neg());
        mats.push(p);
    }

    CliffordSystem { dim: 32, mats }
}

/// Checks symmetry and the pair relations PᵢPⱼ + PⱼPᵢ = 2δᵢⱼI for all pairs;
/// reports the first failure. An empty system passes vacuously.
pub fn verify_clifford(sys: &CliffordSystem) -> Result<(), CliffordError> {
    for (i, p) in sys.mats.iter().enumerate() {
        if p.nrows() != sys.dim || p.ncols() != sys.dim {
            return Err(CliffordError::Shape(i));
        }
        if !p.is_symmetric() {
            return Err(CliffordError::NotSymmetric(i));
        }
    }
    for i in 0..sys.mats.len() {
        for j in i..sys.mats.len() {
            let anti = sys.mats[i]
                .mul(&sys.mats[j])
                .add(&sys.mats[j].mul(&sys.mats[i]));
            let expect = if i == j {
                Mat::identity(sys.dim).scale(&Scalar::int(2))
            } else {
                Mat::zeros(sys.dim, sys.dim)
            };
            if anti != expect {
                return Err(CliffordError::PairIdentity { i, j });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize) -> Octonion {
        Octonion::basis(n)
    }

    #[test]
    fn unit_and_squares() {
        let x = {
            let mut o = Octonion::zero();
            o.0[2] = Scalar::ratio(3, 7);
            o.0[5] = Scalar::ratio(-1, 2);
            o.0[0] = Scalar::sqrt2();
            o
        };
        assert_eq!(e(1).mul(&x), x);
        assert_eq!(x.mul(&e(1)), x);
        assert_eq!(e(2).mul(&e(2)), {
            let mut m = Octonion::zero();
            m.0[0] = Scalar::int(-1);
            m
        });
        for i in 2..=8 {
            let sq = e(i).mul(&e(i));
            assert_eq!(sq.0[0], Scalar::int(-1));
            assert!(sq.0[1..].iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn imaginary_units_anticommute() {
        for i in 2..=8 {
            for j in 2..=8 {
                if i == j {
                    continue;
                }
                let ab = e(i).mul(&e(j));
                let ba = e(j).mul(&e(i));
                let sum = Octonion(std::array::from_fn(|k| &ab.0[k] + &ba.0[k]));
                assert_eq!(sum, Octonion::zero(), "pair ({i},{j})");
            }
        }
    }

    fn arb_oct() -> impl Strategy<Value = Octonion> {
        proptest::collection::vec((-4i64..5, 1i64..4), 8).prop_map(|cs| {
            let mut o = Octonion::zero();
            for (i, (p, q)) in cs.into_iter().enumerate() {
                o.0[i] = Scalar::ratio(p, q);
            }
            o
        })
    }

    proptest! {
        #[test]
        fn norm_multiplicativity(a in arb_oct(), b in arb_oct()) {
            // |ab|² = |a|²|b|², exactly
            let lhs = a.mul(&b).norm_sq();
            let rhs = &a.norm_sq() * &b.norm_sq();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn alternativity(a in arb_oct(), b in arb_oct()) {
            prop_assert_eq!(a.mul(&a).mul(&b), a.mul(&a.mul(&b)));
            prop_assert_eq!(a.mul(&b).mul(&b), a.mul(&b.mul(&b)));
        }
    }

    #[test]
    fn quaternion_structure() {
        let i = Quaternion::basis(2);
        let j = Quaternion::basis(3);
        let k = Quaternion::basis(4);
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&k), i);
        assert_eq!(k.mul(&i), j);
        // associativity on a few mixed products
        let a = Quaternion([
            Scalar::int(1),
            Scalar::ratio(1, 2),
            Scalar::int(-2),
            Scalar::sqrt2(),
        ]);
        let b = i.clone();
        let c = Quaternion([
            Scalar::ratio(2, 3),
            Scalar::int(0),
            Scalar::int(1),
            Scalar::int(5),
        ]);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        // conjugation is an anti-automorphism
        assert_eq!(a.mul(&c).conj(), c.conj().mul(&a.conj()));
    }

    #[test]
    fn right_mult_matrix_properties() {
        for i in 2..=8 {
            let m = right_mult_matrix(i);
            // column of e₁ holds the coordinates of e_i
            for r in 0..8 {
                let expect = if r == i - 1 {
                    Scalar::int(1)
                } else {
                    Scalar::default()
                };
                assert_eq!(m[(r, 0)], expect);
            }
            assert!(m.is_skew(), "J for e_{i} not skew");
            assert!(m.transpose().mul(&m).is_identity());
            assert_eq!(m.mul(&m), Mat::identity(8).neg());
        }
        for i in 2..=8 {
            for j in 2..=8 {
                let mi = right_mult_matrix(i);
                let mj = right_mult_matrix(j);
                let anti = mi.mul(&mj).add(&mj.mul(&mi));
                let expect = if i == j {
                    Mat::identity(8).scale(&Scalar::int(-2))
                } else {
                    Mat::zeros(8, 8)
                };
                assert_eq!(anti, expect, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn right_mult_matrix_matches_table() {
        // M(e_i)·x = coords(x·e_i) on a random-ish element
        let x = Octonion([
            Scalar::int(1),
            Scalar::int(-3),
            Scalar::ratio(1, 2),
            Scalar::int(0),
            Scalar::int(2),
            Scalar::sqrt2(),
            Scalar::int(-1),
            Scalar::ratio(5, 3),
        ]);
        for i in 2..=8 {
            let m = right_mult_matrix(i);
            let via_matrix = m.mul_vec(&x.0);
            let via_table = x.mul(&e(i));
            assert_eq!(via_matrix.as_slice(), &via_table.0[..]);
        }
    }

    #[test]
    fn c8_rep_relations() {
        let reps = build_c8_rep();
        assert_eq!(reps.len(), 8);
        for (i, ji) in reps.iter().enumerate() {
            assert!(ji.is_skew(), "J̌_{} not skew", i + 1);
            assert_eq!(ji.mul(ji), Mat::identity(16).neg());
            for (j, jj) in reps.iter().enumerate().skip(i + 1) {
                let anti = ji.mul(jj).add(&jj.mul(ji));
                assert!(anti.is_zero(), "pair ({}, {})", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn clifford_system_passes() {
        let sys = build_clifford_system();
        assert_eq!(sys.mats.len(), 10);
        assert_eq!(sys.m(), 9);
        assert!(verify_clifford(&sys).is_ok());
        for (i, p) in sys.mats.iter().enumerate() {
            assert!(p.trace().is_zero(), "trace P_{i} != 0");
        }
        // P₀ acts as (c, d) -> (c, -d)
        let mut v = vec![Scalar::default(); 32];
        v[3] = Scalar::int(2);
        v[20] = Scalar::int(5);
        let pv = sys.mats[0].mul_vec(&v);
        assert_eq!(pv[3], Scalar::int(2));
        assert_eq!(pv[20], Scalar::int(-5));
    }

    #[test]
    fn corrupted_system_fails_at_first_pair() {
        let mut sys = build_clifford_system();
        sys.mats[1] = sys.mats[0].clone();
        assert_eq!(
            verify_clifford(&sys),
            Err(CliffordError::PairIdentity { i: 0, j: 1 })
        );
        let empty = CliffordSystem {
            dim: 32,
            mats: vec![],
        };
        assert!(verify_clifford(&empty).is_ok());
    }
}
