//! The two explicit examples: their Cartan–Münzner polynomials, the adapted
//! frames at the base points of M₊, the Clifford–Stiefel membership test for
//! the {6,9} family, and the duality map between the focal manifolds.

use crate::algebras::{build_c8_rep, verify_clifford, CliffordError, CliffordSystem};
use crate::mat::{dot, gram};
use crate::poly::MPoly;
use crate::scalar::Scalar;

/// Which of the two families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExampleId {
    H45,
    Fkm69,
}

impl ExampleId {
    pub fn m1(self) -> usize {
        match self {
            ExampleId::H45 => 4,
            ExampleId::Fkm69 => 6,
        }
    }

    pub fn m2(self) -> usize {
        match self {
            ExampleId::H45 => 5,
            ExampleId::Fkm69 => 9,
        }
    }

    pub fn ambient_dim(self) -> usize {
        2 * (self.m1() + self.m2()) + 2
    }

    pub fn tag(self) -> &'static str {
        match self {
            ExampleId::H45 => "h45",
            ExampleId::Fkm69 => "fkm69",
        }
    }
}

/// Orthonormal frame {x, n₀…n_m₁, E₊, E₋, E₀} at a focal point, stored as
/// explicit ambient vectors.
#[derive(Clone, Debug)]
pub struct AdaptedFrame {
    pub ambient_dim: usize,
    pub m1: usize,
    pub m2: usize,
    pub x: Vec<Scalar>,
    /// n₀ first, then n₁…n_{m₁}.
    pub normals: Vec<Vec<Scalar>>,
    pub eplus: Vec<Vec<Scalar>>,
    pub eminus: Vec<Vec<Scalar>>,
    pub ezero: Vec<Vec<Scalar>>,
}

impl AdaptedFrame {
    /// All frame vectors in the order x, n₀…n_{m₁}, E₊, E₋, E₀.
    pub fn all_vectors(&self) -> Vec<&Vec<Scalar>> {
        let mut v: Vec<&Vec<Scalar>> = vec![&self.x];
        v.extend(self.normals.iter());
        v.extend(self.eplus.iter());
        v.extend(self.eminus.iter());
        v.extend(self.ezero.iter());
        v
    }

    /// Exact orthonormality of the full collection.
    pub fn is_orthonormal(&self) -> bool {
        let vectors: Vec<Vec<Scalar>> = self.all_vectors().into_iter().cloned().collect();
        gram(&vectors).is_identity()
    }

    pub fn tangent_dim(&self) -> usize {
        2 * self.m2 + self.m1
    }
}

// ---------------------------------------------------------------------------
// The {4,5} family on S¹⁹
// ---------------------------------------------------------------------------

/// Unordered index pairs (i, j), 1 ≤ i < j ≤ 5, in the fixed coordinate order.
const PAIRS: [(usize, usize); 10] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

fn pair_index(i: usize, j: usize) -> usize {
    PAIRS
        .iter()
        .position(|&(a, b)| (a, b) == (i, j))
        .expect("not an ordered pair")
}

/// Variable index of Re(a_ij) for i < j.
pub fn x_idx(i: usize, j: usize) -> usize {
    pair_index(i, j)
}

/// Variable index of Im(a_ij) for i < j.
pub fn y_idx(i: usize, j: usize) -> usize {
    10 + pair_index(i, j)
}

/// Real and imaginary parts of the skew matrix entry a_ij as polynomials
/// (a_ji = -a_ij, a_ii = 0).
fn entry_45(i: usize, j: usize) -> (MPoly, MPoly) {
    let n = 20;
    if i == j {
        return (MPoly::zero(n), MPoly::zero(n));
    }
    if i < j {
        (MPoly::var(n, x_idx(i, j)), MPoly::var(n, y_idx(i, j)))
    } else {
        (
            MPoly::var(n, x_idx(j, i)).neg(),
            MPoly::var(n, y_idx(j, i)).neg(),
        )
    }
}

/// The quartic of the homogeneous {4,5} example over so(5,C), in the 20 real
/// coordinates x_ij, y_ij:
/// F = -5/4 Σ|Z_i|⁴ + 3/2 Σ_{i<j} |Z_i|²|Z_j|² - 4 Σ_{i<j} |⟨Z_i,Z_j⟩|²,
/// with the Hermitian row pairing ⟨Z_i,Z_j⟩ = Σ_k a_ik·conj(a_jk). The
/// Hermitian choice is the one that passes the Münzner identities; the
/// bilinear pairing does not (see tests).
pub fn build_f_45() -> MPoly {
    build_f45_with_pairing(true)
}

fn build_f45_with_pairing(hermitian: bool) -> MPoly {
    let n = 20;
    // |Z_i|²
    let row_norm: Vec<MPoly> = (1..=5)
        .map(|i| {
            let mut acc = MPoly::zero(n);
            for k in 1..=5 {
                if k == i {
                    continue;
                }
                let (re, im) = entry_45(i, k);
                acc = acc.add(&re.mul(&re)).add(&im.mul(&im));
            }
            acc
        })
        .collect();

    let mut f = MPoly::zero(n);
    for nm in &row_norm {
        f = f.sub(&nm.mul(nm).scale(&Scalar::ratio(5, 4)));
    }
    for i in 0..5 {
        for j in (i + 1)..5 {
            f = f.add(&row_norm[i].mul(&row_norm[j]).scale(&Scalar::ratio(3, 2)));
        }
    }
    for i in 1..=5 {
        for j in (i + 1)..=5 {
            // ⟨Z_i, Z_j⟩ as re + im·sqrt(-1)
            let mut re = MPoly::zero(n);
            let mut im = MPoly::zero(n);
            for k in 1..=5 {
                let (rik, iik) = entry_45(i, k);
                let (rjk, ijk) = entry_45(j, k);
                if hermitian {
                    // a_ik · conj(a_jk)
                    re = re.add(&rik.mul(&rjk)).add(&iik.mul(&ijk));
                    im = im.add(&iik.mul(&rjk)).sub(&rik.mul(&ijk));
                } else {
                    re = re.add(&rik.mul(&rjk)).sub(&iik.mul(&ijk));
                    im = im.add(&iik.mul(&rjk)).add(&rik.mul(&ijk));
                }
            }
            let abs_sq = re.mul(&re).add(&im.mul(&im));
            f = f.sub(&abs_sq.scale(&Scalar::int(4)));
        }
    }
    f
}

/// Unit coordinate vector in the 20-dimensional ambient space.
fn unit20(idx: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::default(); 20];
    v[idx] = Scalar::int(1);
    v
}

/// Vector with entries c at idx_a and d at idx_b.
fn two_entry(n: usize, (ia, ca): (usize, Scalar), (ib, cb): (usize, Scalar)) -> Vec<Scalar> {
    let mut v = vec![Scalar::default(); n];
    v[ia] = ca;
    v[ib] = cb;
    v
}

/// The adapted frame at the base point x (x₁₂ = x₃₄ = 1/√2) of M₊ for the
/// {4,5} example, from the explicit coordinate dictionary: w₀…w₄ span the
/// normal directions, z₁…z₄ the E₀ directions, x₁…x₅ / y₁…y₅ the E₊/E₋
/// eigendirections.
pub fn frame_45() -> AdaptedFrame {
    let h = Scalar::inv_sqrt2();
    let mh = -&h;

    let x = two_entry(20, (x_idx(1, 2), h.clone()), (x_idx(3, 4), h.clone()));

    let normals = vec![
        // n₀: (x₁₂ - x₃₄)/√2
        two_entry(20, (x_idx(1, 2), h.clone()), (x_idx(3, 4), mh.clone())),
        // n₁: (x₂₃ - x₁₄)/√2
        two_entry(20, (x_idx(1, 4), mh.clone()), (x_idx(2, 3), h.clone())),
        // n₂: (y₁₄ + y₂₃)/√2
        two_entry(20, (y_idx(1, 4), h.clone()), (y_idx(2, 3), h.clone())),
        // n₃: (x₁₃ + x₂₄)/√2
        two_entry(20, (x_idx(1, 3), h.clone()), (x_idx(2, 4), h.clone())),
        // n₄: (y₂₄ - y₁₃)/√2
        two_entry(20, (y_idx(1, 3), mh.clone()), (y_idx(2, 4), h.clone())),
    ];

    let ezero = vec![
        // z₁: (y₁₄ - y₂₃)/√2
        two_entry(20, (y_idx(1, 4), h.clone()), (y_idx(2, 3), mh.clone())),
        // z₂: (x₁₄ + x₂₃)/√2
        two_entry(20, (x_idx(1, 4), h.clone()), (x_idx(2, 3), h.clone())),
        // z₃: -(y₁₃ + y₂₄)/√2
        two_entry(20, (y_idx(1, 3), mh.clone()), (y_idx(2, 4), mh.clone())),
        // z₄: (x₂₄ - x₁₃)/√2
        two_entry(20, (x_idx(1, 3), mh.clone()), (x_idx(2, 4), h.clone())),
    ];

    // x₁…x₅ = x₃₅, y₃₅, x₄₅, y₄₅, y₃₄ ; y₁…y₅ = x₁₅, y₁₅, x₂₅, y₂₅, y₁₂.
    // (The dictionary's second "y₃₅" is read as y₁₅, the pattern-consistent
    // choice; it is the one reproducing the displayed second fundamental form.)
    let eplus = vec![
        unit20(x_idx(3, 5)),
        unit20(y_idx(3, 5)),
        unit20(x_idx(4, 5)),
        unit20(y_idx(4, 5)),
        unit20(y_idx(3, 4)),
    ];
    let eminus = vec![
        unit20(x_idx(1, 5)),
        unit20(y_idx(1, 5)),
        unit20(x_idx(2, 5)),
        unit20(y_idx(2, 5)),
        unit20(y_idx(1, 2)),
    ];

    AdaptedFrame {
        ambient_dim: 20,
        m1: 4,
        m2: 5,
        x,
        normals,
        eplus,
        eminus,
        ezero,
    }
}

// ---------------------------------------------------------------------------
// The {6,9} family on S³¹
// ---------------------------------------------------------------------------

/// Coordinate index in R³² = R¹⁶ ⊕ R¹⁶, each half split into two octonion
/// slots: `block` ∈ {0 = c, 1 = d}, `slot` ∈ {0, 1}, `oct` ∈ 0..8.
fn fkm_idx(block: usize, slot: usize, oct: usize) -> usize {
    block * 16 + slot * 8 + oct
}

/// The paper-convention Cartan–Münzner quartic of the OT-FKM {6,9} example:
/// the raw Clifford quartic |x|⁴ - 2Σ⟨Pᵢx,x⟩² is negated so that M₊ = F⁻¹(1)
/// is the focal manifold of codimension m₁+1 = 7 (the negated polynomial has
/// ΔF = +24|x|², matching multiplicities (6,9)).
pub fn build_f_fkm(sys: &CliffordSystem) -> Result<MPoly, CliffordError> {
    verify_clifford(sys)?;
    let n = sys.dim;
    let mut sum_sq = MPoly::zero(n);
    for p in &sys.mats {
        // ⟨Px, x⟩ as a quadratic form
        let mut q = MPoly::zero(n);
        for i in 0..n {
            for j in i..n {
                let c = if i == j {
                    p[(i, j)].clone()
                } else {
                    &p[(i, j)] + &p[(j, i)]
                };
                if c.is_zero() {
                    continue;
                }
                let mut exp = vec![0u8; n];
                exp[i] += 1;
                exp[j] += 1;
                q = q.add(&MPoly::monomial(n, exp, c));
            }
        }
        sum_sq = sum_sq.add(&q.mul(&q));
    }
    Ok(sum_sq.scale(&Scalar::int(2)).sub(&MPoly::norm_sq(n).pow(2)))
}

/// Clifford–Stiefel membership of a point (ζ, η) ∈ R¹⁶ × R¹⁶: |ζ| = |η| =
/// 1/√2, ζ ⊥ η, and J̌ᵢ(ζ) ⊥ η for i = 1,…,8 — eleven exact conditions.
pub struct StiefelReport {
    pub conditions: Vec<(String, bool)>,
}

impl StiefelReport {
    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|(_, ok)| *ok)
    }
}

pub fn stiefel_check(point: &[Scalar]) -> StiefelReport {
    assert_eq!(point.len(), 32, "expected a point of R^32");
    let zeta = &point[..16];
    let eta = &point[16..];
    let half = Scalar::ratio(1, 2);
    let mut conditions = vec![
        ("|zeta|^2 = 1/2".to_string(), dot(zeta, zeta) == half),
        ("|eta|^2 = 1/2".to_string(), dot(eta, eta) == half),
        ("zeta perp eta".to_string(), dot(zeta, eta).is_zero()),
    ];
    for (i, j) in build_c8_rep().iter().enumerate() {
        let jz = j.mul_vec(zeta);
        conditions.push((format!("J{}(zeta) perp eta", i + 1), dot(&jz, eta).is_zero()));
    }
    StiefelReport { conditions }
}

/// The base point (ζ, η) = ((e₂/√2, 0), (0, e₁/√2)) of M₋.
pub fn stiefel_base_point() -> Vec<Scalar> {
    let h = Scalar::inv_sqrt2();
    let mut v = vec![Scalar::default(); 32];
    v[fkm_idx(0, 0, 1)] = h.clone(); // zeta = (e₂/√2, 0)
    v[fkm_idx(1, 1, 0)] = h; // eta = (0, e₁/√2)
    v
}

/// The adapted frame at x* = ((e₂,0),0) ∈ M₊ of the {6,9} example, obtained
/// by dualizing the Clifford–Stiefel data at (ζ,η) ∈ M₋: the normals are n₀*
/// and the E₊-vectors h_α of (ζ,η); E₊* is spanned by the f_a = P_a(ζ,η),
/// E₋* by the g_p = P_pP₀(ζ,η), and E₀* by the k_μ.
pub fn frame_69(sys: &CliffordSystem) -> AdaptedFrame {
    let base = stiefel_base_point();
    let p0_base: Vec<Scalar> = sys.mats[0].mul_vec(&base);
    let h = Scalar::inv_sqrt2();

    let scale = |v: &[Scalar], c: &Scalar| -> Vec<Scalar> { v.iter().map(|t| t * c).collect() };
    let addv =
        |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> { u.iter().zip(v).map(|(a, b)| a + b).collect() };
    let subv =
        |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> { u.iter().zip(v).map(|(a, b)| a - b).collect() };

    // x* = ((ζ,η) + P₀(ζ,η))/√2 and n₀* = ((ζ,η) - P₀(ζ,η))/√2
    let x = scale(&addv(&base, &p0_base), &h);
    let n0 = scale(&subv(&base, &p0_base), &h);

    // normals beyond n₀*: h_α = (0, (0, e_α)), α = 3..8
    let mut normals = vec![n0];
    for alpha in 3..=8 {
        normals.push(fkm_h_vector(alpha));
    }

    // E₊* = f_a = P_a(ζ,η), E₋* = g_p = P_p P₀ (ζ,η), a, p = 1..9
    let eplus: Vec<Vec<Scalar>> = (1..=9).map(|a| sys.mats[a].mul_vec(&base)).collect();
    let eminus: Vec<Vec<Scalar>> = (1..=9).map(|p| sys.mats[p].mul_vec(&p0_base)).collect();

    // E₀* spans the k_μ, μ = 3..8, oriented as -k_μ: this is the orientation
    // under which the extracted B_α carry +1/√2 at the (9,α) entry and the
    // T^p match the displayed third-form matrices.
    let ezero: Vec<Vec<Scalar>> = (3..=8)
        .map(|mu| fkm_k_vector(mu).iter().map(|c| -c).collect())
        .collect();

    AdaptedFrame {
        ambient_dim: 32,
        m1: 6,
        m2: 9,
        x,
        normals,
        eplus,
        eminus,
        ezero,
    }
}

/// The h_α normal vectors (α = 3..8) at the Stiefel base point.
pub fn fkm_h_vector(alpha: usize) -> Vec<Scalar> {
    assert!((3..=8).contains(&alpha));
    let mut v = vec![Scalar::default(); 32];
    v[fkm_idx(1, 1, alpha - 1)] = Scalar::int(1);
    v
}

/// The k_μ vectors (μ = 3..8) spanning E₋ at the Stiefel base point.
pub fn fkm_k_vector(mu: usize) -> Vec<Scalar> {
    assert!((3..=8).contains(&mu));
    let mut v = vec![Scalar::default(); 32];
    v[fkm_idx(0, 0, mu - 1)] = Scalar::int(1);
    v
}

/// Serializes a frame as named vector lists with exact scalar components
/// (each scalar as the pair of rational strings used by the polynomial JSON).
pub fn frame_to_json(frame: &AdaptedFrame) -> serde_json::Value {
    let vec_json = |v: &Vec<Scalar>| -> serde_json::Value {
        serde_json::Value::Array(
            v.iter()
                .map(|c| {
                    serde_json::json!({
                        "r": crate::scalar::rational_string_of(c.rational_part()),
                        "s": crate::scalar::rational_string_of(c.sqrt2_part()),
                    })
                })
                .collect(),
        )
    };
    let list_json = |vs: &[Vec<Scalar>]| -> serde_json::Value {
        serde_json::Value::Array(vs.iter().map(vec_json).collect())
    };
    serde_json::json!({
        "ambient_dim": frame.ambient_dim,
        "m1": frame.m1,
        "m2": frame.m2,
        "x": vec_json(&frame.x),
        "normals": list_json(&frame.normals),
        "eplus": list_json(&frame.eplus),
        "eminus": list_json(&frame.eminus),
        "ezero": list_json(&frame.ezero),
    })
}

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

/// The duality map: x* = (x+n₀)/√2, n₀* = (x-n₀)/√2. At x* the normal space
/// is Rn₀* ⊕ E₊, the +1-eigenspace is spanned by n₁…n_{m₁}, the -1-eigenspace
/// is E₀, and the 0-eigenspace is E₋. The multiplicity pair swaps.
pub fn dual_frame(frame: &AdaptedFrame) -> AdaptedFrame {
    let h = Scalar::inv_sqrt2();
    let x_star: Vec<Scalar> = frame
        .x
        .iter()
        .zip(&frame.normals[0])
        .map(|(a, b)| &(a + b) * &h)
        .collect();
    let n0_star: Vec<Scalar> = frame
        .x
        .iter()
        .zip(&frame.normals[0])
        .map(|(a, b)| &(a - b) * &h)
        .collect();

    let mut normals = vec![n0_star];
    normals.extend(frame.eplus.iter().cloned());

    AdaptedFrame {
        ambient_dim: frame.ambient_dim,
        m1: frame.m2,
        m2: frame.m1,
        x: x_star,
        normals,
        eplus: frame.normals[1..].to_vec(),
        eminus: frame.ezero.clone(),
        ezero: frame.eminus.clone(),
    }
}
