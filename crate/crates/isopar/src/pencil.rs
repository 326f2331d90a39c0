//! Shape-operator pencils Σ c_a S_a over the complexified field, their kernel
//! dimensions, and the seeded hyperquadric scans that confirm r_λ = 1 for the
//! nongeneric pencil directions of both examples.
//!
//! r_λ is defined computationally as m₁+m₂ minus the pencil nullity at a
//! nongeneric λ (where ⟨α,β⟩ = 0 and |α| = |β|, so τ_λ = ±i). Nullity runs in
//! two modes: exact Gauss-Jordan over Q(√2)(i) for structured pencils, and a
//! floating SVD with relative threshold 1e-9 for the bulk scans.

use crate::forms::ShapeBlocks;
use crate::mat::Mat;
use crate::poly::MPoly;
use crate::scalar::{CScalar, Field, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Relative singular-value threshold for the floating nullity.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("pencil has {got} coefficients but only {max} shape operators exist")]
    LengthMismatch { got: usize, max: usize },
    #[error("degenerate hyperquadric draw: beta vanished after projection")]
    DegenerateSample,
}

/// One nongeneric pencil direction c = α + iβ with its scan results.
#[derive(Clone, Debug, Serialize)]
pub struct PencilSample {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// τ_λ for the normalized nongeneric pencil; always ±i, recorded as +i.
    pub tau: (f64, f64),
    pub nongeneric: bool,
    pub nullity: Option<usize>,
    pub r_lambda: Option<usize>,
}

/// The complex symmetric matrix Σ c_a S_a assembled from the blocks.
pub fn pencil_matrix(c: &[CScalar], blocks: &ShapeBlocks) -> Result<Mat<CScalar>, PencilError> {
    let max = blocks.m1 + 1;
    if c.is_empty() || c.len() > max {
        return Err(PencilError::LengthMismatch { got: c.len(), max });
    }
    let n = 2 * blocks.m2 + blocks.m1;
    let mut m = Mat::zeros(n, n);
    for (a, coeff) in c.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let s = blocks.s_matrix(a).complexify().scale(coeff);
        m = m.add(&s);
    }
    Ok(m)
}

/// Exact kernel dimension over Q(√2)(i).
pub fn nullity_exact(m: &Mat<CScalar>) -> usize {
    m.nullity()
}

/// Floating kernel dimension of a complex matrix via its real 2n×2n
/// embedding: singular values below tol·σ_max count as zero, and each complex
/// singular value appears twice in the embedding.
pub fn nullity_float(m: &nalgebra::DMatrix<f64>, rel_tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return m.ncols() / 2;
    }
    let small = svd
        .singular_values
        .iter()
        .filter(|&&s| s < rel_tol * max)
        .count();
    small / 2
}

/// The real shape-operator matrices as f64, reused across a scan.
pub fn s_matrices_f64(blocks: &ShapeBlocks) -> Vec<nalgebra::DMatrix<f64>> {
    (0..=blocks.m1)
        .map(|a| blocks.s_matrix(a).to_f64())
        .collect()
}

/// Real 2n×2n embedding of Σ (α_a + iβ_a) S_a.
pub fn pencil_embedding_f64(
    alpha: &[f64],
    beta: &[f64],
    s_mats: &[nalgebra::DMatrix<f64>],
) -> nalgebra::DMatrix<f64> {
    let n = s_mats[0].nrows();
    let mut re = nalgebra::DMatrix::zeros(n, n);
    let mut im = nalgebra::DMatrix::zeros(n, n);
    for (a, s) in s_mats.iter().enumerate().take(alpha.len()) {
        re += s * alpha[a];
        im += s * beta[a];
    }
    let mut emb = nalgebra::DMatrix::zeros(2 * n, 2 * n);
    emb.view_mut((0, 0), (n, n)).copy_from(&re);
    emb.view_mut((0, n), (n, n)).copy_from(&(-&im));
    emb.view_mut((n, 0), (n, n)).copy_from(&im);
    emb.view_mut((n, n), (n, n)).copy_from(&re);
    emb
}

/// Draws `n` nongeneric pencil coefficients c = α + iβ in R^{k+1}: α random
/// on the unit sphere, β projected orthogonal to α and rescaled to |β| = |α|.
/// Deterministic in the seed; degenerate draws are retried a bounded number
/// of times.
pub fn sample_hyperquadric(
    k: usize,
    n: usize,
    seed: u64,
) -> Result<Vec<PencilSample>, PencilError> {
    assert!(k >= 1, "hyperquadric sampling needs k >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = k + 1;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut sample = None;
        for _attempt in 0..100 {
            let alpha: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let beta_raw: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let na = alpha.iter().map(|x| x * x).sum::<f64>().sqrt();
            if na < 1e-9 {
                continue;
            }
            let alpha: Vec<f64> = alpha.iter().map(|x| x / na).collect();
            let proj: f64 = alpha.iter().zip(&beta_raw).map(|(a, b)| a * b).sum();
            let beta_perp: Vec<f64> = beta_raw
                .iter()
                .zip(&alpha)
                .map(|(b, a)| b - proj * a)
                .collect();
            let nb = beta_perp.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nb < 1e-9 {
                continue;
            }
            let beta: Vec<f64> = beta_perp.iter().map(|x| x / nb).collect();
            sample = Some(PencilSample {
                alpha,
                beta,
                tau: (0.0, 1.0),
                nongeneric: true,
                nullity: None,
                r_lambda: None,
            });
            break;
        }
        out.push(sample.ok_or(PencilError::DegenerateSample)?);
    }
    Ok(out)
}

/// Scan report in the JSON schema shared with the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub m1: usize,
    pub m2: usize,
    pub k: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub histogram: BTreeMap<usize, usize>,
    pub violations: Vec<String>,
}

/// Computes r_λ = m₁+m₂ - nullity for every sample, the histogram over r
/// values, and any violations of the expected r ∈ {0, 1} structure.
pub fn r_lambda_scan(
    blocks: &ShapeBlocks,
    samples: &mut [PencilSample],
    k: usize,
    seed: u64,
) -> ScanReport {
    let s_mats = s_matrices_f64(blocks);
    let bound = blocks.m1 + blocks.m2;
    let mut histogram = BTreeMap::new();
    let mut violations = Vec::new();
    for (idx, sample) in samples.iter_mut().enumerate() {
        let emb = pencil_embedding_f64(&sample.alpha, &sample.beta, &s_mats);
        let nullity = nullity_float(&emb, FLOAT_RANK_TOL);
        sample.nullity = Some(nullity);
        if nullity > bound {
            violations.push(format!(
                "sample {idx}: nullity {nullity} exceeds m1+m2 = {bound}"
            ));
            continue;
        }
        let r = bound - nullity;
        sample.r_lambda = Some(r);
        *histogram.entry(r).or_insert(0) += 1;
        if r > 1 {
            violations.push(format!("sample {idx}: r_lambda = {r}"));
        }
    }
    ScanReport {
        m1: blocks.m1,
        m2: blocks.m2,
        k,
        n_samples: samples.len(),
        seed,
        histogram,
        violations,
    }
}

/// Structured pencil S₀ + i·S_d.
pub fn structured_pencil(blocks: &ShapeBlocks, d: usize) -> Mat<CScalar> {
    let mut c = vec![CScalar::zero(); d + 1];
    c[0] = CScalar::real(Scalar::int(1));
    c[d] = CScalar::i();
    pencil_matrix(&c, blocks).expect("structured pencil")
}

/// Verifies the explicitly solvable kernel structure of the structured pencil
/// S₀ + iS_d at the paper's frames: with Ω the orthogonal upper block of A_d
/// (the identity in the {4,5} frame; rotating E₊ by Ωᵗ is the normalization
/// frame change in the {6,9} frame), every kernel vector satisfies
/// y = i·Ωᵗx on the reduced range, x_{m₂} = -y_{m₂}, and x_{m₂} = -i·z_d/√2
/// (σ = 1/√2, Δ = 0). Returns the kernel dimension or the first violated
/// relation.
pub fn kernel_structure_check(blocks: &ShapeBlocks, d: usize) -> Result<usize, String> {
    let m = structured_pencil(blocks, d);
    let basis = m.kernel_basis();
    let (m1, m2) = (blocks.m1, blocks.m2);
    let red = m2 - 1;
    let i_unit = CScalar::i();
    let omega_t = blocks.a[d - 1].block(0, 0, red, red).transpose().complexify();
    for (vi, v) in basis.iter().enumerate() {
        let x = &v[..m2];
        let y = &v[m2..2 * m2];
        let z = &v[2 * m2..2 * m2 + m1];
        let rotated = omega_t.mul_vec(&x[..red]);
        for alpha in 0..red {
            if y[alpha] != &i_unit * &rotated[alpha] {
                return Err(format!(
                    "kernel vector {vi}: y_{} != i (Omega^t x)_{}",
                    alpha + 1,
                    alpha + 1
                ));
            }
        }
        if !(&x[m2 - 1] + &y[m2 - 1]).is_zero() {
            return Err(format!("kernel vector {vi}: x_m2 + y_m2 != 0"));
        }
        let sigma = CScalar::real(Scalar::inv_sqrt2());
        let expect = &(&sigma * &z[d - 1]) * &i_unit.neg_ref();
        if x[m2 - 1] != expect {
            return Err(format!("kernel vector {vi}: x_m2 != -i z_d/sqrt2"));
        }
    }
    Ok(basis.len())
}

impl CScalar {
    fn zero() -> Self {
        CScalar::real(Scalar::default())
    }
}

/// Exact rank of the Jacobian of p₀…p_k at a point: the (k+1)×(m₁+2m₂)
/// matrix of partial derivatives evaluated exactly.
pub fn jacobian_rank_at(p: &[MPoly], point: &[Scalar]) -> usize {
    let rows: Vec<Vec<Scalar>> = p
        .iter()
        .map(|poly| poly.grad().iter().map(|g| g.eval(point)).collect())
        .collect();
    Mat::from_rows(rows).rank()
}

/// Seeded rational points for the Jacobian rank sanity check.
pub fn rational_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| Scalar::ratio(rng.random_range(-12i64..=12), 4))
                .collect()
        })
        .collect()
}
