//! Suite runner: builds the artifacts of an example once and maps each
//! family of identity checks to a named, timed check record.

use crate::algebras::{build_clifford_system, right_mult_matrix, verify_clifford, CliffordSystem};
use crate::forms::{
    block_identity_suite, circ_suite, displayed_b, fkm_displayed_a, fkm_displayed_t,
    h45_displayed_a, h45_displayed_p, h45_displayed_q0, h45_displayed_t, mirror_check, ot_expand,
    pq_gradient_suite, reconstruct_q, shape_blocks, third_form_tensor, SecondThirdForms,
    ShapeBlocks, ThirdFormTensor,
};
use crate::geometry::{
    build_f_45, build_f_fkm, dual_frame, fkm_h_vector, fkm_k_vector, frame_45, frame_69,
    stiefel_base_point, stiefel_check, AdaptedFrame, ExampleId,
};
use crate::mat::dot;
use crate::pencil::{
    jacobian_rank_at, kernel_structure_check, nullity_exact, pencil_matrix, r_lambda_scan,
    rational_points, sample_hyperquadric, structured_pencil,
};
use crate::poly::{verify_cm, MPoly};
use crate::report::{Check, Report};
use crate::scalar::{CScalar, Scalar};
use std::time::Instant;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SuiteName {
    Cm,
    Frames,
    Blocks,
    Mirror,
    Thirdform,
    Pq,
    Circ,
    Pencil,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Cm,
        SuiteName::Frames,
        SuiteName::Blocks,
        SuiteName::Mirror,
        SuiteName::Thirdform,
        SuiteName::Pq,
        SuiteName::Circ,
        SuiteName::Pencil,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Cm => "cm",
            SuiteName::Frames => "frames",
            SuiteName::Blocks => "blocks",
            SuiteName::Mirror => "mirror",
            SuiteName::Thirdform => "thirdform",
            SuiteName::Pq => "pq",
            SuiteName::Circ => "circ",
            SuiteName::Pencil => "pencil",
        }
    }

    pub fn parse(name: &str) -> Option<SuiteName> {
        SuiteName::ALL.iter().copied().find(|s| s.as_str() == name)
    }
}

/// Everything derived from one example, built once and shared by the suites.
pub struct ExampleData {
    pub id: ExampleId,
    pub sys: Option<CliffordSystem>,
    pub f: MPoly,
    pub frame: AdaptedFrame,
    pub forms: Result<SecondThirdForms, String>,
    pub blocks: Result<ShapeBlocks, String>,
    pub tensor: Result<ThirdFormTensor, String>,
}

impl ExampleData {
    pub fn build(id: ExampleId) -> ExampleData {
        let (sys, f, frame) = match id {
            ExampleId::H45 => (None, build_f_45(), frame_45()),
            ExampleId::Fkm69 => {
                let sys = build_clifford_system();
                let f = build_f_fkm(&sys).expect("the built Clifford system verifies");
                let frame = frame_69(&sys);
                (Some(sys), f, frame)
            }
        };
        let forms = ot_expand(&f, &frame).map_err(|e| e.to_string());
        let blocks = forms
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|fo| shape_blocks(fo).map_err(|e| e.to_string()));
        let tensor = forms
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|fo| third_form_tensor(fo).map_err(|e| e.to_string()));
        ExampleData {
            id,
            sys,
            f,
            frame,
            forms,
            blocks,
            tensor,
        }
    }

    fn forms_or_fail(&self, report: &mut Report) -> Option<&SecondThirdForms> {
        match &self.forms {
            Ok(f) => Some(f),
            Err(e) => {
                report.push(Check::fail("extraction", e.clone()));
                None
            }
        }
    }

    fn blocks_or_fail(&self, report: &mut Report) -> Option<&ShapeBlocks> {
        match &self.blocks {
            Ok(b) => Some(b),
            Err(e) => {
                report.push(Check::fail("blocks-extraction", e.clone()));
                None
            }
        }
    }

    fn tensor_or_fail(&self, report: &mut Report) -> Option<&ThirdFormTensor> {
        match &self.tensor {
            Ok(t) => Some(t),
            Err(e) => {
                report.push(Check::fail("thirdform-extraction", e.clone()));
                None
            }
        }
    }
}

fn push_timed(report: &mut Report, started: Instant, mut checks: Vec<Check>) {
    let ms = started.elapsed().as_millis() as u64;
    for c in checks.iter_mut() {
        c.wall_ms = ms;
    }
    report.extend(checks);
}

fn one_timed(report: &mut Report, id: &str, f: impl FnOnce() -> (bool, String)) {
    let t0 = Instant::now();
    let (ok, detail) = f();
    let mut c = Check::from_bool(id, ok, detail);
    c.wall_ms = t0.elapsed().as_millis() as u64;
    report.push(c);
}

/// Runs one suite for one example. Deterministic for a fixed seed.
pub fn run_suite(name: SuiteName, example: ExampleId, seed: u64) -> Report {
    let data = ExampleData::build(example);
    run_suite_with(&data, name, seed)
}

/// Runs a suite against prebuilt example data (lets `all` share the build).
pub fn run_suite_with(data: &ExampleData, name: SuiteName, seed: u64) -> Report {
    let mut report = Report::new(name.as_str(), data.id.tag(), seed);
    match name {
        SuiteName::Cm => cm_suite(data, &mut report),
        SuiteName::Frames => frames_suite(data, &mut report),
        SuiteName::Blocks => blocks_suite(data, &mut report),
        SuiteName::Mirror => mirror_suite(data, &mut report),
        SuiteName::Thirdform => thirdform_suite(data, &mut report),
        SuiteName::Pq => pq_suite(data, &mut report),
        SuiteName::Circ => {
            let t0 = Instant::now();
            if let Some(tensor) = data.tensor_or_fail(&mut report) {
                let checks = circ_suite(tensor, data.id, seed);
                push_timed(&mut report, t0, checks);
            }
        }
        SuiteName::Pencil => pencil_suite(data, &mut report, seed),
    }
    report
}

/// Runs the requested suites for the requested examples.
pub fn run_selection(
    suites: &[SuiteName],
    examples: &[ExampleId],
    seed: u64,
) -> Vec<Report> {
    let mut out = Vec::new();
    for &ex in examples {
        let data = ExampleData::build(ex);
        for &s in suites {
            out.push(run_suite_with(&data, s, seed));
        }
    }
    out
}

fn cm_suite(data: &ExampleData, report: &mut Report) {
    let (m1, m2) = (data.id.m1(), data.id.m2());
    let t0 = Instant::now();
    match verify_cm(&data.f, 4, m1, m2) {
        Ok(cm) => {
            let checks = vec![
                Check::from_bool(
                    "cm:gradient-identity",
                    cm.grad_residual_terms == 0,
                    format!("{} residual terms", cm.grad_residual_terms),
                ),
                Check::from_bool(
                    "cm:laplacian-identity",
                    cm.laplacian_residual_terms == 0,
                    format!("{} residual terms", cm.laplacian_residual_terms),
                ),
            ];
            push_timed(report, t0, checks);
        }
        Err(e) => report.push(Check::fail("cm:verify", e.to_string())),
    }
}

fn frames_suite(data: &ExampleData, report: &mut Report) {
    one_timed(report, "frame:orthonormal", || {
        (data.frame.is_orthonormal(), "Gram matrix != I".to_string())
    });
    one_timed(report, "frame:base-point-on-mplus", || {
        let v = data.f.eval(&data.frame.x);
        (v.is_one(), format!("F(x) = {v}"))
    });
    let t0 = Instant::now();
    let p0_check = match &data.forms {
        Ok(forms) => {
            let n = forms.tangent_dim();
            let mut expect = MPoly::zero(n);
            for alpha in 0..forms.m2 {
                expect = expect.add(&MPoly::var(n, alpha).pow(2));
            }
            for mu in 0..forms.m2 {
                expect = expect.sub(&MPoly::var(n, forms.m2 + mu).pow(2));
            }
            Check::from_bool(
                "frame:p0-eigenvalue-structure",
                forms.p[0] == expect,
                "p0 is not +1 on E+, -1 on E-, 0 on E0",
            )
        }
        Err(e) => Check::fail("frame:p0-eigenvalue-structure", e.clone()),
    };
    push_timed(report, t0, vec![p0_check]);

    match data.id {
        ExampleId::H45 => {
            one_timed(report, "frame:dual-point-on-mminus", || {
                let dual = dual_frame(&data.frame);
                let v = data.f.eval(&dual.x);
                (v == Scalar::int(-1), format!("F(x*) = {v}"))
            });
            one_timed(report, "frame:dual-orthonormal", || {
                (dual_frame(&data.frame).is_orthonormal(), String::new())
            });
            one_timed(report, "frame:dual-involution", || {
                let dual = dual_frame(&data.frame);
                let h = Scalar::inv_sqrt2();
                let back: Vec<Scalar> = dual
                    .x
                    .iter()
                    .zip(&dual.normals[0])
                    .map(|(a, b)| &(a + b) * &h)
                    .collect();
                (back == data.frame.x, "(x*+n0*)/sqrt2 != x".into())
            });
        }
        ExampleId::Fkm69 => {
            let sys = data.sys.as_ref().expect("fkm69 carries its system");
            one_timed(report, "frame:clifford-system-verifies", || {
                match verify_clifford(sys) {
                    Ok(()) => (true, String::new()),
                    Err(e) => (false, e.to_string()),
                }
            });
            one_timed(report, "frame:stiefel-membership", || {
                let r = stiefel_check(&stiefel_base_point());
                let failed: Vec<&str> = r
                    .conditions
                    .iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(name, _)| name.as_str())
                    .collect();
                (r.pass(), failed.join(", "))
            });
            one_timed(report, "frame:stiefel-point-on-mminus", || {
                let v = data.f.eval(&stiefel_base_point());
                (v == Scalar::int(-1), format!("F(zeta,eta) = {v}"))
            });
            one_timed(report, "frame:p9-pairing", || {
                for alpha in 3..=8usize {
                    let h = fkm_h_vector(alpha);
                    let p9h = sys.mats[9].mul_vec(&h);
                    for mu in 3..=8usize {
                        let k = fkm_k_vector(mu);
                        let expect = if alpha == mu {
                            Scalar::int(-1)
                        } else {
                            Scalar::default()
                        };
                        if dot(&p9h, &k) != expect {
                            return (false, format!("fails at (alpha,mu) = ({alpha},{mu})"));
                        }
                    }
                }
                (true, String::new())
            });
            one_timed(report, "frame:p1-to-p8-pairing-zero", || {
                for a in 1..=8usize {
                    for alpha in 3..=8usize {
                        let pah = sys.mats[a].mul_vec(&fkm_h_vector(alpha));
                        for mu in 3..=8usize {
                            if !dot(&pah, &fkm_k_vector(mu)).is_zero() {
                                return (false, format!("P{a} at (alpha,mu) = ({alpha},{mu})"));
                            }
                        }
                    }
                }
                (true, String::new())
            });
        }
    }
}

fn blocks_suite(data: &ExampleData, report: &mut Report) {
    let t0 = Instant::now();
    let Some(forms) = data.forms_or_fail(report) else {
        return;
    };
    push_timed(
        report,
        t0,
        vec![Check::from_bool(
            "blocks:ot-residual",
            forms.residual_ok,
            "t^0 stratum does not match the expansion formula",
        )],
    );

    if data.id == ExampleId::H45 {
        let t0 = Instant::now();
        let disp = h45_displayed_p();
        let mismatch = forms
            .p
            .iter()
            .zip(&disp)
            .position(|(got, want)| got != want);
        push_timed(
            report,
            t0,
            vec![Check::from_bool(
                "blocks:p-display-exact",
                mismatch.is_none(),
                format!("p_{:?} differs from the displayed polynomial", mismatch),
            )],
        );
    }

    let Some(blocks) = data.blocks_or_fail(report) else {
        return;
    };

    let t0 = Instant::now();
    let (a_disp, label0) = match data.id {
        ExampleId::H45 => (h45_displayed_a(), 1usize),
        ExampleId::Fkm69 => (fkm_displayed_a(), 3usize),
    };
    let a_mismatch = blocks
        .a
        .iter()
        .zip(&a_disp)
        .position(|(got, want)| got != want);
    let b_disp = displayed_b(blocks.m1, blocks.m2);
    let b_mismatch = blocks
        .b
        .iter()
        .zip(&b_disp)
        .position(|(got, want)| got != want);
    let checks = vec![
        Check::from_bool(
            "blocks:A-display-exact",
            a_mismatch.is_none(),
            format!(
                "A_{} differs from the display",
                a_mismatch.map_or(0, |i| i + label0)
            ),
        ),
        Check::from_bool(
            "blocks:B-display-exact",
            b_mismatch.is_none(),
            format!(
                "B_{} differs from the 1/sqrt2 pattern",
                b_mismatch.map_or(0, |i| i + label0)
            ),
        ),
        Check::from_bool(
            "blocks:C-equals-B",
            blocks.b == blocks.c,
            "B_a != C_a for some a",
        ),
    ];
    push_timed(report, t0, checks);

    // upper blocks against the right-multiplication matrices of the algebra
    one_timed(report, "blocks:A-upper-is-right-multiplication", || {
        match data.id {
            ExampleId::H45 => {
                for (i, a) in blocks.a.iter().enumerate() {
                    let upper = a.block(0, 0, 4, 4);
                    if upper != crate::algebras::quat_right_mult_matrix(i + 1) {
                        return (false, format!("A_{} upper block", i + 1));
                    }
                }
                (true, String::new())
            }
            ExampleId::Fkm69 => {
                for (i, a) in blocks.a.iter().enumerate() {
                    let upper = a.block(0, 0, 8, 8);
                    if upper != right_mult_matrix(i + 3).neg() {
                        return (false, format!("A_{} upper block", i + 3));
                    }
                }
                (true, String::new())
            }
        }
    });

    let t0 = Instant::now();
    let checks = block_identity_suite(blocks, 1, data.id);
    push_timed(report, t0, checks);

    // the duality relations at the dual frame, against primal data
    if data.id == ExampleId::H45 {
        let t0 = Instant::now();
        let checks = match (&data.tensor, duality_blocks_h45(data)) {
            (Ok(tensor), Ok(dual_blocks)) => {
                crate::forms::duality_block_check(blocks, tensor, &dual_blocks)
            }
            (Err(e), _) => vec![Check::fail("duality:extraction", e.clone())],
            (_, Err(e)) => vec![Check::fail("duality:extraction", e)],
        };
        push_timed(report, t0, checks);
    }
}

/// Extracts the shape blocks at the dual frame of the {4,5} base point,
/// expanding -F there (the dual point lies on F⁻¹(-1)).
fn duality_blocks_h45(data: &ExampleData) -> Result<ShapeBlocks, String> {
    let dual = dual_frame(&data.frame);
    let g = data.f.neg();
    let forms = ot_expand(&g, &dual).map_err(|e| e.to_string())?;
    shape_blocks(&forms).map_err(|e| e.to_string())
}

fn mirror_suite(data: &ExampleData, report: &mut Report) {
    let t0 = Instant::now();
    let Some(blocks) = data.blocks_or_fail(report) else {
        return;
    };
    let Some(tensor) = data.tensor_or_fail(report) else {
        return;
    };
    let checks = mirror_check(blocks, tensor);
    push_timed(report, t0, checks);
}

fn thirdform_suite(data: &ExampleData, report: &mut Report) {
    let Some(forms) = data.forms_or_fail(report) else {
        return;
    };
    if data.id == ExampleId::H45 {
        one_timed(report, "thirdform:q0-display-exact", || {
            let want = h45_displayed_q0();
            (
                forms.q[0] == want,
                "q^0 differs from the displayed polynomial".into(),
            )
        });
    }
    let Some(tensor) = data.tensor_or_fail(report) else {
        return;
    };
    // successful tensor construction already enforces the excluded-index
    // zero pattern and the pure x·y·z structure of q^0
    report.push(Check::pass("thirdform:excluded-index-zero-pattern"));

    let t0 = Instant::now();
    let (t_disp, label0) = match data.id {
        ExampleId::H45 => (h45_displayed_t(), 1usize),
        ExampleId::Fkm69 => (fkm_displayed_t(), 3usize),
    };
    let mismatch = tensor
        .t
        .iter()
        .zip(&t_disp)
        .position(|(got, want)| got != want);
    push_timed(
        report,
        t0,
        vec![Check::from_bool(
            "thirdform:T-display-exact",
            mismatch.is_none(),
            format!(
                "T^{} differs from the display",
                mismatch.map_or(0, |i| i + label0)
            ),
        )],
    );

    one_timed(report, "thirdform:T-orthogonal", || {
        for (i, t) in tensor.t.iter().enumerate() {
            if !t.transpose().mul(t).is_identity() {
                return (false, format!("T^{} is not orthogonal", i + label0));
            }
        }
        (true, String::new())
    });

    let Some(blocks) = data.blocks_or_fail(report) else {
        return;
    };
    one_timed(report, "thirdform:uv-reconstruction-exact", || {
        let rebuilt = reconstruct_q(blocks, tensor);
        for (i, (got, want)) in forms.q.iter().zip(&rebuilt).enumerate() {
            if got != want {
                return (false, format!("q^{i} differs from the (T, A) reconstruction"));
            }
        }
        (true, String::new())
    });
}

fn pq_suite(data: &ExampleData, report: &mut Report) {
    let t0 = Instant::now();
    let Some(forms) = data.forms_or_fail(report) else {
        return;
    };
    let checks = pq_gradient_suite(forms);
    push_timed(report, t0, checks);
}

fn pencil_suite(data: &ExampleData, report: &mut Report, seed: u64) {
    let Some(blocks) = data.blocks_or_fail(report) else {
        return;
    };
    let (m1, m2) = (blocks.m1, blocks.m2);

    one_timed(report, "pencil:nullity-s0-exact", || {
        let c = vec![CScalar::real(Scalar::int(1))];
        let n = nullity_exact(&pencil_matrix(&c, blocks).expect("S0"));
        (n == m1, format!("nullity {n}, expected m1 = {m1}"))
    });
    one_timed(report, "pencil:nullity-structured-exact", || {
        let n = nullity_exact(&structured_pencil(blocks, 1));
        let expect = m1 + m2 - 1;
        (n == expect, format!("nullity {n}, expected {expect}"))
    });
    one_timed(report, "pencil:kernel-structure", || {
        match kernel_structure_check(blocks, 1) {
            Ok(_) => (true, String::new()),
            Err(e) => (false, e),
        }
    });
    one_timed(report, "pencil:exact-float-agreement", || {
        let s_mats = crate::pencil::s_matrices_f64(blocks);
        // S0 alone and S0 + iS1
        let mut alpha = vec![0.0; m1 + 1];
        alpha[0] = 1.0;
        let mut beta = vec![0.0; m1 + 1];
        let e0 = crate::pencil::pencil_embedding_f64(&alpha, &beta, &s_mats);
        if crate::pencil::nullity_float(&e0, crate::pencil::FLOAT_RANK_TOL) != m1 {
            return (false, "disagreement on S0".into());
        }
        beta[1] = 1.0;
        let e1 = crate::pencil::pencil_embedding_f64(&alpha, &beta, &s_mats);
        let exact = nullity_exact(&structured_pencil(blocks, 1));
        let float = crate::pencil::nullity_float(&e1, crate::pencil::FLOAT_RANK_TOL);
        (
            exact == float,
            format!("exact {exact} vs float {float} on S0+iS1"),
        )
    });
    one_timed(report, "pencil:scan-histogram", || {
        let k = m1;
        match sample_hyperquadric(k, 1000, seed) {
            Ok(mut samples) => {
                let scan = r_lambda_scan(blocks, &mut samples, k, seed);
                let ok = scan.violations.is_empty()
                    && scan.histogram.len() == 1
                    && scan.histogram.get(&1) == Some(&1000);
                let detail = serde_json::to_string(&scan.histogram)
                    .unwrap_or_else(|_| "unserializable".into());
                (ok, format!("histogram {detail}"))
            }
            Err(e) => (false, e.to_string()),
        }
    });
    if let Some(forms) = data.forms_or_fail(report) {
        one_timed(report, "pencil:jacobian-rank-bound", || {
            for k in 0..forms.p.len() {
                for (pi, pt) in rational_points(forms.tangent_dim(), 50, seed ^ (k as u64))
                    .iter()
                    .enumerate()
                {
                    let r = jacobian_rank_at(&forms.p[..=k], pt);
                    if r > k + 1 {
                        return (false, format!("rank {r} > {} at point {pi}", k + 1));
                    }
                }
            }
            (true, String::new())
        });
    }
}
