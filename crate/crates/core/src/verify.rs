//! Identity checks for the group law, the twisted convolution and the Riesz
//! family, collected into a serializable report.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::convolution::{
    dilation_covariance_discrepancy, pointwise_twisted_identity_residual, twisted_identity_residual,
};
use crate::error::Result;
use crate::grid::{GridFunction, GridSpec, SliceFunction};
use crate::group::{
    det_perturbed, diagonal_det_product, dilate, group_inv, group_mul, is_nondegenerate, make_j,
    symplectic, DilationFactor, GroupElement, HeisenbergDim, Matrix, Sign,
    SymmetricCoefficientMatrix, DEGENERACY_TOL,
};
use crate::measure::discretize_mu;
use crate::numeric::relative_spread;
use crate::riesz::{
    approximate_identity_error, calibrate_c, endpoint_modulus, endpoint_sup_kernel,
    l2_endpoint_constancy, CalibrationSettings, EndpointParameter,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    SkippedDegenerate,
    SkippedUnsupported,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub reference: &'static str,
    pub params: Value,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub status: CheckStatus,
}

impl CheckRecord {
    fn measured(
        check: &str,
        reference: &'static str,
        params: Value,
        value: f64,
        tolerance: f64,
    ) -> Self {
        let pass = value <= tolerance;
        CheckRecord {
            check: check.into(),
            reference,
            params,
            value: Some(value),
            tolerance,
            pass,
            status: if pass {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
        }
    }

    fn skipped(
        check: &str,
        reference: &'static str,
        params: Value,
        tolerance: f64,
        status: CheckStatus,
    ) -> Self {
        CheckRecord {
            check: check.into(),
            reference,
            params,
            value: None,
            tolerance,
            pass: true,
            status,
        }
    }

    fn errored(check: &str, reference: &'static str, params: Value, tolerance: f64) -> Self {
        CheckRecord {
            check: check.into(),
            reference,
            params,
            value: None,
            tolerance,
            pass: false,
            status: CheckStatus::Failed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Report {
    pub fn new(checks: Vec<CheckRecord>) -> Self {
        let count = |s: fn(&CheckStatus) -> bool| checks.iter().filter(|c| s(&c.status)).count();
        Report {
            passed: count(|s| *s == CheckStatus::Passed),
            failed: count(|s| *s == CheckStatus::Failed),
            skipped: count(|s| {
                matches!(
                    s,
                    CheckStatus::SkippedDegenerate | CheckStatus::SkippedUnsupported
                )
            }),
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Parameters of the identity suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSettings {
    pub n: HeisenbergDim,
    pub a: SymmetricCoefficientMatrix,
    pub lambdas: Vec<f64>,
    pub spatial_halfwidth: f64,
    pub spatial_points: usize,
    pub t_halfwidth: f64,
    pub t_points: usize,
    pub seed: u64,
    pub random_cases: usize,
    pub endpoint_b: Vec<f64>,
    pub z_samples: Vec<f64>,
}

impl SuiteSettings {
    pub fn reference(n: HeisenbergDim) -> Self {
        SuiteSettings {
            n,
            a: SymmetricCoefficientMatrix::identity(n),
            lambdas: vec![0.5, 1.0, 2.0],
            spatial_halfwidth: 8.0,
            spatial_points: 128,
            t_halfwidth: 8.0,
            t_points: 64,
            seed: 0,
            random_cases: 1000,
            endpoint_b: vec![0.0, 1.0, 5.0],
            z_samples: vec![0.3, 0.5, 0.7],
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, n: HeisenbergDim) -> GroupElement {
    let x = (0..n.spatial()).map(|_| rng.gen_range(-3.0..3.0)).collect();
    GroupElement::new(x, rng.gen_range(-3.0..3.0)).expect("even length")
}

fn element_gap(a: &GroupElement, b: &GroupElement) -> f64 {
    let scale =
        a.x.iter()
            .chain(std::iter::once(&a.t))
            .fold(1.0f64, |m, v| m.max(v.abs()));
    let gap =
        a.x.iter()
            .zip(&b.x)
            .map(|(u, v)| (u - v).abs())
            .fold((a.t - b.t).abs(), f64::max);
    gap / scale
}

/// Group-law, symplectic and dilation identities on seeded random points.
pub fn algebra_checks(n: HeisenbergDim, cases: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = make_j(n);
    let j2 = j.matmul(&j)?.add(&Matrix::identity(n.spatial()))?;
    let jt = j.transpose().add(&j)?;
    let max_abs = |m: &Matrix| {
        m.to_rows()
            .iter()
            .flatten()
            .fold(0.0f64, |a, v| a.max(v.abs()))
    };
    let params = json!({ "n": n.n(), "cases": cases, "seed": seed });
    let tol = 1e-12;
    let (mut anti, mut assoc, mut inv, mut dil) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cases {
        let (a, b, c) = (
            random_element(&mut rng, n),
            random_element(&mut rng, n),
            random_element(&mut rng, n),
        );
        let w = symplectic(&a.x, &b.x)? + symplectic(&b.x, &a.x)?;
        anti = anti.max(w.abs() / symplectic(&a.x, &b.x)?.abs().max(1.0));
        let left = group_mul(&group_mul(&a, &b)?, &c)?;
        let right = group_mul(&a, &group_mul(&b, &c)?)?;
        assoc = assoc.max(element_gap(&left, &right));
        let e = GroupElement::identity(n);
        inv = inv
            .max(element_gap(&e, &group_mul(&a, &group_inv(&a))?))
            .max(element_gap(&e, &group_mul(&group_inv(&a), &a)?));
        let delta = DilationFactor::new(rng.gen_range(0.1..4.0))?;
        let lhs = dilate(delta, &group_mul(&a, &b)?);
        let rhs = group_mul(&dilate(delta, &a), &dilate(delta, &b))?;
        dil = dil.max(element_gap(&lhs, &rhs));
    }
    Ok(vec![
        CheckRecord::measured("j_squared", "J² = −I", params.clone(), max_abs(&j2), tol),
        CheckRecord::measured("j_skew", "Jᵗ = −J", params.clone(), max_abs(&jt), tol),
        CheckRecord::measured(
            "symplectic_antisymmetry",
            "xᵗJy = −yᵗJx",
            params.clone(),
            anti,
            tol,
        ),
        CheckRecord::measured(
            "group_associativity",
            "group law is associative",
            params.clone(),
            assoc,
            tol,
        ),
        CheckRecord::measured(
            "group_inverse",
            "(x,t)⁻¹ = (−x,−t)",
            params.clone(),
            inv,
            tol,
        ),
        CheckRecord::measured(
            "dilation_automorphism",
            "dilations respect the group law",
            params,
            dil,
            tol,
        ),
    ])
}

/// det(A ± J) against the diagonal product formula for random diagonal A.
pub fn determinant_product_check(n: HeisenbergDim, cases: usize, seed: u64) -> Result<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = make_j(n);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let diag: Vec<f64> = (0..n.spatial()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let a = Matrix::from_diagonal(&diag);
        let product = diagonal_det_product(&a)?;
        for sign in [1.0, -1.0] {
            let det = a.add(&j.scale(sign))?.determinant()?;
            worst = worst.max((det - product).abs() / product.abs().max(1e-300));
        }
    }
    Ok(CheckRecord::measured(
        "determinant_product",
        "det(A ± J) = ∏(aᵢᵢaₙ₊ᵢ,ₙ₊ᵢ + 1) for diagonal A",
        json!({ "n": n.n(), "cases": cases, "seed": seed }),
        worst,
        1e-10,
    ))
}

fn gaussian_slice(grid: crate::grid::SpatialGrid) -> SliceFunction {
    SliceFunction::from_fn(grid, |x| {
        Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
    })
}

/// Seeded random grid nodes with every coordinate in [−2, 2].
pub fn interior_nodes(grid: &crate::grid::SpatialGrid, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = grid.spacing();
    let span = (2.0f64.min(grid.halfwidth) / h).floor() as i64;
    (0..count)
        .map(|_| {
            (0..grid.axes())
                .map(|_| rng.gen_range(-span..=span) as f64 * h)
                .collect()
        })
        .collect()
}

/// Twisted Plancherel, its pointwise form and the |λ|ⁿ cancellation.
/// Run for n = 1 only; the direct sum costs O(N^{4n}).
pub fn twisted_checks(s: &SuiteSettings) -> Result<Vec<CheckRecord>> {
    const PLANCHEREL: &str = "twisted Plancherel identity";
    const POINTWISE: &str = "pointwise twisted convolution identity";
    const ENDPOINT: &str = "|λ|ⁿ cancels the twisted Plancherel decay";
    let base = json!({ "n": s.n.n(), "A": s.a, "points": s.spatial_points, "halfwidth": s.spatial_halfwidth });
    let mut endpoint_params = base.clone();
    endpoint_params["lambdas"] = json!(s.lambdas);
    endpoint_params["t_points"] = json!(s.t_points);

    let skip = if !is_nondegenerate(&s.a, DEGENERACY_TOL) {
        Some(CheckStatus::SkippedDegenerate)
    } else if s.n.n() > 1 {
        Some(CheckStatus::SkippedUnsupported)
    } else {
        None
    };
    if let Some(status) = skip {
        let mut out = Vec::new();
        for &lambda in &s.lambdas {
            let mut params = base.clone();
            params["lambda"] = json!(lambda);
            out.push(CheckRecord::skipped(
                "twisted_plancherel",
                PLANCHEREL,
                params.clone(),
                1e-2,
                status,
            ));
            out.push(CheckRecord::skipped(
                "twisted_pointwise",
                POINTWISE,
                params,
                1e-3,
                status,
            ));
        }
        for check in ["l2_endpoint_spread", "l2_endpoint_constant"] {
            out.push(CheckRecord::skipped(
                check,
                ENDPOINT,
                endpoint_params.clone(),
                1e-2,
                status,
            ));
        }
        return Ok(out);
    }

    let grid = GridSpec::new(
        s.n,
        s.spatial_halfwidth,
        s.spatial_points,
        s.t_halfwidth,
        s.t_points,
    )?;
    let sg = grid.spatial();
    let f = gaussian_slice(sg);
    let samples = interior_nodes(&sg, 5, s.seed);
    let mut out = Vec::new();
    for &lambda in &s.lambdas {
        let mut params = base.clone();
        params["lambda"] = json!(lambda);
        out.push(match twisted_identity_residual(&f, &s.a, lambda) {
            Ok(r) => CheckRecord::measured(
                "twisted_plancherel",
                PLANCHEREL,
                params.clone(),
                r.rel_err,
                1e-2,
            ),
            Err(_) => CheckRecord::errored("twisted_plancherel", PLANCHEREL, params.clone(), 1e-2),
        });
        params["sample_points"] = json!(samples);
        out.push(
            match pointwise_twisted_identity_residual(&f, &s.a, lambda, &samples) {
                Ok(r) => CheckRecord::measured("twisted_pointwise", POINTWISE, params, r, 1e-3),
                Err(_) => CheckRecord::errored("twisted_pointwise", POINTWISE, params, 1e-3),
            },
        );
    }
    let full = GridFunction::from_fn(grid, |x, t| {
        Complex64::new(
            (-0.5 * (x.iter().map(|v| v * v).sum::<f64>() + t * t)).exp(),
            0.0,
        )
    });
    match l2_endpoint_constancy(&full, &s.a, &s.lambdas) {
        Ok(r) => {
            out.push(CheckRecord::measured(
                "l2_endpoint_spread",
                ENDPOINT,
                endpoint_params.clone(),
                r.spread,
                1e-2,
            ));
            out.push(CheckRecord::measured(
                "l2_endpoint_constant",
                ENDPOINT,
                endpoint_params,
                r.max_deviation,
                1e-2,
            ));
        }
        Err(_) => {
            for check in ["l2_endpoint_spread", "l2_endpoint_constant"] {
                out.push(CheckRecord::errored(
                    check,
                    ENDPOINT,
                    endpoint_params.clone(),
                    1e-2,
                ));
            }
        }
    }
    Ok(out)
}

/// det(2A + J) = det(2A − J).
pub fn determinant_sign_check(a: &SymmetricCoefficientMatrix) -> CheckRecord {
    let plus = det_perturbed(a, Sign::Plus);
    let minus = det_perturbed(a, Sign::Minus);
    CheckRecord::measured(
        "determinant_sign_symmetry",
        "det(2A + J) = det(2A − J)",
        json!({ "A": a }),
        (plus - minus).abs() / plus.abs().max(1.0),
        1e-10,
    )
}

/// Modulus of I_{1+ib}(t − φ(x)) over random points, for each b.
pub fn endpoint_kernel_checks(s: &SuiteSettings) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &b in &s.endpoint_b {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(17));
        let param = EndpointParameter::new(b)?;
        let mut moduli = Vec::with_capacity(100);
        while moduli.len() < 100 {
            let x: Vec<f64> = (0..s.n.spatial())
                .map(|_| rng.gen_range(-3.0..3.0))
                .collect();
            let t = rng.gen_range(-10.0..10.0);
            if let Ok(v) = endpoint_sup_kernel(&s.a, param, &x, t) {
                moduli.push(v.norm());
            }
        }
        let expected = endpoint_modulus(param)?;
        let spread = relative_spread(&moduli);
        let params = json!({ "b": b, "points": 100, "expected_modulus": expected });
        out.push(CheckRecord::measured(
            "endpoint_kernel_modulus",
            "|I_{1+ib}| is constant",
            params,
            spread,
            1e-12,
        ));
    }
    Ok(out)
}

/// Fourier calibration Î_z = c·I_{1−z} and the I_ε → δ limit.
pub fn riesz_checks(s: &SuiteSettings) -> Vec<CheckRecord> {
    let zs: Vec<Complex64> = s
        .z_samples
        .iter()
        .map(|&z| Complex64::new(z, 0.0))
        .collect();
    let settings = CalibrationSettings {
        threshold: f64::INFINITY,
        ..CalibrationSettings::default()
    };
    let params =
        json!({ "z": s.z_samples, "radius": settings.radius, "frequencies": settings.frequencies });
    let mut out = match calibrate_c(&zs, &settings) {
        Ok(cal) => {
            let mut p = params.clone();
            p["c"] = json!(cal.c);
            vec![
                CheckRecord::measured(
                    "riesz_calibration_spread",
                    "Fourier transform of I_z is c·I_{1−z}",
                    p.clone(),
                    cal.spread,
                    1e-2,
                ),
                CheckRecord::measured(
                    "riesz_calibration_real",
                    "Fourier transform of I_z is c·I_{1−z}",
                    p,
                    cal.max_imag_rel,
                    1e-3,
                ),
            ]
        }
        Err(_) => vec![CheckRecord::errored(
            "riesz_calibration_spread",
            "Fourier transform of I_z is c·I_{1−z}",
            params,
            1e-2,
        )],
    };
    let bump = |x: f64| crate::measure::CutoffSpec.profile(x.abs());
    let eps = [0.2, 0.1, 0.05];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| approximate_identity_error(e, bump, 2.0).unwrap_or(f64::NAN))
        .collect();
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    out.push(CheckRecord {
        check: "approximate_identity".into(),
        reference: "I_ε tends to the Dirac mass as ε → 0",
        params: json!({ "epsilon": eps, "errors": errs }),
        value: Some(errs[2]),
        tolerance: errs[1],
        pass: monotone,
        status: if monotone {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        },
    });
    out
}

/// (T_{μ_A}f)_δ = δ^{2n}T_{μ_A}(f_δ) on a dyadic grid, δ = 2.
pub fn dilation_covariance_check(a: &SymmetricCoefficientMatrix) -> Result<CheckRecord> {
    let n = a.dim();
    let params = json!({ "A": a, "delta": 2.0, "spatial_points": 40, "t_points": 512 });
    if n.n() != 1 {
        return Ok(CheckRecord::skipped(
            "dilation_covariance",
            "dilations intertwine T_{μ_A}",
            params,
            0.02,
            CheckStatus::SkippedUnsupported,
        ));
    }
    let grid = GridSpec::new(n, 2.5, 40, 8.0, 512)?;
    let bump = |r2: f64| {
        if r2 < 1.0 {
            (-1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    };
    let f = GridFunction::from_fn(grid, |x, t| {
        Complex64::new(bump(x.iter().map(|v| v * v).sum()) * bump(t * t), 0.0)
    });
    let mu = discretize_mu(a, &grid, 2.0)?;
    let gap = dilation_covariance_discrepancy(&f, &mu, DilationFactor::new(2.0)?, |x, t| {
        x.iter().map(|v| v * v).sum::<f64>() <= 0.25 && t.abs() <= 2.0
    })?;
    Ok(CheckRecord::measured(
        "dilation_covariance",
        "dilations intertwine T_{μ_A}",
        params,
        gap,
        0.02,
    ))
}

/// Runs the whole identity suite.
pub fn run_suite(s: &SuiteSettings) -> Result<Report> {
    let mut checks = algebra_checks(s.n, s.random_cases, s.seed)?;
    checks.push(determinant_product_check(s.n, 200, s.seed.wrapping_add(1))?);
    checks.push(determinant_sign_check(&s.a));
    checks.extend(twisted_checks(s)?);
    checks.extend(endpoint_kernel_checks(s)?);
    checks.extend(riesz_checks(s));
    checks.push(dilation_covariance_check(&s.a)?);
    Ok(Report::new(checks))
}
