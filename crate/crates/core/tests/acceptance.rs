//! Acceptance criteria. Prints one line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;

use heisenlab::convolution::{pointwise_twisted_identity_residual, twisted_identity_residual};
use heisenlab::estimator::{
    adjoint_defect, estimate_norm_pq, reference_points, scan_typeset, DenseOperator,
    EstimatorSettings, MeasureOperator, ScanSettings,
};
use heisenlab::exponents::{
    constraint_slacks, int, necessary_region, ratio, riesz_interpolate, theta_star, vertex_D,
    ExponentPoint, RegionSpec,
};
use heisenlab::grid::{GridFunction, GridSpec, SliceFunction, SpatialGrid};
use heisenlab::group::{HeisenbergDim, SymmetricCoefficientMatrix};
use heisenlab::measure::{annulus_of, discretize_mu, discretize_nu, CutoffSpec, FractionalOrder};
use heisenlab::riesz::l2_endpoint_constancy;
use heisenlab::verify::{
    algebra_checks, determinant_product_check, dilation_covariance_check, endpoint_kernel_checks,
    interior_nodes, riesz_checks, SuiteSettings,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn dim(n: usize) -> HeisenbergDim {
    HeisenbergDim::new(n).unwrap()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn gaussian(grid: SpatialGrid) -> SliceFunction {
    SliceFunction::from_fn(grid, |x| {
        Complex64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
    })
}

fn twisted_cases() -> Vec<(SymmetricCoefficientMatrix, f64)> {
    let mut cases = Vec::new();
    for a in [
        SymmetricCoefficientMatrix::identity(dim(1)),
        SymmetricCoefficientMatrix::diagonal(&[1.0, 2.0]).unwrap(),
    ] {
        for lambda in [0.5, 1.0, 2.0] {
            cases.push((a.clone(), lambda));
        }
    }
    cases
}

fn algebra() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in 1..=3 {
        for r in algebra_checks(dim(n), 1000, 11 + n as u64).unwrap() {
            worst = worst.max(r.value.unwrap());
            pass &= r.pass;
        }
    }
    let t = secs(start.elapsed());
    Outcome {
        pass: pass && worst <= 1e-12 && t < 5.0,
        detail: format!("max relative error {worst:.2e} (≤ 1e-12), {t:.2} s (< 5 s)"),
    }
}

fn determinant_product() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=4 {
        worst = worst.max(
            determinant_product_check(dim(n), 200, 20 + n as u64)
                .unwrap()
                .value
                .unwrap(),
        );
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max relative error {worst:.2e} over n = 1..4 (≤ 1e-10)"),
    }
}

fn twisted_plancherel() -> Outcome {
    let start = Instant::now();
    let coarse = SpatialGrid::new(dim(1), 8.0, 256).unwrap();
    let fine = SpatialGrid::new(dim(1), 8.0, 384).unwrap();
    let (fc, ff) = (gaussian(coarse), gaussian(fine));
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, lambda) in twisted_cases() {
        let e256 = twisted_identity_residual(&fc, &a, lambda).unwrap().rel_err;
        let e384 = twisted_identity_residual(&ff, &a, lambda).unwrap().rel_err;
        let r = e384 / e256;
        let ok = e256 <= 1e-2 && (0.25..=0.75).contains(&r);
        pass &= ok;
        let d = a.matrix().to_rows();
        parts.push(format!(
            "A=diag({},{}) λ={lambda}: {e256:.2e}→{e384:.2e} ratio {r:.2}{}",
            d[0][0],
            d[1][1],
            if ok { "" } else { " ✗" }
        ));
    }
    let t = secs(start.elapsed());
    pass &= t < 60.0;
    Outcome {
        pass,
        detail: format!(
            "error ≤ 1% at 256², ratio 384²/256² in [0.25, 0.75], {t:.0} s (< 60 s); {}",
            parts.join("; ")
        ),
    }
}

fn twisted_pointwise() -> Outcome {
    let grid = SpatialGrid::new(dim(1), 8.0, 256).unwrap();
    let f = gaussian(grid);
    let nodes = interior_nodes(&grid, 5, 5);
    let mut worst = 0.0f64;
    for (a, lambda) in twisted_cases() {
        worst = worst.max(pointwise_twisted_identity_residual(&f, &a, lambda, &nodes).unwrap());
    }
    Outcome {
        pass: worst < 1e-3,
        detail: format!("max residual {worst:.2e} at 5 nodes × 6 cases (< 1e-3)"),
    }
}

fn l2_endpoint() -> Outcome {
    let grid = GridSpec::new(dim(1), 8.0, 256, 8.0, 64).unwrap();
    let f = GridFunction::from_fn(grid, |x, t| {
        Complex64::new(
            (-0.5 * (x.iter().map(|v| v * v).sum::<f64>() + t * t)).exp(),
            0.0,
        )
    });
    let a = SymmetricCoefficientMatrix::identity(dim(1));
    let r = l2_endpoint_constancy(&f, &a, &[0.5, 1.0, 2.0, 4.0]).unwrap();
    Outcome {
        pass: r.spread <= 1e-2 && r.max_deviation <= 1e-2,
        detail: format!(
            "A=I, ratios {:?}, spread {:.2e} (≤ 1e-2), deviation from {:.5} {:.2e} (≤ 1e-2)",
            r.ratios
                .iter()
                .map(|v| format!("{v:.5}"))
                .collect::<Vec<_>>(),
            r.spread,
            r.predicted,
            r.max_deviation
        ),
    }
}

fn endpoint_kernel() -> Outcome {
    let s = SuiteSettings::reference(dim(1));
    let recs = endpoint_kernel_checks(&s).unwrap();
    let worst = recs.iter().map(|r| r.value.unwrap()).fold(0.0, f64::max);
    Outcome {
        pass: recs.len() == 3 && worst <= 1e-12,
        detail: format!("max spread {worst:.2e} over b ∈ {{0,1,5}} (≤ 1e-12)"),
    }
}

fn fourier_reflection() -> Outcome {
    let recs = riesz_checks(&SuiteSettings::reference(dim(1)));
    let spread = recs
        .iter()
        .find(|r| r.check == "riesz_calibration_spread")
        .and_then(|r| r.value);
    let imag = recs
        .iter()
        .find(|r| r.check == "riesz_calibration_real")
        .and_then(|r| r.value);
    let c = recs[0].params["c"].as_f64().unwrap_or(f64::NAN);
    match (spread, imag) {
        (Some(s), Some(i)) => Outcome {
            pass: s <= 1e-2 && i <= 1e-3,
            detail: format!("c = {c:.5}, spread {s:.2e} (≤ 1e-2), imag {i:.2e} (≤ 1e-3)"),
        },
        _ => Outcome {
            pass: false,
            detail: "calibration failed".into(),
        },
    }
}

fn dilation_covariance() -> Outcome {
    let r = dilation_covariance_check(&SymmetricCoefficientMatrix::identity(dim(1))).unwrap();
    let v = r.value.unwrap();
    Outcome {
        pass: v <= 0.02,
        detail: format!("relative L² discrepancy {v:.2e} at δ = 2 (≤ 2e-2)"),
    }
}

fn exponent_geometry() -> Outcome {
    let r0 = RegionSpec::new(dim(1), int(0)).unwrap();
    let r1 = RegionSpec::new(dim(1), int(1)).unwrap();
    let d0 = vertex_D(&r0);
    let one = ExponentPoint::new(int(1), int(1)).unwrap();
    let checks = [
        (
            "D(1,0) = (3/4, 1/4)",
            d0 == ExponentPoint::new(ratio(3, 4), ratio(1, 4)).unwrap(),
        ),
        ("θ*(1,1) = 1/2", theta_star(&r1) == ratio(1, 2)),
        (
            "interpolation at θ* gives D(1,1)",
            riesz_interpolate(&one, &d0, &theta_star(&r1)).unwrap() == vertex_D(&r1),
        ),
        ("D(1,0) on its region boundary", {
            let s = constraint_slacks(&r0, &d0);
            necessary_region(&r0, &d0) && s[1] == int(0) && s[2] == int(0) && s[3] == int(0)
        }),
        ("D(1,1) on its region boundary", {
            let d1 = vertex_D(&r1);
            let s = constraint_slacks(&r1, &d1);
            necessary_region(&r1, &d1) && s[1] == int(0) && s[3] == int(0)
        }),
    ];
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} exact identities hold", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    }
}

fn mass_scaling() -> Outcome {
    let n = dim(1);
    let grid = GridSpec::with_spacing(n, 2.0, 2.0, 1.0 / 32.0).unwrap();
    let a = SymmetricCoefficientMatrix::identity(n);
    let mut pass = true;
    let mut parts = Vec::new();
    for gamma in [0.0, 0.5, 1.0] {
        let nu = discretize_nu(
            &a,
            FractionalOrder::new(gamma, n).unwrap(),
            &grid,
            &CutoffSpec,
        )
        .unwrap();
        let scaled: Vec<f64> = (0..4)
            .map(|k| {
                annulus_of(&nu, k, grid.h_x()).unwrap().total_mass()
                    * 2f64.powf(k as f64 * (2.0 - gamma))
            })
            .collect();
        let hi = scaled.iter().cloned().fold(f64::MIN, f64::max);
        let lo = scaled.iter().cloned().fold(f64::MAX, f64::min);
        pass &= lo > 0.0 && hi / lo <= 3.0;
        parts.push(format!("γ={gamma}: factor {:.2}", hi / lo));
    }
    Outcome {
        pass,
        detail: format!("k = 0..3 at h = 1/32, {} (≤ 3)", parts.join(", ")),
    }
}

fn largest_singular_value(op: &DenseOperator, size: usize) -> f64 {
    DMatrix::from_row_slice(size, size, op.entries())
        .singular_values()
        .max()
}

fn estimator_oracle() -> Outcome {
    let n = dim(1);
    let grid = GridSpec::new(n, 2.0, 8, 2.0, 8).unwrap();
    let a = SymmetricCoefficientMatrix::identity(n);
    let mu = discretize_mu(&a, &grid, 2.0).unwrap();
    let nu = discretize_nu(
        &a,
        FractionalOrder::new(0.5, n).unwrap(),
        &grid,
        &CutoffSpec,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let random: Vec<f64> = (0..256).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let dense = vec![
        (
            "μ_A",
            DenseOperator::materialize(&MeasureOperator::new(grid, &mu).unwrap()),
        ),
        (
            "ν_γ",
            DenseOperator::materialize(&MeasureOperator::new(grid, &nu).unwrap()),
        ),
        (
            "random 16×16",
            DenseOperator::new(16, random, 0.25).unwrap(),
        ),
    ];
    let settings = EstimatorSettings {
        seeds: 2,
        max_iter: 20000,
        tol: 1e-13,
        seed: 0,
    };
    let mut worst_norm = 0.0f64;
    let mut worst_adj = 0.0f64;
    let mut parts = Vec::new();
    for (name, op) in &dense {
        let size = (op.entries().len() as f64).sqrt() as usize;
        let sigma = largest_singular_value(op, size);
        let est = estimate_norm_pq(op, 2.0, 2.0, &settings).unwrap().estimate;
        let rel = (est - sigma).abs() / sigma;
        worst_norm = worst_norm.max(rel);
        parts.push(format!("{name}: σ₁ {sigma:.6}, rel {rel:.1e}"));
    }
    for m in [&mu, &nu] {
        worst_adj = worst_adj.max(adjoint_defect(
            &MeasureOperator::new(grid, m).unwrap(),
            100,
            9,
        ));
    }
    for (_, op) in &dense {
        worst_adj = worst_adj.max(adjoint_defect(op, 100, 9));
    }
    Outcome {
        pass: worst_norm <= 1e-6 && worst_adj <= 1e-6,
        detail: format!(
            "norm vs SVD {worst_norm:.1e} (≤ 1e-6), adjoint {worst_adj:.1e} (≤ 1e-6); {}",
            parts.join("; ")
        ),
    }
}

fn type_set_scan() -> Outcome {
    let start = Instant::now();
    let r = RegionSpec::new(dim(1), int(0)).unwrap();
    let points = reference_points();
    let result = scan_typeset(&r, &points, &ScanSettings::reference(dim(1))).unwrap();
    let t = secs(start.elapsed());
    let agree = result.agreement();
    let inside = result.samples.iter().filter(|s| s.theory_member).count();
    Outcome {
        pass: agree >= 10 && inside == 6 && points.len() == 12 && t < 1800.0,
        detail: format!(
            "{agree}/12 agree (≥ 10), {inside} inside / {} outside, {t:.0} s",
            12 - inside
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact algebra", algebra),
        ("diagonal determinant product", determinant_product),
        ("twisted Plancherel identity", twisted_plancherel),
        ("pointwise twisted identity", twisted_pointwise),
        ("L² endpoint λ-cancellation", l2_endpoint),
        ("L¹→L^∞ endpoint kernel", endpoint_kernel),
        ("Fourier reflection of I_z", fourier_reflection),
        ("dilation covariance", dilation_covariance),
        ("exponent geometry", exponent_geometry),
        ("dyadic mass scaling", mass_scaling),
        ("norm estimator oracle", estimator_oracle),
        ("type-set scan", type_set_scan),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "criterion {:>2} {:<30} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("{} passed, {} failed", 12 - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
