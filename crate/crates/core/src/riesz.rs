//! The kernels I_z(s) = 2^{−z/2} Γ(z/2)^{−1} |s|^{z−1}, their Fourier
//! calibration Î_z = c·I_{1−z}, and the two endpoint quantities that drive
//! complex interpolation for μ_A.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::convolution::{
    lp_norm, oscillatory_factor, partial_fourier_t, twisted_convolve, twisted_plancherel_constant,
};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::group::{
    det_perturbed, is_nondegenerate, phi, Sign, SymmetricCoefficientMatrix, DEGENERACY_TOL,
};
use crate::measure::CutoffSpec;
use crate::numeric::{gauss_legendre, gauss_legendre_complex, relative_spread};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) by the Lanczos approximation, reflected into Re z ≥ 1/2.
pub fn gamma_fn(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::invalid("z", "must be finite"));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(format!("{z}")));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * gamma_unchecked(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Order z of the kernel I_z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexOrder {
    z: Complex64,
}

impl ComplexOrder {
    pub fn new(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::invalid("z", "must be finite"));
        }
        Ok(ComplexOrder { z })
    }

    pub fn real(z: f64) -> Result<Self> {
        Self::new(Complex64::new(z, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.z
    }

    /// Whether I_z is a locally integrable function (Re z > 0).
    pub fn in_function_regime(self) -> bool {
        self.z.re > 0.0
    }

    /// 2^{−z/2} / Γ(z/2).
    pub fn normalization(self) -> Result<Complex64> {
        let half = self.z / 2.0;
        Ok(Complex64::new(2.0, 0.0).powc(-half) / gamma_fn(half)?)
    }
}

/// Imaginary shift b on the line Re z = 1 (or Re z = −n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointParameter(f64);

impl EndpointParameter {
    pub fn new(b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::invalid("b", "must be finite"));
        }
        Ok(EndpointParameter(b))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The order 1 + ib.
    pub fn order(self) -> ComplexOrder {
        ComplexOrder {
            z: Complex64::new(1.0, self.0),
        }
    }
}

/// U_z = δ ⊗ I_z on ℍⁿ, known only through its two endpoint formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorKernel {
    pub order: ComplexOrder,
    pub n: crate::group::HeisenbergDim,
}

impl TensorKernel {
    /// (μ_A ∗ U_z)(x, t) = I_z(t − φ(x)).
    pub fn against_graph(
        &self,
        a: &SymmetricCoefficientMatrix,
        x: &[f64],
        t: f64,
    ) -> Result<Complex64> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n.spatial(),
                got: a.dim().spatial(),
            });
        }
        riesz_kernel(self.order, t - phi(a, x)?)
    }
}

/// I_z(s) in the function regime.
pub fn riesz_kernel(z: ComplexOrder, s: f64) -> Result<Complex64> {
    if !z.in_function_regime() {
        return Err(Error::OutOfRegime(format!(
            "Re z = {} must be positive",
            z.z.re
        )));
    }
    if s == 0.0 || !s.is_finite() {
        return Err(Error::invalid(
            "s",
            format!("must be finite and nonzero, got {s}"),
        ));
    }
    Ok(z.normalization()? * Complex64::new(s.abs(), 0.0).powc(z.z - 1.0))
}

/// I_{1+ib}(t − φ(x)).
pub fn endpoint_sup_kernel(
    a: &SymmetricCoefficientMatrix,
    b: EndpointParameter,
    x: &[f64],
    t: f64,
) -> Result<Complex64> {
    let s = t - phi(a, x)?;
    if s == 0.0 {
        return Err(Error::invalid("t", "lies on the graph t = φ(x)"));
    }
    riesz_kernel(b.order(), s)
}

/// |2^{−(1+ib)/2} / Γ((1+ib)/2)|, the L¹→L^∞ bound at Re z = 1.
pub fn endpoint_modulus(b: EndpointParameter) -> Result<f64> {
    Ok(b.order().normalization()?.norm())
}

/// Radius scale and cell width for the truncated Fourier integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationSettings {
    pub radius: f64,
    pub coarse_radius: f64,
    pub cell: f64,
    pub frequencies: [f64; 3],
    pub threshold: f64,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings {
            radius: 40.0,
            coarse_radius: 20.0,
            cell: 0.05,
            frequencies: [1.0, 2.0, 4.0],
            threshold: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationSample {
    pub z: Complex64,
    pub xi: f64,
    pub ratio: Complex64,
    /// Relative change of the transform between the two truncation radii.
    pub truncation_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub c: f64,
    pub spread: f64,
    pub max_imag_rel: f64,
    pub samples: Vec<CalibrationSample>,
}

/// ∫ I_z(s) η(s/R) e^{−iξs} ds with η the smooth radial cutoff.
pub fn truncated_fourier(z: ComplexOrder, xi: f64, radius: f64, cell: f64) -> Result<Complex64> {
    if !z.in_function_regime() || z.z.re >= 1.0 {
        return Err(Error::OutOfRegime(format!(
            "need 0 < Re z < 1, got {}",
            z.z
        )));
    }
    if radius < cell || cell <= 0.0 {
        return Err(Error::invalid("radius", "must exceed the cell width"));
    }
    let zz = z.z;
    let xi2 = xi * xi;
    // Innermost cell: s^{z−1} against the cosine series, integrated exactly.
    let mut head = Complex64::new(0.0, 0.0);
    let mut coef = 1.0;
    let mut hp = Complex64::new(cell, 0.0).powc(zz);
    for k in 0..60 {
        let term = hp * coef / (zz + 2.0 * k as f64);
        head += term;
        if term.norm() <= 1e-18 * head.norm() {
            break;
        }
        coef *= -xi2 / (((2 * k + 1) * (2 * k + 2)) as f64);
        hp *= cell * cell;
    }
    let outer = CutoffSpec::OUTER_RADIUS * radius;
    let cells = ((outer - cell) / cell).round() as usize;
    let tail = gauss_legendre_complex(cell, outer, cells, |s| {
        Complex64::new(s, 0.0).powc(zz - 1.0) * (CutoffSpec.profile(s / radius) * (xi * s).cos())
    });
    Ok(z.normalization()? * 2.0 * (head + tail))
}

/// Fits c in Î_z = c·I_{1−z} over the given orders and the configured frequencies.
pub fn calibrate_c(z_samples: &[Complex64], settings: &CalibrationSettings) -> Result<Calibration> {
    if z_samples.is_empty() {
        return Err(Error::invalid("z_samples", "must be nonempty"));
    }
    let mut samples = Vec::new();
    for &z in z_samples {
        let order = ComplexOrder::new(z)?;
        if !(z.re > 0.0 && z.re < 1.0) {
            return Err(Error::OutOfRegime(format!("need 0 < Re z < 1, got {z}")));
        }
        let dual = ComplexOrder::new(Complex64::new(1.0, 0.0) - z)?;
        for &xi in &settings.frequencies {
            let fine = truncated_fourier(order, xi, settings.radius, settings.cell)?;
            let coarse = truncated_fourier(order, xi, settings.coarse_radius, settings.cell)?;
            let ratio = fine / riesz_kernel(dual, xi)?;
            samples.push(CalibrationSample {
                z,
                xi,
                ratio,
                truncation_gap: (fine - coarse).norm() / fine.norm(),
            });
        }
    }
    let reals: Vec<f64> = samples.iter().map(|s| s.ratio.re).collect();
    let spread = relative_spread(&reals);
    let c = reals.iter().sum::<f64>() / reals.len() as f64;
    let max_imag_rel = samples
        .iter()
        .map(|s| s.ratio.im.abs() / s.ratio.norm())
        .fold(0.0, f64::max);
    if spread > settings.threshold {
        return Err(Error::IllConditioned {
            spread,
            threshold: settings.threshold,
        });
    }
    Ok(Calibration {
        c,
        spread,
        max_imag_rel,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointConstancy {
    pub lambdas: Vec<f64>,
    /// |λ|ⁿ‖f^λ ×_λ e_{λA}‖₂ / ‖f^λ‖₂ per λ.
    pub ratios: Vec<f64>,
    pub spread: f64,
    pub predicted: f64,
    /// Largest relative deviation of a ratio from the predicted constant.
    pub max_deviation: f64,
}

/// Checks that |λ|ⁿ cancels the λ-decay of the twisted Plancherel constant.
pub fn l2_endpoint_constancy(
    f: &GridFunction,
    a: &SymmetricCoefficientMatrix,
    lambdas: &[f64],
) -> Result<EndpointConstancy> {
    if !is_nondegenerate(a, DEGENERACY_TOL) {
        return Err(Error::Degenerate {
            det: det_perturbed(a, Sign::Plus),
            tol: DEGENERACY_TOL,
        });
    }
    if lambdas.is_empty() || lambdas.iter().any(|&l| l == 0.0 || !l.is_finite()) {
        return Err(Error::invalid(
            "lambda",
            "need a nonempty list of finite nonzero values",
        ));
    }
    let n = a.dim().n() as i32;
    let sg = f.grid().spatial();
    let mut ratios = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let fl = partial_fourier_t(f, lambda);
        let denom = lp_norm(&fl, 2.0)?;
        if denom == 0.0 {
            return Err(Error::VanishingNorm("f^λ"));
        }
        let e = oscillatory_factor(a, lambda, &sg)?;
        let conv = twisted_convolve(&fl, &e, lambda)?;
        ratios.push(lambda.abs().powi(n) * lp_norm(&conv, 2.0)? / denom);
    }
    let predicted = twisted_plancherel_constant(a, 1.0)?;
    let max_deviation = ratios
        .iter()
        .map(|r| (r - predicted).abs() / predicted)
        .fold(0.0, f64::max);
    Ok(EndpointConstancy {
        lambdas: lambdas.to_vec(),
        spread: relative_spread(&ratios),
        ratios,
        predicted,
        max_deviation,
    })
}

/// |∫ I_ε(s) φ(s) ds − φ(0)| for an even test function φ supported in [−support, support].
pub fn approximate_identity_error<F: Fn(f64) -> f64>(
    eps: f64,
    test: F,
    support: f64,
) -> Result<f64> {
    let order = ComplexOrder::real(eps)?;
    if !order.in_function_regime() {
        return Err(Error::OutOfRegime(format!("ε = {eps} must be positive")));
    }
    let k = order.normalization()?.re;
    let phi0 = test(0.0);
    // ∫₀^S s^{ε−1}φ = φ(0)S^ε/ε + ∫₀^S s^{ε−1}(φ(s) − φ(0)); the second part on a geometric mesh.
    let mut rest = 0.0;
    let mut hi = support;
    for _ in 0..60 {
        let lo = hi / 2.0;
        rest += gauss_legendre(lo, hi, 4, |s| s.powf(eps - 1.0) * (test(s) - phi0));
        hi = lo;
    }
    let integral = 2.0 * k * (phi0 * support.powf(eps) / eps + rest);
    Ok((integral - phi0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::HeisenbergDim;

    /// Γ(z) = ∫ exp(zv − e^v) dv by the trapezoid rule, for Re z > 0.
    fn gamma_oracle(z: Complex64) -> Complex64 {
        // The left tail decays like e^{Re(z)·v}.
        let (lo, hi, h) = (-40.0 / z.re, 6.0, 1e-3);
        let steps = ((hi - lo) / h) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=steps {
            let v: f64 = lo + i as f64 * h;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            acc += (z * v - v.exp()).exp() * w;
        }
        acc * h
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_classical_values() {
        assert!((gamma_fn(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let half = gamma_fn(c(0.5, 0.0)).unwrap();
        assert!((half.re - PI.sqrt()).abs() < 1e-14 * PI.sqrt());
        assert!((half - gamma_oracle(c(0.5, 0.0))).norm() < 1e-10);
        assert!((gamma_fn(c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_on_the_critical_line() {
        let g = gamma_fn(c(0.5, 1.0)).unwrap();
        let oracle = gamma_oracle(c(0.5, 1.0));
        assert!((g - oracle).norm() / oracle.norm() < 1e-10);
        assert!((g.norm_sqr() - PI / PI.cosh()).abs() < 1e-12);
    }

    #[test]
    fn gamma_matches_oracle_in_right_half_plane() {
        for z in [
            c(0.3, 0.0),
            c(0.7, -2.0),
            c(1.5, 3.0),
            c(3.2, 0.4),
            c(0.15, 5.0),
        ] {
            let g = gamma_fn(z).unwrap();
            let o = gamma_oracle(z);
            assert!((g - o).norm() / o.norm() < 1e-10, "{z}: {g} vs {o}");
        }
    }

    #[test]
    fn gamma_poles_and_reflection() {
        for k in 0..4 {
            assert!(matches!(
                gamma_fn(c(-(k as f64), 0.0)),
                Err(Error::GammaPole(_))
            ));
        }
        // Γ(−1/2) = −2√π.
        assert!((gamma_fn(c(-0.5, 0.0)).unwrap().re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn riesz_kernel_examples() {
        let one = ComplexOrder::real(1.0).unwrap();
        for s in [-3.0, 0.1, 7.5] {
            let v = riesz_kernel(one, s).unwrap();
            assert!((v.re - (2.0 * PI).powf(-0.5)).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
        let two = ComplexOrder::real(2.0).unwrap();
        assert!((riesz_kernel(two, -3.0).unwrap().re - 1.5).abs() < 1e-14);
        let edge = EndpointParameter::new(2.0).unwrap().order();
        let m1 = riesz_kernel(edge, 0.01).unwrap().norm();
        let m2 = riesz_kernel(edge, 300.0).unwrap().norm();
        assert!((m1 - m2).abs() < 1e-14);
        assert!(riesz_kernel(ComplexOrder::real(-0.5).unwrap(), 1.0).is_err());
        assert!(riesz_kernel(one, 0.0).is_err());
    }

    #[test]
    fn endpoint_kernel_modulus() {
        let n1 = HeisenbergDim::new(1).unwrap();
        let a = SymmetricCoefficientMatrix::identity(n1);
        let b0 = EndpointParameter::new(0.0).unwrap();
        let v = endpoint_sup_kernel(&a, b0, &[0.3, 0.4], 2.0).unwrap();
        assert!((v - (2.0 * PI).powf(-0.5)).norm() < 1e-15);
        let b1 = EndpointParameter::new(1.0).unwrap();
        let expect = (c(2.0, 0.0).powc(c(-0.5, -0.5)) / gamma_fn(c(0.5, 0.5)).unwrap()).norm();
        assert!((endpoint_modulus(b1).unwrap() - expect).abs() < 1e-15);
        let v = endpoint_sup_kernel(&a, b1, &[1.0, 1.0], -4.0).unwrap();
        assert!((v.norm() - expect).abs() < 1e-14);
        assert!(endpoint_sup_kernel(&a, b1, &[1.0, 0.0], 1.0).is_err());
        let tk = TensorKernel {
            order: b1.order(),
            n: n1,
        };
        assert_eq!(tk.against_graph(&a, &[1.0, 1.0], -4.0).unwrap(), v);
    }

    #[test]
    fn truncated_transform_at_the_self_dual_point() {
        let half = ComplexOrder::real(0.5).unwrap();
        let ft = truncated_fourier(half, 1.0, 40.0, 0.05).unwrap();
        let ratio = ft / riesz_kernel(half, 1.0).unwrap();
        assert!(ratio.im.abs() < 1e-3 * ratio.norm());
        assert!(ratio.re > 0.0);
    }

    #[test]
    fn calibration_constant_is_real_and_z_independent() {
        let zs = [c(0.3, 0.0), c(0.5, 0.0), c(0.7, 0.0), c(0.4, 0.8)];
        let cal = calibrate_c(&zs, &CalibrationSettings::default()).unwrap();
        assert!(cal.spread <= 1e-2, "{}", cal.spread);
        assert!(cal.max_imag_rel <= 1e-3, "{}", cal.max_imag_rel);
        // Closed form via ∫|s|^{z−1}e^{−iξs}ds = 2Γ(z)cos(πz/2)|ξ|^{−z}.
        let z = c(0.3, 0.0);
        let closed = c(2.0, 0.0).powc(c(0.5, 0.0) - z)
            * 2.0
            * gamma_fn(z).unwrap()
            * (z * PI / 2.0).cos()
            * gamma_fn((c(1.0, 0.0) - z) / 2.0).unwrap()
            / gamma_fn(z / 2.0).unwrap();
        assert!((cal.c - closed.re).abs() < 1e-3 * closed.re);
        // The radius-20 transform is the cruder one; its gap shrinks as ξ grows.
        for per_z in cal.samples.chunks(3) {
            assert!(per_z[0].truncation_gap > per_z[1].truncation_gap);
            assert!(per_z[1].truncation_gap > per_z[2].truncation_gap);
            assert!(per_z[0].truncation_gap < 0.05);
        }
    }

    #[test]
    fn calibration_rejects_orders_outside_the_strip() {
        assert!(calibrate_c(&[c(1.2, 0.0)], &CalibrationSettings::default()).is_err());
        assert!(calibrate_c(&[], &CalibrationSettings::default()).is_err());
    }

    #[test]
    fn approximate_identity_improves_as_order_shrinks() {
        let bump = |s: f64| CutoffSpec.profile(s.abs());
        let errs: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&e| approximate_identity_error(e, bump, 2.0).unwrap())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        // At ε = 2 the kernel is |s|/2 and the pairing is ∫|s|φ(s)ds/2, far from φ(0).
        assert!(approximate_identity_error(2.0, bump, 2.0).unwrap() > 0.1);
    }

    #[test]
    fn endpoint_constancy_rejects_degenerate_matrix() {
        let n1 = HeisenbergDim::new(1).unwrap();
        let grid = crate::grid::GridSpec::new(n1, 4.0, 16, 4.0, 16).unwrap();
        let f = GridFunction::zeros(grid);
        let deg = SymmetricCoefficientMatrix::diagonal(&[0.5, -0.5]).unwrap();
        assert!(matches!(
            l2_endpoint_constancy(&f, &deg, &[1.0]),
            Err(Error::Degenerate { .. })
        ));
        let a = SymmetricCoefficientMatrix::identity(n1);
        assert!(matches!(
            l2_endpoint_constancy(&f, &a, &[1.0]),
            Err(Error::VanishingNorm(_))
        ));
    }

    #[test]
    fn endpoint_constancy_small_gaussian() {
        let n1 = HeisenbergDim::new(1).unwrap();
        let grid = crate::grid::GridSpec::new(n1, 8.0, 64, 8.0, 64).unwrap();
        let f = GridFunction::from_fn(grid, |x, t| {
            c((-0.5 * (x[0] * x[0] + x[1] * x[1] + t * t)).exp(), 0.0)
        });
        let a = SymmetricCoefficientMatrix::identity(n1);
        let r = l2_endpoint_constancy(&f, &a, &[0.5, 1.0]).unwrap();
        assert!(r.spread < 0.05, "{r:?}");
        assert!((r.predicted - 2.0 * PI / 5f64.sqrt()).abs() < 1e-12);
    }
}
