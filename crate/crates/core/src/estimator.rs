//! Lᵖ→Lq norm estimates for measure-convolution operators by a nonlinear
//! power method, growth classification under refinement, and type-set scans.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convolution::{lp_norm_of, MeasureConvolution};
use crate::error::{Error, Result};
use crate::exponents::{distance_to_boundary, necessary_region, ExponentPoint, RegionSpec};
use crate::grid::GridSpec;
use crate::group::SymmetricCoefficientMatrix;
use crate::measure::{discretize_nu, reflect_measure, CutoffSpec, DiscreteMeasure, MeasureKind};
use crate::numeric::{fit_slope, pairwise_sum};

/// Slope at or below which a point is classified bounded.
pub const BOUNDED_SLOPE: f64 = 0.1;
/// Slope at or above which a point is classified unbounded.
pub const UNBOUNDED_SLOPE: f64 = 0.4;

/// A real linear operator on sampled functions with a uniform cell volume.
pub trait NormOperator: Sync {
    fn len(&self) -> usize;
    fn cell_volume(&self) -> f64;
    fn forward(&self, f: &[f64]) -> Vec<f64>;
    fn adjoint(&self, g: &[f64]) -> Vec<f64>;
    fn descriptor(&self) -> String;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// f ↦ f ∗ m with adjoint g ↦ g ∗ m̃ (reflected measure).
#[derive(Debug, Clone)]
pub struct MeasureOperator {
    grid: GridSpec,
    forward: MeasureConvolution,
    adjoint: MeasureConvolution,
    kind: MeasureKind,
    mass: f64,
}

impl MeasureOperator {
    pub fn new(grid: GridSpec, m: &DiscreteMeasure) -> Result<Self> {
        Ok(MeasureOperator {
            grid,
            forward: MeasureConvolution::new(grid, m)?,
            adjoint: MeasureConvolution::new(grid, &reflect_measure(m))?,
            kind: m.kind(),
            mass: m.total_mass(),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
}

impl NormOperator for MeasureOperator {
    fn len(&self) -> usize {
        self.grid.len()
    }

    fn cell_volume(&self) -> f64 {
        self.grid.cell_volume()
    }

    fn forward(&self, f: &[f64]) -> Vec<f64> {
        self.forward.apply(f)
    }

    fn adjoint(&self, g: &[f64]) -> Vec<f64> {
        self.adjoint.apply(g)
    }

    fn descriptor(&self) -> String {
        format!(
            "{:?} convolution, {} atoms, mass {:.6e}, h = {}",
            self.kind,
            self.forward.atom_count(),
            self.mass,
            self.grid.h_x()
        )
    }
}

/// A square matrix acting on `size` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    size: usize,
    entries: Vec<f64>,
    cell_volume: f64,
}

impl DenseOperator {
    pub fn new(size: usize, entries: Vec<f64>, cell_volume: f64) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                got: entries.len(),
            });
        }
        if !(cell_volume > 0.0) {
            return Err(Error::invalid("cell_volume", "must be positive"));
        }
        Ok(DenseOperator {
            size,
            entries,
            cell_volume,
        })
    }

    /// Materializes any operator column by column.
    pub fn materialize<T: NormOperator + ?Sized>(op: &T) -> Self {
        let size = op.len();
        let mut entries = vec![0.0; size * size];
        let mut e = vec![0.0; size];
        for col in 0..size {
            e[col] = 1.0;
            for (row, v) in op.forward(&e).into_iter().enumerate() {
                entries[row * size + col] = v;
            }
            e[col] = 0.0;
        }
        DenseOperator {
            size,
            entries,
            cell_volume: op.cell_volume(),
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

impl NormOperator for DenseOperator {
    fn len(&self) -> usize {
        self.size
    }

    fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    fn forward(&self, f: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.size)
            .map(|row| pairwise_sum(self.size, |j| row[j] * f[j]))
            .collect()
    }

    fn adjoint(&self, g: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|j| pairwise_sum(self.size, |i| self.entries[i * self.size + j] * g[i]))
            .collect()
    }

    fn descriptor(&self) -> String {
        format!("dense {}x{} matrix", self.size, self.size)
    }
}

/// ⟨a, b⟩ with the cell volume.
pub fn inner_product(a: &[f64], b: &[f64], cell_volume: f64) -> f64 {
    pairwise_sum(a.len(), |i| a[i] * b[i]) * cell_volume
}

/// Largest |⟨Tf,g⟩ − ⟨f,T*g⟩| / (‖f‖₂‖g‖₂) over `pairs` seeded random pairs.
pub fn adjoint_defect<T: NormOperator + ?Sized>(op: &T, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vol = op.cell_volume();
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let f: Vec<f64> = (0..op.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g: Vec<f64> = (0..op.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lhs = inner_product(&op.forward(&f), &g, vol);
        let rhs = inner_product(&f, &op.adjoint(&g), vol);
        let scale = inner_product(&f, &f, vol).sqrt() * inner_product(&g, &g, vol).sqrt();
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorSettings {
    pub seeds: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        EstimatorSettings {
            seeds: 2,
            max_iter: 200,
            tol: 1e-6,
            seed: 0,
        }
    }
}

/// Outcome of the power method on one operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerResult {
    pub estimate: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// J_r(v) = |v|^{r−1} sign v, computed on v / max|v| to stay in range.
fn duality_map(v: &[f64], r: f64) -> Vec<f64> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return vec![0.0; v.len()];
    }
    v.iter()
        .map(|&x| {
            let u = x / max;
            u.abs().powf(r - 1.0).copysign(u)
        })
        .collect()
}

fn check_exponent(name: &'static str, r: f64) -> Result<()> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::invalid(name, format!("must lie in (1, ∞), got {r}")));
    }
    Ok(())
}

/// Nonlinear power method for ‖T‖_{p→q}, best over seeded starts.
pub fn estimate_norm_pq<T: NormOperator + ?Sized>(
    op: &T,
    p: f64,
    q: f64,
    settings: &EstimatorSettings,
) -> Result<PowerResult> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    if settings.seeds == 0 {
        return Err(Error::invalid("seeds", "need at least one seed"));
    }
    let p_dual = p / (p - 1.0);
    let vol = op.cell_volume();
    let mut best: Option<PowerResult> = None;
    for s in 0..settings.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(s as u64));
        // Even seeds start nonnegative, odd seeds sign-mixed.
        let lo = if s % 2 == 0 { 0.0 } else { -1.0 };
        let mut f: Vec<f64> = (0..op.len()).map(|_| rng.gen_range(lo..1.0)).collect();
        let mut run = PowerResult {
            estimate: 0.0,
            iterations: 0,
            converged: false,
        };
        let mut prev = f64::NAN;
        for it in 1..=settings.max_iter {
            let norm = lp_norm_of(&abs(&f), vol, p)?;
            if norm == 0.0 {
                break;
            }
            f.iter_mut().for_each(|v| *v /= norm);
            let g = op.forward(&f);
            let ratio = lp_norm_of(&abs(&g), vol, q)?;
            run.estimate = run.estimate.max(ratio);
            run.iterations = it;
            if (ratio - prev).abs() <= settings.tol * ratio {
                run.converged = true;
                break;
            }
            prev = ratio;
            let back = op.adjoint(&duality_map(&g, q));
            f = duality_map(&back, p_dual);
        }
        if best.map_or(true, |b| run.estimate > b.estimate) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one seed"))
}

fn abs(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.abs()).collect()
}

/// Total mass of m, an exact bound for ‖T_m‖_{1→1}.
pub fn bound_11(m: &DiscreteMeasure) -> f64 {
    m.total_mass()
}

/// 2n − (2n+2)/p + (2n+2)/q, the exponent of δ in ‖T_{μ_A}‖ under dilation.
pub fn dilation_exponent(n: crate::group::HeisenbergDim, p: f64, q: f64) -> f64 {
    let hom = n.homogeneous() as f64;
    n.spatial() as f64 - hom / p + hom / q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Bounded,
    Unbounded,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Bounded => "bounded",
            Classification::Unbounded => "unbounded",
            Classification::Inconclusive => "inconclusive",
        }
    }

    pub fn from_slope(slope: f64) -> Self {
        if slope <= BOUNDED_SLOPE {
            Classification::Bounded
        } else if slope >= UNBOUNDED_SLOPE {
            Classification::Unbounded
        } else {
            Classification::Inconclusive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionEstimate {
    pub h: f64,
    pub estimate: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub p: f64,
    pub q: f64,
    pub per_resolution: Vec<ResolutionEstimate>,
    /// d log‖T‖ / d log(1/h).
    pub growth_slope: f64,
}

/// Estimates at each resolution (finest last), fits the growth slope and classifies.
pub fn refine_and_classify<T: NormOperator>(
    family: &[(f64, T)],
    p: f64,
    q: f64,
    settings: &EstimatorSettings,
) -> Result<(NormEstimate, Classification)> {
    if family.len() < 3 {
        return Err(Error::invalid("resolutions", "need at least three"));
    }
    for w in family.windows(2) {
        if ((w[0].0 / w[1].0) - 2.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "resolutions",
                "each spacing must halve the previous one",
            ));
        }
    }
    let per_resolution = family
        .iter()
        .map(|(h, op)| {
            let r = estimate_norm_pq(op, p, q, settings)?;
            Ok(ResolutionEstimate {
                h: *h,
                estimate: r.estimate,
                iterations: r.iterations,
                converged: r.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = per_resolution.iter().map(|r| (1.0 / r.h).ln()).collect();
    let ys: Vec<f64> = per_resolution.iter().map(|r| r.estimate.ln()).collect();
    let growth_slope = fit_slope(&xs, &ys);
    let class = if per_resolution.iter().all(|r| r.converged) {
        Classification::from_slope(growth_slope)
    } else {
        Classification::Inconclusive
    };
    Ok((
        NormEstimate {
            p,
            q,
            per_resolution,
            growth_slope,
        },
        class,
    ))
}

/// Discretization and estimator choices for a type-set scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSettings {
    pub a: SymmetricCoefficientMatrix,
    pub spatial_halfwidth: f64,
    pub t_halfwidth: f64,
    /// Spatial spacings, coarsest first, each half the previous.
    pub resolutions: Vec<f64>,
    pub estimator: EstimatorSettings,
    pub min_boundary_distance: f64,
}

impl ScanSettings {
    pub fn reference(n: crate::group::HeisenbergDim) -> Self {
        ScanSettings {
            a: SymmetricCoefficientMatrix::identity(n),
            spatial_halfwidth: 2.0,
            t_halfwidth: 2.0,
            resolutions: vec![0.5, 0.25, 0.125],
            estimator: EstimatorSettings {
                seeds: 2,
                max_iter: 60,
                tol: 1e-4,
                seed: 0,
            },
            min_boundary_distance: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSample {
    pub point: ExponentPoint,
    pub estimate: NormEstimate,
    pub classification: Classification,
    pub theory_member: bool,
}

impl ScanSample {
    pub fn agrees(&self) -> bool {
        matches!(
            (self.classification, self.theory_member),
            (Classification::Bounded, true) | (Classification::Unbounded, false)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub region: RegionSpec,
    pub samples: Vec<ScanSample>,
}

/// One CSV row per (sample point, resolution).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub inv_p: String,
    pub inv_q: String,
    pub h: f64,
    pub estimate: f64,
    pub iterations: usize,
    pub slope: f64,
    pub classification: Classification,
    pub theory_member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub region: RegionSpec,
    pub agreement: usize,
    pub total: usize,
    pub agreement_rate: f64,
    pub inconclusive: usize,
}

impl ScanResult {
    pub fn agreement(&self) -> usize {
        self.samples.iter().filter(|s| s.agrees()).count()
    }

    pub fn rows(&self) -> Vec<ScanRow> {
        self.samples
            .iter()
            .flat_map(|s| {
                s.estimate.per_resolution.iter().map(move |r| ScanRow {
                    inv_p: crate::exponents::format_rational(s.point.inv_p()),
                    inv_q: crate::exponents::format_rational(s.point.inv_q()),
                    h: r.h,
                    estimate: r.estimate,
                    iterations: r.iterations,
                    slope: s.estimate.growth_slope,
                    classification: s.classification,
                    theory_member: s.theory_member,
                })
            })
            .collect()
    }

    pub fn summary(&self) -> ScanSummary {
        let total = self.samples.len();
        let agreement = self.agreement();
        ScanSummary {
            region: self.region.clone(),
            agreement,
            total,
            agreement_rate: agreement as f64 / total.max(1) as f64,
            inconclusive: self
                .samples
                .iter()
                .filter(|s| s.classification == Classification::Inconclusive)
                .count(),
        }
    }
}

/// Twelve sample points for n = 1, γ = 0: six inside the triangle, six below it.
pub fn reference_points() -> Vec<ExponentPoint> {
    [
        (60, 40),
        (55, 35),
        (65, 42),
        (62, 36),
        (68, 48),
        (58, 38),
        (95, 5),
        (90, 10),
        (85, 5),
        (80, 5),
        (70, 5),
        (60, 5),
    ]
    .into_iter()
    .map(|(a, b)| ExponentPoint::from_ratios((a, 100), (b, 100)).expect("inside the unit square"))
    .collect()
}

/// The ν_γ convolution operators of a scan, coarsest first.
pub fn scan_operators(
    r: &RegionSpec,
    settings: &ScanSettings,
) -> Result<Vec<(f64, MeasureOperator)>> {
    let gamma = r.fractional_order()?;
    settings
        .resolutions
        .iter()
        .map(|&h| {
            let grid =
                GridSpec::with_spacing(r.n, settings.spatial_halfwidth, settings.t_halfwidth, h)?;
            let nu = discretize_nu(&settings.a, gamma, &grid, &CutoffSpec)?;
            Ok((h, MeasureOperator::new(grid, &nu)?))
        })
        .collect()
}

/// Classifies every sample point and compares against the necessary region.
pub fn scan_typeset(
    r: &RegionSpec,
    points: &[ExponentPoint],
    settings: &ScanSettings,
) -> Result<ScanResult> {
    for pt in points {
        let (a, b) = pt.to_f64();
        if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
            return Err(Error::invalid(
                "points",
                format!("{pt} is not strictly inside the unit square"),
            ));
        }
        let d = distance_to_boundary(r, (a, b));
        if d < settings.min_boundary_distance {
            return Err(Error::invalid(
                "points",
                format!(
                    "{pt} is {d:.3} from the region boundary, below {}",
                    settings.min_boundary_distance
                ),
            ));
        }
    }
    let family = scan_operators(r, settings)?;
    let samples = points
        .par_iter()
        .enumerate()
        .map(|(i, pt)| {
            let (a, b) = pt.to_f64();
            let est = EstimatorSettings {
                seed: settings.estimator.seed.wrapping_add(1000 * i as u64),
                ..settings.estimator
            };
            let (estimate, classification) = refine_and_classify(&family, 1.0 / a, 1.0 / b, &est)?;
            Ok(ScanSample {
                point: pt.clone(),
                estimate,
                classification,
                theory_member: necessary_region(r, pt),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        region: r.clone(),
        samples,
    })
}
