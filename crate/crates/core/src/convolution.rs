//! Group convolution with discrete measures, λ-twisted convolution, partial
//! Fourier transforms, Lᵖ norms and the twisted Plancherel identities.
//!
//! Off-grid evaluation is multilinear interpolation with zero extension
//! outside the box. Fourier transforms use `f̂(ξ) = ∫ f(x) e^{−iξ·x} dx`.

use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec, SliceFunction, SpatialGrid};
use crate::group::{
    det_perturbed, is_nondegenerate, phi_unchecked, symplectic_unchecked, DilationFactor, Sign,
    SymmetricCoefficientMatrix, DEGENERACY_TOL,
};
use crate::measure::DiscreteMeasure;
use crate::numeric::{pairwise_sum, pairwise_sum_complex};

/// Sample types the convolution kernels operate on.
pub trait Sample:
    Copy + Send + Sync + Default + Add<Output = Self> + AddAssign + Mul<f64, Output = Self>
{
}

impl Sample for f64 {}
impl Sample for Complex64 {}

/// Snap tolerance (in units of the grid spacing) for treating a coordinate as a node.
const SNAP: f64 = 1e-9;

/// Integer offset and fractional part of `u / h`, with near-integers snapped.
#[inline]
fn split_offset(u: f64, h: f64) -> (i64, f64) {
    let r = u / h;
    let k = r.round();
    if (r - k).abs() < SNAP {
        (k as i64, 0.0)
    } else {
        let f = r.floor();
        (f as i64, r - f)
    }
}

#[derive(Debug, Clone)]
struct Corner {
    /// Per-axis shift subtracted from the output index.
    shift: Vec<i64>,
    weight: f64,
}

#[derive(Debug, Clone)]
struct PlannedAtom {
    y: Vec<f64>,
    s: f64,
    w: f64,
    corners: Vec<Corner>,
}

/// Right convolution `f ↦ f ∗ m` on a fixed grid, precomputed for repeated use.
///
/// `(f ∗ m)(x,t) = Σ w·f̃(x − y, t − s − xᵗJy)` over the atoms `(y, s, w)`.
#[derive(Debug, Clone)]
pub struct MeasureConvolution {
    grid: GridSpec,
    atoms: Vec<PlannedAtom>,
}

impl MeasureConvolution {
    pub fn new(grid: GridSpec, m: &DiscreteMeasure) -> Result<Self> {
        if m.dim() != grid.n {
            return Err(Error::DimensionMismatch {
                expected: grid.n.spatial(),
                got: m.dim().spatial(),
            });
        }
        let h = grid.h_x();
        let atoms = m
            .atoms()
            .iter()
            .filter(|a| a.w != 0.0)
            .map(|a| {
                // x − y sits between nodes i − o and i − o − 1 on each axis.
                let splits: Vec<(i64, f64)> = a.y.iter().map(|&v| split_offset(v, h)).collect();
                let mut corners = vec![Corner {
                    shift: Vec::with_capacity(splits.len()),
                    weight: 1.0,
                }];
                for &(o, frac) in &splits {
                    let mut next = Vec::with_capacity(corners.len() * 2);
                    for c in &corners {
                        let mut lo = c.clone();
                        lo.shift.push(o);
                        lo.weight *= 1.0 - frac;
                        next.push(lo);
                        if frac != 0.0 {
                            let mut hi = c.clone();
                            hi.shift.push(o + 1);
                            hi.weight *= frac;
                            next.push(hi);
                        }
                    }
                    corners = next;
                }
                PlannedAtom {
                    y: a.y.clone(),
                    s: a.s,
                    w: a.w,
                    corners,
                }
            })
            .collect();
        Ok(MeasureConvolution { grid, atoms })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Applies the convolution to a flat sample array in grid layout.
    pub fn apply<S: Sample>(&self, input: &[S]) -> Vec<S> {
        let grid = self.grid;
        let sg = grid.spatial();
        let m = grid.t_points;
        let ht = grid.h_t();
        let axes = sg.axes();
        let np = sg.points as i64;
        assert_eq!(input.len(), grid.len());
        let mut out = vec![S::default(); grid.len()];
        out.par_chunks_mut(m).enumerate().for_each(|(flat, row)| {
            let mut idx = vec![0usize; axes];
            sg.unflatten(flat, &mut idx);
            let x: Vec<f64> = idx.iter().map(|&i| sg.coord(i)).collect();
            let mut src_idx = vec![0usize; axes];
            for atom in &self.atoms {
                let c = atom.s + symplectic_unchecked(&x, &atom.y);
                // f̃(t_j − c) sits between source indices j + kf and j + kf + 1.
                let (kf, alpha) = split_offset(-c, ht);
                if kf >= m as i64 || kf < -(m as i64) - 1 {
                    continue;
                }
                'corner: for corner in &atom.corners {
                    for a in 0..axes {
                        let s = idx[a] as i64 - corner.shift[a];
                        if s < 0 || s >= np {
                            continue 'corner;
                        }
                        src_idx[a] = s as usize;
                    }
                    let src = &input[sg.flatten(&src_idx) * m..][..m];
                    let wt = atom.w * corner.weight;
                    shift_accumulate(row, src, kf, alpha, wt);
                }
            }
        });
        out
    }
}

/// row[j] += wt·((1−α)·src[j+k] + α·src[j+k+1]) with zero extension.
#[inline]
fn shift_accumulate<S: Sample>(row: &mut [S], src: &[S], k: i64, alpha: f64, wt: f64) {
    let m = row.len() as i64;
    let w0 = wt * (1.0 - alpha);
    // First tap: j + k ∈ [0, m).
    let lo = (-k).max(0);
    let hi = (m - k).min(m);
    if lo < hi {
        let (lo, hi) = (lo as usize, hi as usize);
        let off = (lo as i64 + k) as usize;
        for (r, &v) in row[lo..hi].iter_mut().zip(&src[off..]) {
            *r += v * w0;
        }
    }
    if alpha != 0.0 {
        let w1 = wt * alpha;
        let lo = (-k - 1).max(0);
        let hi = (m - k - 1).min(m);
        if lo < hi {
            let (lo, hi) = (lo as usize, hi as usize);
            let off = (lo as i64 + k + 1) as usize;
            for (r, &v) in row[lo..hi].iter_mut().zip(&src[off..]) {
                *r += v * w1;
            }
        }
    }
}

/// `f ∗ m` on the grid of `f`.
pub fn convolve_measure(f: &GridFunction, m: &DiscreteMeasure) -> Result<GridFunction> {
    let plan = MeasureConvolution::new(*f.grid(), m)?;
    let values = plan.apply(f.values());
    GridFunction::new(*f.grid(), values)
}

/// Per-axis (index, fraction) for multilinear interpolation at `u`, or None when
/// every corner falls outside `0..points`.
#[inline]
fn locate(u: f64, lower: f64, h: f64, points: usize) -> Option<(i64, f64)> {
    let (k, frac) = split_offset(u - lower, h);
    if k < -1 || k >= points as i64 || (k == -1 && frac == 0.0) {
        return None;
    }
    Some((k, frac))
}

/// Multilinear interpolation over `dims.len()` axes of a row-major array.
fn interpolate<S: Sample>(values: &[S], dims: &[usize], pos: &[(i64, f64)]) -> S {
    let axes = dims.len();
    let mut acc = S::default();
    let corners = 1usize << axes;
    'corner: for mask in 0..corners {
        let mut weight = 1.0;
        let mut flat = 0usize;
        for a in 0..axes {
            let (k, frac) = pos[a];
            let upper = (mask >> a) & 1 == 1;
            if upper && frac == 0.0 {
                continue 'corner;
            }
            let i = if upper { k + 1 } else { k };
            if i < 0 || i >= dims[a] as i64 {
                continue 'corner;
            }
            weight *= if upper { frac } else { 1.0 - frac };
            flat = flat * dims[a] + i as usize;
        }
        acc += values[flat] * weight;
    }
    acc
}

impl GridFunction {
    /// f̃(x, t): multilinear interpolation, zero outside the box.
    pub fn interpolate(&self, x: &[f64], t: f64) -> Complex64 {
        let g = self.grid();
        let mut pos = Vec::with_capacity(x.len() + 1);
        for &u in x {
            match locate(u, -g.spatial_halfwidth, g.h_x(), g.spatial_points) {
                Some(p) => pos.push(p),
                None => return Complex64::new(0.0, 0.0),
            }
        }
        match locate(t, -g.t_halfwidth, g.h_t(), g.t_points) {
            Some(p) => pos.push(p),
            None => return Complex64::new(0.0, 0.0),
        }
        interpolate(self.values(), &g.shape(), &pos)
    }
}

impl SliceFunction {
    /// f̃(x): multilinear interpolation, zero outside the box.
    pub fn interpolate(&self, x: &[f64]) -> Complex64 {
        let g = self.grid();
        let mut pos = Vec::with_capacity(x.len());
        for &u in x {
            match locate(u, -g.halfwidth, g.spacing(), g.points) {
                Some(p) => pos.push(p),
                None => return Complex64::new(0.0, 0.0),
            }
        }
        interpolate(self.values(), &vec![g.points; g.axes()], &pos)
    }
}

/// Samples e_{λA}(x) = e^{iλ·xᵗAx}.
pub fn oscillatory_factor(
    a: &SymmetricCoefficientMatrix,
    lambda: f64,
    grid: &SpatialGrid,
) -> Result<SliceFunction> {
    if a.dim() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n.spatial(),
            got: a.dim().spatial(),
        });
    }
    Ok(SliceFunction::from_fn(*grid, |x| {
        Complex64::from_polar(1.0, lambda * phi_unchecked(a.matrix(), x))
    }))
}

/// Nonzero spectral parameter λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParameter(f64);

impl SpectralParameter {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::invalid(
                "lambda",
                format!("must be finite and nonzero, got {lambda}"),
            ));
        }
        Ok(SpectralParameter(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `(f ×_λ g)(x) = h^{2n} Σ_y f̃(x−y) g(y) e^{−iλ xᵗJy}` by direct summation.
pub fn twisted_convolve(
    f: &SliceFunction,
    g: &SliceFunction,
    lambda: f64,
) -> Result<SliceFunction> {
    let grid = *f.grid();
    if !grid.same_as(g.grid()) {
        return Err(Error::invalid(
            "grid",
            "twisted convolution needs matching grids",
        ));
    }
    let d = grid.axes();
    let n = grid.n.n();
    let np = grid.points;
    let vol = grid.cell_volume();

    // e^{−iλ·u_i·v_k} for node coordinates u_i, v_k.
    let coords: Vec<f64> = (0..np).map(|i| grid.coord(i)).collect();
    let table: Vec<Complex64> = coords
        .iter()
        .flat_map(|&u| {
            coords
                .iter()
                .map(move |&v| Complex64::from_polar(1.0, -lambda * u * v))
        })
        .collect();
    // xᵗJy = Σ_b κ_b(x)·y_b with κ_b = x_{b−n} (b ≥ n) or −x_{b+n} (b < n).
    let factor = |x_idx: &[usize], b: usize, k: usize| -> Complex64 {
        if b >= n {
            table[x_idx[b - n] * np + k]
        } else {
            table[x_idx[b + n] * np + k].conj()
        }
    };

    // f reversed along the last axis so that f[x − y] is contiguous in y_last.
    let rows = grid.len() / np;
    let (mut fr_re, mut fr_im) = (vec![0.0; grid.len()], vec![0.0; grid.len()]);
    for r in 0..rows {
        for m in 0..np {
            let v = f.values()[r * np + (np - 1 - m)];
            fr_re[r * np + m] = v.re;
            fr_im[r * np + m] = v.im;
        }
    }

    let last = d - 1;
    // The last y-axis pairs with x-axis n − 1.
    let partner = n - 1;
    let outer = np.pow(last as u32); // number of y' (all but the last y axis)
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];

    for v in 0..np {
        // g(y)·e^{−iλ x_{n−1} y_last} for x_{n−1} = coords[v].
        let mut hg_re = vec![0.0; grid.len()];
        let mut hg_im = vec![0.0; grid.len()];
        for r in 0..rows {
            for k in 0..np {
                let val = g.values()[r * np + k] * table[v * np + k];
                hg_re[r * np + k] = val.re;
                hg_im[r * np + k] = val.im;
            }
        }
        let targets: Vec<usize> = (0..grid.len())
            .filter(|&flat| {
                let mut idx = vec![0; d];
                grid.unflatten(flat, &mut idx);
                idx[partner] == v
            })
            .collect();
        let values: Vec<(usize, Complex64)> = targets
            .par_iter()
            .map(|&flat| {
                let mut x_idx = vec![0usize; d];
                grid.unflatten(flat, &mut x_idx);
                let xl = x_idx[last];
                // x − y has node index i − k + N/2 on each axis.
                let half = np / 2;
                let k_lo = (xl + half + 1).saturating_sub(np);
                let k_hi = (xl + half + 1).min(np);
                let mut yp = vec![0usize; last];
                let mut src = vec![0usize; last];
                let mut acc = Complex64::new(0.0, 0.0);
                'outer: for yflat in 0..outer {
                    let mut rem = yflat;
                    for a in (0..last).rev() {
                        yp[a] = rem % np;
                        rem /= np;
                    }
                    let mut coef = Complex64::new(1.0, 0.0);
                    for a in 0..last {
                        let si = x_idx[a] + half;
                        if yp[a] > si || si - yp[a] >= np {
                            continue 'outer;
                        }
                        src[a] = si - yp[a];
                        coef *= factor(&x_idx, a, yp[a]);
                    }
                    let frow = src.iter().fold(0, |acc, &i| acc * np + i);
                    // f[src, xl + N/2 − k] = fr[src, np − 1 − xl − N/2 + k].
                    let base_f = frow * np + (np - 1 + k_lo) - (xl + half);
                    let len = k_hi - k_lo;
                    let base_h = yflat * np + k_lo;
                    let dot = complex_dot(
                        &fr_re[base_f..base_f + len],
                        &fr_im[base_f..base_f + len],
                        &hg_re[base_h..base_h + len],
                        &hg_im[base_h..base_h + len],
                    );
                    acc += coef * dot;
                }
                (flat, acc * vol)
            })
            .collect();
        for (flat, val) in values {
            out[flat] = val;
        }
    }
    SliceFunction::new(grid, out)
}

/// Σ (a_re + i a_im)(b_re + i b_im) with four independent accumulators.
#[inline]
fn complex_dot(a_re: &[f64], a_im: &[f64], b_re: &[f64], b_im: &[f64]) -> Complex64 {
    let len = a_re.len();
    let (mut rr, mut ii, mut ri, mut ir) = ([0.0f64; 4], [0.0f64; 4], [0.0f64; 4], [0.0f64; 4]);
    let chunks = len / 4;
    for c in 0..chunks {
        let o = c * 4;
        for l in 0..4 {
            rr[l] += a_re[o + l] * b_re[o + l];
            ii[l] += a_im[o + l] * b_im[o + l];
            ri[l] += a_re[o + l] * b_im[o + l];
            ir[l] += a_im[o + l] * b_re[o + l];
        }
    }
    let mut re = (rr[0] + rr[1]) + (rr[2] + rr[3]) - ((ii[0] + ii[1]) + (ii[2] + ii[3]));
    let mut im = (ri[0] + ri[1]) + (ri[2] + ri[3]) + ((ir[0] + ir[1]) + (ir[2] + ir[3]));
    for o in chunks * 4..len {
        re += a_re[o] * b_re[o] - a_im[o] * b_im[o];
        im += a_re[o] * b_im[o] + a_im[o] * b_re[o];
    }
    Complex64::new(re, im)
}

/// Twisted convolution evaluated at a single (possibly off-grid) point.
pub fn twisted_convolve_at(
    f: &SliceFunction,
    g: &SliceFunction,
    lambda: f64,
    x: &[f64],
) -> Result<Complex64> {
    let grid = *f.grid();
    if !grid.same_as(g.grid()) {
        return Err(Error::invalid(
            "grid",
            "twisted convolution needs matching grids",
        ));
    }
    if x.len() != grid.axes() {
        return Err(Error::DimensionMismatch {
            expected: grid.axes(),
            got: x.len(),
        });
    }
    let sum = pairwise_sum_complex(grid.len(), |flat| {
        let y = grid.point(flat);
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let fv = f.interpolate(&diff);
        if fv == Complex64::new(0.0, 0.0) {
            return fv;
        }
        fv * g.values()[flat] * Complex64::from_polar(1.0, -lambda * symplectic_unchecked(x, &y))
    });
    Ok(sum * grid.cell_volume())
}

/// `f^λ(x) = h_t Σ_j f(x, t_j) e^{−iλ t_j}`.
pub fn partial_fourier_t(f: &GridFunction, lambda: f64) -> SliceFunction {
    let grid = f.grid();
    let m = grid.t_points;
    let ht = grid.h_t();
    let phases: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(ht, -lambda * grid.t_coord(j)))
        .collect();
    let values: Vec<Complex64> = f
        .values()
        .par_chunks(m)
        .map(|row| pairwise_sum_complex(m, |j| row[j] * phases[j]))
        .collect();
    SliceFunction::new(grid.spatial(), values).expect("shape follows the grid")
}

/// `f̂(ξ) = h^{2n} Σ_x f(x) e^{−iξ·x}`.
pub fn fourier_spatial(f: &SliceFunction, xi: &[f64]) -> Result<Complex64> {
    let grid = f.grid();
    if xi.len() != grid.axes() {
        return Err(Error::DimensionMismatch {
            expected: grid.axes(),
            got: xi.len(),
        });
    }
    let sum = pairwise_sum_complex(grid.len(), |flat| {
        let x = grid.point(flat);
        let dot: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
        f.values()[flat] * Complex64::from_polar(1.0, -dot)
    });
    Ok(sum * grid.cell_volume())
}

/// Anything sampled on a grid with uniform cell volume.
pub trait Sampled {
    fn samples(&self) -> &[Complex64];
    fn cell_volume(&self) -> f64;
}

impl Sampled for GridFunction {
    fn samples(&self) -> &[Complex64] {
        self.values()
    }
    fn cell_volume(&self) -> f64 {
        self.grid().cell_volume()
    }
}

impl Sampled for SliceFunction {
    fn samples(&self) -> &[Complex64] {
        self.values()
    }
    fn cell_volume(&self) -> f64 {
        self.grid().cell_volume()
    }
}

/// ‖f‖_p = (Σ|f|ᵖ·vol)^{1/p}; max |f| for p = ∞.
pub fn lp_norm<F: Sampled + ?Sized>(f: &F, p: f64) -> Result<f64> {
    let mags: Vec<f64> = f.samples().iter().map(|v| v.norm()).collect();
    lp_norm_of(&mags, f.cell_volume(), p)
}

/// Weighted ℓᵖ norm of nonnegative magnitudes with a uniform cell volume.
pub fn lp_norm_of(mags: &[f64], cell_volume: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid("p", format!("must be at least 1, got {p}")));
    }
    let max = mags.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() {
        return Ok(max);
    }
    if max == 0.0 {
        return Ok(0.0);
    }
    // Scale by the max so large p cannot overflow.
    let s = pairwise_sum(mags.len(), |i| (mags[i] / max).powf(p));
    Ok(max * (s * cell_volume).powf(1.0 / p))
}

/// f_δ(x, t) = f(δx, δ²t).
pub fn dilate_function(f: &GridFunction, delta: DilationFactor) -> GridFunction {
    let grid = *f.grid();
    let d = delta.value();
    let sg = grid.spatial();
    let m = grid.t_points;
    let values: Vec<Complex64> = (0..sg.len())
        .into_par_iter()
        .flat_map_iter(|flat| {
            let x: Vec<f64> = sg.point(flat).iter().map(|v| d * v).collect();
            (0..m)
                .map(|j| f.interpolate(&x, d * d * grid.t_coord(j)))
                .collect::<Vec<_>>()
        })
        .collect();
    GridFunction::new(grid, values).expect("shape follows the grid")
}

/// Relative L² gap between (f ∗ m)_δ and δ^{2n}·(f_δ ∗ m) over the grid points
/// selected by `region`, which must keep (δx, δ²t) inside the box.
pub fn dilation_covariance_discrepancy<R: Fn(&[f64], f64) -> bool>(
    f: &GridFunction,
    m: &DiscreteMeasure,
    delta: DilationFactor,
    region: R,
) -> Result<f64> {
    let grid = *f.grid();
    let d = delta.value();
    let lhs = dilate_function(&convolve_measure(f, m)?, delta);
    let rhs = convolve_measure(&dilate_function(f, delta), m)?;
    let k = d.powi(grid.n.spatial() as i32);
    let sg = grid.spatial();
    let m_t = grid.t_points;
    let (mut num, mut den) = (Vec::new(), Vec::new());
    for flat in 0..sg.len() {
        let x = sg.point(flat);
        for j in 0..m_t {
            if region(&x, grid.t_coord(j)) {
                let l = lhs.at(flat, j);
                num.push((l - rhs.at(flat, j) * k).norm());
                den.push(l.norm());
            }
        }
    }
    let bottom = lp_norm_of(&den, 1.0, 2.0)?;
    if bottom == 0.0 {
        return Err(Error::VanishingNorm("(f ∗ m)_δ"));
    }
    Ok(lp_norm_of(&num, 1.0, 2.0)? / bottom)
}

/// Both sides of the twisted Plancherel identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistedIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// (2π)ⁿ|λ|^{−n}|det(2A+J)|^{−1/2}.
pub fn twisted_plancherel_constant(a: &SymmetricCoefficientMatrix, lambda: f64) -> Result<f64> {
    let det = det_perturbed(a, Sign::Plus);
    if det.abs() <= DEGENERACY_TOL {
        return Err(Error::Degenerate {
            det,
            tol: DEGENERACY_TOL,
        });
    }
    let n = a.dim().n() as i32;
    Ok((2.0 * std::f64::consts::PI).powi(n) * lambda.abs().powi(-n) * det.abs().powf(-0.5))
}

/// Compares ‖f ×_λ e_{λA}‖₂ with (2π)ⁿ|λ|^{−n}|det(2A+J)|^{−1/2}‖f‖₂.
pub fn twisted_identity_residual(
    f: &SliceFunction,
    a: &SymmetricCoefficientMatrix,
    lambda: f64,
) -> Result<TwistedIdentity> {
    let lambda = SpectralParameter::new(lambda)?.value();
    if !is_nondegenerate(a, DEGENERACY_TOL) {
        return Err(Error::Degenerate {
            det: det_perturbed(a, Sign::Plus),
            tol: DEGENERACY_TOL,
        });
    }
    let e = oscillatory_factor(a, lambda, f.grid())?;
    let conv = twisted_convolve(f, &e, lambda)?;
    let lhs = lp_norm(&conv, 2.0)?;
    let rhs = twisted_plancherel_constant(a, lambda)? * lp_norm(f, 2.0)?;
    Ok(TwistedIdentity {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs,
    })
}

/// Max relative gap between (f ×_λ e_{λA})(x) and e_{λA}(x)·ĝ(λ(2A+J)x), g = e_{λA}f.
pub fn pointwise_twisted_identity_residual(
    f: &SliceFunction,
    a: &SymmetricCoefficientMatrix,
    lambda: f64,
    sample_points: &[Vec<f64>],
) -> Result<f64> {
    let lambda = SpectralParameter::new(lambda)?.value();
    let e = oscillatory_factor(a, lambda, f.grid())?;
    let g = e.mul(f)?;
    let j = crate::group::make_j(a.dim());
    let m = a.matrix().scale(2.0).add(&j)?.scale(lambda);
    let mut worst = 0.0f64;
    for x in sample_points {
        let lhs = twisted_convolve_at(f, &e, lambda, x)?;
        let xi = m.matvec(x)?;
        let rhs = Complex64::from_polar(1.0, lambda * phi_unchecked(a.matrix(), x))
            * fourier_spatial(&g, &xi)?;
        let scale = lhs.norm().max(rhs.norm());
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}
