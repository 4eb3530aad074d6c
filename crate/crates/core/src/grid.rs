//! Regular box grids on ℍⁿ and the functions sampled on them.
//!
//! Nodes along a spatial axis sit at `−L + i·h` for `i ∈ 0..N` with `h = 2L/N`,
//! so the origin is always a node (N is even). The central axis uses the same
//! convention with its own half-width and point count. Values are stored
//! row-major over the 2n spatial axes with the t axis fastest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::HeisenbergDim;

/// Minimum number of points per axis.
pub const MIN_POINTS: usize = 8;

/// Grid over the spatial factor ℝ²ⁿ: the box `[−L, L)²ⁿ` with N nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub n: HeisenbergDim,
    pub halfwidth: f64,
    pub points: usize,
}

impl SpatialGrid {
    pub fn new(n: HeisenbergDim, halfwidth: f64, points: usize) -> Result<Self> {
        check_axis("spatial", halfwidth, points)?;
        Ok(SpatialGrid {
            n,
            halfwidth,
            points,
        })
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / self.points as f64
    }

    #[inline]
    pub fn axes(&self) -> usize {
        self.n.spatial()
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -self.halfwidth + i as f64 * self.spacing()
    }

    /// Number of spatial nodes, N^{2n}.
    pub fn len(&self) -> usize {
        self.points.pow(self.axes() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume h^{2n} of one spatial cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.axes() as i32)
    }

    /// Writes the per-axis indices of flat index `flat` into `out`.
    #[inline]
    pub fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for a in (0..out.len()).rev() {
            out[a] = flat % self.points;
            flat /= self.points;
        }
    }

    #[inline]
    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i)
    }

    /// Coordinates of the node with flat index `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.axes()];
        self.unflatten(flat, &mut idx);
        idx.iter().map(|&i| self.coord(i)).collect()
    }

    /// Index of the node at coordinate `u` along one axis, if `u` is a node.
    pub fn node_index(&self, u: f64) -> Option<usize> {
        let r = (u + self.halfwidth) / self.spacing();
        let k = r.round();
        if (r - k).abs() < 1e-9 && k >= 0.0 && (k as usize) < self.points {
            Some(k as usize)
        } else {
            None
        }
    }

    pub fn same_as(&self, other: &SpatialGrid) -> bool {
        self.n == other.n && self.points == other.points && self.halfwidth == other.halfwidth
    }
}

/// Grid over the box `[−L, L)²ⁿ × [−T, T)` of ℍⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: HeisenbergDim,
    pub spatial_halfwidth: f64,
    pub spatial_points: usize,
    pub t_halfwidth: f64,
    pub t_points: usize,
}

impl GridSpec {
    pub fn new(
        n: HeisenbergDim,
        spatial_halfwidth: f64,
        spatial_points: usize,
        t_halfwidth: f64,
        t_points: usize,
    ) -> Result<Self> {
        check_axis("spatial", spatial_halfwidth, spatial_points)?;
        check_axis("t", t_halfwidth, t_points)?;
        Ok(GridSpec {
            n,
            spatial_halfwidth,
            spatial_points,
            t_halfwidth,
            t_points,
        })
    }

    /// Grid with spacing `h` on both the spatial and central axes.
    pub fn with_spacing(
        n: HeisenbergDim,
        spatial_halfwidth: f64,
        t_halfwidth: f64,
        h: f64,
    ) -> Result<Self> {
        let sp = (2.0 * spatial_halfwidth / h).round() as usize;
        let tp = (2.0 * t_halfwidth / h).round() as usize;
        GridSpec::new(n, spatial_halfwidth, sp, t_halfwidth, tp)
    }

    pub fn spatial(&self) -> SpatialGrid {
        SpatialGrid {
            n: self.n,
            halfwidth: self.spatial_halfwidth,
            points: self.spatial_points,
        }
    }

    #[inline]
    pub fn h_x(&self) -> f64 {
        2.0 * self.spatial_halfwidth / self.spatial_points as f64
    }

    #[inline]
    pub fn h_t(&self) -> f64 {
        2.0 * self.t_halfwidth / self.t_points as f64
    }

    #[inline]
    pub fn t_coord(&self, j: usize) -> f64 {
        -self.t_halfwidth + j as f64 * self.h_t()
    }

    pub fn len(&self) -> usize {
        self.spatial().len() * self.t_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume h_x^{2n}·h_t of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spatial().cell_volume() * self.h_t()
    }

    /// Shape as `[N, …, N, M]`.
    pub fn shape(&self) -> Vec<usize> {
        let mut s = vec![self.spatial_points; self.n.spatial()];
        s.push(self.t_points);
        s
    }
}

fn check_axis(name: &'static str, halfwidth: f64, points: usize) -> Result<()> {
    if !(halfwidth > 0.0 && halfwidth.is_finite()) {
        return Err(Error::invalid(
            name,
            format!("half-width must be positive, got {halfwidth}"),
        ));
    }
    if points < MIN_POINTS || points % 2 != 0 {
        return Err(Error::invalid(
            name,
            format!("point count must be even and at least {MIN_POINTS}, got {points}"),
        ));
    }
    Ok(())
}

/// Complex function sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "all samples must be finite"));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        GridFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f(x, t)` at every node.
    pub fn from_fn<F: Fn(&[f64], f64) -> Complex64>(grid: GridSpec, f: F) -> Self {
        let sg = grid.spatial();
        let mut values = Vec::with_capacity(grid.len());
        for s in 0..sg.len() {
            let x = sg.point(s);
            for j in 0..grid.t_points {
                values.push(f(&x, grid.t_coord(j)));
            }
        }
        GridFunction { grid, values }
    }

    pub fn from_real(grid: GridSpec, values: &[f64]) -> Result<Self> {
        GridFunction::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn at(&self, spatial: usize, j: usize) -> Complex64 {
        self.values[spatial * self.grid.t_points + j]
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn scale(&self, k: Complex64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    /// Writes `<path>` (raw little-endian interleaved re/im) and `<path>.json`.
    pub fn write_raw(&self, path: &Path, precision: Precision) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for v in &self.values {
            match precision {
                Precision::Double => {
                    w.write_all(&v.re.to_le_bytes())?;
                    w.write_all(&v.im.to_le_bytes())?;
                }
                Precision::Single => {
                    w.write_all(&(v.re as f32).to_le_bytes())?;
                    w.write_all(&(v.im as f32).to_le_bytes())?;
                }
            }
        }
        w.flush()?;
        let sidecar = RawSidecar {
            n: self.grid.n.n(),
            shape: self.grid.shape(),
            spatial_halfwidth: self.grid.spatial_halfwidth,
            t_halfwidth: self.grid.t_halfwidth,
            precision,
            layout: LAYOUT.to_string(),
            data_file: path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        };
        let file = File::create(sidecar_path(path))?;
        serde_json::to_writer_pretty(file, &sidecar)?;
        Ok(())
    }

    /// Reads a function written by [`GridFunction::write_raw`], given the data path.
    pub fn read_raw(path: &Path) -> Result<GridFunction> {
        let sidecar: RawSidecar =
            serde_json::from_reader(BufReader::new(File::open(sidecar_path(path))?))?;
        let n = HeisenbergDim::new(sidecar.n)?;
        if sidecar.shape.len() != n.spatial() + 1 {
            return Err(Error::Format(format!(
                "shape has {} axes, expected {}",
                sidecar.shape.len(),
                n.spatial() + 1
            )));
        }
        let sp = sidecar.shape[0];
        if sidecar.shape[..n.spatial()].iter().any(|&s| s != sp) {
            return Err(Error::Format(
                "spatial axes must share one point count".into(),
            ));
        }
        let grid = GridSpec::new(
            n,
            sidecar.spatial_halfwidth,
            sp,
            sidecar.t_halfwidth,
            sidecar.shape[n.spatial()],
        )?;
        let mut bytes = Vec::new();
        BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
        let width = match sidecar.precision {
            Precision::Double => 16,
            Precision::Single => 8,
        };
        if bytes.len() != grid.len() * width {
            return Err(Error::Format(format!(
                "data file has {} bytes, expected {}",
                bytes.len(),
                grid.len() * width
            )));
        }
        let values = bytes
            .chunks_exact(width)
            .map(|c| match sidecar.precision {
                Precision::Double => Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                ),
                Precision::Single => Complex64::new(
                    f32::from_le_bytes(c[..4].try_into().unwrap()) as f64,
                    f32::from_le_bytes(c[4..].try_into().unwrap()) as f64,
                ),
            })
            .collect();
        GridFunction::new(grid, values)
    }
}

const LAYOUT: &str = "row-major; spatial axes first, t fastest";

/// Sample width of raw exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Precision {
    #[serde(rename = "complex64")]
    Single,
    #[serde(rename = "complex128")]
    #[default]
    Double,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSidecar {
    n: usize,
    shape: Vec<usize>,
    spatial_halfwidth: f64,
    t_halfwidth: f64,
    precision: Precision,
    layout: String,
    data_file: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Complex function on the spatial grid only, e.g. a partial Fourier transform f^λ.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceFunction {
    grid: SpatialGrid,
    values: Vec<Complex64>,
}

impl SliceFunction {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "all samples must be finite"));
        }
        Ok(SliceFunction { grid, values })
    }

    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(grid: SpatialGrid, f: F) -> Self {
        let values = (0..grid.len()).map(|s| f(&grid.point(s))).collect();
        SliceFunction { grid, values }
    }

    /// Unit mass at the origin node: value 1/h^{2n} there, zero elsewhere.
    pub fn discrete_delta(grid: SpatialGrid) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        let centre = vec![grid.points / 2; grid.axes()];
        values[grid.flatten(&centre)] = Complex64::new(1.0 / grid.cell_volume(), 0.0);
        SliceFunction { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> SliceFunction {
        SliceFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise product with another slice on the same grid.
    pub fn mul(&self, other: &SliceFunction) -> Result<SliceFunction> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::invalid("grid", "slices live on different grids"));
        }
        Ok(SliceFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}
