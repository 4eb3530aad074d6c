//! Discretized singular measures carried by the graph of φ(y) = yᵗAy.
//!
//! Every measure here is a list of weighted atoms `(y, φ(y), w)` placed at
//! spatial grid nodes, with midpoint weights `h^{2n}` times a density.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SpatialGrid};
use crate::group::{phi_unchecked, HeisenbergDim, SymmetricCoefficientMatrix};
use crate::numeric::pairwise_sum;

/// The smooth cut-off η: 1 on |y| ≤ 1, 0 on |y| ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CutoffSpec;

impl CutoffSpec {
    pub const INNER_RADIUS: f64 = 1.0;
    pub const OUTER_RADIUS: f64 = 2.0;

    /// Radial profile ψ(r).
    pub fn profile(&self, r: f64) -> f64 {
        let (a, b) = (Self::INNER_RADIUS, Self::OUTER_RADIUS);
        if r <= a {
            1.0
        } else if r >= b {
            0.0
        } else {
            let up = smooth_step_seed(b - r);
            up / (up + smooth_step_seed(r - a))
        }
    }
}

/// exp(−1/u) for u > 0, else 0.
fn smooth_step_seed(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// η(y) = ψ(|y|).
pub fn eta(spec: &CutoffSpec, y: &[f64]) -> f64 {
    spec.profile(euclidean_norm(y))
}

#[inline]
pub fn euclidean_norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Exponent γ of the radial weight |y|^{−γ}, with 0 ≤ γ < 2n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalOrder {
    gamma: f64,
}

impl FractionalOrder {
    pub fn new(gamma: f64, n: HeisenbergDim) -> Result<Self> {
        if !(gamma >= 0.0 && gamma < n.spatial() as f64) {
            return Err(Error::invalid(
                "gamma",
                format!("must lie in [0, {}), got {gamma}", n.spatial()),
            ));
        }
        Ok(FractionalOrder { gamma })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    MuA,
    NuGamma,
    NuGammaK {
        k: u32,
    },
    /// Hand-built atom lists (point masses, test fixtures).
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub y: Vec<f64>,
    pub s: f64,
    pub w: f64,
}

/// Weighted atoms approximating a measure on the graph of φ.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    n: HeisenbergDim,
    atoms: Vec<Atom>,
    kind: MeasureKind,
    reflected: bool,
}

impl DiscreteMeasure {
    /// Builds a measure from explicit atoms. Weights must be finite and nonnegative.
    pub fn from_atoms(n: HeisenbergDim, atoms: Vec<Atom>, kind: MeasureKind) -> Result<Self> {
        for a in &atoms {
            if a.y.len() != n.spatial() {
                return Err(Error::DimensionMismatch {
                    expected: n.spatial(),
                    got: a.y.len(),
                });
            }
            if !(a.w >= 0.0 && a.w.is_finite()) || !a.s.is_finite() {
                return Err(Error::invalid(
                    "atom",
                    format!("bad weight or height: w={}, s={}", a.w, a.s),
                ));
            }
        }
        Ok(DiscreteMeasure {
            n,
            atoms,
            kind,
            reflected: false,
        })
    }

    /// Unit point mass at the group identity.
    pub fn identity_atom(n: HeisenbergDim, weight: f64) -> Self {
        DiscreteMeasure {
            n,
            atoms: vec![Atom {
                y: vec![0.0; n.spatial()],
                s: 0.0,
                w: weight,
            }],
            kind: MeasureKind::Custom,
            reflected: false,
        }
    }

    #[inline]
    pub fn dim(&self) -> HeisenbergDim {
        self.n
    }

    #[inline]
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    #[inline]
    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    #[inline]
    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(self.atoms.len(), |i| self.atoms[i].w)
    }

    /// Same atoms with every weight multiplied by `k ≥ 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::invalid(
                "k",
                format!("scale must be nonnegative, got {k}"),
            ));
        }
        let mut out = self.clone();
        for a in &mut out.atoms {
            a.w *= k;
        }
        Ok(out)
    }

    /// Atoms whose |y| satisfies `keep`, preserving order.
    pub fn restrict<F: Fn(f64) -> bool>(&self, keep: F, kind: MeasureKind) -> Self {
        DiscreteMeasure {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .filter(|a| keep(euclidean_norm(&a.y)))
                .cloned()
                .collect(),
            kind,
            reflected: self.reflected,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&MeasureJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: MeasureJson = serde_json::from_str(s)?;
        let n = HeisenbergDim::new(raw.n)?;
        let d = n.spatial();
        let atoms = raw
            .atoms
            .into_iter()
            .map(|row| {
                if row.len() != d + 2 {
                    return Err(Error::DimensionMismatch {
                        expected: d + 2,
                        got: row.len(),
                    });
                }
                Ok(Atom {
                    y: row[..d].to_vec(),
                    s: row[d],
                    w: row[d + 1],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = DiscreteMeasure::from_atoms(n, atoms, raw.kind)?;
        m.reflected = raw.reflected;
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    n: usize,
    kind: MeasureKind,
    #[serde(default)]
    reflected: bool,
    atoms: Vec<Vec<f64>>,
}

impl From<&DiscreteMeasure> for MeasureJson {
    fn from(m: &DiscreteMeasure) -> Self {
        MeasureJson {
            n: m.n.n(),
            kind: m.kind,
            reflected: m.reflected,
            atoms: m
                .atoms
                .iter()
                .map(|a| {
                    let mut row = a.y.clone();
                    row.push(a.s);
                    row.push(a.w);
                    row
                })
                .collect(),
        }
    }
}

fn graph_atoms<W>(a: &SymmetricCoefficientMatrix, sg: SpatialGrid, weight: W) -> Vec<Atom>
where
    W: Fn(&[f64]) -> Option<f64> + Sync,
{
    (0..sg.len())
        .into_par_iter()
        .filter_map(|flat| {
            let y = sg.point(flat);
            let w = weight(&y)?;
            let s = phi_unchecked(a.matrix(), &y);
            Some(Atom { y, s, w })
        })
        .collect()
}

fn check_dims(a: &SymmetricCoefficientMatrix, grid: &GridSpec) -> Result<()> {
    if a.dim() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n.spatial(),
            got: a.dim().spatial(),
        });
    }
    Ok(())
}

/// μ_A truncated to |y| ≤ `support_radius`: weight h^{2n} at every node.
pub fn discretize_mu(
    a: &SymmetricCoefficientMatrix,
    grid: &GridSpec,
    support_radius: f64,
) -> Result<DiscreteMeasure> {
    check_dims(a, grid)?;
    if !(support_radius > 0.0) {
        return Err(Error::invalid("support_radius", "must be positive"));
    }
    if support_radius > grid.spatial_halfwidth {
        return Err(Error::SupportExceedsGrid {
            radius: support_radius,
            halfwidth: grid.spatial_halfwidth,
        });
    }
    let sg = grid.spatial();
    let vol = sg.cell_volume();
    let atoms = graph_atoms(a, sg, |y| {
        (euclidean_norm(y) <= support_radius).then_some(vol)
    });
    DiscreteMeasure::from_atoms(grid.n, atoms, MeasureKind::MuA)
}

/// ν_γ: weight η(y)|y|^{−γ}h^{2n}. The origin cell is dropped for γ > 0.
pub fn discretize_nu(
    a: &SymmetricCoefficientMatrix,
    gamma: FractionalOrder,
    grid: &GridSpec,
    spec: &CutoffSpec,
) -> Result<DiscreteMeasure> {
    check_dims(a, grid)?;
    if grid.spatial_halfwidth < CutoffSpec::OUTER_RADIUS {
        return Err(Error::SupportExceedsGrid {
            radius: CutoffSpec::OUTER_RADIUS,
            halfwidth: grid.spatial_halfwidth,
        });
    }
    let sg = grid.spatial();
    let vol = sg.cell_volume();
    let g = gamma.value();
    let atoms = graph_atoms(a, sg, |y| {
        let r = euclidean_norm(y);
        if r == 0.0 {
            return (g == 0.0).then_some(vol);
        }
        let e = spec.profile(r);
        (e > 0.0).then(|| e * r.powf(-g) * vol)
    });
    DiscreteMeasure::from_atoms(grid.n, atoms, MeasureKind::NuGamma)
}

/// The dyadic piece ν_{γ,k}: atoms of ν_γ with 2^{−k} < |y| ≤ 2^{−k+1}.
pub fn annulus_measure(
    a: &SymmetricCoefficientMatrix,
    gamma: FractionalOrder,
    k: u32,
    grid: &GridSpec,
    spec: &CutoffSpec,
) -> Result<DiscreteMeasure> {
    let nu = discretize_nu(a, gamma, grid, spec)?;
    annulus_of(&nu, k, grid.h_x())
}

/// Splits an already built ν_γ into its k-th dyadic annulus.
pub fn annulus_of(nu: &DiscreteMeasure, k: u32, h: f64) -> Result<DiscreteMeasure> {
    let (inner, outer) = annulus_bounds(k);
    if inner < 2.0 * h {
        return Err(Error::Unresolvable {
            k,
            inner,
            twice_h: 2.0 * h,
        });
    }
    Ok(nu.restrict(|r| inner < r && r <= outer, MeasureKind::NuGammaK { k }))
}

/// (2^{−k}, 2^{−k+1}).
pub fn annulus_bounds(k: u32) -> (f64, f64) {
    let inner = 0.5f64.powi(k as i32);
    (inner, 2.0 * inner)
}

/// Atoms of `nu` inside the ball |y| ≤ 2^{−k_max}, i.e. not covered by annuli 0..=k_max.
pub fn inner_remainder(nu: &DiscreteMeasure, k_max: u32) -> DiscreteMeasure {
    let radius = annulus_bounds(k_max).0;
    nu.restrict(|r| r <= radius, MeasureKind::Custom)
}

/// Density √(1 + |∇φ(y)|²) = √(1 + |2Ay|²) of surface measure against μ_A.
pub fn surface_density(a: &SymmetricCoefficientMatrix, y: &[f64]) -> Result<f64> {
    let grad = a.matrix().matvec(y)?;
    Ok((1.0 + 4.0 * grad.iter().map(|g| g * g).sum::<f64>()).sqrt())
}

/// Upper bound √(1 + (2ρ‖A‖)²) of the surface density on |y| ≤ ρ.
pub fn surface_density_bound(a: &SymmetricCoefficientMatrix, radius: f64) -> f64 {
    let k = 2.0 * radius * a.op_norm();
    (1.0 + k * k).sqrt()
}

/// Pushforward under group inversion: (y, s, w) ↦ (−y, −s, w).
pub fn reflect_measure(m: &DiscreteMeasure) -> DiscreteMeasure {
    DiscreteMeasure {
        n: m.n,
        atoms: m
            .atoms
            .iter()
            .map(|a| Atom {
                y: a.y.iter().map(|v| -v).collect(),
                s: -a.s,
                w: a.w,
            })
            .collect(),
        kind: m.kind,
        reflected: !m.reflected,
    }
}
