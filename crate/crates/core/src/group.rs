//! Exact algebra of the Heisenberg group ℍⁿ = ℝ²ⁿ × ℝ.
//!
//! The group law is `(x,t)·(y,s) = (x+y, t+s+⟨x,y⟩)` with the symplectic form
//! `⟨x,y⟩ = xᵗJy`, where `J = [[0, Iₙ], [−Iₙ, 0]]`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Half the spatial dimension: the group is ℝ²ⁿ × ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct HeisenbergDim(usize);

impl HeisenbergDim {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        Ok(HeisenbergDim(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    /// Dimension 2n of the spatial factor ℝ²ⁿ.
    #[inline]
    pub fn spatial(self) -> usize {
        2 * self.0
    }

    /// Homogeneous dimension 2n+2 of the group under the dilations.
    #[inline]
    pub fn homogeneous(self) -> usize {
        2 * self.0 + 2
    }
}

impl TryFrom<usize> for HeisenbergDim {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        HeisenbergDim::new(n)
    }
}

impl From<HeisenbergDim> for usize {
    fn from(d: HeisenbergDim) -> usize {
        d.0
    }
}

/// Dense row-major real matrix. Serializes as nested row arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn scale(&self, k: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(-1.0))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .data
            .chunks(self.cols.max(1))
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return Ok(0.0);
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == 0.0 {
                    continue;
                }
                for c in col..n {
                    a[r * n + c] -= factor * a[col * n + c];
                }
            }
        }
        Ok(det)
    }

    /// Largest absolute eigenvalue of a symmetric matrix (cyclic Jacobi sweeps).
    pub fn symmetric_spectral_radius(&self) -> f64 {
        let n = self.rows;
        let mut a = self.data.clone();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max)
    }

    /// Returns the first off-diagonal nonzero entry, if any.
    pub fn first_off_diagonal(&self) -> Option<(usize, usize, f64)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| r != c && self[(r, c)] != 0.0)
            .map(|(r, c)| (r, c, self[(r, c)]))
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// The coefficient matrix A of the quadratic form φ(y) = yᵗAy, kept symmetric.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SymmetricCoefficientMatrix(Matrix);

impl SymmetricCoefficientMatrix {
    /// Symmetrizes `m` as (m + mᵗ)/2. `m` must be square of even size.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                got: m.cols(),
            });
        }
        if m.rows() == 0 || m.rows() % 2 != 0 {
            return Err(Error::invalid(
                "A",
                format!("size must be a positive even number, got {}", m.rows()),
            ));
        }
        let sym = m.add(&m.transpose())?.scale(0.5);
        Ok(SymmetricCoefficientMatrix(sym))
    }

    pub fn identity(n: HeisenbergDim) -> Self {
        SymmetricCoefficientMatrix(Matrix::identity(n.spatial()))
    }

    pub fn zeros(n: HeisenbergDim) -> Self {
        SymmetricCoefficientMatrix(Matrix::zeros(n.spatial(), n.spatial()))
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        SymmetricCoefficientMatrix::new(Matrix::from_diagonal(diag))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SymmetricCoefficientMatrix::new(Matrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> HeisenbergDim {
        HeisenbergDim(self.0.rows() / 2)
    }

    /// Operator norm ‖A‖ (largest |eigenvalue|).
    pub fn op_norm(&self) -> f64 {
        self.0.symmetric_spectral_radius()
    }
}

impl<'de> Deserialize<'de> for SymmetricCoefficientMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = Matrix::deserialize(d)?;
        SymmetricCoefficientMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// A point (x, t) of ℍⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub x: Vec<f64>,
    pub t: f64,
}

impl GroupElement {
    pub fn new(x: Vec<f64>, t: f64) -> Result<Self> {
        if x.is_empty() || x.len() % 2 != 0 {
            return Err(Error::invalid(
                "x",
                format!("length must be a positive even number, got {}", x.len()),
            ));
        }
        Ok(GroupElement { x, t })
    }

    pub fn identity(n: HeisenbergDim) -> Self {
        GroupElement {
            x: vec![0.0; n.spatial()],
            t: 0.0,
        }
    }

    pub fn dim(&self) -> HeisenbergDim {
        HeisenbergDim(self.x.len() / 2)
    }
}

/// Positive dilation factor δ acting by (x,t) ↦ (δx, δ²t).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct DilationFactor(f64);

impl DilationFactor {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::invalid(
                "delta",
                format!("must be positive, got {delta}"),
            ));
        }
        Ok(DilationFactor(delta))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// The standard skew-symmetric matrix J = [[0, Iₙ], [−Iₙ, 0]].
pub fn make_j(n: HeisenbergDim) -> Matrix {
    let n = n.n();
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// ⟨x, y⟩ = xᵗJy.
pub fn symplectic(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() % 2 != 0 {
        return Err(Error::invalid("x", "length must be even"));
    }
    Ok(symplectic_unchecked(x, y))
}

/// xᵗJy without length checks; `x` and `y` must have the same even length.
#[inline]
pub(crate) fn symplectic_unchecked(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() / 2;
    let mut acc = 0.0;
    for i in 0..n {
        acc += x[i] * y[n + i] - x[n + i] * y[i];
    }
    acc
}

pub fn group_mul(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    let form = symplectic(&a.x, &b.x)?;
    Ok(GroupElement {
        x: a.x.iter().zip(&b.x).map(|(u, v)| u + v).collect(),
        t: a.t + b.t + form,
    })
}

pub fn group_inv(g: &GroupElement) -> GroupElement {
    GroupElement {
        x: g.x.iter().map(|v| -v).collect(),
        t: -g.t,
    }
}

pub fn dilate(delta: DilationFactor, g: &GroupElement) -> GroupElement {
    let d = delta.value();
    GroupElement {
        x: g.x.iter().map(|v| d * v).collect(),
        t: d * d * g.t,
    }
}

/// φ(y) = yᵗAy.
pub fn phi(a: &SymmetricCoefficientMatrix, y: &[f64]) -> Result<f64> {
    let m = a.matrix();
    if y.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: y.len(),
        });
    }
    Ok(phi_unchecked(m, y))
}

#[inline]
pub(crate) fn phi_unchecked(m: &Matrix, y: &[f64]) -> f64 {
    let d = y.len();
    let mut acc = 0.0;
    for r in 0..d {
        if y[r] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for c in 0..d {
            row += m[(r, c)] * y[c];
        }
        acc += y[r] * row;
    }
    acc
}

/// det(2A ± J).
pub fn det_perturbed(a: &SymmetricCoefficientMatrix, sign: Sign) -> f64 {
    let j = make_j(a.dim()).scale(sign.factor());
    a.matrix()
        .scale(2.0)
        .add(&j)
        .and_then(|m| m.determinant())
        .expect("2A and J share a square shape")
}

/// ∏ᵢ (aᵢᵢ·a₍ₙ₊ᵢ₎₍ₙ₊ᵢ₎ + 1), which equals det(A ± J) for diagonal A.
pub fn diagonal_det_product(a: &Matrix) -> Result<f64> {
    if !a.is_square() || a.rows() % 2 != 0 || a.rows() == 0 {
        return Err(Error::invalid("A", "must be square of positive even size"));
    }
    if let Some((row, col, value)) = a.first_off_diagonal() {
        return Err(Error::NotDiagonal { row, col, value });
    }
    let n = a.rows() / 2;
    Ok((0..n)
        .map(|i| a[(i, i)] * a[(n + i, n + i)] + 1.0)
        .product())
}

/// Default tolerance for degeneracy tests of det(2A ± J).
pub const DEGENERACY_TOL: f64 = 1e-9;

pub fn is_nondegenerate(a: &SymmetricCoefficientMatrix, tol: f64) -> bool {
    det_perturbed(a, Sign::Plus).abs() > tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> HeisenbergDim {
        HeisenbergDim::new(n).unwrap()
    }

    #[test]
    fn j_for_n1_and_n2() {
        assert_eq!(
            make_j(dim(1)).to_rows(),
            vec![vec![0.0, 1.0], vec![-1.0, 0.0]]
        );
        let j = make_j(dim(2));
        for r in 0..4 {
            for c in 0..4 {
                let expect = match (r, c) {
                    (0, 2) | (1, 3) => 1.0,
                    (2, 0) | (3, 1) => -1.0,
                    _ => 0.0,
                };
                assert_eq!(j[(r, c)], expect);
            }
        }
    }

    #[test]
    fn j_squares_to_minus_identity_and_is_skew() {
        for n in 1..=6 {
            let j = make_j(dim(n));
            let jj = j.matmul(&j).unwrap();
            assert_eq!(jj, Matrix::identity(2 * n).scale(-1.0));
            assert_eq!(j.transpose(), j.scale(-1.0));
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(HeisenbergDim::new(0).is_err());
    }

    #[test]
    fn symplectic_examples() {
        assert_eq!(symplectic(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(symplectic(&[3.0, -2.0], &[3.0, -2.0]).unwrap(), 0.0);
        assert!(symplectic(&[1.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn symplectic_matches_matrix_form() {
        let x = [0.3, -1.2, 2.0, 0.7];
        let y = [1.1, 0.4, -0.5, 2.2];
        let jy = make_j(dim(2)).matvec(&y).unwrap();
        let direct: f64 = x.iter().zip(&jy).map(|(a, b)| a * b).sum();
        assert!((symplectic(&x, &y).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn group_law_examples() {
        let a = GroupElement::new(vec![1.0, 0.0], 2.0).unwrap();
        let b = GroupElement::new(vec![0.0, 1.0], 3.0).unwrap();
        let ab = group_mul(&a, &b).unwrap();
        assert_eq!(ab, GroupElement::new(vec![1.0, 1.0], 6.0).unwrap());

        let e = GroupElement::identity(dim(1));
        assert_eq!(group_mul(&e, &b).unwrap(), b);
        assert_eq!(group_mul(&a, &group_inv(&a)).unwrap(), e);

        let g = GroupElement::new(vec![1.0, 2.0], 3.0).unwrap();
        assert_eq!(
            group_inv(&g),
            GroupElement::new(vec![-1.0, -2.0], -3.0).unwrap()
        );
        assert_eq!(group_inv(&group_inv(&g)), g);
        assert_eq!(group_inv(&e), e);
    }

    #[test]
    fn group_mul_dimension_mismatch() {
        let a = GroupElement::identity(dim(1));
        let b = GroupElement::identity(dim(2));
        assert!(matches!(
            group_mul(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dilation_examples() {
        let g = GroupElement::new(vec![1.0, 1.0], 1.0).unwrap();
        let two = DilationFactor::new(2.0).unwrap();
        assert_eq!(
            dilate(two, &g),
            GroupElement::new(vec![2.0, 2.0], 4.0).unwrap()
        );
        assert_eq!(dilate(DilationFactor::new(1.0).unwrap(), &g), g);
        assert!(DilationFactor::new(0.0).is_err());
        assert!(DilationFactor::new(-1.0).is_err());
    }

    #[test]
    fn phi_examples() {
        let i2 = SymmetricCoefficientMatrix::identity(dim(1));
        assert_eq!(phi(&i2, &[1.0, 2.0]).unwrap(), 5.0);
        let zero = SymmetricCoefficientMatrix::zeros(dim(1));
        assert_eq!(phi(&zero, &[1.0, 2.0]).unwrap(), 0.0);
        let a = SymmetricCoefficientMatrix::from_rows(&[vec![1.0, 3.0], vec![-1.0, 2.0]]).unwrap();
        assert_eq!(
            phi(&a, &[0.5, -1.5]).unwrap(),
            phi(&a, &[-0.5, 1.5]).unwrap()
        );
        assert!(phi(&a, &[1.0]).is_err());
    }

    #[test]
    fn symmetrization_preserves_quadratic_form() {
        let raw = Matrix::from_rows(&[vec![1.0, 4.0], vec![0.0, 2.0]]).unwrap();
        let a = SymmetricCoefficientMatrix::new(raw.clone()).unwrap();
        assert_eq!(a.matrix()[(0, 1)], 2.0);
        assert_eq!(a.matrix()[(1, 0)], 2.0);
        let y = [0.7, -1.3];
        let raw_form: f64 = y[0] * (raw[(0, 0)] * y[0] + raw[(0, 1)] * y[1])
            + y[1] * (raw[(1, 0)] * y[0] + raw[(1, 1)] * y[1]);
        assert!((phi(&a, &y).unwrap() - raw_form).abs() < 1e-14);
    }

    #[test]
    fn det_perturbed_examples() {
        let i2 = SymmetricCoefficientMatrix::identity(dim(1));
        assert!((det_perturbed(&i2, Sign::Plus) - 5.0).abs() < 1e-14);
        assert!((det_perturbed(&i2, Sign::Minus) - 5.0).abs() < 1e-14);
        let degenerate = SymmetricCoefficientMatrix::diagonal(&[0.5, -0.5]).unwrap();
        assert_eq!(det_perturbed(&degenerate, Sign::Plus), 0.0);
        let zero = SymmetricCoefficientMatrix::zeros(dim(3));
        assert!((det_perturbed(&zero, Sign::Plus) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nondegeneracy() {
        let tol = DEGENERACY_TOL;
        assert!(is_nondegenerate(
            &SymmetricCoefficientMatrix::identity(dim(1)),
            tol
        ));
        assert!(!is_nondegenerate(
            &SymmetricCoefficientMatrix::diagonal(&[0.5, -0.5]).unwrap(),
            tol
        ));
        assert!(is_nondegenerate(
            &SymmetricCoefficientMatrix::zeros(dim(1)),
            tol
        ));
    }

    #[test]
    fn diagonal_det_product_examples() {
        let a = Matrix::from_diagonal(&[2.0, 3.0]);
        assert_eq!(diagonal_det_product(&a).unwrap(), 7.0);
        let j = make_j(dim(1));
        assert!((a.add(&j).unwrap().determinant().unwrap() - 7.0).abs() < 1e-14);
        assert_eq!(diagonal_det_product(&Matrix::zeros(4, 4)).unwrap(), 1.0);
        let off = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        assert!(matches!(
            diagonal_det_product(&off),
            Err(Error::NotDiagonal { .. })
        ));
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = Matrix::from_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 3.0],
        ])
        .unwrap();
        // Cofactor expansion along the second row: -1 * (2*3 - 1*1) = -5.
        assert!((m.determinant().unwrap() + 5.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_radius_of_symmetric() {
        let a = SymmetricCoefficientMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((a.op_norm() - 3.0).abs() < 1e-12);
        let b = SymmetricCoefficientMatrix::diagonal(&[0.5, -4.0]).unwrap();
        assert!((b.op_norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_json_roundtrip() {
        let a = SymmetricCoefficientMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, -1.0]]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[[1.0,2.0],[2.0,-1.0]]");
        let back: SymmetricCoefficientMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        let ragged: std::result::Result<Matrix, _> = serde_json::from_str("[[1.0],[2.0,3.0]]");
        assert!(ragged.is_err());
    }
}
