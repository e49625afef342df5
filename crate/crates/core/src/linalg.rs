//! Dense Hermitian matrices on a bipartite space.
//!
//! A matrix on `C^d1 ⊗ C^d2` is stored row-major with the basis vector
//! `e_i ⊗ e_k` at flat position `i * d2 + k` (zero-based). With this layout
//! each `d2 × d2` tile is one block `A_{i,j}` and partial transposition is a
//! transpose of every tile.

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Scalar field of a matrix ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    #[default]
    Complex,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// Factor dimensions `(d1, d2)` of `C^d1 ⊗ C^d2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteShape {
    d1: usize,
    d2: usize,
}

impl BipartiteShape {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::Parameter(format!(
                "factor dimensions must be positive, got ({d1}, {d2})"
            )));
        }
        Ok(Self { d1, d2 })
    }

    /// The balanced shape `(d, d)`.
    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Total dimension `d1 * d2`.
    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn is_square(&self) -> bool {
        self.d1 == self.d2
    }

    /// Flat index of `e_i ⊗ e_k` (zero-based).
    #[inline]
    pub fn flatten(&self, i: usize, k: usize) -> usize {
        debug_assert!(i < self.d1 && k < self.d2);
        i * self.d2 + k
    }

    /// Inverse of [`flatten`](Self::flatten).
    #[inline]
    pub fn split(&self, r: usize) -> (usize, usize) {
        (r / self.d2, r % self.d2)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::Shape(format!(
                "matrix of size {n} does not match shape ({}, {}) of dimension {}",
                self.d1,
                self.d2,
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Dense self-adjoint matrix.
///
/// Self-adjointness is exact: every constructor either mirrors the lower
/// triangle or rejects input that is not bitwise Hermitian. When the field
/// tag is [`Field::Real`] every imaginary part is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    field: Field,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds a matrix from its lower triangle; `f(r, c)` is only called for `r >= c`.
    /// Diagonal entries keep their real part only, and the real tag drops
    /// imaginary parts everywhere.
    pub fn from_lower_fn(
        n: usize,
        field: Field,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..=r {
                let mut z = f(r, c);
                if r == c || field == Field::Real {
                    z.im = 0.0;
                }
                data[r * n + c] = z;
                data[c * n + r] = z.conj();
            }
        }
        Self { n, field, data }
    }

    /// Wraps a row-major buffer, checking exact self-adjointness.
    pub fn from_entries(n: usize, field: Field, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        for r in 0..n {
            for c in 0..=r {
                if data[r * n + c] != data[c * n + r].conj() {
                    return Err(Error::Parameter(format!(
                        "entry ({r}, {c}) is not the conjugate of entry ({c}, {r})"
                    )));
                }
            }
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::Parameter(
                "real-tagged matrix has a nonzero imaginary part".into(),
            ));
        }
        Ok(Self { n, field, data })
    }

    /// Real symmetric matrix from a row-major buffer.
    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::from_entries(
            n,
            Field::Real,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_lower_fn(n, Field::Real, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_lower_fn(diag.len(), Field::Real, |r, c| {
            Complex64::new(if r == c { diag[r] } else { 0.0 }, 0.0)
        })
    }

    /// The rank-one projector `|v⟩⟨v|` (not normalised).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_lower_fn(v.len(), Field::Complex, |r, c| v[r] * v[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    /// Entry `A_{i,j}^{k,l}`: block row `i`, block column `j`, row `k` and
    /// column `l` inside the block (zero-based).
    pub fn block_entry(
        &self,
        shape: &BipartiteShape,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    ) -> Complex64 {
        self.get(shape.flatten(i, k), shape.flatten(j, l))
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            field: self.field,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self + shift * Id`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i].re += shift;
        }
        out
    }

    /// `self - other`; the result is real-tagged only if both inputs are.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "cannot subtract {}x{} from {}x{}",
                other.n, other.n, self.n, self.n
            )));
        }
        let field = if self.field == Field::Real && other.field == Field::Real {
            Field::Real
        } else {
            Field::Complex
        };
        Ok(Self {
            n: self.n,
            field,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Same entries with the complex tag, forcing the complex eigensolver path.
    pub fn as_complex(&self) -> Self {
        Self {
            field: Field::Complex,
            ..self.clone()
        }
    }

    pub(crate) fn to_faer_complex(&self) -> Mat<Complex64> {
        let n = self.n;
        Mat::from_fn(n, n, |r, c| self.data[r * n + c])
    }

    pub(crate) fn to_faer_real(&self) -> Mat<f64> {
        let n = self.n;
        Mat::from_fn(n, n, |r, c| self.data[r * n + c].re)
    }
}

/// Partial transposition `(A^Γ)_{i,j}^{k,l} = A_{i,j}^{l,k}`: every `d2 × d2`
/// block is transposed in place.
pub fn partial_transpose(a: &HermitianMatrix, shape: &BipartiteShape) -> Result<HermitianMatrix> {
    shape.check(a.n)?;
    let n = a.n;
    let d2 = shape.d2;
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..shape.d1 {
        for j in 0..shape.d1 {
            for k in 0..d2 {
                let row = (i * d2 + k) * n + j * d2;
                for l in 0..d2 {
                    data[row + l] = a.data[(i * d2 + l) * n + j * d2 + k];
                }
            }
        }
    }
    Ok(HermitianMatrix {
        n,
        field: a.field,
        data,
    })
}

/// Partial trace over the factor that is not kept.
///
/// Keeping the first factor gives `M_{i,j} = Σ_k A_{i,j}^{k,k}`, keeping the
/// second gives `M_{k,l} = Σ_i A_{i,i}^{k,l}`.
pub fn partial_trace(
    a: &HermitianMatrix,
    shape: &BipartiteShape,
    keep: Factor,
) -> Result<HermitianMatrix> {
    shape.check(a.n)?;
    let out = match keep {
        Factor::First => HermitianMatrix::from_lower_fn(shape.d1, a.field, |i, j| {
            (0..shape.d2)
                .map(|k| a.block_entry(shape, i, j, k, k))
                .sum()
        }),
        Factor::Second => HermitianMatrix::from_lower_fn(shape.d2, a.field, |k, l| {
            (0..shape.d1)
                .map(|i| a.block_entry(shape, i, i, k, l))
                .sum()
        }),
    };
    Ok(out)
}

/// Zeroes the diagonal, keeping the off-diagonal entries.
pub fn remove_diagonal(a: &HermitianMatrix) -> HermitianMatrix {
    let mut out = a.clone();
    for i in 0..a.n {
        out.data[i * a.n + i] = Complex64::new(0.0, 0.0);
    }
    out
}

fn check_finite(a: &HermitianMatrix) -> Result<()> {
    if a.data
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// All eigenvalues with multiplicity, ascending.
///
/// Real-tagged matrices go through the real symmetric solver.
pub fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    check_finite(a)?;
    if a.n == 0 {
        return Ok(Vec::new());
    }
    let mut eig = match a.field {
        Field::Real => a.to_faer_real().self_adjoint_eigenvalues(Side::Lower),
        Field::Complex => a.to_faer_complex().self_adjoint_eigenvalues(Side::Lower),
    }
    .map_err(|e| Error::Numeric(format!("eigensolver failed: {e:?}")))?;
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Squared singular values of the `d1 × d2` coefficient matrix of `psi`,
/// in non-increasing order. For a unit vector they sum to one.
pub fn schmidt_coefficients(psi: &[Complex64], shape: &BipartiteShape) -> Result<Vec<f64>> {
    shape.check(psi.len())?;
    if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("state vector has non-finite entries".into()));
    }
    let coeffs = Mat::from_fn(shape.d1, shape.d2, |i, k| psi[shape.flatten(i, k)]);
    let sv = coeffs
        .singular_values()
        .map_err(|e| Error::Numeric(format!("svd failed: {e:?}")))?;
    Ok(sv.into_iter().map(|s| s * s).collect())
}
