//! Dense complex linear algebra on a d-dimensional Hilbert space.
//!
//! Operators are small (d rarely above 16), so every matrix function is
//! evaluated through the spectral decomposition: decompose, map the
//! eigenvalues, recompose.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Entrywise tolerance for `A == A†`.
pub const HERM_TOL: f64 = 1e-10;
/// Tolerance on `| ‖ψ‖² − 1 |`.
pub const NORM_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;
/// Reconstruction tolerance for decompositions and matrix functions.
pub const RECON_TOL: f64 = 1e-9;
/// Eigenvalues at or below this are treated as kernel.
pub const KERNEL_TOL: f64 = 1e-12;

/// Eigenvalues closer than this are ordered by their eigenvectors.
const TIE_TOL: f64 = 1e-12;
/// Amplitudes below this magnitude are skipped when fixing the phase.
const PHASE_TOL: f64 = 1e-10;

/// A square d×d complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row-major rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::InvalidInput(format!(
                "row of length {} in a {d}-row matrix",
                bad.len()
            )));
        }
        Self::from_matrix(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `A − A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| self.0.row(i).iter().copied().collect())
            .collect()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// A Hermitian operator: states, effects and their sums.
///
/// The stored matrix is exactly Hermitian; [`HermitianOperator::new`]
/// symmetrizes inputs that pass the `HERM_TOL` check.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if !defect.is_finite() || defect > HERM_TOL {
            return Err(Error::InvalidOperator(defect));
        }
        Ok(Self::symmetrized(matrix.0))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        Self::new(ComplexMatrix::from_matrix(m)?)
    }

    /// Hermitian part `(A + A†)/2`, without checking how far `A` was from it.
    pub(crate) fn symmetrized(m: DMatrix<C64>) -> Self {
        let h = (&m + m.adjoint()).scale(0.5);
        Self {
            matrix: ComplexMatrix(h),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self {
            matrix: ComplexMatrix(DMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.matrix.0
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: ComplexMatrix(self.matrix.0.scale(factor)),
        }
    }

    /// `Tr[A B]`, real for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let a = &self.matrix.0;
        let b = &other.matrix.0;
        let d = a.nrows();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (a[(i, j)] * b[(j, i)]).re;
            }
        }
        acc
    }

    /// `⟨ψ|A|ψ⟩` for an arbitrary (not necessarily normalized) vector.
    pub fn expectation(&self, psi: &DVector<C64>) -> f64 {
        psi.dotc(&(&self.matrix.0 * psi)).re
    }

    pub fn apply(&self, psi: &DVector<C64>) -> DVector<C64> {
        &self.matrix.0 * psi
    }

    /// `B A B` for Hermitian `B`.
    pub fn sandwich(&self, outer: &Self) -> Self {
        Self::symmetrized(&outer.matrix.0 * &self.matrix.0 * &outer.matrix.0)
    }

    /// `V† A V` for a d×r matrix `V`; the result is r×r.
    pub fn compress(&self, basis: &DMatrix<C64>) -> Self {
        Self::symmetrized(basis.adjoint() * &self.matrix.0 * basis)
    }

    /// `V A V†` for a d×r matrix `V` and r×r operator `A`; inverse of [`compress`](Self::compress)
    /// on the range of `V`.
    pub fn embed(&self, basis: &DMatrix<C64>) -> Self {
        Self::symmetrized(basis * &self.matrix.0 * basis.adjoint())
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.matrix.0 - &other.matrix.0)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix.0 - &other.matrix.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(self).values.last().copied().unwrap_or(0.0)
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.matrix.rows()
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: ComplexMatrix(&self.matrix.0 + &rhs.matrix.0),
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: ComplexMatrix(&self.matrix.0 - &rhs.matrix.0),
        }
    }
}

/// `Σ_k A_k`, or the d×d zero operator for an empty sequence.
pub fn sum_operators<'a, I>(dim: usize, ops: I) -> HermitianOperator
where
    I: IntoIterator<Item = &'a HermitianOperator>,
{
    let mut acc = DMatrix::<C64>::zeros(dim, dim);
    for op in ops {
        acc += op.as_dmatrix();
    }
    HermitianOperator::symmetrized(acc)
}

impl fmt::Display for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A normalized vector `|ψ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateVector(DVector<C64>);

impl PureStateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(amplitudes))
    }

    pub fn from_dvector(v: DVector<C64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let n2 = v.norm_squared();
        if !n2.is_finite() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {n2} != 1")));
        }
        Ok(Self(v))
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(v: DVector<C64>) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n <= f64::MIN_POSITIVE {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self(v.unscale(n)))
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_dvector(self) -> DVector<C64> {
        self.0
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0.dotc(&other.0)
    }
}

/// `|ψ⟩⟨ψ|` for an arbitrary vector.
pub fn ket_bra(psi: &DVector<C64>) -> HermitianOperator {
    HermitianOperator::symmetrized(psi * psi.adjoint())
}

/// `|ψ⟩⟨ψ|` for a normalized state; rank one, trace one.
pub fn outer(v: &PureStateVector) -> HermitianOperator {
    ket_bra(&v.0)
}

/// Spectral decomposition `A = Σ_k λ_k v_k v_k†`.
#[derive(Clone, Debug)]
pub struct Eigh {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, matching `values`.
    pub vectors: Vec<DVector<C64>>,
}

impl Eigh {
    /// Recomposes `Σ_k f(λ_k) v_k v_k†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> HermitianOperator {
        let d = self.vectors.first().map_or(0, |v| v.len());
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (&lambda, v) in self.values.iter().zip(&self.vectors) {
            let mu = f(lambda);
            if mu != 0.0 {
                acc += (v * v.adjoint()).scale(mu);
            }
        }
        HermitianOperator::symmetrized(acc)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|x| x)
    }

    /// Eigenvectors with eigenvalue above `KERNEL_TOL`, as the columns of a d×r matrix.
    pub fn support_basis(&self) -> DMatrix<C64> {
        let cols: Vec<&DVector<C64>> = self
            .values
            .iter()
            .zip(&self.vectors)
            .filter(|(&l, _)| l > KERNEL_TOL)
            .map(|(_, v)| v)
            .collect();
        let d = self.vectors.first().map_or(0, |v| v.len());
        DMatrix::from_fn(d, cols.len(), |i, j| cols[j][i])
    }

    pub fn rank(&self) -> usize {
        self.values.iter().filter(|&&l| l > KERNEL_TOL).count()
    }
}

/// Multiplies `v` by the phase that makes its first non-negligible entry real positive.
fn fix_phase(v: &mut DVector<C64>) {
    if let Some(z) = v.iter().find(|z| z.norm() > PHASE_TOL).copied() {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|a| *a *= phase);
    }
}

fn lex_cmp(a: &DVector<C64>, b: &DVector<C64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Hermitian eigendecomposition with deterministic ordering: descending
/// eigenvalues, each eigenvector phase-fixed, near-equal eigenvalues ordered
/// by descending lexicographic order of their eigenvectors.
pub fn eigh(op: &HermitianOperator) -> Eigh {
    let d = op.dim();
    let decomposition = op.as_dmatrix().clone().symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<C64>)> = (0..d)
        .map(|k| {
            let mut v: DVector<C64> = decomposition.eigenvectors.column(k).into_owned();
            fix_phase(&mut v);
            (decomposition.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end - 1].0 - pairs[end].0).abs() <= TIE_TOL {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lex_cmp(&b.1, &a.1));
        start = end;
    }
    let (values, vectors) = pairs.into_iter().unzip();
    Eigh { values, vectors }
}

/// Checked variant of [`eigh`] for raw matrices.
pub fn eigh_matrix(m: &ComplexMatrix) -> Result<Eigh> {
    let op = HermitianOperator::new(m.clone())?;
    Ok(eigh(&op))
}

fn check_psd(e: &Eigh) -> Result<()> {
    match e.values.last() {
        Some(&min) if min < -PSD_TOL => Err(Error::NotPositive(min)),
        _ => Ok(()),
    }
}

/// Positive square root `A^{1/2}`. Eigenvalues at or below `KERNEL_TOL` count as
/// kernel, so rounding noise does not grow to its square root.
pub fn op_sqrt(op: &HermitianOperator) -> Result<HermitianOperator> {
    let e = eigh(op);
    check_psd(&e)?;
    Ok(e.map(|l| if l > KERNEL_TOL { l.sqrt() } else { 0.0 }))
}

/// Pseudo-inverse square root: `λ^{-1/2}` on the support, zero on the kernel.
pub fn op_inv_sqrt(op: &HermitianOperator) -> Result<HermitianOperator> {
    let e = eigh(op);
    check_psd(&e)?;
    Ok(e.map(|l| {
        if l > KERNEL_TOL {
            l.sqrt().recip()
        } else {
            0.0
        }
    }))
}

/// Orthogonal projector onto the support of a PSD operator.
pub fn support_projector(op: &HermitianOperator) -> HermitianOperator {
    eigh(op).map(|l| if l > KERNEL_TOL { 1.0 } else { 0.0 })
}
