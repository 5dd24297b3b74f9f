//! Points of G_F(n, N) as orthonormal frames and as rank-n Hermitian idempotents.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{
    axpy_right, outer, unit_vector, vec_inner, vec_norm, Field, HermitianMatrix, Matrix,
    MatrixJson, Scalar,
};
use crate::error::{Error, Result};
use crate::linalg;

/// Residual norm under which Gram-Schmidt declares the input rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Tolerance for the orthonormality and idempotence invariants.
pub const INVARIANT_TOL: f64 = 1e-10;

/// Default Frobenius distance under which two projections are the same point.
pub const POINT_EQ_TOL: f64 = 1e-8;

/// Orthonormal vectors e_1..e_n in F^N spanning a point of the Grassmannian.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    field: Field,
    dim: usize,
    columns: Vec<Vec<Scalar>>,
}

impl Frame {
    /// Wraps columns after checking (e_i, e_j) = δ_ij.
    pub fn new(field: Field, dim: usize, columns: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if columns.len() > dim {
            return Err(Error::Contract(format!(
                "{} columns in F^{dim}",
                columns.len()
            )));
        }
        let frame = Self {
            field,
            dim,
            columns,
        };
        let residual = frame.orthonormality_residual();
        if residual > INVARIANT_TOL {
            return Err(Error::Contract(format!(
                "columns not orthonormal (residual {residual:e})"
            )));
        }
        Ok(frame)
    }

    /// The first n standard basis vectors.
    pub fn standard(field: Field, n: usize, dim: usize) -> Result<Self> {
        if n > dim {
            return Err(Error::Contract(format!("n = {n} exceeds N = {dim}")));
        }
        Ok(Self {
            field,
            dim,
            columns: (0..n).map(|a| unit_vector(dim, a)).collect(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension N.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of columns n.
    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<Scalar>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Vec<Scalar>> {
        self.columns
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_columns(self.dim, &self.columns)
    }

    /// Largest |(e_i, e_j) − δ_ij|.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, ei) in self.columns.iter().enumerate() {
            for (j, ej) in self.columns.iter().enumerate() {
                let g = vec_inner(ei, ej);
                let target = if i == j { Scalar::ONE } else { Scalar::ZERO };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// Right-multiplies the N×n frame by an n×n matrix.
    pub fn mul_right(&self, u: &Matrix) -> Result<Self> {
        let m = &self.to_matrix() * u;
        Self::new(self.field, self.dim, m.columns())
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(self.field, &self.to_matrix(), Some(self.rank()))
    }
}

/// A rank-n Hermitian idempotent: the canonical, basis-free form of a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionPoint {
    matrix: HermitianMatrix,
    rank: usize,
}

impl ProjectionPoint {
    /// Validates A² = A and tr A = n within [`INVARIANT_TOL`].
    pub fn new(matrix: HermitianMatrix, rank: usize) -> Result<Self> {
        let p = Self { matrix, rank };
        let (idem, trace) = (p.idempotence_residual(), p.trace_residual());
        if idem > INVARIANT_TOL || trace > INVARIANT_TOL {
            return Err(Error::NotProjection(format!(
                "|A²−A| = {idem:e}, |tr A − n| = {trace:e}"
            )));
        }
        Ok(p)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn idempotence_residual(&self) -> f64 {
        let sq = &self.matrix.matrix().clone() * self.matrix.matrix();
        (&sq - self.matrix.matrix()).max_abs()
    }

    pub fn trace_residual(&self) -> f64 {
        (self.matrix.trace() - self.rank as f64).abs()
    }

    /// |⟨A, A⟩ − n|.
    pub fn norm_residual(&self) -> f64 {
        (self.matrix.norm().powi(2) - self.rank as f64).abs()
    }

    /// Frobenius distance between projections.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.matrix.distance(&other.matrix)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rank == other.rank && self.distance(other).is_ok_and(|d| d < tol)
    }

    /// A·v.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.matrix().apply(v)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_hermitian(&self.matrix, Some(self.rank))
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        let h = json.to_hermitian()?;
        let rank = match json.n {
            Some(n) => n,
            None => h.trace().round() as usize,
        };
        Self::new(h, rank)
    }
}

/// Column-pivoted Gram-Schmidt: repeatedly takes the candidate with the largest
/// residual (ties by index), until `limit` vectors are accepted or every residual
/// falls below `tol`. Two orthogonalization passes per step.
fn pivoted_gram_schmidt(
    start: &[Vec<Scalar>],
    candidates: &[Vec<Scalar>],
    limit: usize,
    tol: f64,
) -> Vec<Vec<Scalar>> {
    let mut basis: Vec<Vec<Scalar>> = start.to_vec();
    let mut residuals: Vec<Vec<Scalar>> = candidates.to_vec();
    for r in residuals.iter_mut() {
        for b in &basis {
            for _ in 0..2 {
                let lambda = vec_inner(r, b);
                *r = axpy_right(r, b, -lambda);
            }
        }
    }
    let mut used = vec![false; residuals.len()];
    let mut accepted = 0;
    while accepted < limit {
        let best = (0..residuals.len())
            .filter(|&k| !used[k])
            .map(|k| (k, vec_norm(&residuals[k])))
            .fold(None, |acc: Option<(usize, f64)>, (k, nrm)| match acc {
                Some((_, b)) if b >= nrm => acc,
                _ => Some((k, nrm)),
            });
        let Some((k, nrm)) = best else { break };
        if nrm < tol {
            break;
        }
        used[k] = true;
        let mut v: Vec<Scalar> = residuals[k].iter().map(|x| x.scale(1.0 / nrm)).collect();
        // Re-orthogonalize against the basis before normalizing again.
        for b in &basis {
            let lambda = vec_inner(&v, b);
            v = axpy_right(&v, b, -lambda);
        }
        let nv = vec_norm(&v);
        let v: Vec<Scalar> = v.iter().map(|x| x.scale(1.0 / nv)).collect();
        for (j, r) in residuals.iter_mut().enumerate() {
            if !used[j] {
                for _ in 0..2 {
                    let lambda = vec_inner(r, &v);
                    *r = axpy_right(r, &v, -lambda);
                }
            }
        }
        basis.push(v);
        accepted += 1;
    }
    basis.split_off(start.len())
}

/// Right-module Gram-Schmidt in input order (no pivoting).
///
/// Fails with [`Error::Degenerate`] when a residual norm drops below [`RANK_TOL`]
/// relative to the input vector's norm.
pub fn orthonormalize(field: Field, dim: usize, vectors: &[Vec<Scalar>]) -> Result<Frame> {
    let mut basis: Vec<Vec<Scalar>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let scale = vec_norm(v).max(f64::MIN_POSITIVE);
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let lambda = vec_inner(&r, b);
                r = axpy_right(&r, b, -lambda);
            }
        }
        let nrm = vec_norm(&r);
        if nrm < RANK_TOL * scale || nrm == 0.0 {
            return Err(Error::Degenerate {
                index,
                residual: nrm,
            });
        }
        basis.push(r.iter().map(|x| x.scale(1.0 / nrm)).collect());
    }
    Frame::new(field, dim, basis)
}

/// φ(π) = Σ e_i conj(e_i)^t.
pub fn embed(frame: &Frame) -> ProjectionPoint {
    let n = frame.dim();
    let mut acc = Matrix::zeros(n, n);
    for e in frame.columns() {
        acc = &acc + &outer(e, Scalar::ONE, e);
    }
    ProjectionPoint {
        matrix: HermitianMatrix::symmetrized(frame.field(), &acc),
        rank: frame.rank(),
    }
}

/// Orthonormal basis of the range of A via column-pivoted Gram-Schmidt on its columns.
pub fn frame_from_projection(a: &ProjectionPoint) -> Result<Frame> {
    let cols = a.matrix().matrix().columns();
    let basis = pivoted_gram_schmidt(&[], &cols, cols.len(), 1e-6);
    let found = basis.len();
    if found != a.rank() {
        return Err(Error::RankMismatch {
            expected: a.rank(),
            found,
        });
    }
    Frame::new(a.field(), a.dim(), basis)
}

/// I − A, a point of G_F(N − n, N).
pub fn complement(a: &ProjectionPoint) -> ProjectionPoint {
    let id = HermitianMatrix::identity(a.field(), a.dim());
    let m = id.sub(a.matrix()).expect("same shape");
    ProjectionPoint {
        matrix: m,
        rank: a.dim() - a.rank(),
    }
}

/// Ã = I − 2A, an involutive element of the isometry group of F^N.
pub fn involution(a: &ProjectionPoint) -> HermitianMatrix {
    let id = HermitianMatrix::identity(a.field(), a.dim());
    id.sub(&a.matrix().scale(2.0)).expect("same shape")
}

/// Real determinant of a real matrix given over field R.
pub fn real_determinant(m: &HermitianMatrix) -> Result<f64> {
    if m.field() != Field::R {
        return Err(Error::Unsupported(
            "determinant is only defined here for field R".into(),
        ));
    }
    let n = m.dim();
    let data: Vec<f64> = m.matrix().entries().iter().map(|x| x.re).collect();
    Ok(linalg::determinant(&data, n))
}

/// A vector of independent standard Gaussian components in F^N.
pub(crate) fn gaussian_vector(field: Field, dim: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..dim)
        .map(|_| {
            let mut c = [0.0; 4];
            for x in &mut c[..field.c()] {
                *x = StandardNormal.sample(rng);
            }
            Scalar::from_components(c)
        })
        .collect()
}

/// Seeded Gaussian N×n matrix over F, orthonormalized.
pub fn random_point(field: Field, n: usize, dim: usize, seed: u64) -> Result<Frame> {
    if n > dim {
        return Err(Error::Contract(format!("n = {n} exceeds N = {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<_> = (0..n)
        .map(|_| gaussian_vector(field, dim, &mut rng))
        .collect();
    orthonormalize(field, dim, &vectors)
}

/// Seeded random n×n unitary matrix over F.
pub fn random_unitary(field: Field, n: usize, seed: u64) -> Result<Matrix> {
    Ok(random_point(field, n, n, seed)?.to_matrix())
}

/// Extends the span frame to an orthonormal basis of F^N, keeping the first n columns.
///
/// Completion draws from the standard basis with largest-residual pivoting, so
/// `{e_1}` in F^3 completes to `{e_1, e_2, e_3}`.
pub fn complete_frame(frame: &Frame) -> FullFrame {
    let dim = frame.dim();
    let candidates: Vec<_> = (0..dim).map(|a| unit_vector(dim, a)).collect();
    let extra = pivoted_gram_schmidt(frame.columns(), &candidates, dim - frame.rank(), 1e-8);
    let mut columns = frame.columns().to_vec();
    columns.extend(extra);
    FullFrame {
        field: frame.field(),
        n: frame.rank(),
        columns,
    }
}

/// Extends orthonormal `start` by up to `limit` vectors drawn from `candidates`
/// with largest-residual pivoting; returns only the new vectors.
pub(crate) fn extend_orthonormal(
    start: &[Vec<Scalar>],
    candidates: &[Vec<Scalar>],
    limit: usize,
    tol: f64,
) -> Vec<Vec<Scalar>> {
    pivoted_gram_schmidt(start, candidates, limit, tol)
}

/// F-dimension of the span of `vectors` (pivoted Gram-Schmidt with threshold `tol`).
pub fn span_rank(vectors: &[Vec<Scalar>], tol: f64) -> usize {
    pivoted_gram_schmidt(&[], vectors, vectors.len(), tol).len()
}

/// F-dimension of range(A) ∩ range(B).
pub fn intersection_dim(a: &ProjectionPoint, b: &ProjectionPoint, tol: f64) -> Result<usize> {
    let fa = frame_from_projection(a)?;
    let id = HermitianMatrix::identity(b.field(), b.dim());
    let perp = id.sub(b.matrix())?;
    let images: Vec<_> = fa
        .columns()
        .iter()
        .map(|e| perp.matrix().apply(e))
        .collect();
    Ok(a.rank() - span_rank(&images, tol))
}

/// A unitary basis e_1..e_N of F^N whose first n columns span the point.
#[derive(Clone, Debug, PartialEq)]
pub struct FullFrame {
    field: Field,
    n: usize,
    columns: Vec<Vec<Scalar>>,
}

impl FullFrame {
    pub fn new(field: Field, n: usize, columns: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = columns.len();
        if n > dim {
            return Err(Error::Contract(format!("n = {n} exceeds N = {dim}")));
        }
        Frame::new(field, dim, columns.clone())?;
        Ok(Self { field, n, columns })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Vec<Scalar>] {
        &self.columns
    }

    /// e_1..e_n.
    pub fn span(&self) -> Frame {
        Frame {
            field: self.field,
            dim: self.dim(),
            columns: self.columns[..self.n].to_vec(),
        }
    }

    /// e_{n+1}..e_N.
    pub fn orthogonal(&self) -> Frame {
        Frame {
            field: self.field,
            dim: self.dim(),
            columns: self.columns[self.n..].to_vec(),
        }
    }

    pub fn point(&self) -> ProjectionPoint {
        embed(&self.span())
    }

    pub(crate) fn with_columns(&self, columns: Vec<Vec<Scalar>>) -> Self {
        Self {
            field: self.field,
            n: self.n,
            columns,
        }
    }
}
