//! The Euclidean space of Hermitian matrices with ⟨A, B⟩ = Re tr(AB).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{outer, unit_vector, Matrix};
use super::{Field, Scalar};
use crate::error::{Error, Result};

/// Relative tolerance for the conjugate-transpose check at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// An N×N matrix over a field with conj(A)^t = A.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    field: Field,
    mat: Matrix,
}

impl HermitianMatrix {
    /// Validates field membership and Hermitian symmetry, then symmetrizes.
    pub fn new(field: Field, mat: Matrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: mat.rows(),
                found: mat.cols(),
            });
        }
        if let Some(bad) = mat.entries().iter().find(|&&x| !field.contains(x)) {
            return Err(Error::NotInField {
                field,
                value: bad.to_string(),
            });
        }
        let asym = (&mat - &mat.adjoint()).max_abs();
        if asym > HERMITIAN_TOL * mat.max_abs().max(1.0) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::symmetrized(field, &mat))
    }

    /// (M + M^*)/2 restricted to the field; skips validation.
    pub(crate) fn symmetrized(field: Field, mat: &Matrix) -> Self {
        let sym = (mat + &mat.adjoint()).scale(0.5);
        let n = sym.rows();
        let mat = Matrix::from_fn(n, n, |r, c| {
            let x = field.restrict(sym[(r, c)]);
            if r == c {
                Scalar::real(x.re)
            } else {
                x
            }
        });
        Self { field, mat }
    }

    pub fn zeros(field: Field, n: usize) -> Self {
        Self {
            field,
            mat: Matrix::zeros(n, n),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self {
            field,
            mat: Matrix::identity(n),
        }
    }

    /// Elementary matrix E_ab: ones at (a, b) and (b, a), zero elsewhere.
    pub fn elementary(field: Field, n: usize, a: usize, b: usize) -> Self {
        let mut mat = Matrix::zeros(n, n);
        mat[(a, b)] = Scalar::ONE;
        mat[(b, a)] = Scalar::ONE;
        Self { field, mat }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// ⟨A, B⟩ = Re tr(AB).
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        // Re tr(AB) = Σ Re(a_rc b_cr) = Σ Re(a_rc conj(b_rc)) for Hermitian B.
        Ok(self.mat.real_dot(&other.mat))
    }

    pub fn norm(&self) -> f64 {
        self.mat.frobenius()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            field: self.field,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            field: self.field,
            mat: &self.mat - &other.mat,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            field: self.field,
            mat: self.mat.scale(s),
        }
    }

    /// Frobenius distance |A − B|.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Plain product; generally not Hermitian.
    pub fn product(&self, other: &Self) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(&self.mat * &other.mat)
    }

    /// Largest |A_rc − conj(A_cr)|.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.mat - &self.mat.adjoint()).max_abs()
    }
}

/// Label of one element of the canonical orthogonal basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    /// e_A conj(e_A)^t
    Diagonal(usize),
    /// e_B q conj(e_C)^t + e_C conj(q) conj(e_B)^t with B < C and q the `unit`-th field unit.
    Pair { b: usize, c: usize, unit: usize },
}

/// The orthogonal basis of Hermitian matrices built on the columns of a unitary frame.
///
/// Diagonal elements have squared norm 1, paired elements squared norm 2.
pub fn orthogonal_basis_on(
    field: Field,
    frame: &[Vec<Scalar>],
) -> Vec<(BasisLabel, HermitianMatrix)> {
    let n = frame.len();
    let mut out = Vec::with_capacity(field.hermitian_dim(n));
    for (a, e) in frame.iter().enumerate() {
        let m = outer(e, Scalar::ONE, e);
        out.push((
            BasisLabel::Diagonal(a),
            HermitianMatrix::symmetrized(field, &m),
        ));
    }
    for b in 0..n {
        for c in b + 1..n {
            for (unit, &q) in field.units().iter().enumerate() {
                let m = &outer(&frame[b], q, &frame[c]) + &outer(&frame[c], q.conj(), &frame[b]);
                out.push((
                    BasisLabel::Pair { b, c, unit },
                    HermitianMatrix::symmetrized(field, &m),
                ));
            }
        }
    }
    out
}

/// The canonical orthogonal basis of M_F(N) on the standard frame.
pub fn standard_basis(field: Field, n: usize) -> Result<Vec<HermitianMatrix>> {
    if n < 1 {
        return Err(Error::Contract("basis requires N >= 1".into()));
    }
    let frame: Vec<_> = (0..n).map(|a| unit_vector(n, a)).collect();
    Ok(orthogonal_basis_on(field, &frame)
        .into_iter()
        .map(|(_, m)| m)
        .collect())
}

/// Seeded Gaussian coefficients on the canonical basis.
pub fn random_hermitian_coefficients(field: Field, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..field.hermitian_dim(n))
        .map(|_| StandardNormal.sample(&mut rng))
        .collect()
}

/// A random Hermitian matrix with independent standard Gaussian basis coefficients.
pub fn random_hermitian(field: Field, n: usize, seed: u64) -> Result<HermitianMatrix> {
    let basis = standard_basis(field, n)?;
    let coeffs = random_hermitian_coefficients(field, n, seed);
    let mut acc = Matrix::zeros(n, n);
    for (b, x) in basis.iter().zip(coeffs) {
        acc = &acc + &b.matrix().scale(x);
    }
    Ok(HermitianMatrix::symmetrized(field, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_inner_products() {
        let e11 = HermitianMatrix::elementary(Field::C, 3, 0, 0);
        let e12 = HermitianMatrix::elementary(Field::C, 3, 0, 1);
        assert_eq!(e11.inner(&e11).unwrap(), 1.0);
        assert_eq!(e12.inner(&e12).unwrap(), 2.0);
        assert_eq!(e11.inner(&e12).unwrap(), 0.0);
    }

    #[test]
    fn inner_rejects_mismatches() {
        let a = HermitianMatrix::identity(Field::R, 2);
        let b = HermitianMatrix::identity(Field::C, 2);
        let c = HermitianMatrix::identity(Field::R, 3);
        assert!(matches!(a.inner(&b), Err(Error::FieldMismatch { .. })));
        assert!(matches!(a.inner(&c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn construction_validates() {
        let mut m = Matrix::zeros(2, 2);
        m[(0, 1)] = Scalar::new(1.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            HermitianMatrix::new(Field::C, m.clone()),
            Err(Error::NotHermitian(_))
        ));
        m[(1, 0)] = Scalar::new(1.0, -1.0, 0.0, 0.0);
        assert!(HermitianMatrix::new(Field::C, m.clone()).is_ok());
        assert!(matches!(
            HermitianMatrix::new(Field::R, m),
            Err(Error::NotInField { .. })
        ));
        assert!(HermitianMatrix::new(Field::R, Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn basis_real_2() {
        let b = standard_basis(Field::R, 2).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[0], HermitianMatrix::elementary(Field::R, 2, 0, 0));
        assert_eq!(b[1], HermitianMatrix::elementary(Field::R, 2, 1, 1));
        assert_eq!(b[2], HermitianMatrix::elementary(Field::R, 2, 0, 1));
    }

    #[test]
    fn basis_quaternion_2_is_orthogonal() {
        let b = standard_basis(Field::H, 2).unwrap();
        assert_eq!(b.len(), 6);
        for (x, bx) in b.iter().enumerate() {
            for by in &b[x + 1..] {
                assert_eq!(bx.inner(by).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn basis_complex_3_gram_by_brute_force() {
        let b = standard_basis(Field::C, 3).unwrap();
        assert_eq!(b.len(), 9);
        // Brute force Re tr(XY) with explicit matrix products.
        for (x, bx) in b.iter().enumerate() {
            for (y, by) in b.iter().enumerate() {
                let g = bx.product(by).unwrap().trace().re;
                let expected = match (x == y, x < 3) {
                    (false, _) => 0.0,
                    (true, true) => 1.0,
                    (true, false) => 2.0,
                };
                assert_eq!(g, expected, "gram entry ({x},{y})");
            }
        }
    }

    #[test]
    fn basis_requires_positive_size() {
        assert!(standard_basis(Field::R, 0).is_err());
    }

    #[test]
    fn random_hermitian_round_trip() {
        for field in Field::ALL {
            let x = random_hermitian(field, 4, 11).unwrap();
            assert_eq!(x, random_hermitian(field, 4, 11).unwrap());
            assert_ne!(x, random_hermitian(field, 4, 12).unwrap());
            assert_eq!(x.hermitian_residual(), 0.0);
            let coeffs = random_hermitian_coefficients(field, 4, 11);
            for (b, c) in standard_basis(field, 4).unwrap().iter().zip(coeffs) {
                let recovered = x.inner(b).unwrap() / b.inner(b).unwrap();
                assert!((recovered - c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn positive_definite() {
        for seed in 0..50 {
            let x = random_hermitian(Field::H, 3, seed).unwrap();
            assert!(x.inner(&x).unwrap() > 0.0);
        }
        let z = HermitianMatrix::zeros(Field::H, 3);
        assert_eq!(z.inner(&z).unwrap(), 0.0);
    }
}
