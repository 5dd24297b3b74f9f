//! Tangent spaces, rotation geodesics, mean curvature and the Laplacian of the
//! projection-matrix embedding.
//!
//! Conventions:
//!
//! * The ambient inner product ⟨A, B⟩ = Re tr(AB) restricted to the tangent space
//!   is the induced metric (twice the frame metric Φ). All derivatives below are
//!   taken with respect to this induced metric.
//! * The rotation curve e_i(t) = cos t·e_i + sin t·e_α·q has dφ/dt of norm √2, so a
//!   second derivative in t is halved to get the unit-speed value.
//! * [`laplacian_numeric`] returns the analyst's Laplace–Beltrami operator Δ_LB
//!   (sum of second derivatives). The Hodge Laplacian (d+δ)² is its negative,
//!   so the eigenvalue relation reads Δ_LB f = −cN·f.

use crate::algebra::{axpy_right, outer, Field, HermitianMatrix, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::grassmann::{embed, orthonormalize, Frame, FullFrame, ProjectionPoint};

/// Default central-difference step.
pub const DEFAULT_H: f64 = 1e-3;

/// Index pair and field unit of a tangent basis vector e_α q conj(e_i)^t + e_i conj(q) conj(e_α)^t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TangentLabel {
    /// Span column, 0-based (< n).
    pub i: usize,
    /// Complement column, 0-based (n ≤ α < N).
    pub alpha: usize,
    /// Position of q in `Field::units()`.
    pub unit: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub matrix: HermitianMatrix,
    pub label: Option<TangentLabel>,
}

impl TangentVector {
    /// Largest entry of XA + AX − X; zero for vectors tangent at A.
    pub fn tangency_residual(&self, base: &ProjectionPoint) -> f64 {
        let x = self.matrix.matrix();
        let a = base.matrix().matrix();
        let lhs = &(x * a) + &(a * x);
        (&lhs - x).max_abs()
    }
}

/// The c·n(N−n) orthogonal tangent vectors at a base point, each of norm √2.
#[derive(Clone, Debug)]
pub struct TangentBasis {
    pub base: ProjectionPoint,
    pub vectors: Vec<TangentVector>,
}

impl TangentBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Gram matrix ⟨ξ_a, ξ_b⟩, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let m = self.len();
        let mut g = vec![0.0; m * m];
        for (a, x) in self.vectors.iter().enumerate() {
            for (b, y) in self.vectors.iter().enumerate() {
                g[a * m + b] = x.matrix.inner(&y.matrix).expect("same space");
            }
        }
        g
    }

    /// Orthogonal projection of an ambient vector onto the tangent space.
    pub fn project(&self, p: &HermitianMatrix) -> Result<HermitianMatrix> {
        let mut acc = HermitianMatrix::zeros(self.base.field(), self.base.dim());
        for x in &self.vectors {
            let w = 0.5 * x.matrix.inner(p)?;
            acc = acc.add(&x.matrix.scale(w))?;
        }
        Ok(acc)
    }
}

/// Tangent basis on a completed frame, ordered by (i, α, unit).
pub fn tangent_basis(full: &FullFrame) -> TangentBasis {
    let field = full.field();
    let n = full.rank();
    let cols = full.columns();
    let mut vectors = Vec::with_capacity(field.grassmann_dim(n, full.dim()));
    for i in 0..n {
        for alpha in n..full.dim() {
            for (unit, &q) in field.units().iter().enumerate() {
                let m =
                    &outer(&cols[alpha], q, &cols[i]) + &outer(&cols[i], q.conj(), &cols[alpha]);
                vectors.push(TangentVector {
                    matrix: HermitianMatrix::symmetrized(field, &m),
                    label: Some(TangentLabel { i, alpha, unit }),
                });
            }
        }
    }
    TangentBasis {
        base: full.point(),
        vectors,
    }
}

/// Rotation of span column `i` towards complement column `alpha` along unit `q`.
#[derive(Clone, Debug)]
pub struct GeodesicCurve {
    base: FullFrame,
    i: usize,
    alpha: usize,
    q: Scalar,
}

impl GeodesicCurve {
    pub fn new(base: FullFrame, i: usize, alpha: usize, q: Scalar) -> Result<Self> {
        let (n, dim) = (base.rank(), base.dim());
        if i >= n || alpha < n || alpha >= dim {
            return Err(Error::Contract(format!(
                "need i < n <= alpha < N, got i={i}, alpha={alpha}, n={n}, N={dim}"
            )));
        }
        if (q.abs() - 1.0).abs() > 1e-12 || !base.field().contains(q) {
            return Err(Error::Contract(format!(
                "q = {q} is not a unit of {}",
                base.field()
            )));
        }
        Ok(Self { base, i, alpha, q })
    }

    pub fn from_label(base: FullFrame, label: TangentLabel) -> Result<Self> {
        let q =
            *base.field().units().get(label.unit).ok_or_else(|| {
                Error::Contract(format!("unit index {} out of range", label.unit))
            })?;
        Self::new(base, label.i, label.alpha, q)
    }

    pub fn base(&self) -> &FullFrame {
        &self.base
    }

    /// The full frame at time t: e_i ↦ cos t·e_i + sin t·e_α q and
    /// e_α ↦ cos t·e_α − sin t·e_i conj(q); other columns fixed.
    pub fn full_frame_at(&self, t: f64) -> FullFrame {
        let cols = self.base.columns();
        let (c, s) = (t.cos(), t.sin());
        let ei = &cols[self.i];
        let ea = &cols[self.alpha];
        let new_i: Vec<Scalar> = ei
            .iter()
            .zip(ea)
            .map(|(&x, &y)| x.scale(c) + (y * self.q).scale(s))
            .collect();
        let new_a: Vec<Scalar> = ea
            .iter()
            .zip(ei)
            .map(|(&y, &x)| y.scale(c) - (x * self.q.conj()).scale(s))
            .collect();
        let mut columns = cols.to_vec();
        columns[self.i] = new_i;
        columns[self.alpha] = new_a;
        self.base.with_columns(columns)
    }

    pub fn frame_at(&self, t: f64) -> Frame {
        self.full_frame_at(t).span()
    }

    pub fn point_at(&self, t: f64) -> ProjectionPoint {
        embed(&self.frame_at(t))
    }
}

/// Moves the frame along an ambient tangent direction X: orthonormalize(E + t·X·E).
///
/// The curve has velocity X at t = 0 and stays on the manifold.
pub fn retract(frame: &Frame, direction: &HermitianMatrix, t: f64) -> Result<Frame> {
    let x = direction.matrix();
    let moved: Vec<Vec<Scalar>> = frame
        .columns()
        .iter()
        .map(|e| axpy_right(e, &x.apply(e), Scalar::real(t)))
        .collect();
    orthonormalize(frame.field(), frame.dim(), &moved)
}

/// Central-difference settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteDifference {
    pub h: f64,
    /// Combine steps h and 2h to cancel the O(h²) term.
    pub richardson: bool,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        Self {
            h: DEFAULT_H,
            richardson: false,
        }
    }
}

impl FiniteDifference {
    pub fn new(h: f64) -> Result<Self> {
        let fd = Self {
            h,
            richardson: false,
        };
        fd.validate()?;
        Ok(fd)
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1e-5..=1e-2).contains(&self.h) {
            return Err(Error::Contract(format!(
                "step h = {} outside [1e-5, 1e-2]",
                self.h
            )));
        }
        Ok(())
    }

    /// (g(h) + g(−h) − 2g(0))/h², optionally Richardson-extrapolated.
    pub fn second_derivative(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        let g0 = g(0.0);
        let mut d = |h: f64| (g(h) + g(-h) - 2.0 * g0) / (h * h);
        if self.richardson {
            let (d1, d2) = (d(self.h), d(2.0 * self.h));
            (4.0 * d1 - d2) / 3.0
        } else {
            d(self.h)
        }
    }

    /// Entrywise second derivative of a matrix-valued curve.
    pub fn second_derivative_matrix(&self, mut g: impl FnMut(f64) -> Matrix) -> Matrix {
        let g0 = g(0.0);
        let mut d = |h: f64| {
            let sum = &(&g(h) + &g(-h)) - &g0.scale(2.0);
            sum.scale(1.0 / (h * h))
        };
        if self.richardson {
            let (d1, d2) = (d(self.h), d(2.0 * self.h));
            (&d1.scale(4.0) - &d2).scale(1.0 / 3.0)
        } else {
            d(self.h)
        }
    }
}

fn require_proper(full: &FullFrame) -> Result<()> {
    let (n, dim) = (full.rank(), full.dim());
    if n == 0 || n == dim {
        return Err(Error::Undefined(format!("G({n},{dim}) is a single point")));
    }
    Ok(())
}

/// H = −(1/n)·Σ e_i conj(e_i)^t + (1/(N−n))·Σ e_α conj(e_α)^t.
pub fn mean_curvature_closed_form(full: &FullFrame) -> Result<HermitianMatrix> {
    require_proper(full)?;
    let a = full.point();
    let (n, dim) = (full.rank() as f64, full.dim() as f64);
    let id = HermitianMatrix::identity(full.field(), full.dim());
    let rest = id.sub(a.matrix())?;
    a.matrix().scale(-1.0 / n).add(&rest.scale(1.0 / (dim - n)))
}

/// Mean curvature from second differences of φ along the c·n(N−n) rotation geodesics.
pub fn mean_curvature_numeric(full: &FullFrame, fd: FiniteDifference) -> Result<HermitianMatrix> {
    require_proper(full)?;
    fd.validate()?;
    let field = full.field();
    let mut acc = Matrix::zeros(full.dim(), full.dim());
    let labels = tangent_labels(full);
    for label in &labels {
        let curve = GeodesicCurve::from_label(full.clone(), *label)?;
        let d2 = fd.second_derivative_matrix(|t| curve.point_at(t).matrix().matrix().clone());
        acc = &acc + &d2;
    }
    // Halve for unit speed in the induced metric, then average over directions.
    let scale = 0.5 / labels.len() as f64;
    Ok(HermitianMatrix::symmetrized(field, &acc.scale(scale)))
}

fn tangent_labels(full: &FullFrame) -> Vec<TangentLabel> {
    let n = full.rank();
    let c = full.field().c();
    (0..n)
        .flat_map(|i| {
            (n..full.dim())
                .flat_map(move |alpha| (0..c).map(move |unit| TangentLabel { i, alpha, unit }))
        })
        .collect()
}

/// |H − proj_{span{A, I}} H|, the component of H tangent to the sphere slice.
pub fn normal_residual(a: &ProjectionPoint, h: &HermitianMatrix) -> Result<f64> {
    let am = a.matrix();
    let id = HermitianMatrix::identity(a.field(), a.dim());
    // Gram of {A, I}: [[n, n], [n, N]]; singular only for n = 0 or n = N.
    let (g11, g12, g22) = (am.inner(am)?, am.inner(&id)?, id.inner(&id)?);
    let (r1, r2) = (h.inner(am)?, h.inner(&id)?);
    let det = g11 * g22 - g12 * g12;
    if det.abs() < 1e-12 {
        return Err(Error::Undefined("A and I are parallel".into()));
    }
    let x = (r1 * g22 - r2 * g12) / det;
    let y = (g11 * r2 - g12 * r1) / det;
    let proj = am.scale(x).add(&id.scale(y))?;
    h.distance(&proj)
}

/// Minimality residual of the closed-form mean curvature; zero up to roundoff.
pub fn minimality_residual(full: &FullFrame) -> Result<f64> {
    let h = mean_curvature_closed_form(full)?;
    normal_residual(&full.point(), &h)
}

/// Radius √(n(N−n)/N) of the sphere slice S(√n) ∩ {tr B = n}.
pub fn sphere_slice_radius(n: usize, dim: usize) -> f64 {
    let (n, dim) = (n as f64, dim as f64);
    (n * (dim - n) / dim).sqrt()
}

/// Center (n/N)·I of the sphere slice.
pub fn sphere_slice_center(field: Field, n: usize, dim: usize) -> HermitianMatrix {
    HermitianMatrix::identity(field, dim).scale(n as f64 / dim as f64)
}

/// Δ_LB f for f(π) = ⟨φ(π), param⟩, from second differences along the rotation geodesics.
pub fn laplacian_numeric(
    param: &HermitianMatrix,
    full: &FullFrame,
    fd: FiniteDifference,
) -> Result<f64> {
    fd.validate()?;
    let probe = full.point();
    probe.matrix().inner(param)?;
    let mut total = 0.0;
    for label in tangent_labels(full) {
        let curve = GeodesicCurve::from_label(full.clone(), label)?;
        total +=
            fd.second_derivative(|t| curve.point_at(t).matrix().inner(param).expect("checked"));
    }
    Ok(0.5 * total)
}

/// c·n(N−n)·⟨H, param⟩, the closed-form value of Δ_LB f.
pub fn laplacian_closed_form(param: &HermitianMatrix, full: &FullFrame) -> Result<f64> {
    let h = mean_curvature_closed_form(full)?;
    let dim = full.field().grassmann_dim(full.rank(), full.dim()) as f64;
    Ok(dim * h.inner(param)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_hermitian;
    use crate::grassmann::{complete_frame, random_point};

    fn full(field: Field, n: usize, dim: usize, seed: u64) -> FullFrame {
        complete_frame(&random_point(field, n, dim, seed).unwrap())
    }

    fn standard(field: Field, n: usize, dim: usize) -> FullFrame {
        complete_frame(&Frame::standard(field, n, dim).unwrap())
    }

    #[test]
    fn tangent_basis_real_1_2() {
        let b = tangent_basis(&standard(Field::R, 1, 2));
        assert_eq!(b.len(), 1);
        let x = &b.vectors[0].matrix;
        assert_eq!(*x, HermitianMatrix::elementary(Field::R, 2, 0, 1));
        assert!((x.norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tangent_basis_gram_is_twice_identity() {
        let b = tangent_basis(&full(Field::H, 1, 2, 3));
        assert_eq!(b.len(), 4);
        for field in Field::ALL {
            let b = tangent_basis(&full(field, 2, 5, 4));
            let m = b.len();
            assert_eq!(m, field.grassmann_dim(2, 5));
            let g = b.gram();
            for r in 0..m {
                for c in 0..m {
                    let target = if r == c { 2.0 } else { 0.0 };
                    assert!((g[r * m + c] - target).abs() < 1e-10);
                }
            }
            for x in &b.vectors {
                assert!(x.tangency_residual(&b.base) < 1e-10);
            }
        }
        assert_eq!(tangent_basis(&full(Field::C, 2, 5, 0)).len(), 12);
    }

    #[test]
    fn geodesic_endpoints() {
        let base = full(Field::H, 2, 4, 9);
        let curve = GeodesicCurve::new(base.clone(), 1, 3, Scalar::ONE).unwrap();
        assert_eq!(curve.frame_at(0.0), base.span());
        let quarter = curve.frame_at(std::f64::consts::FRAC_PI_2);
        for (a, b) in quarter.columns()[1].iter().zip(&base.columns()[3]) {
            assert!((*a - *b).abs() < 1e-15);
        }
        for t in [-1.0, 0.3, 2.5] {
            let ff = curve.full_frame_at(t);
            assert!(FullFrame::new(Field::H, 2, ff.columns().to_vec()).is_ok());
        }
        assert!(GeodesicCurve::new(base.clone(), 2, 3, Scalar::ONE).is_err());
        assert!(GeodesicCurve::new(base, 0, 3, Scalar::real(2.0)).is_err());
    }

    #[test]
    fn geodesic_velocity_is_tangent_vector() {
        let base = full(Field::C, 2, 4, 5);
        let basis = tangent_basis(&base);
        let h = 1e-4;
        for x in &basis.vectors {
            let curve = GeodesicCurve::from_label(base.clone(), x.label.unwrap()).unwrap();
            let d = (&curve.point_at(h).matrix().matrix().clone()
                - curve.point_at(-h).matrix().matrix())
            .scale(0.5 / h);
            assert!((&d - x.matrix.matrix()).max_abs() < 1e-8);
        }
    }

    #[test]
    fn closed_form_mean_curvature() {
        let f = full(Field::R, 1, 2, 1);
        let h = mean_curvature_closed_form(&f).unwrap();
        let expected = HermitianMatrix::identity(Field::R, 2)
            .sub(&f.point().matrix().scale(2.0))
            .unwrap();
        assert!(h.distance(&expected).unwrap() < 1e-14);
        for field in Field::ALL {
            let f = full(field, 2, 5, 7);
            assert!(minimality_residual(&f).unwrap() < 1e-10);
            let h = mean_curvature_closed_form(&f).unwrap();
            for x in tangent_basis(&f).vectors {
                assert!(h.inner(&x.matrix).unwrap().abs() < 1e-12);
            }
            assert!((h.inner(f.point().matrix()).unwrap() + 1.0).abs() < 1e-12);
        }
        assert!(mean_curvature_closed_form(&standard(Field::R, 0, 3)).is_err());
        assert!(mean_curvature_closed_form(&standard(Field::R, 3, 3)).is_err());
    }

    #[test]
    fn numeric_mean_curvature_real_1_2() {
        let f = full(Field::R, 1, 2, 2);
        let num = mean_curvature_numeric(&f, FiniteDifference::default()).unwrap();
        let exact = mean_curvature_closed_form(&f).unwrap();
        assert!(num.sub(&exact).unwrap().matrix().max_abs() <= 1e-5);
    }

    #[test]
    fn numeric_mean_curvature_is_second_order() {
        let f = full(Field::C, 1, 3, 6);
        let exact = mean_curvature_closed_form(&f).unwrap();
        let err = |h: f64| {
            let num = mean_curvature_numeric(&f, FiniteDifference::new(h).unwrap()).unwrap();
            num.sub(&exact).unwrap().matrix().max_abs()
        };
        let ratio = err(2e-3) / err(1e-3);
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
        let rich =
            mean_curvature_numeric(&f, FiniteDifference::default().with_richardson(true)).unwrap();
        assert!(rich.sub(&exact).unwrap().matrix().max_abs() < 1e-8);
        let num = mean_curvature_numeric(&f, FiniteDifference::default()).unwrap();
        assert!(
            (num.inner(f.point().matrix()).unwrap() - exact.inner(f.point().matrix()).unwrap())
                .abs()
                < 1e-5
        );
        assert!(normal_residual(&f.point(), &num).unwrap() < 1e-4);
    }

    #[test]
    fn step_size_is_validated() {
        assert!(FiniteDifference::new(0.1).is_err());
        assert!(FiniteDifference::new(1e-6).is_err());
        let f = full(Field::R, 1, 3, 0);
        let bad = FiniteDifference {
            h: 1.0,
            richardson: false,
        };
        assert!(mean_curvature_numeric(&f, bad).is_err());
    }

    #[test]
    fn sphere_slice() {
        assert_eq!(sphere_slice_radius(1, 2), 0.5f64.sqrt());
        let f = full(Field::H, 2, 5, 3);
        let d = f
            .point()
            .matrix()
            .distance(&sphere_slice_center(Field::H, 2, 5))
            .unwrap();
        assert!((d - sphere_slice_radius(2, 5)).abs() < 1e-12);
    }

    #[test]
    fn laplacian_eigenfunction() {
        for field in Field::ALL {
            let (n, dim) = (2, 4);
            let f = full(field, n, dim, 17);
            let e11 = HermitianMatrix::elementary(field, dim, 0, 0);
            let param = e11
                .sub(&HermitianMatrix::identity(field, dim).scale(1.0 / dim as f64))
                .unwrap();
            let value = f.point().matrix().inner(&param).unwrap();
            let lap = laplacian_numeric(&param, &f, FiniteDifference::default()).unwrap();
            let target = -((field.c() * dim) as f64) * value;
            assert!(
                (lap - target).abs() <= 1e-3 * value.abs().max(0.1),
                "{field}: {lap} vs {target}"
            );
        }
    }

    #[test]
    fn laplacian_of_constant_and_general() {
        let f = full(Field::C, 2, 5, 1);
        let id = HermitianMatrix::identity(Field::C, 5);
        assert!(
            laplacian_numeric(&id, &f, FiniteDifference::default())
                .unwrap()
                .abs()
                < 1e-6
        );
        let p = random_hermitian(Field::C, 5, 99).unwrap();
        let num = laplacian_numeric(&p, &f, FiniteDifference::default()).unwrap();
        let exact = laplacian_closed_form(&p, &f).unwrap();
        assert!((num - exact).abs() < 1e-4 * exact.abs().max(1.0));
    }

    #[test]
    fn retraction_velocity() {
        let base = full(Field::H, 2, 4, 8);
        let basis = tangent_basis(&base);
        let x = basis.vectors[0]
            .matrix
            .add(&basis.vectors[5].matrix)
            .unwrap();
        let h = 1e-4;
        let plus = embed(&retract(&base.span(), &x, h).unwrap());
        let minus = embed(&retract(&base.span(), &x, -h).unwrap());
        let d = (&plus.matrix().matrix().clone() - minus.matrix().matrix()).scale(0.5 / h);
        assert!((&d - x.matrix()).max_abs() < 1e-7);
    }
}
