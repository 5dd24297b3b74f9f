//! Height functions f_P(π) = ⟨φ(π), P⟩, their gradient flow, critical classes and
//! numerical Morse–Bott indices.
//!
//! Two parameters are named: E11 (the diagonal unit at (1,1)) and E12 (ones at
//! (1,2) and (2,1)). Their critical sets are unions of smaller Grassmannians,
//! listed in [`CriticalClass`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{unit_vector, vec_norm, Field, HermitianMatrix, Matrix, MatrixJson, Scalar};
use crate::error::{Error, Result};
use crate::geometry::{retract, tangent_basis, FiniteDifference, TangentVector};
use crate::grassmann::{
    complete_frame, embed, extend_orthonormal, random_point, random_unitary, Frame, FullFrame,
    ProjectionPoint,
};
use crate::linalg::symmetric_eigenvalues;

/// Largest gradient norm at which a Hessian is still meaningful.
pub const CRITICAL_TOL: f64 = 1e-8;
/// Default relative zero threshold for Hessian eigenvalues.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedParam {
    E11,
    E12,
}

impl fmt::Display for NamedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedParam::E11 => "E11",
            NamedParam::E12 => "E12",
        })
    }
}

impl FromStr for NamedParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E11" => Ok(NamedParam::E11),
            "E12" => Ok(NamedParam::E12),
            _ => Err(Error::Contract(format!("unknown height parameter `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightParam {
    matrix: HermitianMatrix,
    name: Option<NamedParam>,
}

impl HeightParam {
    pub fn named(name: NamedParam, field: Field, dim: usize) -> Result<Self> {
        let (a, b) = match name {
            NamedParam::E11 => (0, 0),
            NamedParam::E12 => (0, 1),
        };
        if b >= dim {
            return Err(Error::Contract(format!("{name} needs N ≥ {}", b + 1)));
        }
        Ok(Self {
            matrix: HermitianMatrix::elementary(field, dim, a, b),
            name: Some(name),
        })
    }

    pub fn e11(field: Field, dim: usize) -> Result<Self> {
        Self::named(NamedParam::E11, field, dim)
    }

    pub fn e12(field: Field, dim: usize) -> Result<Self> {
        Self::named(NamedParam::E12, field, dim)
    }

    pub fn custom(matrix: HermitianMatrix) -> Self {
        Self { matrix, name: None }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn name(&self) -> Option<NamedParam> {
        self.name
    }

    fn check(&self, a: &ProjectionPoint) -> Result<()> {
        if self.matrix.field() != a.field() {
            return Err(Error::FieldMismatch {
                left: self.matrix.field(),
                right: a.field(),
            });
        }
        if self.matrix.dim() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: self.matrix.dim(),
            });
        }
        Ok(())
    }
}

/// f_P(A) = ⟨A, P⟩.
pub fn height(p: &HeightParam, a: &ProjectionPoint) -> Result<f64> {
    p.check(a)?;
    a.matrix().inner(p.matrix())
}

/// (1/2)·Σ_τ ⟨ξ_τ, P⟩·ξ_τ over the tangent basis at the frame.
pub fn riemannian_gradient(p: &HeightParam, full: &FullFrame) -> Result<TangentVector> {
    let basis = tangent_basis(full);
    p.check(&basis.base)?;
    Ok(TangentVector {
        matrix: basis.project(p.matrix())?,
        label: None,
    })
}

/// Gradient in matrix form: A·P·(I−A) + (I−A)·P·A.
pub fn gradient_matrix(p: &HeightParam, a: &ProjectionPoint) -> Result<HermitianMatrix> {
    p.check(a)?;
    let am = a.matrix().matrix();
    let rest = &Matrix::identity(a.dim()) - am;
    let pm = p.matrix().matrix();
    let g = &(&(am * pm) * &rest) + &(&(&rest * pm) * am);
    Ok(HermitianMatrix::symmetrized(a.field(), &g))
}

pub fn gradient_norm(p: &HeightParam, a: &ProjectionPoint) -> Result<f64> {
    Ok(gradient_matrix(p, a)?.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CriticalClass {
    /// E11, f = 0: subspaces orthogonal to ẽ₁, a copy of G(n, N−1).
    FSub,
    /// E11, f = 1: subspaces containing ẽ₁, a copy of G(n−1, N−1).
    FContains,
    /// E12, g = 0: subspaces orthogonal to ẽ₁ and ẽ₂, a copy of G(n, N−2).
    GZeroSub,
    /// E12, g = 0: subspaces containing ẽ₁ and ẽ₂, a copy of G(n−2, N−2).
    GZeroContains,
    /// E12, g = −1: (ẽ₁−ẽ₂)/√2 plus G(n−1, N−2).
    GMinus,
    /// E12, g = +1: (ẽ₁+ẽ₂)/√2 plus G(n−1, N−2).
    GPlus,
    NotCritical,
}

impl CriticalClass {
    pub const CRITICAL: [CriticalClass; 6] = [
        CriticalClass::FSub,
        CriticalClass::FContains,
        CriticalClass::GZeroSub,
        CriticalClass::GZeroContains,
        CriticalClass::GMinus,
        CriticalClass::GPlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriticalClass::FSub => "F_SUB",
            CriticalClass::FContains => "F_CONTAINS",
            CriticalClass::GZeroSub => "G_ZERO_SUB",
            CriticalClass::GZeroContains => "G_ZERO_CONTAINS",
            CriticalClass::GMinus => "G_MINUS",
            CriticalClass::GPlus => "G_PLUS",
            CriticalClass::NotCritical => "NOT_CRITICAL",
        }
    }

    pub fn param(self) -> Option<NamedParam> {
        match self {
            CriticalClass::FSub | CriticalClass::FContains => Some(NamedParam::E11),
            CriticalClass::NotCritical => None,
            _ => Some(NamedParam::E12),
        }
    }

    /// Classes belonging to a named parameter.
    pub fn of_param(param: NamedParam) -> &'static [CriticalClass] {
        match param {
            NamedParam::E11 => &Self::CRITICAL[..2],
            NamedParam::E12 => &Self::CRITICAL[2..],
        }
    }

    /// Height value on the class.
    pub fn value(self) -> Option<f64> {
        match self {
            CriticalClass::FSub | CriticalClass::GZeroSub | CriticalClass::GZeroContains => {
                Some(0.0)
            }
            CriticalClass::FContains | CriticalClass::GPlus => Some(1.0),
            CriticalClass::GMinus => Some(-1.0),
            CriticalClass::NotCritical => None,
        }
    }

    /// Fixed unit vectors contained in every subspace of the class, the first
    /// free coordinate, and the (n', N') of the free Grassmannian factor.
    fn structure(self, n: usize, dim: usize) -> Result<(Vec<Vec<f64>>, usize, usize, usize)> {
        let empty = || Error::Contract(format!("class {self} is empty on G({n},{dim})"));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let need = |ok: bool| if ok { Ok(()) } else { Err(empty()) };
        match self {
            CriticalClass::FSub => {
                need(dim >= 1 && n < dim)?;
                Ok((vec![], 1, n, dim - 1))
            }
            CriticalClass::FContains => {
                need(n >= 1)?;
                Ok((vec![vec![1.0]], 1, n - 1, dim - 1))
            }
            CriticalClass::GZeroSub => {
                need(dim >= 2 && n + 2 <= dim)?;
                Ok((vec![], 2, n, dim - 2))
            }
            CriticalClass::GZeroContains => {
                need(dim >= 2 && n >= 2)?;
                Ok((vec![vec![1.0, 0.0], vec![0.0, 1.0]], 2, n - 2, dim - 2))
            }
            CriticalClass::GMinus | CriticalClass::GPlus => {
                need(dim >= 2 && n >= 1 && n < dim)?;
                let sign = if self == CriticalClass::GPlus {
                    1.0
                } else {
                    -1.0
                };
                Ok((vec![vec![s, sign * s]], 2, n - 1, dim - 2))
            }
            CriticalClass::NotCritical => {
                Err(Error::Contract("NOT_CRITICAL has no structure".into()))
            }
        }
    }

    /// (n', N') of the Grassmannian the class is a copy of.
    pub fn submanifold(self, n: usize, dim: usize) -> Result<(usize, usize)> {
        let (_, _, k, m) = self.structure(n, dim)?;
        Ok((k, m))
    }

    /// Predicted Morse index on G_F(n, N).
    pub fn predicted_index(self, field: Field, n: usize, dim: usize) -> Result<usize> {
        self.structure(n, dim)?;
        let c = field.c();
        Ok(match self {
            CriticalClass::FSub | CriticalClass::GMinus => 0,
            CriticalClass::FContains | CriticalClass::GZeroContains => c * (dim - n),
            CriticalClass::GZeroSub => c * n,
            CriticalClass::GPlus => c * (dim - 1),
            CriticalClass::NotCritical => unreachable!(),
        })
    }

    /// Predicted nullity: the real dimension of the critical submanifold.
    pub fn predicted_nullity(self, field: Field, n: usize, dim: usize) -> Result<usize> {
        let (k, m) = self.submanifold(n, dim)?;
        Ok(field.grassmann_dim(k, m))
    }

    /// A point of the class with a random free factor and a random frame.
    pub fn sample(self, field: Field, n: usize, dim: usize, seed: u64) -> Result<Frame> {
        let (fixed, offset, k, m) = self.structure(n, dim)?;
        let mut columns: Vec<Vec<Scalar>> = fixed
            .iter()
            .map(|v| {
                let mut col = vec![Scalar::ZERO; dim];
                for (x, &r) in col.iter_mut().zip(v) {
                    *x = Scalar::real(r);
                }
                col
            })
            .collect();
        if k > 0 {
            let free = random_point(field, k, m, seed)?;
            for v in free.columns() {
                let mut col = vec![Scalar::ZERO; dim];
                col[offset..].copy_from_slice(v);
                columns.push(col);
            }
        }
        let frame = Frame::new(field, dim, columns)?;
        if n == 0 {
            return Ok(frame);
        }
        frame.mul_right(&random_unitary(field, n, seed.wrapping_add(0x9e37_79b9))?)
    }
}

impl fmt::Display for CriticalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriticalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::CRITICAL
            .iter()
            .chain(std::iter::once(&CriticalClass::NotCritical))
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Contract(format!("unknown critical class `{s}`")))
    }
}

fn residual(a: &ProjectionPoint, v: &[Scalar], target: &[Scalar]) -> f64 {
    let av = a.apply(v);
    let diff: Vec<Scalar> = av.iter().zip(target).map(|(&x, &y)| x - y).collect();
    vec_norm(&diff)
}

/// Classifies a point for a named parameter.
///
/// Gradient above `tol` gives `NotCritical`; membership predicates are tested at
/// min(√tol, 1e−3). A small gradient with no matching class is a [`Error::ClassificationFailure`].
pub fn classify_critical(p: &HeightParam, a: &ProjectionPoint, tol: f64) -> Result<CriticalClass> {
    let name = p
        .name()
        .ok_or_else(|| Error::Contract("classification needs a named parameter".into()))?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Contract(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let grad_norm = gradient_norm(p, a)?;
    if grad_norm > tol {
        return Ok(CriticalClass::NotCritical);
    }
    let member_tol = tol.sqrt().min(1e-3);
    let dim = a.dim();
    let zero = vec![Scalar::ZERO; dim];
    let e1 = unit_vector(dim, 0);
    let fixed = |v: &[Scalar]| residual(a, v, v) <= member_tol;
    let killed = |v: &[Scalar]| residual(a, v, &zero) <= member_tol;
    let found = match name {
        NamedParam::E11 => {
            if killed(&e1) {
                Some(CriticalClass::FSub)
            } else if fixed(&e1) {
                Some(CriticalClass::FContains)
            } else {
                None
            }
        }
        NamedParam::E12 => {
            let e2 = unit_vector(dim, 1);
            let s = Scalar::real(std::f64::consts::FRAC_1_SQRT_2);
            let plus: Vec<Scalar> = e1.iter().zip(&e2).map(|(&x, &y)| (x + y) * s).collect();
            let minus: Vec<Scalar> = e1.iter().zip(&e2).map(|(&x, &y)| (x - y) * s).collect();
            if killed(&e1) && killed(&e2) {
                Some(CriticalClass::GZeroSub)
            } else if fixed(&e1) && fixed(&e2) {
                Some(CriticalClass::GZeroContains)
            } else if fixed(&plus) && killed(&minus) {
                Some(CriticalClass::GPlus)
            } else if fixed(&minus) && killed(&plus) {
                Some(CriticalClass::GMinus)
            } else {
                None
            }
        }
    };
    found.ok_or(Error::ClassificationFailure { grad_norm })
}

/// Real symmetric Hessian in the orthonormal tangent directions ξ_τ/√2.
#[derive(Clone, Debug, PartialEq)]
pub struct Hessian {
    pub size: usize,
    /// Row-major.
    pub entries: Vec<f64>,
}

impl Hessian {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.size + c]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.entries, self.size)
    }
}

/// Hessian of f_P at a critical point from second differences along retraction curves.
///
/// Diagonal entries use the direction u_τ itself; off-diagonal entries use the
/// polarization (Q(u_τ+u_σ) − Q(u_τ−u_σ))/4.
pub fn hessian_form(p: &HeightParam, full: &FullFrame, fd: FiniteDifference) -> Result<Hessian> {
    fd.validate()?;
    let a = full.point();
    let grad_norm = gradient_norm(p, &a)?;
    if grad_norm > CRITICAL_TOL {
        return Err(Error::NotCritical(grad_norm));
    }
    let basis = tangent_basis(full);
    let span = full.span();
    let dirs: Vec<HermitianMatrix> = basis
        .vectors
        .iter()
        .map(|x| x.matrix.scale(std::f64::consts::FRAC_1_SQRT_2))
        .collect();
    let q = |dir: &HermitianMatrix| -> Result<f64> {
        let mut err = None;
        let val = fd.second_derivative(|t| {
            match retract(&span, dir, t).and_then(|fr| height(p, &embed(&fr))) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        });
        err.map_or(Ok(val), Err)
    };
    let m = dirs.len();
    let mut entries = vec![0.0; m * m];
    for r in 0..m {
        entries[r * m + r] = q(&dirs[r])?;
        for c in r + 1..m {
            let up = q(&dirs[r].add(&dirs[c])?)?;
            let down = q(&dirs[r].sub(&dirs[c])?)?;
            let v = 0.25 * (up - down);
            entries[r * m + c] = v;
            entries[c * m + r] = v;
        }
    }
    Ok(Hessian { size: m, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum ZeroThreshold {
    /// Multiple of the largest |eigenvalue|.
    Relative(f64),
    Absolute(f64),
}

impl Default for ZeroThreshold {
    fn default() -> Self {
        ZeroThreshold::Relative(DEFAULT_ZERO_THRESHOLD)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseIndex {
    pub index: usize,
    pub nullity: usize,
    pub threshold: f64,
    pub eigenvalues: Vec<f64>,
    /// Some eigenvalue lies within 10% of the threshold.
    pub unstable: bool,
}

/// Default finite differences for Hessians: h = 1e−3 with Richardson extrapolation.
pub fn hessian_fd() -> FiniteDifference {
    FiniteDifference::default().with_richardson(true)
}

/// Counts negative and near-zero Hessian eigenvalues.
pub fn morse_index(
    p: &HeightParam,
    full: &FullFrame,
    fd: FiniteDifference,
    zero: ZeroThreshold,
) -> Result<MorseIndex> {
    let hess = hessian_form(p, full, fd)?;
    Ok(index_from_eigenvalues(hess.eigenvalues(), zero))
}

pub fn index_from_eigenvalues(eigenvalues: Vec<f64>, zero: ZeroThreshold) -> MorseIndex {
    let largest = eigenvalues.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let threshold = match zero {
        ZeroThreshold::Relative(r) => r * largest,
        ZeroThreshold::Absolute(t) => t,
    };
    let index = eigenvalues.iter().filter(|&&e| e < -threshold).count();
    let nullity = eigenvalues
        .iter()
        .filter(|&&e| e.abs() <= threshold)
        .count();
    let unstable = threshold > 0.0
        && eigenvalues
            .iter()
            .any(|e| (e.abs() - threshold).abs() <= 0.1 * threshold);
    MorseIndex {
        index,
        nullity,
        threshold,
        eigenvalues,
        unstable,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascent,
    Descent,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Ascent => 1.0,
            Direction::Descent => -1.0,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Ascent => "ascent",
            Direction::Descent => "descent",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ascent" => Ok(Direction::Ascent),
            "descent" => Ok(Direction::Descent),
            _ => Err(Error::Contract(format!("unknown direction `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub step: f64,
    pub stop_tol: f64,
    pub max_iter: usize,
    pub direction: Direction,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            stop_tol: 1e-8,
            max_iter: 10_000,
            direction: Direction::Descent,
        }
    }
}

impl FlowOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= 0.5) {
            return Err(Error::Contract(format!(
                "flow step {} outside (0, 0.5]",
                self.step
            )));
        }
        if self.stop_tol.is_nan() || self.stop_tol <= 0.0 {
            return Err(Error::Contract(format!(
                "stop tolerance must be positive, got {}",
                self.stop_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub start: MatrixJson,
    pub end: MatrixJson,
    pub iters: usize,
    pub f_final: f64,
    pub grad_norm: f64,
    pub converged: bool,
    pub class: Option<CriticalClass>,
    pub index: Option<usize>,
    pub nullity: Option<usize>,
    #[serde(skip)]
    pub end_frame: Frame,
    /// Height after every accepted step, starting with the initial value.
    #[serde(skip)]
    pub history: Vec<f64>,
}

impl FlowReport {
    pub fn end_point(&self) -> ProjectionPoint {
        embed(&self.end_frame)
    }
}

/// Gradient ascent or descent with the Gram–Schmidt retraction.
///
/// A step that moves f the wrong way by more than roundoff is retried at half
/// length. Running out of iterations is reported, not raised.
pub fn flow(p: &HeightParam, start: &Frame, opts: FlowOptions) -> Result<FlowReport> {
    opts.validate()?;
    let start_point = embed(start);
    let sign = opts.direction.sign();
    let mut frame = start.clone();
    let mut point = start_point.clone();
    let mut value = height(p, &point)?;
    let mut grad = gradient_matrix(p, &point)?;
    let mut history = vec![value];
    let mut iters = 0;
    while grad.norm() > opts.stop_tol && iters < opts.max_iter {
        let slack = 8.0 * f64::EPSILON * value.abs().max(1.0);
        let mut step = opts.step;
        let accepted = loop {
            let next = retract(&frame, &grad, sign * step)?;
            let next_point = embed(&next);
            let next_value = height(p, &next_point)?;
            if sign * (next_value - value) >= -slack {
                break Some((next, next_point, next_value));
            }
            step *= 0.5;
            if step < opts.step * 1e-12 {
                break None;
            }
        };
        let Some((next, next_point, next_value)) = accepted else {
            break;
        };
        frame = next;
        point = next_point;
        value = next_value;
        grad = gradient_matrix(p, &point)?;
        history.push(value);
        iters += 1;
    }
    let grad_norm = grad.norm();
    let converged = grad_norm <= opts.stop_tol;
    let (mut class, mut index, mut nullity) = (None, None, None);
    if p.name().is_some() {
        let cls = classify_critical(p, &point, opts.stop_tol)?;
        class = Some(cls);
        if cls != CriticalClass::NotCritical && grad_norm <= CRITICAL_TOL {
            let mi = morse_index(
                p,
                &complete_frame(&frame),
                hessian_fd(),
                ZeroThreshold::default(),
            )?;
            index = Some(mi.index);
            nullity = Some(mi.nullity);
        }
    }
    Ok(FlowReport {
        start: start_point.to_json(),
        end: point.to_json(),
        iters,
        f_final: value,
        grad_norm,
        converged,
        class,
        index,
        nullity,
        end_frame: frame,
        history,
    })
}

/// The gradient line of f = f_{E11} through a non-critical point:
/// e₁(t) = cos t·ẽ₁ + sin t·x with the other frame vectors fixed.
///
/// γ(0) contains ẽ₁ and γ(π/2) is orthogonal to it; f(γ(t)) = cos²t.
#[derive(Clone, Debug)]
pub struct GammaTrajectory {
    field: Field,
    dim: usize,
    x: Vec<Scalar>,
    rest: Vec<Vec<Scalar>>,
    start_time: f64,
}

impl GammaTrajectory {
    /// Rearranges the frame so that only its first vector meets ẽ₁.
    pub fn through(frame: &Frame) -> Result<Self> {
        let (field, dim) = (frame.field(), frame.dim());
        let a = embed(frame);
        let e1 = unit_vector(dim, 0);
        let v = a.apply(&e1);
        let f = v[0].re;
        if !(1e-12..=1.0 - 1e-12).contains(&f) {
            return Err(Error::Undefined(format!(
                "start point is critical for E11 (f = {f})"
            )));
        }
        let scale = Scalar::real(1.0 / vec_norm(&v));
        let first: Vec<Scalar> = v.iter().map(|&s| s * scale).collect();
        let mut x = first.clone();
        x[0] = Scalar::ZERO;
        let tail = Scalar::real(1.0 / vec_norm(&x));
        let x: Vec<Scalar> = x.iter().map(|&s| s * tail).collect();
        let rest = extend_orthonormal(
            std::slice::from_ref(&first),
            frame.columns(),
            frame.rank() - 1,
            1e-8,
        );
        if rest.len() + 1 != frame.rank() {
            return Err(Error::RankMismatch {
                expected: frame.rank(),
                found: rest.len() + 1,
            });
        }
        let start_time = first[0].re.clamp(-1.0, 1.0).acos();
        Ok(Self {
            field,
            dim,
            x,
            rest,
            start_time,
        })
    }

    /// t₀ with γ(t₀) equal to the starting point.
    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    fn first_at(&self, t: f64) -> Vec<Scalar> {
        let mut col: Vec<Scalar> = self.x.iter().map(|&s| s * t.sin()).collect();
        col[0] = Scalar::real(t.cos());
        col
    }

    pub fn frame_at(&self, t: f64) -> Frame {
        let mut columns = vec![self.first_at(t)];
        columns.extend(self.rest.iter().cloned());
        Frame::new(self.field, self.dim, columns).expect("rotation keeps the frame orthonormal")
    }

    pub fn point_at(&self, t: f64) -> ProjectionPoint {
        embed(&self.frame_at(t))
    }

    /// dγ/dt = e₁′ conj(e₁)^t + e₁ conj(e₁′)^t.
    pub fn velocity(&self, t: f64) -> HermitianMatrix {
        let e = self.first_at(t);
        let de = self.first_at(t + std::f64::consts::FRAC_PI_2);
        let m = &crate::algebra::outer(&de, Scalar::ONE, &e)
            + &crate::algebra::outer(&e, Scalar::ONE, &de);
        HermitianMatrix::symmetrized(self.field, &m)
    }
}
