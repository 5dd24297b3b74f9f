//! Poincaré polynomials of complex and quaternionic Grassmannians.
//!
//! Polynomials are in t with real-degree grading, so G_C(n, N) has only even
//! powers and G_H(n, N) only powers divisible by four. Three independent routes
//! compute the same polynomial: the two Morse-theoretic recursions and the count
//! of Schubert cells (partitions in an n×(N−n) box).

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::grassmann::complete_frame;
use crate::morse::{
    hessian_fd, morse_index, CriticalClass, HeightParam, NamedParam, ZeroThreshold,
};

/// Dense integer polynomial, trailing zeros trimmed. The zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = coeff;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, degree: usize) -> i64 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, i64::checked_sub)
    }

    fn combine(&self, other: &Self, op: fn(i64, i64) -> Option<i64>) -> Result<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| op(self.coeff(k), other.coeff(k)).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (a, &x) in self.coeffs.iter().enumerate() {
            for (b, &y) in other.coeffs.iter().enumerate() {
                let term = x.checked_mul(y).ok_or(Error::Overflow)?;
                coeffs[a + b] = coeffs[a + b].checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        Ok(Self::new(coeffs))
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn eval(&self, t: i64) -> Result<i64> {
        self.coeffs.iter().rev().try_fold(0i64, |acc, &c| {
            acc.checked_mul(t)
                .and_then(|v| v.checked_add(c))
                .ok_or(Error::Overflow)
        })
    }

    /// Sum of the coefficients (total Betti number).
    pub fn eval_at_one(&self) -> i64 {
        self.eval(1).expect("coefficient sum overflow")
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Nonzero coefficients as (degree, b).
    pub fn betti(&self) -> Vec<Betti> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(degree, &b)| Betti { degree, b })
            .collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            let body = match (k, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "t".to_string(),
                (1, m) => format!("{m}t"),
                (k, 1) => format!("t^{k}"),
                (k, m) => format!("{m}t^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Betti {
    pub degree: usize,
    pub b: i64,
}

fn require_perfect_field(field: Field) -> Result<usize> {
    match field {
        Field::R => Err(Error::Unsupported(
            "Poincaré polynomials are computed only over C and H".into(),
        )),
        _ => Ok(field.c()),
    }
}

fn require_range(n: usize, dim: usize) -> Result<()> {
    if n > dim {
        return Err(Error::Contract(format!(
            "need 0 ≤ n ≤ N, got n = {n}, N = {dim}"
        )));
    }
    Ok(())
}

type Memo = Mutex<HashMap<(usize, usize, usize), IntPolynomial>>;

fn memo() -> &'static Memo {
    static MEMO: std::sync::OnceLock<Memo> = std::sync::OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn recursion_f(c: usize, n: usize, dim: usize) -> Result<IntPolynomial> {
    if n == 0 || n == dim {
        return Ok(IntPolynomial::one());
    }
    if let Some(p) = memo().lock().expect("memo lock").get(&(c, n, dim)) {
        return Ok(p.clone());
    }
    let lower = recursion_f(c, n, dim - 1)?;
    let upper = recursion_f(c, n - 1, dim - 1)?.shift(c * (dim - n));
    let p = lower.checked_add(&upper)?;
    memo()
        .lock()
        .expect("memo lock")
        .insert((c, n, dim), p.clone());
    Ok(p)
}

/// P(n, N) = P(n, N−1) + t^{c(N−n)}·P(n−1, N−1), from the height function f_{E11}.
pub fn poincare_recursive_f(field: Field, n: usize, dim: usize) -> Result<IntPolynomial> {
    let c = require_perfect_field(field)?;
    require_range(n, dim)?;
    recursion_f(c, n, dim)
}

fn recursion_g(c: usize, n: usize, dim: usize) -> Result<IntPolynomial> {
    if n < 2 || dim - n < 2 {
        return recursion_f(c, n, dim);
    }
    let sub = recursion_g(c, n, dim - 2)?.shift(c * n);
    let contains = recursion_g(c, n - 2, dim - 2)?.shift(c * (dim - n));
    let pm = IntPolynomial::one().checked_add(&IntPolynomial::monomial(1, c * (dim - 1)))?;
    let sides = pm.checked_mul(&recursion_g(c, n - 1, dim - 2)?)?;
    sub.checked_add(&contains)?.checked_add(&sides)
}

/// P(n, N) = t^{cn}P(n, N−2) + t^{c(N−n)}P(n−2, N−2) + (1 + t^{c(N−1)})P(n−1, N−2),
/// from the height function f_{E12}. Requires n ≥ 2 and N−n ≥ 2; smaller
/// sub-arguments fall back to [`poincare_recursive_f`].
pub fn poincare_recursive_g(field: Field, n: usize, dim: usize) -> Result<IntPolynomial> {
    let c = require_perfect_field(field)?;
    require_range(n, dim)?;
    if n < 2 || dim - n < 2 {
        return Err(Error::Contract(format!(
            "need n ≥ 2 and N−n ≥ 2, got n = {n}, N = {dim}"
        )));
    }
    recursion_g(c, n, dim)
}

/// Σ over partitions 0 ≤ a₁ ≤ ⋯ ≤ a_n ≤ N−n of t^{c(a₁+⋯+a_n)}.
pub fn schubert_oracle(field: Field, n: usize, dim: usize) -> Result<IntPolynomial> {
    let c = require_perfect_field(field)?;
    require_range(n, dim)?;
    let width = dim - n;
    let mut counts = vec![0i64; n * width + 1];
    fn walk(remaining: usize, low: usize, width: usize, size: usize, counts: &mut [i64]) {
        if remaining == 0 {
            counts[size] += 1;
            return;
        }
        for a in low..=width {
            walk(remaining - 1, a, width, size + a, counts);
        }
    }
    walk(n, 0, width, 0, &mut counts);
    let mut coeffs = vec![0i64; c * n * width + 1];
    for (size, &k) in counts.iter().enumerate() {
        coeffs[c * size] = k;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// (t^{cn} − 1)·P(n, N−1) = (t^{c(N−n)} − 1)·P(n−1, N−1), exactly.
pub fn check_poincare_identity(field: Field, n: usize, dim: usize) -> Result<bool> {
    let c = require_perfect_field(field)?;
    if n < 1 || n + 1 > dim {
        return Err(Error::Contract(format!(
            "need 1 ≤ n ≤ N−1, got n = {n}, N = {dim}"
        )));
    }
    let factor = |k: usize| IntPolynomial::monomial(1, k).checked_sub(&IntPolynomial::one());
    let lhs = factor(c * n)?.checked_mul(&recursion_f(c, n, dim - 1)?)?;
    let rhs = factor(c * (dim - n))?.checked_mul(&recursion_f(c, n - 1, dim - 1)?)?;
    Ok(lhs == rhs)
}

/// Where Morse indices come from in [`morse_bott_assembly`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IndexSource {
    /// The predicted indices of each critical class.
    Predicted,
    /// Hessian eigenvalue counts at a sampled point of each class.
    Measured { seed: u64 },
}

/// Σ over the critical classes of a height function of t^{index}·P(class).
///
/// Both height functions are perfect over C and H, so the sum equals P(G_F(n, N)).
/// The E12 assembly requires n ≥ 2 and N−n ≥ 2.
pub fn morse_bott_assembly(
    field: Field,
    n: usize,
    dim: usize,
    param: NamedParam,
    source: IndexSource,
) -> Result<IntPolynomial> {
    let c = require_perfect_field(field)?;
    require_range(n, dim)?;
    let classes: Vec<CriticalClass> = match param {
        NamedParam::E11 => {
            if dim == 0 {
                return Err(Error::Contract("N must be positive".into()));
            }
            CriticalClass::of_param(param)
                .iter()
                .copied()
                .filter(|cls| cls.submanifold(n, dim).is_ok())
                .collect()
        }
        NamedParam::E12 => {
            if n < 2 || dim - n < 2 {
                return Err(Error::Contract(format!(
                    "E12 assembly needs n ≥ 2 and N−n ≥ 2, got n = {n}, N = {dim}"
                )));
            }
            CriticalClass::of_param(param).to_vec()
        }
    };
    let mut total = IntPolynomial::zero();
    for class in classes {
        let (k, m) = class.submanifold(n, dim)?;
        let index = match source {
            IndexSource::Predicted => class.predicted_index(field, n, dim)?,
            IndexSource::Measured { seed } => {
                let p = HeightParam::named(param, field, dim)?;
                let full = complete_frame(&class.sample(field, n, dim, seed)?);
                let mi = morse_index(&p, &full, hessian_fd(), ZeroThreshold::default())?;
                if mi.unstable {
                    return Err(Error::Contract(format!(
                        "unstable Hessian spectrum at {class} (threshold {:e})",
                        mi.threshold
                    )));
                }
                mi.index
            }
        };
        total = total.checked_add(&recursion_f(c, k, m)?.shift(index))?;
    }
    Ok(total)
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}
