//! Real, complex and quaternion scalars sharing one four-component kernel.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// The division algebra the matrices take values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    /// Real dimension of the field.
    pub const fn c(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    /// The units `1, i, j, k` that generate the field over the reals.
    pub fn units(self) -> &'static [Scalar] {
        const UNITS: [Scalar; 4] = [Scalar::ONE, Scalar::I, Scalar::J, Scalar::K];
        &UNITS[..self.c()]
    }

    /// The imaginary units of the field (empty for `R`).
    pub fn imaginary_units(self) -> &'static [Scalar] {
        &self.units()[1..]
    }

    /// True when every component outside the field vanishes.
    pub fn contains(self, s: Scalar) -> bool {
        let c = s.components();
        c[self.c()..].iter().all(|&x| x == 0.0)
    }

    /// Zeroes the components that do not belong to the field.
    pub fn restrict(self, s: Scalar) -> Scalar {
        let mut c = s.components();
        for x in &mut c[self.c()..] {
            *x = 0.0;
        }
        Scalar::from_components(c)
    }

    /// Real dimension of the space of N×N Hermitian matrices over the field.
    pub const fn hermitian_dim(self, n: usize) -> usize {
        n + self.c() * n * n.saturating_sub(1) / 2
    }

    /// Real dimension of the Grassmannian of n-planes in F^N.
    pub const fn grassmann_dim(self, n: usize, big_n: usize) -> usize {
        self.c() * n * (big_n - n)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            other => Err(format!("unknown field `{other}` (expected R, C or H)")),
        }
    }
}

/// A quaternion `re + i·i + j·j + k·k`; reals and complexes zero-fill the unused slots.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Scalar {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Scalar = Scalar::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Scalar = Scalar::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Scalar = Scalar::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Scalar = Scalar::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Self { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Self::new(re, 0.0, 0.0, 0.0)
    }

    pub const fn from_components(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub const fn components(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.i, -self.j, -self.k)
    }

    /// |u|², equal to Re(u·conj(u)).
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    /// Re(u·conj(v)), the real inner product of the components.
    pub fn real_dot(self, other: Self) -> f64 {
        self.re * other.re + self.i * other.i + self.j * other.j + self.k * other.k
    }

    pub fn is_imaginary(self) -> bool {
        self.re == 0.0
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = *self + o;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self = *self - o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.i, -self.j, -self.k)
    }
}

/// Hamilton product with `ij = k`. Not commutative.
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        let (a1, b1, c1, d1) = (self.re, self.i, self.j, self.k);
        let (a2, b2, c2, d2) = (o.re, o.i, o.j, o.k);
        Scalar::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;
    fn mul(self, s: f64) -> Scalar {
        self.scale(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.re, self.i, self.j, self.k)
    }
}
