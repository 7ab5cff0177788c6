//! Step-2 Carnot groups in exponential coordinates `g = (z, σ)`.
//!
//! A group is fixed by its horizontal dimension `m` and skew-symmetric structure
//! matrices `B^ℓ`, `ℓ = 1..m2`. The group law is
//!
//! ```text
//! (z, σ) ∘ (z', σ') = (z + z', σ_ℓ + σ'_ℓ + ½ zᵀ B^ℓ z')
//! ```
//!
//! so that the left-invariant horizontal fields are
//! `X_i = ∂_{z_i} − ½ Σ_ℓ (B^ℓ z)_i ∂_{σ_ℓ}` and `[X_i, X_j] = Σ_ℓ b^ℓ_{ij} ∂_{σ_ℓ}`.
//! For the first Heisenberg group this reproduces `X_1 = ∂_x − (y/2)∂_σ`,
//! `X_2 = ∂_y + (x/2)∂_σ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::linalg;

pub type Matrix = Vec<Vec<BigRational>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    m: usize,
    m2: usize,
    b: Vec<Matrix>,
    name: String,
}

impl GroupSpec {
    /// Validates skewness and linear independence of the structure matrices.
    pub fn new(m: usize, b: Vec<Matrix>) -> Result<Self> {
        Self::named(m, b, "custom")
    }

    fn named(m: usize, b: Vec<Matrix>, name: &str) -> Result<Self> {
        if m < 2 {
            return invalid(format!("horizontal dimension must be at least 2, got {m}"));
        }
        if b.is_empty() {
            return invalid("at least one structure matrix is required");
        }
        for (l, mat) in b.iter().enumerate() {
            if mat.len() != m || mat.iter().any(|row| row.len() != m) {
                return invalid(format!("structure matrix {} is not {m}x{m}", l + 1));
            }
            for i in 0..m {
                for j in 0..m {
                    if mat[i][j] != -mat[j][i].clone() {
                        return invalid(format!(
                            "structure matrix {} is not skew-symmetric at ({}, {})",
                            l + 1,
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
        let flat: Vec<Vec<BigRational>> = b.iter().map(|mat| mat.concat()).collect();
        if linalg::rank(&flat, m * m) != b.len() {
            return invalid("structure matrices are linearly dependent");
        }
        Ok(Self {
            m,
            m2: b.len(),
            b,
            name: name.to_string(),
        })
    }

    /// The Heisenberg group `H^n`: `m = 2n`, one vertical direction, `B = [[0, I], [−I, 0]]`.
    pub fn heisenberg(n: usize) -> Result<Self> {
        if n < 1 {
            return invalid("Heisenberg group index must be at least 1");
        }
        let m = 2 * n;
        let mut mat = zero_matrix(m);
        for i in 0..n {
            mat[i][n + i] = BigRational::one();
            mat[n + i][i] = -BigRational::one();
        }
        Self::named(m, vec![mat], &format!("h{n}"))
    }

    /// The free step-2 group on `m` generators: one vertical direction per pair `i < j`.
    pub fn free_step2(m: usize) -> Result<Self> {
        if m < 2 {
            return invalid("free step-2 group needs at least 2 generators");
        }
        let mut b = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let mut mat = zero_matrix(m);
                mat[i][j] = BigRational::one();
                mat[j][i] = -BigRational::one();
                b.push(mat);
            }
        }
        Self::named(m, b, &format!("free{m}"))
    }

    /// Built-in groups: `h1`, `h2`, ... and `free2`, `free3`, ...
    pub fn builtin(name: &str) -> Result<Self> {
        let parse_index = |rest: &str| rest.parse::<usize>().ok();
        if let Some(n) = name.strip_prefix("free").and_then(parse_index) {
            return Self::free_step2(n);
        }
        if let Some(n) = name.strip_prefix('h').and_then(parse_index) {
            return Self::heisenberg(n);
        }
        invalid(format!("unknown built-in group '{name}'"))
    }

    /// Parses `{"m": int, "m2": int, "B": [[["p/q", ...], ...], ...]}`.
    ///
    /// Entries may also be JSON integers.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let m = doc
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidArgument("missing integer field 'm'".into()))?
            as usize;
        let m2 = doc
            .get("m2")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidArgument("missing integer field 'm2'".into()))?
            as usize;
        let mats = doc
            .get("B")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidArgument("missing array field 'B'".into()))?;
        if mats.len() != m2 {
            return invalid(format!("'B' holds {} matrices but m2 = {m2}", mats.len()));
        }
        let mut b = Vec::with_capacity(m2);
        for mat in mats {
            let rows = mat
                .as_array()
                .ok_or_else(|| Error::InvalidArgument("matrix must be an array of rows".into()))?;
            let mut parsed = Vec::with_capacity(rows.len());
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| Error::InvalidArgument("row must be an array".into()))?;
                parsed.push(row.iter().map(rational_entry).collect::<Result<Vec<_>>>()?);
            }
            b.push(parsed);
        }
        Self::named(m, b, "custom")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    /// Homogeneous dimension `Q = m + 2·m2`.
    pub fn homogeneous_dimension(&self) -> usize {
        self.m + 2 * self.m2
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &[Matrix] {
        &self.b
    }

    /// `b^ℓ_{ij}` with zero-based indices.
    pub fn b(&self, l: usize, i: usize, j: usize) -> &BigRational {
        &self.b[l][i][j]
    }

    /// `n` when this is exactly the built-in `H^n` structure.
    pub fn heisenberg_index(&self) -> Option<usize> {
        if self.m2 != 1 || self.m % 2 != 0 {
            return None;
        }
        let n = self.m / 2;
        let reference = Self::heisenberg(n).ok()?;
        (reference.b == self.b).then_some(n)
    }

    /// Heisenberg type: every `B^ℓ` squares to `−I` and distinct ones anticommute.
    pub fn is_h_type(&self) -> bool {
        let m = self.m;
        let prod = |a: &Matrix, c: &Matrix| -> Matrix {
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (0..m).map(|k| &a[i][k] * &c[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        for (l, a) in self.b.iter().enumerate() {
            let sq = prod(a, a);
            for (i, row) in sq.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let expected = if i == j { -BigRational::one() } else { BigRational::zero() };
                    if *v != expected {
                        return false;
                    }
                }
            }
            for c in &self.b[l + 1..] {
                let ac = prod(a, c);
                let ca = prod(c, a);
                if ac.iter().flatten().zip(ca.iter().flatten()).any(|(x, y)| !(x + y).is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn identity<T: Coord>(&self) -> Point<T> {
        Point {
            z: vec![T::zero(); self.m],
            sigma: vec![T::zero(); self.m2],
        }
    }

    fn check<T>(&self, g: &Point<T>) -> Result<()> {
        if g.z.len() != self.m || g.sigma.len() != self.m2 {
            return invalid(format!(
                "point has dimensions ({}, {}), group expects ({}, {})",
                g.z.len(),
                g.sigma.len(),
                self.m,
                self.m2
            ));
        }
        Ok(())
    }

    /// Group law `(z + z', σ_ℓ + σ'_ℓ + ½ zᵀ B^ℓ z')`.
    pub fn multiply<T: Coord>(&self, g: &Point<T>, h: &Point<T>) -> Result<Point<T>> {
        self.check(g)?;
        self.check(h)?;
        let z = g.z.iter().zip(&h.z).map(|(a, b)| a.clone() + b.clone()).collect();
        let half = T::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));
        let sigma = (0..self.m2)
            .map(|l| {
                let area = self.bilinear(l, &g.z, &h.z);
                g.sigma[l].clone() + h.sigma[l].clone() + half.clone() * area
            })
            .collect();
        Ok(Point { z, sigma })
    }

    /// `zᵀ B^ℓ z'`.
    pub fn bilinear<T: Coord>(&self, l: usize, z: &[T], zp: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.m {
            for j in 0..self.m {
                let b = &self.b[l][i][j];
                if !b.is_zero() {
                    acc = acc + T::from_rational(b) * z[i].clone() * zp[j].clone();
                }
            }
        }
        acc
    }

    pub fn inverse<T: Coord>(&self, g: &Point<T>) -> Result<Point<T>> {
        self.check(g)?;
        Ok(Point {
            z: g.z.iter().map(|v| -v.clone()).collect(),
            sigma: g.sigma.iter().map(|v| -v.clone()).collect(),
        })
    }

    /// Anisotropic dilation `δ_λ(z, σ) = (λz, λ²σ)`.
    pub fn dilate<T: Coord>(&self, lambda: &T, g: &Point<T>) -> Result<Point<T>> {
        self.check(g)?;
        if *lambda <= T::zero() {
            return invalid("dilation factor must be positive");
        }
        let sq = lambda.clone() * lambda.clone();
        Ok(Point {
            z: g.z.iter().map(|v| lambda.clone() * v.clone()).collect(),
            sigma: g.sigma.iter().map(|v| sq.clone() * v.clone()).collect(),
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (m = {}, m2 = {}, Q = {})",
            self.name,
            self.m,
            self.m2,
            self.homogeneous_dimension()
        )
    }
}

fn zero_matrix(m: usize) -> Matrix {
    vec![vec![BigRational::zero(); m]; m]
}

fn rational_entry(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| Error::InvalidArgument(format!("entry {n} is not an integer or \"p/q\""))),
        other => invalid(format!("entry {other} is not an integer or \"p/q\"")),
    }
}

/// Parses `"p"` or `"p/q"` with integer `p`, nonzero `q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("'{s}' is not a rational literal"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Scalars usable as group coordinates: exact rationals and `f64`.
pub trait Coord:
    Clone
    + PartialOrd
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &BigRational) -> Self;
}

impl Coord for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Coord for f64 {
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

/// Group point in logarithmic coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T = f64> {
    pub z: Vec<T>,
    pub sigma: Vec<T>,
}

impl<T: Clone> Point<T> {
    pub fn new(z: Vec<T>, sigma: Vec<T>) -> Self {
        Self { z, sigma }
    }

    /// Coordinates in the order `(z_1..z_m, σ_1..σ_m2)`.
    pub fn coords(&self) -> Vec<T> {
        self.z.iter().chain(&self.sigma).cloned().collect()
    }
}
