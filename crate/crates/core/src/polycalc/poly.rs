use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::group::{Coord, GroupSpec};

/// Variable layout `(z_1..z_m, σ_1..σ_m2, t)` shared by every polynomial of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub m: usize,
    pub m2: usize,
}

impl Layout {
    pub fn of(spec: &GroupSpec) -> Self {
        Self {
            m: spec.m(),
            m2: spec.m2(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.m + self.m2 + 1
    }

    pub fn z(&self, i: usize) -> usize {
        debug_assert!(i < self.m);
        i
    }

    pub fn sigma(&self, l: usize) -> usize {
        debug_assert!(l < self.m2);
        self.m + l
    }

    pub fn time(&self) -> usize {
        self.m + self.m2
    }

    /// Parabolic weight: 1 for horizontal variables, 2 for vertical ones and time.
    pub fn weight(&self, var: usize) -> u32 {
        if var < self.m {
            1
        } else {
            2
        }
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Self(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, layout: &Layout) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(v, e)| layout.weight(v) * e)
            .sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    layout: Layout,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(layout: Layout) -> Self {
        Self {
            layout,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(layout: Layout, c: BigRational) -> Self {
        let mut p = Self::zero(layout);
        p.add_term(Monomial::one(layout.nvars()), c);
        p
    }

    pub fn from_int(layout: Layout, c: i64) -> Self {
        Self::constant(layout, BigRational::from_integer(c.into()))
    }

    /// The coordinate function of variable index `var`.
    pub fn var(layout: Layout, var: usize) -> Self {
        let mut exps = vec![0; layout.nvars()];
        exps[var] = 1;
        let mut p = Self::zero(layout);
        p.add_term(Monomial::from_exponents(exps), BigRational::one());
        p
    }

    pub fn monomial(layout: Layout, mono: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(layout);
        p.add_term(mono, c);
        p
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (mono, c) = self.terms.iter().next()?;
                (mono.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.layout);
        }
        Self {
            layout: self.layout,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(self.layout, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to variable index `var`.
    pub fn diff(&self, var: usize) -> Self {
        let mut out = Self::zero(self.layout);
        for (mono, c) in &self.terms {
            let e = mono.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = mono.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// Highest ordinary total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Decomposition into δ_λ-homogeneous parts, keyed by weighted degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly> {
        let mut parts: BTreeMap<u32, Poly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            parts
                .entry(mono.weighted_degree(&self.layout))
                .or_insert_with(|| Poly::zero(self.layout))
                .add_term(mono.clone(), c.clone());
        }
        parts
    }

    /// `Some(κ)` when every term has weighted degree κ; `None` for zero or mixed degree.
    pub fn weighted_homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(&self.layout));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// True when only horizontal variables occur.
    pub fn is_horizontal(&self) -> bool {
        (self.layout.m..self.layout.nvars()).all(|v| !self.depends_on(v))
    }

    /// Substitutes `var ↦ −var` for every flagged variable.
    pub fn reflect(&self, flip: &[bool]) -> Self {
        let mut out = Self::zero(self.layout);
        for (mono, c) in &self.terms {
            let odd: u32 = mono
                .0
                .iter()
                .zip(flip)
                .filter(|(_, &f)| f)
                .map(|(e, _)| e)
                .sum();
            out.add_term(mono.clone(), if odd % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Exact or floating evaluation at `(z, σ, t)`; `vals.len()` must equal the variable count.
    pub fn eval<T: Coord + num::One>(&self, vals: &[T]) -> T {
        assert_eq!(vals.len(), self.layout.nvars(), "evaluation point has wrong dimension");
        let mut acc = T::zero();
        for (mono, c) in &self.terms {
            let mut term = T::from_rational(c);
            for (v, &e) in vals.iter().zip(mono.0.iter()) {
                for _ in 0..e {
                    term = term * v.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Value at the group identity with `t = 0`.
    pub fn at_origin(&self) -> BigRational {
        self.coefficient(&Monomial::one(self.layout.nvars()))
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            nvars: self.layout.nvars(),
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| {
                    let powers = mono
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(v, &e)| (v, e as i32))
                        .collect();
                    (c.to_f64().unwrap_or(f64::NAN), powers)
                })
                .collect(),
        }
    }

    /// Largest absolute coefficient, as a rough size measure.
    pub fn max_abs_coefficient(&self) -> BigRational {
        self.terms
            .values()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    fn assert_same_layout(&self, other: &Self) {
        assert_eq!(self.layout, other.layout, "polynomials live on different groups");
    }
}

/// Floating-point evaluator for a fixed polynomial.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, vals: &[f64]) -> f64 {
        debug_assert_eq!(vals.len(), self.nvars);
        self.terms
            .iter()
            .map(|(c, powers)| {
                powers
                    .iter()
                    .fold(*c, |acc, &(v, e)| acc * vals[v].powi(e))
            })
            .sum()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_same_layout(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_same_layout(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same_layout(rhs);
        let mut out = Poly::zero(self.layout);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            layout: self.layout,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly { (&self).$method(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly { (&self).$method(rhs) }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly { self.$method(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    /// Panics on an empty iterator, which has no layout.
    fn sum<I: Iterator<Item = Poly>>(mut iter: I) -> Poly {
        let first = iter.next().expect("sum of an empty sequence of polynomials");
        iter.fold(first, |acc, p| acc + p)
    }
}
