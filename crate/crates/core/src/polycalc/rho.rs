//! Expressions `Σ_k P_k ρ^k` with polynomial coefficients and integer powers of the
//! Heisenberg-type gauge `ρ = (|z|⁴ + 16|σ|²)^{1/4}`.
//!
//! Horizontal fields act through `X ρ = X(u) / (4ρ³)` with `u = ρ⁴`, so the set of
//! such expressions is closed under differentiation. Reduction modulo `ρ⁴ = u`
//! brings every expression to `ρ^{4s} (A_0 + A_1 ρ + A_2 ρ² + A_3 ρ³)`; since `u` is
//! not a square, `X⁴ − u` is irreducible and the expression vanishes exactly when
//! all four `A_r` are the zero polynomial.

use std::collections::BTreeMap;

use num::{BigRational, ToPrimitive};

use super::field::VectorField;
use super::poly::{Layout, Poly};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoExpr {
    layout: Layout,
    terms: BTreeMap<i32, Poly>,
}

impl RhoExpr {
    pub fn zero(layout: Layout) -> Self {
        Self {
            layout,
            terms: BTreeMap::new(),
        }
    }

    /// `p · ρ^k`
    pub fn term(p: Poly, k: i32) -> Self {
        let mut e = Self::zero(p.layout());
        e.add_term(k, p);
        e
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::term(p, 0)
    }

    fn add_term(&mut self, k: i32, p: Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(|| Poly::zero(self.layout));
        *slot = &*slot + &p;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Poly)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            layout: self.layout,
            terms: self.terms.iter().map(|(k, p)| (*k, -p)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.layout);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &other.terms {
                out.add_term(ka + kb, pa * pb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.layout);
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(c));
        }
        out
    }

    /// Floating evaluation at `(z, σ, t)` away from the origin.
    pub fn eval(&self, vals: &[f64], rho: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, p)| p.compile().eval(vals) * rho.powi(*k))
            .sum()
    }
}

/// Canonical representative `ρ^{4·shift} Σ_{r<4} parts[r] ρ^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub shift: i32,
    pub parts: [Poly; 4],
}

impl Reduced {
    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Poly::is_zero)
    }
}

/// Differential algebra generated by `z`, `σ`, `ρ^{±1}` on a group of Heisenberg type.
#[derive(Clone, Debug)]
pub struct GaugeRing {
    layout: Layout,
    u: Poly,
}

impl GaugeRing {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        if !spec.is_h_type() {
            return Err(Error::Unsupported(format!(
                "{} is not of Heisenberg type; no closed-form gauge",
                spec.name()
            )));
        }
        let layout = Layout::of(spec);
        let z2 = (0..spec.m())
            .map(|i| Poly::var(layout, layout.z(i)).pow(2))
            .fold(Poly::zero(layout), |a, b| a + b);
        let s2 = (0..spec.m2())
            .map(|l| Poly::var(layout, layout.sigma(l)).pow(2))
            .fold(Poly::zero(layout), |a, b| a + b);
        Ok(Self {
            layout,
            u: z2.pow(2) + s2.scale_int(16),
        })
    }

    /// `u = ρ⁴ = |z|⁴ + 16|σ|²`.
    pub fn rho_fourth(&self) -> &Poly {
        &self.u
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn rho_pow(&self, k: i32) -> RhoExpr {
        RhoExpr::term(Poly::from_int(self.layout, 1), k)
    }

    /// `V(P ρ^k) = V(P) ρ^k + (k/4) P V(u) ρ^{k−4}`.
    pub fn apply(&self, field: &VectorField, e: &RhoExpr) -> RhoExpr {
        let vu = field.apply(&self.u);
        let mut out = RhoExpr::zero(self.layout);
        for (&k, p) in &e.terms {
            out.add_term(k, field.apply(p));
            if k != 0 {
                let c = BigRational::new(k.into(), 4.into());
                out.add_term(k - 4, (p * &vu).scale(&c));
            }
        }
        out
    }

    pub fn reduce(&self, e: &RhoExpr) -> Reduced {
        let zero = Poly::zero(self.layout);
        let mut parts = [zero.clone(), zero.clone(), zero.clone(), zero];
        let Some(kmin) = e.terms.keys().next().copied() else {
            return Reduced { shift: 0, parts };
        };
        let shift = kmin.div_euclid(4);
        for (&k, p) in &e.terms {
            let rel = k - 4 * shift;
            let q = (rel / 4).to_u32().expect("nonnegative after shift");
            let r = (rel % 4) as usize;
            parts[r] = &parts[r] + &(p * &self.u.pow(q));
        }
        Reduced { shift, parts }
    }

    pub fn is_zero(&self, e: &RhoExpr) -> bool {
        self.reduce(e).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::field::left_field;
    use crate::polycalc::parse::parse_poly;

    #[test]
    fn reduction_uses_the_quartic_relation() {
        let spec = GroupSpec::heisenberg(1).unwrap();
        let ring = GaugeRing::new(&spec).unwrap();
        let u = ring.rho_fourth().clone();
        // ρ⁴ − u = 0 and ρ^{-4}·u − 1 = 0
        let e = ring.rho_pow(4).sub(&RhoExpr::from_poly(u.clone()));
        assert!(ring.is_zero(&e));
        let e = RhoExpr::term(u, -4).sub(&ring.rho_pow(0));
        assert!(ring.is_zero(&e));
        assert!(!ring.is_zero(&ring.rho_pow(2)));
    }

    #[test]
    fn derivative_of_rho_matches_numeric() {
        let spec = GroupSpec::heisenberg(1).unwrap();
        let ring = GaugeRing::new(&spec).unwrap();
        let x1 = left_field(&spec, 1).unwrap();
        let d = ring.apply(&x1, &ring.rho_pow(1));
        let pt = [0.3, -0.7, 0.2, 0.0];
        let rho = |p: &[f64]| (((p[0] * p[0] + p[1] * p[1]).powi(2)) + 16.0 * p[2] * p[2]).powf(0.25);
        // X_1 = ∂_x − (y/2)∂_σ evaluated by central differences
        let h = 1e-6;
        let shifted = |s: f64| {
            let q = [pt[0] + s, pt[1], pt[2] - s * pt[1] / 2.0, 0.0];
            rho(&q)
        };
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        assert!((d.eval(&pt, rho(&pt)) - fd).abs() < 1e-8);
    }

    #[test]
    fn non_h_type_is_rejected() {
        let f3 = GroupSpec::free_step2(3).unwrap();
        assert!(GaugeRing::new(&f3).is_err());
        let h2 = GroupSpec::heisenberg(2).unwrap();
        let ring = GaugeRing::new(&h2).unwrap();
        assert_eq!(ring.rho_fourth(), &parse_poly("(z1^2 + z2^2 + z3^2 + z4^2)^2 + 16*s^2", &h2).unwrap());
    }
}
