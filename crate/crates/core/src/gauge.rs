//! The gauge `ρ = (|z|⁴ + 16|σ|²)^{1/4}` on groups of Heisenberg type, the spherical chart of
//! `H¹` and tensor Gauss quadrature over gauge balls and spheres.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{GaussJacobi, GaussLegendre};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{GroupSpec, Point};
use crate::polycalc::{left_fields, GaugeRing, Poly, RhoExpr};

/// `ρ(g)` for a group of Heisenberg type.
pub fn gauge(spec: &GroupSpec, g: &Point) -> Result<f64> {
    if !spec.is_h_type() {
        return Err(Error::Unsupported(format!(
            "{} is not of Heisenberg type; no closed-form gauge",
            spec.name()
        )));
    }
    if g.z.len() != spec.m() || g.sigma.len() != spec.m2() {
        return invalid("point does not match the group dimensions");
    }
    Ok(rho_raw(&g.z, &g.sigma))
}

fn rho_raw(z: &[f64], sigma: &[f64]) -> f64 {
    let z2: f64 = z.iter().map(|v| v * v).sum();
    let s2: f64 = sigma.iter().map(|v| v * v).sum();
    (z2 * z2 + 16.0 * s2).powf(0.25)
}

/// Outcome of the symbolic gauge checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeCheck {
    /// `Δ_H ρ^{2−Q} ≡ 0` away from the identity
    pub fundamental_solution: bool,
    /// `|∇_H ρ|² ρ² − |z|² ≡ 0`
    pub horizontal_gradient: bool,
}

impl GaugeCheck {
    pub fn passed(&self) -> bool {
        self.fundamental_solution && self.horizontal_gradient
    }
}

pub fn verify_gauge(spec: &GroupSpec) -> Result<GaugeCheck> {
    let ring = GaugeRing::new(spec)?;
    let layout = ring.layout();
    let q = spec.homogeneous_dimension() as i32;
    let fields = left_fields(spec);

    let gamma = ring.rho_pow(2 - q);
    let mut lap = RhoExpr::zero(layout);
    for x in &fields {
        lap = lap.add(&ring.apply(x, &ring.apply(x, &gamma)));
    }

    let rho = ring.rho_pow(1);
    let mut grad_sq = RhoExpr::zero(layout);
    for x in &fields {
        let d = ring.apply(x, &rho);
        grad_sq = grad_sq.add(&d.mul(&d));
    }
    let z2: Poly = (0..spec.m())
        .map(|i| Poly::var(layout, layout.z(i)).pow(2))
        .sum();
    let defect = grad_sq.mul(&ring.rho_pow(2)).sub(&RhoExpr::from_poly(z2));

    Ok(GaugeCheck {
        fundamental_solution: ring.is_zero(&lap),
        horizontal_gradient: ring.is_zero(&defect),
    })
}

/// Quadrature orders for the radial and the two angular directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureGrid {
    pub radial_order: usize,
    pub theta_order: usize,
    pub phi_order: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            radial_order: 64,
            theta_order: 64,
            phi_order: 64,
        }
    }
}

impl QuadratureGrid {
    pub fn uniform(order: usize) -> Self {
        Self {
            radial_order: order,
            theta_order: order,
            phi_order: order,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.radial_order < 2 || self.theta_order < 1 || self.phi_order < 2 {
            return invalid("quadrature orders too small");
        }
        if self.phi_order % 2 != 0 || self.radial_order % 2 != 0 {
            return invalid("radial and phi orders must be even");
        }
        Ok(())
    }
}

/// Which surface density is attached to the chart parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `|∇_Hρ|² dH/|∇ρ|`, density `cos θ / 4`
    Horizontal,
    /// `dH/|∇ρ|`, density `1/4`
    Plain,
}

#[derive(Clone, Copy, Debug)]
struct AngularNode {
    unit: [f64; 3],
    horizontal: f64,
    plain: f64,
}

/// Chart `Φ(θ, φ) = (√cosθ cosφ, √cosθ sinφ, sinθ/4)` of the unit gauge sphere in `H¹`,
/// with `dg = t³/4 dt dθ dφ` on `δ_t Φ`.
#[derive(Clone, Debug)]
pub struct GaugeChart {
    grid: QuadratureGrid,
    nodes: Vec<AngularNode>,
    legendre: Vec<(f64, f64)>,
}

impl GaugeChart {
    pub const Q: usize = 4;

    pub fn new(spec: &GroupSpec, grid: QuadratureGrid) -> Result<Self> {
        if spec.heisenberg_index() != Some(1) {
            return Err(Error::Unsupported(format!(
                "quadrature is only available on h1, not {}",
                spec.name()
            )));
        }
        grid.validate()?;
        let theta = rule_on(grid.theta_order, -PI / 2.0, PI / 2.0);
        let half = grid.phi_order / 2;
        let mut phi = rule_on(half, 0.0, PI);
        phi.extend(rule_on(half, PI, 2.0 * PI));
        let mut nodes = Vec::with_capacity(theta.len() * phi.len());
        for &(th, wt) in &theta {
            for &(ph, wp) in &phi {
                let unit = Self::point_raw(th, ph);
                nodes.push(AngularNode {
                    unit,
                    horizontal: Self::weight(th) * wt * wp,
                    plain: 0.25 * wt * wp,
                });
            }
        }
        Ok(Self {
            grid,
            nodes,
            legendre: rule_on(grid.radial_order, 0.0, 1.0),
        })
    }

    pub fn grid(&self) -> QuadratureGrid {
        self.grid
    }

    fn point_raw(theta: f64, phi: f64) -> [f64; 3] {
        let r = theta.cos().max(0.0).sqrt();
        [r * phi.cos(), r * phi.sin(), theta.sin() / 4.0]
    }

    pub fn point(theta: f64, phi: f64) -> Point {
        let [x, y, s] = Self::point_raw(theta, phi);
        Point::new(vec![x, y], vec![s])
    }

    /// Density of the horizontal surface measure in chart parameters.
    pub fn weight(theta: f64) -> f64 {
        theta.cos() / 4.0
    }

    /// `∬ F(δ_t Φ) · density dθ dφ`; `f` receives `(x, y, σ, 0)`.
    pub fn angular<F>(&self, f: &F, t: f64, measure: Measure) -> f64
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
    {
        let t2 = t * t;
        let mut acc = 0.0;
        for n in &self.nodes {
            let w = match measure {
                Measure::Horizontal => n.horizontal,
                Measure::Plain => n.plain,
            };
            acc += w * f(&[t * n.unit[0], t * n.unit[1], t2 * n.unit[2], 0.0]);
        }
        acc
    }

    /// Angular moments of the weighted homogeneous parts of a polynomial.
    pub fn moments(&self, p: &Poly, measure: Measure) -> PolyProfile {
        let parts = p
            .homogeneous_parts()
            .into_iter()
            .map(|(d, part)| {
                let c = part.compile();
                (d as i32, self.angular(&|v: &[f64]| c.eval(v), 1.0, measure))
            })
            .collect();
        PolyProfile { parts }
    }

    pub fn total_weight(&self, measure: Measure) -> f64 {
        self.angular(&|_: &[f64]| 1.0, 1.0, measure)
    }

    /// `∫₀¹ s^β g(r s) ds` for `β > −1`, Gauss–Jacobi in `s`.
    pub fn radial_moment(&self, profile: &dyn Profile, beta: f64, r: f64) -> Result<f64> {
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(Error::NonIntegrable(format!("radial exponent {beta} is not above -1")));
        }
        let pairs: Vec<(f64, f64)> = if beta == 0.0 {
            self.legendre.clone()
        } else {
            jacobi_on_unit(self.grid.radial_order, beta)?
        };
        let vals: Vec<f64> = pairs
            .par_iter()
            .map(|&(s, w)| w * profile.at(r * s))
            .collect();
        Ok(vals.iter().sum())
    }

    /// `∫_{S_r} h` against the chosen surface measure.
    pub fn surface_integral<F>(&self, h: &F, r: f64, measure: Measure) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
    {
        check_radius(r)?;
        Ok(r.powi(Self::Q as i32 - 1) * self.angular(h, r, measure))
    }

    /// `∫_{B_r} h dg`. Integrable singularities at the identity are located from the
    /// radial decay of the profile and absorbed into the Jacobi weight.
    pub fn ball_integral<F>(&self, h: &F, r: f64) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64 + Sync + ?Sized,
    {
        check_radius(r)?;
        let q = Self::Q as i32;
        let radial = |t: f64| t.powi(q - 1) * self.angular(h, t, Measure::Plain);
        let beta = singular_exponent(&radial, r)?;
        let profile = FnProfile(|t: f64| {
            if t == 0.0 {
                0.0
            } else {
                radial(t) * t.powf(-beta)
            }
        });
        Ok(r.powf(1.0 + beta) * self.radial_moment(&profile, beta, r)?)
    }

    /// `∫_{B_r} F ρ^{α−Q} |∇_Hρ|² dg = r^α ∫₀¹ s^{α−1} A(rs) ds` with `A` the horizontal angular
    /// profile of `F`.
    pub fn weighted_ball_integral(&self, profile: &dyn Profile, alpha: f64, r: f64) -> Result<f64> {
        check_radius(r)?;
        if !(alpha > 0.0) {
            return Err(Error::NonIntegrable(format!("alpha = {alpha} must be positive")));
        }
        Ok(r.powf(alpha) * self.radial_moment(profile, alpha - 1.0, r)?)
    }

    /// Angular profile `t ↦ ∬ F(δ_tΦ) · density` of a pointwise integrand.
    pub fn profile_of<'a, F>(&'a self, f: &'a F, measure: Measure) -> PointProfile<'a, F>
    where
        F: Fn(&[f64]) -> f64 + Sync + ?Sized,
    {
        PointProfile {
            chart: self,
            f,
            measure,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        invalid(format!("radius must be positive and finite, got {r}"))
    }
}

fn rule_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n).expect("validated order");
    let half = 0.5 * (b - a);
    GaussLegendre::new(n)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (a + half * (x + 1.0), half * w))
        .collect()
}

/// Nodes and weights for `∫₀¹ s^β g(s) ds`. Even orders only: the library pins the middle
/// node of odd rules to zero, which is wrong for asymmetric weights.
fn jacobi_on_unit(n: usize, beta: f64) -> Result<Vec<(f64, f64)>> {
    let deg = NonZeroUsize::new(n).expect("validated order");
    let b = beta
        .try_into()
        .map_err(|_| Error::NonIntegrable(format!("radial exponent {beta}")))?;
    let rule = GaussJacobi::new(deg, 0.0.try_into().expect("zero is valid"), b);
    let scale = 0.5f64.powf(1.0 + beta);
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), w * scale))
        .collect())
}

/// Leading power of the radial integrand near zero, or 0 when it is bounded.
fn singular_exponent(radial: &dyn Fn(f64) -> f64, r: f64) -> Result<f64> {
    let (t1, t2) = (r * 1e-4, r * 1e-8);
    let (q1, q2) = (radial(t1), radial(t2));
    if !q1.is_finite() || !q2.is_finite() {
        return Err(Error::NonIntegrable("integrand is not finite near the identity".into()));
    }
    if q1 == 0.0 || q2 == 0.0 || q1.signum() != q2.signum() {
        return Ok(0.0);
    }
    let p = (q1 / q2).ln() / (t1 / t2).ln();
    if p <= -1.0 + 1e-3 {
        return Err(Error::NonIntegrable(format!(
            "radial integrand behaves like t^{p:.3} near the identity"
        )));
    }
    if p < -1e-6 {
        Ok((p * 1e6).round() / 1e6)
    } else {
        Ok(0.0)
    }
}

/// A radial profile `t ↦ A(t)`.
pub trait Profile: Sync {
    fn at(&self, t: f64) -> f64;
}

/// `A(t) = Σ_d M_d t^d` from angular moments of homogeneous parts.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyProfile {
    parts: Vec<(i32, f64)>,
}

impl PolyProfile {
    pub fn parts(&self) -> &[(i32, f64)] {
        &self.parts
    }

    /// Moment of the degree-`d` part.
    pub fn moment(&self, d: i32) -> f64 {
        self.parts
            .iter()
            .find(|(k, _)| *k == d)
            .map_or(0.0, |(_, m)| *m)
    }
}

impl Profile for PolyProfile {
    fn at(&self, t: f64) -> f64 {
        self.parts.iter().map(|(d, m)| m * t.powi(*d)).sum()
    }
}

pub struct PointProfile<'a, F: ?Sized> {
    chart: &'a GaugeChart,
    f: &'a F,
    measure: Measure,
}

impl<F> Profile for PointProfile<'_, F>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    fn at(&self, t: f64) -> f64 {
        self.chart.angular(self.f, t, self.measure)
    }
}

pub struct FnProfile<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> Profile for FnProfile<F> {
    fn at(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}
