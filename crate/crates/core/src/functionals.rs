//! Gauge-ball functionals on `H¹`: `𝓜_α`, `ω_α`, `𝓓_α`, the two-phase product, surface
//! averages, the mean value formula, Dirichlet identity, frequency and its two-term form.

use num::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gauge::{FnProfile, GaugeChart, Measure, PolyProfile, Profile, QuadratureGrid};
use crate::group::GroupSpec;
use crate::polycalc::{
    carre_du_champ, dilation_field, horizontal_laplacian, is_harmonic, left_fields, theta_field,
    CompiledPoly, GaugeRing, Poly, RhoExpr, Side,
};

/// Sign of the phase `f± = max(±f, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Plus,
    Minus,
}

impl Phase {
    fn sign(self) -> f64 {
        match self {
            Phase::Plus => 1.0,
            Phase::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AcfValue {
    pub plus: f64,
    pub minus: f64,
    pub product: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirichletReport {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrequencyReport {
    /// energy form `r ∫_{B_r}|∇_H f|² / ∫_{S_r} f²`
    pub energy_form: f64,
    /// boundary form `∫_{S_r} f Zf / ∫_{S_r} f²`
    pub boundary_form: f64,
    pub difference: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthogonalityDefect {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub grid: Vec<f64>,
    pub products: Vec<f64>,
    pub plus_at_one: f64,
    pub minus_at_one: f64,
    /// Smallest `C` with `product(r) ≤ C (1 + 𝓓(f₊,1) + 𝓓(f₋,1))` on the grid.
    pub smallest_c: f64,
}

/// Quadrature context on `H¹`.
#[derive(Clone, Debug)]
pub struct Functionals {
    spec: GroupSpec,
    chart: GaugeChart,
}

impl Functionals {
    pub fn new(spec: &GroupSpec, grid: QuadratureGrid) -> Result<Self> {
        Ok(Self {
            spec: spec.clone(),
            chart: GaugeChart::new(spec, grid)?,
        })
    }

    pub fn h1() -> Self {
        Self::new(&GroupSpec::heisenberg(1).expect("h1"), QuadratureGrid::default()).expect("h1 chart")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn chart(&self) -> &GaugeChart {
        &self.chart
    }

    fn q(&self) -> f64 {
        GaugeChart::Q as f64
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if alpha > 0.0 && alpha <= self.q() {
            Ok(())
        } else {
            invalid(format!("alpha must lie in (0, {}], got {alpha}", self.q()))
        }
    }

    fn horizontal(&self, p: &Poly) -> PolyProfile {
        self.chart.moments(p, Measure::Horizontal)
    }

    /// `r^{−α} ∫_{B_r} ρ^{α−Q} |∇_Hρ|² dg`.
    pub fn omega_at(&self, alpha: f64, r: f64) -> Result<f64> {
        let one = Poly::from_int(crate::polycalc::Layout::of(&self.spec), 1);
        self.m_alpha(&one, alpha, r)
    }

    pub fn omega(&self, alpha: f64) -> Result<f64> {
        self.omega_at(alpha, 1.0)
    }

    /// `𝓜_α(f, r) = r^{−α} ∫_{B_r} f ρ^{α−Q} |∇_Hρ|² dg`.
    pub fn m_alpha(&self, f: &Poly, alpha: f64, r: f64) -> Result<f64> {
        self.check_alpha(alpha)?;
        self.m_alpha_profile(&self.horizontal(f), alpha, r)
    }

    fn m_alpha_profile(&self, profile: &dyn Profile, alpha: f64, r: f64) -> Result<f64> {
        Ok(self.chart.weighted_ball_integral(profile, alpha, r)? / r.powf(alpha))
    }

    /// `𝓓_α(f, r)`: `𝓜_α` of the left or right carré du champ.
    pub fn d_alpha(&self, f: &Poly, alpha: f64, r: f64, side: Side) -> Result<f64> {
        self.m_alpha(&carre_du_champ(&self.spec, f, side), alpha, r)
    }

    /// `𝓓_α(f±, r)`, the carré integrated over the region where `±f > 0`.
    pub fn d_alpha_phase(&self, f: &Poly, phase: Phase, alpha: f64, r: f64, side: Side) -> Result<f64> {
        self.check_alpha(alpha)?;
        let carre = carre_du_champ(&self.spec, f, side).compile();
        let fc = f.compile();
        let s = phase.sign();
        let h = move |v: &[f64]| if s * fc.eval(v) > 0.0 { carre.eval(v) } else { 0.0 };
        let profile = self.chart.profile_of(&h, Measure::Horizontal);
        self.m_alpha_profile(&profile, alpha, r)
    }

    /// `𝓓_α(f₊, r) · 𝓓_α(f₋, r)` and both factors.
    pub fn acf_product(&self, f: &Poly, alpha: f64, r: f64, side: Side) -> Result<AcfValue> {
        let plus = self.d_alpha_phase(f, Phase::Plus, alpha, r, side)?;
        let minus = self.d_alpha_phase(f, Phase::Minus, alpha, r, side)?;
        Ok(AcfValue {
            plus,
            minus,
            product: plus * minus,
        })
    }

    /// `r^{1−Q} ∫_{S_r} f |∇_Hρ|² dH/|∇ρ|`.
    pub fn surface_average(&self, f: &Poly, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.horizontal(f).at(r))
    }

    /// `∫_{B_r} F dg`.
    pub fn ball_integral(&self, f: &Poly, r: f64) -> Result<f64> {
        check_radius(r)?;
        let plain = self.chart.moments(f, Measure::Plain);
        let q = self.q();
        Ok(r.powf(q) * self.chart.radial_moment(&plain, q - 1.0, r)?)
    }

    /// `∫_{B_r} F (ρ^{2−Q} − r^{2−Q}) dg`.
    fn green_integral(&self, f: &Poly, r: f64) -> Result<f64> {
        let plain = self.chart.moments(f, Measure::Plain);
        let q = self.q() as i32;
        let kernel = FnProfile(|t: f64| {
            let s = t / r;
            (s.powi(1) - s.powi(q - 1)) * plain.at(t)
        });
        Ok(r * r * self.chart.radial_moment(&kernel, 0.0, r)?)
    }

    /// `ψ(e)` recovered from the surface average and the solid Laplacian term of the mean
    /// value formula.
    pub fn mean_value(&self, psi: &Poly, r: f64) -> Result<f64> {
        let avg = self.surface_average(psi, r)?;
        let lap = horizontal_laplacian(&self.spec, psi, Side::Left);
        let solid = if lap.is_zero() { 0.0 } else { self.green_integral(&lap, r)? };
        let q2 = self.q() - 2.0;
        Ok((q2 * avg - solid) / (q2 * self.chart.total_weight(Measure::Horizontal)))
    }

    /// `|ψ(e) − mean_value(ψ, r)|`.
    pub fn mean_value_defect(&self, psi: &Poly, r: f64) -> Result<f64> {
        let exact = psi.at_origin().to_f64().unwrap_or(f64::NAN);
        Ok((self.mean_value(psi, r)? - exact).abs())
    }

    /// Central difference of the surface average in `r`, paired with `r^{1−Q} ∫_{B_r} Δ_H ψ`.
    pub fn average_derivative(&self, psi: &Poly, r: f64, h: f64) -> Result<(f64, f64)> {
        if !(h > 0.0 && h < r) {
            return invalid("step must lie in (0, r)");
        }
        let fd = (self.surface_average(psi, r + h)? - self.surface_average(psi, r - h)?) / (2.0 * h);
        let lap = horizontal_laplacian(&self.spec, psi, Side::Left);
        let solid = self.ball_integral(&lap, r)? * r.powf(1.0 - self.q());
        Ok((fd, solid))
    }

    fn require_harmonic(&self, f: &Poly) -> Result<()> {
        if is_harmonic(&self.spec, f) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{f} is not harmonic")))
        }
    }

    fn zf(&self, f: &Poly) -> Poly {
        dilation_field(&self.spec).apply(f)
    }

    /// `∫_{S_r} F` against the horizontal surface measure, from moments.
    fn sphere(&self, f: &Poly, r: f64) -> f64 {
        r.powf(self.q() - 1.0) * self.horizontal(f).at(r)
    }

    /// `∫_{B_r} |∇_H f|² dg` against `(1/r) ∫_{S_r} f Zf`.
    pub fn dirichlet_identity_defect(&self, f: &Poly, r: f64) -> Result<DirichletReport> {
        check_radius(r)?;
        self.require_harmonic(f)?;
        let lhs = self.ball_integral(&carre_du_champ(&self.spec, f, Side::Left), r)?;
        let rhs = self.sphere(&(f * &self.zf(f)), r) / r;
        Ok(DirichletReport {
            lhs,
            rhs,
            defect: (lhs - rhs).abs(),
        })
    }

    pub fn frequency(&self, f: &Poly, r: f64) -> Result<FrequencyReport> {
        check_radius(r)?;
        self.require_harmonic(f)?;
        let denom = self.sphere(&(f * f), r);
        if f.is_zero() || !(denom > 0.0) {
            return Err(Error::Degenerate("boundary mass vanishes".into()));
        }
        let energy = self.ball_integral(&carre_du_champ(&self.spec, f, Side::Left), r)?;
        let energy_form = r * energy / denom;
        let boundary_form = self.sphere(&(f * &self.zf(f)), r) / denom;
        Ok(FrequencyReport {
            energy_form,
            boundary_form,
            difference: (energy_form - boundary_form).abs(),
        })
    }

    pub fn frequency_two_term(&self, ph: &Poly, pk: &Poly) -> Result<TwoTerm> {
        let (h, k) = self.homogeneous_pair(ph, pk)?;
        let unit = |p: &Poly| self.horizontal(p).at(1.0);
        Ok(TwoTerm {
            h,
            k,
            a: unit(&(ph * ph)),
            b: -unit(&(ph * pk)),
            c: unit(&(pk * pk)),
            ph: ph.compile(),
            pk: pk.compile(),
        })
    }

    fn homogeneous_pair(&self, ph: &Poly, pk: &Poly) -> Result<(u32, u32)> {
        self.require_harmonic(ph)?;
        self.require_harmonic(pk)?;
        let degree = |p: &Poly| {
            p.weighted_homogeneous_degree()
                .filter(|_| !p.is_zero() && !p.depends_on(p.layout().time()))
                .ok_or_else(|| Error::InvalidArgument(format!("{p} is not homogeneous")))
        };
        let (h, k) = (degree(ph)?, degree(pk)?);
        if h == k {
            return invalid(format!("degrees must differ, both are {h}"));
        }
        Ok((h, k))
    }

    /// Direct quadrature of `𝓔(r) = ∫_{S_r} f P_k / ∫_{S_r} f²` with `f = P_h + P_k`.
    pub fn two_term_direct(&self, two: &TwoTerm, r: f64) -> Result<f64> {
        check_radius(r)?;
        let num = |v: &[f64]| {
            let (a, b) = (two.ph.eval(v), two.pk.eval(v));
            (a + b) * b
        };
        let den = |v: &[f64]| {
            let s = two.ph.eval(v) + two.pk.eval(v);
            s * s
        };
        let n = self.chart.surface_integral(&num, r, Measure::Horizontal)?;
        let d = self.chart.surface_integral(&den, r, Measure::Horizontal)?;
        if !(d > 0.0) {
            return Err(Error::Degenerate("boundary mass vanishes".into()));
        }
        Ok(n / d)
    }

    /// `(k−h) ∫_{S_1} P_h P_k` and `4 Σ_ℓ ∫_{S_1} σ_ℓ (P_k Θ_ℓ P_h − P_h Θ_ℓ P_k) dH/|∇ρ|`.
    pub fn orthogonality_defect(&self, ph: &Poly, pk: &Poly) -> Result<OrthogonalityDefect> {
        let (h, k) = self.homogeneous_pair(ph, pk)?;
        let layout = ph.layout();
        let lhs = (k as f64 - h as f64) * self.horizontal(&(ph * pk)).at(1.0);
        let mut integrand = Poly::zero(layout);
        for l in 1..=self.spec.m2() {
            let theta = theta_field(&self.spec, l)?;
            let sigma = Poly::var(layout, layout.sigma(l - 1));
            integrand = integrand + sigma * (pk * &theta.apply(ph) - ph * &theta.apply(pk));
        }
        let rhs = 4.0 * self.chart.moments(&integrand, Measure::Plain).at(1.0);
        Ok(OrthogonalityDefect {
            lhs,
            rhs,
            defect: (lhs - rhs).abs(),
        })
    }

    pub fn conjecture_probe(&self, f: &Poly, grid: &[f64], side: Side) -> Result<ConjectureReport> {
        crate::scan::check_grid(grid)?;
        if !f.at_origin().is_zero() {
            return Err(Error::Precondition("f must vanish at the identity".into()));
        }
        let products = {
            use rayon::prelude::*;
            grid.par_iter()
                .map(|&r| self.acf_product(f, 2.0, r, side).map(|v| v.product))
                .collect::<Result<Vec<_>>>()?
        };
        let at_one = self.acf_product(f, 2.0, 1.0, side)?;
        let bound = 1.0 + at_one.plus + at_one.minus;
        let smallest_c = products.iter().fold(0.0f64, |a, p| a.max(p / bound));
        Ok(ConjectureReport {
            grid: grid.to_vec(),
            products,
            plus_at_one: at_one.plus,
            minus_at_one: at_one.minus,
            smallest_c,
        })
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        invalid(format!("radius must be positive and finite, got {r}"))
    }
}

/// Constants of the two-term frequency decomposition `f = P_h + P_k`:
/// `a = ∫_{S_1} P_h²`, `b = −∫_{S_1} P_h P_k`, `c = ∫_{S_1} P_k²`.
#[derive(Clone, Debug)]
pub struct TwoTerm {
    pub h: u32,
    pub k: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    ph: CompiledPoly,
    pk: CompiledPoly,
}

impl TwoTerm {
    /// `𝓔(r) = (−b r^{k−h} + c r^{2(k−h)}) / (a − 2b r^{k−h} + c r^{2(k−h)})`.
    pub fn closed_form(&self, r: f64) -> f64 {
        let d = r.powi((self.k - self.h) as i32);
        (-self.b * d + self.c * d * d) / (self.a - 2.0 * self.b * d + self.c * d * d)
    }

    /// `N(f, r) = h + (k − h) 𝓔(r)`.
    pub fn frequency(&self, r: f64) -> f64 {
        self.h as f64 + (self.k as f64 - self.h as f64) * self.closed_form(r)
    }
}

/// Whether `⟨∇_H f, ∇_H ρ⟩ = (Zf/ρ)|∇_H ρ|² + (4/ρ³) Σ_ℓ σ_ℓ Θ_ℓ f` holds identically.
pub fn screwy_identity_holds(spec: &GroupSpec, f: &Poly) -> Result<bool> {
    Ok(screwy_residual(spec, f)?.is_none())
}

/// The difference of both sides of the radial identity, reduced modulo `ρ⁴ = |z|⁴ + 16|σ|²`.
/// `None` when it reduces to zero.
pub fn screwy_residual(spec: &GroupSpec, f: &Poly) -> Result<Option<RhoExpr>> {
    let ring = GaugeRing::new(spec)?;
    let layout = ring.layout();
    let rho = ring.rho_pow(1);
    let mut inner = RhoExpr::zero(layout);
    let mut grad_sq = RhoExpr::zero(layout);
    for x in left_fields(spec) {
        let d = ring.apply(&x, &rho);
        inner = inner.add(&RhoExpr::from_poly(x.apply(f)).mul(&d));
        grad_sq = grad_sq.add(&d.mul(&d));
    }
    let radial = RhoExpr::term(dilation_field(spec).apply(f), -1).mul(&grad_sq);
    let mut twist = Poly::zero(layout);
    for l in 1..=spec.m2() {
        let theta = theta_field(spec, l)?;
        twist = twist + Poly::var(layout, layout.sigma(l - 1)) * theta.apply(f);
    }
    let twist = RhoExpr::term(twist.scale_int(4), -3);
    let residual = inner.sub(&radial).sub(&twist);
    Ok((!ring.is_zero(&residual)).then_some(residual))
}
