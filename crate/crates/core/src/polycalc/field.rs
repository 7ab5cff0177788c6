use std::fmt;

use num::{BigRational, Zero};

use super::parse::var_name;
use super::poly::{Layout, Poly};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// First-order operator `Σ_k c_k ∂_k` over all coordinates `(z, σ, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    layout: Layout,
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn zero(layout: Layout) -> Self {
        Self {
            layout,
            coeffs: vec![Poly::zero(layout); layout.nvars()],
        }
    }

    pub fn from_coefficients(layout: Layout, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != layout.nvars() {
            return Err(Error::InvalidArgument(format!(
                "vector field needs {} coefficients, got {}",
                layout.nvars(),
                coeffs.len()
            )));
        }
        Ok(Self { layout, coeffs })
    }

    /// Coordinate field `∂_var`.
    pub fn partial(layout: Layout, var: usize) -> Self {
        let mut f = Self::zero(layout);
        f.coeffs[var] = Poly::from_int(layout, 1);
        f
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        assert_eq!(self.layout, p.layout(), "field and polynomial live on different groups");
        let mut acc = Poly::zero(self.layout);
        for (var, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = p.diff(var);
            if !d.is_zero() {
                acc = acc + c * &d;
            }
        }
        acc
    }

    /// `[A, B] = Σ_k (A b_k − B a_k) ∂_k`.
    pub fn commutator(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.apply(b) - other.apply(a))
            .collect();
        Self {
            layout: self.layout,
            coeffs,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            layout: self.layout,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            layout: self.layout,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| format!("({c})*d_{}", var_name(&self.layout, v)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn check_index(i: usize, max: usize) -> Result<()> {
    if i == 0 || i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    Ok(())
}

/// `½ Σ_ℓ (B^ℓ z)_i ∂_{σ_ℓ}` coefficients, zero-based `i`.
fn vertical_part(spec: &GroupSpec, i: usize) -> Vec<Poly> {
    let layout = Layout::of(spec);
    let half = BigRational::new(1.into(), 2.into());
    (0..spec.m2())
        .map(|l| {
            let mut c = Poly::zero(layout);
            for j in 0..spec.m() {
                let b = spec.b(l, i, j);
                if !b.is_zero() {
                    c = c + Poly::var(layout, layout.z(j)).scale(&(b * &half));
                }
            }
            c
        })
        .collect()
}

fn horizontal_field(spec: &GroupSpec, i: usize, sign: i64) -> Result<VectorField> {
    check_index(i, spec.m())?;
    let layout = Layout::of(spec);
    let mut field = VectorField::partial(layout, layout.z(i - 1));
    for (l, c) in vertical_part(spec, i - 1).into_iter().enumerate() {
        field.coeffs[layout.sigma(l)] = c.scale_int(sign);
    }
    Ok(field)
}

/// Left-invariant `X_i = ∂_{z_i} − ½ Σ_ℓ (B^ℓ z)_i ∂_{σ_ℓ}`, one-based `i`.
pub fn left_field(spec: &GroupSpec, i: usize) -> Result<VectorField> {
    horizontal_field(spec, i, -1)
}

/// Right-invariant `X̃_i = ∂_{z_i} + ½ Σ_ℓ (B^ℓ z)_i ∂_{σ_ℓ}`, one-based `i`.
pub fn right_field(spec: &GroupSpec, i: usize) -> Result<VectorField> {
    horizontal_field(spec, i, 1)
}

/// `T_ℓ = ∂_{σ_ℓ}`, one-based `ℓ`.
pub fn vertical_field(spec: &GroupSpec, l: usize) -> Result<VectorField> {
    check_index(l, spec.m2())?;
    let layout = Layout::of(spec);
    Ok(VectorField::partial(layout, layout.sigma(l - 1)))
}

/// Generator of the dilations `Z = Σ z_i ∂_{z_i} + 2 Σ σ_ℓ ∂_{σ_ℓ}`.
pub fn dilation_field(spec: &GroupSpec) -> VectorField {
    let layout = Layout::of(spec);
    let mut field = VectorField::zero(layout);
    for i in 0..spec.m() {
        field.coeffs[layout.z(i)] = Poly::var(layout, layout.z(i));
    }
    for l in 0..spec.m2() {
        field.coeffs[layout.sigma(l)] = Poly::var(layout, layout.sigma(l)).scale_int(2);
    }
    field
}

/// `Θ_ℓ = Σ_{i<j} b^ℓ_{ij} (z_i ∂_{z_j} − z_j ∂_{z_i})`, one-based `ℓ`.
pub fn theta_field(spec: &GroupSpec, l: usize) -> Result<VectorField> {
    check_index(l, spec.m2())?;
    let layout = Layout::of(spec);
    let mut field = VectorField::zero(layout);
    for i in 0..spec.m() {
        for j in i + 1..spec.m() {
            let b = spec.b(l - 1, i, j);
            if b.is_zero() {
                continue;
            }
            let zi = Poly::var(layout, layout.z(i)).scale(b);
            let zj = Poly::var(layout, layout.z(j)).scale(b);
            field.coeffs[layout.z(j)] = &field.coeffs[layout.z(j)] + &zi;
            field.coeffs[layout.z(i)] = &field.coeffs[layout.z(i)] - &zj;
        }
    }
    Ok(field)
}

/// All left-invariant horizontal fields `X_1..X_m`.
pub fn left_fields(spec: &GroupSpec) -> Vec<VectorField> {
    (1..=spec.m()).map(|i| left_field(spec, i).expect("index in range")).collect()
}

/// All right-invariant horizontal fields `X̃_1..X̃_m`.
pub fn right_fields(spec: &GroupSpec) -> Vec<VectorField> {
    (1..=spec.m()).map(|i| right_field(spec, i).expect("index in range")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::parse::parse_poly;

    fn h1() -> GroupSpec {
        GroupSpec::heisenberg(1).unwrap()
    }

    fn p(text: &str) -> Poly {
        parse_poly(text, &h1()).unwrap()
    }

    #[test]
    fn left_fields_match_heisenberg_convention() {
        // X_1 = ∂_x − (y/2)∂_σ, X_2 = ∂_y + (x/2)∂_σ
        let x1 = left_field(&h1(), 1).unwrap();
        let x2 = left_field(&h1(), 2).unwrap();
        assert_eq!(x1.coefficients(), &[p("1"), p("0"), p("-1/2*y"), p("0")]);
        assert_eq!(x2.coefficients(), &[p("0"), p("1"), p("1/2*x"), p("0")]);
        let r1 = right_field(&h1(), 1).unwrap();
        assert_eq!(r1.coefficients()[2], p("1/2*y"));
    }

    #[test]
    fn derivatives_of_paper_function() {
        let f = p("x + 6*y*s - x^3");
        let x1 = left_field(&h1(), 1).unwrap();
        let x2 = left_field(&h1(), 2).unwrap();
        assert_eq!(x1.apply(&f), p("1 - 3*x^2 - 3*y^2"));
        assert_eq!(x2.apply(&f), p("6*s + 3*x*y"));
        assert_eq!(x1.apply(&x1.apply(&f)), p("-6*x"));
        assert_eq!(x2.apply(&x2.apply(&f)), p("6*x"));
        assert_eq!(right_field(&h1(), 1).unwrap().apply(&f), p("1 - 3*x^2 + 3*y^2"));
        assert_eq!(right_field(&h1(), 2).unwrap().apply(&f), p("6*s - 3*x*y"));
        assert!(x1.apply(&p("7/3")).is_zero());
    }

    #[test]
    fn dilation_and_theta() {
        let z = dilation_field(&h1());
        assert_eq!(z.apply(&p("x")), p("x"));
        assert_eq!(z.apply(&p("6*y*s - x^3")), p("18*y*s - 3*x^3"));
        let theta = theta_field(&h1(), 1).unwrap();
        assert_eq!(theta.apply(&p("x")), p("-y"));
        assert_eq!(theta.apply(&p("y")), p("x"));
    }

    #[test]
    fn commutators() {
        let spec = h1();
        let x1 = left_field(&spec, 1).unwrap();
        let x2 = left_field(&spec, 2).unwrap();
        assert_eq!(x1.commutator(&x2), vertical_field(&spec, 1).unwrap());
        assert!(x1.commutator(&x1).is_zero());
        for a in left_fields(&spec) {
            for b in right_fields(&spec) {
                assert!(a.commutator(&b).is_zero());
            }
        }
    }

    #[test]
    fn bracket_recovery_and_commutation_on_builtins() {
        for spec in [
            GroupSpec::heisenberg(1).unwrap(),
            GroupSpec::heisenberg(2).unwrap(),
            GroupSpec::free_step2(3).unwrap(),
        ] {
            let layout = Layout::of(&spec);
            let lefts = left_fields(&spec);
            let rights = right_fields(&spec);
            for (i, a) in lefts.iter().enumerate() {
                for b in &rights {
                    assert!(a.commutator(b).is_zero());
                }
                for (j, b) in lefts.iter().enumerate() {
                    let mut expected = VectorField::zero(layout);
                    for l in 0..spec.m2() {
                        let t = VectorField::partial(layout, layout.sigma(l));
                        expected = expected.add(&t.scale(spec.b(l, i, j)));
                    }
                    assert_eq!(a.commutator(b), expected, "{} [X_{}, X_{}]", spec.name(), i + 1, j + 1);
                }
            }
        }
    }

    #[test]
    fn index_errors() {
        assert!(matches!(left_field(&h1(), 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(right_field(&h1(), 3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(vertical_field(&h1(), 2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(theta_field(&h1(), 2), Err(Error::IndexOutOfRange { .. })));
    }
}
