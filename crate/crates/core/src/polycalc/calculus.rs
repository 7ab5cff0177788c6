//! Horizontal Laplacian, carré du champ and the Bochner-type identities.

use num::BigRational;

use super::field::{left_fields, right_fields, VectorField};
use super::poly::{Layout, Poly};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::InvalidArgument(format!("side must be left or right, got '{other}'"))),
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

fn fields(spec: &GroupSpec, side: Side) -> Vec<VectorField> {
    match side {
        Side::Left => left_fields(spec),
        Side::Right => right_fields(spec),
    }
}

fn sum_or_zero(layout: Layout, parts: impl Iterator<Item = Poly>) -> Poly {
    parts.fold(Poly::zero(layout), |acc, p| acc + p)
}

/// `Σ X_i² p` (left) or `Σ X̃_i² p` (right).
pub fn horizontal_laplacian(spec: &GroupSpec, p: &Poly, side: Side) -> Poly {
    sum_or_zero(
        p.layout(),
        fields(spec, side).iter().map(|x| x.apply(&x.apply(p))),
    )
}

/// Horizontal gradient `(X_1 p, ..., X_m p)` or its right-invariant counterpart.
pub fn gradient(spec: &GroupSpec, p: &Poly, side: Side) -> Vec<Poly> {
    fields(spec, side).iter().map(|x| x.apply(p)).collect()
}

/// `Σ (X_i p)²` or `Σ (X̃_i p)²`.
pub fn carre_du_champ(spec: &GroupSpec, p: &Poly, side: Side) -> Poly {
    sum_or_zero(p.layout(), gradient(spec, p, side).iter().map(|g| g * g))
}

fn inner(a: &[Poly], b: &[Poly]) -> Poly {
    sum_or_zero(a[0].layout(), a.iter().zip(b).map(|(x, y)| x * y))
}

/// `Δ_H(|∇̃p|²) − 2⟨∇̃p, ∇̃(Δ_H p)⟩ − 2 Σ_i |∇̃(X_i p)|²`, identically zero.
pub fn bochner_residual_right(spec: &GroupSpec, p: &Poly) -> Poly {
    let lap = horizontal_laplacian(spec, p, Side::Left);
    let lhs = horizontal_laplacian(spec, &carre_du_champ(spec, p, Side::Right), Side::Left);
    let grad_term = inner(
        &gradient(spec, p, Side::Right),
        &gradient(spec, &lap, Side::Right),
    )
    .scale_int(2);
    let hess_term = sum_or_zero(
        p.layout(),
        left_fields(spec)
            .iter()
            .map(|x| carre_du_champ(spec, &x.apply(p), Side::Right)),
    )
    .scale_int(2);
    lhs - grad_term - hess_term
}

/// Terms of the left Bochner expansion of `Δ_H(|∇_H p|²)`.
#[derive(Clone, Debug)]
pub struct LeftBochner {
    /// `Δ_H(|∇_H p|²)`
    pub laplacian_of_carre: Poly,
    /// `2 ‖∇²_H p‖²` with the symmetrised Hessian `(X_iX_j + X_jX_i)p / 2`
    pub hessian: Poly,
    /// `2 ⟨∇_H p, ∇_H(Δ_H p)⟩`
    pub gradient: Poly,
    /// `½ Σ_{i,j} ([X_i, X_j] p)²`
    pub commutator_square: Poly,
    /// `4 Σ_{i,j} X_j p [X_i, X_j] X_i p`
    pub mixed: Poly,
    /// `2 Σ_{i,j} X_j p [X_i, [X_i, X_j]] p`, zero in step 2
    pub double_commutator: Poly,
    /// `laplacian_of_carre` minus the sum of all terms
    pub residual: Poly,
}

pub fn bochner_left_terms(spec: &GroupSpec, p: &Poly) -> LeftBochner {
    let layout = p.layout();
    let xs = left_fields(spec);
    let m = xs.len();
    let grad: Vec<Poly> = xs.iter().map(|x| x.apply(p)).collect();
    let lap = horizontal_laplacian(spec, p, Side::Left);
    let laplacian_of_carre =
        horizontal_laplacian(spec, &carre_du_champ(spec, p, Side::Left), Side::Left);

    let half = BigRational::new(1.into(), 2.into());
    let mut hess_sq = Poly::zero(layout);
    let mut comm_sq = Poly::zero(layout);
    let mut mixed = Poly::zero(layout);
    let mut double = Poly::zero(layout);
    for i in 0..m {
        for j in 0..m {
            let xij = xs[i].apply(&grad[j]);
            let xji = xs[j].apply(&grad[i]);
            let sym = (&xij + &xji).scale(&half);
            hess_sq = hess_sq + &sym * &sym;
            let bracket = xs[i].commutator(&xs[j]);
            let cp = bracket.apply(p);
            comm_sq = comm_sq + &cp * &cp;
            mixed = mixed + &grad[j] * &bracket.apply(&grad[i]);
            let dd = xs[i].commutator(&bracket).apply(p);
            double = double + &grad[j] * &dd;
        }
    }
    let hessian = hess_sq.scale_int(2);
    let gradient = inner(&grad, &gradient(spec, &lap, Side::Left)).scale_int(2);
    let commutator_square = comm_sq.scale(&half);
    let mixed = mixed.scale_int(4);
    let double_commutator = double.scale_int(2);
    let residual = &laplacian_of_carre
        - &(&hessian + &gradient)
        - (&commutator_square + &mixed)
        - &double_commutator;
    LeftBochner {
        laplacian_of_carre,
        hessian,
        gradient,
        commutator_square,
        mixed,
        double_commutator,
        residual,
    }
}

/// Heisenberg specialisation of the left expansion:
/// `Δ_H(|∇p|²) − 2‖∇²p‖² − 2⟨∇p, ∇Δ_H p⟩ − n(Tp)² − 4⟨∇_H(Tp), ∇⊥_H p⟩`,
/// where `∇⊥p = (X_{n+1}p, ..., X_{2n}p, −X_1p, ..., −X_np)`.
pub fn heisenberg_bochner_residual(spec: &GroupSpec, p: &Poly) -> Result<Poly> {
    let n = spec
        .heisenberg_index()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a Heisenberg group", spec.name())))?;
    let layout = p.layout();
    let terms = bochner_left_terms(spec, p);
    let tp = p.diff(layout.sigma(0));
    let grad = gradient(spec, p, Side::Left);
    let grad_t = gradient(spec, &tp, Side::Left);
    let perp: Vec<Poly> = (0..2 * n)
        .map(|i| if i < n { grad[n + i].clone() } else { -&grad[i - n] })
        .collect();
    let twisted = inner(&grad_t, &perp).scale_int(4);
    let vertical = (&tp * &tp).scale_int(n as i64);
    Ok(terms.laplacian_of_carre - terms.hessian - terms.gradient - vertical - twisted)
}

/// `|∇_H p|² − |∇̃_H p|² − 2 Σ_ℓ Θ_ℓ(p) ∂_{σ_ℓ} p`, identically zero.
pub fn difference_residual(spec: &GroupSpec, p: &Poly) -> Poly {
    let layout = p.layout();
    let mut twist = Poly::zero(layout);
    for l in 1..=spec.m2() {
        let theta = super::field::theta_field(spec, l).expect("index in range");
        twist = twist + theta.apply(p) * p.diff(layout.sigma(l - 1));
    }
    carre_du_champ(spec, p, Side::Left) - carre_du_champ(spec, p, Side::Right) - twist.scale_int(2)
}

/// `Δ_H p − ∂_t p`; a caloric input makes this a constant.
pub fn caloric_residual(spec: &GroupSpec, p: &Poly) -> Poly {
    horizontal_laplacian(spec, p, Side::Left) - p.diff(p.layout().time())
}

/// `Some(c)` when `Δ_H p − ∂_t p` is the constant `c`.
pub fn caloric_constant(spec: &GroupSpec, p: &Poly) -> Option<BigRational> {
    caloric_residual(spec, p).as_constant()
}

pub fn is_harmonic(spec: &GroupSpec, p: &Poly) -> bool {
    horizontal_laplacian(spec, p, Side::Left).is_zero()
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

    const F: &str = "x + 6*y*s - x^3";
    const FMIA: &str = "x^3 + x*y^2 - 8*y*s - x";

    #[test]
    fn laplacians() {
        assert!(horizontal_laplacian(&h1(), &p(F), Side::Left).is_zero());
        assert!(horizontal_laplacian(&h1(), &p(FMIA), Side::Left).is_zero());
        assert_eq!(horizontal_laplacian(&h1(), &p("x^2 + y^2"), Side::Left), p("4"));
        assert!(is_harmonic(&h1(), &p("x^3 + x*y^2 - 8*y*s")));
        // on polynomials of z alone the right sub-Laplacian is the Euclidean one
        assert_eq!(horizontal_laplacian(&h1(), &p("x^2*y"), Side::Right), p("2*y"));
    }

    #[test]
    fn carre_du_champ_of_paper_function() {
        let f = p(F);
        let left = carre_du_champ(&h1(), &f, Side::Left);
        let nh = p("1 + 9*(x^2 + y^2)^2 - 6*(x^2 + y^2) + 36*s^2 + 9*x^2*y^2 + 36*x*y*s");
        assert_eq!(left, nh);
        let right = carre_du_champ(&h1(), &f, Side::Right);
        assert_eq!(right, p("(1 - 3*x^2 + 3*y^2)^2 + (6*s - 3*x*y)^2"));
        assert_eq!(left.at_origin(), right.at_origin());
    }

    #[test]
    fn left_bochner_values() {
        let fmia = bochner_left_terms(&h1(), &p(FMIA));
        assert_eq!(fmia.laplacian_of_carre, p("240*x^2 + 368*y^2 - 32"));
        assert!(fmia.residual.is_zero());
        let f = bochner_left_terms(&h1(), &p(F));
        assert_eq!(f.laplacian_of_carre, p("216*x^2 + 144*y^2 - 24"));
        assert!(f.residual.is_zero());
        assert!(f.double_commutator.is_zero());
        let ff = p(F);
        let t = ff.diff(2);
        let corrected = carre_du_champ(&h1(), &ff, Side::Left) + (&t * &t).scale(&BigRational::new(1.into(), 3.into()));
        assert_eq!(horizontal_laplacian(&h1(), &corrected, Side::Left), p("216*x^2 + 144*y^2"));
    }

    #[test]
    fn right_bochner_and_subharmonicity() {
        for text in [F, FMIA, "x^4 - 3*x*y*s + t*y", "s^2*x - y^3"] {
            assert!(bochner_residual_right(&h1(), &p(text)).is_zero(), "{text}");
        }
        let f = p(F);
        let lhs = horizontal_laplacian(&h1(), &carre_du_champ(&h1(), &f, Side::Right), Side::Left);
        let rhs = left_fields_square_sum(&f);
        assert_eq!(lhs, rhs);
    }

    fn left_fields_square_sum(f: &Poly) -> Poly {
        let spec = h1();
        sum_or_zero(
            f.layout(),
            left_fields(&spec)
                .iter()
                .map(|x| carre_du_champ(&spec, &x.apply(f), Side::Right)),
        )
        .scale_int(2)
    }

    #[test]
    fn heisenberg_specialisation() {
        for text in [F, FMIA, "x^2*y*s + s^2 - y"] {
            assert!(heisenberg_bochner_residual(&h1(), &p(text)).unwrap().is_zero());
        }
        let f3 = GroupSpec::free_step2(3).unwrap();
        assert!(heisenberg_bochner_residual(&f3, &parse_poly("z1", &f3).unwrap()).is_err());
    }

    #[test]
    fn difference_identity() {
        assert!(difference_residual(&h1(), &p(F)).is_zero());
        let q = p("x^3*y - 2*x*y^2 + 5");
        assert!(difference_residual(&h1(), &q).is_zero());
        assert_eq!(
            carre_du_champ(&h1(), &q, Side::Left),
            carre_du_champ(&h1(), &q, Side::Right)
        );
    }

    #[test]
    fn caloric_examples() {
        assert!(caloric_residual(&h1(), &p("x^2 - y^2")).is_zero());
        assert!(caloric_residual(&h1(), &p("x^2 + y^2 + 4*t")).is_zero());
        assert_eq!(caloric_residual(&h1(), &p("x^2 + y^2 - 4*t")), p("8"));
        assert!(caloric_residual(&h1(), &p("x")).is_zero());
        assert_eq!(caloric_constant(&h1(), &p("x^2")), Some(BigRational::from_integer(2.into())));
        assert_eq!(caloric_constant(&h1(), &p("x^2*t")), None);
    }
}
