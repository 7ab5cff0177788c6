use num::{BigRational, Zero};

use super::calculus::{horizontal_laplacian, Side};
use super::poly::{Layout, Monomial, Poly};
use crate::group::GroupSpec;
use crate::linalg;

/// Exponent vectors over `(z, σ)` (time exponent zero) of weighted degree `kappa`.
pub fn homogeneous_monomials(layout: Layout, kappa: u32) -> Vec<Monomial> {
    fn rec(layout: &Layout, var: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let spatial = layout.m + layout.m2;
        if var == spatial {
            if remaining == 0 {
                let mut full = exps.clone();
                full.push(0);
                out.push(Monomial::from_exponents(full));
            }
            return;
        }
        let w = layout.weight(var);
        for e in 0..=remaining / w {
            exps.push(e);
            rec(layout, var + 1, remaining - e * w, exps, out);
            exps.pop();
        }
    }
    let mut out = Vec::new();
    rec(&layout, 0, kappa, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Basis of the harmonic δ_λ-homogeneous polynomials of degree `kappa` in `(z, σ)`.
///
/// Computed as the kernel of `Δ_H` on the monomial coefficient space by exact elimination.
pub fn harmonic_basis(spec: &GroupSpec, kappa: u32) -> Vec<Poly> {
    let layout = Layout::of(spec);
    let source = homogeneous_monomials(layout, kappa);
    if source.is_empty() {
        return Vec::new();
    }
    let images: Vec<Poly> = source
        .iter()
        .map(|mono| {
            let p = Poly::monomial(layout, mono.clone(), BigRational::from_integer(1.into()));
            horizontal_laplacian(spec, &p, Side::Left)
        })
        .collect();
    let target = if kappa >= 2 {
        homogeneous_monomials(layout, kappa - 2)
    } else {
        Vec::new()
    };
    let rows: Vec<Vec<BigRational>> = target
        .iter()
        .map(|t| images.iter().map(|img| img.coefficient(t)).collect())
        .collect();
    linalg::null_space(&rows, source.len())
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(layout);
            for (mono, c) in source.iter().zip(v) {
                if !c.is_zero() {
                    p = p + Poly::monomial(layout, mono.clone(), c);
                }
            }
            p
        })
        .collect()
}

/// Whether `p` lies in the rational span of `basis`.
pub fn in_span(p: &Poly, basis: &[Poly]) -> bool {
    let mut monos: Vec<Monomial> = p.terms().map(|(m, _)| m.clone()).collect();
    for b in basis {
        monos.extend(b.terms().map(|(m, _)| m.clone()));
    }
    monos.sort();
    monos.dedup();
    let as_row = |q: &Poly| -> Vec<BigRational> { monos.iter().map(|m| q.coefficient(m)).collect() };
    let mut rows: Vec<Vec<BigRational>> = basis.iter().map(as_row).collect();
    let before = linalg::rank(&rows, monos.len());
    rows.push(as_row(p));
    linalg::rank(&rows, monos.len()) == before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::parse::parse_poly;

    fn h1() -> GroupSpec {
        GroupSpec::heisenberg(1).unwrap()
    }

    #[test]
    fn degree_one_is_all_linear_forms() {
        let basis = harmonic_basis(&h1(), 1);
        assert_eq!(basis.len(), 2);
        let x = parse_poly("x", &h1()).unwrap();
        let y = parse_poly("y", &h1()).unwrap();
        assert!(in_span(&x, &basis) && in_span(&y, &basis));
    }

    #[test]
    fn paper_function_decomposes_into_harmonic_pieces() {
        let spec = h1();
        let mut basis = harmonic_basis(&spec, 1);
        let cubic = harmonic_basis(&spec, 3);
        assert!(in_span(&parse_poly("6*y*s - x^3", &spec).unwrap(), &cubic));
        assert!(in_span(&parse_poly("x^3 + x*y^2 - 8*y*s", &spec).unwrap(), &cubic));
        basis.extend(cubic);
        assert!(in_span(&parse_poly("x + 6*y*s - x^3", &spec).unwrap(), &basis));
        assert!(!in_span(&parse_poly("x^3", &spec).unwrap(), &basis));
    }

    #[test]
    fn every_basis_element_is_harmonic_and_homogeneous() {
        for spec in [h1(), GroupSpec::heisenberg(2).unwrap()] {
            for kappa in 0..=4 {
                for p in harmonic_basis(&spec, kappa) {
                    assert!(horizontal_laplacian(&spec, &p, Side::Left).is_zero());
                    assert_eq!(p.weighted_homogeneous_degree(), Some(kappa));
                }
            }
        }
    }

    #[test]
    fn dimensions_in_h1() {
        // monomials of weighted degree κ minus those of degree κ−2 (Δ_H is onto)
        let dims: Vec<usize> = (0..=5).map(|k| harmonic_basis(&h1(), k).len()).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(homogeneous_monomials(Layout::of(&h1()), 2).len(), 4);
    }
}
