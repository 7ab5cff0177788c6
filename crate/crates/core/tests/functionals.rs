mod common;

use std::f64::consts::PI;

use carnot_core::functionals::{screwy_residual, Functionals, Phase};
use carnot_core::polycalc::{carre_du_champ, harmonic_basis, parse_poly, Poly};
use carnot_core::scan::{linspace, monotonicity_scan, DEFAULT_TOL};
use carnot_core::{corpus, Error, GroupSpec, Side, Verdict};
use common::{grad_rho_sq, mc_ball, within};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h1() -> GroupSpec {
    GroupSpec::heisenberg(1).unwrap()
}

fn p(text: &str) -> Poly {
    corpus::resolve(text, &h1()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn m_alpha_examples() {
    let fx = Functionals::h1();
    for alpha in [0.5, 2.0, 3.0] {
        let w = fx.omega(alpha).unwrap();
        assert!(rel(w, PI / alpha) < 1e-10);
        assert!(rel(fx.m_alpha(&p("1"), alpha, 0.7).unwrap(), w) < 1e-12);
        assert!(fx.m_alpha(&p("x"), alpha, 0.7).unwrap().abs() < 1e-14);
    }
    let near = fx.m_alpha(&p("paper-f"), 2.0, 1e-5).unwrap();
    assert!(near.abs() < 1e-8);
    assert!(fx.m_alpha(&p("1"), 0.0, 1.0).is_err());
    assert!(fx.m_alpha(&p("1"), 4.5, 1.0).is_err());
}

#[test]
fn d_alpha_examples() {
    let fx = Functionals::h1();
    let w = fx.omega(2.0).unwrap();
    for r in [0.1, 1.0, 5.0] {
        assert!(rel(fx.d_alpha(&p("x"), 2.0, r, Side::Right).unwrap(), w) < 1e-12);
    }
    let f = p("paper-f");
    for r in linspace(0.02, 2.0, 20) {
        assert!(w <= fx.d_alpha(&f, 2.0, r, Side::Right).unwrap() + 1e-8);
    }
}

#[test]
fn left_and_right_scans_of_paper_function() {
    let fx = Functionals::h1();
    let f = p("paper-f");
    let grid = linspace(0.02, 0.33, 16);
    let left = monotonicity_scan(&grid, |r| fx.d_alpha(&f, 2.0, r, Side::Left), DEFAULT_TOL).unwrap();
    let right = monotonicity_scan(&grid, |r| fx.d_alpha(&f, 2.0, r, Side::Right), DEFAULT_TOL).unwrap();
    assert_eq!(left.verdict, Verdict::Nonincreasing);
    assert_eq!(right.verdict, Verdict::Nondecreasing);
}

#[test]
fn phases_of_paper_function_split_evenly() {
    let fx = Functionals::h1();
    let f = p("paper-f");
    for r in [0.3, 1.0, 1.7] {
        let full = fx.d_alpha(&f, 2.0, r, Side::Right).unwrap();
        let acf = fx.acf_product(&f, 2.0, r, Side::Right).unwrap();
        assert!(rel(acf.plus, acf.minus) < 1e-10, "{acf:?}");
        assert!(rel(acf.plus, full / 2.0) < 1e-10);
        assert!(rel(acf.product, full * full / 4.0) < 1e-10);
    }
    let one = fx.acf_product(&p("1"), 2.0, 1.0, Side::Right).unwrap();
    assert_eq!(one.minus, 0.0);
    assert_eq!(one.product, 0.0);
    let plus = fx.d_alpha_phase(&p("x + 2"), Phase::Plus, 2.0, 0.5, Side::Right).unwrap();
    assert!(rel(plus, fx.omega(2.0).unwrap()) < 1e-12);
}

#[test]
fn surface_averages_of_carres() {
    let fx = Functionals::h1();
    let spec = h1();
    let f = p("paper-f");
    let right = carre_du_champ(&spec, &f, Side::Right);
    let left = carre_du_champ(&spec, &f, Side::Left);
    let up = monotonicity_scan(&linspace(0.02, 2.0, 30), |r| fx.surface_average(&right, r), DEFAULT_TOL).unwrap();
    assert_eq!(up.verdict, Verdict::Nondecreasing);
    let down = monotonicity_scan(&linspace(0.02, 0.33, 30), |r| fx.surface_average(&left, r), DEFAULT_TOL).unwrap();
    assert_eq!(down.verdict, Verdict::Nonincreasing);
}

#[test]
fn monotone_averages_give_monotone_energies() {
    let fx = Functionals::h1();
    let spec = h1();
    for name in ["paper-f", "paper-fmia"] {
        let f = p(name);
        for side in [Side::Left, Side::Right] {
            let u = carre_du_champ(&spec, &f, side);
            for grid in [linspace(0.02, 0.25, 12), linspace(0.02, 2.0, 12)] {
                let avg = monotonicity_scan(&grid, |r| fx.surface_average(&u, r), DEFAULT_TOL).unwrap();
                let d = monotonicity_scan(&grid, |r| fx.m_alpha(&u, 2.0, r), DEFAULT_TOL).unwrap();
                if matches!(avg.verdict, Verdict::Nondecreasing | Verdict::Nonincreasing) {
                    assert_eq!(d.verdict, avg.verdict, "{name} {side}");
                }
            }
        }
    }
}

#[test]
fn dirichlet_identity() {
    let fx = Functionals::h1();
    let x = fx.dirichlet_identity_defect(&p("x"), 0.8).unwrap();
    assert!(x.defect < 1e-8);
    assert!(rel(x.lhs, 0.8f64.powi(4) * PI * PI / 8.0) < 1e-12);
    for r in [0.25, 0.5, 1.0] {
        let d = fx.dirichlet_identity_defect(&p("paper-f"), r).unwrap();
        assert!(d.defect / d.lhs < 1e-6);
    }
    let d = fx.dirichlet_identity_defect(&p("x^2 - y^2"), 1.0).unwrap();
    assert!(d.defect / d.lhs < 1e-6);
    assert!(matches!(
        fx.dirichlet_identity_defect(&p("x^2"), 1.0),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn frequency_of_homogeneous_harmonics() {
    let fx = Functionals::h1();
    let spec = h1();
    for kappa in 1..=4u32 {
        for q in harmonic_basis(&spec, kappa) {
            for r in [0.1, 0.6, 1.4] {
                let n = fx.frequency(&q, r).unwrap();
                assert!((n.energy_form - kappa as f64).abs() < 1e-8, "{q}: {n:?}");
                assert!((n.boundary_form - kappa as f64).abs() < 1e-8);
            }
        }
    }
    assert!(matches!(fx.frequency(&p("0"), 1.0), Err(Error::Degenerate(_))));
}

#[test]
fn frequency_of_paper_function_is_one_plus_twice_e() {
    let fx = Functionals::h1();
    let two = fx.frequency_two_term(&p("p1"), &p("p3")).unwrap();
    for r in [0.05, 0.3, 0.9] {
        let n = fx.frequency(&p("paper-f"), r).unwrap();
        assert!(rel(n.energy_form, 1.0 + 2.0 * two.closed_form(r)) < 1e-8);
        assert!(rel(n.energy_form, two.frequency(r)) < 1e-12);
    }
}

#[test]
fn two_term_constants() {
    let fx = Functionals::h1();
    let two = fx.frequency_two_term(&p("p1"), &p("p3")).unwrap();
    assert!(two.a > 0.0 && two.b > 0.0 && two.c > 0.0);
    // S = (Q + d) ∫_{B₁} F |∇_Hρ|²
    let n = 8_000_000;
    let a = mc_ball(|x, y, s| x * x * grad_rho_sq(x, y, s), n, 41);
    let b = mc_ball(|x, y, s| x.powi(4) * grad_rho_sq(x, y, s), n, 42);
    let c = mc_ball(|x, y, s| (6.0 * y * s - x.powi(3)).powi(2) * grad_rho_sq(x, y, s), n, 43);
    assert!(within(two.a / 6.0, a, 3.0), "a {} vs {a:?}", two.a);
    assert!(within(two.b / 8.0, b, 3.0), "b {} vs {b:?}", two.b);
    assert!(within(two.c / 10.0, c, 3.0), "c {} vs {c:?}", two.c);
    for r in [0.05, 0.1, 0.2] {
        let direct = fx.two_term_direct(&two, r).unwrap();
        assert!(rel(two.closed_form(r), direct) < 1e-6);
    }
    let grid = linspace(0.005, 0.1, 20);
    let values: Vec<f64> = grid.iter().map(|&r| two.closed_form(r)).collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
    assert!(fx.frequency_two_term(&p("x"), &p("y")).is_err());
    assert!(fx.frequency_two_term(&p("x"), &p("x^2")).is_err());
}

#[test]
fn orthogonality_defect_for_the_pair() {
    let fx = Functionals::h1();
    let two = fx.frequency_two_term(&p("p1"), &p("p3")).unwrap();
    let d = fx.orthogonality_defect(&p("p1"), &p("p3")).unwrap();
    assert!(rel(d.lhs, -2.0 * two.b) < 1e-12);
    assert!(d.defect / d.lhs.abs() < 1e-6);
    assert!(fx.orthogonality_defect(&p("x"), &p("y")).is_err());
}

/// `⟨∇_H f, ∇_H ρ⟩ − (Zf/ρ)|∇_Hρ|² − (4/ρ³) σ Θf` by central differences.
fn screwy_numeric(f: &dyn Fn(f64, f64, f64) -> f64, x: f64, y: f64, s: f64) -> f64 {
    let h = 1e-5;
    let d = |g: &dyn Fn(f64, f64, f64) -> f64, i: usize| {
        let e = |k: usize| if k == i { h } else { 0.0 };
        (g(x + e(0), y + e(1), s + e(2)) - g(x - e(0), y - e(1), s - e(2))) / (2.0 * h)
    };
    let rho = |a: f64, b: f64, c: f64| common::rho(a, b, c);
    let (fx, fy, fs) = (d(f, 0), d(f, 1), d(f, 2));
    let (rx, ry, rs) = (d(&rho, 0), d(&rho, 1), d(&rho, 2));
    let x1 = |gx: f64, gs: f64| gx - y / 2.0 * gs;
    let x2 = |gy: f64, gs: f64| gy + x / 2.0 * gs;
    let lhs = x1(fx, fs) * x1(rx, rs) + x2(fy, fs) * x2(ry, rs);
    let r = rho(x, y, s);
    let zf = x * fx + y * fy + 2.0 * s * fs;
    let theta = x * fy - y * fx;
    lhs - zf / r * grad_rho_sq(x, y, s) - 4.0 / r.powi(3) * s * theta
}

#[test]
fn screwy_identity_symbolic_and_numeric() {
    let spec = h1();
    let cases: [(&str, fn(f64, f64, f64) -> f64); 4] = [
        ("s", |_, _, s| s),
        ("x", |x, _, _| x),
        ("x^2*y - 3*y*s", |x, y, s| x * x * y - 3.0 * y * s),
        ("x^2 + y^2", |x, y, _| x * x + y * y),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (text, f) in cases {
        assert!(screwy_residual(&spec, &parse_poly(text, &spec).unwrap()).unwrap().is_none());
        for _ in 0..100 {
            let (x, y, s) = (
                rng.random_range(0.2..1.0),
                rng.random_range(0.2..1.0),
                rng.random_range(-0.5..0.5),
            );
            assert!(screwy_numeric(&f, x, y, s).abs() < 1e-6, "{text} at ({x},{y},{s})");
        }
    }
    // f = σ: both sides are 2σ|z|²/ρ³
    let (x, y, s) = (0.3, -0.7, 0.2);
    let r = common::rho(x, y, s);
    let zf_term = 2.0 * s / r * grad_rho_sq(x, y, s);
    assert!((zf_term - 2.0 * s * (x * x + y * y) / r.powi(3)).abs() < 1e-14);
    assert!(screwy_residual(&GroupSpec::free_step2(3).unwrap(), &p("x")).is_err());
}

#[test]
fn conjecture_probe_reports() {
    let fx = Functionals::h1();
    let grid = linspace(0.02, 1.0, 10);
    for name in ["paper-f", "paper-fmia", "x"] {
        let rep = fx.conjecture_probe(&p(name), &grid, Side::Right).unwrap();
        assert!(rep.smallest_c.is_finite() && rep.smallest_c > 0.0, "{name}");
        assert_eq!(rep.products.len(), grid.len());
    }
    let f = fx.conjecture_probe(&p("paper-f"), &grid, Side::Right).unwrap();
    assert!(f.smallest_c <= 1.0);
    assert!(fx.conjecture_probe(&p("x + 1"), &grid, Side::Right).is_err());
}
