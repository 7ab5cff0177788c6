use carnot_core::heat::{self, Estimate, PathEnsemble, SimulationParams};
use carnot_core::polycalc::{horizontal_laplacian, parse_poly, Poly, Side};
use carnot_core::{corpus, GroupSpec};

fn h1() -> GroupSpec {
    GroupSpec::heisenberg(1).unwrap()
}

fn p(text: &str) -> Poly {
    corpus::resolve(text, &h1()).unwrap()
}

fn tenths() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

fn run(dt: f64, paths: usize, seed: u64, times: Vec<f64>) -> PathEnsemble {
    heat::simulate(&h1(), &SimulationParams::new(dt, paths, seed, times)).unwrap()
}

fn near(e: &Estimate, value: f64, k: f64) -> bool {
    (e.mean - value).abs() <= k * e.stderr
}

/// Trapezoid of `g` over `0` and the observation times, divided by the final time.
fn trapezoid(times: &[f64], g: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut prev = (0.0, g(0.0));
    times
        .iter()
        .map(|&t| {
            let v = g(t);
            acc += 0.5 * (t - prev.0) * (prev.1 + v);
            prev = (t, v);
            acc / t
        })
        .collect()
}

#[test]
fn moments_of_the_endpoint() {
    let dt = 1e-3;
    let ens = run(dt, 100_000, 1, vec![0.25, 0.5, 1.0]);
    let z2 = ens.expectation(&p("x^2"), |_| 0.0);
    let s1 = ens.expectation(&p("s"), |_| 0.0);
    let s2 = ens.expectation(&p("s^2"), |_| 0.0);
    let f = ens.expectation(&p("paper-f"), |_| 0.0);
    for k in 0..3 {
        let t = ens.times()[k];
        assert!(near(&z2[k], 2.0 * t, 3.0), "{:?}", z2[k]);
        assert!(near(&s1[k], 0.0, 3.0));
        // Σ_k ¼ E[(z_k × Δz)²] = t (t − dt) for the discrete area
        assert!(near(&s2[k], t * (t - dt), 3.0), "{:?}", s2[k]);
        assert!(near(&f[k], 0.0, 3.0));
    }
}

#[test]
fn odd_functions_average_to_zero() {
    let ens = run(1e-3, 50_000, 2, vec![0.3, 0.8]);
    for text in ["x", "x^3 - y*s", "y*x^2 + s*x"] {
        for e in ens.expectation(&p(text), |_| 0.0) {
            assert!(near(&e, 0.0, 3.0), "{text}: {e:?}");
        }
    }
}

#[test]
fn functional_closed_forms() {
    let dt = 1e-3;
    let times = tenths();
    let ens = run(dt, 100_000, 3, times.clone());
    for e in heat::heat_functional(&ens, &p("x")).unwrap() {
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }
    for e in heat::heat_functional(&ens, &p("x^2 - y^2")).unwrap() {
        assert!(near(&e, 8.0 * e.t, 3.0), "{e:?}");
    }
    // |∇̃f|² of the paper function: P_τ = 1 + 216τ² − 36τ·dt under the discrete area
    let g = |t: f64| 1.0 + 216.0 * t * t - 36.0 * t * dt;
    let pt = heat::pt_values(&ens, &p("paper-f")).unwrap();
    for e in &pt {
        assert!(near(e, g(e.t), 3.0), "{e:?}");
    }
    let expected = trapezoid(&times, g);
    let func = heat::heat_functional(&ens, &p("paper-f")).unwrap();
    for (e, want) in func.iter().zip(expected) {
        assert!(near(e, want, 3.0), "{e:?} vs {want}");
        assert!(1.0 <= e.mean + 3.0 * e.stderr);
    }
}

#[test]
fn halving_dt_changes_little() {
    let times = vec![0.2, 0.5, 1.0];
    let fine = heat::simulate(&h1(), &SimulationParams::new(1e-3, 20_000, 4, times.clone())).unwrap();
    let mut coarse_params = SimulationParams::new(2e-3, 20_000, 4, times);
    coarse_params.substeps = 2;
    let coarse = heat::simulate(&h1(), &coarse_params).unwrap();
    for name in ["x", "x^2 - y^2", "paper-f", "paper-fmia", "p3"] {
        let a = heat::heat_functional(&fine, &p(name)).unwrap();
        let b = heat::heat_functional(&coarse, &p(name)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.mean - y.mean).abs() <= x.stderr.max(1e-15), "{name}: {x:?} vs {y:?}");
        }
    }
}

#[test]
fn generator_matches_laplacian() {
    let ens = run(1e-3, 100_000, 5, vec![0.49, 0.5, 0.51]);
    let u = p("x^4 + 3*s^2 - x*y + y^2*s");
    let lap = horizontal_laplacian(&h1(), &u, Side::Left);
    let cu = u.compile();
    let lo = ens.samples(&cu, 0, 0.0);
    let hi = ens.samples(&cu, 2, 0.0);
    let mid = ens.samples(&lap.compile(), 1, 0.0);
    // per-path central difference minus the Laplacian, then mean and error
    let h = ens.times()[2] - ens.times()[1];
    let diffs: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .zip(&mid)
        .map(|((a, b), c)| (b - a) / (2.0 * h) - c)
        .collect();
    let est = Estimate::from_samples(0.5, &diffs);
    assert!(near(&est, 0.0, 3.0), "{est:?}");
}

#[test]
fn seed_determinism() {
    let a = run(1e-3, 3000, 7, vec![0.5, 1.0]);
    let b = run(1e-3, 3000, 7, vec![0.5, 1.0]);
    let c = run(1e-3, 3000, 8, vec![0.5, 1.0]);
    let f = p("paper-f");
    let ea = heat::heat_functional(&a, &f).unwrap();
    assert_eq!(ea, heat::heat_functional(&b, &f).unwrap());
    assert_ne!(ea, heat::heat_functional(&c, &f).unwrap());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let d = pool.install(|| run(1e-3, 3000, 7, vec![0.5, 1.0]));
    assert_eq!(ea, heat::heat_functional(&d, &f).unwrap());
}

#[test]
fn monotone_checks_on_the_corpus() {
    let ens = run(1e-3, 20_000, 9, tenths());
    for name in ["paper-f", "paper-fmia", "x^2 - y^2", "p3"] {
        let f = p(name);
        let pt = heat::pt_monotone_check(&ens, &f).unwrap();
        assert!(pt.verdict != carnot_core::Verdict::Nonincreasing && pt.verdict != carnot_core::Verdict::Nonmonotone, "{name}");
        let lb = heat::lower_bound_check(&ens, &f).unwrap();
        assert!(lb.passed, "{name}");
    }
    let time_dependent = parse_poly("x^2 + y^2 + 4*t", &h1()).unwrap();
    assert!(heat::heat_functional(&ens, &time_dependent).is_ok());
    assert!(heat::heat_functional(&ens, &p("x^2")).is_ok());
    assert!(heat::heat_functional(&ens, &parse_poly("x^2*t", &h1()).unwrap()).is_err());
}
