use std::f64::consts::PI;

use anyhow::{anyhow, bail, Result};
use carnot_core::functionals::Functionals;
use carnot_core::gauge::verify_gauge;
use carnot_core::group::parse_rational;
use carnot_core::heat::{self, SimulationParams};
use carnot_core::polycalc::{
    bochner_left_terms, bochner_residual_right, carre_du_champ, difference_residual,
    harmonic_basis, heisenberg_bochner_residual, horizontal_laplacian, left_fields, right_fields,
    Poly, QuadraticForm, Side,
};
use carnot_core::scan::{linspace, monotonicity_scan, DEFAULT_TOL};
use carnot_core::{corpus, GroupSpec, Verdict};
use num::{BigRational, ToPrimitive};

use crate::output::{num, print_scan, write_estimates_csv, write_rows_csv, write_scan_csv};
use crate::settings::Options;

fn poly(opts: &Options, spec: &GroupSpec, default: &str) -> Result<Poly> {
    Ok(corpus::resolve(opts.poly.as_deref().unwrap_or(default), spec)?)
}

fn radii(opts: &Options, rmin: f64, rmax: f64, n: usize) -> Vec<f64> {
    linspace(
        opts.rmin.unwrap_or(rmin),
        opts.rmax.unwrap_or(rmax),
        opts.n.unwrap_or(n),
    )
}

fn side(opts: &Options) -> Side {
    opts.side.unwrap_or(Side::Right)
}

pub fn identities(opts: &Options) -> Result<String> {
    let spec = opts.spec()?;
    let f = poly(opts, &spec, "paper-f")?;
    println!("group: {}", spec.name());
    println!("f = {f}");
    let lap = horizontal_laplacian(&spec, &f, Side::Left);
    println!("laplacian f = {lap}");
    for (i, x) in left_fields(&spec).iter().enumerate() {
        let xf = x.apply(&f);
        println!("X{} f = {xf}", i + 1);
        println!("X{}^2 f = {}", i + 1, x.apply(&xf));
    }
    for (i, x) in right_fields(&spec).iter().enumerate() {
        println!("X~{} f = {}", i + 1, x.apply(&f));
    }
    let left = carre_du_champ(&spec, &f, Side::Left);
    let right = carre_du_champ(&spec, &f, Side::Right);
    let lap_left = horizontal_laplacian(&spec, &left, Side::Left);
    println!("|grad f|^2 = {left}");
    println!("|grad~ f|^2 = {right}");
    println!("laplacian |grad f|^2 = {lap_left}");
    println!(
        "laplacian |grad~ f|^2 = {}",
        horizontal_laplacian(&spec, &right, Side::Left)
    );
    if spec.heisenberg_index() == Some(1) {
        let t = f.diff(f.layout().sigma(0));
        let third = BigRational::new(1.into(), 3.into());
        let corrected = &left + &(&t * &t).scale(&third);
        println!(
            "laplacian (|grad f|^2 + 1/3 (Tf)^2) = {}",
            horizontal_laplacian(&spec, &corrected, Side::Left)
        );
    }
    println!("difference residual = {}", difference_residual(&spec, &f));
    if let Some(disk) = &opts.disk {
        let r2 = parse_rational(disk)?;
        let form = QuadraticForm::from_poly(&lap_left)?;
        let sign = if form.nonpositive_on_disk(&r2) {
            "nonpositive"
        } else if form.nonnegative_on_disk(&r2) {
            "nonnegative"
        } else {
            "indefinite"
        };
        println!("laplacian |grad f|^2 on |z|^2 <= {r2}: {sign}");
        return Ok(sign.into());
    }
    Ok(if lap.is_zero() { "harmonic" } else { "not-harmonic" }.into())
}

fn bochner_one(spec: &GroupSpec, f: &Poly) -> Result<bool> {
    let right = bochner_residual_right(spec, f);
    let left = bochner_left_terms(spec, f).residual;
    let diff = difference_residual(spec, f);
    let mut ok = right.is_zero() && left.is_zero() && diff.is_zero();
    print!("{f}: right {right}, left {left}, difference {diff}");
    if spec.heisenberg_index().is_some() && horizontal_laplacian(spec, f, Side::Left).is_zero() {
        let b22 = heisenberg_bochner_residual(spec, f)?;
        print!(", heisenberg {b22}");
        ok &= b22.is_zero();
    }
    println!();
    Ok(ok)
}

pub fn bochner(opts: &Options) -> Result<String> {
    let spec = opts.spec()?;
    println!("group: {}", spec.name());
    let mut ok = true;
    if opts.poly.is_some() {
        ok &= bochner_one(&spec, &poly(opts, &spec, "")?)?;
    } else {
        let top = opts.degree.unwrap_or(3);
        for kappa in 0..=top {
            for p in harmonic_basis(&spec, kappa) {
                ok &= bochner_one(&spec, &p)?;
            }
        }
    }
    Ok(if ok { "zero" } else { "nonzero" }.into())
}

pub fn gauge_verify(opts: &Options) -> Result<String> {
    let spec = opts.spec()?;
    let check = verify_gauge(&spec)?;
    println!("group: {}", spec.name());
    println!("laplacian rho^(2-Q) = 0: {}", check.fundamental_solution);
    println!("|grad rho|^2 rho^2 = |z|^2: {}", check.horizontal_gradient);
    Ok(if check.passed() { "pass" } else { "fail" }.into())
}

fn functionals(opts: &Options) -> Result<Functionals> {
    Ok(Functionals::new(&opts.spec()?, opts.grid())?)
}

pub fn omega(opts: &Options) -> Result<String> {
    let fx = functionals(opts)?;
    let alpha = opts.alpha.unwrap_or(2.0);
    let radii = [0.25, 0.5, 1.0, 2.0];
    let mut values = Vec::new();
    for r in radii {
        let v = fx.omega_at(alpha, r)?;
        println!("r = {:<6} omega = {}", num(r), num(v));
        values.push(v);
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let spread = (hi - lo) / hi.abs();
    println!("omega_{} = {}", num(alpha), num(values[2]));
    println!("pi/alpha = {}", num(PI / alpha));
    println!("relative spread over r: {}", num(spread));
    if let Some(path) = &opts.csv {
        let rows: Vec<Vec<f64>> = radii.iter().zip(&values).map(|(r, v)| vec![*r, *v]).collect();
        write_rows_csv(path, &["r", "omega"], &rows)?;
    }
    Ok(if spread <= 1e-10 { "r-independent" } else { "r-dependent" }.into())
}

pub fn scan_d(opts: &Options) -> Result<String> {
    let fx = functionals(opts)?;
    let f = poly(opts, fx.spec(), "paper-f")?;
    let alpha = opts.alpha.unwrap_or(2.0);
    let side = side(opts);
    let grid = radii(opts, 0.02, 2.0, 50);
    let quantity = opts.quantity.as_deref().unwrap_or("d");
    let report = match quantity {
        "d" => monotonicity_scan(&grid, |r| fx.d_alpha(&f, alpha, r, side), DEFAULT_TOL)?,
        "average" => {
            let carre = carre_du_champ(fx.spec(), &f, side);
            monotonicity_scan(&grid, |r| fx.surface_average(&carre, r), DEFAULT_TOL)?
        }
        other => bail!("unknown quantity '{other}' (expected d or average)"),
    };
    let lower = fx.omega(alpha)? * carre_du_champ(fx.spec(), &f, Side::Left).at_origin_value();
    print_scan(&format!("{quantity} of {f}, {side}, alpha = {}", num(alpha)), &report);
    if quantity == "d" {
        let ok = report.values.iter().all(|v| lower <= v + 1e-8);
        println!("lower bound omega*|grad f(e)|^2 = {}: {}", num(lower), if ok { "holds" } else { "violated" });
    }
    println!(
        "strict steps: {}",
        num(report.strict_fraction(report.verdict))
    );
    if let Some(path) = &opts.csv {
        write_scan_csv(path, &report)?;
    }
    Ok(report.verdict.to_string())
}

pub fn scan_acf(opts: &Options) -> Result<String> {
    let fx = functionals(opts)?;
    let f = poly(opts, fx.spec(), "paper-f")?;
    let alpha = opts.alpha.unwrap_or(2.0);
    let side = side(opts);
    let grid = radii(opts, 0.02, 2.0, 50);
    let report = monotonicity_scan(&grid, |r| Ok(fx.acf_product(&f, alpha, r, side)?.product), DEFAULT_TOL)?;
    print_scan(&format!("D(f+) D(f-) of {f}, {side}, alpha = {}", num(alpha)), &report);
    if let Some(path) = &opts.csv {
        write_scan_csv(path, &report)?;
    }
    Ok(report.verdict.to_string())
}

pub fn frequency(opts: &Options) -> Result<String> {
    let fx = functionals(opts)?;
    let f = poly(opts, fx.spec(), "paper-f")?;
    let grid = radii(opts, 0.02, 1.0, 20);
    let reports = grid
        .iter()
        .map(|&r| fx.frequency(&f, r))
        .collect::<carnot_core::Result<Vec<_>>>()?;
    let values: Vec<f64> = reports.iter().map(|r| r.energy_form).collect();
    let report = carnot_core::ScanReport::from_values(grid.clone(), values, DEFAULT_TOL)?;
    print_scan(&format!("frequency of {f}"), &report);
    let worst = reports.iter().fold(0.0f64, |a, r| a.max(r.difference / r.energy_form.abs()));
    println!("max relative gap between energy and boundary forms: {}", num(worst));
    let parts = f.homogeneous_parts();
    if parts.len() == 2 {
        let mut it = parts.values();
        let (ph, pk) = (it.next().expect("two parts"), it.next().expect("two parts"));
        if let Ok(two) = fx.frequency_two_term(ph, pk) {
            println!("two-term split: P{} = {ph}, P{} = {pk}", two.h, two.k);
            println!("a = {}, b = {}, c = {}", num(two.a), num(two.b), num(two.c));
            for &r in &grid {
                println!(
                    "r = {:<8} E closed = {:<18} E direct = {}",
                    num(r),
                    num(two.closed_form(r)),
                    num(fx.two_term_direct(&two, r)?)
                );
            }
        }
    }
    if let Some(path) = &opts.csv {
        write_scan_csv(path, &report)?;
    }
    Ok(report.verdict.to_string())
}

pub fn ortho_defect(opts: &Options) -> Result<String> {
    let fx = functionals(opts)?;
    let ph = poly(opts, fx.spec(), "p1")?;
    let pk = corpus::resolve(opts.poly2.as_deref().unwrap_or("p3"), fx.spec())?;
    let d = fx.orthogonality_defect(&ph, &pk)?;
    println!("P_h = {ph}");
    println!("P_k = {pk}");
    println!("lhs (k-h) int P_h P_k = {}", num(d.lhs));
    println!("rhs 4 int s (P_k Theta P_h - P_h Theta P_k) = {}", num(d.rhs));
    println!("lhs - rhs = {}", num(d.lhs - d.rhs));
    let scale = d.lhs.abs().max(d.rhs.abs()).max(1e-300);
    if d.defect > 1e-6 * scale && d.defect > 1e-12 {
        return Ok("identity-fails".into());
    }
    Ok(if d.lhs.abs() > 1e-10 { "nonorthogonal" } else { "orthogonal" }.into())
}

pub fn heat(opts: &Options) -> Result<String> {
    let spec = opts.spec()?;
    let f = poly(opts, &spec, "paper-f")?;
    let times = opts
        .times
        .clone()
        .unwrap_or_else(|| (1..=10).map(|i| i as f64 / 10.0).collect());
    let params = SimulationParams::new(
        opts.dt.unwrap_or(1e-3),
        opts.paths.unwrap_or(10_000),
        opts.seed.unwrap_or(0),
        times,
    );
    let ens = heat::simulate(&spec, &params)?;
    let quantity = opts.quantity.as_deref().unwrap_or("functional");
    let est = match quantity {
        "functional" => heat::heat_functional(&ens, &f)?,
        "pt" => heat::pt_values(&ens, &f)?,
        other => bail!("unknown quantity '{other}' (expected functional or pt)"),
    };
    println!(
        "{quantity} of {f}: {} paths, dt = {}, seed = {}",
        ens.n_paths(),
        num(ens.dt()),
        ens.seed()
    );
    println!("{:>10} {:>20} {:>20}", "t", "estimate", "stderr");
    for e in &est {
        println!("{:>10} {:>20} {:>20}", num(e.t), num(e.mean), num(e.stderr));
    }
    let verdict = if est.len() >= carnot_core::scan::MIN_POINTS {
        carnot_core::ScanReport::from_estimates(
            est.iter().map(|e| e.t).collect(),
            est.iter().map(|e| e.mean).collect(),
            est.iter().map(|e| e.stderr).collect(),
            3.0,
        )?
        .verdict
    } else {
        Verdict::Inconclusive
    };
    println!("verdict: {verdict}");
    if quantity == "functional" {
        let lb = heat::lower_bound_check(&ens, &f)?;
        println!(
            "lower bound |grad f(e,0)|^2 = {}: {}",
            num(lb.lower),
            if lb.passed { "holds" } else { "violated" }
        );
    }
    if let Some(path) = &opts.csv {
        write_estimates_csv(path, &est)?;
    }
    Ok(verdict.to_string())
}

pub fn probe_conjecture(opts: &Options) -> Result<String> {
    let fx = functionals(opts)?;
    let f = poly(opts, fx.spec(), "paper-f")?;
    let grid = radii(opts, 0.02, 1.0, 50);
    let report = fx.conjecture_probe(&f, &grid, side(opts))?;
    println!("f = {f}");
    println!("D(f+,1) = {}, D(f-,1) = {}", num(report.plus_at_one), num(report.minus_at_one));
    let bound = 1.0 + report.plus_at_one + report.minus_at_one;
    println!("{:>16} {:>20} {:>20}", "r", "product", "ratio");
    let mut rows = Vec::new();
    for (r, p) in report.grid.iter().zip(&report.products) {
        println!("{:>16} {:>20} {:>20}", num(*r), num(*p), num(p / bound));
        rows.push(vec![*r, *p, p / bound]);
    }
    println!("smallest admissible C = {}", num(report.smallest_c));
    if let Some(path) = &opts.csv {
        write_rows_csv(path, &["r", "product", "ratio"], &rows)?;
    }
    if report.smallest_c.is_finite() {
        Ok("finite".into())
    } else {
        Err(anyhow!("no finite constant on this grid"))
    }
}

trait OriginValue {
    fn at_origin_value(&self) -> f64;
}

impl OriginValue for Poly {
    fn at_origin_value(&self) -> f64 {
        self.at_origin().to_f64().unwrap_or(f64::NAN)
    }
}
