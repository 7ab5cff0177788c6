//! Horizontal Brownian motion generated by `Δ_H` and Monte Carlo estimates of `P_τ` and of the
//! caloric functional `𝓘(f, t) = (1/t) ∫₀ᵗ P_τ(|∇̃_H f(·, −τ)|²)(e) dτ`.

use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::GroupSpec;
use crate::polycalc::{caloric_constant, carre_du_champ, CompiledPoly, Layout, Poly, Side};
use crate::scan::ScanReport;

pub const DEFAULT_BLOCK: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    pub t_max: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub observation_times: Vec<f64>,
    /// Paths per RNG stream.
    pub block: usize,
    /// Gaussian draws summed into each increment. A run with `dt` and `substeps = 2` shares its
    /// noise with a run at `dt / 2`, which couples the two discretisations.
    #[serde(default = "one")]
    pub substeps: usize,
}

fn one() -> usize {
    1
}

impl SimulationParams {
    pub fn new(dt: f64, n_paths: usize, seed: u64, observation_times: Vec<f64>) -> Self {
        let t_max = observation_times.iter().copied().fold(0.0, f64::max);
        Self {
            t_max,
            dt,
            n_paths,
            seed,
            observation_times,
            block: DEFAULT_BLOCK,
            substeps: 1,
        }
    }
}

/// Group points of every path at every observation time.
#[derive(Clone, Debug)]
pub struct PathEnsemble {
    spec: GroupSpec,
    dt: f64,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
    times: Vec<f64>,
    steps: Vec<usize>,
    /// `points[k]` holds `(z, σ)` of all paths at `times[k]`, path-major.
    points: Vec<Vec<f64>>,
}

impl PathEnsemble {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Observation times, snapped to the step grid.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn dim(&self) -> usize {
        self.spec.m() + self.spec.m2()
    }

    /// Coordinates of path `i` at observation `k`.
    pub fn point(&self, k: usize, i: usize) -> &[f64] {
        let d = self.dim();
        &self.points[k][i * d..(i + 1) * d]
    }

    /// Per-path values `u(G_τ, time(τ))` at observation `k`.
    pub fn samples(&self, p: &CompiledPoly, k: usize, time: f64) -> Vec<f64> {
        let d = self.dim();
        let mut buf = vec![0.0; d + 1];
        buf[d] = time;
        self.points[k]
            .chunks_exact(d)
            .map(|c| {
                buf[..d].copy_from_slice(c);
                p.eval(&buf)
            })
            .collect()
    }

    /// `P_τ u(e)` at every observation time, with `u` evaluated at time coordinate `time(τ)`.
    pub fn expectation(&self, p: &Poly, time: impl Fn(f64) -> f64) -> Vec<Estimate> {
        let c = p.compile();
        self.times
            .iter()
            .enumerate()
            .map(|(k, &tau)| Estimate::from_samples(tau, &self.samples(&c, k, time(tau))))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_samples(t: f64, xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            t,
            mean,
            stderr: (var / n).sqrt(),
        }
    }
}

/// Euler scheme `z += √(2dt) ξ`, `σ_ℓ += ½ ⟨B^ℓ (z_k + z_{k+1})/2, Δz⟩`, all paths from `e`.
pub fn simulate(spec: &GroupSpec, params: &SimulationParams) -> Result<PathEnsemble> {
    let SimulationParams {
        t_max,
        dt,
        n_paths,
        seed,
        ref observation_times,
        block,
        substeps,
    } = *params;
    if !(dt > 0.0 && dt.is_finite()) {
        return invalid("dt must be positive");
    }
    if !(t_max >= dt && t_max.is_finite()) {
        return invalid("t_max must be at least dt");
    }
    if n_paths == 0 || block == 0 || substeps == 0 {
        return invalid("need at least one path, a positive block size and at least one substep");
    }
    if observation_times.is_empty() {
        return invalid("no observation times");
    }
    let n_steps = (t_max / dt).round() as usize;
    let mut steps = Vec::with_capacity(observation_times.len());
    for &t in observation_times {
        if !(t > 0.0 && t <= t_max * (1.0 + 1e-12)) {
            return invalid(format!("observation time {t} outside (0, {t_max}]"));
        }
        let k = ((t / dt).round() as usize).max(1);
        if k > n_steps {
            return invalid(format!("observation time {t} beyond the last step"));
        }
        steps.push(k);
    }
    if steps.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("observation times must be strictly increasing after snapping to dt");
    }

    let m = spec.m();
    let m2 = spec.m2();
    let b: Vec<Vec<Vec<f64>>> = spec
        .structure()
        .iter()
        .map(|mat| {
            mat.iter()
                .map(|row| row.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
                .collect()
        })
        .collect();
    let scale = (2.0 * dt / substeps as f64).sqrt();
    let d = m + m2;
    let nobs = steps.len();
    let nblocks = n_paths.div_ceil(block);

    let blocks: Vec<Vec<Vec<f64>>> = (0..nblocks)
        .into_par_iter()
        .map(|bi| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(bi as u64);
            let count = block.min(n_paths - bi * block);
            let mut out = vec![Vec::with_capacity(count * d); nobs];
            let mut z = vec![0.0; m];
            let mut dz = vec![0.0; m];
            let mut sigma = vec![0.0; m2];
            for _ in 0..count {
                z.fill(0.0);
                sigma.fill(0.0);
                let mut next = 0;
                for step in 1..=steps[nobs - 1] {
                    dz.fill(0.0);
                    for _ in 0..substeps {
                        for v in dz.iter_mut() {
                            let xi: f64 = rng.sample(StandardNormal);
                            *v += scale * xi;
                        }
                    }
                    // ⟨B (z + dz/2), dz⟩ reduces to zᵀ B dz since B is skew
                    for (l, bl) in b.iter().enumerate() {
                        let mut area = 0.0;
                        for i in 0..m {
                            let row = &bl[i];
                            let mut acc = 0.0;
                            for j in 0..m {
                                acc += row[j] * dz[j];
                            }
                            area += z[i] * acc;
                        }
                        sigma[l] += 0.5 * area;
                    }
                    for (zi, di) in z.iter_mut().zip(&dz) {
                        *zi += di;
                    }
                    if step == steps[next] {
                        out[next].extend_from_slice(&z);
                        out[next].extend_from_slice(&sigma);
                        next += 1;
                    }
                }
            }
            out
        })
        .collect();

    let mut points = vec![Vec::with_capacity(n_paths * d); nobs];
    for blk in blocks {
        for (k, chunk) in blk.into_iter().enumerate() {
            points[k].extend(chunk);
        }
    }
    Ok(PathEnsemble {
        spec: spec.clone(),
        dt,
        n_steps,
        n_paths,
        seed,
        times: steps.iter().map(|&k| k as f64 * dt).collect(),
        steps,
        points,
    })
}

fn require_caloric(spec: &GroupSpec, f: &Poly) -> Result<()> {
    caloric_constant(spec, f)
        .map(|_| ())
        .ok_or_else(|| Error::Precondition(format!("{f} does not solve ∂_t f − Δ_H f = const")))
}

/// `|∇̃_H f|²` as a space-time polynomial.
fn right_carre(ens: &PathEnsemble, f: &Poly) -> Result<Poly> {
    if f.layout() != Layout::of(&ens.spec) {
        return invalid("polynomial and ensemble live on different groups");
    }
    require_caloric(&ens.spec, f)?;
    Ok(carre_du_champ(&ens.spec, f, Side::Right))
}

/// `P_τ(|∇̃_H f(·, −τ)|²)(e)` at every observation time.
pub fn pt_values(ens: &PathEnsemble, f: &Poly) -> Result<Vec<Estimate>> {
    let u = right_carre(ens, f)?;
    Ok(ens.expectation(&u, |tau| -tau))
}

/// `𝓘(f, t)` at every observation time: composite trapezoid in `τ` through `τ = 0`, where the
/// integrand equals `|∇̃_H f(e, 0)|²`. The standard error comes from the per-path quadratures.
pub fn heat_functional(ens: &PathEnsemble, f: &Poly) -> Result<Vec<Estimate>> {
    let u = right_carre(ens, f)?;
    let u0 = u.at_origin().to_f64().unwrap_or(f64::NAN);
    let c = u.compile();
    // trapezoid weights in whole steps so that a constant integrand averages exactly
    let mut acc = vec![0.0; ens.n_paths];
    let mut prev_step = 0;
    let mut prev: Vec<f64> = vec![u0; ens.n_paths];
    let mut out = Vec::with_capacity(ens.times.len());
    for (k, &tau) in ens.times.iter().enumerate() {
        let cur = ens.samples(&c, k, -tau);
        let n = (ens.steps[k] - prev_step) as f64;
        for ((a, p), q) in acc.iter_mut().zip(&prev).zip(&cur) {
            *a += n * (p + q);
        }
        let total = 2.0 * ens.steps[k] as f64;
        let per_path: Vec<f64> = acc.iter().map(|a| a / total).collect();
        out.push(Estimate::from_samples(tau, &per_path));
        prev = cur;
        prev_step = ens.steps[k];
    }
    Ok(out)
}

fn report(est: &[Estimate]) -> Result<ScanReport> {
    ScanReport::from_estimates(
        est.iter().map(|e| e.t).collect(),
        est.iter().map(|e| e.mean).collect(),
        est.iter().map(|e| e.stderr).collect(),
        3.0,
    )
}

/// Monotonicity of `τ ↦ P_τ(|∇̃_H f(·, −τ)|²)(e)` up to 3σ overlap.
pub fn pt_monotone_check(ens: &PathEnsemble, f: &Poly) -> Result<ScanReport> {
    report(&pt_values(ens, f)?)
}

/// Monotonicity of `t ↦ 𝓘(f, t)` up to 3σ overlap.
pub fn heat_scan(ens: &PathEnsemble, f: &Poly) -> Result<ScanReport> {
    report(&heat_functional(ens, f)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    /// `|∇_H f(e, 0)|²`
    pub lower: f64,
    pub estimates: Vec<Estimate>,
    pub passed: bool,
}

/// `|∇_H f(e, 0)|² ≤ 𝓘(f, t) + 3·stderr` at every observation time.
pub fn lower_bound_check(ens: &PathEnsemble, f: &Poly) -> Result<LowerBoundReport> {
    let estimates = heat_functional(ens, f)?;
    let lower = carre_du_champ(&ens.spec, f, Side::Left)
        .at_origin()
        .to_f64()
        .unwrap_or(f64::NAN);
    let passed = estimates
        .iter()
        .all(|e| lower <= e.mean + 3.0 * e.stderr + 1e-12 * lower.abs().max(1.0));
    Ok(LowerBoundReport {
        lower,
        estimates,
        passed,
    })
}
