#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Box `|x|, |y| ≤ 1`, `|σ| ≤ ¼` enclosing the unit gauge ball of `H¹`.
pub const BOX_VOLUME: f64 = 2.0;

pub fn rho(x: f64, y: f64, s: f64) -> f64 {
    let r2 = x * x + y * y;
    (r2 * r2 + 16.0 * s * s).powf(0.25)
}

/// Mean and standard error of `∫_{B₁} h dg` by rejection sampling from the box.
pub fn mc_ball<F: Fn(f64, f64, f64) -> f64>(h: F, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        let s = rng.random_range(-0.25..0.25);
        let v = if rho(x, y, s) < 1.0 { BOX_VOLUME * h(x, y, s) } else { 0.0 };
        sum += v;
        sq += v * v;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sq / nf - mean * mean).max(0.0);
    (mean, (var / nf).sqrt())
}

/// `|∇_H ρ|² = |z|²/ρ²`.
pub fn grad_rho_sq(x: f64, y: f64, s: f64) -> f64 {
    let r = rho(x, y, s);
    (x * x + y * y) / (r * r)
}

pub fn within(value: f64, (mean, stderr): (f64, f64), k: f64) -> bool {
    (value - mean).abs() <= k * stderr
}
