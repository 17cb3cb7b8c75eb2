#![allow(dead_code)]

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sprank::graph::Ball;
use sprank::optimize::sample_unit_sphere;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the ball.
pub fn point_in_ball<R: Rng>(rng: &mut R, ball: &Ball) -> Vec<f64> {
    let m = ball.dim();
    let dir = sample_unit_sphere(rng, m);
    let r = ball.radius() * rng.random::<f64>().powf(1.0 / m as f64);
    ball.center().iter().zip(&dir).map(|(c, d)| c + r * d).collect()
}

/// Writes a verdict line past the test harness's output capture.
pub fn report(name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{verdict} {name}: {detail}");
    let _ = out.flush();
}
