use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ball_step, BallParams, BallState, Evolution, Trajectory};
use crate::error::{Error, Result};

/// A deterministic state machine emitting one evolution per step.
pub trait HybridSystem {
    fn step(&self, s: BallState) -> Result<(BallState, Evolution)>;
}

impl HybridSystem for BallParams {
    fn step(&self, s: BallState) -> Result<(BallState, Evolution)> {
        ball_step(s, self)
    }
}

/// A ball whose restitution factor jumps when the height crosses
/// `threshold`. Its structure map is not continuous, which is what the
/// stability probe should notice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpRestitution {
    pub g_mag: f64,
    pub threshold: f64,
    pub below: f64,
    pub at_or_above: f64,
}

impl JumpRestitution {
    pub fn shipped() -> JumpRestitution {
        JumpRestitution {
            g_mag: 9.8,
            threshold: 5.0,
            below: 0.5,
            at_or_above: 0.9,
        }
    }
}

impl HybridSystem for JumpRestitution {
    fn step(&self, s: BallState) -> Result<(BallState, Evolution)> {
        let m = if s.p < self.threshold { self.below } else { self.at_or_above };
        ball_step(s, &BallParams::deterministic(self.g_mag, m)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub perturbations: usize,
    pub segments: usize,
    pub first_duration_dev: f64,
    pub max_duration_dev: f64,
    pub max_per_segment_sup_dev: f64,
    /// Sup distance of positions per aligned segment, maximised over
    /// perturbations.
    pub per_segment_sup_dev: Vec<f64>,
}

/// Enough bounces to cover `horizon` seconds, stopping early at rest.
fn cover(system: &dyn HybridSystem, s0: BallState, horizon: f64) -> Result<Trajectory> {
    const MAX_BOUNCES: usize = 10_000;
    let mut t = Trajectory::empty();
    let mut s = s0;
    while t.segments.len() < MAX_BOUNCES && (t.segments.is_empty() || t.horizon < horizon) {
        let (next, out) = system.step(s)?;
        t.push(s, out);
        if next == s && out.duration.as_f64() == 0.0 {
            break;
        }
        s = next;
    }
    Ok(t)
}

fn sup_distance(a: &Evolution, b: &Evolution) -> f64 {
    const SAMPLES: usize = 256;
    let end = a.duration.as_f64().max(b.duration.as_f64());
    (0..=SAMPLES)
        .map(|i| {
            let t = end * i as f64 / SAMPLES as f64;
            (a.eval(t) - b.eval(t)).abs()
        })
        .fold(0.0, f64::max)
}

/// Compares the nominal run from `s0` against runs from `n` seeded random
/// states within `delta` of it (max norm, heights clamped at 0).
pub fn stability_probe(
    system: &dyn HybridSystem,
    s0: BallState,
    delta: f64,
    horizon: f64,
    n: usize,
    seed: u64,
) -> Result<StabilityReport> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Invalid(format!("delta {delta} must be nonnegative")));
    }
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::Invalid(format!("horizon {horizon} must be positive")));
    }
    s0.validate()?;
    let nominal = cover(system, s0, horizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = StabilityReport {
        perturbations: n,
        segments: nominal.segments.len(),
        first_duration_dev: 0.0,
        max_duration_dev: 0.0,
        max_per_segment_sup_dev: 0.0,
        per_segment_sup_dev: vec![0.0; nominal.segments.len()],
    };
    for _ in 0..n {
        let s = BallState::new(
            (s0.p + rng.gen_range(-delta..=delta)).max(0.0),
            s0.v + rng.gen_range(-delta..=delta),
        )?;
        let other = cover(system, s, horizon)?;
        for (k, (a, b)) in nominal.segments.iter().zip(&other.segments).enumerate() {
            let dd = (a.evolution.duration.as_f64() - b.evolution.duration.as_f64()).abs();
            if k == 0 {
                report.first_duration_dev = report.first_duration_dev.max(dd);
            }
            report.max_duration_dev = report.max_duration_dev.max(dd);
            let sup = sup_distance(&a.evolution, &b.evolution);
            report.per_segment_sup_dev[k] = report.per_segment_sup_dev[k].max(sup);
            report.max_per_segment_sup_dev = report.max_per_segment_sup_dev.max(sup);
        }
    }
    Ok(report)
}
