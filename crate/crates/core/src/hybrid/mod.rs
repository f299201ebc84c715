//! Duration-truncated evolutions and the bouncing ball.
//!
//! Gravity is stored as a magnitude `g_mag > 0`. Inside the motion law and
//! the rebound the signed value `-g_mag` is used, while the flight time is
//! `d = (v + √(v² + 2·g_mag·p)) / g_mag`.

mod export;
mod nondet;
mod stability;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use export::{export_trajectory, fmt_sig, round_sig, ExportFormat, DEFAULT_STEP};
pub use nondet::{
    nondet_ball_step, strength_next, unfold_nondet, BehaviourNode, BehaviourTree, LevelEnvelope, NondetStep,
};
pub use stability::{stability_probe, HybridSystem, JumpRestitution, StabilityReport};

/// Element of the one-point compactification of `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Duration {
    Finite(f64),
    Infinite,
}

impl Duration {
    pub fn finite(d: f64) -> Result<Duration> {
        if d.is_nan() || d < 0.0 {
            return Err(Error::Invalid(format!("duration {d} is negative")));
        }
        Ok(if d.is_infinite() {
            Duration::Infinite
        } else {
            Duration::Finite(d)
        })
    }

    /// `min(t, d)`.
    pub fn clamp(self, t: f64) -> f64 {
        match self {
            Duration::Finite(d) => t.min(d),
            Duration::Infinite => t,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Duration::Finite(d) => d,
            Duration::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Duration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Duration::Finite(d) => s.serialize_f64(round_sig(*d)),
            Duration::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `t ↦ a0 + a1·t + a2·t²` on `[0, duration]`, frozen afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolution {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub duration: Duration,
}

impl Serialize for Evolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Evolution", 4)?;
        st.serialize_field("a0", &round_sig(self.a0))?;
        st.serialize_field("a1", &round_sig(self.a1))?;
        st.serialize_field("a2", &round_sig(self.a2))?;
        st.serialize_field("duration", &self.duration)?;
        st.end()
    }
}

impl Evolution {
    pub fn constant(c: f64, duration: Duration) -> Evolution {
        Evolution {
            a0: c,
            a1: 0.0,
            a2: 0.0,
            duration,
        }
    }

    /// The polynomial itself, ignoring the duration.
    pub fn raw(&self, t: f64) -> f64 {
        self.a0 + t * (self.a1 + t * self.a2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.raw(self.duration.clamp(t))
    }

    pub fn end_value(&self) -> f64 {
        self.eval(f64::INFINITY)
    }

    /// Largest value on `[0, d]`.
    pub fn apex(&self) -> f64 {
        let d = self.duration.as_f64();
        let mut best = self.raw(0.0).max(self.end_value());
        if self.a2 < 0.0 {
            let t = -self.a1 / (2.0 * self.a2);
            if t > 0.0 && t < d {
                best = best.max(self.raw(t));
            }
        }
        best
    }
}

/// `f(t) = f(min(t, d))` on every grid point.
pub fn h_member(f: impl Fn(f64) -> f64, d: Duration, grid: &[f64]) -> bool {
    grid.iter().all(|&t| f(t) == f(d.clamp(t)))
}

pub fn truncate(e: &Evolution, t: f64) -> f64 {
    e.eval(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallState {
    pub p: f64,
    pub v: f64,
}

impl BallState {
    pub fn new(p: f64, v: f64) -> Result<BallState> {
        let s = BallState { p, v };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !self.p.is_finite() || !self.v.is_finite() {
            return Err(Error::InvalidState(format!("({}, {}) is not finite", self.p, self.v)));
        }
        if self.p < 0.0 {
            return Err(Error::InvalidState(format!("height {} is below ground", self.p)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Restitution {
    Factor(f64),
    Interval { lo: f64, hi: f64 },
}

impl Restitution {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Restitution::Factor(m) => (m, m),
            Restitution::Interval { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallParams {
    pub g_mag: f64,
    pub restitution: Restitution,
}

impl BallParams {
    pub fn new(g_mag: f64, restitution: Restitution) -> Result<BallParams> {
        if !(g_mag.is_finite() && g_mag > 0.0) {
            return Err(Error::Invalid(format!("gravity magnitude {g_mag} must be positive")));
        }
        let (lo, hi) = restitution.bounds();
        let inside = |m: f64| m > 0.0 && m < 1.0;
        if !(inside(lo) && inside(hi) && lo <= hi) {
            return Err(Error::Invalid(format!("restitution [{lo}, {hi}] is not a nonempty subset of (0,1)")));
        }
        Ok(BallParams { g_mag, restitution })
    }

    pub fn deterministic(g_mag: f64, factor: f64) -> Result<BallParams> {
        BallParams::new(g_mag, Restitution::Factor(factor))
    }

    pub fn interval(g_mag: f64, lo: f64, hi: f64) -> Result<BallParams> {
        BallParams::new(g_mag, Restitution::Interval { lo, hi })
    }

    fn factor(&self) -> Result<f64> {
        match self.restitution {
            Restitution::Factor(m) => Ok(m),
            Restitution::Interval { lo, hi } if lo == hi => Ok(lo),
            Restitution::Interval { lo, hi } => {
                Err(Error::Invalid(format!("a deterministic step needs one factor, got [{lo}, {hi}]")))
            }
        }
    }
}

/// Flight until the ground and the speed at impact, `|v - g·d|`, which by
/// energy conservation is `√(v² + 2gp)`.
pub(crate) fn flight(s: BallState, g_mag: f64) -> Result<(Evolution, f64)> {
    s.validate()?;
    let root = (s.v * s.v + 2.0 * g_mag * s.p).sqrt();
    // the second form avoids cancellation when v < 0
    let d = if s.v >= 0.0 {
        (s.v + root) / g_mag
    } else {
        2.0 * s.p / (root - s.v)
    };
    let d = if d.is_nan() { 0.0 } else { d };
    let out = Evolution {
        a0: s.p,
        a1: s.v,
        a2: -g_mag / 2.0,
        duration: Duration::Finite(d),
    };
    Ok((out, root))
}

pub fn ball_step(s: BallState, params: &BallParams) -> Result<(BallState, Evolution)> {
    let factor = params.factor()?;
    if s.p == 0.0 && s.v == 0.0 {
        return Ok((s, Evolution::constant(0.0, Duration::Finite(0.0))));
    }
    let (out, impact) = flight(s, params.g_mag)?;
    Ok((BallState { p: 0.0, v: factor * impact }, out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub start: BallState,
    pub evolution: Evolution,
    /// Time of the bounce that starts this segment.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    pub horizon: f64,
}

impl Trajectory {
    pub fn empty() -> Trajectory {
        Trajectory {
            segments: vec![],
            horizon: 0.0,
        }
    }

    pub(crate) fn push(&mut self, start: BallState, evolution: Evolution) {
        self.segments.push(Segment {
            start,
            evolution,
            offset: self.horizon,
        });
        self.horizon += evolution.duration.as_f64();
    }

    /// Position at global time `t`, held at the last value after the horizon.
    pub fn position(&self, t: f64) -> Option<f64> {
        let k = self.segments.partition_point(|s| s.offset <= t);
        let seg = self.segments.get(k.checked_sub(1)?)?;
        Some(seg.evolution.eval(t - seg.offset))
    }

    /// Initial velocity of every segment.
    pub fn speeds(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.start.v).collect()
    }

    pub fn durations(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.evolution.duration.as_f64()).collect()
    }
}

pub fn unfold_ball(s0: BallState, n_bounces: usize, params: &BallParams) -> Result<Trajectory> {
    if n_bounces == 0 {
        return Err(Error::Invalid("need at least one bounce".into()));
    }
    let mut traj = Trajectory::empty();
    let mut s = s0;
    for _ in 0..n_bounces {
        let (next, out) = ball_step(s, params)?;
        traj.push(s, out);
        s = next;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> BallParams {
        BallParams::deterministic(9.8, 0.5).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn thrown_up_from_the_ground() {
        let (next, out) = ball_step(BallState::new(0.0, 5.0).unwrap(), &params()).unwrap();
        assert!(rel(out.duration.as_f64(), 10.0 / 9.8) < 1e-12);
        assert!(rel(next.v, 2.5) < 1e-12);
        assert_eq!(next.p, 0.0);
        assert!(out.end_value().abs() < 1e-9);
    }

    #[test]
    fn dropped_from_five_metres() {
        let (next, out) = ball_step(BallState::new(5.0, 0.0).unwrap(), &params()).unwrap();
        assert!(rel(out.duration.as_f64(), 98f64.sqrt() / 9.8) < 1e-12);
        assert!((next.v - 4.949747468).abs() < 1e-9);
        assert!(out.end_value().abs() < 1e-9 * 5.0);
        assert_eq!(truncate(&out, 2.0), out.end_value());
        assert_eq!(truncate(&out, 0.0), 5.0);
    }

    #[test]
    fn rest_is_fixed() {
        let s = BallState::new(0.0, 0.0).unwrap();
        let (next, out) = ball_step(s, &params()).unwrap();
        assert_eq!(next, s);
        assert_eq!(out, Evolution::constant(0.0, Duration::Finite(0.0)));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(BallState::new(-1.0, 0.0), Err(Error::InvalidState(_))));
        let raw = BallState { p: -0.5, v: 1.0 };
        assert!(matches!(ball_step(raw, &params()), Err(Error::InvalidState(_))));
        assert!(BallParams::deterministic(0.0, 0.5).is_err());
        assert!(BallParams::deterministic(9.8, 1.0).is_err());
        assert!(BallParams::interval(9.8, 0.7, 0.5).is_err());
        let nd = BallParams::interval(9.8, 0.5, 0.7).unwrap();
        assert!(ball_step(BallState::new(1.0, 0.0).unwrap(), &nd).is_err());
    }

    #[test]
    fn three_bounces_halve_the_speed() {
        let t = unfold_ball(BallState::new(0.0, 5.0).unwrap(), 3, &params()).unwrap();
        for (got, want) in t.speeds().iter().zip([5.0, 2.5, 1.25]) {
            assert!(rel(*got, want) < 1e-12);
        }
        for w in t.segments.windows(2) {
            let end = w[0].evolution.end_value();
            assert!((end - w[1].evolution.eval(0.0)).abs() < 1e-9);
            assert!((w[0].offset + w[0].evolution.duration.as_f64() - w[1].offset).abs() < 1e-12);
        }
    }

    #[test]
    fn flight_times_from_a_drop() {
        let t = unfold_ball(BallState::new(5.0, 0.0).unwrap(), 2, &params()).unwrap();
        let d = t.durations();
        assert!((d[0] - 1.010153).abs() < 1e-6);
        assert!((d[1] - 2.0 * 4.949747468 / 9.8).abs() < 1e-8);
        let one = unfold_ball(BallState::new(5.0, 0.0).unwrap(), 1, &params()).unwrap();
        assert_eq!(one.segments[0].evolution, ball_step(BallState::new(5.0, 0.0).unwrap(), &params()).unwrap().1);
        assert!(unfold_ball(BallState::new(5.0, 0.0).unwrap(), 0, &params()).is_err());
    }

    #[test]
    fn falling_with_downward_velocity_lands_at_zero() {
        for (p, v) in [(3.0, -40.0), (1e-6, -1e3), (100.0, -0.1), (0.0, -2.0), (2.0, 7.0)] {
            let (next, out) = ball_step(BallState::new(p, v).unwrap(), &params()).unwrap();
            assert!(out.end_value().abs() <= 1e-9 * p.max(1.0), "({p},{v})");
            let impact = (v * v + 2.0 * 9.8 * p).sqrt();
            assert!(rel(next.v, 0.5 * impact) < 1e-12);
            assert!(next.v * next.v < impact * impact);
        }
    }

    #[test]
    fn membership_of_h() {
        let (_, out) = ball_step(BallState::new(5.0, 0.0).unwrap(), &params()).unwrap();
        let d = out.duration;
        let grid: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).chain([d.as_f64() + 1.0]).collect();
        assert!(h_member(|t| out.eval(t), d, &grid));
        assert!(!h_member(|t| out.raw(t), d, &grid));
        assert!(h_member(|t| t * t, Duration::Infinite, &grid));
        let c = Evolution::constant(3.0, Duration::Finite(1.0));
        assert!(grid.iter().all(|&t| c.eval(t) == 3.0));
    }

    #[test]
    fn duration_rejects_negatives() {
        assert!(Duration::finite(-1.0).is_err());
        assert_eq!(Duration::finite(f64::INFINITY).unwrap(), Duration::Infinite);
    }
}
