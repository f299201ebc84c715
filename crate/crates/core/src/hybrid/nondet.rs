use serde::Serialize;

use super::{flight, BallParams, BallState, Duration, Evolution, Trajectory};
use crate::error::{Error, Result};

/// `{(0, m·impact) | m ∈ [lo, hi]}` together with the output evolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondetStep {
    pub impact_speed: f64,
    pub lo: BallState,
    pub hi: BallState,
    pub out: Evolution,
}

impl NondetStep {
    /// The successor for restitution factor `m`.
    pub fn at(&self, m: f64) -> BallState {
        BallState {
            p: 0.0,
            v: m * self.impact_speed,
        }
    }
}

pub fn nondet_ball_step(s: BallState, params: &BallParams) -> Result<NondetStep> {
    let (lo, hi) = params.restitution.bounds();
    if s.p == 0.0 && s.v == 0.0 {
        return Ok(NondetStep {
            impact_speed: 0.0,
            lo: s,
            hi: s,
            out: Evolution::constant(0.0, Duration::Finite(0.0)),
        });
    }
    let (out, impact_speed) = flight(s, params.g_mag)?;
    let step = |m: f64| BallState {
        p: 0.0,
        v: m * impact_speed,
    };
    Ok(NondetStep {
        impact_speed,
        lo: step(lo),
        hi: step(hi),
        out,
    })
}

/// The successor set computed as `V ev ∘ τ ∘ ⟨f, g⟩`, with the endpoints of
/// `f(p, v) = {0} × [lo, hi]` standing in for the compact set.
pub fn strength_next(s: BallState, params: &BallParams) -> Result<(BallState, BallState)> {
    let (lo, hi) = params.restitution.bounds();
    let (out, _) = flight(s, params.g_mag)?;
    let d = out.duration.as_f64();
    let g_signed = -params.g_mag;
    let f = [(0.0, lo), (0.0, hi)];
    let g = move |(_x, y): (f64, f64)| BallState {
        p: 0.0,
        v: (s.v + g_signed * d) * -y,
    };
    // τ pairs every element of the set with the same g; V ev applies it
    let tau: Vec<((f64, f64), _)> = f.iter().map(|&e| (e, &g)).collect();
    let image: Vec<BallState> = tau.into_iter().map(|(e, g)| g(e)).collect();
    Ok((image[0], image[1]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BehaviourNode {
    pub state: BallState,
    /// Restitution factor that produced this node, `None` at the root.
    pub factor: Option<f64>,
    pub evolution: Evolution,
    pub children: Vec<BehaviourNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelEnvelope {
    pub level: usize,
    pub nodes: usize,
    pub min_speed: f64,
    pub max_speed: f64,
    pub min_apex: f64,
    pub max_apex: f64,
    pub min_duration: f64,
    pub max_duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BehaviourTree {
    pub root: BehaviourNode,
    pub samples: usize,
    /// One entry per level, the root being level 1.
    pub envelope: Vec<LevelEnvelope>,
}

impl BehaviourTree {
    /// The trajectory obtained by always taking child `choice`, clamped to
    /// the last child.
    pub fn path(&self, choice: usize) -> Trajectory {
        let mut t = Trajectory::empty();
        let mut node = &self.root;
        loop {
            t.push(node.state, node.evolution);
            match node.children.get(choice.min(node.children.len().saturating_sub(1))) {
                Some(c) => node = c,
                None => return t,
            }
        }
    }

    /// Always the smallest factor.
    pub fn lowest(&self) -> Trajectory {
        self.path(0)
    }

    /// Always the largest factor.
    pub fn highest(&self) -> Trajectory {
        self.path(usize::MAX)
    }
}

const MAX_NODES: usize = 1 << 20;

/// Factors `lo`, `k` equispaced interior points, `hi`.
fn factors(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let mut out = vec![lo];
    out.extend((1..=k).map(|i| lo + (hi - lo) * i as f64 / (k + 1) as f64));
    out.push(hi);
    out
}

pub fn unfold_nondet(s0: BallState, depth: usize, k_samples: usize, params: &BallParams) -> Result<BehaviourTree> {
    if depth == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let branching = k_samples + 2;
    let nodes = (0..depth as u32).try_fold(0usize, |acc, l| {
        branching.checked_pow(l).and_then(|n| acc.checked_add(n))
    });
    match nodes {
        Some(n) if n <= MAX_NODES => {}
        _ => {
            return Err(Error::SizeCapExceeded {
                what: "behaviour tree".into(),
                needed: nodes.unwrap_or(usize::MAX),
                cap: MAX_NODES,
            })
        }
    }
    let (lo, hi) = params.restitution.bounds();
    let ms = factors(lo, hi, k_samples);
    fn grow(s: BallState, factor: Option<f64>, left: usize, ms: &[f64], params: &BallParams) -> Result<BehaviourNode> {
        let step = nondet_ball_step(s, params)?;
        let children = if left == 0 {
            vec![]
        } else {
            ms.iter()
                .map(|&m| grow(step.at(m), Some(m), left - 1, ms, params))
                .collect::<Result<_>>()?
        };
        Ok(BehaviourNode {
            state: s,
            factor,
            evolution: step.out,
            children,
        })
    }
    let root = grow(s0, None, depth - 1, &ms, params)?;
    let mut envelope = Vec::with_capacity(depth);
    let mut level = vec![&root];
    for l in 1..=depth {
        let fold = |f: fn(&BehaviourNode) -> f64| {
            level.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), n| (a.min(f(n)), b.max(f(n))))
        };
        let (min_speed, max_speed) = fold(|n| n.state.v.abs());
        let (min_apex, max_apex) = fold(|n| n.evolution.apex());
        let (min_duration, max_duration) = fold(|n| n.evolution.duration.as_f64());
        envelope.push(LevelEnvelope {
            level: l,
            nodes: level.len(),
            min_speed,
            max_speed,
            min_apex,
            max_apex,
            min_duration,
            max_duration,
        });
        level = level.iter().flat_map(|n| n.children.iter()).collect();
    }
    Ok(BehaviourTree {
        root,
        samples: k_samples,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{ball_step, unfold_ball};
    use super::*;

    fn nd() -> BallParams {
        BallParams::interval(9.8, 0.5, 0.7).unwrap()
    }

    #[test]
    fn drop_spans_the_interval() {
        let step = nondet_ball_step(BallState::new(5.0, 0.0).unwrap(), &nd()).unwrap();
        assert!((step.impact_speed - 9.899495).abs() < 1e-6);
        assert!((step.lo.v - 4.949747).abs() < 1e-6);
        assert!((step.hi.v - 6.929646).abs() < 1e-6);
        let up = nondet_ball_step(BallState::new(0.0, 5.0).unwrap(), &nd()).unwrap();
        assert!((up.lo.v - 2.5).abs() < 1e-12 && (up.hi.v - 3.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_interval_is_deterministic() {
        let s = BallState::new(5.0, 0.0).unwrap();
        let p = BallParams::interval(9.8, 0.5, 0.5).unwrap();
        let step = nondet_ball_step(s, &p).unwrap();
        let (next, out) = ball_step(s, &BallParams::deterministic(9.8, 0.5).unwrap()).unwrap();
        assert_eq!((step.lo, step.hi, step.out), (next, next, out));
        let tree = unfold_nondet(s, 4, 2, &p).unwrap();
        for c in 0..4 {
            assert_eq!(tree.path(c), unfold_ball(s, 4, &BallParams::deterministic(9.8, 0.5).unwrap()).unwrap());
        }
    }

    #[test]
    fn tree_shape_and_envelope() {
        let s = BallState::new(5.0, 0.0).unwrap();
        let one = unfold_nondet(s, 1, 3, &nd()).unwrap();
        assert!(one.root.children.is_empty());
        let two = unfold_nondet(s, 2, 0, &nd()).unwrap();
        let speeds: Vec<f64> = two.root.children.iter().map(|c| c.state.v).collect();
        assert_eq!(speeds.len(), 2);
        assert!((speeds[0] - 4.949747).abs() < 1e-6 && (speeds[1] - 6.929646).abs() < 1e-6);
        let e = &two.envelope[1];
        assert!((e.min_apex - 1.25).abs() < 1e-9 && (e.max_apex - 2.45).abs() < 1e-9);
        assert!(two.root.children.iter().all(|c| c.state.p == 0.0));
    }

    #[test]
    fn extremal_paths_bound_every_level() {
        let s = BallState::new(5.0, 0.0).unwrap();
        let tree = unfold_nondet(s, 4, 3, &nd()).unwrap();
        let (lo, hi) = (tree.lowest(), tree.highest());
        for (l, e) in tree.envelope.iter().enumerate() {
            assert_eq!(e.nodes, 5usize.pow(l as u32));
            assert_eq!(e.min_speed, lo.segments[l].start.v.abs());
            assert_eq!(e.max_speed, hi.segments[l].start.v.abs());
            assert_eq!(e.max_duration, hi.durations()[l]);
        }
    }

    #[test]
    fn samples_stay_between_endpoints() {
        let s = BallState::new(2.0, 1.0).unwrap();
        let step = nondet_ball_step(s, &nd()).unwrap();
        for &m in &factors(0.5, 0.7, 7) {
            let v = step.at(m).v;
            assert!(step.lo.v <= v && v <= step.hi.v);
        }
    }

    #[test]
    fn strength_composite_matches_the_step() {
        for (p, v) in [(5.0, 0.0), (0.0, 5.0), (1.5, -2.0), (3.0, 4.0), (0.0, 0.0)] {
            let s = BallState::new(p, v).unwrap();
            let step = nondet_ball_step(s, &nd()).unwrap();
            let (a, b) = strength_next(s, &nd()).unwrap();
            assert!((a.v - step.lo.v).abs() <= 1e-12 * step.lo.v.abs().max(1.0), "({p},{v})");
            assert!((b.v - step.hi.v).abs() <= 1e-12 * step.hi.v.abs().max(1.0), "({p},{v})");
        }
    }

    #[test]
    fn oversized_trees_are_refused() {
        let s = BallState::new(5.0, 0.0).unwrap();
        assert!(matches!(unfold_nondet(s, 30, 2, &nd()), Err(Error::SizeCapExceeded { .. })));
        assert!(unfold_nondet(s, 0, 2, &nd()).is_err());
    }
}
