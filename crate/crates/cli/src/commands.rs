use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use vcoalg::coalg::{
    behaviour_map, behavioural_partition, coalg_equalizer, coreflect, final_coalgebra_if_stabilized,
    is_coalg_hom, NatTransformation,
};
use vcoalg::finspace::{self, FinSpace};
use vcoalg::functorlang::{parse_functor, Functor};
use vcoalg::hybrid::{
    export_trajectory, nondet_ball_step, stability_probe, unfold_ball, unfold_nondet, BallParams, BallState,
    ExportFormat, HybridSystem, JumpRestitution, Trajectory,
};
use vcoalg::json::{coalgebra_to_json, space_to_json};
use vcoalg::vietoris::{self, Variant};
use vcoalg::Error;

use crate::config::Config;
use crate::error::CliError;
use crate::load::{table_json, Loader};
use crate::{
    BallCmd, Branch, Command, FunctorCmd, Property, Sigma, SpaceCmd, SystemArg, VariantArg, VietorisCmd, WitnessCmd,
};

pub struct Outcome {
    pub ok: bool,
    pub result: Value,
}

fn done(result: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { ok: true, result })
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

pub fn dispatch(cmd: &Command, config: &Config, loader: &mut Loader, data_out: Option<&Path>) -> Result<Outcome, CliError> {
    match cmd {
        Command::Space(SpaceCmd::Check { space, require }) => space_check(loader, space, require),
        Command::Functor(FunctorCmd::Parse { expr }) => functor_parse(expr),
        Command::Functor(FunctorCmd::Apply {
            expr,
            space,
            map,
            constants,
        }) => functor_apply(config, loader, expr, space.as_deref(), map.as_deref(), constants),
        Command::Vietoris(VietorisCmd::Build { space, variant, oracle }) => {
            vietoris_build(config, loader, space, *variant, *oracle)
        }
        Command::Witness(WitnessCmd::ClassicVietoris) => {
            let w = vietoris::classic_nonfunctoriality_witness()?;
            Ok(Outcome {
                ok: w.reproduced,
                result: to_json(&w),
            })
        }
        Command::Witness(WitnessCmd::Monocone { space }) => {
            let x = match space {
                Some(p) => loader.space(p)?,
                None => Arc::new(FinSpace::discrete(vec!["a".into(), "b".into()])),
            };
            let w = vietoris::monocone_failure_witness(&x)?;
            Ok(Outcome {
                ok: w.reproduced,
                result: to_json(&w),
            })
        }
        Command::TerminalSeq {
            functor,
            steps,
            constants,
            labels,
        } => terminal(config, loader, functor, *steps, constants, *labels),
        Command::Behaviour { coalg, depth, labels } => behaviour(loader, coalg, *depth, *labels),
        Command::Equalizer { h1, h2 } => equalizer(loader, h1, h2),
        Command::Coreflect { sigma, coalg } => coreflection(loader, *sigma, coalg),
        Command::Ball(b) => ball(config, b, data_out),
    }
}

fn space_check(loader: &mut Loader, path: &Path, require: &[Property]) -> Result<Outcome, CliError> {
    let x = loader.space(path)?;
    let sep = finspace::separation(&x);
    let holds = |p: &Property| match p {
        Property::T0 => sep.is_t0,
        Property::T2 => sep.is_t2,
        Property::Discrete => sep.is_discrete,
        Property::StablyCompact => sep.is_stably_compact_finite,
    };
    let failed: Vec<String> = require
        .iter()
        .filter(|p| !holds(p))
        .map(|p| format!("{p:?}").to_lowercase())
        .collect();
    let opens = x.opens().ok().map(|os| os.iter().map(|o| x.names(o)).collect::<Vec<_>>());
    Ok(Outcome {
        ok: failed.is_empty(),
        result: json!({
            "space": space_to_json(&x),
            "points": x.len(),
            "opens": opens,
            "separation": sep,
            "failed_requirements": failed,
        }),
    })
}

fn functor_parse(expr: &str) -> Result<Outcome, CliError> {
    let e = parse_functor(expr).map_err(Error::from)?;
    done(json!({
        "expr": e.to_string(),
        "depth": e.depth(),
        "constants": e.constants(),
    }))
}

fn functor_apply(
    config: &Config,
    loader: &mut Loader,
    expr: &str,
    space: Option<&Path>,
    map: Option<&Path>,
    constants: &[String],
) -> Result<Outcome, CliError> {
    let env = Arc::new(loader.env(constants)?);
    let f = Functor::parse(expr, env, config.limits)?;
    let mut result = json!({ "expr": f.expr.to_string() });
    if let Some(p) = space {
        let x = loader.space(p)?;
        let fx = f.apply(&x)?;
        result["space"] = space_to_json(&fx.space);
        result["points"] = json!(fx.len());
    }
    if let Some(p) = map {
        let m = loader.map(p)?;
        let fm = f.apply_map(&m)?;
        result["map"] = json!({
            "dom": space_to_json(&fm.dom.space),
            "cod": space_to_json(&fm.cod.space),
            "map": table_json(&fm.map),
            "continuous": finspace::is_continuous(&fm.map),
        });
    }
    done(result)
}

fn variant_of(v: VariantArg) -> Variant {
    match v {
        VariantArg::Vl => Variant::Lower,
        VariantArg::V => Variant::Compact,
        VariantArg::VPlus => Variant::CompactNonempty,
        VariantArg::Vc => Variant::CompactConnected,
    }
}

fn vietoris_build(
    config: &Config,
    loader: &mut Loader,
    path: &Path,
    variant: VariantArg,
    oracle: bool,
) -> Result<Outcome, CliError> {
    let x = loader.space(path)?;
    let variant = variant_of(variant);
    let hs = vietoris::hyperspace(&x, variant, &config.limits)?;
    let mut result = json!({
        "variant": variant.symbol(),
        "points": hs.len(),
        "space": space_to_json(&hs.space),
        "separation": finspace::separation(&hs.space),
    });
    let mut ok = true;
    if oracle {
        let brute = vietoris::hyperspace_from_subbasis(&x, variant, &config.limits)?;
        ok = brute.members() == hs.members() && brute.space.same_order(&hs.space);
        result["oracle_agrees"] = json!(ok);
    }
    Ok(Outcome { ok, result })
}

fn terminal(
    config: &Config,
    loader: &mut Loader,
    expr: &str,
    steps: usize,
    constants: &[String],
    labels: bool,
) -> Result<Outcome, CliError> {
    let env = Arc::new(loader.env(constants)?);
    let f = Functor::parse(expr, env, config.limits)?;
    let outcome = final_coalgebra_if_stabilized(&f, steps)?;
    let seq = &outcome.sequence;
    let mut result = json!({
        "functor": f.expr.to_string(),
        "steps": steps,
        "sizes": seq.sizes(),
        "stabilized_at": seq.stabilized_at,
        "final_coalgebra": outcome.coalgebra.as_ref().map(coalgebra_to_json).transpose()?,
    });
    if labels {
        result["levels"] = json!(seq.levels.iter().map(|l| l.space.labels().to_vec()).collect::<Vec<_>>());
    }
    done(result)
}

fn behaviour(loader: &mut Loader, path: &Path, depth: usize, labels: bool) -> Result<Outcome, CliError> {
    let c = loader.coalgebra(path)?;
    let partition = behavioural_partition(&c, depth)?;
    let mut result = json!({
        "functor": c.functor().expr.to_string(),
        "states": c.len(),
        "partition": partition,
    });
    if labels {
        let b = behaviour_map(&c, depth)?;
        let per_state: serde_json::Map<String, Value> = (0..c.len())
            .map(|x| {
                let ls: Vec<&str> = (0..=depth).map(|k| b.label(k, x)).collect();
                (c.carrier().label(x).to_string(), json!(ls))
            })
            .collect();
        result["behaviour"] = Value::Object(per_state);
    }
    done(result)
}

fn equalizer(loader: &mut Loader, h1: &Path, h2: &Path) -> Result<Outcome, CliError> {
    let (h1, h2) = (loader.hom(h1)?, loader.hom(h2)?);
    let checks = [is_coalg_hom(&h1)?, is_coalg_hom(&h2)?];
    if checks.iter().any(|c| !c.ok) {
        return Ok(Outcome {
            ok: false,
            result: json!({ "homomorphisms": checks }),
        });
    }
    let e = coalg_equalizer(&h1, &h2)?;
    done(json!({
        "homomorphisms": checks,
        "states": e.coalgebra.len(),
        "rounds": e.rounds,
        "coalgebra": coalgebra_to_json(&e.coalgebra)?,
        "embedding": table_json(&e.embedding.map),
        "embedding_is_hom": is_coalg_hom(&e.embedding)?.ok,
    }))
}

fn coreflection(loader: &mut Loader, sigma: Sigma, path: &Path) -> Result<Outcome, CliError> {
    let g = loader.coalgebra(path)?;
    let variant = match sigma {
        Sigma::VPlus => Variant::CompactNonempty,
        Sigma::Vc => Variant::CompactConnected,
    };
    let s = NatTransformation::inclusion(g.functor().clone(), variant)?;
    let r = coreflect(&s, &g)?;
    let hom = is_coalg_hom(&r.counit)?;
    let embedding = r.counit.map.is_embedding();
    Ok(Outcome {
        ok: hom.ok && embedding,
        result: json!({
            "sigma": format!("{} -> {}", s.src.expr, s.dst.expr),
            "pullback": r.pullback,
            "states": r.coalgebra.len(),
            "coalgebra": coalgebra_to_json(&r.coalgebra)?,
            "counit": table_json(&r.counit.map),
            "counit_is_hom": hom.ok,
            "counit_is_embedding": embedding,
        }),
    })
}

fn trajectory_json(t: &Trajectory) -> Value {
    json!({
        "horizon": t.horizon,
        "speeds": t.speeds(),
        "durations": t.durations(),
        "segments": t.segments,
    })
}

/// Writes the trajectory and describes what was written.
fn write_trajectory(t: &Trajectory, path: &Path, step: f64) -> Result<Value, CliError> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let format: ExportFormat = ext.parse()?;
    let bytes = export_trajectory(t, format, step)?;
    std::fs::write(path, &bytes).map_err(|e| CliError::io(path, e))?;
    Ok(json!({
        "file": path.display().to_string(),
        "bytes": bytes.len(),
        "sha256": hex::encode(Sha256::digest(&bytes)),
    }))
}

fn ball(config: &Config, cmd: &BallCmd, out: Option<&Path>) -> Result<Outcome, CliError> {
    let d = &config.ball;
    match cmd {
        BallCmd::Simulate {
            p,
            v,
            bounces,
            g,
            factor,
            step,
        } => {
            let params = BallParams::deterministic(g.unwrap_or(d.g), factor.unwrap_or(d.factor))?;
            let t = unfold_ball(BallState::new(*p, *v)?, *bounces, &params)?;
            let mut result = json!({ "params": params, "trajectory": trajectory_json(&t) });
            if let Some(path) = out {
                result["output"] = write_trajectory(&t, path, step.unwrap_or(d.step))?;
            }
            done(result)
        }
        BallCmd::Nondet {
            p,
            v,
            depth,
            samples,
            lo,
            hi,
            g,
            tree,
            branch,
            step,
        } => {
            let params = BallParams::interval(g.unwrap_or(d.g), lo.unwrap_or(d.lo), hi.unwrap_or(d.hi))?;
            let s = BallState::new(*p, *v)?;
            let first = nondet_ball_step(s, &params)?;
            let t = unfold_nondet(s, *depth, *samples, &params)?;
            let mut result = json!({
                "params": params,
                "first_step": first,
                "envelope": t.envelope,
                "lowest": trajectory_json(&t.lowest()),
                "highest": trajectory_json(&t.highest()),
            });
            if *tree {
                result["tree"] = to_json(&t.root);
            }
            if let Some(path) = out {
                let path_t = match branch {
                    Branch::Low => t.lowest(),
                    Branch::High => t.highest(),
                };
                result["output"] = write_trajectory(&path_t, path, step.unwrap_or(d.step))?;
            }
            done(result)
        }
        BallCmd::Stability {
            p,
            v,
            delta,
            horizon,
            n,
            system,
            g,
            factor,
            seed,
            bound,
        } => {
            let sys: Box<dyn HybridSystem> = match system {
                SystemArg::Ball => Box::new(BallParams::deterministic(g.unwrap_or(d.g), factor.unwrap_or(d.factor))?),
                SystemArg::Jump => {
                    let mut j = JumpRestitution::shipped();
                    j.g_mag = g.unwrap_or(j.g_mag);
                    Box::new(j)
                }
            };
            let r = stability_probe(sys.as_ref(), BallState::new(*p, *v)?, *delta, *horizon, *n, seed.unwrap_or(d.seed))?;
            let ok = bound.is_none_or(|b| r.max_duration_dev <= b);
            Ok(Outcome {
                ok,
                result: json!({ "system": format!("{system:?}").to_lowercase(), "bound": bound, "report": r }),
            })
        }
    }
}
