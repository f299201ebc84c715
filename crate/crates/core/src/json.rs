//! JSON documents for spaces, maps, coalgebras and homomorphisms.
//!
//! Nested space and coalgebra references are kept as raw JSON here; whoever
//! reads files resolves them before calling the builders.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coalg::Coalgebra;
use crate::error::{Error, Result};
use crate::finspace::{self, ContMap, FinSpace, PointSet};
use crate::functorlang::{FValue, Functor, FunctorExpr, SpaceEnv};

/// `{"points": [...], "opens": [[...], ...]}` or `{"points": [...], "leq": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<(String, String)>>,
}

impl SpaceDoc {
    pub fn build(&self) -> Result<FinSpace> {
        let mut seen = HashSet::new();
        for p in &self.points {
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        let labels = self.points.clone();
        let lookup = |p: &str| {
            self.points
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::UnknownPoint(p.to_string()))
        };
        match (&self.opens, &self.leq) {
            (Some(opens), None) => {
                let sets = opens
                    .iter()
                    .map(|o| {
                        let mut s = PointSet::with_capacity(labels.len());
                        for p in o {
                            s.insert(lookup(p)?);
                        }
                        Ok(s)
                    })
                    .collect::<Result<Vec<_>>>()?;
                finspace::space_from_opens(labels, &sets)
            }
            (None, Some(leq)) => {
                let pairs = leq
                    .iter()
                    .map(|(x, y)| Ok((lookup(x)?, lookup(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FinSpace::from_pairs_closed(labels, &pairs))
            }
            _ => Err(Error::Invalid("a space needs exactly one of \"opens\" and \"leq\"".into())),
        }
    }

    /// Exports the full order as `leq` pairs (reflexive pairs omitted).
    pub fn from_space(x: &FinSpace) -> SpaceDoc {
        SpaceDoc {
            points: x.labels().to_vec(),
            opens: None,
            leq: Some(
                x.strict_pairs()
                    .map(|(a, b)| (x.label(a).to_string(), x.label(b).to_string()))
                    .collect(),
            ),
        }
    }
}

pub fn parse_space(v: &Value) -> Result<FinSpace> {
    from_value::<SpaceDoc>(v, "space")?.build()
}

pub fn space_to_json(x: &FinSpace) -> Value {
    serde_json::to_value(SpaceDoc::from_space(x)).expect("serializable")
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Invalid(format!("{what}: {e}")))
}

/// `{"dom": <space>, "cod": <space>, "map": {"x": "y", ...}}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub dom: Value,
    pub cod: Value,
    pub map: BTreeMap<String, String>,
}

/// A point table from labels; every point of `dom` must be mapped.
pub fn build_table(dom: &FinSpace, cod: &FinSpace, map: &BTreeMap<String, String>) -> Result<Vec<usize>> {
    for k in map.keys() {
        dom.index_of(k).ok_or_else(|| Error::UnknownPoint(k.clone()))?;
    }
    dom.labels()
        .iter()
        .map(|x| {
            let y = map
                .get(x)
                .ok_or_else(|| Error::Invalid(format!("point `{x}` is not mapped")))?;
            cod.index_of(y).ok_or_else(|| Error::UnknownPoint(y.clone()))
        })
        .collect()
}

pub fn build_map(dom: Arc<FinSpace>, cod: Arc<FinSpace>, map: &BTreeMap<String, String>) -> Result<ContMap> {
    let table = build_table(&dom, &cod, map)?;
    ContMap::new(dom, cod, table)
}

pub fn map_to_json(f: &ContMap) -> Value {
    let map: BTreeMap<&str, &str> = (0..f.dom().len())
        .map(|x| (f.dom().label(x), f.cod().label(f.apply(x))))
        .collect();
    serde_json::json!({
        "dom": space_to_json(f.dom()),
        "cod": space_to_json(f.cod()),
        "map": map,
    })
}

/// `{"functor": "<expr>", "carrier": <space>, "structure": {...}}`, with
/// optional extra constant spaces for `C(name)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgDoc {
    pub functor: String,
    pub carrier: Value,
    pub structure: BTreeMap<String, Value>,
    #[serde(default)]
    pub constants: BTreeMap<String, Value>,
}

/// `{"src": <coalgebra>, "dst": <coalgebra>, "map": {...}}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub src: Value,
    pub dst: Value,
    pub map: BTreeMap<String, String>,
}

/// FValue JSON as written by users: labels instead of indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum RawValue {
    Pt(String),
    Const(String),
    Pair(Box<RawValue>, Box<RawValue>),
    Inl(Box<RawValue>),
    Inr(Box<RawValue>),
    Set(Vec<RawValue>),
}

type Leaf<'a> = &'a dyn Fn(&RawValue) -> Result<FValue>;

fn mismatch(e: &FunctorExpr, r: &RawValue) -> Error {
    Error::InvalidValue(format!("{} does not have the shape of `{e}`", serde_json::to_string(r).unwrap()))
}

fn decode(e: &FunctorExpr, r: &RawValue, env: &SpaceEnv, leaf: Leaf) -> Result<FValue> {
    Ok(match (e, r) {
        (FunctorExpr::Id, _) => leaf(r)?,
        (FunctorExpr::Const(n), RawValue::Const(a)) => {
            let space = env.get(n)?;
            FValue::Const(space.index_of(a).ok_or_else(|| Error::UnknownPoint(a.clone()))?)
        }
        (FunctorExpr::Sum(a, _), RawValue::Inl(x)) => FValue::inl(decode(a, x, env, leaf)?),
        (FunctorExpr::Sum(_, b), RawValue::Inr(x)) => FValue::inr(decode(b, x, env, leaf)?),
        (FunctorExpr::Prod(a, b), RawValue::Pair(x, y)) => {
            FValue::pair(decode(a, x, env, leaf)?, decode(b, y, env, leaf)?)
        }
        (FunctorExpr::Hyper(_), RawValue::Set(items)) => {
            FValue::set(items.iter().map(leaf).collect::<Result<Vec<_>>>()?)
        }
        (FunctorExpr::Comp(f, g), _) => decode(f, r, env, &|x| decode(g, x, env, leaf))?,
        _ => return Err(mismatch(e, r)),
    })
}

type LeafOut<'a> = &'a dyn Fn(&FValue) -> Result<RawValue>;

fn encode(e: &FunctorExpr, v: &FValue, env: &SpaceEnv, leaf: LeafOut) -> Result<RawValue> {
    let bad = || Error::InvalidValue(format!("{v:?} does not have the shape of `{e}`"));
    Ok(match (e, v) {
        (FunctorExpr::Id, _) => leaf(v)?,
        (FunctorExpr::Const(n), FValue::Const(a)) => {
            let space = env.get(n)?;
            RawValue::Const(space.labels().get(*a).ok_or_else(bad)?.clone())
        }
        (FunctorExpr::Sum(a, _), FValue::Inl(x)) => RawValue::Inl(Box::new(encode(a, x, env, leaf)?)),
        (FunctorExpr::Sum(_, b), FValue::Inr(x)) => RawValue::Inr(Box::new(encode(b, x, env, leaf)?)),
        (FunctorExpr::Prod(a, b), FValue::Pair(x, y)) => {
            RawValue::Pair(Box::new(encode(a, x, env, leaf)?), Box::new(encode(b, y, env, leaf)?))
        }
        (FunctorExpr::Hyper(_), FValue::Set(items)) => {
            RawValue::Set(items.iter().map(leaf).collect::<Result<Vec<_>>>()?)
        }
        (FunctorExpr::Comp(f, g), _) => encode(f, v, env, &|x| encode(g, x, env, leaf))?,
        _ => return Err(bad()),
    })
}

/// Reads an element of `F(carrier)` from its JSON form.
pub fn decode_value(f: &Functor, carrier: &FinSpace, v: &Value) -> Result<FValue> {
    let raw: RawValue = from_value(v, "value")?;
    decode(&f.expr, &raw, &f.env, &|r| match r {
        RawValue::Pt(x) => Ok(FValue::Pt(carrier.index_of(x).ok_or_else(|| Error::UnknownPoint(x.clone()))?)),
        _ => Err(mismatch(&FunctorExpr::Id, r)),
    })
}

pub fn encode_value(f: &Functor, carrier: &FinSpace, v: &FValue) -> Result<Value> {
    let raw = encode(&f.expr, v, &f.env, &|x| match x {
        FValue::Pt(p) if *p < carrier.len() => Ok(RawValue::Pt(carrier.label(*p).to_string())),
        _ => Err(Error::InvalidValue(format!("{x:?} is not a state"))),
    })?;
    Ok(serde_json::to_value(raw).expect("serializable"))
}

/// Builds the coalgebra once the carrier and the constant spaces are known.
pub fn build_coalgebra(
    functor: Functor,
    carrier: Arc<FinSpace>,
    structure: &BTreeMap<String, Value>,
) -> Result<Coalgebra> {
    for k in structure.keys() {
        carrier.index_of(k).ok_or_else(|| Error::UnknownPoint(k.clone()))?;
    }
    let values = carrier
        .labels()
        .iter()
        .map(|x| {
            let v = structure
                .get(x)
                .ok_or_else(|| Error::Invalid(format!("state `{x}` has no structure value")))?;
            decode_value(&functor, &carrier, v)
        })
        .collect::<Result<Vec<_>>>()?;
    Coalgebra::new(functor, carrier, values)
}

/// Builtin constants extended by `constants`; later names shadow builtins.
pub fn env_with(constants: impl IntoIterator<Item = (String, FinSpace)>) -> SpaceEnv {
    let mut env = SpaceEnv::with_builtins();
    for (name, space) in constants {
        env.insert(&name, space);
    }
    env
}

pub fn coalgebra_to_json(c: &Coalgebra) -> Result<Value> {
    let mut structure = serde_json::Map::new();
    for x in 0..c.len() {
        structure.insert(
            c.carrier().label(x).to_string(),
            encode_value(c.functor(), c.carrier(), c.value(x))?,
        );
    }
    Ok(serde_json::json!({
        "functor": c.functor().expr.to_string(),
        "carrier": space_to_json(c.carrier()),
        "structure": structure,
    }))
}
