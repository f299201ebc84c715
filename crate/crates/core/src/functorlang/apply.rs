//! Evaluation of functor expressions on spaces and maps.
//!
//! Both evaluators walk the expression in the same order, so `F(X)` always
//! has the same point order for spaces with the same underlying preorder.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{parse_functor, FValue, FunctorExpr};
use crate::error::{Error, Result};
use crate::finspace::{self, ContMap, FinSpace, Limits, PointSet};
use crate::vietoris::{self, Hyperspace, Variant};

/// Named constant spaces for `C(name)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceEnv {
    spaces: BTreeMap<String, Arc<FinSpace>>,
}

impl Default for SpaceEnv {
    fn default() -> Self {
        SpaceEnv::with_builtins()
    }
}

impl SpaceEnv {
    pub fn empty() -> SpaceEnv {
        SpaceEnv {
            spaces: BTreeMap::new(),
        }
    }

    /// `zero`, `one`, `two`, `three` (discrete, points `*` resp. `a`, `b`, `c`)
    /// and `sierpinski` (`0 <= 1`).
    pub fn with_builtins() -> SpaceEnv {
        let mut env = SpaceEnv::empty();
        let d = |xs: &[&str]| FinSpace::discrete(xs.iter().map(|s| s.to_string()).collect());
        env.insert("zero", FinSpace::empty());
        env.insert("one", FinSpace::point());
        env.insert("two", d(&["a", "b"]));
        env.insert("three", d(&["a", "b", "c"]));
        env.insert("sierpinski", FinSpace::sierpinski());
        env
    }

    pub fn insert(&mut self, name: &str, space: FinSpace) {
        self.spaces.insert(name.to_string(), Arc::new(space));
    }

    pub fn get(&self, name: &str) -> Result<&Arc<FinSpace>> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::UnboundConstant(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.spaces.keys().map(|s| s.as_str())
    }
}

/// `F(X)` together with the value denoted by each point.
#[derive(Debug, Clone)]
pub struct FSpace {
    pub space: Arc<FinSpace>,
    values: Vec<FValue>,
    index: HashMap<FValue, usize>,
}

impl FSpace {
    fn new(space: Arc<FinSpace>, values: Vec<FValue>) -> FSpace {
        debug_assert_eq!(space.len(), values.len());
        let index = values.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        FSpace { space, values, index }
    }

    /// The identity functor applied to `x`: every point is `Pt(i)`.
    pub fn points(x: &Arc<FinSpace>) -> FSpace {
        FSpace::new(x.clone(), (0..x.len()).map(FValue::Pt).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[FValue] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &FValue {
        &self.values[i]
    }

    pub fn index_of(&self, v: &FValue) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }
}

/// `F(f)` with its domain and codomain.
#[derive(Debug, Clone)]
pub struct FMap {
    pub dom: FSpace,
    pub cod: FSpace,
    pub map: ContMap,
}

/// A functor expression with its constants resolved and the size caps that
/// bound every evaluation.
#[derive(Debug, Clone)]
pub struct Functor {
    pub expr: FunctorExpr,
    pub env: Arc<SpaceEnv>,
    pub limits: Limits,
}

impl Functor {
    pub fn new(expr: FunctorExpr, env: Arc<SpaceEnv>, limits: Limits) -> Result<Functor> {
        for name in expr.constants() {
            env.get(name)?;
        }
        Ok(Functor { expr, env, limits })
    }

    pub fn parse(text: &str, env: Arc<SpaceEnv>, limits: Limits) -> Result<Functor> {
        Functor::new(parse_functor(text)?, env, limits)
    }

    /// Parses against the built-in constants with default caps.
    pub fn builtin(text: &str) -> Result<Functor> {
        Functor::parse(text, Arc::new(SpaceEnv::with_builtins()), Limits::default())
    }

    /// Same constants and caps, different expression.
    pub fn with_expr(&self, expr: FunctorExpr) -> Functor {
        Functor {
            expr,
            env: self.env.clone(),
            limits: self.limits,
        }
    }

    pub fn apply(&self, x: &Arc<FinSpace>) -> Result<FSpace> {
        self.apply_over(&FSpace::points(x))
    }

    /// `F` applied to the space of `base`, with identity positions holding
    /// `base`'s own values.
    pub fn apply_over(&self, base: &FSpace) -> Result<FSpace> {
        obj(&self.expr, base, &self.env, &self.limits)
    }

    pub fn apply_map(&self, f: &ContMap) -> Result<FMap> {
        let (dom, cod, table) = self.map_over(&FSpace::points(f.dom()), &FSpace::points(f.cod()), f.table())?;
        let map = ContMap::new_unchecked(dom.space.clone(), cod.space.clone(), table);
        Ok(FMap { dom, cod, map })
    }

    /// `F` applied to the point function `table : dom -> cod`.
    pub fn map_over(&self, dom: &FSpace, cod: &FSpace, table: &[usize]) -> Result<(FSpace, FSpace, Vec<usize>)> {
        arr(&self.expr, dom, cod, table, &self.env, &self.limits)
    }

    /// Points of `F(X)` in the image of `F(e)`, for `e` the subspace
    /// embedding of `sub` into `X`. Decided structurally, without building
    /// `F(sub)`.
    pub fn image_of_subspace(&self, x: &Arc<FinSpace>, sub: &PointSet) -> Result<PointSet> {
        Ok(image(&self.expr, &FSpace::points(x), sub, &self.env, &self.limits)?.1)
    }

    /// Whether `v` denotes a point of `F(X)`, and which.
    pub fn locate(&self, fx: &FSpace, v: &FValue) -> Result<usize> {
        fx.index_of(v)
            .ok_or_else(|| Error::InvalidValue(format!("{v:?} for `{}`", self.expr)))
    }
}

pub fn apply_functor(expr: &FunctorExpr, x: &Arc<FinSpace>, env: &Arc<SpaceEnv>, limits: &Limits) -> Result<FSpace> {
    Functor::new(expr.clone(), env.clone(), *limits)?.apply(x)
}

pub fn apply_functor_map(expr: &FunctorExpr, f: &ContMap, env: &Arc<SpaceEnv>, limits: &Limits) -> Result<FMap> {
    Functor::new(expr.clone(), env.clone(), *limits)?.apply_map(f)
}

fn const_space(a: &Arc<FinSpace>) -> FSpace {
    FSpace::new(a.clone(), (0..a.len()).map(FValue::Const).collect())
}

fn sum_space(a: &FSpace, b: &FSpace, limits: &Limits) -> Result<FSpace> {
    limits.check("sum", a.len() + b.len())?;
    let c = finspace::coproduct(&a.space, &b.space);
    let values = a
        .values
        .iter()
        .map(|v| FValue::inl(v.clone()))
        .chain(b.values.iter().map(|v| FValue::inr(v.clone())))
        .collect();
    Ok(FSpace::new(c.space, values))
}

fn prod_space(a: &FSpace, b: &FSpace, limits: &Limits) -> Result<FSpace> {
    limits.check("product", a.len() * b.len())?;
    let p = finspace::product(&a.space, &b.space);
    let values = a
        .values
        .iter()
        .flat_map(|x| b.values.iter().map(move |y| FValue::pair(x.clone(), y.clone())))
        .collect();
    Ok(FSpace::new(p.space, values))
}

fn hyper_space(base: &FSpace, hs: &Hyperspace) -> FSpace {
    let mut labels = Vec::with_capacity(hs.len());
    let mut values = Vec::with_capacity(hs.len());
    for p in 0..hs.len() {
        let mut items: Vec<(&FValue, &str)> = hs
            .elements(p)
            .into_iter()
            .map(|k| (&base.values[k], base.label(k)))
            .collect();
        items.sort();
        let names: Vec<&str> = items.iter().map(|(_, l)| *l).collect();
        labels.push(format!("{{{}}}", names.join(",")));
        values.push(FValue::Set(items.into_iter().map(|(v, _)| v.clone()).collect()));
    }
    FSpace::new(Arc::new(hs.space.relabel(labels)), values)
}

fn obj(e: &FunctorExpr, base: &FSpace, env: &SpaceEnv, limits: &Limits) -> Result<FSpace> {
    Ok(match e {
        FunctorExpr::Id => base.clone(),
        FunctorExpr::Const(n) => const_space(env.get(n)?),
        FunctorExpr::Sum(a, b) => sum_space(&obj(a, base, env, limits)?, &obj(b, base, env, limits)?, limits)?,
        FunctorExpr::Prod(a, b) => prod_space(&obj(a, base, env, limits)?, &obj(b, base, env, limits)?, limits)?,
        FunctorExpr::Hyper(v) => hyper_space(base, &vietoris::hyperspace(&base.space, *v, limits)?),
        FunctorExpr::Comp(a, b) => obj(a, &obj(b, base, env, limits)?, env, limits)?,
    })
}

fn arr(
    e: &FunctorExpr,
    dom: &FSpace,
    cod: &FSpace,
    table: &[usize],
    env: &SpaceEnv,
    limits: &Limits,
) -> Result<(FSpace, FSpace, Vec<usize>)> {
    Ok(match e {
        FunctorExpr::Id => (dom.clone(), cod.clone(), table.to_vec()),
        FunctorExpr::Const(n) => {
            let a = const_space(env.get(n)?);
            let id = (0..a.len()).collect();
            (a.clone(), a, id)
        }
        FunctorExpr::Sum(a, b) => {
            let (da, ca, ta) = arr(a, dom, cod, table, env, limits)?;
            let (db, cb, tb) = arr(b, dom, cod, table, env, limits)?;
            let shift = ca.len();
            let t = ta.into_iter().chain(tb.into_iter().map(|j| j + shift)).collect();
            (sum_space(&da, &db, limits)?, sum_space(&ca, &cb, limits)?, t)
        }
        FunctorExpr::Prod(a, b) => {
            let (da, ca, ta) = arr(a, dom, cod, table, env, limits)?;
            let (db, cb, tb) = arr(b, dom, cod, table, env, limits)?;
            let m = cb.len();
            let t = ta
                .iter()
                .flat_map(|&i| tb.iter().map(move |&j| i * m + j))
                .collect();
            (prod_space(&da, &db, limits)?, prod_space(&ca, &cb, limits)?, t)
        }
        FunctorExpr::Hyper(v) => {
            let dh = vietoris::hyperspace(&dom.space, *v, limits)?;
            let ch = vietoris::hyperspace(&cod.space, *v, limits)?;
            let t = vietoris::map_table(&dh, &ch, table);
            (hyper_space(dom, &dh), hyper_space(cod, &ch), t)
        }
        FunctorExpr::Comp(a, b) => {
            let (gd, gc, tg) = arr(b, dom, cod, table, env, limits)?;
            arr(a, &gd, &gc, &tg, env, limits)?
        }
    })
}

/// Every Vietoris-polynomial functor preserves subspace embeddings, so the
/// image of `F(e)` is again a subspace and composites can recurse on it.
fn image(
    e: &FunctorExpr,
    base: &FSpace,
    sub: &PointSet,
    env: &SpaceEnv,
    limits: &Limits,
) -> Result<(FSpace, PointSet)> {
    Ok(match e {
        FunctorExpr::Id => (base.clone(), sub.clone()),
        FunctorExpr::Const(n) => {
            let a = const_space(env.get(n)?);
            let all = a.space.full_set();
            (a, all)
        }
        FunctorExpr::Sum(a, b) => {
            let (fa, ia) = image(a, base, sub, env, limits)?;
            let (fb, ib) = image(b, base, sub, env, limits)?;
            let fs = sum_space(&fa, &fb, limits)?;
            let set = fs.space.set_of(ia.ones().chain(ib.ones().map(|j| j + fa.len())));
            (fs, set)
        }
        FunctorExpr::Prod(a, b) => {
            let (fa, ia) = image(a, base, sub, env, limits)?;
            let (fb, ib) = image(b, base, sub, env, limits)?;
            let fs = prod_space(&fa, &fb, limits)?;
            let m = fb.len();
            let set = fs
                .space
                .set_of(ia.ones().flat_map(|i| ib.ones().map(move |j| i * m + j)));
            (fs, set)
        }
        FunctorExpr::Hyper(v) => {
            let hs = vietoris::hyperspace(&base.space, *v, limits)?;
            let inside = vietoris::mask_of(sub);
            let keep = |m: u64| match v {
                // ↓f[D] for a down-set D of the subspace: A is recovered from A ∩ sub
                Variant::Lower => vietoris::down_mask(&base.space, m & inside) == m,
                _ => m & !inside == 0,
            };
            let set = hs.space.set_of((0..hs.len()).filter(|&p| keep(hs.members()[p])));
            (hyper_space(base, &hs), set)
        }
        FunctorExpr::Comp(a, b) => {
            let (gb, ib) = image(b, base, sub, env, limits)?;
            image(a, &gb, &ib, env, limits)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Functor {
        Functor::builtin(s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let s = Arc::new(FinSpace::sierpinski());
        let id = f("Id").apply(&s).unwrap();
        assert_eq!(*id.space, *s);

        let one = Arc::new(FinSpace::point());
        let two_x = f("C(two) * Id").apply(&one).unwrap();
        assert!(two_x.space.same_order(&FinSpace::discrete_n(2)));
        assert_eq!(two_x.space.labels(), &["(a,*)", "(b,*)"]);

        let d2 = Arc::new(FinSpace::discrete_n(2));
        let v = f("V").apply(&d2).unwrap();
        assert_eq!(v.space.labels(), &["{}", "{0}", "{1}", "{0,1}"]);
        assert!(finspace::separation(&v.space).is_discrete);
        assert_eq!(v.value(3), &FValue::set_of_points([0, 1]));
    }

    #[test]
    fn unbound_constant() {
        let env = Arc::new(SpaceEnv::empty());
        let e = Functor::parse("C(two) + Id", env, Limits::default()).unwrap_err();
        assert_eq!(e, Error::UnboundConstant("two".into()));
    }

    #[test]
    fn map_examples() {
        let s = Arc::new(FinSpace::sierpinski());
        let d2 = Arc::new(FinSpace::discrete_n(2));
        let g = ContMap::new(d2.clone(), s.clone(), vec![1, 0]).unwrap();
        let m = f("Id").apply_map(&g).unwrap();
        assert_eq!(m.map.table(), g.table());
        let m = f("C(three)").apply_map(&g).unwrap();
        assert_eq!(m.map.table(), &[0, 1, 2]);
    }

    #[test]
    fn lower_action_on_the_three_point_embedding() {
        let x = Arc::new(finspace::generate_topology(
            vec!["1".into(), "2".into(), "3".into()],
            &[FinSpace::discrete_n(3).set_of([0, 1]), FinSpace::discrete_n(3).set_of([1, 2])],
        ));
        let (_, i) = finspace::subspace(&x, &x.set_of([0, 1]));
        let m = f("Vl").apply_map(&i).unwrap();
        let img = |label: &str| {
            let p = m.dom.space.index_of(label).unwrap();
            m.cod.label(m.map.apply(p)).to_string()
        };
        assert_eq!(img("{}"), "{}");
        assert_eq!(img("{1}"), "{1}");
        assert_eq!(img("{1,2}"), "{1,2,3}");
    }

    #[test]
    fn products_are_structural() {
        let s = Arc::new(FinSpace::sierpinski());
        let fg = f("V * Vl").apply(&s).unwrap();
        let a = f("V").apply(&s).unwrap();
        let b = f("Vl").apply(&s).unwrap();
        let p = finspace::product(&a.space, &b.space);
        assert_eq!(*fg.space, *p.space);
        for (k, v) in fg.values().iter().enumerate() {
            assert_eq!(v, &FValue::pair(a.value(k / b.len()).clone(), b.value(k % b.len()).clone()));
        }
    }

    #[test]
    fn composites_nest_values() {
        let one = Arc::new(FinSpace::point());
        let vv = f("V . V").apply(&one).unwrap();
        assert_eq!(vv.len(), 4);
        assert!(vv.index_of(&FValue::set([FValue::set([]), FValue::set_of_points([0])])).is_some());
        assert_eq!(vv.space.labels(), &["{}", "{{}}", "{{*}}", "{{},{*}}"]);
        let m = f("V+ . Vc").apply(&Arc::new(FinSpace::discrete_n(2))).unwrap();
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn size_cap_is_reported() {
        let f = f("V . V");
        assert_eq!(f.apply(&Arc::new(FinSpace::discrete_n(3))).unwrap().len(), 256);
        // V(5) has 32 points, too many to take the hyperspace of again
        assert!(matches!(
            f.apply(&Arc::new(FinSpace::discrete_n(5))),
            Err(Error::SizeCapExceeded { needed: 32, .. })
        ));
    }
}
