//! Exhaustive checking of the functor laws on small test data.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::Functor;
use crate::enumerate::{continuous_maps, spaces_up_to};
use crate::error::Result;
use crate::finspace::{self, ContMap, FinSpace, Limits};
use crate::vietoris::{classic_hyperspace, classic_map_action};

/// Anything with an object part and an arrow part on finite spaces.
pub trait EndoFunctor {
    fn name(&self) -> String;
    fn obj(&self, x: &Arc<FinSpace>) -> Result<Arc<FinSpace>>;
    /// Point function `F(dom f) -> F(cod f)`, not assumed continuous.
    fn arr(&self, f: &ContMap) -> Result<Vec<usize>>;
}

impl EndoFunctor for Functor {
    fn name(&self) -> String {
        self.expr.to_string()
    }

    fn obj(&self, x: &Arc<FinSpace>) -> Result<Arc<FinSpace>> {
        Ok(self.apply(x)?.space)
    }

    fn arr(&self, f: &ContMap) -> Result<Vec<usize>> {
        Ok(self.apply_map(f)?.map.table().to_vec())
    }
}

/// Closed sets with the hit-and-miss topology and `f ↦ closure of f[-]`.
/// Only usable here: it is not a functor, and nothing else accepts it.
pub struct ClassicVietoris {
    pub limits: Limits,
}

impl EndoFunctor for ClassicVietoris {
    fn name(&self) -> String {
        "classic Vietoris".into()
    }

    fn obj(&self, x: &Arc<FinSpace>) -> Result<Arc<FinSpace>> {
        Ok(classic_hyperspace(x, &self.limits)?.space)
    }

    fn arr(&self, f: &ContMap) -> Result<Vec<usize>> {
        Ok(classic_map_action(f, &self.limits)?.2)
    }
}

/// Spaces and maps to test on. Every map's domain and codomain must be one
/// of `spaces` (compared structurally).
pub struct LawData {
    pub spaces: Vec<Arc<FinSpace>>,
    pub maps: Vec<ContMap>,
}

impl LawData {
    /// All spaces with at most `n` points up to isomorphism and all
    /// continuous maps between them.
    pub fn exhaustive(n: usize) -> LawData {
        let spaces = spaces_up_to(n);
        let mut maps = Vec::new();
        for x in &spaces {
            for y in &spaces {
                maps.extend(continuous_maps(x, y));
            }
        }
        LawData { spaces, maps }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum LawWitness {
    Identity {
        space: Vec<String>,
        point: String,
        image: String,
    },
    Composition {
        f: Vec<usize>,
        g: Vec<usize>,
        point: String,
    },
    /// `below <= above` in `F(dom)` but their images are not ordered.
    Continuity {
        map: Vec<usize>,
        dom: Vec<String>,
        cod: Vec<String>,
        below: String,
        above: String,
        below_image: String,
        above_image: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub functor: String,
    pub passed: bool,
    pub spaces: usize,
    pub maps: usize,
    pub identity_checks: usize,
    pub composition_checks: usize,
    pub continuity_checks: usize,
    pub witness: Option<LawWitness>,
}

/// Checks `F(id) = id`, continuity of every `F(f)`, and
/// `F(g ∘ f) = F(g) ∘ F(f)` for all composable pairs in `data`. Stops at the
/// first failure, reported in enumeration order (smallest spaces first).
pub fn check_functor_laws(functor: &dyn EndoFunctor, data: &LawData) -> Result<LawReport> {
    let mut report = LawReport {
        functor: functor.name(),
        passed: true,
        spaces: data.spaces.len(),
        maps: data.maps.len(),
        identity_checks: 0,
        composition_checks: 0,
        continuity_checks: 0,
        witness: None,
    };
    let space_id = |x: &Arc<FinSpace>| data.spaces.iter().position(|s| finspace::same_space(s, x));
    let mut images = Vec::with_capacity(data.spaces.len());
    for x in &data.spaces {
        let fx = functor.obj(x)?;
        report.identity_checks += 1;
        let t = functor.arr(&ContMap::identity(x.clone()))?;
        if let Some(p) = (0..fx.len()).find(|&p| t[p] != p) {
            report.passed = false;
            report.witness = Some(LawWitness::Identity {
                space: x.labels().to_vec(),
                point: fx.label(p).into(),
                image: fx.label(t[p]).into(),
            });
            return Ok(report);
        }
        images.push(fx);
    }

    let mut ends = Vec::with_capacity(data.maps.len());
    let mut tables = Vec::with_capacity(data.maps.len());
    let mut by_key: HashMap<(usize, usize, &[usize]), usize> = HashMap::new();
    for (k, f) in data.maps.iter().enumerate() {
        let (Some(d), Some(c)) = (space_id(f.dom()), space_id(f.cod())) else {
            return Err(crate::error::Error::Invalid("law data map outside the listed spaces".into()));
        };
        let t = functor.arr(f)?;
        report.continuity_checks += 1;
        let (fd, fc) = (&images[d], &images[c]);
        let bad = fd.strict_pairs().find(|&(a, b)| !fc.leq(t[a], t[b]));
        if let Some((a, b)) = bad {
            report.passed = false;
            report.witness = Some(LawWitness::Continuity {
                map: f.table().to_vec(),
                dom: f.dom().labels().to_vec(),
                cod: f.cod().labels().to_vec(),
                below: fd.label(a).into(),
                above: fd.label(b).into(),
                below_image: fc.label(t[a]).into(),
                above_image: fc.label(t[b]).into(),
            });
            return Ok(report);
        }
        ends.push((d, c));
        tables.push(t);
        by_key.insert((d, c, f.table()), k);
    }

    for (i, f) in data.maps.iter().enumerate() {
        for (j, g) in data.maps.iter().enumerate() {
            if ends[i].1 != ends[j].0 {
                continue;
            }
            let gf: Vec<usize> = f.table().iter().map(|&x| g.apply(x)).collect();
            let composite = match by_key.get(&(ends[i].0, ends[j].1, gf.as_slice())) {
                Some(&k) => tables[k].clone(),
                None => functor.arr(&f.then(g)?)?,
            };
            report.composition_checks += 1;
            let (tf, tg) = (&tables[i], &tables[j]);
            if let Some(p) = (0..tf.len()).find(|&p| composite[p] != tg[tf[p]]) {
                report.passed = false;
                report.witness = Some(LawWitness::Composition {
                    f: f.table().to_vec(),
                    g: g.table().to_vec(),
                    point: images[ends[i].0].label(p).into(),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_functors_pass_on_two_point_spaces() {
        let data = LawData::exhaustive(2);
        for e in ["Id", "C(two)", "Id + C(one)", "Id * Id", "V", "Vl", "V+", "Vc", "V . Vl"] {
            let r = check_functor_laws(&Functor::builtin(e).unwrap(), &data).unwrap();
            assert!(r.passed, "{e}: {:?}", r.witness);
            assert!(r.composition_checks > 0);
        }
    }

    #[test]
    fn classic_construction_fails_on_the_three_point_embedding() {
        let x = Arc::new(finspace::generate_topology(
            vec!["1".into(), "2".into(), "3".into()],
            &[FinSpace::discrete_n(3).set_of([0, 1]), FinSpace::discrete_n(3).set_of([1, 2])],
        ));
        let (sub, i) = finspace::subspace(&x, &x.set_of([0, 1]));
        let data = LawData {
            spaces: vec![sub, x],
            maps: vec![i],
        };
        let r = check_functor_laws(&ClassicVietoris { limits: Limits::default() }, &data).unwrap();
        assert!(!r.passed);
        assert_eq!(
            r.witness,
            Some(LawWitness::Continuity {
                map: vec![0, 1],
                dom: vec!["1".into(), "2".into()],
                cod: vec!["1".into(), "2".into(), "3".into()],
                below: "{1}".into(),
                above: "{1,2}".into(),
                below_image: "{1}".into(),
                above_image: "{1,2,3}".into(),
            })
        );
    }
}
