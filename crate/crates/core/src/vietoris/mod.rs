//! Hyperspaces of finite spaces.
//!
//! The lower Vietoris space has the closed (down-closed) subsets as points and
//! the topology generated by the hit sets `U◇ = {A | A ∩ U ≠ ∅}`. The compact
//! Vietoris space has all subsets (every subset of a finite space is compact)
//! and the topology generated by the hit sets together with the miss sets
//! `U□ = {A | A ⊆ U}`, with `U` ranging over the opens of the base.
//!
//! [`hyperspace`] computes the specialization preorder of these topologies
//! directly: inclusion for the lower space and the Egli–Milner preorder
//! `A <= B iff A ⊆ ↓B and B ⊆ ↑A` for the compact one.
//! [`hyperspace_from_subbasis`] builds the same spaces from the generating
//! sets; the two are checked against each other exhaustively in the tests.

mod strength;
mod witness;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finspace::{self, ContMap, FinSpace, Limits, PointSet};

pub use strength::{
    check_strength_identities, strength_map, strength_tau, tau_natural_at, StrengthCheck,
    StrengthMap,
};
pub use witness::{
    classic_hyperspace, classic_map_action, classic_nonfunctoriality_witness,
    classic_preserves_embedding, monocone_failure_witness, ClassicHyperspace, ClassicWitness,
    MonoconeWitness,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Closed subsets, hit sets only.
    Lower,
    /// All (compact) subsets, hit and miss sets.
    Compact,
    /// Nonempty compact subsets.
    CompactNonempty,
    /// Connected compact subsets. The empty set counts as disconnected.
    CompactConnected,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Lower,
        Variant::Compact,
        Variant::CompactNonempty,
        Variant::CompactConnected,
    ];

    /// Concrete syntax of the corresponding functor leaf.
    pub fn symbol(self) -> &'static str {
        match self {
            Variant::Lower => "Vl",
            Variant::Compact => "V",
            Variant::CompactNonempty => "V+",
            Variant::CompactConnected => "Vc",
        }
    }

    fn keeps(self, base: &FinSpace, mask: u64) -> bool {
        match self {
            Variant::Lower | Variant::Compact => true,
            Variant::CompactNonempty => mask != 0,
            Variant::CompactConnected => {
                finspace::is_connected(base, &finspace::from_mask(mask, base.len()))
            }
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A hyperspace together with the subsets its points denote.
#[derive(Clone)]
pub struct Hyperspace {
    pub base: Arc<FinSpace>,
    pub variant: Variant,
    /// Subset denoted by each point, as a bit mask over the base.
    members: Vec<u64>,
    index: HashMap<u64, usize>,
    pub space: Arc<FinSpace>,
}

impl fmt::Debug for Hyperspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hyperspace")
            .field("variant", &self.variant)
            .field("space", &self.space)
            .finish()
    }
}

impl Hyperspace {
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Point of the hyperspace denoting `mask`, if any.
    pub fn point_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn subset(&self, point: usize) -> PointSet {
        finspace::from_mask(self.members[point], self.base.len())
    }

    /// Points of the base in the subset denoted by `point`.
    pub fn elements(&self, point: usize) -> Vec<usize> {
        mask_elements(self.members[point])
    }
}

pub(crate) fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1u64 << i) != 0).collect()
}

pub(crate) fn mask_of(s: &PointSet) -> u64 {
    s.ones().fold(0u64, |m, x| m | (1u64 << x))
}

pub(crate) fn up_mask(base: &FinSpace, mask: u64) -> u64 {
    mask_elements(mask)
        .into_iter()
        .fold(0, |m, x| m | mask_of(base.up(x)))
}

pub(crate) fn down_mask(base: &FinSpace, mask: u64) -> u64 {
    mask_elements(mask)
        .into_iter()
        .fold(0, |m, x| m | mask_of(base.down(x)))
}

pub(crate) fn set_label(base: &FinSpace, mask: u64) -> String {
    let parts: Vec<&str> = mask_elements(mask).into_iter().map(|x| base.label(x)).collect();
    format!("{{{}}}", parts.join(","))
}

/// Down-sets of `base`, ascending by mask, reached by closing `∅` under
/// `D ↦ D ∪ ↓p`.
pub(crate) fn down_sets(base: &FinSpace, limits: &Limits) -> Result<Vec<u64>> {
    let cones: Vec<u64> = (0..base.len()).map(|p| mask_of(base.down(p))).collect();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([0u64]);
    seen.insert(0u64);
    while let Some(d) = queue.pop_front() {
        for &c in &cones {
            let next = d | c;
            if seen.insert(next) {
                limits.check("lower Vietoris space", seen.len())?;
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

fn candidate_members(base: &FinSpace, variant: Variant, limits: &Limits) -> Result<Vec<u64>> {
    let what = format!("{variant} hyperspace");
    limits.check_base(&what, base.len())?;
    let members = match variant {
        Variant::Lower => down_sets(base, limits)?,
        _ => {
            let n = base.len();
            let total = 1usize << n;
            limits.check(&what, total)?;
            (0..total as u64).filter(|&m| variant.keeps(base, m)).collect()
        }
    };
    Ok(members)
}

fn assemble(base: Arc<FinSpace>, variant: Variant, members: Vec<u64>, space: FinSpace) -> Hyperspace {
    let index = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    Hyperspace {
        base,
        variant,
        members,
        index,
        space: Arc::new(space),
    }
}

/// Builds the hyperspace using the closed-form preorders.
pub fn hyperspace(base: &Arc<FinSpace>, variant: Variant, limits: &Limits) -> Result<Hyperspace> {
    let members = candidate_members(base, variant, limits)?;
    let labels: Vec<String> = members.iter().map(|&m| set_label(base, m)).collect();
    let k = members.len();
    let ups: Vec<u64> = members.iter().map(|&m| up_mask(base, m)).collect();
    let downs: Vec<u64> = members.iter().map(|&m| down_mask(base, m)).collect();
    let mut rows = vec![PointSet::with_capacity(k); k];
    for (i, row) in rows.iter_mut().enumerate() {
        let a = members[i];
        for (j, &b) in members.iter().enumerate() {
            let leq = match variant {
                Variant::Lower => a & !b == 0,
                _ => a & !downs[j] == 0 && b & !ups[i] == 0,
            };
            if leq {
                row.insert(j);
            }
        }
    }
    let space = FinSpace::from_up_rows(labels, rows);
    Ok(assemble(base.clone(), variant, members, space))
}

/// Builds the hyperspace as the topology generated by its defining subbasis
/// (hit sets for `Lower`, hit and miss sets otherwise) over every open of the
/// base. The variants with fewer points get the subspace topology, i.e. the
/// same generators restricted to the retained subsets.
pub fn hyperspace_from_subbasis(
    base: &Arc<FinSpace>,
    variant: Variant,
    limits: &Limits,
) -> Result<Hyperspace> {
    let what = format!("{variant} hyperspace (subbasis)");
    limits.check_base(&what, base.len())?;
    let members: Vec<u64> = match variant {
        Variant::Lower => base.closed_sets()?.iter().map(mask_of).collect(),
        _ => {
            limits.check(&what, 1usize << base.len())?;
            (0..1u64 << base.len())
                .filter(|&m| match variant {
                    Variant::CompactNonempty => m != 0,
                    Variant::CompactConnected => {
                        finspace::is_connected_by_splits(base, &finspace::from_mask(m, base.len()))
                    }
                    _ => true,
                })
                .collect()
        }
    };
    limits.check(&what, members.len())?;
    let k = members.len();
    let labels: Vec<String> = members.iter().map(|&m| set_label(base, m)).collect();
    let mut subbasis = Vec::new();
    for u in base.opens()? {
        let u = mask_of(&u);
        let mut hit = PointSet::with_capacity(k);
        hit.extend((0..k).filter(|&i| members[i] & u != 0));
        subbasis.push(hit);
        if variant != Variant::Lower {
            let mut miss = PointSet::with_capacity(k);
            miss.extend((0..k).filter(|&i| members[i] & !u == 0));
            subbasis.push(miss);
        }
    }
    let space = finspace::generate_topology(labels, &subbasis);
    Ok(assemble(base.clone(), variant, members, space))
}

pub fn lower_vietoris(x: &Arc<FinSpace>, limits: &Limits) -> Result<Hyperspace> {
    hyperspace(x, Variant::Lower, limits)
}

pub fn compact_vietoris(x: &Arc<FinSpace>, limits: &Limits) -> Result<Hyperspace> {
    hyperspace(x, Variant::Compact, limits)
}

/// A subfunctor variant together with its inclusion into the compact
/// Vietoris space, which is a subspace embedding.
pub fn subfunctor_variant(
    x: &Arc<FinSpace>,
    variant: Variant,
    limits: &Limits,
) -> Result<(Hyperspace, ContMap)> {
    if !matches!(variant, Variant::CompactNonempty | Variant::CompactConnected) {
        return Err(Error::Invalid(format!("{variant} is not a subfunctor of V")));
    }
    let sub = hyperspace(x, variant, limits)?;
    let full = compact_vietoris(x, limits)?;
    let table = sub
        .members
        .iter()
        .map(|&m| full.point_of(m).expect("variant member is a subset"))
        .collect();
    let incl = ContMap::new(sub.space.clone(), full.space.clone(), table)?;
    Ok((sub, incl))
}

fn check_open(x: &FinSpace, u: &PointSet) -> Result<()> {
    if !x.is_open(u) {
        return Err(Error::NotOpen(x.format_set(u)));
    }
    Ok(())
}

/// `U◇`: the points of `hs` whose subset meets `u`.
pub fn hit(hs: &Hyperspace, u: &PointSet) -> Result<PointSet> {
    check_open(&hs.base, u)?;
    let u = mask_of(u);
    Ok(hs.space.set_of((0..hs.len()).filter(|&i| hs.members[i] & u != 0)))
}

/// `U□`: the points of `hs` whose subset is contained in `u`.
pub fn miss_box(hs: &Hyperspace, u: &PointSet) -> Result<PointSet> {
    check_open(&hs.base, u)?;
    let u = mask_of(u);
    Ok(hs.space.set_of((0..hs.len()).filter(|&i| hs.members[i] & !u == 0)))
}

/// Image of a subset mask under a point function.
pub(crate) fn image_mask(table: &[usize], mask: u64) -> u64 {
    mask_elements(mask)
        .into_iter()
        .fold(0, |m, x| m | (1u64 << table[x]))
}

/// Action of the hyperspace functor on a point function: direct image, then
/// down-closure in the codomain for the lower variant.
pub(crate) fn act_on_mask(variant: Variant, cod: &FinSpace, table: &[usize], mask: u64) -> u64 {
    let img = image_mask(table, mask);
    match variant {
        Variant::Lower => down_mask(cod, img),
        _ => img,
    }
}

/// `V f` between the hyperspaces of the domain and codomain of `f`.
pub fn map_action(
    f: &ContMap,
    variant: Variant,
    limits: &Limits,
) -> Result<(Hyperspace, Hyperspace, ContMap)> {
    let dom = hyperspace(f.dom(), variant, limits)?;
    let cod = hyperspace(f.cod(), variant, limits)?;
    let table = map_table(&dom, &cod, f.table());
    let map = ContMap::new_unchecked(dom.space.clone(), cod.space.clone(), table);
    Ok((dom, cod, map))
}

pub(crate) fn map_table(dom: &Hyperspace, cod: &Hyperspace, table: &[usize]) -> Vec<usize> {
    dom.members
        .iter()
        .map(|&m| {
            let img = act_on_mask(dom.variant, &cod.base, table, m);
            cod.point_of(img)
                .expect("image of a member is a member of the codomain hyperspace")
        })
        .collect()
}

/// Whether `V m` is again a subspace embedding.
pub fn preserves_embeddings_check(variant: Variant, m: &ContMap, limits: &Limits) -> Result<bool> {
    if !m.is_embedding() {
        return Err(Error::NotEmbedding(format!("{m:?}")));
    }
    let (_, _, vm) = map_action(m, variant, limits)?;
    Ok(finspace::is_continuous(&vm) && vm.is_embedding())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> Limits {
        Limits::default()
    }

    fn names(hs: &Hyperspace, s: &PointSet) -> Vec<String> {
        hs.space.names(s)
    }

    #[test]
    fn hit_and_miss_on_sierpinski() {
        let s = Arc::new(FinSpace::sierpinski());
        let v = compact_vietoris(&s, &l()).unwrap();
        let u1 = s.set_of([1]);
        assert_eq!(names(&v, &hit(&v, &u1).unwrap()), vec!["{1}", "{0,1}"]);
        assert!(hit(&v, &s.empty_set()).unwrap().is_clear());
        assert_eq!(names(&v, &miss_box(&v, &s.empty_set()).unwrap()), vec!["{}"]);
        assert_eq!(miss_box(&v, &s.full_set()).unwrap().count_ones(..), 4);
        assert!(matches!(hit(&v, &s.set_of([0])), Err(Error::NotOpen(_))));
    }

    #[test]
    fn lower_vietoris_examples() {
        let one = Arc::new(FinSpace::point());
        let v1 = lower_vietoris(&one, &l()).unwrap();
        assert!(v1.space.same_order(&FinSpace::sierpinski()));
        let s = Arc::new(FinSpace::sierpinski());
        let vs = lower_vietoris(&s, &l()).unwrap();
        assert_eq!(vs.space.labels(), &["{}", "{0}", "{0,1}"]);
        assert!(vs.space.same_order(&FinSpace::chain(3)));
    }

    #[test]
    fn compact_vietoris_examples() {
        let d = Arc::new(FinSpace::discrete_n(3));
        assert!(finspace::separation(&compact_vietoris(&d, &l()).unwrap().space).is_discrete);

        let s = Arc::new(FinSpace::sierpinski());
        let v = compact_vietoris(&s, &l()).unwrap();
        let p = |m: u64| v.point_of(m).unwrap();
        assert!(v.space.leq(p(0b01), p(0b11)));
        assert!(v.space.leq(p(0b11), p(0b10)));
        assert!(v.space.leq(p(0b01), p(0b10)));
        assert!(!v.space.leq(p(0b10), p(0b01)));
        // ∅ is comparable with nothing else, so it is an isolated point
        let e = p(0);
        assert_eq!(v.space.up(e).count_ones(..), 1);
        assert_eq!(v.space.down(e).count_ones(..), 1);
    }

    #[test]
    fn subfunctor_examples() {
        let d2 = Arc::new(FinSpace::discrete_n(2));
        let (ne, incl) = subfunctor_variant(&d2, Variant::CompactNonempty, &l()).unwrap();
        assert_eq!(ne.space.labels(), &["{0}", "{1}", "{0,1}"]);
        assert!(incl.is_embedding());
        let (c, _) = subfunctor_variant(&d2, Variant::CompactConnected, &l()).unwrap();
        assert_eq!(c.space.labels(), &["{0}", "{1}"]);
        let s = Arc::new(FinSpace::sierpinski());
        let (c, incl) = subfunctor_variant(&s, Variant::CompactConnected, &l()).unwrap();
        assert_eq!(c.space.labels(), &["{0}", "{1}", "{0,1}"]);
        assert!(incl.is_embedding());
        assert!(subfunctor_variant(&s, Variant::Lower, &l()).is_err());
    }

    #[test]
    fn size_caps_are_hard_errors() {
        let big = Arc::new(FinSpace::discrete_n(17));
        assert!(matches!(
            compact_vietoris(&big, &l()),
            Err(Error::SizeCapExceeded { .. })
        ));
        let tight = Limits { max_base_points: 16, max_points: 8 };
        let d4 = Arc::new(FinSpace::discrete_n(4));
        assert!(matches!(
            lower_vietoris(&d4, &tight),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn lower_map_action_takes_closure() {
        // {1,2} ↪ {1,2,3}, topology generated by {1,2} and {2,3}
        let x = Arc::new(finspace::generate_topology(
            vec!["1".into(), "2".into(), "3".into()],
            &[
                FinSpace::discrete_n(3).set_of([0, 1]),
                FinSpace::discrete_n(3).set_of([1, 2]),
            ],
        ));
        let (sub, i) = finspace::subspace(&x, &x.set_of([0, 1]));
        assert_eq!(sub.labels(), &["1", "2"]);
        let (dom, cod, vi) = map_action(&i, Variant::Lower, &l()).unwrap();
        let img = |m: u64| cod.space.label(vi.apply(dom.point_of(m).unwrap())).to_string();
        assert_eq!(img(0b00), "{}");
        assert_eq!(img(0b01), "{1}");
        assert_eq!(img(0b11), "{1,2,3}");
    }
}
