//! Finite topological spaces stored as their specialization preorders.
//!
//! Every finite space is Alexandrov, so it is determined by the relation
//! `x <= y iff x lies in the closure of {y}`. Opens are exactly the up-sets of
//! this preorder, closed sets are the down-sets, and a map between finite
//! spaces is continuous iff it is monotone.
//!
//! Points of a space are the indices `0..len()`; each point carries a label
//! used for ingestion and output. Subsets are [`PointSet`] bitsets indexed in
//! the same order, and every set-valued result is reported in index order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of the points of one space.
pub type PointSet = FixedBitSet;

/// Size caps for constructions that exponentiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Largest base space accepted by a hyperspace construction. Hard upper
    /// bound 63, since hyperspace points are encoded as `u64` masks.
    pub max_base_points: usize,
    /// Largest space any construction may produce.
    pub max_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_base_points: 16,
            max_points: 4096,
        }
    }
}

impl Limits {
    pub fn check(&self, what: impl Into<String>, needed: usize) -> Result<()> {
        if needed > self.max_points {
            return Err(Error::SizeCapExceeded {
                what: what.into(),
                needed,
                cap: self.max_points,
            });
        }
        Ok(())
    }

    pub fn check_base(&self, what: impl Into<String>, needed: usize) -> Result<()> {
        let cap = self.max_base_points.min(63);
        if needed > cap {
            return Err(Error::SizeCapExceeded {
                what: what.into(),
                needed,
                cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    labels: Vec<String>,
    /// `up[x]` = { y | x <= y }, the minimal open neighbourhood of x.
    up: Vec<PointSet>,
    /// `down[x]` = { y | y <= x }, the closure of {x}.
    down: Vec<PointSet>,
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<(&str, &str)> = self
            .strict_pairs()
            .map(|(x, y)| (self.labels[x].as_str(), self.labels[y].as_str()))
            .collect();
        f.debug_struct("FinSpace")
            .field("points", &self.labels)
            .field("leq", &rel)
            .finish()
    }
}

impl FinSpace {
    /// Builds a space from a relation that must already be a preorder.
    pub fn from_relation(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<FinSpace> {
        let n = labels.len();
        let mut up = vec![PointSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..n {
                if leq(x, y) {
                    row.insert(y);
                }
            }
        }
        let space = Self::from_up_rows(labels, up);
        space.validate()?;
        Ok(space)
    }

    /// Builds a space from generating pairs `x <= y`; reflexivity is implied,
    /// transitivity is required.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<FinSpace> {
        let n = labels.len();
        let mut up = vec![PointSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Invalid(format!("pair ({x},{y}) out of range")));
            }
            up[x].insert(y);
        }
        let space = Self::from_up_rows(labels, up);
        space.validate()?;
        Ok(space)
    }

    /// Builds a space from generating pairs, taking the reflexive-transitive
    /// closure.
    pub fn from_pairs_closed(labels: Vec<String>, pairs: &[(usize, usize)]) -> FinSpace {
        let n = labels.len();
        let mut up = vec![PointSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        for &(x, y) in pairs {
            up[x].insert(y);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_up_rows(labels, up)
    }

    pub(crate) fn from_up_rows(labels: Vec<String>, up: Vec<PointSet>) -> FinSpace {
        let n = labels.len();
        let mut down = vec![PointSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        FinSpace { labels, up, down }
    }

    /// Checks reflexivity and transitivity of the stored relation.
    pub fn validate(&self) -> Result<()> {
        for x in 0..self.len() {
            if !self.up[x].contains(x) {
                return Err(Error::NotAPreorder(format!(
                    "not reflexive at {}",
                    self.labels[x]
                )));
            }
            for y in self.up[x].ones() {
                if !self.up[y].is_subset(&self.up[x]) {
                    let z = self.up[y].difference(&self.up[x]).next().unwrap();
                    return Err(Error::NotAPreorder(format!(
                        "not transitive: {} <= {} <= {} but not {} <= {}",
                        self.labels[x], self.labels[y], self.labels[z], self.labels[x], self.labels[z]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn empty() -> FinSpace {
        FinSpace::from_up_rows(Vec::new(), Vec::new())
    }

    pub fn point() -> FinSpace {
        FinSpace::discrete(vec!["*".to_string()])
    }

    pub fn discrete(labels: Vec<String>) -> FinSpace {
        let n = labels.len();
        let up = (0..n)
            .map(|x| {
                let mut s = PointSet::with_capacity(n);
                s.insert(x);
                s
            })
            .collect();
        FinSpace::from_up_rows(labels, up)
    }

    /// Discrete space on `0..n` labelled by decimal indices.
    pub fn discrete_n(n: usize) -> FinSpace {
        FinSpace::discrete(numbered(n))
    }

    pub fn indiscrete(labels: Vec<String>) -> FinSpace {
        let n = labels.len();
        let mut full = PointSet::with_capacity(n);
        full.insert_range(..);
        FinSpace::from_up_rows(labels, vec![full; n])
    }

    /// The chain `0 <= 1 <= ... <= n-1`.
    pub fn chain(n: usize) -> FinSpace {
        let up = (0..n)
            .map(|x| {
                let mut s = PointSet::with_capacity(n);
                s.insert_range(x..);
                s
            })
            .collect();
        FinSpace::from_up_rows(numbered(n), up)
    }

    /// Sierpinski space on {0, 1} with {1} open, so 0 <= 1.
    pub fn sierpinski() -> FinSpace {
        FinSpace::chain(2)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// Minimal open neighbourhood of `x`.
    pub fn up(&self, x: usize) -> &PointSet {
        &self.up[x]
    }

    /// Closure of `{x}`.
    pub fn down(&self, x: usize) -> &PointSet {
        &self.down[x]
    }

    /// Pairs `x <= y` with `x != y`, in index order.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |x| self.up[x].ones().filter(move |&y| y != x).map(move |y| (x, y)))
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, points: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = self.empty_set();
        for p in points {
            s.insert(p);
        }
        s
    }

    /// Up-closure.
    pub fn saturation(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for x in s.ones() {
            out.union_with(&self.up[x]);
        }
        out
    }

    /// Down-closure, which is the topological closure.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for x in s.ones() {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        s.ones().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        s.ones().all(|x| self.down[x].is_subset(s))
    }

    /// Every open set, in a deterministic order. Exponential; refuses spaces
    /// above 24 points.
    pub fn opens(&self) -> Result<Vec<PointSet>> {
        self.enumerate_closed_under(|x| &self.up[x])
    }

    /// Every closed set (down-set).
    pub fn closed_sets(&self) -> Result<Vec<PointSet>> {
        self.enumerate_closed_under(|x| &self.down[x])
    }

    fn enumerate_closed_under<'a>(
        &'a self,
        cone: impl Fn(usize) -> &'a PointSet,
    ) -> Result<Vec<PointSet>> {
        let n = self.len();
        if n > 24 {
            return Err(Error::SizeCapExceeded {
                what: "open-set enumeration".into(),
                needed: n,
                cap: 24,
            });
        }
        let cones: Vec<u32> = (0..n).map(|x| to_mask(cone(x))).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            if (0..n).all(|x| mask & (1 << x) == 0 || cones[x] & !mask == 0) {
                out.push(from_mask(mask as u64, n));
            }
        }
        Ok(out)
    }

    /// Labels of the points of `s`, in index order.
    pub fn names(&self, s: &PointSet) -> Vec<String> {
        s.ones().map(|x| self.labels[x].clone()).collect()
    }

    pub fn format_set(&self, s: &PointSet) -> String {
        format!("{{{}}}", self.names(s).join(","))
    }

    pub fn relabel(&self, labels: Vec<String>) -> FinSpace {
        assert_eq!(labels.len(), self.len());
        FinSpace {
            labels,
            up: self.up.clone(),
            down: self.down.clone(),
        }
    }

    /// Same relation, ignoring labels.
    pub fn same_order(&self, other: &FinSpace) -> bool {
        self.up == other.up
    }
}

pub(crate) fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub(crate) fn to_mask(s: &PointSet) -> u32 {
    s.ones().fold(0u32, |m, x| m | (1 << x))
}

pub(crate) fn from_mask(mask: u64, n: usize) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    for x in 0..n {
        if mask & (1 << x) != 0 {
            s.insert(x);
        }
    }
    s
}

/// A continuous map between finite spaces.
#[derive(Clone, PartialEq, Eq)]
pub struct ContMap {
    dom: Arc<FinSpace>,
    cod: Arc<FinSpace>,
    table: Vec<usize>,
}

impl fmt::Debug for ContMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", self.dom.label(x), self.cod.label(y)))
            .collect();
        write!(f, "ContMap[{}]", pairs.join(", "))
    }
}

impl ContMap {
    /// Checks totality and continuity.
    pub fn new(dom: Arc<FinSpace>, cod: Arc<FinSpace>, table: Vec<usize>) -> Result<ContMap> {
        if table.len() != dom.len() {
            return Err(Error::Invalid(format!(
                "map table has {} entries, domain has {} points",
                table.len(),
                dom.len()
            )));
        }
        if let Some(&y) = table.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::Invalid(format!("map target {y} out of range")));
        }
        if let Some((x, y)) = monotonicity_witness(&dom, &cod, &table) {
            return Err(Error::NotContinuous(format!(
                "{} <= {} but {} is not <= {}",
                dom.label(x),
                dom.label(y),
                cod.label(table[x]),
                cod.label(table[y])
            )));
        }
        Ok(ContMap { dom, cod, table })
    }

    pub(crate) fn new_unchecked(dom: Arc<FinSpace>, cod: Arc<FinSpace>, table: Vec<usize>) -> ContMap {
        debug_assert_eq!(table.len(), dom.len());
        ContMap { dom, cod, table }
    }

    pub fn identity(x: Arc<FinSpace>) -> ContMap {
        let table = (0..x.len()).collect();
        ContMap {
            dom: x.clone(),
            cod: x,
            table,
        }
    }

    /// The unique map into the one-point space `one`.
    pub fn to_terminal(x: Arc<FinSpace>, one: Arc<FinSpace>) -> ContMap {
        assert_eq!(one.len(), 1);
        let table = vec![0; x.len()];
        ContMap { dom: x, cod: one, table }
    }

    pub fn dom(&self) -> &Arc<FinSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinSpace> {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ContMap) -> Result<ContMap> {
        if !same_space(&self.cod, &other.dom) {
            return Err(Error::NotParallel);
        }
        let table = self.table.iter().map(|&y| other.table[y]).collect();
        Ok(ContMap {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            table,
        })
    }

    pub fn image(&self, s: &PointSet) -> PointSet {
        self.cod.set_of(s.ones().map(|x| self.table[x]))
    }

    pub fn preimage(&self, s: &PointSet) -> PointSet {
        self.dom
            .set_of((0..self.dom.len()).filter(|&x| s.contains(self.table[x])))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.cod.empty_set();
        self.table.iter().all(|&y| !seen.put(y))
    }

    /// Injective and initial: `x <= y` iff `f(x) <= f(y)`.
    pub fn is_embedding(&self) -> bool {
        self.is_injective()
            && (0..self.dom.len()).all(|x| {
                (0..self.dom.len())
                    .all(|y| self.dom.leq(x, y) == self.cod.leq(self.table[x], self.table[y]))
            })
    }
}

/// Same space, by pointer or by structure (labels and order).
pub fn same_space(a: &Arc<FinSpace>, b: &Arc<FinSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn monotonicity_witness(dom: &FinSpace, cod: &FinSpace, table: &[usize]) -> Option<(usize, usize)> {
    dom.strict_pairs()
        .find(|&(x, y)| !cod.leq(table[x], table[y]))
}

/// Continuity as monotonicity of the point function.
pub fn is_monotone(dom: &FinSpace, cod: &FinSpace, table: &[usize]) -> bool {
    monotonicity_witness(dom, cod, table).is_none()
}

/// Continuity as "preimage of every open is open", tested on the minimal
/// neighbourhoods `up(y)`, which form a base: preimages commute with unions.
pub fn preimages_open(dom: &FinSpace, cod: &FinSpace, table: &[usize]) -> bool {
    (0..cod.len()).all(|y| {
        let pre = dom.set_of((0..dom.len()).filter(|&x| cod.up(y).contains(table[x])));
        dom.is_open(&pre)
    })
}

/// Both continuity tests; they must agree.
pub fn is_continuous(f: &ContMap) -> bool {
    let a = is_monotone(&f.dom, &f.cod, &f.table);
    let b = preimages_open(&f.dom, &f.cod, &f.table);
    debug_assert_eq!(a, b, "continuity tests disagree on {f:?}");
    a && b
}

/// Ingests an explicitly listed topology.
///
/// The family must contain ∅ and the whole point set and be closed under
/// binary unions and intersections. The returned preorder is
/// `x <= y iff every listed open containing x contains y`.
pub fn space_from_opens(labels: Vec<String>, opens: &[PointSet]) -> Result<FinSpace> {
    let n = labels.len();
    let names = |s: &PointSet| -> Vec<String> { s.ones().map(|x| labels[x].clone()).collect() };
    for s in opens {
        if s.len() > n && s.ones().any(|x| x >= n) {
            return Err(Error::Invalid("open set mentions an unknown point".into()));
        }
    }
    let norm: Vec<PointSet> = opens
        .iter()
        .map(|s| {
            let mut t = PointSet::with_capacity(n);
            t.extend(s.ones());
            t
        })
        .collect();
    let mut empty = PointSet::with_capacity(n);
    empty.grow(n);
    let mut full = PointSet::with_capacity(n);
    full.insert_range(..);
    if !norm.contains(&empty) {
        return Err(Error::NotATopology {
            reason: "the empty set is not listed".into(),
            witness: vec![vec![]],
        });
    }
    if !norm.contains(&full) {
        return Err(Error::NotATopology {
            reason: "the whole point set is not listed".into(),
            witness: vec![labels.clone()],
        });
    }
    for (i, a) in norm.iter().enumerate() {
        for b in &norm[i + 1..] {
            let mut u = a.clone();
            u.union_with(b);
            if !norm.contains(&u) {
                return Err(Error::NotATopology {
                    reason: format!("union {:?} is not listed", names(&u)),
                    witness: vec![names(a), names(b)],
                });
            }
            let mut m = a.clone();
            m.intersect_with(b);
            if !norm.contains(&m) {
                return Err(Error::NotATopology {
                    reason: format!("intersection {:?} is not listed", names(&m)),
                    witness: vec![names(a), names(b)],
                });
            }
        }
    }
    Ok(generate_topology(labels, &norm))
}

/// The space of the topology generated by `subbasis`.
///
/// `x <= y` iff every subbasic set containing `x` contains `y`; with an empty
/// subbasis this is the indiscrete space.
pub fn generate_topology(labels: Vec<String>, subbasis: &[PointSet]) -> FinSpace {
    let n = labels.len();
    let mut up = vec![PointSet::with_capacity(n); n];
    for (x, row) in up.iter_mut().enumerate() {
        row.insert_range(..);
        for s in subbasis {
            if s.contains(x) {
                row.intersect_with(s);
            }
        }
    }
    FinSpace::from_up_rows(labels, up)
}

pub struct Product {
    pub space: Arc<FinSpace>,
    pub proj1: ContMap,
    pub proj2: ContMap,
}

/// Product with componentwise order. Point `(i, j)` has index `i * |Y| + j`.
pub fn product(x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Product {
    let (n, m) = (x.len(), y.len());
    let mut labels = Vec::with_capacity(n * m);
    let mut up = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            labels.push(format!("({},{})", x.label(i), y.label(j)));
            let mut row = PointSet::with_capacity(n * m);
            for i2 in x.up(i).ones() {
                for j2 in y.up(j).ones() {
                    row.insert(i2 * m + j2);
                }
            }
            up.push(row);
        }
    }
    let space = Arc::new(FinSpace::from_up_rows(labels, up));
    let proj1 = ContMap::new_unchecked(space.clone(), x.clone(), (0..n * m).map(|k| k / m.max(1)).collect());
    let proj2 = ContMap::new_unchecked(space.clone(), y.clone(), (0..n * m).map(|k| k % m.max(1)).collect());
    Product { space, proj1, proj2 }
}

pub struct Coproduct {
    pub space: Arc<FinSpace>,
    pub inl: ContMap,
    pub inr: ContMap,
}

/// Disjoint union: left points first, then right points.
pub fn coproduct(x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Coproduct {
    let (n, m) = (x.len(), y.len());
    let mut labels = Vec::with_capacity(n + m);
    let mut up = Vec::with_capacity(n + m);
    for i in 0..n {
        labels.push(format!("inl({})", x.label(i)));
        let mut row = PointSet::with_capacity(n + m);
        row.extend(x.up(i).ones());
        up.push(row);
    }
    for j in 0..m {
        labels.push(format!("inr({})", y.label(j)));
        let mut row = PointSet::with_capacity(n + m);
        row.extend(y.up(j).ones().map(|k| n + k));
        up.push(row);
    }
    let space = Arc::new(FinSpace::from_up_rows(labels, up));
    let inl = ContMap::new_unchecked(x.clone(), space.clone(), (0..n).collect());
    let inr = ContMap::new_unchecked(y.clone(), space.clone(), (n..n + m).collect());
    Coproduct { space, inl, inr }
}

/// Subspace on `s` with the restricted preorder, plus its embedding.
pub fn subspace(x: &Arc<FinSpace>, s: &PointSet) -> (Arc<FinSpace>, ContMap) {
    let pts: Vec<usize> = s.ones().filter(|&p| p < x.len()).collect();
    let k = pts.len();
    let labels = pts.iter().map(|&p| x.label(p).to_string()).collect();
    let up = pts
        .iter()
        .map(|&p| {
            let mut row = PointSet::with_capacity(k);
            for (j, &q) in pts.iter().enumerate() {
                if x.leq(p, q) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let sub = Arc::new(FinSpace::from_up_rows(labels, up));
    let emb = ContMap::new_unchecked(sub.clone(), x.clone(), pts);
    (sub, emb)
}

/// Equalizer of two parallel maps: the subspace where they agree.
pub fn equalizer(f: &ContMap, g: &ContMap) -> Result<(Arc<FinSpace>, ContMap)> {
    if !same_space(&f.dom, &g.dom) || !same_space(&f.cod, &g.cod) {
        return Err(Error::NotParallel);
    }
    let agree = f.dom.set_of((0..f.dom.len()).filter(|&x| f.table[x] == g.table[x]));
    Ok(subspace(&f.dom, &agree))
}

/// One leg of a cone of set maps: a codomain space and a point function.
pub struct ConeLeg {
    pub cod: Arc<FinSpace>,
    pub table: Vec<usize>,
}

/// Coarsest topology on `labels` making every leg continuous, generated by
/// the preimages of the minimal neighbourhoods of the codomains (a base, so
/// the same topology as the preimages of all opens).
pub fn initial_topology(labels: Vec<String>, cone: &[ConeLeg]) -> FinSpace {
    let n = labels.len();
    let mut subbasis = Vec::new();
    for leg in cone {
        assert_eq!(leg.table.len(), n, "cone leg is not total");
        for y in 0..leg.cod.len() {
            let mut pre = PointSet::with_capacity(n);
            pre.extend((0..n).filter(|&x| leg.cod.up(y).contains(leg.table[x])));
            subbasis.push(pre);
        }
    }
    generate_topology(labels, &subbasis)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub is_t0: bool,
    pub is_t2: bool,
    pub is_discrete: bool,
    /// A finite space is compact, locally compact and well-filtered (every
    /// codirected family of finitely many opens contains its intersection),
    /// and intersections of compact saturated sets are compact. Stable
    /// compactness therefore reduces to T0.
    pub is_stably_compact_finite: bool,
}

pub fn separation(x: &FinSpace) -> Separation {
    let antisymmetric = x.strict_pairs().all(|(a, b)| !x.leq(b, a));
    let discrete = x.strict_pairs().next().is_none();
    Separation {
        is_t0: antisymmetric,
        is_t2: discrete,
        is_discrete: discrete,
        is_stably_compact_finite: antisymmetric,
    }
}

pub fn closure(x: &FinSpace, s: &PointSet) -> PointSet {
    x.closure(s)
}

pub fn saturation(x: &FinSpace, s: &PointSet) -> PointSet {
    x.saturation(s)
}

/// Nonempty and not split by two disjoint nonempty relatively open pieces.
/// In an Alexandrov space this is connectivity of the comparability graph
/// restricted to `s`.
pub fn is_connected(x: &FinSpace, s: &PointSet) -> bool {
    let Some(start) = s.ones().next() else {
        return false;
    };
    let mut seen = x.empty_set();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        for q in s.ones() {
            if !seen.contains(q) && (x.leq(p, q) || x.leq(q, p)) {
                seen.insert(q);
                stack.push(q);
            }
        }
    }
    s.is_subset(&seen)
}

/// Connectedness straight from the definition: `s` is nonempty and no
/// relatively open `a ⊆ s` with nonempty complement in `s` is also relatively
/// open. Exponential in `|s|`.
pub fn is_connected_by_splits(x: &FinSpace, s: &PointSet) -> bool {
    let pts: Vec<usize> = s.ones().collect();
    if pts.is_empty() {
        return false;
    }
    let k = pts.len();
    assert!(k <= 20, "split enumeration is only meant for small sets");
    let rel_open = |mask: u32| -> bool {
        // a relatively open piece is the trace of an up-set: closed upward within s
        (0..k).all(|i| {
            mask & (1 << i) == 0
                || (0..k).all(|j| !x.leq(pts[i], pts[j]) || mask & (1 << j) != 0)
        })
    };
    let full = (1u32 << k) - 1;
    !(1..full).any(|a| rel_open(a) && rel_open(full & !a))
}

/// Topology generated by the opens and the complements of the compact
/// saturated sets. Every subset of a finite space is compact, so those
/// complements are the down-sets; for a finite T0 space the result is
/// discrete.
pub fn patch_topology(x: &FinSpace) -> Result<FinSpace> {
    if let Some((a, b)) = x.strict_pairs().find(|&(a, b)| x.leq(b, a)) {
        return Err(Error::NotT0(x.label(a).into(), x.label(b).into()));
    }
    let mut subbasis = Vec::with_capacity(2 * x.len());
    for p in 0..x.len() {
        subbasis.push(x.up(p).clone());
        let mut co = x.full_set();
        co.difference_with(x.up(p));
        subbasis.push(co);
    }
    let patch = generate_topology(x.labels().to_vec(), &subbasis);
    debug_assert!(separation(&patch).is_discrete);
    Ok(patch)
}
