//! Random systems and brute-force reference answers for the acceptance run.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use vcoalg::coalg::{is_coalg_hom, CoalgHom, Coalgebra};
use vcoalg::enumerate::continuous_maps;
use vcoalg::finspace::FinSpace;
use vcoalg::functorlang::{FValue, Functor};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

pub fn random_space(rng: &mut impl Rng, n: usize, density: f64) -> Arc<FinSpace> {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    Arc::new(FinSpace::from_pairs_closed(labels(n), &pairs))
}

/// The functors the random systems are drawn over.
#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Powerset,
    Stream,
}

impl Kind {
    pub fn functor(self) -> Functor {
        Functor::builtin(match self {
            Kind::Powerset => "V",
            Kind::Stream => "C(two) * Id",
        })
        .unwrap()
    }

    fn random_value(self, rng: &mut impl Rng, n: usize) -> FValue {
        match self {
            Kind::Powerset => FValue::set_of_points((0..n).filter(|_| rng.gen_bool(0.4))),
            Kind::Stream => FValue::pair(FValue::Const(rng.gen_range(0..2)), FValue::Pt(rng.gen_range(0..n))),
        }
    }
}

/// A random coalgebra on a random preorder; falls back to the discrete order
/// when no continuous structure turns up quickly.
pub fn random_coalgebra(rng: &mut impl Rng, kind: Kind, n: usize) -> Arc<Coalgebra> {
    for attempt in 0..40 {
        let density = if attempt < 30 { 0.25 } else { 0.0 };
        let x = random_space(rng, n, density);
        let structure = (0..n).map(|_| kind.random_value(rng, n)).collect();
        if let Ok(c) = Coalgebra::new(kind.functor(), x, structure) {
            return Arc::new(c);
        }
    }
    let x = Arc::new(FinSpace::discrete(labels(n)));
    let structure = (0..n).map(|_| kind.random_value(rng, n)).collect();
    Arc::new(Coalgebra::new(kind.functor(), x, structure).unwrap())
}

/// A discrete coalgebra `A` with a surjection `h : A → B` that is a
/// homomorphism by construction.
fn pulled_back(rng: &mut impl Rng, kind: Kind, b: &Arc<Coalgebra>, n: usize) -> (Arc<Coalgebra>, Vec<usize>) {
    let m = b.len();
    let mut h: Vec<usize> = (0..n).map(|i| if i < m { i } else { rng.gen_range(0..m) }).collect();
    h.shuffle(rng);
    let fibre = |t: usize| -> Vec<usize> { (0..n).filter(|&a| h[a] == t).collect() };
    let structure = (0..n)
        .map(|a| match b.value(h[a]) {
            FValue::Set(items) => {
                let mut pts = Vec::new();
                for item in items {
                    let FValue::Pt(t) = item else { unreachable!() };
                    let f = fibre(*t);
                    let mut chosen: Vec<usize> = f.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                    if chosen.is_empty() {
                        chosen.push(*f.choose(rng).unwrap());
                    }
                    pts.extend(chosen);
                }
                FValue::set_of_points(pts)
            }
            FValue::Pair(c, next) => {
                let FValue::Pt(t) = **next else { unreachable!() };
                FValue::pair((**c).clone(), FValue::Pt(*fibre(t).choose(rng).unwrap()))
            }
            v => panic!("unexpected value {v:?}"),
        })
        .collect();
    let a = Arc::new(Coalgebra::new(kind.functor(), Arc::new(FinSpace::discrete(labels(n))), structure).unwrap());
    (a, h)
}

pub fn homs(a: &Arc<Coalgebra>, b: &Arc<Coalgebra>) -> Vec<CoalgHom> {
    continuous_maps(a.carrier(), b.carrier())
        .into_iter()
        .map(|m| CoalgHom::new(a.clone(), b.clone(), m).unwrap())
        .filter(|h| is_coalg_hom(h).unwrap().ok)
        .collect()
}

/// A pair of parallel homomorphisms, or `None` if this draw has none.
pub fn random_parallel_pair(rng: &mut impl Rng) -> Option<(CoalgHom, CoalgHom)> {
    let kind = if rng.gen_bool(0.5) { Kind::Powerset } else { Kind::Stream };
    let m = rng.gen_range(1..=3);
    let n = rng.gen_range(m..=5);
    let b = random_coalgebra(rng, kind, m);
    let all = if rng.gen_bool(0.7) {
        let (a, h) = pulled_back(rng, kind, &b, n);
        let all = homs(&a, &b);
        assert!(all.iter().any(|g| g.map.table() == h.as_slice()), "pulled-back map is not a homomorphism");
        all
    } else {
        homs(&random_coalgebra(rng, kind, n), &b)
    };
    if all.is_empty() {
        return None;
    }
    let h1 = all.choose(rng).unwrap().clone();
    let h2 = all.choose(rng).unwrap().clone();
    Some((h1, h2))
}

/// Every point mentioned in the structure value of `x`.
fn successors(c: &Coalgebra, x: usize) -> BTreeSet<usize> {
    c.value(x).points().into_iter().collect()
}

/// The largest subset of `allowed` closed under successors, found by trying
/// every subset.
pub fn largest_closed_subset(c: &Coalgebra, allowed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let pts: Vec<usize> = allowed.iter().copied().collect();
    let mut best = BTreeSet::new();
    for mask in 0u32..(1 << pts.len()) {
        let t: BTreeSet<usize> = (0..pts.len()).filter(|i| mask & (1 << i) != 0).map(|i| pts[i]).collect();
        if t.len() > best.len() && t.iter().all(|&x| successors(c, x).is_subset(&t)) {
            best = t;
        }
    }
    best
}

pub fn equalizer_oracle(h1: &CoalgHom, h2: &CoalgHom) -> BTreeSet<usize> {
    let agree = (0..h1.src.len()).filter(|&a| h1.map.apply(a) == h2.map.apply(a)).collect();
    largest_closed_subset(&h1.src, &agree)
}

/// Connected under the comparability graph of the specialization order.
pub fn connected(x: &FinSpace, s: &BTreeSet<usize>) -> bool {
    let Some(&start) = s.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for &b in s {
            if !seen.contains(&b) && (x.leq(a, b) || x.leq(b, a)) {
                seen.insert(b);
                stack.push(b);
            }
        }
    }
    seen.len() == s.len()
}

/// The states whose successor set satisfies `keep`, and the largest
/// subcoalgebra inside them.
pub fn coreflection_oracle(
    c: &Coalgebra,
    keep: impl Fn(&FinSpace, &BTreeSet<usize>) -> bool,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let s: BTreeSet<usize> = (0..c.len()).filter(|&y| keep(c.carrier(), &successors(c, y))).collect();
    let t = largest_closed_subset(c, &s);
    (s, t)
}

pub fn names(x: &FinSpace, s: &BTreeSet<usize>) -> BTreeSet<String> {
    s.iter().map(|&i| x.label(i).to_string()).collect()
}

pub fn all_names(x: &FinSpace) -> BTreeSet<String> {
    x.labels().iter().cloned().collect()
}
