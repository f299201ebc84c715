//! The terminal sequence `1 ← F1 ← FF1 ← …`, its cone legs, and the kernels
//! of those legs.

use std::sync::Arc;

use serde::Serialize;

use super::{CoalgHom, Coalgebra};
use crate::enumerate::{all_functions, spaces_up_to};
use crate::error::{Error, Result};
use crate::finspace::{self, ContMap, FinSpace};
use crate::functorlang::{FSpace, Functor};

#[derive(Debug, Clone)]
pub struct TerminalSequence {
    pub functor: Functor,
    /// `levels[k]` is `F^k(1)`; identity positions hold the previous level's
    /// values, so labels spell out the nesting.
    pub levels: Vec<FSpace>,
    /// `connectors[k] : F^{k+1}(1) → F^k(1)`, starting from the unique map
    /// `F(1) → 1`.
    pub connectors: Vec<ContMap>,
    /// Least `k` whose connector is an isomorphism.
    pub stabilized_at: Option<usize>,
}

impl TerminalSequence {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }
}

fn is_iso(m: &ContMap) -> bool {
    m.dom().len() == m.cod().len() && m.is_embedding()
}

fn at_level<T>(k: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::SizeCapExceeded { what, needed, cap } => Error::SizeCapExceeded {
            what: format!("terminal sequence level {k} ({what})"),
            needed,
            cap,
        },
        e => e,
    })
}

/// Levels `0..=n` and connectors `0..n`.
pub fn terminal_sequence(f: &Functor, n: usize) -> Result<TerminalSequence> {
    let one = Arc::new(FinSpace::point());
    let mut levels = vec![FSpace::points(&one)];
    let mut connectors: Vec<ContMap> = Vec::new();
    for k in 0..n {
        let next = at_level(k + 1, f.apply_over(&levels[k]))?;
        let table = if k == 0 {
            vec![0; next.len()]
        } else {
            let (_, _, t) = at_level(k + 1, f.map_over(&levels[k], &levels[k - 1], connectors[k - 1].table()))?;
            t
        };
        connectors.push(ContMap::new_unchecked(next.space.clone(), levels[k].space.clone(), table));
        levels.push(next);
    }
    let stabilized_at = connectors.iter().position(is_iso);
    Ok(TerminalSequence {
        functor: f.clone(),
        levels,
        connectors,
        stabilized_at,
    })
}

#[derive(Debug, Clone)]
pub struct FinalOutcome {
    pub sequence: TerminalSequence,
    /// `(F^k(1), connector_k⁻¹)` when the sequence stabilized at `k`.
    pub coalgebra: Option<Coalgebra>,
}

pub fn final_coalgebra_if_stabilized(f: &Functor, max_n: usize) -> Result<FinalOutcome> {
    let sequence = terminal_sequence(f, max_n)?;
    let coalgebra = match sequence.stabilized_at {
        Some(k) => {
            let conn = &sequence.connectors[k];
            let mut inverse = vec![0; conn.cod().len()];
            for (j, &i) in conn.table().iter().enumerate() {
                inverse[i] = j;
            }
            let carrier = sequence.levels[k].space.clone();
            let fx = f.apply(&carrier)?;
            Some(Coalgebra::from_indices(f.clone(), carrier, fx, inverse)?)
        }
        None => None,
    };
    Ok(FinalOutcome { sequence, coalgebra })
}

#[derive(Debug, Clone, Serialize)]
pub struct FinalityReport {
    pub test_coalgebras: usize,
    /// Carriers whose structure maps were too many to enumerate.
    pub skipped_carriers: usize,
    pub all_unique: bool,
    /// A test coalgebra with zero or several homomorphisms into the candidate.
    pub witness: Option<String>,
}

/// Enumerates every coalgebra on every carrier with at most `max_states`
/// points (up to isomorphism) and counts its homomorphisms into `candidate`.
/// Carriers with more than `budget` candidate structure maps are skipped and
/// counted.
pub fn verify_finality(candidate: &Coalgebra, max_states: usize, budget: usize) -> Result<FinalityReport> {
    let f = candidate.functor();
    let target = Arc::new(candidate.clone());
    let mut report = FinalityReport {
        test_coalgebras: 0,
        skipped_carriers: 0,
        all_unique: true,
        witness: None,
    };
    for x in spaces_up_to(max_states) {
        let fx = f.apply(&x)?;
        let structures = (fx.len() as f64).powi(x.len() as i32);
        let maps = (target.len() as f64).powi(x.len() as i32);
        if structures * maps > budget as f64 {
            report.skipped_carriers += 1;
            continue;
        }
        let candidates: Vec<ContMap> = all_functions(x.len(), target.len())
            .into_iter()
            .filter_map(|t| ContMap::new(x.clone(), target.carrier().clone(), t).ok())
            .collect();
        for s in all_functions(x.len(), fx.len()) {
            if !finspace::is_monotone(&x, &fx.space, &s) {
                continue;
            }
            let test = Arc::new(Coalgebra::from_indices(f.clone(), x.clone(), fx.clone(), s)?);
            report.test_coalgebras += 1;
            let mut homs = 0;
            for m in &candidates {
                let h = CoalgHom::new(test.clone(), target.clone(), m.clone())?;
                if super::is_coalg_hom(&h)?.ok {
                    homs += 1;
                }
            }
            if homs != 1 {
                report.all_unique = false;
                report.witness = Some(format!(
                    "{homs} homomorphisms from the coalgebra on {:?} with structure {:?}",
                    x.labels(),
                    test.structure().iter().map(|&v| test.fx().label(v)).collect::<Vec<_>>()
                ));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct Behaviour {
    pub sequence: TerminalSequence,
    /// `maps[k] : X → F^k(1)`, with `maps[0]` the map to 1 and
    /// `maps[k+1] = F(maps[k]) ∘ c`.
    pub maps: Vec<ContMap>,
}

impl Behaviour {
    /// `connector_k ∘ b_{k+1} = b_k` for every `k`.
    pub fn commutes(&self) -> bool {
        (0..self.maps.len() - 1).all(|k| {
            let c = &self.sequence.connectors[k];
            (0..self.maps[k].dom().len()).all(|x| c.apply(self.maps[k + 1].apply(x)) == self.maps[k].apply(x))
        })
    }

    pub fn label(&self, k: usize, x: usize) -> &str {
        self.sequence.levels[k].label(self.maps[k].apply(x))
    }
}

pub fn behaviour_map(coalg: &Coalgebra, n: usize) -> Result<Behaviour> {
    let f = coalg.functor();
    let sequence = terminal_sequence(f, n)?;
    let carrier = FSpace::points(coalg.carrier());
    let mut maps = vec![ContMap::new_unchecked(
        coalg.carrier().clone(),
        sequence.levels[0].space.clone(),
        vec![0; coalg.len()],
    )];
    for k in 0..n {
        let (_, _, fb) = at_level(k + 1, f.map_over(&carrier, &sequence.levels[k], maps[k].table()))?;
        let table = coalg.structure().iter().map(|&v| fb[v]).collect();
        maps.push(ContMap::new_unchecked(
            coalg.carrier().clone(),
            sequence.levels[k + 1].space.clone(),
            table,
        ));
    }
    Ok(Behaviour { sequence, maps })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub depth: usize,
    /// Blocks of state labels, each in carrier order, ordered by first state.
    pub blocks: Vec<Vec<String>>,
    /// Number of blocks at depths `0..=depth`.
    pub block_counts: Vec<usize>,
    /// Least depth from which the partition no longer changes up to `depth`;
    /// `None` if it still changed at the last step.
    pub stabilized_at: Option<usize>,
}

fn kernel(table: &[usize]) -> Vec<usize> {
    // block id of each state = index of the first state with the same image
    (0..table.len())
        .map(|x| (0..=x).find(|&y| table[y] == table[x]).unwrap())
        .collect()
}

/// Kernel of the depth-`n` cone leg.
///
/// Computed without the full levels: at each step the leg is corestricted
/// to its image `R_k`, a subspace of `F^k(1)`, and `F` is applied to `R_k`
/// instead. Vietoris-polynomial functors preserve subspace embeddings, so the
/// kernels agree with those of [`behaviour_map`].
pub fn behavioural_partition(coalg: &Coalgebra, n: usize) -> Result<Partition> {
    let f = coalg.functor();
    let carrier = FSpace::points(coalg.carrier());
    let len = coalg.len();
    let one = Arc::new(FinSpace::point());
    let mut r = FSpace::points(&one);
    let mut q = vec![0usize; len];
    let mut kernels = vec![kernel(&q)];
    for k in 0..n {
        let (_, fr, t) = at_level(k + 1, f.map_over(&carrier, &FSpace::points(&r.space), &q))?;
        let b: Vec<usize> = coalg.structure().iter().map(|&v| t[v]).collect();
        let mut image: Vec<usize> = b.clone();
        image.sort_unstable();
        image.dedup();
        let (sub, _) = finspace::subspace(&fr.space, &fr.space.set_of(image.iter().copied()));
        q = b.iter().map(|v| image.binary_search(v).unwrap()).collect();
        r = FSpace::points(&sub);
        kernels.push(kernel(&q));
    }
    let last = kernels.last().unwrap().clone();
    let stabilized_at = (0..n).find(|&k| kernels[k..].iter().all(|p| *p == last));
    let mut blocks: Vec<Vec<String>> = Vec::new();
    let mut first: Vec<usize> = Vec::new();
    for (x, &id) in last.iter().enumerate() {
        match first.iter().position(|&y| y == id) {
            Some(i) => blocks[i].push(coalg.carrier().label(x).into()),
            None => {
                first.push(id);
                blocks.push(vec![coalg.carrier().label(x).into()]);
            }
        }
    }
    let block_counts = kernels
        .iter()
        .map(|p| {
            let mut ids = p.clone();
            ids.sort_unstable();
            ids.dedup();
            ids.len()
        })
        .collect();
    Ok(Partition {
        depth: n,
        blocks,
        block_counts,
        stabilized_at,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::stream;
    use super::*;
    use crate::functorlang::FValue;

    fn f(s: &str) -> Functor {
        Functor::builtin(s).unwrap()
    }

    #[test]
    fn constant_functor_stabilizes_at_one() {
        let t = terminal_sequence(&f("C(two)"), 3).unwrap();
        assert_eq!(t.sizes(), vec![1, 2, 2, 2]);
        assert_eq!(t.stabilized_at, Some(1));
        assert_eq!(t.connectors[1].table(), &[0, 1]);
        let out = final_coalgebra_if_stabilized(&f("C(two)"), 3).unwrap();
        let c = out.coalgebra.unwrap();
        assert_eq!(c.structure(), &[0, 1]);
        let r = verify_finality(&c, 4, 1 << 16).unwrap();
        assert!(r.all_unique && r.skipped_carriers == 0, "{r:?}");
        assert!(r.test_coalgebras > 47);
    }

    #[test]
    fn lower_vietoris_grows_forever() {
        let out = final_coalgebra_if_stabilized(&f("Vl"), 5).unwrap();
        assert!(out.coalgebra.is_none());
        assert_eq!(out.sequence.sizes(), vec![1, 2, 3, 4, 5, 6]);
        for l in &out.sequence.levels {
            assert!(l.space.same_order(&FinSpace::chain(l.len())) || is_chain(&l.space));
        }
    }

    fn is_chain(x: &FinSpace) -> bool {
        (0..x.len()).all(|a| (0..x.len()).all(|b| x.leq(a, b) || x.leq(b, a))) && finspace::separation(x).is_t0
    }

    #[test]
    fn streams_double_each_level() {
        let t = terminal_sequence(&f("C(two) * Id"), 4).unwrap();
        assert_eq!(t.sizes(), vec![1, 2, 4, 8, 16]);
        assert_eq!(t.stabilized_at, None);
        // a trivial output alphabet: stable already at the first connector
        let t = terminal_sequence(&f("C(one) * Id"), 3).unwrap();
        assert_eq!(t.stabilized_at, Some(0));
        let out = final_coalgebra_if_stabilized(&f("C(one) * Id"), 3).unwrap();
        assert_eq!(out.coalgebra.unwrap().len(), 1);
    }

    #[test]
    fn behaviour_of_a_two_state_stream() {
        let c = stream(&[(0, 1), (1, 1)]);
        let b = behaviour_map(&c, 3).unwrap();
        assert!(b.commutes());
        assert_eq!(b.label(0, 0), "*");
        assert_eq!((b.label(1, 0), b.label(1, 1)), ("(a,*)", "(b,*)"));
        assert_eq!((b.label(2, 0), b.label(2, 1)), ("(a,(b,*))", "(b,(b,*))"));
        let p = behavioural_partition(&c, 3).unwrap();
        assert_eq!(p.blocks, vec![vec!["x"], vec!["y"]]);
        assert_eq!(p.stabilized_at, Some(1));
        assert_eq!(behavioural_partition(&c, 0).unwrap().blocks, vec![vec!["x", "y"]]);
    }

    #[test]
    fn constant_streams_are_equivalent() {
        let c = stream(&[(0, 1), (0, 0)]);
        for n in 0..4 {
            assert_eq!(behavioural_partition(&c, n).unwrap().blocks, vec![vec!["x", "y"]]);
        }
    }

    #[test]
    fn image_refinement_matches_full_levels() {
        let v = f("V");
        let d3 = Arc::new(FinSpace::discrete(vec!["x".into(), "y".into(), "z".into()]));
        let c = Coalgebra::new(
            v,
            d3,
            vec![FValue::set_of_points([1]), FValue::set_of_points([1, 2]), FValue::set([])],
        )
        .unwrap();
        for n in 0..4 {
            let b = behaviour_map(&c, n).unwrap();
            assert!(b.commutes());
            let p = behavioural_partition(&c, n).unwrap();
            let full = kernel(b.maps[n].table());
            let blocks = full.iter().collect::<std::collections::BTreeSet<_>>().len();
            assert_eq!(p.blocks.len(), blocks, "depth {n}");
        }
        assert_eq!(behavioural_partition(&c, 5).unwrap().blocks.len(), 3);
    }
}
