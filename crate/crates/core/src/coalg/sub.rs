use std::sync::Arc;

use super::{CoalgHom, Coalgebra};
use crate::error::{Error, Result};
use crate::finspace::{self, PointSet};

/// A subcoalgebra with its inclusion homomorphism.
#[derive(Debug, Clone)]
pub struct SubCoalgebra {
    pub coalgebra: Arc<Coalgebra>,
    pub embedding: CoalgHom,
    /// Rounds of the fixpoint iteration until nothing was removed.
    pub rounds: usize,
}

/// Greatest `T ⊆ s` whose structure values all lie in the image of
/// `F(T ↪ X)`: iterate `S ↦ {x ∈ S | c(x) ∈ im F(S ↪ X)}` from `s`.
pub fn largest_subcoalgebra(coalg: &Arc<Coalgebra>, s: &PointSet) -> Result<SubCoalgebra> {
    let f = coalg.functor();
    let x = coalg.carrier();
    let mut cur = x.set_of(s.ones().filter(|&p| p < x.len()));
    let mut rounds = 0;
    loop {
        rounds += 1;
        let img = f.image_of_subspace(x, &cur)?;
        let next = x.set_of(cur.ones().filter(|&p| img.contains(coalg.structure()[p])));
        if next == cur {
            break;
        }
        cur = next;
    }
    let (sub, e) = finspace::subspace(x, &cur);
    let fe = f.apply_map(&e)?;
    let mut back = vec![usize::MAX; fe.cod.len()];
    for (v, &w) in fe.map.table().iter().enumerate() {
        back[w] = v;
    }
    let structure: Vec<usize> = e.table().iter().map(|&p| back[coalg.structure()[p]]).collect();
    debug_assert!(structure.iter().all(|&v| v != usize::MAX));
    let c = Arc::new(Coalgebra::from_indices(f.clone(), sub, fe.dom, structure)?);
    let embedding = CoalgHom::new(c.clone(), coalg.clone(), e)?;
    Ok(SubCoalgebra {
        coalgebra: c,
        embedding,
        rounds,
    })
}

/// The largest subcoalgebra inside the set where the two maps agree.
pub fn coalg_equalizer(h1: &CoalgHom, h2: &CoalgHom) -> Result<SubCoalgebra> {
    if !h1.src.same_as(&h2.src) || !h1.dst.same_as(&h2.dst) {
        return Err(Error::NotParallel);
    }
    let (_, e) = finspace::equalizer(&h1.map, &h2.map)?;
    let agree = h1.src.carrier().set_of(e.table().iter().copied());
    largest_subcoalgebra(&h1.src, &agree)
}
