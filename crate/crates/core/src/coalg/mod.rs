//! Coalgebras `c : X → F(X)` for functor expressions over finite spaces.
//!
//! Behavioural equivalence is only ever reported as the kernel of the depth-n
//! cone leg into the terminal sequence. It agrees with equality in the final
//! coalgebra only when the sequence stabilizes.

mod nat;
mod sub;
mod terminal;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::{self, ContMap, FinSpace};
use crate::functorlang::{FSpace, FValue, Functor};

pub use nat::{coreflect, induced_functor_i, taut_check, Coreflection, NatComponent, NatTransformation, TautReport};
pub use sub::{coalg_equalizer, largest_subcoalgebra, SubCoalgebra};
pub use terminal::{
    behaviour_map, behavioural_partition, final_coalgebra_if_stabilized, terminal_sequence, verify_finality,
    Behaviour, FinalOutcome, FinalityReport, Partition, TerminalSequence,
};

#[derive(Debug, Clone)]
pub struct Coalgebra {
    functor: Functor,
    carrier: Arc<FinSpace>,
    fx: FSpace,
    structure: Vec<usize>,
}

impl Coalgebra {
    /// Validates that every value lies in `F(carrier)` and that the structure
    /// map is continuous.
    pub fn new(functor: Functor, carrier: Arc<FinSpace>, structure: Vec<FValue>) -> Result<Coalgebra> {
        let fx = functor.apply(&carrier)?;
        if structure.len() != carrier.len() {
            return Err(Error::Invalid(format!(
                "structure has {} entries for {} states",
                structure.len(),
                carrier.len()
            )));
        }
        let idx = structure
            .iter()
            .map(|v| functor.locate(&fx, v))
            .collect::<Result<Vec<_>>>()?;
        Coalgebra::from_indices(functor, carrier, fx, idx)
    }

    /// `structure[x]` indexes a point of `fx`, which must be `F(carrier)`.
    pub fn from_indices(functor: Functor, carrier: Arc<FinSpace>, fx: FSpace, structure: Vec<usize>) -> Result<Coalgebra> {
        if structure.len() != carrier.len() || structure.iter().any(|&v| v >= fx.len()) {
            return Err(Error::Invalid("structure map does not land in F(X)".into()));
        }
        if let Some((x, y)) = carrier.strict_pairs().find(|&(x, y)| !fx.space.leq(structure[x], structure[y])) {
            return Err(Error::NotContinuous(format!(
                "preimage of the open ↑{} is not open: it contains {} but not {} although {} <= {}",
                fx.label(structure[x]),
                carrier.label(x),
                carrier.label(y),
                carrier.label(x),
                carrier.label(y),
            )));
        }
        Ok(Coalgebra {
            functor,
            carrier,
            fx,
            structure,
        })
    }

    /// The coalgebra with no states.
    pub fn empty(functor: Functor) -> Result<Coalgebra> {
        Coalgebra::new(functor, Arc::new(FinSpace::empty()), vec![])
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn carrier(&self) -> &Arc<FinSpace> {
        &self.carrier
    }

    /// `F(carrier)`.
    pub fn fx(&self) -> &FSpace {
        &self.fx
    }

    pub fn structure(&self) -> &[usize] {
        &self.structure
    }

    pub fn value(&self, x: usize) -> &FValue {
        self.fx.value(self.structure[x])
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn structure_map(&self) -> ContMap {
        ContMap::new(self.carrier.clone(), self.fx.space.clone(), self.structure.clone())
            .expect("validated at construction")
    }

    /// Same functor, carrier and structure.
    pub fn same_as(&self, other: &Coalgebra) -> bool {
        self.functor.expr == other.functor.expr
            && finspace::same_space(&self.carrier, &other.carrier)
            && self.structure == other.structure
    }
}

#[derive(Debug, Clone)]
pub struct CoalgHom {
    pub src: Arc<Coalgebra>,
    pub dst: Arc<Coalgebra>,
    pub map: ContMap,
}

impl CoalgHom {
    /// Pairs up the data; whether the square commutes is [`is_coalg_hom`]'s
    /// business.
    pub fn new(src: Arc<Coalgebra>, dst: Arc<Coalgebra>, map: ContMap) -> Result<CoalgHom> {
        if !finspace::same_space(map.dom(), src.carrier()) || !finspace::same_space(map.cod(), dst.carrier()) {
            return Err(Error::Invalid("map does not go between the carriers".into()));
        }
        Ok(CoalgHom { src, dst, map })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomCheck {
    pub ok: bool,
    /// First state whose square fails, with both sides of the square.
    pub witness: Option<HomWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomWitness {
    pub state: String,
    pub via_src: String,
    pub via_dst: String,
}

/// `F(h) ∘ c = d ∘ h`, checked state by state.
pub fn is_coalg_hom(h: &CoalgHom) -> Result<HomCheck> {
    let (f, g) = (h.src.functor(), h.dst.functor());
    if f.expr != g.expr {
        return Err(Error::FunctorMismatch(f.expr.to_string(), g.expr.to_string()));
    }
    if !finspace::is_continuous(&h.map) {
        return Ok(HomCheck {
            ok: false,
            witness: None,
        });
    }
    let fh = f.apply_map(&h.map)?;
    for x in 0..h.src.len() {
        let a = fh.map.apply(h.src.structure()[x]);
        let b = h.dst.structure()[h.map.apply(x)];
        if a != b {
            return Ok(HomCheck {
                ok: false,
                witness: Some(HomWitness {
                    state: h.src.carrier().label(x).into(),
                    via_src: h.dst.fx().label(a).into(),
                    via_dst: h.dst.fx().label(b).into(),
                }),
            });
        }
    }
    Ok(HomCheck { ok: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn stream(outs: &[(usize, usize)]) -> Coalgebra {
        // states 0..n on a discrete carrier, c(i) = (letter, next)
        let f = Functor::builtin("C(two) * Id").unwrap();
        let n = outs.len();
        let values = outs
            .iter()
            .map(|&(a, nx)| FValue::pair(FValue::Const(a), FValue::Pt(nx)))
            .collect();
        let labels = (0..n).map(|i| ["x", "y", "z", "w", "v"][i].to_string()).collect();
        Coalgebra::new(f, Arc::new(FinSpace::discrete(labels)), values).unwrap()
    }

    #[test]
    fn identity_is_a_hom() {
        let c = Arc::new(stream(&[(0, 1), (1, 1)]));
        let id = CoalgHom::new(c.clone(), c.clone(), ContMap::identity(c.carrier().clone())).unwrap();
        assert!(is_coalg_hom(&id).unwrap().ok);
    }

    #[test]
    fn constant_functor_hom() {
        let f = Functor::builtin("C(two)").unwrap();
        let d2 = Arc::new(FinSpace::discrete_n(2));
        let one = Arc::new(FinSpace::point());
        let src = Arc::new(Coalgebra::new(f.clone(), d2.clone(), vec![FValue::Const(1), FValue::Const(1)]).unwrap());
        let dst = Arc::new(Coalgebra::new(f, one.clone(), vec![FValue::Const(1)]).unwrap());
        let h = CoalgHom::new(src, dst, ContMap::to_terminal(d2, one)).unwrap();
        assert!(is_coalg_hom(&h).unwrap().ok);
    }

    #[test]
    fn swapping_letters_is_not_a_hom() {
        let c = Arc::new(stream(&[(0, 1), (1, 1)]));
        let swap = ContMap::new(c.carrier().clone(), c.carrier().clone(), vec![1, 0]).unwrap();
        let r = is_coalg_hom(&CoalgHom::new(c.clone(), c, swap).unwrap()).unwrap();
        assert!(!r.ok);
        let w = r.witness.unwrap();
        assert_eq!(w.state, "x");
        assert_eq!((w.via_src.as_str(), w.via_dst.as_str()), ("(a,x)", "(b,y)"));
    }

    #[test]
    fn discontinuous_structure_is_rejected() {
        let f = Functor::builtin("C(two)").unwrap();
        let s = Arc::new(FinSpace::sierpinski());
        // two is discrete, so 0 <= 1 cannot go to a and b
        let e = Coalgebra::new(f, s, vec![FValue::Const(0), FValue::Const(1)]).unwrap_err();
        assert!(matches!(e, Error::NotContinuous(ref m) if m.contains("↑a")), "{e}");
    }

    #[test]
    fn functor_mismatch() {
        let a = Arc::new(stream(&[(0, 0)]));
        let f = Functor::builtin("C(two)").unwrap();
        let one = Arc::new(FinSpace::point());
        let b = Arc::new(Coalgebra::new(f, one.clone(), vec![FValue::Const(0)]).unwrap());
        let h = CoalgHom::new(a.clone(), b, ContMap::new(a.carrier().clone(), one, vec![0]).unwrap()).unwrap();
        assert!(matches!(is_coalg_hom(&h), Err(Error::FunctorMismatch(..))));
    }
}
