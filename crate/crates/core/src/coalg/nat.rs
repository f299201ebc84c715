//! Subfunctor inclusions `σ : F ↪ G`, the induced functor on coalgebras, and
//! the coreflection of `G`-coalgebras into `F`-coalgebras.

use std::sync::Arc;

use serde::Serialize;

use super::{largest_subcoalgebra, CoalgHom, Coalgebra};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace};
use crate::functorlang::{FSpace, Functor};
use crate::vietoris::Variant;

/// An inclusion of functors that act identically on shared values, such as
/// `V+ ↪ V` or `Vc ↪ V` applied leafwise inside a larger expression.
#[derive(Debug, Clone)]
pub struct NatTransformation {
    pub src: Functor,
    pub dst: Functor,
}

#[derive(Debug, Clone)]
pub struct NatComponent {
    pub src: FSpace,
    pub dst: FSpace,
    pub map: ContMap,
}

impl NatTransformation {
    /// `σ : G[V := variant] ↪ G`.
    pub fn inclusion(dst: Functor, variant: Variant) -> Result<NatTransformation> {
        if !matches!(variant, Variant::CompactNonempty | Variant::CompactConnected) {
            return Err(Error::Invalid(format!("{variant} is not a subfunctor of V")));
        }
        let src = dst.with_expr(dst.expr.replace_compact(variant));
        Ok(NatTransformation { src, dst })
    }

    pub fn identity(f: Functor) -> NatTransformation {
        NatTransformation {
            src: f.clone(),
            dst: f,
        }
    }

    /// Every component is injective.
    pub fn is_mono(&self) -> bool {
        true
    }

    pub fn component(&self, x: &Arc<FinSpace>) -> Result<NatComponent> {
        let src = self.src.apply(x)?;
        let dst = self.dst.apply(x)?;
        let table = src
            .values()
            .iter()
            .map(|v| {
                dst.index_of(v)
                    .ok_or_else(|| Error::ComponentUndefined(format!("{v:?} is not in `{}`", self.dst.expr)))
            })
            .collect::<Result<Vec<_>>>()?;
        let map = ContMap::new(src.space.clone(), dst.space.clone(), table)?;
        Ok(NatComponent { src, dst, map })
    }

    /// `G(f) ∘ σ_X = σ_Y ∘ F(f)`.
    pub fn natural_at(&self, f: &ContMap) -> Result<bool> {
        let (sx, sy) = (self.component(f.dom())?, self.component(f.cod())?);
        let (ff, gf) = (self.src.apply_map(f)?, self.dst.apply_map(f)?);
        Ok((0..sx.src.len()).all(|v| gf.map.apply(sx.map.apply(v)) == sy.map.apply(ff.map.apply(v))))
    }
}

/// `I(X, c) = (X, σ_X ∘ c)`.
pub fn induced_functor_i(sigma: &NatTransformation, coalg: &Coalgebra) -> Result<Coalgebra> {
    if coalg.functor().expr != sigma.src.expr {
        return Err(Error::ComponentUndefined(format!(
            "σ starts at `{}`, the coalgebra is for `{}`",
            sigma.src.expr,
            coalg.functor().expr
        )));
    }
    let comp = sigma.component(coalg.carrier())?;
    let structure = coalg.structure().iter().map(|&v| comp.map.apply(v)).collect();
    Coalgebra::from_indices(sigma.dst.clone(), coalg.carrier().clone(), comp.dst, structure)
}

#[derive(Debug, Clone)]
pub struct Coreflection {
    /// The `F`-coalgebra.
    pub coalgebra: Arc<Coalgebra>,
    /// Its image under `I`, which is what the counit starts from.
    pub induced: Arc<Coalgebra>,
    /// `I(coreflection) → (Y, d)`, an embedding.
    pub counit: CoalgHom,
    /// `{y | d(y) ∈ im σ_Y}`, as labels.
    pub pullback: Vec<String>,
}

/// Restricts `(Y, d)` to `S = {y | d(y) ∈ im σ_Y}`, takes the largest
/// subcoalgebra inside `S`, and reads its structure back through `σ`.
pub fn coreflect(sigma: &NatTransformation, gcoalg: &Arc<Coalgebra>) -> Result<Coreflection> {
    if gcoalg.functor().expr != sigma.dst.expr {
        return Err(Error::FunctorMismatch(
            sigma.dst.expr.to_string(),
            gcoalg.functor().expr.to_string(),
        ));
    }
    let y = gcoalg.carrier();
    let comp = sigma.component(y)?;
    if !sigma.is_mono() || !comp.map.is_embedding() {
        return Err(Error::NotMono(format!("component of σ at {:?}", y.labels())));
    }
    let image = comp.map.image(&comp.src.space.full_set());
    let s = y.set_of((0..y.len()).filter(|&p| image.contains(gcoalg.structure()[p])));
    let pullback = y.names(&s);
    let sub = largest_subcoalgebra(gcoalg, &s)?;
    let t = sub.coalgebra.carrier();
    let ft = sigma.src.apply(t)?;
    let structure = (0..t.len())
        .map(|p| {
            let v = sub.coalgebra.value(p);
            ft.index_of(v).ok_or_else(|| {
                Error::Invalid(format!("σ is not taut here: {v:?} has no preimage over the subcoalgebra"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let coalgebra = Arc::new(Coalgebra::from_indices(sigma.src.clone(), t.clone(), ft, structure)?);
    let induced = Arc::new(induced_functor_i(sigma, &coalgebra)?);
    let counit = CoalgHom::new(induced.clone(), gcoalg.clone(), sub.embedding.map.clone())?;
    Ok(Coreflection {
        coalgebra,
        induced,
        counit,
        pullback,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TautReport {
    pub is_pullback: bool,
    pub witness: Option<String>,
}

/// Whether the naturality square of `σ` at the mono `m : A → X` is a
/// pullback: every `(u, w) ∈ F(X) × G(A)` with `σ_X(u) = G(m)(w)` has exactly
/// one fill-in `v ∈ F(A)`, and `F(A)` carries the initial topology of the
/// two legs.
pub fn taut_check(sigma: &NatTransformation, m: &ContMap) -> Result<TautReport> {
    if !m.is_injective() {
        return Err(Error::NotMono(format!("{m:?}")));
    }
    let (sa, sx) = (sigma.component(m.dom())?, sigma.component(m.cod())?);
    let fm = sigma.src.apply_map(m)?;
    let gm = sigma.dst.apply_map(m)?;
    let mut sx_inv = vec![None; sx.dst.len()];
    for (u, &t) in sx.map.table().iter().enumerate() {
        sx_inv[t] = Some(u);
    }
    for w in 0..sa.dst.len() {
        let Some(u) = sx_inv[gm.map.apply(w)] else {
            continue;
        };
        let fills = (0..sa.src.len())
            .filter(|&v| fm.map.apply(v) == u && sa.map.apply(v) == w)
            .count();
        if fills != 1 {
            return Ok(TautReport {
                is_pullback: false,
                witness: Some(format!(
                    "({}, {}) has {fills} fill-ins",
                    sx.src.label(u),
                    sa.dst.label(w)
                )),
            });
        }
    }
    let fa = &sa.src.space;
    for v in 0..fa.len() {
        for v2 in 0..fa.len() {
            let legs = fm.cod.space.leq(fm.map.apply(v), fm.map.apply(v2))
                && sa.dst.space.leq(sa.map.apply(v), sa.map.apply(v2));
            if legs != fa.leq(v, v2) {
                return Ok(TautReport {
                    is_pullback: false,
                    witness: Some(format!("order on {} and {} is not initial", fa.label(v), fa.label(v2))),
                });
            }
        }
    }
    Ok(TautReport {
        is_pullback: true,
        witness: None,
    })
}
