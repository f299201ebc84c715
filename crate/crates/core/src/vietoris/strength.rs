//! The strength `τ_{X,Y} : V X × Y → V(X × Y)`, `(S, y) ↦ S × {y}`.

use std::sync::Arc;

use serde::Serialize;

use super::{compact_vietoris, image_mask, mask_elements, mask_of, Hyperspace};
use crate::error::Result;
use crate::finspace::{self, ContMap, FinSpace, Limits, PointSet};

/// `S × {y}` as a mask over `X × Y`, where `(x, y)` has index `x * ny + y`.
pub fn strength_tau(s: u64, y: usize, ny: usize) -> u64 {
    mask_elements(s)
        .into_iter()
        .fold(0, |m, x| m | (1u64 << (x * ny + y)))
}

pub struct StrengthMap {
    pub vx: Hyperspace,
    pub vxy: Hyperspace,
    /// Domain is the product `V X × Y`, indexed `point * |Y| + y`.
    pub tau: ContMap,
}

/// The whole map `τ_{X,Y}`, validated as continuous.
pub fn strength_map(x: &Arc<FinSpace>, y: &Arc<FinSpace>, limits: &Limits) -> Result<StrengthMap> {
    let vx = compact_vietoris(x, limits)?;
    let xy = finspace::product(x, y);
    let vxy = compact_vietoris(&xy.space, limits)?;
    let dom = finspace::product(&vx.space, y);
    let ny = y.len();
    let table = (0..vx.len())
        .flat_map(|p| (0..ny).map(move |q| (p, q)))
        .map(|(p, q)| {
            let m = strength_tau(vx.members()[p], q, ny);
            vxy.point_of(m).expect("every subset is a point of V")
        })
        .collect();
    let tau = ContMap::new(dom.space, vxy.space.clone(), table)?;
    Ok(StrengthMap { vx, vxy, tau })
}

#[derive(Debug, Clone, Serialize)]
pub struct StrengthCheck {
    pub continuous: bool,
    pub diamond_checked: usize,
    pub box_checked: usize,
    pub failures: Vec<String>,
}

impl StrengthCheck {
    pub fn passed(&self) -> bool {
        self.continuous && self.failures.is_empty()
    }
}

/// Checks, for every family of at most two open rectangles `U_i × V_i`
/// with `W = ∪ U_i × V_i`,
///
/// ```text
/// τ⁻¹[W◇] = ∪_i U_i◇ × V_i
/// τ⁻¹[W□] = ∪_{F ⊆ I} (∪_F U_i)□ × ∩_F V_i
/// ```
///
/// as subsets of `V X × Y`. The empty `F` contributes `{∅} × Y`.
pub fn check_strength_identities(
    x: &Arc<FinSpace>,
    y: &Arc<FinSpace>,
    limits: &Limits,
) -> Result<StrengthCheck> {
    let sm = strength_map(x, y, limits)?;
    let ny = y.len();
    let k = sm.vx.len();
    let total = k * ny;
    let ux: Vec<u64> = x.opens()?.iter().map(mask_of).collect();
    let vy: Vec<u64> = y.opens()?.iter().map(mask_of).collect();
    let full_y: u64 = if ny == 0 { 0 } else { (1u64 << ny) - 1 };
    let rects: Vec<(u64, u64)> = ux.iter().flat_map(|&u| vy.iter().map(move |&v| (u, v))).collect();

    let mut families: Vec<Vec<(u64, u64)>> = vec![vec![]];
    for (i, &r) in rects.iter().enumerate() {
        families.push(vec![r]);
        for &s in &rects[i + 1..] {
            families.push(vec![r, s]);
        }
    }

    let rect_mask = |u: u64, v: u64| -> u64 {
        mask_elements(u)
            .into_iter()
            .flat_map(|a| mask_elements(v).into_iter().map(move |b| a * ny + b))
            .fold(0u64, |m, i| m | (1u64 << i))
    };
    let in_family = |fam: &[(u64, u64)]| fam.iter().fold(0u64, |m, &(u, v)| m | rect_mask(u, v));
    let point = |p: usize, q: usize| p * ny + q;

    let mut check = StrengthCheck {
        continuous: finspace::is_continuous(&sm.tau),
        diamond_checked: 0,
        box_checked: 0,
        failures: Vec::new(),
    };
    for fam in &families {
        let w = in_family(fam);
        let pre = |keep: &dyn Fn(u64) -> bool| -> PointSet {
            let mut s = PointSet::with_capacity(total);
            for p in 0..k {
                for q in 0..ny {
                    let img = sm.vxy.members()[sm.tau.apply(point(p, q))];
                    if keep(img) {
                        s.insert(point(p, q));
                    }
                }
            }
            s
        };

        let lhs_d = pre(&|a| a & w != 0);
        let mut rhs_d = PointSet::with_capacity(total);
        for &(u, v) in fam {
            for p in (0..k).filter(|&p| sm.vx.members()[p] & u != 0) {
                for q in mask_elements(v) {
                    rhs_d.insert(point(p, q));
                }
            }
        }
        check.diamond_checked += 1;
        if lhs_d != rhs_d {
            check.failures.push(format!("diamond identity fails for {fam:?}"));
        }

        let lhs_b = pre(&|a| a & !w == 0);
        let mut rhs_b = PointSet::with_capacity(total);
        for sel in 0u32..(1 << fam.len()) {
            let chosen: Vec<&(u64, u64)> =
                fam.iter().enumerate().filter(|(i, _)| sel & (1 << i) != 0).map(|(_, r)| r).collect();
            let uu = chosen.iter().fold(0u64, |m, r| m | r.0);
            let vv = chosen.iter().fold(full_y, |m, r| m & r.1);
            for p in (0..k).filter(|&p| sm.vx.members()[p] & !uu == 0) {
                for q in mask_elements(vv) {
                    rhs_b.insert(point(p, q));
                }
            }
        }
        check.box_checked += 1;
        if lhs_b != rhs_b {
            check.failures.push(format!("box identity fails for {fam:?}"));
        }
    }
    Ok(check)
}

/// Naturality of `τ` at `f × g`: `V(f × g) ∘ τ = τ ∘ (V f × g)`, checked on
/// every point of `V X × Y`.
pub fn tau_natural_at(f: &ContMap, g: &ContMap, limits: &Limits) -> Result<bool> {
    let (x, x2) = (f.dom(), f.cod());
    let (y, y2) = (g.dom(), g.cod());
    limits.check_base("strength naturality", x.len() * y.len())?;
    limits.check_base("strength naturality", x2.len() * y2.len())?;
    let (ny, ny2) = (y.len(), y2.len());
    let fg: Vec<usize> = (0..x.len())
        .flat_map(|a| (0..ny).map(move |b| (a, b)))
        .map(|(a, b)| f.apply(a) * ny2 + g.apply(b))
        .collect();
    for s in 0..(1u64 << x.len()) {
        for q in 0..ny {
            let left = image_mask(&fg, strength_tau(s, q, ny));
            let right = strength_tau(image_mask(f.table(), s), g.apply(q), ny2);
            if left != right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{continuous_maps, spaces_up_to};

    #[test]
    fn tau_on_small_sets() {
        assert_eq!(strength_tau(0, 1, 3), 0);
        // {x1} × {y2} in a 2 × 3 product is the point 1 * 3 + 2
        assert_eq!(strength_tau(0b10, 2, 3), 1 << 5);
    }

    #[test]
    fn identities_and_continuity_on_small_spaces() {
        let spaces = spaces_up_to(2);
        for x in &spaces {
            for y in &spaces {
                let c = check_strength_identities(x, y, &Limits::default()).unwrap();
                assert!(c.passed(), "{x:?} {y:?}: {:?}", c.failures);
            }
        }
    }

    #[test]
    fn naturality_on_two_point_spaces() {
        let spaces = spaces_up_to(2);
        for x in &spaces {
            for x2 in &spaces {
                for f in continuous_maps(x, x2) {
                    for y in &spaces {
                        let g = ContMap::identity(y.clone());
                        assert!(tau_natural_at(&f, &g, &Limits::default()).unwrap());
                    }
                }
            }
        }
    }
}
