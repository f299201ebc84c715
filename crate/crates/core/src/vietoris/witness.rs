//! Executable counterexamples: the closed-set hit-and-miss construction is not
//! functorial, and the Vietoris functors do not preserve monocones.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{act_on_mask, down_mask, image_mask, mask_elements, mask_of, set_label, Variant};
use crate::error::{Error, Result};
use crate::finspace::{self, ContMap, FinSpace, Limits, PointSet};

/// Closed subsets with both hit and miss generators. Not a functor on
/// finite spaces; it only exists for the witnesses and the law checker.
#[derive(Debug, Clone)]
pub struct ClassicHyperspace {
    pub base: Arc<FinSpace>,
    members: Vec<u64>,
    index: HashMap<u64, usize>,
    pub space: Arc<FinSpace>,
}

impl ClassicHyperspace {
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn point_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }
}

pub fn classic_hyperspace(base: &Arc<FinSpace>, limits: &Limits) -> Result<ClassicHyperspace> {
    limits.check_base("classic hyperspace", base.len())?;
    let members: Vec<u64> = base.closed_sets()?.iter().map(mask_of).collect();
    limits.check("classic hyperspace", members.len())?;
    let k = members.len();
    let mut subbasis = Vec::new();
    for u in base.opens()? {
        let u = mask_of(&u);
        let mut hit = PointSet::with_capacity(k);
        hit.extend((0..k).filter(|&i| members[i] & u != 0));
        let mut miss = PointSet::with_capacity(k);
        miss.extend((0..k).filter(|&i| members[i] & !u == 0));
        subbasis.push(hit);
        subbasis.push(miss);
    }
    let labels = members.iter().map(|&m| set_label(base, m)).collect();
    let space = Arc::new(finspace::generate_topology(labels, &subbasis));
    let index = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    Ok(ClassicHyperspace {
        base: base.clone(),
        members,
        index,
        space,
    })
}

/// `A ↦ closure of f[A]` between classic hyperspaces. The resulting point
/// function need not be continuous, so it is returned as a bare table.
pub fn classic_map_action(
    f: &ContMap,
    limits: &Limits,
) -> Result<(ClassicHyperspace, ClassicHyperspace, Vec<usize>)> {
    let dom = classic_hyperspace(f.dom(), limits)?;
    let cod = classic_hyperspace(f.cod(), limits)?;
    let table = dom
        .members
        .iter()
        .map(|&m| {
            let img = down_mask(f.cod(), image_mask(f.table(), m));
            cod.point_of(img).expect("closure is closed")
        })
        .collect();
    Ok((dom, cod, table))
}

pub fn classic_preserves_embedding(m: &ContMap, limits: &Limits) -> Result<bool> {
    if !m.is_embedding() {
        return Err(Error::NotEmbedding(format!("{m:?}")));
    }
    let (dom, cod, table) = classic_map_action(m, limits)?;
    Ok(finspace::is_monotone(&dom.space, &cod.space, &table)
        && ContMap::new(dom.space.clone(), cod.space.clone(), table)
            .map(|vm| vm.is_embedding())
            .unwrap_or(false))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicWitness {
    pub points: Vec<String>,
    pub subbasis: Vec<Vec<String>>,
    pub opens: Vec<Vec<String>>,
    pub closed_sets: Vec<Vec<String>>,
    pub subspace_points: Vec<String>,
    pub subspace_closed_sets: Vec<Vec<String>>,
    /// `{1,2}□` evaluated among the closed sets of X.
    pub box_12: Vec<Vec<String>>,
    /// Its preimage under the closure-of-image action of the embedding.
    pub preimage: Vec<Vec<String>>,
    pub preimage_is_open: bool,
    /// Smallest open of the classic hyperspace of {1,2} containing {1}.
    pub neighbourhood_of_1: Vec<Vec<String>>,
    pub neighbourhood_contains_12: bool,
    pub map_is_continuous: bool,
    pub reproduced: bool,
}

fn family(base: &FinSpace, masks: impl IntoIterator<Item = u64>) -> Vec<Vec<String>> {
    masks
        .into_iter()
        .map(|m| mask_elements(m).into_iter().map(|x| base.label(x).to_string()).collect())
        .collect()
}

/// X = {1,2,3} with the topology generated by {1,2} and {2,3}, and the
/// subspace embedding {1,2} ↪ X.
pub fn classic_nonfunctoriality_witness() -> Result<ClassicWitness> {
    let limits = Limits::default();
    let labels: Vec<String> = ["1", "2", "3"].iter().map(|s| s.to_string()).collect();
    let d3 = FinSpace::discrete_n(3);
    let subbasis = vec![d3.set_of([0, 1]), d3.set_of([1, 2])];
    let x = Arc::new(finspace::generate_topology(labels.clone(), &subbasis));
    let (sub, i) = finspace::subspace(&x, &x.set_of([0, 1]));

    let (vsub, vx, table) = classic_map_action(&i, &limits)?;
    let u12 = mask_of(&x.set_of([0, 1]));
    let box_12: Vec<u64> = vx.members().iter().copied().filter(|m| m & !u12 == 0).collect();
    let box_points = vx.space.set_of(box_12.iter().map(|&m| vx.point_of(m).unwrap()));
    debug_assert!(vx.space.is_open(&box_points));
    let pre_points: Vec<usize> = (0..vsub.members().len())
        .filter(|&p| box_points.contains(table[p]))
        .collect();
    let pre_set = vsub.space.set_of(pre_points.iter().copied());
    let preimage_masks: Vec<u64> = pre_points.iter().map(|&p| vsub.members()[p]).collect();

    let one = vsub.point_of(0b01).expect("{1} is closed in {1,2}");
    let both = vsub.point_of(0b11).expect("{1,2} is closed in {1,2}");
    let nbhd = vsub.space.up(one);
    let nbhd_masks: Vec<u64> = nbhd.ones().map(|p| vsub.members()[p]).collect();

    let closed: Vec<u64> = vx.members().to_vec();
    let report = ClassicWitness {
        points: labels,
        subbasis: subbasis.iter().map(|s| x.names(s)).collect(),
        opens: x.opens()?.iter().map(|s| x.names(s)).collect(),
        closed_sets: family(&x, closed.iter().copied()),
        subspace_points: sub.labels().to_vec(),
        subspace_closed_sets: family(&sub, vsub.members().iter().copied()),
        box_12: family(&x, box_12.iter().copied()),
        preimage: family(&sub, preimage_masks.iter().copied()),
        preimage_is_open: vsub.space.is_open(&pre_set),
        neighbourhood_of_1: family(&sub, nbhd_masks),
        neighbourhood_contains_12: nbhd.contains(both),
        map_is_continuous: finspace::is_monotone(&vsub.space, &vx.space, &table),
        reproduced: false,
    };
    let expected_closed: Vec<Vec<String>> = family(&x, [0b000, 0b001, 0b100, 0b101, 0b111]);
    let expected_pre: Vec<Vec<String>> = family(&sub, [0b00, 0b01]);
    let reproduced = report.closed_sets == expected_closed
        && report.preimage == expected_pre
        && report.box_12 == family(&x, [0b000, 0b001])
        && !report.preimage_is_open
        && report.neighbourhood_contains_12
        && !report.map_is_continuous;
    Ok(ClassicWitness { reproduced, ..report })
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoconeImages {
    pub variant: Variant,
    pub pi1_a: Vec<String>,
    pub pi1_b: Vec<String>,
    pub pi2_a: Vec<String>,
    pub pi2_b: Vec<String>,
    pub all_equal_to_x: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoconeWitness {
    pub points: Vec<String>,
    pub is_hausdorff: bool,
    /// The diagonal of X × X.
    pub a: Vec<String>,
    /// All of X × X.
    pub b: Vec<String>,
    pub a_differs_from_b: bool,
    pub images: Vec<MonoconeImages>,
    pub reproduced: bool,
}

/// Both projections identify the diagonal with the whole square, for the
/// compact and for the lower Vietoris functor.
pub fn monocone_failure_witness(x: &Arc<FinSpace>) -> Result<MonoconeWitness> {
    if x.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: x.len() });
    }
    let n = x.len();
    let limits = Limits::default();
    limits.check_base("monocone witness", n * n)?;
    let prod = finspace::product(x, x);
    let diag: u64 = (0..n).fold(0, |m, i| m | (1u64 << (i * n + i)));
    let full: u64 = if n * n == 64 { u64::MAX } else { (1u64 << (n * n)) - 1 };
    let whole_x: u64 = (1u64 << n) - 1;
    let names = |base: &FinSpace, m: u64| -> Vec<String> {
        mask_elements(m).into_iter().map(|p| base.label(p).to_string()).collect()
    };
    let mut images = Vec::new();
    for variant in [Variant::Compact, Variant::Lower] {
        // the diagonal is closed in X × X only when X is T1, i.e. discrete here
        let act =
            |pr: &ContMap, m: u64| -> u64 { act_on_mask(variant, x, pr.table(), m) };
        let (p1a, p1b) = (act(&prod.proj1, diag), act(&prod.proj1, full));
        let (p2a, p2b) = (act(&prod.proj2, diag), act(&prod.proj2, full));
        images.push(MonoconeImages {
            variant,
            all_equal_to_x: [p1a, p1b, p2a, p2b].iter().all(|&m| m == whole_x),
            pi1_a: names(x, p1a),
            pi1_b: names(x, p1b),
            pi2_a: names(x, p2a),
            pi2_b: names(x, p2b),
        });
    }
    let is_hausdorff = finspace::separation(x).is_t2;
    let reproduced = diag != full && images.iter().all(|i| i.all_equal_to_x);
    Ok(MonoconeWitness {
        points: x.labels().to_vec(),
        is_hausdorff,
        a: names(&prod.space, diag),
        b: names(&prod.space, full),
        a_differs_from_b: diag != full,
        images,
        reproduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(xs: &[&[&str]]) -> Vec<Vec<String>> {
        xs.iter().map(|s| s.iter().map(|t| t.to_string()).collect()).collect()
    }

    #[test]
    fn classic_witness_reproduces() {
        let w = classic_nonfunctoriality_witness().unwrap();
        assert_eq!(
            w.closed_sets,
            strs(&[&[], &["1"], &["3"], &["1", "3"], &["1", "2", "3"]])
        );
        assert_eq!(w.box_12, strs(&[&[], &["1"]]));
        assert_eq!(w.preimage, strs(&[&[], &["1"]]));
        assert!(!w.preimage_is_open);
        assert!(w.neighbourhood_contains_12);
        assert!(w.reproduced);
    }

    #[test]
    fn classic_action_breaks_the_embedding() {
        let w = classic_nonfunctoriality_witness().unwrap();
        assert!(!w.map_is_continuous);
        let x = Arc::new(finspace::generate_topology(
            vec!["1".into(), "2".into(), "3".into()],
            &[FinSpace::discrete_n(3).set_of([0, 1]), FinSpace::discrete_n(3).set_of([1, 2])],
        ));
        let (_, i) = finspace::subspace(&x, &x.set_of([0, 1]));
        assert!(!classic_preserves_embedding(&i, &Limits::default()).unwrap());
    }

    #[test]
    fn monocone_examples() {
        for n in [2, 3] {
            let x = Arc::new(FinSpace::discrete_n(n));
            let w = monocone_failure_witness(&x).unwrap();
            assert!(w.reproduced, "n = {n}");
            assert!(w.a_differs_from_b);
            assert_eq!(w.images[0].pi1_a, x.labels().to_vec());
        }
        assert_eq!(
            monocone_failure_witness(&Arc::new(FinSpace::discrete_n(1))).unwrap_err(),
            Error::TooSmall { needed: 2, got: 1 }
        );
    }
}
