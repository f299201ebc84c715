//! Exhaustive small-model enumeration: finite spaces up to isomorphism and
//! the continuous maps between them.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::finspace::{ContMap, FinSpace};

/// All preorders on `n` points up to isomorphism (1, 1, 3, 9, 33 for
/// n = 0..4), each in a canonical labelling. Refuses n > 5.
pub fn preorders_up_to_iso(n: usize) -> Vec<FinSpace> {
    assert!(n <= 5, "preorder enumeration is only meant for tiny spaces");
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << off.len()) {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (k, &(i, j)) in off.iter().enumerate() {
            if bits & (1 << k) != 0 {
                rel[i * n + j] = true;
            }
        }
        if !transitive(&rel, n) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut r = vec![false; n * n];
                for i in 0..n {
                    for j in 0..n {
                        r[p[i] * n + p[j]] = rel[i * n + j];
                    }
                }
                r
            })
            .min()
            .unwrap();
        if seen.insert(canon.clone()) {
            let labels = (0..n).map(|i| i.to_string()).collect();
            out.push(FinSpace::from_relation(labels, |i, j| canon[i * n + j]).unwrap());
        }
    }
    out
}

/// All spaces with at most `n` points, up to isomorphism, smallest first.
pub fn spaces_up_to(n: usize) -> Vec<Arc<FinSpace>> {
    (0..=n).flat_map(preorders_up_to_iso).map(Arc::new).collect()
}

fn transitive(rel: &[bool], n: usize) -> bool {
    for i in 0..n {
        for j in 0..n {
            if rel[i * n + j] {
                for k in 0..n {
                    if rel[j * n + k] && !rel[i * n + k] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

/// Every point function `dom -> cod`, as tables in lexicographic order.
pub fn all_functions(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    if dom == 0 {
        return vec![vec![]];
    }
    if cod == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut t = vec![0; dom];
    loop {
        out.push(t.clone());
        let mut i = dom;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < cod {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Every continuous map `dom -> cod`.
pub fn continuous_maps(dom: &Arc<FinSpace>, cod: &Arc<FinSpace>) -> Vec<ContMap> {
    all_functions(dom.len(), cod.len())
        .into_iter()
        .filter_map(|t| ContMap::new(dom.clone(), cod.clone(), t).ok())
        .collect()
}

/// Every subspace embedding `dom -> cod`.
pub fn embeddings(dom: &Arc<FinSpace>, cod: &Arc<FinSpace>) -> Vec<ContMap> {
    continuous_maps(dom, cod)
        .into_iter()
        .filter(|m| m.is_embedding())
        .collect()
}
