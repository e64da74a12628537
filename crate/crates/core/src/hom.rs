//! Exhaustive enumeration: hom-sets, isomorphisms, preorders up to relabelling.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::morphism::Morphism;
use crate::object::{default_labels, FiniteObject, Mask, Obj, Preorder};

/// Every morphism `x -> y`, in lexicographic order of map tables.
pub fn homs(x: &Obj, y: &Obj) -> Vec<Morphism> {
    let mut out = Vec::new();
    for_each_table(x, y, |t| out.push(t.to_vec()));
    out.into_iter()
        .map(|m| Morphism::new_unchecked(Arc::clone(x), Arc::clone(y), m))
        .collect()
}

/// Number of morphisms `x -> y`.
pub fn hom_count(x: &Obj, y: &Obj) -> usize {
    let mut n = 0;
    for_each_table(x, y, |_| n += 1);
    n
}

/// Depth-first over map tables with monotonicity pruning; tables arrive in
/// lexicographic order.
pub fn for_each_table(x: &Obj, y: &Obj, mut visit: impl FnMut(&[usize])) {
    let n = x.len();
    if n == 0 {
        visit(&[]);
        return;
    }
    if y.is_empty() {
        return;
    }
    let m = y.len();
    let mut table = vec![0usize; n];
    let mut pos = 0usize;
    let mut next = vec![0usize; n];
    loop {
        if next[pos] >= m {
            next[pos] = 0;
            if pos == 0 {
                return;
            }
            pos -= 1;
            continue;
        }
        let v = next[pos];
        next[pos] += 1;
        if consistent(x, y, &table[..pos], pos, v) {
            table[pos] = v;
            if pos + 1 == n {
                visit(&table);
            } else {
                pos += 1;
            }
        }
    }
}

fn consistent(x: &Obj, y: &Obj, assigned: &[usize], pos: usize, v: usize) -> bool {
    if x.order().is_none() {
        return true;
    }
    assigned.iter().enumerate().all(|(i, &w)| {
        (!x.le(i, pos) || y.le(w, v)) && (!x.le(pos, i) || y.le(v, w))
    })
}

/// Every isomorphism `x -> y`.
pub fn isos(x: &Obj, y: &Obj) -> Vec<Morphism> {
    if x.len() != y.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for perm in permutations(x.len()) {
        let f = Morphism::new_unchecked(Arc::clone(x), Arc::clone(y), perm);
        if f.is_iso() {
            out.push(f);
        }
    }
    out
}

/// First isomorphism `x -> y` found by bijection search.
pub fn find_iso(x: &Obj, y: &Obj) -> Option<Morphism> {
    if x.len() != y.len() || x.flavour() != y.flavour() {
        return None;
    }
    permutations(x.len())
        .into_iter()
        .map(|perm| Morphism::new_unchecked(Arc::clone(x), Arc::clone(y), perm))
        .find(Morphism::is_iso)
}

pub fn is_isomorphic(x: &Obj, y: &Obj) -> bool {
    find_iso(x, y).is_some()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Every preorder on `0..n`, labelled.
pub fn all_preorders(n: usize) -> Vec<Preorder> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let labels = default_labels(n);
    let mut out = Vec::new();
    // 2^(n(n-1)) candidate relations; fine up to n = 5
    for bitsel in 0u64..(1u64 << off.len()) {
        let pairs = off
            .iter()
            .enumerate()
            .filter(|(k, _)| bitsel >> k & 1 == 1)
            .map(|(_, &p)| p);
        let p = Preorder::from_pairs(n, pairs);
        if p.validate(&labels).is_ok() {
            out.push(p);
        }
    }
    out
}

fn canonical_form(p: &Preorder, perms: &[Vec<usize>]) -> Preorder {
    perms
        .iter()
        .map(|perm| p.permute(perm))
        .min()
        .expect("at least the identity permutation")
}

/// One representative per isomorphism class of preorders on `n` points,
/// each in its canonical (minimal-rows) labelling, sorted.
pub fn preorders_up_to_iso(n: usize) -> Vec<Preorder> {
    let perms = permutations(n);
    let classes: BTreeSet<Preorder> = all_preorders(n)
        .iter()
        .map(|p| canonical_form(p, &perms))
        .collect();
    classes.into_iter().collect()
}

/// Canonical objects of the preorder context with carriers of exactly `n` points.
pub fn preorder_objects(n: usize) -> Vec<Obj> {
    preorders_up_to_iso(n)
        .into_iter()
        .enumerate()
        .map(|(k, p)| FiniteObject::from_parts(format!("P{n}.{k}"), default_labels(n), Some(p)))
        .collect()
}

pub fn set_object(n: usize) -> Obj {
    FiniteObject::from_parts(format!("S{n}"), default_labels(n), None)
}

/// Every subset of the carrier, in increasing mask order.
pub fn subsets(x: &FiniteObject) -> impl Iterator<Item = Mask> {
    let full = x.full();
    (0..=full).filter(move |m| m & !full == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_class_counts() {
        // OEIS A000798 counts labelled preorders, A001930 unlabelled ones.
        let labelled: Vec<usize> = (0..=4).map(|n| all_preorders(n).len()).collect();
        assert_eq!(labelled, vec![1, 1, 4, 29, 355]);
        let classes: Vec<usize> = (0..=4).map(|n| preorders_up_to_iso(n).len()).collect();
        assert_eq!(classes, vec![1, 1, 3, 9, 33]);
    }

    #[test]
    fn monotone_endomaps_of_sierpinski() {
        let s = FiniteObject::sierpinski();
        let tables: Vec<Vec<usize>> = homs(&s, &s).iter().map(|f| f.table().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn set_hom_counts_are_powers() {
        for a in 0..4 {
            for b in 0usize..4 {
                let expected = b.pow(a as u32);
                assert_eq!(hom_count(&set_object(a), &set_object(b)), expected);
            }
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }
}
