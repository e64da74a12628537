//! Total maps between finite objects.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::object::{bits, same_object, FiniteObject, Mask, Obj};

/// A total, monotone (when ordered) map of carriers.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: Obj,
    target: Obj,
    map: Vec<usize>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
            && same_object(&self.source, &other.source)
            && same_object(&self.target, &other.target)
    }
}

impl Eq for Morphism {}

impl Morphism {
    pub fn new(source: Obj, target: Obj, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::TableLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(i) = map.iter().position(|&j| j >= target.len()) {
            return Err(Error::OutOfRange(source.label(i).to_string()));
        }
        if source.flavour() != target.flavour() {
            return Err(Error::FlavourMismatch);
        }
        let f = Morphism {
            source,
            target,
            map,
        };
        if let Some((lo, hi)) = f.monotonicity_gap() {
            return Err(Error::NotMonotone {
                lo: f.source.label(lo).to_string(),
                hi: f.source.label(hi).to_string(),
            });
        }
        Ok(f)
    }

    /// Builds from `(source label, target label)` pairs.
    pub fn from_labels(source: Obj, target: Obj, table: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in table {
            let i = source
                .index_of(a)
                .ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
            let j = target
                .index_of(b)
                .ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::OutOfRange(source.label(i).to_string()));
        }
        Self::new(source, target, map)
    }

    pub(crate) fn new_unchecked(source: Obj, target: Obj, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), source.len());
        Morphism {
            source,
            target,
            map,
        }
    }

    pub fn identity(x: &Obj) -> Self {
        Morphism {
            source: Arc::clone(x),
            target: Arc::clone(x),
            map: (0..x.len()).collect(),
        }
    }

    /// The map sending everything to `value` in `target`.
    pub fn constant(source: &Obj, target: &Obj, value: usize) -> Result<Self> {
        Self::new(
            Arc::clone(source),
            Arc::clone(target),
            vec![value; source.len()],
        )
    }

    pub fn source(&self) -> &Obj {
        &self.source
    }

    pub fn target(&self) -> &Obj {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    fn monotonicity_gap(&self) -> Option<(usize, usize)> {
        self.source.order()?;
        for i in 0..self.source.len() {
            for j in bits(self.source.up(i)) {
                if !self.target.le(self.map[i], self.map[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        let mut seen: Mask = 0;
        for &j in &self.map {
            if seen >> j & 1 == 1 {
                return false;
            }
            seen |= 1 << j;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        self.image_mask(self.source.full()) == self.target.full()
    }

    /// Injective and order-reflecting: `f(i) <= f(j)` implies `i <= j`.
    pub fn is_embedding(&self) -> bool {
        self.is_injective() && self.reflects_order()
    }

    pub fn reflects_order(&self) -> bool {
        if self.source.order().is_none() {
            return true;
        }
        let n = self.source.len();
        (0..n).all(|i| {
            (0..n).all(|j| !self.target.le(self.map[i], self.map[j]) || self.source.le(i, j))
        })
    }

    /// Monomorphisms of both built-in concrete categories are the injective maps.
    pub fn is_mono(&self) -> bool {
        self.is_injective()
    }

    /// Epimorphisms of both built-in concrete categories are the surjective maps.
    pub fn is_epi(&self) -> bool {
        self.is_surjective()
    }

    /// Bijective with monotone inverse.
    pub fn is_iso(&self) -> bool {
        self.source.len() == self.target.len() && self.is_embedding() && self.is_surjective()
    }

    pub fn image_mask(&self, mask: Mask) -> Mask {
        bits(mask).fold(0, |acc, i| acc | 1 << self.map[i])
    }

    pub fn preimage_mask(&self, mask: Mask) -> Mask {
        self.map
            .iter()
            .enumerate()
            .filter(|&(_, &j)| mask >> j & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Inverse table of an iso.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_iso() {
            return None;
        }
        let mut inv = vec![0; self.target.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Some(Morphism::new_unchecked(
            Arc::clone(&self.target),
            Arc::clone(&self.source),
            inv,
        ))
    }

    /// Label table `source label -> target label`.
    pub fn label_table(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    self.source.label(i).to_string(),
                    self.target.label(j).to_string(),
                )
            })
            .collect()
    }

    /// Same map with the target replaced by an equal object.
    pub(crate) fn with_target(&self, target: Obj) -> Morphism {
        debug_assert!(same_object(&self.target, &target));
        Morphism::new_unchecked(Arc::clone(&self.source), target, self.map.clone())
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .label_table()
            .into_iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        write!(
            f,
            "{} -> {} [{}]",
            self.source.name(),
            self.target.name(),
            entries.join(", ")
        )
    }
}

/// `g ∘ f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if !same_object(f.target(), g.source()) {
        return Err(Error::EndpointMismatch(format!(
            "cannot compose {} after {}",
            g.source().name(),
            f.target().name()
        )));
    }
    Ok(Morphism::new_unchecked(
        Arc::clone(f.source()),
        Arc::clone(g.target()),
        f.map.iter().map(|&i| g.map[i]).collect(),
    ))
}

/// Does `p` factor through `q` (some `w` with `q ∘ w = p`)? Returns the factor.
pub fn factor_through(p: &Morphism, q: &Morphism) -> Option<Morphism> {
    if !same_object(p.target(), q.target()) {
        return None;
    }
    if q.is_injective() {
        let table: Option<Vec<usize>> = p
            .map
            .iter()
            .map(|&x| q.map.iter().position(|&y| y == x))
            .collect();
        return Morphism::new(Arc::clone(p.source()), Arc::clone(q.source()), table?).ok();
    }
    crate::hom::homs(p.source(), q.source())
        .into_iter()
        .find(|w| w.map.iter().map(|&i| q.map[i]).eq(p.map.iter().copied()))
}

impl FiniteObject {
    /// Inclusion of the sub-carrier on `mask`.
    pub fn inclusion(self: &Arc<Self>, mask: Mask) -> Morphism {
        let sub = self.sub_object(mask);
        Morphism::new_unchecked(sub, Arc::clone(self), bits(mask).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_checks_endpoints() {
        let x = FiniteObject::set("X", ["a", "b"]).unwrap();
        let y = FiniteObject::set("Y", ["c"]).unwrap();
        let f = Morphism::constant(&x, &y, 0).unwrap();
        assert!(matches!(compose(&f, &f), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn constants_compose_to_constant() {
        let x = FiniteObject::set("X", ["a", "b"]).unwrap();
        let y = FiniteObject::set("Y", ["c"]).unwrap();
        let z = FiniteObject::set("Z", ["d"]).unwrap();
        let f = Morphism::constant(&x, &y, 0).unwrap();
        let g = Morphism::constant(&y, &z, 0).unwrap();
        let h = compose(&g, &f).unwrap();
        assert_eq!(h.label_table(), vec![("a".into(), "d".into()), ("b".into(), "d".into())]);
        assert_eq!(compose(&Morphism::identity(&y), &f).unwrap(), f);
    }

    #[test]
    fn non_monotone_rejected() {
        let s = FiniteObject::sierpinski();
        let err = Morphism::new(s.clone(), s, vec![1, 0]).unwrap_err();
        assert!(matches!(err, Error::NotMonotone { .. }));
    }

    #[test]
    fn continuous_bijection_is_not_iso() {
        let d2 = FiniteObject::preorder("D2", ["a", "b"], &[]).unwrap();
        let s = FiniteObject::sierpinski();
        let f = Morphism::new(d2, s, vec![0, 1]).unwrap();
        assert!(f.is_mono() && f.is_epi());
        assert!(!f.is_iso());
        assert!(!f.is_embedding());
    }
}
