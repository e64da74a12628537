//! Finite carriers, optionally preordered.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Subsets of a carrier, bit `i` standing for element `i`.
pub type Mask = u128;

/// Largest carrier a [`Mask`] can index.
pub const MAX_CARRIER: usize = 128;

/// Shared handle to an immutable object.
pub type Obj = Arc<FiniteObject>;

pub(crate) fn full_mask(n: usize) -> Mask {
    if n == MAX_CARRIER {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub(crate) fn bits(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Whether objects carry an order. Objects of different flavours never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavour {
    Set,
    Preorder,
}

/// A reflexive, transitive relation on `0..n`. Row `i` holds every `j` with `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preorder {
    up: Vec<Mask>,
}

impl Preorder {
    pub fn discrete(n: usize) -> Self {
        Preorder {
            up: (0..n).map(|i| 1 << i).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        Preorder {
            up: vec![full_mask(n); n],
        }
    }

    /// Rows are taken as given; use [`Preorder::validate`] before trusting them.
    pub(crate) fn from_rows_unchecked(up: Vec<Mask>) -> Self {
        Preorder { up }
    }

    /// Builds the relation from index pairs `(lo, hi)` meaning `lo <= hi`.
    /// Reflexive pairs are added; transitivity is checked, not closed.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut up: Vec<Mask> = (0..n).map(|i| 1 << i).collect();
        for (lo, hi) in pairs {
            up[lo] |= 1 << hi;
        }
        Preorder { up }
    }

    /// Smallest preorder containing the given pairs.
    pub fn closure_of(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut p = Self::from_pairs(n, pairs);
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut row = p.up[i];
                for j in bits(p.up[i]) {
                    row |= p.up[j];
                }
                if row != p.up[i] {
                    p.up[i] = row;
                    changed = true;
                }
            }
            if !changed {
                return p;
            }
        }
    }

    /// Returns the first missing reflexive pair, or the first transitivity gap `(a, b, c)`.
    pub fn validate(&self, labels: &[String]) -> Result<()> {
        for (i, row) in self.up.iter().enumerate() {
            if row & (1 << i) == 0 {
                return Err(Error::NotReflexive(labels[i].clone()));
            }
        }
        for a in 0..self.len() {
            for b in bits(self.up[a]) {
                let missing = self.up[b] & !self.up[a];
                if missing != 0 {
                    let c = missing.trailing_zeros() as usize;
                    return Err(Error::NotTransitive {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        c: labels[c].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    /// Every `j` with `i <= j`.
    #[inline]
    pub fn up(&self, i: usize) -> Mask {
        self.up[i]
    }

    /// Every `j` with `j <= i`.
    pub fn down(&self, i: usize) -> Mask {
        let mut out = 0;
        for (j, row) in self.up.iter().enumerate() {
            if row >> i & 1 == 1 {
                out |= 1 << j;
            }
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.up.iter().enumerate().all(|(i, &row)| row == 1 << i)
    }

    /// All pairs `(i, j)` with `i <= j`, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| bits(row).map(move |j| (i, j)))
    }

    /// Order induced on the elements of `mask`, renumbered in increasing order.
    pub fn restrict(&self, mask: Mask) -> Preorder {
        let keep: Vec<usize> = bits(mask).collect();
        let up = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.le(i, j))
                    .fold(0, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        Preorder { up }
    }

    /// Relabel by `perm`: new element `perm[i]` is old element `i`.
    pub fn permute(&self, perm: &[usize]) -> Preorder {
        let n = self.len();
        let mut up = vec![0; n];
        for i in 0..n {
            for j in bits(self.up[i]) {
                up[perm[i]] |= 1 << perm[j];
            }
        }
        Preorder { up }
    }
}

/// A finite carrier of labelled elements with an optional preorder.
///
/// Equality ignores the display name: two objects are the same object when
/// their labels and order agree.
#[derive(Clone, Debug)]
pub struct FiniteObject {
    name: String,
    labels: Vec<String>,
    order: Option<Preorder>,
}

impl PartialEq for FiniteObject {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.order == other.order
    }
}

impl Eq for FiniteObject {}

impl FiniteObject {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        order: Option<Preorder>,
    ) -> Result<Self> {
        if labels.len() > MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: labels.len(),
                limit: MAX_CARRIER,
            });
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(p) = &order {
            if p.len() != labels.len() {
                return Err(Error::TableLength {
                    expected: labels.len(),
                    got: p.len(),
                });
            }
            p.validate(&labels)?;
        }
        Ok(FiniteObject {
            name: name.into(),
            labels,
            order,
        })
    }

    /// A plain finite set.
    pub fn set<S: Into<String>>(
        name: impl Into<String>,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Obj> {
        Self::new(name, labels.into_iter().map(Into::into).collect(), None).map(Arc::new)
    }

    /// A preordered set from label pairs `(lo, hi)`; reflexive pairs are implied.
    pub fn preorder<S: Into<String>>(
        name: impl Into<String>,
        labels: impl IntoIterator<Item = S>,
        pairs: &[(&str, &str)],
    ) -> Result<Obj> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let idx = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut ix = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            ix.push((idx(a)?, idx(b)?));
        }
        let order = Preorder::from_pairs(labels.len(), ix);
        Self::new(name, labels, Some(order)).map(Arc::new)
    }

    /// The two-point space `a <= b`.
    pub fn sierpinski() -> Obj {
        Self::preorder("S", ["a", "b"], &[("a", "b")]).expect("valid preorder")
    }

    pub(crate) fn from_parts(name: String, labels: Vec<String>, order: Option<Preorder>) -> Obj {
        debug_assert!(labels.len() <= MAX_CARRIER);
        Arc::new(FiniteObject {
            name,
            labels,
            order,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn order(&self) -> Option<&Preorder> {
        self.order.as_ref()
    }

    pub fn flavour(&self) -> Flavour {
        if self.order.is_some() {
            Flavour::Preorder
        } else {
            Flavour::Set
        }
    }

    /// `i <= j`; without an order only `i == j` holds.
    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        match &self.order {
            Some(p) => p.le(i, j),
            None => i == j,
        }
    }

    /// Elements above `i` (just `i` itself when unordered).
    #[inline]
    pub fn up(&self, i: usize) -> Mask {
        match &self.order {
            Some(p) => p.up(i),
            None => 1 << i,
        }
    }

    pub fn full(&self) -> Mask {
        full_mask(self.len())
    }

    /// Renders a subset as `{a,b}`.
    pub fn show_mask(&self, mask: Mask) -> String {
        let parts: Vec<&str> = bits(mask).map(|i| self.label(i)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// The sub-carrier on `mask` with the induced order, labels kept.
    pub fn sub_object(&self, mask: Mask) -> Obj {
        let labels = bits(mask).map(|i| self.labels[i].clone()).collect();
        let order = self.order.as_ref().map(|p| p.restrict(mask));
        Self::from_parts(
            format!("{}|{}", self.name, self.show_mask(mask)),
            labels,
            order,
        )
    }

    /// Strict order pairs as labels, for serialization.
    pub fn strict_pairs(&self) -> Vec<(String, String)> {
        match &self.order {
            None => Vec::new(),
            Some(p) => p
                .pairs()
                .filter(|(i, j)| i != j)
                .map(|(i, j)| (self.labels[i].clone(), self.labels[j].clone()))
                .collect(),
        }
    }
}

impl fmt::Display for FiniteObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.name, self.labels.join(","))?;
        let strict = self.strict_pairs();
        if !strict.is_empty() {
            let ps: Vec<String> = strict.iter().map(|(a, b)| format!("{a}<={b}")).collect();
            write!(f, "[{}]", ps.join(" "))?;
        }
        Ok(())
    }
}

/// Same object: pointer-equal or structurally equal.
#[inline]
pub fn same_object(a: &Obj, b: &Obj) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Labels `a`, `b`, ... `z`, then `e26`, `e27`, ...
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}
