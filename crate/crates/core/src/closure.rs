//! Closure operators on admissible subobjects, and the spaces they define.
//!
//! A space is an object together with a closure operator on its subobject
//! lattice. The built-in closure families are all grounded, additive,
//! idempotent and extensive, which on a finite carrier makes them
//! topologies; such an operator is fully described by the closures of
//! singletons, i.e. by its specialization preorder. [`Topology`] stores
//! exactly that. Arbitrary operators can still be validated through
//! [`ClosureTable`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom::subsets;
use crate::limits::{coproduct, pullback, terminal, Coproduct};
use crate::morphism::Morphism;
use crate::object::{bits, full_mask, same_object, Flavour, FiniteObject, Mask, Obj};
use crate::report::{Check, Report, Witness};
use crate::subobject::Subobject;

/// A closure map on the subsets of an `n`-element carrier.
pub trait ClosureOperator {
    fn carrier_len(&self) -> usize;
    fn close(&self, mask: Mask) -> Mask;
}

/// Additive closure given by the closures of points: `cls(S) = ⋃_{y ∈ S} cls{y}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    point_closure: Vec<Mask>,
}

impl Topology {
    /// Closed sets are the down-sets of the object's order (discrete when unordered).
    pub fn alexandrov(x: &FiniteObject) -> Self {
        match x.order() {
            Some(p) => Topology {
                point_closure: (0..x.len()).map(|i| p.down(i)).collect(),
            },
            None => Self::discrete(x.len()),
        }
    }

    pub fn discrete(n: usize) -> Self {
        Topology {
            point_closure: (0..n).map(|i| 1 << i).collect(),
        }
    }

    /// `cls(∅) = ∅`, everything else closes to the whole carrier.
    pub fn indiscrete(n: usize) -> Self {
        Topology {
            point_closure: vec![full_mask(n); n],
        }
    }

    /// Reads off point closures; faithful only for additive grounded operators.
    pub fn from_operator(op: &impl ClosureOperator) -> Self {
        Topology {
            point_closure: (0..op.carrier_len()).map(|i| op.close(1 << i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.point_closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_closure.is_empty()
    }

    #[inline]
    pub fn cls(&self, mask: Mask) -> Mask {
        bits(mask).fold(0, |acc, i| acc | self.point_closure[i])
    }

    /// `cls{y}`.
    #[inline]
    pub fn point(&self, y: usize) -> Mask {
        self.point_closure[y]
    }

    /// `x ∈ cls{y}`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.point_closure[y] >> x & 1 == 1
    }

    /// Subspace closure on `mask`: `cls_M(u) = M ∩ cls(u)`, renumbered.
    pub fn restrict(&self, mask: Mask) -> Topology {
        let keep: Vec<usize> = bits(mask).collect();
        let point_closure = keep
            .iter()
            .map(|&y| {
                let c = self.point_closure[y];
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &x)| c >> x & 1 == 1)
                    .fold(0, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        Topology { point_closure }
    }

    /// Product topology restricted to the listed pairs.
    pub fn on_pairs(a: &Topology, b: &Topology, pairs: &[(usize, usize)]) -> Topology {
        let point_closure = pairs
            .iter()
            .map(|&(y1, y2)| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(x1, x2))| a.specializes(x1, y1) && b.specializes(x2, y2))
                    .fold(0, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        Topology { point_closure }
    }
}

impl ClosureOperator for Topology {
    fn carrier_len(&self) -> usize {
        self.len()
    }

    fn close(&self, mask: Mask) -> Mask {
        self.cls(mask)
    }
}

/// An arbitrary map on subsets, stored as a full table (small carriers only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureTable {
    n: usize,
    table: Vec<Mask>,
}

impl ClosureTable {
    pub const MAX_CARRIER: usize = 12;

    pub fn from_fn(n: usize, f: impl Fn(Mask) -> Mask) -> Result<Self> {
        if n > Self::MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: n,
                limit: Self::MAX_CARRIER,
            });
        }
        let table = (0..(1 as Mask) << n).map(f).collect();
        Ok(ClosureTable { n, table })
    }
}

impl ClosureOperator for ClosureTable {
    fn carrier_len(&self) -> usize {
        self.n
    }

    fn close(&self, mask: Mask) -> Mask {
        self.table[mask as usize]
    }
}

/// Closure assignments selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureFamily {
    /// Down-set closure of the object's order.
    Alexandrov,
    /// Every subobject is closed.
    Identity,
    /// Only `∅` and the top are closed.
    Indiscrete,
}

impl ClosureFamily {
    pub const ALL: [ClosureFamily; 3] = [Self::Alexandrov, Self::Identity, Self::Indiscrete];

    pub fn name(self) -> &'static str {
        match self {
            Self::Alexandrov => "alexandrov",
            Self::Identity => "identity",
            Self::Indiscrete => "indiscrete",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }

    pub fn topology(self, x: &FiniteObject) -> Topology {
        match self {
            Self::Alexandrov => Topology::alexandrov(x),
            Self::Identity => Topology::discrete(x.len()),
            Self::Indiscrete => Topology::indiscrete(x.len()),
        }
    }

    pub fn space(self, x: &Obj) -> Space {
        Space {
            object: Arc::clone(x),
            topology: self.topology(x),
        }
    }
}

impl fmt::Display for ClosureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An object with a closure operator on its admissible subobjects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    object: Obj,
    topology: Topology,
}

impl Space {
    pub fn new(object: Obj, topology: Topology) -> Result<Self> {
        if object.len() != topology.len() {
            return Err(Error::TableLength {
                expected: object.len(),
                got: topology.len(),
            });
        }
        Ok(Space { object, topology })
    }

    pub fn object(&self) -> &Obj {
        &self.object
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn cls_mask(&self, mask: Mask) -> Mask {
        self.topology.cls(mask)
    }

    pub fn cls(&self, m: &Subobject) -> Subobject {
        Subobject::new(&self.object, self.topology.cls(m.mask()))
    }

    pub fn is_closed_mask(&self, mask: Mask) -> bool {
        self.topology.cls(mask) == mask
    }

    pub fn is_closed_subobject(&self, m: &Subobject) -> bool {
        self.is_closed_mask(m.mask())
    }

    /// Every closed subobject, in mask order.
    pub fn closed_lattice(&self) -> Vec<Subobject> {
        subsets(&self.object)
            .filter(|&m| self.is_closed_mask(m))
            .map(|m| Subobject::new(&self.object, m))
            .collect()
    }

    /// The subspace on `mask` together with its inclusion.
    pub fn subspace(&self, mask: Mask) -> (Space, SpaceMorphism) {
        let inc = self.object.inclusion(mask);
        let sub = Space {
            object: Arc::clone(inc.source()),
            topology: self.topology.restrict(mask),
        };
        let m = SpaceMorphism {
            source: sub.clone(),
            target: self.clone(),
            map: inc,
        };
        (sub, m)
    }

    /// Whole space onto the one-point space.
    pub fn to_terminal(&self) -> SpaceMorphism {
        let one = terminal_space(self.object.flavour());
        SpaceMorphism {
            map: crate::limits::to_terminal(&self.object).with_target(Arc::clone(one.object())),
            source: self.clone(),
            target: one,
        }
    }
}

/// The one-point space; every closure family agrees on it.
pub fn terminal_space(flavour: Flavour) -> Space {
    let one = terminal(flavour);
    Space {
        topology: Topology::discrete(1),
        object: one,
    }
}

pub fn initial_space(flavour: Flavour) -> Space {
    Space {
        object: crate::limits::initial(flavour),
        topology: Topology::discrete(0),
    }
}

/// A morphism between the underlying objects of two spaces. Continuity is a
/// separate predicate, see [`is_continuous`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMorphism {
    source: Space,
    target: Space,
    map: Morphism,
}

impl SpaceMorphism {
    pub fn new(source: Space, target: Space, map: Morphism) -> Result<Self> {
        if !same_object(map.source(), &source.object) || !same_object(map.target(), &target.object) {
            return Err(Error::EndpointMismatch(format!(
                "morphism {} does not run between the given spaces",
                map
            )));
        }
        Ok(SpaceMorphism {
            source,
            target,
            map,
        })
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn underlying(&self) -> &Morphism {
        &self.map
    }
}

/// Validates the closure laws on every subset of `x`'s carrier.
pub fn validate_closure(x: &FiniteObject, c: &impl ClosureOperator) -> Report {
    let mut r = Report::new(format!("closure on {}", x.name()));
    let mut extensive = Check::new("extensive");
    let mut monotone = Check::new("monotone");
    let mut idempotent = Check::new("idempotent");
    let mut additive = Check::new("additive");
    let mut grounded = Check::new("grounded");
    if c.carrier_len() != x.len() {
        extensive.fail(Witness::new("closure carrier size differs from object").object(x));
        r.checks.extend([extensive, monotone, idempotent, additive, grounded]);
        return r;
    }
    let all: Vec<Mask> = subsets(x).collect();
    let closed: Vec<Mask> = all.iter().map(|&m| c.close(m)).collect();
    grounded.record(c.close(0) == 0, || Witness::new("cls(∅) ≠ ∅").object(x));
    for (i, &m) in all.iter().enumerate() {
        let cm = closed[i];
        extensive.record(m & !cm == 0, || Witness::new("m ≰ cls(m)").subobject(x, m));
        idempotent.record(c.close(cm) == cm, || {
            Witness::new("cls(cls(m)) ≠ cls(m)").subobject(x, m)
        });
        for (j, &n) in all.iter().enumerate() {
            let cn = closed[j];
            if m & !n == 0 {
                monotone.record(cm & !cn == 0, || {
                    Witness::new("m ≤ n but cls(m) ≰ cls(n)").subobject(x, m).subobject(x, n)
                });
            }
            if i <= j {
                additive.record(c.close(m | n) == cm | cn, || {
                    Witness::new("cls(m ∨ n) ≠ cls(m) ∨ cls(n)").subobject(x, m).subobject(x, n)
                });
            }
        }
    }
    r.checks.extend([extensive, monotone, idempotent, additive, grounded]);
    r
}

/// Validates a family's closure on each object, merged into one report.
pub fn validate_family(family: ClosureFamily, objects: &[Obj]) -> Report {
    let mut r = Report::new(format!("closure family {family}"));
    let mut merged: Vec<Check> = Vec::new();
    for x in objects {
        let one = validate_closure(x, &family.topology(x));
        if merged.is_empty() {
            merged = one.checks;
        } else {
            for (m, c) in merged.iter_mut().zip(one.checks) {
                m.merge(c);
            }
        }
    }
    r.checks = merged;
    r
}

fn check_endpoints(f: &Morphism, src: &Space, tgt: &Space) -> Result<()> {
    if same_object(f.source(), &src.object) && same_object(f.target(), &tgt.object) {
        Ok(())
    } else {
        Err(Error::EndpointMismatch(format!(
            "{} does not run from {} to {}",
            f,
            src.object.name(),
            tgt.object.name()
        )))
    }
}

/// `f(cls m) ≤ cls(f m)` for every `m`. Both sides are unions over the points
/// of `m`, so it is enough to test singletons.
pub fn is_continuous(f: &Morphism, src: &Space, tgt: &Space) -> Result<bool> {
    check_endpoints(f, src, tgt)?;
    Ok(continuity_gap(f, src, tgt).is_none())
}

fn continuity_gap(f: &Morphism, src: &Space, tgt: &Space) -> Option<usize> {
    (0..f.source().len()).find(|&x| {
        let lhs = f.image_mask(src.topology.point(x));
        lhs & !tgt.topology.point(f.apply(x)) != 0
    })
}

fn require_continuous(f: &SpaceMorphism) -> Result<()> {
    match continuity_gap(&f.map, &f.source, &f.target) {
        None => Ok(()),
        Some(x) => Err(Error::NotContinuous(format!(
            "{} at {}",
            f.map,
            f.map.source().label(x)
        ))),
    }
}

/// `f(cls p) = cls(f p)` for every `p`; singletons suffice by additivity.
pub fn is_closed_morphism(f: &SpaceMorphism) -> Result<bool> {
    require_continuous(f)?;
    Ok(closed_morphism_gap(f).is_none())
}

/// A point `x` with `f(cls{x}) ≠ cls{f x}`.
pub fn closed_morphism_gap(f: &SpaceMorphism) -> Option<usize> {
    (0..f.map.source().len()).find(|&x| {
        f.map.image_mask(f.source.topology.point(x)) != f.target.topology.point(f.map.apply(x))
    })
}

/// Admissible embedding onto a closed subobject that is also a closed morphism.
pub fn is_closed_embedding(f: &SpaceMorphism) -> Result<bool> {
    require_continuous(f)?;
    if !f.map.is_embedding() {
        return Ok(false);
    }
    let img = f.map.image_mask(f.map.source().full());
    Ok(f.target.is_closed_mask(img) && closed_morphism_gap(f).is_none())
}

/// `cls(f^M) = ⊤`.
pub fn is_dense(f: &SpaceMorphism) -> Result<bool> {
    require_continuous(f)?;
    let img = f.map.image_mask(f.map.source().full());
    Ok(f.target.cls_mask(img) == f.target.object.full())
}

/// `f = cls(f^M) ∘ (u_f ∘ f^E)`: a dense map onto the closure of the image,
/// followed by the closed embedding of that closure.
pub fn dense_closed_factorize(f: &SpaceMorphism) -> Result<(SpaceMorphism, SpaceMorphism)> {
    require_continuous(f)?;
    let img = f.map.image_mask(f.map.source().full());
    let closure = f.target.cls_mask(img);
    let (mid, embedding) = f.target.subspace(closure);
    let keep: Vec<usize> = bits(closure).collect();
    let table = f
        .map
        .table()
        .iter()
        .map(|j| keep.iter().position(|k| k == j).expect("image inside its closure"))
        .collect();
    let dense_map = Morphism::new(Arc::clone(f.map.source()), Arc::clone(&mid.object), table)?;
    let dense = SpaceMorphism::new(f.source.clone(), mid, dense_map)?;
    Ok((dense, embedding))
}

/// Componentwise closure on `X + Y`:
/// `cls(p) = ι_X(cls(ι_X⁻¹ p)) ∨ ι_Y(cls(ι_Y⁻¹ p))`.
pub fn sum_space(s: &Space, t: &Space) -> Result<(Space, Coproduct)> {
    let cop = coproduct(&s.object, &t.object)?;
    let op = SumClosure { s, t, cop: &cop };
    let space = Space {
        object: Arc::clone(&cop.object),
        topology: Topology::from_operator(&op),
    };
    Ok((space, cop))
}

struct SumClosure<'a> {
    s: &'a Space,
    t: &'a Space,
    cop: &'a Coproduct,
}

impl ClosureOperator for SumClosure<'_> {
    fn carrier_len(&self) -> usize {
        self.cop.object.len()
    }

    fn close(&self, p: Mask) -> Mask {
        let (px, py) = self.cop.split_mask(p);
        self.cop
            .join_masks(self.s.cls_mask(px), self.t.cls_mask(py))
    }
}

/// Injections of the componentwise sum space as space morphisms.
pub fn sum_injections(s: &Space, t: &Space) -> Result<(Space, SpaceMorphism, SpaceMorphism)> {
    let (sum, cop) = sum_space(s, t)?;
    let inl = SpaceMorphism::new(s.clone(), sum.clone(), cop.inl)?;
    let inr = SpaceMorphism::new(t.clone(), sum.clone(), cop.inr)?;
    Ok((sum, inl, inr))
}

/// A pullback of spaces; the apex carries the subspace-of-product closure.
#[derive(Clone, Debug)]
pub struct SpacePullback {
    pub space: Space,
    pub p1: SpaceMorphism,
    pub p2: SpaceMorphism,
}

pub fn pullback_space(f: &SpaceMorphism, g: &SpaceMorphism) -> Result<SpacePullback> {
    if !same_object(&f.target.object, &g.target.object) {
        return Err(Error::EndpointMismatch("pullback needs a cospan of spaces".into()));
    }
    let pb = pullback(&f.map, &g.map)?;
    let pairs: Vec<(usize, usize)> = pb
        .p1
        .table()
        .iter()
        .zip(pb.p2.table())
        .map(|(&a, &b)| (a, b))
        .collect();
    let space = Space {
        object: Arc::clone(&pb.object),
        topology: Topology::on_pairs(&f.source.topology, &g.source.topology, &pairs),
    };
    let p1 = SpaceMorphism::new(space.clone(), f.source.clone(), pb.p1)?;
    let p2 = SpaceMorphism::new(space.clone(), g.source.clone(), pb.p2)?;
    Ok(SpacePullback { space, p1, p2 })
}

pub fn product_space(s: &Space, t: &Space) -> Result<SpacePullback> {
    let one = terminal_space(s.object.flavour());
    let to_one = |x: &Space| {
        SpaceMorphism::new(
            x.clone(),
            one.clone(),
            crate::limits::to_terminal(&x.object).with_target(Arc::clone(&one.object)),
        )
    };
    pullback_space(&to_one(s)?, &to_one(t)?)
}

/// Kernel pair of a space morphism.
pub fn kernel_pair_space(f: &SpaceMorphism) -> Result<SpacePullback> {
    pullback_space(f, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{homs, preorder_objects, set_object};

    fn sierpinski(family: ClosureFamily) -> Space {
        family.space(&FiniteObject::sierpinski())
    }

    #[test]
    fn built_in_families_satisfy_laws() {
        let objs: Vec<Obj> = (0..=3).flat_map(preorder_objects).collect();
        for fam in ClosureFamily::ALL {
            let r = validate_family(fam, &objs);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn non_idempotent_table_rejected() {
        let x = set_object(3);
        // grow by one element at a time
        let c = ClosureTable::from_fn(3, |m| if m == 0 { 0 } else { m | (m << 1) & 0b111 }).unwrap();
        let r = validate_closure(&x, &c);
        assert!(!r.check("idempotent").unwrap().passed);
        assert!(r.check("extensive").unwrap().passed);
    }

    #[test]
    fn sierpinski_closed_sets() {
        let s = sierpinski(ClosureFamily::Alexandrov);
        let obj = s.object().clone();
        let a = Subobject::from_labels(&obj, &["a"]).unwrap();
        let b = Subobject::from_labels(&obj, &["b"]).unwrap();
        assert!(s.is_closed_subobject(&a));
        assert!(!s.is_closed_subobject(&b));
        assert!(s.is_closed_subobject(&Subobject::top(&obj)));
        assert!(s.is_closed_subobject(&Subobject::bottom(&obj)));
        let ind = sierpinski(ClosureFamily::Indiscrete);
        let closed: Vec<Mask> = ind.closed_lattice().iter().map(Subobject::mask).collect();
        assert_eq!(closed, vec![0, 0b11]);
    }

    #[test]
    fn continuity_examples() {
        let obj = FiniteObject::sierpinski();
        let disc = ClosureFamily::Identity.space(&obj);
        let alex = ClosureFamily::Alexandrov.space(&obj);
        let id = Morphism::identity(&obj);
        assert!(is_continuous(&id, &alex, &alex).unwrap());
        assert!(is_continuous(&id, &disc, &alex).unwrap());
        assert!(!is_continuous(&id, &alex, &disc).unwrap());
        let v = FiniteObject::preorder("V", ["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let va = ClosureFamily::Alexandrov.space(&v);
        for f in homs(&obj, &v) {
            assert!(is_continuous(&f, &alex, &va).unwrap());
        }
    }

    #[test]
    fn closed_and_dense_embeddings_of_sierpinski() {
        let s = sierpinski(ClosureFamily::Alexandrov);
        let (_, a_in) = s.subspace(0b01);
        let (_, b_in) = s.subspace(0b10);
        assert!(is_closed_morphism(&a_in).unwrap());
        assert!(is_closed_embedding(&a_in).unwrap());
        assert!(!is_closed_morphism(&b_in).unwrap());
        assert!(is_dense(&b_in).unwrap());
        assert!(!is_dense(&a_in).unwrap());

        let (d, c) = dense_closed_factorize(&b_in).unwrap();
        assert!(is_dense(&d).unwrap());
        assert_eq!(c.underlying().source().len(), 2);
        assert!(is_closed_embedding(&c).unwrap());

        let (d, c) = dense_closed_factorize(&a_in).unwrap();
        assert!(d.underlying().is_iso());
        assert!(is_closed_embedding(&c).unwrap());
        assert_eq!(c.underlying().source().len(), 1);
    }

    #[test]
    fn non_continuous_input_is_an_error() {
        let obj = FiniteObject::sierpinski();
        let f = SpaceMorphism::new(
            ClosureFamily::Alexandrov.space(&obj),
            ClosureFamily::Identity.space(&obj),
            Morphism::identity(&obj),
        )
        .unwrap();
        assert!(matches!(is_closed_morphism(&f), Err(Error::NotContinuous(_))));
    }

    #[test]
    fn sum_space_matches_family_on_coproduct() {
        let objs: Vec<Obj> = (0..=2).flat_map(preorder_objects).collect();
        for x in &objs {
            for y in &objs {
                for fam in [ClosureFamily::Alexandrov, ClosureFamily::Identity] {
                    let (sum, cop) = sum_space(&fam.space(x), &fam.space(y)).unwrap();
                    assert_eq!(sum, fam.space(&cop.object));
                }
            }
        }
        // the componentwise sum of indiscrete spaces is not indiscrete
        let p = set_object(1);
        let (sum, cop) =
            sum_space(&ClosureFamily::Indiscrete.space(&p), &ClosureFamily::Indiscrete.space(&p)).unwrap();
        assert_ne!(sum, ClosureFamily::Indiscrete.space(&cop.object));
        assert!(validate_closure(sum.object(), sum.topology()).passed());
    }

    #[test]
    fn sum_with_empty_space_is_original() {
        let s = sierpinski(ClosureFamily::Alexandrov);
        let (sum, cop) = sum_space(&s, &initial_space(Flavour::Preorder)).unwrap();
        let iso = crate::hom::find_iso(s.object(), &cop.object).unwrap();
        assert!(is_continuous(&iso, &s, &sum).unwrap());
        assert!(is_continuous(&iso.inverse().unwrap(), &sum, &s).unwrap());
    }

    #[test]
    fn pullback_space_of_family_is_family_on_apex() {
        let objs: Vec<Obj> = (0..=2).flat_map(preorder_objects).collect();
        for fam in ClosureFamily::ALL {
            for x in &objs {
                for y in &objs {
                    let p = product_space(&fam.space(x), &fam.space(y)).unwrap();
                    assert_eq!(p.space, fam.space(p.space.object()), "{fam} {x} {y}");
                }
            }
        }
    }
}
