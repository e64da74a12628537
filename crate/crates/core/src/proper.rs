//! Bounded properness and separation.
//!
//! A morphism is proper when every pullback of it is a closed morphism. The
//! check here only pulls back along continuous maps out of a fixed pool of
//! test spaces, so every positive answer means "proper at this bound".

use std::sync::Arc;

use crate::closure::{
    closed_morphism_gap, is_continuous, kernel_pair_space, pullback_space, ClosureFamily, Space,
    SpaceMorphism,
};
use crate::error::{Error, Result};
use crate::hom::homs;
use crate::morphism::Morphism;
use crate::object::Obj;

/// Test spaces used as sources of the maps pulled back along.
#[derive(Clone, Debug)]
pub struct Probe {
    spaces: Vec<Space>,
}

impl Probe {
    /// Every object paired with every family.
    pub fn new(objects: &[Obj], families: &[ClosureFamily]) -> Self {
        let mut spaces: Vec<Space> = Vec::new();
        for x in objects {
            for &fam in families {
                let s = fam.space(x);
                if !spaces.contains(&s) {
                    spaces.push(s);
                }
            }
        }
        Probe { spaces }
    }

    pub fn spaces(&self) -> &[Space] {
        &self.spaces
    }
}

/// A pullback of `f` whose projection onto the test space is not closed.
#[derive(Clone, Debug)]
pub struct ProperFailure {
    /// `w: W -> target(f)`, or `None` when `f` itself is not closed.
    pub along: Option<Morphism>,
    /// The non-closed projection.
    pub projection: Morphism,
}

fn require_continuous(f: &SpaceMorphism) -> Result<()> {
    if is_continuous(f.underlying(), f.source(), f.target())? {
        Ok(())
    } else {
        Err(Error::NotContinuous(f.underlying().to_string()))
    }
}

/// First witness against properness of `f`, if any.
pub fn proper_failure(f: &SpaceMorphism, probe: &Probe) -> Result<Option<ProperFailure>> {
    require_continuous(f)?;
    if closed_morphism_gap(f).is_some() {
        return Ok(Some(ProperFailure {
            along: None,
            projection: f.underlying().clone(),
        }));
    }
    let y = f.target();
    for w_space in probe.spaces() {
        if w_space.object().flavour() != y.object().flavour() {
            continue;
        }
        for w in homs(w_space.object(), y.object()) {
            if !is_continuous(&w, w_space, y)? {
                continue;
            }
            let w = SpaceMorphism::new(w_space.clone(), y.clone(), w)?;
            let pb = pullback_space(&w, f)?;
            if closed_morphism_gap(&pb.p1).is_some() {
                return Ok(Some(ProperFailure {
                    along: Some(w.underlying().clone()),
                    projection: pb.p1.underlying().clone(),
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_proper(f: &SpaceMorphism, probe: &Probe) -> Result<bool> {
    Ok(proper_failure(f, probe)?.is_none())
}

/// `d_f: A -> KP(f)`, the equalizer of the kernel-pair projections.
pub fn diagonal(f: &SpaceMorphism) -> Result<SpaceMorphism> {
    let kp = kernel_pair_space(f)?;
    let p1 = kp.p1.underlying().table();
    let p2 = kp.p2.underlying().table();
    let table: Vec<usize> = (0..f.source().object().len())
        .map(|a| {
            (0..p1.len())
                .find(|&k| p1[k] == a && p2[k] == a)
                .expect("kernel pair contains the diagonal")
        })
        .collect();
    let map = Morphism::new(
        Arc::clone(f.source().object()),
        Arc::clone(kp.space.object()),
        table,
    )?;
    SpaceMorphism::new(f.source().clone(), kp.space, map)
}

pub fn separated_failure(f: &SpaceMorphism, probe: &Probe) -> Result<Option<ProperFailure>> {
    require_continuous(f)?;
    proper_failure(&diagonal(f)?, probe)
}

pub fn is_separated(f: &SpaceMorphism, probe: &Probe) -> Result<bool> {
    Ok(separated_failure(f, probe)?.is_none())
}

pub fn is_compact(s: &Space, probe: &Probe) -> Result<bool> {
    is_proper(&s.to_terminal(), probe)
}

pub fn is_hausdorff(s: &Space, probe: &Probe) -> Result<bool> {
    is_separated(&s.to_terminal(), probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{preorder_objects, set_object};
    use crate::limits::coproduct;
    use crate::object::FiniteObject;

    fn probe(bound: usize) -> Probe {
        let objs: Vec<Obj> = (0..=bound).flat_map(preorder_objects).collect();
        Probe::new(&objs, &ClosureFamily::ALL)
    }

    #[test]
    fn embeddings_into_sierpinski() {
        let s = ClosureFamily::Alexandrov.space(&FiniteObject::sierpinski());
        let p = probe(2);
        let (_, a_in) = s.subspace(0b01);
        let (_, b_in) = s.subspace(0b10);
        assert!(is_proper(&a_in, &p).unwrap());
        let fail = proper_failure(&b_in, &p).unwrap().unwrap();
        assert!(fail.along.is_none());
        let id = SpaceMorphism::new(s.clone(), s.clone(), Morphism::identity(s.object())).unwrap();
        assert!(is_proper(&id, &p).unwrap());
    }

    #[test]
    fn separation_examples() {
        let p = probe(2);
        let s = ClosureFamily::Alexandrov.space(&FiniteObject::sierpinski());
        assert!(!is_hausdorff(&s, &p).unwrap());
        assert!(is_compact(&s, &p).unwrap());

        let d2 = FiniteObject::preorder("D2", ["a", "b"], &[]).unwrap();
        let d2s = ClosureFamily::Alexandrov.space(&d2);
        assert!(is_hausdorff(&d2s, &p).unwrap());

        let cop = coproduct(&d2, &d2).unwrap();
        let fold = cop
            .copair(&Morphism::identity(&d2), &Morphism::identity(&d2))
            .unwrap();
        let fold = SpaceMorphism::new(ClosureFamily::Alexandrov.space(&cop.object), d2s, fold).unwrap();
        assert!(is_separated(&fold, &p).unwrap());
    }

    #[test]
    fn monos_are_separated() {
        let p = probe(1);
        let s = ClosureFamily::Alexandrov.space(&FiniteObject::sierpinski());
        let (_, b_in) = s.subspace(0b10);
        assert!(diagonal(&b_in).unwrap().underlying().is_iso());
        assert!(is_separated(&b_in, &p).unwrap());
    }

    #[test]
    fn finite_alexandrov_hausdorff_iff_discrete() {
        let p = probe(2);
        for x in (0..=3).flat_map(preorder_objects) {
            let s = ClosureFamily::Alexandrov.space(&x);
            let discrete = x.order().unwrap().is_discrete();
            assert_eq!(is_hausdorff(&s, &p).unwrap(), discrete, "{x}");
            assert!(is_compact(&s, &p).unwrap());
        }
    }

    #[test]
    fn identity_family_everything_separated() {
        let objs: Vec<Obj> = (0..=2).map(set_object).collect();
        let p = Probe::new(&objs, &[ClosureFamily::Identity]);
        for x in &objs {
            for y in &objs {
                for f in homs(x, y) {
                    let f = SpaceMorphism::new(
                        ClosureFamily::Identity.space(x),
                        ClosureFamily::Identity.space(y),
                        f,
                    )
                    .unwrap();
                    assert!(is_proper(&f, &p).unwrap());
                    assert!(is_separated(&f, &p).unwrap());
                }
            }
        }
    }
}
