//! Finite limits and coproducts of concrete finite objects.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::homs;
use crate::morphism::{compose, Morphism};
use crate::object::{same_object, Flavour, FiniteObject, Mask, Obj, Preorder, MAX_CARRIER};

pub fn initial(flavour: Flavour) -> Obj {
    let order = (flavour == Flavour::Preorder).then(|| Preorder::discrete(0));
    FiniteObject::from_parts("0".into(), Vec::new(), order)
}

pub fn terminal(flavour: Flavour) -> Obj {
    let order = (flavour == Flavour::Preorder).then(|| Preorder::discrete(1));
    FiniteObject::from_parts("1".into(), vec!["*".into()], order)
}

/// `!: 0 -> x`.
pub fn from_initial(x: &Obj) -> Morphism {
    Morphism::new_unchecked(initial(x.flavour()), Arc::clone(x), Vec::new())
}

/// `!: x -> 1`.
pub fn to_terminal(x: &Obj) -> Morphism {
    Morphism::new_unchecked(Arc::clone(x), terminal(x.flavour()), vec![0; x.len()])
}

/// A constructed binary coproduct with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub object: Obj,
    pub inl: Morphism,
    pub inr: Morphism,
}

impl Coproduct {
    pub fn left(&self) -> &Obj {
        self.inl.source()
    }

    pub fn right(&self) -> &Obj {
        self.inr.source()
    }

    /// Elements coming from the left summand.
    pub fn left_mask(&self) -> Mask {
        self.inl.image_mask(self.left().full())
    }

    pub fn right_mask(&self) -> Mask {
        self.inr.image_mask(self.right().full())
    }

    /// The unique `⟨f | g⟩: X+Y -> Z`.
    pub fn copair(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if !same_object(f.source(), self.left()) || !same_object(g.source(), self.right()) {
            return Err(Error::EndpointMismatch(
                "copair components must start at the summands".into(),
            ));
        }
        if !same_object(f.target(), g.target()) {
            return Err(Error::EndpointMismatch(format!(
                "copair targets differ: {} vs {}",
                f.target().name(),
                g.target().name()
            )));
        }
        let map = f.table().iter().chain(g.table()).copied().collect();
        Morphism::new(Arc::clone(&self.object), Arc::clone(f.target()), map)
    }

    /// Splits `p ⊆ X+Y` into its left and right parts.
    pub fn split_mask(&self, p: Mask) -> (Mask, Mask) {
        (self.inl.preimage_mask(p), self.inr.preimage_mask(p))
    }

    pub fn join_masks(&self, a: Mask, b: Mask) -> Mask {
        self.inl.image_mask(a) | self.inr.image_mask(b)
    }
}

/// Disjoint union with `L:` / `R:` tags and no order across summands.
pub fn coproduct(x: &Obj, y: &Obj) -> Result<Coproduct> {
    coproduct_with(x, y, false)
}

/// Ordinal sum: every left element below every right element. Not a
/// coproduct of preorders; used to exercise the extensivity validator.
pub fn ordinal_sum(x: &Obj, y: &Obj) -> Result<Coproduct> {
    coproduct_with(x, y, true)
}

fn coproduct_with(x: &Obj, y: &Obj, cross: bool) -> Result<Coproduct> {
    if x.flavour() != y.flavour() {
        return Err(Error::FlavourMismatch);
    }
    let (n, m) = (x.len(), y.len());
    if n + m > MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: n + m,
            limit: MAX_CARRIER,
        });
    }
    let labels = x
        .labels()
        .iter()
        .map(|l| format!("L:{l}"))
        .chain(y.labels().iter().map(|l| format!("R:{l}")))
        .collect();
    let order = x.order().map(|_| {
        let mut rows: Vec<Mask> = (0..n).map(|i| x.up(i)).collect();
        let right: Mask = crate::object::full_mask(m) << n;
        if cross {
            for r in rows.iter_mut() {
                *r |= right;
            }
        }
        rows.extend((0..m).map(|j| y.up(j) << n));
        Preorder::from_rows_unchecked(rows)
    });
    let object = FiniteObject::from_parts(format!("({}+{})", x.name(), y.name()), labels, order);
    let inl = Morphism::new_unchecked(Arc::clone(x), Arc::clone(&object), (0..n).collect());
    let inr = Morphism::new_unchecked(Arc::clone(y), Arc::clone(&object), (n..n + m).collect());
    Ok(Coproduct { object, inl, inr })
}

/// `⟨f | g⟩` out of the constructed coproduct of the two sources.
pub fn copair(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    coproduct(f.source(), g.source())?.copair(f, g)
}

/// `f + g = ⟨ι ∘ f | ι ∘ g⟩ : A+B -> X+Y`.
pub fn sum_morphisms(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    let src = coproduct(f.source(), g.source())?;
    let tgt = coproduct(f.target(), g.target())?;
    sum_between(&src, &tgt, f, g)
}

/// `f + g` between given coproducts.
pub fn sum_between(src: &Coproduct, tgt: &Coproduct, f: &Morphism, g: &Morphism) -> Result<Morphism> {
    let left = compose(&tgt.inl, f)?;
    let right = compose(&tgt.inr, g)?;
    src.copair(&left, &right)
}

/// A pullback square: `f ∘ p1 = g ∘ p2`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: Obj,
    pub p1: Morphism,
    pub p2: Morphism,
}

/// Apex `{(a, b) : f a = g b}` in lexicographic order with the product order.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Pullback> {
    if !same_object(f.target(), g.target()) {
        return Err(Error::EndpointMismatch(format!(
            "pullback needs a cospan; targets {} and {} differ",
            f.target().name(),
            g.target().name()
        )));
    }
    let (a, b) = (f.source(), g.source());
    let pairs: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| f.apply(i) == g.apply(j))
        .collect();
    pair_object(
        format!("({}x{})", a.name(), b.name()),
        a,
        b,
        pairs,
    )
}

fn pair_object(name: String, a: &Obj, b: &Obj, pairs: Vec<(usize, usize)>) -> Result<Pullback> {
    if pairs.len() > MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: pairs.len(),
            limit: MAX_CARRIER,
        });
    }
    let labels = pairs
        .iter()
        .map(|&(i, j)| format!("({},{})", a.label(i), b.label(j)))
        .collect();
    let order = a.order().map(|_| {
        let rows = pairs
            .iter()
            .map(|&(i, j)| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, &(k, l))| a.le(i, k) && b.le(j, l))
                    .fold(0, |acc, (t, _)| acc | 1 << t)
            })
            .collect();
        Preorder::from_rows_unchecked(rows)
    });
    let object = FiniteObject::from_parts(name, labels, order);
    let p1 = Morphism::new_unchecked(
        Arc::clone(&object),
        Arc::clone(a),
        pairs.iter().map(|p| p.0).collect(),
    );
    let p2 = Morphism::new_unchecked(
        Arc::clone(&object),
        Arc::clone(b),
        pairs.iter().map(|p| p.1).collect(),
    );
    Ok(Pullback { object, p1, p2 })
}

pub fn product(x: &Obj, y: &Obj) -> Result<Pullback> {
    if x.flavour() != y.flavour() {
        return Err(Error::FlavourMismatch);
    }
    let pairs = (0..x.len())
        .flat_map(|i| (0..y.len()).map(move |j| (i, j)))
        .collect();
    pair_object(format!("({}x{})", x.name(), y.name()), x, y, pairs)
}

/// Inclusion of `{a : f a = g a}`.
pub fn equalizer(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if !same_object(f.source(), g.source()) || !same_object(f.target(), g.target()) {
        return Err(Error::EndpointMismatch("equalizer needs a parallel pair".into()));
    }
    let mask = (0..f.source().len())
        .filter(|&i| f.apply(i) == g.apply(i))
        .fold(0, |acc: Mask, i| acc | 1 << i);
    Ok(f.source().inclusion(mask))
}

pub fn kernel_pair(f: &Morphism) -> Result<Pullback> {
    pullback(f, f)
}

/// Exhaustively checks the copairing property against every pair of maps into `z`.
pub fn copairing_is_universal(cop: &Coproduct, z: &Obj) -> bool {
    let mediators = homs(&cop.object, z);
    for f in homs(cop.left(), z) {
        for g in homs(cop.right(), z) {
            let n = mediators
                .iter()
                .filter(|h| {
                    compose(h, &cop.inl).is_ok_and(|hl| hl == f)
                        && compose(h, &cop.inr).is_ok_and(|hr| hr == g)
                })
                .count();
            if n != 1 {
                return false;
            }
        }
    }
    true
}

/// Exhaustively checks the pullback property against every cone from `t`.
pub fn pullback_is_universal(pb: &Pullback, f: &Morphism, g: &Morphism, t: &Obj) -> bool {
    let mediators = homs(t, &pb.object);
    for u in homs(t, f.source()) {
        for v in homs(t, g.source()) {
            let commutes = compose(f, &u).ok() == compose(g, &v).ok();
            if !commutes {
                continue;
            }
            let n = mediators
                .iter()
                .filter(|h| {
                    compose(&pb.p1, h).is_ok_and(|x| x == u) && compose(&pb.p2, h).is_ok_and(|x| x == v)
                })
                .count();
            if n != 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{is_isomorphic, set_object};

    #[test]
    fn coproduct_cardinality_adds() {
        let c = coproduct(&set_object(2), &set_object(3)).unwrap();
        assert_eq!(c.object.len(), 5);
        assert_eq!(c.object.label(0), "L:a");
        assert_eq!(c.object.label(2), "R:a");
    }

    #[test]
    fn initial_is_unit_for_coproduct() {
        let x = set_object(2);
        let c = coproduct(&initial(Flavour::Set), &x).unwrap();
        assert!(is_isomorphic(&c.object, &x));
    }

    #[test]
    fn sierpinski_plus_point_has_one_strict_pair() {
        let s = FiniteObject::sierpinski();
        let c = coproduct(&s, &terminal(Flavour::Preorder)).unwrap();
        let order = c.object.order().unwrap();
        let pairs: Vec<_> = order.pairs().collect();
        assert_eq!(pairs.iter().filter(|(i, j)| i == j).count(), 3);
        assert_eq!(pairs.iter().filter(|(i, j)| i != j).count(), 1);
    }

    #[test]
    fn disjoint_injections_pull_back_to_empty() {
        let c = coproduct(&set_object(2), &set_object(1)).unwrap();
        let pb = pullback(&c.inl, &c.inr).unwrap();
        assert!(pb.object.is_empty());
    }

    #[test]
    fn pullback_over_terminal_is_product() {
        let (x, y) = (set_object(2), set_object(3));
        let pb = pullback(&to_terminal(&x), &to_terminal(&y)).unwrap();
        assert_eq!(pb.object.len(), 6);
        assert!(is_isomorphic(&pb.object, &product(&x, &y).unwrap().object));
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let s = FiniteObject::sierpinski();
        let id = Morphism::identity(&s);
        let pb = pullback(&id, &id).unwrap();
        assert!(is_isomorphic(&pb.object, &s));
    }

    #[test]
    fn kernel_pair_of_fold_on_discrete() {
        for n in 0..4 {
            let x = set_object(n);
            let c = coproduct(&x, &x).unwrap();
            let id = Morphism::identity(&x);
            let fold = c.copair(&id, &id).unwrap();
            assert_eq!(kernel_pair(&fold).unwrap().object.len(), 4 * n);
            if n > 0 {
                assert!(fold.is_epi() && !fold.is_mono());
            }
        }
    }

    #[test]
    fn injective_kernel_pair_is_diagonal() {
        let s = FiniteObject::sierpinski();
        let c = coproduct(&s, &s).unwrap();
        let kp = kernel_pair(&c.inl).unwrap();
        assert!(is_isomorphic(&kp.object, &s));
    }

    #[test]
    fn equalizer_of_distinct_constants_is_empty() {
        let (x, y) = (set_object(2), set_object(2));
        let f = Morphism::constant(&x, &y, 0).unwrap();
        let g = Morphism::constant(&x, &y, 1).unwrap();
        assert!(equalizer(&f, &g).unwrap().source().is_empty());
    }

    #[test]
    fn copair_of_injections_is_identity() {
        let s = FiniteObject::sierpinski();
        let c = coproduct(&s, &set_object(0)).err();
        assert_eq!(c, Some(Error::FlavourMismatch));
        let c = coproduct(&s, &s).unwrap();
        assert_eq!(c.copair(&c.inl, &c.inr).unwrap(), Morphism::identity(&c.object));
        let ids = sum_morphisms(&Morphism::identity(&s), &Morphism::identity(&s)).unwrap();
        assert_eq!(ids, Morphism::identity(&c.object));
    }

    #[test]
    fn universal_properties_small() {
        let s = FiniteObject::sierpinski();
        let p = terminal(Flavour::Preorder);
        let c = coproduct(&s, &p).unwrap();
        for z in [&s, &p, &c.object] {
            assert!(copairing_is_universal(&c, z));
        }
        let f = to_terminal(&s);
        let pb = pullback(&f, &f).unwrap();
        for t in [&s, &p] {
            assert!(pullback_is_universal(&pb, &f, &f, t));
        }
    }
}
