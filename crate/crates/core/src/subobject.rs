//! Admissible subobjects: the lattice `Sub_M(X)`, image/preimage, and sums.
//!
//! Every admissible subobject of the built-in contexts has a sub-carrier
//! inclusion as representative, so a subobject is stored as a bitmask of its
//! ambient carrier. Equality of subobjects is equality of masks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factorization::{Factorization, FactorizationSystem};
use crate::hom::subsets;
use crate::limits::{coproduct, pullback, sum_between, Coproduct};
use crate::morphism::{compose, factor_through, Morphism};
use crate::object::{bits, same_object, Mask, Obj};
use crate::report::{Check, Report, Witness};

#[derive(Clone, Debug)]
pub struct Subobject {
    ambient: Obj,
    mask: Mask,
}

impl PartialEq for Subobject {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && same_object(&self.ambient, &other.ambient)
    }
}

impl Eq for Subobject {}

impl Subobject {
    pub fn new(ambient: &Obj, mask: Mask) -> Self {
        debug_assert_eq!(mask & !ambient.full(), 0);
        Subobject {
            ambient: Arc::clone(ambient),
            mask,
        }
    }

    pub fn from_labels(ambient: &Obj, labels: &[&str]) -> Result<Self> {
        let mut mask = 0;
        for l in labels {
            let i = ambient
                .index_of(l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            mask |= 1 << i;
        }
        Ok(Self::new(ambient, mask))
    }

    /// The subobject an `M`-morphism represents.
    pub fn from_m_morphism(sys: FactorizationSystem, m: &Morphism) -> Result<Self> {
        if !sys.in_m(m) || !m.is_embedding() {
            return Err(Error::NotAdmissible(m.to_string()));
        }
        Ok(Self::new(m.target(), m.image_mask(m.source().full())))
    }

    /// `∅_X`, the image of `0 -> X`.
    pub fn bottom(x: &Obj) -> Self {
        Self::new(x, 0)
    }

    pub fn top(x: &Obj) -> Self {
        Self::new(x, x.full())
    }

    pub fn ambient(&self) -> &Obj {
        &self.ambient
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn is_bottom(&self) -> bool {
        self.mask == 0
    }

    pub fn is_top(&self) -> bool {
        self.mask == self.ambient.full()
    }

    /// Canonical representative: the sub-carrier inclusion.
    pub fn rep(&self) -> Morphism {
        self.ambient.inclusion(self.mask)
    }

    pub fn leq(&self, other: &Subobject) -> bool {
        same_object(&self.ambient, &other.ambient) && self.mask & !other.mask == 0
    }

    pub fn show(&self) -> String {
        self.ambient.show_mask(self.mask)
    }

    fn same_ambient(&self, other: &Subobject) -> Result<()> {
        if same_object(&self.ambient, &other.ambient) {
            Ok(())
        } else {
            Err(Error::EndpointMismatch(format!(
                "subobjects of {} and {}",
                self.ambient.name(),
                other.ambient.name()
            )))
        }
    }
}

/// Meet as the pullback of the two representatives.
pub fn meet(p: &Subobject, q: &Subobject) -> Result<Subobject> {
    p.same_ambient(q)?;
    let pb = pullback(&p.rep(), &q.rep())?;
    let diag = compose(&p.rep(), &pb.p1)?;
    Ok(Subobject::new(&p.ambient, diag.image_mask(diag.source().full())))
}

/// Join as the image of the copairing `⟨p | q⟩`.
pub fn join(sys: FactorizationSystem, p: &Subobject, q: &Subobject) -> Result<Subobject> {
    p.same_ambient(q)?;
    let cop = coproduct(p.rep().source(), q.rep().source())?;
    let pq = cop.copair(&p.rep(), &q.rep())?;
    Subobject::from_m_morphism(sys, &sys.factorize(&pq).m)
}

fn check_source(f: &Morphism, m: &Subobject) -> Result<()> {
    if same_object(f.source(), &m.ambient) {
        Ok(())
    } else {
        Err(Error::EndpointMismatch(format!(
            "subobject of {} given for a map out of {}",
            m.ambient.name(),
            f.source().name()
        )))
    }
}

/// `f(m)`: the M-part of the factorization of `f ∘ m`.
pub fn image(sys: FactorizationSystem, f: &Morphism, m: &Subobject) -> Result<Subobject> {
    check_source(f, m)?;
    let fm = compose(f, &m.rep())?;
    Subobject::from_m_morphism(sys, &sys.factorize(&fm).m)
}

/// The E-part `M -> f(M)` of the factorization of `f ∘ m`.
pub fn restriction(sys: FactorizationSystem, f: &Morphism, m: &Subobject) -> Result<Factorization> {
    check_source(f, m)?;
    Ok(sys.factorize(&compose(f, &m.rep())?))
}

/// `f⁻¹(n)`: pullback of `n` along `f`.
pub fn preimage(sys: FactorizationSystem, f: &Morphism, n: &Subobject) -> Result<Subobject> {
    let (sub, _) = preimage_square(sys, f, n)?;
    Ok(sub)
}

/// The map `f⁻¹(N) -> N` completing the pullback square.
pub fn corestriction(sys: FactorizationSystem, f: &Morphism, n: &Subobject) -> Result<Morphism> {
    Ok(preimage_square(sys, f, n)?.1)
}

fn preimage_square(sys: FactorizationSystem, f: &Morphism, n: &Subobject) -> Result<(Subobject, Morphism)> {
    if !same_object(f.target(), &n.ambient) {
        return Err(Error::EndpointMismatch(format!(
            "subobject of {} given for a map into {}",
            n.ambient.name(),
            f.target().name()
        )));
    }
    let pb = pullback(f, &n.rep())?;
    let sub = Subobject::from_m_morphism(sys, &pb.p1)?;
    Ok((sub, pb.p2))
}

/// All admissible subobjects of one object, ordered by factorization.
#[derive(Clone, Debug)]
pub struct SubobjectLattice {
    pub ambient: Obj,
    pub elements: Vec<Subobject>,
    leq: Vec<Vec<bool>>,
}

/// Lattices are enumerated eagerly; keep carriers small.
pub const MAX_LATTICE_CARRIER: usize = 10;

impl SubobjectLattice {
    /// Every sub-carrier with its inclusion, checked to be admissible; the
    /// order is decided by searching for a factorization between representatives.
    pub fn enumerate(sys: FactorizationSystem, x: &Obj) -> Result<Self> {
        if x.len() > MAX_LATTICE_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: x.len(),
                limit: MAX_LATTICE_CARRIER,
            });
        }
        let elements: Vec<Subobject> = subsets(x)
            .filter(|&m| sys.in_m(&x.inclusion(m)))
            .map(|m| Subobject::new(x, m))
            .collect();
        let reps: Vec<Morphism> = elements.iter().map(Subobject::rep).collect();
        let leq = reps
            .iter()
            .map(|p| reps.iter().map(|q| factor_through(p, q).is_some()).collect())
            .collect();
        Ok(SubobjectLattice {
            ambient: Arc::clone(x),
            elements,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq_at(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn index_of(&self, s: &Subobject) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    fn bound_index(&self, i: usize, j: usize, upper: bool) -> Option<usize> {
        let n = self.len();
        let cands: Vec<usize> = (0..n)
            .filter(|&k| {
                if upper {
                    self.leq[i][k] && self.leq[j][k]
                } else {
                    self.leq[k][i] && self.leq[k][j]
                }
            })
            .collect();
        cands.iter().copied().find(|&k| {
            cands
                .iter()
                .all(|&c| if upper { self.leq[k][c] } else { self.leq[c][k] })
        })
    }

    /// Least upper bound by order search.
    pub fn lub(&self, i: usize, j: usize) -> Option<usize> {
        self.bound_index(i, j, true)
    }

    pub fn glb(&self, i: usize, j: usize) -> Option<usize> {
        self.bound_index(i, j, false)
    }

    /// Bounded lattice with bottom `∅_X`, top `id_X`, and distributive.
    pub fn validate(&self) -> Report {
        let mut r = Report::new(format!("Sub({})", self.ambient.name()));
        let n = self.len();
        let mut bounded = Check::new("bounded");
        let bot = self.index_of(&Subobject::bottom(&self.ambient));
        let top = self.index_of(&Subobject::top(&self.ambient));
        bounded.record(
            bot.is_some_and(|b| (0..n).all(|k| self.leq[b][k]))
                && top.is_some_and(|t| (0..n).all(|k| self.leq[k][t])),
            || Witness::new("bottom or top missing").object(&self.ambient),
        );
        let mut lattice = Check::new("lattice");
        let mut distributive = Check::new("distributive");
        let mut lub = vec![vec![None; n]; n];
        let mut glb = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                lub[i][j] = self.lub(i, j);
                glb[i][j] = self.glb(i, j);
                lattice.record(lub[i][j].is_some() && glb[i][j].is_some(), || {
                    Witness::new("missing join or meet")
                        .subobject(&self.ambient, self.elements[i].mask)
                        .subobject(&self.ambient, self.elements[j].mask)
                });
            }
        }
        if lattice.passed {
            let at = |t: &Vec<Vec<Option<usize>>>, i: usize, j: usize| t[i][j].unwrap();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        // a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)
                        let lhs = at(&glb, k, at(&lub, i, j));
                        let rhs = at(&lub, at(&glb, k, i), at(&glb, k, j));
                        distributive.record(lhs == rhs, || {
                            Witness::new("a ∧ (b ∨ c) differs from (a ∧ b) ∨ (a ∧ c)")
                                .subobject(&self.ambient, self.elements[k].mask)
                                .subobject(&self.ambient, self.elements[i].mask)
                                .subobject(&self.ambient, self.elements[j].mask)
                        });
                    }
                }
            }
        }
        r.push(bounded);
        r.push(lattice);
        r.push(distributive);
        r
    }
}

/// `ι_{X,Y}(p) = (ι_X⁻¹ p, ι_Y⁻¹ p)`.
pub fn iota_map(sys: FactorizationSystem, cop: &Coproduct, p: &Subobject) -> Result<(Subobject, Subobject)> {
    if !same_object(&cop.object, &p.ambient) {
        return Err(Error::NotACoproduct(p.ambient.name().to_string()));
    }
    Ok((preimage(sys, &cop.inl, p)?, preimage(sys, &cop.inr, p)?))
}

/// `L_X(m) = m + ∅_Y`.
pub fn l_map(sys: FactorizationSystem, cop: &Coproduct, m: &Subobject) -> Result<Subobject> {
    let s = sum_subobjects(sys, m, &Subobject::bottom(cop.right()))?;
    s.as_subobject(sys, cop)
}

/// `R_Y(n) = ∅_X + n`.
pub fn r_map(sys: FactorizationSystem, cop: &Coproduct, n: &Subobject) -> Result<Subobject> {
    let s = sum_subobjects(sys, &Subobject::bottom(cop.left()), n)?;
    s.as_subobject(sys, cop)
}

/// `a + b : A + B -> X + Y` with its factorization.
#[derive(Clone, Debug)]
pub struct SubobjectSum {
    pub morphism: Morphism,
    pub factorization: Factorization,
    /// `a + b` is in M and equals `ι_X(a) ∨ ι_Y(b)`.
    pub admissible: bool,
    pub target: Coproduct,
}

impl SubobjectSum {
    /// The sum as a subobject of `X + Y`; errors when it is not admissible.
    pub fn as_subobject(&self, sys: FactorizationSystem, cop: &Coproduct) -> Result<Subobject> {
        if !self.admissible {
            return Err(Error::NotAdmissible(self.morphism.to_string()));
        }
        let s = Subobject::from_m_morphism(sys, &self.morphism)?;
        if !same_object(&s.ambient, &cop.object) {
            return Err(Error::NotACoproduct(s.ambient.name().to_string()));
        }
        Ok(s)
    }
}

pub fn sum_subobjects(sys: FactorizationSystem, a: &Subobject, b: &Subobject) -> Result<SubobjectSum> {
    let (ra, rb) = (a.rep(), b.rep());
    let src = coproduct(ra.source(), rb.source())?;
    let tgt = coproduct(&a.ambient, &b.ambient)?;
    let morphism = sum_between(&src, &tgt, &ra, &rb)?;
    let factorization = sys.factorize(&morphism);
    let joined = join(
        sys,
        &image(sys, &tgt.inl, a)?,
        &image(sys, &tgt.inr, b)?,
    )?;
    let admissible = sys.in_m(&morphism)
        && Subobject::from_m_morphism(sys, &morphism).is_ok_and(|s| s == joined);
    Ok(SubobjectSum {
        morphism,
        factorization,
        admissible,
        target: tgt,
    })
}

/// `(m, n) ≤ ι_{X,Y}(p)  ⇔  ι_X(m) ∨ ι_Y(n) ≤ p` for every triple.
pub fn check_adjunction_admissible(sys: FactorizationSystem, x: &Obj, y: &Obj) -> Result<Report> {
    let cop = coproduct(x, y)?;
    let lx = SubobjectLattice::enumerate(sys, x)?;
    let ly = SubobjectLattice::enumerate(sys, y)?;
    let lxy = SubobjectLattice::enumerate(sys, &cop.object)?;
    let mut c = Check::new("adjunction");
    for m in &lx.elements {
        let im = image(sys, &cop.inl, m)?;
        for n in &ly.elements {
            let left = join(sys, &im, &image(sys, &cop.inr, n)?)?;
            for p in &lxy.elements {
                let (px, py) = iota_map(sys, &cop, p)?;
                let lhs = m.leq(&px) && n.leq(&py);
                let rhs = left.leq(p);
                c.record(lhs == rhs, || {
                    Witness::new("adjunction fails")
                        .subobject(x, m.mask)
                        .subobject(y, n.mask)
                        .subobject(&cop.object, p.mask)
                });
            }
        }
    }
    let mut r = Report::new(format!("adjunction Sub({}) x Sub({}) / Sub({})", x.name(), y.name(), cop.object.name()));
    r.push(c);
    Ok(r)
}

/// Elements of `p` as labels.
pub fn labels_of(s: &Subobject) -> Vec<&str> {
    bits(s.mask).map(|i| s.ambient.label(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{homs, set_object};
    use crate::limits::initial;
    use crate::object::{FiniteObject, Flavour};

    const SYS: FactorizationSystem = FactorizationSystem::SurjectionEmbedding;

    #[test]
    fn lattice_sizes() {
        assert_eq!(SubobjectLattice::enumerate(SYS, &set_object(2)).unwrap().len(), 4);
        let s = FiniteObject::sierpinski();
        let l = SubobjectLattice::enumerate(SYS, &s).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.validate().passed());
        assert_eq!(SubobjectLattice::enumerate(SYS, &initial(Flavour::Set)).unwrap().len(), 1);
    }

    #[test]
    fn factorization_order_matches_masks() {
        let x = FiniteObject::preorder("V", ["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let l = SubobjectLattice::enumerate(SYS, &x).unwrap();
        for (i, p) in l.elements.iter().enumerate() {
            for (j, q) in l.elements.iter().enumerate() {
                assert_eq!(l.leq_at(i, j), p.leq(q));
            }
        }
    }

    #[test]
    fn meet_join_basics() {
        let x = set_object(2);
        let a = Subobject::from_labels(&x, &["a"]).unwrap();
        let b = Subobject::from_labels(&x, &["b"]).unwrap();
        assert_eq!(join(SYS, &a, &b).unwrap(), Subobject::top(&x));
        assert_eq!(meet(&a, &Subobject::top(&x)).unwrap(), a);
        assert_eq!(meet(&a, &b).unwrap(), Subobject::bottom(&x));
    }

    #[test]
    fn image_preimage_basics() {
        let ab = FiniteObject::set("AB", ["a", "b"]).unwrap();
        let c = FiniteObject::set("C", ["c"]).unwrap();
        let k = Morphism::constant(&ab, &c, 0).unwrap();
        assert_eq!(image(SYS, &k, &Subobject::top(&ab)).unwrap(), Subobject::top(&c));
        let s = FiniteObject::sierpinski();
        let m = Subobject::from_labels(&s, &["b"]).unwrap();
        assert_eq!(image(SYS, &Morphism::identity(&s), &m).unwrap(), m);
    }

    #[test]
    fn preimage_of_image_along_injection() {
        let s = FiniteObject::sierpinski();
        let cop = coproduct(&s, &s).unwrap();
        for mask in 0..4 {
            let m = Subobject::new(&s, mask);
            let im = image(SYS, &cop.inl, &m).unwrap();
            assert_eq!(preimage(SYS, &cop.inl, &im).unwrap(), m);
        }
    }

    #[test]
    fn galois_connection_on_monotone_maps() {
        let s = FiniteObject::sierpinski();
        let v = FiniteObject::preorder("V", ["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        for f in homs(&s, &v) {
            for ms in 0..4u128 {
                for ns in 0..8u128 {
                    let m = Subobject::new(&s, ms);
                    let n = Subobject::new(&v, ns);
                    let lhs = image(SYS, &f, &m).unwrap().leq(&n);
                    let rhs = m.leq(&preimage(SYS, &f, &n).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn iota_map_cases() {
        let (x, y) = (set_object(2), set_object(1));
        let cop = coproduct(&x, &y).unwrap();
        let top = Subobject::top(&cop.object);
        assert_eq!(
            iota_map(SYS, &cop, &top).unwrap(),
            (Subobject::top(&x), Subobject::top(&y))
        );
        let m = Subobject::from_labels(&x, &["b"]).unwrap();
        let im = image(SYS, &cop.inl, &m).unwrap();
        assert_eq!(iota_map(SYS, &cop, &im).unwrap(), (m, Subobject::bottom(&y)));
        let bad = iota_map(SYS, &cop, &Subobject::top(&x));
        assert!(matches!(bad, Err(Error::NotACoproduct(_))));
    }

    #[test]
    fn l_and_r_maps() {
        let s = FiniteObject::sierpinski();
        let p = crate::limits::terminal(Flavour::Preorder);
        let cop = coproduct(&s, &p).unwrap();
        assert_eq!(l_map(SYS, &cop, &Subobject::bottom(&s)).unwrap(), Subobject::bottom(&cop.object));
        assert_eq!(
            l_map(SYS, &cop, &Subobject::top(&s)).unwrap(),
            image(SYS, &cop.inl, &Subobject::top(&s)).unwrap()
        );
        let r = r_map(SYS, &cop, &Subobject::top(&p)).unwrap();
        assert_eq!(preimage(SYS, &cop.inl, &r).unwrap(), Subobject::bottom(&s));
    }

    #[test]
    fn sum_subobject_cases() {
        let (x, y) = (set_object(2), set_object(2));
        let tt = sum_subobjects(SYS, &Subobject::top(&x), &Subobject::top(&y)).unwrap();
        assert!(tt.admissible);
        assert!(tt.morphism.is_iso());
        let bb = sum_subobjects(SYS, &Subobject::bottom(&x), &Subobject::bottom(&y)).unwrap();
        assert!(bb.admissible && bb.morphism.source().is_empty());
        let a = Subobject::from_labels(&x, &["a"]).unwrap();
        let s = sum_subobjects(SYS, &a, &Subobject::bottom(&y)).unwrap();
        assert!(s.admissible);
        let cop = s.target.clone();
        assert_eq!(
            s.as_subobject(SYS, &cop).unwrap(),
            image(SYS, &cop.inl, &a).unwrap()
        );
    }

    #[test]
    fn adjunction_small_cases() {
        let one = set_object(1);
        let r = check_adjunction_admissible(SYS, &one, &one).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].cases, 16);
        let zero = set_object(0);
        assert!(check_adjunction_admissible(SYS, &zero, &one).unwrap().passed());
        let s = FiniteObject::sierpinski();
        let p = crate::limits::terminal(Flavour::Preorder);
        assert!(check_adjunction_admissible(SYS, &s, &p).unwrap().passed());
    }
}
