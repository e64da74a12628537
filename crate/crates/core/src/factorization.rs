//! Proper (E, M) factorization systems on the concrete categories.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::hom::homs;
use crate::limits::pullback;
use crate::morphism::{compose, Morphism};
use crate::object::{bits, FiniteObject, Obj, Preorder};
use crate::report::{par_checks, Check, Report, Witness};

/// The factorization systems this crate knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorizationSystem {
    /// E = surjections, M = embeddings (injective, order-reflecting).
    /// On unordered carriers this is (surjections, injections).
    SurjectionEmbedding,
    /// E = surjections whose target order is generated by the image of the
    /// source order, M = all injective monotone maps.
    QuotientMono,
    /// Classes of [`SurjectionEmbedding`](Self::SurjectionEmbedding) exchanged.
    /// Not a factorization system; exists so the validator has something to reject.
    Swapped,
}

/// `f = m ∘ e` with `e ∈ E`, `m ∈ M`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub e: Morphism,
    pub m: Morphism,
}

impl Factorization {
    pub fn mid(&self) -> &Obj {
        self.e.target()
    }
}

impl FactorizationSystem {
    pub fn name(self) -> &'static str {
        match self {
            Self::SurjectionEmbedding => "surjection-embedding",
            Self::QuotientMono => "quotient-mono",
            Self::Swapped => "swapped",
        }
    }

    pub fn in_e(self, f: &Morphism) -> bool {
        match self {
            Self::SurjectionEmbedding => f.is_surjective(),
            Self::QuotientMono => f.is_surjective() && is_final(f),
            Self::Swapped => f.is_injective() && f.reflects_order(),
        }
    }

    pub fn in_m(self, f: &Morphism) -> bool {
        match self {
            Self::SurjectionEmbedding => f.is_embedding(),
            Self::QuotientMono => f.is_injective(),
            Self::Swapped => f.is_surjective(),
        }
    }

    /// Concrete image factorization; the middle object is the image with the
    /// structure each system prescribes.
    pub fn factorize(self, f: &Morphism) -> Factorization {
        let img = f.image_mask(f.source().full());
        let target = f.target();
        let mid = match self {
            Self::SurjectionEmbedding | Self::Swapped => target.sub_object(img),
            Self::QuotientMono => {
                let keep: Vec<usize> = bits(img).collect();
                let pos = |j: usize| keep.iter().position(|&k| k == j).unwrap();
                let order = f.source().order().map(|o| {
                    let pairs: Vec<(usize, usize)> =
                        o.pairs().map(|(a, b)| (pos(f.apply(a)), pos(f.apply(b)))).collect();
                    Preorder::closure_of(keep.len(), pairs)
                });
                let labels = keep.iter().map(|&j| target.label(j).to_string()).collect();
                FiniteObject::from_parts(format!("im({})", target.name()), labels, order)
            }
        };
        let keep: Vec<usize> = bits(img).collect();
        let e_map = f
            .table()
            .iter()
            .map(|j| keep.iter().position(|k| k == j).unwrap())
            .collect();
        let e = Morphism::new_unchecked(Arc::clone(f.source()), Arc::clone(&mid), e_map);
        let m = Morphism::new_unchecked(mid, Arc::clone(target), keep);
        Factorization { e, m }
    }
}

/// Target order is the transitive closure of the image of the source order.
fn is_final(f: &Morphism) -> bool {
    let Some(src) = f.source().order() else {
        return true;
    };
    let generated = Preorder::closure_of(
        f.target().len(),
        src.pairs().map(|(a, b)| (f.apply(a), f.apply(b))),
    );
    f.target().order().is_some_and(|t| *t == generated)
}

/// A commuting square `v ∘ e = m ∘ u` with the wrong number of diagonals.
#[derive(Clone, Debug)]
pub struct SquareWitness {
    pub u: Morphism,
    pub v: Morphism,
    pub diagonals: usize,
}

/// `e ↓ m`: every commuting square has exactly one diagonal.
pub fn down_arrow(e: &Morphism, m: &Morphism) -> bool {
    orthogonality_failure(e, m).is_none()
}

/// First commuting square `v ∘ e = m ∘ u` without a unique diagonal.
pub fn orthogonality_failure(e: &Morphism, m: &Morphism) -> Option<SquareWitness> {
    let (a, b) = (e.source(), e.target());
    let (c, d) = (m.source(), m.target());
    let e_surj = e.is_surjective();
    let m_inj = m.is_injective();
    let all_v = if e_surj { Vec::new() } else { homs(b, d) };
    let all_w = if m_inj { Vec::new() } else { homs(b, c) };
    let mut m_inv = vec![usize::MAX; d.len()];
    if m_inj {
        for (i, &j) in m.table().iter().enumerate() {
            m_inv[j] = i;
        }
    }
    for u in homs(a, c) {
        let mu: Vec<usize> = u.table().iter().map(|&i| m.apply(i)).collect();
        let candidates: Vec<Morphism> = if e_surj {
            // v is forced on the image of e, which is all of b
            let mut table = vec![usize::MAX; b.len()];
            let mut ok = true;
            for (i, &bi) in e.table().iter().enumerate() {
                if table[bi] == usize::MAX {
                    table[bi] = mu[i];
                } else if table[bi] != mu[i] {
                    ok = false;
                    break;
                }
            }
            match ok.then(|| Morphism::new(Arc::clone(b), Arc::clone(d), table)) {
                Some(Ok(v)) => vec![v],
                _ => Vec::new(),
            }
        } else {
            all_v
                .iter()
                .filter(|v| e.table().iter().map(|&i| v.apply(i)).eq(mu.iter().copied()))
                .cloned()
                .collect()
        };
        for v in candidates {
            let count = if m_inj {
                let table: Option<Vec<usize>> = v
                    .table()
                    .iter()
                    .map(|&j| (m_inv[j] != usize::MAX).then_some(m_inv[j]))
                    .collect();
                match table.map(|t| Morphism::new(Arc::clone(b), Arc::clone(c), t)) {
                    Some(Ok(w)) if e.table().iter().map(|&i| w.apply(i)).eq(u.table().iter().copied()) => 1,
                    _ => 0,
                }
            } else {
                all_w
                    .iter()
                    .filter(|w| {
                        w.table().iter().map(|&i| m.apply(i)).eq(v.table().iter().copied())
                            && e.table().iter().map(|&i| w.apply(i)).eq(u.table().iter().copied())
                    })
                    .count()
            };
            if count != 1 {
                return Some(SquareWitness {
                    u: u.clone(),
                    v,
                    diagonals: count,
                });
            }
        }
    }
    None
}

/// Comparison iso between two factorizations of the same map, if one exists.
pub fn compatible_iso(p: &Factorization, q: &Factorization) -> Option<Morphism> {
    // the comparison is forced by m_q ∘ φ = m_p when m_q is mono
    let forced: Option<Vec<usize>> = p
        .m
        .table()
        .iter()
        .map(|&x| q.m.table().iter().position(|&y| y == x))
        .collect();
    let phi = Morphism::new(Arc::clone(p.mid()), Arc::clone(q.mid()), forced?).ok()?;
    let ok = phi.is_iso()
        && compose(&phi, &p.e).ok()? == q.e
        && compose(&q.m, &phi).ok()? == p.m;
    ok.then_some(phi)
}

fn square_witness(note: &str, e: &Morphism, m: &Morphism, sq: &SquareWitness) -> Witness {
    Witness::new(format!("{note}: square with {} diagonals", sq.diagonals))
        .morphism(e)
        .morphism(m)
        .morphism(&sq.u)
        .morphism(&sq.v)
}

/// Checks every factorization-system axiom on all morphisms among `objects`.
pub fn validate_system(sys: FactorizationSystem, objects: &[Obj]) -> Report {
    let morphisms: Vec<Morphism> = objects
        .iter()
        .flat_map(|x| objects.iter().flat_map(move |y| homs(x, y)))
        .collect();
    let e_class: Vec<&Morphism> = morphisms.iter().filter(|f| sys.in_e(f)).collect();
    let m_class: Vec<&Morphism> = morphisms.iter().filter(|f| sys.in_m(f)).collect();

    let mut report = Report::new(format!(
        "factorization system {} on {} objects, {} morphisms",
        sys.name(),
        objects.len(),
        morphisms.len()
    ));

    let per_morphism = par_checks(
        &morphisms,
        &[
            "E-within-epis",
            "M-within-monos",
            "E-cap-M-is-iso",
            "isos-in-E-and-M",
            "factorization-composes",
            "factorization-unique",
        ],
        |f, cs| {
            let (in_e, in_m, iso) = (sys.in_e(f), sys.in_m(f), f.is_iso());
            cs[0].record(!in_e || f.is_epi(), || Witness::new("E-morphism not epi").morphism(f));
            cs[1].record(!in_m || f.is_mono(), || Witness::new("M-morphism not mono").morphism(f));
            cs[2].record((in_e && in_m) == iso, || {
                Witness::new("E ∩ M differs from isos").morphism(f)
            });
            cs[3].record(!iso || (in_e && in_m), || Witness::new("iso outside E or M").morphism(f));
            let fac = sys.factorize(f);
            let composes = compose(&fac.m, &fac.e).is_ok_and(|c| &c == f);
            cs[4].record(composes && sys.in_e(&fac.e) && sys.in_m(&fac.m), || {
                Witness::new("factorize produced invalid parts")
                    .morphism(f)
                    .morphism(&fac.e)
                    .morphism(&fac.m)
            });
            // every other (E, M) factorization through a listed object is
            // isomorphic to the computed one
            if composes {
                for mid in objects {
                    for e2 in homs(f.source(), mid).into_iter().filter(|e| sys.in_e(e)) {
                        let Some(m2) = forced_second_factor(&e2, f) else {
                            continue;
                        };
                        if !sys.in_m(&m2) {
                            continue;
                        }
                        let other = Factorization { e: e2, m: m2 };
                        cs[5].record(compatible_iso(&fac, &other).is_some(), || {
                            Witness::new("second factorization not isomorphic")
                                .morphism(f)
                                .morphism(&other.e)
                                .morphism(&other.m)
                        });
                    }
                }
            }
        },
    );
    report.checks.extend(per_morphism);

    let composable = |class: &[&Morphism], id: &str| {
        let mut c = Check::new(id);
        for f in class {
            for g in class {
                if crate::object::same_object(f.target(), g.source()) {
                    let gf = compose(g, f).expect("composable");
                    let inside = if id.starts_with('E') { sys.in_e(&gf) } else { sys.in_m(&gf) };
                    c.record(inside, || {
                        Witness::new("composite leaves the class").morphism(f).morphism(g)
                    });
                }
            }
        }
        c
    };
    report.push(composable(&e_class, "E-closed-under-composition"));
    report.push(composable(&m_class, "M-closed-under-composition"));

    let pb_stable = par_checks(&m_class, &["M-stable-under-pullback"], |m, cs| {
        for g in morphisms.iter().filter(|g| crate::object::same_object(g.target(), m.target())) {
            if let Ok(pb) = pullback(m, g) {
                // the projection parallel to m
                cs[0].record(sys.in_m(&pb.p2), || {
                    Witness::new("pullback of an M-morphism is not in M").morphism(m).morphism(g)
                });
            }
        }
    });
    report.checks.extend(pb_stable);

    let orth = par_checks(&e_class, &["E-orthogonal-to-M"], |e, cs| {
        for m in &m_class {
            if let Some(sq) = orthogonality_failure(e, m) {
                cs[0].fail(square_witness("E-morphism not orthogonal to M-morphism", e, m, &sq));
                return;
            }
            cs[0].record(true, Witness::default);
        }
    });
    report.checks.extend(orth);

    // maximality: anything outside E fails against some M-morphism, and dually
    let not_e: Vec<&Morphism> = morphisms.iter().filter(|f| !sys.in_e(f)).collect();
    let e_max = par_checks(&not_e, &["E-equals-M-up"], |x, cs| {
        let own = sys.factorize(x).m;
        let found = std::iter::once(&own)
            .chain(m_class.iter().copied())
            .filter(|m| sys.in_m(m))
            .any(|m| !down_arrow(x, m));
        cs[0].record(found, || {
            Witness::new("morphism outside E is orthogonal to all of M").morphism(x)
        });
    });
    report.checks.extend(e_max);
    let not_m: Vec<&Morphism> = morphisms.iter().filter(|f| !sys.in_m(f)).collect();
    let m_max = par_checks(&not_m, &["M-equals-E-down"], |x, cs| {
        let own = sys.factorize(x).e;
        let found = std::iter::once(&own)
            .chain(e_class.iter().copied())
            .filter(|e| sys.in_e(e))
            .any(|e| !down_arrow(e, x));
        cs[0].record(found, || {
            Witness::new("morphism outside M has E orthogonal to it").morphism(x)
        });
    });
    report.checks.extend(m_max);
    report
}

/// The `m` with `m ∘ e = f`, when `e` is surjective and such a map exists.
fn forced_second_factor(e: &Morphism, f: &Morphism) -> Option<Morphism> {
    let mut table = vec![usize::MAX; e.target().len()];
    for (i, &j) in e.table().iter().enumerate() {
        if table[j] == usize::MAX {
            table[j] = f.apply(i);
        } else if table[j] != f.apply(i) {
            return None;
        }
    }
    if table.contains(&usize::MAX) {
        return None;
    }
    Morphism::new(Arc::clone(e.target()), Arc::clone(f.target()), table).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::set_object;
    use crate::limits::{coproduct, terminal};
    use crate::object::Flavour;

    #[test]
    fn iso_is_orthogonal_to_anything() {
        let s = FiniteObject::sierpinski();
        let id = Morphism::identity(&s);
        let c = coproduct(&s, &s).unwrap();
        assert!(down_arrow(&id, &c.inl));
        assert!(down_arrow(&id, &Morphism::identity(&c.object)));
    }

    #[test]
    fn surjection_orthogonal_to_inclusion() {
        let ab = FiniteObject::set("AB", ["a", "b"]).unwrap();
        let c = FiniteObject::set("C", ["c"]).unwrap();
        let cd = FiniteObject::set("CD", ["c", "d"]).unwrap();
        let e = Morphism::constant(&ab, &c, 0).unwrap();
        let m = Morphism::from_labels(c.clone(), cd, &[("c", "c")]).unwrap();
        assert!(down_arrow(&e, &m));
    }

    #[test]
    fn inclusion_not_orthogonal_to_itself() {
        let a = FiniteObject::set("A", ["a"]).unwrap();
        let ab = FiniteObject::set("AB", ["a", "b"]).unwrap();
        let i = Morphism::from_labels(a, ab, &[("a", "a")]).unwrap();
        let sq = orthogonality_failure(&i, &i).expect("square with v = id");
        assert_eq!(sq.diagonals, 0);
    }

    #[test]
    fn factorize_edge_cases() {
        let sys = FactorizationSystem::SurjectionEmbedding;
        let ab = FiniteObject::set("AB", ["a", "b"]).unwrap();
        let cd = FiniteObject::set("CD", ["c", "d"]).unwrap();
        let k = Morphism::constant(&ab, &cd, 0).unwrap();
        let fac = sys.factorize(&k);
        assert_eq!(fac.mid().labels(), ["c"]);
        assert!(fac.e.is_surjective() && fac.m.is_embedding());

        let s = FiniteObject::sierpinski();
        let c = coproduct(&s, &terminal(Flavour::Preorder)).unwrap();
        assert!(sys.factorize(&c.inl).e.is_iso());
        let fold = c.copair(&Morphism::identity(&s), &Morphism::constant(&terminal(Flavour::Preorder), &s, 1).unwrap()).unwrap();
        assert!(sys.factorize(&fold).m.is_iso());
    }

    #[test]
    fn swapped_classes_rejected_with_orthogonality_witness() {
        let objs: Vec<Obj> = (0..3).map(set_object).collect();
        let r = validate_system(FactorizationSystem::Swapped, &objs);
        assert!(!r.passed());
        let orth = r.check("E-orthogonal-to-M").unwrap();
        assert!(!orth.passed);
        assert!(orth.witness.as_ref().unwrap().morphisms.len() == 4);
    }

    #[test]
    fn quotient_mono_is_a_system_on_small_preorders() {
        let objs: Vec<Obj> = (0..=2).flat_map(crate::hom::preorder_objects).collect();
        let r = validate_system(FactorizationSystem::QuotientMono, &objs);
        assert!(r.passed(), "{r}");
    }
}
