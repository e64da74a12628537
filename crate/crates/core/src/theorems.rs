//! Exhaustive bounded checkers for how finite sums interact with admissible
//! subobjects, closure, properness and separation.
//!
//! Each checker evaluates the conditions of one equivalence (or one
//! implication under a hypothesis) over every instance at the bound, and
//! returns a [`Verdict`] recording the truth value of each condition
//! together with the first counterexample found for it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::closure::{
    closed_morphism_gap, is_closed_embedding, is_continuous, is_dense, pullback_space, ClosureFamily, Space,
    SpaceMorphism,
};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::factorization::{compatible_iso, Factorization};
use crate::hom::{homs, permutations, subsets};
use crate::limits::{sum_between, Coproduct};
use crate::morphism::{compose, Morphism};
use crate::object::{Mask, Obj};
use crate::proper::{is_proper, is_separated, Probe};
use crate::report::{Check, Witness};
use crate::subobject::{image, restriction, sum_subobjects, Subobject, SubobjectLattice};

/// Checker identifiers, in suite order.
pub const THEOREMS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every condition agrees and every claim holds.
    Confirmed,
    /// Some condition disagrees with the others, or a claim fails.
    Refuted,
    /// The hypothesis does not hold at this bound; nothing was compared.
    HypothesisFailed,
}

/// Outcome of one checker on one context, family and bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub theorem: String,
    pub context: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<ClosureFamily>,
    pub bound: usize,
    pub status: Status,
    /// Precondition the statement is conditional on, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Check>,
    /// Conditions asserted to be equivalent.
    pub sides: Vec<Check>,
    /// Statements asserted outright (under the hypothesis).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<Check>,
    /// `None` when the hypothesis failed.
    pub equivalence_ok: Option<bool>,
}

impl Verdict {
    fn new(
        theorem: &str,
        ctx: &Context,
        family: Option<ClosureFamily>,
        bound: usize,
        hypothesis: Option<Check>,
        sides: Vec<Check>,
        claims: Vec<Check>,
    ) -> Self {
        let gated = hypothesis.as_ref().is_some_and(|h| !h.passed);
        let (status, equivalence_ok, sides, claims) = if gated {
            (Status::HypothesisFailed, None, Vec::new(), Vec::new())
        } else {
            let agree = sides.windows(2).all(|w| w[0].passed == w[1].passed);
            let ok = agree && claims.iter().all(|c| c.passed);
            let status = if ok { Status::Confirmed } else { Status::Refuted };
            (status, Some(ok), sides, claims)
        };
        Verdict {
            theorem: theorem.to_string(),
            context: ctx.name().to_string(),
            family,
            bound,
            status,
            hypothesis,
            sides,
            claims,
            equivalence_ok,
        }
    }

    pub fn side(&self, id: &str) -> Option<&Check> {
        self.sides.iter().chain(&self.claims).find(|c| c.id == id)
    }
}

/// Objects at a bound with all their pairwise coproducts.
struct Pool {
    objs: Vec<Obj>,
    cops: Vec<Vec<Coproduct>>,
}

impl Pool {
    fn new(ctx: &Context, bound: usize) -> Result<Self> {
        let objs = ctx.objects(bound);
        let mut cops = Vec::with_capacity(objs.len());
        for x in &objs {
            let row: Result<Vec<Coproduct>> = objs.iter().map(|y| ctx.coproduct(x, y)).collect();
            cops.push(row?);
        }
        Ok(Pool { objs, cops })
    }

    fn cop(&self, i: usize, j: usize) -> &Coproduct {
        &self.cops[i][j]
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.objs.len();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }
}

fn space_morphism(fam: ClosureFamily, f: &Morphism) -> SpaceMorphism {
    SpaceMorphism::new(fam.space(f.source()), fam.space(f.target()), f.clone()).expect("family spaces on endpoints")
}

fn continuous(fam: ClosureFamily, f: &Morphism) -> bool {
    is_continuous(f, &fam.space(f.source()), &fam.space(f.target())).unwrap_or(false)
}

fn is_closed(f: &SpaceMorphism) -> bool {
    closed_morphism_gap(f).is_none()
}

fn closed_masks(space: &Space) -> Vec<Mask> {
    subsets(space.object()).filter(|&m| space.is_closed_mask(m)).collect()
}

/// Monotone bijections `s -> t`.
fn bijections(s: &Obj, t: &Obj) -> Vec<Morphism> {
    if s.len() != t.len() {
        return Vec::new();
    }
    permutations(s.len())
        .into_iter()
        .filter_map(|p| Morphism::new(Arc::clone(s), Arc::clone(t), p).ok())
        .collect()
}

/// `e: A+B -> X+Y` in `E ∩ Mono` between constructed coproducts, with both
/// coproducts. E is contained in the surjections for every system this
/// crate validates, so only bijections are candidates.
fn e_monos_between_sums<'p>(ctx: &Context, pool: &'p Pool) -> Vec<(&'p Coproduct, &'p Coproduct, Morphism)> {
    let sys = ctx.system();
    let mut out = Vec::new();
    for (a, b) in pool.pairs() {
        let src = pool.cop(a, b);
        for (x, y) in pool.pairs() {
            let tgt = pool.cop(x, y);
            for e in bijections(&src.object, &tgt.object) {
                if sys.in_e(&e) && e.is_mono() {
                    out.push((src, tgt, e));
                }
            }
        }
    }
    out
}

fn admissible_lattices(ctx: &Context, pool: &Pool) -> Result<Vec<SubobjectLattice>> {
    pool.objs.iter().map(|x| SubobjectLattice::enumerate(ctx.system(), x)).collect()
}

/// Checker A, first condition: `a + b` is admissible for all admissible `a`, `b`.
fn sums_admissible(ctx: &Context, bound: usize) -> Result<Check> {
    let pool = Pool::new(ctx, bound)?;
    let lats = admissible_lattices(ctx, &pool)?;
    let mut c = Check::new("sums-of-admissible-are-admissible");
    for (i, j) in pool.pairs() {
        for a in &lats[i].elements {
            for b in &lats[j].elements {
                let s = sum_subobjects(ctx.system(), a, b)?;
                c.record(s.admissible, || {
                    Witness::new("a + b is not an admissible subobject")
                        .subobject(&pool.objs[i], a.mask())
                        .subobject(&pool.objs[j], b.mask())
                        .morphism(&s.morphism)
                });
            }
        }
    }
    Ok(c)
}

/// Pullback of `e` along the injection `inj`, as a map into the summand.
fn injection_pullback(e: &Morphism, inj: &Morphism) -> Result<Morphism> {
    Ok(crate::limits::pullback(e, inj)?.p2)
}

/// Checker A: sums of admissible subobjects are admissible iff morphisms in
/// `E ∩ Mono` between finite sums pull back into `E` along injections.
pub fn check_sum_admissible(ctx: &Context, bound: usize) -> Result<Verdict> {
    let side1 = sums_admissible(ctx, bound)?;
    let pool = Pool::new(ctx, bound)?;
    let sys = ctx.system();
    let mut side2 = Check::new("E-monos-stable-under-injection-pullbacks");
    for (_, tgt, e) in e_monos_between_sums(ctx, &pool) {
        for inj in [&tgt.inl, &tgt.inr] {
            let p = injection_pullback(&e, inj)?;
            side2.record(sys.in_e(&p), || {
                Witness::new("pullback of e along an injection is not in E").morphism(&e).morphism(&p)
            });
        }
    }
    Ok(Verdict::new("A", ctx, None, bound, None, vec![side1, side2], Vec::new()))
}

/// The three conditions of checker B, in order.
fn closed_embedding_conditions(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<[Check; 3]> {
    let pool = Pool::new(ctx, bound)?;
    let sys = ctx.system();
    let spaces: Vec<Space> = pool.objs.iter().map(|x| fam.space(x)).collect();
    let closed: Vec<Vec<Mask>> = spaces.iter().map(closed_masks).collect();

    let mut a_check = Check::new("sums-of-closed-embeddings-are-closed-embeddings");
    for (i, j) in pool.pairs() {
        let (x, y) = (&pool.objs[i], &pool.objs[j]);
        let tgt = pool.cop(i, j);
        for &a in &closed[i] {
            let ma = x.inclusion(a);
            for &b in &closed[j] {
                let mb = y.inclusion(b);
                let src = ctx.coproduct(ma.source(), mb.source())?;
                let sum = sum_between(&src, tgt, &ma, &mb)?;
                let sm = SpaceMorphism::new(fam.space(&src.object), fam.space(&tgt.object), sum.clone())?;
                let ok = sys.in_m(&sum) && is_closed_embedding(&sm).unwrap_or(false);
                a_check.record(ok, || {
                    Witness::new("sum of closed embeddings is not a closed embedding")
                        .subobject(x, a)
                        .subobject(y, b)
                        .morphism(&sum)
                });
            }
        }
    }

    let mut b_check = Check::new("sums-admissible-and-injections-closed-embeddings");
    let a1 = sums_admissible(ctx, bound)?;
    b_check.merge(a1);
    for (i, j) in pool.pairs() {
        let cop = pool.cop(i, j);
        for inj in [&cop.inl, &cop.inr] {
            let ok = is_closed_embedding(&space_morphism(fam, inj)).unwrap_or(false);
            b_check.record(ok, || Witness::new("coproduct injection is not a closed embedding").morphism(inj));
        }
    }

    let mut c_check = Check::new("dense-maps-between-sums-stable-under-injection-pullbacks");
    // Density of d and of its injection pullbacks only depends on the image
    // of d, and maps out of Z1 + Z2 are pairs of maps. So one representative
    // per image mask of each component is enough.
    for (i, j) in pool.pairs() {
        let tgt = pool.cop(i, j);
        let t_space = fam.space(&tgt.object);
        let mut by_image: BTreeMap<Mask, Vec<Morphism>> = BTreeMap::new();
        for z in &pool.objs {
            let zs = fam.space(z);
            for f in homs(z, &tgt.object) {
                if is_continuous(&f, &zs, &t_space)? {
                    by_image.entry(f.image_mask(z.full())).or_default().push(f);
                }
            }
        }
        let mut seen: BTreeMap<Mask, ()> = BTreeMap::new();
        for (&ma, fs) in &by_image {
            for (&mb, gs) in &by_image {
                let total = ma | mb;
                if seen.contains_key(&total) || t_space.cls_mask(total) != tgt.object.full() {
                    continue;
                }
                let Some(d) = first_continuous_copair(ctx, fam, fs, gs, &t_space)? else {
                    continue;
                };
                seen.insert(total, ());
                for inj in [&tgt.inl, &tgt.inr] {
                    let pb = pullback_space(&d, &space_morphism(fam, inj))?;
                    let ok = is_dense(&pb.p2)?;
                    c_check.record(ok, || {
                        Witness::new("pullback of a dense map along an injection is not dense")
                            .morphism(d.underlying())
                            .morphism(inj)
                    });
                }
            }
        }
    }
    Ok([a_check, b_check, c_check])
}

fn first_continuous_copair(
    ctx: &Context,
    fam: ClosureFamily,
    fs: &[Morphism],
    gs: &[Morphism],
    target: &Space,
) -> Result<Option<SpaceMorphism>> {
    for f in fs {
        for g in gs {
            let src = ctx.coproduct(f.source(), g.source())?;
            let d = src.copair(f, g)?;
            let s = fam.space(&src.object);
            if is_continuous(&d, &s, target)? {
                return Ok(Some(SpaceMorphism::new(s, target.clone(), d)?));
            }
        }
    }
    Ok(None)
}

/// Checker B: (a) sums of closed embeddings are closed embeddings; (b) sums
/// of admissible subobjects are admissible and injections are closed
/// embeddings; (c) dense maps between sums pull back to dense maps along
/// injections.
pub fn check_sum_closed_embeddings(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    let sides = closed_embedding_conditions(ctx, fam, bound)?;
    Ok(Verdict::new("B", ctx, Some(fam), bound, None, sides.to_vec(), Vec::new()))
}

fn hypothesis(id: &str, from: &Check) -> Check {
    let mut h = Check::new(id);
    h.merge(from.clone());
    h
}

/// Closed morphisms compose and `f + g = (f + 1) ∘ (1 + g)`, so sums of
/// closed morphisms are closed iff every `f + 1_Y` and `1_Y + f` is.
fn sums_of_closed_closed(fam: ClosureFamily, pool: &Pool) -> Result<Check> {
    let mut c = Check::new("sums-of-closed-morphisms-are-closed");
    for (i, j) in pool.pairs() {
        for f in homs(&pool.objs[i], &pool.objs[j]) {
            if !continuous(fam, &f) || !is_closed(&space_morphism(fam, &f)) {
                continue;
            }
            for (k, y) in pool.objs.iter().enumerate() {
                let id = Morphism::identity(y);
                let left = sum_between(pool.cop(i, k), pool.cop(j, k), &f, &id)?;
                let right = sum_between(pool.cop(k, i), pool.cop(k, j), &id, &f)?;
                for s in [left, right] {
                    let ok = continuous(fam, &s) && is_closed(&space_morphism(fam, &s));
                    c.record(ok, || {
                        Witness::new("sum of closed morphisms is not closed").morphism(&f).morphism(&s)
                    });
                }
            }
        }
    }
    Ok(c)
}

fn injections_closed(fam: ClosureFamily, pool: &Pool) -> Check {
    let mut c = Check::new("injections-closed");
    for (i, j) in pool.pairs() {
        let cop = pool.cop(i, j);
        for inj in [&cop.inl, &cop.inr] {
            c.record(is_closed(&space_morphism(fam, inj)), || {
                Witness::new("coproduct injection is not closed").morphism(inj)
            });
        }
    }
    c
}

fn corollary_sides(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<[Check; 2]> {
    let pool = Pool::new(ctx, bound)?;
    Ok([sums_of_closed_closed(fam, &pool)?, injections_closed(fam, &pool)])
}

/// Checker C: given admissible sums, sums of closed morphisms are closed iff
/// the injections are closed.
pub fn check_cor_sum_closed_morphisms(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    let hyp = hypothesis("sums-of-admissible-are-admissible", &sums_admissible(ctx, bound)?);
    let sides = if hyp.passed {
        corollary_sides(ctx, fam, bound)?.to_vec()
    } else {
        Vec::new()
    };
    Ok(Verdict::new("C", ctx, Some(fam), bound, Some(hyp), sides, Vec::new()))
}

/// Lemma: when sums of closed embeddings are closed embeddings,
/// `cls(a + b) = cls a + cls b` for admissible `a`, `b`.
pub fn check_lemma_componentwise_closure(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    let [a, ..] = closed_embedding_conditions(ctx, fam, bound)?;
    let hyp = hypothesis("sums-of-closed-embeddings-are-closed-embeddings", &a);
    let mut claims = Vec::new();
    if hyp.passed {
        let pool = Pool::new(ctx, bound)?;
        let sys = ctx.system();
        let lats = admissible_lattices(ctx, &pool)?;
        let mut c = Check::new("closure-of-sum-is-sum-of-closures");
        for (i, j) in pool.pairs() {
            let (x, y) = (&pool.objs[i], &pool.objs[j]);
            let cop = pool.cop(i, j);
            let (sx, sy, sxy) = (fam.space(x), fam.space(y), fam.space(&cop.object));
            for a in &lats[i].elements {
                for b in &lats[j].elements {
                    let ab = sum_subobjects(sys, a, b)?.as_subobject(sys, cop)?;
                    let lhs = sxy.cls(&ab);
                    let rhs = sum_subobjects(sys, &sx.cls(a), &sy.cls(b))?.as_subobject(sys, cop)?;
                    c.record(lhs == rhs, || {
                        Witness::new("cls(a + b) differs from cls a + cls b")
                            .subobject(x, a.mask())
                            .subobject(y, b.mask())
                    });
                }
            }
        }
        claims.push(c);
    }
    Ok(Verdict::new("D", ctx, Some(fam), bound, Some(hyp), Vec::new(), claims))
}

fn sum_factorization(src: &Coproduct, f: &Factorization, g: &Factorization, tgt: &Coproduct, ctx: &Context) -> Result<Factorization> {
    let mid = ctx.coproduct(f.mid(), g.mid())?;
    Ok(Factorization {
        e: sum_between(src, &mid, &f.e, &g.e)?,
        m: sum_between(&mid, tgt, &f.m, &g.m)?,
    })
}

/// Checker E: the factorization of `f + g` is the sum of the factorizations,
/// and images, composites and restrictions along sums of admissible
/// subobjects are computed componentwise.
pub fn check_factorization_of_sums(ctx: &Context, bound: usize) -> Result<Verdict> {
    let hyp = hypothesis("sums-of-admissible-are-admissible", &sums_admissible(ctx, bound)?);
    if !hyp.passed {
        return Ok(Verdict::new("E", ctx, None, bound, Some(hyp), Vec::new(), Vec::new()));
    }
    let sys = ctx.system();
    let pool = Pool::new(ctx, bound)?;
    let lats = admissible_lattices(ctx, &pool)?;
    let mut fact = Check::new("factorization-of-sum-is-sum-of-factorizations");
    let mut composite = Check::new("composite-with-sum-of-subobjects");
    let mut images = Check::new("image-of-sum-of-subobjects");
    let mut restrictions = Check::new("restriction-to-sum-of-subobjects");

    let maps: Vec<(usize, usize, Morphism, Factorization)> = pool
        .pairs()
        .flat_map(|(i, j)| homs(&pool.objs[i], &pool.objs[j]).into_iter().map(move |f| (i, j, f)))
        .map(|(i, j, f)| {
            let fac = sys.factorize(&f);
            (i, j, f, fac)
        })
        .collect();

    for (a, x, f, ff) in &maps {
        for (b, y, g, fg) in &maps {
            let src = pool.cop(*a, *b);
            let tgt = pool.cop(*x, *y);
            let fg_sum = sum_between(src, tgt, f, g)?;
            let direct = sys.factorize(&fg_sum);
            let summed = sum_factorization(src, ff, fg, tgt, ctx)?;
            let ok = sys.in_e(&summed.e) && sys.in_m(&summed.m) && compatible_iso(&direct, &summed).is_some();
            fact.record(ok, || {
                Witness::new("factorization of f + g is not the sum of factorizations").morphism(f).morphism(g)
            });

            for ma in &lats[*a].elements {
                let ra = ma.rep();
                let fa = compose(f, &ra)?;
                let img_a = image(sys, f, ma)?;
                let res_a = restriction(sys, f, ma)?;
                for mb in &lats[*b].elements {
                    let rb = mb.rep();
                    let sub_src = ctx.coproduct(ra.source(), rb.source())?;
                    let mab = sum_between(&sub_src, src, &ra, &rb)?;

                    let lhs = compose(&fg_sum, &mab)?;
                    let rhs = sum_between(&sub_src, tgt, &fa, &compose(g, &rb)?)?;
                    composite.record(lhs == rhs, || {
                        Witness::new("(f+g)(a+b) differs from fa + gb")
                            .morphism(f)
                            .morphism(g)
                            .subobject(ma.ambient(), ma.mask())
                            .subobject(mb.ambient(), mb.mask())
                    });

                    let ab = Subobject::from_m_morphism(sys, &mab)?;
                    let lhs = image(sys, &fg_sum, &ab)?;
                    let rhs = sum_subobjects(sys, &img_a, &image(sys, g, mb)?)?.as_subobject(sys, tgt)?;
                    images.record(lhs == rhs, || {
                        Witness::new("image of a + b under f + g differs from f(a) + g(b)")
                            .morphism(f)
                            .morphism(g)
                            .subobject(ma.ambient(), ma.mask())
                            .subobject(mb.ambient(), mb.mask())
                    });

                    let lhs = restriction(sys, &fg_sum, &ab)?;
                    let rhs = sum_factorization(&sub_src, &res_a, &restriction(sys, g, mb)?, tgt, ctx)?;
                    restrictions.record(compatible_iso(&lhs, &rhs).is_some(), || {
                        Witness::new("restriction of f + g to a + b is not the sum of restrictions")
                            .morphism(f)
                            .morphism(g)
                            .subobject(ma.ambient(), ma.mask())
                            .subobject(mb.ambient(), mb.mask())
                    });
                }
            }
        }
    }
    Ok(Verdict::new(
        "E",
        ctx,
        None,
        bound,
        Some(hyp),
        Vec::new(),
        vec![fact, composite, images, restrictions],
    ))
}

/// Checker F: closed morphisms in `E ∩ Mono` between sums pull back along
/// injections to closed morphisms in `E`.
pub fn check_pb_stability_closed_e_monos(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    let [a, ..] = closed_embedding_conditions(ctx, fam, bound)?;
    let hyp = hypothesis("sums-of-closed-embeddings-are-closed-embeddings", &a);
    if !hyp.passed {
        return Ok(Verdict::new("F", ctx, Some(fam), bound, Some(hyp), Vec::new(), Vec::new()));
    }
    let pool = Pool::new(ctx, bound)?;
    let sys = ctx.system();
    let mut in_e = Check::new("injection-pullbacks-in-E");
    let mut closed = Check::new("injection-pullbacks-closed");
    for (_, tgt, e) in e_monos_between_sums(ctx, &pool) {
        if !continuous(fam, &e) {
            continue;
        }
        let es = space_morphism(fam, &e);
        if !is_closed(&es) {
            continue;
        }
        for inj in [&tgt.inl, &tgt.inr] {
            let pb = pullback_space(&space_morphism(fam, inj), &es)?;
            let p = &pb.p1;
            in_e.record(sys.in_e(p.underlying()), || {
                Witness::new("injection pullback of a closed E-mono is not in E").morphism(&e).morphism(inj)
            });
            closed.record(is_closed(p), || {
                Witness::new("injection pullback of a closed E-mono is not closed").morphism(&e).morphism(inj)
            });
        }
    }
    Ok(Verdict::new("F", ctx, Some(fam), bound, Some(hyp), Vec::new(), vec![in_e, closed]))
}

fn corollary_hypothesis(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Check> {
    let a1 = sums_admissible(ctx, bound)?;
    let mut h = Check::new("sums-of-closed-morphisms-are-closed-and-injections-closed");
    h.merge(a1.clone());
    if a1.passed {
        let [s1, s2] = corollary_sides(ctx, fam, bound)?;
        h.merge(s1);
        h.merge(s2);
    }
    Ok(h)
}

/// Continuous family-space morphisms among the pool objects with `keep`.
fn space_morphisms(fam: ClosureFamily, pool: &Pool, keep: impl Fn(&SpaceMorphism) -> Result<bool>) -> Result<Vec<(usize, usize, SpaceMorphism)>> {
    let mut out = Vec::new();
    for (i, j) in pool.pairs() {
        for f in homs(&pool.objs[i], &pool.objs[j]) {
            if !continuous(fam, &f) {
                continue;
            }
            let sm = space_morphism(fam, &f);
            if keep(&sm)? {
                out.push((i, j, sm));
            }
        }
    }
    Ok(out)
}

fn sum_space_morphism(fam: ClosureFamily, pool: &Pool, (a, x, f): &(usize, usize, SpaceMorphism), (b, y, g): &(usize, usize, SpaceMorphism)) -> Result<Option<SpaceMorphism>> {
    let s = sum_between(pool.cop(*a, *b), pool.cop(*x, *y), f.underlying(), g.underlying())?;
    Ok(continuous(fam, &s).then(|| space_morphism(fam, &s)))
}

fn fold(pool: &Pool, i: usize) -> Result<Morphism> {
    let x = &pool.objs[i];
    pool.cop(i, i).copair(&Morphism::identity(x), &Morphism::identity(x))
}

/// Checker G: under the corollary's hypothesis, sums of proper maps are
/// proper; and compact spaces are closed under sums iff every `0 -> X` and
/// every fold `X + X -> X` is proper.
pub fn check_sum_proper(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    let hyp = corollary_hypothesis(ctx, fam, bound)?;
    if !hyp.passed {
        return Ok(Verdict::new("G", ctx, Some(fam), bound, Some(hyp), Vec::new(), Vec::new()));
    }
    let pool = Pool::new(ctx, bound)?;
    let probe = Probe::new(&pool.objs, ctx.families());
    let proper = space_morphisms(fam, &pool, |f| is_proper(f, &probe))?;

    let mut part1 = Check::new("sums-of-proper-are-proper");
    for f in &proper {
        for g in &proper {
            let ok = match sum_space_morphism(fam, &pool, f, g)? {
                Some(s) => is_proper(&s, &probe)?,
                None => false,
            };
            part1.record(ok, || {
                Witness::new("sum of proper maps is not proper").morphism(f.2.underlying()).morphism(g.2.underlying())
            });
        }
    }

    let compact: Vec<usize> = (0..pool.objs.len())
        .filter(|&i| crate::proper::is_compact(&fam.space(&pool.objs[i]), &probe).unwrap_or(false))
        .collect();
    let mut sums_compact = Check::new("sums-of-compact-are-compact");
    for &i in &compact {
        for &j in &compact {
            let s = fam.space(&pool.cop(i, j).object);
            sums_compact.record(crate::proper::is_compact(&s, &probe)?, || {
                Witness::new("sum of compact spaces is not compact").object(&pool.cop(i, j).object)
            });
        }
    }
    let mut structural = Check::new("initial-maps-and-folds-proper");
    for (i, x) in pool.objs.iter().enumerate() {
        let bang = crate::limits::from_initial(x);
        for m in [bang, fold(&pool, i)?] {
            let ok = continuous(fam, &m) && is_proper(&space_morphism(fam, &m), &probe)?;
            structural.record(ok, || Witness::new("map is not proper").morphism(&m));
        }
    }
    Ok(Verdict::new("G", ctx, Some(fam), bound, Some(hyp), vec![sums_compact, structural], vec![part1]))
}

/// Checker H: under the corollary's hypothesis, sums of separated maps are
/// separated; and Hausdorff spaces are closed under sums iff `1 + 1` is
/// Hausdorff.
pub fn check_sum_separated(ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    let hyp = corollary_hypothesis(ctx, fam, bound)?;
    if !hyp.passed {
        return Ok(Verdict::new("H", ctx, Some(fam), bound, Some(hyp), Vec::new(), Vec::new()));
    }
    let pool = Pool::new(ctx, bound)?;
    let probe = Probe::new(&pool.objs, ctx.families());
    let separated = space_morphisms(fam, &pool, |f| is_separated(f, &probe))?;

    let mut part1 = Check::new("sums-of-separated-are-separated");
    for f in &separated {
        for g in &separated {
            let ok = match sum_space_morphism(fam, &pool, f, g)? {
                Some(s) => is_separated(&s, &probe)?,
                None => false,
            };
            part1.record(ok, || {
                Witness::new("sum of separated maps is not separated")
                    .morphism(f.2.underlying())
                    .morphism(g.2.underlying())
            });
        }
    }

    let hausdorff: Vec<usize> = (0..pool.objs.len())
        .filter(|&i| crate::proper::is_hausdorff(&fam.space(&pool.objs[i]), &probe).unwrap_or(false))
        .collect();
    let mut sums_h = Check::new("sums-of-hausdorff-are-hausdorff");
    for &i in &hausdorff {
        for &j in &hausdorff {
            let s = fam.space(&pool.cop(i, j).object);
            sums_h.record(crate::proper::is_hausdorff(&s, &probe)?, || {
                Witness::new("sum of Hausdorff spaces is not Hausdorff").object(&pool.cop(i, j).object)
            });
        }
    }
    let one = ctx.terminal();
    let two = ctx.coproduct(&one, &one)?;
    let mut one_plus_one = Check::new("one-plus-one-hausdorff");
    one_plus_one.record(crate::proper::is_hausdorff(&fam.space(&two.object), &probe)?, || {
        Witness::new("1 + 1 is not Hausdorff").object(&two.object)
    });
    Ok(Verdict::new("H", ctx, Some(fam), bound, Some(hyp), vec![sums_h, one_plus_one], vec![part1]))
}

/// Re-evaluates a witness of checker B's first condition: is `a + b`, for
/// the two recorded subobjects, a closed embedding?
pub fn replay_sum_of_closed_embeddings(ctx: &Context, fam: ClosureFamily, w: &Witness) -> Result<bool> {
    let [a, b] = w.subobjects.as_slice() else {
        return Err(Error::Description("witness must name two subobjects".into()));
    };
    let x = a.ambient.to_object()?;
    let y = b.ambient.to_object()?;
    let (ma, mb) = (x.inclusion(a.to_mask(&x)?), y.inclusion(b.to_mask(&y)?));
    let src = ctx.coproduct(ma.source(), mb.source())?;
    let tgt = ctx.coproduct(&x, &y)?;
    let sum = sum_between(&src, &tgt, &ma, &mb)?;
    let sm = SpaceMorphism::new(fam.space(&src.object), fam.space(&tgt.object), sum.clone())?;
    Ok(ctx.system().in_m(&sum) && is_closed_embedding(&sm)?)
}

/// Runs one checker by id. Family-independent checkers ignore `fam`.
pub fn run_checker(id: &str, ctx: &Context, fam: ClosureFamily, bound: usize) -> Result<Verdict> {
    match id {
        "A" => check_sum_admissible(ctx, bound),
        "B" => check_sum_closed_embeddings(ctx, fam, bound),
        "C" => check_cor_sum_closed_morphisms(ctx, fam, bound),
        "D" => check_lemma_componentwise_closure(ctx, fam, bound),
        "E" => check_factorization_of_sums(ctx, bound),
        "F" => check_pb_stability_closed_e_monos(ctx, fam, bound),
        "G" => check_sum_proper(ctx, fam, bound),
        "H" => check_sum_separated(ctx, fam, bound),
        _ => Err(Error::UnknownTheorem(id.to_string())),
    }
}

/// Whether a checker depends on the closure family.
pub fn uses_family(id: &str) -> bool {
    !matches!(id, "A" | "E")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finpre() -> Context {
        Context::builtin("finpre").unwrap()
    }

    #[test]
    fn a_small_bounds() {
        for name in Context::BUILTIN {
            let v = check_sum_admissible(&Context::builtin(name).unwrap(), 2).unwrap();
            assert_eq!(v.status, Status::Confirmed, "{v:?}");
            assert!(v.sides.iter().all(|s| s.passed));
        }
    }

    #[test]
    fn b_alexandrov_and_indiscrete() {
        let v = check_sum_closed_embeddings(&finpre(), ClosureFamily::Alexandrov, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert!(v.sides.iter().all(|s| s.passed));
        let v = check_sum_closed_embeddings(&finpre(), ClosureFamily::Indiscrete, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert!(v.sides.iter().all(|s| !s.passed));
        let w = v.sides[0].witness.as_ref().unwrap();
        assert_eq!(w.subobjects[0].elements, Vec::<String>::new());
        assert_eq!(w.subobjects[1].elements.len(), w.subobjects[1].ambient.carrier.len());
        assert!(!replay_sum_of_closed_embeddings(&finpre(), ClosureFamily::Indiscrete, w).unwrap());
    }

    #[test]
    fn gated_checkers_report_hypothesis_failure() {
        let v = check_cor_sum_closed_morphisms(&finpre(), ClosureFamily::Indiscrete, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed);
        assert!(v.sides.iter().all(|s| !s.passed));
        let v = check_lemma_componentwise_closure(&finpre(), ClosureFamily::Indiscrete, 2).unwrap();
        assert_eq!(v.status, Status::HypothesisFailed);
        assert_eq!(v.equivalence_ok, None);
        let v = check_sum_proper(&finpre(), ClosureFamily::Indiscrete, 1).unwrap();
        assert_eq!(v.status, Status::HypothesisFailed);
    }

    #[test]
    fn closed_sum_reduction_matches_brute_force() {
        for fam in ClosureFamily::ALL {
            let ctx = finpre();
            let pool = Pool::new(&ctx, 2).unwrap();
            let reduced = sums_of_closed_closed(fam, &pool).unwrap().passed;
            let closed = space_morphisms(fam, &pool, |f| Ok(is_closed(f))).unwrap();
            let mut brute = true;
            for f in &closed {
                for g in &closed {
                    brute &= sum_space_morphism(fam, &pool, f, g).unwrap().is_some_and(|s| is_closed(&s));
                }
            }
            assert_eq!(reduced, brute, "{fam}");
        }
    }

    #[test]
    fn e_and_f_small() {
        let v = check_factorization_of_sums(&Context::builtin("finset").unwrap(), 2).unwrap();
        assert_eq!(v.status, Status::Confirmed, "{v:?}");
        let v = check_pb_stability_closed_e_monos(&finpre(), ClosureFamily::Alexandrov, 2).unwrap();
        assert_eq!(v.status, Status::Confirmed, "{v:?}");
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(
            run_checker("Z", &finpre(), ClosureFamily::Identity, 1),
            Err(Error::UnknownTheorem(_))
        ));
    }
}
