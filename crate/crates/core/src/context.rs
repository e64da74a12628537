//! Built-in finite extensive contexts and the extensivity validator.

use std::sync::Arc;

use crate::closure::{ClosureFamily, Space};
use crate::error::{Error, Result};
use crate::factorization::FactorizationSystem;
use crate::hom::{homs, is_isomorphic, preorder_objects, set_object};
use crate::limits::{
    self, copairing_is_universal, coproduct, from_initial, initial, ordinal_sum, product, pullback,
    terminal, Coproduct,
};
use crate::morphism::{compose, Morphism};
use crate::object::{FiniteObject, Flavour, Obj, Preorder};
use crate::report::{par_checks, Report, Witness};
use crate::subobject::{preimage, Subobject};

/// A concrete category of finite objects with a factorization system and
/// the closure families registered for it.
#[derive(Clone, Debug)]
pub struct Context {
    name: String,
    flavour: Flavour,
    system: FactorizationSystem,
    families: Vec<ClosureFamily>,
    ordinal_sums: bool,
    extra: Vec<Obj>,
}

impl Context {
    pub const BUILTIN: [&'static str; 2] = ["finset", "finpre"];

    /// `"finset"`: finite sets with (surjections, injections).
    /// `"finpre"`: finite preorders with (surjections, embeddings).
    pub fn builtin(name: &str) -> Result<Self> {
        let flavour = match name {
            "finset" => Flavour::Set,
            "finpre" => Flavour::Preorder,
            _ => return Err(Error::UnknownContext(name.to_string())),
        };
        Ok(Context {
            name: name.to_string(),
            flavour,
            system: FactorizationSystem::SurjectionEmbedding,
            families: ClosureFamily::ALL.to_vec(),
            ordinal_sums: false,
            extra: Vec::new(),
        })
    }

    /// Preorders whose "coproduct" puts every left point below every right
    /// point. Not extensive; exists to exercise the validator.
    pub fn ordinal_mutant() -> Self {
        Context {
            name: "finpre-ordinal".into(),
            ordinal_sums: true,
            ..Self::builtin("finpre").expect("builtin")
        }
    }

    /// Same category with another factorization system.
    pub fn with_system(mut self, system: FactorizationSystem) -> Self {
        self.system = system;
        self
    }

    /// Adds objects to the enumeration pool. Unordered objects join a
    /// preorder context as discrete preorders; ordered objects join a set
    /// context only when their order is discrete.
    pub fn with_objects(mut self, objects: impl IntoIterator<Item = Obj>) -> Result<Self> {
        for x in objects {
            if x.len() > crate::MAX_BOUND {
                return Err(Error::CarrierTooLarge {
                    size: x.len(),
                    limit: crate::MAX_BOUND,
                });
            }
            let x = match (self.flavour, x.order()) {
                (Flavour::Set, None) | (Flavour::Preorder, Some(_)) => x,
                (Flavour::Preorder, None) => Arc::new(FiniteObject::new(
                    x.name().to_string(),
                    x.labels().to_vec(),
                    Some(Preorder::discrete(x.len())),
                )?),
                (Flavour::Set, Some(p)) if p.is_discrete() => Arc::new(FiniteObject::new(
                    x.name().to_string(),
                    x.labels().to_vec(),
                    None,
                )?),
                (Flavour::Set, Some(_)) => return Err(Error::FlavourMismatch),
            };
            self.extra.push(x);
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flavour(&self) -> Flavour {
        self.flavour
    }

    pub fn system(&self) -> FactorizationSystem {
        self.system
    }

    pub fn families(&self) -> &[ClosureFamily] {
        &self.families
    }

    pub fn extra_objects(&self) -> &[Obj] {
        &self.extra
    }

    /// One object per isomorphism class with at most `bound` points, by size,
    /// followed by added objects not isomorphic to any of them.
    pub fn objects(&self, bound: usize) -> Vec<Obj> {
        let mut out: Vec<Obj> = match self.flavour {
            Flavour::Set => (0..=bound).map(set_object).collect(),
            Flavour::Preorder => (0..=bound).flat_map(preorder_objects).collect(),
        };
        let canonical = out.len();
        for x in &self.extra {
            if !out.iter().any(|y| is_isomorphic(x, y)) {
                out.push(Arc::clone(x));
            }
        }
        out[canonical..].sort_by_key(|x| x.len());
        out
    }

    /// Every morphism among `objects(bound)`.
    pub fn morphisms(&self, bound: usize) -> Vec<Morphism> {
        let objs = self.objects(bound);
        objs.iter()
            .flat_map(|x| objs.iter().flat_map(move |y| homs(x, y)))
            .collect()
    }

    pub fn coproduct(&self, x: &Obj, y: &Obj) -> Result<Coproduct> {
        if self.ordinal_sums {
            ordinal_sum(x, y)
        } else {
            coproduct(x, y)
        }
    }

    pub fn initial(&self) -> Obj {
        initial(self.flavour)
    }

    pub fn terminal(&self) -> Obj {
        terminal(self.flavour)
    }

    pub fn space(&self, family: ClosureFamily, x: &Obj) -> Space {
        family.space(x)
    }

    pub fn family(&self, name: &str) -> Result<ClosureFamily> {
        let f = ClosureFamily::parse(name)?;
        if self.families.contains(&f) {
            Ok(f)
        } else {
            Err(Error::UnknownFamily(name.to_string()))
        }
    }
}

const EXTENSIVE_CHECKS: [&str; 9] = [
    "pullback-stable-coproducts",
    "strict-initial",
    "injections-in-M",
    "initial-to-terminal-in-M",
    "distributivity",
    "coproducts-disjoint",
    "coproducts-universal",
    "morphisms-reflect-zero",
    "injections-pull-back-from-1+1",
];

/// Exhaustive extensivity checks over all objects with at most `bound` points.
pub fn validate_extensive(ctx: &Context, bound: usize) -> Report {
    let objs = ctx.objects(bound);
    let sys = ctx.system;
    let one = ctx.terminal();
    let zero = ctx.initial();
    let pairs: Vec<(Obj, Obj)> = objs
        .iter()
        .flat_map(|x| objs.iter().map(move |y| (Arc::clone(x), Arc::clone(y))))
        .collect();
    let small: Vec<Obj> = objs.iter().filter(|z| z.len() <= 2).cloned().collect();

    let mut checks = par_checks(&pairs, &EXTENSIVE_CHECKS, |(x, y), cs| {
        let cop = match ctx.coproduct(x, y) {
            Ok(c) => c,
            Err(e) => {
                cs[0].fail(Witness::new(format!("no coproduct: {e}")).object(x).object(y));
                return;
            }
        };
        for z in &objs {
            for f in homs(z, &cop.object) {
                let ok = coproduct_pulls_back(ctx, &cop, &f);
                cs[0].record(ok, || {
                    Witness::new("Z is not the sum of the preimages of the summands").morphism(&f)
                });
            }
        }
        cs[2].record(sys.in_m(&cop.inl) && sys.in_m(&cop.inr), || {
            Witness::new("coproduct injection outside M").morphism(&cop.inl).morphism(&cop.inr)
        });
        let disjoint = pullback(&cop.inl, &cop.inr).is_ok_and(|pb| pb.object.is_empty());
        cs[5].record(disjoint, || Witness::new("summands intersect").object(&cop.object));
        for z in &small {
            cs[6].record(copairing_is_universal(&cop, z), || {
                Witness::new("copairing not unique").object(&cop.object).object(z)
            });
        }
        for f in homs(x, y) {
            let ok = preimage(sys, &f, &Subobject::bottom(y)).is_ok_and(|p| p.is_bottom());
            cs[7].record(ok, || Witness::new("preimage of ∅ is not ∅").morphism(&f));
        }
        let ok = injections_from_fold(ctx, &cop, &one).unwrap_or(false);
        cs[8].record(ok, || {
            Witness::new("ι_X is not the pullback of !+! along ι_1").object(x).object(y)
        });
    });

    for x in &objs {
        for f in homs(x, &zero) {
            checks[1].record(f.is_iso(), || Witness::new("morphism into 0 is not iso").morphism(&f));
        }
        let ok = distributes(ctx, x, &one).unwrap_or(false);
        checks[4].record(ok, || Witness::new("(1+1)×X is not X+X").object(x));
    }
    let zero_one = from_initial(&one);
    checks[3].record(sys.in_m(&zero_one), || {
        Witness::new("0 -> 1 outside M").morphism(&zero_one)
    });
    checks[1].record(zero.is_empty(), || Witness::new("0 is not empty"));

    let mut r = Report::new(format!("extensivity of {} at bound {bound}", ctx.name));
    r.checks = checks;
    r
}

/// `f⁻¹X + f⁻¹Y -> Z` is an isomorphism.
fn coproduct_pulls_back(ctx: &Context, cop: &Coproduct, f: &Morphism) -> bool {
    let (Ok(l), Ok(r)) = (pullback(f, &cop.inl), pullback(f, &cop.inr)) else {
        return false;
    };
    let Ok(sum) = ctx.coproduct(l.p1.source(), r.p1.source()) else {
        return false;
    };
    sum.copair(&l.p1, &r.p1).is_ok_and(|h| h.is_iso())
}

fn injections_from_fold(ctx: &Context, cop: &Coproduct, one: &Obj) -> Result<bool> {
    let two = ctx.coproduct(one, one)?;
    let bangs = limits::sum_between(
        cop,
        &two,
        &limits::to_terminal(cop.left()).with_target(Arc::clone(one)),
        &limits::to_terminal(cop.right()).with_target(Arc::clone(one)),
    )?;
    let pb = pullback(&bangs, &two.inl)?;
    let p = &pb.p1;
    Ok(p.is_injective()
        && ctx.system.in_m(p)
        && p.image_mask(p.source().full()) == cop.left_mask()
        && is_isomorphic(p.source(), cop.left()))
}

/// The comparison `X+X -> (1+1)×X` is an isomorphism.
fn distributes(ctx: &Context, x: &Obj, one: &Obj) -> Result<bool> {
    let two = ctx.coproduct(one, one)?;
    let prod = product(&two.object, x)?;
    let xx = ctx.coproduct(x, x)?;
    let index = |tag: usize, i: usize| {
        (0..prod.object.len()).find(|&k| prod.p1.apply(k) == tag && prod.p2.apply(k) == i)
    };
    let (l, r) = (two.inl.apply(0), two.inr.apply(0));
    let left: Option<Vec<usize>> = (0..x.len()).map(|i| index(l, i)).collect();
    let right: Option<Vec<usize>> = (0..x.len()).map(|i| index(r, i)).collect();
    let (Some(left), Some(right)) = (left, right) else {
        return Ok(false);
    };
    let lm = Morphism::new(Arc::clone(x), Arc::clone(&prod.object), left)?;
    let rm = Morphism::new(Arc::clone(x), Arc::clone(&prod.object), right)?;
    let cmp = xx.copair(&lm, &rm)?;
    // the comparison must also commute with the projection to X
    let fold = xx.copair(&Morphism::identity(x), &Morphism::identity(x))?;
    Ok(cmp.is_iso() && compose(&prod.p2, &cmp)? == fold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_extensive() {
        for name in Context::BUILTIN {
            let ctx = Context::builtin(name).unwrap();
            let r = validate_extensive(&ctx, 2);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn unknown_context() {
        assert!(matches!(Context::builtin("x"), Err(Error::UnknownContext(_))));
    }

    #[test]
    fn ordinal_mutant_fails_pullback_stability() {
        let r = validate_extensive(&Context::ordinal_mutant(), 2);
        let c = r.check("pullback-stable-coproducts").unwrap();
        assert!(!c.passed);
        assert!(c.witness.is_some());
        assert!(r.check("injections-in-M").unwrap().passed);
    }

    #[test]
    fn object_counts() {
        let set = Context::builtin("finset").unwrap();
        assert_eq!(set.objects(3).len(), 4);
        let pre = Context::builtin("finpre").unwrap();
        assert_eq!(pre.objects(3).len(), 1 + 1 + 3 + 9);
    }

    #[test]
    fn extra_objects_dedup_and_coerce() {
        let s = FiniteObject::sierpinski();
        let x = FiniteObject::set("X", ["p", "q", "r", "s"]).unwrap();
        let ctx = Context::builtin("finpre")
            .unwrap()
            .with_objects([s, x])
            .unwrap();
        let objs = ctx.objects(2);
        assert_eq!(objs.len(), 1 + 1 + 3 + 1);
        assert_eq!(objs.last().unwrap().name(), "X");
        assert!(objs.last().unwrap().order().unwrap().is_discrete());
        let err = Context::builtin("finset")
            .unwrap()
            .with_objects([FiniteObject::sierpinski()]);
        assert!(matches!(err, Err(Error::FlavourMismatch)));
    }
}
