//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::{Duration, Instant};

use extensive_core::closure::{is_closed_morphism, ClosureFamily, SpaceMorphism};
use extensive_core::context::{validate_extensive, Context};
use extensive_core::factorization::{validate_system, FactorizationSystem};
use extensive_core::hom::subsets;
use extensive_core::proper::{is_compact, is_hausdorff, Probe};
use extensive_core::runner::{biproducts, run, Format, RunConfig};
use extensive_core::theorems::{replay_sum_of_closed_embeddings, run_checker, Status, Verdict};
use extensive_core::{FiniteObject, Mask, Result};

type Outcome = Result<std::result::Result<(), String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn all_sides(v: &Verdict, value: bool) -> bool {
    !v.sides.is_empty() && v.sides.iter().all(|s| s.passed == value)
}

fn extensivity() -> Outcome {
    for name in ["finset", "finpre"] {
        let ctx = Context::builtin(name)?;
        let start = Instant::now();
        let r = validate_extensive(&ctx, 3);
        if let Some(c) = r.first_failure() {
            return Ok(Err(format!("{name}: {} failed", c.id)));
        }
        if let Err(e) = within(start.elapsed(), Duration::from_secs(60), name) {
            return Ok(Err(e));
        }
    }
    Ok(Ok(()))
}

fn factorization_systems() -> Outcome {
    for name in ["finset", "finpre"] {
        let ctx = Context::builtin(name)?;
        let objs = ctx.objects(3);
        let r = validate_system(ctx.system(), &objs);
        if let Some(c) = r.first_failure() {
            return Ok(Err(format!("{name}: {} failed", c.id)));
        }
        let swapped = validate_system(FactorizationSystem::Swapped, &objs);
        let orth = swapped.check("E-orthogonal-to-M");
        let witnessed = orth.is_some_and(|c| !c.passed && c.witness.as_ref().is_some_and(|w| !w.morphisms.is_empty()));
        if swapped.passed() || !witnessed {
            return Ok(Err(format!("{name}: swapped classes not rejected by orthogonality")));
        }
    }
    Ok(Ok(()))
}

fn sum_admissible() -> Outcome {
    for name in ["finset", "finpre"] {
        let v = run_checker("A", &Context::builtin(name)?, ClosureFamily::Identity, 3)?;
        if v.equivalence_ok != Some(true) || !all_sides(&v, true) {
            return Ok(Err(format!("{name}: {:?}", v.status)));
        }
    }
    Ok(Ok(()))
}

fn closed_embeddings() -> Outcome {
    let ctx = Context::builtin("finpre")?;
    let alex = run_checker("B", &ctx, ClosureFamily::Alexandrov, 3)?;
    if alex.equivalence_ok != Some(true) || alex.sides.len() != 3 || !all_sides(&alex, true) {
        return Ok(Err("alexandrov: not all three conditions true".into()));
    }
    let ind = run_checker("B", &ctx, ClosureFamily::Indiscrete, 3)?;
    if ind.equivalence_ok != Some(true) || ind.sides.len() != 3 || !all_sides(&ind, false) {
        return Ok(Err("indiscrete: not all three conditions false".into()));
    }
    let Some(w) = ind.sides[0].witness.as_ref() else {
        return Ok(Err("indiscrete: no witness".into()));
    };
    let [a, b] = w.subobjects.as_slice() else {
        return Ok(Err("indiscrete: witness does not name two subobjects".into()));
    };
    if !a.elements.is_empty() || b.elements.len() != b.ambient.carrier.len() {
        return Ok(Err(format!("indiscrete: witness is not (bottom, top): {w}")));
    }
    if replay_sum_of_closed_embeddings(&ctx, ClosureFamily::Indiscrete, w)? {
        return Ok(Err("indiscrete: witness does not replay".into()));
    }
    Ok(Ok(()))
}

fn componentwise_closure() -> Outcome {
    let v = run_checker("D", &Context::builtin("finpre")?, ClosureFamily::Alexandrov, 3)?;
    let c = v.claims.first();
    Ok(ensure(
        v.status == Status::Confirmed && c.is_some_and(|c| c.passed && c.cases > 0),
        format!("{:?}", v.status),
    ))
}

fn factorization_of_sums() -> Outcome {
    for name in ["finset", "finpre"] {
        let start = Instant::now();
        let v = run_checker("E", &Context::builtin(name)?, ClosureFamily::Identity, 2)?;
        let corollaries = ["composite-with-sum-of-subobjects", "image-of-sum-of-subobjects", "restriction-to-sum-of-subobjects"];
        let present = corollaries.iter().all(|id| v.claims.iter().any(|c| c.id == *id));
        if v.status != Status::Confirmed || !present {
            return Ok(Err(format!("{name}: {:?}", v.status)));
        }
        if let Err(e) = within(start.elapsed(), Duration::from_secs(120), name) {
            return Ok(Err(e));
        }
    }
    Ok(Ok(()))
}

fn biproduct() -> Outcome {
    for name in ["finset", "finpre"] {
        let ctx = Context::builtin(name)?;
        let r = biproducts(&ctx, ctx.families(), 3)?;
        if let Some(c) = r.first_failure() {
            return Ok(Err(format!("{name}: {} failed", c.id)));
        }
        for id in ["matrix/hom-matrix-hom", "matrix/matrix-hom-matrix"] {
            if !r.check(id).is_some_and(|c| c.cases > 0) {
                return Ok(Err(format!("{name}: {id} examined nothing")));
            }
        }
    }
    Ok(Ok(()))
}

fn proper_and_separated() -> Outcome {
    let ctx = Context::builtin("finpre")?;
    let fam = ClosureFamily::Alexandrov;
    let start = Instant::now();
    let g = run_checker("G", &ctx, fam, 2)?;
    let h = run_checker("H", &ctx, fam, 2)?;
    let elapsed = start.elapsed();
    if g.status != Status::Confirmed || !g.claims.iter().all(|c| c.passed) {
        return Ok(Err("sums of proper maps are not proper".into()));
    }
    if !h.side("one-plus-one-hausdorff").is_some_and(|c| c.passed) {
        return Ok(Err("1 + 1 is not Hausdorff".into()));
    }
    let probe = Probe::new(&ctx.objects(2), &[fam]);
    if is_hausdorff(&fam.space(&FiniteObject::sierpinski()), &probe)? {
        return Ok(Err("Sierpinski space is Hausdorff".into()));
    }
    for x in ctx.objects(3) {
        if !is_compact(&fam.space(&x), &probe)? {
            return Ok(Err(format!("{} is not compact", x.name())));
        }
    }
    Ok(within(elapsed, Duration::from_secs(600), "G + H"))
}

/// Down-sets straight from the order relation.
fn is_down_set(x: &FiniteObject, mask: Mask) -> bool {
    (0..x.len()).all(|j| mask >> j & 1 == 0 || (0..x.len()).all(|i| !x.le(i, j) || mask >> i & 1 == 1))
}

fn closed_morphism_oracle() -> Outcome {
    let ctx = Context::builtin("finpre")?;
    let fam = ClosureFamily::Alexandrov;
    let mut seen = [0usize; 2];
    for f in ctx.morphisms(3) {
        let (x, y) = (f.source(), f.target());
        let oracle = subsets(x).filter(|&d| is_down_set(x, d)).all(|d| is_down_set(y, f.image_mask(d)));
        let sm = SpaceMorphism::new(fam.space(x), fam.space(y), f.clone())?;
        if is_closed_morphism(&sm)? != oracle {
            return Ok(Err(format!("disagrees on {f}")));
        }
        seen[oracle as usize] += 1;
    }
    Ok(ensure(seen[0] > 0 && seen[1] > 0, format!("degenerate sample {seen:?}")))
}

fn determinism() -> Outcome {
    let config = RunConfig {
        context: "finpre".into(),
        format: Format::Structured,
        ..RunConfig::default()
    };
    let first = run(&config)?.to_json();
    let second = run(&config)?.to_json();
    Ok(ensure(first == second, "reports differ"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("finset and finpre are extensive at bound 3", extensivity),
        ("factorization systems valid, swapped classes rejected", factorization_systems),
        ("A holds in finset@3 and finpre@3", sum_admissible),
        ("B: alexandrov all true, indiscrete all false with replayable witness", closed_embeddings),
        ("closure of a sum is the sum of closures in finpre/alexandrov@3", componentwise_closure),
        ("E and its corollaries in finset@2 and finpre@2", factorization_of_sums),
        ("Sub(X+Y) biproducts at bound 3, hom/matrix round trips", biproduct),
        ("proper, compact and Hausdorff in finpre/alexandrov@2", proper_and_separated),
        ("closed alexandrov morphisms match the down-set oracle at bound 3", closed_morphism_oracle),
        ("full-suite structured reports are byte-identical", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match check() {
            Ok(r) => r,
            Err(e) => Err(format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name} ({secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.1} s): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
