//! Batch runs: pick a context, closure families, bounds and checkers, and
//! collect everything into one report.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::closure::{validate_family, ClosureFamily};
use crate::context::{validate_extensive, Context};
use crate::error::{Error, Result};
use crate::factorization::validate_system;
use crate::report::{Check, Report, Witness};
use crate::semilattice::{all_homs, hom_matrix, matrix_to_hom, Biproduct, BiproductData, HomMatrix};
use crate::subobject::{check_adjunction_admissible, SubobjectLattice};
use crate::theorems::{run_checker, uses_family, Status, Verdict, THEOREMS};

/// Validators and checkers the runner knows, in run order.
pub const KNOWN_IDS: [&str; 11] = ["validate", "adjunctions", "biproduct", "A", "B", "C", "D", "E", "F", "G", "H"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub context: String,
    /// Empty means every family registered for the context.
    pub families: Vec<String>,
    pub bound: usize,
    /// Bound for checker E; defaults to `min(bound, 2)`.
    pub e_bound: Option<usize>,
    /// Bound for checkers G and H and their test spaces; defaults to `min(bound, 2)`.
    pub proper_bound: Option<usize>,
    /// Ids from [`KNOWN_IDS`], or `"all"`.
    pub theorems: Vec<String>,
    pub objects: Option<PathBuf>,
    pub format: Format,
    /// Include wall-clock timings in the structured report.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            context: "finpre".into(),
            families: Vec::new(),
            bound: 3,
            e_bound: None,
            proper_bound: None,
            theorems: vec!["all".into()],
            objects: None,
            format: Format::Text,
            timings: false,
        }
    }
}

/// The configuration after defaults and validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub context: String,
    pub families: Vec<ClosureFamily>,
    pub bound: usize,
    pub e_bound: usize,
    pub proper_bound: usize,
    pub theorems: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objects: Option<String>,
}

fn check_bound(b: usize) -> Result<usize> {
    if (1..=crate::MAX_BOUND).contains(&b) {
        Ok(b)
    } else {
        Err(Error::BoundOutOfRange(b))
    }
}

impl RunConfig {
    /// Validates names and bounds and loads extra objects.
    pub fn resolve(&self) -> Result<(ResolvedConfig, Context)> {
        let mut ctx = Context::builtin(&self.context)?;
        let bound = check_bound(self.bound)?;
        let e_bound = check_bound(self.e_bound.unwrap_or(bound.min(2)))?;
        let proper_bound = check_bound(self.proper_bound.unwrap_or(bound.min(2)))?;
        let mut families = Vec::new();
        for name in &self.families {
            let f = ctx.family(name)?;
            if !families.contains(&f) {
                families.push(f);
            }
        }
        if families.is_empty() {
            families = ctx.families().to_vec();
        }
        let mut wanted = BTreeSet::new();
        for t in &self.theorems {
            if t == "all" {
                wanted.extend(KNOWN_IDS);
            } else if let Some(id) = KNOWN_IDS.iter().find(|k| **k == t) {
                wanted.insert(*id);
            } else {
                return Err(Error::UnknownTheorem(t.clone()));
            }
        }
        if wanted.is_empty() {
            wanted.extend(KNOWN_IDS);
        }
        let theorems = KNOWN_IDS.iter().filter(|k| wanted.contains(*k)).map(|k| k.to_string()).collect();
        if let Some(path) = &self.objects {
            ctx = ctx.with_objects(crate::description::load_objects(path)?)?;
        }
        let resolved = ResolvedConfig {
            context: ctx.name().to_string(),
            families,
            bound,
            e_bound,
            proper_bound,
            theorems,
            objects: self.objects.as_ref().map(|p| p.display().to_string()),
        };
        Ok((resolved, ctx))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Outcome {
    Verdict(Verdict),
    Validation(Report),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<ClosureFamily>,
    pub bound: usize,
    pub passed: bool,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Entry {
    /// Gated verdicts neither pass nor fail a run.
    fn counts(&self) -> bool {
        !matches!(&self.outcome, Outcome::Verdict(v) if v.status == Status::HypothesisFailed)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ResolvedConfig,
    pub entries: Vec<Entry>,
    pub passed: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Structured => self.to_json(),
        }
    }

    pub fn entry(&self, id: &str, family: Option<ClosureFamily>) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id && e.family == family)
    }
}

/// Runs every selected validator and checker.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let (resolved, ctx) = config.resolve()?;
    let mut entries = Vec::new();
    for id in &resolved.theorems {
        let families: Vec<Option<ClosureFamily>> = if is_family_checker(id) {
            resolved.families.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for fam in families {
            let start = Instant::now();
            let (bound, outcome) = run_one(id, &ctx, fam, &resolved)?;
            let elapsed = start.elapsed();
            let passed = match &outcome {
                Outcome::Verdict(v) => v.equivalence_ok.unwrap_or(true),
                Outcome::Validation(r) => r.passed(),
            };
            entries.push(Entry {
                id: id.clone(),
                family: fam,
                bound,
                passed,
                outcome,
                millis: config.timings.then_some(elapsed.as_millis()),
                elapsed,
            });
        }
    }
    let passed = entries.iter().filter(|e| e.counts()).all(|e| e.passed);
    Ok(RunReport {
        config: resolved,
        entries,
        passed,
    })
}

fn is_family_checker(id: &str) -> bool {
    THEOREMS.contains(&id) && uses_family(id)
}

fn run_one(id: &str, ctx: &Context, fam: Option<ClosureFamily>, cfg: &ResolvedConfig) -> Result<(usize, Outcome)> {
    let bound = match id {
        "E" => cfg.e_bound,
        "G" | "H" => cfg.proper_bound,
        _ => cfg.bound,
    };
    let outcome = match id {
        "validate" => Outcome::Validation(validate_all(ctx, &cfg.families, bound)),
        "adjunctions" => Outcome::Validation(adjunctions(ctx, bound)?),
        "biproduct" => Outcome::Validation(biproducts(ctx, &cfg.families, bound)?),
        _ => {
            let fam = fam.unwrap_or(ClosureFamily::Identity);
            Outcome::Verdict(run_checker(id, ctx, fam, bound)?)
        }
    };
    Ok((bound, outcome))
}

fn absorb(into: &mut Report, prefix: &str, from: Report) {
    for mut c in from.checks {
        c.id = format!("{prefix}{}", c.id);
        match into.checks.iter_mut().find(|d| d.id == c.id) {
            Some(d) => d.merge(c),
            None => into.checks.push(c),
        }
    }
}

/// Extensivity, the factorization system and each closure family.
pub fn validate_all(ctx: &Context, families: &[ClosureFamily], bound: usize) -> Report {
    let objs = ctx.objects(bound);
    let mut r = Report::new(format!("validation of {} at bound {bound}", ctx.name()));
    absorb(&mut r, "extensive/", validate_extensive(ctx, bound));
    absorb(&mut r, "factorization/", validate_system(ctx.system(), &objs));
    for &fam in families {
        absorb(&mut r, &format!("closure/{fam}/"), validate_family(fam, &objs));
    }
    r
}

/// Lattice laws of every `Sub(X)` and the adjunction between `Sub(X) × Sub(Y)` and `Sub(X+Y)`.
pub fn adjunctions(ctx: &Context, bound: usize) -> Result<Report> {
    let objs = ctx.objects(bound);
    let mut r = Report::new(format!("subobject lattices of {} at bound {bound}", ctx.name()));
    for x in &objs {
        absorb(&mut r, "lattice/", SubobjectLattice::enumerate(ctx.system(), x)?.validate());
    }
    for x in &objs {
        for y in &objs {
            absorb(&mut r, "", check_adjunction_admissible(ctx.system(), x, y)?);
        }
    }
    Ok(r)
}

/// `Sub(X+Y)` and, where sums of closed embeddings are closed embeddings,
/// the closed lattices, as biproducts; plus the hom/matrix round trip on
/// all homomorphisms for summands of at most two points.
pub fn biproducts(ctx: &Context, families: &[ClosureFamily], bound: usize) -> Result<Report> {
    let sys = ctx.system();
    let objs = ctx.objects(bound);
    let mut r = Report::new(format!("biproducts in {} at bound {bound}", ctx.name()));
    let mut verified = Vec::new();
    for x in &objs {
        for y in &objs {
            let cop = ctx.coproduct(x, y)?;
            let data = BiproductData::subobjects(sys, &cop)?;
            let rep = crate::semilattice::verify_biproduct(&data)?;
            let ok = rep.passed();
            absorb(&mut r, "sub/", rep);
            if ok && x.len() <= 2 && y.len() <= 2 {
                verified.push(Biproduct::verify(data)?);
            }
        }
    }
    for &fam in families {
        let verdict = run_checker("B", ctx, fam, bound)?;
        let sums_closed = verdict.sides[0].passed;
        let mut c = Check::new(format!("closed/{fam}/biproduct-when-closed-embeddings-sum"));
        for x in &objs {
            for y in &objs {
                let cop = ctx.coproduct(x, y)?;
                let data = BiproductData::closed(sys, &cop, &fam.space(x), &fam.space(y), &fam.space(&cop.object));
                let holds = match data {
                    Ok(d) => crate::semilattice::verify_biproduct(&d)?.passed(),
                    Err(_) => false,
                };
                // a biproduct of closed lattices is only asserted when closed embeddings sum
                c.record(!sums_closed || holds, || {
                    Witness::new("closed lattices are not a biproduct").object(x).object(y)
                });
            }
        }
        r.push(c);
    }
    // one representative per shape of (K_X, K_Y)
    let mut reps: Vec<&Biproduct> = Vec::new();
    for b in &verified {
        let dup = reps.iter().any(|o| {
            o.data().kx().same_shape(b.data().kx()) && o.data().ky().same_shape(b.data().ky())
        });
        if !dup {
            reps.push(b);
        }
    }
    let mut to_matrix = Check::new("matrix/hom-matrix-hom");
    let mut to_hom = Check::new("matrix/matrix-hom-matrix");
    for src in &reps {
        for tgt in &reps {
            for h in all_homs(src.data().kxy(), tgt.data().kxy()) {
                let m = hom_matrix(&h, src, tgt)?;
                let back = matrix_to_hom(&m, src, tgt)?;
                to_matrix.record(back == h, || Witness::new(format!("round trip changed {h}")));
            }
            let entry_homs = |i: usize, j: usize| {
                let s = if j == 0 { src.data().kx() } else { src.data().ky() };
                let t = if i == 0 { tgt.data().kx() } else { tgt.data().ky() };
                all_homs(s, t)
            };
            let (h00, h01, h10, h11) = (entry_homs(0, 0), entry_homs(0, 1), entry_homs(1, 0), entry_homs(1, 1));
            for a in &h00 {
                for b in &h01 {
                    for c in &h10 {
                        for d in &h11 {
                            let m = HomMatrix {
                                entries: [[a.clone(), b.clone()], [c.clone(), d.clone()]],
                            };
                            let back = hom_matrix(&matrix_to_hom(&m, src, tgt)?, src, tgt)?;
                            to_hom.record(back == m, || Witness::new("matrix round trip changed an entry"));
                        }
                    }
                }
            }
        }
    }
    r.push(to_matrix);
    r.push(to_hom);
    Ok(r)
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let fams: Vec<&str> = c.families.iter().map(|f| f.name()).collect();
        writeln!(
            f,
            "context {} | families {} | bound {} (E {}, G/H {})",
            c.context,
            fams.join(","),
            c.bound,
            c.e_bound,
            c.proper_bound
        )?;
        for e in &self.entries {
            let fam = e.family.map(|f| format!(" [{f}]")).unwrap_or_default();
            let ms = e.elapsed.as_secs_f64() * 1000.0;
            match &e.outcome {
                Outcome::Verdict(v) => {
                    let status = match v.status {
                        Status::Confirmed => "confirmed",
                        Status::Refuted => "REFUTED",
                        Status::HypothesisFailed => "hypothesis-failed",
                    };
                    writeln!(f, "{}{fam} @{}: {status} ({ms:.0} ms)", e.id, e.bound)?;
                    if let Some(h) = &v.hypothesis {
                        if !h.passed {
                            write_check(f, "hypothesis", h)?;
                        }
                    }
                    for s in &v.sides {
                        write_check(f, "side", s)?;
                    }
                    for s in &v.claims {
                        write_check(f, "claim", s)?;
                    }
                }
                Outcome::Validation(r) => {
                    let status = if r.passed() { "pass" } else { "FAIL" };
                    writeln!(f, "{}{fam} @{}: {status} ({ms:.0} ms)", e.id, e.bound)?;
                    for c in r.checks.iter().filter(|c| !c.passed) {
                        write_check(f, "check", c)?;
                    }
                }
            }
        }
        writeln!(f, "overall: {}", if self.passed { "pass" } else { "FAIL" })
    }
}

fn write_check(f: &mut fmt::Formatter<'_>, kind: &str, c: &Check) -> fmt::Result {
    write!(f, "    {kind} {} = {} ({} cases)", c.id, c.passed, c.cases)?;
    if let Some(w) = &c.witness {
        write!(f, "; witness: {w}")?;
    }
    writeln!(f)
}
