//! Validator reports and serializable witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::object::{bits, FiniteObject, Mask, Obj, Preorder};

/// Serialized object: carrier labels and strict order pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectDesc {
    pub name: String,
    pub carrier: Vec<String>,
    /// `true` for preorder-flavoured objects, even when no strict pair exists.
    #[serde(default)]
    pub ordered: bool,
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

impl From<&FiniteObject> for ObjectDesc {
    fn from(x: &FiniteObject) -> Self {
        ObjectDesc {
            name: x.name().to_string(),
            carrier: x.labels().to_vec(),
            ordered: x.order().is_some(),
            order: x.strict_pairs(),
        }
    }
}

impl ObjectDesc {
    /// Rebuilds the object; reflexive pairs are implied, transitivity is checked.
    pub fn to_object(&self) -> Result<Obj> {
        let n = self.carrier.len();
        let idx = |l: &str| {
            self.carrier
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let order = if self.ordered || !self.order.is_empty() {
            let mut pairs = Vec::with_capacity(self.order.len());
            for (a, b) in &self.order {
                pairs.push((idx(a)?, idx(b)?));
            }
            Some(Preorder::from_pairs(n, pairs))
        } else {
            None
        };
        FiniteObject::new(self.name.clone(), self.carrier.clone(), order).map(std::sync::Arc::new)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDesc {
    pub source: ObjectDesc,
    pub target: ObjectDesc,
    pub table: Vec<(String, String)>,
}

impl From<&Morphism> for MorphismDesc {
    fn from(f: &Morphism) -> Self {
        MorphismDesc {
            source: f.source().as_ref().into(),
            target: f.target().as_ref().into(),
            table: f.label_table(),
        }
    }
}

impl MorphismDesc {
    pub fn to_morphism(&self) -> Result<Morphism> {
        let s = self.source.to_object()?;
        let t = self.target.to_object()?;
        let table: Vec<(&str, &str)> = self
            .table
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Morphism::from_labels(s, t, &table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubobjectDesc {
    pub ambient: ObjectDesc,
    pub elements: Vec<String>,
}

impl SubobjectDesc {
    pub fn new(ambient: &FiniteObject, mask: Mask) -> Self {
        SubobjectDesc {
            ambient: ambient.into(),
            elements: bits(mask).map(|i| ambient.label(i).to_string()).collect(),
        }
    }

    pub fn to_mask(&self, ambient: &FiniteObject) -> Result<Mask> {
        let mut m = 0;
        for e in &self.elements {
            let i = ambient
                .index_of(e)
                .ok_or_else(|| Error::UnknownLabel(e.clone()))?;
            m |= 1 << i;
        }
        Ok(m)
    }
}

/// A concrete instance backing a check outcome.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub note: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<ObjectDesc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDesc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subobjects: Vec<SubobjectDesc>,
}

impl Witness {
    pub fn new(note: impl Into<String>) -> Self {
        Witness {
            note: note.into(),
            ..Default::default()
        }
    }

    pub fn object(mut self, x: &FiniteObject) -> Self {
        self.objects.push(x.into());
        self
    }

    pub fn morphism(mut self, f: &Morphism) -> Self {
        self.morphisms.push(f.into());
        self
    }

    pub fn subobject(mut self, ambient: &FiniteObject, mask: Mask) -> Self {
        self.subobjects.push(SubobjectDesc::new(ambient, mask));
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.note)?;
        for m in &self.morphisms {
            let t: Vec<String> = m.table.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            write!(f, "; {} -> {} [{}]", m.source.name, m.target.name, t.join(", "))?;
        }
        for s in &self.subobjects {
            write!(f, "; {{{}}} in {}", s.elements.join(","), s.ambient.name)?;
        }
        Ok(())
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    /// Number of instances examined.
    pub cases: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(id: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            passed: true,
            cases: 0,
            witness: None,
        }
    }

    /// Records one instance; keeps the first failure as the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.record(false, || witness);
    }

    /// Combines per-shard results in order; the earliest failure wins.
    pub fn merge(&mut self, other: Check) {
        self.cases += other.cases;
        if self.passed && !other.passed {
            self.passed = false;
            self.witness = other.witness;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "  [{mark}] {} ({} cases)", c.id, c.cases)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs `f` over `items` in parallel and merges per-item checks in input order.
pub(crate) fn par_checks<T: Sync>(
    items: &[T],
    ids: &[&str],
    f: impl Fn(&T, &mut [Check]) + Sync,
) -> Vec<Check> {
    use rayon::prelude::*;
    let shards: Vec<Vec<Check>> = items
        .par_iter()
        .map(|item| {
            let mut cs: Vec<Check> = ids.iter().map(|id| Check::new(*id)).collect();
            f(item, &mut cs);
            cs
        })
        .collect();
    let mut out: Vec<Check> = ids.iter().map(|id| Check::new(*id)).collect();
    for shard in shards {
        for (o, c) in out.iter_mut().zip(shard) {
            o.merge(c);
        }
    }
    out
}
