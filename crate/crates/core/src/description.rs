//! Object description files.
//!
//! ```json
//! { "objects": [
//!     { "name": "S", "carrier": ["a", "b"], "order": [["a", "b"]] },
//!     { "name": "E", "carrier": [] }
//! ] }
//! ```
//!
//! `order` lists pairs `lo <= hi`; reflexive pairs are implied. An object
//! without `order` is a plain set. Transitivity is not completed
//! automatically: a missing composite pair is reported.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::object::{FiniteObject, Obj, Preorder};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptionFile {
    objects: Vec<ObjectEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectEntry {
    name: String,
    carrier: Vec<String>,
    #[serde(default)]
    order: Option<Vec<(String, String)>>,
}

impl ObjectEntry {
    fn build(self) -> Result<Obj> {
        let name = self.name;
        let context = |e: Error| Error::Description(format!("object `{name}`: {e}"));
        let order = match &self.order {
            None => None,
            Some(pairs) => {
                let idx = |l: &str| {
                    self.carrier
                        .iter()
                        .position(|c| c == l)
                        .ok_or_else(|| Error::UnknownLabel(l.to_string()))
                };
                let mut ix = Vec::with_capacity(pairs.len());
                for (lo, hi) in pairs {
                    ix.push((idx(lo).map_err(context)?, idx(hi).map_err(context)?));
                }
                Some(Preorder::from_pairs(self.carrier.len(), ix))
            }
        };
        FiniteObject::new(name.clone(), self.carrier, order)
            .map(Arc::new)
            .map_err(context)
    }
}

/// Parses a description document.
pub fn parse_objects(text: &str) -> Result<Vec<Obj>> {
    let file: DescriptionFile = serde_json::from_str(text).map_err(|e| Error::Description(e.to_string()))?;
    file.objects.into_iter().map(ObjectEntry::build).collect()
}

/// Reads and validates a description file.
pub fn load_objects(path: &Path) -> Result<Vec<Obj>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Description(format!("{}: {e}", path.display())))?;
    parse_objects(&text).map_err(|e| Error::Description(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::Flavour;

    #[test]
    fn sierpinski_file() {
        let objs = parse_objects(r#"{"objects":[{"name":"S","carrier":["a","b"],"order":[["a","b"]]}]}"#).unwrap();
        assert_eq!(objs.len(), 1);
        assert_eq!(*objs[0], *FiniteObject::sierpinski());
    }

    #[test]
    fn empty_carrier_is_initial() {
        let objs = parse_objects(r#"{"objects":[{"name":"E","carrier":[]}]}"#).unwrap();
        assert!(objs[0].is_empty());
        assert_eq!(objs[0].flavour(), Flavour::Set);
    }

    #[test]
    fn missing_transitive_pair_named() {
        let err = parse_objects(
            r#"{"objects":[{"name":"C","carrier":["a","b","c"],"order":[["a","b"],["b","c"]]}]}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(a, c) missing"), "{msg}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_objects("{\"objects\":[{\"name\":\"X\"}]}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("carrier") && msg.contains("line 1"), "{msg}");
        let err = parse_objects(r#"{"objects":[{"name":"X","carrier":["a"],"order":[["a","z"]]}]}"#).unwrap_err();
        assert!(err.to_string().contains("`z`"));
    }
}
