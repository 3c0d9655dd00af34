//! JSON instance and report documents.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use helly_core::cone::VectorSet;
use helly_core::rainbow::{ColoredSystem, RainbowSelection};
use helly_core::ratlin::{RationalEntry, RationalVector, Subspace};
use helly_core::reay::{DecompositionReport, ReayDecomposition};
use helly_core::verify::{Polyhedron, VerificationReport, Witness};
use helly_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Homogeneous,
    Polyhedral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronDoc {
    pub normals: Vec<RationalVector>,
    pub offsets: Vec<RationalEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub kind: InstanceKind,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub colors: Vec<Vec<RationalVector>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<Vec<PolyhedronDoc>>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

impl InstanceDocument {
    pub fn homogeneous(sys: &ColoredSystem, k: Option<usize>) -> Self {
        Self {
            kind: InstanceKind::Homogeneous,
            dimension: sys.ambient_dim(),
            k,
            colors: sys.colors().iter().map(|c| c.vectors().to_vec()).collect(),
            families: Vec::new(),
        }
    }

    pub fn polyhedral(d: usize, families: &[Vec<Polyhedron>], k: Option<usize>) -> Self {
        Self {
            kind: InstanceKind::Polyhedral,
            dimension: d,
            k,
            colors: Vec::new(),
            families: families
                .iter()
                .map(|f| f.iter().map(polyhedron_doc).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| bad(format!("malformed instance: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn system(&self) -> Result<ColoredSystem> {
        if self.kind != InstanceKind::Homogeneous {
            return Err(bad("expected a homogeneous instance"));
        }
        let colors = self
            .colors
            .iter()
            .map(|c| VectorSet::new(self.dimension, c.clone()))
            .collect::<Result<Vec<_>>>()?;
        ColoredSystem::new(self.dimension, colors)
    }

    /// Families of polyhedra; a homogeneous instance becomes halfspaces
    /// through the origin.
    pub fn families(&self) -> Result<Vec<Vec<Polyhedron>>> {
        match self.kind {
            InstanceKind::Homogeneous => Ok(helly_core::verify::lift_to_polyhedra(&self.system()?)),
            InstanceKind::Polyhedral => self
                .families
                .iter()
                .map(|f| {
                    f.iter()
                        .map(|p| {
                            Polyhedron::new(
                                self.dimension,
                                p.normals.clone(),
                                p.offsets.iter().map(|o| o.0.clone()).collect(),
                            )
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn polyhedron_doc(p: &Polyhedron) -> PolyhedronDoc {
    PolyhedronDoc {
        normals: p.normals().to_vec(),
        offsets: p.offsets().iter().cloned().map(RationalEntry).collect(),
    }
}

pub fn subspace_json(l: &Subspace) -> Value {
    json!({ "dimension": l.dim(), "basis": l.basis() })
}

pub fn picks_json(sel: &RainbowSelection, echo: impl Fn(usize, usize) -> Value) -> Value {
    Value::Array(
        sel.picks()
            .iter()
            .map(|&(c, i)| json!({ "color": c, "index": i, "item": echo(c, i) }))
            .collect(),
    )
}

/// The witness with every referenced vector or polyhedron echoed.
pub fn witness_json(w: &Witness, measure: &str, echo: impl Fn(usize, usize) -> Value) -> Value {
    match w {
        Witness::ViolatingSelection { selection, value } => json!({
            "type": "violating_selection",
            "measure": measure,
            "value": value,
            "picks": picks_json(selection, echo),
        }),
        Witness::ViolatingSubset { indices, value } => json!({
            "type": "violating_subset",
            "measure": measure,
            "value": value,
            "indices": indices,
            "items": indices.iter().map(|&i| echo(0, i)).collect::<Vec<_>>(),
        }),
        Witness::SatisfyingColor { color, value } => json!({
            "type": "satisfying_color",
            "measure": measure,
            "value": value,
            "color": color,
        }),
        Witness::AllColorsFail { values } => json!({
            "type": "all_colors_fail",
            "measure": measure,
            "values": values,
        }),
    }
}

pub fn verification_json(r: &VerificationReport, measure: &str, echo: impl Fn(usize, usize) -> Value) -> Value {
    json!({
        "verdict": r.verdict.name(),
        "witness": witness_json(&r.witness, measure, echo),
    })
}

pub fn decomposition_json(dec: &ReayDecomposition, sys: &ColoredSystem, check: &DecompositionReport) -> Value {
    let blocks: Vec<Value> = dec
        .blocks
        .iter()
        .zip(&dec.subspaces)
        .map(|(b, l)| {
            json!({
                "colors": b.colors(),
                "size": b.len(),
                "picks": picks_json(b, |c, i| json!(sys.vector(c, i))),
                "subspace": subspace_json(l),
            })
        })
        .collect();
    json!({
        "m": dec.m(),
        "block_sizes": dec.block_sizes(),
        "dims": dec.dims(),
        "blocks": blocks,
        "verification": {
            "passed": check.passed(),
            "violated_clause": check.violated.map(|c| c.name()),
            "dims": check.dims,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use helly_core::ratlin::ratio;

    #[test]
    fn instance_roundtrip() {
        let text = r#"{"kind":"homogeneous","dimension":2,"k":1,"colors":[[["1","-1/2"],[0,3]],[["2/4","0"]]]}"#;
        let doc = InstanceDocument::parse(text).unwrap();
        assert_eq!(doc.colors[0][0][1], ratio(-1, 2));
        assert_eq!(doc.colors[1][0][0], ratio(1, 2));
        let again = InstanceDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
        assert!(doc.to_json().contains("\"1/2\""));
    }

    #[test]
    fn polyhedral_roundtrip() {
        let text = r#"{"kind":"polyhedral","dimension":1,"families":[[{"normals":[[1]],"offsets":["3/2"]}]]}"#;
        let doc = InstanceDocument::parse(text).unwrap();
        let fams = doc.families().unwrap();
        assert_eq!(fams[0][0].offsets()[0], ratio(3, 2));
        let back = InstanceDocument::polyhedral(1, &fams, None);
        assert_eq!(back, doc);
        assert!(doc.system().is_err());
    }

    #[test]
    fn malformed_documents() {
        assert!(InstanceDocument::parse("{").is_err());
        assert!(InstanceDocument::parse(r#"{"kind":"homogeneous","dimension":1,"colors":[[["1/0"]]]}"#).is_err());
        let ragged = InstanceDocument::parse(r#"{"kind":"homogeneous","dimension":2,"colors":[[["1"]]]}"#).unwrap();
        assert!(ragged.system().is_err());
    }
}
