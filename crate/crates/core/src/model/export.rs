use std::collections::BTreeMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::Model;

/// Adjacency lists keyed by carrier label.
pub type RelationDocument = BTreeMap<String, Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomDocument {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
}

/// JSON shape of a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelDocument {
    pub objects: Vec<String>,
    pub features: Vec<String>,
    /// object -> incident features
    pub incidence: RelationDocument,
    /// role index -> object -> features
    #[serde(rename = "box")]
    pub boxes: BTreeMap<String, RelationDocument>,
    /// role index -> feature -> objects
    #[serde(rename = "diamond")]
    pub diamonds: BTreeMap<String, RelationDocument>,
    pub atoms: BTreeMap<String, AtomDocument>,
}

fn labels(names: &[String], set: &FixedBitSet) -> Vec<String> {
    set.ones().map(|k| names[k].clone()).collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

impl Model {
    pub fn document(&self) -> ModelDocument {
        let p = self.polarity();
        let (objs, feats) = (p.objects(), p.features());
        let incidence = (0..objs.len())
            .map(|a| (objs[a].clone(), labels(feats, p.row(a))))
            .collect();
        let boxes = self
            .boxes()
            .iter()
            .map(|(i, r)| {
                let adj = (0..objs.len())
                    .filter(|&a| !r.of_object(a).is_clear())
                    .map(|a| (objs[a].clone(), labels(feats, r.of_object(a))))
                    .collect();
                (i.to_string(), adj)
            })
            .collect();
        let diamonds = self
            .diamonds()
            .iter()
            .map(|(i, r)| {
                let adj = (0..feats.len())
                    .filter(|&x| !r.of_feature(x).is_clear())
                    .map(|x| (feats[x].clone(), labels(objs, r.of_feature(x))))
                    .collect();
                (i.to_string(), adj)
            })
            .collect();
        let atoms = self
            .atoms()
            .iter()
            .map(|(n, e)| {
                let doc = AtomDocument {
                    extent: labels(objs, &e.extent),
                    intent: labels(feats, &e.intent),
                };
                (n.as_str().to_owned(), doc)
            })
            .collect();
        ModelDocument {
            objects: objs.to_vec(),
            features: feats.to_vec(),
            incidence,
            boxes,
            diamonds,
            atoms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("serializable")
    }

    /// The incidence matrix as CSV: one row per object, one column per
    /// feature, cells `0`/`1`.
    pub fn to_csv(&self) -> String {
        let p = self.polarity();
        let mut out = String::new();
        for f in p.features() {
            out.push(',');
            out.push_str(&csv_field(f));
        }
        out.push('\n');
        for (a, name) in p.objects().iter().enumerate() {
            out.push_str(&csv_field(name));
            for x in 0..p.num_features() {
                let _ = write!(out, ",{}", u8::from(p.incident(a, x)));
            }
            out.push('\n');
        }
        out
    }
}
