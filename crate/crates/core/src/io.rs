//! Versioned document envelopes for every value the CLI reads or writes.
//!
//! Serialization is canonical: payloads pass through `serde_json::Value`
//! (sorted map keys) and floats print as shortest round-trip decimals, so
//! save -> load -> save is byte-identical. Rationals travel as "p/q"
//! strings and never lose exactness.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::comb::CombDistribution;
use crate::coset_ring::CosetExpression;
use crate::detect::{CosetFit, PointCloud};
use crate::error::Error;
use crate::lattice::Lattice;
use crate::testfn::TestFunction;
use crate::Result;

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DocumentEnvelope {
    pub format_version: String,
    pub kind: String,
    pub payload: Value,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

/// A typed document, one variant per envelope kind.
#[derive(Clone, Debug)]
pub enum Document {
    Lattice(Lattice),
    CosetExpression(CosetExpression),
    Distribution(CombDistribution),
    TestFunction(TestFunction),
    PointCloud(PointCloud),
    Fit(CosetFit),
    Report(Value),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Lattice(_) => "lattice",
            Document::CosetExpression(_) => "coset_expression",
            Document::Distribution(_) => "distribution",
            Document::TestFunction(_) => "testfunction",
            Document::PointCloud(_) => "point_cloud",
            Document::Fit(_) => "fit",
            Document::Report(_) => "report",
        }
    }

    pub fn to_envelope(&self) -> DocumentEnvelope {
        let payload = match self {
            Document::Lattice(x) => serde_json::to_value(x),
            Document::CosetExpression(x) => serde_json::to_value(x),
            Document::Distribution(x) => serde_json::to_value(x),
            Document::TestFunction(x) => serde_json::to_value(x),
            Document::PointCloud(x) => serde_json::to_value(x),
            Document::Fit(x) => serde_json::to_value(x),
            Document::Report(x) => Ok(x.clone()),
        }
        .expect("document types serialize infallibly");
        DocumentEnvelope {
            format_version: FORMAT_VERSION.to_string(),
            kind: self.kind().to_string(),
            payload,
            meta: BTreeMap::new(),
        }
    }

    pub fn from_envelope(env: DocumentEnvelope) -> Result<Document> {
        if env.format_version != FORMAT_VERSION {
            return Err(Error::Document(format!(
                "unsupported format_version {:?} (expected {FORMAT_VERSION:?})",
                env.format_version
            )));
        }
        let payload = env.payload;
        let doc = match env.kind.as_str() {
            "lattice" => Document::Lattice(from_value(payload)?),
            "coset_expression" => Document::CosetExpression(from_value(payload)?),
            "distribution" => Document::Distribution(from_value(payload)?),
            "testfunction" => Document::TestFunction(from_value(payload)?),
            "point_cloud" => Document::PointCloud(from_value(payload)?),
            "fit" => Document::Fit(from_value(payload)?),
            "report" => Document::Report(payload),
            other => return Err(Error::Document(format!("unknown kind {other:?}"))),
        };
        Ok(doc)
    }

    /// Canonical single-line serialization (sorted keys, shortest floats).
    pub fn save_string(&self) -> String {
        serde_json::to_string(&self.to_envelope()).expect("canonical serialization")
    }

    pub fn load_str(s: &str) -> Result<Document> {
        let env: DocumentEnvelope =
            serde_json::from_str(s).map_err(|e| Error::Document(e.to_string()))?;
        Document::from_envelope(env)
    }

    pub fn save_to_path(&self, path: &Path) -> Result<()> {
        let mut s = self.save_string();
        s.push('\n');
        std::fs::write(path, s).map_err(|e| Error::Document(format!("write {path:?}: {e}")))
    }

    pub fn load_from_path(path: &Path) -> Result<Document> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::Document(format!("read {path:?}: {e}")))?;
        Self::load_str(&s)
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Document(e.to_string()))
}
