//! Built-in graphs with published weight hierarchies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const PRISM_TEXT: &str = include_str!("../fixtures/prism.txt");
pub const PETERSEN_TEXT: &str = include_str!("../fixtures/petersen.txt");
pub const GOLDEN_JSON: &str = include_str!("../fixtures/golden.json");

/// Two triangles `{1,2,3}`, `{4,5,6}` joined by the matching `1-4, 2-6, 3-5`.
pub fn prism() -> Graph {
    Graph::parse_edge_list(PRISM_TEXT).expect("prism fixture parses")
}

pub fn petersen() -> Graph {
    Graph::parse_edge_list(PETERSEN_TEXT).expect("petersen fixture parses")
}

/// Looks up a built-in graph by name.
pub fn by_name(name: &str) -> Option<Graph> {
    match name {
        "prism" => Some(prism()),
        "petersen" => Some(petersen()),
        _ => None,
    }
}

/// Expected values for the built-in fixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenSet {
    pub fixtures: Vec<GoldenFixture>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenFixture {
    pub name: String,
    pub invariants: GoldenInvariants,
    pub tables: Vec<GoldenTable>,
}

/// `lambda`, `upsilon` at `r = 1`, and the edge biparticity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenInvariants {
    pub lambda: usize,
    pub upsilon: usize,
    pub phi: usize,
}

/// Weight hierarchies of the incidence code and its dual over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub p: u32,
    pub code: Vec<usize>,
    pub dual: Vec<usize>,
}

impl GoldenSet {
    pub fn builtin() -> Self {
        Self::from_json(GOLDEN_JSON).expect("golden fixture parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("golden set serializes")
    }

    /// Every scalar as a mutable reference, for corruption tests.
    pub fn values_mut(&mut self) -> Vec<&mut usize> {
        let mut out = Vec::new();
        for f in &mut self.fixtures {
            out.push(&mut f.invariants.lambda);
            out.push(&mut f.invariants.upsilon);
            out.push(&mut f.invariants.phi);
            for t in &mut f.tables {
                out.extend(t.code.iter_mut());
                out.extend(t.dual.iter_mut());
            }
        }
        out
    }
}
