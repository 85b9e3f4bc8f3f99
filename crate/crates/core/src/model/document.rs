//! Serde mirror of the input document. Unknown fields are rejected everywhere.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub surface: SurfaceDoc,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub genus: u32,
    pub boundary: u32,
    pub orientable: bool,
    pub target: TargetDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetDoc {
    Line,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKindDoc {
    Disk,
    Cylinder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub kind: PieceKindDoc,
    pub root: String,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexTypeDoc {
    Boundary,
    Extremum,
    Atom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumDoc {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: VertexTypeDoc,
    /// Exact rational written as a string, e.g. `"3/2"`.
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saddles: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremum: Option<ExtremumDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic_order: Option<Vec<String>>,
}

/// Either an explicit declaration or the keyword `"auto"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymmetryDoc {
    Explicit(ExplicitSymmetryDoc),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSymmetryDoc {
    pub m: u32,
    #[serde(default)]
    pub invariant: Vec<String>,
    #[serde(default)]
    pub orbits: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
}

impl VertexDoc {
    pub fn boundary(id: impl Into<String>, f: impl Into<String>) -> Self {
        VertexDoc {
            id: id.into(),
            kind: VertexTypeDoc::Boundary,
            f: f.into(),
            saddles: None,
            extremum: None,
            symmetry: None,
            cyclic_order: None,
        }
    }

    pub fn extremum(id: impl Into<String>, f: impl Into<String>, kind: ExtremumDoc) -> Self {
        VertexDoc {
            extremum: Some(kind),
            kind: VertexTypeDoc::Extremum,
            ..VertexDoc::boundary(id, f)
        }
    }

    pub fn atom(
        id: impl Into<String>,
        f: impl Into<String>,
        saddles: u32,
        symmetry: Option<SymmetryDoc>,
    ) -> Self {
        VertexDoc {
            saddles: Some(saddles),
            symmetry,
            kind: VertexTypeDoc::Atom,
            ..VertexDoc::boundary(id, f)
        }
    }
}

impl EdgeDoc {
    pub fn new(id: impl Into<String>, from: impl Into<String>, to: impl Into<String>) -> Self {
        EdgeDoc { id: id.into(), from: from.into(), to: to.into() }
    }
}
