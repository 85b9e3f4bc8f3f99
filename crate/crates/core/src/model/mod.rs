//! Decorated Kronrod-Reeb trees of surface pieces, the surface descriptor,
//! and parsing/validation of problem instances.

mod build;
mod canonical;
pub mod document;

use num_rational::BigRational;
use thiserror::Error;

pub use build::{parse_instance, piece_from_doc};
pub use canonical::{detect_symmetry, CanonicalCode};
pub use document::InstanceDoc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant `{invariant}` violated [{}]: {detail}", ids.join(", "))]
    InvariantViolation {
        invariant: &'static str,
        ids: Vec<String>,
        detail: String,
    },
    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),
}

impl ModelError {
    pub(crate) fn invariant(invariant: &'static str, ids: Vec<String>, detail: impl Into<String>) -> Self {
        ModelError::InvariantViolation { invariant, ids, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Line,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDescriptor {
    pub genus: u32,
    pub boundary_count: u32,
    pub orientable: bool,
    pub target: Target,
}

impl SurfaceDescriptor {
    /// Rejects non-orientable surfaces, the 2-sphere and the 2-torus.
    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.orientable {
            return Err(ModelError::UnsupportedSurface(
                "non-orientable surfaces are not covered; the surface must be orientable".into(),
            ));
        }
        match (self.genus, self.boundary_count) {
            (0, 0) => Err(ModelError::UnsupportedSurface(
                "the 2-sphere is excluded: the surface must be orientable and distinct from S^2 and T^2".into(),
            )),
            (1, 0) => Err(ModelError::UnsupportedSurface(
                "the 2-torus is excluded: the surface must be orientable and distinct from S^2 and T^2".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.boundary_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Disk,
    Cylinder,
}

impl PieceKind {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            PieceKind::Disk => 1,
            PieceKind::Cylinder => 0,
        }
    }

    pub fn boundary_vertices(self) -> usize {
        match self {
            PieceKind::Disk => 1,
            PieceKind::Cylinder => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtremumKind {
    Min,
    Max,
}

/// Rotational symmetry of an atom. Edge entries are indices into
/// [`DecoratedReebTree::edges`]; the rotation sends orbit position `i` to `i + 1 mod m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSymmetry {
    pub m: usize,
    pub invariant: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

impl AtomSymmetry {
    pub fn trivial(children: &[usize]) -> Self {
        AtomSymmetry { m: 1, invariant: children.to_vec(), orbits: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexKind {
    Boundary,
    Extremum(ExtremumKind),
    Atom {
        saddles: u32,
        symmetry: AtomSymmetry,
        cyclic_order: Option<Vec<usize>>,
    },
}

impl VertexKind {
    pub fn is_critical(&self) -> bool {
        !matches!(self, VertexKind::Boundary)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub f: BigRational,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
}

/// Rooted Kronrod-Reeb tree of a disk or cylinder piece. The root is the
/// distinguished boundary circle; every edge is oriented away from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedReebTree {
    kind: PieceKind,
    root: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    parent_edge: Vec<Option<usize>>,
    child_edges: Vec<Vec<usize>>,
}

impl DecoratedReebTree {
    pub fn kind(&self) -> PieceKind {
        self.kind
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.parent_edge[v]
    }

    /// Edges leading away from the root, in declaration order.
    pub fn child_edges(&self, v: usize) -> &[usize] {
        &self.child_edges[v]
    }

    /// Endpoint of `e` farther from the root.
    pub fn lower_end(&self, e: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if self.parent_edge[b] == Some(e) {
            b
        } else {
            a
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.child_edges[v].len() + usize::from(self.parent_edge[v].is_some())
    }

    /// Vertex reached from the root along its unique edge.
    pub fn root_neighbor(&self) -> usize {
        self.lower_end(self.child_edges[self.root][0])
    }

    /// Vertices of the subtree hanging at `v` (including `v`), in preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            for &e in self.child_edges[u].iter().rev() {
                stack.push(self.lower_end(e));
            }
        }
        out
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = self.subtree(self.root);
        order.reverse();
        order
    }

    pub fn atom_symmetry(&self, v: usize) -> Option<&AtomSymmetry> {
        match &self.vertices[v].kind {
            VertexKind::Atom { symmetry, .. } => Some(symmetry),
            _ => None,
        }
    }

    pub fn canonical_code(&self, v: usize) -> CanonicalCode {
        canonical::code_of(self, v)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.kind.euler_characteristic()
    }

    /// True when critical values are pairwise distinct and every atom
    /// carries exactly one saddle.
    pub fn is_generic(&self) -> bool {
        let mut values: Vec<&BigRational> = Vec::new();
        for v in &self.vertices {
            match &v.kind {
                VertexKind::Boundary => continue,
                VertexKind::Atom { saddles, .. } if *saddles != 1 => return false,
                _ => values.push(&v.f),
            }
        }
        values.sort();
        values.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub surface: SurfaceDescriptor,
    pub pieces: Vec<DecoratedReebTree>,
    /// Advisory findings, e.g. an Euler characteristic mismatch between the
    /// pieces and the surface.
    pub warnings: Vec<String>,
}

impl ProblemInstance {
    pub fn to_document(&self) -> InstanceDoc {
        build::instance_to_doc(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn from_document(doc: &InstanceDoc) -> Result<Self, ModelError> {
        build::instance_from_doc(doc)
    }
}
