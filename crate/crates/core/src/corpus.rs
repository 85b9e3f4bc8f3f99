//! Programmatic instance builder, a catalogue of small trees covering every
//! recursion case, and a seeded generator of generic trees.

use rand::Rng;

use crate::model::document::{
    EdgeDoc, ExplicitSymmetryDoc, ExtremumDoc, InstanceDoc, PieceDoc, PieceKindDoc, SurfaceDoc, SymmetryDoc,
    TargetDoc, VertexDoc,
};
use crate::model::{ModelError, ProblemInstance};

/// Symmetry declaration of an atom; indices refer to its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sym {
    Absent,
    Auto,
    Explicit { m: u32, invariant: Vec<usize>, orbits: Vec<Vec<usize>> },
}

/// Subtree below an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Max(i64),
    Min(i64),
    /// far boundary circle of a cylinder
    Boundary(i64),
    Atom { f: i64, saddles: u32, sym: Sym, children: Vec<Node> },
}

pub fn max(f: i64) -> Node {
    Node::Max(f)
}

pub fn min(f: i64) -> Node {
    Node::Min(f)
}

pub fn boundary(f: i64) -> Node {
    Node::Boundary(f)
}

fn saddles_for(children: &[Node]) -> u32 {
    children.len().saturating_sub(1).max(1) as u32
}

/// Atom with no declared symmetry and as many saddles as the Euler count
/// requires.
pub fn atom(f: i64, children: Vec<Node>) -> Node {
    Node::Atom { f, saddles: saddles_for(&children), sym: Sym::Absent, children }
}

/// Atom whose symmetry is detected from the children in the given cyclic order.
pub fn auto(f: i64, children: Vec<Node>) -> Node {
    Node::Atom { f, saddles: saddles_for(&children), sym: Sym::Auto, children }
}

pub fn sym(f: i64, m: u32, invariant: Vec<usize>, orbits: Vec<Vec<usize>>, children: Vec<Node>) -> Node {
    Node::Atom { f, saddles: saddles_for(&children), sym: Sym::Explicit { m, invariant, orbits }, children }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceSpec {
    pub kind: PieceKindDoc,
    pub root_f: i64,
    pub child: Node,
}

pub fn disk(root_f: i64, child: Node) -> PieceSpec {
    PieceSpec { kind: PieceKindDoc::Disk, root_f, child }
}

pub fn cylinder(root_f: i64, child: Node) -> PieceSpec {
    PieceSpec { kind: PieceKindDoc::Cylinder, root_f, child }
}

struct Emitter {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

impl Emitter {
    fn vertex_id(&self) -> String {
        format!("v{}", self.vertices.len())
    }

    /// Emits `node` below `parent` and returns the id of the connecting edge.
    fn emit(&mut self, parent: &str, node: &Node) -> String {
        let id = self.vertex_id();
        let edge = format!("e{}", self.edges.len());
        self.edges.push(EdgeDoc::new(edge.clone(), parent, id.clone()));
        match node {
            Node::Max(f) => self.vertices.push(VertexDoc::extremum(id, f.to_string(), ExtremumDoc::Max)),
            Node::Min(f) => self.vertices.push(VertexDoc::extremum(id, f.to_string(), ExtremumDoc::Min)),
            Node::Boundary(f) => self.vertices.push(VertexDoc::boundary(id, f.to_string())),
            Node::Atom { f, saddles, sym, children } => {
                let slot = self.vertices.len();
                self.vertices.push(VertexDoc::atom(id.clone(), f.to_string(), *saddles, None));
                let child_edges: Vec<String> = children.iter().map(|c| self.emit(&id, c)).collect();
                let pick = |idx: &[usize]| idx.iter().map(|&i| child_edges[i].clone()).collect::<Vec<_>>();
                let v = &mut self.vertices[slot];
                match sym {
                    Sym::Absent => {}
                    Sym::Auto => {
                        v.symmetry = Some(SymmetryDoc::Keyword("auto".into()));
                        v.cyclic_order = Some(child_edges.clone());
                    }
                    Sym::Explicit { m, invariant, orbits } => {
                        v.symmetry = Some(SymmetryDoc::Explicit(ExplicitSymmetryDoc {
                            m: *m,
                            invariant: pick(invariant),
                            orbits: orbits.iter().map(|o| pick(o)).collect(),
                        }));
                    }
                }
            }
        }
        edge
    }
}

pub fn piece_doc(spec: &PieceSpec) -> PieceDoc {
    let mut em = Emitter { vertices: vec![VertexDoc::boundary("v0", spec.root_f.to_string())], edges: Vec::new() };
    em.emit("v0", &spec.child);
    PieceDoc { kind: spec.kind, root: "v0".into(), vertices: em.vertices, edges: em.edges }
}

/// Document for the given pieces on a genus-0 surface with one boundary
/// circle per boundary vertex.
pub fn instance_doc(pieces: &[PieceSpec]) -> InstanceDoc {
    let boundary = pieces
        .iter()
        .map(|p| match p.kind {
            PieceKindDoc::Disk => 1,
            PieceKindDoc::Cylinder => 2,
        })
        .sum();
    InstanceDoc {
        surface: SurfaceDoc { genus: 0, boundary, orientable: true, target: TargetDoc::Line },
        pieces: pieces.iter().map(piece_doc).collect(),
    }
}

pub fn instance(pieces: &[PieceSpec]) -> Result<ProblemInstance, ModelError> {
    ProblemInstance::from_document(&instance_doc(pieces))
}

fn leaves(f: i64, n: usize) -> Vec<Node> {
    vec![max(f); n]
}

/// Small named trees (at most 12 vertices per piece) spanning both leaf
/// cases, atoms with and without rotation, `m` in `{2, 3}` and nesting of
/// depth two and three.
pub fn small_corpus() -> Vec<(&'static str, Vec<PieceSpec>)> {
    let pair_m2 = |f: i64, g: i64| auto(f, leaves(g, 2));
    let triple_m3 = |f: i64, g: i64| auto(f, leaves(g, 3));
    let distinct = |f: i64| atom(f, vec![max(f + 1), max(f + 2)]);
    vec![
        ("disk-extremum", vec![disk(0, max(1))]),
        ("disk-minimum", vec![disk(5, min(1))]),
        ("cylinder-plain", vec![cylinder(0, boundary(1))]),
        ("tree-a", vec![disk(0, pair_m2(1, 2))]),
        ("tree-b", vec![disk(0, atom(1, vec![max(2), max(3)]))]),
        ("star3-equal", vec![disk(0, triple_m3(1, 2))]),
        ("star3-distinct", vec![disk(0, atom(1, vec![max(2), max(3), max(4)]))]),
        ("star4-equal", vec![disk(0, auto(1, leaves(2, 4)))]),
        ("star4-abab", vec![disk(0, auto(1, vec![max(2), max(3), max(2), max(3)]))]),
        ("star5-aabab", vec![disk(0, auto(1, vec![max(2), max(2), max(3), max(2), max(3)]))]),
        ("star6-equal", vec![disk(0, auto(1, leaves(2, 6)))]),
        ("star6-abcabc", vec![disk(0, auto(1, vec![max(2), max(3), max(4), max(2), max(3), max(4)]))]),
        ("minima-pair", vec![disk(5, auto(3, vec![min(1), min(1)]))]),
        ("mixed-m2", vec![disk(0, sym(1, 2, vec![2], vec![vec![0, 1]], vec![max(2), max(2), max(3)]))]),
        ("mixed-m3", vec![disk(0, sym(1, 3, vec![3], vec![vec![0, 1, 2]], vec![max(2), max(2), max(2), pair_m2(2, 3)]))]),
        ("invariant-pair-beside-orbit", vec![disk(0, sym(1, 2, vec![0], vec![vec![1, 2]], vec![pair_m2(2, 3), max(2), max(2)]))]),
        ("wreath-m2-m2", vec![disk(0, auto(1, vec![pair_m2(2, 3), pair_m2(2, 3)]))]),
        ("wreath-m2-m3", vec![disk(0, auto(1, vec![triple_m3(2, 3), triple_m3(2, 3)]))]),
        ("wreath-m3-m2", vec![disk(0, auto(1, vec![pair_m2(2, 3), pair_m2(2, 3), pair_m2(2, 3)]))]),
        ("invariant-over-rotation", vec![disk(0, atom(1, vec![pair_m2(2, 3), max(4)]))]),
        ("rotation-over-invariant", vec![disk(0, auto(1, vec![distinct(2), distinct(2)]))]),
        ("rotation-m3-over-invariant", vec![disk(0, auto(1, vec![distinct(2), distinct(2), distinct(2)]))]),
        ("two-orbits-of-subtrees", vec![disk(0, auto(1, vec![max(2), distinct(2), max(2), distinct(2)]))]),
        ("equal-children-undeclared", vec![disk(0, atom(1, vec![pair_m2(2, 3), pair_m2(2, 3)]))]),
        ("depth3-chain", vec![disk(0, atom(1, vec![max(2), atom(3, vec![max(4), max(5)])]))]),
        ("depth3-wreath", vec![disk(0, atom(1, vec![auto(2, vec![pair_m2(3, 4), pair_m2(3, 4)]), max(9)]))]),
        ("cylinder-atom", vec![cylinder(0, atom(1, vec![boundary(2), max(3)]))]),
        ("cylinder-rotation", vec![cylinder(0, atom(1, vec![boundary(2), pair_m2(3, 4)]))]),
        ("cylinder-mixed", vec![cylinder(0, sym(1, 2, vec![0], vec![vec![1, 2]], vec![boundary(5), max(2), max(2)]))]),
        ("cylinder-orbit-subtrees", vec![cylinder(0, sym(1, 2, vec![0], vec![vec![1, 2]], vec![boundary(9), distinct(2), distinct(2)]))]),
        ("two-pieces", vec![disk(0, pair_m2(1, 2)), disk(0, atom(1, vec![max(2), max(3)]))]),
        ("three-pieces", vec![disk(0, triple_m3(1, 2)), cylinder(0, boundary(1)), disk(0, max(1))]),
    ]
}

/// Random generic piece: binary single-saddle atoms with pairwise distinct
/// values, at most `max_vertices` vertices. About one in four pieces is a
/// cylinder.
pub fn random_generic_piece(rng: &mut impl Rng, max_vertices: usize) -> PieceSpec {
    let atoms_max = max_vertices.saturating_sub(2) / 2;
    let atoms = rng.gen_range(0..=atoms_max);
    let cylinder_piece = rng.gen_bool(0.25);
    let mut counter = 0i64;
    let mut next = || {
        counter += 1;
        counter
    };
    // shape: split the remaining atom budget between the two children
    fn grow(rng: &mut impl Rng, atoms: usize, next: &mut dyn FnMut() -> i64) -> Node {
        let f = next();
        if atoms == 0 {
            return Node::Max(f);
        }
        let left = rng.gen_range(0..atoms);
        let a = grow(rng, left, next);
        let b = grow(rng, atoms - 1 - left, next);
        atom(f, vec![a, b])
    }
    let mut child = grow(rng, atoms, &mut next);
    if cylinder_piece {
        // replace the deepest-rightmost leaf by the far boundary circle
        fn swap_last_leaf(node: &mut Node) {
            match node {
                Node::Atom { children, .. } => swap_last_leaf(children.last_mut().unwrap()),
                Node::Max(f) => *node = Node::Boundary(*f),
                _ => {}
            }
        }
        swap_last_leaf(&mut child);
        return cylinder(0, child);
    }
    disk(0, child)
}

/// `count` seeded generic instances with one or two pieces each.
pub fn generic_corpus(rng: &mut impl Rng, count: usize, max_vertices: usize) -> Vec<Vec<PieceSpec>> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=2);
            (0..n).map(|_| random_generic_piece(rng, max_vertices)).collect()
        })
        .collect()
}
