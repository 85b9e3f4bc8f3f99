use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::BigRational;

use super::canonical::detect_symmetry;
use super::document::*;
use super::*;

/// Parses and validates a JSON instance document.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, ModelError> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
    instance_from_doc(&doc)
}

pub(super) fn instance_from_doc(doc: &InstanceDoc) -> Result<ProblemInstance, ModelError> {
    let surface = SurfaceDescriptor {
        genus: doc.surface.genus,
        boundary_count: doc.surface.boundary,
        orientable: doc.surface.orientable,
        target: match doc.surface.target {
            TargetDoc::Line => Target::Line,
            TargetDoc::Circle => Target::Circle,
        },
    };
    surface.validate()?;
    if doc.pieces.is_empty() {
        return Err(ModelError::Schema("`pieces` must be non-empty".into()));
    }
    let pieces = doc
        .pieces
        .iter()
        .map(piece_from_doc)
        .collect::<Result<Vec<_>, _>>()?;

    let mut warnings = Vec::new();
    let chi: i64 = pieces.iter().map(|p| p.euler_characteristic()).sum();
    if chi != surface.euler_characteristic() {
        warnings.push(format!(
            "piece Euler characteristics sum to {chi} but the surface has Euler characteristic {}; \
             accepted as a cut decomposition",
            surface.euler_characteristic()
        ));
    }
    Ok(ProblemInstance { surface, pieces, warnings })
}

fn parse_rational(text: &str, vertex: &str) -> Result<BigRational, ModelError> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|e| ModelError::Schema(format!("vertex `{vertex}`: malformed rational {text:?}: {e}")))
}

fn schema(msg: String) -> ModelError {
    ModelError::Schema(msg)
}

enum PendingSymmetry {
    Absent,
    Auto,
    Explicit(ExplicitSymmetryDoc),
}

/// Builds and validates one piece.
pub fn piece_from_doc(doc: &PieceDoc) -> Result<DecoratedReebTree, ModelError> {
    let kind = match doc.kind {
        PieceKindDoc::Disk => PieceKind::Disk,
        PieceKindDoc::Cylinder => PieceKind::Cylinder,
    };

    let mut vertex_index = HashMap::new();
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    let mut pending = Vec::with_capacity(doc.vertices.len());
    let mut raw_orders = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.iter().enumerate() {
        if vertex_index.insert(v.id.clone(), i).is_some() {
            return Err(schema(format!("duplicate vertex id `{}`", v.id)));
        }
        let f = parse_rational(&v.f, &v.id)?;
        let not_allowed = |field: &str| schema(format!("vertex `{}`: field `{field}` not allowed here", v.id));
        let vk = match v.kind {
            VertexTypeDoc::Boundary | VertexTypeDoc::Extremum => {
                if v.saddles.is_some() {
                    return Err(not_allowed("saddles"));
                }
                if v.symmetry.is_some() {
                    return Err(not_allowed("symmetry"));
                }
                if v.cyclic_order.is_some() {
                    return Err(not_allowed("cyclic_order"));
                }
                pending.push(PendingSymmetry::Absent);
                raw_orders.push(None);
                if v.kind == VertexTypeDoc::Boundary {
                    if v.extremum.is_some() {
                        return Err(not_allowed("extremum"));
                    }
                    VertexKind::Boundary
                } else {
                    match v.extremum {
                        Some(ExtremumDoc::Min) => VertexKind::Extremum(ExtremumKind::Min),
                        Some(ExtremumDoc::Max) => VertexKind::Extremum(ExtremumKind::Max),
                        None => return Err(schema(format!("vertex `{}`: extremum requires `extremum`", v.id))),
                    }
                }
            }
            VertexTypeDoc::Atom => {
                if v.extremum.is_some() {
                    return Err(not_allowed("extremum"));
                }
                let saddles = v
                    .saddles
                    .ok_or_else(|| schema(format!("vertex `{}`: atom requires `saddles`", v.id)))?;
                if saddles == 0 {
                    return Err(ModelError::invariant(
                        "atom-saddles",
                        vec![v.id.clone()],
                        "an atom carries at least one saddle",
                    ));
                }
                pending.push(match &v.symmetry {
                    None => PendingSymmetry::Absent,
                    Some(SymmetryDoc::Keyword(k)) if k == "auto" => PendingSymmetry::Auto,
                    Some(SymmetryDoc::Keyword(k)) => {
                        return Err(schema(format!("vertex `{}`: unknown symmetry keyword {k:?}", v.id)))
                    }
                    Some(SymmetryDoc::Explicit(s)) => PendingSymmetry::Explicit(s.clone()),
                });
                raw_orders.push(v.cyclic_order.clone());
                VertexKind::Atom {
                    saddles,
                    symmetry: AtomSymmetry::trivial(&[]),
                    cyclic_order: None,
                }
            }
        };
        vertices.push(Vertex { id: v.id.clone(), f, kind: vk });
    }

    let mut edge_index = HashMap::new();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.iter().enumerate() {
        if edge_index.insert(e.id.clone(), i).is_some() {
            return Err(schema(format!("duplicate edge id `{}`", e.id)));
        }
        let end = |id: &str| {
            vertex_index
                .get(id)
                .copied()
                .ok_or_else(|| schema(format!("edge `{}` references unknown vertex `{id}`", e.id)))
        };
        let (a, b) = (end(&e.from)?, end(&e.to)?);
        if a == b {
            return Err(ModelError::invariant("tree", vec![e.id.clone()], "self-loop"));
        }
        edges.push(Edge { id: e.id.clone(), ends: [a, b] });
    }
    let root = *vertex_index
        .get(&doc.root)
        .ok_or_else(|| schema(format!("root `{}` is not a vertex", doc.root)))?;

    // Tree shape and orientation away from the root.
    let n = vertices.len();
    let mut incident = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        incident[e.ends[0]].push(i);
        incident[e.ends[1]].push(i);
    }
    let mut parent_edge = vec![None; n];
    let mut child_edges = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &e in &incident[u] {
            if parent_edge[u] == Some(e) {
                continue;
            }
            let [a, b] = edges[e].ends;
            let w = if a == u { b } else { a };
            if seen[w] {
                return Err(ModelError::invariant(
                    "tree",
                    vec![edges[e].id.clone()],
                    "edge closes a cycle",
                ));
            }
            seen[w] = true;
            parent_edge[w] = Some(e);
            child_edges[u].push(e);
            queue.push_back(w);
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(ModelError::invariant(
            "tree",
            vec![vertices[v].id.clone()],
            "vertex is not connected to the root",
        ));
    }
    for list in &mut child_edges {
        list.sort_unstable();
    }

    // Euler characteristic of the piece.
    let leaves = vertices
        .iter()
        .filter(|v| matches!(v.kind, VertexKind::Extremum(_)))
        .count() as i64;
    let saddles: i64 = vertices
        .iter()
        .map(|v| match v.kind {
            VertexKind::Atom { saddles, .. } => i64::from(saddles),
            _ => 0,
        })
        .sum();
    if leaves - saddles != kind.euler_characteristic() {
        return Err(ModelError::invariant(
            "euler",
            vec![doc.root.clone()],
            format!(
                "{leaves} extrema minus {saddles} saddles = {} but a {} piece requires {}",
                leaves - saddles,
                match kind {
                    PieceKind::Disk => "disk",
                    PieceKind::Cylinder => "cylinder",
                },
                kind.euler_characteristic()
            ),
        ));
    }

    if vertices[root].kind != VertexKind::Boundary {
        return Err(ModelError::invariant("root-kind", vec![doc.root.clone()], "root must be a boundary vertex"));
    }
    let boundary: Vec<String> = vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Boundary)
        .map(|v| v.id.clone())
        .collect();
    if boundary.len() != kind.boundary_vertices() {
        return Err(ModelError::invariant(
            "boundary-count",
            boundary.clone(),
            format!("expected {} boundary vertices, found {}", kind.boundary_vertices(), boundary.len()),
        ));
    }
    for (v, vertex) in vertices.iter().enumerate() {
        let degree = incident[v].len();
        let ok = match vertex.kind {
            VertexKind::Boundary | VertexKind::Extremum(_) => degree == 1,
            VertexKind::Atom { .. } => degree >= 2,
        };
        if !ok {
            return Err(ModelError::invariant(
                if v == root { "root-degree" } else { "vertex-degree" },
                vec![vertex.id.clone()],
                format!("degree {degree} is not allowed for this vertex kind"),
            ));
        }
    }

    for e in &edges {
        let [a, b] = e.ends;
        if vertices[a].f == vertices[b].f {
            return Err(ModelError::invariant(
                "edge-monotone",
                vec![e.id.clone()],
                "endpoints carry equal f-values",
            ));
        }
    }
    for (v, vertex) in vertices.iter().enumerate() {
        if let VertexKind::Extremum(ext) = vertex.kind {
            let e = incident[v][0];
            let [a, b] = edges[e].ends;
            let other = &vertices[if a == v { b } else { a }];
            let ok = match ext {
                ExtremumKind::Max => vertex.f > other.f,
                ExtremumKind::Min => vertex.f < other.f,
            };
            if !ok {
                return Err(ModelError::invariant(
                    "extremum-direction",
                    vec![vertex.id.clone(), other.id.clone()],
                    "a maximum lies above its neighbour and a minimum below it",
                ));
            }
        }
    }

    let mut tree = DecoratedReebTree {
        kind,
        root,
        vertices,
        edges,
        parent_edge,
        child_edges,
    };
    resolve_symmetries(&mut tree, pending, raw_orders, &edge_index)?;
    Ok(tree)
}

fn resolve_symmetries(
    tree: &mut DecoratedReebTree,
    mut pending: Vec<PendingSymmetry>,
    mut raw_orders: Vec<Option<Vec<String>>>,
    edge_index: &HashMap<String, usize>,
) -> Result<(), ModelError> {
    for v in tree.post_order() {
        if !matches!(tree.vertices[v].kind, VertexKind::Atom { .. }) {
            continue;
        }
        let id = tree.vertices[v].id.clone();
        let children: Vec<usize> = tree.child_edges[v].clone();
        let child_set: HashSet<usize> = children.iter().copied().collect();
        let lookup = |name: &String| {
            edge_index
                .get(name)
                .copied()
                .ok_or_else(|| schema(format!("vertex `{id}`: unknown edge `{name}`")))
        };

        let cyclic_order = match raw_orders[v].take() {
            None => None,
            Some(list) => {
                let order = list.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
                let as_set: HashSet<usize> = order.iter().copied().collect();
                if order.len() != children.len() || as_set != child_set {
                    return Err(ModelError::invariant(
                        "cyclic-order",
                        vec![id],
                        "cyclic_order must list every child edge exactly once",
                    ));
                }
                Some(order)
            }
        };

        let symmetry = match std::mem::replace(&mut pending[v], PendingSymmetry::Absent) {
            PendingSymmetry::Absent => AtomSymmetry::trivial(&children),
            PendingSymmetry::Auto => {
                let order = cyclic_order.clone().ok_or_else(|| {
                    schema(format!("vertex `{id}`: symmetry \"auto\" requires `cyclic_order`"))
                })?;
                let coded: Vec<_> = order
                    .iter()
                    .map(|&e| (e, tree.canonical_code(tree.lower_end(e))))
                    .collect();
                detect_symmetry(&coded)
            }
            PendingSymmetry::Explicit(s) => {
                let invariant = s.invariant.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
                let orbits = s
                    .orbits
                    .iter()
                    .map(|o| o.iter().map(lookup).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                AtomSymmetry { m: s.m as usize, invariant, orbits }
            }
        };
        check_symmetry(tree, v, &symmetry, &child_set)?;
        if let VertexKind::Atom { symmetry: slot, cyclic_order: order_slot, .. } = &mut tree.vertices[v].kind {
            *slot = symmetry;
            *order_slot = cyclic_order;
        }
    }
    Ok(())
}

fn check_symmetry(
    tree: &DecoratedReebTree,
    v: usize,
    symmetry: &AtomSymmetry,
    children: &HashSet<usize>,
) -> Result<(), ModelError> {
    let id = || vec![tree.vertices[v].id.clone()];
    if symmetry.m == 0 {
        return Err(ModelError::invariant("symmetry-period", id(), "m must be at least 1"));
    }
    if (symmetry.m == 1) != symmetry.orbits.is_empty() {
        return Err(ModelError::invariant(
            "symmetry-period",
            id(),
            "m = 1 exactly when there are no orbits",
        ));
    }
    if let Some(bad) = symmetry.orbits.iter().find(|o| o.len() != symmetry.m) {
        let ids = bad.iter().map(|&e| tree.edges[e].id.clone()).collect();
        return Err(ModelError::invariant(
            "symmetry-period",
            ids,
            format!("every orbit must have exactly m = {} members", symmetry.m),
        ));
    }
    let mut seen = HashSet::new();
    for &e in symmetry.invariant.iter().chain(symmetry.orbits.iter().flatten()) {
        if !children.contains(&e) || !seen.insert(e) {
            return Err(ModelError::invariant(
                "symmetry-partition",
                vec![tree.vertices[v].id.clone(), tree.edges[e].id.clone()],
                "invariant children and orbit members must partition the child edges",
            ));
        }
    }
    if seen.len() != children.len() {
        return Err(ModelError::invariant(
            "symmetry-partition",
            id(),
            "some child edge is neither invariant nor in an orbit",
        ));
    }
    for orbit in &symmetry.orbits {
        let first = tree.canonical_code(tree.lower_end(orbit[0]));
        if let Some(&e) = orbit[1..]
            .iter()
            .find(|&&e| tree.canonical_code(tree.lower_end(e)) != first)
        {
            return Err(ModelError::invariant(
                "orbit-isomorphism",
                vec![tree.edges[orbit[0]].id.clone(), tree.edges[e].id.clone()],
                "subtrees in one orbit must be f-isomorphic",
            ));
        }
    }
    Ok(())
}

pub(super) fn instance_to_doc(instance: &ProblemInstance) -> InstanceDoc {
    let s = &instance.surface;
    InstanceDoc {
        surface: SurfaceDoc {
            genus: s.genus,
            boundary: s.boundary_count,
            orientable: s.orientable,
            target: match s.target {
                Target::Line => TargetDoc::Line,
                Target::Circle => TargetDoc::Circle,
            },
        },
        pieces: instance.pieces.iter().map(piece_to_doc).collect(),
    }
}

pub(crate) fn piece_to_doc(tree: &DecoratedReebTree) -> PieceDoc {
    let edge_name = |e: &usize| tree.edges[*e].id.clone();
    let vertices = tree
        .vertices
        .iter()
        .map(|v| {
            let f = v.f.to_string();
            match &v.kind {
                VertexKind::Boundary => VertexDoc::boundary(&v.id, f),
                VertexKind::Extremum(k) => VertexDoc::extremum(
                    &v.id,
                    f,
                    match k {
                        ExtremumKind::Min => ExtremumDoc::Min,
                        ExtremumKind::Max => ExtremumDoc::Max,
                    },
                ),
                VertexKind::Atom { saddles, symmetry, cyclic_order } => {
                    let mut doc = VertexDoc::atom(
                        &v.id,
                        f,
                        *saddles,
                        Some(SymmetryDoc::Explicit(ExplicitSymmetryDoc {
                            m: symmetry.m as u32,
                            invariant: symmetry.invariant.iter().map(edge_name).collect(),
                            orbits: symmetry
                                .orbits
                                .iter()
                                .map(|o| o.iter().map(edge_name).collect())
                                .collect(),
                        })),
                    );
                    doc.cyclic_order = cyclic_order.as_ref().map(|o| o.iter().map(edge_name).collect());
                    doc
                }
            }
        })
        .collect();
    PieceDoc {
        kind: match tree.kind {
            PieceKind::Disk => PieceKindDoc::Disk,
            PieceKind::Cylinder => PieceKindDoc::Cylinder,
        },
        root: tree.vertices[tree.root].id.clone(),
        vertices,
        edges: tree
            .edges
            .iter()
            .map(|e| EdgeDoc::new(&e.id, &tree.vertices[e.ends[0]].id, &tree.vertices[e.ends[1]].id))
            .collect(),
    }
}
