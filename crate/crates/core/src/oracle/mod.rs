//! Brute-force ground truth, computed without the recursion of the engine:
//! the group of tree automorphisms generated by the declared atom rotations,
//! a grid search for fixed points, and comparison of group invariants.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::groups::{FiniteGroupExpr, GroupError, MultiplicationTable};
use crate::model::{CanonicalCode, DecoratedReebTree, VertexKind};
use crate::torus::{AffineTorusMap, TorusPoint};

/// Largest group whose multiplication table is built.
pub const TABLE_LIMIT: u64 = 2048;

/// Default bound on the number of grid points scanned.
pub const GRID_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} has more than {cap} elements")]
    CapExceeded { what: &'static str, cap: u64 },
    #[error("generated permutation is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Vertex and edge permutation of a decorated tree. Composition applies
/// `self` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeAutomorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl TreeAutomorphism {
    pub fn identity(tree: &DecoratedReebTree) -> Self {
        TreeAutomorphism {
            vertices: (0..tree.vertices().len()).collect(),
            edges: (0..tree.edges().len()).collect(),
        }
    }

    pub fn then(&self, other: &TreeAutomorphism) -> TreeAutomorphism {
        TreeAutomorphism {
            vertices: self.vertices.iter().map(|&v| other.vertices[v]).collect(),
            edges: self.edges.iter().map(|&e| other.edges[e]).collect(),
        }
    }

    pub fn inverse(&self) -> TreeAutomorphism {
        let mut vertices = vec![0; self.vertices.len()];
        for (v, &w) in self.vertices.iter().enumerate() {
            vertices[w] = v;
        }
        let mut edges = vec![0; self.edges.len()];
        for (e, &f) in self.edges.iter().enumerate() {
            edges[f] = e;
        }
        TreeAutomorphism { vertices, edges }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, &j)| i == j)
    }
}

struct Canon<'a> {
    tree: &'a DecoratedReebTree,
    codes: Vec<CanonicalCode>,
    edge_of: HashMap<(usize, usize), usize>,
}

impl<'a> Canon<'a> {
    fn new(tree: &'a DecoratedReebTree) -> Self {
        let codes = (0..tree.vertices().len()).map(|v| tree.canonical_code(v)).collect();
        let edge_of = tree
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let [a, b] = e.ends;
                ((a.min(b), a.max(b)), i)
            })
            .collect();
        Canon { tree, codes, edge_of }
    }

    fn declared(&self, v: usize, e: usize) -> usize {
        self.tree.child_edges(v).iter().position(|&c| c == e).unwrap()
    }

    fn code_below(&self, e: usize) -> &CanonicalCode {
        &self.codes[self.tree.lower_end(e)]
    }

    /// Subtree vertices in a traversal order that depends only on the
    /// canonical code: invariant children by (code, declaration order), then
    /// orbits by (code, declaration order), each orbit in rotation order.
    fn ordered_subtree(&self, v: usize, out: &mut Vec<usize>) {
        out.push(v);
        let child_edges: Vec<usize> = match self.tree.atom_symmetry(v) {
            Some(sym) => {
                let mut inv = sym.invariant.clone();
                inv.sort_by_key(|&e| (self.code_below(e).clone(), self.declared(v, e)));
                let mut orbits = sym.orbits.clone();
                orbits.sort_by_key(|o| (self.code_below(o[0]).clone(), self.declared(v, o[0])));
                inv.into_iter().chain(orbits.into_iter().flatten()).collect()
            }
            None => self.tree.child_edges(v).to_vec(),
        };
        for e in child_edges {
            self.ordered_subtree(self.tree.lower_end(e), out);
        }
    }

    fn edge_between(&self, a: usize, b: usize) -> usize {
        self.edge_of[&(a.min(b), a.max(b))]
    }

    fn extend_vertex_map(&self, vertices: Vec<usize>) -> TreeAutomorphism {
        let edges = self
            .tree
            .edges()
            .iter()
            .map(|e| self.edge_between(vertices[e.ends[0]], vertices[e.ends[1]]))
            .collect();
        TreeAutomorphism { vertices, edges }
    }

    /// Rotation by one step at atom `u`: orbit member `i` is carried onto
    /// member `i + 1` through the canonical correspondence of their subtrees.
    fn rotation(&self, u: usize) -> Option<TreeAutomorphism> {
        let sym = self.tree.atom_symmetry(u)?;
        if sym.m < 2 {
            return None;
        }
        let mut vertices: Vec<usize> = (0..self.tree.vertices().len()).collect();
        for orbit in &sym.orbits {
            let ordered: Vec<Vec<usize>> = orbit
                .iter()
                .map(|&e| {
                    let mut out = Vec::new();
                    self.ordered_subtree(self.tree.lower_end(e), &mut out);
                    out
                })
                .collect();
            for i in 0..sym.m {
                let next = &ordered[(i + 1) % sym.m];
                for (k, &v) in ordered[i].iter().enumerate() {
                    vertices[v] = next[k];
                }
            }
        }
        Some(self.extend_vertex_map(vertices))
    }
}

/// One rotation generator per atom with a non-trivial symmetry.
pub fn rotation_generators(tree: &DecoratedReebTree) -> Vec<TreeAutomorphism> {
    let canon = Canon::new(tree);
    (0..tree.vertices().len()).filter_map(|u| canon.rotation(u)).collect()
}

/// Checks every defining property of an automorphism of the decorated tree.
pub fn check_automorphism(tree: &DecoratedReebTree, a: &TreeAutomorphism) -> Result<(), String> {
    let n = tree.vertices().len();
    let is_perm = |p: &[usize], n: usize| {
        let mut seen = vec![false; n];
        p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
    };
    if !is_perm(&a.vertices, n) || !is_perm(&a.edges, tree.edges().len()) {
        return Err("not a bijection".into());
    }
    if a.vertices[tree.root()] != tree.root() {
        return Err("root is moved".into());
    }
    for (e, edge) in tree.edges().iter().enumerate() {
        let [x, y] = edge.ends;
        let [p, q] = tree.edge(a.edges[e]).ends;
        let (ix, iy) = (a.vertices[x], a.vertices[y]);
        if !((ix == p && iy == q) || (ix == q && iy == p)) {
            return Err(format!("edge {} is not carried along its ends", edge.id));
        }
    }
    for v in 0..n {
        let (s, t) = (tree.vertex(v), tree.vertex(a.vertices[v]));
        if s.f != t.f {
            return Err(format!("f changes at {}", s.id));
        }
        match (&s.kind, &t.kind) {
            (VertexKind::Boundary, VertexKind::Boundary) => {}
            (VertexKind::Extremum(x), VertexKind::Extremum(y)) if x == y => {}
            (
                VertexKind::Atom { saddles: s1, symmetry: a1, .. },
                VertexKind::Atom { saddles: s2, symmetry: a2, .. },
            ) if s1 == s2 && a1.m == a2.m => {
                let image: HashSet<usize> = a1.invariant.iter().map(|&e| a.edges[e]).collect();
                if image != a2.invariant.iter().copied().collect() {
                    return Err(format!("invariant children of {} are not preserved", s.id));
                }
                let position: HashMap<usize, (usize, usize)> = a2
                    .orbits
                    .iter()
                    .enumerate()
                    .flat_map(|(j, o)| o.iter().enumerate().map(move |(i, &e)| (e, (j, i))))
                    .collect();
                let mut power = None;
                for orbit in &a1.orbits {
                    let Some(&(j, k)) = position.get(&a.edges[orbit[0]]) else {
                        return Err(format!("orbit of {} leaves the orbits", s.id));
                    };
                    if *power.get_or_insert(k) != k {
                        return Err(format!("orbits of {} rotated by different powers", s.id));
                    }
                    for (i, &e) in orbit.iter().enumerate() {
                        if a.edges[e] != a2.orbits[j][(i + k) % a1.m] {
                            return Err(format!("orbit of {} is not rotated", s.id));
                        }
                    }
                }
            }
            _ => return Err(format!("kind changes at {}", s.id)),
        }
    }
    Ok(())
}

/// The group generated by all atom rotations, duplicate-free, with the
/// identity first. Every element is checked to be an automorphism and the
/// set is checked to be closed under inverses and, up to
/// [`TABLE_LIMIT`] elements, under products.
pub fn enumerate_automorphisms(tree: &DecoratedReebTree, cap: u64) -> Result<Vec<TreeAutomorphism>, OracleError> {
    let gens = rotation_generators(tree);
    let id = TreeAutomorphism::identity(tree);
    let mut seen: HashSet<TreeAutomorphism> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if out.len() as u64 >= cap {
                    return Err(OracleError::CapExceeded { what: "automorphism group", cap });
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    for a in &out {
        check_automorphism(tree, a).map_err(OracleError::NotAnAutomorphism)?;
        if !seen.contains(&a.inverse()) {
            return Err(OracleError::NotAnAutomorphism("set is not closed under inverses".into()));
        }
    }
    if out.len() as u64 <= TABLE_LIMIT {
        for a in &out {
            for b in &out {
                if !seen.contains(&a.then(b)) {
                    return Err(OracleError::NotAnAutomorphism("set is not closed under composition".into()));
                }
            }
        }
    }
    Ok(out)
}

/// Order, element-order histogram and abelianization of a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInvariants {
    pub order: u64,
    pub histogram: BTreeMap<u64, usize>,
    pub abelianization: Vec<u64>,
}

impl GroupInvariants {
    pub fn of_table(table: &MultiplicationTable) -> Self {
        GroupInvariants {
            order: table.len() as u64,
            histogram: table.order_histogram(),
            abelianization: table.abelian_invariants(),
        }
    }

    pub fn of_automorphisms(autos: &[TreeAutomorphism]) -> Result<Self, OracleError> {
        if autos.len() as u64 > TABLE_LIMIT {
            return Err(OracleError::CapExceeded { what: "multiplication table", cap: TABLE_LIMIT });
        }
        let index: HashMap<&TreeAutomorphism, usize> = autos.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut data = Vec::with_capacity(autos.len() * autos.len());
        for a in autos {
            for b in autos {
                data.push(index[&a.then(b)]);
            }
        }
        let e = autos.iter().position(TreeAutomorphism::is_identity).expect("identity present");
        Ok(Self::of_table(&MultiplicationTable::new(autos.len(), data, e)))
    }

    pub fn of_group(group: &FiniteGroupExpr, cap: u64) -> Result<Self, OracleError> {
        let limit = cap.min(TABLE_LIMIT);
        let (_, table) = group.table(limit)?;
        Ok(Self::of_table(&table))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Match,
    Mismatch(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub oracle: GroupInvariants,
    pub engine: GroupInvariants,
    pub verdict: OracleVerdict,
}

impl OracleReport {
    pub fn count(&self) -> u64 {
        self.oracle.order
    }

    pub fn is_match(&self) -> bool {
        self.verdict == OracleVerdict::Match
    }
}

fn join(v: &[u64]) -> String {
    if v.is_empty() {
        "trivial".into()
    } else {
        v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

pub fn compare_invariants(engine: GroupInvariants, oracle: GroupInvariants) -> OracleReport {
    let mut reasons = Vec::new();
    if engine.order != oracle.order {
        reasons.push(format!("order: engine {} vs oracle {}", engine.order, oracle.order));
    }
    if engine.histogram != oracle.histogram {
        reasons.push(format!("element orders: engine {:?} vs oracle {:?}", engine.histogram, oracle.histogram));
    }
    if engine.abelianization != oracle.abelianization {
        reasons.push(format!(
            "abelianization: engine {} vs oracle {}",
            join(&engine.abelianization),
            join(&oracle.abelianization)
        ));
    }
    let verdict = if reasons.is_empty() { OracleVerdict::Match } else { OracleVerdict::Mismatch(reasons) };
    OracleReport { oracle, engine, verdict }
}

/// Compares the engine's group for a piece with the automorphism group
/// generated by its declared symmetries.
pub fn compare(target: &FiniteGroupExpr, tree: &DecoratedReebTree, cap: u64) -> Result<OracleReport, OracleError> {
    let autos = enumerate_automorphisms(tree, cap.min(TABLE_LIMIT))?;
    let oracle = GroupInvariants::of_automorphisms(&autos)?;
    let engine = GroupInvariants::of_group(target, cap)?;
    Ok(compare_invariants(engine, oracle))
}

/// Scans every point whose coordinates are multiples of `1/D`, with `D` the
/// lcm of the translation denominators, and returns the first fixed point.
/// Solving around a permutation cycle from a coordinate set to 0 yields a
/// fixed point on this grid whenever one exists, so the scan is complete.
pub fn grid_fixed_point_scan(map: &AffineTorusMap, cap: u64) -> Result<Option<TorusPoint>, OracleError> {
    let p = map.dim();
    let d = map.denominator_lcm();
    let too_big = || OracleError::CapExceeded { what: "grid", cap };
    let size = num_traits::pow(d.clone(), p);
    if size > BigInt::from(cap) {
        return Err(too_big());
    }
    let d = d.to_u64().ok_or_else(too_big)?;
    let shift: Vec<u64> = map
        .trans()
        .iter()
        .map(|t| (t * BigRational::from_integer(BigInt::from(d))).to_integer().to_u64().unwrap())
        .collect();
    let perm = map.perm();
    let mut a = vec![0u64; p];
    loop {
        if (0..p).all(|i| (a[perm[i]] + shift[i]) % d == a[i]) {
            let coords = a.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(d))).collect();
            return Ok(Some(TorusPoint::new(coords)));
        }
        // odometer, last coordinate fastest
        let mut i = p;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            a[i] += 1;
            if a[i] < d {
                break;
            }
            a[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_instance;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn grid_examples() {
        let half = AffineTorusMap::translation(vec![r(1, 2)]);
        assert_eq!(grid_fixed_point_scan(&half, GRID_CAP).unwrap(), None);
        let swap = AffineTorusMap::new(vec![1, 0], vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(
            grid_fixed_point_scan(&swap, GRID_CAP).unwrap(),
            Some(TorusPoint::new(vec![r(0, 1), r(1, 2)]))
        );
        let id = AffineTorusMap::identity(3);
        assert_eq!(grid_fixed_point_scan(&id, GRID_CAP).unwrap(), Some(TorusPoint::origin(3)));
        let fine = AffineTorusMap::translation(vec![r(1, 1000); 2]);
        assert!(grid_fixed_point_scan(&fine, GRID_CAP).is_ok());
        let finer = AffineTorusMap::translation(vec![r(1, 1001); 2]);
        assert!(grid_fixed_point_scan(&finer, GRID_CAP).is_err());
    }

    fn star(m: usize, leaves_f: &[&str]) -> DecoratedReebTree {
        let mut vertices = vec![
            r#"{"id": "r", "type": "boundary", "f": "0"}"#.to_string(),
            r#"{"id": "u", "type": "atom", "f": "1", "saddles": SADDLES, "symmetry": "auto", "cyclic_order": [LIST]}"#.to_string(),
        ];
        let mut edges = vec![r#"{"id": "e0", "from": "r", "to": "u"}"#.to_string()];
        let mut ids = Vec::new();
        for (i, f) in leaves_f.iter().enumerate() {
            vertices.push(format!(r#"{{"id": "l{i}", "type": "extremum", "f": "{f}", "extremum": "max"}}"#));
            edges.push(format!(r#"{{"id": "e{}", "from": "u", "to": "l{i}"}}"#, i + 1));
            ids.push(format!("\"e{}\"", i + 1));
        }
        vertices[1] = vertices[1].replace("LIST", &ids.join(", ")).replace("SADDLES", &(leaves_f.len() - 1).to_string());
        let json = format!(
            r#"{{"surface": {{"genus": 0, "boundary": 1, "orientable": true, "target": "line"}},
               "pieces": [{{"kind": "disk", "root": "r", "vertices": [{}], "edges": [{}]}}]}}"#,
            vertices.join(", "),
            edges.join(", ")
        );
        let tree = parse_instance(&json).unwrap().pieces.remove(0);
        let root_atom = tree.root_neighbor();
        assert_eq!(tree.atom_symmetry(root_atom).unwrap().m, m);
        tree
    }

    #[test]
    fn counts_for_small_stars() {
        assert_eq!(enumerate_automorphisms(&star(1, &["2", "3"]), 100).unwrap().len(), 1);
        assert_eq!(enumerate_automorphisms(&star(2, &["2", "2"]), 100).unwrap().len(), 2);
        assert_eq!(enumerate_automorphisms(&star(3, &["2", "2", "2"]), 100).unwrap().len(), 3);
        assert!(enumerate_automorphisms(&star(3, &["2", "2", "2"]), 2).is_err());
    }

    #[test]
    fn compare_detects_order_mismatch() {
        let tree = star(2, &["2", "2"]);
        let ok = compare(&FiniteGroupExpr::cyclic(2), &tree, 100).unwrap();
        assert!(ok.is_match());
        let bad = compare(&FiniteGroupExpr::cyclic(3), &tree, 100).unwrap();
        let OracleVerdict::Mismatch(reasons) = bad.verdict else { panic!() };
        assert!(reasons[0].starts_with("order"));
    }

    #[test]
    fn invalid_permutations_are_rejected() {
        let tree = star(2, &["2", "2"]);
        let mut a = TreeAutomorphism::identity(&tree);
        a.vertices.swap(0, 1);
        assert!(check_automorphism(&tree, &a).is_err());
        let rot = rotation_generators(&tree).remove(0);
        assert!(check_automorphism(&tree, &rot).is_ok());
        assert!(rot.then(&rot).is_identity());
    }
}
