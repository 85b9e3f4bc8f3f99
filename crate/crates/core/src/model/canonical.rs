use std::fmt;

use super::{AtomSymmetry, DecoratedReebTree, ExtremumKind, VertexKind};

/// Encoding of a rooted decorated subtree, equal for two subtrees exactly
/// when a root-preserving isomorphism respecting f-values, vertex kinds and
/// symmetry data exists between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn code_of(tree: &DecoratedReebTree, v: usize) -> CanonicalCode {
    let vertex = tree.vertex(v);
    let child = |e: usize| code_of(tree, tree.lower_end(e));
    let text = match &vertex.kind {
        VertexKind::Boundary => {
            let mut s = format!("B{}", vertex.f);
            let mut kids: Vec<_> = tree.child_edges(v).iter().map(|&e| child(e)).collect();
            if !kids.is_empty() {
                kids.sort();
                s.push_str(&bracket(&kids));
            }
            s
        }
        VertexKind::Extremum(ExtremumKind::Max) => format!("X+{}", vertex.f),
        VertexKind::Extremum(ExtremumKind::Min) => format!("X-{}", vertex.f),
        VertexKind::Atom { saddles, symmetry, .. } => {
            atom_code(&vertex.f.to_string(), *saddles, symmetry, &child)
        }
    };
    CanonicalCode(text)
}

pub(crate) fn atom_code(
    f: &str,
    saddles: u32,
    symmetry: &AtomSymmetry,
    child: &dyn Fn(usize) -> CanonicalCode,
) -> String {
    let mut invariant: Vec<_> = symmetry.invariant.iter().map(|&e| child(e)).collect();
    invariant.sort();
    let mut orbits: Vec<_> = symmetry
        .orbits
        .iter()
        .map(|orbit| {
            let members: Vec<_> = orbit.iter().map(|&e| child(e)).collect();
            minimal_rotation(&members)
        })
        .collect();
    orbits.sort();
    format!(
        "A({f};s{saddles};m{};I{};O{})",
        symmetry.m,
        bracket(&invariant),
        bracket(&orbits)
    )
}

fn bracket(codes: &[CanonicalCode]) -> String {
    let inner: Vec<&str> = codes.iter().map(|c| c.as_str()).collect();
    format!("[{}]", inner.join(","))
}

fn minimal_rotation(members: &[CanonicalCode]) -> CanonicalCode {
    let n = members.len();
    (0..n)
        .map(|r| {
            let rotated: Vec<_> = (0..n).map(|i| members[(i + r) % n].clone()).collect();
            CanonicalCode(bracket(&rotated))
        })
        .min()
        .unwrap_or_else(|| CanonicalCode("[]".into()))
}

/// Maximal cyclic symmetry of a cyclically ordered child list.
///
/// The period `d` is the smallest positive shift under which the code
/// sequence is invariant, and `m = L / d`. For `m >= 2` every child lies in an
/// orbit `[c_r, c_{r+d}, ...]`; otherwise all children are invariant.
pub fn detect_symmetry(children: &[(usize, CanonicalCode)]) -> AtomSymmetry {
    let len = children.len();
    let period = (1..=len)
        .find(|&d| (0..len).all(|i| children[i].1 == children[(i + d) % len].1))
        .unwrap_or(len.max(1));
    let m = if len == 0 { 1 } else { len / period };
    if m <= 1 {
        return AtomSymmetry {
            m: 1,
            invariant: children.iter().map(|c| c.0).collect(),
            orbits: Vec::new(),
        };
    }
    let orbits = (0..period)
        .map(|r| (0..m).map(|i| children[r + i * period].0).collect())
        .collect();
    AtomSymmetry { m, invariant: Vec::new(), orbits }
}
