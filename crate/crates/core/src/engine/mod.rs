//! Recursive computation of the source group, the finite group `G`, the
//! structural epimorphism and the free torus action of each piece, and
//! their assembly into the homotopy model `T^p / G` of the whole orbit.

pub mod verify;

use num_bigint::BigUint;
use thiserror::Error;

use crate::groups::{
    EtaKind, EtaLocator, FiniteGroupExpr, GroupError, SourceGroupExpr, StructuralHom,
};
use crate::model::{DecoratedReebTree, ModelError, PieceKind, ProblemInstance, Target, VertexKind};
use crate::torus::{
    act_extend_trivial, act_product, act_trivial, act_wreath, pi1_presentation, CrystalGroup, Homology,
    TorusAction, TorusError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

impl EngineError {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            EngineError::Group(GroupError::CapExceeded { .. })
                | EngineError::Torus(TorusError::Group(GroupError::CapExceeded { .. }))
        )
    }
}

/// Which step of the recursion produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecursionCase {
    /// the root edge ends at the other boundary circle of a cylinder
    BoundaryLeaf,
    /// the root edge ends at a local extremum
    ExtremumLeaf,
    /// an atom without rotational symmetry
    Invariant,
    /// an atom whose children are rotated with period `m >= 2`
    Rotational { m: usize },
}

/// Result for the subtree below one edge (for a whole piece: below the root edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceResult {
    pub edge: usize,
    pub case: RecursionCase,
    pub source: SourceGroupExpr,
    pub target: FiniteGroupExpr,
    pub hom: StructuralHom,
    pub p: usize,
    pub action: TorusAction,
    pub eta: Option<EtaLocator>,
    /// results for the invariant children of the atom
    pub invariant: Vec<PieceResult>,
    /// results for one representative of each orbit
    pub orbits: Vec<PieceResult>,
}

impl PieceResult {
    fn leaf(edge: usize, case: RecursionCase) -> Self {
        PieceResult {
            edge,
            case,
            source: SourceGroupExpr::Trivial,
            target: FiniteGroupExpr::Trivial,
            hom: StructuralHom::new(SourceGroupExpr::Trivial, FiniteGroupExpr::Trivial).unwrap(),
            p: 0,
            action: act_trivial(0),
            eta: None,
            invariant: Vec::new(),
            orbits: Vec::new(),
        }
    }

    /// Rotation period of the atom, 1 for everything else.
    pub fn m(&self) -> usize {
        match self.case {
            RecursionCase::Rotational { m } => m,
            _ => 1,
        }
    }

    /// Every result in this tree of results, parents first.
    pub fn walk(&self) -> Vec<&PieceResult> {
        let mut out = vec![self];
        for r in self.invariant.iter().chain(&self.orbits) {
            out.extend(r.walk());
        }
        out
    }
}

fn eta_at_end(source: &SourceGroupExpr, kind: EtaKind) -> EtaLocator {
    let component = match source {
        SourceGroupExpr::Product(parts) => Some(parts.len() - 1),
        _ => None,
    };
    EtaLocator { component, kind }
}

fn analyze_edge(tree: &DecoratedReebTree, edge: usize, offset: usize) -> Result<PieceResult, EngineError> {
    let v = tree.lower_end(edge);
    let symmetry = match &tree.vertex(v).kind {
        VertexKind::Boundary => return Ok(PieceResult::leaf(edge, RecursionCase::BoundaryLeaf)),
        VertexKind::Extremum(_) => return Ok(PieceResult::leaf(edge, RecursionCase::ExtremumLeaf)),
        VertexKind::Atom { symmetry, .. } => symmetry,
    };

    let invariant = symmetry
        .invariant
        .iter()
        .map(|&e| analyze_edge(tree, e, offset))
        .collect::<Result<Vec<_>, _>>()?;
    let x_sources: Vec<SourceGroupExpr> = invariant.iter().map(|r| r.source.clone()).collect();
    let x_targets: Vec<FiniteGroupExpr> = invariant.iter().map(|r| r.target.clone()).collect();
    let x_actions: Vec<TorusAction> = invariant.iter().map(|r| r.action.clone()).collect();
    let p_x: usize = invariant.iter().map(|r| r.p).sum();

    let m = symmetry.m;
    if m == 1 {
        let mut parts = x_sources;
        parts.push(SourceGroupExpr::FreeZ);
        let source = SourceGroupExpr::product(parts);
        let target = FiniteGroupExpr::product(x_targets);
        let action = act_extend_trivial(act_product(x_actions), 1);
        let eta = eta_at_end(&source, EtaKind::FreeFactor);
        return Ok(PieceResult {
            edge,
            case: RecursionCase::Invariant,
            hom: StructuralHom::new(source.clone(), target.clone())?,
            source,
            target,
            p: p_x + 1,
            action,
            eta: Some(eta),
            invariant,
            orbits: Vec::new(),
        });
    }

    let orbits = symmetry
        .orbits
        .iter()
        .map(|orbit| analyze_edge(tree, orbit[offset % orbit.len()], offset))
        .collect::<Result<Vec<_>, _>>()?;
    let y_source = SourceGroupExpr::product(orbits.iter().map(|r| r.source.clone()).collect());
    let y_target = FiniteGroupExpr::product(orbits.iter().map(|r| r.target.clone()).collect());
    let y_action = act_product(orbits.iter().map(|r| r.action.clone()).collect());
    let p_y: usize = orbits.iter().map(|r| r.p).sum();

    let mut sources = x_sources;
    sources.push(SourceGroupExpr::wreath(y_source, m));
    let mut targets = x_targets;
    targets.push(FiniteGroupExpr::wreath(y_target, m));
    let mut actions = x_actions;
    actions.push(act_wreath(y_action, m));
    let source = SourceGroupExpr::product(sources);
    let target = FiniteGroupExpr::product(targets);
    let eta = eta_at_end(&source, EtaKind::WreathShift);
    Ok(PieceResult {
        edge,
        case: RecursionCase::Rotational { m },
        hom: StructuralHom::new(source.clone(), target.clone())?,
        source,
        target,
        p: p_x + m * p_y + 1,
        action: act_product(actions),
        eta: Some(eta),
        invariant,
        orbits,
    })
}

/// Runs the recursion from the root edge, taking the first member of every
/// orbit as its representative.
pub fn analyze_piece(tree: &DecoratedReebTree) -> Result<PieceResult, EngineError> {
    analyze_piece_with_offset(tree, 0)
}

/// Same as [`analyze_piece`] with orbit member `offset mod m` as representative.
pub fn analyze_piece_with_offset(tree: &DecoratedReebTree, offset: usize) -> Result<PieceResult, EngineError> {
    analyze_edge(tree, tree.child_edges(tree.root())[0], offset)
}

/// True when every piece has pairwise distinct critical values and only
/// single-saddle atoms.
pub fn generic_check(instance: &ProblemInstance) -> bool {
    instance.pieces.iter().all(DecoratedReebTree::is_generic)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    /// every non-identity element was checked for fixed points
    Certified { checked: usize },
    /// `|G|` exceeds the cap; nothing was enumerated
    Skipped { order: BigUint, cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub is_torus: bool,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub pieces: Vec<PieceResult>,
    pub source: SourceGroupExpr,
    pub target: FiniteGroupExpr,
    pub hom: StructuralHom,
    pub p: usize,
    pub action: TorusAction,
    pub order: BigUint,
    pub certification: Certification,
    pub crystal: Option<CrystalGroup>,
    pub h1: Option<Homology>,
    pub verdict: Verdict,
    pub generic: bool,
    pub notes: Vec<String>,
}

impl AnalysisResult {
    pub fn is_certified(&self) -> bool {
        matches!(self.certification, Certification::Certified { .. })
    }
}

/// `T^p/G`, or `T^p` for trivial `G`; when the quotient is again a torus its
/// usual name is appended.
pub fn describe(p: usize, target: &FiniteGroupExpr, is_torus: bool) -> String {
    let torus = format!("T^{p}");
    if target.is_trivial_group() {
        return torus;
    }
    let name = target.pretty();
    let base = if name.contains(' ') { format!("{torus}/({name})") } else { format!("{torus}/{name}") };
    if !is_torus {
        return base;
    }
    let alias = match p {
        0 => "point".to_string(),
        1 => "S^1".to_string(),
        _ => torus,
    };
    format!("{base} ≃ {alias}")
}

/// Analyzes every piece and assembles the product answer. Groups larger
/// than `cap` are reported with certification skipped.
pub fn analyze_instance(instance: &ProblemInstance, cap: u64) -> Result<AnalysisResult, EngineError> {
    instance.surface.validate()?;
    let pieces = instance.pieces.iter().map(analyze_piece).collect::<Result<Vec<_>, _>>()?;
    let source = SourceGroupExpr::product(pieces.iter().map(|r| r.source.clone()).collect());
    let target = FiniteGroupExpr::product(pieces.iter().map(|r| r.target.clone()).collect());
    let hom = StructuralHom::new(source.clone(), target.clone())?;
    let action = act_product(pieces.iter().map(|r| r.action.clone()).collect());
    let p: usize = pieces.iter().map(|r| r.p).sum();
    debug_assert_eq!(p, action.dim());
    let order = target.order();

    let (certification, crystal, h1) = match target.order_within(cap) {
        Ok(_) => {
            let report = action.is_free(cap)?;
            let crystal = pi1_presentation(&action, cap)?;
            let h1 = crystal.homology_h1();
            (Certification::Certified { checked: report.checked }, Some(crystal), Some(h1))
        }
        Err(_) => (Certification::Skipped { order: order.clone(), cap }, None, None),
    };

    let is_torus = action.is_translation_only();
    let verdict = Verdict { is_torus, description: describe(p, &target, is_torus) };

    let mut notes = Vec::new();
    if instance.pieces.len() > 1 || instance.surface.euler_characteristic() < 0 {
        notes.push("piece decomposition taken from the input as supplied".to_string());
    }
    if instance.surface.target == Target::Circle {
        notes.push("circle target: pairing of cut circles is not checked".to_string());
    }
    let declared = instance.pieces.iter().any(|t| {
        (0..t.vertices().len()).any(|v| t.atom_symmetry(v).is_some_and(|s| s.m >= 2 && !s.invariant.is_empty()))
    });
    if declared {
        notes.push("atoms mixing invariant and rotated children are accepted as declared".to_string());
    }
    let cylinders = instance.pieces.iter().filter(|t| t.kind() == PieceKind::Cylinder).count();
    if cylinders > 0 && instance.pieces.len() == cylinders && p == 0 {
        notes.push("no critical points: the orbit is contractible".to_string());
    }
    notes.extend(instance.warnings.iter().cloned());

    Ok(AnalysisResult {
        pieces,
        source,
        target,
        hom,
        p,
        action,
        order,
        certification,
        crystal,
        h1,
        verdict,
        generic: generic_check(instance),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_instance;

    const TREE_A: &str = r#"{
      "surface": {"genus": 0, "boundary": 1, "orientable": true, "target": "line"},
      "pieces": [{"kind": "disk", "root": "r",
        "vertices": [
          {"id": "r", "type": "boundary", "f": "0"},
          {"id": "u", "type": "atom", "f": "1", "saddles": 1, "symmetry": {"m": 2, "invariant": [], "orbits": [["e1", "e2"]]}},
          {"id": "a", "type": "extremum", "f": "2", "extremum": "max"},
          {"id": "b", "type": "extremum", "f": "2", "extremum": "max"}],
        "edges": [{"id": "e0", "from": "r", "to": "u"}, {"id": "e1", "from": "u", "to": "a"}, {"id": "e2", "from": "u", "to": "b"}]}]
    }"#;

    const TREE_B: &str = r#"{
      "surface": {"genus": 0, "boundary": 1, "orientable": true, "target": "line"},
      "pieces": [{"kind": "disk", "root": "r",
        "vertices": [
          {"id": "r", "type": "boundary", "f": "0"},
          {"id": "u", "type": "atom", "f": "1", "saddles": 1},
          {"id": "a", "type": "extremum", "f": "2", "extremum": "max"},
          {"id": "b", "type": "extremum", "f": "3", "extremum": "max"}],
        "edges": [{"id": "e0", "from": "r", "to": "u"}, {"id": "e1", "from": "u", "to": "a"}, {"id": "e2", "from": "u", "to": "b"}]}]
    }"#;

    #[test]
    fn tree_a_trace() {
        let inst = parse_instance(TREE_A).unwrap();
        let r = analyze_piece(&inst.pieces[0]).unwrap();
        assert_eq!(r.source, SourceGroupExpr::wreath(SourceGroupExpr::Trivial, 2));
        assert_eq!(r.target, FiniteGroupExpr::cyclic(2));
        assert_eq!(r.p, 1);
        assert_eq!(r.case, RecursionCase::Rotational { m: 2 });
        assert_eq!(r.eta, Some(EtaLocator { component: None, kind: EtaKind::WreathShift }));
        let a = analyze_instance(&inst, 100).unwrap();
        assert_eq!(a.h1.unwrap().to_string(), "Z");
        assert_eq!(a.verdict.description, "T^1/Z_2 ≃ S^1");
        assert!(!a.generic);
    }

    #[test]
    fn tree_b_trace() {
        let inst = parse_instance(TREE_B).unwrap();
        let r = analyze_piece(&inst.pieces[0]).unwrap();
        assert_eq!(r.source, SourceGroupExpr::FreeZ);
        assert_eq!(r.target, FiniteGroupExpr::Trivial);
        assert_eq!(r.p, 1);
        assert_eq!(r.invariant.len(), 2);
        let a = analyze_instance(&inst, 100).unwrap();
        assert_eq!(a.verdict.description, "T^1");
        assert!(a.verdict.is_torus);
        assert!(a.generic);
    }

    #[test]
    fn skipped_certification_above_cap() {
        let inst = parse_instance(TREE_A).unwrap();
        let a = analyze_instance(&inst, 1).unwrap();
        assert!(matches!(a.certification, Certification::Skipped { .. }));
        assert!(a.h1.is_none());
    }

    #[test]
    fn descriptions() {
        let z2 = FiniteGroupExpr::cyclic(2);
        assert_eq!(describe(2, &z2, true), "T^2/Z_2 ≃ T^2");
        assert_eq!(describe(3, &FiniteGroupExpr::wreath(z2.clone(), 2), false), "T^3/(Z_2 wr Z_2)");
        assert_eq!(describe(0, &FiniteGroupExpr::Trivial, true), "T^0");
    }
}
