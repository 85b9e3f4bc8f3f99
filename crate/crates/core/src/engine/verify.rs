//! Property checks run against an analysis: action axioms, freeness with the
//! grid cross-check, the structural epimorphism, recursion identities and
//! the oracle comparison.

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{analyze_piece_with_offset, AnalysisResult, EngineError, PieceResult, RecursionCase};
use crate::groups::{eta, FiniteGroupExpr, GroupElement, GroupError, SourceGroupExpr, StructuralHom};
use crate::model::ProblemInstance;
use crate::oracle::{self, OracleError, GRID_CAP};
use crate::torus::{pi1_presentation, TorusAction};

/// Groups up to this order get every pair checked.
pub const EXHAUSTIVE_LIMIT: u64 = 200;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub cap: u64,
    pub seed: u64,
    pub samples: usize,
    pub skip_oracle: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cap: crate::groups::DEFAULT_ORDER_CAP, seed: 0, samples: 200, skip_oracle: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { name, passed: true, detail: detail.into() }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome { name, passed: false, detail: detail.into() }
    }
}

/// Uniform random element with integer coordinates in `[-3, 3]`.
pub fn random_source_element(expr: &SourceGroupExpr, rng: &mut impl Rng) -> GroupElement {
    match expr {
        SourceGroupExpr::Trivial => GroupElement::Unit,
        SourceGroupExpr::FreeZ => GroupElement::Int(rng.gen_range(-3..=3)),
        SourceGroupExpr::Product(parts) => {
            GroupElement::Tuple(parts.iter().map(|p| random_source_element(p, rng)).collect())
        }
        SourceGroupExpr::WreathOverZ { inner, m } => GroupElement::Wreath {
            map: (0..*m).map(|_| random_source_element(inner, rng)).collect(),
            shift: rng.gen_range(-3..=3),
        },
    }
}

/// `A_e = id` and `A_{gh} = A_g A_h`. All pairs for small groups; otherwise
/// all pairs `(g, s)` with `s` in a generating set, which already forces the
/// law for every pair.
pub fn check_action(action: &TorusAction, cap: u64) -> Result<CheckOutcome, EngineError> {
    let group = action.group();
    if !action.evaluate(&group.identity())?.is_identity() {
        return Ok(CheckOutcome::fail("action-axioms", "identity does not act as the identity map"));
    }
    let elements = group.enumerate(cap)?;
    let exhaustive = elements.len() as u64 <= EXHAUSTIVE_LIMIT;
    let right: Vec<GroupElement> = if exhaustive { elements.clone() } else { group.generators() };
    let mut pairs = 0usize;
    for g in &elements {
        for h in &right {
            pairs += 1;
            if !action.respects_product(g, h)? {
                return Ok(CheckOutcome::fail("action-axioms", format!("A({g} * {h}) != A({g}) A({h})")));
            }
        }
    }
    let how = if exhaustive { "all pairs" } else { "all (element, generator) pairs" };
    Ok(CheckOutcome::pass("action-axioms", format!("{pairs} products checked ({how})")))
}

/// Cycle-sum criterion on every non-identity element, cross-checked by the
/// grid scan on every element when the grid is small enough.
pub fn check_freeness(action: &TorusAction, cap: u64) -> Result<Vec<CheckOutcome>, EngineError> {
    let mut scanned = 0usize;
    let mut skipped = 0usize;
    let mut disagreements = Vec::new();
    let report = action.is_free(cap)?;
    for (g, map) in action.tabulate(cap)? {
        let criterion = map.fixed_point();
        match oracle::grid_fixed_point_scan(&map, GRID_CAP) {
            Ok(grid) => {
                scanned += 1;
                if grid.is_some() != criterion.is_some() {
                    disagreements.push(g.to_string());
                }
            }
            Err(OracleError::CapExceeded { .. }) => skipped += 1,
            Err(other) => return Ok(vec![CheckOutcome::fail("grid-scan", other.to_string())]),
        }
    }
    let freeness = match report.violation {
        None => CheckOutcome::pass("freeness", format!("{} non-identity elements fixed-point-free", report.checked)),
        Some((g, x)) => CheckOutcome::fail("freeness", format!("element {g} fixes {x}")),
    };
    let grid = if disagreements.is_empty() {
        CheckOutcome::pass("grid-scan", format!("{scanned} maps agree, {skipped} grids over the cap"))
    } else {
        CheckOutcome::fail("grid-scan", format!("criterion and grid disagree on {}", disagreements.join("; ")))
    };
    Ok(vec![freeness, grid])
}

/// Homomorphism law on random pairs and surjectivity through the section.
pub fn check_hom(hom: &StructuralHom, cap: u64, samples: usize, rng: &mut StdRng) -> Result<Vec<CheckOutcome>, EngineError> {
    let (s, t) = (hom.source(), hom.target());
    for _ in 0..samples {
        let a = random_source_element(s, rng);
        let b = random_source_element(s, rng);
        let lhs = hom.eval(&s.mul(&a, &b)?)?;
        let rhs = t.mul(&hom.eval(&a)?, &hom.eval(&b)?)?;
        if lhs != rhs {
            return Ok(vec![CheckOutcome::fail("hom-homomorphism", format!("fails on ({a}, {b})"))]);
        }
    }
    let mut out = vec![CheckOutcome::pass("hom-homomorphism", format!("{samples} random pairs"))];
    let targets = t.enumerate(cap)?;
    for g in &targets {
        if hom.eval(&hom.section(g)?)? != *g {
            out.push(CheckOutcome::fail("hom-surjective", format!("{g} has no preimage")));
            return Ok(out);
        }
    }
    out.push(CheckOutcome::pass("hom-surjective", format!("{} target elements hit", targets.len())));
    Ok(out)
}

fn check_eta(piece: &PieceResult, samples: usize, rng: &mut StdRng) -> Result<Option<CheckOutcome>, EngineError> {
    let Some(loc) = piece.eta else { return Ok(None) };
    let s = &piece.source;
    let g_hat = loc.generator(s)?;
    if eta(s, &loc, &g_hat)? != 1 {
        return Ok(Some(CheckOutcome::fail("eta", format!("eta({g_hat}) != 1"))));
    }
    for _ in 0..samples {
        let a = random_source_element(s, rng);
        let b = random_source_element(s, rng);
        if eta(s, &loc, &s.mul(&a, &b)?)? != eta(s, &loc, &a)? + eta(s, &loc, &b)? {
            return Ok(Some(CheckOutcome::fail("eta", format!("not additive on ({a}, {b})"))));
        }
    }
    Ok(Some(CheckOutcome::pass("eta", format!("generator maps to 1, {samples} additive pairs"))))
}

fn order_of(target: &FiniteGroupExpr) -> BigUint {
    target.order()
}

/// `p` and `|G|` recursion identities at every node of a piece result.
pub fn recursion_identities(piece: &PieceResult) -> Result<(), String> {
    for r in piece.walk() {
        let p_x: usize = r.invariant.iter().map(|c| c.p).sum();
        let p_y: usize = r.orbits.iter().map(|c| c.p).sum();
        let g_x: BigUint = r.invariant.iter().map(|c| order_of(&c.target)).product();
        let g_y: BigUint = r.orbits.iter().map(|c| order_of(&c.target)).product();
        let (p, order) = match r.case {
            RecursionCase::BoundaryLeaf | RecursionCase::ExtremumLeaf => (0, BigUint::from(1u32)),
            RecursionCase::Invariant => (p_x + 1, g_x),
            RecursionCase::Rotational { m } => (p_x + m * p_y + 1, g_x * g_y.pow(m as u32) * BigUint::from(m)),
        };
        if r.p != p || r.action.dim() != p {
            return Err(format!("p = {} and dim = {} but the recursion gives {p}", r.p, r.action.dim()));
        }
        if order_of(&r.target) != order {
            return Err(format!("|G| = {} but the recursion gives {order}", order_of(&r.target)));
        }
        if r.action.group() != &r.target {
            return Err(format!("action group {} differs from target {}", r.action.group(), r.target));
        }
    }
    Ok(())
}

/// Structural equality of two piece results, ignoring which edges were visited.
pub fn same_expressions(a: &PieceResult, b: &PieceResult) -> bool {
    a.case == b.case
        && a.source == b.source
        && a.target == b.target
        && a.p == b.p
        && a.action == b.action
        && a.eta == b.eta
        && a.invariant.len() == b.invariant.len()
        && a.orbits.len() == b.orbits.len()
        && a.invariant.iter().zip(&b.invariant).all(|(x, y)| same_expressions(x, y))
        && a.orbits.iter().zip(&b.orbits).all(|(x, y)| same_expressions(x, y))
}

/// Runs every check on an analysis. Fails with a cap error when the group
/// cannot be enumerated within `opts.cap`.
pub fn verify_instance(
    instance: &ProblemInstance,
    analysis: &AnalysisResult,
    opts: &VerifyOptions,
) -> Result<Vec<CheckOutcome>, EngineError> {
    analysis.target.order_within(opts.cap)?;
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut out = vec![check_action(&analysis.action, opts.cap)?];
    out.extend(check_freeness(&analysis.action, opts.cap)?);
    out.extend(check_hom(&analysis.hom, opts.cap, opts.samples, &mut rng)?);

    for (i, (tree, piece)) in instance.pieces.iter().zip(&analysis.pieces).enumerate() {
        if let Some(c) = check_eta(piece, opts.samples, &mut rng)? {
            out.push(c);
        }
        out.push(match recursion_identities(piece) {
            Ok(()) => CheckOutcome::pass("recursion", format!("piece {i}: p and |G| identities hold")),
            Err(e) => CheckOutcome::fail("recursion", format!("piece {i}: {e}")),
        });
        let max_m = piece.walk().iter().map(|r| r.m()).max().unwrap_or(1);
        let mut exchanged = true;
        for offset in 1..max_m {
            exchanged &= same_expressions(piece, &analyze_piece_with_offset(tree, offset)?);
        }
        out.push(if exchanged {
            CheckOutcome::pass("representative-exchange", format!("piece {i}: {} choices agree", max_m))
        } else {
            CheckOutcome::fail("representative-exchange", format!("piece {i}: results depend on the representative"))
        });
        if !opts.skip_oracle {
            out.push(match oracle::compare(&piece.target, tree, opts.cap) {
                Ok(report) if report.is_match() => {
                    CheckOutcome::pass("oracle", format!("piece {i}: {} automorphisms, invariants match", report.count()))
                }
                Ok(report) => {
                    let oracle::OracleVerdict::Mismatch(reasons) = report.verdict else { unreachable!() };
                    CheckOutcome::fail("oracle", format!("piece {i}: {}", reasons.join("; ")))
                }
                Err(OracleError::CapExceeded { .. }) => {
                    return Err(GroupError::CapExceeded { order: order_of(&piece.target), cap: opts.cap }.into())
                }
                Err(e) => CheckOutcome::fail("oracle", format!("piece {i}: {e}")),
            });
        }
    }

    out.push(check_pi1(&analysis.action, opts.cap)?);
    Ok(out)
}

/// Lattice quotient has order `|G|`, lattice translations stay normal, and
/// `lift(g)^ord(g)` is a lattice element.
pub fn check_pi1(action: &TorusAction, cap: u64) -> Result<CheckOutcome, EngineError> {
    let pi = match pi1_presentation(action, cap) {
        Ok(pi) => pi,
        Err(e) => return Ok(CheckOutcome::fail("pi1", e.to_string())),
    };
    let group = action.group();
    if BigUint::from(pi.order()) != group.order() {
        return Ok(CheckOutcome::fail("pi1", "lattice quotient has the wrong order"));
    }
    let e = pi.identity();
    for s in group.generators() {
        let g = pi.lift(pi.index_of(&s).unwrap());
        for i in 0..pi.dim() {
            let mut z = vec![0; pi.dim()];
            z[i] = 1;
            let conj = pi.mul(&pi.mul(&pi.inverse(&g), &pi.lattice(z)), &g);
            if conj.g != e.g {
                return Ok(CheckOutcome::fail("pi1", format!("conjugate of e_{i} by {s} leaves the lattice")));
            }
        }
    }
    for g in 0..pi.order() {
        let n = group.element_order(pi.element(g))?;
        let mut x = pi.identity();
        for _ in 0..n {
            x = pi.mul(&x, &pi.lift(g));
        }
        if x.g != e.g {
            return Ok(CheckOutcome::fail("pi1", format!("lift of {} has the wrong order", pi.element(g))));
        }
    }
    Ok(CheckOutcome::pass("pi1", format!("extension of Z^{} by a group of order {}", pi.dim(), pi.order())))
}
