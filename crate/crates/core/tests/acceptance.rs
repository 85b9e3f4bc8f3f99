//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use morse_orbit::corpus::{generic_corpus, instance, small_corpus};
use morse_orbit::engine::{analyze_instance, AnalysisResult, PieceResult, RecursionCase};
use morse_orbit::groups::{FiniteGroupExpr, GroupElement, SourceGroupExpr};
use morse_orbit::model::{parse_instance, ProblemInstance};
use morse_orbit::oracle::{
    compare, enumerate_automorphisms, grid_fixed_point_scan, GroupInvariants, GRID_CAP,
};
use morse_orbit::torus::{
    act_cyclic, act_extend_trivial, act_product, act_trivial, act_wreath, smith_decomposition,
    smith_normal_form, IntMatrix, TorusAction,
};

const CAP: u64 = 10_000;

struct Corpus {
    /// named small trees plus the bundled files
    small: Vec<(String, ProblemInstance)>,
    generic: Vec<ProblemInstance>,
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn load(name: &str) -> ProblemInstance {
    let text = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
    parse_instance(&text).unwrap()
}

const BUNDLED: [&str; 7] = [
    "tree_a.json",
    "tree_b.json",
    "two_piece.json",
    "cylinder.json",
    "auto_star.json",
    "nested_wreath.json",
    "wreath_m2_m3.json",
];

fn build_corpus() -> Corpus {
    let mut small: Vec<(String, ProblemInstance)> = small_corpus()
        .into_iter()
        .map(|(name, pieces)| (name.to_string(), instance(&pieces).unwrap()))
        .collect();
    for file in BUNDLED {
        small.push((file.to_string(), load(file)));
    }
    let mut rng = StdRng::seed_from_u64(2024);
    let generic = generic_corpus(&mut rng, 24, 50).iter().map(|p| instance(p).unwrap()).collect();
    Corpus { small, generic }
}

fn all_instances(c: &Corpus) -> impl Iterator<Item = &ProblemInstance> {
    c.small.iter().map(|(_, i)| i).chain(&c.generic)
}

fn wreath_z(map: &[i64], shift: i64) -> GroupElement {
    GroupElement::Wreath { map: map.iter().map(|&k| GroupElement::Int(k)).collect(), shift }
}

/// Every element of `WreathOverZ(FreeZ, m)` with coordinates in `[-3, 3]`.
fn box_elements(m: usize) -> Vec<GroupElement> {
    let mut out = Vec::new();
    let mut coords = vec![-3i64; m + 1];
    loop {
        out.push(wreath_z(&coords[..m], coords[m]));
        let mut i = 0;
        while i <= m && coords[i] == 3 {
            coords[i] = -3;
            i += 1;
        }
        if i > m {
            return out;
        }
        coords[i] += 1;
    }
}

fn finite_axioms(group: &FiniteGroupExpr) -> Result<usize, String> {
    let elements = group.enumerate(CAP).map_err(|e| e.to_string())?;
    let e = group.identity();
    for a in &elements {
        let inv = group.inverse(a).unwrap();
        if group.mul(a, &e).unwrap() != *a || group.mul(&e, a).unwrap() != *a {
            return Err(format!("{group}: identity fails at {a}"));
        }
        if group.mul(a, &inv).unwrap() != e || group.mul(&inv, a).unwrap() != e {
            return Err(format!("{group}: inverse fails at {a}"));
        }
        for b in &elements {
            let ab = group.mul(a, b).unwrap();
            for c in &elements {
                if group.mul(&ab, c).unwrap() != group.mul(a, &group.mul(b, c).unwrap()).unwrap() {
                    return Err(format!("{group}: associativity fails at ({a}, {b}, {c})"));
                }
            }
        }
    }
    Ok(elements.len())
}

fn criterion_1(c: &Corpus) -> Result<String, String> {
    let mut groups: Vec<FiniteGroupExpr> = Vec::new();
    for inst in all_instances(c) {
        let a = analyze_instance(inst, CAP).map_err(|e| e.to_string())?;
        for g in std::iter::once(&a.target).chain(a.pieces.iter().flat_map(|p| p.walk()).map(|r| &r.target)) {
            if !groups.contains(g) && g.order_within(200).is_ok() {
                groups.push(g.clone());
            }
        }
    }
    let mut finite_elements = 0;
    for g in &groups {
        finite_elements += finite_axioms(g)?;
    }

    let mut rng = StdRng::seed_from_u64(1);
    let mut triples = 0usize;
    for m in 2..=4 {
        let s = SourceGroupExpr::wreath(SourceGroupExpr::FreeZ, m);
        let e = s.identity();
        let all = box_elements(m);
        for a in &all {
            let inv = s.inverse(a).unwrap();
            if s.mul(a, &e).unwrap() != *a || s.mul(&e, a).unwrap() != *a {
                return Err(format!("m = {m}: identity fails at {a}"));
            }
            if s.mul(a, &inv).unwrap() != e || s.mul(&inv, a).unwrap() != e {
                return Err(format!("m = {m}: inverse fails at {a}"));
            }
        }
        // for fixed shifts the triple product is additive in the three maps,
        // so unit maps in every slot under every shift triple cover the box
        let mut basis = vec![vec![0i64; 3 * m]];
        for j in 0..3 * m {
            let mut v = vec![0i64; 3 * m];
            v[j] = 1;
            basis.push(v);
        }
        let mut check = |x: &GroupElement, y: &GroupElement, z: &GroupElement| -> Result<(), String> {
            let left = s.mul(&s.mul(x, y).unwrap(), z).unwrap();
            let right = s.mul(x, &s.mul(y, z).unwrap()).unwrap();
            triples += 1;
            if left != right {
                return Err(format!("m = {m}: associativity fails at ({x}, {y}, {z})"));
            }
            Ok(())
        };
        for a in -3..=3 {
            for b in -3..=3 {
                for k in -3..=3 {
                    for v in &basis {
                        check(&wreath_z(&v[..m], a), &wreath_z(&v[m..2 * m], b), &wreath_z(&v[2 * m..], k))?;
                    }
                }
            }
        }
        for _ in 0..20_000 {
            let pick = |rng: &mut StdRng| all[rng.gen_range(0..all.len())].clone();
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            check(&x, &y, &z)?;
        }
    }

    let s = SourceGroupExpr::wreath(SourceGroupExpr::FreeZ, 2);
    let gamma = s.mul(&wreath_z(&[1, 0], 1), &wreath_z(&[2, 5], 1)).unwrap();
    if gamma != wreath_z(&[2, 6], 2) {
        return Err(format!("worked product gave {gamma}"));
    }
    let inv = s.inverse(&wreath_z(&[1, 0], 1)).unwrap();
    if inv != wreath_z(&[0, -1], -1) {
        return Err(format!("worked inverse gave {inv}"));
    }
    Ok(format!(
        "{} finite groups ({finite_elements} elements, all triples); Z-wreaths m = 2..4: box identity/inverse, {triples} triples; worked product (2, 6; 2)",
        groups.len()
    ))
}

fn constructed_actions() -> Vec<TorusAction> {
    let c2 = || act_cyclic(2);
    let c3 = || act_cyclic(3);
    vec![
        act_trivial(2),
        act_cyclic(2),
        act_cyclic(3),
        act_cyclic(5),
        act_product(vec![c2(), c3()]),
        act_product(vec![c2(), c2(), act_trivial(1)]),
        act_extend_trivial(c3(), 2),
        act_wreath(c2(), 2),
        act_wreath(c3(), 2),
        act_wreath(c2(), 3),
        act_wreath(act_wreath(c2(), 2), 2),
        act_wreath(act_product(vec![c2(), act_extend_trivial(c2(), 1)]), 2),
        act_product(vec![act_wreath(c3(), 2), act_extend_trivial(c2(), 1)]),
        act_extend_trivial(act_wreath(c2(), 3), 1),
        act_wreath(act_extend_trivial(act_product(vec![c2(), c2()]), 1), 2),
    ]
}

fn criterion_2() -> Result<String, String> {
    let mut pairs = 0usize;
    let actions = constructed_actions();
    for action in &actions {
        let group = action.group();
        if group.order_within(200).is_err() {
            return Err(format!("{action}: group larger than 200"));
        }
        let id = action.evaluate(&group.identity()).map_err(|e| e.to_string())?;
        if !id.is_identity() || id.dim() != action.dim() {
            return Err(format!("{action}: identity evaluates to {id}"));
        }
        let table = action.tabulate(CAP).map_err(|e| e.to_string())?;
        for (g, ag) in &table {
            for (h, ah) in &table {
                let gh = group.mul(g, h).unwrap();
                if action.evaluate(&gh).unwrap() != ag.compose(ah).unwrap() {
                    return Err(format!("{action}: evaluate({g} * {h}) differs from the composite"));
                }
                pairs += 1;
            }
        }
    }
    let five = act_wreath(act_cyclic(2), 2);
    let order = five.group().order_within(CAP).unwrap();
    if order != 8 || five.dim() != 3 {
        return Err(format!("wreath of the half turn: order {order}, dimension {}", five.dim()));
    }
    Ok(format!("{} actions, {pairs} ordered pairs; wreath of the half turn has order 8 on T^3", actions.len()))
}

/// Cycle-sum criterion and grid scan on every element; returns the number of maps.
fn freeness_on(action: &TorusAction, what: &str) -> Result<usize, String> {
    let table = action.tabulate(CAP).map_err(|e| format!("{what}: {e}"))?;
    for (g, map) in &table {
        let identity = *g == action.group().identity();
        let criterion = map.fixed_point();
        if identity != criterion.is_some() {
            return Err(format!("{what}: element {g} has fixed point {criterion:?}"));
        }
        if let Some(x) = &criterion {
            if map.apply(x).unwrap() != *x {
                return Err(format!("{what}: witness for {g} is not fixed"));
            }
        }
        let grid = grid_fixed_point_scan(map, GRID_CAP).map_err(|e| format!("{what}: {g}: {e}"))?;
        if grid.is_some() != criterion.is_some() {
            return Err(format!("{what}: grid scan disagrees at {g}"));
        }
    }
    Ok(table.len())
}

fn criterion_3(c: &Corpus) -> Result<String, String> {
    let mut maps = 0;
    let mut actions = 0;
    for action in constructed_actions() {
        maps += freeness_on(&action, &action.to_string())?;
        actions += 1;
    }
    for inst in all_instances(c) {
        let a = analyze_instance(inst, CAP).map_err(|e| e.to_string())?;
        for r in std::iter::once(&a.action).chain(a.pieces.iter().flat_map(|p| p.walk()).map(|r| &r.action)) {
            maps += freeness_on(r, &r.to_string())?;
            actions += 1;
        }
    }
    Ok(format!("{actions} actions, {maps} maps; criterion and grid scan agree on all"))
}

fn criterion_4(c: &Corpus) -> Result<String, String> {
    let mut count = 0;
    let mut largest = 0;
    let mut slowest = Duration::ZERO;
    for inst in all_instances(c) {
        if !morse_orbit::engine::generic_check(inst) {
            continue;
        }
        let start = Instant::now();
        let a = analyze_instance(inst, CAP).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if elapsed > Duration::from_secs(5) {
            return Err(format!("analysis took {elapsed:?}"));
        }
        let h1 = a.h1.as_ref().ok_or("no homology computed")?;
        if !a.verdict.is_torus || h1.rank != a.p || !h1.torsion.is_empty() {
            return Err(format!("generic instance gave {} with H1 = {h1}", a.verdict.description));
        }
        largest = largest.max(inst.pieces.iter().map(|t| t.vertices().len()).max().unwrap_or(0));
        count += 1;
    }
    if count < 20 {
        return Err(format!("only {count} generic instances"));
    }
    Ok(format!("{count} generic instances up to {largest} vertices, slowest {slowest:?}"))
}

fn criterion_5(c: &Corpus) -> Result<String, String> {
    let mut trees = 0;
    let mut seen_m = BTreeSet::new();
    let mut depth2 = false;
    let mut cases = BTreeSet::new();
    for (name, inst) in &c.small {
        let a = analyze_instance(inst, CAP).map_err(|e| e.to_string())?;
        for (tree, piece) in inst.pieces.iter().zip(&a.pieces) {
            if tree.vertices().len() > 12 {
                continue;
            }
            let report = compare(&piece.target, tree, CAP).map_err(|e| format!("{name}: {e}"))?;
            if !report.is_match() {
                return Err(format!("{name}: {:?}", report.verdict));
            }
            trees += 1;
            for r in piece.walk() {
                cases.insert(format!("{:?}", std::mem::discriminant(&r.case)));
                if let RecursionCase::Rotational { m } = r.case {
                    seen_m.insert(m);
                }
                if r.case != RecursionCase::BoundaryLeaf
                    && r.case != RecursionCase::ExtremumLeaf
                    && r.invariant.iter().chain(&r.orbits).any(|x| !x.invariant.is_empty() || !x.orbits.is_empty())
                {
                    depth2 = true;
                }
            }
        }
    }
    if trees < 30 || !seen_m.contains(&2) || !seen_m.contains(&3) || !depth2 || cases.len() < 4 {
        return Err(format!("coverage too thin: {trees} trees, m {seen_m:?}, nesting {depth2}"));
    }
    Ok(format!("{trees} trees, all four recursion cases, m in {seen_m:?}, nested atoms; zero mismatches"))
}

/// Lattice generated by `Z^p` and the translation parts, when every map is a
/// pure translation: its index over `Z^p` is the number of distinct
/// translations mod 1, and the quotient torus has free `H1` of rank `p`.
fn translation_quotient(action: &TorusAction) -> Result<(usize, usize), String> {
    let table = action.tabulate(CAP).map_err(|e| e.to_string())?;
    let mut points = BTreeSet::new();
    for (g, map) in &table {
        if map.perm().iter().enumerate().any(|(i, &j)| i != j) {
            return Err(format!("{g} permutes coordinates"));
        }
        let reduced: Vec<BigRational> = map.trans().iter().map(|t| t - t.floor()).collect();
        points.insert(reduced);
    }
    Ok((points.len(), action.dim()))
}

fn desk_example(
    name: &str,
    file: &str,
    order: u64,
    p: usize,
    h1: &str,
    verdict: &str,
) -> Result<String, String> {
    let inst = load(file);
    let a: AnalysisResult = analyze_instance(&inst, CAP).map_err(|e| e.to_string())?;
    let engine_h1 = a.h1.as_ref().map(|h| h.to_string()).unwrap_or_default();
    if a.order != order.into() || a.p != p || engine_h1 != h1 || a.verdict.description != verdict {
        return Err(format!(
            "{name}: engine gave |G| = {}, p = {}, H1 = {engine_h1}, {}",
            a.order, a.p, a.verdict.description
        ));
    }
    // automorphism count of every piece
    let mut autos = 1u64;
    for tree in &inst.pieces {
        autos *= enumerate_automorphisms(tree, CAP).map_err(|e| e.to_string())?.len() as u64;
    }
    if autos != order {
        return Err(format!("{name}: {autos} tree automorphisms"));
    }
    // grid scan: only the identity has a fixed point
    let table = a.action.tabulate(CAP).map_err(|e| e.to_string())?;
    let fixed = table
        .iter()
        .filter(|(_, m)| grid_fixed_point_scan(m, GRID_CAP).unwrap().is_some())
        .count();
    if fixed != 1 {
        return Err(format!("{name}: {fixed} elements with grid fixed points"));
    }
    // deck group is a lattice containing Z^p with index |G|
    let (index, dim) = translation_quotient(&a.action)?;
    if index as u64 != order || dim != p {
        return Err(format!("{name}: translation lattice of index {index} in dimension {dim}"));
    }
    let expected_h1 = match p {
        0 => "0".to_string(),
        1 => "Z".to_string(),
        _ => format!("Z^{p}"),
    };
    if expected_h1 != h1 {
        return Err(format!("{name}: lattice gives H1 = {expected_h1}"));
    }
    Ok(format!("{name}: |G| = {order}, p = {p}, H1 = {h1}, {verdict}"))
}

fn criterion_6() -> Result<String, String> {
    let a = desk_example("tree A", "tree_a.json", 2, 1, "Z", "T^1/Z_2 ≃ S^1")?;
    let b = desk_example("tree B", "tree_b.json", 1, 1, "Z", "T^1")?;
    let c = desk_example("two pieces", "two_piece.json", 2, 2, "Z^2", "T^2/Z_2 ≃ T^2")?;
    let inv = GroupInvariants::of_group(&FiniteGroupExpr::cyclic(2), CAP).map_err(|e| e.to_string())?;
    if inv.abelianization != vec![2] {
        return Err(format!("Z_2 abelianizes to {:?}", inv.abelianization));
    }
    Ok(format!("{a}; {b}; {c}"))
}

/// `(p, |G|)` recomputed from the children's action dimensions and element counts.
fn recursion_node(r: &PieceResult) -> Result<(), String> {
    let count = |x: &PieceResult| x.target.enumerate(CAP).map(|v| v.len()).map_err(|e| e.to_string());
    let mut p_x = 0;
    let mut g_x = 1usize;
    for x in &r.invariant {
        p_x += x.action.dim();
        g_x *= count(x)?;
    }
    let mut p_y = 0;
    let mut g_y = 1usize;
    for y in &r.orbits {
        p_y += y.action.dim();
        g_y *= count(y)?;
    }
    let (p, order) = match r.case {
        RecursionCase::BoundaryLeaf | RecursionCase::ExtremumLeaf => (0, 1),
        RecursionCase::Invariant => (p_x + 1, g_x),
        RecursionCase::Rotational { m } => (p_x + m * p_y + 1, g_x * g_y.pow(m as u32) * m),
    };
    if r.action.dim() != p || r.p != p {
        return Err(format!("dimension {} (reported {}) but the recursion gives {p}", r.action.dim(), r.p));
    }
    let n = count(r)?;
    if n != order {
        return Err(format!("{} elements but the recursion gives {order}", n));
    }
    Ok(())
}

fn criterion_7(c: &Corpus) -> Result<String, String> {
    let mut nodes = 0;
    let mut instances = 0;
    for inst in all_instances(c) {
        let a = analyze_instance(inst, CAP).map_err(|e| e.to_string())?;
        for piece in &a.pieces {
            for r in piece.walk() {
                recursion_node(r)?;
                nodes += 1;
            }
        }
        let total: usize = a.pieces.iter().map(|r| r.action.dim()).sum();
        if total != a.p || a.action.dim() != a.p {
            return Err("piece dimensions do not add up".into());
        }
        instances += 1;
    }
    Ok(format!("{instances} instances, {nodes} recursion nodes"))
}

fn det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let mut minor = IntMatrix::zeros(n - 1, n - 1);
        for r in 1..n {
            let mut cc = 0;
            for k in 0..n {
                if k != j {
                    minor.set(r - 1, cc, m.get(r, k).clone());
                    cc += 1;
                }
            }
        }
        let term = m.get(0, j) * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn criterion_8() -> Result<String, String> {
    let big = |v: &[i64]| v.iter().map(|&k| BigInt::from(k)).collect::<Vec<_>>();
    let cases: [(IntMatrix, Vec<BigInt>); 4] = [
        (IntMatrix::identity(3), big(&[1, 1, 1])),
        (IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]), big(&[1, 6])),
        (IntMatrix::from_i64(&[vec![2, 4], vec![6, 8]]), big(&[2, 4])),
        (IntMatrix::from_i64(&[vec![4, 0], vec![0, 6]]), big(&[2, 12])),
    ];
    for (m, expected) in &cases {
        let got = smith_normal_form(m);
        if &got != expected {
            return Err(format!("{m} gave {got:?}"));
        }
    }
    let mut rng = StdRng::seed_from_u64(8);
    for k in 0..100 {
        let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_i64(&rows);
        let d = smith_decomposition(&a);
        if d.left.mul(&a).mul(&d.right) != d.diagonal || !d.diagonal.is_smith_form() {
            return Err(format!("matrix {k}: recorded factors do not reproduce the diagonal"));
        }
        if !det(&d.left).abs().is_one() || !det(&d.right).abs().is_one() {
            return Err(format!("matrix {k}: factor is not unimodular"));
        }
        let product: BigInt = d.invariant_factors().iter().product();
        let full = d.invariant_factors().len() == 4;
        if full && product != det(&a).abs() {
            return Err(format!("matrix {k}: invariant factors multiply to {product}"));
        }
    }
    Ok(format!("{} fixed cases, 100 random 4x4 decompositions re-multiplied", cases.len()))
}

fn main() {
    let corpus = build_corpus();
    type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;
    let criteria: Vec<(&str, Duration, Check)> = vec![
        ("wreath arithmetic", Duration::from_secs(10), Box::new(|| criterion_1(&corpus))),
        ("action constructions", Duration::from_secs(60), Box::new(criterion_2)),
        ("freeness", Duration::MAX, Box::new(|| criterion_3(&corpus))),
        ("generic maps give tori", Duration::MAX, Box::new(|| criterion_4(&corpus))),
        ("oracle equivalence", Duration::MAX, Box::new(|| criterion_5(&corpus))),
        ("desk examples", Duration::MAX, Box::new(criterion_6)),
        ("recursion arithmetic", Duration::MAX, Box::new(|| criterion_7(&corpus))),
        ("smith normal form", Duration::MAX, Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
