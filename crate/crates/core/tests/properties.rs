use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use morse_orbit::corpus::{atom, auto, disk, instance, instance_doc, max, Node, PieceSpec, Sym};
use morse_orbit::engine::verify::{random_source_element, same_expressions};
use morse_orbit::engine::{analyze_piece, analyze_piece_with_offset};
use morse_orbit::model::document::VertexTypeDoc;
use morse_orbit::model::{parse_instance, DecoratedReebTree, ModelError, ProblemInstance};

/// Subtree hanging at depth `d`: atoms sit at `10 d`, leaves just above.
fn arb_node(depth: i64) -> BoxedStrategy<Node> {
    let leaf = (0..3i64).prop_map(move |k| max(10 * depth + k)).boxed();
    if depth >= 3 {
        return leaf;
    }
    let child = arb_node(depth + 1);
    let atom_strategy = (
        prop::collection::vec(child.clone(), 0..=2),
        prop::collection::vec(child, 1..=2),
        1usize..=3,
    )
        .prop_map(move |(mut inv, unit, m)| {
            if m == 1 {
                inv.extend(unit);
                if inv.len() < 2 {
                    inv.push(max(10 * depth + 11));
                }
                return atom(10 * depth, inv);
            }
            let k = inv.len();
            let orbits = (0..unit.len()).map(|j| (0..m).map(|i| k + i * unit.len() + j).collect()).collect();
            let mut children = inv;
            for _ in 0..m {
                children.extend(unit.iter().cloned());
            }
            let n = children.len();
            Node::Atom {
                f: 10 * depth,
                saddles: (n - 1) as u32,
                sym: Sym::Explicit { m: m as u32, invariant: (0..k).collect(), orbits },
                children,
            }
        })
        .boxed();
    prop_oneof![1 => leaf, 3 => atom_strategy].boxed()
}

fn arb_piece() -> impl Strategy<Value = PieceSpec> {
    arb_node(1).prop_map(|n| disk(0, n))
}

fn tree_of(piece: &PieceSpec) -> DecoratedReebTree {
    instance(std::slice::from_ref(piece)).unwrap().pieces.remove(0)
}

/// Reverses every child list, remapping declared symmetry indices.
fn mirror(node: &Node) -> Node {
    match node {
        Node::Atom { f, saddles, sym, children } => {
            let n = children.len();
            let flip = |i: &usize| n - 1 - i;
            let sym = match sym {
                Sym::Explicit { m, invariant, orbits } => Sym::Explicit {
                    m: *m,
                    invariant: invariant.iter().map(flip).collect(),
                    orbits: orbits.iter().map(|o| o.iter().map(flip).collect()).collect(),
                },
                other => other.clone(),
            };
            Node::Atom { f: *f, saddles: *saddles, sym, children: children.iter().rev().map(mirror).collect() }
        }
        other => other.clone(),
    }
}

fn bump_first_leaf(node: &mut Node) {
    match node {
        Node::Max(f) | Node::Min(f) | Node::Boundary(f) => *f += 100,
        Node::Atom { children, .. } => bump_first_leaf(&mut children[0]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_ignores_child_order(piece in arb_piece()) {
        let a = tree_of(&piece);
        let b = tree_of(&PieceSpec { child: mirror(&piece.child), ..piece.clone() });
        prop_assert_eq!(a.canonical_code(a.root()), b.canonical_code(b.root()));
    }

    #[test]
    fn canonical_code_sees_f_values(piece in arb_piece()) {
        let mut changed = piece.clone();
        bump_first_leaf(&mut changed.child);
        // orbit copies must change together, so only compare when still valid
        if let Ok(inst) = instance(&[changed]) {
            let a = tree_of(&piece);
            let b = &inst.pieces[0];
            prop_assert_ne!(a.canonical_code(a.root()), b.canonical_code(b.root()));
        }
    }

    #[test]
    fn detected_symmetry_is_rotation_invariant(pattern in prop::collection::vec(0..3i64, 2..=8), shift in 0usize..8) {
        let leaves: Vec<Node> = pattern.iter().map(|&k| max(2 + k)).collect();
        let mut rotated = leaves.clone();
        rotated.rotate_left(shift % leaves.len());
        let summary = |children: Vec<Node>| {
            let t = tree_of(&disk(0, auto(1, children)));
            let s = t.atom_symmetry(t.root_neighbor()).unwrap().clone();
            let mut sizes: Vec<usize> = s.orbits.iter().map(Vec::len).collect();
            sizes.sort();
            (s.m, s.invariant.len(), sizes, t.canonical_code(t.root()))
        };
        let (m, inv, sizes, code) = summary(leaves);
        prop_assert_eq!((m, inv, sizes, code), summary(rotated));
        // the period divides the length and the pattern repeats with it
        prop_assert_eq!(pattern.len() % m, 0);
        let period = pattern.len() / m;
        prop_assert!(pattern.iter().enumerate().all(|(i, k)| pattern[(i + period) % pattern.len()] == *k));
    }

    #[test]
    fn documents_round_trip(pieces in prop::collection::vec(arb_piece(), 1..=2)) {
        let inst = instance(&pieces).unwrap();
        let text = inst.to_json();
        let again: ProblemInstance = parse_instance(&text).unwrap();
        prop_assert_eq!(again.to_json(), text);
        for (a, b) in inst.pieces.iter().zip(&again.pieces) {
            prop_assert_eq!(a.canonical_code(a.root()), b.canonical_code(b.root()));
        }
    }

    #[test]
    fn euler_check_rejects_exactly_the_violations(piece in arb_piece(), seeds in prop::collection::vec(1u32..=4, 32)) {
        let mut doc = instance_doc(std::slice::from_ref(&piece));
        let mut leaves = 0i64;
        let mut saddles = 0i64;
        for v in doc.pieces[0].vertices.iter_mut() {
            match v.kind {
                VertexTypeDoc::Atom => {
                    // keyed by level so that orbit copies stay congruent
                    let level: usize = v.f.parse().unwrap();
                    let s = seeds[level / 10];
                    v.saddles = Some(s);
                    saddles += s as i64;
                }
                VertexTypeDoc::Extremum => leaves += 1,
                VertexTypeDoc::Boundary => {}
            }
        }
        let result = ProblemInstance::from_document(&doc);
        if leaves - saddles == 1 {
            prop_assert!(result.is_ok(), "{:?}", result.err());
        } else {
            let is_euler = matches!(&result, Err(ModelError::InvariantViolation { invariant, .. }) if *invariant == "euler");
            prop_assert!(is_euler, "{:?}", result.err());
        }
    }

    #[test]
    fn structural_epimorphism_is_a_surjective_homomorphism(piece in arb_piece(), seed in any::<u64>()) {
        let result = analyze_piece(&tree_of(&piece)).unwrap();
        let hom = &result.hom;
        let source = hom.source();
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..16 {
            let a = random_source_element(source, &mut rng);
            let b = random_source_element(source, &mut rng);
            let ab = source.mul(&a, &b).unwrap();
            let lhs = hom.eval(&ab).unwrap();
            let rhs = hom.target().mul(&hom.eval(&a).unwrap(), &hom.eval(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        if let Ok(elements) = hom.target().enumerate(2_000) {
            for g in elements {
                prop_assert_eq!(hom.eval(&hom.section(&g).unwrap()).unwrap(), g);
            }
        }
    }

    #[test]
    fn representative_choice_does_not_matter(piece in arb_piece(), offset in 1usize..6) {
        let tree = tree_of(&piece);
        let base = analyze_piece(&tree).unwrap();
        let other = analyze_piece_with_offset(&tree, offset).unwrap();
        prop_assert!(same_expressions(&base, &other));
    }
}

#[test]
fn finite_group_axioms_on_random_groups() {
    use morse_orbit::groups::FiniteGroupExpr;
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(64));
    let group = arb_piece().prop_map(|p| analyze_piece(&tree_of(&p)).unwrap().target);
    runner
        .run(&(group, any::<u64>()), |(g, seed): (FiniteGroupExpr, u64)| {
            let Ok(elements) = g.enumerate(5_000) else { return Ok(()) };
            let mut rng = StdRng::seed_from_u64(seed);
            let e = g.identity();
            for _ in 0..32 {
                use rand::Rng;
                let pick = |rng: &mut StdRng| elements[rng.gen_range(0..elements.len())].clone();
                let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                let left = g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap();
                let right = g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                prop_assert_eq!(g.mul(&a, &g.inverse(&a).unwrap()).unwrap(), e.clone());
                prop_assert_eq!(g.mul(&e, &a).unwrap(), a);
            }
            Ok(())
        })
        .unwrap();
}
