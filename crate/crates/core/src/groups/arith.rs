use super::{GroupElement, GroupError, Node, Shape};

fn mismatch<E: Shape>(expr: &E, a: &GroupElement) -> GroupError {
    GroupError::ShapeMismatch { expr: expr.to_string(), element: a.to_string() }
}

pub(super) fn identity<E: Shape>(expr: &E) -> GroupElement {
    match expr.node() {
        Node::Trivial => GroupElement::Unit,
        Node::Integer => GroupElement::Int(0),
        Node::Product(parts) => GroupElement::Tuple(parts.iter().map(identity).collect()),
        Node::Wreath { inner, m, .. } => GroupElement::Wreath {
            map: vec![identity(inner); m],
            shift: 0,
        },
    }
}

pub(super) fn conforms<E: Shape>(expr: &E, a: &GroupElement) -> bool {
    match (expr.node(), a) {
        (Node::Trivial, GroupElement::Unit) => true,
        (Node::Integer, GroupElement::Int(_)) => true,
        (Node::Product(parts), GroupElement::Tuple(items)) => {
            parts.len() == items.len() && parts.iter().zip(items).all(|(p, x)| conforms(p, x))
        }
        (Node::Wreath { inner, m, cyclic }, GroupElement::Wreath { map, shift }) => {
            map.len() == m
                && (!cyclic || (0..m as i64).contains(shift))
                && map.iter().all(|x| conforms(inner, x))
        }
        _ => false,
    }
}

/// `(alpha, a)(beta, b) = (gamma, a + b)` with
/// `gamma(s) = alpha(s + b mod m) * beta(s)`; componentwise on products.
pub(super) fn mul<E: Shape>(expr: &E, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
    match (expr.node(), a, b) {
        (Node::Trivial, GroupElement::Unit, GroupElement::Unit) => Ok(GroupElement::Unit),
        (Node::Integer, GroupElement::Int(x), GroupElement::Int(y)) => Ok(GroupElement::Int(x + y)),
        (Node::Product(parts), GroupElement::Tuple(xs), GroupElement::Tuple(ys))
            if parts.len() == xs.len() && parts.len() == ys.len() =>
        {
            let items = parts
                .iter()
                .zip(xs.iter().zip(ys))
                .map(|(p, (x, y))| mul(p, x, y))
                .collect::<Result<_, _>>()?;
            Ok(GroupElement::Tuple(items))
        }
        (
            Node::Wreath { inner, m, cyclic },
            GroupElement::Wreath { map: alpha, shift: ka },
            GroupElement::Wreath { map: beta, shift: kb },
        ) if alpha.len() == m && beta.len() == m => {
            let mi = m as i64;
            let map = (0..m)
                .map(|s| {
                    let src = (s as i64 + kb).rem_euclid(mi) as usize;
                    mul(inner, &alpha[src], &beta[s])
                })
                .collect::<Result<_, _>>()?;
            let shift = if cyclic { (ka + kb).rem_euclid(mi) } else { ka + kb };
            Ok(GroupElement::Wreath { map, shift })
        }
        _ => Err(if conforms(expr, a) { mismatch(expr, b) } else { mismatch(expr, a) }),
    }
}

/// `(alpha, a)^-1 = (beta, -a)` with `beta(s) = alpha(s - a mod m)^-1`.
pub(super) fn inverse<E: Shape>(expr: &E, a: &GroupElement) -> Result<GroupElement, GroupError> {
    match (expr.node(), a) {
        (Node::Trivial, GroupElement::Unit) => Ok(GroupElement::Unit),
        (Node::Integer, GroupElement::Int(x)) => Ok(GroupElement::Int(-x)),
        (Node::Product(parts), GroupElement::Tuple(xs)) if parts.len() == xs.len() => Ok(GroupElement::Tuple(
            parts.iter().zip(xs).map(|(p, x)| inverse(p, x)).collect::<Result<_, _>>()?,
        )),
        (Node::Wreath { inner, m, cyclic }, GroupElement::Wreath { map, shift }) if map.len() == m => {
            let mi = m as i64;
            let inv = (0..m)
                .map(|s| inverse(inner, &map[(s as i64 - shift).rem_euclid(mi) as usize]))
                .collect::<Result<_, _>>()?;
            let shift = if cyclic { (-shift).rem_euclid(mi) } else { -shift };
            Ok(GroupElement::Wreath { map: inv, shift })
        }
        _ => Err(mismatch(expr, a)),
    }
}

pub(super) fn pow<E: Shape>(expr: &E, a: &GroupElement, mut n: u64) -> Result<GroupElement, GroupError> {
    let mut base = a.clone();
    let mut acc = identity(expr);
    if !conforms(expr, a) {
        return Err(mismatch(expr, a));
    }
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(expr, &acc, &base)?;
        }
        base = mul(expr, &base, &base)?;
        n >>= 1;
    }
    Ok(acc)
}

/// Cartesian enumeration; the last coordinate varies fastest.
pub(super) fn enumerate<E: Shape>(expr: &E) -> Vec<GroupElement> {
    match expr.node() {
        Node::Trivial => vec![GroupElement::Unit],
        Node::Integer => unreachable!("infinite groups are never enumerated"),
        Node::Product(parts) => {
            let lists: Vec<Vec<GroupElement>> = parts.iter().map(enumerate).collect();
            cartesian(&lists).into_iter().map(GroupElement::Tuple).collect()
        }
        Node::Wreath { inner, m, .. } => {
            let inner_elems = enumerate(inner);
            let lists = vec![inner_elems; m];
            let maps = cartesian(&lists);
            let mut out = Vec::with_capacity(maps.len() * m);
            for shift in 0..m as i64 {
                for map in &maps {
                    out.push(GroupElement::Wreath { map: map.clone(), shift });
                }
            }
            out
        }
    }
}

fn cartesian(lists: &[Vec<GroupElement>]) -> Vec<Vec<GroupElement>> {
    let mut acc: Vec<Vec<GroupElement>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for x in list {
                let mut row = prefix.clone();
                row.push(x.clone());
                next.push(row);
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use crate::groups::{FiniteGroupExpr, GroupElement, SourceGroupExpr};
    use GroupElement::{Int, Unit};

    fn wz(map: &[i64], shift: i64) -> GroupElement {
        GroupElement::Wreath { map: map.iter().map(|&x| Int(x)).collect(), shift }
    }

    #[test]
    fn worked_wreath_product() {
        let g = SourceGroupExpr::wreath(SourceGroupExpr::FreeZ, 2);
        let c = g.mul(&wz(&[1, 0], 1), &wz(&[2, 5], 1)).unwrap();
        assert_eq!(c, wz(&[2, 6], 2));
    }

    #[test]
    fn worked_inverse() {
        let g = SourceGroupExpr::wreath(SourceGroupExpr::FreeZ, 2);
        assert_eq!(g.inverse(&wz(&[1, 0], 1)).unwrap(), wz(&[0, -1], -1));
        assert_eq!(SourceGroupExpr::FreeZ.inverse(&Int(7)).unwrap(), Int(-7));
    }

    #[test]
    fn cyclic_residues_add() {
        let z3 = FiniteGroupExpr::cyclic(3);
        let c = z3.mul(&GroupElement::cyclic(1, 3), &GroupElement::cyclic(2, 3)).unwrap();
        assert_eq!(c, GroupElement::cyclic(0, 3));
        assert_eq!(c, z3.identity());
    }

    #[test]
    fn identity_is_neutral_and_self_inverse() {
        let g = FiniteGroupExpr::wreath(FiniteGroupExpr::cyclic(2), 2);
        let e = g.identity();
        assert_eq!(g.inverse(&e).unwrap(), e);
        for x in g.enumerate(100).unwrap() {
            assert_eq!(g.mul(&e, &x).unwrap(), x);
            assert_eq!(g.mul(&x, &e).unwrap(), x);
        }
    }

    #[test]
    fn orders_match_enumeration() {
        let cases = [
            (FiniteGroupExpr::cyclic(2), 2u64),
            (FiniteGroupExpr::wreath(FiniteGroupExpr::cyclic(2), 2), 8),
            (FiniteGroupExpr::Product(vec![FiniteGroupExpr::cyclic(2), FiniteGroupExpr::cyclic(3)]), 6),
            (FiniteGroupExpr::Trivial, 1),
        ];
        for (g, n) in cases {
            assert_eq!(g.order(), n.into());
            let all = g.enumerate(1000).unwrap();
            assert_eq!(all.len() as u64, n);
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len() as u64, n);
        }
        assert_eq!(FiniteGroupExpr::Trivial.enumerate(1).unwrap(), vec![Unit]);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let z2 = FiniteGroupExpr::cyclic(2);
        assert!(z2.mul(&Unit, &z2.identity()).is_err());
        assert!(SourceGroupExpr::FreeZ.inverse(&Unit).is_err());
        // cyclic shifts must be reduced
        assert!(!z2.conforms(&GroupElement::Wreath { map: vec![Unit, Unit], shift: 3 }));
    }

    #[test]
    fn cap_is_enforced() {
        let g = FiniteGroupExpr::wreath(FiniteGroupExpr::cyclic(2), 2);
        assert!(g.enumerate(7).is_err());
        assert_eq!(g.enumerate(8).unwrap().len(), 8);
    }

    #[test]
    fn wreath_of_z2_is_closed() {
        let g = FiniteGroupExpr::wreath(FiniteGroupExpr::cyclic(2), 2);
        let all: std::collections::HashSet<_> = g.enumerate(100).unwrap().into_iter().collect();
        for a in &all {
            for b in &all {
                assert!(all.contains(&g.mul(a, b).unwrap()));
            }
        }
    }

    #[test]
    fn wreath_of_z2_is_dihedral() {
        // D_4: element orders 1, 2 (five times), 4 (twice); abelianization Z_2 x Z_2
        let g = FiniteGroupExpr::wreath(FiniteGroupExpr::cyclic(2), 2);
        let (_, table) = g.table(100).unwrap();
        let hist: Vec<_> = table.order_histogram().into_iter().collect();
        assert_eq!(hist, vec![(1, 1), (2, 5), (4, 2)]);
        assert_eq!(g.abelianization(100).unwrap(), vec![2, 2]);
    }
}
