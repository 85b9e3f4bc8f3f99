use super::{FiniteGroupExpr, GroupElement, GroupError, SourceGroupExpr};

/// Homomorphism from a source group onto a finite group, determined by the
/// shapes of the two expressions: `Z` factors are killed, products map
/// componentwise and `S wr_m Z -> G wr Z_m` sends `(xi, k)` to
/// `(lambda o xi, k mod m)`.
///
/// Inside a product the `Z` factors have no counterpart on the target side;
/// the remaining factors are matched in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralHom {
    source: SourceGroupExpr,
    target: FiniteGroupExpr,
}

enum ProductMatch<'a> {
    /// target components, one per non-`Z` source component
    Zip(&'a [FiniteGroupExpr]),
    /// the only non-`Z` source component maps onto the whole target
    Whole,
    /// every source component is `Z` (or trivial)
    Empty,
}

fn match_product<'a>(kept: usize, target: &'a FiniteGroupExpr) -> Option<ProductMatch<'a>> {
    match target {
        FiniteGroupExpr::Product(items) if items.len() == kept => Some(ProductMatch::Zip(items)),
        _ if kept == 1 => Some(ProductMatch::Whole),
        FiniteGroupExpr::Trivial if kept == 0 => Some(ProductMatch::Empty),
        _ => None,
    }
}

fn compatible(source: &SourceGroupExpr, target: &FiniteGroupExpr) -> bool {
    use SourceGroupExpr as S;
    match (source, target) {
        (S::Trivial | S::FreeZ, FiniteGroupExpr::Trivial) => true,
        (S::WreathOverZ { inner, m }, FiniteGroupExpr::WreathCyclic { inner: g, m: n }) => {
            m == n && compatible(inner, g)
        }
        (S::Product(parts), _) => {
            let kept: Vec<&SourceGroupExpr> = parts.iter().filter(|p| **p != S::FreeZ).collect();
            match match_product(kept.len(), target) {
                Some(ProductMatch::Zip(items)) => kept.iter().zip(items).all(|(s, g)| compatible(s, g)),
                Some(ProductMatch::Whole) => compatible(kept[0], target),
                Some(ProductMatch::Empty) => true,
                None => false,
            }
        }
        _ => false,
    }
}

fn eval(source: &SourceGroupExpr, target: &FiniteGroupExpr, a: &GroupElement) -> Option<GroupElement> {
    use SourceGroupExpr as S;
    match (source, a) {
        (S::Trivial, GroupElement::Unit) | (S::FreeZ, GroupElement::Int(_)) => Some(GroupElement::Unit),
        (S::WreathOverZ { inner, m }, GroupElement::Wreath { map, shift }) => {
            let FiniteGroupExpr::WreathCyclic { inner: g, .. } = target else {
                return None;
            };
            let map = map.iter().map(|x| eval(inner, g, x)).collect::<Option<Vec<_>>>()?;
            Some(GroupElement::Wreath { map, shift: shift.rem_euclid(*m as i64) })
        }
        (S::Product(parts), GroupElement::Tuple(items)) if parts.len() == items.len() => {
            let kept: Vec<(&SourceGroupExpr, &GroupElement)> =
                parts.iter().zip(items).filter(|(p, _)| **p != S::FreeZ).collect();
            match match_product(kept.len(), target)? {
                ProductMatch::Zip(targets) => Some(GroupElement::Tuple(
                    kept.iter()
                        .zip(targets)
                        .map(|((s, x), g)| eval(s, g, x))
                        .collect::<Option<Vec<_>>>()?,
                )),
                ProductMatch::Whole => eval(kept[0].0, target, kept[0].1),
                ProductMatch::Empty => Some(GroupElement::Unit),
            }
        }
        _ => None,
    }
}

/// Set-theoretic right inverse: `Z` coordinates are set to 0 and residues
/// are lifted to their representatives in `0..m`.
fn lift(source: &SourceGroupExpr, target: &FiniteGroupExpr, g: &GroupElement) -> Option<GroupElement> {
    use SourceGroupExpr as S;
    match (source, g) {
        (S::Trivial, GroupElement::Unit) => Some(GroupElement::Unit),
        (S::FreeZ, GroupElement::Unit) => Some(GroupElement::Int(0)),
        (S::WreathOverZ { inner, .. }, GroupElement::Wreath { map, shift }) => {
            let FiniteGroupExpr::WreathCyclic { inner: t, .. } = target else {
                return None;
            };
            let map = map.iter().map(|x| lift(inner, t, x)).collect::<Option<Vec<_>>>()?;
            Some(GroupElement::Wreath { map, shift: *shift })
        }
        (S::Product(parts), _) => {
            let kept = parts.iter().filter(|p| **p != S::FreeZ).count();
            let mut lifted: Vec<Option<GroupElement>> = match match_product(kept, target)? {
                ProductMatch::Zip(targets) => {
                    let GroupElement::Tuple(items) = g else { return None };
                    let kept_parts = parts.iter().filter(|p| **p != S::FreeZ);
                    kept_parts
                        .zip(targets.iter().zip(items))
                        .map(|(s, (t, x))| lift(s, t, x))
                        .collect()
                }
                ProductMatch::Whole => {
                    let s = parts.iter().find(|p| **p != S::FreeZ)?;
                    vec![lift(s, target, g)]
                }
                ProductMatch::Empty => Vec::new(),
            };
            lifted.reverse();
            let items = parts
                .iter()
                .map(|p| if *p == S::FreeZ { Some(GroupElement::Int(0)) } else { lifted.pop()? })
                .collect::<Option<Vec<_>>>()?;
            Some(GroupElement::Tuple(items))
        }
        _ => None,
    }
}

impl StructuralHom {
    pub fn new(source: SourceGroupExpr, target: FiniteGroupExpr) -> Result<Self, GroupError> {
        if compatible(&source, &target) {
            Ok(StructuralHom { source, target })
        } else {
            Err(GroupError::IncompatibleHom {
                source_expr: source.to_string(),
                target_expr: target.to_string(),
            })
        }
    }

    pub fn source(&self) -> &SourceGroupExpr {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroupExpr {
        &self.target
    }

    /// Applies the homomorphism.
    pub fn eval(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        let mismatch = || GroupError::ShapeMismatch { expr: self.source.to_string(), element: a.to_string() };
        if !self.source.conforms(a) {
            return Err(mismatch());
        }
        eval(&self.source, &self.target, a).ok_or_else(mismatch)
    }

    /// A preimage of `g`; `eval(section(g)) == g`.
    pub fn section(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        let mismatch = || GroupError::ShapeMismatch { expr: self.target.to_string(), element: g.to_string() };
        if !self.target.conforms(g) {
            return Err(mismatch());
        }
        lift(&self.source, &self.target, g).ok_or_else(mismatch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaKind {
    /// the `Z` factor generated by the Dehn twist along the root cylinder
    FreeFactor,
    /// the shift `k` of the top `wr_m Z` factor
    WreathShift,
}

/// Position of the distinguished integer coordinate in a piece's source
/// group: a top-level product component, or the whole expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EtaLocator {
    pub component: Option<usize>,
    pub kind: EtaKind,
}

impl EtaLocator {
    fn locate<'a>(&self, source: &'a SourceGroupExpr) -> Result<&'a SourceGroupExpr, GroupError> {
        let expr = match (self.component, source) {
            (None, s) => s,
            (Some(i), SourceGroupExpr::Product(parts)) => parts.get(i).ok_or(GroupError::NotAPieceGroup)?,
            _ => return Err(GroupError::NotAPieceGroup),
        };
        match (self.kind, expr) {
            (EtaKind::FreeFactor, SourceGroupExpr::FreeZ)
            | (EtaKind::WreathShift, SourceGroupExpr::WreathOverZ { .. }) => Ok(expr),
            _ => Err(GroupError::NotAPieceGroup),
        }
    }

    /// Element with a `1` in the distinguished coordinate and the identity
    /// everywhere else. It is mapped to `1` by [`eta`].
    pub fn generator(&self, source: &SourceGroupExpr) -> Result<GroupElement, GroupError> {
        let expr = self.locate(source)?;
        let unit = match expr {
            SourceGroupExpr::FreeZ => GroupElement::Int(1),
            SourceGroupExpr::WreathOverZ { inner, m } => GroupElement::Wreath {
                map: vec![inner.identity(); *m],
                shift: 1,
            },
            _ => unreachable!(),
        };
        Ok(match (self.component, source.identity()) {
            (Some(i), GroupElement::Tuple(mut items)) => {
                items[i] = unit;
                GroupElement::Tuple(items)
            }
            _ => unit,
        })
    }
}

/// Projection of a piece group onto its distinguished integer coordinate.
pub fn eta(source: &SourceGroupExpr, locator: &EtaLocator, a: &GroupElement) -> Result<i64, GroupError> {
    locator.locate(source)?;
    if !source.conforms(a) {
        return Err(GroupError::ShapeMismatch { expr: source.to_string(), element: a.to_string() });
    }
    let coord = match (locator.component, a) {
        (None, x) => x,
        (Some(i), GroupElement::Tuple(items)) => &items[i],
        _ => return Err(GroupError::NotAPieceGroup),
    };
    match coord {
        GroupElement::Int(k) => Ok(*k),
        GroupElement::Wreath { shift, .. } => Ok(*shift),
        _ => Err(GroupError::NotAPieceGroup),
    }
}
