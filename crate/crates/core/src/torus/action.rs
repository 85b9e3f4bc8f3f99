use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::map::{AffineTorusMap, TorusPoint};
use super::TorusError;
use crate::groups::{FiniteGroupExpr, GroupElement, GroupError, ProductLayout};

/// Right action of a finite group on `T^dim` by maps of
/// permutation-plus-translation form, stored as the recipe that built it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusAction {
    group: FiniteGroupExpr,
    dim: usize,
    recipe: Recipe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Recipe {
    Trivial,
    Cyclic { m: usize },
    Product { members: Vec<TorusAction>, layout: ProductLayout },
    ExtendTrivial { inner: Box<TorusAction>, extra: usize },
    Wreath { inner: Box<TorusAction>, m: usize },
    Table(BTreeMap<GroupElement, AffineTorusMap>),
}

/// Trivial group acting on `T^n`.
pub fn act_trivial(n: usize) -> TorusAction {
    TorusAction { group: FiniteGroupExpr::Trivial, dim: n, recipe: Recipe::Trivial }
}

/// `Z_m` acting on `T^1` by `x -> x + k/m`.
pub fn act_cyclic(m: usize) -> TorusAction {
    assert!(m >= 1, "cyclic action needs m >= 1");
    TorusAction { group: FiniteGroupExpr::cyclic(m), dim: 1, recipe: Recipe::Cyclic { m } }
}

/// Coordinatewise action of the normalized product group on the product of
/// tori. A single member is returned unchanged; no members gives `T^0`.
pub fn act_product(members: Vec<TorusAction>) -> TorusAction {
    match members.len() {
        0 => act_trivial(0),
        1 => members.into_iter().next().unwrap(),
        _ => {
            let groups: Vec<FiniteGroupExpr> = members.iter().map(|a| a.group.clone()).collect();
            let layout = ProductLayout::of_finite(&groups);
            TorusAction {
                group: FiniteGroupExpr::product(groups),
                dim: members.iter().map(|a| a.dim).sum(),
                recipe: Recipe::Product { members, layout },
            }
        }
    }
}

/// Same group acting on `T^(p+n)`, trivially on the last `n` coordinates.
pub fn act_extend_trivial(inner: TorusAction, n: usize) -> TorusAction {
    if n == 0 {
        return inner;
    }
    TorusAction {
        group: inner.group.clone(),
        dim: inner.dim + n,
        recipe: Recipe::ExtendTrivial { inner: Box::new(inner), extra: n },
    }
}

/// `G wr Z_m` acting on `T^(mp+1)`:
/// `(x_0, ..., x_{m-1}, y) . (alpha, k) = (x_k . alpha(0), ..., x_{k+m-1} . alpha(m-1), y + k/m)`
/// with block indices taken mod `m`.
pub fn act_wreath(inner: TorusAction, m: usize) -> TorusAction {
    assert!(m >= 2, "wreath action needs m >= 2");
    TorusAction {
        group: FiniteGroupExpr::wreath(inner.group.clone(), m),
        dim: m * inner.dim + 1,
        recipe: Recipe::Wreath { inner: Box::new(inner), m },
    }
}

/// Result of checking every non-identity element for a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessReport {
    pub checked: usize,
    pub violation: Option<(GroupElement, TorusPoint)>,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.violation.is_none()
    }
}

impl TorusAction {
    /// Action given by an explicit table, one map per group element.
    pub fn from_table(
        group: FiniteGroupExpr,
        dim: usize,
        entries: Vec<(GroupElement, AffineTorusMap)>,
    ) -> Result<Self, TorusError> {
        let order = group.order();
        let mut table = BTreeMap::new();
        for (g, a) in entries {
            if !group.conforms(&g) {
                return Err(TorusError::Group(GroupError::ShapeMismatch {
                    expr: group.to_string(),
                    element: g.to_string(),
                }));
            }
            if a.dim() != dim {
                return Err(TorusError::DimensionMismatch { expected: dim, found: a.dim() });
            }
            table.insert(g, a);
        }
        if num_bigint::BigUint::from(table.len()) != order {
            return Err(TorusError::InvalidMap(format!(
                "table has {} entries for a group of order {order}",
                table.len()
            )));
        }
        Ok(TorusAction { group, dim, recipe: Recipe::Table(table) })
    }

    /// All `(g, A_g)` pairs in enumeration order.
    pub fn tabulate(&self, cap: u64) -> Result<Vec<(GroupElement, AffineTorusMap)>, TorusError> {
        self.group
            .enumerate(cap)?
            .into_iter()
            .map(|g| {
                let a = self.evaluate(&g)?;
                Ok((g, a))
            })
            .collect()
    }

    /// Copy of this action as a table with the map of `g` replaced.
    pub fn with_override(&self, g: &GroupElement, map: AffineTorusMap, cap: u64) -> Result<Self, TorusError> {
        let mut entries = self.tabulate(cap)?;
        let slot = entries
            .iter_mut()
            .find(|(h, _)| h == g)
            .ok_or_else(|| TorusError::UnknownElement(g.to_string()))?;
        slot.1 = map;
        Self::from_table(self.group.clone(), self.dim, entries)
    }

    pub fn group(&self) -> &FiniteGroupExpr {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The map `A_g`.
    pub fn evaluate(&self, g: &GroupElement) -> Result<AffineTorusMap, TorusError> {
        if !self.group.conforms(g) {
            return Err(TorusError::Group(GroupError::ShapeMismatch {
                expr: self.group.to_string(),
                element: g.to_string(),
            }));
        }
        self.eval_conforming(g)
    }

    fn eval_conforming(&self, g: &GroupElement) -> Result<AffineTorusMap, TorusError> {
        match &self.recipe {
            Recipe::Trivial => Ok(AffineTorusMap::identity(self.dim)),
            Recipe::Cyclic { m } => {
                let k = match g {
                    GroupElement::Wreath { shift, .. } => *shift,
                    _ => 0,
                };
                Ok(AffineTorusMap::translation(vec![BigRational::new(BigInt::from(k), BigInt::from(*m))]))
            }
            Recipe::Product { members, layout } => {
                let parts = layout
                    .split(g)
                    .ok_or_else(|| TorusError::UnknownElement(g.to_string()))?;
                let mut acc = AffineTorusMap::identity(0);
                for (a, x) in members.iter().zip(&parts) {
                    acc = acc.direct_sum(&a.eval_conforming(x)?);
                }
                Ok(acc)
            }
            Recipe::ExtendTrivial { inner, extra } => {
                Ok(inner.eval_conforming(g)?.direct_sum(&AffineTorusMap::identity(*extra)))
            }
            Recipe::Wreath { inner, m } => {
                let GroupElement::Wreath { map, shift } = g else {
                    return Err(TorusError::UnknownElement(g.to_string()));
                };
                let p = inner.dim;
                let mut perm = Vec::with_capacity(self.dim);
                let mut trans = Vec::with_capacity(self.dim);
                for (i, alpha_i) in map.iter().enumerate() {
                    let a = inner.eval_conforming(alpha_i)?;
                    let block = (i + *shift as usize) % m;
                    perm.extend(a.perm().iter().map(|&j| block * p + j));
                    trans.extend(a.trans().iter().cloned());
                }
                perm.push(m * p);
                trans.push(BigRational::new(BigInt::from(*shift), BigInt::from(*m)));
                AffineTorusMap::new(perm, trans)
            }
            Recipe::Table(table) => table
                .get(g)
                .cloned()
                .ok_or_else(|| TorusError::UnknownElement(g.to_string())),
        }
    }

    /// Whether `A_{ab} = A_a A_b`.
    pub fn respects_product(&self, a: &GroupElement, b: &GroupElement) -> Result<bool, TorusError> {
        let ab = self.group.mul(a, b)?;
        Ok(self.evaluate(&ab)? == self.evaluate(a)?.compose(&self.evaluate(b)?)?)
    }

    /// Checks every non-identity element for a fixed point.
    pub fn is_free(&self, cap: u64) -> Result<FreenessReport, TorusError> {
        let e = self.group.identity();
        let mut checked = 0;
        for g in self.group.enumerate(cap)? {
            if g == e {
                continue;
            }
            checked += 1;
            if let Some(x) = self.evaluate(&g)?.fixed_point() {
                return Ok(FreenessReport { checked, violation: Some((g, x)) });
            }
        }
        Ok(FreenessReport { checked, violation: None })
    }

    /// Whether every element acts by a pure translation. This holds exactly
    /// when no wreath step permutes blocks of positive dimension.
    pub fn is_translation_only(&self) -> bool {
        match &self.recipe {
            Recipe::Trivial | Recipe::Cyclic { .. } => true,
            Recipe::Product { members, .. } => members.iter().all(TorusAction::is_translation_only),
            Recipe::ExtendTrivial { inner, .. } => inner.is_translation_only(),
            Recipe::Wreath { inner, .. } => inner.dim == 0,
            Recipe::Table(table) => table.values().all(AffineTorusMap::is_translation),
        }
    }
}

impl fmt::Display for TorusAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.recipe {
            Recipe::Trivial => write!(f, "trivial({})", self.dim),
            Recipe::Cyclic { m } => write!(f, "cyclic({m})"),
            Recipe::Product { members, .. } => {
                f.write_str("product(")?;
                for (i, a) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Recipe::ExtendTrivial { inner, extra } => write!(f, "extend({inner}, {extra})"),
            Recipe::Wreath { inner, m } => write!(f, "wreath({inner}, {m})"),
            Recipe::Table(table) => write!(f, "table({} maps on T^{})", table.len(), self.dim),
        }
    }
}
