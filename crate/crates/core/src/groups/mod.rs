//! Source groups built from `Z`, products and `S wr_m Z`, finite target groups
//! built from products and `G wr Z_m`, their elements, and the structural
//! homomorphisms between them.

mod arith;
mod hom;
mod syntax;
pub mod table;

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

pub use hom::{eta, EtaKind, EtaLocator, StructuralHom};
pub use table::MultiplicationTable;

/// Order cap applied to enumeration when the caller does not choose one.
pub const DEFAULT_ORDER_CAP: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element {element} does not conform to {expr}")]
    ShapeMismatch { expr: String, element: String },
    #[error("group of order {order} exceeds the cap {cap}")]
    CapExceeded { order: BigUint, cap: u64 },
    #[error("no distinguished integer coordinate at this locator")]
    NotAPieceGroup,
    #[error("{source_expr} and {target_expr} are not shape-compatible")]
    IncompatibleHom { source_expr: String, target_expr: String },
    #[error("invalid expression: {0}")]
    InvalidExpr(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SourceGroupExpr {
    Trivial,
    FreeZ,
    Product(Vec<SourceGroupExpr>),
    WreathOverZ { inner: Box<SourceGroupExpr>, m: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FiniteGroupExpr {
    Trivial,
    Product(Vec<FiniteGroupExpr>),
    /// `inner wr Z_m`; `WreathCyclic(Trivial, m)` is the cyclic group `Z_m`.
    WreathCyclic { inner: Box<FiniteGroupExpr>, m: usize },
}

/// Structured group element mirroring its expression.
///
/// Wreath elements carry a total map `Z_m -> inner` as an array of length `m`
/// and a shift; for the cyclic wreath the shift is kept reduced into `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Unit,
    Int(i64),
    Tuple(Vec<GroupElement>),
    Wreath { map: Vec<GroupElement>, shift: i64 },
}

impl GroupElement {
    pub fn cyclic(k: i64, m: usize) -> Self {
        GroupElement::Wreath {
            map: vec![GroupElement::Unit; m],
            shift: k.rem_euclid(m as i64),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Unit => f.write_str("e"),
            GroupElement::Int(k) => write!(f, "{k}"),
            GroupElement::Tuple(items) => {
                f.write_str("(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            GroupElement::Wreath { map, shift } => {
                f.write_str("[")?;
                for (i, x) in map.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "; {shift}]")
            }
        }
    }
}

/// Uniform view of both expression kinds so that arithmetic is written once.
pub(crate) enum Node<'a, E> {
    Trivial,
    Integer,
    Product(&'a [E]),
    Wreath { inner: &'a E, m: usize, cyclic: bool },
}

pub(crate) trait Shape: Sized + fmt::Display {
    fn node(&self) -> Node<'_, Self>;
}

impl Shape for SourceGroupExpr {
    fn node(&self) -> Node<'_, Self> {
        match self {
            SourceGroupExpr::Trivial => Node::Trivial,
            SourceGroupExpr::FreeZ => Node::Integer,
            SourceGroupExpr::Product(parts) => Node::Product(parts),
            SourceGroupExpr::WreathOverZ { inner, m } => Node::Wreath { inner, m: *m, cyclic: false },
        }
    }
}

impl Shape for FiniteGroupExpr {
    fn node(&self) -> Node<'_, Self> {
        match self {
            FiniteGroupExpr::Trivial => Node::Trivial,
            FiniteGroupExpr::Product(parts) => Node::Product(parts),
            FiniteGroupExpr::WreathCyclic { inner, m } => Node::Wreath { inner, m: *m, cyclic: true },
        }
    }
}

/// How a normalized product distributes its components over the parts it
/// was built from: trivial parts are dropped, product parts are spliced in
/// and a product with a single component collapses to that component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLayout {
    parts: Vec<PartShape>,
    components: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PartShape {
    Dropped,
    Spliced(usize),
    Single,
}

impl ProductLayout {
    fn of<E: Shape>(parts: &[E]) -> Self {
        let parts: Vec<PartShape> = parts
            .iter()
            .map(|p| match p.node() {
                Node::Trivial => PartShape::Dropped,
                Node::Product(items) => PartShape::Spliced(items.len()),
                _ => PartShape::Single,
            })
            .collect();
        let components = parts
            .iter()
            .map(|p| match p {
                PartShape::Dropped => 0,
                PartShape::Spliced(n) => *n,
                PartShape::Single => 1,
            })
            .sum();
        ProductLayout { parts, components }
    }

    pub fn of_finite(parts: &[FiniteGroupExpr]) -> Self {
        Self::of(parts)
    }

    pub fn of_source(parts: &[SourceGroupExpr]) -> Self {
        Self::of(parts)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Splits an element of the normalized product into one element per part.
    pub fn split(&self, element: &GroupElement) -> Option<Vec<GroupElement>> {
        let components: Vec<GroupElement> = match (self.components, element) {
            (0, GroupElement::Unit) => Vec::new(),
            (0, _) => return None,
            (1, x) => vec![x.clone()],
            (n, GroupElement::Tuple(items)) if items.len() == n => items.clone(),
            _ => return None,
        };
        let mut rest = components.into_iter();
        let mut out = Vec::with_capacity(self.parts.len());
        for part in &self.parts {
            out.push(match part {
                PartShape::Dropped => GroupElement::Unit,
                PartShape::Single => rest.next()?,
                PartShape::Spliced(n) => GroupElement::Tuple(rest.by_ref().take(*n).collect()),
            });
        }
        Some(out)
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(&self, parts: Vec<GroupElement>) -> Option<GroupElement> {
        if parts.len() != self.parts.len() {
            return None;
        }
        let mut components = Vec::with_capacity(self.components);
        for (shape, x) in self.parts.iter().zip(parts) {
            match (shape, x) {
                (PartShape::Dropped, _) => {}
                (PartShape::Single, x) => components.push(x),
                (PartShape::Spliced(n), GroupElement::Tuple(items)) if items.len() == *n => {
                    components.extend(items)
                }
                _ => return None,
            }
        }
        Some(match components.len() {
            0 => GroupElement::Unit,
            1 => components.pop().unwrap(),
            _ => GroupElement::Tuple(components),
        })
    }
}

fn splice<E: Shape + Clone>(parts: Vec<E>, product: fn(Vec<E>) -> E, trivial: E) -> E {
    let mut flat = Vec::new();
    for p in parts {
        match p.node() {
            Node::Trivial => {}
            Node::Product(items) => flat.extend(items.iter().cloned()),
            _ => flat.push(p),
        }
    }
    match flat.len() {
        0 => trivial,
        1 => flat.pop().unwrap(),
        _ => product(flat),
    }
}

impl SourceGroupExpr {
    /// Normalized product (see [`ProductLayout`]).
    pub fn product(parts: Vec<SourceGroupExpr>) -> Self {
        splice(parts, SourceGroupExpr::Product, SourceGroupExpr::Trivial)
    }

    pub fn wreath(inner: SourceGroupExpr, m: usize) -> Self {
        SourceGroupExpr::WreathOverZ { inner: Box::new(inner), m }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            SourceGroupExpr::Trivial | SourceGroupExpr::FreeZ => Ok(()),
            SourceGroupExpr::Product(parts) if parts.is_empty() => {
                Err(GroupError::InvalidExpr("empty product".into()))
            }
            SourceGroupExpr::Product(parts) => parts.iter().try_for_each(|p| p.validate()),
            SourceGroupExpr::WreathOverZ { m, .. } if *m < 2 => {
                Err(GroupError::InvalidExpr(format!("wreath over Z needs m >= 2, got {m}")))
            }
            SourceGroupExpr::WreathOverZ { inner, .. } => inner.validate(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        arith::identity(self)
    }

    pub fn conforms(&self, a: &GroupElement) -> bool {
        arith::conforms(self, a)
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        arith::mul(self, a, b)
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        arith::inverse(self, a)
    }

    pub fn pow(&self, a: &GroupElement, n: u64) -> Result<GroupElement, GroupError> {
        arith::pow(self, a, n)
    }

    /// Human-oriented name, e.g. `Z x (1 wr_2 Z)`.
    pub fn pretty(&self) -> String {
        match self {
            SourceGroupExpr::Trivial => "1".into(),
            SourceGroupExpr::FreeZ => "Z".into(),
            SourceGroupExpr::Product(parts) => {
                parts.iter().map(|p| p.pretty_factor()).collect::<Vec<_>>().join(" x ")
            }
            SourceGroupExpr::WreathOverZ { inner, m } => format!("{} wr_{m} Z", inner.pretty_factor()),
        }
    }

    fn pretty_factor(&self) -> String {
        match self {
            SourceGroupExpr::Product(_) | SourceGroupExpr::WreathOverZ { .. } => format!("({})", self.pretty()),
            _ => self.pretty(),
        }
    }
}

impl FiniteGroupExpr {
    /// `Z_m`; `m = 1` gives the trivial group.
    pub fn cyclic(m: usize) -> Self {
        if m <= 1 {
            FiniteGroupExpr::Trivial
        } else {
            FiniteGroupExpr::wreath(FiniteGroupExpr::Trivial, m)
        }
    }

    pub fn wreath(inner: FiniteGroupExpr, m: usize) -> Self {
        FiniteGroupExpr::WreathCyclic { inner: Box::new(inner), m }
    }

    /// Normalized product (see [`ProductLayout`]).
    pub fn product(parts: Vec<FiniteGroupExpr>) -> Self {
        splice(parts, FiniteGroupExpr::Product, FiniteGroupExpr::Trivial)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            FiniteGroupExpr::Trivial => Ok(()),
            FiniteGroupExpr::Product(parts) if parts.is_empty() => {
                Err(GroupError::InvalidExpr("empty product".into()))
            }
            FiniteGroupExpr::Product(parts) => parts.iter().try_for_each(|p| p.validate()),
            FiniteGroupExpr::WreathCyclic { m, .. } if *m < 2 => {
                Err(GroupError::InvalidExpr(format!("cyclic wreath needs m >= 2, got {m}")))
            }
            FiniteGroupExpr::WreathCyclic { inner, .. } => inner.validate(),
        }
    }

    pub fn is_trivial_group(&self) -> bool {
        self.order().is_one()
    }

    /// `|Trivial| = 1`, products multiply, `|G wr Z_m| = |G|^m * m`.
    pub fn order(&self) -> BigUint {
        match self {
            FiniteGroupExpr::Trivial => BigUint::one(),
            FiniteGroupExpr::Product(parts) => parts.iter().map(|p| p.order()).product(),
            FiniteGroupExpr::WreathCyclic { inner, m } => inner.order().pow(*m as u32) * BigUint::from(*m),
        }
    }

    pub fn order_within(&self, cap: u64) -> Result<u64, GroupError> {
        let order = self.order();
        match u64::try_from(&order) {
            Ok(n) if n <= cap => Ok(n),
            _ => Err(GroupError::CapExceeded { order, cap }),
        }
    }

    pub fn identity(&self) -> GroupElement {
        arith::identity(self)
    }

    pub fn conforms(&self, a: &GroupElement) -> bool {
        arith::conforms(self, a)
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        arith::mul(self, a, b)
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        arith::inverse(self, a)
    }

    pub fn pow(&self, a: &GroupElement, n: u64) -> Result<GroupElement, GroupError> {
        arith::pow(self, a, n)
    }

    /// A generating set read off the expression: generators of each product
    /// factor, and for `G wr Z_m` the generators of `G` placed at position 0
    /// together with the pure shift by 1.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            FiniteGroupExpr::Trivial => Vec::new(),
            FiniteGroupExpr::Product(parts) => {
                let e = self.identity();
                let GroupElement::Tuple(base) = e else { unreachable!() };
                let mut out = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    for g in p.generators() {
                        let mut items = base.clone();
                        items[i] = g;
                        out.push(GroupElement::Tuple(items));
                    }
                }
                out
            }
            FiniteGroupExpr::WreathCyclic { inner, m } => {
                let mut out: Vec<GroupElement> = inner
                    .generators()
                    .into_iter()
                    .map(|g| {
                        let mut map = vec![inner.identity(); *m];
                        map[0] = g;
                        GroupElement::Wreath { map, shift: 0 }
                    })
                    .collect();
                out.push(GroupElement::Wreath { map: vec![inner.identity(); *m], shift: 1 });
                out
            }
        }
    }

    /// Every element exactly once, in a fixed lexicographic order.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<GroupElement>, GroupError> {
        self.order_within(cap)?;
        Ok(arith::enumerate(self))
    }

    /// Order of a single element.
    pub fn element_order(&self, a: &GroupElement) -> Result<u64, GroupError> {
        let e = self.identity();
        let mut x = a.clone();
        let mut n = 1;
        while x != e {
            x = self.mul(&x, a)?;
            n += 1;
        }
        Ok(n)
    }

    /// Multiplication table over [`enumerate`](Self::enumerate) order.
    pub fn table(&self, cap: u64) -> Result<(Vec<GroupElement>, MultiplicationTable), GroupError> {
        let elements = self.enumerate(cap)?;
        let index: std::collections::HashMap<&GroupElement, usize> =
            elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let e = index[&self.identity()];
        let mut data = Vec::with_capacity(elements.len() * elements.len());
        for a in &elements {
            for b in &elements {
                let c = self.mul(a, b)?;
                data.push(index[&c]);
            }
        }
        let table = MultiplicationTable::new(elements.len(), data, e);
        Ok((elements, table))
    }

    /// Invariant factors of `G / [G, G]`, computed from the multiplication
    /// table; trivial factors are omitted.
    pub fn abelianization(&self, cap: u64) -> Result<Vec<u64>, GroupError> {
        let (_, table) = self.table(cap)?;
        Ok(table.abelian_invariants())
    }

    /// Human-oriented name, e.g. `Z_2 x (Z_2 wr Z_3)`.
    pub fn pretty(&self) -> String {
        match self {
            FiniteGroupExpr::Trivial => "1".into(),
            FiniteGroupExpr::Product(parts) => {
                parts.iter().map(|p| p.pretty_factor()).collect::<Vec<_>>().join(" x ")
            }
            FiniteGroupExpr::WreathCyclic { inner, m } if **inner == FiniteGroupExpr::Trivial => format!("Z_{m}"),
            FiniteGroupExpr::WreathCyclic { inner, m } => format!("{} wr Z_{m}", inner.pretty_factor()),
        }
    }

    fn pretty_factor(&self) -> String {
        match self {
            FiniteGroupExpr::Product(_) => format!("({})", self.pretty()),
            FiniteGroupExpr::WreathCyclic { inner, .. } if **inner != FiniteGroupExpr::Trivial => {
                format!("({})", self.pretty())
            }
            _ => self.pretty(),
        }
    }
}
