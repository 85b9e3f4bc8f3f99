//! The group of lifts of a free torus action to `R^p`, and its first homology.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::action::TorusAction;
use super::map::AffineTorusMap;
use super::snf::{smith_normal_form, IntMatrix};
use super::TorusError;
use crate::groups::{FiniteGroupExpr, GroupElement};

/// `(g, z)` stands for the affine map `x -> x . lift(A_g) + z` of `R^p`, where
/// `lift(A_g)` uses the translation representatives in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrystalElement {
    pub g: usize,
    pub offset: Vec<i64>,
}

/// Extension `1 -> Z^p -> Pi -> G -> 1`; the fundamental group of
/// `T^p / G` when the action is free.
#[derive(Debug, Clone)]
pub struct CrystalGroup {
    dim: usize,
    group: FiniteGroupExpr,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    maps: Vec<AffineTorusMap>,
    identity: usize,
}

/// `Z^rank + Z_{t_1} + ... ` with `t_1 | t_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Builds the lift group after certifying that the action is free and that
/// it respects products with every generator.
pub fn pi1_presentation(action: &TorusAction, cap: u64) -> Result<CrystalGroup, TorusError> {
    let report = action.is_free(cap)?;
    if let Some((g, x)) = report.violation {
        return Err(TorusError::NotFree { element: g.to_string(), witness: x.to_string() });
    }
    let elements = action.group().enumerate(cap)?;
    let maps = elements.iter().map(|g| action.evaluate(g)).collect::<Result<Vec<_>, _>>()?;
    let index: HashMap<GroupElement, usize> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let identity = index[&action.group().identity()];
    if !maps[identity].is_identity() {
        return Err(TorusError::InvalidMap("the identity does not act trivially".into()));
    }
    for s in action.group().generators() {
        let ms = &maps[index[&s]];
        for (g, mg) in elements.iter().zip(&maps) {
            let gs = action.group().mul(g, &s)?;
            if mg.compose(ms)? != maps[index[&gs]] {
                return Err(TorusError::InvalidMap(format!("the action does not respect the product {g} * {s}")));
            }
        }
    }
    Ok(CrystalGroup { dim: action.dim(), group: action.group().clone(), elements, index, maps, identity })
}

impl CrystalGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &FiniteGroupExpr {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, g: usize) -> &GroupElement {
        &self.elements[g]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn map(&self, g: usize) -> &AffineTorusMap {
        &self.maps[g]
    }

    pub fn identity(&self) -> CrystalElement {
        CrystalElement { g: self.identity, offset: vec![0; self.dim] }
    }

    pub fn lift(&self, g: usize) -> CrystalElement {
        CrystalElement { g, offset: vec![0; self.dim] }
    }

    /// Deck translation by the lattice vector `z`.
    pub fn lattice(&self, z: Vec<i64>) -> CrystalElement {
        assert_eq!(z.len(), self.dim);
        CrystalElement { g: self.identity, offset: z }
    }

    fn product_index(&self, g: usize, h: usize) -> usize {
        let gh = self.group.mul(&self.elements[g], &self.elements[h]).expect("elements conform");
        self.index[&gh]
    }

    /// Integer carry `c(g, h)` with `lift(g) lift(h) = (e, c(g, h)) lift(gh)`
    /// read as maps on the right.
    pub fn carry(&self, g: usize, h: usize) -> Vec<i64> {
        let gh = self.product_index(g, h);
        let (ag, ah, agh) = (&self.maps[g], &self.maps[h], &self.maps[gh]);
        (0..self.dim)
            .map(|i| {
                let c = &ag.trans()[ah.perm()[i]] + &ah.trans()[i] - &agh.trans()[i];
                debug_assert!(c.is_integer());
                i64::try_from(c.to_integer()).expect("carry is 0 or 1")
            })
            .collect()
    }

    /// `(g, z)(h, w) = (gh, z o perm_h + c(g, h) + w)`.
    pub fn mul(&self, a: &CrystalElement, b: &CrystalElement) -> CrystalElement {
        let c = self.carry(a.g, b.g);
        let perm = self.maps[b.g].perm();
        let offset = (0..self.dim).map(|i| a.offset[perm[i]] + c[i] + b.offset[i]).collect();
        CrystalElement { g: self.product_index(a.g, b.g), offset }
    }

    pub fn inverse(&self, a: &CrystalElement) -> CrystalElement {
        let inv = self.group.inverse(&self.elements[a.g]).expect("elements conform");
        let gi = self.index[&inv];
        let c = self.carry(a.g, gi);
        let perm = self.maps[gi].perm();
        let offset = (0..self.dim).map(|i| -a.offset[perm[i]] - c[i]).collect();
        CrystalElement { g: gi, offset }
    }

    /// Action on `R^p`: `(x . (g, z))_i = x_{perm_g(i)} + t_g(i) + z_i`.
    pub fn apply(&self, a: &CrystalElement, x: &[BigRational]) -> Vec<BigRational> {
        let m = &self.maps[a.g];
        (0..self.dim)
            .map(|i| &x[m.perm()[i]] + &m.trans()[i] + BigRational::from_integer(BigInt::from(a.offset[i])))
            .collect()
    }

    /// Abelianization of the lift group.
    ///
    /// Generators are the lifts of a generating set `S` of `G` and the lattice
    /// basis `e_i`. A spanning tree of the Cayley graph of `(G, S)` expresses
    /// every lift in these generators; each remaining Cayley edge and each
    /// conjugation `e_j = e_{perm_s^-1(j)}` contributes a relation.
    pub fn homology_h1(&self) -> Homology {
        let gens: Vec<usize> = self.group.generators().iter().map(|s| self.index[s]).collect();
        let cols = gens.len() + self.dim;
        let lattice_col = |i: usize| gens.len() + i;
        let mut rows: HashSet<Vec<i64>> = HashSet::new();
        let mut push = |row: Vec<i64>| {
            if row.iter().any(|&x| x != 0) {
                rows.insert(row);
            }
        };

        let mut word: Vec<Option<Vec<i64>>> = vec![None; self.order()];
        word[self.identity] = Some(vec![0; cols]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(g) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let gs = self.product_index(g, s);
                let mut v = word[g].clone().unwrap();
                v[k] += 1;
                for (i, c) in self.carry(g, s).into_iter().enumerate() {
                    v[lattice_col(i)] -= c;
                }
                match &word[gs] {
                    None => {
                        word[gs] = Some(v);
                        queue.push_back(gs);
                    }
                    Some(w) => push(v.iter().zip(w).map(|(a, b)| a - b).collect()),
                }
            }
        }
        for &s in &gens {
            let perm = self.maps[s].perm();
            for (i, &j) in perm.iter().enumerate() {
                // e_j is conjugated to e_i where perm(i) = j
                let mut row = vec![0; cols];
                row[lattice_col(j)] += 1;
                row[lattice_col(i)] -= 1;
                push(row);
            }
        }

        let mut rows: Vec<Vec<i64>> = rows.into_iter().collect();
        rows.sort();
        let matrix = IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let factors = smith_normal_form(&matrix);
        Homology {
            rank: cols - factors.len(),
            torsion: factors.into_iter().filter(|d| !d.is_one() && !d.is_zero()).collect(),
        }
    }
}
